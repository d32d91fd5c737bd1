"""Extraction of fenced code blocks from assistant replies.

Fences are triple-backtick lines with an optional info string on the opening
line. A closing fence is a line containing only backticks (three or more);
a fence-like line with trailing text inside an open block is content, which
matches how chat models emit nested or sloppy markdown. An unterminated
final fence extends to the end of the reply.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class MessageRef:
    conversation_index: int
    message_position: int  # 1-based position among assistant messages
    block_index: int

    def to_payload(self) -> dict:
        return {
            "conversation_index": self.conversation_index,
            "message_position": self.message_position,
            "block_index": self.block_index,
        }

    @classmethod
    def from_payload(cls, raw: dict) -> "MessageRef":
        return cls(
            conversation_index=raw["conversation_index"],
            message_position=raw["message_position"],
            block_index=raw["block_index"],
        )


@dataclass(frozen=True)
class CodeBlock:
    text: str
    language_hint: str | None = None
    ref: MessageRef | None = None


_OPEN_RE = re.compile(r"^\s*```(?P<info>.*)$")
_CLOSE_RE = re.compile(r"^\s*`{3,}\s*$")


def extract_code_blocks(content: str) -> list[CodeBlock]:
    """All fenced blocks in document order; blank blocks are dropped."""
    blocks: list[CodeBlock] = []
    current: list[str] | None = None
    hint: str | None = None
    for line in content.split("\n"):
        if current is None:
            m = _OPEN_RE.match(line)
            if m:
                info = m.group("info").strip()
                hint = info.split()[0] if info else None
                current = []
        elif _CLOSE_RE.match(line):
            _push(blocks, current, hint)
            current = None
        else:
            current.append(line)
    if current is not None:  # unterminated trailing fence
        _push(blocks, current, hint)
    return blocks


def _push(blocks: list[CodeBlock], lines: list[str], hint: str | None) -> None:
    text = "\n".join(lines)
    if text.strip():
        blocks.append(CodeBlock(text=text, language_hint=hint))


def with_refs(
    blocks: list[CodeBlock], conversation_index: int, message_position: int
) -> tuple[CodeBlock, ...]:
    return tuple(
        CodeBlock(b.text, b.language_hint, MessageRef(conversation_index, message_position, i))
        for i, b in enumerate(blocks)
    )
