"""Conversation state: sessions, strict student/assistant alternation,
message limits, and resets.

This module is pure state mechanics. Provider calls, event logging, and
shadow grading are orchestrated by `promptprog.core.Platform`, which is the
entry point implementing the full post-message contract.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field

from . import blocks
from .corpus import Problem
from .errors import PromptProgError
from .providers import ASSISTANT, STUDENT, ProviderRequest

# Normative system-prompt template; {LANG} is the only substitution.
SYSTEM_PROMPT_TEMPLATE = (
    "You are assisting a student who must produce {LANG} code by prompting you. "
    "Reply with {LANG} code in fenced code blocks. "
    "Do not include any test code or a main function. "
    "Do not include code that prints or reads unless the task requires it."
)

CLOSED_NONE = "none"
CLOSED_RESET = "reset"
CLOSED_LIMIT = "limit"
CLOSED_SOLVED = "solved"


class LimitReached(PromptProgError):
    code = "LIMIT_REACHED"


class EmptyMessage(PromptProgError):
    code = "EMPTY_MESSAGE"


class UnknownSession(PromptProgError):
    code = "UNKNOWN_SESSION"


def build_system_prompt(problem: Problem) -> str:
    return SYSTEM_PROMPT_TEMPLATE.replace("{LANG}", problem.language)


@dataclass
class Message:
    role: str
    content: str
    position: int  # 1-based among messages of the same role in the conversation
    timestamp: float
    code_blocks: tuple[blocks.CodeBlock, ...] = ()

    @property
    def char_length(self) -> int:
        return len(self.content)


@dataclass
class Conversation:
    index: int
    messages: list[Message] = field(default_factory=list)
    closed_by: str = CLOSED_NONE

    def count(self, role: str) -> int:
        return sum(1 for m in self.messages if m.role == role)

    @property
    def student_count(self) -> int:
        return self.count(STUDENT)


@dataclass
class Session:
    session_id: str
    student_id: str
    problem_id: str
    conversations: list[Conversation]
    run_counter: int = 0
    solved: bool = False
    created_at: float = 0.0

    @property
    def active(self) -> Conversation:
        return self.conversations[-1]


def new_session(student_id: str, problem_id: str, now: float | None = None) -> Session:
    return Session(
        session_id=uuid.uuid4().hex,
        student_id=student_id,
        problem_id=problem_id,
        conversations=[Conversation(index=0)],
        created_at=time.time() if now is None else now,
    )


def limit_state(session: Session, problem: Problem) -> dict:
    return {"used": session.active.student_count, "max": problem.message_limit}


def append_student_message(
    session: Session, problem: Problem, content: str, now: float
) -> Message:
    """Validates limit and alternation, then appends the student turn."""
    if not content.strip():
        raise EmptyMessage("message is empty")
    conv = session.active
    if conv.student_count >= problem.message_limit:
        raise LimitReached(
            f"conversation already has {problem.message_limit} student messages; reset to continue"
        )
    if conv.messages and conv.messages[-1].role == STUDENT:
        raise PromptProgError("alternation violated: student turn already pending")
    msg = Message(
        role=STUDENT, content=content, position=conv.student_count + 1, timestamp=now
    )
    conv.messages.append(msg)
    return msg


def rollback_student_message(session: Session) -> Message:
    """Removes a dangling student turn after a provider failure."""
    conv = session.active
    if not conv.messages or conv.messages[-1].role != STUDENT:
        raise PromptProgError("nothing to roll back")
    return conv.messages.pop()


def append_assistant_message(session: Session, content: str, now: float) -> Message:
    conv = session.active
    if not conv.messages or conv.messages[-1].role != STUDENT:
        raise PromptProgError("alternation violated: no student turn to answer")
    position = conv.count(ASSISTANT) + 1
    extracted = blocks.extract_code_blocks(content)
    msg = Message(
        role=ASSISTANT,
        content=content,
        position=position,
        timestamp=now,
        code_blocks=blocks.with_refs(extracted, conv.index, position),
    )
    conv.messages.append(msg)
    return msg


def provider_request(problem: Problem, session: Session) -> ProviderRequest:
    """Full active-conversation history; closed conversations never leak in."""
    history = tuple((m.role, m.content) for m in session.active.messages)
    return ProviderRequest(
        system_prompt=build_system_prompt(problem),
        history=history,
        problem_id=problem.id,
    )


def reset_conversation(session: Session, problem: Problem) -> Conversation:
    """Closes the active conversation and opens a fresh one. Resetting an
    empty conversation still opens a new record so indices stay monotone."""
    conv = session.active
    if conv.closed_by == CLOSED_NONE:
        conv.closed_by = (
            CLOSED_LIMIT if conv.student_count >= problem.message_limit else CLOSED_RESET
        )
    fresh = Conversation(index=conv.index + 1)
    session.conversations.append(fresh)
    return fresh
