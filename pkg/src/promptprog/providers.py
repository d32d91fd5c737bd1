"""Chat-completion providers.

Two implementations of one interface: an HTTP provider speaking the common
chat-completions wire format, and a scripted provider that replays canned
replies for tests, demos, and offline grading rehearsals. Requests always
carry the full history of the active conversation plus one system prompt.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from .errors import PromptProgError

API_KEY_ENV = "PROMPTPROG_API_KEY"

STUDENT = "student"
ASSISTANT = "assistant"


class ProviderFailure(PromptProgError):
    code = "PROVIDER_FAILURE"


class FixtureMiss(PromptProgError):
    code = "FIXTURE_MISS"


@dataclass(frozen=True)
class ProviderRequest:
    system_prompt: str
    history: tuple[tuple[str, str], ...]  # (role, content) in conversation order
    problem_id: str  # lets the scripted provider key replies per problem


@dataclass(frozen=True)
class ProviderReply:
    content: str
    provider_meta: str = ""


class ChatProvider(Protocol):
    def chat(self, req: ProviderRequest) -> ProviderReply:
        ...


def _check_request(req: ProviderRequest) -> None:
    if not req.history:
        raise ProviderFailure("empty history")
    if req.history[-1][0] != STUDENT:
        raise ProviderFailure("history must end with a student turn")


def content_key(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ScriptedProvider:
    """Deterministic replay from a fixture: entries keyed by
    (problem_id, turn_index) or (problem_id, sha256 of the student message).
    Hash entries take precedence over turn entries."""

    def __init__(self, entries: list[dict]):
        self._by_turn: dict[tuple[str, int], str] = {}
        self._by_hash: dict[tuple[str, str], str] = {}
        for i, e in enumerate(entries):
            keys = set(e)
            if not keys <= {"problem_id", "turn_index", "content_sha256", "reply_text"}:
                raise FixtureMiss(f"fixture entry {i}: unknown keys {sorted(keys)}")
            if "reply_text" not in e or "problem_id" not in e:
                raise FixtureMiss(f"fixture entry {i}: needs problem_id and reply_text")
            if "content_sha256" in e:
                self._by_hash[(e["problem_id"], e["content_sha256"])] = e["reply_text"]
            elif "turn_index" in e:
                self._by_turn[(e["problem_id"], int(e["turn_index"]))] = e["reply_text"]
            else:
                raise FixtureMiss(f"fixture entry {i}: needs turn_index or content_sha256")

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedProvider":
        return cls(json.loads(Path(path).read_text()))

    def chat(self, req: ProviderRequest) -> ProviderReply:
        _check_request(req)
        student_content = req.history[-1][1]
        turn = sum(1 for role, _ in req.history if role == STUDENT)
        hashed = self._by_hash.get((req.problem_id, content_key(student_content)))
        if hashed is not None:
            return ProviderReply(hashed, provider_meta="scripted:hash")
        by_turn = self._by_turn.get((req.problem_id, turn))
        if by_turn is not None:
            return ProviderReply(by_turn, provider_meta=f"scripted:turn:{turn}")
        raise FixtureMiss(f"no scripted reply for {req.problem_id!r} turn {turn}")


class HttpProvider:
    """Forwards to a chat-completions endpoint; the API key comes from the
    PROMPTPROG_API_KEY environment variable, never from config files."""

    def __init__(self, endpoint: str, model: str, timeout_s: float = 60.0):
        self.endpoint = endpoint
        self.model = model
        self.timeout_s = timeout_s

    def chat(self, req: ProviderRequest) -> ProviderReply:
        _check_request(req)
        messages = [{"role": "system", "content": req.system_prompt}]
        for role, content in req.history:
            messages.append(
                {"role": "user" if role == STUDENT else "assistant", "content": content}
            )
        headers = {}
        key = os.environ.get(API_KEY_ENV)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = httpx.post(
                self.endpoint,
                json={"model": self.model, "messages": messages},
                headers=headers,
                timeout=self.timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise ProviderFailure("timeout") from exc
        except httpx.HTTPError as exc:
            raise ProviderFailure(f"transport: {exc}") from exc
        if resp.status_code // 100 != 2:
            raise ProviderFailure(f"http_status:{resp.status_code}")
        try:
            data = resp.json()
            content = data["choices"][0]["message"]["content"]
            if not isinstance(content, str):
                raise TypeError("content is not a string")
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderFailure("malformed_reply") from exc
        meta = json.dumps(
            {"model": data.get("model", self.model), "usage": data.get("usage", {})},
            sort_keys=True,
        )
        return ProviderReply(content, provider_meta=meta)
