"""Service configuration: one JSON document, strictly validated.

Unknown keys are rejected at every nesting level. Relative paths are
resolved against the config file's directory so a config travels with its
corpus, fixtures, and log. The provider API key is never part of the file;
it comes from the PROMPTPROG_API_KEY environment variable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .drivers import MODES, SINGLE_DRIVER
from .errors import PromptProgError
from .providers import ChatProvider, HttpProvider, ScriptedProvider
from .sandbox import SandboxPolicy, ToolchainConfig


class ConfigError(PromptProgError):
    code = "CONFIG_ERROR"


@dataclass(frozen=True)
class ProviderSettings:
    kind: str  # "http" | "scripted"
    endpoint: str | None = None
    model: str | None = None
    fixture_path: Path | None = None
    timeout_s: float = 60.0


@dataclass(frozen=True)
class ServiceConfig:
    corpus_path: Path
    log_path: Path
    provider: ProviderSettings
    listen_host: str = "127.0.0.1"
    listen_port: int = 8077
    sandbox: SandboxPolicy = field(default_factory=SandboxPolicy)
    toolchain: ToolchainConfig = field(default_factory=ToolchainConfig)
    grading_mode: str = SINGLE_DRIVER
    bucket_edges: tuple[int, ...] = (1, 2, 3, 4, 5)
    ui_static_path: Path | None = None


def _reject_unknown(raw: dict, allowed: set[str], context: str) -> None:
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{context}: unknown keys {unknown}")


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def config_from_dict(raw: Any, base_dir: str | Path = ".") -> ServiceConfig:
    base = Path(base_dir)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(
        raw,
        {
            "listen",
            "corpus_path",
            "log_path",
            "provider",
            "sandbox",
            "toolchain",
            "grading_mode",
            "bucket_edges",
            "ui_static_path",
        },
        "config",
    )
    for key in ("corpus_path", "log_path", "provider"):
        if key not in raw:
            raise ConfigError(f"config: missing required key {key!r}")

    listen = raw.get("listen", {})
    _reject_unknown(listen, {"host", "port"}, "listen")

    prov = raw["provider"]
    _reject_unknown(prov, {"kind", "endpoint", "model", "fixture_path", "timeout_s"}, "provider")
    kind = prov.get("kind")
    if kind not in ("http", "scripted"):
        raise ConfigError(f"provider.kind must be http or scripted, got {kind!r}")
    if kind == "http" and not prov.get("endpoint"):
        raise ConfigError("provider.endpoint is required for the http provider")
    if kind == "scripted" and not prov.get("fixture_path"):
        raise ConfigError("provider.fixture_path is required for the scripted provider")
    provider = ProviderSettings(
        kind=kind,
        endpoint=prov.get("endpoint"),
        model=prov.get("model", "default"),
        fixture_path=_resolve(base, prov["fixture_path"]) if prov.get("fixture_path") else None,
        timeout_s=float(prov.get("timeout_s", 60.0)),
    )

    sb = raw.get("sandbox", {})
    _reject_unknown(
        sb,
        {"compile_timeout_s", "per_test_timeout_s", "memory_limit_mb", "max_output_bytes"},
        "sandbox",
    )
    try:
        policy = SandboxPolicy(**sb)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sandbox: {exc}") from exc

    tc = raw.get("toolchain", {})
    _reject_unknown(tc, {"c_compile", "python"}, "toolchain")
    toolchain = ToolchainConfig(**tc)

    mode = raw.get("grading_mode", SINGLE_DRIVER)
    if mode not in MODES:
        raise ConfigError(f"grading_mode must be one of {MODES}, got {mode!r}")

    edges = raw.get("bucket_edges", [1, 2, 3, 4, 5])
    if (
        not isinstance(edges, list)
        or not edges
        or not all(isinstance(e, int) and not isinstance(e, bool) for e in edges)
        or edges != sorted(set(edges))
    ):
        raise ConfigError("bucket_edges must be a strictly increasing list of integers")

    return ServiceConfig(
        corpus_path=_resolve(base, raw["corpus_path"]),
        log_path=_resolve(base, raw["log_path"]),
        provider=provider,
        listen_host=listen.get("host", "127.0.0.1"),
        listen_port=int(listen.get("port", 8077)),
        sandbox=policy,
        toolchain=toolchain,
        grading_mode=mode,
        bucket_edges=tuple(edges),
        ui_static_path=_resolve(base, raw["ui_static_path"]) if raw.get("ui_static_path") else None,
    )


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(raw, base_dir=path.parent)


def build_provider(settings: ProviderSettings) -> ChatProvider:
    if settings.kind == "scripted":
        return ScriptedProvider.from_file(settings.fixture_path)
    return HttpProvider(
        endpoint=settings.endpoint, model=settings.model, timeout_s=settings.timeout_s
    )
