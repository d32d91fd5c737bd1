"""Process-level sandbox for compiling and running generated code.

Each execution gets a private temporary working directory and hard limits on
wall time, address space, and captured output. Network access is cut off via
an unshared network namespace when the host kernel allows unprivileged user
namespaces; otherwise execution proceeds without that layer (see
`supports_network_isolation`).
"""

from __future__ import annotations

import os
import shlex
import shutil
import signal
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field

from .drivers import SourceUnit
from .errors import PromptProgError


class ToolchainMissing(PromptProgError):
    code = "TOOLCHAIN_MISSING"


class SandboxSetupFailure(PromptProgError):
    code = "SANDBOX_SETUP_FAILURE"


@dataclass(frozen=True)
class SandboxPolicy:
    compile_timeout_s: float = 10.0
    per_test_timeout_s: float = 2.0
    memory_limit_mb: int = 256
    max_output_bytes: int = 65536
    deny_network: bool = True
    temp_dir_only: bool = True

    def __post_init__(self):
        for name in ("compile_timeout_s", "per_test_timeout_s", "memory_limit_mb", "max_output_bytes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"sandbox limit {name} must be positive")


@dataclass(frozen=True)
class ToolchainConfig:
    c_compile: str = "gcc -O1 -std=c11 {src} -o {out} -lm"
    python: str = field(default_factory=lambda: sys.executable)


@dataclass
class RawOutcome:
    compile_ok: bool
    compile_output: str
    stdout: str
    stderr: str
    exit_code: int | None
    timed_out: bool
    duration_ms: int


def check_toolchain(languages: set[str], toolchain: ToolchainConfig) -> None:
    for lang in sorted(languages):
        if lang == "C":
            cmd = shlex.split(toolchain.c_compile)[0]
        elif lang == "Python":
            cmd = shlex.split(toolchain.python)[0]
        else:
            raise ToolchainMissing(f"no toolchain for language {lang!r}")
        if shutil.which(cmd) is None:
            raise ToolchainMissing(f"{lang} toolchain command not found: {cmd!r}")


_NETNS_PROBE: bool | None = None


def supports_network_isolation() -> bool:
    """True when unprivileged user+net namespaces are available."""
    global _NETNS_PROBE
    if _NETNS_PROBE is None:
        try:
            probe = subprocess.run(
                ["unshare", "--user", "--map-root-user", "--net", "true"],
                capture_output=True,
                timeout=10,
            )
            _NETNS_PROBE = probe.returncode == 0
        except (OSError, subprocess.TimeoutExpired):
            _NETNS_PROBE = False
    return _NETNS_PROBE


def _truncate(data: bytes, cap: int) -> str:
    return data[:cap].decode("utf-8", errors="replace")


def _run_limited(
    argv: list[str], cwd: str, timeout_s: float, policy: SandboxPolicy | None
) -> tuple[bytes, bytes, int | None, bool]:
    cmd = argv
    if policy is not None:
        kb = policy.memory_limit_mb * 1024
        cmd = ["sh", "-c", f'ulimit -v {kb} 2>/dev/null; exec "$0" "$@"'] + argv
        if policy.deny_network and supports_network_isolation():
            cmd = ["unshare", "--user", "--map-root-user", "--net", "--"] + cmd
    proc = subprocess.Popen(
        cmd,
        cwd=cwd,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        stdin=subprocess.DEVNULL,
        start_new_session=True,
    )
    try:
        out, err = proc.communicate(timeout=timeout_s)
        return out, err, proc.returncode, False
    except subprocess.TimeoutExpired:
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except ProcessLookupError:
            pass
        out, err = proc.communicate()
        return out, err, None, True


def execute(unit: SourceUnit, policy: SandboxPolicy, toolchain: ToolchainConfig) -> RawOutcome:
    """Compile (or syntax-check) one source unit and run it under limits."""
    started = time.monotonic()
    try:
        workdir = tempfile.mkdtemp(prefix="promptprog-run-")
    except OSError as exc:
        raise SandboxSetupFailure(str(exc)) from exc
    try:
        if unit.language == "C":
            src = os.path.join(workdir, f"{unit.name}.c")
            binary = os.path.join(workdir, unit.name)
            with open(src, "w") as f:
                f.write(unit.source)
            compile_argv = [
                tok.format(src=src, out=binary)
                for tok in shlex.split(_toolchain_template(toolchain, "C"))
            ]
            run_argv = [binary]
        else:
            src = os.path.join(workdir, f"{unit.name}.py")
            with open(src, "w") as f:
                f.write(unit.source)
            python = shlex.split(toolchain.python)
            compile_argv = python + ["-m", "py_compile", src]
            run_argv = python + [src]

        out, err, rc, timed_out = _run_limited(
            compile_argv, workdir, policy.compile_timeout_s, policy=None
        )
        compile_output = _truncate(out + err, policy.max_output_bytes)
        if timed_out or rc != 0:
            return RawOutcome(
                compile_ok=False,
                compile_output=compile_output if not timed_out else compile_output + "\n[compile timeout]",
                stdout="",
                stderr="",
                exit_code=rc,
                timed_out=timed_out,
                duration_ms=int((time.monotonic() - started) * 1000),
            )
        out, err, rc, timed_out = _run_limited(
            run_argv, workdir, policy.per_test_timeout_s, policy=policy
        )
        return RawOutcome(
            compile_ok=True,
            compile_output=compile_output,
            stdout=_truncate(out, policy.max_output_bytes),
            stderr=_truncate(err, policy.max_output_bytes),
            exit_code=rc,
            timed_out=timed_out,
            duration_ms=int((time.monotonic() - started) * 1000),
        )
    except OSError as exc:
        raise SandboxSetupFailure(str(exc)) from exc
    finally:
        shutil.rmtree(workdir, ignore_errors=True)


def _toolchain_template(toolchain: ToolchainConfig, language: str) -> str:
    if language == "C":
        template = toolchain.c_compile
        if "{src}" not in template or "{out}" not in template:
            raise ToolchainMissing("C compile command must contain {src} and {out}")
        return template
    raise ToolchainMissing(f"no compile template for {language}")
