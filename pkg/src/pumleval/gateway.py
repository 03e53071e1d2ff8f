"""Three-prompt enrichment sessions against chat-completion endpoints.

A session sends the instruction prompt, the methodless baseline diagram, and
the use-case block as three ordered turns of one conversation, single-shot
(no content-based retries).  Raw responses are archived verbatim before any
post-processing; replay mode serves archived sessions byte-identically with
no network access.

Archive layout per session::

    <archive>/<model>/run<X>/part{1,2,3}.request.txt
    <archive>/<model>/run<X>/part{1,2}.response.raw.txt
    <archive>/<model>/run<X>/response.raw.txt      (final turn, the diagram)
    <archive>/<model>/run<X>/extracted.puml
    <archive>/<model>_Run<X>.raw.txt               (mirror of the final turn)
    <archive>/<model>_Run<X>.puml                  (mirror of the extraction)
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .puml import parse_diagram

log = logging.getLogger(__name__)

Transport = Callable[[str, dict, str, float], tuple[int, str]]
# (endpoint_url, headers, body_text, timeout) -> (status_code, response_text)


class GatewayError(Exception):
    pass


class BaselineHasMethodsError(GatewayError):
    pass


class EmptyPartError(GatewayError):
    pass


class TransportError(GatewayError):
    pass


class AuthError(GatewayError):
    pass


class ReplayMissError(GatewayError):
    pass


class NoDiagramFoundError(GatewayError):
    pass


@dataclass(frozen=True)
class PromptSequence:
    """The three session parts, in protocol order."""

    instruction: str
    diagram: str
    use_cases: str

    def parts(self) -> list[str]:
        return [self.instruction, self.diagram, self.use_cases]


@dataclass
class ProviderConfig:
    name: str                     # model name used in artifact filenames
    endpoint_url: str = ""
    model_id: str = ""
    auth_env_var: str = ""
    timeout: float = 120.0
    mode: str = "replay"          # live | record | replay
    transport_retries: int = 2    # network-level retries only
    params: dict = field(default_factory=dict)   # sampling passthrough
    extra_headers: dict = field(default_factory=dict)


def assemble_session(instruction: str, baseline: str, ucs: str) -> PromptSequence:
    """Build the ordered prompt sequence, checking the baseline is methodless."""
    for label, text in (("instruction", instruction), ("baseline", baseline),
                        ("use cases", ucs)):
        if not text or not text.strip():
            raise EmptyPartError(f"{label} prompt part is empty")
    diagram = parse_diagram(baseline)
    method_count = sum(len(c.methods) for c in diagram.classes)
    if method_count:
        raise BaselineHasMethodsError(
            f"baseline must be methodless but declares {method_count} method(s)"
        )
    return PromptSequence(instruction=instruction, diagram=baseline, use_cases=ucs)


def extract_plantuml(raw: str) -> str:
    """Return the first @startuml..@enduml span, code fences stripped."""
    spans = re.findall(r"@startuml.*?@enduml", raw, flags=re.DOTALL)
    if not spans:
        raise NoDiagramFoundError("no @startuml...@enduml span in response")
    if len(spans) > 1:
        log.warning("response contains %d diagrams; keeping the first", len(spans))
    lines = [ln for ln in spans[0].splitlines() if not ln.strip().startswith("```")]
    return "\n".join(lines) + "\n"


def _session_dir(archive_root: Path | str, model: str, run_index: int) -> Path:
    return Path(archive_root) / model / f"run{run_index}"


def _requests_transport(url: str, headers: dict, body: str,
                        timeout: float) -> tuple[int, str]:
    import requests

    response = requests.post(url, headers=headers, data=body.encode("utf-8"),
                             timeout=timeout)
    return response.status_code, response.text


def _assistant_content(raw: str) -> str:
    """Pull assistant text out of a chat-completion body; fall back to raw."""
    try:
        doc = json.loads(raw)
        return doc["choices"][0]["message"]["content"]
    except (json.JSONDecodeError, KeyError, IndexError, TypeError):
        return raw


def _post_with_retries(config: ProviderConfig, transport: Transport,
                       headers: dict, body: str) -> str:
    attempts = config.transport_retries + 1
    last_error: Exception | None = None
    for _ in range(attempts):
        try:
            status, text = transport(config.endpoint_url, headers, body,
                                     config.timeout)
        except Exception as exc:  # network-level failure: retry
            last_error = exc
            continue
        if status in (401, 403):
            raise AuthError(
                f"endpoint rejected credentials (HTTP {status}); "
                f"check ${config.auth_env_var}"
            )
        if status >= 400:
            raise TransportError(f"endpoint returned HTTP {status}: {text[:200]}")
        return text
    raise TransportError(f"transport failed after {attempts} attempts: {last_error}")


def execute(config: ProviderConfig, seq: PromptSequence, run_index: int,
            archive_root: Path | str, transport: Transport | None = None) -> str:
    """Run (or replay) one session; returns the final raw response text.

    live/record: three sequential requests sharing one conversation, raw
    bodies archived verbatim.  replay: serves the archived final response.
    """
    session = _session_dir(archive_root, config.name, run_index)

    if config.mode == "replay":
        final = session / "response.raw.txt"
        if not final.exists():
            raise ReplayMissError(f"no archived session at {session}")
        return final.read_text(encoding="utf-8")

    if config.mode not in ("live", "record"):
        raise GatewayError(f"unknown gateway mode {config.mode!r}")

    token = os.environ.get(config.auth_env_var, "") if config.auth_env_var else ""
    if config.auth_env_var and not token:
        raise AuthError(f"environment variable {config.auth_env_var} is not set")
    headers = {"Content-Type": "application/json"}
    if token:
        headers["Authorization"] = f"Bearer {token}"
    headers.update(config.extra_headers)

    if transport is None:
        transport = _requests_transport

    session.mkdir(parents=True, exist_ok=True)
    messages: list[dict] = []
    raw = ""
    for part_no, part in enumerate(seq.parts(), start=1):
        messages.append({"role": "user", "content": part})
        body = json.dumps(
            {"model": config.model_id, "messages": messages, **config.params},
            sort_keys=True,
        )
        (session / f"part{part_no}.request.txt").write_text(body, encoding="utf-8")
        raw = _post_with_retries(config, transport, headers, body)
        if part_no < 3:
            (session / f"part{part_no}.response.raw.txt").write_text(
                raw, encoding="utf-8")
        else:
            (session / "response.raw.txt").write_text(raw, encoding="utf-8")
        messages.append({"role": "assistant", "content": _assistant_content(raw)})

    mirror = Path(archive_root) / f"{config.name}_Run{run_index}.raw.txt"
    mirror.write_text(raw, encoding="utf-8")
    try:
        diagram_text = extract_plantuml(_assistant_content(raw))
    except NoDiagramFoundError:
        log.warning("session %s/run%d produced no extractable diagram",
                    config.name, run_index)
    else:
        (session / "extracted.puml").write_text(diagram_text, encoding="utf-8")
        (Path(archive_root) / f"{config.name}_Run{run_index}.puml").write_text(
            diagram_text, encoding="utf-8")
    return raw


def replay_extracted(model_name: str, run_index: int,
                     archive_root: Path | str) -> str:
    """Extract the diagram from an archived session without touching it."""
    session = _session_dir(archive_root, model_name, run_index)
    final = session / "response.raw.txt"
    if not final.exists():
        raise ReplayMissError(f"no archived session at {session}")
    return extract_plantuml(_assistant_content(final.read_text(encoding="utf-8")))
