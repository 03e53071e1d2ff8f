"""Shared fixtures: a deterministic synthetic corpus with known quirks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

import pytest

BASELINE = """\
@startuml
package Accounts {
  class UserAccount {
    - email: String
    - status: AccountStatus
  }
  class UserProfile {
    - displayName: String
  }
  class CredentialStore {
    - passwordHash: String
  }
}
package Requests {
  class ServiceRequest {
    - requestId: String
    - state: RequestState
  }
  class TransportOrder {
    - orderId: String
  }
}
class NotificationHub {
  - queueSize: Integer
}
enum AccountStatus {
  ACTIVE
  LOCKED
  CLOSED
}
enum RequestState {
  OPEN
  SCHEDULED
  DONE
}
UserAccount --> UserProfile : owns
UserAccount "1" --> "1" CredentialStore
ServiceRequest --> TransportOrder
NotificationHub ..> UserAccount
TransportOrder o-- NotificationHub
@enduml
"""

# method pool: name -> usual owning class
METHOD_POOL = {
    "activateAccount": "UserAccount",
    "deactivateAccount": "UserAccount",
    "lockAccount": "UserAccount",
    "recordLogin": "UserAccount",
    "verifyEmail": "UserProfile",
    "updateProfile": "UserProfile",
    "updatePassword": "CredentialStore",
    "resetPassword": "CredentialStore",
    "validateCredentials": "CredentialStore",
    "cancelRequest": "ServiceRequest",
    "scheduleRequest": "ServiceRequest",
    "closeRequest": "ServiceRequest",
    "scheduleTransport": "TransportOrder",
    "dispatchOrder": "TransportOrder",
    "confirmOrder": "TransportOrder",
    "sendNotification": "NotificationHub",
    "queueMessage": "NotificationHub",
    "purgeQueue": "NotificationHub",
}

MODELS = ["ModelA", "ModelB", "ModelC", "ModelD", "ModelE",
          "ModelF", "ModelG", "ModelH", "ModelI"]

# (pool coverage, extra methods per run, annotation style, rich signatures)
MODEL_TRAITS = {
    "ModelA": (1.00, 6, "full", True),
    "ModelB": (0.90, 5, "full", False),
    "ModelC": (0.85, 4, "mixed", True),
    "ModelD": (0.75, 4, "uc_only", False),
    "ModelE": (0.70, 3, "mixed", True),
    "ModelF": (0.60, 3, "none", False),
    "ModelG": (0.50, 2, "mixed", False),
    "ModelH": (0.45, 2, "action_only", True),
    "ModelI": (0.35, 1, "none", True),
}


@dataclass
class SyntheticCorpus:
    corpus_dir: Path
    baseline_path: Path
    models: list[str]
    runs: int
    invalid_files: list[str] = field(default_factory=list)
    uc_tokens: dict[str, int] = field(default_factory=dict)  # filename -> count


def _method_line(rng: random.Random, name: str, style: str, rich: bool,
                 run_salt: int) -> tuple[str, int]:
    """Render one member line; returns (line, uc token count)."""
    params = ""
    if rich and rng.random() < 0.7:
        n_params = rng.randint(1, 3)
        params = ", ".join(
            f"arg{i}: {rng.choice(['String', 'Integer', 'Boolean', 'Date'])}"
            for i in range(n_params)
        )
    ret = ""
    roll = rng.random()
    if rich and roll < 0.6:
        ret = f" : {rng.choice(['Boolean', 'String', 'Integer'])}"
    elif roll < 0.8:
        ret = " : void"
    uc_count = 0
    annotation = ""
    effective = style
    if style == "mixed":
        effective = rng.choice(["full", "uc_only", "none", "full"])
    if effective in ("full", "uc_only"):
        uc_count = 1
        annotation = f" //UC{(run_salt + uc_count) % 21 + 1:02d}"
        if rng.random() < 0.2:
            annotation += f" //UC{(run_salt + 7) % 21 + 1:02d}"
            uc_count += 1
    if effective in ("full", "action_only"):
        annotation += f" //action: {name} step {run_salt % 5 + 1}"
    visibility = "+" if rng.random() < 0.9 else rng.choice(["-", "#", ""])
    marker = f"{visibility} " if visibility else ""
    return f"  {marker}{name}({params}){ret}{annotation}", uc_count


def build_synthetic_corpus(root: Path, runs: int = 10) -> SyntheticCorpus:
    corpus_dir = root / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    baseline_path = root / "baseline.puml"
    baseline_path.write_text(BASELINE, encoding="utf-8")

    pool = list(METHOD_POOL)
    invalid = []
    uc_tokens: dict[str, int] = {}

    for model in MODELS:
        coverage, extra, style, rich = MODEL_TRAITS[model]
        core = pool[: max(2, int(len(pool) * coverage))]
        for run in range(1, runs + 1):
            rng = random.Random(f"{model}-{run}")
            per_class: dict[str, list[str]] = {}
            tokens = 0
            chosen = core + [f"handleCase{run}{chr(ord('a') + i)}"
                             for i in range(extra)]
            for name in chosen:
                target = METHOD_POOL.get(name, rng.choice(
                    ("UserAccount", "ServiceRequest", "NotificationHub")))
                # ModelI disagrees on where email verification belongs
                if model == "ModelI" and name == "verifyEmail":
                    target = "UserAccount"
                line, n_uc = _method_line(rng, name, style, rich, run)
                per_class.setdefault(target, []).append(line)
                tokens += n_uc
            if model == "ModelB" and rng.random() < 0.25:
                # duplicated names inside one class: redundancy > 1
                line, n_uc = _method_line(rng, "cancelRequest", style, rich, run)
                per_class.setdefault("ServiceRequest", []).append(line)
                tokens += n_uc

            text = _render(model, run, per_class)
            filename = f"{model}_run{run}.puml"
            if model == "ModelB" and run == 3:
                text = text.replace("@enduml\n", "")  # unbalanced: parse error
                invalid.append(filename)
            if model == "ModelG" and run == 7:
                text = text.replace(
                    "@enduml", "TransportOrder --> GhostClass\n@enduml")
                invalid.append(filename)  # unknown endpoint: invalid, parseable
            (corpus_dir / filename).write_text(text, encoding="utf-8")
            uc_tokens[filename] = tokens

    return SyntheticCorpus(
        corpus_dir=corpus_dir,
        baseline_path=baseline_path,
        models=list(MODELS),
        runs=runs,
        invalid_files=invalid,
        uc_tokens=uc_tokens,
    )


def _render(model: str, run: int, per_class: dict[str, list[str]]) -> str:
    """Rebuild the baseline source with methods injected into class bodies."""
    lines = []
    current_class = None
    for line in BASELINE.splitlines():
        stripped = line.strip()
        if stripped.startswith("class ") and stripped.endswith("{"):
            current_class = stripped.split()[1]
        if stripped == "}" and current_class is not None:
            for method_line in per_class.get(current_class, []):
                lines.append("  " + method_line)
            current_class = None
        lines.append(line)
    # structural-fidelity quirks
    text = "\n".join(lines) + "\n"
    if model == "ModelH":  # drops one enum value
        text = text.replace("  CLOSED\n", "")
    if model == "ModelG":  # drops a relationship and renames a class
        text = text.replace("NotificationHub ..> UserAccount\n", "")
    return text


@pytest.fixture(scope="session")
def synthetic_corpus(tmp_path_factory) -> SyntheticCorpus:
    root = tmp_path_factory.mktemp("synthetic")
    return build_synthetic_corpus(root)
