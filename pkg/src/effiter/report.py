from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class LawReport:
    """Outcome of checking one law or axiom over a pool of instances."""

    axiom: str
    instances: int = 0
    failures: list = field(default_factory=list)
    seed: int | None = None
    exhaustive: bool = True
    notes: str = ""
    failed: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def counterexample(self) -> str | None:
        return self.failures[0] if self.failures else None

    def fail(self, description: str, keep: int = 20):
        self.failed += 1
        if len(self.failures) < keep:
            self.failures.append(description)
        else:
            self.notes = "failure list truncated"

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = asdict(self)
        if not self.notes:
            del out["notes"]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        if self.exhaustive:
            mode = "exhaustive"
        else:
            mode = f"sampled seed={self.seed}" if self.seed is not None else "restricted"
        text = f"{status} {self.axiom}: {self.instances} instances ({mode})"
        if self.failed:
            text += f", {self.failed} failed"
        if self.failures:
            text += f"\n  counterexample: {self.failures[0]}"
        return text
