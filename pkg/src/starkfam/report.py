"""Check results and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

VERIFIED = "verified"
FAILED = "failed"
SKIPPED = "skipped"


def jsonable(x: Any) -> Any:
    """Lossless JSON view: fractions become "num/den" strings."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


@dataclass
class CongruenceReport:
    """Outcome of one check.

    ``status`` is verified exactly when the compared residues agree. A failed
    report always carries a witness with a nonzero difference; skipped
    reports carry the violated hypothesis in ``reason``.
    """

    check: str
    params: dict
    status: str
    reason: str | None = None
    witness: dict | None = None
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.status not in (VERIFIED, FAILED, SKIPPED):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAILED and not self.witness:
            raise ValueError("failed report needs a witness")

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {"check": self.check, "params": jsonable(self.params), "status": self.status}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if include_timing:
            out["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return out


def summarize(reports) -> dict:
    counts = {VERIFIED: 0, FAILED: 0, SKIPPED: 0}
    for r in reports:
        counts[r.status] += 1
    return counts
