"""Pass/fail results of identity checks, with a reproducible witness on failure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from . import io


@dataclass(frozen=True)
class Witness:
    entries: Tuple[Any, ...]
    residual: Any

    def to_json(self) -> dict:
        return {"entries": [io.value_to_json(e) for e in self.entries], "residual": io.value_to_json(self.residual)}

    @classmethod
    def from_json(cls, obj: dict, dim: int | None = None) -> "Witness":
        entries = tuple(io.value_from_json(e, dim) for e in obj["entries"])
        return cls(entries, io.value_from_json(obj["residual"], dim))


@dataclass(frozen=True)
class Verdict:
    """Outcome of one identity check.

    ``checked`` counts the entry tuples (or points, or relations) examined.
    A failing verdict always carries the first failing tuple in enumeration
    order together with its nonzero residual.
    """

    identity: str
    passed: bool
    checked: int
    witness: Optional[Witness] = None
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "passed": self.passed,
            "checked": self.checked,
            "witness": self.witness.to_json() if self.witness else None,
        }
        if self.details:
            out["details"] = _plain(self.details)
        return out

    @classmethod
    def from_json(cls, obj: dict, dim: int | None = None) -> "Verdict":
        w = obj.get("witness")
        return cls(
            obj["identity"],
            bool(obj["passed"]),
            int(obj["checked"]),
            Witness.from_json(w, dim) if w else None,
            dict(obj.get("details", {})),
        )

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        line = f"{self.identity}: {state} ({self.checked} checked)"
        if self.witness is not None:
            ents = ", ".join(str(e) for e in self.witness.entries)
            line += f"\n  witness entries: ({ents})\n  residual: {self.witness.residual}"
        return line


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, str, float)) or v is None:
        return v
    try:
        return io.value_to_json(v)
    except TypeError:
        return str(v)
