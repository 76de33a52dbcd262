from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one property check, serializable for the CLI."""

    name: str
    passed: bool
    witness: dict[str, Any] | None = None
    curves: dict[str, list[float]] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"property": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.curves is not None:
            out["curves"] = self.curves
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"
