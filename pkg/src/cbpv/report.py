"""Outcome records shared by the evaluator and the property harness."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"
VERDICTS = (PASS, FAIL, INCONCLUSIVE, SKIPPED)


@dataclass
class CheckReport:
    """Result of one property check.

    A ``fail`` verdict always carries a witness; when the witness has a
    ``repro`` entry, ``cbpv repro`` can rerun exactly that instance.
    """

    name: str
    verdict: str
    witness: dict[str, Any] | None = None
    stats: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def ok(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "verdict": self.verdict,
                "witness": self.witness, "stats": self.stats}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)

    def summary(self) -> str:
        line = f"{self.verdict.upper():13s} {self.name}"
        if self.witness and "message" in self.witness:
            line += f"  -- {self.witness['message']}"
        return line
