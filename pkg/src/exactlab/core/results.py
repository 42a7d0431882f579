"""
Verdict records returned by the verification layers
"""

from dataclasses import dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    """Outcome of one named check"""

    name: str
    status: str = PASS
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def fail(self, counterexample: dict, note: str | None = None):
        # the first counterexample is kept
        if self.status != FAIL:
            self.status = FAIL
            self.counterexample = counterexample
        if note:
            self.notes.append(note)

    def flag(self, note: str):
        if self.status == PASS:
            self.status = INCONCLUSIVE
        if note not in self.notes:
            self.notes.append(note)


def combine_status(statuses) -> str:
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def matrix_payload(mat: np.ndarray) -> list[list[int]]:
    return np.asarray(mat, dtype=np.int64).tolist()
