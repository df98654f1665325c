from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of one finite-depth check.

    ``witnesses`` holds dicts of concrete inputs and the two sides that
    disagreed; a failing report always carries at least one.
    """

    name: str
    passed: bool
    cases: int = 0
    params: dict[str, Any] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def __bool__(self) -> bool:
        return self.passed


class Tally:
    """Accumulates cases and (a bounded number of) witnesses for a checker."""

    def __init__(self, name: str, max_witnesses: int = 5, **params: Any):
        self.name = name
        self.params = params
        self.max_witnesses = max_witnesses
        self.cases = 0
        self.failures = 0
        self.witnesses: list[dict[str, Any]] = []
        self.notes: dict[str, Any] = {}

    def check(self, ok: bool, **witness: Any) -> bool:
        self.cases += 1
        if not ok:
            self._fail(witness)
        return ok

    def fail(self, **witness: Any) -> None:
        """Record a failing case (the caller counts passing ones in ``cases``)."""
        self.cases += 1
        self._fail(witness)

    def _fail(self, witness: dict[str, Any]) -> None:
        self.failures += 1
        if len(self.witnesses) < self.max_witnesses:
            self.witnesses.append({k: str(v) for k, v in witness.items()})

    def report(self) -> CheckReport:
        return CheckReport(
            name=self.name,
            passed=self.failures == 0,
            cases=self.cases,
            params=dict(self.params),
            witnesses=list(self.witnesses),
            notes=dict(self.notes, failures=self.failures),
        )
