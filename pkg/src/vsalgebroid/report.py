"""Structured pass/fail reports with replayable counterexample witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .exact import lc_format, lc_sub


@dataclass
class Witness:
    """A failing instance: the basis indices it was evaluated on plus both sides."""

    indices: dict[str, Any]
    lhs: dict
    rhs: dict

    def to_dict(self, label: Callable | None = None) -> dict:
        return {
            "indices": dict(self.indices),
            "lhs": lc_format(self.lhs, label),
            "rhs": lc_format(self.rhs, label),
            "difference": lc_format(lc_sub(self.lhs, self.rhs), label),
        }


@dataclass
class AxiomResult:
    label: str
    passed: bool = True
    checked: int = 0
    witness: Witness | None = None
    failures: int = 0
    note: str = ""
    skipped: int = 0

    def to_dict(self, label: Callable | None = None) -> dict:
        d = {"label": self.label, "passed": self.passed, "checked": self.checked, "failures": self.failures}
        if self.skipped:
            d["skipped"] = self.skipped
        if self.note:
            d["note"] = self.note
        if self.witness is not None:
            d["witness"] = self.witness.to_dict(label)
        return d


class AxiomTally:
    """Accumulates instance checks for one axiom, keeping the first witness."""

    def __init__(self, label: str, note: str = ""):
        self.result = AxiomResult(label, note=note)

    def check(self, lhs: Mapping, rhs: Mapping, **indices) -> bool:
        self.result.checked += 1
        if dict(lhs) == dict(rhs):
            return True
        self.fail(lhs, rhs, **indices)
        return False

    def fail(self, lhs: Mapping, rhs: Mapping, **indices):
        r = self.result
        r.passed = False
        r.failures += 1
        if r.witness is None:
            r.witness = Witness(dict(indices), dict(lhs), dict(rhs))

    def skip(self, n: int = 1):
        self.result.skipped += n


@dataclass
class CheckReport:
    """Pass/fail per axiom; ``passed`` iff every entry passed."""

    name: str
    results: list[AxiomResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __bool__(self):
        return self.passed

    def add(self, item: AxiomResult | AxiomTally) -> AxiomResult:
        if isinstance(item, AxiomTally):
            item = item.result
        self.results.append(item)
        return item

    def extend(self, items: Iterable[AxiomResult | AxiomTally]):
        for it in items:
            self.add(it)

    def merge(self, other: "CheckReport", prefix: str | None = None) -> "CheckReport":
        for r in other.results:
            if prefix:
                r = AxiomResult(f"{prefix}: {r.label}", r.passed, r.checked, r.witness, r.failures, r.note, r.skipped)
            self.results.append(r)
        return self

    def __getitem__(self, label: str) -> AxiomResult:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [r.label for r in self.results]

    def first_failure(self) -> AxiomResult | None:
        for r in self.results:
            if not r.passed:
                return r
        return None

    def to_dict(self, label: Callable | None = None) -> dict:
        d = {"name": self.name, "passed": self.passed, "results": [r.to_dict(label) for r in self.results]}
        if self.info:
            d["info"] = self.info
        return d

    def render(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.results:
            status = "pass" if r.passed else "FAIL"
            extra = f" ({r.failures} failures)" if r.failures else ""
            skipped = f", {r.skipped} skipped" if r.skipped else ""
            lines.append(f"  [{status}] {r.label}: {r.checked} checked{skipped}{extra}")
            if r.witness is not None:
                w = r.witness.to_dict()
                lines.append(f"         witness {w['indices']}: lhs={w['lhs']} rhs={w['rhs']}")
        return "\n".join(lines)


class CheckFailed(Exception):
    """Raised when a check that gates further work fails; carries the report."""

    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report
