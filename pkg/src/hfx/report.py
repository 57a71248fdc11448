"""Shared check/record types used by verification routines and the harness.

A check passes iff value <= tolerance.  Negative controls (things that
must *fail* by a margin) are encoded with value = -observed and a
negative tolerance, so the single rule covers both directions; such
checks carry a ``negative_control`` marker in their name by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": float(self.value),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


@dataclass
class VerificationRecord:
    """Named bundle of checks plus free-form numeric context."""

    label: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, other: "VerificationRecord") -> None:
        self.checks.extend(other.checks)
        self.data.update(other.data)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def __iter__(self):
        return iter(self.checks)


def negative_control(name: str, observed: float, must_exceed: float) -> Check:
    """A check that passes iff the observed failure is at least ``must_exceed``."""
    return Check(name=f"{name}.negative_control", value=-observed, tolerance=-must_exceed)
