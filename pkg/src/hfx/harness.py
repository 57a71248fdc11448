"""Suite configuration, report assembly, and serialization.

A report is a flat object: suite name, echoed parameters, the convention
ledger (recorded on every run so convention drift between runs is
visible), the check rows, wall time, and seed.  Check rows pass iff
value <= tolerance; negative-control rows carry negated value/tolerance
(see hfx.report).  Reports serialize to JSON (stable key order) or CSV
(exactly name,value,tolerance,pass).
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from . import suites
from .report import VerificationRecord

SUITE_NAMES = ("algebra", "fields", "cauchy", "mass", "moebius", "disk", "all")

#: conventions recorded in every report
CONVENTIONS = {
    "function_theory_generator_square": -1,
    "ball_group_generator_square": +1,
    "star_operation": "reversion",
    "mass_exponential_direction": "e^{-y0 M}",
    "monogenicity_side": "left",
    "cauchy_integrand_order": "kernel*normal*function",
}

#: knobs every suite accepts, with the desk-scale defaults
DEFAULTS = {
    "level": 4,
    "seed": 7,
    "disk_grid": 4096,
    "kernel_samples": 100_000,
    "kernel_r_max": 0.99,
    "moebius_samples": 1000,
}

_N_RANGES = {
    "algebra": (1, 4),
    "fields": (1, 3),
    "cauchy": (1, 3),
    "mass": (1, 3),
    "moebius": (2, 4),
}


class UsageError(ValueError):
    """Invalid harness configuration; maps to exit code 2."""


@dataclass
class SuiteConfig:
    suite: str
    n: int | None = None
    level: int = DEFAULTS["level"]
    lam: str | None = None
    seed: int = DEFAULTS["seed"]
    tol_overrides: dict = field(default_factory=dict)
    report_path: str | None = None
    fmt: str = "json"
    deterministic: bool = False

    def validate(self) -> None:
        if self.suite not in SUITE_NAMES:
            raise UsageError(
                f"unknown suite {self.suite!r}; expected one of {', '.join(SUITE_NAMES)}")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}; expected json or csv")
        if not 1 <= self.level <= 8:
            raise UsageError(f"level must be in [1, 8], got {self.level}")
        if self.seed < 0:
            raise UsageError(f"seed must be nonnegative, got {self.seed}")
        if self.n is not None:
            lo, hi = 1, 4
            if self.suite in _N_RANGES:
                lo, hi = _N_RANGES[self.suite]
            elif self.suite == "all":
                raise UsageError("--dim applies to a single suite, not 'all'")
            else:
                raise UsageError(f"--dim is not a parameter of the {self.suite} suite")
            if not lo <= self.n <= hi:
                raise UsageError(
                    f"dimension for {self.suite} must be in [{lo}, {hi}], got {self.n}")
        if self.lam is not None and self.suite not in ("mass", "all"):
            raise UsageError(f"--lambda is not a parameter of the {self.suite} suite")
        for name, value in self.tol_overrides.items():
            if not isinstance(value, float):
                raise UsageError(f"tolerance override {name} must be a real number")

    def parameters(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "level": self.level,
            "lambda": self.lam,
            "seed": self.seed,
            "tol_overrides": dict(self.tol_overrides),
            "format": self.fmt,
            "deterministic": self.deterministic,
            "disk_grid": DEFAULTS["disk_grid"],
            "kernel_samples": DEFAULTS["kernel_samples"],
            "kernel_r_max": DEFAULTS["kernel_r_max"],
            "moebius_samples": DEFAULTS["moebius_samples"],
        }


@dataclass
class VerificationReport:
    suite: str
    parameters: dict
    conventions: dict
    record: VerificationRecord
    wall_time_ms: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.record.all_passed

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "parameters": self.parameters,
            "conventions": self.conventions,
            "checks": [c.to_dict() for c in self.record.checks],
            "wall_time_ms": self.wall_time_ms,
            "seed": self.seed,
        }


#: JSON schema of the emitted report (validated in the test suite)
REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "parameters", "conventions", "checks",
                 "wall_time_ms", "seed"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string", "enum": list(SUITE_NAMES)},
        "parameters": {"type": "object"},
        "conventions": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "tolerance", "pass"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": "number"},
                    "tolerance": {"type": "number"},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "wall_time_ms": {"type": "number"},
        "seed": {"type": "integer"},
    },
}


def _run_one(suite: str, cfg: SuiteConfig) -> VerificationRecord:
    if suite == "algebra":
        return suites.algebra_suite(n=cfg.n or 2, seed=cfg.seed)
    if suite == "fields":
        dims = (cfg.n,) if cfg.n else (1, 2, 3)
        return suites.fields_suite(dims=dims, seed=cfg.seed)
    if suite == "cauchy":
        return suites.cauchy_suite(n=cfg.n or 2, level=cfg.level, seed=cfg.seed)
    if suite == "mass":
        lambdas = (cfg.lam,) if cfg.lam else None
        return suites.mass_suite(n=cfg.n or 2, level=cfg.level,
                                 lambdas=lambdas, seed=cfg.seed)
    if suite == "moebius":
        dims = (cfg.n,) if cfg.n else (2, 3, 4)
        return suites.moebius_suite(dims=dims,
                                    samples=DEFAULTS["moebius_samples"],
                                    seed=cfg.seed)
    if suite == "disk":
        rec = suites.disk_suite(N=DEFAULTS["disk_grid"], seed=cfg.seed)
        rec.extend(suites.kernel_suite(samples=DEFAULTS["kernel_samples"],
                                       seed=cfg.seed,
                                       r_max=DEFAULTS["kernel_r_max"]))
        return rec
    raise UsageError(f"unknown suite {suite!r}")


def _apply_tol_overrides(record: VerificationRecord, overrides: dict) -> None:
    unmatched = []
    for name, value in overrides.items():
        hits = [c for c in record.checks
                if c.name == name or c.name.startswith(name)]
        if not hits:
            unmatched.append(name)
        for c in hits:
            c.tolerance = value
    if unmatched:
        raise UsageError(
            "tolerance overrides matched no checks: " + ", ".join(sorted(unmatched)))


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Execute the configured suite; check failures are recorded, not raised."""
    cfg.validate()
    t0 = time.perf_counter()
    if cfg.suite == "all":
        record = VerificationRecord(label="all")
        for name in sorted(n for n in SUITE_NAMES if n != "all"):
            record.extend(_run_one(name, cfg))
    else:
        record = _run_one(cfg.suite, cfg)
    _apply_tol_overrides(record, cfg.tol_overrides)
    wall = (time.perf_counter() - t0) * 1000.0
    return VerificationReport(
        suite=cfg.suite,
        parameters=cfg.parameters(),
        conventions=dict(CONVENTIONS),
        record=record,
        wall_time_ms=wall,
        seed=cfg.seed,
    )


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    """Serialize: JSON object with stable key order, or four-column CSV."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "value", "tolerance", "pass"])
        for c in report.record.checks:
            writer.writerow([c.name, repr(float(c.value)),
                             repr(float(c.tolerance)),
                             "true" if c.passed else "false"])
        return buf.getvalue()
    raise UsageError(f"unknown format {fmt!r}; expected json or csv")
