"""Command-line driver: ``hfx verify <suite> [options]``.

Exit codes: 0 when every check passes, 1 on any check failure, 2 on
usage errors.  Reports go to stdout or --report PATH.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import AlgebraError
from .harness import SUITE_NAMES, SuiteConfig, UsageError, emit_report, run_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfx",
        description="Run named verification suites for the hypercomplex "
                    "function-theory engine and emit JSON/CSV reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES,
                        help="which suite to run ('all' runs every suite)")
    verify.add_argument("--dim", type=int, default=None, metavar="N",
                        help="generator/ball dimension (suite-specific default)")
    verify.add_argument("--level", type=int, default=4, metavar="L",
                        help="quadrature resolution level (default 4)")
    verify.add_argument("--lambda", dest="lam", default=None, metavar="V",
                        help="mass parameter: a real like 0.5 or a generator "
                             "token like e1 (default: the full acceptance set)")
    verify.add_argument("--seed", type=int, default=7, metavar="S",
                        help="seed for all counter-based sampling (default 7)")
    verify.add_argument("--tol", action="append", default=[], metavar="NAME=V",
                        help="override a check tolerance (prefix match; repeatable)")
    verify.add_argument("--report", default=None, metavar="PATH",
                        help="write the report to PATH instead of stdout")
    verify.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        default="json", help="report format (default json)")
    verify.add_argument("--deterministic", action="store_true",
                        help="force the sequential deterministic-order mode "
                             "(runs are reproducible for a fixed seed either way)")
    return parser


def _parse_tol_overrides(pairs) -> dict:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"malformed --tol override {pair!r}; expected NAME=V")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"tolerance in {pair!r} is not a number") from None
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = SuiteConfig(
            suite=args.suite,
            n=args.dim,
            level=args.level,
            lam=args.lam,
            seed=args.seed,
            tol_overrides=_parse_tol_overrides(args.tol),
            report_path=args.report,
            fmt=args.fmt,
            deterministic=args.deterministic,
        )
        report = run_suite(cfg)
        text = emit_report(report, cfg.fmt)
    except (UsageError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.report_path:
        with open(cfg.report_path, "w") as handle:
            handle.write(text)
    else:
        print(text)
    failed = report.record.failed()
    if failed:
        for c in failed:
            print(f"FAIL {c.name}: value {c.value:g} vs tolerance {c.tolerance:g}",
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
