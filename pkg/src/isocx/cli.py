"""Command-line driver: `verify <suite>` runs a verification suite.

Exit status: 0 when every case passes, 1 on a verification failure, 2 on a
rejected configuration.  The report (JSON or CSV) goes to --out or stdout
and is byte-identical across runs and --jobs settings; wall-clock timings
are printed to stderr only.
"""

from __future__ import annotations

import argparse
import os
import sys

from .isogeny import DEFAULT_TRUNC
from .report import (
    ConfigError,
    SuiteConfig,
    SUITES,
    render_csv,
    render_json,
    run,
)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", action="append", type=int, metavar="PRIME",
                        help="prime to verify (repeatable; default 2 3 5)")
    common.add_argument("--rmax", type=int, default=4,
                        help="largest power exponent r (default 4, cap 5)")
    common.add_argument("--trunc", type=int, default=DEFAULT_TRUNC,
                        help=f"series truncation order (default {DEFAULT_TRUNC})")
    common.add_argument("--ext", type=int, choices=(1, 2), default=2,
                        help="specialization sweep field degree (default 2)")
    common.add_argument("--torsion", type=int, default=None,
                        help="ambient torsion level M (default max(rmax, 1))")
    common.add_argument("--mmax", type=int, default=6,
                        help="composition-closure bound (default 6)")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default $ISOCX_JOBS or 1)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property cases (default 0)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="report file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format (default json)")

    parser = argparse.ArgumentParser(
        prog="verify",
        description="Run verification suites and emit a machine-readable report.",
    )
    sub = parser.add_subparsers(dest="suite", required=True)
    for name in SUITES + ("all",):
        sub.add_parser(name, parents=[common],
                       help=f"run the {name} suite" if name != "all"
                       else "run every suite")
    return parser


def _resolve_jobs(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("ISOCX_JOBS")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"ISOCX_JOBS={env!r} is not an integer") from exc
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = SuiteConfig(
            primes=tuple(args.p) if args.p else (2, 3, 5),
            r_max=args.rmax,
            trunc=args.trunc,
            ext=args.ext,
            torsion=args.torsion if args.torsion is not None
            else max(args.rmax, 1),
            m_max=args.mmax,
            jobs=_resolve_jobs(args.jobs),
            seed=args.seed,
        )
    except ConfigError as exc:
        print(f"verify: configuration error: {exc}", file=sys.stderr)
        return 2

    records, timings, ok = run(cfg, args.suite)

    for rec, ms in zip(records, timings):
        status = "pass" if rec["pass"] else "FAIL"
        print(f"[{status}] {rec['suite']}/{rec['params']['kind']} "
              f"{rec['params']} ({ms:.0f} ms)", file=sys.stderr)
    n_fail = sum(not rec["pass"] for rec in records)
    print(f"verify: {len(records)} cases, {n_fail} failed, "
          f"{sum(timings) / 1000.0:.1f}s", file=sys.stderr)

    text = render_json(records) if args.format == "json" else render_csv(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
