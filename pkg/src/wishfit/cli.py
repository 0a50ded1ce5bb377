"""Command-line interface.

Subcommands: spectrum, tables, test, calibrate, ingest, power.  All JSON
output is deterministic for fixed inputs and seed (sorted keys, no
timestamps) and carries the library version plus the resolved configuration.

Exit codes: 0 success (for `test`: fail to reject), 1 usage error, 2 data or
domain error, 3 `test` rejected the null hypothesis.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._version import __version__
from .alternatives import AlternativeFamily, power_sim
from .errors import WishfitError
from .goftest import GofConfig, gof_test, mc_null_quantile
from .pipeline import (
    load_calendar,
    load_matrices,
    load_prices,
    log_returns,
    period_covariances,
    save_matrices,
)
from .spectrum import eigen_spectrum, truncation_rank

__all__ = ["main", "build_parser"]

_ENV_SEED = "WISHFIT_SEED"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REJECT = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _default_seed(value) -> int | None:
    """Resolve the seed: explicit flag beats the environment default."""
    if value is not None:
        return int(value)
    env = os.environ.get(_ENV_SEED)
    return int(env) if env else None


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="wishfit", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eigenvalues of the limiting operator")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--method", choices=("matrix", "roots"), default="matrix")
    p.add_argument("--out", default=None)

    p = sub.add_parser("tables", help="truncation-rank rows (alpha, r, N)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alphas", required=True,
                   help="comma-separated shape values")
    p.add_argument("--out", default=None)

    p = sub.add_parser("test", help="goodness-of-fit test on matrices.csv")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("mc", "asymptotic", "conservative"),
                   default="mc")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--allow-alpha-below-theorem-bound", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("calibrate", help="Monte Carlo null critical value")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("ingest", help="prices -> period covariance matrices")
    p.add_argument("--prices", required=True)
    p.add_argument("--calendar", default=None)
    p.add_argument("--period", type=int, default=10)
    p.add_argument("--out", required=True)

    p = sub.add_parser("power", help="rejection rate against an alternative")
    p.add_argument("--family", choices=("scale", "shape", "contam"),
                   required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    return top


def _emit(payload: dict, out_path) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_spectrum(args) -> int:
    result = eigen_spectrum(
        args.alpha, args.m,
        max_weight=args.max_weight, eps=args.eps, method=args.method,
    )
    _emit(result.to_dict(), args.out)
    return EXIT_OK


def _cmd_tables(args) -> int:
    try:
        alphas = [float(tok) for tok in args.alphas.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"--alphas must be comma-separated numbers, got "
                          f"{args.alphas!r}") from None
    if not alphas:
        raise _UsageError("--alphas is empty")
    rows = []
    for alpha in alphas:
        r, n = truncation_rank(alpha, args.m, args.eps)
        rows.append([alpha, r, n])
    _emit(
        {
            "m": args.m,
            "eps": args.eps,
            "rows": rows,
            "version": __version__,
            "config": {"m": args.m, "eps": args.eps, "alphas": alphas},
        },
        args.out,
    )
    return EXIT_OK


def _cmd_test(args) -> int:
    sample = load_matrices(args.input)
    config = GofConfig(
        alpha=args.alpha,
        method=args.method,
        level=args.level,
        mc_reps=args.reps,
        seed=_default_seed(args.seed),
        allow_alpha_below_theorem_bound=args.allow_alpha_below_theorem_bound,
    )
    report = gof_test(sample.matrices, config)
    _emit(report.to_dict(), args.out)
    return EXIT_REJECT if report.reject else EXIT_OK


def _cmd_calibrate(args) -> int:
    seed = _default_seed(args.seed)
    crit, se = mc_null_quantile(
        args.alpha, args.m, args.n, args.level, args.reps, seed
    )
    _emit(
        {
            "critical_value": crit,
            "critical_value_se": se,
            "alpha": args.alpha,
            "m": args.m,
            "n": args.n,
            "level": args.level,
            "reps": args.reps,
            "seed": seed,
            "version": __version__,
            "config": {
                "alpha": args.alpha,
                "m": args.m,
                "n": args.n,
                "level": args.level,
                "reps": args.reps,
                "seed": seed,
            },
        },
        args.out,
    )
    return EXIT_OK


def _cmd_ingest(args) -> int:
    calendar = load_calendar(args.calendar) if args.calendar else None
    table = load_prices(args.prices, calendar)
    returns = log_returns(table)
    sample = period_covariances(returns, args.period)
    save_matrices(sample, args.out)
    sys.stderr.write(
        f"wrote {sample.n} {sample.m}x{sample.m} matrices to {args.out}\n"
    )
    return EXIT_OK


def _cmd_power(args) -> int:
    kind = {"contam": "contamination"}.get(args.family, args.family)
    seed = _default_seed(args.seed)
    fam = AlternativeFamily(kind=kind, alpha=args.alpha, m=args.m, n=args.n)
    rate, se = power_sim(fam, args.n, args.level, args.reps, seed)
    _emit(
        {
            "family": kind,
            "theta_or_n": args.n,
            "level": args.level,
            "reps": args.reps,
            "reject_rate": rate,
            "se": se,
            "seed": seed,
            "version": __version__,
            "config": {
                "family": kind,
                "alpha": args.alpha,
                "m": args.m,
                "n": args.n,
                "level": args.level,
                "reps": args.reps,
                "seed": seed,
            },
        },
        args.out,
    )
    return EXIT_OK


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "tables": _cmd_tables,
    "test": _cmd_test,
    "calibrate": _cmd_calibrate,
    "ingest": _cmd_ingest,
    "power": _cmd_power,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse exits 0 for --help/--version; anything else is usage.
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return EXIT_OK if code == 0 else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (WishfitError, OSError, NotImplementedError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
