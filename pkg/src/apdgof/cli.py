"""Command-line front end.

Subcommands: ``test`` (run the goodness-of-fit test on a data file),
``simulate`` (Monte Carlo size/power studies), ``tables`` (closed-form
covariance entries over a grid of tail exponents) and ``sample`` (write
reproducible APD variates).  Exit codes: 0 success, 2 input error,
3 degenerate data, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import apd
from .errors import ConfigError, DegenerateSampleError, DomainError
from .score import LocationScale, fisher_blocks, run_test, score_covariance
from .simulate import StudyConfig, run_local_alternative_study, run_null_study

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64

_SCHEMA_VERSION = "1"

_TABLE_COLUMNS = (
    "lambda",
    "j_theta1_theta1",
    "j_theta2_theta2",
    "j_theta1_mu",
    "j_theta2_sigma",
    "j_mu_mu",
    "j_sigma_sigma",
    "sigma11",
    "sigma22",
)


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems with exit code 64."""

    def error(self, message):
        raise _UsageError(message)


def read_values(path: str) -> np.ndarray:
    """Parse a single-column text file of decimals.

    Blank lines and lines starting with ``#`` are skipped; CRLF endings are
    tolerated.  Every remaining line must hold exactly one finite decimal,
    and at least two values are required.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from None
    values = []
    for lineno, raw in enumerate(lines, start=1):
        token = raw.strip()
        if not token or token.startswith("#"):
            continue
        if any(ch.isspace() for ch in token):
            raise _InputError(f"{path}:{lineno}: expected one value per line")
        try:
            v = float(token)
        except ValueError:
            raise _InputError(f"{path}:{lineno}: not a decimal: {token!r}") from None
        if not math.isfinite(v):
            raise _InputError(f"{path}:{lineno}: value is not finite: {token!r}")
        values.append(v)
    if len(values) < 2:
        raise _InputError(f"{path}: need at least 2 values, found {len(values)}")
    return np.array(values)


def _record(command: str, inputs: dict, results: dict) -> dict:
    return {
        "schema_version": _SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def _emit_json(record: dict) -> None:
    print(json.dumps(record, sort_keys=True, indent=2))


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise _UsageError(message)


def _cmd_test(args) -> int:
    _check(args.lam >= 1.0 and math.isfinite(args.lam), "--lambda must be >= 1")
    _check(0.0 < args.alpha < 1.0, "--alpha must lie in (0, 1)")
    data = read_values(args.input)
    report = run_test(data, args.lam, alpha=args.alpha)
    results = {
        "n": report.n,
        "lambda": report.lam,
        "mu_hat": report.loc_scale.mu,
        "sigma_hat": report.loc_scale.sigma,
        "r1": float(report.score[0]),
        "r2": float(report.score[1]),
        "t_stat": report.t_stat,
        "p_value": report.p_value,
        "alpha": report.alpha,
        "reject": report.reject,
    }
    if args.json:
        _emit_json(_record("test", {"input": args.input, "lambda": args.lam, "alpha": args.alpha}, results))
    else:
        verdict = "reject H0" if report.reject else "accept H0"
        print(f"modified score test (lambda={args.lam:g}, n={report.n})")
        print(f"  mu_hat    : {report.loc_scale.mu!r}")
        print(f"  sigma_hat : {report.loc_scale.sigma!r}")
        print(f"  score     : ({float(report.score[0])!r}, {float(report.score[1])!r})")
        print(f"  t_stat    : {report.t_stat!r}")
        print(f"  p_value   : {report.p_value!r}")
        print(f"  decision  : {verdict} at alpha={args.alpha:g}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    _check(args.workers >= 1, "--workers must be >= 1")
    delta = None
    if args.kind == "power":
        _check(args.delta is not None, "simulate power requires --delta d1,d2")
        delta = args.delta
    else:
        _check(args.delta is None, "--delta is only valid for simulate power")
    _check(args.sigma > 0.0, "--sigma must be positive")
    try:
        cfg = StudyConfig(
            lam=args.lam,
            n=args.n,
            reps=args.reps,
            seed=args.seed,
            alpha_grid=(args.alpha,),
            delta=delta,
            loc_scale=LocationScale(args.mu, args.sigma),
        )
        if args.kind == "size":
            report = run_null_study(cfg, workers=args.workers)
        else:
            report = run_local_alternative_study(cfg, workers=args.workers)
    except (ConfigError, DomainError) as exc:
        raise _UsageError(str(exc)) from None
    payload = report.to_dict()
    if args.json:
        _emit_json(_record("simulate", {"kind": args.kind}, payload))
    else:
        print(f"simulate {args.kind}: lambda={args.lam:g} n={args.n} reps={args.reps} seed={args.seed}")
        for row in payload["rejections"]:
            line = (
                f"  alpha={row['alpha']:g}  rejection={row['rate']:.4f}"
                f"  se={row['std_error']:.4f}"
            )
            if row["predicted"] is not None:
                line += f"  predicted={row['predicted']:.4f}"
            print(line)
        print(f"  ks_stat={payload['ks_stat']:.6f}  failures={payload['replicate_failures']}")
    return EXIT_OK


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    _check(len(parts) == 3, "--lambda-grid must look like start:stop:step")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise _UsageError(f"--lambda-grid has non-numeric parts: {text!r}") from None
    _check(math.isfinite(start) and math.isfinite(stop) and math.isfinite(step),
           "--lambda-grid values must be finite")
    _check(start >= 1.0, "--lambda-grid start must be >= 1")
    _check(stop >= start, "--lambda-grid stop must be >= start")
    _check(step > 0.0, "--lambda-grid step must be positive")
    grid = []
    k = 0
    while True:
        lam = start + k * step
        if lam > stop * (1.0 + 1e-12) + 1e-12:
            break
        grid.append(lam)
        k += 1
    return grid


def _cmd_tables(args) -> int:
    grid = _parse_grid(args.lambda_grid)
    rows = []
    for lam in grid:
        blocks = fisher_blocks(lam)
        cov = score_covariance(lam)
        rows.append(
            {
                "lambda": lam,
                "j_theta1_theta1": float(blocks.shape_block[0, 0]),
                "j_theta2_theta2": float(blocks.shape_block[1, 1]),
                "j_theta1_mu": float(blocks.cross_block[0, 0]),
                "j_theta2_sigma": float(blocks.cross_block[1, 1]),
                "j_mu_mu": float(blocks.loc_scale_block[0, 0]),
                "j_sigma_sigma": float(blocks.loc_scale_block[1, 1]),
                "sigma11": float(cov[0, 0]),
                "sigma22": float(cov[1, 1]),
            }
        )
    if args.json:
        _emit_json(_record("tables", {"lambda_grid": args.lambda_grid}, {"rows": rows}))
    else:
        print(",".join(_TABLE_COLUMNS))
        for row in rows:
            print(",".join(repr(row[c]) for c in _TABLE_COLUMNS))
    return EXIT_OK


def _cmd_sample(args) -> int:
    _check(args.n >= 1, "--n must be >= 1")
    _check(args.seed >= 0, "--seed must be nonnegative")
    try:
        params = apd.ApdParams(
            theta1=args.theta1, theta2=args.theta2, mu=args.mu, sigma=args.sigma
        )
    except DomainError as exc:
        raise _UsageError(str(exc)) from None
    rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed))
    values = apd.sample(params, args.n, rng)
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            for v in values:
                fh.write(f"{v:.17g}\n")
    except OSError as exc:
        raise _InputError(f"cannot write {args.output}: {exc}") from None
    results = {"n": args.n, "seed": args.seed, "output": args.output}
    if args.json:
        inputs = {
            "theta1": args.theta1,
            "theta2": args.theta2,
            "mu": args.mu,
            "sigma": args.sigma,
        }
        _emit_json(_record("sample", inputs, results))
    else:
        print(f"wrote {args.n} values to {args.output} (seed={args.seed})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apdgof", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="test a data file against the exponential-power null")
    p_test.add_argument("--input", required=True, help="single-column text file of decimals")
    p_test.add_argument("--lambda", dest="lam", type=float, required=True,
                        help="null tail exponent (>= 1; 1=Laplace, 2=normal)")
    p_test.add_argument("--alpha", type=float, default=0.05, help="test level (default 0.05)")
    p_test.add_argument("--json", action="store_true", help="machine-readable output")

    p_sim = sub.add_parser("simulate", help="Monte Carlo size or power study")
    p_sim.add_argument("kind", choices=("size", "power"))
    p_sim.add_argument("--lambda", dest="lam", type=float, required=True)
    p_sim.add_argument("--n", type=int, default=2000, help="sample size per replicate")
    p_sim.add_argument("--reps", type=int, default=1000, help="number of replicates")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--delta", type=_delta_arg, default=None,
                       help="local-alternative direction d1,d2 (power only)")
    p_sim.add_argument("--mu", type=float, default=0.0, help="data-generating location")
    p_sim.add_argument("--sigma", type=float, default=1.0, help="data-generating scale")
    p_sim.add_argument("--workers", type=int, default=1, help="parallel workers")
    p_sim.add_argument("--json", action="store_true")

    p_tab = sub.add_parser("tables", help="covariance entries over a tail-exponent grid")
    p_tab.add_argument("--lambda-grid", dest="lambda_grid", required=True,
                       help="grid as start:stop:step with start >= 1")
    p_tab.add_argument("--json", action="store_true")

    p_smp = sub.add_parser("sample", help="write reproducible APD variates to a file")
    p_smp.add_argument("--theta1", type=float, required=True, help="asymmetry in (0, 1)")
    p_smp.add_argument("--theta2", type=float, required=True, help="tail exponent > 0")
    p_smp.add_argument("--mu", type=float, default=0.0)
    p_smp.add_argument("--sigma", type=float, default=1.0)
    p_smp.add_argument("--n", type=int, required=True)
    p_smp.add_argument("--seed", type=int, default=0)
    p_smp.add_argument("--output", required=True)
    p_smp.add_argument("--json", action="store_true")
    return parser


def _delta_arg(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated values")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a pair of decimals: {text!r}") from None


_HANDLERS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "tables": _cmd_tables,
    "sample": _cmd_sample,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateSampleError as exc:
        print(f"error: degenerate sample: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
