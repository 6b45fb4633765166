"""Command-line front end: compute bounds, sweep constant tables, and run
verification suites, with machine-readable JSON or CSV output.

Exit codes: 0 success, 1 verification found a violation, 2 invalid query,
3 unbounded regime when --require-finite was set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from . import __version__
from .bounds import (
    BoundReport,
    MomentQuery,
    SampleModel,
    bound_moment,
)
from .errors import DomainError
from .oracle import (
    DiscreteDistribution,
    exact_moment_iid_discrete,
    exact_moment_indep_discrete,
    mc_estimate_moment,
    moment_from_quantile,
    sweep_bound_validity,
    sweep_min_vs_root_moment,
    sweep_sharpness,
    sweep_step_inequality,
    sweep_survival_power,
    witness_divergence,
)
from .serialize import fmt17

_TOOL = "orderstat-bounds"


def _parse_means(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise DomainError(f"could not parse means list {text!r}: {exc}") from None


def _parse_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    try:
        lo_i, hi_i = int(lo), int(hi or lo)
    except ValueError:
        raise DomainError(f"range must look like 'lo:hi', got {text!r}") from None
    return range(lo_i, hi_i + 1)

def _parse_alpha_grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"alpha grid must be 'lo:hi:count' or a comma list, got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise DomainError("alpha grid count must be at least 1")
        if count == 1:
            return (lo,)
        step = (hi - lo) / (count - 1)
        return tuple(lo + i * step for i in range(count))
    return tuple(float(part) for part in text.split(","))


def _report_payload(report: BoundReport) -> dict:
    return {
        "bound": fmt17(report.bound),
        "constant_A": None if report.constant_A is None else fmt17(report.constant_A),
        "rho": None if report.rho is None else fmt17(report.rho),
        "regime": report.regime.value,
        "attainability": report.attainability.value,
        "boundary_snapped": report.boundary_snapped,
        "mean_order": None if report.mean_order is None else list(report.mean_order),
        "extremal": None if report.extremal is None else report.extremal.to_payload(),
    }


def _verification_payload(
    query: MomentQuery, report: BoundReport, method: str, trials: int, seed: int
) -> dict:
    if report.is_unbounded:
        return {
            "method": method,
            "skipped": "unbounded regime; run `verify --suite witness` for the divergence check",
        }
    extremal = report.extremal
    if method == "exact":
        if query.model is SampleModel.IID:
            if hasattr(extremal, "atoms"):
                value = exact_moment_iid_discrete(
                    DiscreteDistribution.from_extremal(extremal), query.k, query.n, query.alpha
                )
            else:
                value = moment_from_quantile(extremal, query.k, query.n, query.alpha)
        else:
            components = [DiscreteDistribution.from_extremal(c) for c in extremal.components]
            value = exact_moment_indep_discrete(components, query.k, query.alpha)
        payload = {"method": "exact", "value": fmt17(value)}
    else:
        if query.model is SampleModel.IID:
            samplers = [extremal] * query.n
        else:
            samplers = list(extremal.components)
        estimate = mc_estimate_moment(samplers, query.k, query.alpha, trials, seed)
        value = estimate.mean
        payload = {"method": "mc", **estimate.to_payload()}
    payload["relative_gap"] = fmt17((value - report.bound) / report.bound)
    return payload


def _envelope_to_csv(envelope: dict) -> str:
    flat: dict[str, str] = {}

    def flatten(prefix: str, obj) -> None:
        if isinstance(obj, dict):
            for key, val in obj.items():
                flatten(f"{prefix}.{key}" if prefix else key, val)
        elif isinstance(obj, (list, tuple)):
            flat[prefix] = json.dumps(obj, separators=(",", ":"))
        elif obj is None:
            flat[prefix] = ""
        elif isinstance(obj, bool):
            flat[prefix] = "true" if obj else "false"
        else:
            flat[prefix] = str(obj)

    flatten("", envelope)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(flat.keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buffer.getvalue()


def cmd_bound(args: argparse.Namespace) -> int:
    model = SampleModel.IID if args.model == "iid" else SampleModel.INDEPENDENT
    if model is SampleModel.IID:
        if args.mean is None:
            raise DomainError("model=iid requires --mean")
        means = (args.mean,)
    else:
        if args.means is None:
            raise DomainError("model=indep requires --means")
        means = _parse_means(args.means)
    query = MomentQuery(model=model, n=args.n, k=args.k, alpha=args.alpha, means=means)
    report = bound_moment(query)
    if args.require_finite and report.is_unbounded:
        print("bound is unbounded in this regime and --require-finite was set", file=sys.stderr)
        return 3
    envelope = {
        "tool": _TOOL,
        "version": __version__,
        "seed": args.seed,
        "query": {
            "model": args.model,
            "n": query.n,
            "k": query.k,
            "alpha": fmt17(query.alpha),
            "means": [fmt17(m) for m in query.means],
        },
        **_report_payload(report),
    }
    if args.verify is not None:
        envelope["verification"] = _verification_payload(
            query, report, args.verify, args.trials, args.seed
        )
    if args.format == "json":
        print(json.dumps(envelope, indent=2))
    else:
        print(_envelope_to_csv(envelope), end="")
    return 0


_TABLE_COLUMNS = ("n", "k", "alpha", "regime", "rho", "A", "bound_for_unit_mean")


def _table_cell(n: int, k: int, alpha: float) -> Optional[tuple]:
    if not 1 <= k <= n:
        return None
    report = bound_moment(MomentQuery(SampleModel.IID, n, k, alpha, (1.0,)))
    return (
        str(n),
        str(k),
        fmt17(alpha),
        report.regime.value,
        "" if report.rho is None else fmt17(report.rho),
        "" if report.constant_A is None else fmt17(report.constant_A),
        fmt17(report.bound),
    )


def cmd_table(args: argparse.Namespace) -> int:
    ns = _parse_range(args.n_range)
    ks = _parse_range(args.k_range)
    alphas = _parse_alpha_grid(args.alpha_grid)
    cells = [
        (n, k, alpha)
        for n in ns
        for k in ks
        for alpha in sorted(alphas)
        if 1 <= k <= n
    ]
    if not cells:
        print("empty table grid", file=sys.stderr)
        return 2
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(lambda c: _table_cell(*c), cells))
    else:
        rows = [_table_cell(*c) for c in cells]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_TABLE_COLUMNS)
    for row in rows:
        if row is not None:
            writer.writerow(row)
    print(buffer.getvalue(), end="")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    suites = []
    wanted = args.suite
    if wanted in ("sharpness", "all"):
        suites.append(sweep_sharpness())
    if wanted in ("sweep", "all"):
        suites.append(sweep_bound_validity(cases=args.cases, seed=args.seed))
        suites.append(sweep_survival_power(cases=args.cases, seed=args.seed + 1))
        suites.append(sweep_min_vs_root_moment(cases=args.cases, seed=args.seed + 2))
    if wanted in ("stepfn", "all"):
        suites.append(sweep_step_inequality(cases=args.cases, seed=args.seed + 3))
    if wanted in ("witness", "all"):
        suites.append(witness_divergence())
    total_violations = sum(s.violations for s in suites)
    payload = {
        "tool": _TOOL,
        "version": __version__,
        "seed": args.seed,
        "suites": [s.to_payload() for s in suites],
        "violations_total": total_violations,
    }
    print(json.dumps(payload, indent=2))
    return 0 if total_violations == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=_TOOL,
        description="Sharp mean-based upper bounds for moments of order statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="compute one moment bound")
    p_bound.add_argument("--model", choices=("iid", "indep"), required=True)
    p_bound.add_argument("--n", type=int, required=True)
    p_bound.add_argument("--k", type=int, required=True)
    p_bound.add_argument("--alpha", type=float, required=True)
    p_bound.add_argument("--mean", type=float, help="population mean (iid model)")
    p_bound.add_argument("--means", type=str, help="comma-separated means (indep model)")
    p_bound.add_argument("--format", choices=("json", "csv"), default="json")
    p_bound.add_argument("--verify", choices=("exact", "mc"), default=None)
    p_bound.add_argument("--trials", type=int, default=10**5)
    p_bound.add_argument("--seed", type=int, default=0)
    p_bound.add_argument("--require-finite", action="store_true")
    p_bound.set_defaults(func=cmd_bound)

    p_table = sub.add_parser("table", help="sweep bound constants over a grid")
    p_table.add_argument("--n-range", type=str, required=True, help="inclusive 'lo:hi'")
    p_table.add_argument("--k-range", type=str, required=True, help="inclusive 'lo:hi'")
    p_table.add_argument(
        "--alpha-grid", type=str, required=True, help="comma list or 'lo:hi:count'"
    )
    p_table.add_argument("--threads", type=int, default=1)
    p_table.set_defaults(func=cmd_table)

    p_verify = sub.add_parser("verify", help="run randomized verification suites")
    p_verify.add_argument(
        "--suite",
        choices=("sharpness", "sweep", "stepfn", "witness", "all"),
        default="all",
    )
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--cases", type=int, default=1000)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"invalid query: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
