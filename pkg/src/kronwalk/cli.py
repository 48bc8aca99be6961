"""Command-line front end.

    kronwalk simulate --M 256 --j 1
    kronwalk simulate --M 4 --j 6 --mode full
    kronwalk reduce --M 4 --j 3 --partition-json cells.json
    kronwalk analyze --M 256 --j 3
    kronwalk verify all
    kronwalk sweep --M 4 8 16 --j 2 3 --out-dir results/

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from . import analysis
from .errors import CapacityExceeded, InvalidArgument, NumericalFailure, SingularFormula
from .graph import kron_complete
from .reduce import (
    equitable_partition,
    in_layout,
    kronecker_partition,
    reduce_hamiltonian,
    third_order_census,
    third_order_layout,
    write_census_csv,
    write_partition_json,
)
from .verify import run_suite
from .walk import SearchProblem, probability_series

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
AUTO_REDUCE_ABOVE = 4096
REFINE_LIMIT = 4096


@dataclass(frozen=True)
class RunConfig:
    M: int
    j: int
    gamma: float | None = None
    gamma_rule: str = "default"
    marked: int = 0
    t_max: float | None = None
    samples: int = 512
    mode: str = "auto"
    propagator: str = "auto"
    csv_path: str | None = None
    json_path: str | None = None

    def __post_init__(self):
        if self.M < 2 or self.j < 1:
            raise InvalidArgument("need M >= 2 and j >= 1")
        if self.mode not in ("full", "reduced", "auto"):
            raise InvalidArgument(f"unknown mode {self.mode!r}")
        if self.samples < 2:
            raise InvalidArgument("need at least two samples")

    @property
    def N(self) -> int:
        return self.M**self.j

    def resolved_mode(self) -> str:
        if self.mode == "auto":
            return "reduced" if self.N > AUTO_REDUCE_ABOVE else "full"
        return self.mode

    def resolved_gamma(self) -> analysis.GammaChoice:
        if self.gamma is not None:
            return analysis.GammaChoice(self.gamma, "user")
        if self.gamma_rule == "critical":
            return analysis.critical_gamma(self.M, self.j)
        if self.gamma_rule == "practical":
            return analysis.practical_gamma(self.M, self.j)
        return analysis.default_gamma(self.M, self.j)

    def default_stem(self) -> str:
        return f"kron_M{self.M}_j{self.j}"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_curve_csv(path, times, probabilities):
    with open(path, "w", newline="") as fh:
        fh.write("t,probability\n")
        for t, p in zip(times, probabilities):
            fh.write(f"{_fmt(t)},{_fmt(p)}\n")


def run(config: RunConfig) -> dict:
    """Simulate one configuration, write its CSV curve and JSON summary."""
    choice = config.resolved_gamma()
    mode = config.resolved_mode()
    g = kron_complete(config.M, config.j)
    problem = SearchProblem(g, config.marked, choice.value)
    predicted = analysis.predicted_runtime(config.N)
    t_max = config.t_max if config.t_max is not None else 1.5 * predicted
    partition = None
    if mode == "reduced":
        partition = kronecker_partition(config.M, config.j, config.marked, materialize=False)
    result = probability_series(problem, t_max, config.samples, partition=partition, method=config.propagator)
    summary = {
        "M": config.M,
        "j": config.j,
        "N": config.N,
        "gamma": choice.value,
        "gamma_formula": choice.formula_id,
        "mode": mode,
        "propagator": result.propagator,
        "peak_time": result.peak_time,
        "peak_probability": result.peak_probability,
        "boundary_peak": result.boundary_peak,
        "predicted_time": predicted,
    }
    csv_path = config.csv_path or f"{config.default_stem()}.csv"
    json_path = config.json_path or f"{config.default_stem()}.json"
    write_curve_csv(csv_path, result.times, result.probabilities)
    Path(json_path).write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def _run_quiet(config: RunConfig) -> tuple[RunConfig, dict | None, str | None]:
    try:
        return config, run(config), None
    except (CapacityExceeded, InvalidArgument, NumericalFailure, SingularFormula) as exc:
        return config, None, f"{type(exc).__name__}: {exc}"


def _fail(exc: Exception) -> int:
    if isinstance(exc, SingularFormula):
        print(f"error: {exc} (fallback: --gamma-rule practical, formula {exc.fallback})", file=sys.stderr)
        return EXIT_NUMERIC
    if isinstance(exc, CapacityExceeded):
        print(f"error: {exc}; try --mode reduced", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(exc, NumericalFailure):
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


# -- subcommands ---------------------------------------------------------------

def _config_from_args(args) -> RunConfig:
    return RunConfig(
        M=args.M,
        j=args.j,
        gamma=args.gamma,
        gamma_rule=args.gamma_rule,
        marked=args.marked,
        t_max=args.t_max,
        samples=args.samples,
        mode=args.mode,
        propagator=args.propagator,
        csv_path=args.csv,
        json_path=args.json,
    )


def cmd_simulate(args) -> int:
    try:
        summary = run(_config_from_args(args))
    except (CapacityExceeded, InvalidArgument, NumericalFailure, SingularFormula) as exc:
        return _fail(exc)
    print(f"peak_time={_fmt(summary['peak_time'])}")
    print(f"peak_probability={_fmt(summary['peak_probability'])}")
    print(f"predicted_time={_fmt(summary['predicted_time'])}")
    if summary["boundary_peak"]:
        print("warning: no interior maximum; peak is at the scan boundary", file=sys.stderr)
    return EXIT_OK


def cmd_reduce(args) -> int:
    M, j = args.M, args.j
    try:
        choice = analysis.GammaChoice(args.gamma, "user") if args.gamma else analysis.default_gamma(M, j)
        g = kron_complete(M, j)
        method = args.method
        if method == "auto":
            method = "refine" if g.num_vertices <= REFINE_LIMIT else "closed-form"
        if method == "refine":
            p = equitable_partition(g, args.marked)
        else:
            p = kronecker_partition(M, j, args.marked, materialize=args.partition_json is not None)
        rh = reduce_hamiltonian(g, p, choice.value, args.marked)
    except (CapacityExceeded, InvalidArgument, NumericalFailure, SingularFormula) as exc:
        return _fail(exc)
    report = {
        "M": M,
        "j": j,
        "N": g.num_vertices,
        "gamma": choice.value,
        "method": method,
        "sizes": list(p.sizes),
        "neighbor_counts": p.counts.tolist(),
        "reduced_adjacency": rh.adjacency.tolist(),
        "reduced_hamiltonian": rh.matrix.tolist(),
    }
    if j == 3 and M >= 3:
        layout = third_order_layout(p, M)
        report["abcd_layout"] = list(layout)
        report["reduced_adjacency_abcd"] = in_layout(rh.adjacency, layout).tolist()
    if args.partition_json:
        write_partition_json(p, args.partition_json)
    _emit_json(report, args.json)
    return EXIT_OK


def analyze_report(M: int, j: int) -> dict:
    N = M**j
    report: dict = {"M": M, "j": j, "N": N, "predicted_time": analysis.predicted_runtime(N)}
    try:
        report["critical_gamma"] = asdict(analysis.critical_gamma(M, j))
    except SingularFormula as exc:
        report["critical_gamma"] = {"error": str(exc), "fallback": exc.fallback}
    report["practical_gamma"] = asdict(analysis.practical_gamma(M, j))
    if M >= 3:
        report["srg_closed_form"] = asdict(analysis.srg_closed_form(M))
        report["srg_search_conditions"] = asdict(analysis.srg_search_conditions(M))
    if M >= 4:
        report["perturbation"] = analysis.perturbation_report(M).as_dict()
        report["taylor_gap"] = asdict(analysis.gamma_taylor_gap(M))
    return report


def cmd_analyze(args) -> int:
    if args.M < 2 or args.j < 1:
        print("error: need M >= 2 and j >= 1", file=sys.stderr)
        return EXIT_USAGE
    report = analyze_report(args.M, args.j)
    if args.census_csv:
        if args.M < 3:
            print("error: census needs M >= 3", file=sys.stderr)
            return EXIT_USAGE
        write_census_csv(third_order_census(args.M), args.census_csv)
    _emit_json(report, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.suite:<9} {c.name:<{width}}  {status}  {c.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_sweep(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    configs = []
    for M in args.M:
        for j in args.j:
            try:
                base = RunConfig(M=M, j=j, gamma_rule=args.gamma_rule, samples=args.samples, mode=args.mode)
            except InvalidArgument as exc:
                return _fail(exc)
            stem = out_dir / base.default_stem()
            configs.append(replace(base, csv_path=f"{stem}.csv", json_path=f"{stem}.json"))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_run_quiet, configs))
    else:
        results = [_run_quiet(c) for c in configs]
    fields = ["M", "j", "N", "gamma", "gamma_formula", "mode", "peak_time", "peak_probability", "predicted_time"]
    status = EXIT_OK
    with open(out_dir / "sweep_summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields + ["error"])
        for config, summary, err in results:
            if summary is None:
                status = EXIT_NUMERIC
                writer.writerow([config.M, config.j, config.N] + [""] * (len(fields) - 3) + [err])
                print(f"M={config.M} j={config.j}: {err}", file=sys.stderr)
                continue
            row = [summary[f] for f in fields]
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row] + [""])
            print(
                f"M={config.M:<5} j={config.j:<2} peak_time={summary['peak_time']:.6g} "
                f"p={summary['peak_probability']:.6f} predicted={summary['predicted_time']:.6g}"
            )
    return status


def _emit_json(report: dict, path: str | None):
    text = json.dumps(report, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kronwalk", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_args(p):
        p.add_argument("--M", type=int, required=True, help="initiator size")
        p.add_argument("--j", type=int, required=True, help="Kronecker order")

    sim = sub.add_parser("simulate", help="success-probability curve and peak")
    add_graph_args(sim)
    sim.add_argument("--gamma", type=float, default=None, help="jumping rate (overrides --gamma-rule)")
    sim.add_argument("--gamma-rule", choices=["default", "critical", "practical"], default="default")
    sim.add_argument("--marked", type=int, default=0)
    sim.add_argument("--t-max", type=float, default=None, help="default 1.5 * pi sqrt(N) / 2")
    sim.add_argument("--samples", type=int, default=512)
    sim.add_argument("--mode", choices=["full", "reduced", "auto"], default="auto")
    sim.add_argument("--propagator", choices=["auto", "exact", "chebyshev"], default="auto")
    sim.add_argument("--csv", default=None, help="curve output (default kron_M<M>_j<j>.csv)")
    sim.add_argument("--json", default=None, help="summary output (default kron_M<M>_j<j>.json)")
    sim.set_defaults(func=cmd_simulate)

    red = sub.add_parser("reduce", help="equitable partition and quotient Hamiltonian")
    add_graph_args(red)
    red.add_argument("--gamma", type=float, default=None)
    red.add_argument("--marked", type=int, default=0)
    red.add_argument("--method", choices=["auto", "refine", "closed-form"], default="auto")
    red.add_argument("--partition-json", default=None)
    red.add_argument("--json", default=None)
    red.set_defaults(func=cmd_reduce)

    ana = sub.add_parser("analyze", help="closed-form rates, SRG data, perturbation report")
    add_graph_args(ana)
    ana.add_argument("--census-csv", default=None, help="write the third-order census table")
    ana.add_argument("--json", default=None)
    ana.set_defaults(func=cmd_analyze)

    ver = sub.add_parser("verify", help="run brute-force oracle suites")
    ver.add_argument("suite", choices=["srg", "census", "quotient", "diameter", "all"])
    ver.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="simulate a grid of (M, j)")
    sw.add_argument("--M", type=int, nargs="+", required=True)
    sw.add_argument("--j", type=int, nargs="+", required=True)
    sw.add_argument("--gamma-rule", choices=["default", "critical", "practical"], default="default")
    sw.add_argument("--samples", type=int, default=512)
    sw.add_argument("--mode", choices=["full", "reduced", "auto"], default="auto")
    sw.add_argument("--out-dir", default="sweep")
    sw.add_argument("--workers", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
