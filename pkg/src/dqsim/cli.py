"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 domain violation,
4 resource limit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import algorithms as alg
from . import experiments as ex
from . import kernels
from .boolfn import TruthTable, check_bits, hidden_string_function, index_to_bits, parse_truth_table, point_function
from .circuit import Circuit, combine, depth, deserialize, gate_count, optimize_x_cancellation, serialize, simulate
from .core import probability_vector, sample
from .errors import DomainError, DQSimError, ParseError
from .noise import NoiseModel, Parameterization, evolve_density, noisy_transform

ALGORITHMS = ("bv", "dbva", "grover", "long", "dega")


def default_seed() -> int:
    raw = os.environ.get("DQSIM_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"DQSIM_SEED must be an integer, got {raw!r}") from None


def _function_from_args(args) -> TruthTable:
    given = [x for x in (args.hidden, args.target, args.table) if x is not None]
    if len(given) != 1:
        raise ParseError("give exactly one of --hidden, --target, --table")
    try:
        if args.hidden is not None:
            return hidden_string_function(check_bits(args.hidden))
        if args.target is not None:
            return point_function(check_bits(args.target))
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    return parse_truth_table(Path(args.table).read_text(encoding="utf-8"))


def _parameterization(name: str) -> Parameterization:
    return Parameterization(name)


def _stats(c: Circuit) -> dict:
    return {"gates": gate_count(c), "depth": depth(c)}


def _distribution(c: Circuit, noise: NoiseModel | None) -> np.ndarray:
    if noise is None:
        return probability_vector(simulate(c))
    return probability_vector(evolve_density(noisy_transform(c, noise)))


def cmd_run(args) -> dict:
    f = _function_from_args(args)
    seed = args.seed if args.seed is not None else default_seed()
    noise = NoiseModel(args.noise, _parameterization(args.param)) if args.noise is not None else None
    algo = args.algorithm
    if algo == "dbva":
        if not args.nodes:
            raise ParseError("dbva needs --nodes, e.g. --nodes 3,3")
        try:
            plan = alg.NodePlan.parse(args.nodes)
        except DomainError as exc:
            raise ParseError(str(exc)) from None
        parts = alg.build_dbva(f, plan)
        result = alg.run_dbva(parts, plan)
    elif algo == "dega":
        parts = alg.build_dega(f, layout=args.layout)
        result = alg.run_dega(parts)
    else:
        builder = {"bv": alg.build_bv, "grover": alg.build_grover, "long": alg.build_long}[algo]
        parts = [builder(f)]
        result = alg.run_single(parts[0])

    built = combine(parts) if len(parts) > 1 else parts[0]
    executed = optimize_x_cancellation(built) if args.optimize else built
    dist = _distribution(executed, noise)
    n = executed.n_qubits
    hist = sample(dist, args.shots, seed)
    if args.export:
        Path(args.export).write_text(serialize(executed), encoding="utf-8")
    report = {
        "schema": 1,
        "algorithm": algo,
        "n_qubits": n,
        "backend": kernels.backend_name(),
        "optimized": bool(args.optimize),
        **_stats(executed),
        "unoptimized": _stats(built),
        "parts": [
            {"n_qubits": c.n_qubits, **_stats(c), "optimized": _stats(optimize_x_cancellation(c)),
             "outcome": sub, "probability": p}
            for c, sub, p in zip(parts, result.substrings, result.part_probabilities)
        ],
        "noise": None if noise is None else {"p": noise.p, "parameterization": noise.parameterization.value},
        "probabilities": {index_to_bits(i, n): float(v) for i, v in enumerate(dist) if v > 1e-12},
        "histogram": {"shots": hist.shots, "seed": hist.seed, "counts": dict(sorted(hist.counts.items()))},
        "recovered": result.recovered,
        "success_probability": float(dist[int(result.recovered, 2)]),
    }
    if algo in ("grover", "long", "dega") and f.unique_target() is not None:
        report["target"] = f.unique_target()
    return report


def cmd_simulate(args) -> dict:
    c = deserialize(Path(args.circuit).read_text(encoding="utf-8"))
    seed = args.seed if args.seed is not None else default_seed()
    noise = NoiseModel(args.noise, _parameterization(args.param)) if args.noise is not None else None
    dist = _distribution(c, noise)
    hist = sample(dist, args.shots, seed)
    n = c.n_qubits
    return {
        "schema": 1,
        "n_qubits": n,
        **_stats(c),
        "probabilities": {index_to_bits(i, n): float(v) for i, v in enumerate(dist) if v > 1e-12},
        "histogram": {"shots": hist.shots, "seed": hist.seed, "counts": dict(sorted(hist.counts.items()))},
    }


def _parse_range(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"bad range {text!r}") from None


def cmd_depth_table(args) -> str:
    rows = ex.depth_table(_parse_range(args.n), tuple(args.algorithms.split(",")))
    return ex.depth_table_csv(rows)


def cmd_noise_sweep(args) -> str:
    names = args.fixtures.split(",")
    try:
        grid = [float(p) for p in args.grid.split(",")] if args.grid else list(ex.NOISE_GRID)
    except ValueError:
        raise ParseError(f"bad p grid {args.grid!r}") from None
    seed = args.seed if args.seed is not None else default_seed()
    rows = ex.noise_sweep(names, grid, _parameterization(args.param), args.shots, seed, args.workers)
    text = ex.noise_sweep_csv(rows)
    if args.chart:
        ex.noise_chart_svg(rows, Path(args.chart))
    return text


def cmd_reproduce(args) -> tuple[str, str]:
    seed = args.seed if args.seed is not None else default_seed()
    csv_text, side = ex.reproduce(args.table_id, _parameterization(args.param), seed)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / f"{args.table_id}.csv").write_text(csv_text, encoding="utf-8")
    (outdir / f"{args.table_id}.json").write_text(ex.sidecar_json(side), encoding="utf-8")
    return csv_text, ex.sidecar_json(side)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dqsim", description=__doc__.splitlines()[0])
    p.add_argument("--backend", choices=sorted(kernels.BACKENDS), help="kernel backend")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_noise(sp):
        sp.add_argument("--noise", type=float, metavar="P", help="depolarizing probability after every gate")
        sp.add_argument("--param", choices=[x.value for x in Parameterization], default="pauli")

    r = sub.add_parser("run", help="build, optimize and simulate one algorithm")
    r.add_argument("algorithm", choices=ALGORITHMS)
    r.add_argument("--hidden", metavar="BITS")
    r.add_argument("--target", metavar="BITS")
    r.add_argument("--table", metavar="FILE", help="truth-table file")
    r.add_argument("--nodes", metavar="N0,N1,...")
    r.add_argument("--layout", choices=("trailing", "leading"), default="trailing")
    r.add_argument("--optimize", action="store_true")
    r.add_argument("--shots", type=int, default=10000)
    r.add_argument("--seed", type=int)
    r.add_argument("--export", metavar="FILE", help="write the executed circuit in text format")
    r.add_argument("--out", metavar="FILE")
    add_noise(r)

    s = sub.add_parser("simulate", help="simulate a circuit text file")
    s.add_argument("circuit")
    s.add_argument("--shots", type=int, default=10000)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", metavar="FILE")
    add_noise(s)

    d = sub.add_parser("depth-table", help="built depths against the closed forms")
    d.add_argument("--n", default="2-10", help="range like 2-10 or list like 2,4,5")
    d.add_argument("--algorithms", default="grover,long,dega")
    d.add_argument("--out", metavar="FILE")

    w = sub.add_parser("noise-sweep", help="P(target) against depolarizing probability")
    w.add_argument("--fixtures", default=",".join(ex.FIVE_QUBIT_TRIO),
                   help="comma list from: " + ", ".join(ex.FIXTURES))
    w.add_argument("--grid", help="comma list of p values (default 0,0.01,...,0.09)")
    w.add_argument("--param", choices=[x.value for x in Parameterization], default="pauli")
    w.add_argument("--shots", type=int, default=10000)
    w.add_argument("--seed", type=int)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--out", metavar="FILE")
    w.add_argument("--chart", metavar="FILE.svg")

    q = sub.add_parser("reproduce", help="regenerate a published table with expected-value sidecar")
    q.add_argument("table_id", metavar="TABLE", help="one of: " + ", ".join(ex.REPRODUCIBLE))
    q.add_argument("--outdir", default="results")
    q.add_argument("--param", choices=[x.value for x in Parameterization], default="pauli")
    q.add_argument("--seed", type=int)
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.backend:
            kernels.set_backend(args.backend)
        if getattr(args, "shots", 1) < 1:
            raise ParseError("--shots must be >= 1")
        if args.command == "run":
            _emit(json.dumps(cmd_run(args), indent=2) + "\n", args.out)
        elif args.command == "simulate":
            _emit(json.dumps(cmd_simulate(args), indent=2) + "\n", args.out)
        elif args.command == "depth-table":
            _emit(cmd_depth_table(args), args.out)
        elif args.command == "noise-sweep":
            _emit(cmd_noise_sweep(args), args.out)
        elif args.command == "reproduce":
            if args.table_id not in ex.REPRODUCIBLE:
                raise ParseError(f"unknown table id {args.table_id!r}; choose from {', '.join(ex.REPRODUCIBLE)}")
            csv_text, _ = cmd_reproduce(args)
            sys.stdout.write(csv_text)
    except DQSimError as exc:
        print(f"dqsim: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"dqsim: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
