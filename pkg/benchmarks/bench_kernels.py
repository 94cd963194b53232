"""Time the compiled and pure-Python kernel backends on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import timeit

from dqsim import algorithms as alg
from dqsim import experiments as ex
from dqsim import kernels
from dqsim.boolfn import hidden_string_function
from dqsim.circuit import gate_count, simulate
from dqsim.noise import NoiseModel, evolve_density, noisy_transform, trajectory_sample


def workloads():
    bv12 = alg.build_bv(hidden_string_function("101100111010"))
    dbva = noisy_transform(ex.fixture("DBVA-3-opt").circuit, NoiseModel(0.03))
    bv6 = noisy_transform(ex.fixture("BV").circuit, NoiseModel(0.03))
    dega = noisy_transform(ex.fixture("dega-5q-01001").circuit, NoiseModel(0.05))
    return {
        f"state vector, BV n=12, {gate_count(bv12)} gates": lambda: simulate(bv12),
        "density, DBVA-3 n=6": lambda: evolve_density(dbva),
        f"density, BV n=6, {bv6.channel_count()} channels": lambda: evolve_density(bv6),
        "trajectories, DEGA n=5, 20k shots": lambda: trajectory_sample(dega, 20_000, seed=1),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    jobs = workloads()
    print(f"{'workload':<40}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in jobs.items():
        times = {}
        for name in names:
            with kernels.use_backend(name):
                fn()  # warm caches
                times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        row = f"{label:<40}" + "".join(f"{times[n] * 1e3:>10.1f}ms" for n in names)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
