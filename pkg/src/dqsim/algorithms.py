"""Builders and runners for BV, distributed BV, Grover, Long and distributed exact Grover.

Distributed variants return one circuit per node (or part), each on its
own local register. The nodes never share quantum state; their measured
substrings are joined classically in node order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boolfn import (
    TruthTable,
    dega_blocks,
    dega_subfunction,
    index_to_bits,
    is_linear,
    restrict_block,
)
from .circuit import Circuit, simulate
from .core import probability_vector
from .errors import DomainError
from .oracles import (
    h_layer,
    measure_all,
    synth_phase_oracle,
    synth_rotation_oracle,
    synth_zero_reflection,
    synth_zero_rotation,
)


@dataclass(frozen=True)
class NodePlan:
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise DomainError("node sizes must be >= 1")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for s in self.sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return out

    @classmethod
    def parse(cls, text: str) -> "NodePlan":
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError:
            raise DomainError(f"bad node list {text!r}") from None


@dataclass(frozen=True)
class LongParams:
    n: int
    theta: float
    J: int
    phi: float


@dataclass
class AlgorithmResult:
    recovered: str
    probability: float
    substrings: list[str] = field(default_factory=list)
    part_probabilities: list[float] = field(default_factory=list)
    circuits: list[Circuit] = field(default_factory=list)


def build_bv(f_s: TruthTable) -> Circuit:
    if not is_linear(f_s):
        raise DomainError("not a hidden-string function")
    n = f_s.n
    return h_layer(n) + synth_phase_oracle(f_s) + h_layer(n) + measure_all(n)


def build_dbva(f_s: TruthTable, plan: NodePlan) -> list[Circuit]:
    """One BV circuit per node, over f_s with every other node's block fixed to 0."""
    if plan.n != f_s.n:
        raise DomainError("node sizes do not sum to n")
    if not is_linear(f_s):
        raise DomainError("not a hidden-string function")
    return [build_bv(restrict_block(f_s, block)) for block in plan.blocks]


def _most_likely(circuit: Circuit) -> tuple[str, float]:
    p = probability_vector(simulate(circuit))
    best = int(np.argmax(p))
    return index_to_bits(best, circuit.n_qubits), float(p[best])


def _run_parts(circuits: Sequence[Circuit], workers: int | None) -> AlgorithmResult:
    if workers and workers > 1 and len(circuits) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_most_likely, circuits))
    else:
        outs = [_most_likely(c) for c in circuits]
    subs = [o for o, _ in outs]
    probs = [p for _, p in outs]
    return AlgorithmResult(
        recovered="".join(subs),
        probability=float(math.prod(probs)),
        substrings=subs,
        part_probabilities=probs,
        circuits=list(circuits),
    )


def run_dbva(circuits: Sequence[Circuit], plan: NodePlan, workers: int | None = None) -> AlgorithmResult:
    if [c.n_qubits for c in circuits] != list(plan.sizes):
        raise DomainError("circuits do not match the node plan")
    return _run_parts(circuits, workers)


def run_single(circuit: Circuit) -> AlgorithmResult:
    return _run_parts([circuit], None)


def grover_iterations(n: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt(2**n))


def grover_success_probability(n: int) -> float:
    theta = math.asin(math.sqrt(1 / 2**n))
    return math.sin((2 * grover_iterations(n) + 1) * theta) ** 2


def long_params(n: int) -> LongParams:
    if n < 1:
        raise DomainError("need n >= 1")
    theta = math.asin(math.sqrt(1 / 2**n))
    # n=2 sits exactly on an integer (1) that floats land just below
    J = math.floor((math.pi / 2 - theta) / (2 * theta) + 1e-9)
    phi = 2 * math.asin(math.sin(math.pi / (4 * J + 6)) / math.sin(theta))
    return LongParams(n, theta, J, phi)


def _require_target(f: TruthTable) -> str:
    tau = f.unique_target()
    if tau is None:
        raise DomainError("requires unique target")
    return tau


def build_grover(f: TruthTable, iterations: int | None = None) -> Circuit:
    """H layer, then k rounds of [oracle, H, zero reflection, H], then measure.

    The global minus sign of the Grover operator is left out.
    """
    _require_target(f)
    n = f.n
    k = grover_iterations(n) if iterations is None else iterations
    step = synth_phase_oracle(f) + h_layer(n) + synth_zero_reflection(n) + h_layer(n)
    c = h_layer(n)
    for _ in range(k):
        c = c + step
    return c + measure_all(n)


def build_long(f: TruthTable, iterations: int | None = None) -> Circuit:
    """Phase-matched search: J+1 rounds with both reflections replaced by phi rotations."""
    _require_target(f)
    n = f.n
    params = long_params(n)
    k = params.J + 1 if iterations is None else iterations
    step = (
        synth_rotation_oracle(f, params.phi)
        + h_layer(n)
        + synth_zero_rotation(n, params.phi)
        + h_layer(n)
    )
    c = h_layer(n)
    for _ in range(k):
        c = c + step
    return c + measure_all(n)


def build_dega(f: TruthTable, layout: str = "trailing") -> list[Circuit]:
    """One small exact search per part of the target.

    Two-bit parts run a single Grover iteration (exact for four items); a
    three-bit part (odd n) runs Long's search with two iterations.
    """
    _require_target(f)
    n = f.n
    parts = []
    for i, block in enumerate(dega_blocks(n, layout)):
        sub = dega_subfunction(f, i, n, layout)
        if len(block) == 2:
            parts.append(build_grover(sub, iterations=1))
        else:
            parts.append(build_long(sub, iterations=2))
    return parts


def run_dega(parts: Sequence[Circuit], workers: int | None = None) -> AlgorithmResult:
    return _run_parts(parts, workers)
