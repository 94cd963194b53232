"""Single-qubit depolarizing noise: exact density evolution and trajectory sampling."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import core, kernels
from .boolfn import index_to_bits
from .circuit import Circuit, GateInstance
from .core import DensityState, Gate, Histogram
from .errors import DomainError, ResourceLimitError

MAX_DENSITY_QUBITS = 8
TRAJECTORY_CHUNK = 8192


class Parameterization(enum.Enum):
    UNIFORM_MIX = "uniform"  # (1-p) rho + p I/2
    PAULI_THIRDS = "pauli"  # (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)


@dataclass(frozen=True)
class NoiseModel:
    p: float
    parameterization: Parameterization = Parameterization.PAULI_THIRDS

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError("noise probability must lie in [0, 1]")

    @property
    def pauli_probability(self) -> float:
        """Total probability of an X, Y or Z error."""
        if self.parameterization is Parameterization.UNIFORM_MIX:
            return 0.75 * self.p
        return self.p

    def kraus(self) -> np.ndarray:
        q = self.pauli_probability
        ops = [math.sqrt(1 - q) * np.eye(2)]
        for kind in (Gate.X, Gate.Y, Gate.Z):
            ops.append(math.sqrt(q / 3) * core.gate_unitary(kind))
        return np.ascontiguousarray(np.array(ops, dtype=np.complex128))


@dataclass(frozen=True)
class Channel:
    wire: int


Op = Union[GateInstance, Channel]


@dataclass(frozen=True)
class NoisyProgram:
    n_qubits: int
    ops: tuple[Op, ...]
    model: NoiseModel

    def channel_count(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, Channel))


def depolarize(rho: DensityState, qubit: int, model: NoiseModel) -> DensityState:
    if not 0 <= qubit < rho.n_qubits:
        raise DomainError("invalid wire")
    m = rho.matrix.copy()
    kernels.backend.apply_kraus_1q(m, rho.n_qubits, qubit, model.kraus())
    return DensityState(rho.n_qubits, m)


def noisy_transform(circuit: Circuit, model: NoiseModel) -> NoisyProgram:
    """Insert one channel on every wire a gate touches, right after the gate."""
    ops: list[Op] = []
    for gi in circuit.gates:
        ops.append(gi)
        if gi.kind.is_unitary:
            ops.extend(Channel(w) for w in gi.wires)
    return NoisyProgram(circuit.n_qubits, tuple(ops), model)


def evolve_density(program: NoisyProgram, initial: DensityState | None = None) -> DensityState:
    n = program.n_qubits
    if n > MAX_DENSITY_QUBITS:
        raise ResourceLimitError(f"density-matrix limit: {n} > {MAX_DENSITY_QUBITS} qubits")
    rho = (initial if initial is not None else DensityState.zero(n)).matrix.copy()
    flat = rho.reshape(1, -1)
    kraus = program.model.kraus()
    noiseless = program.model.pauli_probability == 0
    for op in program.ops:
        if isinstance(op, Channel):
            if not noiseless:
                kernels.backend.apply_kraus_1q(rho, n, op.wire, kraus)
            continue
        core._apply_inplace(flat, 2 * n, op.kind, op.wires, op.phi)
        core._apply_inplace(flat, 2 * n, op.kind, tuple(w + n for w in op.wires), op.phi, conj=True)
    return DensityState(n, rho)


def trajectory_sample(program: NoisyProgram, shots: int, seed: int = 0) -> Histogram:
    """Monte-Carlo unraveling: each channel applies a random Pauli per trajectory.

    Trajectories run in chunks; chunk c draws from ``default_rng([seed, c])``
    so results do not depend on how chunks are scheduled.
    """
    if shots < 1:
        raise DomainError("empty sample request")
    n = program.n_qubits
    q = program.model.pauli_probability
    weights = np.array([1 - q, q / 3, q / 3, q / 3])
    totals = np.zeros(1 << n, dtype=np.int64)
    for chunk, start in enumerate(range(0, shots, TRAJECTORY_CHUNK)):
        size = min(TRAJECTORY_CHUNK, shots - start)
        rng = np.random.default_rng([seed, chunk])
        psi = np.zeros((size, 1 << n), dtype=np.complex128)
        psi[:, 0] = 1
        for op in program.ops:
            if isinstance(op, Channel):
                if q > 0:
                    choice = rng.choice(4, size=size, p=weights).astype(np.int8)
                    kernels.backend.apply_pauli_rows(psi, n, op.wire, choice)
                continue
            core._apply_inplace(psi, n, op.kind, op.wires, op.phi)
        probs = np.abs(psi) ** 2
        cdf = np.cumsum(probs, axis=1)
        u = rng.random(size) * cdf[:, -1]
        outcomes = (cdf < u[:, None]).sum(axis=1)
        totals += np.bincount(np.minimum(outcomes, (1 << n) - 1), minlength=1 << n)
    counts = {index_to_bits(i, n): int(c) for i, c in enumerate(totals) if c}
    return Histogram(counts, shots, seed)
