"""Gate definitions, dense pure/mixed states, and measurement sampling.

Qubit ``q`` of an n-qubit register is bit ``n - 1 - q`` of the basis index,
so the printed outcome string reads b_0 b_1 ... b_{n-1} left to right.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .boolfn import index_to_bits
from .errors import DomainError

ATOL = 1e-9


class Gate(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    T = "T"
    TDG = "Tdg"
    PS = "PS"  # PhaseShift(phi)
    CX = "CX"  # multi-controlled X, controls first, target last
    MCZ = "MCZ"
    MCPS = "MCPS"  # multi-controlled PhaseShift(phi)
    MEASURE = "MEASURE"
    BARRIER = "BARRIER"

    @property
    def is_unitary(self) -> bool:
        return self not in (Gate.MEASURE, Gate.BARRIER)

    @property
    def has_phi(self) -> bool:
        return self in (Gate.PS, Gate.MCPS)

    @property
    def single_qubit(self) -> bool:
        return self in _SINGLE


_SINGLE = {Gate.I, Gate.X, Gate.Y, Gate.Z, Gate.H, Gate.T, Gate.TDG, Gate.PS}

_S2 = 1 / math.sqrt(2)
_MATRICES = {
    Gate.I: np.eye(2, dtype=np.complex128),
    Gate.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    Gate.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    Gate.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    Gate.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=np.complex128),
    Gate.T: np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=np.complex128),
    Gate.TDG: np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=np.complex128),
}
for _m in _MATRICES.values():
    _m.setflags(write=False)


def _check_phi(kind: Gate, phi):
    if kind.has_phi:
        if phi is None or not math.isfinite(phi):
            raise DomainError(f"{kind.value} needs a finite phi")
        return float(phi)
    return None


def gate_unitary(kind: Gate, arity: int = 1, phi: float | None = None) -> np.ndarray:
    """Dense 2^arity x 2^arity matrix of a gate (controls on the leading wires)."""
    if not kind.is_unitary:
        raise DomainError("not a unitary gate")
    phi = _check_phi(kind, phi)
    if kind.single_qubit:
        if arity != 1:
            raise DomainError("arity mismatch")
        if kind is Gate.PS:
            return np.array([[1, 0], [0, cmath.exp(1j * phi)]], dtype=np.complex128)
        return _MATRICES[kind].copy()
    if arity < 1 or (kind is Gate.CX and arity < 2):
        raise DomainError("arity mismatch")
    dim = 1 << arity
    u = np.eye(dim, dtype=np.complex128)
    if kind is Gate.MCZ:
        u[-1, -1] = -1
    elif kind is Gate.MCPS:
        u[-1, -1] = cmath.exp(1j * phi)
    else:  # CX: swap |1..10> and |1..11>
        u[-2:, -2:] = _MATRICES[Gate.X]
    return u


def _check_wires(wires: Sequence[int], n: int):
    if len(set(wires)) != len(wires) or any((not isinstance(w, (int, np.integer))) or w < 0 or w >= n for w in wires):
        raise DomainError("invalid wire set")


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def _apply_inplace(buf: np.ndarray, n: int, kind: Gate, wires: Sequence[int], phi, conj: bool = False):
    """Apply one gate to every row of ``buf`` (shape (batch, 2**n)).

    ``conj`` applies the complex-conjugate gate instead, used for the column
    index of a density matrix.
    """
    k = kernels.backend
    if not kind.is_unitary or kind is Gate.I:
        return
    if kind in (Gate.Z, Gate.T, Gate.TDG, Gate.PS, Gate.MCZ, Gate.MCPS):
        if kind in (Gate.Z, Gate.MCZ):
            phase = -1.0 + 0j
        elif kind in (Gate.PS, Gate.MCPS):
            phase = cmath.exp(1j * phi)
        else:
            phase = complex(_MATRICES[kind][1, 1])
        if conj:
            phase = phase.conjugate()
        mask = 0
        for w in wires:
            mask |= _bit(n, w)
        k.apply_phase(buf, mask, phase)
        return
    if kind is Gate.CX:
        ctrl = 0
        for w in wires[:-1]:
            ctrl |= _bit(n, w)
        u = _MATRICES[Gate.X]
        k.apply_1q(buf, n, wires[-1], np.ascontiguousarray(u), ctrl)
        return
    u = _MATRICES[kind]
    if conj:
        u = u.conj()
    k.apply_1q(buf, n, wires[0], np.ascontiguousarray(u), 0)


def _validate_gate(kind: Gate, wires: Sequence[int], n: int, phi):
    _check_wires(wires, n)
    if kind.single_qubit and len(wires) != 1:
        raise DomainError("arity mismatch")
    if kind is Gate.CX and len(wires) < 2:
        raise DomainError("arity mismatch")
    if kind in (Gate.MCZ, Gate.MCPS, Gate.MEASURE, Gate.BARRIER) and len(wires) < 1:
        raise DomainError("arity mismatch")
    return _check_phi(kind, phi)


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise DomainError("amplitude vector has wrong length")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1
        return cls(n, amps)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1
        return cls(len(bits), amps)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def to_density(self) -> "DensityState":
        a = self.amplitudes
        return DensityState(self.n_qubits, np.outer(a, a.conj()))


@dataclass(frozen=True, eq=False)
class DensityState:
    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << self.n_qubits
        if m.shape != (dim, dim):
            raise DomainError("density matrix has wrong shape")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, n: int) -> "DensityState":
        m = np.zeros((1 << n, 1 << n), dtype=np.complex128)
        m[0, 0] = 1
        return cls(n, m)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_valid(self, atol: float = ATOL) -> bool:
        m = self.matrix
        if abs(self.trace() - 1) > atol or not np.allclose(m, m.conj().T, atol=atol):
            return False
        return bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -atol)


def apply_gate(state, kind: Gate, wires: Sequence[int], phi: float | None = None):
    """Return a new state with ``kind`` applied on ``wires`` (controls first)."""
    wires = tuple(int(w) for w in wires)
    phi = _validate_gate(kind, wires, state.n_qubits, phi)
    n = state.n_qubits
    if isinstance(state, DensityState):
        buf = state.matrix.copy().reshape(1, -1)
        _apply_inplace(buf, 2 * n, kind, wires, phi)
        _apply_inplace(buf, 2 * n, kind, tuple(w + n for w in wires), phi, conj=True)
        return DensityState(n, buf.reshape(1 << n, 1 << n))
    buf = state.amplitudes.copy().reshape(1, -1)
    _apply_inplace(buf, n, kind, wires, phi)
    return StateVector(n, buf.reshape(-1))


def probability_vector(state) -> np.ndarray:
    if isinstance(state, DensityState):
        p = np.real(np.diag(state.matrix)).copy()
    elif isinstance(state, StateVector):
        p = np.abs(state.amplitudes) ** 2
    else:
        p = np.asarray(state, dtype=float)
    return p


def probabilities(state) -> dict[str, float]:
    """Outcome bit string -> probability, for all 2^n outcomes."""
    p = probability_vector(state)
    n = state.n_qubits
    return {index_to_bits(i, n): float(v) for i, v in enumerate(p)}


@dataclass
class Histogram:
    counts: dict[str, int]
    shots: int
    seed: int

    def frequency(self, outcome: str) -> float:
        return self.counts.get(outcome, 0) / self.shots

    def mode(self) -> str:
        return max(sorted(self.counts), key=lambda k: self.counts[k])


def _as_distribution(source) -> tuple[np.ndarray, int]:
    if isinstance(source, (StateVector, DensityState)):
        return probability_vector(source), source.n_qubits
    if isinstance(source, Mapping):
        n = len(next(iter(source)))
        p = np.zeros(1 << n)
        for k, v in source.items():
            p[int(k, 2)] = v
        return p, n
    p = np.asarray(source, dtype=float)
    return p, int(round(math.log2(p.size)))


def sample(source, shots: int, seed: int = 0) -> Histogram:
    """Multinomial draw of ``shots`` outcomes; deterministic for a given seed."""
    if shots < 1:
        raise DomainError("empty sample request")
    p, n = _as_distribution(source)
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p)
    counts = {index_to_bits(i, n): int(c) for i, c in enumerate(draws) if c}
    return Histogram(counts, shots, seed)
