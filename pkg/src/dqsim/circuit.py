"""Circuit data model, depth and gate-count metrics, X cancellation, text format.

Text format::

    qubits 3
    # comment
    H 0
    PS phi=2.1268800471555034 1
    MCZ 0 1 2
    MEASURE 0 1 2

Controls are listed before the target for controlled gates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import core
from .core import Gate
from .errors import DomainError, ParseError, ResourceLimitError

MAX_UNITARY_QUBITS = 10


@dataclass(frozen=True)
class GateInstance:
    kind: Gate
    wires: tuple[int, ...]
    phi: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(map(int, self.wires)))
        if len(set(self.wires)) != len(self.wires):
            raise DomainError("invalid wire set")
        if self.kind.single_qubit and len(self.wires) != 1:
            raise DomainError("arity mismatch")
        if self.kind is Gate.CX and len(self.wires) < 2:
            raise DomainError("arity mismatch")
        if not self.wires:
            raise DomainError("arity mismatch")
        if self.kind.has_phi:
            if self.phi is None or not math.isfinite(self.phi):
                raise DomainError(f"{self.kind.value} needs a finite phi")
            object.__setattr__(self, "phi", float(self.phi))
        elif self.phi is not None:
            raise DomainError(f"{self.kind.value} takes no phi")

    @property
    def counted(self) -> bool:
        return self.kind.is_unitary

    def shifted(self, offset: int) -> "GateInstance":
        return GateInstance(self.kind, tuple(w + offset for w in self.wires), self.phi)


def g(kind: Gate, *wires: int, phi: float | None = None) -> GateInstance:
    return GateInstance(kind, wires, phi)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[GateInstance, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        n = self.n_qubits
        if n < 1:
            raise DomainError("circuit needs at least one qubit")
        measured: set[int] = set()
        for gi in gates:
            if max(gi.wires) >= n:
                raise DomainError("invalid wire set")
            if gi.kind is Gate.BARRIER:
                continue
            if measured and not measured.isdisjoint(gi.wires):
                raise DomainError("gate after terminal measurement")
            if gi.kind is Gate.MEASURE:
                measured.update(gi.wires)
        object.__setattr__(self, "_measured", frozenset(measured))

    @classmethod
    def _trusted(cls, n_qubits: int, gates: tuple, measured: frozenset) -> "Circuit":
        # skips validation; callers guarantee the gates are already valid
        c = object.__new__(cls)
        object.__setattr__(c, "n_qubits", n_qubits)
        object.__setattr__(c, "gates", gates)
        object.__setattr__(c, "_measured", measured)
        return c

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise DomainError("register size mismatch")
        if not self._measured:
            return Circuit._trusted(self.n_qubits, self.gates + other.gates, other._measured)
        return Circuit(self.n_qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def embed(self, n_total: int, offset: int) -> "Circuit":
        """Place this circuit on wires ``offset..offset+n-1`` of a larger register."""
        return Circuit(n_total, tuple(gi.shifted(offset) for gi in self.gates))

    def without(self, *kinds: Gate) -> "Circuit":
        return Circuit(self.n_qubits, tuple(gi for gi in self.gates if gi.kind not in kinds))

    def unitary_gates(self) -> list[GateInstance]:
        return [gi for gi in self.gates if gi.kind.is_unitary]


def layer(kind: Gate, wires: Iterable[int], phi: float | None = None) -> list[GateInstance]:
    return [GateInstance(kind, (w,), phi) for w in wires]


def combine(circuits: Sequence[Circuit]) -> Circuit:
    """Lay independent circuits side by side on disjoint, consecutive wire blocks."""
    total = sum(c.n_qubits for c in circuits)
    gates: list[GateInstance] = []
    offset = 0
    body, tail = [], []
    for c in circuits:
        for gi in c.gates:
            (tail if gi.kind is Gate.MEASURE else body).append(gi.shifted(offset))
        offset += c.n_qubits
    gates = body + tail
    return Circuit(total, tuple(gates))


def depth(circuit: Circuit) -> int:
    """ASAP layering along wires.

    A gate sits one layer after the latest gate on any of its wires. A
    barrier occupies no layer but aligns its wires to their latest layer.
    Measurements are ignored.
    """
    level = [0] * circuit.n_qubits
    for gi in circuit.gates:
        if gi.kind is Gate.MEASURE:
            continue
        top = max(level[w] for w in gi.wires)
        if gi.kind is not Gate.BARRIER:
            top += 1
        for w in gi.wires:
            level[w] = top
    return max(level, default=0)


def gate_count(circuit: Circuit) -> int:
    return sum(1 for gi in circuit.gates if gi.counted)


def optimize_x_cancellation(circuit: Circuit) -> Circuit:
    """Drop barriers, then cancel X pairs with nothing else between them on that wire.

    One pass with a per-wire stack reaches the fixpoint: a cancellation
    can only expose the previous gate on the same wire, which is the new
    stack top.
    """
    out: list[GateInstance | None] = []
    stacks: list[list[int]] = [[] for _ in range(circuit.n_qubits)]
    for gi in circuit.gates:
        if gi.kind is Gate.BARRIER:
            continue
        if gi.kind is Gate.X:
            w = gi.wires[0]
            st = stacks[w]
            if st and out[st[-1]].kind is Gate.X:
                out[st.pop()] = None
                continue
        out.append(gi)
        for w in gi.wires:
            stacks[w].append(len(out) - 1)
    return Circuit(circuit.n_qubits, tuple(gi for gi in out if gi is not None))


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Full matrix of the circuit, built column by column through the kernels."""
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ResourceLimitError("dimension limit exceeded")
    if any(gi.kind is Gate.MEASURE for gi in circuit.gates):
        raise DomainError("unitary_of needs a circuit without measurements")
    dim = 1 << n
    # row b of buf evolves basis state |b>, so buf ends as U^T
    buf = np.eye(dim, dtype=np.complex128)
    for gi in circuit.gates:
        core._apply_inplace(buf, n, gi.kind, gi.wires, gi.phi)
    return np.ascontiguousarray(buf.T)


def unitary_by_kron(circuit: Circuit) -> np.ndarray:
    """Same result as :func:`unitary_of`, from explicit Kronecker products.

    Slow and independent of the kernels; kept as a cross-check.
    """
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ResourceLimitError("dimension limit exceeded")
    dim = 1 << n
    total = np.eye(dim, dtype=np.complex128)
    for gi in circuit.gates:
        if not gi.kind.is_unitary:
            continue
        small = core.gate_unitary(gi.kind, len(gi.wires), gi.phi)
        total = _embed(small, gi.wires, n) @ total
    return total


def _embed(small: np.ndarray, wires: Sequence[int], n: int) -> np.ndarray:
    k = len(wires)
    rest = [q for q in range(n) if q not in wires]
    big = np.kron(small, np.eye(1 << (n - k), dtype=np.complex128))
    # big acts on qubit order wires + rest; permute back to 0..n-1
    order = list(wires) + rest
    perm = [order.index(q) for q in range(n)]
    t = big.reshape([2] * (2 * n))
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(1 << n, 1 << n)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    flat = np.argmax(np.abs(a))
    ref = a.flat[flat]
    if abs(b.flat[flat]) < atol:
        return False
    phase = ref / b.flat[flat]
    return bool(np.allclose(a, phase * b, atol=atol))


def simulate(circuit: Circuit, initial: core.StateVector | None = None) -> core.StateVector:
    n = circuit.n_qubits
    state = initial if initial is not None else core.StateVector.zero(n)
    buf = state.amplitudes.copy().reshape(1, -1)
    for gi in circuit.gates:
        core._apply_inplace(buf, n, gi.kind, gi.wires, gi.phi)
    return core.StateVector(n, buf.reshape(-1))


def simulate_density(circuit: Circuit, initial: core.DensityState | None = None) -> core.DensityState:
    n = circuit.n_qubits
    state = initial if initial is not None else core.DensityState.zero(n)
    buf = state.matrix.copy().reshape(1, -1)
    for gi in circuit.gates:
        core._apply_inplace(buf, 2 * n, gi.kind, gi.wires, gi.phi)
        core._apply_inplace(buf, 2 * n, gi.kind, tuple(w + n for w in gi.wires), gi.phi, conj=True)
    return core.DensityState(n, buf.reshape(1 << n, 1 << n))


# --- text format -----------------------------------------------------------

_BY_NAME = {k.value: k for k in Gate}


def serialize(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for gi in circuit.gates:
        parts = [gi.kind.value]
        if gi.phi is not None:
            parts.append(f"phi={gi.phi!r}")
        parts.extend(str(w) for w in gi.wires)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> Circuit:
    n = None
    gates: list[GateInstance] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        tokens = _tokens(body)
        if n is None:
            word, col = tokens[0]
            if word != "qubits" or len(tokens) != 2:
                raise ParseError("expected header 'qubits N'", lineno, col)
            n = _parse_int(tokens[1], lineno)
            if n < 1:
                raise ParseError("qubit count must be >= 1", lineno, tokens[1][1])
            continue
        name, col = tokens[0]
        if name not in _BY_NAME:
            raise ParseError(f"unknown gate {name!r}", lineno, col)
        kind = _BY_NAME[name]
        phi = None
        rest = tokens[1:]
        if rest and rest[0][0].startswith("phi="):
            try:
                phi = float(rest[0][0][4:])
            except ValueError:
                raise ParseError(f"bad phi {rest[0][0]!r}", lineno, rest[0][1]) from None
            rest = rest[1:]
        wires = [_parse_int(tok, lineno) for tok in rest]
        for w, (_, wcol) in zip(wires, rest):
            if not 0 <= w < n:
                raise ParseError(f"wire {w} outside register of {n} qubits", lineno, wcol)
        try:
            gates.append(GateInstance(kind, tuple(wires), phi))
        except DomainError as exc:
            raise ParseError(str(exc), lineno, col) from None
    if n is None:
        raise ParseError("missing header 'qubits N'", 1, 1)
    try:
        return Circuit(n, tuple(gates))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _tokens(line: str) -> list[tuple[str, int]]:
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _parse_int(token: tuple[str, int], lineno: int) -> int:
    text, col = token
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected integer, got {text!r}", lineno, col) from None
