"""Phase-oracle synthesis from explicit truth tables.

Every oracle acts on wires ``0..n-1``. Each satisfying input gets its own
block: X on the wires where the input bit is 0, one multi-controlled gate
over all wires, the same X layer again. Blocks are separated by barriers so
that the unoptimized circuit keeps one block after another; the optimizer
strips them and merges the X layers.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .boolfn import TruthTable, index_to_bits
from .circuit import Circuit, GateInstance, g, layer
from .core import Gate
from .errors import DomainError


@lru_cache(maxsize=4096)
def _marking_block(bits: str, kind: Gate, phi: float | None = None) -> tuple[GateInstance, ...]:
    n = len(bits)
    zeros = [j for j, b in enumerate(bits) if b == "0"]
    return tuple(layer(Gate.X, zeros) + [GateInstance(kind, tuple(range(n)), phi)] + layer(Gate.X, zeros))


def synth_phase_oracle(f: TruthTable, barriers: bool = True) -> Circuit:
    """Circuit with U|x> = (-1)^f(x) |x>; inputs taken in ascending basis order."""
    n = f.n
    gates: list[GateInstance] = []
    for k, x in enumerate(f.satisfying()):
        if k and barriers:
            gates.append(GateInstance(Gate.BARRIER, tuple(range(n))))
        gates.extend(_marking_block(index_to_bits(x, n), Gate.MCZ))
    return Circuit(n, tuple(gates))


def synth_zero_reflection(n: int) -> Circuit:
    """I - 2|0..0><0..0| as X^n, C^{n-1}Z, X^n."""
    if n < 1:
        raise DomainError("need n >= 1")
    return Circuit(n, tuple(_marking_block("0" * n, Gate.MCZ)))


def synth_rotation_oracle(f: TruthTable, phi: float) -> Circuit:
    """Multiply |tau> by e^{i phi} for the unique satisfying input tau."""
    tau = f.unique_target()
    if tau is None:
        raise DomainError("rotation oracle requires unique target")
    return Circuit(f.n, tuple(_marking_block(tau, Gate.MCPS, _finite(phi))))


def synth_zero_rotation(n: int, phi: float) -> Circuit:
    """I + (e^{i phi} - 1)|0..0><0..0|."""
    if n < 1:
        raise DomainError("need n >= 1")
    return Circuit(n, tuple(_marking_block("0" * n, Gate.MCPS, _finite(phi))))


def _finite(phi: float) -> float:
    if not math.isfinite(phi):
        raise DomainError("phi must be finite")
    return float(phi)


@lru_cache(maxsize=64)
def h_layer(n: int) -> Circuit:
    return Circuit(n, tuple(layer(Gate.H, range(n))))


@lru_cache(maxsize=64)
def measure_all(n: int) -> Circuit:
    return Circuit(n, (g(Gate.MEASURE, *range(n)),))
