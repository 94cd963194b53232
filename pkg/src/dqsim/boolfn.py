"""Boolean functions as explicit truth tables.

Bit strings are plain ``str`` objects over ``"01"``, read left to right as
b_0 ... b_{n-1}. The basis index of a bit string is ``int(bits, 2)``, so b_0
is the most significant bit. Truth tables are indexed the same way.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceLimitError

MAX_DEGREE_ARITY = 16


def check_bits(bits: str) -> str:
    if not isinstance(bits, str) or not bits or set(bits) - {"0", "1"}:
        raise DomainError(f"not a bit string: {bits!r}")
    return bits


def bits_to_index(bits: str) -> int:
    return int(check_bits(bits), 2)


def index_to_bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def hamming_weight(bits: str) -> int:
    return check_bits(bits).count("1")


class TruthTable:
    """A function {0,1}^n -> {0,1} stored as 2^n bits in basis-index order."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Iterable[int]):
        if n < 1:
            raise DomainError("truth table arity must be >= 1")
        arr = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.uint8)
        if arr.shape != (1 << n,):
            raise DomainError(f"truth table of arity {n} needs {1 << n} values, got {arr.size}")
        if np.any(arr > 1):
            raise DomainError("truth table values must be 0 or 1")
        arr.setflags(write=False)
        self.n = n
        self.values = arr

    def __call__(self, x: str) -> int:
        if len(x) != self.n:
            raise DomainError(f"input {x!r} has wrong length for arity {self.n}")
        return int(self.values[bits_to_index(x)])

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __repr__(self):
        return f"TruthTable({self.n}, '{self.bitstring()}')"

    def bitstring(self) -> str:
        return "".join("1" if v else "0" for v in self.values)

    def satisfying(self) -> list[int]:
        """Basis indices x with f(x) = 1, ascending."""
        return [int(i) for i in np.flatnonzero(self.values)]

    def satisfying_bits(self) -> list[str]:
        return [index_to_bits(i, self.n) for i in self.satisfying()]

    def unique_target(self) -> str | None:
        sat = self.satisfying()
        return index_to_bits(sat[0], self.n) if len(sat) == 1 else None

    @classmethod
    def from_function(cls, n: int, fn) -> "TruthTable":
        return cls(n, [int(bool(fn(index_to_bits(i, n)))) for i in range(1 << n)])


def hidden_string_function(s: str) -> TruthTable:
    """f_s(x) = parity of the bitwise AND of s and x."""
    n = len(check_bits(s))
    sv = int(s, 2)
    idx = np.arange(1 << n, dtype=np.int64) & sv
    parity = np.zeros(1 << n, dtype=np.uint8)
    while np.any(idx):
        parity ^= (idx & 1).astype(np.uint8)
        idx >>= 1
    return TruthTable(n, parity)


def point_function(target: str) -> TruthTable:
    n = len(check_bits(target))
    values = np.zeros(1 << n, dtype=np.uint8)
    values[int(target, 2)] = 1
    return TruthTable(n, values)


def restrict(f: TruthTable, fixed: Mapping[int, int]) -> TruthTable:
    """Fix some input positions to constants; the result ranges over the rest in order."""
    for pos, bit in fixed.items():
        if not 0 <= pos < f.n:
            raise DomainError(f"position {pos} out of range for arity {f.n}")
        if bit not in (0, 1):
            raise DomainError(f"fixed value at position {pos} must be 0 or 1")
    free = [p for p in range(f.n) if p not in fixed]
    if not free:
        raise DomainError("empty subfunction arity")
    k = len(free)
    base = 0
    for pos, bit in fixed.items():
        base |= bit << (f.n - 1 - pos)
    values = np.empty(1 << k, dtype=np.uint8)
    for m in range(1 << k):
        x = base
        for j, pos in enumerate(free):
            if (m >> (k - 1 - j)) & 1:
                x |= 1 << (f.n - 1 - pos)
        values[m] = f.values[x]
    return TruthTable(k, values)


def restrict_block(f: TruthTable, block: Sequence[int], outside: str | None = None) -> TruthTable:
    """Keep ``block`` free; fix every other position from ``outside`` (zeros by default)."""
    others = [p for p in range(f.n) if p not in set(block)]
    outside = "0" * len(others) if outside is None else outside
    if len(outside) != len(others):
        raise DomainError("outside assignment has wrong length")
    return restrict(f, {p: int(b) for p, b in zip(others, outside)})


def or_combine(tables: Sequence[TruthTable]) -> TruthTable:
    if not tables:
        raise DomainError("or_combine needs at least one table")
    n = tables[0].n
    if any(t.n != n for t in tables):
        raise DomainError("arity mismatch")
    acc = np.zeros(1 << n, dtype=np.uint8)
    for t in tables:
        acc |= t.values
    return TruthTable(n, acc)


def dega_blocks(n: int, layout: str = "trailing") -> list[tuple[int, ...]]:
    """Contiguous position blocks of the distributed search, one per part.

    ``trailing`` gives the (n - 2(m-1))-bit remainder to the last part,
    ``leading`` gives it to the first, where m = n // 2 parts.
    """
    if n < 2:
        raise DomainError("distributed search needs n >= 2")
    parts = n // 2
    big = n - 2 * (parts - 1)
    if layout == "trailing":
        sizes = [2] * (parts - 1) + [big]
    elif layout == "leading":
        sizes = [big] + [2] * (parts - 1)
    else:
        raise DomainError(f"unknown part layout {layout!r}")
    blocks, start = [], 0
    for size in sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size
    return blocks


def dega_subfunction(f: TruthTable, i: int, n: int | None = None, layout: str = "trailing") -> TruthTable:
    """g_i: OR of every restriction of f that leaves block i free."""
    n = f.n if n is None else n
    if n != f.n:
        raise DomainError("arity mismatch")
    blocks = dega_blocks(n, layout)
    if not 0 <= i < len(blocks):
        raise DomainError("invalid part index")
    block = blocks[i]
    k = n - len(block)
    subs = [restrict_block(f, block, "".join(bits)) for bits in itertools.product("01", repeat=k)]
    return or_combine(subs)


def is_linear(f: TruthTable) -> bool:
    """True when f(x xor y) = f(x) xor f(y) for all x, y (so f = f_s for some s)."""
    v = f.values
    dim = 1 << f.n
    if v[0]:
        return False
    if f.n <= 6:
        idx = np.arange(dim)
        return bool(np.all(v[idx[:, None] ^ idx[None, :]] == (v[:, None] ^ v[None, :])))
    return f == hidden_string_function(recover_hidden_string(f))


def recover_hidden_string(f: TruthTable) -> str:
    """s_i = f(e_i)."""
    return "".join(str(int(f.values[1 << (f.n - 1 - i)])) for i in range(f.n))


def multilinear_degree(f: TruthTable) -> int:
    """Degree of the unique real multilinear polynomial agreeing with f.

    Uses the Moebius (subset-difference) transform; the zero function has
    degree 0.
    """
    if f.n > MAX_DEGREE_ARITY:
        raise ResourceLimitError("degree computation limit")
    n = f.n
    # index bit n-1-i <-> variable x_i; the subset structure is the same either way
    c = f.values.astype(np.int64).copy()
    for b in range(n):
        c = c.reshape(-1, 2, 1 << b)
        c[:, 1, :] -= c[:, 0, :]
        c = c.reshape(-1)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return 0
    return int(max(bin(int(i)).count("1") for i in nz))


def parse_truth_table(text: str) -> TruthTable:
    """Parse the CLI truth-table format.

    Either ``arity N`` followed by a line of 2^N zeros and ones, or a
    single ``target <bits>`` / ``hidden <bits>`` line.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ParseError("empty truth-table input")
    lineno, first = lines[0]
    head, _, rest = first.partition(" ")
    rest = rest.strip()
    try:
        if head in ("target", "hidden"):
            if len(lines) != 1:
                raise ParseError("unexpected content after shorthand line", lines[1][0], 1)
            check_bits(rest)
            return point_function(rest) if head == "target" else hidden_string_function(rest)
        if head != "arity":
            raise ParseError(f"expected 'arity', 'target' or 'hidden', got {head!r}", lineno, 1)
        try:
            n = int(rest)
        except ValueError:
            raise ParseError(f"bad arity {rest!r}", lineno, len(head) + 2) from None
        if len(lines) != 2:
            raise ParseError("expected exactly one line of values after the arity", lineno)
        vline, values = lines[1]
        if len(values) != (1 << n):
            raise ParseError(f"expected {1 << n} values, got {len(values)}", vline, 1)
        for col, ch in enumerate(values, start=1):
            if ch not in "01":
                raise ParseError(f"bad value {ch!r}", vline, col)
        return TruthTable(n, [int(ch) for ch in values])
    except DomainError as exc:
        raise ParseError(str(exc), lineno) from None


def format_truth_table(f: TruthTable) -> str:
    return f"arity {f.n}\n{f.bitstring()}\n"
