import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqsim.boolfn import (
    TruthTable,
    dega_blocks,
    dega_subfunction,
    format_truth_table,
    hamming_weight,
    hidden_string_function,
    is_linear,
    multilinear_degree,
    or_combine,
    parse_truth_table,
    point_function,
    restrict,
    restrict_block,
)
from dqsim.errors import DomainError, ParseError

bitstrings = lambda lo, hi: st.integers(lo, hi).flatmap(  # noqa: E731
    lambda n: st.text(alphabet="01", min_size=n, max_size=n)
)


def degree_by_inclusion_exclusion(f: TruthTable) -> int:
    """Direct sum over subsets, no transform tricks."""
    n = f.n
    best = 0
    for size in range(n + 1):
        for S in itertools.combinations(range(n), size):
            c = 0
            for k in range(len(S) + 1):
                for T in itertools.combinations(S, k):
                    x = ["0"] * n
                    for i in T:
                        x[i] = "1"
                    c += (-1) ** (len(S) - len(T)) * f("".join(x))
            if c != 0:
                best = max(best, size)
    return best


def test_hidden_string_table_rows():
    f = hidden_string_function("001011")
    assert f("000001") == 1 and f("000011") == 0 and f("111111") == 1
    assert len(f.satisfying()) == 32


def test_zero_hidden_string():
    assert not hidden_string_function("0000").values.any()


def test_point_function():
    assert list(point_function("01").values) == [0, 1, 0, 0]
    assert point_function("1001").satisfying() == [0b1001]


def test_restrict_to_node_zero():
    f = hidden_string_function("001011")
    assert restrict(f, {3: 0, 4: 0, 5: 0}) == hidden_string_function("001")


def test_restrict_middle_block():
    f = hidden_string_function("001011")
    assert restrict_block(f, (2, 3)) == hidden_string_function("10")


def test_restrict_nothing_is_identity():
    f = hidden_string_function("0110")
    assert restrict(f, {}) == f


def test_restrict_everything_fails():
    with pytest.raises(DomainError, match="empty subfunction arity"):
        restrict(point_function("01"), {0: 0, 1: 1})


def test_dega_subfunctions_examples():
    assert dega_subfunction(point_function("1001"), 0).unique_target() == "10"
    assert dega_subfunction(point_function("01001"), 1, layout="leading").unique_target() == "01"
    assert dega_subfunction(point_function("01001"), 1).unique_target() == "001"


def test_dega_subfunction_of_zero_function():
    zero = TruthTable(5, [0] * 32)
    for i in range(2):
        assert not dega_subfunction(zero, i).values.any()


def test_dega_subfunction_bad_index():
    with pytest.raises(DomainError, match="invalid part index"):
        dega_subfunction(point_function("1001"), 2)


def test_dega_subfunction_matches_or_reduction():
    rng = np.random.default_rng(3)
    for n in range(2, 8):
        f = TruthTable(n, rng.integers(0, 2, 1 << n))
        for layout in ("trailing", "leading"):
            for i, block in enumerate(dega_blocks(n, layout)):
                t = f.values.reshape((2,) * n)
                others = tuple(p for p in range(n) if p not in block)
                expected = t.any(axis=others).astype(np.uint8).reshape(-1)
                assert np.array_equal(dega_subfunction(f, i, layout=layout).values, expected)


def test_or_combine():
    a = TruthTable(2, [0, 1, 0, 0])
    b = TruthTable(2, [0, 0, 1, 0])
    assert list(or_combine([a, b]).values) == [0, 1, 1, 0]
    assert or_combine([a, a]) == a
    with pytest.raises(DomainError, match="arity mismatch"):
        or_combine([a, point_function("101")])


def test_g0_from_four_restrictions():
    f = point_function("1001")
    subs = [restrict(f, {2: int(x), 3: int(y)}) for x, y in itertools.product("01", repeat=2)]
    assert or_combine(subs) == dega_subfunction(f, 0)


@pytest.mark.parametrize("s, expected", [("001011", 3), ("0000", 0), ("11111", 5), ("1", 1)])
def test_degree_examples(s, expected):
    assert multilinear_degree(hidden_string_function(s)) == expected


@settings(max_examples=60, deadline=None)
@given(values=st.integers(1, 4).flatmap(lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)))
def test_degree_agrees_with_inclusion_exclusion(values):
    n = len(values).bit_length() - 1
    f = TruthTable(n, values)
    assert multilinear_degree(f) == degree_by_inclusion_exclusion(f)


def test_hamming_weight():
    assert hamming_weight("001011") == 3
    assert hamming_weight("0000") == 0
    assert hamming_weight("111") == 3


@pytest.mark.parametrize("n", range(1, 9))
def test_satisfying_count_lemma(n):
    for s in itertools.product("01", repeat=n):
        s = "".join(s)
        if "1" in s:
            assert len(hidden_string_function(s).satisfying()) == 2 ** (n - 1)


@settings(max_examples=50, deadline=None)
@given(s=bitstrings(1, 10))
def test_degree_theorem_random(s):
    assert multilinear_degree(hidden_string_function(s)) == hamming_weight(s)


def test_linearity_check():
    assert is_linear(hidden_string_function("10110"))
    assert is_linear(hidden_string_function("1011011"))
    assert not is_linear(point_function("101"))
    assert not is_linear(TruthTable(8, [1] * 256))


@settings(max_examples=40, deadline=None)
@given(target=bitstrings(2, 8), layout=st.sampled_from(["trailing", "leading"]))
def test_dega_target_decomposition(target, layout):
    f = point_function(target)
    blocks = dega_blocks(len(target), layout)
    slices = []
    for i, block in enumerate(blocks):
        g = dega_subfunction(f, i, layout=layout)
        tau_i = g.unique_target()
        assert tau_i == "".join(target[p] for p in block)
        slices.append(tau_i)
    assert "".join(slices) == target


def test_truth_table_text_format():
    f = parse_truth_table("arity 2\n0100\n")
    assert f == point_function("01")
    assert parse_truth_table(format_truth_table(f)) == f
    assert parse_truth_table("target 1001") == point_function("1001")
    assert parse_truth_table("# comment\nhidden 001011\n") == hidden_string_function("001011")


@pytest.mark.parametrize("text", ["", "arity 2\n010\n", "arity x\n0101", "target 01a", "bogus 1", "arity 1\n0a"])
def test_truth_table_parse_errors(text):
    with pytest.raises(ParseError):
        parse_truth_table(text)
