import numpy as np
import pytest
from hypothesis import given, strategies as st

from levelposets.families import build_blocks, family_matrix, FamilySpec
from levelposets.matlin import (
    NotPrimitiveError,
    SeriesMatrix,
    anti_flip,
    bin_power,
    bin_powers,
    binarize,
    block2x2,
    exponent,
    format_matrix,
    identity,
    int_power,
    ones,
    parse_matrix,
)
from levelposets.ncalg import NcPoly
from oracles import int_power as ref_power
from reference_matrices import BIN_M3_SQUARED, M3

P = NcPoly.parse


def test_binarize():
    assert binarize(np.array([[0, 2], [3, 0]])).tolist() == [[0, 1], [1, 0]]
    assert binarize(identity(3)).tolist() == identity(3).tolist()


def test_int_power_is_exact():
    m = np.array([[1, 1], [1, 1]])
    big = int_power(m, 70)
    assert big[0, 0] == 2 ** 69
    assert int_power(family_matrix("M", 2), 5).tolist() == ref_power(family_matrix("M", 2), 5)


def test_bin_power_values():
    m3 = family_matrix("M", 3)
    assert bin_power(m3, 0).tolist() == identity(8).tolist()
    assert bin_power(m3, 2).tolist() == BIN_M3_SQUARED
    assert (bin_power(m3, 3) == 1).all()
    assert binarize(int_power(m3, 2)).tolist() == BIN_M3_SQUARED


def test_exponent_values():
    assert exponent(np.ones((2, 2), dtype=int)) == 1
    for r in (1, 2, 3):
        assert exponent(family_matrix("M", r)) == 3


def test_exponent_not_primitive():
    swap = np.array([[0, 1], [1, 0]])
    with pytest.raises(NotPrimitiveError) as err:
        exponent(swap, k_max=10)
    assert err.value.k_max == 10
    with pytest.raises(NotPrimitiveError):
        exponent(swap)


def test_anti_flip_blocks():
    bs = build_blocks(FamilySpec("M", 3))
    A = bs["A"]
    assert (A[0] == 1).all() and A[1:].sum() == 0
    flipped = anti_flip(A)
    assert (flipped[:, -1] == 1).all() and flipped[:, :-1].sum() == 0
    assert (anti_flip(bs["B"]) == bs["B"]).all()
    assert (anti_flip(bs["F"]) == bs["F"]).all()


def test_anti_flip_reverses_entries():
    m = SeriesMatrix([[P("ab"), P("a")], [P("b"), P("1")]])
    assert anti_flip(m) == SeriesMatrix([[P("1"), P("a")], [P("b"), P("ba")]])


def test_anti_flip_of_p_column():
    r = 2
    p = build_blocks(FamilySpec("M", r))["p"]
    row = anti_flip(p)
    assert row.shape == (1, 2 * r + 2)
    want = ["1"] * (r + 1) + ["c"] * r + ["1"]
    assert [str(x) for x in row.rows()[0]] == want


def test_block_relations_direct():
    bs = build_blocks(FamilySpec("M", 3))
    J, A, B, F = bs["J"], bs["A"], bs["B"], bs["F"]
    assert (J @ A == J).all() and (anti_flip(A) @ J == J).all()
    assert (A @ B + B @ anti_flip(A) == 2 * F).all()


def test_block2x2():
    a, b = np.zeros((1, 1), dtype=int), np.ones((1, 1), dtype=int)
    assert block2x2(a, a, a, a).tolist() == [[0, 0], [0, 0]]
    assert block2x2(b, a, a, b).tolist() == [[1, 0], [0, 1]]
    bs = build_blocks(FamilySpec("M", 3))
    assert block2x2(bs["A"], bs["B"], bs["J"], anti_flip(bs["A"])).tolist() == M3


def test_parse_matrix():
    assert parse_matrix("1 1\n1 1\n").tolist() == [[1, 1], [1, 1]]
    # header only counts when the body matches it
    assert parse_matrix("2 2\n1 0\n0 1\n").tolist() == [[1, 0], [0, 1]]
    assert parse_matrix("2 2\n1 0\n").shape == (2, 2)
    m = family_matrix("N", 2)
    assert (parse_matrix(format_matrix(m, header=True)) == m).all()
    with pytest.raises(ValueError):
        parse_matrix("1 0\n1\n")
    with pytest.raises(ValueError):
        parse_matrix("1 -1\n0 1\n")
    with pytest.raises(ValueError):
        parse_matrix("")


def test_series_matrix_arithmetic():
    x = SeriesMatrix([[P("a"), 0], [0, P("b")]])
    y = SeriesMatrix([[P("b"), 1], [1, 0]])
    assert (x @ y) == SeriesMatrix([[P("ab"), P("a")], [P("b"), 0]])
    assert (y @ x) == SeriesMatrix([[P("ba"), P("b")], [P("a"), 0]])
    assert x * P("t") == SeriesMatrix([[P("at"), 0], [0, P("bt")]])
    assert P("t") * x == SeriesMatrix([[P("ta"), 0], [0, P("tb")]])
    assert x.first_difference(y) == (0, 1, "", 0, 1)  # lowest degree first
    assert x.first_difference(x) is None


def test_series_matrix_truncates():
    x = SeriesMatrix([[P("a + ab")]], cutoff=1)
    assert x[0, 0] == P("a")
    assert (x @ x)[0, 0] == P("0")


# property tests

def _small_poly(draw, max_len):
    words = st.text(alphabet="ab", max_size=max_len)
    return NcPoly(draw(st.dictionaries(words, st.integers(-2, 2), max_size=3)), "ab")


@st.composite
def series_matrices(draw, rows=3, cols=3):
    return SeriesMatrix([[_small_poly(draw, 3) for _ in range(cols)] for _ in range(rows)])


@given(series_matrices(), series_matrices())
def test_flip_relations(x, y):
    assert anti_flip(x @ y) == anti_flip(y) @ anti_flip(x)
    assert anti_flip(x + y) == anti_flip(x) + anti_flip(y)
    assert anti_flip(anti_flip(x)) == x


@st.composite
def zero_one(draw, n_min=1, n_max=6):
    n = draw(st.integers(n_min, n_max))
    bits = draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    return np.array(bits, dtype=np.int64).reshape(n, n)


@given(zero_one(), st.integers(0, 4), st.integers(0, 4))
def test_bin_power_composition(m, j, k):
    lhs = bin_power(m, j + k)
    rhs = binarize(bin_power(m, j) @ bin_power(m, k))
    assert (lhs == rhs).all()
    assert (lhs == binarize(np.array(ref_power(m, j + k)))).all()


@given(zero_one())
def test_anti_flip_involution_on_ints(m):
    assert (anti_flip(anti_flip(m)) == m).all()


@given(zero_one())
def test_exponent_saturates(m):
    try:
        g = exponent(m)
    except NotPrimitiveError:
        return
    powers = bin_powers(m, g + 4)
    assert not (powers[g - 1] == 1).all() if g > 1 else True
    for k in range(g, g + 5):
        assert (powers[k] == ones(m.shape[0])).all()
