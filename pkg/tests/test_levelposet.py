import numpy as np
import pytest
from hypothesis import given, strategies as st

from levelposets.families import family_matrix
from levelposets.levelposet import (
    EmptyIntervalError,
    LevelPoset,
    ab_index,
    ab_index_from_chains,
    cd_index,
    euler_characteristic_sum,
    eulerian_check_prop21,
    eulerian_rank_check,
    flag_f,
    flag_vector,
    interval_elements,
    k_series,
    psi_automaton,
    psi_truncated,
)
from levelposets.matlin import NotPrimitiveError, bin_power
from levelposets.ncalg import NcPoly, NotInCdSpanError, TruncSeries, cd_to_ab
from oracles import ab_from_flags, flag_counts, interval_ranks

P = NcPoly.parse
BUTTERFLY = np.ones((2, 2), dtype=np.int64)
ONE = np.ones((1, 1), dtype=np.int64)


def test_poset_validation():
    with pytest.raises(ValueError):
        LevelPoset(np.array([[1, 2], [0, 1]]))
    with pytest.raises(ValueError):
        LevelPoset(np.ones((2, 3), dtype=int))


def test_poset_caches_periodic_powers():
    swap = LevelPoset(np.array([[0, 1], [1, 0]]))
    assert swap.exponent is None and not swap.is_primitive
    assert swap.bin_power(101).tolist() == [[0, 1], [1, 0]]
    m = family_matrix("M", 2)
    poset = LevelPoset(m)
    assert poset.exponent == 3
    for k in range(12):
        assert (poset.bin_power(k) == bin_power(m, k)).all()


def test_empty_interval_is_an_error():
    poset = LevelPoset(family_matrix("M", 1))
    with pytest.raises(EmptyIntervalError):
        poset.interval(0, 3, 1)


def test_interval_elements():
    diamond = LevelPoset(BUTTERFLY).interval(0, 0, 2)
    assert interval_elements(diamond, 1) == {0, 1}
    iv = LevelPoset(family_matrix("M", 1)).interval(2, 0, 2)
    assert len(interval_elements(iv, 1)) == 2
    assert interval_elements(iv, 0) == {2}


def test_flag_values():
    diamond = LevelPoset(BUTTERFLY).interval(0, 0, 2)
    assert flag_f(diamond, []) == 1
    assert flag_f(diamond, [1]) == 2
    iv = LevelPoset(family_matrix("M", 1)).interval(2, 0, 3)
    assert flag_f(iv, [1, 2]) == 6


def test_ab_and_cd_values():
    diamond = LevelPoset(BUTTERFLY).interval(0, 0, 2)
    assert ab_index(diamond) == P("a + b")
    assert cd_index(diamond) == P("c")
    chain = LevelPoset(ONE).interval(0, 0, 3)
    assert ab_index(chain) == P("aa")
    iv = LevelPoset(family_matrix("M", 1)).interval(2, 0, 3)
    assert ab_index(iv) == P("aa + 2*ab + 2*ba + bb")
    assert cd_index(iv) == P("cc + d")
    iv = LevelPoset(family_matrix("M", 2)).interval(3, 0, 4)
    assert cd_index(iv) == P("ccc + 2*cd + 2*dc")


def test_cd_index_fails_off_eulerian():
    with pytest.raises(NotInCdSpanError):
        cd_index(LevelPoset(ONE).interval(0, 0, 3))


def _intervals(m, p_max):
    poset = LevelPoset(m)
    for p in range(1, p_max + 1):
        yield from poset.nonempty_intervals(p)


@pytest.mark.parametrize("m", [BUTTERFLY, family_matrix("M", 1), family_matrix("N", 2),
                               np.array([[1, 1, 0], [0, 1, 1], [1, 0, 0]])],
                         ids=["butterfly", "M1", "N2", "3x3"])
def test_flags_and_indices_match_brute_force(m):
    rows = m.tolist()
    for iv in _intervals(m, 4):
        ranks = interval_ranks(rows, iv.i, iv.j, iv.p)
        assert [len(r) for r in ranks] == iv.rank_counts()
        for s, elems in enumerate(ranks):
            assert interval_elements(iv, s) == elems
        flags = flag_counts(rows, iv.i, iv.j, iv.p)
        assert flag_vector(iv) == flags
        want = ab_from_flags(flags, iv.p)
        assert ab_index(iv).to_dict() == want
        assert ab_index_from_chains(iv).to_dict() == want


def test_rank_counts_match_flags():
    for iv in _intervals(family_matrix("M", 2), 5):
        for s in range(1, iv.p):
            assert len(interval_elements(iv, s)) == flag_f(iv, [s])


def test_ab_index_shape():
    for iv in _intervals(family_matrix("N", 3), 5):
        psi = ab_index(iv)
        assert psi.is_homogeneous() and psi.degree == iv.p - 1
        assert psi.coefficient("a" * (iv.p - 1)) == 1


def test_rank_checks():
    assert eulerian_rank_check(family_matrix("M", 1), 2).passed
    assert eulerian_rank_check(family_matrix("N", 2), 4).passed
    bad = eulerian_rank_check(ONE, 2)
    assert not bad.passed and bad.witness == (0, 0, 1)
    with pytest.raises(ValueError):
        eulerian_rank_check(ONE, 3)
    # odd ranks cancel term by term here: 1 - 1 + 1 - 1
    assert eulerian_rank_check(ONE, 3, allow_odd=True).passed


@pytest.mark.parametrize("family, r", [("M", 1), ("M", 2), ("M", 3), ("N", 2), ("N", 4)])
def test_certificate_for_families(family, r):
    m = family_matrix(family, r)
    cert = eulerian_check_prop21(m)
    assert cert.exponent == 3
    assert cert.row_sums == cert.col_sums == (r,) * (2 * r + 2)
    assert cert.target_sum == r
    assert cert.part_a and cert.square_vanishes and cert.certified
    w = -bin_power(m, 1) + bin_power(m, 2)
    assert (cert.w == w).all()


def test_certificate_failure():
    cert = eulerian_check_prop21(ONE)
    assert not cert.certified and cert.failing_rank == 2
    with pytest.raises(NotPrimitiveError):
        eulerian_check_prop21(np.array([[0, 1], [1, 0]]))


def test_certificate_matches_direct_checks():
    # every matrix up to 3x3: the certificate agrees with direct rank checks
    for bits in range(1 << 9):
        m = np.array([(bits >> k) & 1 for k in range(9)]).reshape(3, 3)
        poset = LevelPoset(m)
        if poset.exponent is None:
            continue
        cert = eulerian_check_prop21(poset)
        direct = all(eulerian_rank_check(poset, p).passed for p in range(2, 2 * poset.exponent + 5, 2))
        assert cert.certified == direct


def test_k_series():
    m = family_matrix("M", 2)
    k = k_series(m, 4)
    for i in range(6):
        for j in range(6):
            assert k[i, j].coefficient("") == m[i, j]
            assert k[i, j].coefficient("t") == bin_power(m, 2)[i, j]
            assert all(k[i, j].coefficient("t" * d) == 1 for d in (2, 3, 4))
    kb = k_series(BUTTERFLY, 3)
    assert kb[0, 1] == TruncSeries({"": 1, "t": 1, "tt": 1, "ttt": 1}, 3, "ab")


def test_psi_truncated_values():
    psi = psi_truncated(BUTTERFLY, 2)
    want = cd_to_ab(P("1 + c + cc"))
    for _, x in psi.entries():
        assert x.poly() == want
    psi = psi_truncated(family_matrix("M", 1), 2)
    assert psi[2, 0].poly() == P("1 + a + b + aa + 2*ab + 2*ba + bb")
    m = family_matrix("N", 2)
    psi = psi_truncated(m, 0)
    for (i, j), x in psi.entries():
        assert x.coefficient("") == m[i, j]


@pytest.mark.parametrize("m", [BUTTERFLY, family_matrix("M", 1), family_matrix("M", 2), family_matrix("N", 2)],
                         ids=["butterfly", "M1", "M2", "N2"])
def test_automaton_matches_chain_series(m):
    for cutoff in (0, 2, 5):
        assert psi_automaton(m, cutoff) == psi_truncated(m, cutoff)


def test_automaton_degree_zero():
    m = np.array([[1, 1, 0], [0, 0, 1], [1, 0, 1]])
    psi = psi_automaton(m, 0)
    assert [[x.coefficient("") for x in row] for row in psi.rows()] == m.tolist()


# property tests

@st.composite
def relabelled_family(draw):
    family = draw(st.sampled_from(["M", "N"]))
    r = draw(st.integers(1 if family == "M" else 2, 3))
    m = family_matrix(family, r)
    perm = draw(st.permutations(range(m.shape[0])))
    return m[np.ix_(perm, perm)]


@given(relabelled_family())
def test_euler_relation_on_certified(m):
    assert eulerian_check_prop21(m).certified
    for iv in _intervals(m, 6):
        assert euler_characteristic_sum(iv) == 0
        cd_index(iv)  # exists for every interval


@st.composite
def small_matrix(draw):
    n = draw(st.integers(1, 5))
    bits = draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    return np.array(bits, dtype=np.int64).reshape(n, n)


@given(small_matrix())
def test_order_is_transitive(m):
    poset = LevelPoset(m)
    pts = [(v, s) for v in range(poset.n) for s in range(5)]
    for x in pts:
        above = [y for y in pts if poset.leq(x, y)]
        for y in above:
            for z in pts:
                if poset.leq(y, z):
                    assert poset.leq(x, z)


@given(small_matrix())
def test_flag_products_match_chain_enumeration(m):
    rows = m.tolist()
    for iv in _intervals(m, 4):
        assert flag_vector(iv) == flag_counts(rows, iv.i, iv.j, iv.p)
