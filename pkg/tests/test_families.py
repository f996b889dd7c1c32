import pytest

from levelposets.families import (
    FamilySpec,
    build_blocks,
    closed_form_psi,
    corollary_pairs,
    crosscheck_family,
    family_matrix,
    verify_block_lemmas,
    verify_psi_identities,
    verify_theorem31,
)
from levelposets.levelposet import psi_truncated
from levelposets.matlin import SeriesMatrix, anti_flip, bin_power, binarize, int_power
from levelposets.ncalg import NcPoly, TruncSeries, ab_to_cd
from reference_matrices import BIN_M3_SQUARED, BIN_N3_SQUARED, M3, N3

P = NcPoly.parse
M_RANGE = [1, 2, 3, 4, 5]
N_RANGE = [2, 3, 4, 5]


def test_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("N", 1)
    with pytest.raises(ValueError):
        FamilySpec("Q", 2)
    with pytest.raises(ValueError):
        FamilySpec("M", -1)
    assert FamilySpec("N", 3).n == 8


def test_displayed_matrices():
    assert family_matrix("M", 3).tolist() == M3
    assert bin_power(family_matrix("M", 3), 2).tolist() == BIN_M3_SQUARED
    assert family_matrix("N", 3).tolist() == N3
    assert bin_power(family_matrix("N", 3), 2).tolist() == BIN_N3_SQUARED
    assert family_matrix("M", 0).tolist() == [[1, 1], [1, 1]]


@pytest.mark.parametrize("r", M_RANGE)
def test_m_family_matrix_facts(r):
    m = family_matrix("M", r)
    sq = int_power(m, 2)
    assert (sq == 2 * binarize(sq)).all()
    assert (bin_power(m, 3) == 1).all()


@pytest.mark.parametrize("r", N_RANGE)
def test_n_family_matrix_facts(r):
    m = family_matrix("N", r)
    sq = int_power(m, 2)
    assert (sq == 2 * binarize(sq)).all()
    assert (anti_flip(m) == m).all()
    assert (bin_power(m, 3) == 1).all()


@pytest.mark.parametrize("family, r", [("M", r) for r in M_RANGE] + [("N", r) for r in N_RANGE])
def test_self_flipped_blocks(family, r):
    bs = build_blocks(FamilySpec(family, r))
    names = ["B", "F", "H", "C"] if family == "M" else ["B", "F'", "G", "D"]
    for name in names:
        block = bs[name]
        if isinstance(block, SeriesMatrix):
            assert anti_flip(block) == block, name
        else:
            assert (anti_flip(block) == block).all(), name


@pytest.mark.parametrize("family, r", [("M", r) for r in M_RANGE] + [("N", r) for r in N_RANGE])
def test_block_lemmas(family, r):
    checks = verify_block_lemmas(FamilySpec(family, r))
    assert len(checks) == (7 if family == "M" else 9)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_literal_f_prime_would_fail():
    # with (1, r-1) cleared, the product relation for F' breaks
    r = 3
    bs = build_blocks(FamilySpec("N", r))
    literal = bs["F'"].copy()
    literal[1, r - 1] = 0
    A1, B = bs["A'"], bs["B"]
    assert not (A1 @ B + B @ anti_flip(A1) == 2 * literal).all()
    assert (A1 @ B + B @ anti_flip(A1) == 2 * bs["F'"]).all()
    # the northeast block of Bin(N^2) is F'
    n2 = bin_power(family_matrix("N", r), 2)
    assert (n2[: r + 1, r + 1:] == bs["F'"]).all()


@pytest.mark.parametrize("family, r", [("M", 1), ("M", 2), ("M", 3), ("N", 2), ("N", 3)])
def test_series_identities(family, r):
    checks = verify_psi_identities(FamilySpec(family, r), 6)
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_closed_form_entries():
    psi = closed_form_psi(FamilySpec("M", 1), 4)
    assert psi[2, 0].homogeneous_part(2) == P("cc + d")
    for r in (1, 2, 3):
        psi = closed_form_psi(FamilySpec("M", r), 3)
        assert psi[0, 2 * r + 1].coefficient("") == 0
    psi = closed_form_psi(FamilySpec("N", 2), 4)
    assert psi[3, 0].homogeneous_part(3) == P("ccc + 2*cd + 2*dc")


@pytest.mark.parametrize("family, r", [("M", 1), ("N", 2)])
def test_unique_solution_check_passes(family, r):
    spec = FamilySpec(family, r)
    res = verify_theorem31(family_matrix(family, r), closed_form_psi(spec, 6), 6)
    assert res.passed, res


def test_unique_solution_check_locates_perturbation():
    spec = FamilySpec("M", 1)
    psi = closed_form_psi(spec, 6)
    rows = [list(row) for row in psi.rows()]
    rows[2][1] = rows[2][1] + TruncSeries({"cd": 1}, 6, "cd")
    bad = SeriesMatrix(rows, "cd", 6)
    res = verify_theorem31(family_matrix("M", 1), bad, 6)
    assert not res.passed
    assert res.equation == 2 and res.entry == (2, 1)
    # a constant change is caught by the line substitution
    rows = [list(row) for row in psi.rows()]
    rows[0][0] = rows[0][0] + 1
    res = verify_theorem31(family_matrix("M", 1), SeriesMatrix(rows, "cd", 6), 6)
    assert not res.passed and res.equation == 1 and res.entry == (0, 0) and res.degree == 0


def test_unique_solution_accepts_chain_series():
    m = family_matrix("N", 2)
    assert verify_theorem31(m, psi_truncated(m, 5), 5).passed


def test_corollary_pairs():
    pairs = corollary_pairs(FamilySpec("M", 1))
    assert (0, 3, 1) in pairs and (2, 0, 0) in pairs
    assert len(pairs) == 3 * 3
    pairs = corollary_pairs(FamilySpec("N", 2))
    assert {(i, j) for i, j, _ in pairs} == {(i, j) for i in (3, 4, 5) for j in (0, 1, 2)}


@pytest.mark.parametrize("family, r", [("M", 1), ("M", 2), ("N", 2)])
def test_crosscheck(family, r):
    report = crosscheck_family(FamilySpec(family, r), 4)
    assert report.passed, report.mismatches
    assert report.compared >= (2 * r + 2) ** 2


def test_closed_form_matches_chain_series_everywhere():
    spec = FamilySpec("M", 2)
    closed = closed_form_psi(spec, 4)
    counted = psi_truncated(family_matrix("M", 2), 4)
    for (i, j), x in closed.entries():
        for k in range(5):
            assert ab_to_cd(counted[i, j].homogeneous_part(k)) == x.homogeneous_part(k)
