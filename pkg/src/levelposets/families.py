"""The two parametric families of level Eulerian matrices, M(r) and N(r).

Both are ``(2r+2) x (2r+2)`` block matrices assembled from ``(r+1) x (r+1)``
blocks indexed ``0..r``; global indices run ``0..2r+1``.  Their cd-series
have the closed forms ``p phi p^flip + C`` and ``q phi q^flip + D`` with
``phi = 1/(1 - c - r d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .levelposet import LevelPoset, k_series, psi_truncated
from .matlin import SeriesMatrix, anti_flip, block2x2, ones
from .ncalg import (
    NcPoly,
    NotInCdSpanError,
    ab_to_cd,
    cd_to_ab,
    d_power_series,
    delta,
    geom_inverse,
    substitute_line,
)

__all__ = [
    "FamilySpec",
    "BlockSet",
    "RelationCheck",
    "SeriesSolutionCheck",
    "CrosscheckReport",
    "build_blocks",
    "family_matrix",
    "verify_block_lemmas",
    "closed_form_psi",
    "verify_theorem31",
    "verify_psi_identities",
    "corollary_pairs",
    "crosscheck_family",
]


@dataclass(frozen=True)
class FamilySpec:
    family: str
    r: int

    def __post_init__(self):
        if self.family not in ("M", "N"):
            raise ValueError(f"unknown family {self.family!r} (expected 'M' or 'N')")
        if not isinstance(self.r, (int, np.integer)) or self.r < 0:
            raise ValueError("r must be a nonnegative integer")
        if self.family == "N" and self.r < 2:
            raise ValueError("the N family requires r >= 2")

    @property
    def n(self) -> int:
        return 2 * self.r + 2


@dataclass(frozen=True)
class RelationCheck:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


def _block(r: int, rule) -> np.ndarray:
    return np.array([[rule(i, j) for j in range(r + 1)] for i in range(r + 1)], dtype=np.int64)


def _scalar(text: str, cutoff: int | None = None) -> NcPoly:
    p = NcPoly.parse(text, "cd")
    return p if cutoff is None else p.truncate(cutoff)


@dataclass
class BlockSet:
    """Named blocks of one family member; ``matrix`` is the assembled 0,1-matrix."""

    spec: FamilySpec
    matrix: np.ndarray
    blocks: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str):
        return self.blocks[name]


def build_blocks(spec: FamilySpec) -> BlockSet:
    """Build every block of ``spec`` entrywise and assemble the family matrix.

    M-family blocks: ``A, B, F, H, J, C, p``; N-family adds ``A', F', G, X,
    D, q`` (the shared ``A, B, J`` are included too).  ``C``, ``D``, ``p``
    and ``q`` are exact cd-polynomial SeriesMatrix objects.
    """
    r = spec.r
    A = _block(r, lambda i, j: int(i == 0))
    B = _block(r, lambda i, j: int(0 <= i - j <= 1))
    J = ones(r + 1)
    Z = np.zeros((r + 1, r + 1), dtype=np.int64)
    blocks: dict[str, Any] = {"A": A, "B": B, "J": J}
    if spec.family == "M":
        F = _block(r, lambda i, j: int(i == 0 or j == r))
        H = B.copy()
        H[0, r] -= 1
        blocks.update(F=F, H=H)
        blocks["C"] = SeriesMatrix.from_int(block2x2(Z, H, Z, Z), "cd")
        blocks["p"] = SeriesMatrix.column([1] + [_scalar("c")] * r + [1] * (r + 1), "cd")
        matrix = block2x2(A, B, J, anti_flip(A))
    else:
        A1 = _block(r, lambda i, j: int((i == 0 and j <= r - 1) or (i == 1 and j == r)))
        # (1, r-1) is set as well: it is forced by A'B + BA'f = 2F' and by the
        # northeast block of Bin(N^2)
        F1 = _block(r, lambda i, j: int((i == 0 and j <= r - 1) or (i >= 1 and j == r)
                                        or (i == 1 and j == r - 1)))
        G = Z.copy()
        G[0, r] = r - 2
        G[0, r - 1] = 1
        G[1, r] = 1
        X = Z.copy()
        X[0, r] = r - 1
        X[0, r - 1] = 1
        blocks.update({"A'": A1, "F'": F1, "G": G, "X": X})
        base = SeriesMatrix.from_int(block2x2(A1, B, Z, anti_flip(A1)), "cd")
        with_c = SeriesMatrix.from_int(block2x2(Z, F1, Z, Z), "cd") * _scalar("c")
        with_d = SeriesMatrix.from_int(block2x2(Z, G, Z, Z), "cd") * _scalar("d")
        blocks["D"] = base + with_c + with_d
        blocks["q"] = SeriesMatrix.column(
            [_scalar(f"c + {r - 1}*d"), _scalar("c + d")] + [_scalar("c")] * (r - 1) + [1] * (r + 1), "cd")
        matrix = block2x2(A1, B, J, anti_flip(A1))
    return BlockSet(spec, matrix, blocks)


def family_matrix(family: str, r: int) -> np.ndarray:
    return build_blocks(FamilySpec(family, r)).matrix


def _eq(name: str, lhs: np.ndarray, rhs: np.ndarray) -> RelationCheck:
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    if lhs.shape == rhs.shape and np.array_equal(lhs, rhs):
        return RelationCheck(name, True)
    if lhs.shape != rhs.shape:
        return RelationCheck(name, False, f"shape {lhs.shape} != {rhs.shape}")
    i, j = (int(x) for x in np.argwhere(lhs != rhs)[0])
    return RelationCheck(name, False, f"entry ({i},{j}): {lhs[i, j]} != {rhs[i, j]}")


def verify_block_lemmas(spec: FamilySpec) -> list[RelationCheck]:
    """Check the block identities of the family as exact matrix equations."""
    bs = build_blocks(spec)
    A, B, J = bs["A"], bs["B"], bs["J"]
    Af = anti_flip(A)
    checks = []
    if spec.family == "M":
        F = bs["F"]
        checks += [
            _eq("A^2 = A", A @ A, A),
            _eq("Af^2 = Af", Af @ Af, Af),
            _eq("B J = 2J - A", B @ J, 2 * J - A),
            _eq("J B = 2J - Af", J @ B, 2 * J - Af),
            _eq("J A = J", J @ A, J),
            _eq("Af J = J", Af @ J, J),
            _eq("A B + B Af = 2F", A @ B + B @ Af, 2 * F),
        ]
    else:
        A1, F1, G, X = bs["A'"], bs["F'"], bs["G"], bs["X"]
        A1f = anti_flip(A1)
        checks += [
            _eq("A'^2 = A", A1 @ A1, A),
            _eq("A'f^2 = Af", A1f @ A1f, Af),
            _eq("J A' = J", J @ A1, J),
            _eq("A'f J = J", A1f @ J, J),
            _eq("A' B + B A'f = 2F'", A1 @ B + B @ A1f, 2 * F1),
            _eq("A' F' = A' + X", A1 @ F1, A1 + X),
            _eq("A' G = X", A1 @ G, X),
            _eq("A' - A + X = G", A1 - A + X, G),
            _eq("A'f - Af + Xf = G", A1f - Af + anti_flip(X), G),
        ]
    return checks


def closed_form_psi(spec: FamilySpec, cutoff: int) -> SeriesMatrix:
    """The closed-form cd-series matrix of the family member, up to ``cutoff``."""
    bs = build_blocks(spec)
    phi = geom_inverse(_scalar(f"c + {spec.r}*d", cutoff))
    vec = bs["p"] if spec.family == "M" else bs["q"]
    correction = bs["C"] if spec.family == "M" else bs["D"]
    vec = vec.truncate(cutoff)
    return (vec * phi) @ anti_flip(vec) + correction


@dataclass(frozen=True)
class SeriesSolutionCheck:
    passed: bool
    equation: int | None = None  # 1: line substitution, 2: coproduct equation
    entry: tuple[int, int] | None = None
    degree: int | None = None
    detail: str | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "equation": self.equation,
            "entry": list(self.entry) if self.entry else None,
            "degree": self.degree,
            "detail": self.detail,
        }


def verify_theorem31(m, psi: SeriesMatrix, cutoff: int) -> SeriesSolutionCheck:
    """Check that ``psi`` solves the two defining equations up to degree ``cutoff``.

    (1) ``psi`` at a=t, b=0 equals ``K_M(t)``;
    (2) ``Delta(psi) = psi t psi``.
    Together these determine the ab-series matrix uniquely, degree by degree.
    The check runs on the ab form; cd input is expanded first.
    """
    m = np.asarray(m)
    if m.shape != psi.shape or m.shape[0] != m.shape[1]:
        raise ValueError(f"shape mismatch: matrix {m.shape} vs series {psi.shape}")
    if psi.cutoff is not None and psi.cutoff < cutoff:
        raise ValueError(f"series known only to degree {psi.cutoff} < {cutoff}")
    if psi.alphabet == "cd":
        psi = psi.map(cd_to_ab, alphabet="ab")
    psi = psi.truncate(cutoff)

    k = k_series(m, cutoff)
    for (i, j), x in psi.entries():
        got = substitute_line(x, "ab")
        want = [k[i, j].coefficient("t" * d) for d in range(cutoff + 1)]
        if got != want:
            d = next(d for d in range(cutoff + 1) if got[d] != want[d])
            return SeriesSolutionCheck(False, 1, (i, j), d, f"coefficient of t^{d}: {got[d]} != {want[d]}")

    lhs = psi.map(delta)
    rhs = (psi * NcPoly.word("t", alphabet="ab")) @ psi
    diff = lhs.first_difference(rhs)
    if diff is not None:
        i, j, w, a, b = diff
        deg = len(w)
        return SeriesSolutionCheck(False, 2, (i, j), deg, f"coefficient of {w}: {a} != {b}")
    return SeriesSolutionCheck(True)


def verify_psi_identities(spec: FamilySpec, cutoff: int) -> list[RelationCheck]:
    """The auxiliary series identities behind the closed forms, at ``cutoff``."""
    bs = build_blocks(spec)
    r = spec.r
    t = _scalar("t", cutoff)
    u = _scalar(f"c + {r}*d", cutoff)
    checks = []

    def same(name, lhs, rhs):
        if lhs == rhs:
            checks.append(RelationCheck(name, True))
        else:
            checks.append(RelationCheck(name, False, f"{lhs} != {rhs}"))

    if spec.family == "M":
        p = bs["p"].truncate(cutoff)
        pf = anti_flip(p)
        C = bs["C"].truncate(cutoff)
        same("pf t p = Delta(c + r d)", ((pf * t) @ p)[0, 0], delta(u))
        same("C t p = Delta(p)", (C * t) @ p, p.map(delta))
        same("pf t C = Delta(pf)", (pf * t) @ C, pf.map(delta))
        same("C t C = 0", (C * t) @ C, SeriesMatrix.zeros(spec.n, spec.n, "cd", cutoff))
    else:
        q = bs["q"].truncate(cutoff)
        qf = anti_flip(q)
        D = bs["D"].truncate(cutoff)
        phi = geom_inverse(u)
        same("phi (c + r d) = phi - 1", phi * u, phi - 1)
        same("(c + r d) phi = phi - 1", u * phi, phi - 1)
        same("qf t q = r ct + r tc + (c + r d) t + t (c + r d)",
             ((qf * t) @ q)[0, 0], _scalar(f"{r}*ct + {r}*tc", cutoff) + u * t + t * u)
        residual = (qf * t) @ D - qf.map(delta) - t * qf
        expected = [0] * (spec.n - 1) + [_scalar(f"-t + ct + {r}*dt", cutoff)]
        same("qf t D - Delta(qf) - t qf = (0, ..., 0, -t + ct + r dt)",
             residual, SeriesMatrix.row(expected, "cd", cutoff))
    return checks


def corollary_pairs(spec: FamilySpec) -> list[tuple[int, int, int]]:
    """``(i, j, k_min)``: entries whose cd-index is the r-power formula for ``k >= k_min``."""
    r = spec.r
    if spec.family == "M":
        rows = [0] + list(range(r + 1, 2 * r + 2))
        cols = list(range(r + 1)) + [2 * r + 1]
        return [(i, j, 1 if (i, j) == (0, 2 * r + 1) else 0) for i in rows for j in cols]
    return [(i, j, 0) for i in range(r + 1, 2 * r + 2) for j in range(r + 1)]


@dataclass
class CrosscheckReport:
    spec: FamilySpec
    cutoff: int
    compared: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "family": self.spec.family,
            "r": self.spec.r,
            "cutoff": self.cutoff,
            "compared": self.compared,
            "passed": self.passed,
            "mismatches": list(self.mismatches),
        }


def crosscheck_family(spec: FamilySpec, cutoff: int) -> CrosscheckReport:
    """Compare closed form, chain-count series and the r-power formula.

    Every entry of the closed form is compared, degree by degree, with the
    cd-rewriting of the series assembled from flag f-vectors.  On the
    corollary's index pairs both are also compared with
    ``sum_w r^(#d in w) w``, honoring the ``k >= 1`` restriction at
    ``(0, 2r+1)`` for the M family.
    """
    report = CrosscheckReport(spec, cutoff)
    m = build_blocks(spec).matrix
    closed = closed_form_psi(spec, cutoff)
    counted = psi_truncated(LevelPoset(m), cutoff)
    formula = d_power_series(spec.r, cutoff)
    wanted = {(i, j): k_min for i, j, k_min in corollary_pairs(spec)}
    for (i, j), alpha in closed.entries():
        for k in range(cutoff + 1):
            a_k = alpha.homogeneous_part(k)
            try:
                b_k = ab_to_cd(counted[i, j].homogeneous_part(k))
            except NotInCdSpanError as exc:
                report.mismatches.append(f"({i},{j}) degree {k}: chain series not in cd-span: {exc.poly}")
                continue
            report.compared += 1
            if a_k != b_k:
                report.mismatches.append(f"({i},{j}) degree {k}: closed form {a_k} != chains {b_k}")
            if (i, j) in wanted and k >= wanted[(i, j)]:
                g_k = formula.homogeneous_part(k)
                if a_k != g_k or b_k != g_k:
                    report.mismatches.append(f"({i},{j}) degree {k}: formula {g_k} disagrees")
    return report
