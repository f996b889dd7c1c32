"""Level posets of 0,1-matrices: intervals, flag f-vectors, ab-/cd-indices.

The level poset of an ``n x n`` 0,1-matrix ``M`` lives on
``{0..n-1} x Z``; ``(i, s)`` is covered by ``(j, s+1)`` exactly when
``M[i, j] = 1``.  Hence ``(i, s) <= (j, p)`` iff ``s <= p`` and
``Bin(M**(p-s))[i, j] = 1``.  Because the poset is translation invariant,
an interval is identified by ``(i, j, p)``, meaning ``[(i, 0), (j, p)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .matlin import (
    NotPrimitiveError,
    SeriesMatrix,
    _bool_product,
    binarize,
    exponent,
    identity,
    ones,
)
from .ncalg import NcPoly, TruncSeries, ab_to_cd

__all__ = [
    "EmptyIntervalError",
    "LevelPoset",
    "Interval",
    "RankCheck",
    "CertificateReport",
    "interval_elements",
    "flag_f",
    "flag_vector",
    "ab_index",
    "ab_index_from_chains",
    "cd_index",
    "euler_characteristic_sum",
    "eulerian_rank_check",
    "eulerian_check_prop21",
    "k_series",
    "psi_truncated",
    "psi_automaton",
]


class EmptyIntervalError(ValueError):
    """``(i, 0)`` is not below ``(j, p)``, so the interval has no elements."""


class LevelPoset:
    """The level poset of a square 0,1-matrix, with cached binarized powers.

    Powers are computed eagerly until the sequence ``Bin(M**k)`` repeats
    (boolean powers are eventually periodic), after which any power is a
    table lookup.
    """

    def __init__(self, m, max_eager: int | None = None):
        arr = np.asarray(m)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("level posets need a 0,1-matrix")
        self.m = binarize(arr)
        self.n = self.m.shape[0]
        if max_eager is None:
            max_eager = 4 * self.n * self.n + 2
        self._powers = [identity(self.n)]
        self._cycle: tuple[int, int] | None = None
        seen = {self._powers[0].tobytes(): 0}
        for k in range(1, max_eager + 1):
            nxt = _bool_product(self._powers[-1], self.m)
            key = nxt.tobytes()
            if key in seen:
                start = seen[key]
                self._cycle = (start, k - start)
                break
            seen[key] = k
            self._powers.append(nxt)
        try:
            self.exponent: int | None = exponent(self.m, k_max=max(1, len(self._powers) + 1))
        except NotPrimitiveError:
            self.exponent = None

    @property
    def is_primitive(self) -> bool:
        return self.exponent is not None

    def bin_power(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("negative power")
        if k < len(self._powers):
            return self._powers[k]
        if self._cycle is not None:
            start, period = self._cycle
            return self._powers[start + (k - start) % period]
        power = self._powers[-1]
        for _ in range(k - len(self._powers) + 1):
            power = _bool_product(power, self.m)
        return power

    def leq(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        (i, s), (j, p) = x, y
        return s <= p and bool(self.bin_power(p - s)[i, j])

    def interval(self, i: int, j: int, p: int) -> Interval:
        return Interval(self, i, j, p)

    def nonempty_intervals(self, p: int) -> Iterable[Interval]:
        power = self.bin_power(p)
        for i in range(self.n):
            for j in range(self.n):
                if power[i, j]:
                    yield Interval(self, i, j, p)

    def __repr__(self) -> str:
        return f"LevelPoset(n={self.n}, exponent={self.exponent})"


def _as_poset(m) -> LevelPoset:
    return m if isinstance(m, LevelPoset) else LevelPoset(m)


@dataclass(frozen=True)
class Interval:
    """The interval ``[(i, 0), (j, p)]`` of a level poset."""

    poset: LevelPoset = field(repr=False, compare=False)
    i: int
    j: int
    p: int

    def __post_init__(self):
        n = self.poset.n
        if not (0 <= self.i < n and 0 <= self.j < n):
            raise IndexError(f"node index out of range for n={n}")
        if self.p < 0:
            raise ValueError("interval length must be nonnegative")
        if not self.poset.bin_power(self.p)[self.i, self.j]:
            raise EmptyIntervalError(f"[({self.i},0),({self.j},{self.p})] is empty")

    def elements(self, s: int) -> frozenset[int]:
        return interval_elements(self, s)

    def rank_counts(self) -> list[int]:
        return [len(self.elements(s)) for s in range(self.p + 1)]


def interval_elements(iv: Interval, s: int) -> frozenset[int]:
    """Node indices ``l`` with ``(l, s)`` in the interval."""
    if not 0 <= s <= iv.p:
        raise ValueError(f"rank {s} outside 0..{iv.p}")
    below = iv.poset.bin_power(s)[iv.i]
    above = iv.poset.bin_power(iv.p - s)[:, iv.j]
    return frozenset(int(x) for x in np.flatnonzero(below & above))


def _vec_dtype(poset: LevelPoset, p: int):
    # chain counts are bounded by n**p
    return np.int64 if p * np.log2(max(poset.n, 2)) < 62 else object


def _flag_rows(poset: LevelPoset, i: int, p: int) -> dict[tuple[int, ...], np.ndarray]:
    """For every rank set S of {1..p-1}: the row ``e_i Bin(M^s1) Bin(M^(s2-s1)) ... Bin(M^(p-sk))``.

    Entry ``j`` of the row is ``f_S`` of the interval ``[(i,0),(j,p)]``.
    """
    dtype = _vec_dtype(poset, p)
    start = np.zeros(poset.n, dtype=dtype)
    start[i] = 1
    out: dict[tuple[int, ...], np.ndarray] = {}

    def extend(vec, last, chosen):
        out[chosen] = vec.dot(poset.bin_power(p - last).astype(dtype))
        for s in range(last + 1, p):
            extend(vec.dot(poset.bin_power(s - last).astype(dtype)), s, chosen + (s,))

    extend(start, 0, ())
    return out


def _check_rank_set(iv: Interval, S: Iterable[int]) -> tuple[int, ...]:
    ranks = tuple(sorted(set(S)))
    if any(not 1 <= s <= iv.p - 1 for s in ranks):
        raise ValueError(f"rank set {ranks} not inside 1..{iv.p - 1}")
    return ranks


def flag_f(iv: Interval, S: Iterable[int]) -> int:
    """Number of chains of the interval whose interior ranks are exactly ``S``."""
    ranks = _check_rank_set(iv, S)
    poset = iv.poset
    vec = np.zeros(poset.n, dtype=_vec_dtype(poset, iv.p))
    vec[iv.i] = 1
    last = 0
    for s in ranks + (iv.p,):
        vec = vec.dot(poset.bin_power(s - last).astype(vec.dtype))
        last = s
    return int(vec[iv.j])


def flag_vector(iv: Interval) -> dict[tuple[int, ...], int]:
    """All flag f-vector entries, keyed by sorted rank tuples."""
    rows = _flag_rows(iv.poset, iv.i, iv.p)
    return {S: int(row[iv.j]) for S, row in sorted(rows.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def _ab_from_flags(flags: dict[tuple[int, ...], int], p: int) -> NcPoly:
    # coefficient of the word with b exactly at positions U is the flag h-vector
    # entry sum_{S <= U} (-1)^{|U - S|} f_S
    terms = {}
    positions = range(1, p)
    for size in range(p):
        for U in combinations(positions, size):
            h = 0
            for k in range(size + 1):
                sign = -1 if (size - k) % 2 else 1
                for S in combinations(U, k):
                    h += sign * flags.get(S, 0)
            if h:
                word = "".join("b" if s in U else "a" for s in positions)
                terms[word] = h
    return NcPoly(terms, "ab")


def ab_index(iv: Interval) -> NcPoly:
    """The ab-index of the interval, homogeneous of degree ``p - 1``."""
    if iv.p < 1:
        raise ValueError("the ab-index needs an interval of length >= 1")
    return _ab_from_flags(flag_vector(iv), iv.p)


def _enumerate_chains(iv: Interval) -> dict[tuple[int, ...], int]:
    """Tally of chains by interior rank set, by explicit depth-first enumeration."""
    poset = iv.poset
    layers = [sorted(iv.elements(s)) for s in range(iv.p + 1)]
    tally: dict[tuple[int, ...], int] = {}

    def walk(node, rank, ranks):
        if poset.leq((node, rank), (iv.j, iv.p)):
            tally[ranks] = tally.get(ranks, 0) + 1
        for s in range(rank + 1, iv.p):
            for nxt in layers[s]:
                if poset.leq((node, rank), (nxt, s)):
                    walk(nxt, s, ranks + (s,))

    walk(iv.i, 0, ())
    return tally


def ab_index_from_chains(iv: Interval) -> NcPoly:
    """The ab-index summed chain by chain as products of (a-b) and b factors.

    Exponential in the length; an independent route to :func:`ab_index`.
    """
    if iv.p < 1:
        raise ValueError("the ab-index needs an interval of length >= 1")
    a_minus_b = NcPoly({"a": 1, "b": -1}, "ab")
    b = NcPoly({"b": 1}, "ab")
    total = NcPoly({}, "ab")
    for ranks, count in _enumerate_chains(iv).items():
        term = NcPoly.one("ab")
        for s in range(1, iv.p):
            term = term * (b if s in ranks else a_minus_b)
        total = total + count * term
    return total


def cd_index(iv: Interval) -> NcPoly:
    """cd-index of the interval; raises NotInCdSpanError for non-Eulerian intervals."""
    return ab_to_cd(ab_index(iv))


def euler_characteristic_sum(iv: Interval) -> int:
    """``sum_s (-1)^s |rank s|``; zero for Eulerian intervals of positive length."""
    return sum((-1) ** s * c for s, c in enumerate(iv.rank_counts()))


@dataclass(frozen=True)
class RankCheck:
    p: int
    passed: bool
    witness: tuple[int, int, int] | None = None  # (i, j, nonzero value)

    def to_dict(self) -> dict:
        return {"p": self.p, "passed": self.passed, "witness": list(self.witness) if self.witness else None}


def eulerian_rank_check(m, p: int, allow_odd: bool = False) -> RankCheck:
    """Evaluate ``sum_{s=0}^p (-1)^s Bin(M^s) Bin(M^(p-s))`` exactly.

    Odd ranks are refused unless ``allow_odd`` is set, since even ranks
    suffice for the Eulerian property.
    """
    poset = _as_poset(m)
    if p <= 0:
        raise ValueError("rank must be positive")
    if p % 2 and not allow_odd:
        raise ValueError("only even ranks are checked (pass allow_odd=True for diagnostics)")
    total = np.zeros((poset.n, poset.n), dtype=object)
    for s in range(p + 1):
        term = poset.bin_power(s).astype(object).dot(poset.bin_power(p - s).astype(object))
        total = total + term if s % 2 == 0 else total - term
    bad = np.argwhere(total != 0)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        return RankCheck(p, False, (i, j, int(total[i, j])))
    return RankCheck(p, True)


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of the exponent-based Eulerian certificate.

    ``part_a``: row and column sums of ``W = sum_{s=1}^{g-1} (-1)^s Bin(M^s)``
    all equal ``(-1)^(g-1) n/2 - 1``, which gives every even rank ``>= 2g``.
    ``square_vanishes``: ``(J - Bin(M^(g-1)))^2 = 0``, which lowers this to
    rank ``2g - 2``.  ``direct`` holds explicit checks of the even ranks
    below ``2g``.
    """

    n: int
    exponent: int
    w: np.ndarray = field(repr=False, compare=False)
    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    target_sum: Fraction
    part_a: bool
    square_vanishes: bool
    direct: tuple[RankCheck, ...]

    @property
    def failing_rank(self) -> int | None:
        g = self.exponent
        for check in self.direct:
            if not check.passed and not (check.p == 2 * g - 2 and self.part_a and self.square_vanishes):
                return check.p
        if not self.part_a:
            return 2 * g
        return None

    @property
    def certified(self) -> bool:
        return self.failing_rank is None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "exponent": self.exponent,
            "w_row_sums": list(self.row_sums),
            "w_col_sums": list(self.col_sums),
            "target_sum": str(self.target_sum),
            "part_a": self.part_a,
            "square_vanishes": self.square_vanishes,
            "direct": [c.to_dict() for c in self.direct],
            "certified": self.certified,
            "failing_rank": self.failing_rank,
        }


def eulerian_check_prop21(m) -> CertificateReport:
    """Certify the Eulerian property of a primitive matrix from its exponent.

    Raises NotPrimitiveError for non-primitive input.
    """
    poset = _as_poset(m)
    if poset.exponent is None:
        raise NotPrimitiveError(len(poset._powers))
    g, n = poset.exponent, poset.n
    w = np.zeros((n, n), dtype=np.int64)
    for s in range(1, g):
        w += (-1) ** s * poset.bin_power(s)
    target = Fraction((-1) ** (g - 1) * n, 2) - 1
    rows = tuple(int(x) for x in w.sum(axis=1))
    cols = tuple(int(x) for x in w.sum(axis=0))
    part_a = all(x == target for x in rows + cols)
    diff = ones(n) - poset.bin_power(g - 1)
    square_vanishes = not diff.dot(diff).any()
    direct = tuple(eulerian_rank_check(poset, p) for p in range(2, 2 * g, 2))
    return CertificateReport(n, g, w, rows, cols, target, part_a, square_vanishes, direct)


def k_series(m, cutoff: int, alphabet: str = "ab") -> SeriesMatrix:
    """``sum_{k=0}^{cutoff} Bin(M^(k+1)) t^k`` as a matrix of series in ``t``."""
    poset = _as_poset(m)
    entries = [[{} for _ in range(poset.n)] for _ in range(poset.n)]
    for k in range(cutoff + 1):
        power = poset.bin_power(k + 1)
        for i, j in zip(*np.nonzero(power)):
            entries[i][j]["t" * k] = 1
    return SeriesMatrix([[TruncSeries(e, cutoff, alphabet) for e in row] for row in entries], alphabet, cutoff)


def psi_truncated(m, cutoff: int) -> SeriesMatrix:
    """Matrix of ``sum_{k>=1} ab_index([(i,0),(j,k)])`` over degrees ``<= cutoff``.

    Built from flag f-vectors of every interval of length ``1..cutoff+1``.
    """
    poset = _as_poset(m)
    n = poset.n
    entries = [[dict() for _ in range(n)] for _ in range(n)]
    for p in range(1, cutoff + 2):
        reach = poset.bin_power(p)
        for i in range(n):
            if not reach[i].any():
                continue
            rows = _flag_rows(poset, i, p)
            for j in np.flatnonzero(reach[i]):
                flags = {S: int(row[j]) for S, row in rows.items()}
                entries[i][j].update(_ab_from_flags(flags, p).terms)
    return SeriesMatrix([[TruncSeries(e, cutoff, "ab") for e in row] for row in entries], "ab", cutoff)


def psi_automaton(m, cutoff: int) -> SeriesMatrix:
    """Path sum of the two-layer weighted automaton built from ``K_M(a - b)``.

    Start states ``s_i`` reach final states ``f_j`` with weight ``K[i, j]``;
    final states step to each other with weight ``b K[i, j]``.  The total
    weight from ``s_i`` to ``f_j`` is ``sum_mu K (b K)^mu``.
    """
    poset = _as_poset(m)
    n = poset.n
    a_minus_b = TruncSeries({"a": 1, "b": -1}, cutoff, "ab")
    gap_powers = [TruncSeries({"": 1}, cutoff, "ab")]
    for _ in range(cutoff):
        gap_powers.append(gap_powers[-1] * a_minus_b)
    zero = TruncSeries({}, cutoff, "ab")
    entries = [[zero] * n for _ in range(n)]
    for k in range(cutoff + 1):
        power = poset.bin_power(k + 1)
        for i, j in zip(*np.nonzero(power)):
            entries[i][j] = entries[i][j] + gap_powers[k]
    kernel = SeriesMatrix(entries, "ab", cutoff)
    step = NcPoly({"b": 1}, "ab") * kernel
    total = term = kernel
    # each step raises the degree by at least one
    for _ in range(cutoff):
        term = term @ step
        if all(x.is_zero() for _, x in term.entries()):
            break
        total = total + term
    return total
