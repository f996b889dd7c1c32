"""Reduced powers in the algebra of walks and the single-monomial shelling test.

Walks ``i0 -> i1 -> ... -> ip`` in the digraph of a 0,1-matrix form a basis
of the algebra of walks.  A length-2 walk ``(i, j, k)`` is *forbidden* when
some ``j' < j`` also has edges ``i -> j'`` and ``j' -> k``; a walk survives in
the quotient iff it contains no forbidden consecutive triple.  If every
entry of every power of the walk matrix is zero or a single surviving
monomial, the natural vertex order is a vertex shelling order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matlin import binarize

__all__ = [
    "WalkMonomial",
    "WalkTable",
    "Refutation",
    "ShellabilityCertificate",
    "forbidden_triple",
    "forbidden_table",
    "is_surviving_walk",
    "reduced_powers",
    "shellability_certificate",
    "prop63_oracle",
]


@dataclass(frozen=True, order=True)
class WalkMonomial:
    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("a walk monomial needs at least one edge")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def __str__(self) -> str:
        return "x_{" + ",".join(str(v) for v in self.vertices) + "}"


def _square01(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return binarize(arr)


def forbidden_triple(m, i: int, j: int, k: int) -> bool:
    """True iff some ``j' < j`` has edges ``i -> j'`` and ``j' -> k``."""
    m = _square01(m)
    if not (m[i, j] and m[j, k]):
        raise ValueError(f"({i},{j},{k}) is not a walk: missing edge")
    return bool((m[i, :j] & m[:j, k]).any())


def forbidden_table(m) -> np.ndarray:
    """Boolean ``F[i, j, k]`` for every length-2 walk; False off the walks."""
    m = _square01(m)
    n = m.shape[0]
    # common[i, k, j'] = 1 when i -> j' -> k
    common = m[:, None, :] * m.T[None, :, :]
    earlier = np.cumsum(common, axis=2) - common  # count of j' < j
    table = (earlier.transpose(0, 2, 1) > 0)
    walks = (m[:, :, None] & m[None, :, :]).astype(bool)
    return table & walks if n else table


def is_surviving_walk(m, vertices) -> bool:
    """Every internal vertex is the least common neighbour of its two neighbours."""
    m = _square01(m)
    vs = list(vertices)
    if any(not m[a, b] for a, b in zip(vs, vs[1:])):
        raise ValueError("not a walk")
    for a, v, b in zip(vs, vs[1:], vs[2:]):
        common = np.flatnonzero(m[a] & m[:, b])
        if v != common.min():
            return False
    return True


@dataclass
class WalkTable:
    """Surviving walks by ``(source, target, length)``.

    ``counts`` are exact; ``witnesses`` keeps at most ``witness_cap`` walks per
    entry, in lexicographic order of the walks found.
    """

    n: int
    p_max: int
    witness_cap: int
    counts: dict[tuple[int, int, int], int] = field(default_factory=dict)
    witnesses: dict[tuple[int, int, int], tuple[WalkMonomial, ...]] = field(default_factory=dict)

    def count(self, i: int, j: int, p: int) -> int:
        return self.counts.get((i, j, p), 0)

    def entry(self, i: int, j: int, p: int) -> tuple[WalkMonomial, ...]:
        return self.witnesses.get((i, j, p), ())

    def single(self, i: int, j: int, p: int) -> WalkMonomial | None:
        """The entry as a single monomial, ``None`` for zero; raises if larger."""
        c = self.count(i, j, p)
        if c > 1:
            raise ValueError(f"entry ({i},{j},{p}) has {c} monomials")
        return self.entry(i, j, p)[0] if c else None


def reduced_powers(m, p_max: int, witness_cap: int = 2) -> WalkTable:
    """All powers ``1..p_max`` of the walk matrix modulo the forbidden triples.

    Dynamic program over ``(source, last two vertices)`` states with exact
    counts and a capped list of explicit walks per state.
    """
    if p_max < 1 or witness_cap < 1:
        raise ValueError("p_max and witness_cap must be positive")
    m = _square01(m)
    n = m.shape[0]
    forbidden = forbidden_table(m)
    succ = [tuple(int(x) for x in np.flatnonzero(m[v])) for v in range(n)]
    table = WalkTable(n, p_max, witness_cap)

    for i in range(n):
        # state (u, v) -> (count, witnesses); at length 1 the state is (i, j)
        states = {(i, j): (1, [(i, j)]) for j in succ[i]}
        for p in range(1, p_max + 1):
            if p > 1:
                nxt: dict[tuple[int, int], tuple[int, list]] = {}
                for (u, v), (cnt, wits) in sorted(states.items()):
                    for w in succ[v]:
                        if forbidden[u, v, w]:
                            continue
                        c0, w0 = nxt.get((v, w), (0, []))
                        room = witness_cap - len(w0)
                        nxt[(v, w)] = (c0 + cnt, w0 + [x + (w,) for x in wits[:room]])
                states = nxt
            agg: dict[int, tuple[int, list]] = {}
            for (u, v), (cnt, wits) in states.items():
                c0, w0 = agg.get(v, (0, []))
                agg[v] = (c0 + cnt, w0 + wits)
            for j, (cnt, wits) in agg.items():
                table.counts[(i, j, p)] = cnt
                table.witnesses[(i, j, p)] = tuple(WalkMonomial(w) for w in sorted(wits)[:witness_cap])
    return table


@dataclass(frozen=True)
class Refutation:
    i: int
    j: int
    p: int
    count: int
    monomials: tuple[WalkMonomial, ...]

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "p": self.p, "count": self.count,
                "monomials": [str(w) for w in self.monomials]}

    def __str__(self) -> str:
        more = "" if self.count == len(self.monomials) else f" + ... ({self.count} monomials)"
        return f"({self.i},{self.j},{self.p}): " + " + ".join(str(w) for w in self.monomials) + more


@dataclass(frozen=True)
class ShellabilityCertificate:
    """``certified``: every entry up to ``p_max`` is zero or one monomial.

    The claim is bounded: it covers powers up to ``p_max`` only.  A refuted
    certificate lists every offending entry at the first failing power;
    ``counterexample`` is the smallest of them in ``(p, i, j)`` order.
    """

    status: str
    p_max: int
    failures: tuple[Refutation, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    @property
    def counterexample(self) -> Refutation | None:
        return self.failures[0] if self.failures else None

    def failure_at(self, i: int, j: int, p: int) -> Refutation | None:
        return next((f for f in self.failures if (f.i, f.j, f.p) == (i, j, p)), None)

    def to_dict(self) -> dict:
        cx = self.counterexample
        return {
            "status": self.status,
            "p_max": self.p_max,
            "counterexample": cx.to_dict() if cx else None,
            "failures": [f.to_dict() for f in self.failures],
        }

    def __str__(self) -> str:
        if self.certified:
            return f"Certified up to p = {self.p_max}"
        return f"Refuted at {self.counterexample}"


def shellability_certificate(m, p_max: int, table: WalkTable | None = None) -> ShellabilityCertificate:
    """Bounded single-monomial test over all powers ``1..p_max``."""
    if table is None:
        table = reduced_powers(m, p_max)
    bad = sorted((p, i, j) for (i, j, p), c in table.counts.items() if c > 1 and p <= p_max)
    if not bad:
        return ShellabilityCertificate("certified", p_max)
    first = bad[0][0]
    failures = tuple(Refutation(i, j, p, table.count(i, j, p), table.entry(i, j, p))
                     for p, i, j in bad if p == first)
    return ShellabilityCertificate("refuted", p_max, failures)


def prop63_oracle(r: int, p: int, i: int, j: int) -> WalkMonomial | None:
    """Closed-form entry ``(i, j)`` of the ``p``-th reduced power for M(r); ``None`` is zero."""
    if r < 1:
        raise ValueError("r must be positive")
    if p < 2:
        raise ValueError("the closed form covers p >= 2")
    top = 2 * r + 1
    if not (0 <= i <= top and 0 <= j <= top):
        raise ValueError(f"coordinates outside 0..{top}")

    def x(*parts) -> WalkMonomial:
        verts = []
        for part in parts:
            verts.extend(part if isinstance(part, (list, tuple)) else [part])
        return WalkMonomial(tuple(verts))

    zeros = lambda k: [0] * k  # noqa: E731
    south, east = i > r, j > r
    if south and not east:
        return x(i, zeros(p - 1), j)
    if south and east:
        return x(i, zeros(p - 2), j - r - 1, j)
    if not east:
        if i == 0:
            return x(zeros(p), j)
        return x(i, i + r, zeros(p - 2), j)
    if i == 0:
        return x(zeros(p - 1), j - r - 1, j)
    if p == 2:
        return x(i, i + r, top) if j == top else None
    return x(i, i + r, zeros(p - 3), j - r - 1, j)
