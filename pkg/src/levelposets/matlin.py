"""Exact matrix algebra over the nonnegative integers, {0,1}, and NcPoly entries.

Integer and 0,1-matrices are plain numpy arrays.  Exact integer powers use
``dtype=object`` so entries never wrap; binarized powers only ever hold
entries in {0,1} and use ``int64``.  Matrices whose entries are
non-commutative polynomials or series are :class:`SeriesMatrix` objects.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .ncalg import AlphabetError, CutoffMismatchError, NcPoly, TruncSeries, reverse

__all__ = [
    "NotPrimitiveError",
    "SeriesMatrix",
    "as_int_matrix",
    "binarize",
    "identity",
    "ones",
    "int_power",
    "bin_power",
    "bin_powers",
    "exponent",
    "anti_flip",
    "block2x2",
    "parse_matrix",
    "format_matrix",
]


class NotPrimitiveError(ValueError):
    """No power up to ``k_max`` binarizes to the all-ones matrix."""

    def __init__(self, k_max: int):
        self.k_max = k_max
        super().__init__(f"not primitive within {k_max} powers")


def as_int_matrix(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    if arr.dtype == object:
        return arr
    return arr.astype(np.int64)


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")


def binarize(m) -> np.ndarray:
    """Entrywise 1 where positive, 0 otherwise."""
    return (as_int_matrix(m) > 0).astype(np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def ones(rows: int, cols: int | None = None) -> np.ndarray:
    return np.ones((rows, rows if cols is None else cols), dtype=np.int64)


def int_power(m, k: int) -> np.ndarray:
    """Exact ``m**k`` with arbitrary-precision entries."""
    m = as_int_matrix(m)
    _require_square(m)
    if k < 0:
        raise ValueError("negative power")
    base = m.astype(object)
    result = np.eye(m.shape[0], dtype=np.int64).astype(object)
    while k:
        if k & 1:
            result = result.dot(base)
        base = base.dot(base)
        k >>= 1
    return result


def _bool_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x.dot(y) > 0).astype(np.int64)


def bin_power(m, k: int) -> np.ndarray:
    """``Bin(m**k)`` via boolean products; ``Bin(m**0)`` is the identity."""
    m = binarize(m)
    _require_square(m)
    if k < 0:
        raise ValueError("negative power")
    result = identity(m.shape[0])
    base = m
    while k:
        if k & 1:
            result = _bool_product(result, base)
        base = _bool_product(base, base)
        k >>= 1
    return result


def bin_powers(m, k_max: int) -> list[np.ndarray]:
    """``[Bin(m**0), Bin(m**1), ..., Bin(m**k_max)]``."""
    m = binarize(m)
    _require_square(m)
    out = [identity(m.shape[0])]
    for _ in range(k_max):
        out.append(_bool_product(out[-1], m))
    return out


def exponent(m, k_max: int | None = None) -> int:
    """Smallest ``k <= k_max`` with ``Bin(m**k) = J``.

    ``k_max`` defaults to ``4 n**2``, above the classical bound
    ``(n-1)**2 + 1`` for primitive matrices.  Raises :class:`NotPrimitiveError`
    if no such power exists within the bound.
    """
    m = binarize(m)
    _require_square(m)
    n = m.shape[0]
    if k_max is None:
        k_max = 4 * n * n
    power = m
    for k in range(1, k_max + 1):
        if power.all():
            return k
        power = _bool_product(power, m)
    raise NotPrimitiveError(k_max)


def anti_flip(m):
    """Reflect across the anti-diagonal, reversing each (non-commutative) entry.

    An ``p x q`` input gives a ``q x p`` output with
    ``out[i, j] = reverse(m[p-1-j, q-1-i])``.  Integer entries are their own
    reverses.
    """
    if isinstance(m, SeriesMatrix):
        rows, cols = m.shape
        entries = [[reverse(m[rows - 1 - j, cols - 1 - i]) for j in range(rows)] for i in range(cols)]
        return SeriesMatrix(entries, m.alphabet, m.cutoff)
    arr = np.asarray(m)
    return arr[::-1, ::-1].T.copy()


def block2x2(nw, ne, sw, se):
    """Assemble ``[[nw, ne], [sw, se]]``; all blocks integer or all SeriesMatrix."""
    blocks = [nw, ne, sw, se]
    if any(isinstance(b, SeriesMatrix) for b in blocks):
        ref = next(b for b in blocks if isinstance(b, SeriesMatrix))
        nw, ne, sw, se = [
            b if isinstance(b, SeriesMatrix) else SeriesMatrix.from_int(b, ref.alphabet, ref.cutoff)
            for b in blocks
        ]
        if nw.shape[0] != ne.shape[0] or sw.shape[0] != se.shape[0] \
                or nw.shape[1] != sw.shape[1] or ne.shape[1] != se.shape[1]:
            raise ValueError("block dimensions do not conform")
        top = [list(a) + list(b) for a, b in zip(nw.rows(), ne.rows())]
        bottom = [list(a) + list(b) for a, b in zip(sw.rows(), se.rows())]
        return SeriesMatrix(top + bottom, ref.alphabet, ref.cutoff)
    try:
        return np.block([[np.asarray(nw), np.asarray(ne)], [np.asarray(sw), np.asarray(se)]])
    except ValueError as exc:
        raise ValueError(f"block dimensions do not conform: {exc}") from None


class SeriesMatrix:
    """Matrix of NcPoly / TruncSeries entries sharing one alphabet and cutoff.

    ``cutoff=None`` means the entries are exact polynomials.  Multiplication
    (``@``) respects the order of the non-commuting factors; ``*`` with a
    scalar polynomial multiplies every entry on that side.
    """

    __slots__ = ("_entries", "alphabet", "cutoff", "shape")

    def __init__(self, entries: Sequence[Sequence], alphabet: str = "ab", cutoff: int | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        self.alphabet = alphabet
        self.cutoff = cutoff
        self._entries = tuple(tuple(self._normalize(x) for x in r) for r in rows)
        self.shape = (len(rows), width)

    def _normalize(self, x) -> NcPoly:
        if isinstance(x, (int, np.integer)):
            x = NcPoly({"": int(x)}, self.alphabet)
        elif not isinstance(x, NcPoly):
            raise TypeError(f"unsupported entry type {type(x).__name__}")
        elif x.alphabet != self.alphabet and not (len(x) == 0 or set(x.terms) <= {""}):
            raise AlphabetError(f"entry alphabet {x.alphabet!r} != {self.alphabet!r}")
        xc = getattr(x, "cutoff", None)
        if self.cutoff is None:
            if xc is not None:
                raise CutoffMismatchError("series entry in an exact polynomial matrix")
            return NcPoly(x.terms, self.alphabet)
        if xc is not None and xc != self.cutoff:
            raise CutoffMismatchError(f"entry cutoff {xc} != {self.cutoff}")
        return TruncSeries(x.terms, self.cutoff, self.alphabet)

    @classmethod
    def from_int(cls, m, alphabet: str = "ab", cutoff: int | None = None) -> SeriesMatrix:
        arr = np.asarray(m)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return cls([[int(v) for v in row] for row in arr], alphabet, cutoff)

    @classmethod
    def column(cls, entries: Sequence, alphabet: str = "ab", cutoff: int | None = None) -> SeriesMatrix:
        return cls([[e] for e in entries], alphabet, cutoff)

    @classmethod
    def row(cls, entries: Sequence, alphabet: str = "ab", cutoff: int | None = None) -> SeriesMatrix:
        return cls([list(entries)], alphabet, cutoff)

    @classmethod
    def zeros(cls, rows: int, cols: int, alphabet: str = "ab", cutoff: int | None = None) -> SeriesMatrix:
        return cls([[0] * cols for _ in range(rows)], alphabet, cutoff)

    def __getitem__(self, idx):
        i, j = idx
        return self._entries[i][j]

    def rows(self):
        return self._entries

    def entries(self):
        for i, row in enumerate(self._entries):
            for j, x in enumerate(row):
                yield (i, j), x

    def map(self, fn: Callable[[NcPoly], NcPoly], alphabet: str | None = None,
            cutoff: int | None | str = "same") -> SeriesMatrix:
        cutoff = self.cutoff if cutoff == "same" else cutoff
        return SeriesMatrix([[fn(x) for x in row] for row in self._entries],
                            alphabet or self.alphabet, cutoff)

    def truncate(self, cutoff: int) -> SeriesMatrix:
        return SeriesMatrix([[x.truncate(cutoff) for x in row] for row in self._entries],
                            self.alphabet, cutoff)

    def _check_compatible(self, other: SeriesMatrix) -> int | None:
        if other.alphabet != self.alphabet:
            raise AlphabetError(f"alphabet mismatch: {self.alphabet!r} vs {other.alphabet!r}")
        if self.cutoff is not None and other.cutoff is not None and self.cutoff != other.cutoff:
            raise CutoffMismatchError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")
        return self.cutoff if self.cutoff is not None else other.cutoff

    def _lift(self, other) -> SeriesMatrix:
        if isinstance(other, SeriesMatrix):
            return other
        arr = np.asarray(other)
        if arr.ndim == 2:
            return SeriesMatrix.from_int(arr, self.alphabet, self.cutoff)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        cutoff = self._check_compatible(other)
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return SeriesMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._entries, other._entries)],
                            self.alphabet, cutoff)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda x: -x)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __matmul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        cutoff = self._check_compatible(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch for product: {self.shape} @ {other.shape}")
        zero = TruncSeries({}, cutoff, self.alphabet) if cutoff is not None else NcPoly({}, self.alphabet)
        cols = list(zip(*other._entries))
        out = []
        for row in self._entries:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return SeriesMatrix(out, self.alphabet, cutoff)

    def __rmatmul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other @ self

    def _scalar(self, s) -> tuple[NcPoly, int | None]:
        if isinstance(s, (int, np.integer)):
            s = NcPoly({"": int(s)}, self.alphabet)
        if not isinstance(s, NcPoly):
            return NotImplemented, None
        if s.alphabet != self.alphabet and set(s.terms) - {""}:
            raise AlphabetError(f"alphabet mismatch: {self.alphabet!r} vs {s.alphabet!r}")
        sc = getattr(s, "cutoff", None)
        if sc is not None and self.cutoff is not None and sc != self.cutoff:
            raise CutoffMismatchError(f"cutoff mismatch: {self.cutoff} vs {sc}")
        cutoff = self.cutoff if self.cutoff is not None else sc
        if cutoff is None:
            s = NcPoly(s.terms, self.alphabet)
        else:
            s = TruncSeries(s.terms, cutoff, self.alphabet)
        return s, cutoff

    def __mul__(self, s):
        """Right multiplication of every entry by the scalar ``s``."""
        s, cutoff = self._scalar(s)
        if s is NotImplemented:
            return s
        return SeriesMatrix([[x * s for x in row] for row in self._entries], self.alphabet, cutoff)

    def __rmul__(self, s):
        s, cutoff = self._scalar(s)
        if s is NotImplemented:
            return s
        return SeriesMatrix([[s * x for x in row] for row in self._entries], self.alphabet, cutoff)

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            other = self._lift(other)
            if other is NotImplemented:
                return other
        return self.shape == other.shape and self.cutoff == other.cutoff and all(
            a == b for r, s in zip(self._entries, other._entries) for a, b in zip(r, s)
        )

    __hash__ = None

    def first_difference(self, other: SeriesMatrix):
        """``(i, j, word, lhs_coeff, rhs_coeff)`` of the first disagreement, lowest degree first."""
        from .ncalg import word_degree

        best = None
        for (i, j), a in self.entries():
            b = other[i, j]
            for w in set(a.terms) | set(b.terms):
                if a.coefficient(w) != b.coefficient(w):
                    key = (word_degree(w), i, j, w)
                    if best is None or key < best[0]:
                        best = (key, (i, j, w, a.coefficient(w), b.coefficient(w)))
        return None if best is None else best[1]

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self._entries]

    def __str__(self) -> str:
        return "\n".join(" | ".join(row) for row in self.to_lists())

    def __repr__(self) -> str:
        return f"SeriesMatrix(shape={self.shape}, alphabet={self.alphabet!r}, cutoff={self.cutoff})"


def parse_matrix(text: str) -> np.ndarray:
    """Read the whitespace matrix format, with an optional ``"n m"`` header line."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty matrix text")
    header = None
    first = lines[0]
    # "n m" header only if the remaining lines form exactly an n x m body
    if len(first) == 2 and all(v.isdigit() for v in first):
        n, m = int(first[0]), int(first[1])
        body = lines[1:]
        if len(body) == n and n > 0 and all(len(ln) == m for ln in body):
            header = lines.pop(0)
    try:
        rows = [[int(v) for v in ln] for ln in lines]
    except ValueError as exc:
        raise ValueError(f"non-integer matrix entry: {exc}") from None
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix rows")
    if header is not None and (int(header[0]), int(header[1])) != (len(rows), width):
        raise ValueError(f"header {header} does not match {len(rows)}x{width} body")
    if any(v < 0 for r in rows for v in r):
        raise ValueError("matrix entries must be nonnegative")
    return np.array(rows, dtype=np.int64)


def format_matrix(m, header: bool = False) -> str:
    arr = np.asarray(m)
    lines = [" ".join(str(int(v)) for v in row) for row in arr]
    if header:
        lines.insert(0, f"{arr.shape[0]} {arr.shape[1]}")
    return "\n".join(lines) + "\n"
