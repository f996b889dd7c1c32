"""Free non-commutative polynomials and truncated series over {a,b,t} / {c,d,t}.

Words are plain strings of letters.  Coefficients are Python integers, so
all arithmetic is exact.  Two alphabets are supported:

* ``"ab"`` -- letters ``a``, ``b`` (degree 1 each) plus ``t``;
* ``"cd"`` -- letters ``c`` (degree 1), ``d`` (degree 2) plus ``t``.

The letter ``t`` stands for the tensor sign in the coproduct and has degree 1
in both alphabets, which makes the derivation :func:`delta` degree preserving.

>>> c, d = NcPoly.parse("c"), NcPoly.parse("d")
>>> str(c * d - d * c)
'cd - dc'
>>> str(cd_to_ab(c * c + d))
'aa + 2*ab + 2*ba + bb'
"""

from __future__ import annotations

import math
import numbers
import re
from collections import defaultdict
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from ._exact import SingularSystemError, solve_square

__all__ = [
    "ALPHABETS",
    "LETTER_DEGREE",
    "ZERO_DEGREE",
    "AlphabetError",
    "CutoffMismatchError",
    "NotInCdSpanError",
    "NcPoly",
    "TruncSeries",
    "word_degree",
    "cd_words",
    "reverse",
    "delta",
    "geom_inverse",
    "delta_geom_identity_check",
    "cd_to_ab",
    "ab_to_cd",
    "substitute_line",
    "d_power_series",
]

LETTER_DEGREE = {"a": 1, "b": 1, "c": 1, "d": 2, "t": 1}
ALPHABETS = {"ab": frozenset("abt"), "cd": frozenset("cdt")}

# Degree of the zero polynomial.
ZERO_DEGREE = -math.inf


class AlphabetError(ValueError):
    """Raised when letters or operands from different alphabets are mixed."""


class CutoffMismatchError(ValueError):
    """Raised when two truncated series with different cutoffs are combined."""


class NotInCdSpanError(ValueError):
    """The ab-polynomial cannot be written in c = a+b and d = ab+ba."""

    def __init__(self, poly, degree=None):
        self.poly = poly
        self.degree = degree
        msg = f"not in the cd-span: {poly}"
        if degree is not None:
            msg += f" (degree {degree})"
        super().__init__(msg)


def word_degree(word: str) -> int:
    return len(word) + word.count("d")


def _infer_alphabet(words: Iterable[str]) -> str | None:
    letters = set("".join(words))
    if letters & {"a", "b"}:
        if letters & {"c", "d"}:
            raise AlphabetError(f"mixed ab and cd letters: {sorted(letters)}")
        return "ab"
    if letters & {"c", "d"}:
        return "cd"
    return None


Scalar = Union[int, "NcPoly"]


class NcPoly:
    """Finitely supported integer combination of words over one alphabet.

    Values are immutable; all operators return new objects.
    """

    __slots__ = ("_terms", "_alphabet")

    def __init__(self, terms: Mapping[str, int] | None = None, alphabet: str | None = None):
        terms = dict(terms or {})
        inferred = _infer_alphabet(terms)
        if alphabet is None:
            alphabet = inferred or "ab"
        if alphabet not in ALPHABETS:
            raise AlphabetError(f"unknown alphabet {alphabet!r}")
        allowed = ALPHABETS[alphabet]
        clean = {}
        for word, coeff in terms.items():
            if not set(word) <= allowed:
                raise AlphabetError(f"word {word!r} not over alphabet {alphabet!r}")
            if coeff:
                clean[word] = int(coeff)
        self._terms = clean
        self._alphabet = alphabet

    # construction helpers

    @classmethod
    def one(cls, alphabet: str = "ab") -> NcPoly:
        return cls({"": 1}, alphabet)

    @classmethod
    def zero(cls, alphabet: str = "ab") -> NcPoly:
        return cls({}, alphabet)

    @classmethod
    def word(cls, word: str, coeff: int = 1, alphabet: str | None = None) -> NcPoly:
        return cls({word: coeff}, alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: str | None = None) -> NcPoly:
        """Parse the canonical text form, e.g. ``"cc + 2*d - t"``."""
        src = text.replace(" ", "")
        if src in ("", "0"):
            return cls({}, alphabet)
        terms: dict[str, int] = defaultdict(int)
        for sign, body in re.findall(r"([+-]?)([^+-]+)", src):
            coeff, star, word = body.partition("*")
            if not star:
                if body.isdigit():
                    coeff, word = body, ""
                else:
                    coeff, word = "1", body
            if not coeff.isdigit() or not re.fullmatch(r"[abcdt]*", word):
                raise ValueError(f"cannot parse term {body!r} in {text!r}")
            terms[word] += (-1 if sign == "-" else 1) * int(coeff)
        return cls(terms, alphabet)

    @classmethod
    def from_dict(cls, data: Mapping[str, int], alphabet: str | None = None) -> NcPoly:
        return cls(data, alphabet)

    # basic accessors

    @property
    def terms(self) -> Mapping[str, int]:
        return MappingProxyType(self._terms)

    @property
    def alphabet(self) -> str:
        return self._alphabet

    @property
    def degree(self) -> float:
        """Largest word degree; :data:`ZERO_DEGREE` for the zero polynomial."""
        if not self._terms:
            return ZERO_DEGREE
        return max(word_degree(w) for w in self._terms)

    def coefficient(self, word: str) -> int:
        return self._terms.get(word, 0)

    def homogeneous_part(self, k: int) -> NcPoly:
        return NcPoly({w: c for w, c in self._terms.items() if word_degree(w) == k}, self._alphabet)

    def is_homogeneous(self) -> bool:
        return len({word_degree(w) for w in self._terms}) <= 1

    def contains_letter(self, letter: str) -> bool:
        return any(letter in w for w in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> list[tuple[str, int]]:
        return sorted(self._terms.items(), key=lambda wc: (word_degree(wc[0]), wc[0]))

    def to_dict(self) -> dict[str, int]:
        return dict(self.sorted_terms())

    def _like(self, terms: Mapping[str, int]) -> NcPoly:
        return NcPoly(terms, self._alphabet)

    # arithmetic

    def _retag(self, alphabet: str) -> NcPoly:
        cutoff = getattr(self, "cutoff", None)
        if cutoff is None:
            return NcPoly(self._terms, alphabet)
        return TruncSeries(self._terms, cutoff, alphabet)

    def _unify(self, other):
        """Both operands over one alphabet; letter-free constants adapt."""
        if isinstance(other, numbers.Integral):
            return self, NcPoly({"": int(other)}, self._alphabet)
        if not isinstance(other, NcPoly):
            return self, NotImplemented
        a, b = self, other
        if a._alphabet != b._alphabet:
            if set(b._terms) <= {""}:
                b = b._retag(a._alphabet)
            elif set(a._terms) <= {""}:
                a = a._retag(b._alphabet)
            else:
                raise AlphabetError(f"alphabet mismatch: {a._alphabet!r} vs {b._alphabet!r}")
        return a, b

    def _result_cutoff(self, other: NcPoly) -> int | None:
        a = getattr(self, "cutoff", None)
        b = getattr(other, "cutoff", None)
        if a is not None and b is not None and a != b:
            raise CutoffMismatchError(f"cutoff mismatch: {a} vs {b}")
        return a if a is not None else b

    def _wrap(self, terms: Mapping[str, int], cutoff: int | None) -> NcPoly:
        if cutoff is None:
            return NcPoly(terms, self._alphabet)
        return TruncSeries(terms, cutoff, self._alphabet)

    def __add__(self, other):
        a, b = self._unify(other)
        if b is NotImplemented:
            return b
        cutoff = a._result_cutoff(b)
        out = dict(a._terms)
        for w, c in b._terms.items():
            out[w] = out.get(w, 0) + c
        return a._wrap(out, cutoff)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({w: -c for w, c in self._terms.items()}, getattr(self, "cutoff", None))

    def __sub__(self, other):
        a, b = self._unify(other)
        if b is NotImplemented:
            return b
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._unify(other)
        if b is NotImplemented:
            return b
        return b + (-a)

    def __mul__(self, other):
        a, b = self._unify(other)
        if b is NotImplemented:
            return b
        cutoff = a._result_cutoff(b)
        return a._wrap(_multiply(a._terms, b._terms, cutoff), cutoff)

    def __rmul__(self, other):
        a, b = self._unify(other)
        if b is NotImplemented:
            return b
        return b * a

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self._wrap({"": 1}, getattr(self, "cutoff", None))
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self._terms == ({"": other} if other else {})
        if not isinstance(other, NcPoly):
            return NotImplemented
        if self._terms != other._terms:
            return False
        # zero and constants carry no letters, so their alphabet tag is moot
        return self._alphabet == other._alphabet or _infer_alphabet(self._terms) is None

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            mag = abs(c)
            if w == "":
                body = str(mag)
            elif mag == 1:
                body = w
            else:
                body = f"{mag}*{w}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"NcPoly({str(self)!r}, alphabet={self._alphabet!r})"

    def truncate(self, cutoff: int) -> TruncSeries:
        return TruncSeries(self._terms, cutoff, self._alphabet)


class TruncSeries(NcPoly):
    """An NcPoly known only up to (and including) degree ``cutoff``.

    Words above the cutoff are dropped on construction and after every
    operation.  Combining two series with different cutoffs is an error; an
    exact NcPoly operand is simply truncated to the series' cutoff.
    """

    __slots__ = ("cutoff",)

    def __init__(self, terms: Mapping[str, int] | None = None, cutoff: int = 0,
                 alphabet: str | None = None):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        terms = {w: c for w, c in (terms or {}).items() if word_degree(w) <= cutoff}
        super().__init__(terms, alphabet)
        self.cutoff = cutoff

    def _like(self, terms):
        return TruncSeries(terms, self.cutoff, self._alphabet)

    def poly(self) -> NcPoly:
        return NcPoly(self._terms, self._alphabet)

    def __eq__(self, other):
        if isinstance(other, TruncSeries) and other.cutoff != self.cutoff:
            return False
        return super().__eq__(other)

    __hash__ = NcPoly.__hash__

    def __repr__(self) -> str:
        return f"TruncSeries({str(self)!r}, cutoff={self.cutoff}, alphabet={self._alphabet!r})"


def _multiply(lhs: Mapping[str, int], rhs: Mapping[str, int], cutoff: int | None) -> dict[str, int]:
    out: dict[str, int] = defaultdict(int)
    if cutoff is None:
        for u, cu in lhs.items():
            for v, cv in rhs.items():
                out[u + v] += cu * cv
        return out
    by_degree: dict[int, list[tuple[str, int]]] = defaultdict(list)
    for v, cv in rhs.items():
        by_degree[word_degree(v)].append((v, cv))
    degrees = sorted(by_degree)
    for u, cu in lhs.items():
        room = cutoff - word_degree(u)
        for k in degrees:
            if k > room:
                break
            for v, cv in by_degree[k]:
                out[u + v] += cu * cv
    return out


def _same_kind(p: NcPoly, terms: Mapping[str, int], alphabet: str | None = None) -> NcPoly:
    alphabet = alphabet or p.alphabet
    if isinstance(p, TruncSeries):
        return TruncSeries(terms, p.cutoff, alphabet)
    return NcPoly(terms, alphabet)


@lru_cache(maxsize=None)
def cd_words(k: int) -> tuple[str, ...]:
    """All cd-words of degree ``k`` in lexicographic order (a Fibonacci number of them)."""
    if k < 0:
        return ()
    if k == 0:
        return ("",)
    words = ["c" + w for w in cd_words(k - 1)] + ["d" + w for w in cd_words(k - 2)]
    return tuple(sorted(words))


def reverse(p: NcPoly) -> NcPoly:
    """Reverse every word; an anti-automorphism of the free algebra."""
    return _same_kind(p, {w[::-1]: c for w, c in p.terms.items()})


_DELTA_IMAGE = {
    "a": {"t": 1},
    "b": {"t": 1},
    "c": {"t": 2},
    "d": {"ct": 1, "tc": 1},
}


def delta(p: NcPoly) -> NcPoly:
    """The derivation with a, b -> t (so c -> 2t and d -> ct + tc).

    The input must be free of ``t``; every output word carries exactly one ``t``.
    """
    if p.contains_letter("t"):
        raise ValueError("delta is only defined on t-free input")
    out: dict[str, int] = defaultdict(int)
    for w, coeff in p.terms.items():
        for pos, letter in enumerate(w):
            head, tail = w[:pos], w[pos + 1:]
            for image, ci in _DELTA_IMAGE[letter].items():
                out[head + image + tail] += coeff * ci
    return _same_kind(p, out)


def geom_inverse(u: TruncSeries) -> TruncSeries:
    """``1/(1-u) = 1 + u + u^2 + ...`` truncated at ``u.cutoff``."""
    if not isinstance(u, TruncSeries):
        raise TypeError("geom_inverse needs a TruncSeries (the cutoff fixes the precision)")
    if u.coefficient(""):
        raise ValueError("geom_inverse requires zero constant term")
    result = TruncSeries({"": 1}, u.cutoff, u.alphabet)
    # each pass fixes at least one more degree
    for _ in range(u.cutoff):
        result = 1 + u * result
    return result


def delta_geom_identity_check(u: TruncSeries) -> bool:
    """Check Delta(1/(1-u)) == 1/(1-u) * Delta(u) * 1/(1-u) up to the cutoff."""
    g = geom_inverse(u)
    return delta(g) == g * delta(u) * g


@lru_cache(maxsize=4096)
def _cd_word_to_ab(word: str) -> tuple[tuple[str, int], ...]:
    terms = {"": 1}
    for letter in word:
        if letter == "c":
            images = ("a", "b")
        elif letter == "d":
            images = ("ab", "ba")
        else:
            images = (letter,)
        new: dict[str, int] = defaultdict(int)
        for w, c in terms.items():
            for img in images:
                new[w + img] += c
        terms = new
    return tuple(terms.items())


def cd_to_ab(p: NcPoly) -> NcPoly:
    """Expand c -> a+b, d -> ab+ba; ``t`` passes through unchanged."""
    if p.alphabet != "cd":
        raise AlphabetError("cd_to_ab expects a cd-alphabet input")
    out: dict[str, int] = defaultdict(int)
    for w, coeff in p.terms.items():
        for v, cv in _cd_word_to_ab(w):
            out[v] += coeff * cv
    return _same_kind(p, out, "ab")


def _leading_ab_word(cd_word: str) -> str:
    # c -> a, d -> ba is a prefix code, so distinct cd-words get distinct rows
    return cd_word.replace("d", "ba").replace("c", "a")


@lru_cache(maxsize=None)
def _cd_basis_system(k: int):
    words = cd_words(k)
    rows_index = [_leading_ab_word(w) for w in words]
    expansions = [dict(_cd_word_to_ab(w)) for w in words]
    rows = [[exp.get(r, 0) for exp in expansions] for r in rows_index]
    return words, rows_index, rows


def _homogeneous_ab_to_cd(p: NcPoly, k: int) -> dict[str, int]:
    words, rows_index, rows = _cd_basis_system(k)
    rhs = [p.coefficient(r) for r in rows_index]
    try:
        sol = solve_square(rows, rhs)
    except SingularSystemError:  # pragma: no cover - the system is unitriangular
        raise NotInCdSpanError(p, k)
    if any(x.denominator != 1 for x in sol):
        raise NotInCdSpanError(p, k)
    q = {w: int(x) for w, x in zip(words, sol) if x}
    residual = dict(p.terms)
    for w, coeff in q.items():
        for v, cv in _cd_word_to_ab(w):
            residual[v] = residual.get(v, 0) - coeff * cv
    if any(residual.values()):
        raise NotInCdSpanError(p, k)
    return q


def ab_to_cd(p: NcPoly) -> NcPoly:
    """Rewrite a t-free ab-polynomial in the variables c and d.

    Each homogeneous component is matched against the expansions of all
    cd-words of that degree by solving an exact linear system; a nonzero
    residual raises :class:`NotInCdSpanError`.
    """
    if p.alphabet != "ab":
        raise AlphabetError("ab_to_cd expects an ab-alphabet input")
    if p.contains_letter("t"):
        raise ValueError("ab_to_cd is only defined on t-free input")
    out: dict[str, int] = {}
    for k in sorted({word_degree(w) for w in p.terms}):
        part = p.homogeneous_part(k)
        try:
            out.update(_homogeneous_ab_to_cd(part, k))
        except NotInCdSpanError:
            raise NotInCdSpanError(part, k) from None
    return _same_kind(p, out, "cd")


def substitute_line(p: NcPoly, mode: str | None = None) -> list[int]:
    """Coefficient list in ``t`` after a=t, b=0 (mode "ab") or c=t, d=0 (mode "cd").

    Entry ``k`` is the coefficient of ``t**k``.  For a series the list has
    ``cutoff + 1`` entries, otherwise ``degree + 1``.
    """
    mode = mode or p.alphabet
    if mode != p.alphabet:
        raise AlphabetError(f"mode {mode!r} does not match alphabet {p.alphabet!r}")
    if p.contains_letter("t"):
        raise ValueError("substitute_line is only defined on t-free input")
    keep = "a" if mode == "ab" else "c"
    if isinstance(p, TruncSeries):
        length = p.cutoff + 1
    else:
        length = 0 if p.is_zero() else int(p.degree) + 1
    out = [0] * length
    for w, coeff in p.terms.items():
        if w.count(keep) == len(w):
            out[len(w)] += coeff
    return out


def d_power_series(r: int, cutoff: int) -> TruncSeries:
    """Sum over cd-words w of degree <= cutoff of r**(number of d's in w) * w.

    This is the literal coefficient formula, built without any series
    arithmetic; it is used as an independent check of ``geom_inverse(c + r*d)``.
    """
    terms = {w: r ** w.count("d") for k in range(cutoff + 1) for w in cd_words(k)}
    return TruncSeries(terms, cutoff, "cd")
