"""Finite-support vectors with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Callable, Hashable, Iterable, Iterator, Mapping

KINDS = ("A", "B", "E")


class UnsupportedBasisError(ValueError):
    """A vector uses a basis symbol the evaluating functional does not know."""


class DomainError(ValueError):
    """A vector lies outside the subspace an operation is defined on."""


def as_rational(x) -> Fraction:
    """Convert ints, Fractions, mpq and 'p/q' strings to Fraction.

    Floats are refused: nothing in this package may round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Rational)):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return Fraction(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"refusing inexact scalar {x!r}")


def rational_str(q) -> str:
    """Lossless 'p/q' form; integers keep an explicit '/1'."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


@total_ordering
@dataclass(frozen=True)
class BasisIndex:
    """Basis symbol ``a_index``, ``b_index`` or generic ``e_index``.

    Symbols sort by ``(index, kind)`` so that a_0 < b_0 < a_1 < ...
    """

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"basis index must be a natural number, got {self.index!r}")

    def sort_key(self):
        return (self.index, self.kind)

    def __lt__(self, other):
        if not isinstance(other, BasisIndex):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"{self.kind.lower()}{self.index}"


class FSVector:
    """Immutable finite-support vector ``{key: Fraction}`` with no zero entries.

    Keys are usually :class:`BasisIndex`, but any hashable, mutually
    comparable keys work (the amalgam spaces use their own coordinates).
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[Hashable, object] | Iterable[tuple[Hashable, object]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict = {}
        for key, coeff in items:
            q = as_rational(coeff)
            if q:
                acc[key] = acc.get(key, 0) + q
        self._entries = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def basis(cls, key, coeff=1) -> "FSVector":
        return cls({key: coeff})

    @classmethod
    def _raw(cls, entries: dict) -> "FSVector":
        v = cls.__new__(cls)
        v._entries = entries
        v._hash = None
        return v

    # -- container protocol -------------------------------------------------
    def __getitem__(self, key) -> Fraction:
        return self._entries.get(key, Fraction(0))

    coeff = __getitem__

    def __iter__(self) -> Iterator:
        return iter(sorted(self._entries))

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def items(self):
        return sorted(self._entries.items())

    @property
    def support(self) -> tuple:
        return tuple(sorted(self._entries))

    # -- linear structure ---------------------------------------------------
    def __add__(self, other: "FSVector") -> "FSVector":
        if not isinstance(other, FSVector):
            return NotImplemented
        out = dict(self._entries)
        for k, v in other._entries.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FSVector._raw(out)

    def __neg__(self) -> "FSVector":
        return FSVector._raw({k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "FSVector") -> "FSVector":
        if not isinstance(other, FSVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "FSVector":
        q = as_rational(scalar)
        if not q:
            return FSVector()
        return FSVector._raw({k: q * v for k, v in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FSVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def map_keys(self, f: Callable) -> "FSVector":
        """Push the vector forward along a map on basis keys."""
        return FSVector((f(k), v) for k, v in self._entries.items())

    def dot(self, functional: Mapping) -> Fraction:
        """Apply a functional given by its coefficients on basis keys."""
        return sum((v * functional.get(k, 0) for k, v in self._entries.items()), Fraction(0))

    def serialize(self) -> list:
        """Sorted ``[kind, index, numerator, denominator]`` rows."""
        rows = []
        for k, v in self.items():
            if isinstance(k, BasisIndex):
                rows.append([k.kind, k.index, v.numerator, v.denominator])
            else:
                rows.append([repr(k), None, v.numerator, v.denominator])
        return rows

    @classmethod
    def deserialize(cls, rows) -> "FSVector":
        return cls((BasisIndex(kind, idx), Fraction(p, q)) for kind, idx, p, q in rows)

    def __repr__(self):
        if not self._entries:
            return "FSVector(0)"
        terms = []
        for k, v in self.items():
            c = "" if v == 1 else "-" if v == -1 else f"{v}*"
            terms.append(f"{c}{k!r}")
        return "FSVector(" + " + ".join(terms).replace("+ -", "- ") + ")"


def a(alpha: int, coeff=1) -> FSVector:
    return FSVector.basis(BasisIndex("A", alpha), coeff)


def b(alpha: int, coeff=1) -> FSVector:
    return FSVector.basis(BasisIndex("B", alpha), coeff)


def e(i: int, coeff=1) -> FSVector:
    return FSVector.basis(BasisIndex("E", i), coeff)


ZERO = FSVector()


def rank(vectors: Iterable[FSVector]) -> int:
    """Exact rank by Gaussian elimination on sparse rows."""
    pivots: dict = {}  # pivot key -> reduced row with that leading key
    r = 0
    for v in vectors:
        row = dict(v._entries)
        while row:
            lead = min(row)
            if lead not in pivots:
                pivots[lead] = row
                r += 1
                break
            prow = pivots[lead]
            f = row[lead] / prow[lead]
            for k, c in prow.items():
                s = row.get(k, 0) - f * c
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return r
