"""BS(1,2) as exact affine maps t -> 2^k t + q over the dyadic rationals.

Words act right to left, so the word ``g h`` is the map ``g o h``.  With
``a: t -> t + 1`` and ``b: t -> t/2`` this gives ``b^-1 a b = a^2``, the
squaring relation with the convention g^h = h^-1 g h.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..reports import CheckReport
from .words import Word, sq_relator


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class AffineDyadicMap:
    """t -> 2**scale * t + offset."""

    scale: int
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not _is_dyadic(self.offset):
            raise ValueError(f"offset {self.offset} is not dyadic")

    @staticmethod
    def identity() -> "AffineDyadicMap":
        return AffineDyadicMap(0, Fraction(0))

    @property
    def is_identity(self) -> bool:
        return self.scale == 0 and self.offset == 0

    def __call__(self, t) -> Fraction:
        return Fraction(2) ** self.scale * Fraction(t) + self.offset

    def __matmul__(self, other: "AffineDyadicMap") -> "AffineDyadicMap":
        """Composition: (self @ other)(t) = self(other(t))."""
        return AffineDyadicMap(self.scale + other.scale, Fraction(2) ** self.scale * other.offset + self.offset)

    def inverse(self) -> "AffineDyadicMap":
        return AffineDyadicMap(-self.scale, -self.offset / Fraction(2) ** self.scale)

    def __pow__(self, k: int) -> "AffineDyadicMap":
        base = self if k >= 0 else self.inverse()
        out = AffineDyadicMap.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def to_word(self, a: str = "a", b: str = "b") -> Word:
        """A word in the generators for this map: (b^s a^p b^-s) b^-scale."""
        q = self.offset
        s = max(q.denominator.bit_length() - 1, 0)
        p = q.numerator
        return Word.from_powers([(b, s), (a, p), (b, -s), (b, -self.scale)])

    def __repr__(self):
        return f"t->2^{self.scale}t+{self.offset}"


A_MAP = AffineDyadicMap(0, Fraction(1))
B_MAP = AffineDyadicMap(-1, Fraction(0))
BS12 = {"a": A_MAP, "b": B_MAP}


def evaluate(word: Word, model: dict = BS12) -> AffineDyadicMap:
    out = AffineDyadicMap.identity()
    for g, e in word:
        m = model[g]
        out = out @ (m if e == 1 else m.inverse())
    return out


def bs12_chain_check() -> CheckReport:
    """x0 = t+1, x1 = t/2 form a length-2 chain for x^y = x^2 with x0 != x1."""
    x0, x1 = A_MAP, B_MAP
    model = {"x0": x0, "x1": x1}
    lhs = x1.inverse() @ x0 @ x1
    rhs = x0 @ x0
    relator = evaluate(sq_relator("x0", "x1"), model)
    reverse = evaluate(sq_relator("x1", "x0"), model)
    ok = {
        "relation": lhs == rhs,
        "relator_is_identity": relator.is_identity,
        "x0_nontrivial": not x0.is_identity,
        "x1_nontrivial": not x1.is_identity,
        "distinct": x0 != x1,
    }
    values = {
        "x1^-1 x0 x1 (0)": lhs(0), "x0^2 (0)": rhs(0),
        "conjugate": repr(lhs), "square": repr(rhs),
        "reverse_relation_holds": reverse.is_identity,
        "reverse_relator": repr(reverse),
        "reading": "x^y = x^2 with g^h = h^-1 g h",
    }
    values.update(ok)
    passed = all(ok.values()) and not reverse.is_identity
    return CheckReport("groups.bs12_chain", "pass" if passed else "fail", {"x0": repr(x0), "x1": repr(x1)},
                       values, witness=None if passed else {k: v for k, v in ok.items() if not v} or {"reverse": True})
