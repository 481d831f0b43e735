"""The threshold functionals f_gamma, the seminorm on B0, and polyhedral norms.

Every norm here is a max of absolute values of finitely many linear
functionals on the relevant finite-dimensional subspace, so values are
exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .vectors import BasisIndex, DomainError, FSVector, UnsupportedBasisError, as_rational


def _check_ab(v: FSVector):
    for k in v.support:
        if not isinstance(k, BasisIndex) or k.kind == "E":
            raise UnsupportedBasisError(f"f_gamma is only defined on a_alpha, b_alpha; got {k!r}")


def fgamma_basis(gamma: int, key: BasisIndex) -> int:
    """f_gamma on one basis symbol: a_alpha -> [alpha < gamma], b_alpha -> [alpha >= gamma]."""
    if key.kind == "A":
        return 1 if key.index < gamma else 0
    if key.kind == "B":
        return 0 if key.index < gamma else 1
    raise UnsupportedBasisError(f"f_gamma is undefined on {key!r}")


def fgamma_eval(gamma: int, v: FSVector) -> Fraction:
    _check_ab(v)
    return sum((c * fgamma_basis(gamma, k) for k, c in v.items()), Fraction(0))


def gamma_breakpoints(indices: Iterable[int]) -> list[int]:
    """Thresholds at which f_gamma can change on vectors over these indices.

    f_gamma(v) only depends on which support indices lie below gamma, so
    gamma in {0} + {alpha + 1} realises every value attained by gamma < omega.
    """
    return sorted({0} | {i + 1 for i in indices})


def seminorm_b0(v: FSVector) -> Fraction:
    """sup_gamma |f_gamma(v)|, computed with one sweep over the sorted support."""
    _check_ab(v)
    per_index: dict[int, list] = {}
    for k, c in v.items():
        slot = per_index.setdefault(k.index, [0, 0])
        slot[0 if k.kind == "A" else 1] += c
    # gamma = 0: every a vanishes, every b counts.
    value = sum((s[1] for s in per_index.values()), Fraction(0))
    best = abs(value)
    for idx in sorted(per_index):
        sa, sb = per_index[idx]
        # moving gamma past idx turns a_idx on and b_idx off
        value += sa - sb
        if abs(value) > best:
            best = abs(value)
    return Fraction(best)


def seminorm_b0_sweep(v: FSVector, gammas: Iterable[int]) -> Fraction:
    """Literal max over the given gammas, kept as an independent reference."""
    return max((abs(fgamma_eval(g, v)) for g in gammas), default=Fraction(0))


class B0Seminorm:
    """The seminorm of B0 as an ambient norm object."""

    name = "B0"

    def value(self, v: FSVector) -> Fraction:
        return seminorm_b0(v)

    def functionals(self, keys: Iterable[Hashable]) -> list[dict]:
        keys = list(keys)
        for k in keys:
            if not isinstance(k, BasisIndex) or k.kind == "E":
                raise UnsupportedBasisError(f"B0 has no basis symbol {k!r}")
        out = []
        for g in gamma_breakpoints(k.index for k in keys):
            f = {k: Fraction(fgamma_basis(g, k)) for k in keys}
            out.append({k: c for k, c in f.items() if c})
        return _dedupe(out)

    def __repr__(self):
        return "B0Seminorm()"


class MaxAbsNorm:
    """Max-abs-coordinate norm on any space with a fixed basis."""

    name = "maxabs"

    def value(self, v: FSVector) -> Fraction:
        return max((abs(c) for _, c in v.items()), default=Fraction(0))

    def functionals(self, keys: Iterable[Hashable]) -> list[dict]:
        return [{k: Fraction(1)} for k in sorted(set(keys))]

    def __repr__(self):
        return "MaxAbsNorm()"


def _dedupe(functionals: Iterable[Mapping]) -> list[dict]:
    """Drop zero functionals and duplicates up to sign, keeping first occurrence."""
    seen = set()
    out = []
    for f in functionals:
        f = {k: as_rational(c) for k, c in f.items() if c}
        if not f:
            continue
        key = frozenset(f.items())
        neg = frozenset((k, -c) for k, c in f.items())
        if key in seen or neg in seen:
            continue
        seen.add(key)
        out.append(f)
    return out


class PolyhedralNorm:
    """value(v) = max_i |f_i(v)| on the span of ``coords``.

    With functionals that do not span the dual this is only a seminorm,
    which is fine for everything downstream.
    """

    def __init__(self, coords: Sequence[Hashable], functionals: Iterable[Mapping]):
        self.coords = tuple(sorted(set(coords)))
        cset = set(self.coords)
        fs = _dedupe(functionals)
        for f in fs:
            extra = set(f) - cset
            if extra:
                raise DomainError(f"functional mentions coordinates outside the subspace: {sorted(extra)!r}")
        self.functionals = tuple(fs)
        self._cset = cset

    def contains(self, v: FSVector) -> bool:
        return all(k in self._cset for k in v.support)

    def value(self, v: FSVector) -> Fraction:
        if not self.contains(v):
            raise DomainError(f"{v!r} is not in span{self.coords!r}")
        return max((abs(v.dot(f)) for f in self.functionals), default=Fraction(0))

    __call__ = value

    @classmethod
    def max_abs(cls, coords: Sequence[Hashable]) -> "PolyhedralNorm":
        return cls(coords, [{k: 1} for k in coords])

    @classmethod
    def pullback(cls, ambient, embedding: Mapping[Hashable, FSVector]) -> "PolyhedralNorm":
        """The norm t -> ambient(h(t)) for the linear map h given on coordinates."""
        ambient_keys = set()
        for image in embedding.values():
            ambient_keys.update(image.support)
        fs = []
        for f in ambient.functionals(ambient_keys):
            fs.append({c: image.dot(f) for c, image in embedding.items()})
        return cls(list(embedding), fs)

    def union(self, other: "PolyhedralNorm") -> "PolyhedralNorm":
        """max(self, other), as a polyhedral norm on the same coordinates."""
        if self.coords != other.coords:
            raise DomainError("max of norms on different subspaces")
        return PolyhedralNorm(self.coords, list(self.functionals) + list(other.functionals))

    def __repr__(self):
        return f"PolyhedralNorm({len(self.coords)} coords, {len(self.functionals)} functionals)"


def polyhedral_norm_eval(norm: PolyhedralNorm, v: FSVector) -> Fraction:
    return norm.value(v)
