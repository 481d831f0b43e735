"""Free amalgams V_m of an indiscernible sequence and their infimal-convolution norms.

A :class:`SequenceProvider` supplies tuples ``abar_i`` (i a natural number) in
some concretely normed space.  ``V_m`` is the formal space with basis
``b*_l`` (l < n*) and ``b_{i,l}`` (n* <= l < n, i <= m).  Block
``B'_k = span(bbar_k, bbar_{k+1})`` carries three polyhedral norms:

* tag 1  -- pulled back along h_1:  bbar_k -> abar_{W+k}
* tag -1 -- pulled back along h_-1: bbar_k -> abar_{W-k}
* tag 0  -- the pointwise max of the two

where ``W = m`` is the centre of a finite window standing in for Z.  The
norm of t in V_m is the infimum of sum ||t_k|| over t = sum t_k, t_k in B'_k;
with polyhedral blocks that is an exact LP whose optimum is attained.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, NamedTuple, Optional, Sequence

from .qlinalg import (
    B0Seminorm,
    BasisIndex,
    DomainError,
    FSVector,
    LPProblem,
    LPStatus,
    MaxAbsNorm,
    PolyhedralNorm,
    as_rational,
    rank,
    solve_lp,
)
from .reports import CheckReport, FalsificationError, timed

TAGS = (1, -1, 0)


class ProviderError(ValueError):
    """The sequence violates the constancy, independence or indiscernibility assumptions."""


class ShapeError(ValueError):
    """A decomposition is not of the form the refinement expects."""


class VCoord(NamedTuple):
    """Formal basis vector of V_m: ``i == -1`` marks the constant part b*_ell."""

    i: int
    ell: int

    def __repr__(self):
        return f"b*{self.ell}" if self.i < 0 else f"b{self.i}.{self.ell}"


# ---------------------------------------------------------------------------
# providers


@dataclass(frozen=True, eq=False)
class SequenceProvider:
    name: str
    n: int
    n_star: int
    tuple_at: Callable[[int], tuple]
    norm: object
    description: str = ""

    def __post_init__(self):
        if not 0 <= self.n_star < self.n:
            raise ProviderError(f"need 0 <= n* < n, got n*={self.n_star}, n={self.n}")

    def combo(self, index: int, coeffs: Sequence) -> FSVector:
        """sum_l coeffs[l] * abar_{index, l} in the ambient space."""
        vecs = self.tuple_at(index)
        out = FSVector()
        for c, v in zip(coeffs, vecs):
            if c:
                out = out + v * c
        return out

    def ambient_norm(self, v: FSVector) -> Fraction:
        return self.norm.value(v)


def canonical_provider() -> SequenceProvider:
    """Pairs (a_alpha, b_alpha) in B0 with its threshold seminorm."""
    from .qlinalg import a, b

    return SequenceProvider("canonical", 2, 0, lambda i: (a(i), b(i)), B0Seminorm(),
                            "pairs (a_i, b_i) in B0")


def simple_provider() -> SequenceProvider:
    """Unit vectors e_i under the max-abs norm; fully exchangeable."""
    from .qlinalg import e

    return SequenceProvider("simple", 1, 0, lambda i: (e(i),), MaxAbsNorm(), "e_i with the max-abs norm")


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([abeABE])\[\s*(i\s*(?:\+\s*\d+)?|\d+)\s*\]\s*")


def _parse_rule(rule: str) -> list[tuple[Fraction, str, Optional[int], int]]:
    """'2*a[i] - b[i+1] + e[0]' -> [(coeff, kind, offset-or-None, const)]."""
    terms = []
    pos = 0
    rule = rule.strip()
    while pos < len(rule):
        m = _TERM.match(rule, pos)
        if not m or m.end() == pos:
            raise ProviderError(f"cannot parse coordinate rule {rule!r} at {rule[pos:]!r}")
        sign, coeff, kind, idx = m.groups()
        if terms and not sign:
            raise ProviderError(f"missing operator in {rule!r}")
        q = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            q = -q
        idx = idx.replace(" ", "")
        if idx.startswith("i"):
            off = int(idx[2:]) if "+" in idx else 0
            terms.append((q, kind.upper(), off, 0))
        else:
            terms.append((q, kind.upper(), None, int(idx)))
        pos = m.end()
    if not terms:
        raise ProviderError("empty coordinate rule")
    return terms


def provider_from_dict(data: dict) -> SequenceProvider:
    """Build a provider from a declarative description.

    Keys: ``name``, ``ambient`` ("B0" or "maxabs"), ``n_star`` and
    ``coordinates``, a list of linear rules such as ``"a[i]"``,
    ``"b[i] + 2*a[i+1]"`` or ``"e[0]"`` (a constant coordinate).
    """
    try:
        coords = [_parse_rule(r) for r in data["coordinates"]]
        ambient = {"B0": B0Seminorm, "maxabs": MaxAbsNorm}[data.get("ambient", "B0")]()
    except KeyError as exc:
        raise ProviderError(f"bad provider description, missing or unknown {exc}") from None
    n = len(coords)
    if "n" in data and int(data["n"]) != n:
        raise ProviderError(f"n={data['n']} but {n} coordinate rules given")
    n_star = int(data.get("n_star", 0))

    def tuple_at(i, coords=coords):
        out = []
        for terms in coords:
            v = FSVector()
            for q, kind, off, const in terms:
                v = v + FSVector.basis(BasisIndex(kind, i + off if off is not None else const), q)
            out.append(v)
        return tuple(out)

    return SequenceProvider(data.get("name", "custom"), n, n_star, tuple_at, ambient,
                            data.get("description", ""))


def load_provider(path) -> SequenceProvider:
    return provider_from_dict(json.loads(Path(path).read_text()))


PROVIDERS = {"canonical": canonical_provider, "simple": simple_provider}


def get_provider(name_or_path: str) -> SequenceProvider:
    if name_or_path in PROVIDERS:
        return PROVIDERS[name_or_path]()
    if Path(name_or_path).exists():
        return load_provider(name_or_path)
    raise KeyError(f"unknown provider {name_or_path!r}")


def check_provider(provider: SequenceProvider, window: int, trials: int = 40, seed: int = 0) -> dict:
    """Exact checks of the sequence assumptions on indices 0..window-1.

    Raises ProviderError on the first violation; returns a small summary.
    """
    n, ns = provider.n, provider.n_star
    tuples = [provider.tuple_at(i) for i in range(window)]
    for i, tup in enumerate(tuples):
        if len(tup) != n:
            raise ProviderError(f"tuple {i} has length {len(tup)}, expected {n}")
        if tup[:ns] != tuples[0][:ns]:
            raise ProviderError(f"constant coordinates differ between tuple 0 and tuple {i}")
    vecs = list(tuples[0][:ns]) + [v for tup in tuples for v in tup[ns:]]
    if rank(vecs) != len(vecs):
        raise ProviderError("coordinates are linearly dependent on the working window")
    rng = random.Random(seed)
    checked = 0
    for _ in range(trials):
        k = rng.randint(1, min(3, window))
        if window < k + 1:
            break
        idx1 = sorted(rng.sample(range(window), k))
        idx2 = sorted(rng.sample(range(window), k))
        coeffs = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(k)]
        v1 = sum((provider.combo(i, c) for i, c in zip(idx1, coeffs)), FSVector())
        v2 = sum((provider.combo(i, c) for i, c in zip(idx2, coeffs)), FSVector())
        n1, n2 = provider.ambient_norm(v1), provider.ambient_norm(v2)
        if n1 != n2:
            raise ProviderError(
                f"not order-indiscernible: indices {idx1} vs {idx2} with coefficients {coeffs} give {n1} != {n2}")
        checked += 1
    return {"window": window, "independent_vectors": len(vecs), "indiscernibility_trials": checked}


# ---------------------------------------------------------------------------
# the amalgam spaces


@dataclass
class Refinement:
    """t_p = -r'_p + r'_{p+1} + s_p with s_p in V^-."""

    r_prime: tuple  # r'_0 .. r'_k
    s: tuple  # s_0 .. s_{k-1}


@dataclass
class Decomposition:
    tag: int
    blocks: tuple  # t_k in B'_k, k < m
    block_values: tuple
    refined: Optional[Refinement] = None

    @property
    def total(self) -> FSVector:
        return sum(self.blocks, FSVector())

    @property
    def cost(self) -> Fraction:
        return sum(self.block_values, Fraction(0))


class AmalgamSpace:
    """V_m together with the block norms for the three tags."""

    def __init__(self, provider: SequenceProvider, m: int):
        if m < 1:
            raise ValueError("an amalgam needs at least one block (m >= 1)")
        self.provider = provider
        self.m = m
        self.window = m
        ns, n = provider.n_star, provider.n
        self.star = tuple(VCoord(-1, l) for l in range(ns))
        self.coords = self.star + tuple(VCoord(i, l) for i in range(m + 1) for l in range(ns, n))
        self._cset = set(self.coords)
        self._star_vals = provider.tuple_at(0)[:ns]
        self._block_norms: dict = {}
        self._cache: dict = {}

    # -- coordinates ------------------------------------------------------
    def bar(self, i: int) -> tuple:
        return self.star + tuple(VCoord(i, l) for l in range(self.provider.n_star, self.provider.n))

    def block_coords(self, k: int) -> tuple:
        return self.star + self.bar(k)[len(self.star):] + self.bar(k + 1)[len(self.star):]

    def lift(self, i: int, coeffs: Sequence) -> FSVector:
        """sum_l coeffs[l] * b_{i,l} (constant coordinates map to b*_l)."""
        return FSVector((c_, x) for c_, x in zip(self.bar(i), coeffs))

    def g(self, k: int, v: FSVector, source: int = 0) -> FSVector:
        """The copy map bbar_source -> bbar_k; constants are fixed."""
        for c in v.support:
            if c.i not in (-1, source):
                raise DomainError(f"{v!r} is not in span(bbar_{source})")
        return v.map_keys(lambda c: c if c.i < 0 else VCoord(k, c.ell))

    def coeffs_of(self, v: FSVector, i: int) -> list:
        return [v[c] for c in self.bar(i)]

    def h(self, tag: int, v: FSVector, positions=None) -> FSVector:
        """Image in the ambient space; ``positions`` overrides i -> sequence index."""
        out = FSVector()
        for c, x in v.items():
            if c.i < 0:
                out = out + self._star_vals[c.ell] * x
            else:
                if positions is not None:
                    pos = positions[c.i]
                elif tag == 1:
                    pos = self.window + c.i
                elif tag == -1:
                    pos = self.window - c.i
                else:
                    raise ValueError("h is only defined for tags 1 and -1")
                out = out + self.provider.tuple_at(pos)[c.ell] * x
        return out

    # -- norms ------------------------------------------------------------
    def block_norm(self, k: int, tag: int) -> PolyhedralNorm:
        if not 0 <= k < self.m:
            raise IndexError(f"block {k} outside 0..{self.m - 1}")
        key = (k, tag)
        if key not in self._block_norms:
            if tag == 0:
                nrm = self.block_norm(k, 1).union(self.block_norm(k, -1))
            elif tag in (1, -1):
                emb = {c: self.h(tag, FSVector.basis(c)) for c in self.block_coords(k)}
                nrm = PolyhedralNorm.pullback(self.provider.norm, emb)
            else:
                raise ValueError(f"tag must be one of {TAGS}")
            self._block_norms[key] = nrm
        return self._block_norms[key]

    def blocks_of(self, c: VCoord) -> list[int]:
        if c.i < 0:
            return list(range(self.m))
        return [k for k in (c.i - 1, c.i) if 0 <= k < self.m]

    def contains(self, t: FSVector) -> bool:
        return all(c in self._cset for c in t.support)

    def norm(self, t: FSVector, tag: int) -> Fraction:
        return self.infconv(t, tag)[0]

    def infconv(self, t: FSVector, tag: int):
        """Exact inf-convolution norm of t and an attaining decomposition."""
        if not self.contains(t):
            raise DomainError(f"{t!r} is not in V_{self.m}")
        key = (t, tag)
        if key in self._cache:
            return self._cache[key]
        m = self.m
        norms = [self.block_norm(k, tag) for k in range(m)]
        # t_k[c] = const + sum(coef * z_var); the last block holding c takes the remainder
        nz = 0
        affine = [{} for _ in range(m)]  # k -> coord -> (const, {var: coef})
        for c in self.coords:
            ks = self.blocks_of(c)
            rest = {}
            for k in ks[:-1]:
                affine[k][c] = (Fraction(0), {nz: Fraction(1)})
                rest[nz] = Fraction(-1)
                nz += 1
            affine[ks[-1]][c] = (t[c], rest)
        nvar = nz + m
        A_ub, b_ub = [], []
        for k, nrm in enumerate(norms):
            for f in nrm.functionals:
                row = [Fraction(0)] * nvar
                const = Fraction(0)
                for c, fc in f.items():
                    c0, lin = affine[k][c]
                    const += fc * c0
                    for var, coef in lin.items():
                        row[var] += fc * coef
                u = nz + k
                pos = list(row)
                pos[u] = Fraction(-1)
                neg = [-x for x in row]
                neg[u] = Fraction(-1)
                A_ub += [pos, neg]
                b_ub += [-const, const]
        cost = [Fraction(0)] * nz + [Fraction(1)] * m
        bounds = [(None, None)] * nz + [(0, None)] * m
        sol = solve_lp(LPProblem(c=cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds))
        if sol.status is not LPStatus.OPTIMAL:
            raise AssertionError(f"inf-convolution LP returned {sol.status.value}")
        z = sol.x
        blocks = []
        for k in range(m):
            entries = {}
            for c, (c0, lin) in affine[k].items():
                entries[c] = c0 + sum((coef * z[v] for v, coef in lin.items()), Fraction(0))
            blocks.append(FSVector(entries))
        values = tuple(norms[k].value(blocks[k]) for k in range(m))
        dec = Decomposition(tag, tuple(blocks), values)
        if dec.total != t or dec.cost != sol.value:
            raise AssertionError("inf-convolution decomposition failed exact re-verification")
        self._cache[key] = (sol.value, dec)
        return self._cache[key]

    def __repr__(self):
        return f"AmalgamSpace({self.provider.name!r}, m={self.m})"


def build_amalgam(provider: SequenceProvider, m: int, check: bool = True) -> AmalgamSpace:
    if check:
        check_provider(provider, window=2 * m + 2)
    return AmalgamSpace(provider, m)


def infconv_norm(space: AmalgamSpace, t: FSVector, tag: int):
    return space.infconv(t, tag)


def refine_decomposition(space: AmalgamSpace, dec: Decomposition, r1: FSVector, r2: FSVector) -> Decomposition:
    """Rewrite a decomposition of r_k = r' + g_k(r'') as a telescoping sum.

    k is the number of blocks in ``dec``.  Returns a copy with ``refined``
    populated after checking t_p = -r'_p + r'_{p+1} + s_p, s_p in V^- and
    sum s_p = 0 exactly.
    """
    k = len(dec.blocks)
    target = r1 + space.g(k, r2)
    if dec.total != target:
        raise ShapeError(f"decomposition sums to {dec.total!r}, not r' + g_{k}(r'') = {target!r}")
    for p, tp in enumerate(dec.blocks):
        allowed = set(space.block_coords(p))
        if any(c not in allowed for c in tp.support):
            raise ShapeError(f"t_{p} is not in B'_{p}")
    ns = space.provider.n_star

    def moving_part(v, i):
        return FSVector((c, x) for c, x in v.items() if c.i == i and c.ell >= ns)

    r_prime = [-r1] + [moving_part(dec.blocks[p - 1], p) for p in range(1, k)] + [space.g(k, r2)]
    s = []
    for p, tp in enumerate(dec.blocks):
        sp = tp - (-r_prime[p] + r_prime[p + 1])
        if any(c.i >= 0 for c in sp.support):
            raise ShapeError(f"s_{p} = {sp!r} is not in V^-")
        s.append(sp)
    if sum(s, FSVector()):
        raise ShapeError("sum of s_p is not zero")
    return Decomposition(dec.tag, dec.blocks, dec.block_values, Refinement(tuple(r_prime), tuple(s)))


# ---------------------------------------------------------------------------
# profiles and claims


def _as_b0(space: AmalgamSpace, r) -> FSVector:
    if isinstance(r, FSVector):
        space.g(0, r)  # domain check
        return r
    return space.lift(0, [as_rational(x) for x in r])


def sequence_norm_profile(provider: SequenceProvider, r1, r2, K: int, tags=TAGS, space=None):
    """[(k, tag, ||r_k||_tag)] for 1 <= k <= K, all computed in V_K."""
    if K < 2:
        raise ValueError("profile needs K >= 2")
    space = space or build_amalgam(provider, K)
    r1, r2 = _as_b0(space, r1), _as_b0(space, r2)
    out = []
    for k in range(1, K + 1):
        rk = r1 + space.g(k, r2)
        for tag in tags:
            out.append((k, tag, space.norm(rk, tag)))
    return out


def _random_coeffs(rng, n, height=4):
    while True:
        cs = [Fraction(rng.randint(-height, height), rng.randint(1, 2)) for _ in range(n)]
        if any(cs):
            return cs


def main_claim_sample(provider: SequenceProvider, k: int, m: int, ck, cm):
    """||c_m - c_k||_1 in V_m against the two-point norm of h_1(c_m - c_k).

    Returns (lhs, rhs, factor) where the claim is factor * lhs >= rhs.
    """
    space = AmalgamSpace(provider, m)
    r = space.lift(m, cm) - space.lift(k, ck)
    lhs = space.norm(r, 1)
    W = space.window
    direct = provider.ambient_norm(space.h(1, r, positions={k: W + k, m: W + m}))
    swapped = provider.ambient_norm(space.h(1, r, positions={k: W + m, m: W + k}))
    return lhs, max(direct, swapped), 1 + Fraction(2, m - k)


def verify_convergence_claims(provider: SequenceProvider, r1, r2, j: int, *, main_samples: int = 4,
                              seed: int = 0, strict: bool = True, space=None) -> list[CheckReport]:
    """Finite-stage checks of monotonicity/boundedness, the sandwich and the ratio bound."""
    if j < 2:
        raise ValueError("j must be at least 2")
    m = j * j
    params = {"provider": provider.name, "j": j, "m": m}
    reports = []
    with timed() as clock:
        space = space or build_amalgam(provider, m)
        r1v, r2v = _as_b0(space, r1), _as_b0(space, r2)
        params.update(r1=r1v, r2=r2v)
        prof = sequence_norm_profile(provider, r1v, r2v, m, space=space)
        val = {(k, tag): v for k, tag, v in prof}
        bound = provider.ambient_norm(space.h(1, r1v)) + provider.ambient_norm(space.h(1, space.g(0, r2v)))
        bad = []
        for tag in TAGS:
            seq = [val[(k, tag)] for k in range(1, m + 1)]
            for k in range(1, m):
                if seq[k] < seq[k - 1]:
                    bad.append({"tag": tag, "k": k, "value_k": seq[k - 1], "value_k+1": seq[k]})
            for k, v in enumerate(seq, 1):
                if v > bound:
                    bad.append({"tag": tag, "k": k, "value": v, "bound": bound})
    reports.append(CheckReport(
        "amalgam.clm_conv.1", "fail" if bad else "pass", dict(params),
        {"bound": bound, "profile": {f"{tag}": [val[(k, tag)] for k in range(1, m + 1)] for tag in TAGS}},
        witness={"violations": bad} if bad else None, runtime=clock.elapsed))

    with timed() as clock:
        factor = 1 + Fraction(2, j)
        rm0 = val[(m, 0)]
        rj0 = val[(j, 0)]
        bad = []
        for tag in (1, -1):
            v = val[(m, tag)]
            if not (rm0 >= v and v * factor >= rj0):
                bad.append({"tag": tag, "r_m_0": rm0, "r_m_tag": v, "r_j_0": rj0})
    reports.append(CheckReport(
        "amalgam.clm_conv.2", "fail" if bad else "pass", dict(params),
        {"r_m_0": rm0, "r_m_1": val[(m, 1)], "r_m_-1": val[(m, -1)], "r_j_0": rj0,
         "lower_bound": rj0 / factor},
        witness={"violations": bad} if bad else None, runtime=clock.elapsed))

    with timed() as clock:
        rng = random.Random(seed)
        samples = []
        bad = []
        pairs = [(0, 2), (0, 3), (1, 3), (0, 4), (1, 4), (2, 4)]
        for t in range(main_samples):
            k, mm = pairs[t % len(pairs)]
            ck = _random_coeffs(rng, provider.n)
            cm = _random_coeffs(rng, provider.n)
            lhs, rhs, fac = main_claim_sample(provider, k, mm, ck, cm)
            rec = {"k": k, "m": mm, "c_k": ck, "c_m": cm, "norm_1": lhs, "two_point_norm": rhs}
            samples.append(rec)
            if fac * lhs < rhs:
                bad.append(rec)
    reports.append(CheckReport(
        "amalgam.main_claim", "fail" if bad else "pass", {**params, "samples": main_samples, "seed": seed},
        {"samples": samples}, witness={"violations": bad} if bad else None, runtime=clock.elapsed))
    if strict:
        for rep in reports:
            rep.require()
    return reports


@dataclass
class RhoEstimate:
    lower: Fraction
    upper: Fraction
    stage: int
    forward: Fraction = None
    swapped: Fraction = None
    stage_values: list = field(default_factory=list)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def rho_estimate(provider: SequenceProvider, r1, r2, j_max: int, *, strict: bool = True, space=None):
    """Bracket for rho(r', r'') and the finite-stage symmetry check.

    Returns ``(RhoEstimate, CheckReport)``.  ``forward`` is ||r' + g_M(r'')||_1
    and ``swapped`` is ||r'' + g_M(r')||_1 at M = j_max**2; both must lie in
    [lower, upper].
    """
    if j_max < 2:
        raise ValueError("j_max must be at least 2")
    M = j_max * j_max
    with timed() as clock:
        space = space or build_amalgam(provider, M)
        r1v, r2v = _as_b0(space, r1), _as_b0(space, r2)
        prof = sequence_norm_profile(provider, r1v, r2v, M, tags=(1, -1), space=space)
        val = {(k, tag): v for k, tag, v in prof}
        stage_values = [min(val[(k, 1)], val[(k, -1)]) for k in range(1, M + 1)]
        lower = max(stage_values)
        upper = (1 + Fraction(2, j_max)) * lower
        forward = val[(M, 1)]
        swapped = space.norm(r2v + space.g(M, r1v), 1)
        est = RhoEstimate(lower, upper, M, forward, swapped, stage_values)
        ok = lower <= forward <= upper and lower <= swapped <= upper
    rep = CheckReport(
        "amalgam.clm_sym", "pass" if ok else "fail",
        {"provider": provider.name, "j_max": j_max, "stage": M, "r1": r1v, "r2": r2v},
        {"lower": lower, "upper": upper, "width": est.width, "forward": forward, "swapped": swapped,
         "reversed_tag": val[(M, -1)]},
        witness=None if ok else {"forward": forward, "swapped": swapped, "interval": [lower, upper]},
        runtime=clock.elapsed)
    if strict:
        rep.require()
    return est, rep
