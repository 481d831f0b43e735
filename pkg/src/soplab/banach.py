"""Witnesses for SOP_{<=n} in Banach spaces, evaluated exactly in B0.

Terms are tau_{n,l}(x, y) = (n - 2l) x + (n - 2l + 1) y, witnesses are
c_{n,l,alpha} = tau_{n,l}(a_alpha, b_alpha), and phi_n(x1 x2, y1 y2) is the
conjunction of three families of norm bounds on differences of terms.
Every value below is an exact rational; equalities are equalities in Q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .qlinalg import ZERO, B0Seminorm, FSVector, a, b, fgamma_eval, gamma_breakpoints, seminorm_b0
from .reports import CheckReport, FalsificationError, timed

Pair = tuple  # (FSVector, FSVector)

B0 = B0Seminorm()


@dataclass(frozen=True, eq=False)
class Term:
    """tau_{n,l}; two terms are equal iff their coefficients agree."""

    n: int
    ell: int

    @property
    def x_coeff(self) -> int:
        return self.n - 2 * self.ell

    @property
    def y_coeff(self) -> int:
        return self.n - 2 * self.ell + 1

    @property
    def coeffs(self) -> tuple[int, int]:
        return (self.x_coeff, self.y_coeff)

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x: FSVector, y: FSVector) -> FSVector:
        return x * self.x_coeff + y * self.y_coeff

    def __repr__(self):
        return f"tau[{self.n},{self.ell}]={self.x_coeff}x+{self.y_coeff}y"


@dataclass(frozen=True)
class WitnessVector:
    n: int
    ell: int
    alpha: int
    vector: FSVector

    def abs_fgamma(self, gamma: int) -> int:
        """|f_gamma(c)|: |n-2l| when alpha < gamma, |n-2l+1| when alpha >= gamma."""
        return abs(self.n - 2 * self.ell) if self.alpha < gamma else abs(self.n - 2 * self.ell + 1)


def witness_c(n: int, ell: int, alpha: int) -> WitnessVector:
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if not 0 <= ell <= n:
        raise ValueError(f"ell must lie in 0..{n}, got {ell}")
    if alpha < 0:
        raise ValueError("alpha must be a natural number")
    return WitnessVector(n, ell, alpha, Term(n, ell)(a(alpha), b(alpha)))


def chain_pair(alpha: int) -> Pair:
    return (a(alpha), b(alpha))


def _argmax_gamma(v: FSVector) -> int:
    idx = [k.index for k in v.support]
    return max(gamma_breakpoints(idx), key=lambda g: (abs(fgamma_eval(g, v)), -g))


def check_eq1_eq2(n: int, range_: int, *, strict: bool = False) -> list[CheckReport]:
    """Exact norm identities of the chain: ||c_{l+1,beta} - c_{l,alpha}|| = 2 and
    ||c_{m,alpha} - c_{0,beta}|| = 2m + 1 for alpha < beta < range_."""
    if n < 3 or range_ < 2:
        raise ValueError("need n >= 3 and range >= 2")
    out = []
    with timed() as clock:
        bad, count = [], 0
        for beta in range(range_):
            for alpha in range(beta):
                for ell in range(n):
                    v = witness_c(n, ell + 1, beta).vector - witness_c(n, ell, alpha).vector
                    val = seminorm_b0(v)
                    count += 1
                    if val != 2:
                        bad.append({"ell": ell, "alpha": alpha, "beta": beta, "value": val,
                                    "gamma": _argmax_gamma(v)})
    out.append(CheckReport("banach.eq1", "fail" if bad else "pass", {"n": n, "range": range_},
                           {"checked": count, "expected": Fraction(2)},
                           witness={"violations": bad[:20]} if bad else None, runtime=clock.elapsed))
    with timed() as clock:
        bad, count = [], 0
        for beta in range(range_):
            for alpha in range(beta):
                for m in range(n + 1):
                    v = witness_c(n, m, alpha).vector - witness_c(n, 0, beta).vector
                    val = seminorm_b0(v)
                    count += 1
                    if val != 2 * m + 1 or val > 2 * m + 2:
                        bad.append({"m": m, "alpha": alpha, "beta": beta, "value": val,
                                    "gamma": _argmax_gamma(v)})
    out.append(CheckReport("banach.eq2", "fail" if bad else "pass", {"n": n, "range": range_},
                           {"checked": count, "expected": "2m+1", "cap": "2m+2"},
                           witness={"violations": bad[:20]} if bad else None, runtime=clock.elapsed))
    if strict:
        for r in out:
            r.require()
    return out


@dataclass
class PhiFormula:
    """phi_n as structured data: each conjunct is (family, index, bound, sense)."""

    n: int
    conjuncts: list = field(default_factory=list)

    @classmethod
    def build(cls, n: int) -> "PhiFormula":
        if n < 3:
            raise ValueError("phi_n is defined for n >= 3")
        cs = [("path", l, 2, "<=") for l in range(n)]
        cs += [("gap", m, 2 * m + 1, ">=") for m in range(n + 1)]
        cs += [("cap", m, 2 * m + 2, "<=") for m in range(n + 1)]
        return cls(n, cs)

    def counts(self) -> tuple[int, int, int]:
        fam = [c[0] for c in self.conjuncts]
        return fam.count("path"), fam.count("gap"), fam.count("cap")

    def lhs(self, family: str, idx: int, x: Pair, y: Pair) -> FSVector:
        n = self.n
        if family == "path":
            return Term(n, idx + 1)(*y) - Term(n, idx)(*x)
        return Term(n, idx)(*x) - Term(n, 0)(*y)


@dataclass
class GraphEdgeReport:
    n: int
    labels: tuple
    values: list  # (family, index, lhs value, bound, holds)
    verdict: bool

    @property
    def failing(self) -> list:
        return [v for v in self.values if not v[4]]


def _norm_of(norm):
    if norm is None:
        return seminorm_b0
    return norm.value if hasattr(norm, "value") else norm


def phi_eval(n: int, x: Pair, y: Pair, norm=None, labels=("x", "y"), lazy: bool = False) -> GraphEdgeReport:
    """Evaluate every conjunct of phi_n(x, y) exactly.

    ``norm`` is any object with ``value`` (default: the B0 seminorm).  With
    ``lazy`` evaluation stops at the first false conjunct.
    """
    if len(x) != 2 or len(y) != 2:
        raise ValueError("phi_n takes pairs of vectors")
    if norm is not None and hasattr(norm, "contains"):
        for v in (*x, *y):
            if not norm.contains(v):
                from .qlinalg import DomainError

                raise DomainError(f"{v!r} is outside the norm's space")
    value = _norm_of(norm)
    phi = PhiFormula.build(n)
    rows = []
    verdict = True
    gap_vals = {}
    for family, idx, bound, sense in phi.conjuncts:
        if family == "cap" and idx in gap_vals:
            val = gap_vals[idx]
        else:
            val = value(phi.lhs(family, idx, x, y))
        if family == "gap":
            gap_vals[idx] = val
        holds = val >= bound if sense == ">=" else val <= bound
        rows.append((family, idx, val, bound, holds))
        if not holds:
            verdict = False
            if lazy:
                break
    return GraphEdgeReport(n, tuple(labels), rows, verdict)


def phi_holds(n: int, x: Pair, y: Pair, norm=None) -> bool:
    return phi_eval(n, x, y, norm, lazy=True).verdict


def chain_verify(n: int, length: int, sequence: Optional[Sequence[Pair]] = None, *,
                 strict: bool = False) -> CheckReport:
    """phi_n(seq[alpha], seq[beta]) for every alpha < beta < length."""
    if n < 3 or length < 2:
        raise ValueError("need n >= 3 and length >= 2")
    seq = list(sequence) if sequence is not None else [chain_pair(i) for i in range(length)]
    if len(seq) < length:
        raise ValueError("sequence shorter than the requested length")
    with timed() as clock:
        bad, count = [], 0
        for beta in range(length):
            for alpha in range(beta):
                rep = phi_eval(n, seq[alpha], seq[beta], labels=(alpha, beta))
                count += 1
                if not rep.verdict:
                    bad.append({"alpha": alpha, "beta": beta, "x": list(seq[alpha]), "y": list(seq[beta]),
                                "failing": [list(r) for r in rep.failing]})
    rep = CheckReport("banach.chain", "fail" if bad else "pass", {"n": n, "length": length,
                      "sequence": "canonical" if sequence is None else "custom"},
                      {"pairs_checked": count}, witness={"violations": bad[:10]} if bad else None,
                      runtime=clock.elapsed)
    return rep.require() if strict else rep


# ---------------------------------------------------------------------------
# randomized cycle search


def random_vector(rng: random.Random, max_index: int = 8, height: int = 16, max_terms: int = 4) -> FSVector:
    v = ZERO
    for _ in range(rng.randint(1, max_terms)):
        kind = rng.choice((a, b))
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        v = v + kind(rng.randint(0, max_index), q)
    return v


def random_pair(rng, **kw) -> Pair:
    return (random_vector(rng, **kw), random_vector(rng, **kw))


def perturb(rng: random.Random, pair: Pair, max_index: int = 8, height: int = 16) -> Pair:
    """A chain pair plus, usually, a small rational nudge on a random coordinate."""
    x1, x2 = pair
    if rng.random() < 0.35:
        return pair
    nudge = Fraction(rng.choice((-1, 1)), rng.randint(2, height))
    bump = rng.choice((a, b))(rng.randint(0, max_index), nudge)
    return (x1 + bump, x2) if rng.random() < 0.5 else (x1, x2 + bump)


def _cycle_candidate(rng, m, adversarial):
    if adversarial:
        # increasing chain indices, so every path edge is a genuine chain edge
        idx = sorted(rng.sample(range(0, 9), m + 1)) if m + 1 <= 9 else list(range(m + 1))
        return [perturb(rng, chain_pair(i)) for i in idx]
    return [random_pair(rng) for _ in range(m + 1)]


def cycle_search_and_certify(n: int, m: int, trials: int, seed: int, *, strict: bool = True) -> CheckReport:
    """Try to close a directed phi_n-cycle through tuples 0 -> 1 -> ... -> m -> 0.

    Half the attempts start from perturbed chain witnesses.  Whenever the
    first-family conjuncts ||tau_{i+1}(c_{i+1}) - tau_i(c_i)|| <= 2 hold along
    the path, the triangle inequality bounds the closing difference by their
    sum <= 2m, which is checked against the required >= 2m + 1.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 1 <= m <= n:
        raise ValueError(f"cycle parameter m must satisfy 1 <= m <= n (tuples 0..m), got m={m}, n={n}")
    rng = random.Random(seed)
    certified = closed = 0
    max_ratio = Fraction(0)
    examples = []
    with timed() as clock:
        for trial in range(trials):
            tup = _cycle_candidate(rng, m, adversarial=trial % 2 == 1)
            path = [seminorm_b0(Term(n, i + 1)(*tup[i + 1]) - Term(n, i)(*tup[i])) for i in range(m)]
            closing = seminorm_b0(Term(n, m)(*tup[m]) - Term(n, 0)(*tup[0]))
            if closing > sum(path):
                raise AssertionError("triangle inequality violated: seminorm implementation is broken")
            edges = [(tup[i], tup[i + 1]) for i in range(m)] + [(tup[m], tup[0])]
            if all(p <= 2 for p in path):
                certified += 1
                bound = sum(path)
                if not (bound <= 2 * m < 2 * m + 1 and closing < 2 * m + 1):
                    raise AssertionError("telescoping certificate failed")
                if len(examples) < 3:
                    examples.append({"trial": trial, "path": path, "telescoped_bound": bound,
                                     "closing": closing, "required": 2 * m + 1})
            # a path value above 2 already falsifies that edge's own path conjunct
            if all(p <= 2 for p in path) and all(phi_holds(n, x, y) for x, y in edges):
                closed += 1
                rep = CheckReport("banach.cycle", "fail", {"n": n, "m": m, "trials": trials, "seed": seed},
                                  {"closed_at_trial": trial},
                                  witness={"tuples": [list(t) for t in tup], "path": path, "closing": closing})
                raise FalsificationError(rep)
    rep = CheckReport(
        "banach.cycle", "pass",
        {"n": n, "m": m, "trials": trials, "seed": seed},
        {"closed": closed, "certified": certified, "certificate_bound": 2 * m, "required": 2 * m + 1},
        notes="each certified attempt: closing norm <= sum of path norms <= 2m < 2m+1",
        runtime=clock.elapsed)
    rep.values["certificate_examples"] = examples
    return rep


# ---------------------------------------------------------------------------
# term shift, entailment, the type p


def term_shift_identity(n_max: int) -> CheckReport:
    """tau_{n,l} == tau_{n+2,l+1} for 3 <= n <= n_max, l <= n."""
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    bad, count = [], 0
    for n in range(3, n_max + 1):
        for ell in range(n + 1):
            count += 1
            if Term(n, ell) != Term(n + 2, ell + 1):
                bad.append({"n": n, "ell": ell})
    return CheckReport("banach.term_shift", "fail" if bad else "pass", {"n_max": n_max},
                       {"identities": count}, witness={"violations": bad} if bad else None)


def entailment_spotcheck(n: int, samples: int, seed: int, *, strict: bool = True) -> CheckReport:
    """Random search for tuples with phi_{n+2} true and phi_n false."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = random.Random(seed)
    premise_true = 0
    with timed() as clock:
        for s in range(samples):
            if s % 2:
                alpha, beta = sorted(rng.sample(range(9), 2))
                x, y = perturb(rng, chain_pair(alpha)), perturb(rng, chain_pair(beta))
            else:
                x, y = random_pair(rng), random_pair(rng)
            if phi_holds(n + 2, x, y):
                premise_true += 1
                rep = phi_eval(n, x, y)
                if not rep.verdict:
                    bad = CheckReport("banach.entailment", "fail", {"n": n, "samples": samples, "seed": seed},
                                      {"sample": s}, witness={"x": list(x), "y": list(y),
                                                              "failing": [list(r) for r in rep.failing]})
                    if strict:
                        raise FalsificationError(bad)
                    return bad
    return CheckReport("banach.entailment", "pass", {"n": n, "samples": samples, "seed": seed},
                       {"premise_true": premise_true, "counterexamples": 0}, runtime=clock.elapsed)


def type_p_eval(N: int, x: Pair, y: Pair) -> CheckReport:
    """The truncation of p(x, y) = AND_n phi_{2n+3}(x, y) to n < N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    verdicts = {}
    for k in range(N):
        verdicts[2 * k + 3] = phi_eval(2 * k + 3, x, y).verdict
    ok = all(verdicts.values())
    return CheckReport("banach.type_p", "pass" if ok else "fail", {"N": N, "x": list(x), "y": list(y)},
                       {"phi": {str(k): v for k, v in verdicts.items()}},
                       witness=None if ok else {"false_at": [k for k, v in verdicts.items() if not v]})


def kernel_witness() -> CheckReport:
    v = a(0) - a(1) - b(1) + b(0)
    val = seminorm_b0(v)
    return CheckReport("banach.kernel", "pass" if val == 0 else "fail", {"vector": v}, {"seminorm": val},
                       witness=None if val == 0 else {"seminorm": val})


def distinctness_check(size: int) -> CheckReport:
    """a_alpha, b_alpha (alpha < size) are non-zero and pairwise distinct in B1."""
    elems = [a(i) for i in range(size)] + [b(i) for i in range(size)]
    bad = [repr(v) for v in elems if seminorm_b0(v) == 0]
    for i, u in enumerate(elems):
        for v in elems[i + 1:]:
            if seminorm_b0(u - v) == 0:
                bad.append(f"{u!r}={v!r}")
    return CheckReport("banach.distinct", "fail" if bad else "pass", {"size": size},
                       {"elements": len(elems)}, witness={"violations": bad} if bad else None)
