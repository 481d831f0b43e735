from fractions import Fraction

import pytest
from conftest import ab_vectors
from hypothesis import given, settings
from oracles import naive_seminorm_b0

from soplab.banach import (
    PhiFormula,
    Term,
    chain_pair,
    chain_verify,
    check_eq1_eq2,
    cycle_search_and_certify,
    distinctness_check,
    entailment_spotcheck,
    kernel_witness,
    phi_eval,
    term_shift_identity,
    type_p_eval,
    witness_c,
)
from soplab.qlinalg import ZERO, DomainError, PolyhedralNorm, a, b, seminorm_b0
from soplab.reports import FalsificationError


def test_witness_vectors():
    assert witness_c(3, 0, 5).vector == 3 * a(5) + 4 * b(5)
    assert witness_c(3, 1, 0).vector == a(0) + 2 * b(0)
    assert witness_c(5, 2, 2).vector == a(2) + 2 * b(2)
    # n - 2l = 0: only b survives
    assert witness_c(4, 2, 1).vector.support == (b(1).support[0],)


def test_witness_range_errors():
    with pytest.raises(ValueError):
        witness_c(3, 4, 0)
    with pytest.raises(ValueError):
        witness_c(2, 0, 0)


@pytest.mark.parametrize("n,ell,alpha", [(3, 0, 2), (5, 4, 0), (7, 3, 6)])
def test_abs_fgamma_against_direct(n, ell, alpha):
    w = witness_c(n, ell, alpha)
    for gamma in range(alpha + 3):
        s = sum((c for k, c in w.vector.items()
                 if (k.kind == "A" and k.index < gamma) or (k.kind == "B" and k.index >= gamma)), Fraction(0))
        assert w.abs_fgamma(gamma) == abs(s)


def test_terms():
    assert Term(3, 0) == Term(5, 1)
    assert Term(4, 2) == Term(6, 3)
    assert Term(4, 2).coeffs == (0, 1)
    assert Term(3, 0) != Term(5, 0)
    t = Term(7, 2)
    assert t.y_coeff == t.x_coeff + 1
    assert t(a(0), b(0)) == witness_c(7, 2, 0).vector


def test_eq_examples_direct():
    v = witness_c(3, 1, 1).vector - witness_c(3, 0, 0).vector
    assert seminorm_b0(v) == 2
    v = witness_c(3, 1, 0).vector - witness_c(3, 0, 1).vector
    assert seminorm_b0(v) == 3
    v = witness_c(3, 0, 0).vector - witness_c(3, 0, 1).vector
    assert seminorm_b0(v) == 1


@pytest.mark.parametrize("n", [3, 4, 6])
def test_eq1_eq2_against_naive_sweep(n):
    for beta in range(5):
        for alpha in range(beta):
            for ell in range(n):
                v = witness_c(n, ell + 1, beta).vector - witness_c(n, ell, alpha).vector
                assert naive_seminorm_b0(v, 8) == 2
            for m in range(n + 1):
                v = witness_c(n, m, alpha).vector - witness_c(n, 0, beta).vector
                assert naive_seminorm_b0(v, 8) == 2 * m + 1
    assert all(r.passed for r in check_eq1_eq2(n, 5))


def test_eq_report_shape():
    r1, r2 = check_eq1_eq2(3, 3)
    assert (r1.claim, r2.claim) == ("banach.eq1", "banach.eq2")
    assert r1.values["checked"] == 3 * 3


def test_kernel_and_distinctness():
    assert kernel_witness().values["seminorm"] == 0
    assert distinctness_check(6).passed


def test_phi_formula_counts():
    for n in (3, 4, 9):
        assert PhiFormula.build(n).counts() == (n, n + 1, n + 1)


def test_phi_examples():
    x, y = chain_pair(0), chain_pair(1)
    assert phi_eval(3, x, y).verdict
    rev = phi_eval(3, y, x)
    assert not rev.verdict
    assert any(fam == "gap" for fam, *_ in rev.failing)
    same = phi_eval(3, x, x)
    assert not same.verdict
    gaps = [(idx, val) for fam, idx, val, _, _ in same.values if fam == "gap"]
    assert gaps == [(m, Fraction(2 * m)) for m in range(4)]


def test_phi_lazy_stops_early():
    full = phi_eval(3, chain_pair(1), chain_pair(0))
    lazy = phi_eval(3, chain_pair(1), chain_pair(0), lazy=True)
    assert len(lazy.values) < len(full.values) and not lazy.verdict


def test_phi_domain_error():
    nrm = PolyhedralNorm.max_abs(a(0).support + b(0).support)
    with pytest.raises(DomainError):
        phi_eval(3, chain_pair(0), chain_pair(1), norm=nrm)


@settings(max_examples=40, deadline=None)
@given(ab_vectors(max_index=3), ab_vectors(max_index=3), ab_vectors(max_index=3), ab_vectors(max_index=3))
def test_phi_retains_exact_values(x1, x2, y1, y2):
    rep = phi_eval(3, (x1, x2), (y1, y2))
    for fam, idx, val, bound, holds in rep.values:
        lhs = PhiFormula.build(3).lhs(fam, idx, (x1, x2), (y1, y2))
        assert val == naive_seminorm_b0(lhs, 6)
        assert holds == (val >= bound if fam == "gap" else val <= bound)
    assert rep.verdict == all(r[4] for r in rep.values)


def test_chain_small_and_injected_reversal():
    assert chain_verify(3, 2).passed
    seq = [chain_pair(1), chain_pair(0)]
    rep = chain_verify(3, 2, sequence=seq)
    assert rep.status == "fail" and rep.witness["violations"]
    with pytest.raises(FalsificationError):
        chain_verify(3, 2, sequence=seq, strict=True)


def test_chain_all_n_simultaneously():
    for n in range(3, 9):
        assert chain_verify(n, 6).passed


def test_cycle_wrapped_chain_fails_on_closing_edge():
    tuples = [chain_pair(i) for i in range(3)]
    assert phi_eval(3, tuples[0], tuples[1]).verdict
    assert phi_eval(3, tuples[1], tuples[2]).verdict
    assert not phi_eval(3, tuples[2], tuples[0]).verdict


def test_zero_tuples_fail_gap():
    rep = phi_eval(3, (ZERO, ZERO), (ZERO, ZERO))
    assert not rep.verdict
    assert [r[1] for r in rep.failing if r[0] == "gap"] == [0, 1, 2, 3]


def test_cycle_search_certificates():
    rep = cycle_search_and_certify(3, 2, 300, seed=4)
    assert rep.passed and rep.values["closed"] == 0
    assert rep.values["certified"] > 0
    for ex in rep.values["certificate_examples"]:
        assert ex["telescoped_bound"] <= 4 < ex["required"] == 5


def test_cycle_parameter_range():
    with pytest.raises(ValueError):
        cycle_search_and_certify(3, 4, 10, 0)  # needs the conjunct l = n, which phi_3 lacks
    with pytest.raises(ValueError):
        cycle_search_and_certify(3, 0, 10, 0)


def test_term_shift():
    assert term_shift_identity(20).values["identities"] == sum(n + 1 for n in range(3, 21))
    assert term_shift_identity(20).passed


def test_entailment_chain_pair():
    x, y = chain_pair(0), chain_pair(1)
    assert phi_eval(5, x, y).verdict and phi_eval(3, x, y).verdict
    rep = entailment_spotcheck(3, 200, seed=1)
    assert rep.passed and rep.values["premise_true"] > 0


def test_type_p():
    x, y = chain_pair(0), chain_pair(1)
    assert type_p_eval(4, x, y).passed
    rev = type_p_eval(4, y, x)
    assert not rev.passed and 3 in rev.witness["false_at"]
    assert type_p_eval(1, x, y).passed == phi_eval(3, x, y).verdict
