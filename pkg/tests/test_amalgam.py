import json
import random
from fractions import Fraction

import pytest
from oracles import oracle_norm

from soplab.amalgam import (
    AmalgamSpace,
    Decomposition,
    ProviderError,
    SequenceProvider,
    ShapeError,
    VCoord,
    build_amalgam,
    canonical_provider,
    check_provider,
    get_provider,
    infconv_norm,
    main_claim_sample,
    provider_from_dict,
    refine_decomposition,
    rho_estimate,
    sequence_norm_profile,
    simple_provider,
    verify_convergence_claims,
)
from soplab.qlinalg import B0Seminorm, DomainError, FSVector, MaxAbsNorm, a, b, e

STAR = {"name": "star", "ambient": "B0", "n_star": 1, "coordinates": ["b[0]", "a[i+1]"]}


def star_provider():
    return provider_from_dict(STAR)


def _random_instance(rng):
    provider, m = rng.choice([(canonical_provider(), 2), (simple_provider(), 2), (simple_provider(), 3),
                              (star_provider(), 2)])
    space = AmalgamSpace(provider, m)
    t = FSVector()
    for c in rng.sample(space.coords, rng.randint(1, len(space.coords))):
        t = t + FSVector({c: Fraction(rng.randint(-6, 6), rng.randint(1, 4))})
    return provider, m, space, t, rng.choice((1, -1, 0))


def test_infconv_matches_vertex_oracle():
    rng = random.Random(2024)
    for _ in range(60):
        provider, m, space, t, tag = _random_instance(rng)
        value, dec = infconv_norm(space, t, tag)
        expect, nvars = oracle_norm(provider, m, t, tag)
        assert nvars <= 6
        assert value == expect
        assert dec.total == t and dec.cost == value


def test_infconv_simple_examples():
    sp = AmalgamSpace(simple_provider(), 2)
    t = sp.lift(0, [1]) + sp.lift(2, [1])
    value, dec = infconv_norm(sp, t, 1)
    assert value == 2
    assert dec.blocks == (sp.lift(0, [1]), sp.lift(2, [1]))
    assert sp.norm(sp.lift(1, [1]), 1) == 1


def test_infconv_is_a_seminorm():
    rng = random.Random(3)
    sp = AmalgamSpace(canonical_provider(), 3)
    for _ in range(15):
        u = FSVector({c: rng.randint(-3, 3) for c in sp.coords})
        v = FSVector({c: rng.randint(-3, 3) for c in sp.coords})
        for tag in (1, -1, 0):
            assert sp.norm(u + v, tag) <= sp.norm(u, tag) + sp.norm(v, tag)
            assert sp.norm(u * Fraction(-3, 2), tag) == Fraction(3, 2) * sp.norm(u, tag)
            assert sp.norm(u, 0) >= sp.norm(u, tag)


def test_domain_errors():
    sp = AmalgamSpace(simple_provider(), 2)
    with pytest.raises(DomainError):
        sp.norm(FSVector({VCoord(5, 0): 1}), 1)
    with pytest.raises(DomainError):
        sp.g(2, sp.lift(1, [1]))
    with pytest.raises(ValueError):
        AmalgamSpace(simple_provider(), 0)


# --- providers ----------------------------------------------------------------


def test_builtin_providers_pass_checks():
    for p in (canonical_provider(), simple_provider(), star_provider()):
        out = check_provider(p, 8)
        assert out["independent_vectors"] == p.n_star + (p.n - p.n_star) * 8


def test_provider_rejects_dependent_coordinates():
    p = provider_from_dict({"ambient": "B0", "coordinates": ["a[i]", "2*a[i]"]})
    with pytest.raises(ProviderError):
        check_provider(p, 4)


def test_provider_rejects_moving_constants():
    p = SequenceProvider("bad", 2, 1, lambda i: (a(i), b(i)), B0Seminorm())
    with pytest.raises(ProviderError):
        check_provider(p, 4)


def test_provider_rejects_non_indiscernible():
    # e_0 gets a larger weight than every later e_i
    p = SequenceProvider("skew", 1, 0, lambda i: (e(i, 2 if i == 0 else 1),), MaxAbsNorm())
    with pytest.raises(ProviderError):
        check_provider(p, 5, trials=200)


def test_provider_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(STAR))
    p = get_provider(str(path))
    assert (p.n, p.n_star) == (2, 1)
    assert p.tuple_at(3) == (b(0), a(4))
    with pytest.raises(KeyError):
        get_provider("no-such-provider")


# --- profiles and claims --------------------------------------------------------


def _profile(provider, r1, r2, K):
    prof = sequence_norm_profile(provider, r1, r2, K)
    return {tag: [v for k, t, v in prof if t == tag] for tag in (1, -1, 0)}


def test_simple_profile():
    prof = _profile(simple_provider(), [1], [1], 6)
    for tag in (1, -1, 0):
        # k = 1: r_1 = bbar_0 + bbar_1 fits in one block of norm 1
        assert prof[tag] == [1] + [2] * 5


def test_canonical_profile_values():
    prof = _profile(canonical_provider(), [1, 0], [0, 1], 8)
    assert prof[1] == [2] * 8
    assert prof[0] == [2] * 8
    assert prof[-1] == [1] + [2 - Fraction(2, k) for k in range(2, 9)]


def test_canonical_symmetric_input_is_flat():
    prof = _profile(canonical_provider(), [1, 1], [1, -1], 5)
    assert all(v == 2 for tag in prof for v in prof[tag])


def test_refinement_of_an_optimal_decomposition():
    sp = build_amalgam(canonical_provider(), 4)
    r1 = sp.lift(0, [1, 0])
    r2 = sp.lift(0, [0, 1])
    for k in (1, 2, 3, 4):
        small = AmalgamSpace(canonical_provider(), k)
        _, dec = small.infconv(r1 + small.g(k, r2), 1)
        ref = refine_decomposition(small, dec, r1, r2).refined
        assert ref.r_prime[0] == -r1 and ref.r_prime[-1] == small.g(k, r2)
        for p, tp in enumerate(dec.blocks):
            assert tp == -ref.r_prime[p] + ref.r_prime[p + 1] + ref.s[p]


def test_refinement_shape_errors():
    sp = AmalgamSpace(simple_provider(), 2)
    r1, r2 = sp.lift(0, [1]), sp.lift(0, [1])
    bad = Decomposition(1, (sp.lift(0, [1]), sp.lift(1, [1])), (1, 1))
    with pytest.raises(ShapeError):
        refine_decomposition(sp, bad, r1, r2)


def test_refinement_with_constant_part():
    p = star_provider()
    sp = AmalgamSpace(p, 2)
    r1 = FSVector({VCoord(-1, 0): 1, VCoord(0, 1): 1})
    r2 = FSVector({VCoord(0, 1): 2})
    _, dec = sp.infconv(r1 + sp.g(2, r2), 0)
    ref = refine_decomposition(sp, dec, r1, r2).refined
    assert sum(ref.s, FSVector()) == FSVector()
    assert all(c.i < 0 for s in ref.s for c in s.support)


def test_main_claim_samples():
    rng = random.Random(11)
    for provider in (canonical_provider(), simple_provider()):
        for k, m in [(0, 2), (1, 3), (0, 4), (2, 4)]:
            ck = [Fraction(rng.randint(-3, 3)) for _ in range(provider.n)]
            cm = [Fraction(rng.randint(-3, 3)) for _ in range(provider.n)]
            lhs, rhs, fac = main_claim_sample(provider, k, m, ck, cm)
            assert fac == 1 + Fraction(2, m - k)
            assert fac * lhs >= rhs


@pytest.mark.parametrize("provider_fn", [canonical_provider, simple_provider])
def test_convergence_claims_j2(provider_fn):
    p = provider_fn()
    r1 = [1] + [0] * (p.n - 1)
    r2 = [0] * (p.n - 1) + [1]
    reps = verify_convergence_claims(p, r1, r2, 2)
    assert [r.claim for r in reps] == ["amalgam.clm_conv.1", "amalgam.clm_conv.2", "amalgam.main_claim"]
    assert all(r.passed for r in reps)


def test_rho_interval():
    est, rep = rho_estimate(canonical_provider(), [1, 0], [0, 1], 3)
    assert rep.passed
    assert est.lower <= est.forward <= est.upper
    assert est.width == Fraction(2, 3) * est.lower
