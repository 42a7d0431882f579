import numpy as np
import pytest
from conftest import CAP

from exactlab.core.modules import Module, compose, direct_sum, hom_space, identity, zero_morphism
from exactlab.core.quotient_core import QuotientContext, Triangle
from exactlab.core.results import FAIL, INCONCLUSIVE, PASS
from exactlab.errors import ContractViolation, InconclusiveError

# ids in the xquot:2,2 universe at bound 2
ZERO, M2, M2_2, M1, M1_M2, M1_M2_2, M1_2 = 0, 1, 2, 3, 4, 5, 6


def brute_ideal(ctx, x, y):
    """Row basis of every composite X -> N -> Y through a member of N"""
    U = ctx.universe
    F = ctx.field
    X, Y = U.obj(x).module, U.obj(y).module
    rows = []
    for n in sorted(ctx.members):
        N = U.obj(n).module
        for a in hom_space(X, N):
            for b in hom_space(N, Y):
                rows.append(compose(b, a).mat.reshape(-1))
    if not rows:
        return F.zeros(0, X.dim * Y.dim)
    return F.row_basis(np.array(rows), X.dim * Y.dim)


def test_members_must_hold_zero_and_sums(x2_abelian):
    with pytest.raises(ContractViolation):
        QuotientContext(x2_abelian, {M2})
    with pytest.raises(ContractViolation, match="direct sums"):
        QuotientContext(x2_abelian, {ZERO, M2})


def test_stable_dimensions(x2_quotient):
    ctx = x2_quotient
    assert ctx.stable_dim(M1, M1) == 1
    assert ctx.stable_dim(M1, M2) == 0
    assert ctx.stable_dim(M2, M2) == 0
    assert ctx.stable_dim(M1_2, M1) == 2
    assert ctx.stable_dim(M1_M2, M1_M2) == 1


@pytest.mark.parametrize("x", [ZERO, M2, M1, M1_M2, M1_2, 7, 8])
@pytest.mark.parametrize("y", [M2, M1, M1_M2, M1_2])
def test_ideal_matches_composites_through_members(x2_quotient, x, y):
    ctx = x2_quotient
    X, Y = ctx.module(x), ctx.module(y)
    assert np.array_equal(ctx.ideal_rows(X, Y), brute_ideal(ctx, x, y))


def test_stable_keys_and_classes(x2_quotient):
    ctx = x2_quotient
    assert ctx.stable_key(M1_M2_2) == (1, 0)
    assert ctx.is_stably_zero(M2_2)
    assert not ctx.is_stably_zero(M1)
    assert ctx.stable_classes() == {
        (0, 0): [0, 1, 2],
        (1, 0): [3, 4, 5],
        (2, 0): [6, 7, 8],
    }


def test_stable_morphisms(x2_quotient):
    ctx = x2_quotient
    k, R = ctx.module(M1), ctx.module(M2)
    assert ctx.stable(identity(R)).is_zero()
    assert ctx.stable(identity(k)).is_iso()
    (f,) = hom_space(k, R)
    assert ctx.in_ideal(f)
    assert ctx.stable(f) == ctx.stable(zero_morphism(k, R))


@pytest.mark.parametrize("oid", range(9))
def test_stable_zero_lemma(x2_quotient, oid):
    lemma = x2_quotient.stable_zero_lemma(oid)
    assert lemma.lemma_holds and lemma.converse_holds
    assert lemma.is_zero == (oid in (ZERO, M2, M2_2))


def test_quotient_by_injectives_is_frobenius(x2_quotient, x2_split):
    assert x2_quotient.frobenius
    plain = QuotientContext(x2_split, {ZERO})
    assert not plain.frobenius
    with pytest.raises(ContractViolation):
        plain.suspension(M1)


def test_suspension_of_the_simple(x2_quotient):
    s = x2_quotient.suspension(M1)
    assert s.tx == M1
    assert s.injective_mult == (0, 1)
    assert x2_quotient.suspension(ZERO).tx == ZERO
    f = identity(x2_quotient.module(M1))
    tf = x2_quotient.suspend_morphism(f)
    assert x2_quotient.stable_is_iso(tf)


def test_weak_five_lemma_and_factorization(x2_quotient):
    assert x2_quotient.check_weak_five_lemma().status == PASS
    outcome = x2_quotient.is_factorization_admissible()
    assert outcome.result.status == PASS
    assert outcome.witnesses
    assert {w["leg"] for w in outcome.witnesses} <= {"mono", "epi"}


def test_factorization_through_envelopes_beyond_the_bound(x2_quotient):
    # M1+M2^2 embeds into M2^3, one past the bound
    outcome = x2_quotient.is_factorization_admissible([M1_M2_2, 7, 8])
    assert outcome.result.status == PASS
    assert outcome.result.checked
    assert {
        "objects": ["M1+M2^2", "M1+M2^2"],
        "through": "M2^3",
        "leg": "mono",
    } in outcome.witnesses


def test_missing_factorization_verdicts(x2_quotient, mocker):
    mocker.patch.object(QuotientContext, "_factorization", return_value=None)
    escaped = x2_quotient.is_factorization_admissible([M1_M2_2])
    assert escaped.result.status == INCONCLUSIVE
    assert escaped.result.counterexample is None
    assert any("inside the bound" in note for note in escaped.result.notes)

    inside = x2_quotient.is_factorization_admissible([M1, M2])
    assert inside.result.status == FAIL
    assert set(inside.result.counterexample["objects"]) <= {"M1", "M2"}


def test_sn_membership_of_a_conflation(x2_quotient, x2_abelian):
    c = x2_abelian.cell(M1, M1).middles[M2]
    witness = x2_quotient.sn_membership(c.f, c.g)
    assert witness is not None
    assert all(x2_quotient.stable_is_iso(phi) for phi in witness.isos)


def test_standard_triangles_are_distinguished(x2_quotient):
    ctx = x2_quotient
    k = ctx.module(M1)
    t = ctx.standard_triangle(identity(k))
    assert ctx.check_standard_triangle(t) == []
    assert ctx.is_distinguished(t)
    assert ctx.is_distinguished(ctx.rotate(t))


def test_rotating_twice_stays_distinguished(x2_quotient):
    ctx = x2_quotient
    (f,) = hom_space(ctx.module(M1), ctx.module(M2))
    once = ctx.rotate(ctx.standard_triangle(f))
    twice = ctx.rotate(once)
    # the first term is now the pushout module, not a universe object
    assert twice.x == once.y
    assert ctx.is_distinguished(once)
    assert ctx.is_distinguished(twice)


def test_suspension_moves_onto_isomorphic_modules(x2_quotient):
    ctx = x2_quotient
    M = ctx.module(M1_M2)
    F = ctx.field
    P = F.mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    P_inv = F.inverse(P)
    other = Module(M.algebra, M.dim, tuple(F.matmul(P_inv, a, P) for a in M.action), "other")
    assert other != M
    s = ctx.suspension_of(other)
    assert s.tx == ctx.suspension(M1_M2).tx
    assert s.mono.src == other
    assert s.mono.rank() == other.dim
    assert not compose(s.epi, s.mono).mat.any()


def test_triangles_ending_in_another_model_of_tx(x2_quotient):
    ctx = x2_quotient
    k, R = ctx.module(M1), ctx.module(M2)
    (f,) = hom_space(k, R)
    std = ctx.standard_triangle(f)
    wider = direct_sum(std.tx, R)
    assert ctx.is_distinguished(Triangle(std.u, std.v, compose(wider.inclusions[0], std.w)))
    assert not ctx.is_distinguished(Triangle(std.u, std.v, zero_morphism(std.z, wider.module)))


def test_triangle_comparison_beyond_the_cap_is_inconclusive(x2_abelian):
    ctx = QuotientContext(x2_abelian, x2_abelian.injective_ids, cap=0)
    t = ctx.standard_triangle(identity(ctx.module(M1)))
    with pytest.raises(InconclusiveError):
        ctx.is_distinguished(t)
    assert QuotientContext(x2_abelian, x2_abelian.injective_ids, cap=CAP).is_distinguished(t)


def test_zero_triangle_is_not_distinguished(x2_quotient):
    ctx = x2_quotient
    k, Z = ctx.module(M1), ctx.module(ZERO)
    t = Triangle(zero_morphism(k, k), zero_morphism(k, Z), zero_morphism(Z, k))
    assert not ctx.is_distinguished(t)


def test_triangle_maps_must_compose(x2_quotient):
    k, R = x2_quotient.module(M1), x2_quotient.module(M2)
    with pytest.raises(ContractViolation):
        Triangle(zero_morphism(k, R), zero_morphism(k, k), zero_morphism(k, k))


def test_triangulated_checks_pass(x2_quotient):
    ctx = x2_quotient
    results = [
        *ctx.verify_sn_iff_triangle(),
        ctx.check_ideal(),
        ctx.check_biproducts(),
        *ctx.check_suspension(),
    ]
    assert [r.name for r in results if r.status != PASS] == []
    assert all(r.checked for r in results)


def test_sn_axioms_are_recorded(x2_quotient):
    observations = x2_quotient.record_sn_axioms()
    assert set(observations) == {"stable monomorphisms", "stable epimorphisms"}
    assert all(isinstance(o["holds"], bool) for o in observations.values())


@pytest.mark.slow
def test_three_dimensional_quotient(x3_quotient):
    ctx = x3_quotient
    assert ctx.frobenius
    assert ctx.check_weak_five_lemma().status == PASS
    assert [r.status for r in ctx.verify_sn_iff_triangle()] == [PASS, PASS]
