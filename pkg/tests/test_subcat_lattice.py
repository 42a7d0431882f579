import pytest
from oracle import ambient_class_unions, ambient_subcategories, quotient_subcategories

from exactlab.core.results import FAIL, PASS, CheckResult
from exactlab.core.subcat_lattice import Kind, Side
from exactlab.errors import ContractViolation

ZERO, M2, M2_2, M1, M1_M2 = 0, 1, 2, 3, 4


def test_thick_lattices(x2_engine):
    ambient = x2_engine.enumerate_closed(Kind.THICK, Side.AMBIENT)
    quotient = x2_engine.enumerate_closed(Kind.THICK, Side.QUOTIENT)
    assert len(ambient) == len(quotient) == 2
    assert ambient.edges == quotient.edges == [(0, 1)]
    assert ambient.elements[0].members == frozenset({ZERO, M2, M2_2})
    assert quotient.elements[0].points == frozenset({(0, 0)})
    assert not ambient.truncated
    assert all(e.thick and e.complete for e in ambient.elements)


def test_complete_lattices_form_a_chain(x2_engine):
    ambient = x2_engine.enumerate_closed(Kind.COMPLETE, Side.AMBIENT)
    quotient = x2_engine.enumerate_closed(Kind.COMPLETE, Side.QUOTIENT)
    assert len(ambient) == len(quotient) == 3
    assert ambient.edges == [(0, 1), (1, 2)]
    # objects with an even number of copies of the simple module
    assert ambient.elements[1].members == frozenset({0, 1, 2, 6, 7, 8})
    assert quotient.elements[1].points == frozenset({(0, 0), (2, 0)})
    assert not ambient.elements[1].thick


@pytest.mark.parametrize("kind", [Kind.THICK, Kind.COMPLETE])
def test_lattices_agree_with_brute_force(x2_engine, x2_quotient, kind):
    thick = kind == Kind.THICK
    ambient = x2_engine.enumerate_closed(kind, Side.AMBIENT)
    quotient = x2_engine.enumerate_closed(kind, Side.QUOTIENT)
    assert {e.points for e in ambient.elements} == ambient_subcategories(x2_quotient, thick)
    assert {e.points for e in quotient.elements} == quotient_subcategories(x2_quotient, thick)


@pytest.mark.slow
@pytest.mark.parametrize("kind", [Kind.THICK, Kind.COMPLETE])
def test_lattices_agree_with_brute_force_in_length_three(x3_engine, x3_quotient, kind):
    thick = kind == Kind.THICK
    ambient = x3_engine.enumerate_closed(kind, Side.AMBIENT)
    quotient = x3_engine.enumerate_closed(kind, Side.QUOTIENT)
    assert {e.points for e in ambient.elements} == ambient_subcategories(x3_quotient, thick)
    assert {e.points for e in quotient.elements} == quotient_subcategories(x3_quotient, thick)


@pytest.mark.slow
def test_thick_correspondence_in_length_three_at_bound_two(x3_wide_engine):
    ctx = x3_wide_engine.ctx
    assert len(ctx.universe.objects) == 27
    outcome = x3_wide_engine.verify_correspondence(Kind.THICK)
    assert {e.points for e in outcome.ambient.elements} == ambient_class_unions(ctx, True)
    assert {e.points for e in outcome.quotient.elements} == quotient_subcategories(ctx, True)
    assert len(outcome.pairs) == len(outcome.ambient)
    assert [c.status for c in outcome.checks] == [PASS] * 4


@pytest.mark.slow
def test_complete_correspondence_in_length_three_at_bound_two(x3_wide_engine):
    ctx = x3_wide_engine.ctx
    factorization = ctx.is_factorization_admissible().result
    assert factorization.status == PASS
    # the square searches may pass the cap here; a counterexample would still show
    assert ctx.check_weak_five_lemma().status != FAIL
    outcome = x3_wide_engine.verify_correspondence(Kind.COMPLETE, hypotheses=[factorization])
    assert outcome.refused is None
    assert {e.points for e in outcome.ambient.elements} == ambient_class_unions(ctx, False)
    assert {e.points for e in outcome.quotient.elements} == quotient_subcategories(ctx, False)
    assert [c.status for c in outcome.checks] == [PASS] * 4


@pytest.mark.slow
@pytest.mark.parametrize("kind", [Kind.THICK, Kind.COMPLETE])
def test_length_four_at_bound_one(x4_engine, kind):
    ctx = x4_engine.ctx
    thick = kind == Kind.THICK
    hypotheses = []
    if not thick:
        hypotheses.append(ctx.is_factorization_admissible().result)
        assert hypotheses[0].status == PASS
        assert ctx.check_weak_five_lemma().status != FAIL
    outcome = x4_engine.verify_correspondence(kind, hypotheses=hypotheses)
    assert outcome.refused is None
    ambient = {e.points for e in outcome.ambient.elements}
    assert ambient == ambient_subcategories(ctx, thick) == ambient_class_unions(ctx, thick)
    assert {e.points for e in outcome.quotient.elements} == quotient_subcategories(ctx, thick)
    assert len(outcome.pairs) == len(ambient)
    assert [c.status for c in outcome.checks] == [PASS] * 4


def test_closure_of_the_simple_is_everything(x2_engine):
    sub = x2_engine.closure([M1], Kind.THICK, Side.AMBIENT)
    assert sub.members == frozenset(range(9))
    assert sub.contains_n and sub.extension_closed


def test_closure_rejects_generators_outside_the_scope(x2_engine):
    with pytest.raises(ContractViolation):
        x2_engine.closure([42], "thick", "ambient")


def test_violation_names_the_missing_sum(x2_engine):
    sub = x2_engine.from_members(Side.AMBIENT, {ZERO, M2, M2_2, M1})
    ok, witness = x2_engine.is_complete(sub)
    assert not ok
    assert witness["condition"] == "direct sums"
    assert witness["missing"] == "M1+M2"


def test_thick_needs_summands(x2_engine):
    even = x2_engine.from_members(Side.AMBIENT, {0, 1, 2, 6, 7, 8})
    assert x2_engine.is_complete(even) == (True, None)
    ok, witness = x2_engine.is_thick(even)
    assert not ok
    assert witness["condition"] == "direct summands"
    assert witness["missing"] == "M1"
    n = x2_engine.from_members(Side.AMBIENT, {ZERO, M2, M2_2})
    assert x2_engine.is_thick(n) == (True, None)


def test_map_f_needs_n(x2_engine):
    sub = x2_engine.from_members(Side.AMBIENT, {ZERO})
    assert not sub.contains_n
    with pytest.raises(ContractViolation):
        x2_engine.map_F(sub)
    quotient_side = x2_engine.from_members(Side.QUOTIENT, {ZERO})
    with pytest.raises(ContractViolation):
        x2_engine.map_F(quotient_side)
    with pytest.raises(ContractViolation):
        x2_engine.map_G(sub)


def test_f_and_g_on_the_whole_category(x2_engine):
    everything = x2_engine.from_members(Side.AMBIENT, range(9))
    image = x2_engine.map_F(everything)
    assert image.points == frozenset({(0, 0), (1, 0), (2, 0)})
    assert x2_engine.map_G(image).members == everything.members


def test_thick_correspondence(x2_engine):
    outcome = x2_engine.verify_correspondence(Kind.THICK)
    assert outcome.refused is None
    assert outcome.hypotheses == []
    assert outcome.pairs == [(0, 0), (1, 1)]
    assert [c.status for c in outcome.checks] == [PASS] * 4


def test_complete_correspondence_checks_its_hypotheses(x2_engine):
    outcome = x2_engine.verify_correspondence(Kind.COMPLETE)
    assert [h.name for h in outcome.hypotheses] == ["factorization admissible", "Weak Five Lemma"]
    assert all(h.status == PASS for h in outcome.hypotheses)
    assert outcome.refused is None
    assert outcome.pairs == [(0, 0), (1, 1), (2, 2)]
    assert all(c.status == PASS for c in outcome.checks)


def test_failed_hypothesis_refuses_the_correspondence(x2_engine):
    broken = CheckResult("Weak Five Lemma")
    broken.fail({"clause": "i"})
    outcome = x2_engine.verify_correspondence(Kind.COMPLETE, hypotheses=[broken])
    assert outcome.refused == "Weak Five Lemma"
    assert outcome.ambient is None and outcome.pairs == []


def test_supporting_properties(x2_engine):
    thick = x2_engine.enumerate_closed(Kind.THICK, Side.AMBIENT)
    complete = x2_engine.enumerate_closed(Kind.COMPLETE, Side.AMBIENT)
    results = x2_engine.check_supporting_props(thick, complete)
    assert len(results) == 3
    assert all(r.status == PASS and r.checked for r in results)


@pytest.mark.parametrize("kind", ["thick", "complete"])
@pytest.mark.parametrize("side", ["ambient", "quotient"])
def test_closure_operator_laws(x2_engine, kind, side):
    result = x2_engine.check_closure_operator(kind, side)
    assert result.status == PASS
    assert result.checked > 0
