import dataclasses

import pytest

from exactlab.core.gorenstein import (
    biduality,
    check_biduality_naturality,
    dual_module,
    dual_morphism,
    ext_vanishing,
    find_period,
    free_resolution,
    is_mcm_artinian,
    is_totally_reflexive,
    regular_seed,
    verify_gr_theorems,
)
from exactlab.core.modules import Module, hom_space
from exactlab.core.presets import load_preset
from exactlab.core.results import PASS
from exactlab.errors import ContractViolation, UnsupportedAlgebraError


@pytest.fixture(scope="module")
def rsz_seeds():
    _, (R, k), _ = load_preset("rsz:2,2")
    return R, k


def test_dual_dimensions(x2_preset, rsz_seeds):
    _, (k, R), _ = x2_preset
    assert dual_module(k).dim == 1
    assert dual_module(R).dim == 2
    R3, k3 = rsz_seeds
    assert dual_module(k3).dim == 2
    assert dual_module(R3).dim == 3


def test_dual_morphism_reverses_direction(x2_preset):
    _, (k, R), _ = x2_preset
    (f,) = hom_space(k, R)
    df = dual_morphism(f)
    assert df.src == dual_module(R) and df.dst == dual_module(k)
    assert df.intertwines()


def test_biduality(x2_preset, rsz_seeds):
    _, (k, R), _ = x2_preset
    for M in (k, R):
        ev, iso = biduality(M)
        assert iso and ev.intertwines()
    _, k3 = rsz_seeds
    assert not biduality(k3)[1]
    assert check_biduality_naturality([k, R]).status == PASS


def test_resolution_of_the_simple_is_periodic(x2_preset):
    _, (k, R), _ = x2_preset
    res = free_resolution(k, 4)
    assert not res.terminated
    assert res.ranks == [1, 1, 1, 1]
    assert [s.dim for s in res.syzygies] == [1, 1, 1, 1, 1]
    assert find_period(res, 1 << 16) == (0, 1)


def test_resolution_of_a_free_module_terminates(x2_preset):
    _, (_, R), _ = x2_preset
    res = free_resolution(R, 3)
    assert res.terminated
    assert res.ranks == [1]


def test_ext_vanishing_certified_by_periodicity(x2_preset):
    _, (k, _), _ = x2_preset
    verdict = ext_vanishing(k, 6)
    assert verdict.vanishes
    assert verdict.period == (0, 1)
    assert verdict.certified and verdict.periodicity_consistent


def test_ext_bound_must_be_positive(x2_preset):
    _, (k, _), _ = x2_preset
    with pytest.raises(ContractViolation):
        ext_vanishing(k, 0)


def test_simple_module_over_radical_square_zero_ring(rsz_seeds):
    R, k = rsz_seeds
    verdict = is_totally_reflexive(k, 4)
    assert not verdict.holds
    assert not verdict.biduality_iso
    assert verdict.ext_m.failure == 1
    assert is_totally_reflexive(R, 4).holds


def test_totally_reflexive_over_a_self_injective_ring(x2_preset):
    _, seeds, _ = x2_preset
    for M in seeds:
        verdict = is_totally_reflexive(M, 6)
        assert verdict.holds and verdict.certified


def test_non_commutative_algebras_are_refused(x2_preset):
    algebra, (k, _), _ = x2_preset
    plain = dataclasses.replace(algebra, commutative=False)
    M = Module(plain, k.dim, k.action, "k")
    with pytest.raises(UnsupportedAlgebraError):
        dual_module(M)
    with pytest.raises(UnsupportedAlgebraError):
        free_resolution(M, 2)
    with pytest.raises(UnsupportedAlgebraError):
        is_mcm_artinian(M)


def test_regular_seed(x2_small, rsz_universe):
    assert regular_seed(x2_small, 1 << 16) == 1
    assert regular_seed(rsz_universe, 1 << 16) == 0


def test_gorenstein_theorems_over_truncated_polynomials(x2_small):
    outcome = verify_gr_theorems(x2_small, ext_bound=6)
    assert outcome.members == [0, 1, 2, 3]
    assert outcome.excluded == []
    assert outcome.frobenius.holds
    assert outcome.frobenius.projectives == [0, 1]
    assert all(c.status == PASS for c in outcome.checks)
    assert outcome.correspondence is not None
    assert outcome.correspondence.pairs == [(0, 0), (1, 1)]
    assert all(c.status == PASS for c in outcome.correspondence.checks)
    assert outcome.stable_classes == {(0, 0): [0, 1], (1, 0): [2, 3]}


def test_gorenstein_theorems_over_radical_square_zero(rsz_universe):
    outcome = verify_gr_theorems(rsz_universe, ext_bound=4)
    assert outcome.members == [0, 2]
    assert not outcome.verdicts[1].holds
    assert outcome.verdicts[1].ext_m.failure == 1
    assert all(c.status == PASS for c in outcome.checks)
    assert len(outcome.correspondence.ambient) == 1
