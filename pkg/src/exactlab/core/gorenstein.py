"""
Gorenstein Layer
Duals and biduality, minimal free resolutions with syzygy periodicity,
bounded Ext vanishing against the ring, totally reflexive modules, and the
thick-subcategory theorems for G(R) over artinian local commutative rings.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ContractViolation, UnsupportedAlgebraError
from .algebra import Algebra
from .exact_core import ExactStructure, FrobeniusOutcome, StructureKind, induced_structure, kernel
from .modules import (
    Module,
    Morphism,
    are_isomorphic,
    compose,
    free_cover,
    hom_coordinates,
    hom_space,
    is_isomorphism,
    regular_module,
)
from .quotient_core import QuotientContext
from .results import CheckResult
from .subcat_lattice import Kind, Side, SubcategoryEngine, TheoremOutcome
from .universe import Mult, Universe

logger = logging.getLogger(__name__)


def _require_commutative(algebra: Algebra):
    if not algebra.commutative:
        raise UnsupportedAlgebraError(f"{algebra.name or 'algebra'} is not commutative")


# -------------------------------------------------------------------- duals


@dataclass(frozen=True)
class Dual:
    """M* = Hom(M, R) with the basis its coordinates refer to"""

    module: Module
    basis: tuple[Morphism, ...]


def dual(M: Module) -> Dual:
    _require_commutative(M.algebra)
    return _dual(M)


@lru_cache(maxsize=1024)
def _dual(M: Module) -> Dual:
    F = M.field
    R = regular_module(M.algebra)
    basis = tuple(hom_space(M, R))
    d = len(basis)
    action = []
    for a in M.action:
        # (r phi)(m) = phi(r m)
        columns = [hom_coordinates(M, R, F.matmul(phi.mat, a)) for phi in basis]
        action.append(np.array(columns, dtype=np.int64).T.reshape(d, d))
    label = f"{M.label}*" if M.label else ""
    return Dual(Module(M.algebra, d, tuple(action), label), basis)


def dual_module(M: Module) -> Module:
    """The dual module Hom(M, R)

    Raises:
        UnsupportedAlgebraError: the algebra is not commutative
    """
    return dual(M).module


def dual_morphism(f: Morphism) -> Morphism:
    """f*: N* -> M*, psi -> psi f"""
    F = f.field
    dm, dn = dual(f.src), dual(f.dst)
    R = regular_module(f.src.algebra)
    columns = [hom_coordinates(f.src, R, F.matmul(psi.mat, f.mat)) for psi in dn.basis]
    mat = np.array(columns, dtype=np.int64).T.reshape(dm.module.dim, dn.module.dim)
    return Morphism(dn.module, dm.module, mat)


def biduality(M: Module) -> tuple[Morphism, bool]:
    """Evaluation M -> M**, m -> (phi -> phi(m)), and whether it is an iso"""
    F = M.field
    R = regular_module(M.algebra)
    first = dual(M)
    second = dual(first.module)
    columns = []
    for t in range(M.dim):
        e = F.zeros(M.dim, 1)
        e[t, 0] = 1
        if first.basis:
            evaluation = np.hstack([F.matmul(phi.mat, e) for phi in first.basis])
        else:
            evaluation = F.zeros(R.dim, 0)
        columns.append(hom_coordinates(first.module, R, evaluation))
    mat = np.array(columns, dtype=np.int64).T.reshape(second.module.dim, M.dim)
    ev = Morphism(M, second.module, mat)
    return ev, is_isomorphism(ev)


def check_biduality_naturality(modules: list[Module]) -> CheckResult:
    """ev_N f = f** ev_M for hom basis maps between reflexive modules"""
    result = CheckResult("biduality naturality")
    evaluations = {}
    for M in modules:
        ev, iso = biduality(M)
        if iso:
            evaluations[M] = ev
    for M, ev_m in evaluations.items():
        for N, ev_n in evaluations.items():
            for f in hom_space(M, N):
                result.checked += 1
                double = dual_morphism(dual_morphism(f))
                if not (compose(ev_n, f).mat == compose(double, ev_m).mat).all():
                    result.fail({"objects": [M.label, N.label]}, "biduality is not natural")
    return result


# ------------------------------------------------------------- resolutions


@dataclass
class FreeResolution:
    """... -> F_1 -> F_0 -> M with differentials[0] the cover F_0 -> M"""

    module: Module
    differentials: list[Morphism]
    syzygies: list[Module]
    period: tuple[int, int] | None = None

    @property
    def ranks(self) -> list[int]:
        R = self.module.algebra.dim
        return [d.src.dim // R for d in self.differentials]

    @property
    def terminated(self) -> bool:
        return self.syzygies[-1].dim == 0

    def free(self, d: int) -> Module | None:
        return self.differentials[d].src if d < len(self.differentials) else None


def free_resolution(M: Module, length: int) -> FreeResolution:
    """Minimal free resolution with ``length`` free terms, stopping at a zero syzygy"""
    _require_commutative(M.algebra)
    syzygies = [M]
    differentials: list[Morphism] = []
    inclusion = None
    while len(differentials) < length and syzygies[-1].dim > 0:
        cover = free_cover(syzygies[-1])
        differentials.append(cover if inclusion is None else compose(inclusion, cover))
        inclusion = kernel(cover)
        syzygies.append(inclusion.src)
    return FreeResolution(M, differentials, syzygies)


def extend_resolution(res: FreeResolution, length: int) -> FreeResolution:
    if len(res.differentials) >= length or res.terminated:
        return res
    longer = free_resolution(res.module, length)
    longer.period = res.period
    return longer


def find_period(res: FreeResolution, cap: int) -> tuple[int, int] | None:
    """First (i, j), i < j, with syzygies i and j isomorphic"""
    for j in range(1, len(res.syzygies)):
        for i in range(j):
            A, B = res.syzygies[i], res.syzygies[j]
            if A.dim != B.dim or A.dim == 0:
                continue
            if are_isomorphic(A, B, cap) is not None:
                return i, j
    return None


def _dual_rank(d: Morphism) -> int:
    """Rank of Hom(d, R): Hom(target, R) -> Hom(source, R)"""
    F = d.field
    R = regular_module(d.src.algebra)
    images = [F.matmul(phi.mat, d.mat).reshape(-1) for phi in hom_space(d.dst, R)]
    if not images:
        return 0
    return F.rank(np.array(images))


def ext_dims(res: FreeResolution, degrees: int) -> dict[int, int]:
    """dim Ext^d(M, R) for d = 1..degrees from the dualized resolution"""
    R = regular_module(res.module.algebra)
    dims = {}
    for d in range(1, degrees + 1):
        Fd = res.free(d)
        if Fd is None:
            dims[d] = 0
            continue
        outgoing = _dual_rank(res.differentials[d + 1]) if d + 1 < len(res.differentials) else 0
        incoming = _dual_rank(res.differentials[d])
        dims[d] = len(hom_space(Fd, R)) - outgoing - incoming
    return dims


@dataclass
class ExtVerdict:
    """Bounded vanishing of Ext^{>0}(M, R)"""

    dims: dict[int, int]
    vanishes_through: int
    failure: int | None
    period: tuple[int, int] | None
    certified: bool
    periodicity_consistent: bool = True

    @property
    def vanishes(self) -> bool:
        return self.failure is None


def ext_vanishing(M: Module, bound: int, cap: int = 1 << 16) -> ExtVerdict:
    """Ext^d(M, R) for d <= bound, certified for all d by termination or periodicity

    A period (i, j) makes Ext^d for d > i repeat with period j - i, so
    vanishing through degree j settles every degree; two further degrees are
    computed as a cross-check.
    """
    if bound < 1:
        raise ContractViolation("Ext bound must be at least 1")
    res = free_resolution(M, bound + 2)
    period = None if res.terminated else find_period(res, cap)
    degrees = bound
    if period is not None:
        degrees = max(bound, period[1] + 2)
        res = extend_resolution(res, degrees + 2)
        res.period = period
    dims = ext_dims(res, degrees)
    failure = next((d for d in sorted(dims) if dims[d]), None)
    vanishes_through = degrees if failure is None else failure - 1
    consistent = True
    if period is not None:
        i, j = period
        step = j - i
        consistent = all(dims[d] == dims[d + step] for d in dims if d > i and d + step in dims)
    certified = failure is None and (
        res.terminated or (period is not None and consistent and vanishes_through >= period[1])
    )
    return ExtVerdict(dims, vanishes_through, failure, period, certified, consistent)


@dataclass
class TotalReflexivityVerdict:
    biduality_iso: bool
    ext_m: ExtVerdict
    ext_mstar: ExtVerdict

    @property
    def certified(self) -> bool:
        return self.ext_m.certified and self.ext_mstar.certified

    @property
    def holds(self) -> bool:
        return self.biduality_iso and self.ext_m.vanishes and self.ext_mstar.vanishes


def is_totally_reflexive(M: Module, bound: int, cap: int = 1 << 16) -> TotalReflexivityVerdict:
    _, iso = biduality(M)
    return TotalReflexivityVerdict(
        biduality_iso=iso,
        ext_m=ext_vanishing(M, bound, cap),
        ext_mstar=ext_vanishing(dual_module(M), bound, cap),
    )


def is_mcm_artinian(M: Module, cap: int = 1 << 16) -> bool:
    """Every module over an artinian local ring is maximal Cohen-Macaulay

    Depth and Krull dimension are both zero there.

    Raises:
        UnsupportedAlgebraError: non-commutative or non-local algebra
    """
    algebra = M.algebra
    _require_commutative(algebra)
    if not algebra.is_local(cap):
        raise UnsupportedAlgebraError(f"{algebra.name or 'algebra'} is not local")
    return True


# ------------------------------------------------------------------ theorems


@dataclass
class GorensteinOutcome:
    verdicts: dict[int, TotalReflexivityVerdict]
    members: list[int]
    excluded: list[str] = field(default_factory=list)
    frobenius: FrobeniusOutcome | None = None
    checks: list[CheckResult] = field(default_factory=list)
    correspondence: TheoremOutcome | None = None
    stable_classes: dict[Mult, list[int]] = field(default_factory=dict)


def regular_seed(universe: Universe, cap: int) -> int:
    """Seed index of the regular module"""
    R = regular_module(universe.algebra)
    for s, seed in enumerate(universe.seeds):
        if seed.dim == R.dim and are_isomorphic(seed, R, cap) is not None:
            return s
    raise ContractViolation("the regular module is not among the seeds")


def verify_gr_theorems(
    universe: Universe,
    ext_bound: int,
    cap: int = 1 << 16,
    cover_limit: int = 8,
    lattice_limit: int = 20000,
) -> GorensteinOutcome:
    """G(R) inside the universe, its Frobenius structure, and its thick subcategories

    (a) G(R) = certified totally reflexive objects; (b) G(R) with the induced
    abelian structure is Frobenius with projective-injectives add R; (c) a
    thick subcategory of G(R) contains R iff it contains add R; (d) the thick
    correspondence between G(R) and its stable category.
    """
    U = universe
    for oid in U.ids():
        is_mcm_artinian(U.obj(oid).module, cap)
    r_seed = regular_seed(U, cap)

    verdicts: dict[int, TotalReflexivityVerdict] = {}
    members, excluded = [], []
    for oid in U.ids():
        verdict = is_totally_reflexive(U.obj(oid).module, ext_bound, cap)
        verdicts[oid] = verdict
        if verdict.holds and verdict.certified:
            members.append(oid)
        elif verdict.holds:
            excluded.append(f"{U.label(oid)}: Ext vanishing not certified within degree {ext_bound}")
    outcome = GorensteinOutcome(verdicts, members, excluded)
    for note in excluded:
        logger.warning(f"Excluded from G(R): {note}")
    logger.info(f"G(R) within the universe: {[U.label(m) for m in members]}")

    abelian = ExactStructure(U, StructureKind.ABELIAN, cap=cap, cover_limit=cover_limit)
    structure = induced_structure(abelian, members)
    frobenius = structure.is_frobenius()
    outcome.frobenius = frobenius
    add_r = [m for m in members if U.support(m) <= {r_seed}]

    frob_check = CheckResult("G(R) Frobenius with projective-injectives add R")
    frob_check.checked = 1
    if not frobenius.holds or sorted(frobenius.projectives) != add_r:
        frob_check.fail(
            {
                "projectives": [U.label(p) for p in frobenius.projectives],
                "injectives": [U.label(i) for i in frobenius.injectives],
            },
            "G(R) is not Frobenius with projective-injectives add R",
        )
    outcome.checks.append(frob_check)

    ctx = QuotientContext(structure, add_r, cap=cap, label="add R")
    engine = SubcategoryEngine(ctx, limit=lattice_limit)
    plain = SubcategoryEngine(QuotientContext(structure, [U.zero_id], cap=cap), limit=lattice_limit)
    thick = plain.enumerate_closed(Kind.THICK, Side.AMBIENT)
    r_id = U.seed_ids[r_seed]
    contains_r = CheckResult("contains R iff contains add R")
    for D in thick.elements:
        contains_r.checked += 1
        if (r_id in D.members) != set(add_r).issubset(D.members):
            contains_r.fail({"subcategory": D.labels(U)}, "R and add R disagree")
    outcome.checks.append(contains_r)

    if frob_check.passed:
        outcome.correspondence = engine.verify_correspondence(Kind.THICK)
        outcome.stable_classes = ctx.stable_classes()
    return outcome
