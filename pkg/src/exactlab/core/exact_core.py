"""
Exact Structures
Kernel-cokernel pairs, pullbacks and pushouts, conflation enumeration,
the exact-category axioms, relative projectives/injectives and Frobenius
detection on a bounded universe.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product

import numpy as np

from ..errors import (
    ContractViolation,
    InconclusiveError,
    NotExtensionClosedError,
    OutOfUniverseError,
)
from .gf_linalg import Mat
from .modules import (
    Biproduct,
    Module,
    Morphism,
    compose,
    direct_sum,
    direct_sum_many,
    free_cover,
    hom_dim,
    hom_elements,
    hom_rows,
    hom_space,
    identity,
    inverse,
    quotient,
    submodule,
    zero_module,
    zero_morphism,
)
from .results import FAIL, CheckResult, matrix_payload
from .universe import Mult, Universe

logger = logging.getLogger(__name__)

# Ext groups with more classes are enumerated one orbit at a time
_ORBITS_FROM = 64


class StructureKind(str, Enum):
    SPLIT = "split"
    ABELIAN = "abelian"
    INDUCED = "induced"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class Conflation:
    """Candidate short exact sequence X -f-> Y -g-> Z"""

    f: Morphism
    g: Morphism

    def __post_init__(self):
        if self.f.dst != self.g.src:
            raise ContractViolation("conflation maps are not composable")

    @property
    def x(self) -> Module:
        return self.f.src

    @property
    def y(self) -> Module:
        return self.f.dst

    @property
    def z(self) -> Module:
        return self.g.dst

    def payload(self, labels: tuple[str, str, str] | None = None) -> dict:
        if labels is None:
            labels = (self.x.label, self.y.label, self.z.label)
        return {
            "objects": list(labels),
            "matrices": {"f": matrix_payload(self.f.mat), "g": matrix_payload(self.g.mat)},
        }


# ------------------------------------------------------- kernels, cokernels


def kernel(g: Morphism) -> Morphism:
    """Inclusion of the kernel submodule"""
    F = g.field
    _, inclusion = submodule(g.src, F.nullspace(g.mat), label=f"ker({g.src.label})")
    return inclusion


def cokernel(f: Morphism) -> Morphism:
    """Projection onto the cokernel module"""
    return quotient(f.dst, f.mat.T, label=f"coker({f.dst.label})").projection


def is_kernel_cokernel_pair(f: Morphism, g: Morphism) -> bool:
    if f.dst != g.src:
        raise ContractViolation("is_kernel_cokernel_pair needs f.dst = g.src")
    F = f.field
    if F.matmul(g.mat, f.mat).any():
        return False
    rank_f, rank_g = F.rank(f.mat), F.rank(g.mat)
    return rank_f == f.src.dim and rank_g == g.dst.dim and rank_f + rank_g == f.dst.dim


def split_conflation(A: Module, B: Module) -> Conflation:
    bp = direct_sum(A, B)
    return Conflation(bp.inclusions[0], bp.projections[1])


def zero_conflation(algebra) -> Conflation:
    Z = zero_module(algebra)
    return Conflation(identity(Z), identity(Z))


@dataclass(frozen=True)
class Pullback:
    """B' = {(b, c') : g b = h c'} with g': B' -> C' and h': B' -> B"""

    module: Module
    g_prime: Morphism
    h_prime: Morphism
    inclusion: Morphism
    biproduct: Biproduct

    def factor(self, u: Morphism, v: Morphism) -> Morphism:
        """The unique map T -> B' through which u: T -> B and v: T -> C' factor"""
        F = u.field
        stacked = np.vstack([u.mat, v.mat])
        return Morphism(u.src, self.module, F.coords(self.inclusion.mat, stacked))


@dataclass(frozen=True)
class Pushout:
    """B' = (B + A') / im(f, -h) with f': A' -> B' and h': B -> B'"""

    module: Module
    f_prime: Morphism
    h_prime: Morphism
    projection: Morphism
    section: Mat
    biproduct: Biproduct

    def factor(self, u: Morphism, v: Morphism) -> Morphism:
        """The unique map B' -> T agreeing with u: B -> T and v: A' -> T"""
        F = u.field
        joined = np.hstack([u.mat, v.mat])
        return Morphism(self.module, u.dst, F.matmul(joined, self.section))


def pullback(g: Morphism, h: Morphism) -> Pullback:
    if g.dst != h.dst:
        raise ContractViolation("pullback needs g and h with a common target")
    F = g.field
    bp = direct_sum(g.src, h.src)
    difference = Morphism(bp.module, g.dst, np.hstack([g.mat, F.neg(h.mat)]))
    inclusion = kernel(difference)
    B = inclusion.src
    return Pullback(
        module=B,
        g_prime=compose(bp.projections[1], inclusion),
        h_prime=compose(bp.projections[0], inclusion),
        inclusion=inclusion,
        biproduct=bp,
    )


def pushout(f: Morphism, h: Morphism) -> Pushout:
    if f.src != h.src:
        raise ContractViolation("pushout needs f and h with a common source")
    F = f.field
    bp = direct_sum(f.dst, h.dst)
    image = np.vstack([f.mat, F.neg(h.mat)])
    q = quotient(bp.module, image.T)
    return Pushout(
        module=q.module,
        f_prime=compose(q.projection, bp.inclusions[1]),
        h_prime=compose(q.projection, bp.inclusions[0]),
        projection=q.projection,
        section=q.section,
        biproduct=bp,
    )


# --------------------------------------------------------------- extensions


@dataclass(frozen=True)
class Presentation:
    """Free cover P -> Z and the inclusion of its kernel K -> P"""

    cover: Morphism
    syzygy: Morphism


def presentation(Z: Module) -> Presentation:
    eps = free_cover(Z)
    return Presentation(eps, kernel(eps))


def ext1_representatives(Z: Module, X: Module) -> tuple[Presentation, list[Mat]]:
    """Ext^1(Z, X) as Hom(K, X) modulo maps extending over the free cover

    Returns:
        (presentation of Z, representatives of a basis of Ext^1 as K -> X matrices)
    """
    F = Z.field
    pres = presentation(Z)
    K, P = pres.syzygy.src, pres.cover.src
    width = K.dim * X.dim
    restricted = [F.matmul(psi.mat, pres.syzygy.mat).reshape(-1) for psi in hom_space(P, X)]
    if restricted:
        image = F.row_basis(np.array(restricted), width)
    else:
        image = F.zeros(0, width)
    reps = F.complement(image, hom_rows(K, X))
    return pres, [row.reshape(X.dim, K.dim) for row in reps]


def ext1_dim(Z: Module, X: Module) -> int:
    return len(ext1_representatives(Z, X)[1])


def ext1_action(
    pres: Presentation, X: Module, reps: list[Mat], on_x: list[Mat], on_z: list[Mat]
) -> list[Mat]:
    """Automorphisms of X and of Z acting on Ext^1(Z, X), in the coordinates of reps

    alpha on X sends phi to alpha phi; gamma on Z sends it to phi L with L
    the restriction to K of a lift of gamma over the free cover. Column i of
    each result is the image of reps[i]. Either action keeps the middle term.
    """
    F = X.field
    P = pres.cover.src
    restricted = [F.matmul(psi.mat, pres.syzygy.mat).reshape(-1) for psi in hom_space(P, X)]
    basis = np.array([r.reshape(-1) for r in reps] + restricted).T

    def coordinates(images: list[Mat]) -> Mat:
        solved = F.solve_many(basis, np.array([m.reshape(-1) for m in images]).T)
        if solved is None:
            raise ContractViolation("automorphism does not act on the cocycles")
        return solved[: len(reps)]

    result = [coordinates([F.matmul(alpha, r) for r in reps]) for alpha in on_x]
    if not on_z:
        return result
    lifts = hom_space(P, P)
    columns = np.array([F.matmul(pres.cover.mat, h.mat).reshape(-1) for h in lifts]).T
    for gamma in on_z:
        solved = F.solve_many(columns, F.matmul(gamma, pres.cover.mat).reshape(-1, 1))
        if solved is None:
            raise ContractViolation("automorphism does not lift over the free cover")
        lift = F.combine(solved[:, 0], [h.mat for h in lifts])
        on_k = F.solve_many(pres.syzygy.mat, F.matmul(lift, pres.syzygy.mat))
        result.append(coordinates([F.matmul(r, on_k) for r in reps]))
    return result


def extension_from_class(pres: Presentation, X: Module, phi: Mat) -> Conflation:
    """Conflation X >-> E ->> Z obtained by pushing the presentation along phi"""
    F = X.field
    Z = pres.cover.dst
    po = pushout(pres.syzygy, Morphism(pres.syzygy.src, X, phi))
    onto = np.hstack([pres.cover.mat, F.zeros(Z.dim, X.dim)])
    g = Morphism(po.module, Z, F.matmul(onto, po.section))
    return Conflation(po.f_prime, g)


@dataclass
class ExtensionMiddles:
    """Middle terms of the extensions of one (active) end pair"""

    middles: dict[Mult, Conflation]
    classes: int
    inconclusive: bool


@dataclass
class ConflationCell:
    """Conflations X >-> Y ->> Z with fixed ends, one witness per middle"""

    x: int
    z: int
    middles: dict[int, Conflation] = field(default_factory=dict)
    escaped: dict[Mult, Conflation] = field(default_factory=dict)
    classes: int = 0
    inconclusive: bool = False

    def witnesses(self) -> list[Conflation]:
        return list(self.middles.values()) + list(self.escaped.values())


# -------------------------------------------------------- exact structures


@dataclass
class EnoughReport:
    """Witnesses for enough relative projectives (or injectives)"""

    side: str
    holds: bool
    witnesses: dict[int, Mult]
    beyond_bound: list[int]
    failures: list[int]
    inconclusive: bool = False


@dataclass
class FrobeniusOutcome:
    holds: bool
    projectives: list[int]
    injectives: list[int]
    enough_projectives: EnoughReport
    enough_injectives: EnoughReport


class ExactStructure:
    """Exact structure on a universe, given by a membership predicate

    Args:
        universe: bounded object universe
        kind: split, abelian, induced or explicit
        members: object ids of the subcategory (induced kind)
        ambient: structure the induced kind restricts
        listed: conflations between universe modules (explicit kind)
        cap: largest hom-space or Ext group enumerated exhaustively
        cover_limit: largest multiplicity tried for cover and envelope witnesses
        orbit_limit: largest Ext group split into orbits before enumeration
    """

    def __init__(
        self,
        universe: Universe,
        kind: StructureKind | str,
        *,
        members=None,
        ambient: "ExactStructure | None" = None,
        listed: list[Conflation] | None = None,
        cap: int = 1 << 16,
        cover_limit: int = 8,
        orbit_limit: int = 1 << 20,
        label: str | None = None,
    ):
        self.universe = universe
        self.kind = StructureKind(kind)
        self.members = frozenset(members) if members is not None else None
        self.ambient = ambient
        self.listed = tuple(listed or ())
        self.cap = cap
        self.cover_limit = cover_limit
        self.orbit_limit = orbit_limit
        self.label = label or self.kind.value
        self._cells: dict[tuple[int, int], ConflationCell] = {}
        self._extensions: dict[tuple[Mult, Mult], ExtensionMiddles] = {}
        self._seed_ext: dict[tuple[int, int], int] = {}
        self._witness_cache: dict[tuple[int, str], tuple[Mult, Morphism] | None] = {}

        if self.kind == StructureKind.INDUCED and (self.members is None or ambient is None):
            raise ContractViolation("induced structure needs members and an ambient structure")
        self._listed_ids: list[tuple[int | None, int | None, int | None]] = []
        for c in self.listed:
            self._listed_ids.append(tuple(universe.try_locate(m)[0] for m in (c.x, c.y, c.z)))

    def __repr__(self) -> str:
        return f"ExactStructure({self.label})"

    @property
    def locates(self) -> bool:
        """Membership depends on where the terms sit in the universe"""
        return self.kind in (StructureKind.INDUCED, StructureKind.EXPLICIT)

    # ------------------------------------------------------------ scope

    def scope(self) -> list[int]:
        if self.kind == StructureKind.INDUCED:
            return sorted(self.members)
        return self.universe.ids()

    def in_scope(self, oid: int | None) -> bool:
        if oid is None:
            return False
        return self.members is None or oid in self.members

    @cached_property
    def test_objects(self) -> list[int]:
        """Zero, the seeds in scope, and members not built from such seeds"""
        U = self.universe
        scope = self.scope()
        seeds = [oid for oid in scope if U.seed_index(oid) is not None]
        seed_set = {U.seed_index(oid) for oid in seeds}
        extra = [
            oid
            for oid in scope
            if oid != U.zero_id and U.seed_index(oid) is None and not U.support(oid) <= seed_set
        ]
        result = set(seeds) | set(extra)
        if U.zero_id in scope:
            result.add(U.zero_id)
        return sorted(result)

    # ------------------------------------------------------------ membership

    def contains(self, c: Conflation) -> bool:
        if not is_kernel_cokernel_pair(c.f, c.g):
            return False
        if self.kind == StructureKind.ABELIAN:
            return True
        if self.kind == StructureKind.SPLIT:
            return _splits(c)
        if self.kind == StructureKind.INDUCED:
            if not self.ambient.contains(c):
                return False
            for module in (c.x, c.y, c.z):
                try:
                    oid, _ = self.universe.try_locate(module)
                except OutOfUniverseError:
                    return False
                if not self.in_scope(oid):
                    return False
            return True
        return any(
            sequences_isomorphic(c, listed, self.cap) for listed in self.listed
        )

    def is_admissible_mono(self, f: Morphism) -> bool:
        return self.contains(Conflation(f, cokernel(f)))

    def is_admissible_epi(self, g: Morphism) -> bool:
        return self.contains(Conflation(kernel(g), g))

    # ------------------------------------------------------------ enumeration

    def cell(self, x: int, z: int) -> ConflationCell:
        """All middles Y of conflations X >-> Y ->> Z, deduplicated by iso-class"""
        key = (x, z)
        if key not in self._cells:
            if self.kind == StructureKind.SPLIT:
                cell = self._split_cell(x, z)
            elif self.kind == StructureKind.ABELIAN:
                cell = self._abelian_cell(x, z)
            elif self.kind == StructureKind.INDUCED:
                cell = self._induced_cell(x, z)
            else:
                cell = self._explicit_cell(x, z)
            if cell.inconclusive:
                logger.warning(
                    f"Conflation cell ({self.universe.label(x)}, {self.universe.label(z)}) "
                    f"is inconclusive at cap {self.cap}"
                )
            self._cells[key] = cell
        return self._cells[key]

    def _split_cell(self, x: int, z: int) -> ConflationCell:
        U = self.universe
        c = split_conflation(U.obj(x).module, U.obj(z).module)
        total = tuple(a + b for a, b in zip(U.mult(x), U.mult(z), strict=True))
        cell = ConflationCell(x, z, classes=1)
        oid = U.id_of(total)
        if oid is None:
            cell.escaped[total] = c
        else:
            cell.middles[oid] = c
        return cell

    def seed_ext1(self, i: int, j: int) -> int:
        """dim Ext^1(W_i, W_j) between seeds"""
        key = (i, j)
        if key not in self._seed_ext:
            seeds = self.universe.seeds
            self._seed_ext[key] = ext1_dim(seeds[i], seeds[j])
        return self._seed_ext[key]

    def _abelian_cell(self, x: int, z: int) -> ConflationCell:
        U = self.universe
        mx, mz = U.mult(x), U.mult(z)
        n = len(U.seeds)
        # seeds without extensions against the other end only ever split off
        active_z = {
            i for i in range(n) if mz[i] and any(mx[j] and self.seed_ext1(i, j) for j in range(n))
        }
        active_x = {
            j for j in range(n) if mx[j] and any(mz[i] and self.seed_ext1(i, j) for i in range(n))
        }
        ax, ix, perm_x = U.regroup(mx, active_x)
        az, iz, perm_z = U.regroup(mz, active_z)
        found = self._extension_middles(ax, az)
        cell = ConflationCell(x, z, classes=found.classes, inconclusive=found.inconclusive)
        for ym, c in found.middles.items():
            total = tuple(a + b + d for a, b, d in zip(ym, ix, iz, strict=True))
            witness = self._embed(c, ix, iz, perm_x, perm_z, x, z)
            oid = U.id_of(total)
            if oid is None:
                cell.escaped[total] = witness
            else:
                cell.middles[oid] = witness
        cell.middles = dict(sorted(cell.middles.items()))
        return cell

    def _extension_middles(self, ax: Mult, az: Mult) -> ExtensionMiddles:
        key = (ax, az)
        if key in self._extensions:
            return self._extensions[key]
        U = self.universe
        F = U.field
        A, C = U.module_for(ax), U.module_for(az)
        pres, reps = ext1_representatives(C, A)
        count = F.count(len(reps))
        zero = F.zeros(A.dim, pres.syzygy.src.dim)
        orbits = None
        if reps and _ORBITS_FROM < count <= self.orbit_limit:
            generators = ext1_action(
                pres, A, reps, U.block_automorphisms(ax), U.block_automorphisms(az)
            )
            if generators:
                orbits = F.orbit_representatives(generators, len(reps))
                logger.debug(f"Ext^1({C.label}, {A.label}): {len(orbits)} orbits of {count} classes")
        inconclusive = (len(orbits) if orbits is not None else count) > self.cap
        if inconclusive:
            classes = [zero, *reps]
        elif orbits is not None:
            classes = [F.combine(row, reps) for row in orbits]
        else:
            classes = list(F.span_elements(reps, shape=zero.shape))
        middles: dict[Mult, Conflation] = {}
        for phi in classes:
            c = extension_from_class(pres, A, phi)
            try:
                mult = U.classify(c.y)
            except OutOfUniverseError:
                logger.debug(f"Extension of {C.label} by {A.label} has a non-seed summand")
                inconclusive = True
                continue
            middles.setdefault(mult, c)
        result = ExtensionMiddles(dict(sorted(middles.items())), count, inconclusive)
        self._extensions[key] = result
        return result

    def _embed(self, c: Conflation, ix: Mult, iz: Mult, perm_x, perm_z, x: int, z: int):
        """Extend a conflation of active parts by the inert summands of X and Z"""
        U = self.universe
        F = U.field
        Xi, Zi = U.module_for(ix), U.module_for(iz)
        Y = direct_sum_many([c.y, Xi, Zi]).module
        a, yd, xi = c.x.dim, c.y.dim, Xi.dim

        fb = F.zeros(Y.dim, a + xi)
        fb[:yd, :a] = c.f.mat
        fb[yd : yd + xi, a:] = F.eye(xi)
        f = Morphism(U.obj(x).module, Y, F.matmul(fb, perm_x.mat))

        gb = F.zeros(c.z.dim + Zi.dim, Y.dim)
        gb[: c.z.dim, :yd] = c.g.mat
        gb[c.z.dim :, yd + xi :] = F.eye(Zi.dim)
        g = Morphism(Y, U.obj(z).module, F.matmul(perm_z.mat.T, gb))
        return Conflation(f, g)

    def _induced_cell(self, x: int, z: int) -> ConflationCell:
        if x not in self.members or z not in self.members:
            return ConflationCell(x, z)
        ambient = self.ambient.cell(x, z)
        cell = ConflationCell(
            x, z, classes=ambient.classes, inconclusive=ambient.inconclusive
        )
        cell.middles = {y: c for y, c in ambient.middles.items() if y in self.members}
        return cell

    def _explicit_cell(self, x: int, z: int) -> ConflationCell:
        cell = ConflationCell(x, z)
        for c, (lx, ly, lz) in zip(self.listed, self._listed_ids, strict=True):
            if lx == x and lz == z and ly is not None:
                cell.middles.setdefault(ly, c)
                cell.classes += 1
        cell.middles = dict(sorted(cell.middles.items()))
        return cell

    def triples(self) -> list[tuple[int, int, int]]:
        """(x, y, z) for every cell over the scope, in canonical order"""
        result = []
        for x in self.scope():
            for z in self.scope():
                for y in self.cell(x, z).middles:
                    if self.in_scope(y):
                        result.append((x, y, z))
        return result

    def listed_triples(self) -> list[tuple[int, int, int, Conflation]]:
        """(x, y, z, c) for every listed conflation whose terms lie in the universe"""
        return [
            (lx, ly, lz, c)
            for c, (lx, ly, lz) in zip(self.listed, self._listed_ids, strict=True)
            if None not in (lx, ly, lz)
        ]

    def inconclusive_cells(self) -> list[tuple[int, int]]:
        return sorted(key for key, cell in self._cells.items() if cell.inconclusive)

    # ------------------------------------------------ relative (co)projectives

    def is_s_injective(self, oid: int) -> bool:
        """Every conflation I >-> Y ->> Z with Z a test object restricts onto End(I)"""
        I = self.universe.obj(oid).module
        if I.dim == 0:
            return True
        for z in self.test_objects:
            for c in self.cell(oid, z).witnesses():
                if not _restriction_is_onto(c.f, I):
                    return False
        return True

    def is_s_projective(self, oid: int) -> bool:
        P = self.universe.obj(oid).module
        if P.dim == 0:
            return True
        for x in self.test_objects:
            for c in self.cell(x, oid).witnesses():
                if not _lifting_is_onto(c.g, P):
                    return False
        return True

    def _classify_side(self, side: str) -> list[int]:
        U = self.universe
        test = {oid: None for oid in self.test_objects}
        check = self.is_s_projective if side == "proj" else self.is_s_injective
        for oid in test:
            test[oid] = check(oid)
        good_seeds = {U.seed_index(oid) for oid, ok in test.items() if ok and U.seed_index(oid) is not None}
        seed_set = {U.seed_index(oid) for oid in test if U.seed_index(oid) is not None}
        result = []
        for oid in self.scope():
            if oid in test:
                ok = test[oid]
            elif U.support(oid) <= seed_set:
                ok = U.support(oid) <= good_seeds
            else:
                ok = check(oid)
            if ok:
                result.append(oid)
        return result

    @cached_property
    def projective_ids(self) -> list[int]:
        return self._classify_side("proj")

    @cached_property
    def injective_ids(self) -> list[int]:
        return self._classify_side("inj")

    def seed_witness(self, oid: int, side: str) -> tuple[Mult, Morphism] | None:
        """Admissible epi from (or mono into) a sum of relative projectives (injectives)

        Candidates are tried by total dimension then multiplicity vector; the
        witness may exceed the multiplicity bound.
        """
        key = (oid, side)
        if key in self._witness_cache:
            return self._witness_cache[key]
        U = self.universe
        W = U.obj(oid).module
        good = self.projective_ids if side == "proj" else self.injective_ids
        if oid in good:
            result = (U.mult(oid), identity(W))
            self._witness_cache[key] = result
            return result

        good_seeds = sorted({U.seed_index(g) for g in good if U.seed_index(g) is not None})
        result = None
        if good_seeds:
            largest = max(U.seeds[s].dim for s in good_seeds)
            candidates = []
            for counts in product(range(self.cover_limit + 1), repeat=len(good_seeds)):
                if not any(counts):
                    continue
                mult = [0] * len(U.seeds)
                for s, m in zip(good_seeds, counts, strict=True):
                    mult[s] = m
                dim = sum(U.seeds[s].dim * m for s, m in enumerate(mult))
                if W.dim <= dim <= W.dim * largest:
                    candidates.append((dim, tuple(mult)))
            for _, mult in sorted(candidates):
                P = U.module_for(mult)
                try:
                    if side == "proj":
                        maps = hom_elements(P, W, self.cap, f"cover of {W.label}")
                        test = self.is_admissible_epi
                    else:
                        maps = hom_elements(W, P, self.cap, f"envelope of {W.label}")
                        test = self.is_admissible_mono
                    for h in maps:
                        if h.rank() == W.dim and test(h):
                            result = (mult, h)
                            break
                except InconclusiveError as e:
                    logger.warning(f"Skipping witness candidate {U.label_for(mult)}: {e}")
                if result:
                    break
        self._witness_cache[key] = result
        return result

    def has_enough(self, side: str) -> EnoughReport:
        """Enough relative projectives (side='proj') or injectives (side='inj')"""
        if side not in ("proj", "inj"):
            raise ContractViolation(f"side must be proj or inj, got {side}")
        U = self.universe
        report = EnoughReport(side=side, holds=True, witnesses={}, beyond_bound=[], failures=[])
        seed_witness: dict[int, Mult | None] = {}
        for t in self.test_objects:
            if t == U.zero_id:
                continue
            found = self.seed_witness(t, side)
            seed_witness[t] = found[0] if found else None

        zero = tuple(0 for _ in U.seeds)
        by_seed = {U.seed_index(t): m for t, m in seed_witness.items() if U.seed_index(t) is not None}
        for oid in self.scope():
            if oid == U.zero_id:
                report.witnesses[oid] = zero
                continue
            if oid in seed_witness:
                mult = seed_witness[oid]
            elif U.support(oid) <= set(by_seed):
                if any(by_seed[s] is None for s in U.support(oid)):
                    mult = None
                else:
                    mult = tuple(
                        sum(m * by_seed[s][k] for s, m in enumerate(U.mult(oid)) if m)
                        for k in range(len(U.seeds))
                    )
            else:
                found = self.seed_witness(oid, side)
                mult = found[0] if found else None
            if mult is None:
                report.failures.append(oid)
                report.holds = False
                continue
            report.witnesses[oid] = mult
            if U.id_of(mult) is None:
                report.beyond_bound.append(oid)
        if report.failures:
            logger.info(
                f"Not enough {side} objects for {[U.label(o) for o in report.failures]}"
            )
        return report

    def is_frobenius(self) -> FrobeniusOutcome:
        proj = self.has_enough("proj")
        inj = self.has_enough("inj")
        holds = proj.holds and inj.holds and self.projective_ids == self.injective_ids
        return FrobeniusOutcome(
            holds=holds,
            projectives=list(self.projective_ids),
            injectives=list(self.injective_ids),
            enough_projectives=proj,
            enough_injectives=inj,
        )


def enumerate_conflations(x: int, z: int, structure: ExactStructure) -> ConflationCell:
    return structure.cell(x, z)


def _splits(c: Conflation) -> bool:
    F = c.f.field
    if c.x.dim == 0:
        return True
    retractions = hom_space(c.y, c.x)
    if not retractions:
        return False
    columns = np.array([F.matmul(r.mat, c.f.mat).reshape(-1) for r in retractions]).T
    return F.solve(columns, F.eye(c.x.dim).reshape(-1)) is not None


def _restriction_is_onto(f: Morphism, I: Module) -> bool:
    """Hom(Y, I) -> Hom(X, I), psi -> psi f, is surjective"""
    F = f.field
    target = hom_dim(f.src, I)
    if target == 0:
        return True
    images = [F.matmul(psi.mat, f.mat).reshape(-1) for psi in hom_space(f.dst, I)]
    return bool(images) and F.rank(np.array(images)) == target


def _lifting_is_onto(g: Morphism, P: Module) -> bool:
    """Hom(P, Y) -> Hom(P, Z), psi -> g psi, is surjective"""
    F = g.field
    target = hom_dim(P, g.dst)
    if target == 0:
        return True
    images = [F.matmul(g.mat, psi.mat).reshape(-1) for psi in hom_space(P, g.src)]
    return bool(images) and F.rank(np.array(images)) == target


def sequences_isomorphic(c: Conflation, other: Conflation, cap: int) -> bool:
    """Whether (alpha, beta, gamma) isos carry c onto other"""
    F = c.f.field
    if (c.x.dim, c.y.dim, c.z.dim) != (other.x.dim, other.y.dim, other.z.dim):
        return False
    betas = hom_space(c.y, other.y)
    for alpha in hom_elements(c.x, other.x, cap, "explicit alpha"):
        if not F.is_invertible(alpha.mat):
            continue
        # beta f = f' alpha
        if betas:
            columns = np.array([F.matmul(b.mat, c.f.mat).reshape(-1) for b in betas]).T
        else:
            columns = F.zeros(other.y.dim * c.x.dim, 0)
        rhs = F.matmul(other.f.mat, alpha.mat).reshape(-1)
        solved = F.solve(columns, rhs)
        if solved is None:
            continue
        x0, null = solved
        if F.count(null.shape[0]) > cap:
            raise InconclusiveError("sequence isomorphism search too large", cap, "explicit")
        offsets = list(F.span_elements(list(null), shape=x0.shape))
        for offset in offsets:
            coeffs = F.add(x0, offset)
            beta = F.combine(coeffs, [b.mat for b in betas]) if betas else F.zeros(other.y.dim, c.y.dim)
            if not F.is_invertible(beta):
                continue
            # gamma g = g' beta
            target = F.matmul(other.g.mat, beta)
            gamma = F.solve_many(c.g.mat.T, target.T)
            if gamma is not None and F.is_invertible(gamma.T):
                return True
    return False


# ----------------------------------------------------------------- checks


def _flag_escape(result: CheckResult, structure: ExactStructure, modules) -> bool:
    """Flag constructions leaving the universe; True when one escaped"""
    U = structure.universe
    for module in modules:
        try:
            oid, mult = U.try_locate(module)
        except OutOfUniverseError as e:
            result.flag(f"out-of-universe object: {e}")
            return True
        if oid is None:
            result.flag(f"out-of-universe object with multiplicity vector {list(mult)}")
            return True
    return False


def _test_maps(A: Module, B: Module, cap: int, result: CheckResult) -> list[Morphism]:
    F = A.field
    basis = hom_space(A, B)
    if F.count(len(basis)) <= cap:
        return list(hom_elements(A, B, cap))
    result.flag(f"Hom({A.label}, {B.label}) tested on basis elements only (cap {cap})")
    return [zero_morphism(A, B), *basis]


def verify_exact_axioms(structure: ExactStructure, axiom_cap: int = 4096) -> list[CheckResult]:
    """Check Ex0, Ex1, Ex2, Ex2op, the derived Ex1op and split sequences

    Conflations are drawn from the cells between test objects; test maps
    have test objects as sources and targets. Ex1 and Ex1op compose every
    listed conflation of an explicit structure, and for explicit and induced
    structures also turn the shared term by each of its automorphisms.
    """
    U = structure.universe
    test = structure.test_objects
    results: list[CheckResult] = []

    pre = CheckResult("kernel-cokernel pairs")
    for n, c in enumerate(structure.listed):
        pre.checked += 1
        if not is_kernel_cokernel_pair(c.f, c.g):
            pre.fail({"pair": n, **c.payload()}, f"listed pair {n} is not a kernel-cokernel pair")
    results.append(pre)

    ex0 = CheckResult("Ex0")
    ex0.checked = 1
    zero = zero_conflation(U.algebra)
    if not (structure.in_scope(U.zero_id) and structure.contains(zero)):
        ex0.fail(zero.payload(("0", "0", "0")), "1_0 is not an admissible epimorphism")
    results.append(ex0)

    witnesses: list[tuple[int, int, int, Conflation]] = []
    for x in test:
        for z in test:
            cell = structure.cell(x, z)
            for y, c in cell.middles.items():
                witnesses.append((x, y, z, c))

    # explicit structures compose every listed conflation, not one per cell
    if structure.kind == StructureKind.EXPLICIT:
        composable = structure.listed_triples()
    else:
        composable = witnesses

    def aligned(c: Conflation) -> tuple[Morphism, Morphism]:
        """f from and g onto the universe objects at the ends of c"""
        _, iso_x = U.locate_with_iso(c.x)
        _, iso_z = U.locate_with_iso(c.z)
        return compose(c.f, iso_x), compose(inverse(iso_z), c.g)

    ending = defaultdict(list)
    starting = defaultdict(list)
    for x, y, z, c in composable:
        f, g = aligned(c)
        ending[z].append((c, g))
        starting[x].append((c, f))

    automorphisms: dict[int, list[Morphism]] = {}

    def turns(y: int, result: CheckResult) -> list[Morphism]:
        """Aut(Y) for structures whose membership is not closed under it by construction"""
        Y = U.obj(y).module
        if not structure.locates:
            return [identity(Y)]
        if y not in automorphisms:
            if Y.field.count(hom_dim(Y, Y)) > axiom_cap:
                result.flag(f"Aut({U.label(y)}) exceeds {axiom_cap}; composites tested at the identity")
                automorphisms[y] = [identity(Y)]
            else:
                automorphisms[y] = [
                    a for a in hom_elements(Y, Y, axiom_cap) if Y.field.is_invertible(a.mat)
                ]
        return automorphisms[y]

    ex1 = CheckResult("Ex1")
    ex1op = CheckResult("Ex1op")
    for x, y, z, c in composable:
        _, iso = U.locate_with_iso(c.y)
        epi = compose(c.g, iso)
        mono = compose(inverse(iso), c.f)
        for theta in turns(y, ex1):
            for c2, g2 in ending[y]:
                h = compose(epi, compose(theta, g2))
                ex1.checked += 1
                if structure.locates and _flag_escape(ex1, structure, [kernel(h).src]):
                    continue
                if not structure.is_admissible_epi(h):
                    ex1.fail(
                        {
                            "objects": [c2.y.label, U.label(y), U.label(z)],
                            "matrices": {
                                "first": matrix_payload(compose(theta, g2).mat),
                                "second": matrix_payload(epi.mat),
                            },
                        },
                        "composite of admissible epimorphisms is not admissible",
                    )
        for theta in turns(y, ex1op):
            for c2, f2 in starting[y]:
                h = compose(f2, compose(theta, mono))
                ex1op.checked += 1
                if structure.locates and _flag_escape(ex1op, structure, [cokernel(h).dst]):
                    continue
                if not structure.is_admissible_mono(h):
                    ex1op.fail(
                        {
                            "objects": [U.label(x), U.label(y), c2.y.label],
                            "matrices": {
                                "first": matrix_payload(compose(theta, mono).mat),
                                "second": matrix_payload(f2.mat),
                            },
                        },
                        "composite of admissible monomorphisms is not admissible",
                    )
    results.extend([ex1, ex1op])

    ex2 = CheckResult("Ex2")
    ex2op = CheckResult("Ex2op")
    for x, y, z, c in witnesses:
        for t in test:
            T = U.obj(t).module
            for h in _test_maps(T, c.z, axiom_cap, ex2):
                pb = pullback(c.g, h)
                ex2.checked += 1
                if structure.locates and _flag_escape(ex2, structure, [pb.module, kernel(pb.g_prime).src]):
                    continue
                if not structure.is_admissible_epi(pb.g_prime):
                    ex2.fail(
                        {
                            "objects": [U.label(y), U.label(z), U.label(t)],
                            "matrices": {"g": matrix_payload(c.g.mat), "h": matrix_payload(h.mat)},
                        },
                        "pullback of an admissible epimorphism is not admissible",
                    )
            for h in _test_maps(c.x, T, axiom_cap, ex2op):
                po = pushout(c.f, h)
                ex2op.checked += 1
                if structure.locates and _flag_escape(ex2op, structure, [po.module, cokernel(po.f_prime).dst]):
                    continue
                if not structure.is_admissible_mono(po.f_prime):
                    ex2op.fail(
                        {
                            "objects": [U.label(x), U.label(y), U.label(t)],
                            "matrices": {"f": matrix_payload(c.f.mat), "h": matrix_payload(h.mat)},
                        },
                        "pushout of an admissible monomorphism is not admissible",
                    )
    results.extend([ex2, ex2op])

    split = CheckResult("split sequences")
    for a in test:
        for b in test:
            c = split_conflation(U.obj(a).module, U.obj(b).module)
            split.checked += 1
            if structure.locates and _flag_escape(split, structure, [c.y]):
                continue
            if not structure.contains(c):
                split.fail(c.payload((U.label(a), f"{U.label(a)}+{U.label(b)}", U.label(b))))
    results.append(split)

    for cell_key in structure.inconclusive_cells():
        note = f"cell ({U.label(cell_key[0])}, {U.label(cell_key[1])}) inconclusive"
        for result in results[2:]:
            result.flag(note)

    for result in results:
        level = logging.WARNING if result.status == FAIL else logging.INFO
        logger.log(level, f"{result.name}: {result.status} ({result.checked} cases)")
    return results


def induced_structure(structure: ExactStructure, members) -> ExactStructure:
    """Restrict an exact structure to an extension-closed subcategory

    Raises:
        ContractViolation: the subcategory misses the zero object
        NotExtensionClosedError: with the conflation whose middle term is missing
    """
    U = structure.universe
    members = frozenset(members)
    if U.zero_id not in members:
        raise ContractViolation("subcategory must contain the zero object")
    for x in sorted(members):
        for z in sorted(members):
            cell = structure.cell(x, z)
            for y, c in cell.middles.items():
                if y not in members:
                    raise NotExtensionClosedError(
                        f"not extension-closed: {U.label(y)} is an extension of "
                        f"{U.label(z)} by {U.label(x)}",
                        c.payload((U.label(x), U.label(y), U.label(z))),
                    )
    labels = ",".join(U.label(m) for m in sorted(members))
    return ExactStructure(
        U,
        StructureKind.INDUCED,
        members=members,
        ambient=structure,
        cap=structure.cap,
        cover_limit=structure.cover_limit,
        orbit_limit=structure.orbit_limit,
        label=f"induced[{labels}]",
    )


def conflation_between(universe: Universe, x: int, y: int, z: int, f: Mat, g: Mat) -> Conflation:
    """Conflation of universe modules from raw matrices"""
    f_m = Morphism(universe.obj(x).module, universe.obj(y).module, f)
    g_m = Morphism(universe.obj(y).module, universe.obj(z).module, g)
    for m in (f_m, g_m):
        if not m.intertwines():
            raise ContractViolation("listed map is not a module homomorphism")
    return Conflation(f_m, g_m)
