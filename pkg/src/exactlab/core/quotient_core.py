"""
Quotient Categories
The ideal of morphisms factoring through add N, stable hom-spaces, S_N
sequences, factorization admissibility and the Weak Five Lemma; for a
Frobenius structure with N its injectives also the suspension, standard
triangles and distinguished triangles.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import ContractViolation, InconclusiveError, OutOfUniverseError
from .exact_core import (
    Conflation,
    ExactStructure,
    Pushout,
    cokernel,
    is_kernel_cokernel_pair,
    pushout,
)
from .gf_linalg import Mat, PrimeField
from .modules import (
    Module,
    Morphism,
    compose,
    diagonal_sum,
    direct_sum,
    hom_coordinates,
    hom_dim,
    hom_elements,
    hom_rows,
    hom_space,
    identity,
    inverse,
    zero_morphism,
)
from .results import CheckResult, matrix_payload
from .universe import Mult

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- value types


@dataclass(frozen=True, eq=False)
class StableMorphism:
    """Class of a morphism modulo the ideal I(src, dst)

    Two stable morphisms are equal when their representatives differ by an
    ideal element; ``g @ f`` composes in the quotient.
    """

    ctx: "QuotientContext"
    rep: Morphism

    @property
    def src(self) -> Module:
        return self.rep.src

    @property
    def dst(self) -> Module:
        return self.rep.dst

    @cached_property
    def normal_form(self) -> np.ndarray:
        return self.ctx.reduce(self.rep)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StableMorphism)
            and self.src == other.src
            and self.dst == other.dst
            and np.array_equal(self.normal_form, other.normal_form)
        )

    def __hash__(self) -> int:
        return hash((self.src, self.dst, self.normal_form.tobytes()))

    def __add__(self, other: "StableMorphism") -> "StableMorphism":
        return StableMorphism(self.ctx, self.rep + other.rep)

    def __sub__(self, other: "StableMorphism") -> "StableMorphism":
        return StableMorphism(self.ctx, self.rep - other.rep)

    def __neg__(self) -> "StableMorphism":
        return StableMorphism(self.ctx, -self.rep)

    def __matmul__(self, other: "StableMorphism") -> "StableMorphism":
        return StableMorphism(self.ctx, compose(self.rep, other.rep))

    def is_zero(self) -> bool:
        return not self.normal_form.any()

    def is_iso(self) -> bool:
        return self.ctx.stable_is_iso(self.rep)


@dataclass(frozen=True)
class ZeroLemma:
    """Stable vanishing of an object against membership in add N"""

    oid: int
    is_zero: bool
    is_summand: bool

    @property
    def lemma_holds(self) -> bool:
        return self.is_summand or not self.is_zero

    @property
    def converse_holds(self) -> bool:
        return self.is_zero or not self.is_summand


@dataclass(frozen=True)
class Suspension:
    """Chosen conflation X >-> I ->> TX with I relatively injective"""

    x: int
    tx: int
    mono: Morphism
    epi: Morphism
    injective_mult: Mult

    @property
    def injective(self) -> Module:
        return self.mono.dst

    @property
    def module(self) -> Module:
        return self.epi.dst


@dataclass(frozen=True)
class Triangle:
    """X -u-> Y -v-> Z -w-> TX"""

    u: Morphism
    v: Morphism
    w: Morphism
    pushout: Pushout | None = None
    suspension: Suspension | None = None

    def __post_init__(self):
        if self.u.dst != self.v.src or self.v.dst != self.w.src:
            raise ContractViolation("triangle maps are not composable")

    @property
    def x(self) -> Module:
        return self.u.src

    @property
    def y(self) -> Module:
        return self.u.dst

    @property
    def z(self) -> Module:
        return self.v.dst

    @property
    def tx(self) -> Module:
        return self.w.dst

    def payload(self, labels: tuple[str, str, str, str] | None = None) -> dict:
        if labels is None:
            labels = (self.x.label, self.y.label, self.z.label, self.tx.label)
        return {
            "objects": list(labels),
            "matrices": {
                "u": matrix_payload(self.u.mat),
                "v": matrix_payload(self.v.mat),
                "w": matrix_payload(self.w.mat),
            },
        }


@dataclass(frozen=True)
class Term:
    """left . phi[slot] . right, with a sign"""

    slot: int
    left: Morphism | None = None
    right: Morphism | None = None
    sign: int = 1


@dataclass(frozen=True)
class Relation:
    """Sum of the terms congruent to ``constant`` (or zero) modulo I(src, dst)"""

    src: Module
    dst: Module
    terms: tuple[Term, ...]
    constant: Morphism | None = None


@dataclass
class SolutionSpace:
    """Solutions of a commuting problem, one representative per ideal class"""

    particular: np.ndarray
    directions: Mat
    bases: list[list[Morphism]]
    offsets: list[int]
    slots: list[tuple[Module, Module]]

    @property
    def dimension(self) -> int:
        return self.directions.shape[0]


@dataclass
class SNWitness:
    """Conflation X' >-> Y' ->> Z' and stable isos from a sequence onto it"""

    conflation: Conflation
    objects: tuple[int, int | None, int]
    isos: tuple[Morphism, Morphism, Morphism]


@dataclass
class FactorizationOutcome:
    result: CheckResult
    witnesses: list[dict] = field(default_factory=list)


# ------------------------------------------------------------------ context


class QuotientContext:
    """The quotient E/N of an exact structure by the additive closure of N

    Args:
        structure: exact structure on the universe
        members: object ids of N; must contain 0 and every direct sum of two
            members that stays inside the bound
        cap: largest solution class or hom-space enumerated exhaustively
    """

    def __init__(
        self,
        structure: ExactStructure,
        members,
        cap: int = 1 << 16,
        label: str | None = None,
    ):
        self.structure = structure
        self.universe = structure.universe
        U = self.universe
        self.members = frozenset(members)
        if U.zero_id not in self.members:
            raise ContractViolation("N must contain the zero object")
        for a in sorted(self.members):
            for b in sorted(self.members):
                total = U.add(a, b)
                if total is not None and total not in self.members:
                    raise ContractViolation(
                        f"N is not closed under direct sums: "
                        f"{U.label(a)} + {U.label(b)} is missing"
                    )
        self.cap = cap
        self.label = label or "{" + ", ".join(U.label(m) for m in sorted(self.members)) + "}"
        # composites through a member are sums of composites through its seeds
        self.n_seeds = frozenset(s for m in self.members for s in U.support(m))
        self._ideal: dict[tuple[Module, Module], Mat] = {}
        self._suspensions: dict[int, Suspension] = {}
        self._transported: dict[Module, Suspension] = {}
        self._ids = {obj.module: obj.id for obj in U.objects}
        logger.info(
            f"Quotient by N = {self.label} over {structure.label} "
            f"(ideal seeds {sorted(U.seeds[s].label for s in self.n_seeds)})"
        )

    def __repr__(self) -> str:
        return f"QuotientContext({self.structure.label} / {self.label})"

    @property
    def field(self) -> PrimeField:
        return self.universe.field

    def module(self, obj: int | Module) -> Module:
        if isinstance(obj, Module):
            return obj
        return self.universe.obj(int(obj)).module

    # ------------------------------------------------------------------ ideal

    def ideal_rows(self, X: Module, Y: Module) -> Mat:
        """Canonical basis of I(X, Y), each morphism flattened into a row"""
        key = (X, Y)
        if key not in self._ideal:
            F = self.field
            width = Y.dim * X.dim
            composites = []
            for s in sorted(self.n_seeds):
                W = self.universe.seeds[s]
                into, out = hom_space(X, W), hom_space(W, Y)
                if not into or not out:
                    continue
                A = np.stack([a.mat for a in into])
                B = np.stack([b.mat for b in out])
                products = np.einsum("byw,awx->bayx", B, A) % F.p
                composites.append(products.reshape(-1, width))
            if composites:
                rows = F.row_basis(np.vstack(composites), width)
            else:
                rows = F.zeros(0, width)
            self._ideal[key] = rows
        return self._ideal[key]

    def ideal_basis(self, x: int | Module, y: int | Module) -> list[Morphism]:
        X, Y = self.module(x), self.module(y)
        return [Morphism(X, Y, row.reshape(Y.dim, X.dim)) for row in self.ideal_rows(X, Y)]

    def in_ideal(self, f: Morphism) -> bool:
        return self.field.contains(self.ideal_rows(f.src, f.dst), f.mat.reshape(-1))

    def reduce(self, f: Morphism) -> np.ndarray:
        """Normal form of f modulo the ideal, flattened"""
        F = self.field
        v = f.mat.reshape(-1) % F.p
        for row in self.ideal_rows(f.src, f.dst):
            pivot = int(np.flatnonzero(row)[0])
            if v[pivot]:
                v = (v - v[pivot] * row) % F.p
        return v

    def stable(self, f: Morphism) -> StableMorphism:
        return StableMorphism(self, f)

    # ---------------------------------------------------------- stable homs

    def stable_hom(self, x: int | Module, y: int | Module) -> list[Morphism]:
        """Representatives of a basis of Hom(X, Y) / I(X, Y)"""
        F = self.field
        X, Y = self.module(x), self.module(y)
        reps = F.complement(self.ideal_rows(X, Y), hom_rows(X, Y))
        return [Morphism(X, Y, row.reshape(Y.dim, X.dim)) for row in reps]

    def stable_dim(self, x: int | Module, y: int | Module) -> int:
        X, Y = self.module(x), self.module(y)
        return hom_dim(X, Y) - self.ideal_rows(X, Y).shape[0]

    def stable_inverse(self, f: Morphism) -> Morphism | None:
        """Some g with g f = 1 and f g = 1 modulo the ideal, or None

        One linear system in the coefficients of g and of the two ideal
        corrections decides existence.
        """
        F = self.field
        X, Y = f.src, f.dst
        backs = hom_space(Y, X)
        ix, iy = self.ideal_rows(X, X), self.ideal_rows(Y, Y)
        nx, ny = X.dim * X.dim, Y.dim * Y.dim
        c, dx = len(backs), ix.shape[0]
        A = F.zeros(nx + ny, c + dx + iy.shape[0])
        for j, g in enumerate(backs):
            A[:nx, j] = F.matmul(g.mat, f.mat).reshape(-1)
            A[nx:, j] = F.matmul(f.mat, g.mat).reshape(-1)
        A[:nx, c : c + dx] = ix.T
        A[nx:, c + dx :] = iy.T
        b = np.concatenate([F.eye(X.dim).reshape(-1), F.eye(Y.dim).reshape(-1)])
        solved = F.solve_many(A, b.reshape(-1, 1))
        if solved is None:
            return None
        if not backs:
            return zero_morphism(Y, X)
        return Morphism(Y, X, F.combine(solved[:c, 0], [g.mat for g in backs]))

    def stable_is_iso(self, f: Morphism) -> bool:
        return self.stable_inverse(f) is not None

    # --------------------------------------------------------- stable objects

    def stable_key(self, obj: int | Module) -> Mult:
        """Multiplicities of the seeds outside add N

        Objects are stably isomorphic exactly when their keys agree.
        """
        U = self.universe
        if isinstance(obj, Module):
            oid = self._ids.get(obj)
            mult = U.mult(oid) if oid is not None else U.classify(obj)
        else:
            mult = U.mult(int(obj))
        return tuple(0 if s in self.n_seeds else m for s, m in enumerate(mult))

    def is_stably_zero(self, obj: int | Module) -> bool:
        return not any(self.stable_key(obj))

    def stable_classes(self, objects=None) -> dict[Mult, list[int]]:
        """Scope objects grouped by stable key, in canonical order"""
        groups: dict[Mult, list[int]] = defaultdict(list)
        for oid in objects if objects is not None else self.structure.scope():
            groups[self.stable_key(oid)].append(oid)
        return dict(sorted(groups.items()))

    def stable_zero_lemma(self, oid: int) -> ZeroLemma:
        """X = 0 in E/N compared with X being a summand of a sum of N objects

        Sums of N objects may leave the bound, so the summand test compares
        supports rather than looking for a single member.
        """
        U = self.universe
        is_zero = self.in_ideal(identity(U.obj(oid).module))
        return ZeroLemma(oid, is_zero, U.support(oid) <= self.n_seeds)

    # ------------------------------------------------------ commuting problems

    def solution_space(
        self, slots: list[tuple[Module, Module]], relations: list[Relation]
    ) -> SolutionSpace | None:
        """Morphisms phi[k]: slots[k] satisfying every relation modulo the ideal"""
        F = self.field
        bases = [hom_space(src, dst) for src, dst in slots]
        offsets = [0]
        for basis in bases:
            offsets.append(offsets[-1] + len(basis))
        H = offsets[-1]

        slack = [self.ideal_rows(rel.src, rel.dst) for rel in relations]
        heights = [rel.dst.dim * rel.src.dim for rel in relations]
        A = F.zeros(sum(heights), H + sum(s.shape[0] for s in slack))
        b = F.zeros(sum(heights), 1)
        row, col = 0, H
        for rel, rows, height in zip(relations, slack, heights, strict=True):
            for term in rel.terms:
                for j, phi in enumerate(bases[term.slot]):
                    m = phi.mat
                    if term.right is not None:
                        m = F.matmul(m, term.right.mat)
                    if term.left is not None:
                        m = F.matmul(term.left.mat, m)
                    k = offsets[term.slot] + j
                    A[row : row + height, k] = (A[row : row + height, k] + term.sign * m.reshape(-1)) % F.p
            A[row : row + height, col : col + rows.shape[0]] = rows.T
            if rel.constant is not None:
                b[row : row + height, 0] = rel.constant.mat.reshape(-1)
            row += height
            col += rows.shape[0]

        solved = F.solve(A, b)
        if solved is None:
            return None
        x0, null = solved
        directions = F.row_basis(null[:, :H], H)
        trivial = []
        for k, (src, dst) in enumerate(slots):
            for ideal_row in self.ideal_rows(src, dst):
                coords = F.zeros(1, H)[0]
                coords[offsets[k] : offsets[k + 1]] = hom_coordinates(
                    src, dst, ideal_row.reshape(dst.dim, src.dim)
                )
                trivial.append(coords)
        if trivial:
            directions = F.complement(F.row_basis(np.array(trivial), H), directions)
        return SolutionSpace(x0[:H], directions, bases, offsets, list(slots))

    def solve_commuting(self, slots, relations, cell: str = ""):
        """Iterate the solutions, one representative per class modulo the ideal

        Raises:
            InconclusiveError: more than ``cap`` classes
        """
        space = self.solution_space(slots, relations)
        if space is None:
            return
        F = self.field
        if F.count(space.dimension) > self.cap:
            raise InconclusiveError(
                f"{space.dimension}-dimensional solution space", self.cap, cell
            )
        for coefficients in F.coefficient_vectors(space.dimension):
            x = space.particular.copy()
            for c, direction in zip(coefficients, space.directions, strict=True):
                if c:
                    x = (x + c * direction) % F.p
            maps = []
            for k, (src, dst) in enumerate(space.slots):
                basis = space.bases[k]
                if basis:
                    coeffs = x[space.offsets[k] : space.offsets[k + 1]]
                    maps.append(Morphism(src, dst, F.combine(coeffs, [h.mat for h in basis])))
                else:
                    maps.append(zero_morphism(src, dst))
            yield maps

    def _square_isos(self, p: Morphism, q: Morphism, cell: str) -> tuple[Morphism, Morphism] | None:
        """Stable isos a, b with b p = q a"""
        slots = [(p.src, q.src), (p.dst, q.dst)]
        relation = Relation(
            p.src,
            q.dst,
            (Term(1, right=p), Term(0, left=q, sign=-1)),
        )
        for a, b in self.solve_commuting(slots, [relation], cell):
            if self.stable_is_iso(a) and self.stable_is_iso(b):
                return a, b
        return None

    # ------------------------------------------------------------ S_N sequences

    def representatives(self, objects=None) -> list[tuple[int, int | None, int, Conflation]]:
        """One conflation per (X, Y, Z) over the given ends; escaped middles have no id"""
        result = []
        objects = sorted(objects) if objects is not None else self.structure.scope()
        for x in objects:
            for z in objects:
                cell = self.structure.cell(x, z)
                for y, c in cell.middles.items():
                    result.append((x, y, z, c))
                for c in cell.escaped.values():
                    result.append((x, None, z, c))
        return result

    def sn_membership(self, f: Morphism, g: Morphism) -> SNWitness | None:
        """A conflation stably isomorphic to X -f-> Y -g-> Z, or None

        Candidates are the conflation representatives whose terms have the
        same stable keys.
        """
        if f.dst != g.src:
            raise ContractViolation("sequence maps are not composable")
        if not self.in_ideal(compose(g, f)):
            return None
        U = self.universe
        kx, ky, kz = (self.stable_key(M) for M in (f.src, f.dst, g.dst))
        ends_x = [o for o in self.structure.scope() if self.stable_key(o) == kx]
        ends_z = [o for o in self.structure.scope() if self.stable_key(o) == kz]
        for x2 in ends_x:
            for z2 in ends_z:
                cell = self.structure.cell(x2, z2)
                candidates = [(y, c) for y, c in cell.middles.items()]
                candidates += [(None, c) for c in cell.escaped.values()]
                for y2, c in candidates:
                    if self.stable_key(c.y) != ky:
                        continue
                    slots = [(f.src, c.x), (f.dst, c.y), (g.dst, c.z)]
                    relations = [
                        Relation(f.src, c.y, (Term(1, right=f), Term(0, left=c.f, sign=-1))),
                        Relation(f.dst, c.z, (Term(2, right=g), Term(1, left=c.g, sign=-1))),
                    ]
                    cell_name = f"S_N {U.label(x2)} -> {U.label(z2)}"
                    for phis in self.solve_commuting(slots, relations, cell_name):
                        if all(self.stable_is_iso(phi) for phi in phis):
                            return SNWitness(c, (x2, y2, z2), tuple(phis))
        return None

    def check_weak_five_lemma(self, objects=None) -> CheckResult:
        """Both degenerate five-lemma clauses over pairs of conflation representatives

        (i) isos on X and Y with Z' = 0 force Z = 0; (ii) isos on Y and Z with
        X = 0 force X' = 0. The squares through the stably zero term commute
        automatically, so a counterexample is a pair of stable isos making the
        remaining square commute.
        """
        U = self.universe
        result = CheckResult("Weak Five Lemma")
        keyed = []
        for x, y, z, c in self.representatives(objects):
            keys = (self.stable_key(x), self.stable_key(c.y), self.stable_key(z))
            keyed.append((keys, x, z, c))

        def labels(x, c, z):
            return [U.label(x), U.label_for(U.classify(c.y)), U.label(z)]

        for k1, x1, z1, c1 in keyed:
            for k2, x2, z2, c2 in keyed:
                clause = None
                if any(k1[2]) and not any(k2[2]) and k1[:2] == k2[:2]:
                    clause, p, q = "i", c1.f, c2.f
                elif not any(k1[0]) and any(k2[0]) and k1[1:] == k2[1:]:
                    clause, p, q = "ii", c1.g, c2.g
                if clause is None:
                    continue
                result.checked += 1
                cell = f"({U.label(x1)}, {U.label(z1)}) -> ({U.label(x2)}, {U.label(z2)})"
                try:
                    found = self._square_isos(p, q, cell)
                except InconclusiveError as e:
                    result.flag(f"clause ({clause}) at {cell}: {e}")
                    continue
                if found is not None:
                    a, b = found
                    result.fail(
                        {
                            "clause": clause,
                            "rows": [labels(x1, c1, z1), labels(x2, c2, z2)],
                            "matrices": {"first": matrix_payload(a.mat), "second": matrix_payload(b.mat)},
                        },
                        f"clause ({clause}) fails for {cell}",
                    )
        logger.info(f"Weak Five Lemma: {result.status} ({result.checked} row pairs)")
        return result

    def record_sn_axioms(self, objects=None) -> dict[str, dict]:
        """Whether S_N maps happen to be monos and epis in E/N (recorded only)"""
        U = self.universe
        tests = sorted(objects) if objects is not None else self.structure.test_objects
        observations = {
            "stable monomorphisms": {"holds": True, "witness": None},
            "stable epimorphisms": {"holds": True, "witness": None},
        }
        for x, _, z, c in self.representatives(tests):
            for t in tests:
                T = U.obj(t).module
                mono_space = self.solution_space(
                    [(T, c.x)], [Relation(T, c.y, (Term(0, left=c.f),))]
                )
                if mono_space is not None and mono_space.dimension:
                    entry = observations["stable monomorphisms"]
                    if entry["holds"]:
                        entry["holds"] = False
                        entry["witness"] = {"sequence": [U.label(x), U.label(z)], "test": U.label(t)}
                epi_space = self.solution_space(
                    [(c.z, T)], [Relation(c.y, T, (Term(0, right=c.g),))]
                )
                if epi_space is not None and epi_space.dimension:
                    entry = observations["stable epimorphisms"]
                    if entry["holds"]:
                        entry["holds"] = False
                        entry["witness"] = {"sequence": [U.label(x), U.label(z)], "test": U.label(t)}
        return observations

    # -------------------------------------------------- factorization admissible

    def _assembled_witness(self, oid: int, side: str) -> tuple[Mult, Morphism] | None:
        """Direct sum of the seed envelopes (side='inj') or covers (side='proj')"""
        U = self.universe
        mult = U.mult(oid)
        maps, total = {}, [0] * len(U.seeds)
        for s in sorted(U.support(oid)):
            found = self.structure.seed_witness(U.seed_ids[s], side)
            if found is None:
                return None
            witness_mult, h = found
            maps[s] = h
            for k, m in enumerate(witness_mult):
                total[k] += m * mult[s]
        if not maps:
            return None
        if side == "inj":
            return tuple(total), U.sum_over_blocks(mult, maps)
        parts = []
        for s, m in enumerate(mult):
            if m:
                parts.extend([maps[s]] * m)
        joined = diagonal_sum(parts)
        return tuple(total), Morphism(joined.src, U.obj(oid).module, joined.mat)

    def _in_add_members(self, mult: Mult) -> bool:
        U = self.universe
        oid = U.id_of(mult)
        if oid is not None:
            return oid in self.members
        # beyond the bound: a sum of seeds that each lie in N is still in add N
        return all(m == 0 or U.seed_ids[s] in self.members for s, m in enumerate(mult))

    def _through_left(self, alpha: Morphism, f: Morphism) -> Morphism | None:
        """beta with beta alpha = f"""
        F = self.field
        betas = hom_space(alpha.dst, f.dst)
        if not betas:
            return zero_morphism(alpha.dst, f.dst) if f.is_zero() else None
        columns = np.array([F.matmul(b.mat, alpha.mat).reshape(-1) for b in betas]).T
        solved = F.solve_many(columns, f.mat.reshape(-1, 1))
        if solved is None:
            return None
        return Morphism(alpha.dst, f.dst, F.combine(solved[:, 0], [b.mat for b in betas]))

    def _through_right(self, beta: Morphism, f: Morphism) -> Morphism | None:
        """alpha with beta alpha = f"""
        F = self.field
        alphas = hom_space(f.src, beta.src)
        if not alphas:
            return zero_morphism(f.src, beta.src) if f.is_zero() else None
        columns = np.array([F.matmul(beta.mat, a.mat).reshape(-1) for a in alphas]).T
        solved = F.solve_many(columns, f.mat.reshape(-1, 1))
        if solved is None:
            return None
        return Morphism(f.src, beta.src, F.combine(solved[:, 0], [a.mat for a in alphas]))

    def _witness_escapes(self, x: int, y: int) -> bool:
        """The envelope of x or the cover of y is missing or lies beyond the bound"""
        U = self.universe
        for found in (self._assembled_witness(x, "inj"), self._assembled_witness(y, "proj")):
            if found is None or U.id_of(found[0]) is None:
                return True
        return False

    def _factorization(self, x: int, y: int, f: Morphism, result: CheckResult) -> dict | None:
        U = self.universe
        S = self.structure
        envelope = self._assembled_witness(x, "inj")
        if envelope is not None and self._in_add_members(envelope[0]):
            if self._through_left(envelope[1], f) is not None:
                return {"through": U.label_for(envelope[0]), "leg": "mono"}
        cover = self._assembled_witness(y, "proj")
        if cover is not None and self._in_add_members(cover[0]):
            if self._through_right(cover[1], f) is not None:
                return {"through": U.label_for(cover[0]), "leg": "epi"}

        X, Y = f.src, f.dst
        for n in sorted(self.members - {U.zero_id}):
            N = U.obj(n).module
            try:
                if N.dim >= X.dim:
                    for alpha in hom_elements(X, N, self.cap, f"{U.label(x)} -> {U.label(n)}"):
                        if alpha.rank() == X.dim and S.is_admissible_mono(alpha):
                            if self._through_left(alpha, f) is not None:
                                return {"through": U.label(n), "leg": "mono"}
                if N.dim >= Y.dim:
                    for beta in hom_elements(N, Y, self.cap, f"{U.label(n)} -> {U.label(y)}"):
                        if beta.rank() == Y.dim and S.is_admissible_epi(beta):
                            if self._through_right(beta, f) is not None:
                                return {"through": U.label(n), "leg": "epi"}
            except InconclusiveError as e:
                result.flag(f"factorization search through {U.label(n)}: {e}")
        return None

    def is_factorization_admissible(self, objects=None) -> FactorizationOutcome:
        """Every ideal basis morphism factors through one N object with an admissible leg"""
        U = self.universe
        result = CheckResult("factorization admissible")
        outcome = FactorizationOutcome(result)
        for n in sorted(self.members):
            for s in U.summand_ids(n):
                if s not in self.members:
                    result.fail(
                        {"objects": [U.label(n), U.label(s)]},
                        f"N is not closed under summands: {U.label(s)} splits off {U.label(n)}",
                    )
                    return outcome
        objects = sorted(objects) if objects is not None else self.structure.scope()
        for x in objects:
            for y in objects:
                for f in self.ideal_basis(x, y):
                    result.checked += 1
                    found = self._factorization(x, y, f, result)
                    if found is None and self._witness_escapes(x, y):
                        result.flag(
                            f"no factorization of an ideal map {U.label(x)} -> {U.label(y)} "
                            f"inside the bound: {matrix_payload(f.mat)}"
                        )
                        continue
                    if found is None:
                        result.fail(
                            {"objects": [U.label(x), U.label(y)], "matrices": {"f": matrix_payload(f.mat)}},
                            f"no admissible factorization of an ideal map {U.label(x)} -> {U.label(y)}",
                        )
                        continue
                    outcome.witnesses.append({"objects": [U.label(x), U.label(y)], **found})
        logger.info(f"Factorization admissible: {result.status} ({result.checked} ideal maps)")
        return outcome

    # -------------------------------------------------------------- suspension

    @cached_property
    def frobenius(self) -> bool:
        outcome = self.structure.is_frobenius()
        return outcome.holds and set(outcome.injectives) == set(self.members)

    def require_frobenius(self):
        if not self.frobenius:
            raise ContractViolation(
                "suspension needs a Frobenius structure with N its injective objects"
            )

    def suspension(self, oid: int) -> Suspension:
        """TX through the direct sum of the seed envelopes of X

        Raises:
            OutOfUniverseError: no envelope within the search limit, or TX
                escapes the bound
        """
        self.require_frobenius()
        if oid in self._suspensions:
            return self._suspensions[oid]
        U = self.universe
        if oid == U.zero_id:
            Z = U.obj(oid).module
            found = (U.mult(oid), identity(Z))
        else:
            found = self._assembled_witness(oid, "inj")
        if found is None:
            raise OutOfUniverseError(
                f"no injective envelope of {U.label(oid)} within the search limit"
            )
        mult, mono = found
        q = cokernel(mono)
        tx, iso = U.locate_with_iso(q.dst)
        epi = compose(inverse(iso), q)
        result = Suspension(oid, tx, mono, epi, mult)
        self._suspensions[oid] = result
        logger.debug(f"T {U.label(oid)} = {U.label(tx)} via {U.label_for(mult)}")
        return result

    def suspension_of(self, M: Module) -> Suspension:
        """The chosen suspension of the universe object isomorphic to M, moved onto M

        Raises:
            OutOfUniverseError: M is not isomorphic to a universe object
        """
        oid = self._ids.get(M)
        if oid is not None:
            return self.suspension(oid)
        if M in self._transported:
            return self._transported[M]
        oid, iso = self.universe.locate_with_iso(M)
        s = self.suspension(oid)
        moved = Suspension(oid, s.tx, compose(s.mono, inverse(iso)), s.epi, s.injective_mult)
        self._transported[M] = moved
        return moved

    def suspend_morphism(self, f: Morphism) -> Morphism:
        """Tf: TX -> TY through a lift of f between the chosen injectives"""
        F = self.field
        sx = self.suspension_of(f.src)
        sy = self.suspension_of(f.dst)
        target = compose(sy.mono, f)
        lifts = hom_space(sx.injective, sy.injective)
        if lifts:
            columns = np.array([F.matmul(L.mat, sx.mono.mat).reshape(-1) for L in lifts]).T
            solved = F.solve_many(columns, target.mat.reshape(-1, 1))
        else:
            solved = None if target.mat.any() else F.zeros(0, 1)
        if solved is None:
            raise ContractViolation("map does not extend over the injective envelope")
        if lifts:
            lift = F.combine(solved[:, 0], [L.mat for L in lifts])
        else:
            lift = F.zeros(sy.injective.dim, sx.injective.dim)
        image = F.matmul(sy.epi.mat, lift)
        tf = F.solve_many(sx.epi.mat.T, image.T)
        if tf is None:
            raise ContractViolation("lift does not descend to the suspensions")
        return Morphism(sx.module, sy.module, tf.T)

    def standard_triangle(self, f: Morphism) -> Triangle:
        """X -f-> Y -v-> C_f -w-> TX with C_f the pushout of X >-> I along f"""
        s = self.suspension_of(f.src)
        po = pushout(s.mono, f)
        v = po.f_prime
        w = po.factor(s.epi, zero_morphism(f.dst, s.module))
        return Triangle(f, v, w, pushout=po, suspension=s)

    def check_standard_triangle(self, t: Triangle) -> list[str]:
        """Identities a standard triangle must satisfy; empty when all hold"""
        if t.pushout is None or t.suspension is None:
            raise ContractViolation("not a standard triangle")
        problems = []
        jbar = t.pushout.h_prime
        if not (compose(t.w, jbar).mat == t.suspension.epi.mat).all():
            problems.append("w does not restrict to the chosen epimorphism on I")
        if not (compose(t.v, t.u).mat == compose(jbar, t.suspension.mono).mat).all():
            problems.append("pushout square does not commute")
        if not is_kernel_cokernel_pair(t.v, t.w):
            problems.append("(v, w) is not a kernel-cokernel pair")
        elif not self.structure.locates and not self.structure.contains(Conflation(t.v, t.w)):
            problems.append("(v, w) is not a conflation")
        if not self.in_ideal(compose(t.v, t.u)):
            problems.append("v u is not stably zero")
        return problems

    def _triangle_comparison(self, z: Module, v: Morphism, w: Morphism | None, std: Triangle):
        """Stable iso c: Z -> C_u with c v = v_std and (when given) w_std c = w"""
        relations = [Relation(v.src, std.z, (Term(0, right=v),), constant=std.v)]
        if w is not None:
            relations.append(Relation(z, std.tx, (Term(0, left=std.w),), constant=w))
        for (c,) in self.solve_commuting([(z, std.z)], relations, f"triangle on {v.src.label}"):
            if self.stable_is_iso(c):
                return c
        return None

    def is_distinguished(self, t: Triangle) -> bool:
        """Whether t is isomorphic to a standard triangle

        A triangle on u is distinguished exactly when it is isomorphic to the
        standard triangle of u through a comparison that is the identity on
        X and Y. On TX it is the identity, or any stable iso when t ends in
        another module isomorphic to TX.

        Raises:
            InconclusiveError: more than ``cap`` comparison classes
        """
        if not self.in_ideal(compose(t.v, t.u)) or not self.in_ideal(compose(t.w, t.v)):
            return False
        std = self.standard_triangle(t.u)
        if t.tx == std.tx:
            return self._triangle_comparison(t.z, t.v, t.w, std) is not None
        # another model of TX: the comparison may act on it by any stable iso
        slots = [(t.z, std.z), (t.tx, std.tx)]
        relations = [
            Relation(t.y, std.z, (Term(0, right=t.v),), constant=std.v),
            Relation(t.z, std.tx, (Term(0, left=std.w), Term(1, right=t.w, sign=-1))),
        ]
        for c, theta in self.solve_commuting(slots, relations, f"triangle on {t.x.label}"):
            if self.stable_is_iso(c) and self.stable_is_iso(theta):
                return True
        return False

    def rotate(self, t: Triangle) -> Triangle:
        """Y -v-> Z -w-> TX -(-Tu)-> TY"""
        return Triangle(t.v, t.w, -self.suspend_morphism(t.u))

    def _stable_test_maps(self, X: Module, Y: Module, cap: int, result: CheckResult) -> list[Morphism]:
        F = self.field
        reps = self.stable_hom(X, Y)
        if F.count(len(reps)) <= cap:
            return [Morphism(X, Y, m) for m in F.span_elements([r.mat for r in reps], shape=(Y.dim, X.dim))]
        result.flag(f"stable Hom({X.label}, {Y.label}) tested on basis elements only (cap {cap})")
        return [zero_morphism(X, Y), *reps]

    def verify_sn_iff_triangle(self, objects=None, axiom_cap: int = 4096) -> list[CheckResult]:
        """Conflations complete to distinguished triangles, and standard triangles lie in S_N"""
        self.require_frobenius()
        U = self.universe
        objects = sorted(objects) if objects is not None else self.structure.test_objects

        forward = CheckResult("S_N to triangle")
        for x, y, z, c in self.representatives(objects):
            if y is None:
                continue
            forward.checked += 1
            try:
                std = self.standard_triangle(c.f)
                found = self._triangle_comparison(c.z, c.g, None, std)
            except (InconclusiveError, OutOfUniverseError) as e:
                forward.flag(f"({U.label(x)}, {U.label(y)}, {U.label(z)}): {e}")
                continue
            if found is None:
                forward.fail(
                    c.payload((U.label(x), U.label(y), U.label(z))),
                    "conflation does not complete to a distinguished triangle",
                )

        backward = CheckResult("triangle to S_N")
        for x in objects:
            for y in objects:
                X, Y = U.obj(x).module, U.obj(y).module
                for f in self._stable_test_maps(X, Y, axiom_cap, backward):
                    backward.checked += 1
                    try:
                        t = self.standard_triangle(f)
                    except OutOfUniverseError as e:
                        backward.flag(f"standard triangle of {U.label(x)} -> {U.label(y)}: {e}")
                        continue
                    problems = self.check_standard_triangle(t) + self._pushout_sequence_problems(t)
                    if problems:
                        backward.fail(t.payload((U.label(x), U.label(y), "C_f", U.label(t.suspension.tx))), "; ".join(problems))
        for result in (forward, backward):
            logger.info(f"{result.name}: {result.status} ({result.checked} cases)")
        return [forward, backward]

    def _pushout_sequence_problems(self, t: Triangle) -> list[str]:
        """X -(mu, -u)-> I + Y -> C_u is a conflation stably isomorphic to X -u-> Y -v-> C_u"""
        F = self.field
        s, po = t.suspension, t.pushout
        middle = po.biproduct.module
        f2 = Morphism(t.x, middle, np.vstack([s.mono.mat, F.neg(t.u.mat)]))
        c = Conflation(f2, po.projection)
        problems = []
        if not is_kernel_cokernel_pair(c.f, c.g):
            problems.append("pushout sequence is not a kernel-cokernel pair")
        elif not self.structure.locates and not self.structure.contains(c):
            problems.append("pushout sequence is not a conflation")
        phi1 = -identity(t.x)
        phi2 = po.biproduct.inclusions[1]
        if not self.in_ideal(compose(phi2, t.u) - compose(f2, phi1)):
            problems.append("first square of the S_N comparison does not commute")
        if not (compose(c.g, phi2).mat == t.v.mat).all():
            problems.append("second square of the S_N comparison does not commute")
        if not self.stable_is_iso(phi2):
            problems.append("Y -> I + Y is not a stable isomorphism")
        return problems

    # ------------------------------------------------------ supporting checks

    def check_ideal(self, objects=None) -> CheckResult:
        """I is closed under composition with hom basis elements on both sides"""
        U = self.universe
        result = CheckResult("ideal absorption")
        objects = sorted(objects) if objects is not None else self.structure.test_objects
        modules = {o: U.obj(o).module for o in objects}
        for x in objects:
            for y in objects:
                ideal = self.ideal_basis(x, y)
                if not ideal:
                    continue
                for w in objects:
                    for h in hom_space(modules[w], modules[x]):
                        for i in ideal:
                            result.checked += 1
                            if not self.in_ideal(compose(i, h)):
                                result.fail(
                                    {"objects": [U.label(w), U.label(x), U.label(y)]},
                                    "ideal not closed under precomposition",
                                )
                    for h in hom_space(modules[y], modules[w]):
                        for i in ideal:
                            result.checked += 1
                            if not self.in_ideal(compose(h, i)):
                                result.fail(
                                    {"objects": [U.label(x), U.label(y), U.label(w)]},
                                    "ideal not closed under postcomposition",
                                )
        return result

    def check_biproducts(self, objects=None) -> CheckResult:
        """Biproduct identities hold modulo I and stable homs are additive"""
        U = self.universe
        result = CheckResult("biproducts descend")
        objects = sorted(objects) if objects is not None else self.structure.test_objects
        for a in objects:
            for b in objects:
                A, B = U.obj(a).module, U.obj(b).module
                bp = direct_sum(A, B)
                result.checked += 1
                (i1, i2), (p1, p2) = bp.inclusions, bp.projections
                identities = [
                    self.stable(compose(p1, i1)) == self.stable(identity(A)),
                    self.stable(compose(p2, i2)) == self.stable(identity(B)),
                    self.stable(compose(p2, i1)).is_zero(),
                    self.stable(compose(p1, i2)).is_zero(),
                    self.stable(compose(i1, p1) + compose(i2, p2)) == self.stable(identity(bp.module)),
                ]
                if not all(identities):
                    result.fail({"objects": [U.label(a), U.label(b)]}, "biproduct identity fails modulo I")
                for t in objects:
                    T = U.obj(t).module
                    if self.stable_dim(bp.module, T) != self.stable_dim(A, T) + self.stable_dim(B, T):
                        result.fail(
                            {"objects": [U.label(a), U.label(b), U.label(t)]},
                            "stable Hom is not additive in the source",
                        )
                    if self.stable_dim(T, bp.module) != self.stable_dim(T, A) + self.stable_dim(T, B):
                        result.fail(
                            {"objects": [U.label(t), U.label(a), U.label(b)]},
                            "stable Hom is not additive in the target",
                        )
        return result

    def check_suspension(self, objects=None) -> list[CheckResult]:
        """T on stable morphisms, on stable classes, on stable homs, and its choice"""
        self.require_frobenius()
        U = self.universe
        tests = sorted(objects) if objects is not None else self.structure.test_objects

        defined = []
        for oid in self.structure.scope():
            try:
                self.suspension(oid)
                defined.append(oid)
            except OutOfUniverseError as e:
                logger.debug(f"No suspension for {U.label(oid)}: {e}")

        well_defined = CheckResult("T well-defined on stable morphisms")
        dims = CheckResult("T preserves stable hom dimensions")
        for x in tests:
            for y in tests:
                if x not in defined or y not in defined:
                    continue
                for f in self.ideal_basis(x, y):
                    well_defined.checked += 1
                    if not self.in_ideal(self.suspend_morphism(f)):
                        well_defined.fail(
                            {"objects": [U.label(x), U.label(y)], "matrices": {"f": matrix_payload(f.mat)}},
                            "T of an ideal map is not stably zero",
                        )
        for x in defined:
            for y in defined:
                dims.checked += 1
                tx, ty = self._suspensions[x].tx, self._suspensions[y].tx
                if self.stable_dim(x, y) != self.stable_dim(tx, ty):
                    dims.fail({"objects": [U.label(x), U.label(y)]}, "stable Hom dimension changes under T")

        injective = CheckResult("T injective on stable classes")
        images: dict[Mult, Mult] = {}
        for oid in defined:
            injective.checked += 1
            key, image = self.stable_key(oid), self.stable_key(self._suspensions[oid].tx)
            if images.setdefault(key, image) != image:
                injective.fail({"objects": [U.label(oid)]}, "T is not constant on a stable class")
        seen: dict[Mult, Mult] = {}
        for key, image in images.items():
            if seen.setdefault(image, key) != key:
                injective.fail(
                    {"objects": [U.label_for(key), U.label_for(seen[image])]},
                    "T identifies two stable classes",
                )

        choice = CheckResult("T choice independence")
        injective_seeds = sorted(s for s in self.n_seeds)
        for x in tests:
            if x == U.zero_id or x not in defined:
                continue
            s = self._suspensions[x]
            X = U.obj(x).module
            expected = self.stable_key(s.tx)
            envelopes = [s.injective_mult]
            for seed in injective_seeds:
                bigger = list(s.injective_mult)
                bigger[seed] += 1
                envelopes.append(tuple(bigger))
            for mult in envelopes:
                P = U.module_for(mult)
                try:
                    for h in hom_elements(X, P, self.cap, f"{U.label(x)} -> {U.label_for(mult)}"):
                        if h.rank() != X.dim or not self.structure.is_admissible_mono(h):
                            continue
                        choice.checked += 1
                        if self.stable_key(cokernel(h).dst) != expected:
                            choice.fail(
                                {"objects": [U.label(x), U.label_for(mult)], "matrices": {"mono": matrix_payload(h.mat)}},
                                "another injective embedding gives a different suspension",
                            )
                except (InconclusiveError, OutOfUniverseError) as e:
                    choice.flag(f"envelope {U.label_for(mult)} of {U.label(x)}: {e}")
        return [well_defined, injective, dims, choice]
