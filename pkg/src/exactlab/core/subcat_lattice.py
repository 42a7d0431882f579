"""
Subcategory Lattices
Complete and thick subcategories of E (containing N) and of E/N, their
closure operator and lattice enumeration, the maps F and G between the two
sides, and the checks of the correspondence between them.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import networkx as nx

from ..errors import ContractViolation
from .quotient_core import QuotientContext
from .results import PASS, CheckResult
from .universe import Mult

logger = logging.getLogger(__name__)


class Side(str, Enum):
    AMBIENT = "ambient"
    QUOTIENT = "quotient"


class Kind(str, Enum):
    COMPLETE = "complete"
    THICK = "thick"


@dataclass(frozen=True)
class Subcategory:
    """Full subcategory given by its objects

    ``points`` are object ids on the ambient side and stable keys on the
    quotient side; ``members`` are always object ids.
    """

    side: Side
    members: frozenset[int]
    points: frozenset
    complete: bool = False
    thick: bool = False
    contains_n: bool = False
    extension_closed: bool = False

    def sort_key(self) -> tuple:
        return (len(self.members), tuple(sorted(self.members)))

    def labels(self, universe) -> list[str]:
        return [universe.label(m) for m in sorted(self.members)]


@dataclass
class Lattice:
    """Closed subcategories in canonical order with the covering relation"""

    side: Side
    kind: Kind
    elements: list[Subcategory]
    edges: list[tuple[int, int]]
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, points) -> int | None:
        for i, element in enumerate(self.elements):
            if element.points == points:
                return i
        return None


@dataclass
class TheoremOutcome:
    """Verdict of one correspondence theorem"""

    kind: Kind
    hypotheses: list[CheckResult]
    ambient: Lattice | None = None
    quotient: Lattice | None = None
    pairs: list[tuple[int, int]] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    refused: str | None = None


class SubcategoryEngine:
    """Closure operators for complete and thick subcategories on both sides

    Args:
        ctx: quotient context; ambient closures always contain its N
        limit: largest number of closed sets enumerated before stopping
    """

    def __init__(self, ctx: QuotientContext, limit: int = 20000):
        self.ctx = ctx
        self.structure = ctx.structure
        self.universe = ctx.universe
        self.limit = limit
        self.scope = tuple(self.structure.scope())
        self._in_scope = set(self.scope)

    # ------------------------------------------------------------ point sets

    @cached_property
    def keys(self) -> dict[int, Mult]:
        return {oid: self.ctx.stable_key(oid) for oid in self.scope}

    @cached_property
    def key_set(self) -> frozenset[Mult]:
        return frozenset(self.keys.values())

    @cached_property
    def ambient_triples(self) -> list[tuple[int, int, int]]:
        return self.structure.triples()

    @cached_property
    def quotient_triples(self) -> list[tuple[Mult, Mult, Mult]]:
        """Stable key triples of every conflation representative"""
        found = set()
        for x, y, z, c in self.ctx.representatives():
            key_y = self.keys[y] if y is not None else self.ctx.stable_key(c.y)
            if key_y in self.key_set:
                found.add((self.keys[x], key_y, self.keys[z]))
        return sorted(found)

    def _zero(self, side: Side) -> set:
        if side == Side.QUOTIENT:
            return {tuple(0 for _ in self.universe.seeds)}
        return {self.universe.zero_id} | (set(self.ctx.members) & self._in_scope)

    def _triples(self, side: Side):
        return self.quotient_triples if side == Side.QUOTIENT else self.ambient_triples

    def _add(self, side: Side, a, b):
        if side == Side.QUOTIENT:
            total = tuple(x + y for x, y in zip(a, b, strict=True))
            return total if total in self.key_set else None
        total = self.universe.add(a, b)
        return total if total in self._in_scope else None

    def _summands(self, side: Side, a) -> list:
        if side == Side.QUOTIENT:
            return [k for k in sorted(self.key_set) if all(x <= y for x, y in zip(k, a, strict=True))]
        return [s for s in self.universe.summand_ids(a) if s in self._in_scope]

    def points_of(self, side: Side, members) -> frozenset:
        if side == Side.QUOTIENT:
            return frozenset(self.keys[m] for m in members)
        return frozenset(members)

    def members_of(self, side: Side, points) -> frozenset[int]:
        if side == Side.QUOTIENT:
            return frozenset(oid for oid in self.scope if self.keys[oid] in points)
        return frozenset(points)

    def label_point(self, side: Side, point) -> str:
        if side == Side.QUOTIENT:
            return self.universe.label_for(point)
        return self.universe.label(point)

    # --------------------------------------------------------------- closure

    def _close(self, points, kind: Kind, side: Side) -> frozenset:
        current = set(points) | self._zero(side)
        triples = self._triples(side)
        changed = True
        while changed:
            changed = False
            for a in sorted(current):
                for b in sorted(current):
                    total = self._add(side, a, b)
                    if total is not None and total not in current:
                        current.add(total)
                        changed = True
            for triple in triples:
                inside = [t in current for t in triple]
                if sum(inside) == 2:
                    current.add(triple[inside.index(False)])
                    changed = True
            if kind == Kind.THICK:
                for a in sorted(current):
                    for s in self._summands(side, a):
                        if s not in current:
                            current.add(s)
                            changed = True
        return frozenset(current)

    def closure(self, generators, kind: Kind | str, side: Side | str) -> Subcategory:
        """Least complete (or thick) subcategory containing the generators"""
        kind, side = Kind(kind), Side(side)
        for g in generators:
            if g not in self._in_scope:
                raise ContractViolation(f"generator {g} is not in the universe scope")
        points = self._close(self.points_of(side, generators), kind, side)
        return self.describe(side, points)

    def violation(self, side: Side, points, kind: Kind) -> dict | None:
        """First defining condition the point set breaks, or None"""
        points = set(points)
        for z in self._zero(side):
            if z not in points:
                return {"condition": "zero", "missing": self.label_point(side, z)}
        for a in sorted(points):
            for b in sorted(points):
                total = self._add(side, a, b)
                if total is not None and total not in points:
                    return {
                        "condition": "direct sums",
                        "objects": [self.label_point(side, a), self.label_point(side, b)],
                        "missing": self.label_point(side, total),
                    }
        for triple in self._triples(side):
            inside = [t in points for t in triple]
            if sum(inside) == 2:
                return {
                    "condition": "2 out of 3",
                    "sequence": [self.label_point(side, t) for t in triple],
                    "missing": self.label_point(side, triple[inside.index(False)]),
                }
        if kind == Kind.THICK:
            for a in sorted(points):
                for s in self._summands(side, a):
                    if s not in points:
                        return {
                            "condition": "direct summands",
                            "objects": [self.label_point(side, a)],
                            "missing": self.label_point(side, s),
                        }
        return None

    def describe(self, side: Side, points) -> Subcategory:
        """Subcategory with freshly computed flags"""
        points = frozenset(points)
        members = self.members_of(side, points)
        complete = self.violation(side, points, Kind.COMPLETE) is None
        thick = complete and self.violation(side, points, Kind.THICK) is None
        extension_closed = all(
            triple[1] in points
            for triple in self._triples(side)
            if triple[0] in points and triple[2] in points
        )
        return Subcategory(
            side=side,
            members=members,
            points=points,
            complete=complete,
            thick=thick,
            contains_n=set(self.ctx.members) & self._in_scope <= members,
            extension_closed=extension_closed,
        )

    def from_members(self, side: Side | str, members) -> Subcategory:
        side = Side(side)
        return self.describe(side, self.points_of(side, members))

    def is_complete(self, sub: Subcategory) -> tuple[bool, dict | None]:
        witness = self.violation(sub.side, sub.points, Kind.COMPLETE)
        return witness is None, witness

    def is_thick(self, sub: Subcategory) -> tuple[bool, dict | None]:
        witness = self.violation(sub.side, sub.points, Kind.COMPLETE)
        if witness is None:
            witness = self.violation(sub.side, sub.points, Kind.THICK)
        return witness is None, witness

    # ------------------------------------------------------------ enumeration

    def enumerate_closed(self, kind: Kind | str, side: Side | str) -> Lattice:
        """All closed point sets, grown from the closure of nothing one object at a time"""
        kind, side = Kind(kind), Side(side)
        all_points = sorted(self.key_set) if side == Side.QUOTIENT else list(self.scope)
        start = self._close((), kind, side)
        seen = {start}
        frontier = [start]
        truncated = False
        while frontier and not truncated:
            next_frontier = []
            for closed in frontier:
                for point in all_points:
                    if point in closed:
                        continue
                    bigger = self._close(closed | {point}, kind, side)
                    if bigger in seen:
                        continue
                    seen.add(bigger)
                    next_frontier.append(bigger)
                    if len(seen) >= self.limit:
                        truncated = True
                        break
                if truncated:
                    break
            frontier = next_frontier

        elements = sorted((self.describe(side, pts) for pts in seen), key=Subcategory.sort_key)
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(elements)))
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                if a.points < b.points:
                    graph.add_edge(i, j)
        edges = sorted(nx.transitive_reduction(graph).edges())
        lattice = Lattice(side, kind, elements, edges, truncated)
        if truncated:
            lattice.notes.append(f"enumeration stopped at {self.limit} subcategories")
            logger.warning(f"{kind.value} {side.value} lattice truncated at {self.limit}")
        for x, z in self.structure.inconclusive_cells():
            lattice.notes.append(
                f"cell ({self.universe.label(x)}, {self.universe.label(z)}) inconclusive"
            )
        logger.info(f"{kind.value} {side.value} lattice: {len(elements)} subcategories")
        return lattice

    # ------------------------------------------------------------- F and G

    def map_F(self, sub: Subcategory) -> Subcategory:
        """Same objects, read in E/N"""
        if sub.side != Side.AMBIENT:
            raise ContractViolation("F takes an ambient subcategory")
        if not sub.contains_n:
            raise ContractViolation("F needs a subcategory containing N")
        return self.describe(Side.QUOTIENT, self.points_of(Side.QUOTIENT, sub.members))

    def map_G(self, sub: Subcategory) -> Subcategory:
        """Same objects together with N, read in E"""
        if sub.side != Side.QUOTIENT:
            raise ContractViolation("G takes a quotient subcategory")
        members = sub.members | (set(self.ctx.members) & self._in_scope)
        return self.describe(Side.AMBIENT, members)

    def is_closed_under_quotient_iso(self, sub: Subcategory) -> tuple[bool, dict | None]:
        """Every object stably isomorphic to a member is a member"""
        points = self.points_of(Side.QUOTIENT, sub.members)
        for oid in self.scope:
            if self.keys[oid] in points and oid not in sub.members:
                return False, {"missing": self.universe.label(oid)}
        return True, None

    def is_closed_under_quotient_summands(self, sub: Subcategory) -> tuple[bool, dict | None]:
        """Every object that is a stable summand of a member is a member"""
        for m in sorted(sub.members):
            for key in self._summands(Side.QUOTIENT, self.keys[m]):
                for oid in self.scope:
                    if self.keys[oid] == key and oid not in sub.members:
                        return False, {
                            "objects": [self.universe.label(m)],
                            "missing": self.universe.label(oid),
                        }
        return True, None

    # ---------------------------------------------------------------- theorems

    def verify_correspondence(
        self, kind: Kind | str, hypotheses: list[CheckResult] | None = None
    ) -> TheoremOutcome:
        """F and G are mutually inverse between the two lattices

        The complete-subcategory form needs factorization admissibility and
        the Weak Five Lemma; both are checked here unless passed in.
        """
        kind = Kind(kind)
        U = self.universe
        if hypotheses is None:
            hypotheses = []
            if kind == Kind.COMPLETE:
                hypotheses = [
                    self.ctx.is_factorization_admissible().result,
                    self.ctx.check_weak_five_lemma(),
                ]
        outcome = TheoremOutcome(kind, hypotheses)
        for hypothesis in hypotheses:
            if hypothesis.status != PASS:
                outcome.refused = hypothesis.name
                logger.warning(f"Correspondence for {kind.value} subcategories refused: {hypothesis.name} {hypothesis.status}")
                return outcome

        ambient = self.enumerate_closed(kind, Side.AMBIENT)
        quotient = self.enumerate_closed(kind, Side.QUOTIENT)
        outcome.ambient, outcome.quotient = ambient, quotient

        f_defined = CheckResult("F well-defined")
        g_defined = CheckResult("G well-defined")
        gf = CheckResult("G F = id")
        fg = CheckResult("F G = id")
        for i, D in enumerate(ambient.elements):
            f_defined.checked += 1
            gf.checked += 1
            image = self.map_F(D)
            j = quotient.index_of(image.points)
            if j is None:
                f_defined.fail({"subcategory": D.labels(U)}, f"F D is not a {kind.value} subcategory of E/N")
            else:
                outcome.pairs.append((i, j))
            if self.map_G(image).members != D.members:
                gf.fail({"subcategory": D.labels(U)}, "G F D differs from D")
        for E in quotient.elements:
            g_defined.checked += 1
            fg.checked += 1
            image = self.map_G(E)
            if ambient.index_of(image.points) is None:
                g_defined.fail({"subcategory": E.labels(U)}, f"G E' is not a {kind.value} subcategory of E containing N")
            if self.map_F(image).points != E.points:
                fg.fail({"subcategory": E.labels(U)}, "F G E' differs from E'")
        outcome.checks = [f_defined, g_defined, gf, fg]
        for lattice in (ambient, quotient):
            for note in lattice.notes:
                for check in outcome.checks:
                    check.flag(note)
        logger.info(
            f"{kind.value} correspondence: {len(ambient)} ambient, {len(quotient)} quotient, "
            f"{[c.status for c in outcome.checks]}"
        )
        return outcome

    def check_supporting_props(
        self, thick: Lattice, complete: Lattice | None = None
    ) -> list[CheckResult]:
        """Thick subcategories containing N are closed under stable summands and
        stable isomorphism; complete ones (given the hypotheses) under stable isomorphism"""
        U = self.universe
        summands = CheckResult("thick: closed under summands in E/N")
        thick_iso = CheckResult("thick: closed under isomorphism in E/N")
        for D in thick.elements:
            if not D.contains_n:
                continue
            summands.checked += 1
            thick_iso.checked += 1
            ok, witness = self.is_closed_under_quotient_summands(D)
            if not ok:
                summands.fail({"subcategory": D.labels(U), **witness})
            ok, witness = self.is_closed_under_quotient_iso(D)
            if not ok:
                thick_iso.fail({"subcategory": D.labels(U), **witness})
        results = [summands, thick_iso]
        if complete is not None:
            complete_iso = CheckResult("complete: closed under isomorphism in E/N")
            for D in complete.elements:
                if not D.contains_n:
                    continue
                complete_iso.checked += 1
                ok, witness = self.is_closed_under_quotient_iso(D)
                if not ok:
                    complete_iso.fail({"subcategory": D.labels(U), **witness})
            results.append(complete_iso)
        return results

    def check_closure_operator(self, kind: Kind | str, side: Side | str, samples=None) -> CheckResult:
        """Extensive, monotone and idempotent on singletons and pairs of test objects"""
        kind, side = Kind(kind), Side(side)
        U = self.universe
        result = CheckResult(f"{kind.value} {side.value} closure operator")
        tests = [t for t in self.structure.test_objects if t in self._in_scope]
        if samples is None:
            samples = [(a,) for a in tests] + [(a, b) for i, a in enumerate(tests) for b in tests[i + 1 :]]
        closed = {}
        for sample in samples:
            result.checked += 1
            points = self.points_of(side, sample)
            once = self._close(points, kind, side)
            closed[frozenset(points)] = once
            if not points <= once:
                result.fail({"generators": [U.label(g) for g in sample]}, "closure is not extensive")
            if self._close(once, kind, side) != once:
                result.fail({"generators": [U.label(g) for g in sample]}, "closure is not idempotent")
        for small, small_closed in closed.items():
            for big, big_closed in closed.items():
                if small < big and not small_closed <= big_closed:
                    result.fail(
                        {"generators": [self.label_point(side, p) for p in sorted(small)]},
                        "closure is not monotone",
                    )
        return result
