"""
Bounded object universe: all direct sums of the seed indecomposables with
multiplicities up to a bound, in lexicographic multiplicity order.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from ..errors import AlgebraSpecError, OutOfUniverseError
from .algebra import Algebra
from .gf_linalg import Mat, PrimeField
from .modules import (
    Module,
    Morphism,
    are_isomorphic,
    compose,
    diagonal_sum,
    direct_sum_many,
    hom_dim,
    hom_space,
    identity,
    indecompose,
    submodule,
    zero_module,
)

logger = logging.getLogger(__name__)

Mult = tuple[int, ...]


@dataclass(frozen=True)
class UniverseObject:
    """One object of the universe"""

    id: int
    mult: Mult
    module: Module
    label: str


@dataclass(frozen=True)
class Decomposition:
    """Multiplicity vector of a module and an iso from the standard sum onto it"""

    mult: Mult
    iso: Morphism


class Universe:
    """Direct sums of seeds with multiplicities in [0, mult_bound]"""

    def __init__(
        self,
        seeds: list[Module],
        mult_bound: int,
        cap: int,
        seeds_complete: bool = False,
    ):
        if not seeds:
            raise AlgebraSpecError([("seed list is empty", None)])
        self.seeds = list(seeds)
        self.algebra: Algebra = seeds[0].algebra
        self.mult_bound = mult_bound
        self.cap = cap
        self.seeds_complete = seeds_complete
        self.objects: list[UniverseObject] = []
        self._index: dict[Mult, int] = {}
        for mult in product(range(mult_bound + 1), repeat=len(seeds)):
            module = self.module_for(mult)
            obj = UniverseObject(len(self.objects), mult, module, module.label)
            self._index[mult] = obj.id
            self.objects.append(obj)
        self._profiles: dict[tuple, Mult] = {}
        self._homs: dict[tuple[int, int], list[Morphism]] = {}
        self._by_module = {obj.module: obj.id for obj in self.objects}
        if seeds_complete:
            for obj in self.objects:
                self._profiles[self.hom_profile(obj.module)] = obj.mult

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @property
    def zero_id(self) -> int:
        return 0

    def ids(self) -> list[int]:
        return list(range(len(self.objects)))

    def obj(self, oid: int) -> UniverseObject:
        return self.objects[oid]

    def label(self, oid: int) -> str:
        return self.objects[oid].label

    def mult(self, oid: int) -> Mult:
        return self.objects[oid].mult

    def id_of(self, mult: Mult) -> int | None:
        return self._index.get(tuple(mult))

    @cached_property
    def seed_ids(self) -> list[int]:
        """Universe ids of the seeds themselves"""
        result = []
        for i in range(len(self.seeds)):
            mult = [0] * len(self.seeds)
            mult[i] = 1
            result.append(self._index[tuple(mult)])
        return result

    def seed_index(self, oid: int) -> int | None:
        mult = self.mult(oid)
        if sum(mult) == 1:
            return mult.index(1)
        return None

    def label_for(self, mult: Mult) -> str:
        parts = []
        for seed, m in zip(self.seeds, mult, strict=True):
            if m == 1:
                parts.append(seed.label)
            elif m > 1:
                parts.append(f"{seed.label}^{m}")
        return "+".join(parts) if parts else "0"

    def id_by_label(self, text: str) -> int:
        wanted = text.replace(" ", "")
        for obj in self.objects:
            if obj.label == wanted:
                return obj.id
        raise AlgebraSpecError([(f"unknown object label '{text}'", None)])

    def module_for(self, mult: Mult) -> Module:
        """Standard direct sum, seeds in seed order; mult may exceed the bound"""
        parts = []
        for seed, m in zip(self.seeds, mult, strict=True):
            parts.extend([seed] * m)
        if not parts:
            return zero_module(self.algebra)
        return direct_sum_many(parts, self.label_for(mult)).module

    def blocks(self, mult: Mult) -> list[tuple[int, int, int]]:
        """(seed index, copy number, offset) for each summand of module_for(mult)"""
        result = []
        offset = 0
        for s, m in enumerate(mult):
            for copy in range(m):
                result.append((s, copy, offset))
                offset += self.seeds[s].dim
        return result

    def block_automorphisms(self, mult: Mult) -> list[Mat]:
        """Automorphisms 1 + h of module_for(mult), h one basis map between two summands"""
        F = self.field
        blocks = self.blocks(mult)
        dim = sum(seed.dim * m for seed, m in zip(self.seeds, mult, strict=True))
        found = []
        for s, copy, offset in blocks:
            for t, other, source in blocks:
                if (s, copy) == (t, other):
                    continue
                for h in self._seed_homs(t, s):
                    g = F.eye(dim)
                    g[offset : offset + h.dst.dim, source : source + h.src.dim] = h.mat
                    found.append(g)
        return found

    def _seed_homs(self, t: int, s: int) -> list[Morphism]:
        key = (t, s)
        if key not in self._homs:
            self._homs[key] = hom_space(self.seeds[t], self.seeds[s])
        return self._homs[key]

    # -------------------------------------------------------------- arithmetic

    def add(self, a: int, b: int) -> int | None:
        total = tuple(x + y for x, y in zip(self.mult(a), self.mult(b), strict=True))
        return self.id_of(total)

    def summand_ids(self, oid: int) -> list[int]:
        """Ids of all direct summands of an object (including 0 and itself)"""
        ranges = [range(m + 1) for m in self.mult(oid)]
        return sorted(self._index[tuple(sub)] for sub in product(*ranges))

    def is_summand(self, a: int, b: int) -> bool:
        return all(x <= y for x, y in zip(self.mult(a), self.mult(b), strict=True))

    def support(self, oid: int) -> set[int]:
        return {s for s, m in enumerate(self.mult(oid)) if m}

    # ------------------------------------------------------------ decomposition

    def hom_profile(self, M: Module) -> tuple:
        return (M.dim, *(hom_dim(W, M) for W in self.seeds))

    def decompose(self, M: Module) -> Decomposition:
        """Split seed summands off M one at a time

        A seed W (local endomorphism ring) is a summand of M iff some basis
        pair s: W -> M, r: M -> W has r s invertible.

        Raises:
            OutOfUniverseError: M has a summand that is not a seed
        """
        F = self.field
        remaining, into_m = M, identity(M)
        pieces: list[tuple[int, Morphism]] = []
        while remaining.dim > 0:
            found = None
            for w, W in enumerate(self.seeds):
                if W.dim > remaining.dim:
                    continue
                sections = hom_space(W, remaining)
                retractions = hom_space(remaining, W)
                for s in sections:
                    for r in retractions:
                        rs = F.matmul(r.mat, s.mat)
                        rs_inv = F.inverse(rs)
                        if rs_inv is not None:
                            found = (w, s, F.matmul(rs_inv, r.mat))
                            break
                    if found:
                        break
                if found:
                    break
            if found is None:
                mult = self._count(pieces)
                raise OutOfUniverseError(
                    f"module {M.label or '?'} has a summand outside the seed list", mult
                )
            w, s, retraction = found
            pieces.append((w, compose(into_m, s)))
            rest, rest_incl = submodule(remaining, F.nullspace(retraction))
            into_m = compose(into_m, rest_incl)
            remaining = rest

        mult = self._count(pieces)
        ordered = sorted(pieces, key=lambda piece: piece[0])
        std = self.module_for(mult)
        if ordered:
            mat = np.hstack([f.mat for _, f in ordered])
        else:
            mat = F.zeros(M.dim, 0)
        return Decomposition(mult, Morphism(std, M, mat))

    def _count(self, pieces) -> Mult:
        counts = [0] * len(self.seeds)
        for w, _ in pieces:
            counts[w] += 1
        return tuple(counts)

    def classify(self, M: Module) -> Mult:
        """Multiplicity vector of M over the seeds (possibly beyond the bound)"""
        if self.seeds_complete:
            known = self._profiles.get(self.hom_profile(M))
            if known is not None:
                return known
        return self.decompose(M).mult

    def locate(self, M: Module) -> int:
        """Universe id of the object isomorphic to M

        Raises:
            OutOfUniverseError: with the multiplicity vector M would need
        """
        mult = self.classify(M)
        oid = self.id_of(mult)
        if oid is None:
            raise OutOfUniverseError(f"module {M.label or '?'} escapes the bound", mult)
        return oid

    def try_locate(self, M: Module) -> tuple[int | None, Mult]:
        mult = self.classify(M)
        return self.id_of(mult), mult

    def locate_with_iso(self, M: Module) -> tuple[int, Morphism]:
        """Universe id and an iso from the universe module onto M"""
        oid = self._by_module.get(M)
        if oid is not None:
            return oid, Morphism(self.objects[oid].module, M, self.field.eye(M.dim))
        dec = self.decompose(M)
        oid = self.id_of(dec.mult)
        if oid is None:
            raise OutOfUniverseError(f"module {M.label or '?'} escapes the bound", dec.mult)
        iso = Morphism(self.objects[oid].module, M, dec.iso.mat)
        return oid, iso

    # ----------------------------------------------------------- block maps

    def regroup(self, mult: Mult, first: set[int]) -> tuple[Mult, Mult, Morphism]:
        """Permutation iso module_for(mult) -> module_for(a) + module_for(b)

        a keeps the seeds in ``first`` and b the others.
        """
        F = self.field
        a = tuple(m if s in first else 0 for s, m in enumerate(mult))
        b = tuple(0 if s in first else m for s, m in enumerate(mult))
        src = self.module_for(mult)
        target = direct_sum_many([self.module_for(a), self.module_for(b)])
        order = [blk for blk in self.blocks(mult) if blk[0] in first]
        order += [blk for blk in self.blocks(mult) if blk[0] not in first]
        perm = F.zeros(src.dim, src.dim)
        row = 0
        for s, _, offset in order:
            for k in range(self.seeds[s].dim):
                perm[row, offset + k] = 1
                row += 1
        return a, b, Morphism(src, target.module, perm)

    def sum_over_blocks(self, mult: Mult, maps: dict[int, Morphism]) -> Morphism:
        """Diagonal map from module_for(mult) built from one map per seed"""
        parts = []
        for s, m in enumerate(mult):
            if m:
                parts.extend([maps[s]] * m)
        if not parts:
            raise OutOfUniverseError("no blocks to sum over", mult)
        total = diagonal_sum(parts)
        return Morphism(self.module_for(mult), total.dst, total.mat)


def build_universe(
    seeds: list[Module], mult_bound: int, cap: int, seeds_complete: bool = False
) -> Universe:
    """Verify the seeds and build the bounded universe

    Raises:
        AlgebraSpecError: a seed is invalid, decomposable, or isomorphic to
            an earlier seed
    """
    problems: list[tuple[str, int | None]] = []
    for n, seed in enumerate(seeds):
        for message in seed.violations():
            problems.append((f"seed {n} ({seed.label}): {message}", None))
    if problems:
        raise AlgebraSpecError(problems)

    for n, seed in enumerate(seeds):
        if seed.dim == 0 or len(indecompose(seed, cap)) != 1:
            raise AlgebraSpecError([(f"decomposable seed {n} ({seed.label})", None)])
    for i in range(len(seeds)):
        for j in range(i + 1, len(seeds)):
            if are_isomorphic(seeds[i], seeds[j], cap) is not None:
                raise AlgebraSpecError(
                    [(f"duplicate iso-class: seeds {i} and {j}", None)]
                )

    universe = Universe(seeds, mult_bound, cap, seeds_complete)
    logger.info(
        f"Built universe of {len(universe)} objects over {len(seeds)} seeds "
        f"(bound {mult_bound})"
    )
    return universe
