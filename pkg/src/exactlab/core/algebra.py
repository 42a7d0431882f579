"""
Structure-constant algebras
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from ..errors import AlgebraSpecError, ContractViolation
from .gf_linalg import Mat, PrimeField

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Algebra:
    """Finite-dimensional associative unital algebra over GF(p)

    ``structure[i, j, k]`` is the coefficient of b_k in b_i * b_j.
    """

    field: PrimeField
    dim: int
    labels: tuple[str, ...]
    structure: np.ndarray
    unit: np.ndarray
    commutative: bool = False
    name: str = "A"

    @cached_property
    def fingerprint(self) -> bytes:
        return (
            self.field.p.to_bytes(4, "little")
            + self.structure.astype(np.int64).tobytes()
            + self.unit.astype(np.int64).tobytes()
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Algebra) and self.fingerprint == other.fingerprint

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def multiply(self, a, b) -> np.ndarray:
        """Product of two coordinate vectors"""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("i,j,ijk->k", a, b, self.structure) % self.field.p

    def power(self, a, k: int) -> np.ndarray:
        result = self.unit.copy()
        for _ in range(k):
            result = self.multiply(result, a)
        return result

    def left_multiplication(self, i: int) -> Mat:
        """Matrix of b_i * (-) in the basis b_0..b_{d-1}"""
        return self.structure[i].T.copy() % self.field.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def violations(self) -> list[str]:
        """List every violated algebra axiom (empty when valid)"""
        p = self.field.p
        c = self.structure
        problems = []

        lhs = np.einsum("ijk,klm->ijlm", c, c) % p
        rhs = np.einsum("jlk,ikm->ijlm", c, c) % p
        bad = np.argwhere((lhs != rhs).any(axis=3))
        if bad.size:
            i, j, l = (int(v) for v in bad[0])
            problems.append(f"associativity violated at basis triple ({i}, {j}, {l})")

        identity = np.eye(self.dim, dtype=np.int64)
        left = np.einsum("i,ijk->jk", self.unit, c) % p
        right = np.einsum("i,jik->jk", self.unit, c) % p
        for j in range(self.dim):
            if (left[j] != identity[j]).any() or (right[j] != identity[j]).any():
                problems.append(f"unit violated at basis {j}")
                break

        if self.commutative:
            asym = np.argwhere((c != c.transpose(1, 0, 2)).any(axis=2))
            if asym.size:
                i, j = (int(v) for v in asym[0])
                problems.append(f"commutativity violated at basis pair ({i}, {j})")
        return problems

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra, chosen greedily"""
        F = self.field
        chosen: list[int] = []
        span = F.row_basis(self.unit.reshape(1, -1), self.dim)
        for i in range(self.dim):
            if F.contains(span, self.basis_vector(i)):
                continue
            chosen.append(i)
            span = self._generated(chosen)
            if span.shape[0] == self.dim:
                break
        return tuple(chosen)

    def _generated(self, indices: list[int]) -> Mat:
        F = self.field
        vectors = [self.unit] + [self.basis_vector(i) for i in indices]
        span = F.row_basis(np.array(vectors), self.dim)
        while True:
            products = [self.multiply(a, b) for a in span for b in span]
            grown = F.row_basis(np.vstack([span, np.array(products)]), self.dim)
            if grown.shape[0] == span.shape[0]:
                return grown
            span = grown

    @cached_property
    def radical(self) -> Mat:
        """Jacobson radical of a commutative algebra, as basis rows

        In characteristic p the map a -> a^p is additive on a commutative
        algebra, so the nilradical is the kernel of a power of it.
        """
        if not self.commutative:
            raise ContractViolation("radical is only computed for commutative algebras")
        F = self.field
        frobenius = np.array(
            [self.power(self.basis_vector(i), F.p) for i in range(self.dim)]
        ).T
        k, reach = 1, F.p
        while reach <= self.dim:
            k += 1
            reach *= F.p
        iterated = F.eye(self.dim)
        for _ in range(k):
            iterated = F.matmul(frobenius, iterated)
        return F.nullspace(iterated)

    def is_local(self, cap: int = 1 << 16) -> bool:
        """True when A / rad A is a field"""
        F = self.field
        J = self.radical
        reps = F.complement(J)
        if reps.shape[0] == 0:
            return False
        if F.count(reps.shape[0]) > cap:
            raise ContractViolation("residue algebra too large to test locality")
        for coefficients in F.coefficient_vectors(reps.shape[0]):
            if not any(coefficients):
                continue
            a = F.combine(coefficients, list(reps))
            mult = np.array([self.multiply(a, self.basis_vector(j)) for j in range(self.dim)]).T
            # a is a unit modulo J iff multiplication by a is onto modulo J
            image = F.subspace_sum(F.row_basis(mult.T, self.dim), J)
            if image.shape[0] < self.dim:
                return False
        return True


def validate_algebra(spec: dict[str, Any]) -> Algebra:
    """Build and validate an Algebra from a plain specification

    Args:
        spec: mapping with p, dim, labels, unit, structure triples
            (i, j, k, coeff) and commutative flag

    Returns:
        The validated Algebra

    Raises:
        AlgebraSpecError: listing every violation found
    """
    violations: list[tuple[str, int | None]] = []
    try:
        field = PrimeField(int(spec.get("p", 2)))
    except ContractViolation as e:
        raise AlgebraSpecError([(str(e), None)]) from e

    dim = int(spec["dim"])
    labels = tuple(spec.get("labels") or [f"b{i}" for i in range(dim)])
    if len(labels) != dim:
        violations.append((f"expected {dim} labels, got {len(labels)}", None))

    structure = np.zeros((dim, dim, dim), dtype=np.int64)
    for n, triple in enumerate(spec.get("structure", [])):
        line = None
        if isinstance(triple, dict):
            line = triple.get("line")
            triple = triple["entry"]
        if len(triple) != 4:
            violations.append((f"structure entry {n} must be (i, j, k, coeff)", line))
            continue
        i, j, k, coeff = (int(v) for v in triple)
        if not all(0 <= v < dim for v in (i, j, k)):
            violations.append((f"structure entry {n} has index out of range", line))
            continue
        structure[i, j, k] = (structure[i, j, k] + coeff) % field.p

    unit = field.vec(spec.get("unit", [1] + [0] * (dim - 1)))
    if unit.shape[0] != dim:
        violations.append((f"unit must have {dim} coordinates", None))
    if violations:
        raise AlgebraSpecError(violations)

    algebra = Algebra(
        field=field,
        dim=dim,
        labels=labels,
        structure=structure,
        unit=unit,
        commutative=bool(spec.get("commutative", False)),
        name=str(spec.get("name", "A")),
    )
    problems = algebra.violations()
    if problems:
        raise AlgebraSpecError([(message, None) for message in problems])
    logger.debug(f"Validated algebra {algebra.name} of dimension {dim}")
    return algebra
