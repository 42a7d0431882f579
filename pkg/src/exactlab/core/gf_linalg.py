"""
GF(p) Linear Algebra
Exact dense linear algebra over prime fields on numpy int64 arrays.

Conventions:
    - a matrix is a 2-D ``np.ndarray`` of dtype int64 with entries in [0, p)
    - a subspace is given by a basis whose ROWS are the basis vectors; the
      canonical basis of a subspace is the nonzero part of its rref
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import ContractViolation

logger = logging.getLogger(__name__)

Mat = np.ndarray


def is_prime(n: int) -> bool:
    """Trial-division primality test"""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class SubspaceOps:
    """Sum, intersection and quotient of two subspaces A and B"""

    field: "PrimeField"
    basis_a: Mat
    basis_b: Mat
    sum_basis: Mat
    intersection_basis: Mat
    quotient_basis: Mat  # representatives of (A + B) / A

    def in_a(self, v) -> bool:
        return self.field.contains(self.basis_a, v)

    def in_b(self, v) -> bool:
        return self.field.contains(self.basis_b, v)


@dataclass(frozen=True)
class PrimeField:
    """Prime field GF(p)"""

    p: int = 2

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise ContractViolation(f"p = {self.p} is not prime")

    # ------------------------------------------------------------------ basics

    def mat(self, rows, cols: int | None = None) -> Mat:
        """Build a reduced 2-D matrix; ``cols`` fixes the width of empty input"""
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            if arr.size == 0:
                return self.zeros(0, cols or 0)
            arr = arr.reshape(1, -1)
        return arr % self.p

    def vec(self, entries) -> np.ndarray:
        return np.array(entries, dtype=np.int64).reshape(-1) % self.p

    def zeros(self, rows: int, cols: int) -> Mat:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> Mat:
        return np.eye(n, dtype=np.int64)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def matmul(self, *mats: Mat) -> Mat:
        result = mats[0]
        for m in mats[1:]:
            if result.shape[1] != m.shape[0]:
                raise ContractViolation(
                    f"cannot multiply {result.shape} by {m.shape}"
                )
            result = (result @ m) % self.p
        return result

    def neg(self, A: Mat) -> Mat:
        return (-A) % self.p

    def add(self, A: Mat, B: Mat) -> Mat:
        return (A + B) % self.p

    def sub(self, A: Mat, B: Mat) -> Mat:
        return (A - B) % self.p

    # ------------------------------------------------------------ elimination

    def rref(self, A: Mat) -> tuple[Mat, list[int]]:
        """Reduced row echelon form

        Args:
            A: matrix over GF(p)

        Returns:
            (R, pivots) with pivots the increasing list of pivot columns
        """
        p = self.p
        R = np.array(A, dtype=np.int64) % p
        if R.ndim != 2:
            raise ContractViolation("rref expects a 2-D matrix")
        rows, cols = R.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nonzero = np.nonzero(R[r:, c])[0]
            if nonzero.size == 0:
                continue
            pivot_row = r + int(nonzero[0])
            if pivot_row != r:
                R[[r, pivot_row]] = R[[pivot_row, r]]
            R[r] = (R[r] * self.inv(R[r, c])) % p
            column = R[:, c].copy()
            column[r] = 0
            if column.any():
                R = (R - np.outer(column, R[r])) % p
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, A: Mat) -> int:
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def row_basis(self, vectors: Mat, dim: int | None = None) -> Mat:
        """Canonical echelon basis of the row span"""
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.size == 0:
            width = dim if dim is not None else (vectors.shape[-1] if vectors.ndim == 2 else 0)
            return self.zeros(0, width)
        R, pivots = self.rref(vectors)
        return R[: len(pivots)].copy()

    def nullspace(self, A: Mat) -> Mat:
        """Canonical basis (as rows) of {x : A x = 0}"""
        rows, cols = A.shape
        if rows == 0:
            return self.eye(cols)
        R, pivots = self.rref(A)
        pivot_set = set(pivots)
        free = [c for c in range(cols) if c not in pivot_set]
        basis = self.zeros(len(free), cols)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-R[i, f]) % self.p
        return self.row_basis(basis, cols)

    def solve(self, A: Mat, b) -> tuple[np.ndarray, Mat] | None:
        """Solve A x = b

        Returns:
            (x0, nullbasis) or None when the system is inconsistent
        """
        b = np.asarray(b, dtype=np.int64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ContractViolation(
                f"solve: matrix of shape {A.shape} against vector of length {b.shape[0]}"
            )
        X = self.solve_many(A, b.reshape(-1, 1))
        if X is None:
            return None
        return X[:, 0].copy(), self.nullspace(A)

    def solve_many(self, A: Mat, B: Mat) -> Mat | None:
        """One particular solution X of A X = B, or None"""
        if A.shape[0] != B.shape[0]:
            raise ContractViolation(
                f"solve: matrix of shape {A.shape} against right side {B.shape}"
            )
        n = A.shape[1]
        if A.shape[0] == 0:
            return self.zeros(n, B.shape[1])
        R, pivots = self.rref(np.hstack([A, B]))
        if pivots and pivots[-1] >= n:
            return None
        X = self.zeros(n, B.shape[1])
        for i, pc in enumerate(pivots):
            X[pc] = R[i, n:]
        return X

    def inverse(self, A: Mat) -> Mat | None:
        n, m = A.shape
        if n != m:
            return None
        if n == 0:
            return self.zeros(0, 0)
        R, pivots = self.rref(np.hstack([A, self.eye(n)]))
        if len(pivots) < n or pivots[n - 1] != n - 1:
            return None
        return R[:, n:].copy()

    def is_invertible(self, A: Mat) -> bool:
        return A.shape[0] == A.shape[1] and self.rank(A) == A.shape[0]

    def coords(self, basis_cols: Mat, vectors: Mat) -> Mat:
        """Coordinates C with basis_cols @ C = vectors; the columns must be independent"""
        C = self.solve_many(basis_cols, vectors)
        if C is None:
            raise ContractViolation("vectors do not lie in the span of the basis")
        return C

    # -------------------------------------------------------------- subspaces

    def contains(self, basis: Mat, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1) % self.p
        if not v.any():
            return True
        if basis.shape[0] == 0:
            return False
        return self.rank(np.vstack([basis, v])) == self.rank(basis)

    def subspace_sum(self, A: Mat, B: Mat) -> Mat:
        return self.row_basis(np.vstack([A, B]), A.shape[1])

    def intersection(self, A: Mat, B: Mat) -> Mat:
        n = A.shape[1]
        if A.shape[0] == 0 or B.shape[0] == 0:
            return self.zeros(0, n)
        stacked = np.vstack([A, self.neg(B)]).T
        null = self.nullspace(stacked)
        if null.shape[0] == 0:
            return self.zeros(0, n)
        vectors = self.matmul(null[:, : A.shape[0]], A)
        return self.row_basis(vectors, n)

    def complement(self, sub: Mat, ambient: Mat | None = None) -> Mat:
        """Representatives of ambient / sub, drawn greedily from rref(ambient)"""
        n = sub.shape[1]
        if ambient is None:
            ambient = self.eye(n)
        current = self.row_basis(sub, n)
        reps = []
        for v in self.row_basis(ambient, n):
            if not self.contains(current, v):
                reps.append(v)
                current = self.row_basis(np.vstack([current, v]), n)
        if not reps:
            return self.zeros(0, n)
        return np.array(reps, dtype=np.int64)

    def subspace_ops(self, A: Mat, B: Mat) -> SubspaceOps:
        if A.shape[1] != B.shape[1]:
            raise ContractViolation("subspaces live in different ambient spaces")
        A = self.row_basis(A, A.shape[1])
        B = self.row_basis(B, B.shape[1])
        total = self.subspace_sum(A, B)
        return SubspaceOps(
            field=self,
            basis_a=A,
            basis_b=B,
            sum_basis=total,
            intersection_basis=self.intersection(A, B),
            quotient_basis=self.complement(A, total),
        )

    # ------------------------------------------------------------ enumeration

    def count(self, k: int) -> int:
        """Number of vectors in a k-dimensional space"""
        return self.p**k

    def coefficient_vectors(self, k: int) -> Iterator[tuple[int, ...]]:
        return product(range(self.p), repeat=k)

    def combine(self, coefficients, items: list[Mat]) -> Mat:
        """Linear combination of equally shaped matrices"""
        result = np.zeros_like(items[0])
        for c, item in zip(coefficients, items, strict=True):
            if c:
                result = result + int(c) * item
        return result % self.p

    def span_elements(self, items: list[Mat], shape: tuple[int, ...] | None = None) -> Iterator[Mat]:
        """Every element of span(items), in lexicographic coefficient order

        The empty family spans the zero space; ``shape`` names its zero.
        """
        if not items:
            if shape is None:
                raise ContractViolation("the span of no items needs a shape")
            yield np.zeros(shape, dtype=np.int64)
            return
        for coefficients in self.coefficient_vectors(len(items)):
            yield self.combine(coefficients, items)

    def orbit_representatives(self, generators: list[Mat], k: int, chunk: int = 1 << 16) -> Mat:
        """One vector per orbit of GF(p)^k under the group the generators span

        Vectors are numbered by their base-p digits; each orbit is represented
        by its lowest-numbered member. Rows of the result, in that order.
        """
        n = self.count(k)
        powers = self.p ** np.arange(k, dtype=np.int64)
        index = np.arange(n, dtype=np.int64)
        images = [np.empty(n, dtype=np.int32) for _ in generators]
        for start in range(0, n, chunk):
            block = index[start : start + chunk]
            vectors = (block[:, None] // powers[None, :]) % self.p
            for image, g in zip(images, generators, strict=True):
                image[start : start + chunk] = ((vectors @ g.T) % self.p) @ powers
        labels = index.astype(np.int32)
        while True:
            previous = labels
            for image in images:
                labels = np.minimum(labels, labels[image])
            labels = labels[labels]
            if np.array_equal(labels, previous):
                break
        reps = np.flatnonzero(labels == index)
        return (reps[:, None] // powers[None, :]) % self.p
