"""
Modules as matrix representations of a structure-constant algebra,
their morphisms, hom-spaces and Krull-Schmidt splitting.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ..errors import ContractViolation, InconclusiveError
from .algebra import Algebra
from .gf_linalg import Mat, PrimeField

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Module:
    """Finite-dimensional module, one action matrix per algebra basis element

    Modules compare equal when they have the same algebra and the same action
    matrices, so equal modules share hom-space caches.
    """

    algebra: Algebra
    dim: int
    action: tuple[Mat, ...]
    label: str = ""

    def __post_init__(self):
        p = self.algebra.field.p
        if len(self.action) != self.algebra.dim:
            raise ContractViolation(
                f"module needs {self.algebra.dim} action matrices, got {len(self.action)}"
            )
        normalized = []
        for a in self.action:
            arr = np.array(a, dtype=np.int64).reshape(self.dim, self.dim) % p
            arr.setflags(write=False)
            normalized.append(arr)
        object.__setattr__(self, "action", tuple(normalized))

    @cached_property
    def key(self) -> tuple:
        return (
            self.algebra.fingerprint,
            self.dim,
            b"".join(a.tobytes() for a in self.action),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Module) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Module({self.label or '?'}, dim={self.dim})"

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    def element_action(self, coefficients) -> Mat:
        """Matrix of the algebra element with the given coordinates"""
        F = self.field
        result = F.zeros(self.dim, self.dim)
        for c, a in zip(coefficients, self.action, strict=True):
            if c:
                result = result + int(c) * a
        return result % F.p

    def violations(self) -> list[str]:
        """Module axioms that fail (empty when the action is valid)"""
        p = self.field.p
        problems = []
        if self.dim == 0:
            return problems
        A = np.stack(self.action)
        lhs = np.einsum("iab,jbc->ijac", A, A) % p
        rhs = np.einsum("ijk,kac->ijac", self.algebra.structure, A) % p
        bad = np.argwhere((lhs != rhs).any(axis=(2, 3)))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            problems.append(f"action violates structure constants at basis pair ({i}, {j})")
        if (self.element_action(self.algebra.unit) != np.eye(self.dim, dtype=np.int64)).any():
            problems.append("unit does not act as the identity")
        return problems


@dataclass(frozen=True, eq=False)
class Morphism:
    """Module homomorphism; ``mat`` has shape (dim dst, dim src)"""

    src: Module
    dst: Module
    mat: Mat

    def __post_init__(self):
        mat = np.array(self.mat, dtype=np.int64) % self.src.field.p
        if mat.size == 0:
            mat = mat.reshape(self.dst.dim, self.src.dim)
        if mat.shape != (self.dst.dim, self.src.dim):
            raise ContractViolation(
                f"morphism matrix has shape {mat.shape}, "
                f"expected ({self.dst.dim}, {self.src.dim})"
            )
        object.__setattr__(self, "mat", mat)

    @property
    def field(self) -> PrimeField:
        return self.src.field

    def intertwines(self) -> bool:
        F = self.field
        return all(
            (F.matmul(self.mat, a) == F.matmul(b, self.mat)).all()
            for a, b in zip(self.src.action, self.dst.action, strict=True)
        )

    def is_zero(self) -> bool:
        return not self.mat.any()

    def rank(self) -> int:
        return self.field.rank(self.mat)

    def __add__(self, other: "Morphism") -> "Morphism":
        _check_parallel(self, other)
        return Morphism(self.src, self.dst, self.field.add(self.mat, other.mat))

    def __sub__(self, other: "Morphism") -> "Morphism":
        _check_parallel(self, other)
        return Morphism(self.src, self.dst, self.field.sub(self.mat, other.mat))

    def __neg__(self) -> "Morphism":
        return Morphism(self.src, self.dst, self.field.neg(self.mat))


def _check_parallel(f: Morphism, g: Morphism):
    if f.src != g.src or f.dst != g.dst:
        raise ContractViolation("morphisms are not parallel")


def zero_module(algebra: Algebra) -> Module:
    return Module(
        algebra, 0, tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(algebra.dim)), "0"
    )


def regular_module(algebra: Algebra, label: str = "R") -> Module:
    return Module(
        algebra,
        algebra.dim,
        tuple(algebra.left_multiplication(i) for i in range(algebra.dim)),
        label,
    )


def identity(M: Module) -> Morphism:
    return Morphism(M, M, M.field.eye(M.dim))


def zero_morphism(M: Module, N: Module) -> Morphism:
    return Morphism(M, N, M.field.zeros(N.dim, M.dim))


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f"""
    if f.dst != g.src:
        raise ContractViolation(
            f"endpoint mismatch: {f.dst!r} is not the source {g.src!r}"
        )
    return Morphism(f.src, g.dst, f.field.matmul(g.mat, f.mat))


def is_isomorphism(f: Morphism) -> bool:
    return f.field.is_invertible(f.mat)


def inverse(f: Morphism) -> Morphism:
    inv = f.field.inverse(f.mat)
    if inv is None:
        raise ContractViolation("morphism is not invertible")
    return Morphism(f.dst, f.src, inv)


# ------------------------------------------------------------------ hom-spaces


@lru_cache(maxsize=8192)
def _hom_basis(M: Module, N: Module) -> tuple[Mat, ...]:
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return ()
    blocks = []
    eye_m, eye_n = F.eye(m), F.eye(n)
    # X A_i = B_i X with X flattened row-major
    for i in M.algebra.generators:
        A, B = M.action[i], N.action[i]
        blocks.append((np.kron(eye_n, A.T) - np.kron(B, eye_m)) % F.p)
    if blocks:
        null = F.nullspace(np.vstack(blocks))
    else:
        null = F.eye(m * n)
    basis = []
    for row in null:
        X = row.reshape(n, m).copy()
        X.setflags(write=False)
        basis.append(X)
    return tuple(basis)


def hom_space(M: Module, N: Module) -> list[Morphism]:
    """Canonical basis of Hom(M, N)"""
    if M.algebra != N.algebra:
        raise ContractViolation("modules over different algebras")
    return [Morphism(M, N, X) for X in _hom_basis(M, N)]


def hom_dim(M: Module, N: Module) -> int:
    return len(_hom_basis(M, N))


def hom_rows(M: Module, N: Module) -> Mat:
    """Hom(M, N) basis flattened into rows"""
    basis = _hom_basis(M, N)
    if not basis:
        return M.field.zeros(0, M.dim * N.dim)
    return np.array([X.reshape(-1) for X in basis], dtype=np.int64)


def hom_coordinates(M: Module, N: Module, mat: Mat) -> np.ndarray:
    """Coordinates of a morphism matrix in the canonical Hom(M, N) basis"""
    F = M.field
    rows = hom_rows(M, N)
    coeffs = F.coords(rows.T, np.asarray(mat, dtype=np.int64).reshape(-1, 1))
    return coeffs[:, 0]


def hom_elements(M: Module, N: Module, cap: int, cell: str = ""):
    """Iterate all of Hom(M, N), refusing when it is larger than ``cap``"""
    F = M.field
    basis = _hom_basis(M, N)
    if F.count(len(basis)) > cap:
        raise InconclusiveError(
            f"Hom space of dimension {len(basis)} is too large to enumerate", cap, cell
        )
    for X in F.span_elements(list(basis), shape=(N.dim, M.dim)):
        yield Morphism(M, N, X)


# --------------------------------------------------------------- direct sums


@dataclass(frozen=True)
class Biproduct:
    """Direct sum with its canonical inclusions and projections"""

    module: Module
    inclusions: tuple[Morphism, ...]
    projections: tuple[Morphism, ...]


def direct_sum_many(modules: list[Module], label: str | None = None) -> Biproduct:
    if not modules:
        raise ContractViolation("direct sum of an empty list needs an algebra; use zero_module")
    algebra = modules[0].algebra
    F = algebra.field
    total = sum(M.dim for M in modules)
    action = []
    for i in range(algebra.dim):
        block = F.zeros(total, total)
        offset = 0
        for M in modules:
            block[offset : offset + M.dim, offset : offset + M.dim] = M.action[i]
            offset += M.dim
        action.append(block)
    if label is None:
        parts = [M.label for M in modules if M.dim > 0]
        label = "+".join(parts) if parts else "0"
    S = Module(algebra, total, tuple(action), label)

    inclusions, projections = [], []
    offset = 0
    for M in modules:
        emb = F.zeros(total, M.dim)
        emb[offset : offset + M.dim, :] = F.eye(M.dim)
        inclusions.append(Morphism(M, S, emb))
        projections.append(Morphism(S, M, emb.T.copy()))
        offset += M.dim
    return Biproduct(S, tuple(inclusions), tuple(projections))


def direct_sum(M: Module, N: Module) -> Biproduct:
    return direct_sum_many([M, N])


def stack_morphisms(maps: list[Morphism], dst: Module | None = None) -> Morphism:
    """The map X -> Y_1 + ... + Y_k with components ``maps``"""
    src = maps[0].src
    if any(f.src != src for f in maps):
        raise ContractViolation("stacked morphisms need a common source")
    if dst is None:
        dst = direct_sum_many([f.dst for f in maps]).module
    return Morphism(src, dst, np.vstack([f.mat for f in maps]))


def join_morphisms(maps: list[Morphism], src: Module | None = None) -> Morphism:
    """The map X_1 + ... + X_k -> Y with components ``maps``"""
    dst = maps[0].dst
    if any(f.dst != dst for f in maps):
        raise ContractViolation("joined morphisms need a common target")
    if src is None:
        src = direct_sum_many([f.src for f in maps]).module
    return Morphism(src, dst, np.hstack([f.mat for f in maps]))


def diagonal_sum(maps: list[Morphism]) -> Morphism:
    """f_1 + ... + f_k between the direct sums of sources and targets"""
    src = direct_sum_many([f.src for f in maps]).module
    dst = direct_sum_many([f.dst for f in maps]).module
    F = src.field
    mat = F.zeros(dst.dim, src.dim)
    r = c = 0
    for f in maps:
        mat[r : r + f.dst.dim, c : c + f.src.dim] = f.mat
        r += f.dst.dim
        c += f.src.dim
    return Morphism(src, dst, mat)


# ----------------------------------------------------- submodules, quotients


def submodule(M: Module, rows: Mat, label: str = "") -> tuple[Module, Morphism]:
    """Submodule spanned by ``rows`` together with its inclusion"""
    F = M.field
    basis = F.row_basis(rows, M.dim)
    k = basis.shape[0]
    B = basis.T
    action = []
    for a in M.action:
        if k == 0:
            action.append(F.zeros(0, 0))
            continue
        try:
            action.append(F.coords(B, F.matmul(a, B)))
        except ContractViolation as e:
            raise ContractViolation("subspace is not a submodule") from e
    K = Module(M.algebra, k, tuple(action), label)
    return K, Morphism(K, M, B)


@dataclass(frozen=True)
class Quotient:
    """M / U with the projection and a linear section of it"""

    module: Module
    projection: Morphism
    section: Mat  # dim M x dim Q, projection @ section = 1


def quotient(M: Module, rows: Mat, label: str = "") -> Quotient:
    F = M.field
    sub = F.row_basis(rows, M.dim)
    reps = F.complement(sub)
    r = reps.shape[0]
    if r == 0:
        Q = Module(M.algebra, 0, tuple(F.zeros(0, 0) for _ in M.action), label or "0")
        return Quotient(Q, Morphism(M, Q, F.zeros(0, M.dim)), F.zeros(M.dim, 0))
    T = np.hstack([reps.T, sub.T]) if sub.shape[0] else reps.T.copy()
    T_inv = F.inverse(T)
    P = T_inv[:r, :]
    C = reps.T.copy()
    action = [F.matmul(P, a, C) for a in M.action]
    Q = Module(M.algebra, r, tuple(action), label)
    return Quotient(Q, Morphism(M, Q, P), C)


# ------------------------------------------------------ Krull-Schmidt pieces


@dataclass(frozen=True)
class Summand:
    """Direct summand of a module with its split inclusion and projection"""

    module: Module
    inclusion: Morphism
    projection: Morphism

    @property
    def idempotent(self) -> Morphism:
        return compose(self.inclusion, self.projection)


def _matrix_power(F: PrimeField, A: Mat, k: int) -> Mat:
    result = F.eye(A.shape[0])
    base = A.copy()
    while k:
        if k & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        k >>= 1
    return result


def _fitting_split(M: Module, e: Mat) -> tuple[Mat, Mat] | None:
    F = M.field
    power = _matrix_power(F, e, M.dim)
    r = F.rank(power)
    if 0 < r < M.dim:
        return F.row_basis(power.T, M.dim), F.nullspace(power)
    return None


def find_splitting(M: Module, cap: int) -> tuple[Mat, Mat] | None:
    """A nontrivial decomposition M = A + B as two subspace bases, or None

    None certifies indecomposability: every endomorphism was inspected and
    each was nilpotent or invertible.

    Raises:
        InconclusiveError: End(M) is larger than ``cap`` and neither basis
            elements nor their pairwise sums split M
    """
    F = M.field
    basis = [h.mat for h in hom_space(M, M)]
    if F.count(len(basis)) <= cap:
        for e in F.span_elements(basis, shape=(M.dim, M.dim)):
            split = _fitting_split(M, e)
            if split is not None:
                return split
        return None

    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append(F.add(basis[i], basis[j]))
    for e in candidates:
        split = _fitting_split(M, e)
        if split is not None:
            return split
    raise InconclusiveError("indecomposability undecidable", cap, M.label)


def split_along(M: Module, first: Mat, second: Mat) -> tuple[Summand, Summand]:
    F = M.field
    A, inc_a = submodule(M, first)
    B, inc_b = submodule(M, second)
    T_inv = F.inverse(np.hstack([inc_a.mat, inc_b.mat]))
    if T_inv is None:
        raise ContractViolation("subspaces do not form a direct sum decomposition")
    proj_a = Morphism(M, A, T_inv[: A.dim, :])
    proj_b = Morphism(M, B, T_inv[A.dim :, :])
    return Summand(A, inc_a, proj_a), Summand(B, inc_b, proj_b)


def indecompose(M: Module, cap: int) -> list[Summand]:
    """Krull-Schmidt decomposition through Fitting splittings

    Args:
        M: module to decompose
        cap: largest endomorphism ring enumerated exhaustively

    Returns:
        Indecomposable summands with split inclusions/projections into M
    """
    if M.dim == 0:
        return []
    split = find_splitting(M, cap)
    if split is None:
        return [Summand(M, identity(M), identity(M))]
    pieces = []
    for part in split_along(M, *split):
        for inner in indecompose(part.module, cap):
            pieces.append(
                Summand(
                    inner.module,
                    compose(part.inclusion, inner.inclusion),
                    compose(inner.projection, part.projection),
                )
            )
    return pieces


def are_isomorphic(M: Module, N: Module, cap: int) -> Morphism | None:
    """An explicit isomorphism M -> N, or None when there is none"""
    F = M.field
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return zero_morphism(M, N)
    basis = hom_space(M, N)
    if not basis:
        return None
    if F.count(len(basis)) <= cap:
        for X in F.span_elements([h.mat for h in basis]):
            if F.is_invertible(X):
                return Morphism(M, N, X)
        return None

    logger.debug(f"Hom({M.label}, {N.label}) exceeds cap; comparing decompositions")
    parts_m = indecompose(M, cap)
    parts_n = indecompose(N, cap)
    if len(parts_m) == 1 and len(parts_n) == 1:
        raise InconclusiveError(
            "cap exceeded and decomposition failed", cap, f"{M.label} vs {N.label}"
        )
    if len(parts_m) != len(parts_n):
        return None
    unused = list(range(len(parts_n)))
    total = F.zeros(N.dim, M.dim)
    for part in parts_m:
        for idx in unused:
            iso = are_isomorphic(part.module, parts_n[idx].module, cap)
            if iso is not None:
                unused.remove(idx)
                total = F.add(
                    total, F.matmul(parts_n[idx].inclusion.mat, iso.mat, part.projection.mat)
                )
                break
        else:
            return None
    return Morphism(M, N, total)


# ------------------------------------------------------------- free covers


def radical_submodule(M: Module) -> Mat:
    """rad(A) M as basis rows; needs a commutative algebra"""
    F = M.field
    J = M.algebra.radical
    vectors = []
    for j in J:
        act = M.element_action(j)
        vectors.extend(act.T)
    if not vectors:
        return F.zeros(0, M.dim)
    return F.row_basis(np.array(vectors), M.dim)


def generated_submodule(M: Module, vectors: Mat) -> Mat:
    F = M.field
    if len(vectors) == 0:
        return F.zeros(0, M.dim)
    images = [F.matmul(a, np.asarray(vectors).T).T for a in M.action]
    return F.row_basis(np.vstack(images), M.dim)


def top_generators(M: Module) -> Mat:
    """Generating vectors for M, minimal when the radical is computable"""
    F = M.field
    if M.algebra.commutative:
        return F.complement(radical_submodule(M))
    chosen: list[np.ndarray] = []
    span = F.zeros(0, M.dim)
    for v in F.eye(M.dim):
        if F.contains(span, v):
            continue
        chosen.append(v)
        span = generated_submodule(M, np.array(chosen))
    return np.array(chosen, dtype=np.int64).reshape(-1, M.dim)


def free_module(algebra: Algebra, rank: int) -> Module:
    R = regular_module(algebra)
    if rank == 0:
        return zero_module(algebra)
    label = "R" if rank == 1 else f"R^{rank}"
    return direct_sum_many([R] * rank, label).module


def free_cover(M: Module) -> Morphism:
    """Surjection from a free module onto M, one copy per top generator"""
    F = M.field
    algebra = M.algebra
    gens = top_generators(M)
    P = free_module(algebra, gens.shape[0])
    columns = []
    for g in gens:
        for a in M.action:
            columns.append(F.matmul(a, g.reshape(-1, 1)))
    mat = np.hstack(columns) if columns else F.zeros(M.dim, 0)
    return Morphism(P, M, mat)
