import numpy as np
import pytest

from exactlab.core.gf_linalg import PrimeField, is_prime
from exactlab.errors import ContractViolation

FIELDS = [2, 3, 5]


def random_matrices(p: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        rows, cols = (int(v) for v in rng.integers(1, 6, size=2))
        yield rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def random_invertible(F: PrimeField, n: int, rng) -> np.ndarray:
    while True:
        P = rng.integers(0, F.p, size=(n, n), dtype=np.int64)
        if F.is_invertible(P):
            return P


@pytest.mark.parametrize("n,expected", [(1, False), (2, True), (4, False), (7, True), (9, False)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_non_prime_field_is_refused():
    with pytest.raises(ContractViolation):
        PrimeField(4)


def test_rref_known_matrix():
    F = PrimeField(3)
    R, pivots = F.rref(F.mat([[2, 1, 0], [1, 2, 1]]))
    assert pivots == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_inconsistent_system_has_no_solution():
    F = PrimeField(2)
    assert F.solve(F.mat([[1, 0], [0, 0]]), [0, 1]) is None


def test_nullspace_of_empty_system_is_everything():
    F = PrimeField(5)
    assert (F.nullspace(F.zeros(0, 3)) == np.eye(3, dtype=np.int64)).all()


@pytest.mark.parametrize("p", FIELDS)
def test_linear_algebra_properties(p):
    F = PrimeField(p)
    rng = np.random.default_rng(p)
    for A in random_matrices(p, 500, seed=100 + p):
        rows, cols = A.shape
        R, pivots = F.rref(A)
        # rref is idempotent
        assert (F.rref(R)[0] == R).all()
        # rank-nullity
        null = F.nullspace(A)
        assert F.rank(A) + null.shape[0] == cols
        if null.shape[0]:
            assert not F.matmul(A, null.T).any()
        # canonical basis does not depend on the spanning set
        P = random_invertible(F, rows, rng)
        assert np.array_equal(F.row_basis(F.matmul(P, A)), F.row_basis(A))
        # solutions solve
        x = rng.integers(0, p, size=cols, dtype=np.int64)
        b = F.matmul(A, x.reshape(-1, 1))[:, 0]
        x0, _ = F.solve(A, b)
        assert (F.matmul(A, x0.reshape(-1, 1))[:, 0] == b).all()


@pytest.mark.slow
@pytest.mark.parametrize("p", FIELDS)
def test_linear_algebra_properties_exhaustive(p):
    F = PrimeField(p)
    for A in random_matrices(p, 10_000, seed=p):
        null = F.nullspace(A)
        assert F.rank(A) + null.shape[0] == A.shape[1]
        R, _ = F.rref(A)
        assert (F.rref(R)[0] == R).all()


@pytest.mark.parametrize("p", FIELDS)
def test_inverse_and_subspace_dimensions(p):
    F = PrimeField(p)
    rng = np.random.default_rng(7 * p)
    for _ in range(50):
        P = random_invertible(F, 4, rng)
        assert (F.matmul(P, F.inverse(P)) == np.eye(4, dtype=np.int64)).all()

        A = rng.integers(0, p, size=(2, 5), dtype=np.int64)
        B = rng.integers(0, p, size=(3, 5), dtype=np.int64)
        ops = F.subspace_ops(A, B)
        dim_a, dim_b = F.rank(A), F.rank(B)
        assert ops.sum_basis.shape[0] + ops.intersection_basis.shape[0] == dim_a + dim_b
        assert ops.quotient_basis.shape[0] == ops.sum_basis.shape[0] - dim_a
        for v in ops.intersection_basis:
            assert ops.in_a(v) and ops.in_b(v)


def test_complement_completes_a_basis():
    F = PrimeField(3)
    sub = F.mat([[1, 1, 0, 0]])
    reps = F.complement(sub)
    assert reps.shape[0] == 3
    assert F.rank(np.vstack([sub, reps])) == 4


def test_span_elements_enumerates_the_span():
    F = PrimeField(3)
    items = [F.mat([[1, 0]]), F.mat([[0, 1]])]
    elements = list(F.span_elements(items))
    assert len(elements) == F.count(2) == 9
    assert len({e.tobytes() for e in elements}) == 9


def test_empty_family_spans_only_zero():
    F = PrimeField(5)
    (only,) = list(F.span_elements([], shape=(2, 3)))
    assert only.shape == (2, 3)
    assert not only.any()
    with pytest.raises(ContractViolation):
        list(F.span_elements([]))


def test_coords_rejects_vectors_outside_the_span():
    F = PrimeField(2)
    basis = F.mat([[1], [0]])
    with pytest.raises(ContractViolation):
        F.coords(basis, F.mat([[0], [1]]))


def test_orbit_representatives():
    F = PrimeField(2)
    swap = F.mat([[0, 1], [1, 0]])
    assert F.orbit_representatives([swap], 2).tolist() == [[0, 0], [1, 0], [1, 1]]
    assert len(F.orbit_representatives([], 3)) == F.count(3)

    G = PrimeField(3)
    double = G.mat([[2, 0], [0, 2]])
    reps = G.orbit_representatives([double], 2, chunk=4)
    assert len(reps) == 5
    assert reps[0].tolist() == [0, 0]
