import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix as SMatrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from yoneda.errors import YonedaError
from yoneda.exactlin import (ZZ, Matrix, RingSpec, det, hermite_columns,
                             invariant_factors, kernel_columns,
                             smith_normal_form, solve_modular)


def rand_matrix(rng, rows, cols, lo=-20, hi=20):
    return Matrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], rows, cols)


def check_snf(M):
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D.data[i][i] for i in range(min(D.shape))]
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D.data[i][j] == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return diag


def test_snf_examples():
    U, D, V = smith_normal_form(Matrix.identity(2))
    assert D == Matrix.identity(2)
    M = Matrix([[2, 4], [6, 8]], 2, 2)
    assert check_snf(M) == [2, 4]
    # independent: d1 = gcd of entries, d1 * d2 = |det|
    assert 2 * 4 == abs(det(M))
    _, D, _ = smith_normal_form(Matrix.zeros(1, 1))
    assert D == Matrix.zeros(1, 1)


def test_snf_empty_dimensions():
    for shape in [(0, 0), (0, 3), (3, 0)]:
        U, D, V = smith_normal_form(Matrix.zeros(*shape))
        assert D.shape == shape
        assert U.shape == (shape[0], shape[0]) and V.shape == (shape[1], shape[1])


def test_snf_random_battery():
    rng = random.Random(2024)
    for _ in range(500):
        M = rand_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        check_snf(M)


def test_snf_matches_sympy():
    rng = random.Random(99)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        M = rand_matrix(rng, r, c, -9, 9)
        diag = check_snf(M)
        nonzero = [d for d in diag if d]
        theirs = [abs(int(x)) for x in sympy_invariants(SMatrix(M.data))]
        assert nonzero == [d for d in theirs if d]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c),
                       min_size=r, max_size=r))))
def test_snf_property(rows):
    check_snf(Matrix(rows, len(rows), len(rows[0])))


def test_solve_examples():
    assert solve_modular(Matrix([[1]], 1, 1), Matrix([[5]], 1, 1), ZZ) == Matrix([[5]], 1, 1)
    assert solve_modular(Matrix([[2]], 1, 1), Matrix([[2]], 1, 1), RingSpec(4)) == Matrix([[1]], 1, 1)
    assert solve_modular(Matrix([[2]], 1, 1), Matrix([[1]], 1, 1), RingSpec(4)) is None


def test_solve_dimension_mismatch():
    with pytest.raises(YonedaError):
        solve_modular(Matrix.identity(2), Matrix([[1]], 1, 1), ZZ)


def brute_solutions(A, b, m):
    for x in itertools.product(range(m), repeat=A.cols):
        if all((sum(a * xi for a, xi in zip(row, x)) - bi) % m == 0
               for row, bi in zip(A.data, b)):
            yield x


def test_solve_modular_brute_force():
    rng = random.Random(5)
    for _ in range(300):
        m = rng.choice([2, 3, 4, 6, 8, 9, 12])
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        A = rand_matrix(rng, r, c, 0, m - 1)
        b = [rng.randrange(m) for _ in range(r)]
        x = solve_modular(A, Matrix([[v] for v in b], r, 1), RingSpec(m))
        sols = list(brute_solutions(A, b, m))
        if x is None:
            assert sols == []
        else:
            assert all(0 <= v < m for v in x.column(0))
            assert tuple(x.column(0)) in sols


def test_solve_integer_exact():
    rng = random.Random(8)
    for _ in range(200):
        A = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), -6, 6)
        x0 = Matrix([[rng.randint(-5, 5)] for _ in range(A.cols)], A.cols, 1)
        x = solve_modular(A, A @ x0, ZZ)
        assert x is not None and A @ x == A @ x0


def test_kernel_examples():
    assert kernel_columns(Matrix.identity(3), ZZ).cols == 0
    K = kernel_columns(Matrix([[2]], 1, 1), RingSpec(4))
    assert K == Matrix([[2]], 1, 1)
    K = kernel_columns(Matrix([[1, 1]], 1, 2), ZZ)
    assert K.cols == 1 and K.column(0) in [(1, -1), (-1, 1)]


def span_mod(columns, m, n):
    """All Z/m-combinations of the given columns."""
    out = {tuple([0] * n)}
    for c in columns:
        out = {tuple((v[i] + k * c[i]) % m for i in range(n)) for v in out for k in range(m)}
    return out


def test_kernel_brute_force():
    rng = random.Random(13)
    for _ in range(200):
        m = rng.randint(2, 8)
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        A = rand_matrix(rng, r, c, 0, m - 1)
        K = kernel_columns(A, RingSpec(m))
        for col in K.columns():
            assert all(sum(a * x for a, x in zip(row, col)) % m == 0 for row in A.data)
        span = span_mod(K.columns(), m, c)
        truth = {x for x in itertools.product(range(m), repeat=c)
                 if all(sum(a * xi for a, xi in zip(row, x)) % m == 0 for row in A.data)}
        assert truth == span


def test_kernel_over_integers_spans_box():
    rng = random.Random(21)
    for _ in range(100):
        A = rand_matrix(rng, rng.randint(1, 2), 3, -4, 4)
        K = kernel_columns(A, ZZ)
        assert A @ K == Matrix.zeros(A.rows, K.cols)
        for x in itertools.product(range(-3, 4), repeat=3):
            if A @ Matrix([[v] for v in x], 3, 1) == Matrix.zeros(A.rows, 1):
                ok = solve_modular(K, Matrix([[v] for v in x], 3, 1), ZZ)
                assert ok is not None


def test_hermite_columns_canonical():
    rng = random.Random(3)
    for _ in range(100):
        M = rand_matrix(rng, 3, 3, -5, 5)
        U, _, _ = smith_normal_form(rand_matrix(rng, 3, 3))
        # right multiplication by a unimodular matrix keeps the column lattice
        _, _, V = smith_normal_form(rand_matrix(rng, 3, 3, -3, 3))
        assert hermite_columns(M) == hermite_columns(M @ V)


def test_invariant_factors_product_is_det():
    rng = random.Random(4)
    for _ in range(100):
        M = rand_matrix(rng, 3, 3, -7, 7)
        d = det(M)
        f = invariant_factors(M)
        if d:
            p = 1
            for x in f:
                p *= x
            assert p == abs(d)
