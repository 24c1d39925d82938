import random
from fractions import Fraction

import pytest

from qfactor.domains import GF, QQ
from qfactor.linalg import (ExactMatrix, SingularMatrixError, bareiss_rank,
                            invert, kernel_basis, rank, rref)

P = 2**31 + 11


def random_matrix(rng, rows, cols, spread=9, domain=QQ):
    return ExactMatrix([[rng.randint(-spread, spread) for _ in range(cols)]
                        for _ in range(rows)], domain)


def test_rref_identity_and_zero():
    ident = ExactMatrix.identity(3)
    R, pivots = rref(ident)
    assert R == ident and pivots == [0, 1, 2]
    z = ExactMatrix.zero(2, 4)
    R, pivots = rref(z)
    assert R == z and pivots == []


def test_rref_idempotent():
    rng = random.Random(0)
    for _ in range(10):
        m = random_matrix(rng, 4, 6)
        R, piv = rref(m)
        R2, piv2 = rref(R)
        assert R2 == R and piv2 == piv


def test_rank_matches_bareiss_oracle():
    rng = random.Random(1)
    for _ in range(25):
        m = random_matrix(rng, 6, 9)
        assert rank(m) == bareiss_rank(m.entries)


def test_rank_nullity_and_kernel():
    rng = random.Random(2)
    for _ in range(15):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 7))
        k = kernel_basis(m)
        assert rank(m) + k.cols == m.cols
        if k.cols:
            prod = m.matmul(k)
            assert all(prod[(i, j)] == 0 for i in range(prod.rows)
                       for j in range(prod.cols))


def test_rank_transpose():
    rng = random.Random(3)
    for _ in range(10):
        m = random_matrix(rng, 4, 7)
        assert rank(m) == rank(m.transpose())


def test_rank_invariance_under_invertible_factors():
    rng = random.Random(4)
    for _ in range(8):
        m = random_matrix(rng, 4, 5)
        while True:
            g = random_matrix(rng, 4, 4, spread=3)
            try:
                invert(g)
                break
            except SingularMatrixError:
                continue
        assert rank(g.matmul(m)) == rank(m)
        perm = ExactMatrix([[1 if j == (i + 1) % 4 else 0 for j in range(4)]
                            for i in range(4)], QQ)
        assert rank(perm.matmul(m)) == rank(m)


def test_invert_round_trip_and_singular_error():
    rng = random.Random(5)
    m = random_matrix(rng, 4, 4)
    while True:
        try:
            minv = invert(m)
            break
        except SingularMatrixError:
            m = random_matrix(rng, 4, 4)
    assert m.matmul(minv) == ExactMatrix.identity(4)
    sing = ExactMatrix([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        invert(sing)


def test_rank_over_fp_at_most_rank_over_q():
    rng = random.Random(6)
    dom = GF(P)
    for _ in range(15):
        rows = [[rng.randint(-50, 50) for _ in range(6)] for _ in range(4)]
        rq = rank(ExactMatrix(rows, QQ))
        rp = rank(ExactMatrix(rows, dom))
        assert rp <= rq
    # a matrix that drops rank mod p but not over Q
    drop = ExactMatrix([[1, 0], [0, P]], QQ)
    assert rank(drop) == 2
    assert rank(ExactMatrix([[1, 0], [0, P]], dom)) == 1


def test_fp_elimination_matches_q_generically():
    rng = random.Random(7)
    dom = GF(P)
    for _ in range(10):
        rows = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)]
        assert rank(ExactMatrix(rows, dom)) == rank(ExactMatrix(rows, QQ))


def test_bareiss_requires_integers():
    with pytest.raises(ValueError):
        bareiss_rank([[Fraction(1, 2)]])
