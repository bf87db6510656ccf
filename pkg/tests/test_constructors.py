import math
import random
from fractions import Fraction

import pytest

from latpair.constructors import (
    CascadeParams,
    CoprimeParams,
    DiagParams,
    alternating_unimodular,
    bezout_pair,
    cascade_inverse_closed_form,
    cascade_matrix,
    cascade_pair,
    cascade_witness,
    coprime_pair,
    coprime_shear_identity,
    coprime_witness,
    diagonal_matrix,
    diagonal_pair,
    direct_sum_pair,
    flip_matrix,
    perm_similarity,
    tensor_pair,
    unipotent_pair,
)
from latpair.errors import NotCoprime, NotUnimodularIntegral, NotUnipotent, ZeroParameter
from latpair.exactlin import Matrix, det, direct_sum, inverse, is_unimodular_integral, kronecker, mat_mul
from latpair.goodpair import check_witness
from latpair.oracle import random_integral_unimodular


def rand_q(rng, bound=9):
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, bound))


def rand_unit_triangular(rng, d, upper=True):
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = 1
        for j in range(d):
            if (j > i) if upper else (j < i):
                rows[i][j] = rand_q(rng)
    return Matrix(rows)


# -- unipotent ------------------------------------------------------------

def test_unipotent_examples():
    ms = Matrix([[1, Fraction(7, 3)], [0, 1]])
    c = unipotent_pair(ms)
    assert c.witness.n == ms and c.family == "unipotent"
    c = unipotent_pair(Matrix.identity(3))
    assert c.basis == Matrix.identity(3)
    t = Matrix([[1, 2, 5], [0, 1, -3], [0, 0, 1]])
    p = direct_sum(Matrix([[1, 1], [0, 1]]), Matrix([[1]]))
    c = unipotent_pair(t, p)
    assert c.witness.n == mat_mul(p, t)


def test_unipotent_rejects_bad_input():
    with pytest.raises(NotUnipotent):
        unipotent_pair(Matrix([[2, 1], [0, Fraction(1, 2)]]))
    with pytest.raises(NotUnipotent):
        unipotent_pair(Matrix([[1, 1], [1, 1]]))
    with pytest.raises(NotUnimodularIntegral):
        unipotent_pair(Matrix.identity(2), Matrix.diag([2, 1]))


@pytest.mark.parametrize("seed", range(12))
def test_unipotent_lower_via_flip(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 4)
    low = rand_unit_triangular(rng, d, upper=False)
    j = flip_matrix(d)
    up = mat_mul(mat_mul(j, low), inverse(j))
    assert all(not up[i, k] for i in range(d) for k in range(i))
    assert unipotent_pair(low).witness.n == low
    assert unipotent_pair(up).witness.n == up


# -- cascade --------------------------------------------------------------

def test_cascade_examples():
    assert cascade_matrix([3]) == Matrix([[3, 1], [0, Fraction(1, 3)]])
    assert cascade_witness([3]) == Matrix([[0, 1], [1, Fraction(1, 3)]])
    c = cascade_pair(CascadeParams([3]))
    assert c.witness.n == cascade_witness([3])
    m = cascade_matrix([2, 3])
    assert m == Matrix([[2, 1, 0], [0, 3, 1], [0, 0, Fraction(1, 6)]])
    q = mat_mul(inverse(m), cascade_witness([2, 3]))
    assert is_unimodular_integral(q)
    assert cascade_matrix([1]) == Matrix([[1, 1], [0, 1]])


def test_cascade_closed_form_inverse():
    expected = Matrix([[Fraction(1, 2), Fraction(-1, 6), 1], [0, Fraction(1, 3), -2], [0, 0, 6]])
    assert cascade_inverse_closed_form([2, 3]) == expected == inverse(cascade_matrix([2, 3]))


@pytest.mark.parametrize("seed", range(20))
def test_cascade_closed_form_matches_inverse(seed):
    rng = random.Random(seed)
    p = [rand_q(rng, 5) for _ in range(rng.randint(1, 4))]
    assert cascade_inverse_closed_form(p) == inverse(cascade_matrix(p))


@pytest.mark.parametrize("seed", range(20))
def test_cascade_quotient_structure(seed):
    # M(p)^-1 N(p): anti-diagonal ones plus a first column of signed prefix products
    rng = random.Random(100 + seed)
    p = [rand_q(rng, 5) for _ in range(rng.randint(1, 4))]
    d = len(p) + 1
    q = mat_mul(inverse(cascade_matrix(p)), cascade_witness(p))
    assert det(q) in (1, -1)
    for i in range(d):
        assert q[i, 0] == (-1) ** (d - 1 - i) * math.prod(p[:i])
        for j in range(1, d):
            assert q[i, j] == (1 if i + j == d else 0)
    if all(x.denominator == 1 for x in p):
        assert is_unimodular_integral(q)


def test_cascade_zero_parameter():
    with pytest.raises(ZeroParameter):
        CascadeParams([2, 0])


def test_cascade_overlaps_unipotent():
    m = cascade_matrix([1])
    a = cascade_pair(CascadeParams([1]))
    b = unipotent_pair(m)
    assert check_witness(a.witness, b.pair).passed
    assert check_witness(b.witness, a.pair).passed


# -- diagonal -------------------------------------------------------------

def test_diagonal_examples():
    z = cascade_matrix([Fraction(1, 2)])
    assert z == Matrix([[Fraction(1, 2), 1], [0, 2]])
    assert alternating_unimodular([2]) == Matrix([[1, -2], [0, 1]])
    assert mat_mul(z, alternating_unimodular([2])) == diagonal_matrix([2])
    z3 = cascade_matrix([Fraction(1, 2), Fraction(1, 3)])
    assert mat_mul(z3, alternating_unimodular([2, 3])) == Matrix.diag([Fraction(1, 2), Fraction(1, 3), 6])
    c = diagonal_pair(DiagParams([1, 1, 1]))
    assert c.basis == Matrix.identity(4)
    with pytest.raises(ZeroParameter):
        DiagParams([3, 0])


@pytest.mark.parametrize("seed", range(10))
def test_diagonal_random(seed):
    rng = random.Random(200 + seed)
    m = [rng.choice([x for x in range(-6, 7) if x]) for _ in range(rng.randint(1, 3))]
    d = len(m) + 1
    c = diagonal_pair(DiagParams(m, random_integral_unimodular(d, rng), random_integral_unimodular(d, rng)))
    assert check_witness(c.witness, c.pair).passed


# -- coprime ----------------------------------------------------------------

def test_bezout_and_witness():
    assert bezout_pair(3, 5) == (2, -1)
    assert coprime_witness(3, 5, -1) == Matrix([[3, 6], [1, Fraction(5, 3)]])
    c = coprime_pair(CoprimeParams(3, 5))
    assert c.witness.n == Matrix([[3, 6], [1, Fraction(5, 3)]])
    assert coprime_pair(CoprimeParams(1, 1)).basis == Matrix.identity(2)
    assert coprime_pair(CoprimeParams(2, 1)).basis == Matrix.diag([2, Fraction(1, 2)])
    with pytest.raises(NotCoprime):
        CoprimeParams(4, 6)
    with pytest.raises(ZeroParameter):
        CoprimeParams(0, 1)
    with pytest.raises(ValueError):
        CoprimeParams(3, 5, l1=1, l2=1)


@pytest.mark.parametrize("m,n", [(3, 5), (-7, 4), (1, 12), (11, -12), (-5, -9)])
def test_coprime_shear_identity(m, n):
    l1, l2 = bezout_pair(m, n)
    assert 1 - n * l2 - m * l1 == 0
    assert coprime_shear_identity(m, n, l1, l2) == Matrix.diag([Fraction(m, n), Fraction(n, m)])


def test_coprime_with_conjugators():
    u = Matrix([[2, 1], [1, 1]])
    v = Matrix([[1, -3], [0, 1]])
    c = coprime_pair(CoprimeParams(4, 7, U=u, V=v))
    assert c.witness.n == mat_mul(u, coprime_witness(4, 7, c.params["l2"]))


# -- lifts ------------------------------------------------------------------

def test_direct_sum_examples():
    one = unipotent_pair(Matrix.identity(1))
    c = direct_sum_pair(one, one)
    assert c.basis == Matrix.identity(2) and c.witness.n == Matrix.identity(2)
    a = unipotent_pair(Matrix([[1, Fraction(1, 2)], [0, 1]]))
    b = coprime_pair(CoprimeParams(3, 5))
    assert direct_sum_pair(a, b).dim == 4
    k = cascade_pair(CascadeParams([3]))
    assert direct_sum_pair(k, k).witness.n == direct_sum(k.witness.n, k.witness.n)


def test_perm_similarity_examples():
    assert perm_similarity(1, 1) == Matrix([[1]])
    m = Matrix([[1, 2], [3, 4]])
    perm = perm_similarity(2, 2)
    assert mat_mul(mat_mul(perm, kronecker(m, Matrix.identity(2))), inverse(perm)) == kronecker(Matrix.identity(2), m)


@pytest.mark.parametrize("seed", range(10))
def test_perm_similarity_random(seed):
    rng = random.Random(300 + seed)
    d, p = rng.randint(1, 4), rng.randint(1, 3)
    m = Matrix([[rand_q(rng) for _ in range(d)] for _ in range(d)])
    perm = perm_similarity(d, p)
    lhs = mat_mul(mat_mul(perm, kronecker(m, Matrix.identity(p))), inverse(perm))
    assert lhs == kronecker(Matrix.identity(p), m)


def test_tensor_examples():
    base = unipotent_pair(Matrix([[1, Fraction(1, 2)], [0, 1]]))
    same = tensor_pair(base, Matrix.identity(1))
    assert same.basis == base.basis
    assert tensor_pair(base, Matrix([[1, 1], [0, 1]])).dim == 4
    c = tensor_pair(coprime_pair(CoprimeParams(3, 5)), Matrix([[0, 1], [-1, 0]]))
    assert check_witness(c.witness, c.pair).passed
    with pytest.raises(NotUnimodularIntegral):
        tensor_pair(base, Matrix.diag([2, 1]))
