import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latpair.boxenum import (
    Parallelepiped,
    PointEnumerator,
    Topology,
    enumerate_points,
    integer_bounding_box,
    membership,
)
from latpair.errors import BoxTooLarge, DimensionMismatch, SingularMatrix
from latpair.exactlin import Matrix, det, inverse, mat_mul, sqrt_of
from latpair.lattice import Lattice
from latpair.oracle import random_unimodular

S2 = sqrt_of(2)
Z2 = Lattice.standard(2)


def naive_points(latt, box, radius):
    """Independent oracle: exact membership over the cube |k_i| <= radius_i."""
    found = []
    for k in itertools.product(*[range(-r, r + 1) for r in radius]):
        if membership(latt.basis.apply(k), box):
            found.append(k)
    return sorted(found)


def test_membership_examples():
    box = Parallelepiped(Matrix.identity(2), Topology.OPEN_PM1)
    assert membership((0, 0), box)
    assert not membership((1, 0), box)
    assert membership((0, 1 / S2), Parallelepiped(Matrix.identity(2, 2)))
    closed = Parallelepiped(Matrix.identity(2), Topology.CLOSED_PM1)
    assert membership((1, -1), closed)
    half = Parallelepiped(Matrix.identity(2), Topology.HALF_OPEN_01)
    assert membership((0, Fraction(1, 2)), half)
    assert not membership((1, Fraction(1, 2)), half)
    assert not membership((Fraction(-1, 9), 0), half)
    with pytest.raises(DimensionMismatch):
        membership((0, 0, 0), box)


def test_singular_box_rejected():
    with pytest.raises(SingularMatrix):
        Parallelepiped(Matrix([[1, 1], [1, 1]]))


def test_integer_bounding_box_examples():
    assert integer_bounding_box(Matrix.identity(2)) == [1, 1]
    assert integer_bounding_box(Matrix.diag([Fraction(1, 2), 2])) == [2, 1]
    # inverse of diag(1/sqrt2, sqrt2) is diag(sqrt2, 1/sqrt2); sqrt2 <= 2 gives (2, 1)
    assert integer_bounding_box(Matrix.diag([1 / S2, S2])) == [2, 1]


def test_enumerate_examples():
    ms = Matrix([[1, Fraction(7, 3)], [0, 1]])
    assert enumerate_points(Z2, Parallelepiped(ms)).points == [(0, 0)]
    res = enumerate_points(Z2, Parallelepiped(Matrix.diag([2, Fraction(1, 2)])))
    assert res.points == [(-1, 0), (0, 0), (1, 0)]
    assert res.images[2] == (1, 0)
    res = enumerate_points(Z2, Parallelepiped(Matrix.identity(2), Topology.CLOSED_PM1))
    assert res.points == sorted(itertools.product((-1, 0, 1), repeat=2))


def test_enumerate_quadratic_lattice():
    latt = Lattice(Matrix.diag([S2, 1 / S2]))
    res = enumerate_points(latt, Parallelepiped(Matrix.identity(2, 2)))
    assert res.points == [(0, -1), (0, 0), (0, 1)]
    assert res.images[2] == (0, S2 / 2)


def test_translate_and_half_open():
    half = Parallelepiped(Matrix.identity(2), Topology.HALF_OPEN_01)
    res = enumerate_points(Z2, half, translate=(Fraction(5, 2), Fraction(-1, 3)))
    assert res.points == [(-2, 1)]
    assert res.images == [(Fraction(1, 2), Fraction(2, 3))]


def test_box_too_large():
    tiny = Parallelepiped(Matrix.diag([1000, 1000]))
    with pytest.raises(BoxTooLarge):
        enumerate_points(Z2, tiny, max_cells=100)


def test_max_cells_env(monkeypatch):
    monkeypatch.setenv("LATPAIR_MAX_CELLS", "10")
    with pytest.raises(BoxTooLarge):
        enumerate_points(Z2, Parallelepiped(Matrix.diag([5, 5])))


def _random_instance(rng):
    d = rng.randint(1, 3)
    radicand = rng.choice([0, 0, 2, 3])
    basis = random_unimodular(d, rng, rng.randint(0, 3), radicand=radicand, entry_bound=2)
    scale = Matrix.diag([Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(d)])
    basis = mat_mul(basis, scale)
    box = random_unimodular(d, rng, rng.randint(0, 3), radicand=radicand, entry_bound=2)
    box = mat_mul(box, Matrix.diag([Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(d)]))
    return Lattice(basis), box


@pytest.mark.parametrize("seed", range(60))
def test_enumerate_matches_naive_oracle(seed):
    rng = random.Random(seed)
    while True:
        latt, n = _random_instance(rng)
        topology = rng.choice(list(Topology))
        box = Parallelepiped(n, topology)
        bounds = integer_bounding_box(mat_mul(box.n_inv, latt.basis))
        if topology is Topology.HALF_OPEN_01:
            bounds = [b + 1 for b in bounds]
        radius = [2 * b for b in bounds]
        cells = 1
        for r in radius:
            cells *= 2 * r + 1
        # keep the naive scan small
        if cells <= 20000:
            break
    assert enumerate_points(latt, box).points == naive_points(latt, box, radius)


@pytest.mark.parametrize("seed", range(40))
def test_symmetry_and_monotonicity(seed):
    rng = random.Random(500 + seed)
    latt, n = _random_instance(rng)
    open_pts = enumerate_points(latt, Parallelepiped(n, Topology.OPEN_PM1)).points
    closed_pts = enumerate_points(latt, Parallelepiped(n, Topology.CLOSED_PM1)).points
    zero = tuple([0] * latt.dim)
    assert zero in open_pts and zero in closed_pts
    assert set(open_pts) <= set(closed_pts)
    for k in closed_pts:
        assert tuple(-x for x in k) in closed_pts
    assert open_pts == sorted(open_pts)


@given(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=20), min_size=2, max_size=2)
)
def test_half_open_translates_count_once(x):
    # Z^2 tiles the unit square, so every point has exactly one translate
    scan = PointEnumerator(Z2, Parallelepiped(Matrix.identity(2), Topology.HALF_OPEN_01))
    assert len(scan.points(translate=x).points) == 1


def test_enumerator_reuse_matches_fresh():
    rng = random.Random(3)
    latt = Lattice(mat_mul(random_unimodular(2, rng, 4, radicand=2), Matrix.diag([2, Fraction(1, 2)])))
    box = Parallelepiped(random_unimodular(2, rng, 3, radicand=2), Topology.HALF_OPEN_01)
    scan = PointEnumerator(latt, box)
    for _ in range(10):
        t = (Fraction(rng.randint(-20, 20), 7), Fraction(rng.randint(-20, 20), 7))
        assert scan.points(translate=t).points == enumerate_points(latt, box, translate=t).points
