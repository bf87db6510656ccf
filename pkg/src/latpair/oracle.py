"""Independent verification: random unimodular inputs, exact Monte-Carlo
tiling counts, and the corner-system scan for ``(R(r) Z^2, Z^2)``.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .boxenum import Parallelepiped, PointEnumerator, Topology
from .errors import PerfectSquareRadicand
from .exactlin import ExactScalar, Matrix, det, field_radicand, inverse, mat_mul, sqrt_of
from .goodpair import CheckReport, FAIL, PASS, WitnessCandidate, check_witness
from .lattice import Lattice, LatticePair


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _shear(d: int, i: int, j: int, value) -> Matrix:
    return Matrix([[1 if a == b else (value if (a, b) == (i, j) else 0) for b in range(d)] for a in range(d)])


def _swap(d: int, i: int, j: int) -> Matrix:
    perm = list(range(d))
    perm[i], perm[j] = perm[j], perm[i]
    return Matrix([[int(perm[a] == b) for b in range(d)] for a in range(d)])


def _bounded_rational(rng: random.Random, bound: int) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        if num:
            return Fraction(num, rng.randint(1, bound))


def random_unimodular(
    d: int,
    seed,
    steps: int,
    radicand: int = 0,
    entry_bound: int = 3,
    integral: bool = False,
) -> Matrix:
    """Seeded product of shears, row swaps and at most one ``-1`` scaling.

    Shear entries are nonzero: integers in ``[-entry_bound, entry_bound]``
    when ``integral``, otherwise bounded rationals plus (for a positive
    radicand) a bounded rational multiple of ``sqrt(radicand)``.
    """
    rng = _rng(seed)
    r = field_radicand(radicand) if radicand else 0
    m = Matrix.identity(d, r)
    negated = False
    for _ in range(steps):
        roll = rng.random()
        if d > 1 and roll < 0.75:
            i, j = rng.sample(range(d), 2)
            if integral:
                value = ExactScalar(rng.choice([x for x in range(-entry_bound, entry_bound + 1) if x]))
            else:
                value = ExactScalar(_bounded_rational(rng, entry_bound))
                if r and rng.random() < 0.7:
                    value = value + ExactScalar(0, _bounded_rational(rng, entry_bound), r)
            m = mat_mul(_shear(d, i, j, value), m)
        elif d > 1 and roll < 0.9:
            i, j = rng.sample(range(d), 2)
            m = mat_mul(_swap(d, i, j), m)
        elif not negated:
            i = rng.randrange(d)
            m = mat_mul(Matrix.diag([-1 if a == i else 1 for a in range(d)]), m)
            negated = True
    return m


def random_integral_unimodular(d: int, seed, entry_bound: int = 5, steps: int = 8) -> Matrix:
    """Integral unimodular matrix whose entries all stay within ``entry_bound``."""
    rng = _rng(seed)
    m = Matrix.identity(d)
    for _ in range(steps):
        candidate = random_unimodular(d, rng, 1, integral=True, entry_bound=2)
        trial = mat_mul(candidate, m)
        if all(abs(x) <= entry_bound for row in trial.rows for x in row):
            m = trial
    return m


# -- Monte-Carlo tiling ------------------------------------------------------

@dataclass(frozen=True)
class McConfig:
    samples: int = 1000
    seed: int = 1
    denominator_bound: int = 97
    region_radius: Fraction = Fraction(2)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.denominator_bound < 2:
            raise ValueError("denominator_bound must be >= 2")
        object.__setattr__(self, "region_radius", Fraction(self.region_radius))
        if self.region_radius <= 0:
            raise ValueError("region_radius must be positive")


class TileCounter:
    """Counts ``k`` with ``x - latt.basis @ k`` in ``w.n[0,1)^d``."""

    # bounds the unpruned (sample, candidate) pairs per batch
    BATCH_BUDGET = 2_000_000
    # integers below this are exact in float64, sums included
    EXACT_LIMIT = 2.0**52

    def __init__(self, w: WitnessCandidate, latt: Lattice, max_cells: int | None = None):
        # x - B k in E  <=>  B k' + x in E  with k' = -k
        self._scan = PointEnumerator(latt, Parallelepiped(w.n, Topology.HALF_OPEN_01), max_cells)
        n_inv = self._scan.box.n_inv
        self._n_inv = np.array(n_inv.to_float_rows())
        self._g = np.array(self._scan.g.to_float_rows())
        self._row_sums = np.array([float(s) for s in self._scan.row_sums])
        self._rational = n_inv.radicand == 0 and self._scan.a.radicand == 0
        if self._rational:
            self._n_den, self._n_int = _integer_form(n_inv)
            self._a_den, self._a_int = _integer_form(self._scan.a)

    def hits(self, x: Sequence) -> list[tuple[int, ...]]:
        pts = self._scan.points(translate=x).points
        return sorted(tuple(-c for c in k) for k in pts)

    def counts(self, xs: Sequence[Sequence]) -> list[int]:
        """Translate counts for many points at once."""
        xs = list(xs)
        if not xs:
            return []
        if self._rational and all(_is_rational(c) for x in xs for c in x):
            fr = [[_as_fraction(c) for c in x] for x in xs]
            q = math.lcm(*(c.denominator for x in fr for c in x))
            return self.grid_counts([[int(c * q) for c in x] for x in fr], q)
        xf = np.array([[float(c) for c in x] for x in xs])
        return self._screen(xf, lambda i: xs[i], None)

    def grid_counts(self, nums: Sequence[Sequence[int]], q: int) -> list[int]:
        """Translate counts at the points ``nums[i] / q``."""
        if len(nums) == 0:
            return []
        exact = None
        if self._rational:
            big = max(max(abs(v) for v in row) for row in nums)
            if big * q < self.EXACT_LIMIT:
                # t = n_inv x = n_int X / (n_den q); scale every row by lcm
                scale = math.lcm(self._n_den * q, self._a_den)
                yt = np.array(nums, dtype=object).dot(np.array(self._n_int, dtype=object).T)
                yt = yt * (scale // (self._n_den * q))
                a_int = [[v * (scale // self._a_den) for v in row] for row in self._a_int]
                exact = (scale, yt, a_int)
        xf = np.array(nums, dtype=np.float64) / q
        return self._screen(xf, lambda i: tuple(Fraction(v, q) for v in nums[i]), exact)

    def _screen(self, xf: np.ndarray, point, exact) -> list[int]:
        """Batched pruned scan over the candidate box of every sample.

        With ``exact`` (rational data scaled to integers) membership is decided
        exactly.  Otherwise a sample whose candidates are all clearly inside or
        clearly outside the tile is settled in floats, and any near-boundary
        candidate sends the sample to the exact scan.
        """
        count, d = xf.shape
        t = xf @ self._n_inv.T
        t_scale = np.abs(xf) @ np.abs(self._n_inv).T
        # candidate box in reduced coordinates, widened to absorb rounding
        centre = (0.5 - t) @ self._g.T
        slack = 1e-7 * (1.0 + np.abs(centre) + self._row_sums + (0.5 + t_scale) @ np.abs(self._g).T)
        lows = np.floor(centre - 0.5 * self._row_sums - slack).astype(np.int64)
        highs = np.floor(centre + 0.5 * self._row_sums + slack).astype(np.int64)
        widths = (highs - lows + 1).max(axis=0)
        k_max = np.abs(lows).max(axis=1) + widths.max()
        if exact is not None:
            scale, yt, a_int = exact
            bound = int(k_max.max()) * max(sum(abs(v) for v in row) for row in a_int) + int(np.abs(yt).max())
            if bound + scale >= self.EXACT_LIMIT:
                exact = None
        if exact is not None:
            af = np.array(a_int, dtype=np.float64)
            tf = np.array(yt, dtype=np.float64)
            top = float(scale)
            tol = np.zeros((count, d))
        else:
            af = self._scan.af
            tf = t
            top = 1.0
            tol = 1e-9 * (1.0 + k_max[:, None] * np.abs(af).sum(axis=1)[None, :] + t_scale + np.abs(t))
        # y = af @ (lows + o) + tf with offsets o in [0, widths)
        base = lows.astype(np.float64) @ af.T + tf
        span = af * (widths - 1)[None, :]
        tail_min = np.zeros((d + 1, d))
        tail_max = np.zeros((d + 1, d))
        for j in range(d - 1, -1, -1):
            tail_min[j] = tail_min[j + 1] + np.minimum(span[:, j], 0.0)
            tail_max[j] = tail_max[j + 1] + np.maximum(span[:, j], 0.0)
        out = np.zeros(count, dtype=np.int64)
        unsure = np.zeros(count, dtype=bool)
        chunk = max(1, self.BATCH_BUDGET // int(np.prod(widths, dtype=np.float64).clip(1, self.BATCH_BUDGET)))
        for start in range(0, count, chunk):
            sid = np.arange(start, min(start + chunk, count))
            partial = base[sid]
            for j in range(d):
                w = int(widths[j])
                n = len(sid)
                sid = np.repeat(sid, w)
                partial = np.repeat(partial, w, axis=0) + np.tile(np.arange(w, dtype=np.float64), n)[:, None] * af[:, j]
                slack_j = tol[sid]
                if exact is not None:
                    keep = np.all((partial + tail_min[j + 1] < top) & (partial + tail_max[j + 1] >= 0), axis=1)
                else:
                    keep = np.all(
                        (partial + tail_min[j + 1] <= top + slack_j) & (partial + tail_max[j + 1] >= -slack_j),
                        axis=1,
                    )
                sid, partial = sid[keep], partial[keep]
                if not len(sid):
                    break
            if not len(sid):
                continue
            if exact is not None:
                inside = np.all((partial >= 0) & (partial < top), axis=1)
            else:
                slack_k = tol[sid]
                inside = np.all((partial > slack_k) & (partial < top - slack_k), axis=1)
                outside = np.any((partial < -slack_k) | (partial > top + slack_k), axis=1)
                np.logical_or.at(unsure, sid, ~(inside | outside))
            np.add.at(out, sid, inside.astype(np.int64))
        return [len(self.hits(point(i))) if unsure[i] else int(out[i]) for i in range(count)]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, ExactScalar) and x.b == 0)


def _as_fraction(x) -> Fraction:
    return x.a if isinstance(x, ExactScalar) else Fraction(x)


def _integer_form(m: Matrix) -> tuple[int, list[list[int]]]:
    """``(D, D m)`` for a rational matrix, ``D`` the common denominator."""
    den = math.lcm(*(x.a.denominator for row in m.rows for x in row))
    return den, [[int(x.a * den) for x in row] for row in m.rows]


def mc_point_count(w: WitnessCandidate, latt: Lattice, x: Sequence, max_cells=None) -> int:
    return len(TileCounter(w, latt, max_cells).hits(x))


def _sample_numerators(d: int, cfg: McConfig) -> tuple[list[list[int]], int]:
    rng = random.Random(cfg.seed)
    q = cfg.denominator_bound
    span = int(cfg.region_radius * q)
    return [[rng.randint(-span, span) for _ in range(d)] for _ in range(cfg.samples)], q


def sample_points(d: int, cfg: McConfig):
    nums, q = _sample_numerators(d, cfg)
    for row in nums:
        yield tuple(Fraction(v, q) for v in row)


def mc_tiling_check(
    w: WitnessCandidate, latt: Lattice, cfg: McConfig, max_cells: int | None = None
) -> CheckReport:
    """Exact translate counts at ``cfg.samples`` rational points.

    Passing is corroboration only; a count other than one disproves tiling
    and the offending point is reported.
    """
    vol = abs(det(w.n))
    if vol != latt.covolume:
        return CheckReport(FAIL, "volume_mismatch", details={"witness_volume": str(vol)})
    counter = TileCounter(w, latt, max_cells)
    nums, q = _sample_numerators(latt.dim, cfg)
    counts = counter.grid_counts(nums, q)
    for checked, (row, count) in enumerate(zip(nums, counts), start=1):
        if count != 1:
            x = tuple(Fraction(v, q) for v in row)
            ks = counter.hits(x)
            return CheckReport(
                FAIL,
                "count_mismatch",
                details={
                    "sample": [str(c) for c in x],
                    "count": len(ks),
                    "hits": [list(k) for k in ks],
                    "samples_checked": checked,
                },
            )
    return CheckReport(PASS, details={"samples_checked": len(nums)})


def overlap_point(w: WitnessCandidate, latt: Lattice, k: Sequence[int]) -> tuple[ExactScalar, ...]:
    """A point covered by both ``E`` and ``E + latt.basis @ k``.

    Requires ``latt.basis @ k`` inside ``w.n(-1,1)^d``; the point is the centre
    of the overlap box in tile coordinates.
    """
    y = inverse(w.n).apply(latt.basis.apply(k))
    u = []
    for c in y:
        low = c if c > 0 else c * 0
        high = 1 + c if c < 0 else c * 0 + 1
        u.append((low + high) / 2)
    return w.n.apply(u)


# -- corner systems ---------------------------------------------------------

def r_matrix(r: int) -> Matrix:
    """``diag(sqrt r, 1/sqrt r)``."""
    s = sqrt_of(r)
    return Matrix.diag([s, 1 / s])


@dataclass(frozen=True)
class CornerSystem:
    """``N p + k = 0``, ``N q + j = 0`` with ``k in Z^2``, ``j in R(r) Z^2``, both nonzero.

    ``p_choice``/``q_choice`` pick ``e1`` (0) or ``e2`` (1).  Perfect-square
    radicands are refused unless ``allow_rational`` is set (contrast cases).
    """

    n: Matrix
    r: int
    p_choice: int = 0
    q_choice: int = 1
    allow_rational: bool = False

    def __post_init__(self):
        if self.n.dim != 2:
            raise ValueError("corner systems are two-dimensional")
        if abs(det(self.n)) != 1:
            raise ValueError("N must have |det N| = 1")
        if self.r < 1:
            raise ValueError("r must be a positive integer")
        if field_radicand(self.r) == 0 and not self.allow_rational:
            raise PerfectSquareRadicand(f"sqrt({self.r}) is rational")
        if self.p_choice not in (0, 1) or self.q_choice not in (0, 1):
            raise ValueError("corner choices are 0 (e1) or 1 (e2)")


def corner_system_check(cs: CornerSystem) -> bool:
    """Exactly decide whether the corner system has a solution."""
    n = cs.n
    if det(n) == -1:
        n = mat_mul(Matrix.diag([-1, 1]), n)
    k = tuple(-x for x in n.column(cs.p_choice))
    if not all(x.is_integer() for x in k) or not any(k):
        return False
    j = tuple(-x for x in n.column(cs.q_choice))
    root = sqrt_of(cs.r)
    j1 = j[0] / root
    j2 = j[1] * root
    return j1.is_integer() and j2.is_integer() and bool(j1 or j2)


def corner_table(n: Matrix, r: int, allow_rational: bool = False) -> dict[tuple[int, int], bool]:
    return {
        (p, q): corner_system_check(CornerSystem(n, r, p, q, allow_rational))
        for p in (0, 1)
        for q in (0, 1)
    }


def notgood_scan(r: int, count: int = 500, seed=7, max_cells: int | None = None) -> CheckReport:
    """Look for a tile of ``((P R(r) Q) Z^2, Z^2)`` among random unimodular candidates.

    None should exist.  A passing witness or a solvable corner system is
    recorded as a finding and turns the verdict to ``fail``.
    """
    if r < 2 or field_radicand(r) == 0:
        raise PerfectSquareRadicand(f"sqrt({r}) must be irrational")
    rng = random.Random(seed)
    rr = r_matrix(r)
    findings = []
    corner_hits = []
    conditions: Counter = Counter()
    for idx in range(count):
        p = random_integral_unimodular(2, rng, entry_bound=3, steps=4)
        q = random_integral_unimodular(2, rng, entry_bound=3, steps=4)
        pair = LatticePair(Lattice(mat_mul(mat_mul(p, rr), q)), Lattice.standard(2, rr.radicand))
        field_r = r if idx % 2 == 0 else 0
        n = random_unimodular(2, rng, rng.randint(1, 5), radicand=field_r, entry_bound=3)
        report = check_witness(WitnessCandidate(n), pair, max_cells=max_cells)
        conditions[report.failed_condition] += 1
        if report.passed:
            findings.append({"index": idx, "witness": str(n), "P": str(p), "Q": str(q)})
        # a tile N of the conjugated pair corresponds to P^-1 N for (R Z^2, Z^2)
        table = corner_table(mat_mul(inverse(p), n), r)
        if any(table.values()):
            corner_hits.append({"index": idx, "witness": str(n), "P": str(p)})
    verdict = PASS if not findings and not corner_hits else FAIL
    return CheckReport(
        verdict,
        "none" if verdict == PASS else "counterexample_found",
        details={
            "r": r,
            "count": count,
            "seed": seed if not isinstance(seed, random.Random) else None,
            "passing_witnesses": findings,
            "solvable_corner_systems": corner_hits,
            "failed_conditions": dict(sorted(conditions.items())),
        },
    )
