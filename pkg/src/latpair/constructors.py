"""Constructive families of good pairs ``(M Z^d, Z^d)``, each with a witness.

Every constructor re-checks its witness with ``check_witness`` and raises
``ConstructionFailure`` if the check does not pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import (
    ConstructionFailure,
    InternalIdentityFailure,
    NotCoprime,
    NotUnimodularIntegral,
    NotUnipotent,
    ZeroParameter,
)
from .exactlin import (
    ExactScalar,
    Matrix,
    direct_sum,
    extended_gcd,
    inverse,
    is_unimodular_integral,
    kronecker,
    mat_mul,
)
from .goodpair import WitnessCandidate, check_witness
from .lattice import Lattice, LatticePair

FAMILIES = ("unipotent", "cascade", "diagonal", "coprime2", "direct_sum", "tensor")


@dataclass
class ConstructedPair:
    pair: LatticePair
    witness: WitnessCandidate
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def basis(self) -> Matrix:
        """``M`` in the pair ``(M Z^d, Z^d)``."""
        return self.pair.gamma1.basis

    @property
    def dim(self) -> int:
        return self.pair.dim


def _scalar(x) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return ExactScalar(Fraction(x))
    return ExactScalar(x)


def _check_conjugator(m: Matrix | None, d: int, name: str) -> Matrix:
    if m is None:
        return Matrix.identity(d)
    if m.dim != d or not is_unimodular_integral(m):
        raise NotUnimodularIntegral(f"{name} must be an integral unimodular matrix of order {d}")
    return m


def _finish(m: Matrix, witness: Matrix, family: str, params: dict, max_cells=None) -> ConstructedPair:
    pair = LatticePair(Lattice(m), Lattice.standard(m.dim, m.radicand))
    w = WitnessCandidate(witness)
    report = check_witness(w, pair, max_cells=max_cells)
    if not report.passed:
        raise ConstructionFailure(
            f"{family} witness failed ({report.failed_condition}, k={report.counterexample})"
        )
    return ConstructedPair(pair, w, family, params)


# -- unipotent ------------------------------------------------------------

def _unit_triangular_kind(t: Matrix) -> str | None:
    d = t.dim
    if any(t[i, i] != 1 for i in range(d)):
        return None
    upper = all(not t[i, j] for i in range(d) for j in range(i))
    lower = all(not t[i, j] for i in range(d) for j in range(i + 1, d))
    if upper:
        return "upper"
    if lower:
        return "lower"
    return None


def unipotent_pair(
    t: Matrix, p: Matrix | None = None, q: Matrix | None = None, max_cells=None
) -> ConstructedPair:
    """``((p t q) Z^d, Z^d)`` with tile ``(p t)[0,1)^d``, for unit-triangular ``t``."""
    kind = _unit_triangular_kind(t)
    if kind is None:
        raise NotUnipotent("t must be triangular with ones on the diagonal")
    d = t.dim
    p = _check_conjugator(p, d, "P")
    q = _check_conjugator(q, d, "Q")
    pt = mat_mul(p, t)
    params = {"t": str(t), "triangular": kind, "P": str(p), "Q": str(q)}
    return _finish(mat_mul(pt, q), pt, "unipotent", params, max_cells)


def flip_matrix(d: int) -> Matrix:
    """The anti-identity ``J``; ``J T J^-1`` turns lower triangular into upper."""
    return Matrix([[int(i + j == d - 1) for j in range(d)] for i in range(d)])


# -- cascade (M(p), N(p)) -------------------------------------------------

def _product(values) -> ExactScalar:
    out = ExactScalar(1)
    for v in values:
        out = out * v
    return out


def cascade_matrix(p: Sequence) -> Matrix:
    """Upper bidiagonal ``M(p)``: diagonal ``p_1..p_{d-1}, 1/prod(p)``, ones above."""
    ps = [_scalar(x) for x in p]
    d = len(ps) + 1
    rows = [[ExactScalar(0)] * d for _ in range(d)]
    for i, x in enumerate(ps):
        rows[i][i] = x
        rows[i][i + 1] = ExactScalar(1)
    rows[d - 1][d - 1] = 1 / _product(ps)
    return Matrix(rows)


def cascade_witness(p: Sequence) -> Matrix:
    """Anti-diagonal tile matrix ``N(p)`` paired with ``M(p)``."""
    ps = [_scalar(x) for x in p]
    d = len(ps) + 1
    rows = [[ExactScalar(0)] * d for _ in range(d)]
    rows[0][d - 1] = ExactScalar(1)
    for i in range(1, d - 1):
        rows[i][d - 1 - i] = ExactScalar(1)
        rows[i][d - i] = ps[i]
    rows[d - 1][0] = ExactScalar(1)
    rows[d - 1][1] = 1 / _product(ps)
    return Matrix(rows)


def cascade_inverse_closed_form(p: Sequence) -> Matrix:
    """``M(p)^-1`` written out entrywise (no elimination).

    Entry ``(i, j)`` for ``i <= j < d-1`` is ``(-1)^(j-i) / (p_i ... p_j)``;
    the last column holds ``(-1)^(d-1-i) p_1 ... p_{i-1}`` (0-based ``i``).
    """
    ps = [_scalar(x) for x in p]
    d = len(ps) + 1
    rows = [[ExactScalar(0)] * d for _ in range(d)]
    for i in range(d - 1):
        for j in range(i, d - 1):
            rows[i][j] = ExactScalar((-1) ** (j - i)) / _product(ps[i : j + 1])
    for i in range(d):
        rows[i][d - 1] = ExactScalar((-1) ** (d - 1 - i)) * _product(ps[:i])
    return Matrix(rows)


@dataclass
class CascadeParams:
    p: tuple
    P: Matrix | None = None
    Q: Matrix | None = None

    def __post_init__(self):
        self.p = tuple(_scalar(x) for x in self.p)
        if not self.p:
            raise ValueError("cascade needs at least one parameter (d >= 2)")
        if any(x == 0 for x in self.p):
            raise ZeroParameter("every p_k must be nonzero")
        d = len(self.p) + 1
        self.P = _check_conjugator(self.P, d, "P")
        self.Q = _check_conjugator(self.Q, d, "Q")


def cascade_pair(params: CascadeParams, max_cells=None) -> ConstructedPair:
    m = cascade_matrix(params.p)
    n = cascade_witness(params.p)
    basis = mat_mul(mat_mul(params.P, m), params.Q)
    echo = {"p": [str(x) for x in params.p], "P": str(params.P), "Q": str(params.Q)}
    return _finish(basis, mat_mul(params.P, n), "cascade", echo, max_cells)


# -- diagonal D(m) ----------------------------------------------------------

def diagonal_matrix(m: Sequence[int]) -> Matrix:
    entries = [ExactScalar(Fraction(1, k)) for k in m] + [ExactScalar(math.prod(m))]
    return Matrix.diag(entries)


def alternating_unimodular(m: Sequence[int]) -> Matrix:
    """Upper unit-triangular ``U`` with ``U[i, j] = (-1)^(j-i) m_i ... m_{j-1}``."""
    d = len(m) + 1
    return Matrix(
        [
            [(-1) ** (j - i) * math.prod(m[i:j]) if j >= i else 0 for j in range(d)]
            for i in range(d)
        ]
    )


@dataclass
class DiagParams:
    m: tuple
    P: Matrix | None = None
    Q: Matrix | None = None

    def __post_init__(self):
        self.m = tuple(int(x) for x in self.m)
        if not self.m:
            raise ValueError("diagonal family needs at least one parameter (d >= 2)")
        if math.prod(self.m) == 0:
            raise ZeroParameter("every m_k must be nonzero")
        d = len(self.m) + 1
        self.P = _check_conjugator(self.P, d, "P")
        self.Q = _check_conjugator(self.Q, d, "Q")


def diagonal_pair(params: DiagParams, max_cells=None) -> ConstructedPair:
    """``((P D(m) Q) Z^d, Z^d)``; the tile comes from the cascade with ``p_k = 1/m_k``."""
    p = [Fraction(1, k) for k in params.m]
    z = cascade_matrix(p)
    u = alternating_unimodular(params.m)
    dm = diagonal_matrix(params.m)
    if mat_mul(z, u) != dm:
        raise InternalIdentityFailure("Z @ U != D(m)")
    basis = mat_mul(mat_mul(params.P, dm), params.Q)
    witness = mat_mul(params.P, cascade_witness(p))
    echo = {"m": list(params.m), "P": str(params.P), "Q": str(params.Q)}
    return _finish(basis, witness, "diagonal", echo, max_cells)


# -- coprime diag(m/n, n/m) ----------------------------------------------------

def bezout_pair(m: int, n: int) -> tuple[int, int]:
    """``(l1, l2)`` with ``m*l1 + n*l2 == 1``, choosing the smallest ``|l2|``."""
    g, l1, l2 = extended_gcd(m, n)
    if g != 1:
        raise NotCoprime(f"gcd({m}, {n}) = {g}")
    # all solutions: (l1 + s*n, l2 - s*m)
    base = l2 // m
    options = [(l1 + s * n, l2 - s * m) for s in range(base - 2, base + 3)]
    return min(options, key=lambda c: (abs(c[1]), abs(c[0]), -c[1]))


def coprime_shear_identity(m: int, n: int, l1: int, l2: int) -> Matrix:
    """``[[1, -m l2], [0, 1]] @ S' @ [[1, -l1 n], [0, 1]]``, which equals ``diag(m/n, n/m)``."""
    s_prime = Matrix([[Fraction(m, n), 1], [0, Fraction(n, m)]])
    left = Matrix([[1, -m * l2], [0, 1]])
    right = Matrix([[1, -l1 * n], [0, 1]])
    return mat_mul(mat_mul(left, s_prime), right)


@dataclass
class CoprimeParams:
    m: int
    n: int
    l1: int | None = None
    l2: int | None = None
    U: Matrix | None = None
    V: Matrix | None = None

    def __post_init__(self):
        self.m, self.n = int(self.m), int(self.n)
        if self.m == 0 or self.n == 0:
            raise ZeroParameter("m and n must be nonzero")
        if math.gcd(self.m, self.n) != 1:
            raise NotCoprime(f"gcd({self.m}, {self.n}) != 1")
        if self.l1 is None or self.l2 is None:
            self.l1, self.l2 = bezout_pair(self.m, self.n)
        if 1 - self.n * self.l2 - self.m * self.l1 != 0:
            raise ValueError("l1, l2 must satisfy 1 - n*l2 - m*l1 = 0")
        self.U = _check_conjugator(self.U, 2, "U")
        self.V = _check_conjugator(self.V, 2, "V")


def coprime_witness(m: int, n: int, l2: int) -> Matrix:
    return Matrix([[-m * l2, 1 - n * l2], [1, Fraction(n, m)]])


def coprime_pair(params: CoprimeParams, max_cells=None) -> ConstructedPair:
    m, n = params.m, params.n
    core = Matrix.diag([Fraction(m, n), Fraction(n, m)])
    basis = mat_mul(mat_mul(params.U, core), params.V)
    witness = mat_mul(params.U, coprime_witness(m, n, params.l2))
    echo = {"m": m, "n": n, "l1": params.l1, "l2": params.l2, "U": str(params.U), "V": str(params.V)}
    return _finish(basis, witness, "coprime2", echo, max_cells)


# -- lifts ------------------------------------------------------------------

def _require_standard_second(c: ConstructedPair) -> None:
    if c.pair.gamma2.basis != Matrix.identity(c.dim, c.pair.gamma2.radicand):
        raise ValueError("constructed pair must have the form (M Z^d, Z^d)")


def direct_sum_pair(a: ConstructedPair, b: ConstructedPair, max_cells=None) -> ConstructedPair:
    _require_standard_second(a)
    _require_standard_second(b)
    basis = direct_sum(a.basis, b.basis)
    witness = direct_sum(a.witness.n, b.witness.n)
    echo = {"a": a.family, "b": b.family}
    return _finish(basis, witness, "direct_sum", echo, max_cells)


def perm_similarity(d: int, p: int) -> Matrix:
    """Permutation ``P`` with ``P (M kron I_p) P^-1 = I_p kron M`` for every order-``d`` ``M``."""
    size = d * p
    rows = [[0] * size for _ in range(size)]
    for i in range(d):
        for j in range(p):
            rows[j * d + i][i * p + j] = 1
    return Matrix(rows)


def tensor_pair(base: ConstructedPair, n: Matrix, max_cells=None) -> ConstructedPair:
    """``((M kron n) Z^{dp}, Z^{dp})`` for integral unimodular ``n`` of order ``p``."""
    if not is_unimodular_integral(n):
        raise NotUnimodularIntegral("n must be integral unimodular")
    _require_standard_second(base)
    d, p = base.dim, n.dim
    perm = perm_similarity(d, p)
    basis = kronecker(base.basis, n)
    witness = mat_mul(inverse(perm), kronecker(Matrix.identity(p), base.witness.n))
    echo = {"base": base.family, "n": str(n)}
    return _finish(basis, witness, "tensor", echo, max_cells)
