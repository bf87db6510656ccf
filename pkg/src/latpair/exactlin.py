"""Exact scalars in Q or Q(sqrt r), and dense square matrices over them.

Everything here is immutable and exact.  A scalar carries its radicand so
that two quadratic fields are never mixed by accident; plain rationals
(radicand 0) promote silently into whatever field they meet.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    BothZero,
    DimensionMismatch,
    NonIntegralInput,
    RadicandMismatch,
    SingularMatrix,
)

__all__ = [
    "ExactScalar",
    "Matrix",
    "sqrt_of",
    "squarefree_decomposition",
    "field_radicand",
    "det",
    "inverse",
    "mat_mul",
    "IntegerApplier",
    "kronecker",
    "direct_sum",
    "is_unimodular_integral",
    "hnf",
    "extended_gcd",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s*s*f`` and ``f`` square-free."""
    if n < 0:
        raise ValueError(f"radicand must be nonnegative, got {n}")
    if n == 0:
        return 0, 0
    s, f = 1, 1
    rest = n
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            f *= p
        p += 1
    return s, f * rest


def field_radicand(n: int) -> int:
    """Square-free radicand of the field ``Q(sqrt n)``; 0 when ``sqrt n`` is rational."""
    f = squarefree_decomposition(n)[1]
    return 0 if f == 1 else f


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def quad_sign(a, b, r: int) -> int:
    """Exact sign of ``a + b*sqrt(r)`` for rational (or integer) ``a, b``."""
    sa = _sign(a)
    if b == 0 or r == 0:
        return sa
    sb = _sign(b)
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    lhs = a * a
    rhs = b * b * r
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def _coerce(x) -> "ExactScalar":
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return ExactScalar._make(Fraction(x), _ZERO, 0)
    return NotImplemented


def _join(r1: int, r2: int) -> int:
    if r1 == r2 or r2 == 0:
        return r1
    if r1 == 0:
        return r2
    raise RadicandMismatch(f"cannot combine sqrt({r1}) and sqrt({r2}) scalars")


class ExactScalar:
    """``a + b*sqrt(r)`` with rational ``a, b`` and square-free ``r``.

    ``r == 0`` means the scalar is a plain rational.  Values are hashable and
    compare equal to the matching ``int``/``Fraction`` when ``b == 0``.
    """

    __slots__ = ("a", "b", "r")

    def __init__(self, a=0, b=0, r: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        r = int(r)
        if r < 0:
            raise ValueError(f"radicand must be nonnegative, got {r}")
        if r == 0 and b != 0:
            raise ValueError("nonzero radical part requires a positive radicand")
        s, f = squarefree_decomposition(r)
        if f == 1:
            a, b, f = a + b * s, _ZERO, 0
        else:
            b = b * s
        self.a = a
        self.b = b
        self.r = f

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, r: int) -> "ExactScalar":
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        obj.r = r
        return obj

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        return quad_sign(self.a, self.b, self.r)

    def with_radicand(self, r: int) -> "ExactScalar":
        return ExactScalar._make(self.a, self.b, _join(self.r, r))

    def conjugate(self) -> "ExactScalar":
        return ExactScalar._make(self.a, -self.b, self.r)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ExactScalar._make(self.a + other.a, self.b + other.b, _join(self.r, other.r))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ExactScalar._make(self.a - other.a, self.b - other.b, _join(self.r, other.r))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        r = _join(self.r, other.r)
        a, b, c, d = self.a, self.b, other.a, other.b
        if b == 0 and d == 0:
            return ExactScalar._make(a * c, _ZERO, r)
        return ExactScalar._make(a * c + b * d * r, a * d + b * c, r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self._reciprocal()

    def _reciprocal(self) -> "ExactScalar":
        a, b, r = self.a, self.b, self.r
        if b == 0:
            if a == 0:
                raise ZeroDivisionError("division by exact zero")
            return ExactScalar._make(1 / a, _ZERO, r)
        norm = a * a - b * b * r
        return ExactScalar._make(a / norm, -b / norm, r)

    def __neg__(self):
        return ExactScalar._make(-self.a, -self.b, self.r)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self._reciprocal()) ** (-n)
        result = ExactScalar._make(_ONE, _ZERO, self.r)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def _cmp(self, other) -> int:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare ExactScalar with {type(other).__name__}")
        r = _join(self.r, other.r)
        return quad_sign(self.a - other.a, self.b - other.b, r)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        _join(self.r, other.r)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return not self.is_zero()

    # -- rounding and conversion -------------------------------------------
    def __floor__(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        # enough bits of sqrt(r) that the guess is within one of the answer
        bits = 64 + max(0, abs(self.b.numerator).bit_length() - self.b.denominator.bit_length())
        root = Fraction(math.isqrt(self.r << (2 * bits)), 1 << bits)
        guess = math.floor(self.a + self.b * root)
        while quad_sign(self.a - guess, self.b, self.r) < 0:
            guess -= 1
        while quad_sign(self.a - (guess + 1), self.b, self.r) >= 0:
            guess += 1
        return guess

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.r)

    def abs_upper_bound(self) -> Fraction:
        """Rational ``u >= |self|`` using ``sqrt(r) <= isqrt(r) + 1``."""
        if self.b == 0:
            return abs(self.a)
        return abs(self.a) + abs(self.b) * (math.isqrt(self.r) + 1)

    def tight_abs_upper_bound(self, bits: int = 64) -> Fraction:
        """Rational ``u >= |self|`` within about ``|b| * 2**-bits`` of ``|self|``."""
        if self.b == 0:
            return abs(self.a)
        lo = Fraction(math.isqrt(self.r << (2 * bits)), 1 << bits)
        hi = lo + Fraction(1, 1 << bits)
        return max(abs(self.a + self.b * lo), abs(self.a + self.b * hi))

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        mag = abs(self.b)
        coeff = f"sqrt({self.r})" if mag == 1 else f"{mag}*sqrt({self.r})"
        if self.a == 0:
            return coeff if self.b > 0 else "-" + coeff
        return f"{self.a}{'+' if self.b > 0 else '-'}{coeff}"

    def __repr__(self) -> str:
        return f"ExactScalar('{self}')"


def sqrt_of(n: int) -> ExactScalar:
    """``sqrt(n)`` as an exact scalar; rational when ``n`` is a perfect square."""
    return ExactScalar(0, 1, n) if n else ExactScalar(0)


def _as_scalar(x) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return ExactScalar(Fraction(x))
    return ExactScalar(x)


Vector = tuple  # tuple of ExactScalar


class Matrix:
    """Square matrix of ``ExactScalar`` sharing one radicand.

    Column ``j`` is the image of the ``j``-th standard basis vector, so a
    lattice basis matrix lists its generators as columns.
    """

    __slots__ = ("rows", "radicand")

    def __init__(self, rows: Iterable[Iterable], radicand: int | None = None):
        data = [[_as_scalar(x) for x in row] for row in rows]
        d = len(data)
        if d == 0 or any(len(row) != d for row in data):
            raise DimensionMismatch("matrix must be square and non-empty")
        r = 0
        for row in data:
            for x in row:
                r = _join(r, x.r)
        if radicand:
            r = _join(r, field_radicand(radicand))
        self.rows = tuple(tuple(ExactScalar._make(x.a, x.b, r) for x in row) for row in data)
        self.radicand = r

    @classmethod
    def _trusted(cls, rows, radicand: int) -> "Matrix":
        obj = object.__new__(cls)
        obj.rows = tuple(tuple(row) for row in rows)
        obj.radicand = radicand
        return obj

    @classmethod
    def identity(cls, d: int, radicand: int = 0) -> "Matrix":
        one = ExactScalar._make(_ONE, _ZERO, radicand)
        zero = ExactScalar._make(_ZERO, _ZERO, radicand)
        return cls._trusted(
            [[one if i == j else zero for j in range(d)] for i in range(d)], radicand
        )

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        d = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(zip(*self.rows), self.radicand)

    def is_integral(self) -> bool:
        return all(x.is_integer() for row in self.rows for x in row)

    def to_int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise NonIntegralInput("matrix has non-integer entries")
        return [[int(x.a) for x in row] for row in self.rows]

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.rows]

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} against dim {self.dim}")
        vs = [_as_scalar(x) for x in v]
        zero = ExactScalar._make(_ZERO, _ZERO, self.radicand)
        out = []
        for row in self.rows:
            acc = zero
            for x, y in zip(row, vs):
                if x.a or x.b:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return self.apply(other)

    def __mul__(self, scalar):
        s = _coerce(scalar)
        if s is NotImplemented:
            return s
        return Matrix._trusted(
            [[x * s for x in row] for row in self.rows], _join(self.radicand, s.r)
        )

    __rmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_dim(self, other)
        return Matrix._trusted(
            [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            _join(self.radicand, other.radicand),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_dim(self, other)
        return Matrix._trusted(
            [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            _join(self.radicand, other.radicand),
        )

    def __neg__(self) -> "Matrix":
        return Matrix._trusted([[-x for x in row] for row in self.rows], self.radicand)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __str__(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.rows)

    def __repr__(self) -> str:
        return f"Matrix('{self}')"


class IntegerApplier:
    """``m @ k`` for integer vectors ``k``, in integer arithmetic.

    Entry ``i`` of the product is ``(alpha_i + beta_i*sqrt(r)) / den``.
    """

    def __init__(self, m: Matrix):
        self.r = m.radicand
        self.den = math.lcm(*(math.lcm(x.a.denominator, x.b.denominator) for row in m.rows for x in row))
        self.ia = [[int(x.a * self.den) for x in row] for row in m.rows]
        self.ib = [[int(x.b * self.den) for x in row] for row in m.rows]

    def parts(self, k: Sequence[int]) -> list[tuple[int, int]]:
        return [
            (sum(c * x for c, x in zip(ra, k)), sum(c * x for c, x in zip(rb, k)))
            for ra, rb in zip(self.ia, self.ib)
        ]

    def __call__(self, k: Sequence[int]) -> Vector:
        return tuple(
            ExactScalar._make(Fraction(alpha, self.den), Fraction(beta, self.den), self.r)
            for alpha, beta in self.parts(k)
        )


def _same_dim(a: Matrix, b: Matrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _same_dim(a, b)
    r = _join(a.radicand, b.radicand)
    zero = ExactScalar._make(_ZERO, _ZERO, r)
    cols = list(zip(*b.rows))
    out = []
    for row in a.rows:
        nz = [(k, x) for k, x in enumerate(row) if x.a or x.b]
        new_row = []
        for col in cols:
            acc = zero
            for k, x in nz:
                y = col[k]
                if y.a or y.b:
                    acc = acc + x * y
            new_row.append(acc)
        out.append(new_row)
    return Matrix._trusted(out, r)


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    r = _join(a.radicand, b.radicand)
    nb = b.dim
    d = a.dim * nb
    rows = [[None] * d for _ in range(d)]
    for i, arow in enumerate(a.rows):
        for j, x in enumerate(arow):
            for k, brow in enumerate(b.rows):
                for l, y in enumerate(brow):
                    rows[i * nb + k][j * nb + l] = x * y
    return Matrix._trusted(rows, r)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    r = _join(a.radicand, b.radicand)
    zero = ExactScalar._make(_ZERO, _ZERO, r)
    na, nb = a.dim, b.dim
    rows = [list(row) + [zero] * nb for row in a.rows]
    rows += [[zero] * na + list(row) for row in b.rows]
    return Matrix._trusted(
        [[ExactScalar._make(x.a, x.b, r) for x in row] for row in rows], r
    )


def _eliminate(m: Matrix, augment: bool):
    """Gauss(-Jordan) elimination over the field; first nonzero pivot."""
    d = m.dim
    r = m.radicand
    rows = [list(row) for row in m.rows]
    if augment:
        one = ExactScalar._make(_ONE, _ZERO, r)
        zero = ExactScalar._make(_ZERO, _ZERO, r)
        for i in range(d):
            rows[i] += [one if i == j else zero for j in range(d)]
    det_value = ExactScalar._make(_ONE, _ZERO, r)
    for c in range(d):
        piv = next((i for i in range(c, d) if rows[i][c]), None)
        if piv is None:
            return None, ExactScalar._make(_ZERO, _ZERO, r)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det_value = -det_value
        p = rows[c][c]
        det_value = det_value * p
        start = 0 if augment else c + 1
        for i in range(start, d):
            if i == c:
                continue
            f = rows[i][c]
            if not f:
                continue
            factor = f / p
            ri, rc = rows[i], rows[c]
            for j in range(c, len(ri)):
                if rc[j]:
                    ri[j] = ri[j] - factor * rc[j]
    return rows, det_value


def det(m: Matrix) -> ExactScalar:
    return _eliminate(m, augment=False)[1]


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises ``SingularMatrix`` if ``det(m) == 0``."""
    rows, _ = _eliminate(m, augment=True)
    if rows is None:
        raise SingularMatrix("matrix is singular")
    d = m.dim
    out = []
    for i in range(d):
        p = rows[i][i]
        out.append([x / p for x in rows[i][d:]])
    return Matrix._trusted(out, m.radicand)


def is_unimodular_integral(m: Matrix) -> bool:
    if not m.is_integral():
        return False
    return det(m) in (1, -1)


def extended_gcd(m: int, n: int) -> tuple[int, int, int]:
    """Return ``(g, l1, l2)`` with ``g = gcd(m, n) > 0`` and ``m*l1 + n*l2 == g``."""
    if m == 0 and n == 0:
        raise BothZero("gcd(0, 0) is undefined")
    old_r, r = m, n
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(m: Matrix) -> Matrix:
    """Column Hermite normal form ``H = m @ U`` with ``U`` integral unimodular.

    ``H`` is lower triangular with a positive diagonal, and each entry left of
    the diagonal lies in ``[0, H[i, i])``.
    """
    a = m.to_int_rows()
    d = m.dim
    for i in range(d):
        for j in range(i + 1, d):
            b = a[i][j]
            if b == 0:
                continue
            p = a[i][i]
            g, x, y = extended_gcd(p, b)
            u, v = -b // g, p // g
            for row in a:
                ci, cj = row[i], row[j]
                row[i] = x * ci + y * cj
                row[j] = u * ci + v * cj
        piv = a[i][i]
        if piv == 0:
            raise SingularMatrix("matrix is singular")
        if piv < 0:
            for row in a:
                row[i] = -row[i]
            piv = -piv
        for j in range(i):
            q = a[i][j] // piv
            if q:
                for row in a:
                    row[j] -= q * row[i]
    return Matrix(a)
