"""Full-rank lattices given by basis matrices, and equal-volume pairs."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalIdentityFailure, SingularMatrix, VolumeMismatch
from .exactlin import ExactScalar, Matrix, det, hnf, inverse, is_unimodular_integral, mat_mul


@dataclass(frozen=True)
class Lattice:
    """The lattice ``basis @ Z^d``; columns of ``basis`` are the generators."""

    basis: Matrix
    covolume: ExactScalar = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        v = abs(det(self.basis))
        if v == 0:
            raise SingularMatrix("lattice basis must be nonsingular")
        object.__setattr__(self, "covolume", v)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def radicand(self) -> int:
        return self.basis.radicand

    @classmethod
    def standard(cls, d: int, radicand: int = 0) -> "Lattice":
        return cls(Matrix.identity(d, radicand))


@dataclass(frozen=True)
class LatticePair:
    gamma1: Lattice
    gamma2: Lattice

    def __post_init__(self):
        if self.gamma1.dim != self.gamma2.dim:
            raise VolumeMismatch("lattices of a pair must share a dimension")
        if self.gamma1.covolume != self.gamma2.covolume:
            raise VolumeMismatch(
                f"covolumes differ: {self.gamma1.covolume} vs {self.gamma2.covolume}"
            )

    @property
    def dim(self) -> int:
        return self.gamma1.dim

    @property
    def radicand(self) -> int:
        return self.gamma1.radicand or self.gamma2.radicand

    def swapped(self) -> "LatticePair":
        return LatticePair(self.gamma2, self.gamma1)


def covolume(latt: Lattice) -> ExactScalar:
    return latt.covolume


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    """True iff ``a.basis = b.basis @ U`` for an integral unimodular ``U``.

    For integral bases the answer is cross-checked against HNF equality.
    """
    if a.dim != b.dim:
        return False
    quotient = mat_mul(inverse(b.basis), a.basis)
    equal = is_unimodular_integral(quotient)
    if a.basis.is_integral() and b.basis.is_integral():
        if equal != (hnf(a.basis) == hnf(b.basis)):
            raise InternalIdentityFailure("HNF comparison disagrees with the quotient test")
    return equal


def normalize_pair(pair: LatticePair) -> tuple[LatticePair, Matrix]:
    """Move ``gamma1`` to ``Z^d`` by left-multiplying with ``inverse(M1)``.

    Returns the normalized pair and ``M1``; a witness ``W`` of the normalized
    pair becomes ``M1 @ W`` for the original one.
    """
    m1 = pair.gamma1.basis
    inv = inverse(m1)
    normalized = LatticePair(
        Lattice.standard(pair.dim, m1.radicand),
        Lattice(mat_mul(inv, pair.gamma2.basis)),
    )
    return normalized, m1
