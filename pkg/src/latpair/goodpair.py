"""Decide whether ``N[0,1)^d`` is a common fundamental domain of a lattice pair.

``N[0,1)^d`` tiles ``Gamma`` exactly when ``|det N|`` equals the covolume and
the open box ``N(-1,1)^d`` (the difference set of the tile) contains no
nonzero point of ``Gamma``.  A pair is checked after moving ``gamma1`` to
``Z^d``; reports are stated in the original coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .boxenum import Parallelepiped, Topology, enumerate_points
from .errors import MinkowskiViolation, SingularMatrix
from .exactlin import ExactScalar, IntegerApplier, Matrix, det, inverse, mat_mul
from .lattice import Lattice, LatticePair, normalize_pair

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class WitnessCandidate:
    """A proposed tile ``n[0,1)^d``."""

    n: Matrix

    @property
    def dim(self) -> int:
        return self.n.dim


@dataclass
class CheckReport:
    verdict: str
    failed_condition: str = "none"
    counterexample: tuple[int, ...] | None = None
    image: tuple[ExactScalar, ...] | None = None
    boundary_points: list[dict] | None = None
    failures: list[dict] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "verdict": self.verdict,
            "failed_condition": self.failed_condition,
        }
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample)
            out["image"] = [str(x) for x in self.image]
        if self.boundary_points is not None:
            out["boundary_points"] = [_hit_to_dict(h) for h in self.boundary_points]
        if self.failures:
            out["failures"] = [_hit_to_dict(h) for h in self.failures]
        if self.details:
            out["details"] = self.details
        return out


def _hit_to_dict(hit: dict) -> dict:
    return {
        key: ([str(x) if isinstance(x, ExactScalar) else x for x in val] if isinstance(val, tuple) else val)
        for key, val in hit.items()
    }


def _representative(points: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Lexicographically first point whose leading nonzero entry is positive."""
    for k in points:
        lead = next((x for x in k if x), 0)
        if lead > 0:
            return k
    return points[0]


def _nonzero_hits(latt: Lattice, n: Matrix, max_cells) -> list[tuple[int, ...]]:
    res = enumerate_points(latt, Parallelepiped(n, Topology.OPEN_PM1), max_cells=max_cells)
    return res.nonzero()


def check_single(w: WitnessCandidate, latt: Lattice, max_cells: int | None = None) -> CheckReport:
    """Is ``w.n[0,1)^d`` a fundamental domain of ``latt``?"""
    vol = abs(det(w.n))
    if vol != latt.covolume:
        return CheckReport(
            FAIL,
            "volume_mismatch",
            details={"witness_volume": str(vol), "covolume": str(latt.covolume)},
        )
    hits = _nonzero_hits(latt, w.n, max_cells)
    if not hits:
        return CheckReport(PASS)
    k = _representative(hits)
    return CheckReport(FAIL, "hits_gamma1", counterexample=k, image=latt.basis.apply(k))


def normalized_witness(w: WitnessCandidate, pair: LatticePair) -> Matrix:
    return mat_mul(inverse(pair.gamma1.basis), w.n)


def check_witness(
    w: WitnessCandidate,
    pair: LatticePair,
    all_failures: bool = False,
    max_cells: int | None = None,
) -> CheckReport:
    """Test ``w`` against both lattices of ``pair``.

    ``Z^d`` (i.e. ``gamma1``) is tested first; unless ``all_failures`` is set
    the first failing condition is reported.
    """
    normalized, _ = normalize_pair(pair)
    w_norm = normalized_witness(w, pair)
    vol = abs(det(w_norm))
    if vol != 1:
        return CheckReport(
            FAIL,
            "volume_mismatch",
            details={"normalized_witness_volume": str(vol)},
        )
    failures = []
    checks = (
        ("gamma1", normalized.gamma1, pair.gamma1),
        ("gamma2", normalized.gamma2, pair.gamma2),
    )
    for label, norm_latt, orig_latt in checks:
        hits = _nonzero_hits(norm_latt, w_norm, max_cells)
        if hits:
            k = _representative(hits)
            failures.append(
                {"condition": f"hits_{label}", "k": k, "image": orig_latt.basis.apply(k)}
            )
            if not all_failures:
                break
    if not failures:
        return CheckReport(PASS)
    first = failures[0]
    return CheckReport(
        FAIL,
        first["condition"],
        counterexample=first["k"],
        image=first["image"],
        failures=failures if all_failures else [],
    )


def transport_witness(w: WitnessCandidate, n: Matrix) -> WitnessCandidate:
    """Carry a witness for ``(P Z^d, M Z^d)`` to one for ``(nP Z^d, nM Z^d)``."""
    if det(n) == 0:
        raise SingularMatrix("transport matrix must be nonsingular")
    return WitnessCandidate(mat_mul(n, w.n))


def minkowski_boundary_report(
    w: WitnessCandidate, pair: LatticePair, max_cells: int | None = None
) -> CheckReport:
    """List the nonzero lattice points of the closed box ``w.n[-1,1]^d``.

    For a passing witness they must exist (the closed box has volume ``2^d``)
    and all of them must lie on the boundary.  Anything else raises
    ``MinkowskiViolation``.
    """
    if not check_witness(w, pair, max_cells=max_cells).passed:
        raise ValueError("minkowski_boundary_report requires a passing witness")
    normalized, _ = normalize_pair(pair)
    w_norm = normalized_witness(w, pair)
    closed = Parallelepiped(w_norm, Topology.CLOSED_PM1)
    points = []
    for label, norm_latt, orig_latt in (
        ("gamma1", normalized.gamma1, pair.gamma1),
        ("gamma2", normalized.gamma2, pair.gamma2),
    ):
        res = enumerate_points(norm_latt, closed, max_cells=max_cells)
        nonzero = [k for k in res.points if any(k)]
        if not nonzero:
            raise MinkowskiViolation(f"no nonzero {label} point in the closed box")
        # box coordinates of k, as integer parts over a common denominator
        coords = IntegerApplier(mat_mul(closed.n_inv, norm_latt.basis))
        image = IntegerApplier(orig_latt.basis)
        for k in nonzero:
            # (alpha + beta*sqrt(r)) / den is +-1 only for beta == 0
            if not any(beta == 0 and abs(alpha) == coords.den for alpha, beta in coords.parts(k)):
                raise MinkowskiViolation(f"{label} point {k} lies strictly inside the box")
            points.append({"lattice": label, "k": k, "image": image(k)})
    return CheckReport(PASS, boundary_points=points)
