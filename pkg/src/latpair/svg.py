"""SVG rendering of planar tilings ``N[0,1)^2 + Gamma`` around the origin."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boxenum import Parallelepiped, Topology, enumerate_points
from .errors import DimensionNot2
from .exactlin import Matrix
from .lattice import Lattice

DEFAULT_COLORS = ("#1f77b4", "#d62728")


@dataclass(frozen=True)
class SvgScene:
    witness: Matrix
    lattices: tuple[Lattice, ...]
    window: Fraction = Fraction(2)
    colors: tuple[str, str] = DEFAULT_COLORS
    opacity: float = 0.15

    def __post_init__(self):
        w = getattr(self.witness, "n", self.witness)
        object.__setattr__(self, "witness", w)
        object.__setattr__(self, "lattices", tuple(self.lattices))
        object.__setattr__(self, "window", Fraction(self.window))
        if w.dim != 2 or any(l.dim != 2 for l in self.lattices):
            raise DimensionNot2("SVG scenes are two-dimensional")
        if not 1 <= len(self.lattices) <= 2:
            raise ValueError("a scene shows one or two lattices")
        if self.window <= 0:
            raise ValueError("window must be positive")


def _clip(poly: list, coeffs: Sequence, bound) -> list:
    """Keep the part of a convex polygon with ``coeffs . u <= bound``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = coeffs[0] * p[0] + coeffs[1] * p[1] - bound
        fq = coeffs[0] * q[0] + coeffs[1] * q[1] - bound
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def tile_meets_window(n: Matrix, shift: Sequence, window) -> bool:
    """Does the half-open tile ``n[0,1)^2 + shift`` meet ``[-window, window]^2``?

    Decided exactly in tile coordinates ``u``: clip the closed unit square by
    the four window constraints; the half-open tile meets the window iff the
    clipped polygon has a point with ``u1 < 1`` and ``u2 < 1``, which holds
    iff the vertex centroid does.
    """
    one, zero = n[0, 0] * 0 + 1, n[0, 0] * 0
    poly = [(zero, zero), (one, zero), (one, one), (zero, one)]
    for i in range(2):
        row = (n[i, 0], n[i, 1])
        poly = _clip(poly, row, window - shift[i])
        if not poly:
            return False
        poly = _clip(poly, (-row[0], -row[1]), window + shift[i])
        if not poly:
            return False
    cx = sum((p[0] for p in poly), zero) / len(poly)
    cy = sum((p[1] for p in poly), zero) / len(poly)
    return cx < 1 and cy < 1


def visible_translates(scene: SvgScene, latt: Lattice) -> list[tuple[int, ...]]:
    n = scene.witness
    reach = scene.window + max(
        sum((x.abs_upper_bound() for x in row), Fraction(0)) for row in n.rows
    )
    search = Parallelepiped(Matrix.diag([reach, reach]), Topology.CLOSED_PM1)
    res = enumerate_points(latt, search)
    return [k for k, shift in zip(res.points, res.images) if tile_meets_window(n, shift, scene.window)]


def _fmt(x) -> str:
    v = float(x)
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def _polygon(n: Matrix, shift: Sequence) -> str:
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    pts = []
    for u in corners:
        p = [n[i, 0] * u[0] + n[i, 1] * u[1] + shift[i] for i in range(2)]
        pts.append(f"{_fmt(p[0])},{_fmt(p[1])}")
    return " ".join(pts)


def emit_svg(scene: SvgScene) -> str:
    """Render the scene as a standalone SVG document (byte-deterministic)."""
    w = scene.window
    fw = _fmt(w)
    size = _fmt(2 * w)
    stroke = _fmt(w / 200)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="480" height="480" '
        f'viewBox="-{fw} -{fw} {size} {size}">',
        f'<defs><clipPath id="window"><rect x="-{fw}" y="-{fw}" width="{size}" height="{size}"/>'
        "</clipPath></defs>",
        '<g transform="scale(1,-1)" clip-path="url(#window)">',
        f'<rect x="-{fw}" y="-{fw}" width="{size}" height="{size}" fill="white"/>',
    ]
    for idx, latt in enumerate(scene.lattices):
        color = scene.colors[idx % len(scene.colors)]
        lines.append(
            f'<g id="lattice{idx + 1}" stroke="{color}" fill="{color}" '
            f'fill-opacity="{scene.opacity}" stroke-width="{stroke}">'
        )
        for k in visible_translates(scene, latt):
            shift = latt.basis.apply(k)
            label = ",".join(str(c) for c in k)
            lines.append(f'<polygon data-k="{label}" points="{_polygon(scene.witness, shift)}"/>')
        lines.append("</g>")
    lines.append(f'<circle id="origin" cx="0" cy="0" r="{_fmt(w / 40)}" fill="black"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def count_tiles(scene: SvgScene) -> list[int]:
    return [len(visible_translates(scene, l)) for l in scene.lattices]


__all__ = ["SvgScene", "emit_svg", "tile_meets_window", "visible_translates", "count_tiles"]
