"""Text and JSON formats for scalars, matrices, lattice pairs.

Scalar: ``a/b`` or ``a/b+c/d*sqrt(r)`` (whitespace ignored).
Matrix: rows separated by ``;``, entries by ``,`` -- or a JSON object
``{"dim": d, "radicand": r, "rows": [[...], ...]}``.
Pair: ``{"gamma1": <matrix>, "gamma2": <matrix>}``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .errors import ParseError, RadicandMismatch
from .exactlin import ExactScalar, Matrix, field_radicand, squarefree_decomposition

_NUM = r"\d+(?:/\d+|\.\d*)?"
_SCALAR_RE = re.compile(
    rf"^(?P<rat>[+-]?{_NUM})?"
    rf"(?:(?P<sgn>[+-])?(?P<coef>{_NUM})?\*?sqrt\((?P<rad>\d+)\))?$"
)


def parse_scalar(text: str, radicand: int = 0) -> ExactScalar:
    """Parse one scalar.  ``sqrt(n)`` must live in the field fixed by ``radicand``."""
    s = "".join(str(text).split())
    m = _SCALAR_RE.match(s)
    if not s or m is None:
        raise ParseError(f"malformed scalar {text!r}")
    rat, sgn, coef, rad = m.group("rat", "sgn", "coef", "rad")
    try:
        if rad is None:
            return ExactScalar(Fraction(rat)).with_radicand(field_radicand(radicand))
        if sgn is None and coef is None and rat is not None:
            # "3/2*sqrt(5)": the leading number is the coefficient
            a, b = Fraction(0), Fraction(rat)
        else:
            a = Fraction(rat) if rat is not None else Fraction(0)
            b = Fraction(coef) if coef is not None else Fraction(1)
            if sgn == "-":
                b = -b
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed scalar {text!r}: {exc}") from None
    n = int(rad)
    f = field_radicand(n)
    if f and f != field_radicand(radicand):
        raise RadicandMismatch(f"sqrt({n}) is outside the declared field (radicand {radicand})")
    s_part, _ = squarefree_decomposition(n) if n else (0, 0)
    if f == 0:
        return ExactScalar(a + b * s_part).with_radicand(field_radicand(radicand))
    return ExactScalar(a, b, n)


def _parse_rows(rows, radicand: int) -> Matrix:
    parsed = []
    for i, row in enumerate(rows, start=1):
        cells = []
        for j, cell in enumerate(row, start=1):
            if isinstance(cell, (int, float)) and not isinstance(cell, bool):
                cell = str(cell)
            if not isinstance(cell, str) or not cell.strip():
                raise ParseError("empty or non-string entry", row=i, column=j)
            try:
                cells.append(parse_scalar(cell, radicand))
            except ParseError as exc:
                raise ParseError(str(exc), row=i, column=j) from None
        parsed.append(cells)
    if not parsed:
        raise ParseError("matrix has no rows")
    d = len(parsed)
    for i, row in enumerate(parsed, start=1):
        if len(row) != d:
            raise ParseError(f"expected {d} entries, found {len(row)}", row=i)
    return Matrix(parsed, radicand=radicand)


def _matrix_from_obj(obj: Any, radicand: int) -> Matrix:
    if isinstance(obj, str):
        return parse_matrix(obj, radicand)
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ParseError("matrix JSON must be an object with a 'rows' field")
    declared = int(obj.get("radicand", 0) or 0)
    if radicand and declared and field_radicand(declared) != field_radicand(radicand):
        raise RadicandMismatch(f"matrix declares radicand {declared}, context is {radicand}")
    r = radicand or declared
    m = _parse_rows(obj["rows"], r)
    if "dim" in obj and int(obj["dim"]) != m.dim:
        raise ParseError(f"declared dim {obj['dim']} but rows give {m.dim}")
    return m


def parse_matrix(text: str, radicand: int = 0) -> Matrix:
    """Parse the text (``1,7/3;0,1``) or JSON matrix format."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", row=exc.lineno, column=exc.colno) from None
        return _matrix_from_obj(obj, radicand)
    compact = "".join(stripped.split())
    raw_rows = compact.split(";")
    if raw_rows and raw_rows[-1] == "":
        raw_rows.pop()
    return _parse_rows([row.split(",") for row in raw_rows], radicand)


def parse_pair(source, radicand: int = 0):
    """Parse ``{"gamma1": ..., "gamma2": ...}`` (text or already-decoded dict)."""
    from .lattice import Lattice, LatticePair

    obj = source
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", row=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict) or "gamma1" not in obj or "gamma2" not in obj:
        raise ParseError("pair JSON needs 'gamma1' and 'gamma2'")
    g1 = _matrix_from_obj(obj["gamma1"], radicand)
    g2 = _matrix_from_obj(obj["gamma2"], radicand or g1.radicand)
    return LatticePair(Lattice(g1), Lattice(g2))


def scalar_str(x) -> str:
    return str(x)


def vector_strs(v) -> list[str]:
    return [str(x) for x in v]


def matrix_to_obj(m: Matrix) -> dict:
    return {"dim": m.dim, "radicand": m.radicand, "rows": [[str(x) for x in row] for row in m.rows]}


def pair_to_obj(pair) -> dict:
    return {"gamma1": matrix_to_obj(pair.gamma1.basis), "gamma2": matrix_to_obj(pair.gamma2.basis)}
