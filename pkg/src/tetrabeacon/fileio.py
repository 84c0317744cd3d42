"""File formats: decomposition JSON, polygon JSON, certificates, reports,
DOT, OFF and OBJ exports, and path polylines.

Decomposition files are JSON:

    {
      "label": "name",
      "field": "Q" | "Q(sqrt3)",        # optional, default "Q"
      "vertices": [...],
      "tets": [[i, j, k, l], ...]
    }

With field "Q" a vertex is ["p/q", "r/s", "t/u"] (plain integer strings
also accepted) or the six-integer row [xNum, xDen, yNum, yDen, zNum, zDen].
With field "Q(sqrt3)" each coordinate is a pair ["a", "b"] meaning
a + b*sqrt(3) with rational a, b. The writer always emits "p/q" strings.
Round-trips are lossless on canonical rationals.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from .attraction import AttractionPath
from .decomposition import TetDecomposition
from .exact import QSqrt3, Scalar
from .geometry import Point3, Tetrahedron

PathLike = Union[str, Path]


class FormatError(ValueError):
    """Malformed input file, with enough context to find the spot."""


def _parse_fraction(text, where: str) -> Fraction:
    try:
        if isinstance(text, str):
            return Fraction(text)
        if isinstance(text, int):
            return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{where}: bad rational {text!r}: {exc}") from None
    raise FormatError(f"{where}: expected a rational string, got {text!r}")


def _format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _parse_vertex_q(entry, where: str) -> Point3:
    if isinstance(entry, list) and len(entry) == 6 \
            and all(isinstance(v, int) for v in entry):
        nums = entry
        try:
            return Point3(Fraction(nums[0], nums[1]),
                          Fraction(nums[2], nums[3]),
                          Fraction(nums[4], nums[5]))
        except ZeroDivisionError:
            raise FormatError(f"{where}: zero denominator") from None
    if isinstance(entry, list) and len(entry) == 3:
        return Point3(*(_parse_fraction(v, where) for v in entry))
    raise FormatError(f"{where}: expected 3 rationals or 6 integers, "
                      f"got {entry!r}")


def _parse_coordinate_q3(entry, where: str) -> Scalar:
    if isinstance(entry, list) and len(entry) == 2:
        a = _parse_fraction(entry[0], where)
        b = _parse_fraction(entry[1], where)
        return a if b == 0 else QSqrt3(a, b)
    return _parse_fraction(entry, where)


def _format_coordinate_q3(value: Scalar) -> list[str]:
    if isinstance(value, QSqrt3):
        return [_format_fraction(value.a), _format_fraction(value.b)]
    return [_format_fraction(Fraction(value)), "0/1"]


def decomposition_to_json_dict(d: TetDecomposition) -> dict:
    sqrt3 = any(isinstance(c, QSqrt3) and c.b != 0
                for v in d.vertices for c in v)
    if sqrt3:
        vertices = [[_format_coordinate_q3(c) for c in v] for v in d.vertices]
        field = "Q(sqrt3)"
    else:
        vertices = [[_format_fraction(Fraction(c if not isinstance(c, QSqrt3)
                                               else c.a)) for c in v]
                    for v in d.vertices]
        field = "Q"
    return {
        "label": d.label,
        "field": field,
        "vertices": vertices,
        "tets": [list(t.v) for t in d.tets],
    }


def decomposition_from_json_dict(data: dict) -> TetDecomposition:
    if not isinstance(data, dict):
        raise FormatError("top level must be a JSON object")
    for key in ("vertices", "tets"):
        if key not in data:
            raise FormatError(f"missing required key {key!r}")
    field = data.get("field", "Q")
    if field not in ("Q", "Q(sqrt3)"):
        raise FormatError(f"unknown coordinate field {field!r}")
    vertices = []
    for i, entry in enumerate(data["vertices"]):
        where = f"vertices[{i}]"
        if field == "Q(sqrt3)":
            if not isinstance(entry, list) or len(entry) != 3:
                raise FormatError(f"{where}: expected 3 coordinates")
            vertices.append(Point3(*(_parse_coordinate_q3(c, where)
                                     for c in entry)))
        else:
            vertices.append(_parse_vertex_q(entry, where))
    n = len(vertices)
    tets = []
    for i, entry in enumerate(data["tets"]):
        where = f"tets[{i}]"
        if not isinstance(entry, list) or len(entry) != 4 \
                or not all(isinstance(v, int) for v in entry):
            raise FormatError(f"{where}: expected 4 vertex indices")
        for v in entry:
            if not 0 <= v < n:
                raise FormatError(f"{where}: vertex index {v} out of range 0..{n - 1}")
        try:
            tets.append(Tetrahedron(tuple(entry)))
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from None
    return TetDecomposition(vertices, tets, label=str(data.get("label", "")))


def read_decomposition(source: Union[PathLike, TextIO]) -> TetDecomposition:
    text = _read_text(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return decomposition_from_json_dict(data)


def write_decomposition(d: TetDecomposition, target: Union[PathLike, TextIO]):
    _write_text(target, json.dumps(decomposition_to_json_dict(d), indent=2) + "\n")


# -- polygons -------------------------------------------------------------


def polygon_to_json_dict(polygon: Sequence) -> dict:
    sqrt3 = any(isinstance(c, QSqrt3) and c.b != 0 for v in polygon for c in v)
    if sqrt3:
        return {"field": "Q(sqrt3)",
                "polygon": [[_format_coordinate_q3(c) for c in v]
                            for v in polygon]}
    return {"field": "Q",
            "polygon": [[_format_fraction(Fraction(c)) for c in v]
                        for v in polygon]}


def polygon_from_json_dict(data: dict) -> list[tuple]:
    if "polygon" not in data:
        raise FormatError("missing required key 'polygon'")
    field = data.get("field", "Q")
    out = []
    for i, entry in enumerate(data["polygon"]):
        where = f"polygon[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"{where}: expected 2 coordinates")
        if field == "Q(sqrt3)":
            out.append(tuple(_parse_coordinate_q3(c, where) for c in entry))
        else:
            out.append(tuple(_parse_fraction(c, where) for c in entry))
    return out


def read_polygon(source: Union[PathLike, TextIO]) -> list[tuple]:
    try:
        data = json.loads(_read_text(source))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return polygon_from_json_dict(data)


def write_polygon(polygon: Sequence, target: Union[PathLike, TextIO]):
    _write_text(target, json.dumps(polygon_to_json_dict(polygon), indent=2) + "\n")


def is_polygon_file(text: str) -> bool:
    try:
        return "polygon" in json.loads(text)
    except (json.JSONDecodeError, TypeError):
        return False


# -- mesh exports ---------------------------------------------------------


def _oriented_boundary(d: TetDecomposition) -> list[tuple[int, int, int]]:
    """Boundary triangles oriented so the right-handed normal points out."""
    from .geometry import orient3d

    out = []
    for tet_index, facet in d.boundary_facets():
        tet = d.tets[tet_index]
        opposite = next(v for v in tet.v if v not in facet)
        a, b, c = facet
        if orient3d(d.vertices[a], d.vertices[b], d.vertices[c],
                    d.vertices[opposite]) > 0:
            a, b, c = a, c, b   # normal pointed inward; flip
        out.append((a, b, c))
    return sorted(out)


def write_off(d: TetDecomposition, target: Union[PathLike, TextIO]):
    tris = _oriented_boundary(d)
    lines = ["OFF", f"{len(d.vertices)} {len(tris)} 0"]
    for v in d.vertices:
        x, y, z = v.to_floats()
        lines.append(f"{x:.17g} {y:.17g} {z:.17g}")
    for a, b, c in tris:
        lines.append(f"3 {a} {b} {c}")
    _write_text(target, "\n".join(lines) + "\n")


def write_obj(d: TetDecomposition, target: Union[PathLike, TextIO]):
    tris = _oriented_boundary(d)
    lines = [f"# {d.label}".rstrip()]
    for v in d.vertices:
        x, y, z = v.to_floats()
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for a, b, c in tris:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    _write_text(target, "\n".join(lines) + "\n")


def write_path_obj(path: AttractionPath, target: Union[PathLike, TextIO]):
    """OBJ polyline of a trace, for offline viewing."""
    lines = ["# attraction path"]
    for w in path.waypoints:
        coords = list(w) + [0.0] * (3 - len(w))
        lines.append("v " + " ".join(f"{c:.17g}" for c in coords))
    if len(path.waypoints) > 1:
        lines.append("l " + " ".join(str(i + 1)
                                     for i in range(len(path.waypoints))))
    _write_text(target, "\n".join(lines) + "\n")


def write_path_json(path: AttractionPath, target: Union[PathLike, TextIO]):
    _write_text(target, json.dumps(path.to_json_dict(), indent=2) + "\n")


# -- plumbing -------------------------------------------------------------


def _read_text(source: Union[PathLike, TextIO]) -> str:
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text()


def _write_text(target: Union[PathLike, TextIO], text: str):
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text)
