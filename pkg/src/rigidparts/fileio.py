"""Framework files: JSON documents with exact rational coordinates.

    {"n": 3, "vertices": [["0", "0"], ["1", "0"], ["1/2", "3/4"]],
     "edges": [[0, 1], [0, 2], [1, 2]]}

Coordinates are strings in "p/q" or decimal form (plain JSON integers are
accepted too). An optional "bipartition" member lists the two sides of a
bipartite graph.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from .exactgeom import format_rational, rational
from .rigidity import Framework, Graph


class FrameworkFileError(ValueError):
    pass


def _parse_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameworkFileError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _coordinate(value: Any, vertex: int, axis: str, source: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FrameworkFileError(f"{source}: vertex {vertex}: {axis} must be a rational string, got {value!r}")
    try:
        return rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise FrameworkFileError(f"{source}: vertex {vertex}: bad {axis} coordinate {value!r} ({exc})") from None


def parse_framework(text: str, source: str = "<string>") -> tuple[Framework, dict]:
    """Framework plus the raw document (for optional members such as "bipartition")."""
    doc = _parse_json(text, source)
    if not isinstance(doc, dict):
        raise FrameworkFileError(f"{source}: top level must be an object")
    for key in ("n", "vertices", "edges"):
        if key not in doc:
            raise FrameworkFileError(f"{source}: missing member {key!r}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise FrameworkFileError(f"{source}: 'n' must be a nonnegative integer")
    verts = doc["vertices"]
    if not isinstance(verts, list) or len(verts) != n:
        raise FrameworkFileError(f"{source}: 'vertices' must list exactly n = {n} points")
    pts = []
    for k, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != 2:
            raise FrameworkFileError(f"{source}: vertex {k}: expected [x, y]")
        pts.append((_coordinate(v[0], k, "x", source), _coordinate(v[1], k, "y", source)))
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise FrameworkFileError(f"{source}: 'edges' must be a list")
    pairs = []
    for k, e in enumerate(edges):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in e)
        ):
            raise FrameworkFileError(f"{source}: edge {k}: expected [i, j] with integer endpoints")
        pairs.append((e[0], e[1]))
    try:
        fw = Framework(Graph(n, tuple(pairs)), tuple(pts))
    except ValueError as exc:
        raise FrameworkFileError(f"{source}: {exc}") from None
    return fw, doc


def read_framework(path: Union[str, Path]) -> tuple[Framework, dict, str]:
    """Framework, raw document and sha256 of the file bytes."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FrameworkFileError(f"{path}: not UTF-8 ({exc})") from None
    fw, doc = parse_framework(text, str(path))
    return fw, doc, hashlib.sha256(data).hexdigest()


def framework_document(fw: Framework, bipartition: Optional[Sequence[Sequence[int]]] = None) -> dict:
    doc = {
        "n": fw.n,
        "vertices": [[format_rational(x), format_rational(y)] for x, y in fw.positions],
        "edges": [[i, j] for i, j in fw.graph.edges],
    }
    if bipartition is not None:
        doc["bipartition"] = [list(side) for side in bipartition]
    return doc


def dumps_framework(fw: Framework, bipartition=None) -> str:
    return json.dumps(framework_document(fw, bipartition), indent=1) + "\n"


def write_framework(fw: Framework, path: Union[str, Path], bipartition=None) -> None:
    Path(path).write_text(dumps_framework(fw, bipartition), encoding="utf-8")
