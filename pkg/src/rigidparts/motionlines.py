"""Planar rigid motions as points of 3-space, and point pairs as lines.

An orientation-preserving motion with centre ``c`` and counterclockwise
angle ``theta`` is the point ``(c, cot(theta/2))``. The motions taking ``a``
to ``b`` form the line ``{(u + t v, t)}`` with ``u`` the midpoint of ``ab``
and ``v = ((a_y - b_y)/2, (b_x - a_x)/2)``, the quarter turn of ``(b - a)/2``.
Angles are never materialized: ``w = cot(theta/2)`` gives rational
``cos theta = (w^2 - 1)/(w^2 + 1)`` and ``sin theta = 2w/(w^2 + 1)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

from .exactgeom import Point, nullspace, normalize_leading, point, rank

Point3 = tuple[Fraction, Fraction, Fraction]
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class MotionLine:
    """The non-horizontal line ``{(u_x + t v_x, u_y + t v_y, t)}``."""

    u: Point
    v: Point

    def __post_init__(self):
        object.__setattr__(self, "u", point(*self.u))
        object.__setattr__(self, "v", point(*self.v))

    def at(self, t: Fraction) -> Point3:
        return (self.u[0] + t * self.v[0], self.u[1] + t * self.v[1], Fraction(t))

    def contains(self, x: Point3) -> bool:
        t = x[2]
        return self.u[0] + t * self.v[0] == x[0] and self.u[1] + t * self.v[1] == x[1]

    @property
    def vertical(self) -> bool:
        return self.v == (0, 0)

    @property
    def base_point(self) -> Point3:
        return (self.u[0], self.u[1], Fraction(0))

    @property
    def direction(self) -> Point3:
        return (self.v[0], self.v[1], Fraction(1))

    @classmethod
    def through(cls, p: Point3, q: Point3) -> "MotionLine":
        """The line through two points of 3-space at different heights."""
        p, q = point(*p), point(*q)
        dz = q[2] - p[2]
        if dz == 0:
            raise ValueError("horizontal line: no motion line passes through these points")
        v = ((q[0] - p[0]) / dz, (q[1] - p[1]) / dz)
        u = (p[0] - p[2] * v[0], p[1] - p[2] * v[1])
        return cls(u, v)


@dataclass(frozen=True)
class RotationPoint:
    """Rotation about ``c`` by the angle whose half-angle cotangent is ``w``."""

    c: Point
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", point(*self.c))
        object.__setattr__(self, "w", Fraction(self.w))

    @property
    def cos(self) -> Fraction:
        w2 = self.w * self.w
        return (w2 - 1) / (w2 + 1)

    @property
    def sin(self) -> Fraction:
        return 2 * self.w / (self.w * self.w + 1)

    def as_point3(self) -> Point3:
        return (self.c[0], self.c[1], self.w)

    @classmethod
    def from_point3(cls, x: Point3) -> "RotationPoint":
        return cls((x[0], x[1]), x[2])


def line_from_pair(a: Point, b: Point) -> MotionLine:
    a, b = point(*a), point(*b)
    u = ((a[0] + b[0]) * HALF, (a[1] + b[1]) * HALF)
    v = ((a[1] - b[1]) * HALF, (b[0] - a[0]) * HALF)
    return MotionLine(u, v)


def pair_from_line(line: MotionLine) -> tuple[Point, Point]:
    u, v = line.u, line.v
    a = (u[0] - v[1], u[1] + v[0])
    b = (u[0] + v[1], u[1] - v[0])
    return a, b


def apply_rotation(tau: RotationPoint, x: Point) -> Point:
    cos, sin = tau.cos, tau.sin
    dx, dy = x[0] - tau.c[0], x[1] - tau.c[1]
    return (tau.c[0] + cos * dx - sin * dy, tau.c[1] + sin * dx + cos * dy)


def rotation_from_angle(c: Point, s: Fraction) -> RotationPoint:
    """Rotation about ``c`` whose angle has tangent half-angle ``s`` (``s != 0``)."""
    s = Fraction(s)
    if s == 0:
        raise ValueError("the identity is a translation, not a rotation point")
    return RotationPoint(c, 1 / s)


# ---------------------------------------------------------------------------
# pairwise classification


@dataclass(frozen=True)
class Meet:
    point: Point3


@dataclass(frozen=True)
class Parallel:
    pass


@dataclass(frozen=True)
class Skew:
    pass


PairRelation = Union[Meet, Parallel, Skew]


def meet_or_parallel(l1: MotionLine, l2: MotionLine) -> PairRelation:
    # Both lines are parametrized by height, so a common point has one t:
    # u1 - u2 = t (v2 - v1).
    if l1 == l2:
        raise ValueError("identical lines")
    dv = (l2.v[0] - l1.v[0], l2.v[1] - l1.v[1])
    du = (l1.u[0] - l2.u[0], l1.u[1] - l2.u[1])
    if dv == (0, 0):
        return Parallel()
    if du[0] * dv[1] - du[1] * dv[0] != 0:
        return Skew()
    t = (du[0] * dv[0] + du[1] * dv[1]) / (dv[0] ** 2 + dv[1] ** 2)
    return Meet(l1.at(t))


# ---------------------------------------------------------------------------
# families


class FamilyKind(enum.Enum):
    CONCURRENT = "concurrent"
    COPLANAR = "coplanar"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class FamilyClass:
    kind: FamilyKind
    rotation: Optional[RotationPoint] = None
    plane: Optional[tuple[Fraction, Fraction, Fraction, Fraction]] = None


def plane_conditions(line: MotionLine) -> list[list[Fraction]]:
    """Linear conditions on ``(a, b, c, d)`` for the line to lie in ``ax + by + cz + d = 0``."""
    one, zero = Fraction(1), Fraction(0)
    return [[line.u[0], line.u[1], zero, one], [line.v[0], line.v[1], one, zero]]


def common_plane(lines: Sequence[MotionLine]):
    """The plane containing every line (normalized coefficients), or None."""
    rows = [r for line in lines for r in plane_conditions(line)]
    if rank(rows) > 3:
        return None
    basis = nullspace(rows)
    if len(basis) != 1:
        # only possible for fewer than two distinct lines
        return None
    return normalize_leading(basis[0])


def common_point(lines: Sequence[MotionLine]) -> Optional[Point3]:
    rel = meet_or_parallel(lines[0], lines[1])
    if not isinstance(rel, Meet):
        return None
    if all(line.contains(rel.point) for line in lines[2:]):
        return rel.point
    return None


def classify_line_family(lines: Sequence[MotionLine]) -> FamilyClass:
    if len(lines) < 3:
        raise ValueError("classification needs at least three lines")
    if len(set(lines)) != len(lines):
        raise ValueError("lines must be pairwise distinct")
    x = common_point(lines)
    plane = common_plane(lines)
    rot = RotationPoint.from_point3(x) if x is not None else None
    if x is not None and plane is not None:
        return FamilyClass(FamilyKind.BOTH, rot, plane)
    if x is not None:
        return FamilyClass(FamilyKind.CONCURRENT, rot)
    if plane is not None:
        return FamilyClass(FamilyKind.COPLANAR, plane=plane)
    return FamilyClass(FamilyKind.NEITHER)


def perturbation_lines(p: Sequence[Point], q: Sequence[Point]) -> list[MotionLine]:
    if len(p) != len(q):
        raise ValueError(f"embeddings differ in length ({len(p)} != {len(q)})")
    return [line_from_pair(a, b) for a, b in zip(p, q)]


def pairwise_relations(lines: Sequence[MotionLine]) -> dict[tuple[int, int], PairRelation]:
    return {(i, j): meet_or_parallel(lines[i], lines[j]) for i, j in combinations(range(len(lines)), 2)}
