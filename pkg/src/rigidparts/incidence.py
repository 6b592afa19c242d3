"""Incidence statistics for finite families of lines in 3-space.

Lines are accepted either as :class:`~rigidparts.motionlines.MotionLine` or as
general :class:`Line3` (which can also be horizontal). All counts are exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .exactgeom import det, normalize_leading, nullspace, point
from .motionlines import Meet, MotionLine, Parallel, PairRelation, Point3, Skew, meet_or_parallel, perturbation_lines
from .rigidity import Edge, Framework, equivalence_violations

DEFAULT_SIZE_LIMIT = 300
GK_CONSTANT = Fraction(291, 10)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _sub3(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


@dataclass(frozen=True)
class Line3:
    """A line ``{point + s * direction}``, stored in a canonical form.

    The direction is scaled so its first nonzero entry is 1 and the point is
    moved to where the matching coordinate vanishes; equal lines compare equal.
    """

    point: Point3
    direction: Point3

    def __post_init__(self):
        p = point(*self.point)
        d = point(*self.direction)
        if d == (0, 0, 0):
            raise ValueError("zero direction vector")
        d = normalize_leading(d)
        k = next(i for i in range(3) if d[i] != 0)
        p = tuple(p[i] - p[k] * d[i] for i in range(3))
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", d)

    @classmethod
    def through(cls, p: Point3, q: Point3) -> "Line3":
        return cls(p, _sub3(point(*q), point(*p)))

    def at(self, s: Fraction) -> Point3:
        return tuple(a + s * b for a, b in zip(self.point, self.direction))

    def contains(self, x: Point3) -> bool:
        return _cross(_sub3(x, self.point), self.direction) == (0, 0, 0)


LineLike = Union[Line3, MotionLine]


def as_line3(line: LineLike) -> Line3:
    if isinstance(line, Line3):
        return line
    if isinstance(line, MotionLine):
        return Line3(line.base_point, line.direction)
    raise TypeError(f"not a line: {line!r}")


def relation(l1: LineLike, l2: LineLike) -> PairRelation:
    """Meet / Parallel / Skew for two distinct lines of 3-space."""
    if isinstance(l1, MotionLine) and isinstance(l2, MotionLine):
        return meet_or_parallel(l1, l2)
    a, b = as_line3(l1), as_line3(l2)
    if a == b:
        raise ValueError("identical lines")
    n = _cross(a.direction, b.direction)
    w = _sub3(b.point, a.point)
    if n == (0, 0, 0):
        return Parallel()
    if _dot3(w, n) != 0:
        return Skew()
    s = _dot3(_cross(w, b.direction), n) / _dot3(n, n)
    return Meet(a.at(s))


def _check_distinct(lines: Sequence[LineLike]) -> list[Line3]:
    canon = [as_line3(x) for x in lines]
    if len(set(canon)) != len(canon):
        raise ValueError("lines must be pairwise distinct")
    return canon


# ---------------------------------------------------------------------------
# rich points


@dataclass
class RichnessMap:
    """Points where at least two lines meet, with the indices of the lines through them."""

    incidences: dict[Point3, frozenset[int]]

    @property
    def richness(self) -> dict[Point3, int]:
        return {p: len(s) for p, s in self.incidences.items()}

    def __len__(self):
        return len(self.incidences)

    def __getitem__(self, p: Point3) -> int:
        return len(self.incidences[p])

    def histogram(self) -> dict[int, int]:
        """Number of points that are exactly k-rich, keyed by k."""
        return dict(sorted(Counter(len(s) for s in self.incidences.values()).items()))

    def at_least(self, k: int) -> int:
        return sum(1 for s in self.incidences.values() if len(s) >= k)


def rich_points(lines: Sequence[LineLike]) -> RichnessMap:
    _check_distinct(lines)
    groups: dict[Point3, set[int]] = {}
    for i, j in combinations(range(len(lines)), 2):
        rel = relation(lines[i], lines[j])
        if isinstance(rel, Meet):
            g = groups.setdefault(rel.point, set())
            g.add(i)
            g.add(j)
    return RichnessMap({p: frozenset(s) for p, s in groups.items()})


def intersection_weight(lines_or_map: Union[Sequence[LineLike], RichnessMap]) -> int:
    """Sum of ``r(p) - 1`` over the points where two or more lines meet."""
    rm = lines_or_map if isinstance(lines_or_map, RichnessMap) else rich_points(lines_or_map)
    return sum(len(s) - 1 for s in rm.incidences.values())


# ---------------------------------------------------------------------------
# planes


Plane = tuple[Fraction, Fraction, Fraction, Fraction]


def _plane_through(a: Line3, b: Line3) -> Plane:
    n = _cross(a.direction, b.direction)
    if n == (0, 0, 0):
        n = _cross(a.direction, _sub3(b.point, a.point))
    return normalize_leading((*n, -_dot3(n, a.point)))


def _in_plane(line: Line3, plane: Plane) -> bool:
    n = plane[:3]
    return _dot3(n, line.direction) == 0 and _dot3(n, line.point) + plane[3] == 0


@dataclass
class PlaneStats:
    max_lines: int
    counts: dict[Plane, int]


def plane_statistics(lines: Sequence[LineLike]) -> PlaneStats:
    """Largest number of lines in a common plane, over planes spanned by coplanar pairs."""
    canon = _check_distinct(lines)
    counts: dict[Plane, int] = {}
    for i, j in combinations(range(len(canon)), 2):
        if isinstance(relation(lines[i], lines[j]), Skew):
            continue
        plane = _plane_through(canon[i], canon[j])
        if plane not in counts:
            counts[plane] = sum(1 for line in canon if _in_plane(line, plane))
    if counts:
        best = max(counts.values())
    else:
        best = 1 if canon else 0
    return PlaneStats(best, counts)


# ---------------------------------------------------------------------------
# quadrics and reguli

# monomial order: x^2, y^2, z^2, xy, xz, yz, x, y, z, 1
QUADRIC_MONOMIALS = ("x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", "1")


def _mono(X):
    x, y, z, w = X
    return (x * x, y * y, z * z, x * y, x * z, y * z, x * w, y * w, z * w, w * w)


def _polar(X, Y):
    x1, y1, z1, w1 = X
    x2, y2, z2, w2 = Y
    return (
        2 * x1 * x2,
        2 * y1 * y2,
        2 * z1 * z2,
        x1 * y2 + x2 * y1,
        x1 * z2 + x2 * z1,
        y1 * z2 + y2 * z1,
        x1 * w2 + x2 * w1,
        y1 * w2 + y2 * w1,
        z1 * w2 + z2 * w1,
        2 * w1 * w2,
    )


def _int_homogeneous(line: Line3) -> tuple[tuple[int, ...], tuple[int, ...]]:
    den = math.lcm(*(c.denominator for c in line.point))
    P = tuple(int(c * den) for c in line.point) + (den,)
    den = math.lcm(*(c.denominator for c in line.direction))
    D = tuple(int(c * den) for c in line.direction) + (0,)
    return P, D


def line_conditions(line: LineLike) -> list[tuple[int, ...]]:
    """Three linear conditions on quadric coefficients for the whole line to lie on it.

    Along ``P + s D`` (homogeneous, integer-scaled) the quadric restricts to
    ``Q(P) + s B(P, D) + s^2 Q(D)``; all three coefficients must vanish.
    """
    P, D = _int_homogeneous(as_line3(line))
    return [_mono(P), _polar(P, D), _mono(D)]


@dataclass(frozen=True)
class Quadric3:
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) != 10:
            raise ValueError("a quadric in 3-space has ten coefficients")
        if not any(self.coefficients):
            raise ValueError("all quadric coefficients are zero")

    def __call__(self, p: Point3) -> Fraction:
        return sum((a * b for a, b in zip(self.coefficients, _mono((*p, 1)))), Fraction(0))

    def matrix(self) -> list[list[Fraction]]:
        a = self.coefficients
        h = Fraction(1, 2)
        return [
            [a[0], h * a[3], h * a[4], h * a[6]],
            [h * a[3], a[1], h * a[5], h * a[7]],
            [h * a[4], h * a[5], a[2], h * a[8]],
            [h * a[6], h * a[7], h * a[8], a[9]],
        ]

    @property
    def nondegenerate(self) -> bool:
        return det(self.matrix()) != 0

    @property
    def integer_coefficients(self) -> tuple[int, ...]:
        den = math.lcm(*(c.denominator for c in self.coefficients))
        ints = [int(c * den) for c in self.coefficients]
        g = math.gcd(*ints)
        return tuple(x // g for x in ints)

    def contains_line(self, line: LineLike) -> bool:
        q = self.integer_coefficients
        return all(sum(a * b for a, b in zip(row, q)) == 0 for row in line_conditions(line))


def quadric_through_skew_triple(l1: LineLike, l2: LineLike, l3: LineLike) -> Quadric3:
    lines = [l1, l2, l3]
    for a, b in combinations(lines, 2):
        if as_line3(a) == as_line3(b) or not isinstance(relation(a, b), Skew):
            raise ValueError("the three lines must be pairwise skew")
    rows = [r for line in lines for r in line_conditions(line)]
    basis = nullspace(rows)
    if len(basis) != 1:
        raise ArithmeticError(f"three skew lines gave a {len(basis)}-dimensional quadric space")
    return Quadric3(normalize_leading(basis[0]))


@dataclass
class Regulus:
    quadric: Quadric3
    members: tuple[int, ...]
    intersecting_pairs: int


@dataclass
class RegulusStats:
    max_lines: int
    max_intersecting_pairs: int
    applicable: bool
    quadrics_examined: int = 0
    reguli: list[Regulus] = field(default_factory=list)


def regulus_statistics(
    lines: Sequence[LineLike],
    size_limit: int = DEFAULT_SIZE_LIMIT,
    override: bool = False,
) -> RegulusStats:
    """Sweep the quadrics spanned by skew triples; count members and meeting pairs on each.

    ``reguli`` keeps every quadric carrying four or more lines of the family.
    """
    n = len(lines)
    if n > size_limit and not override:
        raise ValueError(f"regulus sweep over {n} lines exceeds the size limit {size_limit}")
    _check_distinct(lines)
    if n < 3:
        return RegulusStats(0, 0, False)
    rel = {}
    for i, j in combinations(range(n), 2):
        rel[i, j] = relation(lines[i], lines[j])
    conds = [line_conditions(x) for x in lines]
    seen: set[tuple[int, ...]] = set()
    covered: set[tuple[int, int, int]] = set()
    best_lines = best_pairs = 0
    applicable = False
    reguli = []
    for i, j, k in combinations(range(n), 3):
        if not (isinstance(rel[i, j], Skew) and isinstance(rel[i, k], Skew) and isinstance(rel[j, k], Skew)):
            continue
        applicable = True
        if (i, j, k) in covered:
            continue
        basis = nullspace(conds[i] + conds[j] + conds[k])
        q = Quadric3(normalize_leading(basis[0]))
        key = q.integer_coefficients
        if key in seen:
            continue
        seen.add(key)
        members = tuple(
            x for x in range(n) if all(sum(a * b for a, b in zip(row, key)) == 0 for row in conds[x])
        )
        pairs = sum(1 for a, b in combinations(members, 2) if isinstance(rel[a, b], Meet))
        best_lines = max(best_lines, len(members))
        best_pairs = max(best_pairs, pairs)
        if len(members) > 3:
            covered.update(combinations(members, 3))
            reguli.append(Regulus(q, members, pairs))
    return RegulusStats(best_lines, best_pairs, applicable, len(seen), reguli)


# ---------------------------------------------------------------------------
# edge buckets


@dataclass
class EdgeBuckets:
    """Edges grouped by the richness of the point where their two lines meet.

    Bucket ``t >= 2`` holds edges whose meeting point is k-rich with
    ``2**(t-1) <= k <= 2**t``; each edge sits in the smallest such ``t``.
    Edges whose lines are parallel (a pure translation) go to ``parallel``.
    """

    buckets: dict[int, list[Edge]]
    parallel: list[Edge]
    richness: dict[Edge, int]


def dyadic_bucket(k: int) -> int:
    if k < 2:
        raise ValueError("a meeting point is at least 2-rich")
    return max(2, (k - 1).bit_length())


def bucket_edges(fw: Framework, p_prime: Sequence) -> EdgeBuckets:
    q = [point(*x) for x in p_prime]
    bad = equivalence_violations(fw.graph, fw.positions, q)
    if bad:
        (i, j), a, b = bad[0]
        raise ValueError(f"embeddings are not equivalent: edge {(i, j)} has squared lengths {a} and {b}")
    lines = perturbation_lines(fw.positions, q)
    rm = rich_points(lines)
    buckets: dict[int, list[Edge]] = {}
    parallel: list[Edge] = []
    richness: dict[Edge, int] = {}
    for i, j in fw.graph.edges:
        rel = meet_or_parallel(lines[i], lines[j])
        if isinstance(rel, Parallel):
            parallel.append((i, j))
            continue
        if not isinstance(rel, Meet):
            raise ArithmeticError(f"edge {(i, j)}: equal lengths but skew lines")
        k = rm[rel.point]
        richness[i, j] = k
        buckets.setdefault(dyadic_bucket(k), []).append((i, j))
    return EdgeBuckets(dict(sorted(buckets.items())), parallel, richness)


# ---------------------------------------------------------------------------
# incidence bound check


@dataclass
class BoundReport:
    m: int
    c: Fraction
    intersection_weight: int
    bound: float
    within_bound: bool
    plane_max: int
    plane_ok: bool
    regulus_pairs_max: int
    regulus_ok: bool
    regulus_applicable: bool
    rich_profile: dict[int, int]
    failed_hypotheses: list[str]

    @property
    def hypotheses_hold(self) -> bool:
        return not self.failed_hypotheses


def check_gk_bounds(
    lines: Sequence[LineLike],
    c: Fraction,
    size_limit: int = DEFAULT_SIZE_LIMIT,
    override: bool = False,
) -> BoundReport:
    """Compare the weighted intersection count with ``(29.1 + c/2) m^(3/2)``.

    Hypotheses are checked exactly: at most ``c sqrt(m)`` lines per plane and
    at most ``c^2 m`` meeting pairs among lines on one regulus. A failed
    hypothesis is listed in the report, never raised.
    """
    c = Fraction(c)
    if c < 0:
        raise ValueError("c must be nonnegative")
    m = len(lines)
    rm = rich_points(lines)
    weight = intersection_weight(rm)
    planes = plane_statistics(lines)
    reg = regulus_statistics(lines, size_limit, override)
    failed = []
    plane_ok = planes.max_lines**2 <= c * c * m
    if not plane_ok:
        failed.append("plane")
    regulus_ok = reg.max_intersecting_pairs <= c * c * m
    if not regulus_ok:
        failed.append("regulus")
    coeff = GK_CONSTANT + c / 2
    within = weight * weight <= coeff * coeff * m**3
    kmax = max((len(s) for s in rm.incidences.values()), default=0)
    profile = {k: rm.at_least(k) for k in range(3, kmax + 1)}
    return BoundReport(
        m=m,
        c=c,
        intersection_weight=weight,
        bound=float(coeff) * m**1.5,
        within_bound=within,
        plane_max=planes.max_lines,
        plane_ok=plane_ok,
        regulus_pairs_max=reg.max_intersecting_pairs,
        regulus_ok=regulus_ok,
        regulus_applicable=reg.applicable,
        rich_profile=profile,
        failed_hypotheses=failed,
    )

