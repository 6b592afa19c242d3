"""Exact rational linear algebra and planar predicates.

Every predicate here is decided exactly over :class:`fractions.Fraction`.
Points are plain tuples of Fractions; use :func:`point` to build them from
ints, Fractions or literal strings such as ``"3/5"`` or ``"0.25"``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple, Union

RationalLike = Union[int, Fraction, str]
Point = Tuple[Fraction, ...]
Matrix = Sequence[Sequence[Fraction]]


def rational(x: RationalLike) -> Fraction:
    """Convert ``x`` to a Fraction without ever passing through a float.

    Strings accept ``"p/q"``, integers and finite decimals (``"0.25"`` is 1/4).
    Floats are refused: they would smuggle rounding into exact predicates.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in rational literal {x!r}") from None
        except ValueError:
            raise ValueError(f"invalid rational literal {x!r}") from None
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def point(*coords: RationalLike) -> Point:
    return tuple(rational(c) for c in coords)


def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def scale(k: Fraction, a: Point) -> Point:
    return tuple(k * x for x in a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sqdist(a: Point, b: Point) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


# ---------------------------------------------------------------------------
# exact linear algebra


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = math.lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in row]
    return row


def echelon(M: Matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Rows are scaled to integers, eliminated by cross-multiplication and kept
    primitive (content divided out), so entries never leave the integers.
    Returns the nonzero echelon rows and their pivot columns.
    """
    rows = [_integer_row(r) for r in M]
    if not rows:
        return [], []
    ncols = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    for c in range(ncols):
        piv = next((i for i, r in enumerate(rows) if r[c] != 0), None)
        if piv is None:
            continue
        prow = rows.pop(piv)
        pc = prow[c]
        nxt = []
        for r in rows:
            rc = r[c]
            if rc:
                r = _primitive([pc * x - rc * y for x, y in zip(r, prow)])
                if not any(r):
                    continue
            nxt.append(r)
        rows = nxt
        out.append(prow)
        pivots.append(c)
        if not rows:
            break
    return out, pivots


def rank(M: Matrix) -> int:
    return len(echelon(M)[1])


def nullspace(M: Matrix, ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Exact basis of ``{x : M x = 0}``, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns. ``ncols`` is needed only when ``M`` has no rows.
    """
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    E, pivots = echelon(M)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in reversed(list(zip(E, pivots))):
            s = sum((row[j] * x[j] for j in range(pc + 1, ncols)), Fraction(0))
            x[pc] = -s / row[pc]
        basis.append(x)
    return basis


def det(M: Matrix) -> Fraction:
    """Exact determinant of a square matrix (Bareiss on the integer-scaled rows)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    scale_den = 1
    A = []
    for r in M:
        den = 1
        for x in r:
            den = math.lcm(den, Fraction(x).denominator)
        scale_den *= den
        A.append([int(Fraction(x) * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return Fraction(sign * A[n - 1][n - 1], scale_den)


def solve(M: Matrix, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve the square, invertible system ``M x = b`` exactly."""
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(M, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n] for row in aug]


def inverse(M: Matrix) -> list[list[Fraction]]:
    n = len(M)
    cols = [solve(M, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> list[list[Fraction]]:
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def matvec(A: Matrix, x: Sequence[Fraction]) -> list[Fraction]:
    return [dot(row, x) for row in A]


def normalize_leading(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale ``v`` so its first nonzero entry is 1 (zero vector unchanged)."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(Fraction(x) for x in v)
    return tuple(Fraction(x) / lead for x in v)


# ---------------------------------------------------------------------------
# planar predicates


def orient(p1: Point, p2: Point, p3: Point) -> Fraction:
    """Twice the signed area of the triangle; positive when counterclockwise."""
    return (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p2[1] - p1[1]) * (p3[0] - p1[0])


def collinear3(p1: Point, p2: Point, p3: Point) -> bool:
    return orient(p1, p2, p3) == 0


def conic_row(p: Point) -> list[Fraction]:
    x, y = p
    return [x * x, x * y, y * y, x, y, Fraction(1)]


def conic_through_six(pts: Sequence[Point]) -> bool:
    if len(pts) != 6:
        raise ValueError("conic_through_six needs exactly six points")
    return det([conic_row(p) for p in pts]) == 0


@dataclass(frozen=True)
class Line2:
    """The line ``a x + b y + c = 0``, normalized so the leading coefficient is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line2":
        if p == q:
            raise ValueError("two distinct points are needed to span a line")
        a = q[1] - p[1]
        b = p[0] - q[0]
        c = -(a * p[0] + b * p[1])
        return cls(*normalize_leading((a, b, c)))

    def contains(self, p: Point) -> bool:
        return self.a * p[0] + self.b * p[1] + self.c == 0


@dataclass(frozen=True)
class Conic2:
    """Zero set of ``A x^2 + B xy + C y^2 + D x + E y + F``."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) != 6:
            raise ValueError("a conic has six coefficients")
        if not any(self.coefficients):
            raise ValueError("all conic coefficients are zero")

    def __call__(self, p: Point) -> Fraction:
        return dot(self.coefficients, conic_row(p))

    def contains(self, p: Point) -> bool:
        return self(p) == 0

    def matrix(self) -> list[list[Fraction]]:
        A, B, C, D, E, F = self.coefficients
        h = Fraction(1, 2)
        return [[A, h * B, h * D], [h * B, C, h * E], [h * D, h * E, F]]

    @property
    def degenerate(self) -> bool:
        # rank <= 2 exactly when the form splits into linear factors over C
        return det(self.matrix()) == 0


def fit_conic(pts: Sequence[Point]) -> Optional[Conic2]:
    """A conic through every point, or None if the points lie on no conic.

    When several conics pass through the points (fewer than five points in
    general position, or collinear input) the first null-space basis vector is
    returned; inspect :attr:`Conic2.degenerate` to tell line pairs apart.
    """
    if len(pts) < 5:
        raise ValueError("fit_conic needs at least five points")
    basis = nullspace([conic_row(p) for p in pts])
    if not basis:
        return None
    return Conic2(normalize_leading(basis[0]))


class Congruence(enum.Enum):
    EQUAL_ORIENTATION = "equal-orientation"
    OPPOSITE_ORIENTATION = "opposite-orientation"
    BOTH_DEGENERATE = "both-degenerate"
    NOT_CONGRUENT = "not-congruent"


def all_collinear(pts: Sequence[Point]) -> bool:
    distinct = list(dict.fromkeys(pts))
    if len(distinct) < 3:
        return True
    a, b = distinct[0], distinct[1]
    return all(collinear3(a, b, c) for c in distinct[2:])


def congruence_class(A: Sequence[Point], B: Sequence[Point]) -> Congruence:
    if len(A) != len(B):
        raise ValueError(f"sequences differ in length ({len(A)} != {len(B)})")
    if len(A) < 2:
        raise ValueError("congruence needs at least two points")
    for i, j in combinations(range(len(A)), 2):
        if sqdist(A[i], A[j]) != sqdist(B[i], B[j]):
            return Congruence.NOT_CONGRUENT
    for i, j, k in combinations(range(len(A)), 3):
        oa = orient(A[i], A[j], A[k])
        if oa != 0:
            ob = orient(B[i], B[j], B[k])
            if (oa > 0) == (ob > 0):
                return Congruence.EQUAL_ORIENTATION
            return Congruence.OPPOSITE_ORIENTATION
    return Congruence.BOTH_DEGENERATE


def points_on_two_lines(pts: Iterable[Point]) -> Optional[tuple[Line2, Line2]]:
    """Two lines covering every point, if such a pair exists.

    Among any three distinct input points two share a covering line, so only
    the three lines they span need to be tried as the first line.
    """
    distinct = list(dict.fromkeys(pts))
    if not distinct:
        raise ValueError("points_on_two_lines needs at least one point")
    p0 = distinct[0]
    if len(distinct) == 1:
        return Line2(Fraction(1), Fraction(0), -p0[0]), Line2(Fraction(0), Fraction(1), -p0[1])
    if len(distinct) == 2:
        first = Line2.through(distinct[0], distinct[1])
        return first, _any_line_through(distinct[0], avoid=first)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        first = Line2.through(distinct[a], distinct[b])
        rest = [p for p in distinct if not first.contains(p)]
        if not rest:
            return first, _any_line_through(distinct[a], avoid=first)
        if len(rest) == 1:
            return first, _any_line_through(rest[0], avoid=first)
        second = Line2.through(rest[0], rest[1])
        if all(second.contains(p) for p in rest[2:]):
            return first, second
    return None


def _any_line_through(p: Point, avoid: Line2) -> Line2:
    horizontal = Line2(Fraction(0), Fraction(1), -p[1])
    if horizontal != avoid:
        return horizontal
    return Line2(Fraction(1), Fraction(0), -p[0])
