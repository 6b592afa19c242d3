"""Pairs of point configurations with equal distance profiles, and K(3,m) frameworks.

For two affinely independent tuples ``p = (p_1..p_{d+1})`` and
``p' = (p'_1..p'_{d+1})`` in d-space, the pairs ``(q, q')`` with
``|p_i - q| = |p'_i - q'|`` for every ``i`` are exactly the pairs with ``q`` on
one quadric and ``q' = T(q)`` for an affine map ``T``. :func:`sigma_map`
builds both.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactgeom import (
    Conic2,
    Line2,
    Point,
    dot,
    fit_conic,
    inverse,
    matmul,
    matvec,
    point,
    points_on_two_lines,
    rank,
    sqdist,
    sub,
)
from .rigidity import Framework, Graph, framework_rank


class GuaranteeViolation(AssertionError):
    """Two routes to the same fact disagreed; some exact identity is broken."""


@dataclass(frozen=True)
class QuadraticPoly:
    """``q^T Q q + b . q + c`` in d variables, Q symmetric."""

    Q: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: Fraction

    @property
    def d(self) -> int:
        return len(self.b)

    def __call__(self, q: Sequence[Fraction]) -> Fraction:
        return dot(q, matvec(self.Q, q)) + dot(self.b, q) + self.c

    def coefficient_vector(self) -> list[Fraction]:
        """Monomial coefficients in degree-lex order: ``q_i q_j`` (i <= j), then ``q_i``, then 1."""
        d = self.d
        quad = [self.Q[i][j] * (1 if i == j else 2) for i in range(d) for j in range(i, d)]
        return quad + list(self.b) + [self.c]

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficient_vector())

    def normalized(self) -> "QuadraticPoly":
        vec = self.coefficient_vector()
        lead = next((x for x in vec if x != 0), None)
        if lead is None or lead == 1:
            return self
        k = 1 / lead
        return QuadraticPoly(
            tuple(tuple(k * x for x in row) for row in self.Q),
            tuple(k * x for x in self.b),
            k * self.c,
        )


@dataclass(frozen=True)
class QuadricMap:
    """The affine map ``T(q) = matrix q + offset`` together with the quadric ``sigma``."""

    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]
    sigma: QuadraticPoly

    @property
    def d(self) -> int:
        return len(self.offset)

    def T(self, q: Sequence[Fraction]) -> Point:
        return tuple(x + w for x, w in zip(matvec(self.matrix, q), self.offset))


def _check_general_position(pts: Sequence[Point], name: str) -> list[list[Fraction]]:
    d = len(pts) - 1
    if d < 2 or any(len(p) != d for p in pts):
        raise ValueError(f"{name} must hold d+1 points of d-space with d >= 2")
    rows = [list(sub(p, pts[d])) for p in pts[:d]]
    if rank(rows) != d:
        raise ValueError(f"{name} is affinely dependent")
    return rows


def sigma_map(p: Sequence[Sequence], p_prime: Sequence[Sequence]) -> QuadricMap:
    p = [point(*x) for x in p]
    pp = [point(*x) for x in p_prime]
    if len(p) != len(pp):
        raise ValueError("p and p' must have the same length")
    A = _check_general_position(p, "p")
    B = _check_general_position(pp, "p'")
    d = len(p) - 1
    last, last_p = p[d], pp[d]
    u = [sqdist(x, (0,) * d) - sqdist(last, (0,) * d) for x in p[:d]]
    v = [sqdist(x, (0,) * d) - sqdist(last_p, (0,) * d) for x in pp[:d]]
    Binv = inverse(B)
    M = matmul(Binv, A)
    w = [x / 2 for x in matvec(Binv, [vi - ui for ui, vi in zip(u, v)])]
    # sigma(q) = |last|^2 - 2 last.q + |q|^2 - (|last'|^2 - 2 last'.T(q) + |T(q)|^2)
    MtM = matmul([list(r) for r in zip(*M)], M)
    Mt = [list(r) for r in zip(*M)]
    Q = [[Fraction(int(i == j)) - MtM[i][j] for j in range(d)] for i in range(d)]
    b = [-2 * x for x in last]
    b = [bi + 2 * x - 2 * y for bi, x, y in zip(b, matvec(Mt, last_p), matvec(Mt, w))]
    c = dot(last, last) - dot(last_p, last_p) + 2 * dot(last_p, w) - dot(w, w)
    sigma = QuadraticPoly(tuple(map(tuple, Q)), tuple(b), c).normalized()
    return QuadricMap(tuple(map(tuple, M)), tuple(w), sigma)


def distances_match(p, p_prime, q, q_prime) -> bool:
    return all(sqdist(a, q) == sqdist(b, q_prime) for a, b in zip(p, p_prime))


def verify_pair(qmap: QuadricMap, p, p_prime, q, q_prime) -> bool:
    """Whether ``|p_i - q| = |p'_i - q'|`` for all i, cross-checked against the quadric form.

    Raises :class:`GuaranteeViolation` if the direct distance test and the
    ``sigma(q) = 0 and q' = T(q)`` test disagree.
    """
    p = [point(*x) for x in p]
    pp = [point(*x) for x in p_prime]
    q, qq = point(*q), point(*q_prime)
    direct = distances_match(p, pp, q, qq)
    via_map = qmap.sigma(q) == 0 and qmap.T(q) == qq
    if direct != via_map:
        raise GuaranteeViolation(f"q={q}, q'={qq}: distance test {direct}, quadric test {via_map}")
    return direct


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _singular(sigma: QuadraticPoly, x: Point) -> bool:
    # gradient 2 Q x + b vanishes
    return all(2 * g + h == 0 for g, h in zip(matvec(sigma.Q, x), sigma.b))


def sample_on_quadric(
    sigma: QuadraticPoly,
    rng: random.Random,
    count: int,
    bound: int = 6,
    max_tries: int = 20000,
    known: Optional[Sequence] = None,
) -> list[Point]:
    """Rational points of ``sigma = 0`` found on random rational lines.

    Until a first point is known, only lines whose intersection roots are
    rational contribute; irrational roots are skipped rather than
    approximated. After that, lines are drawn through a known nonsingular
    point, where the second root is always rational. A singular point (the
    vertex of a cone, the crossing of two lines) is never used as a pivot,
    since every line through it meets the quadric there twice. May return
    fewer than ``count`` points if ``max_tries`` lines run out.
    """
    d = sigma.d
    out: list[Point] = []
    if known is not None:
        base = point(*known)
        if sigma(base) != 0:
            raise ValueError("the known point is not on the quadric")
        out.append(base)
    pivots = [x for x in out if not _singular(sigma, x)]

    def rnd():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    for _ in range(max_tries):
        if len(out) >= count:
            break
        a = rng.choice(pivots) if pivots else tuple(rnd() for _ in range(d))
        e = tuple(rnd() for _ in range(d))
        if not any(e):
            continue
        # sigma(a + s e) = alpha s^2 + beta s + gamma
        alpha = dot(e, matvec(sigma.Q, e))
        beta = 2 * dot(a, matvec(sigma.Q, e)) + dot(sigma.b, e)
        gamma = sigma(a)
        roots: list[Fraction] = []
        if alpha == 0:
            if beta != 0:
                roots = [-gamma / beta]
            elif gamma == 0:
                roots = [rnd()]
        else:
            r = _rational_sqrt(beta * beta - 4 * alpha * gamma)
            if r is not None:
                roots = [(-beta + r) / (2 * alpha), (-beta - r) / (2 * alpha)]
        for s in roots:
            pt = tuple(x + s * y for x, y in zip(a, e))
            if pt not in out:
                out.append(pt)
                if not _singular(sigma, pt):
                    pivots.append(pt)
    return out[:count]


# ---------------------------------------------------------------------------
# K(3, m)


class K3mKind(enum.Enum):
    INFINITESIMALLY_RIGID = "infinitesimally-rigid"
    ON_TWO_LINES = "on-two-lines"
    ON_IRREDUCIBLE_CONIC = "on-irreducible-conic"


@dataclass(frozen=True)
class K3mClassification:
    kind: K3mKind
    rank: int
    full_rank: int
    lines: Optional[tuple[Line2, Line2]] = None
    conic: Optional[Conic2] = None


def k3m_framework(p3: Sequence, qm: Sequence) -> Framework:
    pts = [point(*x) for x in p3] + [point(*x) for x in qm]
    return Framework(Graph.complete_bipartite(len(p3), len(qm)), tuple(pts))


def classify_k3m(p3: Sequence, qm: Sequence) -> K3mClassification:
    """Classify an embedding of K(3,m), m >= 5.

    Off every conic the framework must be infinitesimally rigid; that is
    asserted with the exact rank. On a conic the conic is reported either as
    a line pair or as an irreducible conic.
    """
    if len(p3) != 3:
        raise ValueError("the small side must have exactly three vertices")
    if len(qm) < 5:
        raise ValueError("need m >= 5")
    fw = k3m_framework(p3, qm)
    r = framework_rank(fw)
    full = 2 * fw.n - 3
    pair = points_on_two_lines(fw.positions)
    if pair is not None:
        return K3mClassification(K3mKind.ON_TWO_LINES, r, full, lines=pair)
    conic = fit_conic(fw.positions)
    if conic is not None:
        return K3mClassification(K3mKind.ON_IRREDUCIBLE_CONIC, r, full, conic=conic)
    if r != full:
        raise GuaranteeViolation(f"K(3,{len(qm)}) off every conic has rank {r} < {full}")
    return K3mClassification(K3mKind.INFINITESIMALLY_RIGID, r, full)
