"""The hypercube framework: a sparse, non-collinear embedding with no rigid part.

Vertex ``i`` of ``H_d`` is the 0/1 tuple of its bits, least significant bit
first. The planar embedding is a linear projection ``T`` (a 2 x d rational
matrix) of the standard cube embedding.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .exactgeom import Point, det, point, rank, sqdist
from .motionlines import RotationPoint, apply_rotation
from .rigidity import Framework, Graph, framework_rank

EXHAUSTIVE_CONIC_LIMIT = 16  # vertices; beyond this conic sextuples are sampled


class ProjectionSamplingError(RuntimeError):
    pass


class CounterexampleFailure(AssertionError):
    """A verification step found a subframework or flex contradicting the construction."""


def vertex_bits(i: int, d: int) -> tuple[int, ...]:
    return tuple((i >> k) & 1 for k in range(d))


def build(d: int) -> Graph:
    if d < 1:
        raise ValueError("d must be at least 1")
    n = 1 << d
    edges = [(i, i | (1 << k)) for i in range(n) for k in range(d) if not i >> k & 1]
    return Graph(n, tuple(sorted(edges)))


def standard_embedding(d: int, check: Optional[bool] = None) -> list[Point]:
    """Cube corners in d-space; verifies no three are collinear when ``check`` (default: d <= 6)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    pts = [point(*vertex_bits(i, d)) for i in range(1 << d)]
    if check is None:
        check = d <= 6
    if check:
        for a, b, c in combinations(pts, 3):
            rows = [[x - y for x, y in zip(b, a)], [x - y for x, y in zip(c, a)]]
            if rank(rows) < 2:
                raise AssertionError(f"collinear cube corners {a}, {b}, {c}")
    return pts


@dataclass(frozen=True)
class Projection:
    """A 2 x d rational matrix used to project the cube into the plane."""

    rows: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]

    @property
    def d(self) -> int:
        return len(self.rows[0])

    def apply(self, x: Sequence[Fraction]) -> Point:
        return tuple(sum((a * b for a, b in zip(r, x)), Fraction(0)) for r in self.rows)

    def integer_scaled(self) -> np.ndarray:
        """Same matrix times the lcm of its denominators, as int64; collinearity and conics unchanged."""
        den = math.lcm(*(x.denominator for r in self.rows for x in r))
        return np.array([[int(x * den) for x in r] for r in self.rows], dtype=np.int64)


def projected_points(proj: Projection) -> list[Point]:
    d = proj.d
    return [proj.apply(vertex_bits(i, d)) for i in range(1 << d)]


def _integer_points(proj: Projection) -> np.ndarray:
    d = proj.d
    bits = np.array([vertex_bits(i, d) for i in range(1 << d)], dtype=np.int64)
    return bits @ proj.integer_scaled().T


def collinear_triples(proj: Projection, limit: int = 1) -> list[tuple[int, int, int]]:
    """Collinear vertex triples of the projected cube (exact, integer arithmetic).

    For each vertex the reduced directions to all later vertices are hashed; a
    repeated direction is a collinear triple.
    """
    P = _integer_points(proj)
    n = len(P)
    found = []
    for i in range(n - 2):
        D = P[i + 1 :] - P[i]
        g = np.gcd(D[:, 0], D[:, 1])
        if np.any(g == 0):
            j = i + 1 + int(np.nonzero(g == 0)[0][0])
            raise ValueError(f"vertices {i} and {j} coincide")
        D = D // g[:, None]
        flip = (D[:, 0] < 0) | ((D[:, 0] == 0) & (D[:, 1] < 0))
        D[flip] *= -1
        _, inv, counts = np.unique(D, axis=0, return_inverse=True, return_counts=True)
        inv = np.asarray(inv).reshape(-1)
        for grp in np.nonzero(counts > 1)[0]:
            js = i + 1 + np.nonzero(inv == grp)[0]
            found.append((i, int(js[0]), int(js[1])))
            if len(found) >= limit:
                return found
    return found


def centrally_symmetric(S: Sequence[int], d: int) -> bool:
    """True when ``S`` splits into pairs with one common midpoint in the cube.

    Six such corners always project onto a central conic, for every ``T``, so
    they are exempt from the conic test.
    """
    s = sorted(S)
    total = [sum(vertex_bits(v, d)[k] for v in s) for k in range(d)]
    if any(2 * t % len(s) for t in total):
        return False
    mid = [2 * t // len(s) for t in total]
    bits = {v: vertex_bits(v, d) for v in s}
    partners = {v: tuple(m - b for m, b in zip(mid, bits[v])) for v in s}
    inv = {b: v for v, b in bits.items()}
    return all(partners[v] in inv and inv[partners[v]] != v for v in s)


def _int_conic_rows(P: np.ndarray) -> list[list[int]]:
    return [[int(x) * int(x), int(x) * int(y), int(y) * int(y), int(x), int(y), 1] for x, y in P]


def _int_det6(rows: list[list[int]]) -> int:
    return det(rows).numerator


def conic_sextuples(
    proj: Projection,
    limit: int = 1,
    budget: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> tuple[list[tuple[int, ...]], int, bool]:
    """Unforced six-vertex subsets on a common conic.

    Exhaustive when there are at most ``EXHAUSTIVE_CONIC_LIMIT`` vertices and
    ``budget`` is None; otherwise ``budget`` random sextuples are drawn.
    Returns (offending subsets, subsets tested, exhaustive flag).
    """
    d = proj.d
    P = _integer_points(proj)
    rows = _int_conic_rows(P)
    n = len(P)
    if n < 6:
        return [], 0, True
    exhaustive = budget is None and n <= EXHAUSTIVE_CONIC_LIMIT
    if exhaustive:
        subsets = combinations(range(n), 6)
    else:
        rng = rng or random.Random(0)
        count = budget if budget is not None else 20000
        subsets = (tuple(sorted(rng.sample(range(n), 6))) for _ in range(count))
    bad = []
    tested = 0
    for S in subsets:
        tested += 1
        if _int_det6([rows[i] for i in S]) == 0 and not centrally_symmetric(S, d):
            bad.append(S)
            if len(bad) >= limit:
                break
    return bad, tested, exhaustive


def sample_projection(
    d: int,
    seed: int = 0,
    coefficient_bound: int = 9,
    max_attempts: int = 200,
    conic_budget: Optional[int] = None,
) -> Projection:
    """Rejection-sample a projection with distinct images, no collinear triple, no unforced conic sextuple."""
    if d < 2:
        raise ValueError("d must be at least 2")
    rng = random.Random(seed)
    last_reason = "none"
    for _ in range(max_attempts):
        rows = tuple(
            tuple(Fraction(rng.randint(-coefficient_bound, coefficient_bound), rng.randint(1, coefficient_bound)) for _ in range(d))
            for _ in range(2)
        )
        proj = Projection(rows)
        reason = projection_defect(proj, conic_budget=conic_budget, rng=random.Random(rng.random()))
        if reason is None:
            return proj
        last_reason = reason
    raise ProjectionSamplingError(f"no valid projection for d={d} after {max_attempts} attempts; last: {last_reason}")


def projection_defect(proj: Projection, conic_budget: Optional[int] = None, rng=None) -> Optional[str]:
    """Why ``proj`` is unusable, or None when it passes every test."""
    if rank([list(r) for r in proj.rows]) < 2:
        return "rank < 2"
    P = _integer_points(proj)
    if len({tuple(x) for x in P.tolist()}) < len(P):
        return "two vertices collide"
    tri = collinear_triples(proj)
    if tri:
        return f"collinear vertices {tri[0]}"
    bad, _, _ = conic_sextuples(proj, budget=conic_budget, rng=rng)
    if bad:
        return f"vertices {bad[0]} on a conic"
    return None


def embed(d: int, proj: Projection) -> Framework:
    if proj.d != d:
        raise ValueError(f"projection is for d={proj.d}, not {d}")
    return Framework(build(d), tuple(projected_points(proj)))


def explicit_flex(fw: Framework, d: int, s: Fraction) -> list[Point]:
    """Rotate every edge of the last coordinate direction by the same angle.

    The low half (last bit 0) stays put; each high vertex ``u'`` moves to
    ``p(u) + R(p(u') - p(u))`` where ``u`` is its low partner and ``R`` has
    tangent half-angle ``s``. The high half is thereby translated, so every
    edge keeps its length.
    """
    s = Fraction(s)
    half = 1 << (d - 1)
    if fw.n != 2 * half:
        raise ValueError("framework does not have 2^d vertices")
    pts = list(fw.positions)
    if s == 0:
        return pts
    out = list(pts)
    for u in range(half):
        tau = RotationPoint(pts[u], 1 / s)
        out[u + half] = apply_rotation(tau, pts[u + half])
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class SubsetSweep:
    checked: int = 0
    by_count: int = 0
    by_rank: int = 0
    exhaustive: bool = True


@dataclass
class CounterexampleReport:
    d: int
    seed: int
    projection: list[list[str]]
    n: int
    m: int
    collinear_free: bool
    conic_sextuples_tested: int
    conic_exhaustive: bool
    conic_free: bool
    sweep: SubsetSweep
    flex_s: str
    flex_edges_preserved: bool
    flex_changed_pair: Optional[tuple[int, int]]
    flex_changed_sqdist: Optional[tuple[str, str]]
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)


def subset_not_inf_rigid(fw: Framework, S: Sequence[int]) -> str:
    """'count' or 'rank' for how ``S`` was shown to miss full rank; raises if it has full rank."""
    sub = fw.sub(S)
    need = 2 * len(S) - 3
    if sub.graph.m < need:
        return "count"
    r = framework_rank(sub)
    if r >= need:
        raise CounterexampleFailure(f"subframework {tuple(S)} is infinitesimally rigid (rank {r})")
    return "rank"


def _sweep(fw: Framework, d: int, subset_budget: int, rng: random.Random) -> SubsetSweep:
    n = fw.n
    sweep = SubsetSweep()
    if d <= 3:
        subsets = (S for k in range(3, n + 1) for S in combinations(range(n), k))
    else:
        sweep.exhaustive = False
        subsets = (_random_subset(d, rng) for _ in range(subset_budget))
    for S in subsets:
        how = subset_not_inf_rigid(fw, S)
        sweep.checked += 1
        if how == "count":
            sweep.by_count += 1
        else:
            sweep.by_rank += 1
    return sweep


FACE_DIM = 5


def _random_subset(d: int, rng: random.Random) -> tuple[int, ...]:
    # For d > FACE_DIM draw inside a random face of dimension FACE_DIM: uniform
    # subsets of a large cube span almost no edges and test nothing.
    if d <= FACE_DIM:
        pool = list(range(1 << d))
    else:
        free = sorted(rng.sample(range(d), FACE_DIM))
        base = sum(rng.randint(0, 1) << k for k in range(d) if k not in free)
        pool = [base | sum(((j >> a) & 1) << k for a, k in enumerate(free)) for j in range(1 << FACE_DIM)]
    k = rng.randint(3, len(pool))
    return tuple(sorted(rng.sample(pool, k)))


def verify_counterexample(
    d: int,
    seed: int = 1,
    subset_budget: int = 5000,
    s: Fraction = Fraction(1, 10),
    proj: Optional[Projection] = None,
    coefficient_bound: int = 9,
    conic_budget: Optional[int] = None,
) -> CounterexampleReport:
    """Check every part of the construction; raises :class:`CounterexampleFailure` on any defect."""
    if d < 2:
        raise ValueError("d must be at least 2")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    if proj is None:
        proj = sample_projection(d, seed, coefficient_bound, conic_budget=conic_budget)
    fw = embed(d, proj)
    if collinear_triples(proj):
        raise CounterexampleFailure("collinear triple in the embedding")
    bad, tested, exhaustive = conic_sextuples(proj, budget=conic_budget, rng=random.Random(seed))
    if bad:
        raise CounterexampleFailure(f"vertices {bad[0]} lie on a conic")
    sweep = _sweep(fw, d, subset_budget, rng)

    s = Fraction(s)
    moved = explicit_flex(fw, d, s)
    g = fw.graph
    preserved = all(sqdist(fw.positions[i], fw.positions[j]) == sqdist(moved[i], moved[j]) for i, j in g.edges)
    if not preserved:
        raise CounterexampleFailure("explicit flex changed an edge length")
    changed = None
    for i, j in combinations(range(fw.n), 2):
        if g.has_edge(i, j):
            continue
        a, b = sqdist(fw.positions[i], fw.positions[j]), sqdist(moved[i], moved[j])
        if a != b:
            changed = ((i, j), (str(a), str(b)))
            break
    if changed is None:
        raise CounterexampleFailure("explicit flex left every non-edge distance unchanged")
    return CounterexampleReport(
        d=d,
        seed=seed,
        projection=[[str(x) for x in r] for r in proj.rows],
        n=fw.n,
        m=g.m,
        collinear_free=True,
        conic_sextuples_tested=tested,
        conic_exhaustive=exhaustive,
        conic_free=True,
        sweep=sweep,
        flex_s=str(s),
        flex_edges_preserved=preserved,
        flex_changed_pair=changed[0],
        flex_changed_sqdist=changed[1],
        seconds=time.perf_counter() - t0,
    )
