"""Numerical flex following and three-valued rigidity certificates.

Exact rank (from :mod:`rigidparts.rigidity`) decides the infinitesimal
question. Everything that moves a framework is floating point: a
predictor-corrector walk along the edge-length constraint manifold, with
vertex 0 pinned and vertex 1 held on its initial bearing from vertex 0.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, TextIO

import numpy as np

from .exactgeom import orient, point
from .motionlines import FamilyKind, RotationPoint, apply_rotation, classify_line_family, perturbation_lines
from .rigidity import Framework, Graph, equivalence_violations, framework_rank, rigid_components, triangles

TOL_PROJ = 1e-10
TOL_SEP = 1e-4
TOL_EDGE = 1e-9
STEP = 1e-3
MAX_STEPS = 200
MAX_CORRECTOR_ITERS = 25
EXHAUSTIVE_LIMIT = 12


def positions_array(fw: Framework) -> np.ndarray:
    return np.array([[float(x), float(y)] for x, y in fw.positions])


def float_rigidity_matrix(graph: Graph, X: np.ndarray) -> np.ndarray:
    M = np.zeros((graph.m, 2 * graph.n))
    for k, (i, j) in enumerate(graph.edges):
        d = X[i] - X[j]
        M[k, 2 * i : 2 * i + 2] = d
        M[k, 2 * j : 2 * j + 2] = -d
    return M


@dataclass
class FlexVector:
    components: np.ndarray
    framework: Framework

    def as_pairs(self) -> np.ndarray:
        return self.components.reshape(-1, 2)


def trivial_motions(fw: Framework) -> list[FlexVector]:
    """Orthonormal basis of the infinitesimal rigid motions at the current positions."""
    if fw.n < 2:
        raise ValueError("trivial motions need at least two vertices")
    X = positions_array(fw)
    if np.allclose(X, X[0]):
        raise ValueError("all points coincide")
    c = X - X.mean(axis=0)
    basis = np.zeros((2 * fw.n, 3))
    basis[0::2, 0] = 1.0
    basis[1::2, 1] = 1.0
    basis[0::2, 2] = -c[:, 1]
    basis[1::2, 2] = c[:, 0]
    Q, _ = np.linalg.qr(basis)
    return [FlexVector(Q[:, k].copy(), fw) for k in range(3)]


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v))))
    return -v if v[k] < 0 else v


def infinitesimal_flex(fw: Framework) -> Optional[FlexVector]:
    """A unit infinitesimal flex orthogonal to the rigid motions, if one exists.

    The exact rank fixes the null-space dimension, so the float SVD only
    supplies the vectors, never the decision.
    """
    if fw.n < 2:
        raise ValueError("need at least two vertices")
    r = framework_rank(fw)
    nullity = 2 * fw.n - r
    if nullity <= 3:
        return None
    M = float_rigidity_matrix(fw.graph, positions_array(fw))
    if M.shape[0]:
        _, _, Vt = np.linalg.svd(M)
        N = Vt[r:].T
    else:
        N = np.eye(2 * fw.n)
    T = np.column_stack([t.components for t in trivial_motions(fw)])
    R = N - T @ (T.T @ N)
    U, s, _ = np.linalg.svd(R, full_matrices=False)
    v = U[:, 0] / np.linalg.norm(U[:, 0])
    return FlexVector(_fix_sign(v), fw)


# ---------------------------------------------------------------------------
# continuation


@dataclass
class FlexPath:
    times: list[float]
    embeddings: list[np.ndarray]
    residuals: list[float]
    anchors: tuple[int, int] = (0, 1)
    status: str = "completed"
    message: str = ""

    def __len__(self):
        return len(self.embeddings)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


class _Gauge:
    """Coordinates with vertex 0 fixed and vertex 1 on a fixed ray: z = (r, x2, y2, ...)."""

    def __init__(self, X0: np.ndarray):
        self.p0 = X0[0].copy()
        e = X0[1] - X0[0]
        self.e = e / np.linalg.norm(e)
        self.n = len(X0)

    def to_z(self, X: np.ndarray) -> np.ndarray:
        r = float(np.dot(X[1] - self.p0, self.e))
        return np.concatenate([[r], X[2:].reshape(-1)])

    def to_x(self, z: np.ndarray) -> np.ndarray:
        X = np.empty((self.n, 2))
        X[0] = self.p0
        X[1] = self.p0 + z[0] * self.e
        X[2:] = z[1:].reshape(-1, 2)
        return X

    def reduce(self, J: np.ndarray) -> np.ndarray:
        """Chain rule from full coordinates to z."""
        col_r = J[:, 2:4] @ self.e
        return np.column_stack([col_r, J[:, 4:]])


def _edge_system(graph: Graph, X: np.ndarray, L2: np.ndarray):
    i = np.array([e[0] for e in graph.edges], dtype=int)
    j = np.array([e[1] for e in graph.edges], dtype=int)
    D = X[i] - X[j]
    F = (np.einsum("ij,ij->i", D, D) - L2) / 2.0
    return F, float_rigidity_matrix(graph, X)


def _relative_residual(graph: Graph, X: np.ndarray, L: np.ndarray) -> float:
    if not graph.edges:
        return 0.0
    i = np.array([e[0] for e in graph.edges], dtype=int)
    j = np.array([e[1] for e in graph.edges], dtype=int)
    lengths = np.linalg.norm(X[i] - X[j], axis=1)
    return float(np.max(np.abs(lengths - L) / L))


def _correct(graph, gauge, z, L, L2, tol, max_iter):
    """Damped Gauss-Newton (minimum-norm steps with backtracking) onto the constraint set."""
    X = gauge.to_x(z)
    res = _relative_residual(graph, X, L)
    for _ in range(max_iter):
        if res <= tol:
            return z, res, True
        F, J = _edge_system(graph, X, L2)
        Jz = gauge.reduce(J)
        delta = np.linalg.lstsq(Jz, -F, rcond=None)[0]
        lam = 1.0
        while lam > 1e-4:
            z_try = z + lam * delta
            X_try = gauge.to_x(z_try)
            res_try = _relative_residual(graph, X_try, L)
            if res_try < res:
                break
            lam *= 0.5
        else:
            return z, res, False
        z, X, res = z_try, X_try, res_try
    return z, res, res <= tol


def _null_basis(Jz: np.ndarray, dim: int) -> np.ndarray:
    if Jz.shape[0] == 0:
        return np.eye(Jz.shape[1])[:, :dim]
    _, _, Vt = np.linalg.svd(Jz)
    return Vt[Vt.shape[0] - dim :].T


def follow_flex(
    fw: Framework,
    v: FlexVector,
    step: float = STEP,
    max_steps: int = MAX_STEPS,
    tol_proj: float = TOL_PROJ,
    max_iter: int = MAX_CORRECTOR_ITERS,
) -> FlexPath:
    """Walk along a flex: predictor along the current tangent, corrector back onto the edge lengths.

    The tangent is taken in the gauge-fixed coordinates and re-chosen each
    step as the unit null vector with the largest overlap with the previous
    direction. The walk stops early when the corrector fails to reach
    ``tol_proj``; such paths are marked ``truncated``.
    """
    graph = fw.graph
    X0 = positions_array(fw)
    gauge = _Gauge(X0)
    i = np.array([e[0] for e in graph.edges], dtype=int)
    j = np.array([e[1] for e in graph.edges], dtype=int)
    L = np.linalg.norm(X0[i] - X0[j], axis=1) if graph.edges else np.zeros(0)
    L2 = L * L
    dim = 2 * fw.n - 3 - framework_rank(fw)
    path = FlexPath([0.0], [X0.copy()], [_relative_residual(graph, X0, L)])
    if dim <= 0:
        path.status = "no-flex"
        return path
    z = gauge.to_z(X0)
    # the flex vector in gauge coordinates, before projection
    prev = _gauge_direction(gauge, X0, v.components)
    for k in range(1, max_steps + 1):
        _, Jfull = _edge_system(graph, gauge.to_x(z), L2)
        N = _null_basis(gauge.reduce(Jfull), dim)
        d = N @ (N.T @ prev)
        nd = np.linalg.norm(d)
        if nd < 1e-12:
            d = N[:, 0]
            nd = np.linalg.norm(d)
        d = d / nd
        z_new, res, ok = _correct(graph, gauge, z + step * d, L, L2, tol_proj, max_iter)
        if not ok:
            path.status = "truncated"
            path.message = f"corrector stalled at step {k} (residual {res:.3e})"
            break
        prev = d
        z = z_new
        path.times.append(k * step)
        path.embeddings.append(gauge.to_x(z))
        path.residuals.append(res)
    return path


def _gauge_direction(gauge: _Gauge, X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Express a full-coordinate velocity in gauge coordinates.

    Subtracts the rigid motion (translation by vertex 0's velocity plus the
    rotation about vertex 0 that cancels vertex 1's off-ray velocity).
    """
    V = v.reshape(-1, 2)
    perp = np.array([-gauge.e[1], gauge.e[0]])
    arm = X[1] - X[0]
    omega = np.dot(V[1] - V[0], perp) / np.linalg.norm(arm)
    rel = X - X[0]
    W = V - V[0] - omega * np.column_stack([-rel[:, 1], rel[:, 0]])
    return np.concatenate([[np.dot(W[1], gauge.e)], W[2:].reshape(-1)])


def write_flex_path(path: FlexPath, out: TextIO, delimiter: str = ",") -> None:
    for t, X in zip(path.times, path.embeddings):
        row = [t, *X.reshape(-1)]
        out.write(delimiter.join(f"{x:.17g}" for x in row) + "\n")


def read_flex_path(text: str, delimiter: str = ",") -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(io.StringIO(text), delimiter=delimiter, ndmin=2)
    return data[:, 0], data[:, 1:].reshape(len(data), -1, 2)


# ---------------------------------------------------------------------------
# certificates


class Verdict(enum.Enum):
    RIGID = "rigid"
    FLEXIBLE = "flexible"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Certificate:
    verdict: Verdict
    rank: int
    nullity: int
    witness: Optional[np.ndarray] = None
    pair: Optional[tuple[int, int]] = None
    delta: float = 0.0
    edge_residual: float = 0.0
    path: Optional[FlexPath] = field(default=None, repr=False)


def non_edges(graph: Graph) -> list[tuple[int, int]]:
    return [(i, j) for i, j in combinations(range(graph.n), 2) if not graph.has_edge(i, j)]


def largest_drift(fw: Framework, path: FlexPath, tol_edge: float = TOL_EDGE):
    """(state index, pair, |change in distance|) maximizing non-edge drift over admissible states."""
    pairs = non_edges(fw.graph)
    if not pairs or len(path) < 2:
        return None
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    X0 = path.embeddings[0]
    d0 = np.linalg.norm(X0[a] - X0[b], axis=1)
    best = None
    for k, (X, res) in enumerate(zip(path.embeddings, path.residuals)):
        if k == 0 or res > tol_edge:
            continue
        drift = np.abs(np.linalg.norm(X[a] - X[b], axis=1) - d0)
        h = int(np.argmax(drift))
        if best is None or drift[h] > best[2]:
            best = (k, pairs[h], float(drift[h]))
    return best


def certify(
    fw: Framework,
    tol_proj: float = TOL_PROJ,
    tol_sep: float = TOL_SEP,
    tol_edge: float = TOL_EDGE,
    step: float = STEP,
    max_steps: int = MAX_STEPS,
) -> Certificate:
    """Rigid by exact rank, Flexible by an explicit witness, otherwise Inconclusive.

    A framework that is rigid without being infinitesimally rigid (a
    collinear triangle, say) can only ever come back Inconclusive.
    """
    if fw.n < 3:
        raise ValueError("certify needs at least three vertices")
    r = framework_rank(fw)
    nullity = 2 * fw.n - r
    if r == 2 * fw.n - 3:
        return Certificate(Verdict.RIGID, r, nullity)
    v = infinitesimal_flex(fw)
    path = follow_flex(fw, v, step=step, max_steps=max_steps, tol_proj=tol_proj)
    best = largest_drift(fw, path, tol_edge)
    if best is not None and best[2] >= tol_sep:
        k, pair, delta = best
        return Certificate(Verdict.FLEXIBLE, r, nullity, path.embeddings[k], pair, delta, path.residuals[k], path)
    return Certificate(Verdict.INCONCLUSIVE, r, nullity, path=path)


def find_rigid_subframeworks(
    fw: Framework, min_size: int = 3, exhaustive_limit: int = EXHAUSTIVE_LIMIT
) -> list[tuple[tuple[int, ...], Certificate]]:
    """Vertex sets whose induced subframework is infinitesimally rigid where it stands.

    Candidates: generic rigid components, edge triangles, and every subset
    when the framework has at most ``exhaustive_limit`` vertices. Largest
    sets first.
    """
    if min_size < 3:
        raise ValueError("min_size must be at least 3")
    cands: set[tuple[int, ...]] = set()
    cands.update(c for c in rigid_components(fw.graph) if len(c) >= min_size)
    if min_size <= 3:
        cands.update(triangles(fw.graph))
    if fw.n <= exhaustive_limit:
        for k in range(min_size, fw.n + 1):
            cands.update(combinations(range(fw.n), k))
    found = []
    for S in sorted(cands, key=lambda s: (-len(s), s)):
        sub = fw.sub(S)
        need = 2 * len(S) - 3
        if sub.graph.m < need:
            continue
        r = framework_rank(sub)
        if r == need:
            found.append((S, Certificate(Verdict.RIGID, r, 2 * len(S) - r)))
    return found


# ---------------------------------------------------------------------------
# line-family witness


@dataclass
class ConcurrencyReport:
    kind: FamilyKind
    rotation: Optional[RotationPoint]
    rotation_verified: Optional[bool]
    plane: Optional[tuple]
    orientation_flips: list[tuple[int, int, int]]


def concurrency_witness(graph: Graph, p: Sequence, p_prime: Sequence) -> ConcurrencyReport:
    """Classify the lines joining each ``p_i`` to ``p'_i``; decode and check a common rotation.

    Also lists vertex triples whose orientation differs between the two
    embeddings (a perturbation meant to be small should have none).
    """
    p = [point(*x) for x in p]
    q = [point(*x) for x in p_prime]
    bad = equivalence_violations(graph, p, q)
    if bad:
        (i, j), a, b = bad[0]
        raise ValueError(f"embeddings are not equivalent: edge {(i, j)} has squared lengths {a} and {b}")
    fam = classify_line_family(perturbation_lines(p, q))
    verified = None
    if fam.rotation is not None:
        verified = all(apply_rotation(fam.rotation, a) == b for a, b in zip(p, q))
    flips = []
    for i, j, k in combinations(range(len(p)), 3):
        o1, o2 = orient(p[i], p[j], p[k]), orient(q[i], q[j], q[k])
        if (o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0):
            flips.append((i, j, k))
    return ConcurrencyReport(fam.kind, fam.rotation, verified, fam.plane, flips)
