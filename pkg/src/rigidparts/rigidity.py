"""Graphs, planar frameworks, the rigidity matrix and the (2,3) pebble game."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactgeom import Point, all_collinear, collinear3, rank as matrix_rank, sqdist, sub

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0 .. n-1``.

    ``edges`` keeps the caller's order; each pair is stored as ``(i, j)`` with
    ``i < j``.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        canon = []
        seen = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {(i, j)} has an endpoint outside [0, {self.n})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(a) for a in adj]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_set

    @property
    def _edge_set(self) -> frozenset[Edge]:
        cached = self.__dict__.get("_edges_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edges_cache", cached)
        return cached

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the label map."""
        order = sorted(vertices)
        index = {v: k for k, v in enumerate(order)}
        adj = self._adjacency
        edges = sorted((index[i], index[j]) for i in order for j in adj[i] if j > i and j in index)
        return Graph(len(order), tuple(edges)), order

    @property
    def _adjacency(self) -> list[list[int]]:
        cached = self.__dict__.get("_adj_cache")
        if cached is None:
            cached = self.neighbors()
            object.__setattr__(self, "_adj_cache", cached)
        return cached

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(combinations(range(n), 2)))

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


@dataclass(frozen=True)
class Framework:
    graph: Graph
    positions: tuple[Point, ...]
    strict: bool = False

    def __post_init__(self):
        pos = tuple(tuple(Fraction(c) for c in p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if len(pos) != self.graph.n:
            raise ValueError(f"{len(pos)} positions for {self.graph.n} vertices")
        if any(len(p) != 2 for p in pos):
            raise ValueError("framework positions must be planar points")
        if len(set(pos)) != len(pos):
            dup = next(i for i, p in enumerate(pos) if pos.index(p) != i)
            raise ValueError(f"vertex {dup} coincides with vertex {pos.index(pos[dup])}")
        if self.strict:
            for a, b, c in combinations(range(len(pos)), 3):
                if collinear3(pos[a], pos[b], pos[c]):
                    raise ValueError(f"vertices {a}, {b}, {c} are collinear")

    @property
    def n(self) -> int:
        return self.graph.n

    def sub(self, vertices: Sequence[int]) -> "Framework":
        g, order = self.graph.induced(vertices)
        return Framework(g, tuple(self.positions[v] for v in order))


@dataclass(frozen=True)
class RigidityMatrix:
    """Exact rigidity matrix: row ``k`` belongs to ``edges[k]``, two columns per vertex."""

    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int
    edges: tuple[Edge, ...] = field(default=())

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols


def rigidity_matrix(fw: Framework) -> RigidityMatrix:
    # Jacobian of the squared edge lengths divided by 2; same row space as the
    # Jacobian of the lengths since rows differ by nonzero factors.
    n = fw.n
    rows = []
    for i, j in fw.graph.edges:
        d = sub(fw.positions[i], fw.positions[j])
        row = [Fraction(0)] * (2 * n)
        row[2 * i], row[2 * i + 1] = d[0], d[1]
        row[2 * j], row[2 * j + 1] = -d[0], -d[1]
        rows.append(tuple(row))
    return RigidityMatrix(tuple(rows), 2 * n, fw.graph.edges)


def rank(M: RigidityMatrix) -> int:
    if not M.rows:
        return 0
    return matrix_rank(M.rows)


def framework_rank(fw: Framework) -> int:
    return rank(rigidity_matrix(fw))


def is_infinitesimally_rigid(fw: Framework) -> bool:
    if fw.n < 2:
        raise ValueError("infinitesimal rigidity needs at least two vertices")
    if fw.graph.m < 2 * fw.n - 3:
        return False
    return framework_rank(fw) == 2 * fw.n - 3


def edge_lengths_sq(graph: Graph, positions: Sequence[Point]) -> list[Fraction]:
    return [sqdist(positions[i], positions[j]) for i, j in graph.edges]


def equivalence_violations(graph: Graph, p: Sequence[Point], q: Sequence[Point]):
    """Edges whose squared lengths differ between ``p`` and ``q``."""
    out = []
    for i, j in graph.edges:
        a, b = sqdist(p[i], p[j]), sqdist(q[i], q[j])
        if a != b:
            out.append(((i, j), a, b))
    return out


# ---------------------------------------------------------------------------
# pebble game


class PebbleGame:
    """The (2,3) pebble game of Jacobs and Hendrickson.

    Each vertex starts with two pebbles. An edge is independent when four
    pebbles can be gathered on its endpoints; it is then covered by a pebble
    of its first endpoint and directed away from it. Searches visit
    neighbours in increasing index order, so results are deterministic.
    """

    def __init__(self, n: int):
        self.n = n
        self.pebbles = [2] * n
        self.out: list[set[int]] = [set() for _ in range(n)]
        self.accepted: list[Edge] = []

    def _find_pebble(self, root: int, blocked: set[int]) -> bool:
        # DFS along covered edges from root to a vertex holding a free pebble;
        # reversing the path moves that pebble to root.
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in sorted(self.out[x], reverse=True):
                if y in parent or y in blocked:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    self.pebbles[root] += 1
                    while parent[y] is not None:
                        x = parent[y]
                        self.out[x].discard(y)
                        self.out[y].add(x)
                        y = x
                    return True
                stack.append(y)
        return False

    def gather(self, u: int, v: int) -> bool:
        """Try to bring two pebbles onto each of ``u`` and ``v``."""
        while self.pebbles[u] < 2:
            if not self._find_pebble(u, {v}):
                return False
        while self.pebbles[v] < 2:
            if not self._find_pebble(v, {u}):
                return False
        return True

    def add_edge(self, u: int, v: int) -> bool:
        if not self.gather(u, v):
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        self.accepted.append((min(u, v), max(u, v)))
        return True

    def implied(self, u: int, v: int) -> bool:
        """True when the pair ``{u, v}`` lies in the closure of the accepted edges."""
        return not self.gather(u, v)


def play_pebble_game(g: Graph) -> PebbleGame:
    game = PebbleGame(g.n)
    for i, j in g.edges:
        game.add_edge(i, j)
    return game


def independent_edges(g: Graph) -> list[Edge]:
    return play_pebble_game(g).accepted


def laman_check(g: Graph) -> bool:
    if g.n < 2:
        raise ValueError("laman_check needs at least two vertices")
    if g.m != 2 * g.n - 3:
        return False
    return len(independent_edges(g)) == g.m


def generically_rigid(g: Graph) -> bool:
    if g.n < 2:
        raise ValueError("generically_rigid needs at least two vertices")
    return len(independent_edges(g)) == 2 * g.n - 3


def rigid_components(g: Graph) -> list[tuple[int, ...]]:
    """Maximal vertex sets inducing generically rigid subgraphs.

    A pair ``{x, y}`` is in the matroid closure of the edge set exactly when
    ``x`` and ``y`` share a rigid component, so the component of an edge
    ``uv`` is ``{u, v}`` plus every ``w`` with both ``uw`` and ``vw`` implied.
    Isolated vertices come back as singletons. Sorted output.
    """
    game = play_pebble_game(g)
    comps: list[tuple[int, ...]] = []
    member_of: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges:
        if member_of[u] & member_of[v]:
            continue
        comp = [u, v]
        for w in range(g.n):
            if w in (u, v):
                continue
            if _implied(g, game, u, w) and _implied(g, game, v, w):
                comp.append(w)
        cid = len(comps)
        comps.append(tuple(sorted(comp)))
        for x in comp:
            member_of[x].add(cid)
    for x in range(g.n):
        if not member_of[x]:
            comps.append((x,))
    return sorted(comps)


def _implied(g: Graph, game: PebbleGame, x: int, y: int) -> bool:
    return g.has_edge(x, y) or game.implied(x, y)


def brute_force_laman(g: Graph) -> bool:
    """Direct check of the counts: m = 2n - 3 and every k-subset spans at most 2k - 3 edges."""
    if g.m != 2 * g.n - 3:
        return False
    for k in range(2, g.n + 1):
        for S in combinations(range(g.n), k):
            s = set(S)
            if sum(1 for i, j in g.edges if i in s and j in s) > 2 * k - 3:
                return False
    return True


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    adj = [set(a) for a in g.neighbors()]
    out = []
    for i, j in g.edges:
        for k in sorted(adj[i] & adj[j]):
            if k > j:
                out.append((i, j, k))
    return sorted(out)


def all_points_collinear(pts: Iterable[Point]) -> bool:
    return all_collinear(list(pts))
