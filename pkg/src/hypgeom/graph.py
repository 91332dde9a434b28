"""Finite graph model of a hyperbolic space.

A :class:`Graph` is a connected unweighted graph with a distinguished base
vertex.  Distances are graph distances computed by breadth-first search; rows
are cached per source, and a dense all-pairs table is built lazily for graphs
small enough to afford it.  Boundary points at the truncation scale are
represented by :class:`HorizonPoint` objects, geodesic rays from the base
recorded out to a horizon radius.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GraphError

DENSE_TABLE_LIMIT = 20_000
_ROW_CACHE_BYTES = 256 * 2**20


@dataclass(frozen=True)
class GeodesicSegment:
    """A geodesic as an explicit vertex path."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def validate(self, g: "Graph") -> None:
        """Check adjacency of consecutive vertices and that the path realizes
        the graph distance between its endpoints."""
        vs = self.vertices
        for u, v in zip(vs, vs[1:]):
            if g.dist(u, v) != 1:
                raise GraphError(f"non-edge ({u},{v}) on geodesic")
        d = g.dist(vs[0], vs[-1])
        if d != self.length:
            raise GraphError("path length does not realize the distance")


@dataclass(frozen=True)
class HorizonPoint:
    """Finite surrogate for a boundary point: a geodesic ray from the base
    recorded to the horizon radius."""

    ray: GeodesicSegment
    radius: int

    @property
    def endpoint(self) -> int:
        return self.ray.end

    def __repr__(self) -> str:  # compact; rays can be long
        return f"HorizonPoint(endpoint={self.endpoint}, radius={self.radius})"


class Graph:
    """Connected unweighted graph with base vertex and BFS distance oracle.

    Vertices are 0..n-1.  The adjacency is stored in CSR form with sorted
    neighbor lists, which makes every traversal deterministic.  Instances are
    immutable after construction; all query methods are pure.
    """

    def __init__(self, n: int, edges, base: int = 0):
        if n <= 0:
            raise GraphError("vertex count must be positive")
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise GraphError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise GraphError("self loops not allowed")
        if not (0 <= base < n):
            raise GraphError("base vertex out of range")
        und = np.concatenate([edges, edges[:, ::-1]]) if edges.size else edges.reshape(0, 2)
        order = np.lexsort((und[:, 1], und[:, 0]))
        und = und[order]
        if und.shape[0]:
            dup = np.all(und[1:] == und[:-1], axis=1)
            if np.any(dup):
                und = und[np.concatenate([[True], ~dup])]
        self.n = int(n)
        self.base = int(base)
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self._indptr, und[:, 0] + 1, 1)
        np.cumsum(self._indptr, out=self._indptr)
        self._indices = und[:, 1].astype(np.int32)
        self.edge_count = und.shape[0] // 2
        self.degree_bound = int(np.diff(self._indptr).max()) if n > 1 else 0
        self._row_cache: dict[int, np.ndarray] = {}
        self._row_cache_cap = max(4, _ROW_CACHE_BYTES // (4 * n))
        row = self.dist_row(self.base)
        if np.any(row < 0):
            raise GraphError("graph is not connected")

    # -- basic queries ----------------------------------------------------

    def check_vertex(self, v: int) -> int:
        v = int(v)
        if not (0 <= v < self.n):
            raise GraphError(f"invalid vertex id {v}")
        return v

    def neighbors(self, v: int) -> np.ndarray:
        v = self.check_vertex(v)
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Undirected edge list (u < v), sorted."""
        src = np.repeat(np.arange(self.n), np.diff(self._indptr))
        mask = src < self._indices
        return np.stack([src[mask], self._indices[mask]], axis=1)

    @property
    def is_tree(self) -> bool:
        return self.edge_count == self.n - 1

    # -- distances --------------------------------------------------------

    def dist_row(self, source: int) -> np.ndarray:
        """Distances from ``source`` to every vertex (read-only int32 row)."""
        source = self.check_vertex(source)
        row = self._row_cache.get(source)
        if row is not None:
            return row
        dist = np.full(self.n, -1, dtype=np.int32)
        dist[source] = 0
        frontier = np.array([source], dtype=np.int32)
        level = 0
        while frontier.size:
            level += 1
            starts = self._indptr[frontier]
            counts = self._indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            # gather neighbor slices: repeat starts and add intra-slice offsets
            reps = np.repeat(starts, counts)
            intra = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            neigh = self._indices[reps + intra]
            fresh = neigh[dist[neigh] < 0]
            if fresh.size == 0:
                break
            fresh = np.unique(fresh)
            dist[fresh] = level
            frontier = fresh
        dist.flags.writeable = False
        if len(self._row_cache) >= self._row_cache_cap:
            self._row_cache.pop(next(iter(self._row_cache)))
        self._row_cache[source] = dist
        return dist

    def dist(self, u: int, v: int) -> int:
        u, v = self.check_vertex(u), self.check_vertex(v)
        if u in self._row_cache:
            return int(self._row_cache[u][v])
        if v in self._row_cache:
            return int(self._row_cache[v][u])
        return int(self.dist_row(u)[v])

    @cached_property
    def dist_table(self) -> np.ndarray:
        """Dense all-pairs distance table (int16).  Refused above
        DENSE_TABLE_LIMIT vertices; use dist_row streaming instead."""
        if self.n > DENSE_TABLE_LIMIT:
            raise GraphError(f"dense table refused for n={self.n}")
        out = np.empty((self.n, self.n), dtype=np.int16)
        for v in range(self.n):
            out[v] = self.dist_row(v)
        out.flags.writeable = False
        return out

    @cached_property
    def eccentricity_base(self) -> int:
        return int(self.dist_row(self.base).max())

    def sphere(self, center: int, r: int) -> np.ndarray:
        return np.flatnonzero(self.dist_row(center) == r)

    def ball(self, center: int, r: int) -> np.ndarray:
        return np.flatnonzero(self.dist_row(center) <= r)

    # -- canonical geodesics and horizon -----------------------------------

    def bfs_parents(self, source: int) -> np.ndarray:
        """Canonical parent array toward ``source``: for each vertex, the
        smallest neighbor one step closer to the source (-1 at the source)."""
        source = self.check_vertex(source)
        dist = self.dist_row(source)
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self._indptr))
        dst = self._indices.astype(np.int64)
        mask = dist[dst] == dist[src] - 1
        parent = np.full(self.n, self.n, dtype=np.int64)
        np.minimum.at(parent, src[mask], dst[mask])
        parent[source] = -1
        parent = parent.astype(np.int32)
        parent.flags.writeable = False
        return parent

    @cached_property
    def _parents_from_base(self) -> np.ndarray:
        return self.bfs_parents(self.base)

    def canonical_geodesic(self, v: int) -> GeodesicSegment:
        """The canonical (lexicographically minimal parents) geodesic from the
        base to ``v``."""
        v = self.check_vertex(v)
        parent = self._parents_from_base
        path = [v]
        while path[-1] != self.base:
            path.append(int(parent[path[-1]]))
        return GeodesicSegment(tuple(reversed(path)))

    def horizon_point(self, v: int, radius: int | None = None) -> HorizonPoint:
        """The canonical horizon point whose ray ends at sphere vertex ``v``."""
        v = self.check_vertex(v)
        r = int(self.dist_row(self.base)[v])
        if radius is not None and r != radius:
            raise GraphError(f"vertex {v} is at radius {r}, not {radius}")
        if r < 1:
            raise GraphError("horizon endpoint must differ from the base")
        return HorizonPoint(self.canonical_geodesic(v), r)

    def horizon(self, radius: int | None = None) -> tuple[HorizonPoint, ...]:
        """One horizon point per vertex of S(base, radius), each carrying its
        canonical ray.  Default radius is the base eccentricity."""
        if radius is None:
            radius = self.eccentricity_base
        if radius < 1 or radius > self.eccentricity_base:
            raise GraphError(f"horizon radius {radius} out of range")
        return tuple(HorizonPoint(self.canonical_geodesic(int(v)), int(radius))
                     for v in self.sphere(self.base, radius))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count}, base={self.base})"


# -- Gromov products and hyperbolicity estimators ---------------------------


def gromov_product(g: Graph, x: int, y: int, z: int) -> float:
    """(y|z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2, a half-integer >= 0."""
    x, y, z = g.check_vertex(x), g.check_vertex(y), g.check_vertex(z)
    return (g.dist(x, y) + g.dist(x, z) - g.dist(y, z)) / 2


def gromov_products_from(g: Graph, x: int, targets: np.ndarray | None = None) -> np.ndarray:
    """Matrix of products (u|v)_x over ``targets`` (default: all vertices),
    returned as float64 (half-integers are exact)."""
    x = g.check_vertex(x)
    dx = g.dist_row(x).astype(np.float64)
    if targets is None:
        targets = np.arange(g.n)
    targets = np.asarray(targets, dtype=np.int64)
    k = targets.size
    out = np.empty((k, k), dtype=np.float64)
    for i, u in enumerate(targets):
        du = g.dist_row(int(u)).astype(np.float64)
        out[i] = (dx[u] + dx[targets] - du[targets]) / 2.0
    return out


def delta_four_point(g: Graph) -> float:
    """Exact four-point hyperbolicity constant.

    Equals the maximum over vertex quadruples of the middle-vs-largest gap
    (L1 - L2)/2 of the three pairwise distance sums, which is the classical
    equivalent of the Gromov-product form.  Half-integer valued; 0 on trees.
    """
    if g.is_tree:
        return 0.0
    d = g.dist_table.astype(np.int32)
    n = g.n
    iu = np.triu_indices(n, k=1)
    pk, pl = iu[0].astype(np.int32), iu[1].astype(np.int32)
    dkl = d[pk, pl]
    best = 0
    for i in range(n - 1):
        di = d[i]
        for j in range(i + 1, n):
            s1 = int(d[i, j]) + dkl
            s2 = di[pk] + d[j][pl]
            s3 = di[pl] + d[j][pk]
            mx = np.maximum(s1, np.maximum(s2, s3))
            mn = np.minimum(s1, np.minimum(s2, s3))
            mid = s1 + s2 + s3 - mx - mn
            gap = int((mx - mid).max())
            if gap > best:
                best = gap
    return best / 2.0


def enumerate_geodesics(g: Graph, u: int, v: int, cap: int = 64) -> list[GeodesicSegment]:
    """All geodesics from u to v in deterministic (lexicographic) order,
    truncated at ``cap``.

    A vertex w lies on some u-v geodesic iff d(u,w) + d(w,v) = d(u,v); the
    enumeration walks that interval DAG depth-first with ascending neighbors.
    """
    if cap < 1:
        raise GraphError("cap must be >= 1")
    u, v = g.check_vertex(u), g.check_vertex(v)
    du, dv = g.dist_row(u), g.dist_row(v)
    d = int(du[v])
    out: list[GeodesicSegment] = []
    stack: list[int] = [u]

    def rec(cur: int) -> bool:
        if cur == v:
            out.append(GeodesicSegment(tuple(stack)))
            return len(out) < cap
        for w in g.neighbors(cur):
            w = int(w)
            if du[w] == du[cur] + 1 and du[w] + dv[w] == d:
                stack.append(w)
                more = rec(w)
                stack.pop()
                if not more:
                    return False
        return True

    rec(u)
    return out


def _pair_id(i: int, j: int, n: int) -> int:
    if i > j:
        i, j = j, i
    return i * n + j


def delta_rips(g: Graph, geodesic_cap: int = 64) -> float:
    """Rips thinness constant over enumerated vertex-path triangles.

    For every triple (apex included in the pair for bigon degenerations) and
    every combination of enumerated sides, the worst distance from a side
    vertex to the union of the other two sides.  A lower bound of the true
    constant when the cap truncates some enumeration, exact otherwise.
    """
    if geodesic_cap < 1:
        raise GraphError("cap must be >= 1")
    if g.is_tree:
        return 0.0
    n = g.n
    d = g.dist_table.astype(np.float32)
    # per unordered pair: max over enumerated geodesics of d(v, geodesic),
    # plus the union of their vertex sets
    dp = np.empty((n * n,), dtype=object)
    union = np.empty((n * n,), dtype=object)
    for i in range(n):
        pid = _pair_id(i, i, n)
        dp[pid] = d[:, i]
        union[pid] = np.array([i], dtype=np.int64)
    for i in range(n - 1):
        for j in range(i + 1, n):
            geos = enumerate_geodesics(g, i, j, geodesic_cap)
            pid = _pair_id(i, j, n)
            rows = [d[:, list(seg.vertices)].min(axis=1) for seg in geos]
            dp[pid] = np.max(rows, axis=0)
            union[pid] = np.unique(np.concatenate([list(s.vertices) for s in geos]))
    best = 0.0
    xs = np.arange(n)
    for i in range(n):
        for j in range(i, n):
            uij = union[_pair_id(i, j, n)]
            # apex x ranges over all vertices; side choices decouple:
            # max_{v in union(i,j)} min(maxmin d(v, [x,i]), maxmin d(v, [x,j]))
            m = np.empty((n, uij.size), dtype=np.float32)
            for x in xs:
                a = dp[_pair_id(int(x), i, n)][uij]
                b = dp[_pair_id(int(x), j, n)][uij]
                m[x] = np.minimum(a, b)
            val = float(m.max())
            if val > best:
                best = val
    return best


def fellow_traveling(g: Graph, ray1: GeodesicSegment, ray2: GeodesicSegment) -> tuple[int, float]:
    """Best shift T and resulting sup gap for two rays toward the same
    horizon point: minimizes max_t d(ray1(t), ray2(t+T)) over |T| <= d of the
    starting points, with t ranging over [d(starts), len1] and t+T within
    ray2.  Returns (T, gap); gap is the empirical fellow-traveling constant.
    """
    d0 = g.dist(ray1.start, ray2.start)
    v1 = ray1.vertices
    v2 = ray2.vertices
    best = (0, float("inf"))
    for t_shift in range(-d0, d0 + 1):
        gap = 0.0
        seen = False
        for t in range(d0, len(v1)):
            s = t + t_shift
            if s < 0 or s >= len(v2):
                continue
            seen = True
            gap = max(gap, float(g.dist(v1[t], v2[s])))
        if seen and gap < best[1]:
            best = (t_shift, gap)
    return best
