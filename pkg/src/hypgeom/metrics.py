"""Visual quasi-metric and the inner metric at a basepoint.

The visual quasi-metric at basepoint x is e^(-(p|q)_x) (0 on the diagonal);
the inner metric is the shortest-chain metric induced by its a-th power over
the chosen point set (vertices plus horizon points, horizon points entering
through their ray endpoints).  The computed inner metric restricts chains to
that point set, an upper bound of the infimum over an ambient continuum; the
factor-2 comparison with varrho^a is asserted by the test suite, not assumed.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import GraphError
from .graph import Graph, HorizonPoint, delta_four_point, delta_rips

DENSE_POINT_LIMIT = 5_000


def default_visual_exponent(delta: float) -> float:
    """1 / (15 * delta), clamped at delta = 1/2 so trees (delta = 0) still get
    a positive, representable exponent."""
    return 1.0 / (15.0 * max(float(delta), 0.5))


def estimate_delta(g: Graph, estimator="four_point", cap: int = 64) -> float:
    if isinstance(estimator, (int, float)):
        return float(estimator)
    if estimator == "four_point":
        return delta_four_point(g)
    if estimator == "rips":
        return delta_rips(g, cap)
    raise GraphError(f"unknown estimator {estimator!r}")


def point_vertex(p) -> int:
    """Underlying vertex of a point: itself for vertices, the ray endpoint
    for horizon points."""
    return p.endpoint if isinstance(p, HorizonPoint) else int(p)


def gromov_products_points(g: Graph, x: int, points) -> np.ndarray:
    """Pairwise Gromov products (p|q)_x over a point list (float64; exact
    half-integers)."""
    x = g.check_vertex(x)
    verts = np.array([point_vertex(p) for p in points], dtype=np.int64)
    dx = g.dist_row(x).astype(np.float64)
    k = verts.size
    out = np.empty((k, k), dtype=np.float64)
    for i, u in enumerate(verts):
        du = g.dist_row(int(u)).astype(np.float64)
        out[i] = (dx[u] + dx[verts] - du[verts]) / 2.0
    return out


def visual_quasimetric(g: Graph, x: int, points=None) -> np.ndarray:
    """Table of e^(-(p|q)_x), 0 on the diagonal."""
    if points is None:
        points = list(range(g.n))
    prod = gromov_products_points(g, x, points)
    varrho = np.exp(-prod)
    np.fill_diagonal(varrho, 0.0)
    return varrho


def inner_metric(g: Graph, x: int, a: float, points=None, method: str = "auto") -> np.ndarray:
    """Shortest-chain metric over edge weights varrho_x(p,q)^a.

    method:
      * "tree"  - closed form rho = varrho^a; valid because on a tree the
        weights e^(-a (p|q)_x) satisfy the ultrametric inequality (meet depths
        with respect to x), so no chain can undercut the direct step;
      * "dense" - all-pairs shortest path on the complete weighted graph
        (scipy, Floyd-Warshall below 1200 points, Dijkstra above);
      * "auto"  - "tree" on trees, else "dense".
    """
    if a <= 0:
        raise GraphError("exponent a must be positive")
    if points is None:
        points = list(range(g.n))
    if method == "auto":
        method = "tree" if g.is_tree else "dense"
    w = np.exp(-a * gromov_products_points(g, x, points))
    np.fill_diagonal(w, 0.0)
    if method == "tree":
        if not g.is_tree:
            raise GraphError("tree closed form requested on a non-tree")
        return w
    if method != "dense":
        raise GraphError(f"unknown method {method!r}")
    k = w.shape[0]
    if k > DENSE_POINT_LIMIT:
        raise GraphError(f"dense inner metric refused for {k} points")
    algo = "FW" if k <= 1200 else "D"
    rho = shortest_path(w, method=algo, directed=False)
    return rho


@dataclass(frozen=True)
class QuasiMetricTable:
    """Per-basepoint tables of the visual quasi-metric and the inner metric
    over a fixed point list (vertices and horizon points)."""

    basepoint: int
    a_exponent: float
    points: tuple
    varrho: np.ndarray
    rho: np.ndarray

    def index(self, p) -> int:
        try:
            return self.points.index(p)
        except ValueError:
            raise GraphError(f"point {p!r} not in table") from None

    def rho_between(self, p, q) -> float:
        return float(self.rho[self.index(p), self.index(q)])

    def varrho_between(self, p, q) -> float:
        return float(self.varrho[self.index(p), self.index(q)])

    def to_csv_rows(self):
        for i, p in enumerate(self.points):
            for j, q in enumerate(self.points):
                if i < j:
                    yield p, q, float(self.varrho[i, j]), float(self.rho[i, j])


def build_quasimetric_table(g: Graph, x: int, a: float | None = None,
                            horizon=None, estimator="four_point",
                            method: str = "auto") -> QuasiMetricTable:
    """Assemble the quasi-metric table at basepoint ``x`` over all vertices
    plus the given horizon points."""
    points = list(range(g.n)) + list(horizon or ())
    if a is None:
        a = default_visual_exponent(estimate_delta(g, estimator))
    varrho = visual_quasimetric(g, x, points)
    rho = inner_metric(g, x, a, points, method=method)
    return QuasiMetricTable(basepoint=int(x), a_exponent=float(a),
                            points=tuple(points), varrho=varrho, rho=rho)


def metric_ball(table: QuasiMetricTable, center, r: float) -> list:
    """All table points p with rho_x(center, p) <= r."""
    if r < 0:
        raise GraphError("radius must be nonnegative")
    row = table.rho[table.index(center)]
    return [p for p, d in zip(table.points, row) if d <= r]


def rho_row_tree(g: Graph, x: int, a: float, p) -> np.ndarray:
    """Inner-metric row rho_x(p, all vertices) on a tree (closed form)."""
    if not g.is_tree:
        raise GraphError("closed-form rho rows require a tree")
    x = g.check_vertex(x)
    v = point_vertex(p)
    dx = g.dist_row(x).astype(np.float64)
    dv = g.dist_row(v).astype(np.float64)
    prod = (dx[v] + dx - dv) / 2.0
    row = np.exp(-a * prod)
    if not isinstance(p, HorizonPoint):
        row[v] = 0.0
    return row
