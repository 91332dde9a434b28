"""Distance cocycles, their boundary quasi-cocycle surrogate, and the
averaged functional of a boundary measure.

The boundary value at a horizon point gamma is approximated by the maximum of
the distance cocycle over the horizon cell of gamma: the vertices within
inner-metric distance 2 e^(-a R') of gamma for a tail radius R' (default: the
horizon radius).  The cell minimum is retained so callers can report the
oscillation, which is the finite stand-in for the limsup-liminf gap.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import log

import numpy as np

from .errors import GraphError
from .graph import Graph, HorizonPoint
from .measures import FiniteMeasure
from .metrics import (DENSE_POINT_LIMIT, build_quasimetric_table,
                      default_visual_exponent, estimate_delta, rho_row_tree)


@dataclass
class CocycleContext:
    """Graph + horizon + the hyperbolicity-derived constants.

    c2 is the additive quasi-cocycle defect bound 2 log 2 / a, which equals
    (30 log 2) * delta at the default exponent a = 1/(15 delta).
    """

    graph: Graph
    horizon: tuple
    delta: float
    estimator: str
    a: float
    c2: float
    _table: object = field(default=None, repr=False)

    def rho_base_row(self, p) -> np.ndarray:
        """rho_base(p, v) over all vertices v."""
        g = self.graph
        if g.is_tree:
            return rho_row_tree(g, g.base, self.a, p)
        if self._table is None:
            if g.n + len(self.horizon) > DENSE_POINT_LIMIT:
                raise GraphError("graph too large for dense rho rows (non-tree)")
            self._table = build_quasimetric_table(
                g, g.base, a=self.a, horizon=self.horizon)
        row = self._table.rho[self._table.index(p)]
        return row[: g.n]

    def cell(self, gamma: HorizonPoint, tail_radius: float | None = None) -> np.ndarray:
        """Vertices within rho_base-distance 2 e^(-a R') of gamma."""
        if tail_radius is None:
            tail_radius = gamma.radius
        row = self.rho_base_row(gamma)
        cell = np.flatnonzero(row <= 2.0 * np.exp(-self.a * tail_radius))
        if cell.size == 0:
            raise GraphError("empty horizon cell: tail radius too large")
        return cell


def make_context(g: Graph, horizon=None, estimator="four_point",
                 a: float | None = None, cap: int = 64) -> CocycleContext:
    delta = estimate_delta(g, estimator, cap)
    if a is None:
        a = default_visual_exponent(delta)
    c2 = 2.0 * log(2.0) / a
    if horizon is None:
        horizon = g.horizon()
    name = estimator if isinstance(estimator, str) else "explicit"
    return CocycleContext(graph=g, horizon=tuple(horizon), delta=float(delta),
                          estimator=name, a=float(a), c2=float(c2))


def distance_cocycle(g: Graph, z: int, x: int, y: int) -> int:
    """beta_z(x, y) = d(y, z) - d(x, z).  Integer; exact cocycle identity."""
    row = g.dist_row(g.check_vertex(z))
    return int(row[g.check_vertex(y)]) - int(row[g.check_vertex(x)])


def busemann_quasi(ctx: CocycleContext, gamma: HorizonPoint, x: int, y: int,
                   tail_radius: float | None = None) -> float:
    """Max of the distance cocycle over gamma's horizon cell."""
    mx, _ = busemann_oscillation(ctx, gamma, x, y, tail_radius)
    return mx


def busemann_oscillation(ctx: CocycleContext, gamma: HorizonPoint, x: int, y: int,
                         tail_radius: float | None = None) -> tuple[float, float]:
    """(max, min) of beta_z(x, y) over the horizon cell of gamma."""
    g = ctx.graph
    x, y = g.check_vertex(x), g.check_vertex(y)
    if x == y:
        return 0.0, 0.0
    cell = ctx.cell(gamma, tail_radius)
    vals = g.dist_row(y)[cell].astype(np.int64) - g.dist_row(x)[cell].astype(np.int64)
    return float(vals.max()), float(vals.min())


def barycenter_functional(ctx: CocycleContext, lam: FiniteMeasure, x: int, y: int,
                          tail_radius: float | None = None) -> float:
    """B(x, y) = sum of lam(gamma) * busemann_quasi(gamma, x, y)."""
    total = 0.0
    for gamma, w in lam:
        if not isinstance(gamma, HorizonPoint):
            raise GraphError("boundary measure must be supported on horizon points")
        total += float(w) * busemann_quasi(ctx, gamma, x, y, tail_radius)
    return total


def barycenter_functional_rows(ctx: CocycleContext, lam: FiniteMeasure, x: int,
                               tail_radius: float | None = None) -> np.ndarray:
    """Vector of B(x, y) over all vertices y (vectorized over horizon cells)."""
    g = ctx.graph
    x = g.check_vertex(x)
    out = np.zeros(g.n, dtype=np.float64)
    for gamma, w in lam:
        cell = ctx.cell(gamma, tail_radius)
        rows = np.stack([g.dist_row(int(z)).astype(np.int64) for z in cell])
        vals = rows - rows[:, x][:, None]
        out += float(w) * vals.max(axis=0)
    return out


@dataclass(frozen=True)
class ConvergenceReport:
    deviation: float
    bound: float
    series: tuple
    passed: bool


def b_infinity_check(ctx: CocycleContext, interior_seq, limit: FiniteMeasure,
                     x: int, y: int, window: int | None = None) -> ConvergenceReport:
    """Compare B_limit(x, y) with the limsup (trailing-window max) of the
    cocycle averages against the interior measures; bound is c2."""
    g = ctx.graph
    series = []
    for lam_n in interior_seq:
        s = 0.0
        for z, w in lam_n:
            s += float(w) * distance_cocycle(g, int(z), x, y)
        series.append(s)
    if not series:
        raise GraphError("empty interior sequence")
    if window is None:
        window = max(1, len(series) // 2)
    limsup = max(series[-window:])
    b = barycenter_functional(ctx, limit, x, y)
    dev = abs(b - limsup)
    return ConvergenceReport(deviation=dev, bound=ctx.c2, series=tuple(series),
                             passed=dev <= ctx.c2 + 1e-9)


# -- boundary measure file format -------------------------------------------


def boundary_measure(pairs) -> FiniteMeasure:
    m = FiniteMeasure(dict(pairs))
    for p in m.support():
        if not isinstance(p, HorizonPoint):
            raise GraphError("boundary measures live on horizon points")
    return m


def uniform_boundary(points) -> FiniteMeasure:
    pts = list(points)
    return boundary_measure({p: Fraction(1, len(pts)) for p in pts})


def read_boundary_measure(g: Graph, path, radius: int | None = None) -> FiniteMeasure:
    """Lines ``endpoint_vertex_id weight``; horizon points are the canonical
    rays to those endpoints."""
    weights = {}
    with open(path) as f:
        for ln in f:
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            vid, w = ln.split()
            gamma = g.horizon_point(int(vid), radius)
            weights[gamma] = weights.get(gamma, 0) + Fraction(w)
    return boundary_measure(weights)


def write_boundary_measure(m: FiniteMeasure, path) -> None:
    with open(path, "w") as f:
        for gamma, w in sorted(m, key=lambda t: t[0].endpoint):
            f.write(f"{gamma.endpoint} {w}\n")
