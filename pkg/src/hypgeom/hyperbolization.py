"""Warped-product hyperbolization of a CAT(0) base.

Points are pairs (t, y): a real height and a base point.  The distance
between (t1, y1) and (t2, y2) is the upper-half-plane distance between
(t1, 0) and (t2, dY(y1, y2)) for the metric dt^2 + e^(-2t) dl^2, so every
pair of points lies in an isometrically embedded strip ("curtain") over the
base geodesic through y1, y2.  Supported bases: Euclidean space and metric
trees, both with exact closed-form distances and exact comparison triangles.
The upward vertical direction is the common ideal point omega.
"""

from dataclasses import dataclass
from math import atan2, cos, exp, hypot, log, log1p, sin, sinh, sqrt, tan, atan

import numpy as np

from .errors import GraphError

_EXP_GUARD = 700.0


def h2_distance(t1: float, l1: float, t2: float, l2: float) -> float:
    """Distance in the plane with metric dt^2 + e^(-2t) dl^2 (the upper half
    plane under y = e^t).  Vertical pairs return |t1 - t2| exactly."""
    dl = abs(l1 - l2)
    if dl == 0.0:
        return abs(t1 - t2)
    dt = t1 - t2
    s = t1 + t2
    if abs(dt) > _EXP_GUARD or (dl > 0 and -s + 2.0 * log(dl) > _EXP_GUARD):
        # asymptotic regime: arccosh(1+u) ~ log(2u), computed in logs
        log_u = np.logaddexp(2.0 * log(dl) - s - log(2.0),
                             2.0 * log(abs(sinh(min(abs(dt), _EXP_GUARD) / 2.0)) + 1e-300) + log(2.0))
        return float(log(2.0) + log_u)
    u = 2.0 * sinh(dt / 2.0) ** 2 + dl * dl * exp(-s) / 2.0
    return log1p(u + sqrt(u * (u + 2.0)))


def uhp_point_at_fraction(x1, y1, x2, y2, frac):
    """Point at the given arclength fraction along the upper-half-plane
    geodesic from (x1, y1) to (x2, y2)."""
    if abs(x1 - x2) < 1e-300:
        return x1, y1 * (y2 / y1) ** frac
    c = (x2 * x2 + y2 * y2 - x1 * x1 - y1 * y1) / (2.0 * (x2 - x1))
    r = hypot(x1 - c, y1)
    s1 = log(tan(atan2(y1, x1 - c) / 2.0))
    s2 = log(tan(atan2(y2, x2 - c) / 2.0))
    phi = 2.0 * atan(exp(s1 + frac * (s2 - s1)))
    return c + r * cos(phi), r * sin(phi)


# -- CAT(0) bases -------------------------------------------------------------


class EuclideanBase:
    """R^dim with the Euclidean metric."""

    def __init__(self, dim: int):
        if dim < 1:
            raise GraphError("dimension must be >= 1")
        self.dim = dim

    def distance(self, y1, y2) -> float:
        a = np.atleast_1d(np.asarray(y1, dtype=np.float64))
        b = np.atleast_1d(np.asarray(y2, dtype=np.float64))
        return float(np.linalg.norm(a - b))

    def interpolate(self, y1, y2, arc: float):
        """Point at distance ``arc`` from y1 on the segment toward y2."""
        a = np.atleast_1d(np.asarray(y1, dtype=np.float64))
        b = np.atleast_1d(np.asarray(y2, dtype=np.float64))
        d = self.distance(y1, y2)
        if d == 0:
            return a
        return a + (arc / d) * (b - a)


@dataclass(frozen=True)
class TreePoint:
    """Interior point of a metric-tree edge (u, v), ``offset`` from u."""

    u: int
    v: int
    offset: float


class MetricTree:
    """Rooted tree with positive edge lengths; points are nodes or TreePoints."""

    def __init__(self, parents, lengths):
        self.parents = list(parents)
        self.lengths = list(lengths)
        if len(self.parents) != len(self.lengths):
            raise GraphError("parents and lengths must align")
        if self.parents[0] is not None and self.parents[0] >= 0:
            raise GraphError("node 0 must be the root")
        self.n = len(self.parents)
        self.depth_len = [0.0] * self.n
        self.depth = [0] * self.n
        for i in range(1, self.n):
            p = self.parents[i]
            if not (0 <= p < i):
                raise GraphError("parents must precede children")
            if self.lengths[i] <= 0:
                raise GraphError("edge lengths must be positive")
            self.depth_len[i] = self.depth_len[p] + self.lengths[i]
            self.depth[i] = self.depth[p] + 1

    def lca(self, a: int, b: int) -> int:
        while self.depth[a] > self.depth[b]:
            a = self.parents[a]
        while self.depth[b] > self.depth[a]:
            b = self.parents[b]
        while a != b:
            a, b = self.parents[a], self.parents[b]
        return a

    def node_distance(self, a: int, b: int) -> float:
        c = self.lca(a, b)
        return self.depth_len[a] + self.depth_len[b] - 2.0 * self.depth_len[c]

    def _exits(self, p):
        """(node, cost) alternatives for leaving a point."""
        if isinstance(p, TreePoint):
            return ((p.u, p.offset), (p.v, self.lengths_of(p.u, p.v) - p.offset))
        return ((int(p), 0.0),)

    def lengths_of(self, u: int, v: int) -> float:
        if self.parents[v] == u:
            return self.lengths[v]
        if self.parents[u] == v:
            return self.lengths[u]
        raise GraphError(f"({u},{v}) is not a tree edge")

    def distance(self, p, q) -> float:
        if isinstance(p, TreePoint) and isinstance(q, TreePoint) and \
                {p.u, p.v} == {q.u, q.v}:
            off_q = q.offset if q.u == p.u else self.lengths_of(p.u, p.v) - q.offset
            return abs(p.offset - off_q)
        best = float("inf")
        for a, ca in self._exits(p):
            for b, cb in self._exits(q):
                best = min(best, ca + self.node_distance(a, b) + cb)
        return best

    def node_path(self, a: int, b: int) -> list[int]:
        c = self.lca(a, b)
        up = []
        x = a
        while x != c:
            up.append(x)
            x = self.parents[x]
        down = []
        x = b
        while x != c:
            down.append(x)
            x = self.parents[x]
        return up + [c] + list(reversed(down))

    def interpolate(self, y1: int, y2: int, arc: float):
        """Point at distance ``arc`` from node y1 along the path to node y2."""
        path = self.node_path(y1, y2)
        if len(path) == 1 or arc <= 0:
            return y1
        acc = 0.0
        for u, v in zip(path, path[1:]):
            step = self.lengths_of(u, v)
            if acc + step >= arc - 1e-12:
                off = arc - acc
                if off <= 1e-12:
                    return u
                if off >= step - 1e-12:
                    return v
                return TreePoint(u=u, v=v, offset=off)
            acc += step
        return path[-1]


def random_metric_tree(n: int, seed: int) -> MetricTree:
    rng = np.random.default_rng(seed)
    parents = [-1] + [int(rng.integers(0, i)) for i in range(1, n)]
    lengths = [0.0] + [float(rng.uniform(0.5, 2.0)) for _ in range(1, n)]
    return MetricTree(parents, lengths)


# -- the hyperbolized space ---------------------------------------------------


class HSpace:
    """R x Y with the warped distance; points are (height, base point) pairs."""

    def __init__(self, base, sites=None):
        self.base = base
        self.sites = list(sites) if sites is not None else []

    def distance(self, p, q) -> float:
        (t1, y1), (t2, y2) = p, q
        return h2_distance(float(t1), 0.0, float(t2), self.base.distance(y1, y2))

    def lift(self, p, dt: float):
        t, y = p
        return (float(t) + float(dt), y)

    def gromov_product(self, o, p, q) -> float:
        return 0.5 * (self.distance(o, p) + self.distance(o, q) - self.distance(p, q))


def hspace_euclidean_line(half_width: float = 40.0, spacing: float = 1.0) -> HSpace:
    """H(R) with a height-0 site lattice for exponential-density measures."""
    ys = np.arange(-half_width, half_width + spacing / 2, spacing)
    sites = [(0.0, float(y)) for y in ys]
    return HSpace(EuclideanBase(1), sites=sites)


def side_point(space: HSpace, corner, other, frac: float):
    """Point at arclength fraction ``frac`` along the side from ``corner`` to
    ``other``, plus its base offset from the corner (the curtain coordinates)."""
    (t0, y0), (ti, yi) = corner, other
    li = space.base.distance(y0, yi)
    x, y = uhp_point_at_fraction(0.0, exp(t0), li, exp(ti), frac)
    t = log(y)
    arc = min(max(x, 0.0), li)
    ypt = space.base.interpolate(y0, yi, arc) if li > 0 else y0
    return (t, ypt), arc


@dataclass(frozen=True)
class ComparisonReport:
    triangles: int
    checked_pairs: int
    max_violation: float
    passed: bool


def _euclidean_comparison(d01: float, d02: float, d12: float):
    """Plane triangle with the given side lengths (law of cosines)."""
    if d01 + d02 < d12 - 1e-9 or d01 + d12 < d02 - 1e-9 or d02 + d12 < d01 - 1e-9:
        raise GraphError("base distances violate the triangle inequality")
    z0 = np.array([0.0, 0.0])
    z1 = np.array([d01, 0.0])
    if d01 == 0:
        x = 0.0
    else:
        x = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01)
    y2 = sqrt(max(0.0, d02 * d02 - x * x))
    z2 = np.array([x, y2])
    return z0, z1, z2


def cat_minus1_check(space: HSpace, triangle, samples: int = 8, seed: int = 0,
                     tol: float = 1e-9) -> ComparisonReport:
    """Comparison test for one triangle: sampled point pairs on the two sides
    at the first corner must be no farther apart than the corresponding
    points on the comparison triangle in H(E^2).

    Comparison points share the height and the base offset from the corner,
    with the base triangle replaced by its Euclidean comparison triangle.
    """
    p0, p1, p2 = triangle
    d01 = space.base.distance(p0[1], p1[1])
    d02 = space.base.distance(p0[1], p2[1])
    d12 = space.base.distance(p1[1], p2[1])
    z0, z1, z2 = _euclidean_comparison(d01, d02, d12)
    e2 = EuclideanBase(2)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        u, v = rng.uniform(0.0, 1.0, size=2)
        q1, arc1 = side_point(space, p0, p1, float(u))
        q2, arc2 = side_point(space, p0, p2, float(v))
        dx = space.distance(q1, q2)
        w1 = z0 + (arc1 / d01) * (z1 - z0) if d01 > 0 else z0
        w2 = z0 + (arc2 / d02) * (z2 - z0) if d02 > 0 else z0
        dh3 = h2_distance(q1[0], 0.0, q2[0], e2.distance(w1, w2))
        worst = max(worst, dx - dh3)
    return ComparisonReport(triangles=1, checked_pairs=samples,
                            max_violation=worst, passed=worst <= tol)


def cat_minus1_suite(space: HSpace, triangles, samples: int = 8, seed: int = 0,
                     tol: float = 1e-9) -> ComparisonReport:
    worst = 0.0
    count = 0
    for i, tri in enumerate(triangles):
        rep = cat_minus1_check(space, tri, samples, seed + i, tol)
        worst = max(worst, rep.max_violation)
        count += rep.checked_pairs
    return ComparisonReport(triangles=len(list(triangles)) if not hasattr(triangles, "__len__") else len(triangles),
                            checked_pairs=count, max_violation=worst, passed=worst <= tol)


@dataclass(frozen=True)
class IsometryReport:
    max_deviation: float
    products: tuple
    products_increasing: bool
    passed: bool


def isometry_action_check(space: HSpace, base_map, points, origin=None,
                          ray_bases=None, times=(5.0, 10.0, 20.0),
                          tol: float = 1e-9) -> IsometryReport:
    """Check that (t, y) -> (t, g y) preserves distances on the sampled point
    pairs, and witness the fixed upward ideal point: Gromov products at the
    origin of two upward rays grow along ``times``."""
    pts = list(points)
    worst = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            p, q = pts[i], pts[j]
            gp = (p[0], base_map(p[1]))
            gq = (q[0], base_map(q[1]))
            worst = max(worst, abs(space.distance(gp, gq) - space.distance(p, q)))
    products = ()
    increasing = True
    if ray_bases is not None:
        y1, y2 = ray_bases
        o = origin if origin is not None else (0.0, y1)
        products = tuple(space.gromov_product(o, (float(t), y1), (float(t), y2))
                         for t in times)
        increasing = all(a < b for a, b in zip(products, products[1:]))
    return IsometryReport(max_deviation=worst, products=products,
                          products_increasing=increasing,
                          passed=worst <= tol and increasing)
