"""Constructive amenability certificates.

Three constructions produce sequences of probability measures whose pairwise
total variation decays:

* Cesaro averages of tau-sandwiched set sequences, with the exact
  closed-form bound 2 tau/n + (4(n-tau)/n) (1 - (m Z_1 / m Z_{n+tau})^{2 tau/(n-tau)});
* the ray-bundle construction: Z(x, gamma, n, k) collects the parameter-n
  points of rays toward gamma started within k of x, and the measures are the
  Cesaro averages of the normalized counting measures of those sets;
* geodesic Cesaro averages of exponential-density (pre-Patterson) measures.

Counting-measure total variations are exact rationals; the sandwich
inequality is checked by exact cross-power comparison, floats never decide it.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, exp, log

import numpy as np

from .errors import DivergentNormalizer, GraphError, HorizonTooShallow, TruncationTooShallow
from .graph import Graph, HorizonPoint, enumerate_geodesics
from .growth import fit_growth_rate
from .measures import FiniteMeasure, counting_restriction, tv_distance


# -- sandwiched set sequences -------------------------------------------------


@dataclass(frozen=True)
class SandwichInstance:
    """Two increasing set sequences, each contained in the other after a
    shift of tau (1-indexed: z_sets[0] is Z_1)."""

    z_sets: tuple
    zp_sets: tuple
    tau: int

    def __post_init__(self):
        if self.tau < 0:
            raise GraphError("tau must be nonnegative")
        for seq in (self.z_sets, self.zp_sets):
            if any(len(s) == 0 for s in seq):
                raise GraphError("sandwich sets must be nonempty")
            for a, b in zip(seq, seq[1:]):
                if not set(a) <= set(b):
                    raise GraphError("sandwich sequences must be increasing")
        for k in range(len(self.z_sets)):
            if k + self.tau < len(self.zp_sets) and not set(self.z_sets[k]) <= set(self.zp_sets[k + self.tau]):
                raise GraphError("Z_k not contained in Z'_{k+tau}")
        for k in range(len(self.zp_sets)):
            if k + self.tau < len(self.z_sets) and not set(self.zp_sets[k]) <= set(self.z_sets[k + self.tau]):
                raise GraphError("Z'_k not contained in Z_{k+tau}")


def cesaro_average(sets, n: int) -> FiniteMeasure:
    """(1/n) sum of the normalized counting restrictions of the first n sets."""
    out: dict = {}
    for k in range(n):
        m = counting_restriction(sets[k])
        for p, w in m:
            out[p] = out.get(p, Fraction(0)) + w
    return FiniteMeasure({p: w / n for p, w in out.items()})


def cesaro_tv(inst: SandwichInstance, n: int) -> Fraction:
    """Exact TV distance between the two Cesaro averages at n."""
    if n < 1 or n > len(inst.z_sets) or n > len(inst.zp_sets):
        raise GraphError("index out of range")
    return tv_distance(cesaro_average(inst.z_sets, n), cesaro_average(inst.zp_sets, n))


def sandwich_bound(inst: SandwichInstance, n: int) -> float:
    """Closed-form TV bound at n (needs Z_{n+tau})."""
    tau = inst.tau
    if n <= tau:
        raise GraphError("bound needs n > tau")
    if n + tau > len(inst.z_sets):
        raise GraphError(f"bound needs Z_{n + tau}")
    if tau == 0:
        return 0.0
    ratio = len(inst.z_sets[0]) / len(inst.z_sets[n + tau - 1])
    return 2 * tau / n + (4 * (n - tau) / n) * (1.0 - ratio ** (2 * tau / (n - tau)))


def tv_le_sandwich_bound(tv: Fraction, m1: int, m_ntau: int, n: int, tau: int) -> bool:
    """Exact rational test of tv <= bound.

    The bound contains ratio^(2 tau/(n-tau)); raising the rearranged
    inequality to the (n-tau)-th power clears the fractional exponent, so the
    comparison is exact in rational arithmetic.
    """
    tv = Fraction(tv)
    if tau == 0:
        return tv <= 0
    rhs = Fraction(2 * tau, n) + Fraction(4 * (n - tau), n) - tv
    if rhs < 0:
        return False
    scaled = rhs * Fraction(n, 4 * (n - tau))
    if scaled >= 1:
        return True
    return Fraction(m1, m_ntau) ** (2 * tau) <= scaled ** (n - tau)


def check_sandwich(inst: SandwichInstance, n: int) -> bool:
    """Exact check that cesaro_tv(n) respects the closed-form bound."""
    tv = cesaro_tv(inst, n)
    return tv_le_sandwich_bound(tv, len(inst.z_sets[0]), len(inst.z_sets[n + inst.tau - 1]),
                                n, inst.tau)


# -- ray-bundle measures ------------------------------------------------------


def _ray_walk_tree(g: Graph, endpoint: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """For every vertex z: d(z, endpoint) and the vertex n steps from z along
    the unique geodesic toward the endpoint (valid where d >= n)."""
    de = g.dist_row(endpoint)
    hop = g.bfs_parents(endpoint).astype(np.int64).copy()
    hop[endpoint] = endpoint  # park finished walks instead of wrapping
    w = np.arange(g.n, dtype=np.int64)
    for _ in range(n):
        w = hop[w]
    return de, w


def _thicken(g: Graph, pts, r: int) -> frozenset:
    if r <= 0:
        return frozenset(pts)
    thick = set()
    for p in pts:
        thick.update(int(v) for v in g.ball(p, r))
    return frozenset(thick)


def ray_bundle_sets(ctx, x: int, gamma: HorizonPoint, n: int, kmax: int,
                    r: int = 0, geodesic_cap: int = 64,
                    fellow_constant: float = 0.0) -> list[frozenset]:
    """[Z(x, gamma, n, k) for k = 1..kmax]: parameter-n points of rays toward
    gamma started in B(x, k), thickened by the r-neighborhood.

    On trees rays toward gamma are the unique geodesics to its endpoint (one
    vectorized walk serves every k).  On other graphs, capped geodesic
    enumeration with the tail acceptance rule: a geodesic counts as a ray
    toward gamma when its terminal quarter stays within ``fellow_constant``
    of gamma's ray.
    """
    g = ctx.graph
    e = gamma.endpoint
    if g.is_tree:
        de, w = _ray_walk_tree(g, e, n)
        dx = g.dist_row(x)
        valid = de >= n
        out = []
        for k in range(1, kmax + 1):
            pts = np.unique(w[(dx <= k) & valid])
            out.append(_thicken(g, (int(v) for v in pts), r))
        return out
    ray_verts = list(gamma.ray.vertices)
    tail = max(1, ceil(gamma.radius / 4))
    dx = g.dist_row(x)
    per_start: dict[int, set] = {}
    for z0 in np.flatnonzero(dx <= kmax):
        pts = set()
        for seg in enumerate_geodesics(g, int(z0), e, geodesic_cap):
            if seg.length < n:
                continue
            ok = all(min(g.dist(t, rv) for rv in ray_verts) <= fellow_constant
                     for t in seg.vertices[-tail:])
            if ok:
                pts.add(seg.vertices[n])
        per_start[int(z0)] = pts
    out = []
    for k in range(1, kmax + 1):
        pts = set()
        for z0, s in per_start.items():
            if dx[z0] <= k:
                pts |= s
        out.append(_thicken(g, pts, r))
    return out


def ray_bundle_set(ctx, x: int, gamma: HorizonPoint, n: int, k: int,
                   r: int = 0, **kw) -> frozenset:
    """Z(x, gamma, n, k) alone; see ray_bundle_sets."""
    return ray_bundle_sets(ctx, x, gamma, n, k, r, **kw)[k - 1]


def build_lambda_n(ctx, x: int, gamma: HorizonPoint, n: int, r: int = 0,
                   **ray_kw) -> FiniteMeasure:
    """Cesaro average over k = 1..n of the normalized counting measures of
    Z(x, gamma, n, k).  Raises HorizonTooShallow when no ray admits the
    requested parameter from B(x, 1)."""
    sets = ray_bundle_sets(ctx, x, gamma, n, n, r, **ray_kw)
    if not sets[0]:
        raise HorizonTooShallow(
            f"no ray of parameter {n} toward {gamma!r} starts within 1 of {x}")
    return cesaro_average(sets, n)


@dataclass(frozen=True)
class DecayRow:
    n: int
    tv: Fraction
    bound: float
    within_bound: bool


def lambda_decay_experiment(ctx, x: int, xp: int, gamma: HorizonPoint,
                            n_list, r: int = 0, **ray_kw) -> list[DecayRow]:
    """Measured ||lambda_n(x) - lambda_n(xp)|| against the sandwich bound with
    tau = d(x, xp); the comparison is exact and a violation raises."""
    g = ctx.graph
    tau = g.dist(x, xp)
    rows = []
    for n in n_list:
        zx = ray_bundle_sets(ctx, x, gamma, n, n + tau, r, **ray_kw)
        zxp = ray_bundle_sets(ctx, xp, gamma, n, n, r, **ray_kw)
        if not zx[0] or not zxp[0]:
            raise HorizonTooShallow(f"empty smallest ray set at n={n}")
        lam = cesaro_average(zx, n)
        lamp = cesaro_average(zxp, n)
        tv = tv_distance(lam, lamp)
        if n <= tau:
            # closed form needs n > tau; 2 is the trivial TV bound
            ok = tv <= 2
            bound = 2.0
        else:
            ok = tv_le_sandwich_bound(tv, len(zx[0]), len(zx[n + tau - 1]), n, tau)
            bound = (0.0 if tau == 0 else
                     2 * tau / n + (4 * (n - tau) / n)
                     * (1.0 - (len(zx[0]) / len(zx[n + tau - 1])) ** (2 * tau / (n - tau))))
        if not ok:
            raise AssertionError(f"sandwich bound violated at n={n}: tv={tv}")
        rows.append(DecayRow(n=int(n), tv=tv, bound=bound, within_bound=ok))
    return rows


# -- pre-Patterson measures and geodesic Cesaro averages ----------------------


@dataclass(frozen=True)
class DensityMeasure:
    """Probability measure with weights proportional to e^(-delta d(x, .)),
    stored as a dense vector over the site list."""

    vector: np.ndarray
    normalizer: float
    delta: float

    def tv(self, other: "DensityMeasure") -> float:
        return float(np.abs(self.vector - other.vector).sum())

    def weight(self, i: int) -> float:
        return float(self.vector[i])


def _graph_site_distances(g: Graph, x: int) -> np.ndarray:
    return g.dist_row(g.check_vertex(x)).astype(np.float64)


def pre_patterson(space, x, delta: float, truncation: float | None = None,
                  growth_rate: float | None = None) -> DensityMeasure:
    """Exponential-density probability measure around x at exponent delta.

    ``space`` is a Graph (sites = vertices, counting measure) or an HSpace
    (sites = its lattice).  delta must exceed the fitted growth rate of the
    sites.  With an explicit truncation the normalizer drops sites beyond it
    and the geometric tail estimate must stay below 1e-9 of the normalizer;
    without truncation the whole finite site set is summed exactly.
    """
    if isinstance(space, Graph):
        d = _graph_site_distances(space, x)
        if growth_rate is None:
            spheres = np.bincount(d.astype(np.int64))
            growth_rate = fit_growth_rate(spheres)
    else:
        d = np.array([space.distance(x, s) for s in space.sites], dtype=np.float64)
        if growth_rate is None:
            growth_rate = _empirical_site_rate(d)
    if delta <= growth_rate + 1e-12:
        raise DivergentNormalizer(
            f"delta={delta} at or below the growth rate {growth_rate:.6g}")
    w = np.exp(-delta * d)
    if truncation is not None:
        inside = d <= truncation
        if not np.any(inside):
            raise GraphError("truncation excludes every site")
        w = np.where(inside, w, 0.0)
        norm = float(w.sum())
        shell = float(np.sum(np.exp(-delta * d[(d > truncation - 1) & inside])))
        q = exp(-(delta - growth_rate))
        tail = shell * q / (1.0 - q)
        if tail > 1e-9 * norm:
            raise TruncationTooShallow(
                f"estimated tail mass {tail:.3g} above 1e-9 of normalizer")
    norm = float(w.sum())
    return DensityMeasure(vector=w / norm, normalizer=norm, delta=float(delta))


def _empirical_site_rate(dists: np.ndarray) -> float:
    rmax = int(np.floor(dists.max()))
    if rmax < 2:
        return 0.0
    counts = np.array([np.count_nonzero((dists > r - 1) & (dists <= r))
                       for r in range(1, rmax + 1)], dtype=np.float64)
    return fit_growth_rate(np.concatenate([[1], counts]))


def _graph_ray(g: Graph, x: int, gamma: HorizonPoint) -> list[int]:
    """Deterministic geodesic from x to gamma's endpoint (lex-first)."""
    return list(enumerate_geodesics(g, x, gamma.endpoint, 1)[0].vertices)


def cesaro_geodesic(space, x, gamma, n: float, step: float | None = None,
                    delta: float = 1.0, clamp: bool = True,
                    truncation: float | None = None) -> DensityMeasure:
    """(1/m) sum of pre-Patterson measures at m = ceil(n/step) points along
    the geodesic ray from x toward gamma.

    Graph rays step along vertices (step = 1); HSpace rays are the exact
    vertical geodesics toward omega.  Parameters past the representable ray
    are clamped at the endpoint when ``clamp`` (truncation stand-in for the
    infinite ray); with clamp=False they raise GraphError.
    """
    if isinstance(space, Graph):
        if step is None:
            step = 1.0
        if abs(step - 1.0) > 1e-12:
            raise GraphError("graph rays use unit steps")
        path = _graph_ray(space, x, gamma)
        m = max(1, int(round(n / step)))
        if not clamp and m > len(path):
            raise GraphError(f"ray of length {len(path) - 1} cannot reach parameter {n}")
        spheres = np.bincount(space.dist_row(x))
        rate = fit_growth_rate(spheres)
        memo: dict[int, np.ndarray] = {}
        acc = None
        for i in range(m):
            p = path[min(i, len(path) - 1)]
            if p not in memo:
                memo[p] = pre_patterson(space, p, delta, truncation,
                                        growth_rate=rate).vector
            acc = memo[p].copy() if acc is None else acc + memo[p]
        return DensityMeasure(vector=acc / m, normalizer=float("nan"), delta=float(delta))
    # HSpace: vertical ray toward omega
    if gamma != "omega":
        raise GraphError("HSpace rays support only the upward direction 'omega'")
    if step is None:
        step = 1.0 / 16.0
    m = max(1, int(round(n / step)))
    acc = None
    for i in range(m):
        p = space.lift(x, i * step)
        nu = pre_patterson(space, p, delta, truncation)
        acc = nu.vector if acc is None else acc + nu.vector
    return DensityMeasure(vector=acc / m, normalizer=float("nan"), delta=float(delta))
