"""Growth, packing, temperedness, and critical-exponent diagnostics.

All statistics are measured from the base vertex; interior statistics exclude
sources within the scan radius of the truncation sphere, since truncated
balls undercount.  For a non-vertex-transitive graph the sphere statistic is
a base-orbit analogue of the orbit growth rate, not the rate of a group
orbit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GraphError
from .graph import Graph


@dataclass(frozen=True)
class GrowthProfile:
    ball_sizes: tuple
    sphere_sizes: tuple
    packing_numbers: dict          # (radius, rho) -> greedy maximal packing count
    growth_rate: float             # least-squares slope of log sphere sizes, >= 0
    critical_exponent_estimate: float


def packing_number(g: Graph, r: int, rho: int) -> int:
    """Greedy maximal system of pairwise disjoint rho-balls with centers in
    B(base, r); centers are admitted in vertex order."""
    ball = g.ball(g.base, r)
    chosen = []
    alive = np.ones(ball.size, dtype=bool)
    pos = {int(v): i for i, v in enumerate(ball)}
    for i, v in enumerate(ball):
        if not alive[i]:
            continue
        chosen.append(int(v))
        row = g.dist_row(int(v))
        near = row[ball] <= 2 * rho
        alive &= ~near
        alive[i] = False
    return len(chosen)


def growth_profile(g: Graph, rmax: int, packing_rhos=(1, 2, 3)) -> GrowthProfile:
    """Ball and sphere sizes up to rmax, packing counts, and the fitted
    exponential growth rate of sphere sizes over the last half of radii."""
    if rmax > g.eccentricity_base:
        raise GraphError(f"rmax {rmax} exceeds the graph radius from base")
    row = g.dist_row(g.base)
    spheres = np.bincount(row, minlength=rmax + 1)[: rmax + 1]
    balls = np.cumsum(spheres)
    packings = {}
    for rho in packing_rhos:
        for r in range(rmax + 1):
            packings[(r, rho)] = packing_number(g, r, rho)
    rate = fit_growth_rate(spheres)
    return GrowthProfile(ball_sizes=tuple(int(b) for b in balls),
                         sphere_sizes=tuple(int(s) for s in spheres),
                         packing_numbers=packings,
                         growth_rate=rate,
                         critical_exponent_estimate=rate)


def fit_growth_rate(sphere_sizes) -> float:
    """Least-squares slope of log sphere size over the last half of radii,
    clamped at 0."""
    sizes = np.asarray(sphere_sizes, dtype=np.float64)
    rmax = sizes.size - 1
    lo = max(1, (rmax + 1) // 2)
    rs = np.arange(lo, rmax + 1)
    vals = sizes[lo:]
    keep = vals > 0
    if keep.sum() < 2:
        return 0.0
    slope = np.polyfit(rs[keep], np.log(vals[keep]), 1)[0]
    return float(max(0.0, slope))


def critical_exponent(g: Graph, rmax: int) -> float:
    """Infimum exponent making sum |S(base,r)| e^(-d r) summable, estimated
    as the fitted sphere growth rate (equal by construction)."""
    return growth_profile(g, rmax, packing_rhos=()).growth_rate


@dataclass(frozen=True)
class TemperedReport:
    r1: int
    r2: int
    ball_min: dict
    ball_max: dict
    cap: float
    passed: bool


def tempered_check(g: Graph, r1: int, r2: int, cap: float | None = None) -> TemperedReport:
    """Min/max counting-measure ball sizes over interior sources for each
    r in [r1, r2]; PASS iff min >= 1 and max <= cap.

    Default cap is the bounded-degree volume bound 1 + D sum (D-1)^j, which
    the counting measure on any graph of max degree D satisfies.
    """
    if not (1 <= r1 <= r2):
        raise GraphError("need 1 <= r1 <= r2")
    if cap is None:
        d = max(2, g.degree_bound)
        cap = 1 + d * sum((d - 1) ** j for j in range(r2))
    ecc = g.eccentricity_base
    interior = np.flatnonzero(g.dist_row(g.base) <= max(0, ecc - r2))
    if interior.size == 0:
        raise GraphError("no interior sources at this scan radius")
    mins, maxs = {}, {}
    rows = (g.dist_row(int(v)) for v in interior)
    counts = np.stack([np.bincount(np.minimum(r, r2 + 1), minlength=r2 + 2)
                       for r in rows])
    csum = np.cumsum(counts, axis=1)
    for r in range(r1, r2 + 1):
        mins[r] = int(csum[:, r].min())
        maxs[r] = int(csum[:, r].max())
    ok = all(mins[r] >= 1 and maxs[r] <= cap for r in range(r1, r2 + 1))
    return TemperedReport(r1=r1, r2=r2, ball_min=mins, ball_max=maxs,
                          cap=float(cap), passed=ok)
