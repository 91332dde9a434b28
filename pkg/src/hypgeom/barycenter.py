"""Quasi-barycenter sets of boundary measures and the elementarity classifier."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cocycles import CocycleContext, barycenter_functional_rows, boundary_measure
from .errors import AtomTooHeavy, GraphError
from .measures import FiniteMeasure

_PROB_TOL = 1e-9
_HALF_CAP = Fraction(1, 2) - Fraction(1, 10**6)


@dataclass(frozen=True)
class BarycenterResult:
    basepoint: int
    r: float
    infimum: float
    set: frozenset
    global_set: frozenset


def _check_escape_measure(lam: FiniteMeasure) -> None:
    if not lam.is_probability(_PROB_TOL):
        raise GraphError("barycenter needs a probability measure")
    if lam.max_atom() >= Fraction(1, 2):
        raise AtomTooHeavy(f"atom of weight {lam.max_atom()} >= 1/2")


def quasi_barycenter(ctx: CocycleContext, lam: FiniteMeasure, x: int, r: float,
                     global_basepoints=None) -> BarycenterResult:
    """Sublevel set of B(x, .) within r of its minimum over all vertices.

    ``global_basepoints`` optionally unions the sets over further basepoints
    (the closure over all basepoints at finite scale).
    """
    if r < 0:
        raise GraphError("r must be nonnegative")
    _check_escape_measure(lam)
    vals = barycenter_functional_rows(ctx, lam, x)
    inf = float(vals.min())
    level = {int(v) for v in np.flatnonzero(vals <= inf + r + 1e-9)}
    global_set = set(level)
    for xp in (global_basepoints or ()):
        vp = barycenter_functional_rows(ctx, lam, int(xp))
        global_set |= {int(v) for v in np.flatnonzero(vp <= vp.min() + r + 1e-9)}
    return BarycenterResult(basepoint=int(x), r=float(r), infimum=inf,
                            set=frozenset(level), global_set=frozenset(global_set))


@dataclass(frozen=True)
class StabilityReport:
    passed: bool
    r: float
    enlarged_r: float
    missing: frozenset


def barycenter_stability_check(ctx: CocycleContext, lam: FiniteMeasure,
                               x: int, xp: int, r: float) -> StabilityReport:
    """Verify C(lam, x, r) is contained in C(lam, xp, r + 6 c2)."""
    small = quasi_barycenter(ctx, lam, x, r)
    big = quasi_barycenter(ctx, lam, xp, r + 6.0 * ctx.c2)
    missing = small.set - big.set
    return StabilityReport(passed=not missing, r=float(r),
                           enlarged_r=r + 6.0 * ctx.c2, missing=frozenset(missing))


@dataclass(frozen=True)
class Classification:
    kind: str          # "elementary1" | "elementary2" | "bulky"
    points: tuple      # horizon points (elementary) or vertex ids (bulky)


def rebalance(lam: FiniteMeasure) -> FiniteMeasure:
    """Cap atoms at 1/2 - 1e-6 and spread the excess uniformly over the rest
    of the support.  Deterministic; used before the bulky minimization."""
    support = sorted(lam.support(), key=lambda p: p.endpoint)
    weights = {p: Fraction(lam[p]) for p in support}
    for _ in range(len(support)):
        heavy = {p for p, w in weights.items() if w > _HALF_CAP}
        if not heavy:
            break
        excess = sum(weights[p] - _HALF_CAP for p in heavy)
        rest = [p for p in support if p not in heavy]
        for p in heavy:
            weights[p] = _HALF_CAP
        share = excess / len(rest)
        for p in rest:
            weights[p] += share
    return boundary_measure(weights)


def classify_measure(ctx: CocycleContext, lam: FiniteMeasure) -> Classification:
    """Elementary measures are concentrated on 1 or 2 boundary points; all
    others reduce to a finite interior set via the quasi-barycenter.

    Max-weight-atom rule: an atom of weight > 1/2 (or a unique maximum on a
    2-point support) gives elementary1; two atoms of exactly 1/2 give
    elementary2; supports of size >= 3 are rebalanced below 1/2 and classified
    bulky with the sublevel set C(lam, base, 8 c2).
    """
    if not lam.is_probability(_PROB_TOL):
        raise GraphError("classification needs a probability measure")
    support = sorted(lam.support(), key=lambda p: p.endpoint)
    if not support:
        raise GraphError("empty measure")
    if len(support) == 1:
        return Classification("elementary1", (support[0],))
    if len(support) == 2:
        w0, w1 = lam[support[0]], lam[support[1]]
        if w0 == w1:
            return Classification("elementary2", tuple(support))
        return Classification("elementary1", (support[0] if w0 > w1 else support[1],))
    balanced = rebalance(lam)
    res = quasi_barycenter(ctx, balanced, ctx.graph.base, 8.0 * ctx.c2)
    return Classification("bulky", tuple(sorted(res.set)))


def escape_profile(ctx: CocycleContext, lam: FiniteMeasure, x: int,
                   kmax: int | None = None) -> list[float]:
    """Min of B(x, .) over each sphere S(x, k), k = 0..kmax: the finite
    restatement of escape to infinity is that this is eventually monotone."""
    _check_escape_measure(lam)
    g = ctx.graph
    vals = barycenter_functional_rows(ctx, lam, x)
    dx = g.dist_row(g.check_vertex(x))
    if kmax is None:
        kmax = int(dx.max())
    out = []
    for k in range(kmax + 1):
        sel = vals[dx == k]
        if sel.size == 0:
            break
        out.append(float(sel.min()))
    return out


def relabel_horizon(g, perm: np.ndarray, gamma):
    """Image of a horizon point under a graph automorphism given as a vertex
    permutation (the canonical ray to the permuted endpoint)."""
    return g.horizon_point(int(perm[gamma.endpoint]), gamma.radius)


def push_measure(g, perm: np.ndarray, lam: FiniteMeasure) -> FiniteMeasure:
    return boundary_measure({relabel_horizon(g, perm, p): w for p, w in lam})
