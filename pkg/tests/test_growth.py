import numpy as np
import pytest

from hypgeom import (Graph, GraphError, critical_exponent, cycle, free_group,
                     free_product_cyclic, grid, growth_profile, packing_number,
                     regular_tree, tempered_check)

from conftest import random_connected


def test_zline_profile():
    z = regular_tree(2, 12)
    prof = growth_profile(z, 10, packing_rhos=(1,))
    assert prof.ball_sizes == tuple(2 * r + 1 for r in range(11))
    assert prof.growth_rate <= 0.02
    assert prof.critical_exponent_estimate == prof.growth_rate


def test_grid_profile_flat():
    g = grid(9, 9)
    prof = growth_profile(g, 8, packing_rhos=())
    assert prof.growth_rate <= 0.02
    assert all(a <= b for a, b in zip(prof.ball_sizes, prof.ball_sizes[1:]))


def sphere_formula_tree(q, r):
    return 1 if r == 0 else q * (q - 1) ** (r - 1)


def test_tree_rate_matches_formula():
    t = regular_tree(4, 10)
    prof = growth_profile(t, 10, packing_rhos=())
    for r in range(11):
        assert prof.sphere_sizes[r] == sphere_formula_tree(4, r)
    assert abs(prof.growth_rate - np.log(3)) <= 0.05


def transfer_matrix_spheres(orders, rmax):
    """Sphere sizes of a free product of cyclic groups by syllable recursion:
    states = (factor, distance-to-complete-the-syllable buckets) collapsed to
    per-factor counts of elements at each word length."""
    # counts[fi][r] = number of group elements of length r whose normal form
    # ends with a syllable of factor fi
    nf = len(orders)
    counts = [[0] * (rmax + 1) for _ in range(nf)]
    # syllable costs: a nontrivial element of Z_k has generator-length
    # min(j, k - j) for j = 1..k-1; order 0 contributes two elements per length
    def syllable_count(k, length):
        if k == 0:
            return 2 if length >= 1 else 0
        return sum(1 for j in range(1, k) if min(j, k - j) == length)
    for fi, k in enumerate(orders):
        for r in range(1, rmax + 1):
            counts[fi][r] = syllable_count(k, r)
    for r in range(1, rmax + 1):
        for fi, k in enumerate(orders):
            extra = 0
            for length in range(1, r):
                sc = syllable_count(k, length)
                if sc == 0:
                    continue
                prev = sum(counts[fj][r - length] for fj in range(nf) if fj != fi)
                extra += sc * prev
            counts[fi][r] += extra
    totals = [1] + [sum(counts[fi][r] for fi in range(nf)) for r in range(1, rmax + 1)]
    return totals


def test_transfer_matrix_oracle_consistency():
    for orders, rmax in (([2, 2, 2], 6), ([0, 0], 5), ([3, 2], 6)):
        g = free_product_cyclic(orders, rmax)
        spheres = np.bincount(g.dist_row(0), minlength=rmax + 1)
        assert list(spheres) == transfer_matrix_spheres(orders, rmax)


def test_critical_exponent_values():
    assert critical_exponent(regular_tree(2, 12), 12) == 0.0
    assert abs(critical_exponent(regular_tree(4, 10), 10) - np.log(3)) <= 0.05
    g = free_product_cyclic([2, 2, 2], 9)
    spheres = transfer_matrix_spheres([2, 2, 2], 9)
    # exact shell ratio is 2, so the fitted rate approaches log 2
    assert abs(critical_exponent(g, 9) - np.log(2)) <= 0.05
    assert spheres[-1] / spheres[-2] == 2


def test_rmax_guard():
    with pytest.raises(GraphError):
        growth_profile(cycle(8), 10)


def test_tempered_homogeneous_tree_interior():
    t = regular_tree(3, 8)
    rep = tempered_check(t, 1, 3)
    assert rep.passed
    for r in range(1, 4):
        assert rep.ball_min[r] == rep.ball_max[r]  # interior homogeneity


def test_tempered_star_hub_spike():
    star = Graph(12, [(0, i) for i in range(1, 12)])
    rep = tempered_check(star, 1, 1, cap=5)
    assert rep.ball_max[1] == 12
    assert not rep.passed


def test_tempered_vs_exhaustive_scan():
    rng = np.random.default_rng(13)
    g = random_connected(25, 0.15, rng)
    r1, r2 = 1, 2
    rep = tempered_check(g, r1, r2)
    ecc = g.eccentricity_base
    interior = [v for v in range(g.n) if g.dist(g.base, v) <= ecc - r2]
    for r in range(r1, r2 + 1):
        sizes = [int(np.sum(g.dist_row(v) <= r)) for v in interior]
        assert rep.ball_min[r] == min(sizes)
        assert rep.ball_max[r] == max(sizes)


def test_packing_disjointness_bound():
    # packing count at scale rho times the minimal rho-ball size is at most
    # |B(base, r + rho)|
    g = grid(7, 7)
    for r in (2, 3):
        for rho in (1, 2):
            pk = packing_number(g, r, rho)
            min_ball = min(int(np.sum(g.dist_row(v) <= rho)) for v in range(g.n))
            assert pk * min_ball <= int(np.sum(g.dist_row(g.base) <= r + rho))


def test_packing_at_most_ball():
    t = regular_tree(3, 6)
    prof = growth_profile(t, 4)
    for (r, rho), cnt in prof.packing_numbers.items():
        assert cnt <= prof.ball_sizes[r]
