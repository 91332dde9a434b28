import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgeom import (GeodesicSegment, Graph, GraphError, cycle, delta_four_point,
                     delta_rips, enumerate_geodesics, fellow_traveling, free_group,
                     free_product_cyclic, from_spec, gromov_product, grid,
                     read_graph, regular_tree, regular_tree_branch_swap, write_graph)

from conftest import adjacency_dict, bfs_lengths, random_connected


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


# -- gromov_product -----------------------------------------------------------

def test_gromov_product_collinear():
    g = path_graph(6)
    assert gromov_product(g, 0, 5, 3) == 3


def test_gromov_product_identity_case():
    g = path_graph(6)
    for x in range(6):
        assert gromov_product(g, x, x, 2) == 0


def test_gromov_product_invalid_vertex():
    g = path_graph(3)
    with pytest.raises(GraphError):
        gromov_product(g, 0, 1, 7)


def test_gromov_product_vs_bfs_oracle():
    rng = np.random.default_rng(7)
    g = random_connected(20, 0.2, rng)
    adj = adjacency_dict(g)
    x, y, z = 2, 11, 17
    dx = bfs_lengths(adj, x)
    dy = bfs_lengths(adj, y)
    expected = (dx[y] + dx[z] - dy[z]) / 2
    assert gromov_product(g, x, y, z) == expected


def test_gromov_product_nonnegative_random():
    rng = np.random.default_rng(3)
    g = random_connected(15, 0.25, rng)
    for x, y, z in itertools.product(range(0, 15, 3), repeat=3):
        assert gromov_product(g, x, y, z) >= 0


# -- delta estimators ---------------------------------------------------------

def four_point_oracle(g):
    """Definitional scan over all ordered quadruples."""
    best = 0.0
    d = g.dist_table
    def prod(w, u, v):
        return (d[w, u] + d[w, v] - d[u, v]) / 2
    for w, x, y, z in itertools.product(range(g.n), repeat=4):
        val = min(prod(w, x, z), prod(w, y, z)) - prod(w, x, y)
        best = max(best, val)
    return best


def test_delta_four_point_tree_zero():
    for g in (regular_tree(3, 4), regular_tree(2, 6), path_graph(9)):
        assert delta_four_point(g) == 0.0


def test_delta_four_point_complete_zero():
    k5 = Graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert delta_four_point(k5) == 0.0


def test_delta_four_point_cycle_oracle():
    c8 = cycle(8)
    assert delta_four_point(c8) == four_point_oracle(c8) == 2.0


def test_delta_four_point_random_vs_oracle():
    rng = np.random.default_rng(11)
    for _ in range(6):
        g = random_connected(7, 0.4, rng)
        assert delta_four_point(g) == four_point_oracle(g)


def rips_oracle(g, cap=10_000):
    """Thinness over full triangle enumeration, including bigons: independent
    nested-loop implementation."""
    best = 0
    d = g.dist_table
    geos = {}
    for u in range(g.n):
        for v in range(u, g.n):
            segs = enumerate_geodesics(g, u, v, cap)
            geos[(u, v)] = [list(s.vertices) for s in segs]
    def side(u, v):
        return geos[(min(u, v), max(u, v))]
    for x in range(g.n):
        for y in range(g.n):
            for z in range(y, g.n):
                for g1 in side(y, z):
                    for g2 in side(x, y):
                        for g3 in side(x, z):
                            other = g2 + g3
                            for v in g1:
                                best = max(best, min(d[v, o] for o in other))
    return float(best)


def test_delta_rips_tree_zero():
    assert delta_rips(regular_tree(3, 4)) == 0.0


def test_delta_rips_c6_full_enumeration_oracle():
    c6 = cycle(6)
    assert delta_rips(c6, 64) == rips_oracle(c6)


def test_delta_rips_small_random_vs_oracle():
    rng = np.random.default_rng(23)
    g = random_connected(7, 0.35, rng)
    assert delta_rips(g, 64) == rips_oracle(g)


def test_delta_rips_cap_monotone():
    g = grid(5, 5)
    assert delta_rips(g, 4) <= delta_rips(g, 64)


# -- geodesic enumeration -----------------------------------------------------

def test_enumerate_geodesics_tree_unique():
    t = regular_tree(3, 4)
    rng = np.random.default_rng(0)
    for _ in range(20):
        u, v = rng.integers(0, t.n, size=2)
        segs = enumerate_geodesics(t, int(u), int(v), 50)
        assert len(segs) == 1
        segs[0].validate(t)


def test_enumerate_geodesics_c4_antipodal():
    assert len(enumerate_geodesics(cycle(4), 0, 2, 10)) == 2


def lattice_path_count(w, h):
    """DP oracle: monotone lattice paths between opposite grid corners."""
    dp = [[0] * h for _ in range(w)]
    dp[0][0] = 1
    for i in range(w):
        for j in range(h):
            if i:
                dp[i][j] += dp[i - 1][j]
            if j:
                dp[i][j] += dp[i][j - 1]
    return dp[w - 1][h - 1]


def test_enumerate_geodesics_grid_corner_count():
    g = grid(3, 3)
    segs = enumerate_geodesics(g, 0, 8, 100)
    assert len(segs) == lattice_path_count(3, 3) == 6
    for s in segs:
        s.validate(g)


def test_enumerate_geodesics_deterministic_and_capped():
    g = grid(4, 4)
    a = enumerate_geodesics(g, 0, 15, 100)
    b = enumerate_geodesics(g, 0, 15, 100)
    assert [s.vertices for s in a] == [s.vertices for s in b]
    assert len(enumerate_geodesics(g, 0, 15, 3)) == 3


# -- Eq. (4d): product vs distance to geodesics -------------------------------

@pytest.mark.parametrize("g", [regular_tree(3, 4), cycle(8), grid(4, 4),
                               free_product_cyclic([2, 2, 2], 4)])
def test_product_vs_geodesic_distance(g):
    dr = delta_rips(g, 64)
    d = g.dist_table
    for x in range(g.n):
        for y in range(g.n):
            for z in range(y + 1, g.n):
                p2 = d[x, y] + d[x, z] - d[y, z]   # doubled product, exact int
                for seg in enumerate_geodesics(g, y, z, 16):
                    dist2 = 2 * min(int(d[x, v]) for v in seg.vertices)
                    assert 0 <= dist2 - p2 <= 8 * dr


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_product_lower_bounds_geodesic_distance_random(seed):
    rng = np.random.default_rng(seed)
    g = random_connected(10, 0.3, rng)
    x, y, z = rng.integers(0, g.n, size=3)
    for seg in enumerate_geodesics(g, int(y), int(z), 8):
        dmin = min(g.dist(int(x), v) for v in seg.vertices)
        assert gromov_product(g, int(x), int(y), int(z)) <= dmin


# -- fellow traveling (rays with a common horizon endpoint) -------------------

def test_fellow_traveling_tree_exact():
    t = regular_tree(3, 8)
    e = int(t.sphere(0, 8)[0])
    d0 = t.dist_row(0)
    starts = [v for v in range(t.n) if 1 <= d0[v] <= 3]
    for s in starts[:10]:
        ray1 = enumerate_geodesics(t, s, e, 1)[0]
        ray2 = t.canonical_geodesic(e)
        T, gap = fellow_traveling(t, ray1, ray2)
        assert abs(T) <= t.dist(ray1.start, ray2.start)
        assert gap == 0.0


def test_fellow_traveling_grid_reported():
    g = grid(5, 5)
    e = 24
    ray1 = enumerate_geodesics(g, 0, e, 1)[0]
    ray2 = enumerate_geodesics(g, 1, e, 1)[0]
    T, gap = fellow_traveling(g, ray1, ray2)
    assert abs(T) <= g.dist(0, 1)
    assert gap < np.inf


# -- generators ---------------------------------------------------------------

def test_regular_tree_counts():
    assert regular_tree(4, 3).n == 1 + 4 + 4 * 3 + 4 * 9 == 53
    assert regular_tree(2, 7).n == 15


def test_cycle_degrees():
    c = cycle(8)
    assert c.n == 8
    assert all(len(c.neighbors(v)) == 2 for v in range(8))


def word_ball_oracle(orders, radius):
    """Independent normal-form enumeration with string-keyed BFS."""
    gens = []
    for fi, k in enumerate(orders):
        gens.append((fi, 1))
        if k != 2:
            gens.append((fi, -1))
    def mul(word, fi, e):
        k = orders[fi]
        if word and word[-1][0] == fi:
            ne = word[-1][1] + e
            if k:
                ne %= k
            return word[:-1] if ne == 0 else word[:-1] + ((fi, ne),)
        return word + ((fi, e % k if k else e),)
    seen = {()}
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for fi, e in gens:
                nw = mul(w, fi, e)
                if nw not in seen:
                    seen.add(nw)
                    nxt.append(nw)
        frontier = nxt
    return len(seen)


@pytest.mark.parametrize("orders,radius", [([2, 2, 2], 5), ([0, 0], 4),
                                           ([3, 2], 5), ([0, 2], 4), ([4], 3)])
def test_free_product_counts_vs_word_oracle(orders, radius):
    g = free_product_cyclic(orders, radius)
    assert g.n == word_ball_oracle(orders, radius)


def test_free_product_tree_fast_path_matches_generic():
    # orders with a 3 force the generic dict BFS; compare the pure-tree case
    # against the generic route by perturbing through an equivalent tree
    fast = free_product_cyclic([0, 0], 4)
    assert fast.is_tree
    slow = free_product_cyclic([0, 0, 3], 0)  # touch generic path builder
    assert slow.n == 1
    # sphere sizes of the fast path must match the word oracle shellwise
    d = fast.dist_row(0)
    sizes = np.bincount(d)
    assert list(sizes) == [1, 4, 12, 36, 108]


def test_free_group_is_regular_tree():
    f2 = free_group(2, 5)
    assert f2.is_tree
    assert all(len(f2.neighbors(v)) in (1, 4) for v in range(f2.n))


def test_grid_generator():
    g = grid(5, 5)
    assert g.n == 25
    assert g.base == 12


def test_branch_swap_is_automorphism():
    t = regular_tree(3, 5)
    perm = regular_tree_branch_swap(3, 5, 0, 2)
    edges = {(min(u, v), max(u, v)) for u, v in t.edges()}
    mapped = {(min(int(perm[u]), int(perm[v])), max(int(perm[u]), int(perm[v])))
              for u, v in t.edges()}
    assert edges == mapped
    assert perm[0] == 0


def test_graph_file_roundtrip(tmp_path):
    g = grid(3, 4)
    path = tmp_path / "g.txt"
    write_graph(g, path)
    h = read_graph(path)
    assert h.n == g.n and h.base == g.base
    assert np.array_equal(h.edges(), g.edges())


def test_graph_file_comments_and_errors(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("# comment\n3 2 0\n0 1  # edge\n1 2\n")
    g = read_graph(p)
    assert g.n == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("3 5 0\n0 1\n")
    with pytest.raises(GraphError):
        read_graph(bad)


def test_from_spec_errors():
    with pytest.raises(GraphError):
        from_spec("klein:3")
    with pytest.raises(GraphError):
        from_spec("tree:3")


def test_disconnected_rejected():
    with pytest.raises(GraphError):
        Graph(4, [(0, 1), (2, 3)])


def test_geodesic_segment_invariants():
    g = cycle(6)
    seg = GeodesicSegment((0, 1, 2, 3))
    seg.validate(g)
    with pytest.raises(GraphError):
        GeodesicSegment((0, 2)).validate(g)
    with pytest.raises(GraphError):
        GeodesicSegment((0, 1, 2, 3, 4)).validate(g)  # not distance realizing


def test_horizon_points():
    t = regular_tree(3, 4)
    hz = t.horizon()
    assert len(hz) == len(t.sphere(0, 4))
    for h in hz:
        assert h.ray.start == t.base
        assert h.ray.length == h.radius == 4
        h.ray.validate(t)
