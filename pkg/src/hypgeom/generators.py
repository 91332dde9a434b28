"""Graph generators: regular trees, free-product Cayley balls, cycles, grids,
and the plain-text file format.

All generators number vertices in BFS order from the base, so outputs are
reproducible and automorphisms of the symmetric families can be written down
arithmetically.
"""

import numpy as np

from .errors import GraphError
from .graph import Graph


def regular_tree(q: int, radius: int) -> Graph:
    """Ball of radius ``radius`` in the q-regular tree (root degree q, every
    other internal vertex degree q).  regular_tree(2, R) is the Z-line."""
    if q < 1 or radius < 0:
        raise GraphError("q and radius must be positive")
    layer_sizes = [1]
    for r in range(1, radius + 1):
        layer_sizes.append(q if r == 1 else layer_sizes[-1] * (q - 1))
    offsets = np.concatenate([[0], np.cumsum(layer_sizes)])
    n = int(offsets[-1])
    parents = np.empty(n, dtype=np.int64)
    parents[0] = -1
    for r in range(1, radius + 1):
        idx = np.arange(layer_sizes[r])
        c = q if r == 1 else q - 1
        parents[offsets[r] + idx] = offsets[r - 1] + idx // c
    edges = np.stack([np.arange(1, n), parents[1:]], axis=1)
    return Graph(n, edges, base=0)


def regular_tree_branch_swap(q: int, radius: int, b1: int, b2: int) -> np.ndarray:
    """Automorphism of regular_tree(q, radius) swapping root branches b1, b2,
    as a vertex permutation (index arithmetic on the BFS numbering)."""
    if not (0 <= b1 < q and 0 <= b2 < q):
        raise GraphError("branch index out of range")
    layer_sizes = [1]
    for r in range(1, radius + 1):
        layer_sizes.append(q if r == 1 else layer_sizes[-1] * (q - 1))
    offsets = np.concatenate([[0], np.cumsum(layer_sizes)])
    perm = np.arange(int(offsets[-1]), dtype=np.int64)
    for r in range(1, radius + 1):
        block = layer_sizes[r] // q  # vertices per root branch at this layer
        idx = np.arange(layer_sizes[r])
        branch = idx // block
        swapped = branch.copy()
        swapped[branch == b1] = b2
        swapped[branch == b2] = b1
        perm[offsets[r] + idx] = offsets[r] + swapped * block + (idx % block)
    return perm


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph(n, edges, base=0)


def grid(w: int, h: int) -> Graph:
    """w x h grid, row-major numbering, base at the central cell."""
    if w < 1 or h < 1:
        raise GraphError("grid dims must be positive")
    edges = []
    for x in range(w):
        for y in range(h):
            v = x * h + y
            if x + 1 < w:
                edges.append((v, v + h))
            if y + 1 < h:
                edges.append((v, v + 1))
    base = ((w - 1) // 2) * h + (h - 1) // 2
    return Graph(w * h, edges, base=base)


# -- free products of cyclic groups -----------------------------------------


def _gen_list(orders) -> list[tuple[int, int]]:
    gens = []
    for fi, k in enumerate(orders):
        if k == 1 or k < 0:
            raise GraphError("factor orders must be 0 (infinite) or >= 2")
        gens.append((fi, +1))
        if k != 2:
            gens.append((fi, -1))
    return gens


def _word_mul(word: tuple, fi: int, e: int, orders) -> tuple:
    """Right-multiply a normal-form word by a generator of factor ``fi``."""
    k = orders[fi]
    if word and word[-1][0] == fi:
        ne = word[-1][1] + e
        if k:
            ne %= k
        if ne == 0:
            return word[:-1]
        return word[:-1] + ((fi, ne),)
    return word + (((fi, e if not k else e % k)),)


def free_product_cyclic(orders, radius: int) -> Graph:
    """Cayley ball of Z_{k1} * Z_{k2} * ... (order 0 = infinite cyclic) with
    the standard generators, radius ``radius``, base at the identity.

    Orders all in {0, 2} yield trees and use a direct array construction;
    general orders go through normal-form word BFS.  Both paths produce the
    same BFS numbering.
    """
    orders = tuple(int(k) for k in orders)
    if not orders or radius < 0:
        raise GraphError("need at least one factor and radius >= 0")
    if all(k in (0, 2) for k in orders):
        return _free_product_tree(orders, radius)
    gens = _gen_list(orders)
    ids: dict[tuple, int] = {(): 0}
    frontier = [()]
    words = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for fi, e in gens:
                nw = _word_mul(w, fi, e, orders)
                if nw not in ids:
                    ids[nw] = len(ids)
                    words.append(nw)
                    nxt.append(nw)
        frontier = nxt
    edges = set()
    for w, i in ids.items():
        for fi, e in gens:
            nw = _word_mul(w, fi, e, orders)
            j = ids.get(nw)
            if j is not None and i != j:
                edges.add((min(i, j), max(i, j)))
    return Graph(len(ids), sorted(edges), base=0)


def _free_product_tree(orders, radius: int) -> Graph:
    """Array construction for tree-type free products (orders in {0, 2})."""
    gens = _gen_list(orders)
    g = len(gens)
    if g == 1:
        # single Z_2 factor: a single edge (radius >= 1) or a point
        return Graph(2, [(0, 1)]) if radius >= 1 else Graph(1, [])
    # forbidden successor of generator index gi (the inverse letter)
    inverse = np.empty(g, dtype=np.int64)
    for gi, (fi, e) in enumerate(gens):
        if orders[fi] == 2:
            inverse[gi] = gi
        else:
            inverse[gi] = gens.index((fi, -e))
    # allowed[gi] = sorted generator indices != inverse[gi]; all rows have
    # g-1 entries, so successor layers vectorize as a matrix gather
    allowed = np.stack([np.array([h for h in range(g) if h != inverse[gi]])
                        for gi in range(g)]).astype(np.int64)
    parents_chunks = [np.array([-1], dtype=np.int64)]
    offsets = [0, 1]
    last_gens_prev = np.zeros(0, dtype=np.int64)
    for r in range(1, radius + 1):
        if r == 1:
            lg = np.arange(g, dtype=np.int64)
            par = np.zeros(g, dtype=np.int64)
        else:
            prev = last_gens_prev
            lg = allowed[prev].ravel()
            par = np.repeat(np.arange(prev.size, dtype=np.int64) + offsets[r - 1], g - 1)
        parents_chunks.append(par)
        offsets.append(offsets[-1] + lg.size)
        last_gens_prev = lg
    n = offsets[-1]
    parents = np.concatenate(parents_chunks)
    edges = np.stack([np.arange(1, n), parents[1:]], axis=1)
    return Graph(n, edges, base=0)


def free_group(rank: int, radius: int) -> Graph:
    """Cayley ball of the free group of the given rank."""
    if rank < 1:
        raise GraphError("rank must be >= 1")
    return free_product_cyclic([0] * rank, radius)


# -- file format -------------------------------------------------------------


def read_graph(path) -> Graph:
    """Parse the text format: line 1 ``n m base``, then m lines ``u v``;
    ``#`` starts a comment."""
    with open(path) as f:
        lines = [ln.split("#", 1)[0].strip() for ln in f]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph file")
    head = lines[0].split()
    if len(head) != 3:
        raise GraphError("header must be 'n m base'")
    try:
        n, m, base = (int(t) for t in head)
    except ValueError as exc:
        raise GraphError(f"bad header: {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise GraphError(f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges, base=base)


def write_graph(g: Graph, path) -> None:
    e = g.edges()
    with open(path, "w") as f:
        f.write(f"{g.n} {e.shape[0]} {g.base}\n")
        for u, v in e:
            f.write(f"{u} {v}\n")


_KIND_HELP = ("tree:q:R | cycle:n | grid:w:h | freegroup:rank:R | "
              "free:o1,o2,...:R | file:PATH")


def from_spec(spec: str) -> Graph:
    """Build a graph from a CLI spec string (see _KIND_HELP)."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "tree":
            q, r = rest.split(":")
            return regular_tree(int(q), int(r))
        if kind == "cycle":
            return cycle(int(rest))
        if kind == "grid":
            w, h = rest.split(":")
            return grid(int(w), int(h))
        if kind == "freegroup":
            k, r = rest.split(":")
            return free_group(int(k), int(r))
        if kind == "free":
            orders, r = rest.rsplit(":", 1)
            return free_product_cyclic([int(t) for t in orders.split(",")], int(r))
        if kind == "file":
            return read_graph(rest)
    except GraphError:
        raise
    except Exception as exc:
        raise GraphError(f"bad graph spec {spec!r} (want {_KIND_HELP})") from exc
    raise GraphError(f"unknown graph kind {kind!r} (want {_KIND_HELP})")
