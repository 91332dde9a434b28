"""Command-line front end: generators, experiments, file I/O, CSV emission.

Every output starts with a header recording the version, the exact command
line, and the seed, so reruns are byte-identical.  Precondition violations
exit 2 after printing a machine-readable ``ERR <code> <detail>`` line; bad
arguments or unparsable inputs exit 1.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .amenability import cesaro_geodesic, lambda_decay_experiment, pre_patterson
from .approx import build_partition, extract_atoms, project_pi_n
from .barycenter import classify_measure, quasi_barycenter
from .cocycles import boundary_measure, busemann_oscillation, make_context
from .errors import (AtomTooHeavy, DivergentNormalizer, GraphError,
                     HorizonTooShallow, TruncationTooShallow)
from .generators import from_spec, write_graph
from .graph import delta_four_point, delta_rips
from .growth import growth_profile, tempered_check
from .hyperbolization import (EuclideanBase, HSpace, cat_minus1_check,
                              random_metric_tree)
from .metrics import build_quasimetric_table


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; spec wants 1
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class ExperimentConfig:
    command: str
    graph_spec: str | None
    horizon_radius: int | None
    estimator: str
    a_override: float | None
    seed: int
    out_path: str | None
    threads: int


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


class _Out:
    def __init__(self, cfg: ExperimentConfig, argv):
        self.lines = [f"# hypgeom {__version__}",
                      f"# cmd: {' '.join(argv)}",
                      f"# seed: {cfg.seed}",
                      f"# threads: {cfg.threads}"]

    def row(self, *cells):
        self.lines.append(",".join(_fmt(c) for c in cells))

    def write(self, path):
        text = "\n".join(self.lines) + "\n"
        if path:
            with open(path, "w") as f:
                f.write(text)
        else:
            sys.stdout.write(text)


def _parse_atoms(g, spec: str, radius=None):
    pairs = {}
    for item in spec.split(","):
        vid, _, w = item.partition(":")
        gamma = g.horizon_point(int(vid), radius)
        pairs[gamma] = pairs.get(gamma, Fraction(0)) + Fraction(w)
    return boundary_measure(pairs)


def _vertex_arg(g, token: str) -> int:
    return g.base if token == "base" else int(token)


def _base_space(spec: str, seed: int):
    kind, _, rest = spec.partition(":")
    if kind == "euclid":
        return HSpace(EuclideanBase(int(rest)))
    if kind == "tree":
        parts = rest.split(":")
        nodes = int(parts[0])
        tree_seed = int(parts[1]) if len(parts) > 1 else seed
        return HSpace(random_metric_tree(nodes, tree_seed))
    raise GraphError(f"unknown base spec {spec!r} (want euclid:N | tree:NODES[:SEED])")


def _sample_hpoints(space, rng, count, spread=3.0):
    pts = []
    for _ in range(count):
        t = float(rng.uniform(-spread, spread))
        if isinstance(space.base, EuclideanBase):
            y = rng.uniform(-spread, spread, size=space.base.dim)
        else:
            y = int(rng.integers(0, space.base.n))
        pts.append((t, y))
    return pts


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _Parser(prog="hypgeom")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--gen", help="graph spec: tree:q:R | cycle:n | grid:w:h | "
                                     "freegroup:rank:R | free:o1,o2,..:R | file:PATH")
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--a", type=float, default=None, help="visual exponent override")
        p.add_argument("--estimator", default="four_point", choices=["four_point", "rips"])
        p.add_argument("--horizon-radius", type=int, default=None)
        p.add_argument("--threads", type=int,
                       default=int(os.environ.get("HYPGEOM_THREADS", "1")))
        return p

    add("gen")
    p = add("delta"); p.add_argument("--cap", type=int, default=64)
    p = add("metrics"); p.add_argument("--basepoint", default="base")
    p = add("cocycle-check"); p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-depth", type=int, default=None)
    p = add("barycenter"); p.add_argument("--atoms", required=True)
    p.add_argument("--x", default="base"); p.add_argument("--r", type=float, default=None)
    p = add("growth"); p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--packing", default="1,2,3")
    p = add("lambda-decay"); p.add_argument("--x", default="base")
    p.add_argument("--xp", required=True); p.add_argument("--gamma", required=True)
    p.add_argument("--n", required=True); p.add_argument("--r", type=int, default=0)
    p = add("patterson"); p.add_argument("--x", default="base")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--trunc", type=float, default=None)
    p = add("pi-project"); p.add_argument("--n", type=int, required=True)
    p.add_argument("--atoms", required=True); p.add_argument("--dump-phi", action="store_true")
    p = add("atoms"); p.add_argument("--atoms", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p = add("hyperbolize"); p.add_argument("--base", required=True)
    p.add_argument("--pairs", type=int, default=20)
    p = add("cat-check"); p.add_argument("--base", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--pairs-per-triangle", type=int, default=4)

    args = parser.parse_args(argv)
    cfg = ExperimentConfig(command=args.command, graph_spec=getattr(args, "gen", None),
                           horizon_radius=getattr(args, "horizon_radius", None),
                           estimator=getattr(args, "estimator", "four_point"),
                           a_override=getattr(args, "a", None),
                           seed=args.seed, out_path=args.out, threads=args.threads)
    out = _Out(cfg, ["hypgeom"] + argv)

    try:
        graph = from_spec(cfg.graph_spec) if cfg.graph_spec else None
    except (GraphError, OSError) as exc:
        sys.stderr.write(f"hypgeom: error: {exc}\n")
        return 1

    try:
        code = _dispatch(args, cfg, graph, out)
    except (AtomTooHeavy, HorizonTooShallow, DivergentNormalizer,
            TruncationTooShallow, GraphError) as exc:
        print(f"ERR {type(exc).__name__} {exc}")
        return 2
    out.write(cfg.out_path)
    return code


def _context(graph, cfg):
    radius = cfg.horizon_radius
    horizon = graph.horizon(radius) if graph.n <= 200_000 or radius else None
    return make_context(graph, horizon=horizon, estimator=cfg.estimator, a=cfg.a_override)


def _dispatch(args, cfg, graph, out) -> int:
    cmd = args.command
    rng = np.random.default_rng(cfg.seed)

    if cmd == "gen":
        if graph is None:
            raise GraphError("gen needs --gen")
        if cfg.out_path:
            write_graph(graph, cfg.out_path)
            out.lines = []  # graph file already written; no CSV
            print(f"wrote {graph.n} vertices, {graph.edge_count} edges")
        else:
            out.row("n", graph.n); out.row("m", graph.edge_count)
        return 0

    if cmd == "delta":
        out.row("delta_4pt", delta_four_point(graph))
        out.row("delta_rips", delta_rips(graph, args.cap))
        return 0

    if cmd == "metrics":
        x = _vertex_arg(graph, args.basepoint)
        table = build_quasimetric_table(graph, x, a=cfg.a_override,
                                        horizon=graph.horizon(cfg.horizon_radius),
                                        estimator=cfg.estimator)
        out.row("p", "q", "varrho", "rho")
        for pq in table.to_csv_rows():
            p, q, vr, rh = pq
            lbl = lambda z: z if isinstance(z, int) else f"h{z.endpoint}"
            out.row(lbl(p), lbl(q), vr, rh)
        return 0

    if cmd == "cocycle-check":
        ctx = _context(graph, cfg)
        depth = args.max_depth
        if depth is None:
            depth = max(1, graph.eccentricity_base // 2)
        pool = np.flatnonzero(graph.dist_row(graph.base) <= depth)
        out.row("gamma", "x", "y", "value", "oscillation", "lip_ok", "sym_ok", "tri_ok")
        for _ in range(args.samples):
            gam = ctx.horizon[int(rng.integers(0, len(ctx.horizon)))]
            x, y, z = (int(pool[int(rng.integers(0, pool.size))]) for _ in range(3))
            bxy, mn = busemann_oscillation(ctx, gam, x, y)
            byx, _ = busemann_oscillation(ctx, gam, y, x)
            byz, _ = busemann_oscillation(ctx, gam, y, z)
            bzx, _ = busemann_oscillation(ctx, gam, z, x)
            lip = abs(bxy) <= graph.dist(x, y) + 1e-9
            sym = -1e-9 <= bxy + byx <= ctx.c2 + 1e-9
            tri = -1e-9 <= bxy + byz + bzx <= 2 * ctx.c2 + 1e-9
            out.row(gam.endpoint, x, y, bxy, bxy - mn, int(lip), int(sym), int(tri))
        return 0

    if cmd == "barycenter":
        ctx = _context(graph, cfg)
        lam = _parse_atoms(graph, args.atoms, cfg.horizon_radius)
        cls = classify_measure(ctx, lam)
        if cls.kind == "bulky":
            ids = sorted(cls.points)
        else:
            ids = sorted(p.endpoint for p in cls.points)
        if args.r is not None:
            res = quasi_barycenter(ctx, lam, _vertex_arg(graph, args.x), args.r)
            ids = sorted(res.set)
            out.lines.append(f'{{"kind": "{cls.kind}", "set": {ids}}}')
        else:
            out.lines.append(f'{{"kind": "{cls.kind}", "set": {ids}}}')
        return 0

    if cmd == "growth":
        rhos = tuple(int(t) for t in args.packing.split(",") if t)
        prof = growth_profile(graph, args.rmax, packing_rhos=rhos)
        rep = tempered_check(graph, 1, max(1, min(args.rmax, graph.eccentricity_base // 2)))
        out.row("growth_rate", prof.growth_rate)
        out.row("critical_exponent", prof.critical_exponent_estimate)
        hdr = ["r", "ball_min", "ball_max", "sphere"] + [f"packing_rho{r}" for r in rhos]
        out.row(*hdr)
        for r in range(args.rmax + 1):
            bmin = rep.ball_min.get(r, "")
            bmax = rep.ball_max.get(r, "")
            cells = [r, bmin, bmax, prof.sphere_sizes[r]]
            cells += [prof.packing_numbers[(r, rho)] for rho in rhos]
            out.row(*cells)
        return 0

    if cmd == "lambda-decay":
        ctx = _context(graph, cfg)
        gamma = graph.horizon_point(int(args.gamma), cfg.horizon_radius)
        x = _vertex_arg(graph, args.x)
        xp = _vertex_arg(graph, args.xp)
        ns = [int(t) for t in args.n.split(",")]
        rows = lambda_decay_experiment(ctx, x, xp, gamma, ns, r=args.r)
        out.row("n", "tv", "bound")
        for r_ in rows:
            out.row(r_.n, r_.tv, r_.bound)
        return 0

    if cmd == "patterson":
        x = _vertex_arg(graph, args.x)
        nu = pre_patterson(graph, x, args.delta, truncation=args.trunc)
        out.row("normalizer", nu.normalizer)
        out.row("point", "weight")
        for v in np.flatnonzero(nu.vector):
            out.row(int(v), float(nu.vector[v]))
        return 0

    if cmd == "pi-project":
        ctx = _context(graph, cfg)
        theta = _parse_atoms(graph, args.atoms, cfg.horizon_radius)
        part = build_partition(ctx, graph.base, args.n)
        if args.dump_phi:
            out.row("s", "z", "phi")
            for i, s in enumerate(part.sphere):
                for j, z in enumerate(part.points):
                    v = float(part.functions[i, j])
                    if v > 0:
                        lbl = z if isinstance(z, int) else f"h{z.endpoint}"
                        out.row(s, lbl, v)
        else:
            proj = project_pi_n(part, theta)
            out.row("s", "weight")
            for s, w in sorted(proj, key=lambda t: t[0]):
                out.row(s, float(w))
        return 0

    if cmd == "atoms":
        ctx = _context(graph, cfg)
        theta = _parse_atoms(graph, args.atoms, cfg.horizon_radius)
        rep = extract_atoms(ctx, theta, args.nmax)
        out.row("W", rep.weight)
        out.row("support", *sorted(h.endpoint for h in rep.atomic_support))
        out.row("n", "W_n")
        for i, w in enumerate(rep.series, start=1):
            out.row(i, w)
        return 0

    if cmd == "hyperbolize":
        space = _base_space(args.base, cfg.seed)
        pts = _sample_hpoints(space, rng, args.pairs * 2)
        out.row("t1", "y1", "t2", "y2", "dist")
        for p, q in zip(pts[::2], pts[1::2]):
            out.row(p[0], str(p[1]).replace(",", ";"), q[0],
                    str(q[1]).replace(",", ";"), space.distance(p, q))
        return 0

    if cmd == "cat-check":
        space = _base_space(args.base, cfg.seed)
        out.row("triangle", "max_violation")
        passed = 0
        for i in range(args.samples):
            tri = _sample_hpoints(space, rng, 3)
            rep = cat_minus1_check(space, tri, samples=args.pairs_per_triangle,
                                   seed=cfg.seed + i)
            passed += rep.passed
            out.row(i, rep.max_violation)
        out.lines.insert(4, f"# PASS {passed}/{args.samples}")
        print(f"PASS {passed}/{args.samples}")
        return 0 if passed == args.samples else 2

    raise GraphError(f"unknown command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
