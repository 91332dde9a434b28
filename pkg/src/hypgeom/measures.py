"""Finitely supported measures with exact total-variation arithmetic.

Weights may be ints, ``fractions.Fraction`` (exact counting-measure
constructions) or floats (exponential densities).  The total-variation norm
used throughout is the full signed-measure norm, so ||delta_a - delta_b|| = 2.
"""

from fractions import Fraction

from .errors import GraphError


class SignedMeasure:
    """Finitely supported signed measure: a point -> weight mapping."""

    __slots__ = ("weights",)

    def __init__(self, weights: dict):
        self.weights = {p: w for p, w in weights.items() if w != 0}

    def __getitem__(self, p):
        return self.weights.get(p, 0)

    def __iter__(self):
        return iter(self.weights.items())

    def __len__(self):
        return len(self.weights)

    def __eq__(self, other):
        return isinstance(other, SignedMeasure) and self.weights == other.weights

    def support(self):
        return set(self.weights)

    def total(self):
        return sum(self.weights.values())

    def tv_norm(self):
        return sum(abs(w) for w in self.weights.values())

    def scaled(self, c):
        cls = FiniteMeasure if isinstance(self, FiniteMeasure) and c >= 0 else SignedMeasure
        return cls({p: w * c for p, w in self.weights.items()})

    def __add__(self, other):
        out = dict(self.weights)
        for p, w in other.weights.items():
            out[p] = out.get(p, 0) + w
        return SignedMeasure(out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.weights)} atoms, total={self.total()})"


class FiniteMeasure(SignedMeasure):
    """Nonnegative finitely supported measure."""

    def __init__(self, weights: dict):
        if any(w < 0 for w in weights.values()):
            raise GraphError("finite measure weights must be nonnegative")
        super().__init__(weights)

    def is_probability(self, tol=0) -> bool:
        return abs(self.total() - 1) <= tol

    def max_atom(self):
        return max(self.weights.values(), default=0)

    def normalized(self) -> "FiniteMeasure":
        t = self.total()
        if t == 0:
            raise GraphError("cannot normalize the zero measure")
        if isinstance(t, Fraction) or isinstance(t, int):
            return FiniteMeasure({p: Fraction(w) / t for p, w in self.weights.items()})
        return FiniteMeasure({p: w / t for p, w in self.weights.items()})

    def integrate(self, f) -> float:
        """Integral of a point -> value function table (dict or callable)."""
        get = f.get if hasattr(f, "get") else f
        return sum(w * get(p) for p, w in self.weights.items())


def dirac(p) -> FiniteMeasure:
    return FiniteMeasure({p: Fraction(1)})


def counting_restriction(points) -> FiniteMeasure:
    """Normalized restriction of the counting measure to a nonempty set."""
    pts = list(points)
    if not pts:
        raise GraphError("cannot restrict to an empty set")
    w = Fraction(1, len(pts))
    return FiniteMeasure({p: w for p in pts})


def tv_distance(m1: SignedMeasure, m2: SignedMeasure):
    """Total-variation norm of m1 - m2, exact when both are rational."""
    keys = set(m1.weights) | set(m2.weights)
    return sum(abs(m1[p] - m2[p]) for p in keys)


def hahn_split(m: SignedMeasure) -> tuple[FiniteMeasure, FiniteMeasure]:
    """Positive and negative parts; disjoint supports, recombine exactly."""
    pos = {p: w for p, w in m.weights.items() if w > 0}
    neg = {p: -w for p, w in m.weights.items() if w < 0}
    return FiniteMeasure(pos), FiniteMeasure(neg)
