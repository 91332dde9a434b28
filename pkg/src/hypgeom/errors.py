"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph input or invalid vertex id."""


class AtomTooHeavy(ValueError):
    """A boundary measure has an atom of weight >= 1/2 where escape to
    infinity is required."""


class HorizonTooShallow(ValueError):
    """The truncation radius cannot support the requested ray parameter."""


class DivergentNormalizer(ValueError):
    """Exponent at or below the growth rate; the defining series has no
    meaningful finite-truncation normalization."""


class TruncationTooShallow(ValueError):
    """Requested truncation leaves an estimated tail mass above tolerance."""
