"""Exception types shared across the package."""


class Voronoi3Error(Exception):
    """Base class for all errors raised by this package."""


class NotInvertible(Voronoi3Error):
    """Modular inverse requested for a residue that is not a unit."""

    def __init__(self, a: int, k: int):
        super().__init__(f"{a} is not invertible modulo {k} (gcd != 1)")
        self.a = a
        self.k = k


class LimitExceeded(Voronoi3Error):
    """A coefficient outside the table's covered index range was requested."""


class MissingPrimeSeed(Voronoi3Error):
    """A Satake/eigenvalue seed is unavailable for a prime the build needs."""

    def __init__(self, p: int):
        super().__init__(f"no seed available for prime {p}")
        self.p = p


class MalformedSeedFile(Voronoi3Error):
    """A seed file failed to parse or carried unexpected fields."""


class PoleAt(Voronoi3Error):
    """Gamma evaluated at (or too close to) a nonpositive integer."""

    def __init__(self, s: complex):
        super().__init__(f"gamma pole at s = {s}")
        self.s = s


class UnsupportedOrder(Voronoi3Error):
    """Bessel order is neither an integer nor a half-integer."""


class BudgetExceeded(Voronoi3Error):
    """Quadrature could not reach the requested tolerance within max_panels."""


class NoAdmissibleNk(Voronoi3Error):
    """No integer in [N, 2N] passed every divisor margin.

    Callers are expected to retry with the margin constant halved.
    """


class HypothesisViolated(Voronoi3Error):
    """A bound's stated range hypothesis does not hold for the given row."""


class UsageError(Voronoi3Error):
    """Bad command-line input; maps to exit status 1."""
