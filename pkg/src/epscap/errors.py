"""Exception types shared across the package.

Plain domain violations (a negative energy, a probability outside [0, 1])
raise ValueError directly; the classes here mark conditions that are about
the computation setup rather than the mathematics.
"""


class EpscapError(Exception):
    """Base class for package-specific errors."""


class ConfigurationError(EpscapError):
    """A parameter combination the solver refuses to run with.

    Examples: quadrature order too small to resolve the eigenvalue
    transition band, a packing dimension above the supported cap, or a
    Monte Carlo sample budget below the minimum.
    """


class InsufficientSpectrumError(ConfigurationError):
    """The computed spectrum cannot answer the query.

    Raised when a requested accuracy level falls below the smallest
    trustworthy eigenvalue. The fix is to recompute with a larger
    quadrature order or keep more eigenvalues.
    """


class NumericalError(EpscapError):
    """A numerical routine produced non-finite or inconsistent output."""
