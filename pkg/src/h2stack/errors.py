"""Exception hierarchy shared across the package."""

from __future__ import annotations


class H2StackError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(H2StackError):
    """A configuration value is missing, malformed or outside its domain.

    ``field`` carries the dotted path of the offending entry so CLI
    diagnostics can point at the exact key.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


# --- time series ingestion -------------------------------------------------

class MalformedRow(H2StackError):
    """A CSV cell could not be parsed as a number."""


class OutOfRange(H2StackError):
    """A value lies outside its documented domain."""


class LengthMismatch(H2StackError):
    """A series does not match the configured horizon."""


class NegativeRate(H2StackError):
    """A mass-flow rate below zero was requested."""


# --- electrolyzer / degradation --------------------------------------------

class NonConcave(H2StackError):
    """The efficiency curve yields increasing chord slopes and cannot be
    relaxed into a convex LP feasible region."""


# --- LP solver ---------------------------------------------------------------

class NumericalBreakdown(H2StackError):
    """The solver could not certify a consistent basic solution."""


# --- dispatch ----------------------------------------------------------------

class InfeasibleDispatch(H2StackError):
    """The annual dispatch problem admits no feasible operation plan."""


class UnboundedDispatch(H2StackError):
    """The annual dispatch problem is unbounded below.

    ``diagnosis`` distinguishes structural causes, e.g. surplus sale prices
    above purchase prices (``"surplus_arbitrage"``).
    """

    def __init__(self, message: str, diagnosis: str = ""):
        self.diagnosis = diagnosis
        super().__init__(message)


# --- economics / lifecycle / sweep ------------------------------------------

class EmptyLifetime(H2StackError):
    """LCOH was requested over zero operating years."""


class MaxYearsExceeded(H2StackError):
    """The degradation threshold was not reached within the year budget."""


class EmptyCurve(H2StackError):
    """Optimum extraction was requested on a curve without finite points."""
