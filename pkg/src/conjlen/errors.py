"""Exception types shared across the package."""


class ConjlenError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ConjlenError, ValueError):
    """Invalid group configuration data."""


class WordParseError(ConjlenError, ValueError):
    """Malformed word string; carries the offending token position."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class DomainError(ConjlenError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularMatrix(ConjlenError, ArithmeticError):
    """A matrix inverse or full-rank lattice basis was required but det = 0."""


class LatticeNotInvariant(ConjlenError, ValueError):
    """The given endomorphism does not map the lattice into itself."""


class NonInvertibleAction(ConjlenError, ValueError):
    """The induced action on a finite quotient is not a bijection."""


class CapExceeded(ConjlenError, RuntimeError):
    """An enumeration grew past its configured cap; partial results discarded."""


class BeyondRadius(ConjlenError, LookupError):
    """Element lies outside the enumerated Cayley ball."""


class HypothesisViolated(ConjlenError, RuntimeError):
    """A solver was asked for a certified answer without its spectral hypothesis."""


class SearchExhausted(ConjlenError, RuntimeError):
    """A bounded search ended without a witness and without a certificate."""


class EmptyTable(ConjlenError, ValueError):
    """A fit was requested on a table with no usable rows."""
