"""Exception hierarchy and the CLI exit-code contract."""


class OrbitautError(Exception):
    """Base class for all toolkit errors."""


class BackendMismatchError(OrbitautError):
    """Two values from different backends were combined."""


class ValidationError(OrbitautError):
    """A structural invariant is violated (bad morphism, non-fixed initial
    state, partial transition table, invariance failure...).

    Carries a human-readable witness of the first violation found.
    """


class SpecParseError(OrbitautError):
    """The automaton description file does not parse."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceededError(OrbitautError):
    """A configured size cap was hit.  Never a silent truncation."""


class PoolMarginError(OrbitautError):
    """An atom-pool computation needs at least one fresh atom but the
    supports in play saturate the pool."""


class PoolStabilityError(OrbitautError):
    """A pool-mediated result changed when the pool was enlarged by one
    atom.  The result cannot be trusted and is not returned."""


# Exit codes (stable CLI contract)
EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_RESOURCE = 4
