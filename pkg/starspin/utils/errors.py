"""
Exception hierarchy for starspin.

Configuration problems derive from ``ConfigError`` (a ``ValueError``) and map
to exit code 1 in the CLI; failures raised while simulating derive from
``SimulationError`` (a ``RuntimeError``) and map to exit code 2.
"""

from typing import Optional


class StarSpinError(Exception):
    """Base class for every error raised by starspin."""


class ConfigError(StarSpinError, ValueError):
    """Invalid experiment description."""


class ParseError(ConfigError):
    """Malformed configuration text."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ConfigError):
    """Configuration key that no section accepts."""

    def __init__(self, key: str, section: str, suggestion: Optional[str] = None):
        self.key = key
        self.section = section
        self.suggestion = suggestion
        message = f"Unknown key '{key}' in [{section}]"
        if suggestion:
            message += f" (did you mean '{suggestion}'?)"
        super().__init__(message)


class MissingRequired(ConfigError):
    """Required configuration key absent."""


class InvalidSpec(ConfigError):
    """Register description violating an invariant."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidParameter(ConfigError):
    """Protocol parameter outside its allowed range."""


class ColumnMismatch(ConfigError):
    """Result columns do not fit the requested plot kind."""


class SimulationError(StarSpinError, RuntimeError):
    """Failure while simulating."""


class BackendLimit(SimulationError):
    """Dense backend requested beyond its size cap."""


class ShapeMismatch(SimulationError):
    """State and operator built for different registers or backends."""


class SymmetryViolation(SimulationError):
    """Permutation-breaking operation requested on the symmetric backend."""


class InvalidState(SimulationError):
    """Density matrix failing trace, Hermiticity or positivity checks."""


class NonHermitianObservable(SimulationError):
    """Expectation value requested for a non-Hermitian operator."""


class NoSuchOrder(SimulationError):
    """Coherence order not reachable for the register size."""


class IndexOutOfRange(SimulationError, IndexError):
    """Subspace index outside 0..N-1."""


class UnnormalizedDistribution(SimulationError):
    """Probability distribution that does not sum to one."""


class InsufficientFilters(SimulationError):
    """Too few distinct CPMG filter frequencies for spectrum extraction."""


class MissingRelaxationTimes(SimulationError):
    """HBAC reset model needs t1_c and t1_a."""


class DegenerateObservable(SimulationError):
    """Eigendecomposition of a measurement operator failed tolerance."""


class AllZeroProbabilities(SimulationError):
    """Every outcome probability fell below the floor."""


class NonpositiveFisher(SimulationError):
    """Fisher information that is zero or negative where a bound needs it."""


class SeriesTooShort(SimulationError):
    """Time series too short for spectral analysis."""
