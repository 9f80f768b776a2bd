"""
Register description.

A star register is one central spin C uniformly coupled to N-1 ancillary
spins A that do not interact with each other. Frequencies are angular (rad/s)
unless a name says Hz.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy import constants

from ..utils.constants import (
    DEFAULT_B0,
    DEFAULT_TEMPERATURE,
    GYROMAGNETIC_RATIOS,
    MOLECULE_PRESETS,
)
from ..utils.errors import InvalidSpec

log = logging.getLogger("starspin")


class Backend(str, Enum):
    """State representation."""

    SYMMETRIC = "symmetric"
    DENSE = "dense"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by validators."""

    hermitian: float = 1e-10
    trace: float = 1e-10
    psd_floor: float = -1e-10
    coherence_floor: float = 1e-9
    probability_floor: float = 1e-12
    fisher_floor: float = 1e-20


TOLERANCES = Tolerances()


@dataclass(frozen=True)
class RegisterSpec:
    """Physical description of a star register."""

    n_total: int
    gamma_c: float
    gamma_a: float
    j_ca: float
    b0: float = DEFAULT_B0
    temperature: float = DEFAULT_TEMPERATURE
    t1_c: Optional[float] = None
    t1_a: Optional[float] = None
    label: str = ""

    def validate(self) -> None:
        """Check the invariants, naming the first offending field.

        Raises:
            InvalidSpec: If any invariant is violated
        """
        if isinstance(self.n_total, bool) or not isinstance(self.n_total, (int, np.integer)):
            raise InvalidSpec("n_total", f"must be an integer, got {self.n_total!r}")
        if self.n_total < 2:
            raise InvalidSpec("n_total", f"a star needs at least one ancilla (N >= 2), got {self.n_total}")
        for name in ("gamma_c", "gamma_a", "j_ca"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidSpec(name, "must be finite")
        if self.gamma_c == 0:
            raise InvalidSpec("gamma_c", "central spin must be magnetic (gamma_c != 0)")
        if not (self.b0 > 0 and math.isfinite(self.b0)):
            raise InvalidSpec("b0", f"field must be positive, got {self.b0}")
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise InvalidSpec("temperature", f"must be positive, got {self.temperature}")
        for name in ("t1_c", "t1_a"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidSpec(name, f"relaxation time must be positive, got {value}")

    @classmethod
    def from_preset(cls, name: str, **overrides: Any) -> "RegisterSpec":
        """Build a spec from a molecule preset, explicit fields taking precedence."""
        try:
            preset = MOLECULE_PRESETS[name]
        except KeyError:
            raise InvalidSpec("preset", f"unknown molecule preset '{name}'") from None
        fields: Dict[str, Any] = {
            "n_total": preset["n_total"],
            "gamma_c": GYROMAGNETIC_RATIOS[preset["central"]],
            "gamma_a": GYROMAGNETIC_RATIOS[preset["ancilla"]],
            "j_ca": preset["j_ca"],
            "t1_c": preset["t1_c"],
            "t1_a": preset["t1_a"],
            "label": preset["label"],
        }
        fields.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**fields)

    def replace(self, **changes: Any) -> "RegisterSpec":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class Register:
    """A validated spec together with its derived quantities."""

    spec: RegisterSpec
    epsilon_c: float
    epsilon_a: float
    omega_c: float
    omega_a: float

    @property
    def n_total(self) -> int:
        return int(self.spec.n_total)

    @property
    def n_ancilla(self) -> int:
        return self.n_total - 1

    @property
    def j_ca(self) -> float:
        return self.spec.j_ca

    @property
    def gamma_ratio(self) -> float:
        """gamma_A / gamma_C."""
        return self.spec.gamma_a / self.spec.gamma_c

    def m_h(self, h: int) -> float:
        """Ancilla magnetic quantum number of subspace h (h spins down)."""
        return self.n_ancilla / 2 - h


def build_register(spec: RegisterSpec) -> Register:
    """Validate ``spec`` and derive purity factors and Larmor frequencies.

    Args:
        spec: Register description

    Returns:
        Register with eps = hbar*gamma*B0/(k*T) and omega = -gamma*B0

    Raises:
        InvalidSpec: If the spec violates an invariant
    """
    spec.validate()
    scale = constants.hbar * spec.b0 / (constants.k * spec.temperature)
    register = Register(
        spec=spec,
        epsilon_c=scale * spec.gamma_c,
        epsilon_a=scale * spec.gamma_a,
        omega_c=-spec.gamma_c * spec.b0,
        omega_a=-spec.gamma_a * spec.b0,
    )
    log.debug(
        f"register {spec.label or 'unnamed'}: N={spec.n_total} "
        f"eps_c={register.epsilon_c:.3e} eps_a={register.epsilon_a:.3e}"
    )
    return register


@dataclass(frozen=True)
class RotatingFrameParams:
    """Offsets (Hz), RF amplitudes (rad/s) and RF phases (rad) of a double drive."""

    nu_c: float = 0.0
    nu_a: float = 0.0
    omega_rf_c: float = 0.0
    omega_rf_a: float = 0.0
    phi_c: float = 0.0
    phi_a: float = 0.0

    def __post_init__(self) -> None:
        for name in ("omega_rf_c", "omega_rf_a"):
            if getattr(self, name) < 0:
                raise InvalidSpec(name, "RF amplitude must be non-negative")
        object.__setattr__(self, "phi_c", self.phi_c % (2 * math.pi))
        object.__setattr__(self, "phi_a", self.phi_a % (2 * math.pi))


def as_backend(backend: Union[str, Backend]) -> Backend:
    try:
        return Backend(backend)
    except ValueError:
        raise InvalidSpec("backend", f"unknown backend '{backend}'") from None
