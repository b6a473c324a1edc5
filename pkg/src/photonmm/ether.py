"""Ether-drift arithmetic for the single-photon Michelson-Morley variant.

If light propagated in a preferred frame, motion of the laboratory at speed
``v`` would make the round-trip times of the two arms differ by
``dt = L * v^2 / c^3`` (to second order in v/c) whenever one arm points along
the motion.  For light of frequency ``nu = c / lambda`` that time difference
is a fringe shift ``2*pi*dt*nu``.  With the orbital speed of the Earth
(v = 30 km/s) and 900 nm light the shift works out to ``2*pi*L/90`` per meter
of arm, so an interferometer with L = 7.5 m would shift by pi/6 -- the same
phase step that would mimic the local model's coincidence-rate jump.

The drift moves the phase but leaves the perfect anticorrelation of the
quantum outcome model untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError
from .models import (
    SPEED_OF_LIGHT,
    TWO_PI,
    OutcomeDistribution,
    _require_finite,
    quantum_joint,
)


@dataclass(frozen=True)
class EtherConfig:
    """Interferometer and drift parameters for the ether model.

    ``aligned`` states whether one arm points along the direction of motion;
    with ``aligned=False`` the model predicts no shift at all (intermediate
    orientations are not modeled).
    """

    arm_length: float
    ether_velocity: float = 30_000.0
    wavelength: float = 900e-9
    light_speed: float = SPEED_OF_LIGHT
    aligned: bool = True

    def __post_init__(self) -> None:
        for name in ("arm_length", "ether_velocity", "wavelength", "light_speed"):
            _require_finite(getattr(self, name), name)
        if self.arm_length < 0.0:
            raise ConfigurationError(f"arm_length must be nonnegative, got {self.arm_length}")
        if self.wavelength <= 0.0:
            raise ConfigurationError(f"wavelength must be positive, got {self.wavelength}")
        if self.light_speed <= 0.0:
            raise ConfigurationError(f"light_speed must be positive, got {self.light_speed}")
        if self.ether_velocity < 0.0:
            raise ConfigurationError(
                f"ether_velocity must be nonnegative, got {self.ether_velocity}"
            )
        if self.ether_velocity >= self.light_speed:
            raise ConfigurationError(
                f"ether_velocity {self.ether_velocity} must stay below light_speed "
                f"{self.light_speed}"
            )

    @property
    def frequency(self) -> float:
        """Optical frequency nu = c / lambda, Hz."""
        return self.light_speed / self.wavelength


def ether_time_difference(config: EtherConfig) -> float:
    """Arm-transit time difference dt = L * v^2 / c^3, seconds.

    Zero when no arm is aligned with the motion.
    """
    if not config.aligned:
        return 0.0
    return config.arm_length * config.ether_velocity**2 / config.light_speed**3


def ether_phase_shift(config: EtherConfig) -> float:
    """Fringe shift 2*pi*dt*nu = 2*pi*L*v^2/(c^2*lambda), radians."""
    return TWO_PI * ether_time_difference(config) * config.frequency


def required_arm_length(
    target_shift: float,
    ether_velocity: float = 30_000.0,
    light_speed: float = SPEED_OF_LIGHT,
    wavelength: float = 900e-9,
) -> float:
    """Arm length producing a given drift-induced fringe shift.

    Inverts :func:`ether_phase_shift`: L = shift * c^2 * lambda / (2*pi*v^2).
    """
    target_shift = _require_finite(target_shift, "target_shift")
    ether_velocity = _require_finite(ether_velocity, "ether_velocity")
    light_speed = _require_finite(light_speed, "light_speed")
    wavelength = _require_finite(wavelength, "wavelength")
    if target_shift < 0.0:
        raise ValueError(f"target_shift must be nonnegative, got {target_shift}")
    if ether_velocity <= 0.0:
        raise ConfigurationError("ether_velocity must be positive for a finite arm length")
    if light_speed <= 0.0 or wavelength <= 0.0:
        raise ConfigurationError("light_speed and wavelength must be positive")
    if ether_velocity >= light_speed:
        raise ConfigurationError(
            f"ether_velocity {ether_velocity} must stay below light_speed {light_speed}"
        )
    return target_shift * light_speed**2 * wavelength / (TWO_PI * ether_velocity**2)


def ether_joint(phase: float, config: EtherConfig) -> OutcomeDistribution:
    """Joint outcome distribution under the ether model.

    The drift only offsets the interferometer phase; each trial still fires
    exactly one detector, so coincidences and empty gates keep probability 0.
    """
    if not config.aligned:
        return quantum_joint(phase)
    return quantum_joint(phase + ether_phase_shift(config))
