"""Closed-form click statistics for a gated single-photon Michelson interferometer.

A heralded photon enters the interferometer through a beam splitter, travels
the long arm ``l`` and the short arm ``s``, and is detected at one of two
output detectors D(+) and D(-).  The interference phase is
``Phi = 2*pi*(l - s)/lambda`` and the single-detector counting rate is
``P(a) = (1 + a*cos(Phi)) / 2`` for detection label ``a`` in ``{+1, -1}``.

Three candidate models assign probabilities to the joint outcome of one gated
trial (which of the two detectors fire):

* nonlocal quantum -- the detector pair always anticorrelates: exactly one
  detector fires per trial, regardless of how far apart the detectors are.
* local at detection -- detectors close enough to coordinate at light speed
  within the gate window reproduce the quantum statistics; beyond the
  signaling threshold ``d > c * gate_window`` each detector fires
  independently at its single-detector rate, so coincidences and empty gates
  appear.
* ether drift -- motion through a preferred frame delays one arm and shifts
  the phase, but anticorrelation is preserved (see :mod:`photonmm.ether`).

Everything here is a pure function of its arguments; all operations are safe
to call concurrently.  Analytic identities hold to 1e-12 in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigurationError

TWO_PI = math.tau

#: Exact SI speed of light, m/s.  The experiment's design numbers (signaling
#: threshold 0.75 m, arm length 7.5 m) round this to ROUNDED_LIGHT_SPEED.
SPEED_OF_LIGHT = 299_792_458.0
ROUNDED_LIGHT_SPEED = 3.0e8

#: Tolerance for analytic probability identities (normalization, marginals).
PROBABILITY_TOLERANCE = 1e-12


class SeparationRegime(Enum):
    """Whether the two detectors can coordinate at light speed within the gate."""

    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"


class ModelId(Enum):
    """The three candidate outcome models."""

    NONLOCAL_QUANTUM = "quantum"
    LOCAL_DETECTION = "local"
    ETHER = "ether"


def _require_finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")
    return value


def canonical_phase(phase: float) -> float:
    """Reduce a phase to the canonical interval [0, 2*pi).

    Phases are periodic, so canonicalization is optional; it is offered for
    reporting and comparisons, never forced on intermediate results.
    """
    _require_finite(phase, "phase")
    reduced = phase % TWO_PI
    return 0.0 if reduced >= TWO_PI else reduced


@dataclass(frozen=True)
class OpticalGeometry:
    """Interferometer arm lengths and the light used to probe them.

    Lengths are in meters, ``light_speed`` in m/s.  ``long_arm`` and
    ``short_arm`` are the one-way arm lengths; only their difference enters
    the phase.
    """

    long_arm: float
    short_arm: float
    wavelength: float = 900e-9
    light_speed: float = SPEED_OF_LIGHT

    def __post_init__(self) -> None:
        for name in ("long_arm", "short_arm", "wavelength", "light_speed"):
            _require_finite(getattr(self, name), name)
        if self.long_arm < 0.0 or self.short_arm < 0.0:
            raise ConfigurationError("arm lengths must be nonnegative")
        if self.wavelength <= 0.0:
            raise ConfigurationError(f"wavelength must be positive, got {self.wavelength}")
        if self.light_speed <= 0.0:
            raise ConfigurationError(f"light_speed must be positive, got {self.light_speed}")

    @property
    def path_delay(self) -> float:
        """Optical path delay tau = (l - s)/c between the two arms, seconds."""
        return (self.long_arm - self.short_arm) / self.light_speed

    @property
    def angular_frequency(self) -> float:
        """omega = 2*pi*c/lambda, rad/s."""
        return TWO_PI * self.light_speed / self.wavelength


def phase_from_geometry(geometry: OpticalGeometry) -> float:
    """Interference phase Phi = 2*pi*(l - s)/lambda (equivalently omega*tau).

    Returned unreduced; pass through :func:`canonical_phase` if a value in
    [0, 2*pi) is wanted.
    """
    return TWO_PI * (geometry.long_arm - geometry.short_arm) / geometry.wavelength


def _require_label(detector: int) -> int:
    if detector not in (1, -1):
        raise ValueError(f"detection label must be +1 or -1, got {detector!r}")
    return int(detector)


def single_detector_probability(phase: float, detector: int) -> float:
    """Counting rate P(a) = (1 + a*cos(Phi))/2 of one detector, ignoring the other."""
    _require_label(detector)
    _require_finite(phase, "phase")
    return (1.0 + detector * math.cos(phase)) / 2.0


def separation_regime(
    distance: float, gate_window: float, light_speed: float = SPEED_OF_LIGHT
) -> SeparationRegime:
    """Classify a detector separation against the signaling threshold c*gate_window.

    The boundary ``distance == c * gate_window`` counts as timelike: a signal
    leaving one detector at the start of the gate can just reach the other.
    """
    distance = _require_finite(distance, "distance")
    gate_window = _require_finite(gate_window, "gate_window")
    light_speed = _require_finite(light_speed, "light_speed")
    if distance < 0.0:
        raise ValueError(f"distance must be nonnegative, got {distance}")
    if gate_window <= 0.0:
        raise ValueError(f"gate_window must be positive, got {gate_window}")
    if light_speed <= 0.0:
        raise ValueError(f"light_speed must be positive, got {light_speed}")
    if distance <= light_speed * gate_window:
        return SeparationRegime.TIMELIKE
    return SeparationRegime.SPACELIKE


def _clamp_probability(p: float, name: str) -> float:
    if not math.isfinite(p):
        raise ValueError(f"{name} must be finite, got {p!r}")
    if p < -PROBABILITY_TOLERANCE or p > 1.0 + PROBABILITY_TOLERANCE:
        raise ValueError(f"{name} out of [0, 1]: {p!r}")
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact probabilities of the four joint detector outcomes of one trial.

    Component order is fixed throughout the package: only D(+) fires, only
    D(-) fires, both fire (a coincidence), neither fires.  Components must be
    probabilities summing to 1; rounding excursions below 1e-12 are clamped.
    """

    p_plus_only: float
    p_minus_only: float
    p_both: float
    p_none: float

    def __post_init__(self) -> None:
        for name in ("p_plus_only", "p_minus_only", "p_both", "p_none"):
            object.__setattr__(self, name, _clamp_probability(getattr(self, name), name))
        total = self.p_plus_only + self.p_minus_only + self.p_both + self.p_none
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(f"outcome probabilities sum to {total!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_plus_only, self.p_minus_only, self.p_both, self.p_none)

    @property
    def marginal_plus(self) -> float:
        """Probability that D(+) fires, coincidences included."""
        return self.p_plus_only + self.p_both

    @property
    def marginal_minus(self) -> float:
        """Probability that D(-) fires, coincidences included."""
        return self.p_minus_only + self.p_both


def quantum_joint(phase: float) -> OutcomeDistribution:
    """Joint distribution when the outcome is decided jointly at detection.

    Exactly one detector fires: coincidences and empty gates have probability
    exactly 0, independent of the detector separation.
    """
    _require_finite(phase, "phase")
    c = math.cos(phase)
    return OutcomeDistribution(
        p_plus_only=(1.0 + c) / 2.0,
        p_minus_only=(1.0 - c) / 2.0,
        p_both=0.0,
        p_none=0.0,
    )


def local_joint(phase: float, regime: SeparationRegime) -> OutcomeDistribution:
    """Joint distribution when coordination is limited to light-speed signaling.

    Timelike-separated detectors coordinate and reproduce the quantum
    statistics.  Spacelike-separated detectors fire independently, each at its
    single-detector rate (1 +/- cos(Phi))/2, so the joint table is the product
    of two Bernoulli marginals:

        p_plus_only  = (1 + 2*cos(Phi) + cos(Phi)^2) / 4
        p_minus_only = (1 - 2*cos(Phi) + cos(Phi)^2) / 4
        p_both = p_none = (1 - cos(Phi)^2) / 4
    """
    _require_finite(phase, "phase")
    if regime is SeparationRegime.TIMELIKE:
        return quantum_joint(phase)
    if regime is not SeparationRegime.SPACELIKE:
        raise ValueError(f"unknown separation regime: {regime!r}")
    c = math.cos(phase)
    c2 = c * c
    return OutcomeDistribution(
        p_plus_only=(1.0 + 2.0 * c + c2) / 4.0,
        p_minus_only=(1.0 - 2.0 * c + c2) / 4.0,
        p_both=(1.0 - c2) / 4.0,
        p_none=(1.0 - c2) / 4.0,
    )


def coincidence_rate_change(phase: float) -> float:
    """Coincidence-rate jump (1 - cos(Phi)^2)/4 when detectors move from
    timelike to spacelike separation, as the local model predicts.

    The quantum model predicts 0 at every separation, so this difference is
    the decisive observable of the experiment; it peaks at 0.25 for
    Phi = pi/2.
    """
    spacelike = local_joint(phase, SeparationRegime.SPACELIKE)
    timelike = local_joint(phase, SeparationRegime.TIMELIKE)
    return spacelike.p_both - timelike.p_both


def phase_shift_for_rate_change(base_phase: float, detector: int, new_rate: float) -> float:
    """Smallest phase shift moving one detector's counting rate to ``new_rate``.

    Solves (1 + a*cos(Phi + delta))/2 = new_rate for the smallest-magnitude
    delta; exact magnitude ties are broken toward positive delta.  A solution
    always exists for new_rate in [0, 1].
    """
    _require_label(detector)
    _require_finite(base_phase, "base_phase")
    new_rate = _require_finite(new_rate, "new_rate")
    if not 0.0 <= new_rate <= 1.0:
        raise ValueError(f"new_rate must be a probability, got {new_rate}")
    target = detector * (2.0 * new_rate - 1.0)
    target = min(1.0, max(-1.0, target))
    half_angle = math.acos(target)
    candidates = (
        math.remainder(half_angle - base_phase, TWO_PI),
        math.remainder(-half_angle - base_phase, TWO_PI),
    )
    return min(candidates, key=lambda delta: (abs(delta), 0 if delta > 0.0 else 1))
