"""Seeded Monte Carlo sampling of gated detection trials.

One trial consumes exactly one uniform variate, mapped to a joint outcome by
cumulative-probability inversion in the fixed order (plus_only, minus_only,
both, none).  Streams come from the counter-based Philox generator, so a run
is a pure function of (config, seed, shards): re-running reproduces the
ledger bit for bit, and shard substreams are derived from the seed through
numpy's documented SeedSequence spawn keys.

Per-trial timing inside the gate window is not simulated; the window enters
only through the timelike/spacelike classification of the detector distance,
which is all the candidate models depend on.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import ConfigurationError
from .ether import EtherConfig, ether_joint
from .models import (
    SPEED_OF_LIGHT,
    ModelId,
    OpticalGeometry,
    OutcomeDistribution,
    local_joint,
    phase_from_geometry,
    quantum_joint,
    separation_regime,
)

RNG_ALGORITHM = "philox4x64"
LEDGER_FORMAT_VERSION = 1

MAX_SEED = 2**64 - 1


class JointOutcome(Enum):
    """Which detectors fired in one gated trial."""

    PLUS_ONLY = "plus_only"
    MINUS_ONLY = "minus_only"
    BOTH = "both"
    NONE = "none"


#: Fixed sampling and serialization order of the four outcomes.
OUTCOME_ORDER: tuple[JointOutcome, ...] = (
    JointOutcome.PLUS_ONLY,
    JointOutcome.MINUS_ONLY,
    JointOutcome.BOTH,
    JointOutcome.NONE,
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full physical and run configuration of one simulated experiment.

    The phase may be given directly or through an :class:`OpticalGeometry`;
    when both are present the explicit phase wins (a phase plate can set the
    working point independently of the arm lengths).  ``ether`` must be given
    exactly when ``model`` is :attr:`ModelId.ETHER`.
    """

    model: ModelId
    phase: float | None = None
    geometry: OpticalGeometry | None = None
    detector_distance: float = 1.0
    gate_window: float = 2.5e-9
    light_speed: float = SPEED_OF_LIGHT
    ether: EtherConfig | None = None
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.model, ModelId):
            raise ConfigurationError(f"model must be a ModelId, got {self.model!r}")
        if self.phase is None and self.geometry is None:
            raise ConfigurationError("either phase or geometry must be given")
        if self.phase is not None and not math.isfinite(self.phase):
            raise ConfigurationError(f"phase must be finite, got {self.phase!r}")
        if self.detector_distance < 0.0:
            raise ConfigurationError(
                f"detector_distance must be nonnegative, got {self.detector_distance}"
            )
        if not self.gate_window > 0.0:
            raise ConfigurationError(f"gate_window must be positive, got {self.gate_window}")
        if self.light_speed <= 0.0:
            raise ConfigurationError(f"light_speed must be positive, got {self.light_speed}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MAX_SEED:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if (self.model is ModelId.ETHER) != (self.ether is not None):
            raise ConfigurationError("ether parameters must be given exactly for the ether model")

    @property
    def effective_phase(self) -> float:
        """The phase actually simulated: explicit phase, else derived from geometry."""
        if self.phase is not None:
            return self.phase
        assert self.geometry is not None
        return phase_from_geometry(self.geometry)

    @property
    def regime(self):
        return separation_regime(self.detector_distance, self.gate_window, self.light_speed)

    def canonical_text(self) -> str:
        """Canonical flat description of the config; input to the fingerprint."""
        lines = [f"model = {self.model.value}", f"phase = {self.phase!r}"]
        if self.geometry is not None:
            g = self.geometry
            lines += [
                f"long_arm = {g.long_arm!r}",
                f"short_arm = {g.short_arm!r}",
                f"geometry_wavelength = {g.wavelength!r}",
                f"geometry_light_speed = {g.light_speed!r}",
            ]
        lines += [
            f"detector_distance = {self.detector_distance!r}",
            f"gate_window = {self.gate_window!r}",
            f"light_speed = {self.light_speed!r}",
        ]
        if self.ether is not None:
            e = self.ether
            lines += [
                f"ether_arm_length = {e.arm_length!r}",
                f"ether_velocity = {e.ether_velocity!r}",
                f"ether_wavelength = {e.wavelength!r}",
                f"ether_light_speed = {e.light_speed!r}",
                f"ether_aligned = {e.aligned!r}",
            ]
        lines += [
            f"trials = {self.trials}",
            f"seed = {self.seed}",
            f"rng = {RNG_ALGORITHM}",
        ]
        return "\n".join(lines)

    @property
    def fingerprint(self) -> str:
        """Stable hex digest identifying the configuration (RNG choice included)."""
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


def resolve_distribution(config: ExperimentConfig) -> OutcomeDistribution:
    """The exact outcome distribution a configuration samples from."""
    phase = config.effective_phase
    if config.model is ModelId.NONLOCAL_QUANTUM:
        return quantum_joint(phase)
    if config.model is ModelId.LOCAL_DETECTION:
        return local_joint(phase, config.regime)
    if config.model is ModelId.ETHER:
        if config.ether is None:
            raise ConfigurationError("ether model requires ether parameters")
        return ether_joint(phase, config.ether)
    raise ConfigurationError(f"unknown model: {config.model!r}")


def _cumulative_boundaries(dist: OutcomeDistribution) -> np.ndarray:
    """Inversion boundaries for the fixed outcome order.

    The running sum is pinned to exactly 1.0 from the last nonzero component
    on, so outcomes with probability exactly 0 can never absorb the rounding
    gap below 1: they are never sampled.
    """
    probs = np.asarray(dist.as_tuple(), dtype=np.float64)
    boundaries = np.cumsum(probs)
    nonzero = np.nonzero(probs > 0.0)[0]
    boundaries[nonzero[-1] :] = 1.0
    return boundaries


def _shard_generator(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(shard,))))


def sample_trial(dist: OutcomeDistribution, rng: np.random.Generator) -> JointOutcome:
    """Draw one joint outcome, consuming exactly one uniform variate."""
    boundaries = _cumulative_boundaries(dist)
    u = rng.random()
    return OUTCOME_ORDER[int(np.searchsorted(boundaries, u, side="right"))]


@dataclass(frozen=True)
class TrialLedger:
    """Aggregated outcome counts of one run, with its provenance."""

    counts: Mapping[JointOutcome, int]
    n: int
    fingerprint: str = ""
    seed: int = 0
    shards: int = 1
    rng_algorithm: str = RNG_ALGORITHM

    def __post_init__(self) -> None:
        normalized = {outcome: int(self.counts.get(outcome, 0)) for outcome in OUTCOME_ORDER}
        object.__setattr__(self, "counts", normalized)
        if any(count < 0 for count in normalized.values()):
            raise ConfigurationError(f"counts must be nonnegative, got {normalized}")
        if sum(normalized.values()) != self.n:
            raise ConfigurationError(
                f"counts sum to {sum(normalized.values())}, expected n = {self.n}"
            )

    def count(self, outcome: JointOutcome) -> int:
        return self.counts[outcome]

    def to_text(self) -> str:
        """Serialize to the versioned flat ``key = value`` record."""
        lines = [
            f"ledger_version = {LEDGER_FORMAT_VERSION}",
            f"rng = {self.rng_algorithm}",
            f"fingerprint = {self.fingerprint}",
            f"seed = {self.seed}",
            f"shards = {self.shards}",
            f"trials = {self.n}",
        ]
        lines += [f"{outcome.value} = {self.counts[outcome]}" for outcome in OUTCOME_ORDER]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TrialLedger":
        """Parse a record produced by :meth:`to_text`."""
        fields: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"malformed ledger line {lineno}: {raw!r}")
            fields[key.strip()] = value.strip()
        version = fields.pop("ledger_version", None)
        if version is None:
            raise ValueError("ledger record is missing ledger_version")
        if int(version) != LEDGER_FORMAT_VERSION:
            raise ValueError(f"unsupported ledger_version {version}")
        try:
            counts = {outcome: int(fields.pop(outcome.value)) for outcome in OUTCOME_ORDER}
            ledger = cls(
                counts=counts,
                n=int(fields.pop("trials")),
                fingerprint=fields.pop("fingerprint"),
                seed=int(fields.pop("seed")),
                shards=int(fields.pop("shards")),
                rng_algorithm=fields.pop("rng"),
            )
        except KeyError as missing:
            raise ValueError(f"ledger record is missing key {missing}") from None
        if fields:
            raise ValueError(f"unknown ledger keys: {sorted(fields)}")
        return ledger


def run(config: ExperimentConfig, shards: int = 1) -> TrialLedger:
    """Simulate all trials and aggregate the outcome counts.

    Trials are split as evenly as possible over ``shards`` independent
    substreams; counts are summed, so the merge is commutative and
    associative.  For fixed (config, shards) the result is bit-identical
    across runs.
    """
    if not isinstance(shards, int) or shards < 1:
        raise ConfigurationError(f"shards must be a positive integer, got {shards!r}")
    dist = resolve_distribution(config)
    boundaries = _cumulative_boundaries(dist)
    totals = np.zeros(4, dtype=np.int64)
    base, remainder = divmod(config.trials, shards)
    for shard in range(shards):
        size = base + (1 if shard < remainder else 0)
        if size == 0:
            continue
        rng = _shard_generator(config.seed, shard)
        uniforms = rng.random(size)
        indices = np.searchsorted(boundaries, uniforms, side="right")
        totals += np.bincount(indices, minlength=4)
    counts = {outcome: int(totals[i]) for i, outcome in enumerate(OUTCOME_ORDER)}
    return TrialLedger(
        counts=counts,
        n=config.trials,
        fingerprint=config.fingerprint,
        seed=config.seed,
        shards=shards,
    )
