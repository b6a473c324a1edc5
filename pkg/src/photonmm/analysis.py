"""Rate estimation, model discrimination, and phase-sweep tables.

The decisive observable of the experiment is the coincidence count: the
joint-at-detection (quantum) model pins its probability to exactly 0 while
the local model beyond the signaling threshold predicts up to 0.25.  Where
one hypothesis puts probability 0 on coincidences, discrimination uses the
exact binomial tail of the coincidence count -- no asymptotics -- and a
single coincidence is already a certain rejection of the zero-coincidence
hypothesis.  Everywhere else, a multinomial likelihood-ratio statistic
against each hypothesis is referred to a chi-squared distribution with 3
degrees of freedom (four outcome cells, fully specified null).

Rates carry 95% Wilson score intervals, which stay honest at the boundary
rates 0 and 1 the experiment lives at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np
from scipy import stats

from .errors import ConfigurationError, DataInconsistencyError, EmptyLedgerError
from .ether import EtherConfig, ether_joint
from .models import (
    TWO_PI,
    ModelId,
    OutcomeDistribution,
    SeparationRegime,
    local_joint,
    quantum_joint,
)
from .simulate import OUTCOME_ORDER, JointOutcome, TrialLedger

#: Two-sided 95% normal quantile used by the Wilson score interval.
WILSON_Z = float(stats.norm.ppf(0.975))

_BOTH_INDEX = OUTCOME_ORDER.index(JointOutcome.BOTH)
_LLR_DF = 3


def format_number(value: float) -> str:
    """Render a number with 12 significant digits, the package's table format."""
    return format(float(value), ".12g")


def wilson_interval(count: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise EmptyLedgerError("cannot form an interval from zero trials")
    if not 0 <= count <= n:
        raise ValueError(f"count {count} outside [0, {n}]")
    p_hat = count / n
    denom = 1.0 + z * z / n
    center = (p_hat + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)) / denom
    low = max(0.0, min(center - half, p_hat))
    high = min(1.0, max(center + half, p_hat))
    return low, high


@dataclass(frozen=True)
class RateEstimate:
    """Empirical rate of one joint outcome with its 95% Wilson interval."""

    outcome: JointOutcome
    count: int
    n: int
    rate: float
    ci_low: float
    ci_high: float


def estimate_rates(ledger: TrialLedger) -> dict[JointOutcome, RateEstimate]:
    """One rate estimate per joint outcome."""
    if ledger.n <= 0:
        raise EmptyLedgerError("ledger contains no trials")
    estimates = {}
    for outcome in OUTCOME_ORDER:
        count = ledger.counts[outcome]
        low, high = wilson_interval(count, ledger.n)
        estimates[outcome] = RateEstimate(
            outcome=outcome,
            count=count,
            n=ledger.n,
            rate=count / ledger.n,
            ci_low=low,
            ci_high=high,
        )
    return estimates


class Verdict(Enum):
    FAVORS_A = "favors_a"
    FAVORS_B = "favors_b"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DiscriminationReport:
    """Outcome of testing two candidate distributions against observed counts.

    ``p_value`` is the tail probability of the data under hypothesis B (the
    null); ``p_value_under_a`` is the mirrored tail under hypothesis A, so
    swapping the hypotheses swaps the two fields and the verdict.  ``llr`` is
    the log-likelihood of A minus that of B and is finite unless an observed
    outcome was impossible under exactly one hypothesis, in which case
    ``certain_rejection`` is set and the verdict needs no statistics.
    """

    label_a: str
    label_b: str
    n: int
    llr: float
    p_value: float
    p_value_under_a: float
    significance: float
    certain_rejection: bool
    verdict: Verdict


def _log_likelihood_ratio(counts: Sequence[int], pa: Sequence[float], pb: Sequence[float]) -> float:
    llr = 0.0
    for k, a, b in zip(counts, pa, pb):
        if k == 0:
            continue
        if a == 0.0:
            return -math.inf
        if b == 0.0:
            return math.inf
        llr += k * (math.log(a) - math.log(b))
    return llr


def _g_statistic(counts: Sequence[int], probs: Sequence[float], n: int) -> float:
    g = 0.0
    for k, p in zip(counts, probs):
        if k == 0:
            continue
        if p == 0.0:
            return math.inf
        g += k * math.log(k / (n * p))
    return 2.0 * g


def _tail_under_null(counts: Sequence[int], null: Sequence[float], other: Sequence[float], n: int) -> float:
    """Tail probability of data at least as extreme toward ``other`` under ``null``.

    Uses the exact binomial tail of the coincidence count when exactly one of
    the two hypotheses forbids coincidences, the multinomial likelihood-ratio
    statistic with a chi2(3) reference otherwise.
    """
    q_null, q_other = null[_BOTH_INDEX], other[_BOTH_INDEX]
    k_both = counts[_BOTH_INDEX]
    if (q_null == 0.0) != (q_other == 0.0):
        if q_other == 0.0:
            # fewer coincidences is more extreme toward the alternative
            return float(stats.binom.cdf(k_both, n, q_null))
        # the null forbids coincidences: any observed one is impossible under it
        return 1.0 if k_both == 0 else 0.0
    g = _g_statistic(counts, null, n)
    return float(stats.chi2.sf(g, df=_LLR_DF))


def discriminate(
    ledger: TrialLedger,
    hypothesis_a: OutcomeDistribution,
    hypothesis_b: OutcomeDistribution,
    significance: float = 1e-3,
    label_a: str = "A",
    label_b: str = "B",
) -> DiscriminationReport:
    """Test two fully specified outcome distributions against observed counts.

    Raises :class:`DataInconsistencyError` when an observed outcome is
    impossible under both hypotheses; in that case neither model explains the
    data and the comparison is meaningless.
    """
    if not 0.0 < significance < 1.0:
        raise ConfigurationError(f"significance must lie in (0, 1), got {significance}")
    if ledger.n <= 0:
        raise EmptyLedgerError("ledger contains no trials")
    counts = [ledger.counts[outcome] for outcome in OUTCOME_ORDER]
    pa = hypothesis_a.as_tuple()
    pb = hypothesis_b.as_tuple()
    impossible_a = any(k > 0 and p == 0.0 for k, p in zip(counts, pa))
    impossible_b = any(k > 0 and p == 0.0 for k, p in zip(counts, pb))
    if impossible_a and impossible_b:
        raise DataInconsistencyError(
            "observed counts are impossible under both hypotheses"
        )
    llr = _log_likelihood_ratio(counts, pa, pb)
    p_under_b = 0.0 if impossible_b else _tail_under_null(counts, pb, pa, ledger.n)
    p_under_a = 0.0 if impossible_a else _tail_under_null(counts, pa, pb, ledger.n)
    if impossible_a:
        verdict = Verdict.FAVORS_B
    elif impossible_b:
        verdict = Verdict.FAVORS_A
    elif llr > 0.0 and p_under_b <= significance < p_under_a:
        verdict = Verdict.FAVORS_A
    elif llr < 0.0 and p_under_a <= significance < p_under_b:
        verdict = Verdict.FAVORS_B
    else:
        verdict = Verdict.INCONCLUSIVE
    return DiscriminationReport(
        label_a=label_a,
        label_b=label_b,
        n=ledger.n,
        llr=llr,
        p_value=p_under_b,
        p_value_under_a=p_under_a,
        significance=significance,
        certain_rejection=impossible_a or impossible_b,
        verdict=verdict,
    )


@dataclass(frozen=True)
class SweepRow:
    """Analytic probabilities of one (phase, model, regime) grid point."""

    phase: float
    model: ModelId
    regime: SeparationRegime
    distribution: OutcomeDistribution


#: Column order of the sweep CSV emitted by :func:`write_sweep_csv`.
SWEEP_CSV_HEADER = (
    "phase_rad,model,regime,p_plus_only,p_minus_only,p_both,p_none,"
    "marginal_plus,marginal_minus"
)


def default_phase_grid(points: int = 181) -> list[float]:
    """Evenly spaced phases over [0, 2*pi], endpoints included."""
    if points < 1:
        raise ConfigurationError(f"grid needs at least one point, got {points}")
    return [float(x) for x in np.linspace(0.0, TWO_PI, points)]


def sweep_phase(
    models: Iterable[ModelId],
    regimes: Iterable[SeparationRegime],
    grid: Iterable[float],
    ether: EtherConfig | None = None,
) -> list[SweepRow]:
    """Analytic outcome table over a phase grid, one row per (phase, model, regime).

    Models whose prediction is regime-independent (quantum, ether) repeat the
    same distribution in every requested regime; the repetition is the point,
    it exhibits the predicted null result of moving a detector.
    """
    models = list(models)
    regimes = list(regimes)
    grid = [float(phase) for phase in grid]
    if not grid:
        raise ConfigurationError("phase grid must not be empty")
    if not models or not regimes:
        raise ConfigurationError("need at least one model and one regime")
    if ModelId.ETHER in models and ether is None:
        raise ConfigurationError("sweeping the ether model requires ether parameters")
    rows = []
    for phase in grid:
        for model in models:
            for regime in regimes:
                if model is ModelId.NONLOCAL_QUANTUM:
                    dist = quantum_joint(phase)
                elif model is ModelId.LOCAL_DETECTION:
                    dist = local_joint(phase, regime)
                elif model is ModelId.ETHER:
                    assert ether is not None
                    dist = ether_joint(phase, ether)
                else:
                    raise ConfigurationError(f"unknown model: {model!r}")
                rows.append(SweepRow(phase=phase, model=model, regime=regime, distribution=dist))
    return rows


def write_sweep_csv(rows: Iterable[SweepRow], stream: IO[str]) -> None:
    """Emit sweep rows as CSV with 12-significant-digit numbers."""
    stream.write(SWEEP_CSV_HEADER + "\n")
    for row in rows:
        dist = row.distribution
        cells = [
            format_number(row.phase),
            row.model.value,
            row.regime.value,
            format_number(dist.p_plus_only),
            format_number(dist.p_minus_only),
            format_number(dist.p_both),
            format_number(dist.p_none),
            format_number(dist.marginal_plus),
            format_number(dist.marginal_minus),
        ]
        stream.write(",".join(cells) + "\n")


def _smallest_n_for_tail(q: float, bound: float, max_trials: int) -> int:
    """Smallest n with (1 - q)^n <= bound, for q in (0, 1]."""
    if q >= 1.0:
        return 1
    estimate = max(1, math.ceil(math.log(bound) / math.log1p(-q)) - 2)
    n = estimate
    while (1.0 - q) ** n > bound:
        n += 1
        if n > max_trials:
            raise ConfigurationError(
                f"no sample size up to {max_trials} meets the requested bound"
            )
    return n


def sample_size_for_power(
    hypothesis_a: OutcomeDistribution,
    hypothesis_b: OutcomeDistribution,
    significance: float,
    power: float,
    mc_seed: int = 0,
    mc_reps: int = 200,
    max_trials: int = 10**9,
) -> int:
    """Smallest n at which data generated under A rejects B.

    When exactly one hypothesis forbids coincidences the answer is an exact
    binomial bound on the coincidence count: either the rejection is
    deterministic (A never produces a coincidence, so only the significance
    constrains n) or a single coincidence rejects B with certainty (only the
    power constrains n).  Otherwise the rejection rate is estimated by
    seeded Monte Carlo over ``mc_reps`` synthetic ledgers per candidate n and
    the threshold located by doubling plus bisection.
    """
    if not 0.0 < significance < 1.0:
        raise ConfigurationError(f"significance must lie in (0, 1), got {significance}")
    if not 0.0 < power < 1.0:
        raise ConfigurationError(f"power must lie in (0, 1), got {power}")
    pa = hypothesis_a.as_tuple()
    pb = hypothesis_b.as_tuple()
    if pa == pb:
        raise ConfigurationError("hypotheses are identical; no sample size separates them")
    q_a, q_b = pa[_BOTH_INDEX], pb[_BOTH_INDEX]
    if q_a == 0.0 and q_b > 0.0:
        # A never produces a coincidence: the all-zeros tail under B must
        # already be significant, and it occurs with probability 1 under A.
        return _smallest_n_for_tail(q_b, significance, max_trials)
    if q_b == 0.0 and q_a > 0.0:
        # one coincidence rejects B outright; need one with the given power
        return _smallest_n_for_tail(q_a, 1.0 - power, max_trials)

    def rejection_rate(n: int) -> float:
        hits = 0
        for rep in range(mc_reps):
            rng = np.random.Generator(
                np.random.Philox(np.random.SeedSequence(mc_seed, spawn_key=(n, rep)))
            )
            draw = rng.multinomial(n, pa)
            ledger = TrialLedger(
                counts={outcome: int(draw[i]) for i, outcome in enumerate(OUTCOME_ORDER)},
                n=n,
            )
            report = discriminate(ledger, hypothesis_a, hypothesis_b, significance)
            if report.p_value <= significance:
                hits += 1
        return hits / mc_reps

    n = 1
    while rejection_rate(n) < power:
        n *= 2
        if n > max_trials:
            raise ConfigurationError(
                f"no sample size up to {max_trials} reaches the requested power"
            )
    low, high = n // 2, n
    while high - low > 1:
        mid = (low + high) // 2
        if rejection_rate(mid) >= power:
            high = mid
        else:
            low = mid
    return high
