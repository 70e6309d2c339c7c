"""Detector rates and Monte Carlo count generation.

Converts per-pulse probabilities into detected rates (arm efficiencies,
dark counts, ambient background, accidental coincidences) and draws
Poisson count records over a delay scan.

Accidentals use the flat-rate product ``S_A * S_B * window``; the singles
entering it are the full detected rates, background included, matching a
counter that takes no pulse timing into account.

Randomness: numpy's PCG64 (``default_rng``).  Each scan record draws from
its own generator seeded by a 64-bit value derived from the master seed
and the record index via ``SeedSequence(master, spawn_key=(index,))``, so
records are reproducible individually and independent of evaluation
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import PairProbabilities, PulseTrain, SourceParams, pair_probability
from .overlap import OverlapModel, fringe_envelope


@dataclass(frozen=True)
class DetectionParams:
    """Per-arm detection chain and counting parameters."""

    eta_a: float
    eta_b: float
    dark_a: float = 0.0
    dark_b: float = 0.0
    background_a: float = 0.0
    background_b: float = 0.0
    coinc_window: float = 1.07e-9
    rep_rate: float = 80e6

    def __post_init__(self):
        for name in ("eta_a", "eta_b"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {val!r}")
        for name in ("dark_a", "dark_b", "background_a", "background_b", "coinc_window"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.rep_rate <= 0:
            raise ValueError("rep_rate must be positive")
        if self.coinc_window * self.rep_rate >= 1.0:
            raise ValueError(
                "coinc_window * rep_rate must stay below 1 (at most one pulse per window)"
            )


@dataclass(frozen=True)
class RateSet:
    """Detected rates, Hz, at one scan point."""

    singles_a: float
    singles_b: float
    coinc_true: float
    coinc_accidental: float

    @property
    def coinc_total(self) -> float:
        return self.coinc_true + self.coinc_accidental


@dataclass(frozen=True)
class ScanRecord:
    """Raw counts at one delay point, reproducible from ``rng_seed``."""

    delay: float
    counts_a: int
    counts_b: int
    counts_cc: int
    integration_time: float
    rng_seed: int

    @property
    def rate_a(self) -> float:
        return self.counts_a / self.integration_time

    @property
    def rate_b(self) -> float:
        return self.counts_b / self.integration_time

    @property
    def rate_cc(self) -> float:
        return self.counts_cc / self.integration_time


@dataclass(frozen=True)
class ExperimentSetup:
    """Resolved physics inputs of one scan configuration."""

    source: SourceParams
    pulses: PulseTrain
    overlap: OverlapModel
    detection: DetectionParams
    lo_pair_efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.lo_pair_efficiency <= 1.0:
            raise ValueError("lo_pair_efficiency must lie in [0, 1]")


def rates_at(
    src: SourceParams,
    phi: float,
    overlap: OverlapModel,
    det: DetectionParams,
    *,
    delay: float | None = None,
    lo_pair_efficiency: float = 1.0,
) -> RateSet:
    """Detected rates at interference phase ``phi``.

    ``lo_pair_efficiency`` scales the LO-LO two-photon amplitude entering
    the pair channel (joint mode match of the two LO beams), leaving the
    LO singles intensities untouched: the pair probability is evaluated
    with both LO amplitudes scaled by ``lo_pair_efficiency**(1/4)`` and
    the singles baselines are restored afterwards.  At 1.0 this is the
    plain closed-form model.
    """
    gamma = overlap.gamma
    if delay is not None:
        gamma *= fringe_envelope(delay, overlap)

    scale = lo_pair_efficiency**0.25
    scaled = src.scaled_lo(scale)
    pp = pair_probability(scaled, phi, gamma)
    # restore the unscaled LO intensity in the singles means
    n_h = pp.n_h - abs(scaled.alpha_h) ** 2 + abs(src.alpha_h) ** 2
    n_v = pp.n_v - abs(scaled.alpha_v) ** 2 + abs(src.alpha_v) ** 2

    singles_a = det.background_a + det.dark_a + det.eta_a * n_h * det.rep_rate
    singles_b = det.background_b + det.dark_b + det.eta_b * n_v * det.rep_rate
    coinc_true = det.eta_a * det.eta_b * pp.p_pair * det.rep_rate
    accidental = singles_a * singles_b * det.coinc_window
    return RateSet(
        singles_a=singles_a,
        singles_b=singles_b,
        coinc_true=coinc_true,
        coinc_accidental=accidental,
    )


def pair_probabilities_at(
    setup: ExperimentSetup, phi: float, *, delay: float | None = None
) -> PairProbabilities:
    """Per-pulse probabilities for a resolved setup (envelope applied)."""
    gamma = setup.overlap.gamma
    if delay is not None:
        gamma *= fringe_envelope(delay, setup.overlap)
    scale = setup.lo_pair_efficiency**0.25
    return pair_probability(setup.source.scaled_lo(scale), phi, gamma)


def setup_rates(setup: ExperimentSetup, delay: float) -> RateSet:
    """Detected rates of a resolved setup at an optical delay."""
    from .model import phase_from_delay

    phi = phase_from_delay(delay, setup.pulses)
    return rates_at(
        setup.source,
        phi,
        setup.overlap,
        setup.detection,
        delay=delay,
        lo_pair_efficiency=setup.lo_pair_efficiency,
    )


def record_seed(master_seed: int, index: int) -> int:
    """64-bit per-record seed derived from the master seed and index."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def simulate_scan(
    delays: Sequence[float],
    setup: ExperimentSetup,
    seed: int,
    integration_time: float,
) -> list[ScanRecord]:
    """Draw Poisson count records over a delay scan.

    Counts in each channel are Poisson with mean rate * integration_time
    (total coincidences: true plus accidental).  Bit-reproducible for a
    given seed and setup; per-record seeding makes the result independent
    of evaluation order.
    """
    if len(delays) == 0:
        return []
    if integration_time <= 0:
        raise ValueError("integration_time must be positive")
    records = []
    for index, delay in enumerate(delays):
        rates = setup_rates(setup, float(delay))
        child = record_seed(seed, index)
        rng = np.random.default_rng(child)
        counts_a = int(rng.poisson(rates.singles_a * integration_time))
        counts_b = int(rng.poisson(rates.singles_b * integration_time))
        counts_cc = int(rng.poisson(rates.coinc_total * integration_time))
        records.append(
            ScanRecord(
                delay=float(delay),
                counts_a=counts_a,
                counts_b=counts_b,
                counts_cc=counts_cc,
                integration_time=integration_time,
                rng_seed=child,
            )
        )
    return records


def scan_delays(start: float, stop: float, n_points: int) -> list[float]:
    """Uniform delay grid, inclusive of both endpoints."""
    if n_points < 0:
        raise ValueError("n_points must be nonnegative")
    if n_points == 0:
        return []
    if n_points == 1:
        return [start]
    step = (stop - start) / (n_points - 1)
    return [start + i * step for i in range(n_points)]
