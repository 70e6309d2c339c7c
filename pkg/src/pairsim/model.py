"""Two-path photon-pair interference model.

A pulsed pump drives a down-conversion crystal while a pair of weak,
phase-locked local-oscillator (LO) beams is overlapped with the
down-converted modes.  Per pulse there are two indistinguishable ways to
obtain one photon in each arm: the LO beams supply one photon each
(amplitude ``alpha_h * alpha_v``), or the crystal emits a pair (amplitude
``epsilon * exp(i*theta)`` with ``theta`` set by the pump phase and the
optical delay).  The coincidence probability is the squared magnitude of
the coherent sum, degraded by a mode-overlap factor ``gamma``:

    p_pair = |aH aV|^2 + eps^2 + 2*gamma*eps*|aH aV|*cos(phi + phi0)

with ``phi0 = pump_phase - arg(aH aV)``.  All interference phase enters
through the single effective angle ``pump_phase + phi - arg(aH) -
arg(aV)``; the same convention is used by the exact reference in
:mod:`pairsim.fock`.

The closed forms here are lowest-order in the field amplitudes.  They are
rejected above ``PERTURBATIVE_LIMIT`` (keep amplitudes at or below ~0.1
for sub-percent accuracy); the truncated-Fock reference is exact and
should be consulted beyond that.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.constants import c as _C_LIGHT

from .errors import InconsistentRatesError, PerturbativeBoundError

#: Hard validity bound for the closed-form pair model (per-pulse amplitude).
PERTURBATIVE_LIMIT = 0.5


@dataclass(frozen=True)
class SourceParams:
    """Per-pulse field amplitudes driving both production paths.

    ``alpha_h``/``alpha_v``: complex LO amplitudes in the H/V arms.
    ``epsilon``: down-conversion pair amplitude (relative two-photon
    amplitude per pulse, nonnegative).  ``pump_phase``: phase of the pump
    at zero delay, radians.
    """

    alpha_h: complex
    alpha_v: complex
    epsilon: float
    pump_phase: float = 0.0

    def __post_init__(self):
        for name in ("alpha_h", "alpha_v"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z!r}")
        if not math.isfinite(self.epsilon) or self.epsilon < 0:
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon!r}")
        if not math.isfinite(self.pump_phase):
            raise ValueError("pump_phase must be finite")

    @property
    def lo_product(self) -> complex:
        """Two-photon amplitude of the LO path, ``alpha_h * alpha_v``."""
        return complex(self.alpha_h) * complex(self.alpha_v)

    def scaled_lo(self, factor: float) -> "SourceParams":
        """Copy with both LO amplitudes multiplied by ``factor``."""
        return SourceParams(
            alpha_h=complex(self.alpha_h) * factor,
            alpha_v=complex(self.alpha_v) * factor,
            epsilon=self.epsilon,
            pump_phase=self.pump_phase,
        )


@dataclass(frozen=True)
class PulseTrain:
    """Pulsed-laser parameters: repetition rate and the harmonically
    related LO / pump wavelengths (meters)."""

    rep_rate: float
    pump_wavelength: float
    lo_wavelength: float

    def __post_init__(self):
        if self.rep_rate <= 0:
            raise ValueError("rep_rate must be positive")
        if self.pump_wavelength <= 0 or self.lo_wavelength <= 0:
            raise ValueError("wavelengths must be positive")
        if abs(self.pump_wavelength - self.lo_wavelength / 2.0) > 1e-9 * self.lo_wavelength:
            raise ValueError(
                "pump_wavelength must equal lo_wavelength / 2 "
                f"(got {self.pump_wavelength} vs {self.lo_wavelength / 2.0})"
            )

    @property
    def pump_period(self) -> float:
        """Optical period of the pump, seconds: one fringe per period."""
        return self.pump_wavelength / _C_LIGHT


@dataclass(frozen=True)
class PairProbabilities:
    """Per-pulse pair probability and singles means for one phase point."""

    p_pair: float
    n_h: float
    n_v: float


def phase_from_delay(delay: float, pulses: PulseTrain) -> float:
    """Interference phase accumulated by an optical delay, radians.

    One full fringe per ``pump_wavelength / c`` of delay.
    """
    return 2.0 * math.pi * _C_LIGHT * delay / pulses.pump_wavelength


def effective_phase(src: SourceParams, phi: float) -> float:
    """Total interference angle ``pump_phase + phi - arg(aH) - arg(aV)``."""
    prod = src.lo_product
    offset = src.pump_phase - (cmath.phase(prod) if prod != 0 else 0.0)
    return phi + offset


def pair_probability(src: SourceParams, phi: float, gamma: float) -> PairProbabilities:
    """Closed-form per-pulse pair probability and singles means.

    The phase-dependent part of each singles mean equals the
    phase-dependent part of ``p_pair``: every interfering pair carries one
    photon into each arm, so creating or removing a pair moves the beam
    intensities with it.

    Raises :class:`PerturbativeBoundError` when any amplitude exceeds
    ``PERTURBATIVE_LIMIT``; use :func:`pairsim.fock.fock_oracle` there.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    worst = max(abs(src.alpha_h), abs(src.alpha_v), src.epsilon)
    if worst > PERTURBATIVE_LIMIT:
        raise PerturbativeBoundError(
            f"amplitude {worst:.3g} exceeds the perturbative bound "
            f"{PERTURBATIVE_LIMIT}; use the truncated-Fock reference instead"
        )
    lo2 = abs(src.lo_product) ** 2
    cross = 2.0 * gamma * src.epsilon * abs(src.lo_product)
    p_pair = lo2 + src.epsilon**2 + cross * math.cos(effective_phase(src, phi))
    p_pair = max(p_pair, 0.0)  # guard float dust at perfect cancellation
    modulated = p_pair - lo2  # eps^2 + interference term
    n_h = abs(src.alpha_h) ** 2 + modulated
    n_v = abs(src.alpha_v) ** 2 + modulated
    return PairProbabilities(p_pair=p_pair, n_h=max(n_h, 0.0), n_v=max(n_v, 0.0))


def intrinsic_visibility(src: SourceParams, gamma: float) -> float:
    """Fringe contrast of ``p_pair`` over a full phase sweep.

    Equals ``2*gamma*eps*|aH aV| / (eps^2 + |aH aV|^2)``; maximal (= gamma)
    when the two path amplitudes are balanced, ``eps = |aH aV|``.
    """
    lo = abs(src.lo_product)
    denom = src.epsilon**2 + lo**2
    if denom == 0.0:
        return 0.0
    return 2.0 * gamma * src.epsilon * lo / denom


@dataclass(frozen=True)
class KlyshkoCalibration:
    """Arm efficiencies and pair amplitude inferred from measured rates."""

    eta_a: float
    eta_b: float
    epsilon: float
    pair_rate: float


def klyshko_calibrate(
    singles_a: float, singles_b: float, coinc: float, pulses: PulseTrain
) -> KlyshkoCalibration:
    """Invert background-subtracted singles and coincidence rates of the
    down-conversion path into arm efficiencies and the per-pulse pair
    amplitude.

    Each arm's efficiency is the coincidence rate over the *opposite*
    arm's singles rate; the source pair rate is ``S_A * S_B / C`` and
    ``epsilon = sqrt(pair_rate / rep_rate)``.
    """
    if singles_a <= 0 or singles_b <= 0 or coinc <= 0:
        raise InconsistentRatesError("all rates must be positive")
    if coinc > min(singles_a, singles_b):
        offender = "singles_a" if singles_a < singles_b else "singles_b"
        raise InconsistentRatesError(
            f"coincidence rate {coinc} exceeds {offender} "
            f"({min(singles_a, singles_b)}); rates are inconsistent"
        )
    eta_a = coinc / singles_b
    eta_b = coinc / singles_a
    pair_rate = singles_a * singles_b / coinc
    epsilon = math.sqrt(pair_rate / pulses.rep_rate)
    return KlyshkoCalibration(eta_a=eta_a, eta_b=eta_b, epsilon=epsilon, pair_rate=pair_rate)


def calibrate_lo(
    singles_a: float,
    singles_b: float,
    eta_a: float,
    eta_b: float,
    pulses: PulseTrain,
) -> tuple[float, float]:
    """LO amplitude magnitudes from LO-only singles rates and known arm
    efficiencies: ``|alpha|^2 = singles / (eta * rep_rate)``."""
    if not 0.0 < eta_a <= 1.0 or not 0.0 < eta_b <= 1.0:
        raise ValueError("efficiencies must lie in (0, 1]")
    if singles_a < 0 or singles_b < 0:
        raise ValueError("singles rates must be nonnegative")
    alpha_h = math.sqrt(singles_a / (eta_a * pulses.rep_rate))
    alpha_v = math.sqrt(singles_b / (eta_b * pulses.rep_rate))
    return alpha_h, alpha_v


def forward_dc_rates(
    eta_a: float, eta_b: float, epsilon: float, pulses: PulseTrain
) -> tuple[float, float, float]:
    """Noiseless detected rates of the down-conversion path alone
    (singles A, singles B, coincidences); the analytic inverse of
    :func:`klyshko_calibrate`."""
    pair_rate = epsilon**2 * pulses.rep_rate
    return eta_a * pair_rate, eta_b * pair_rate, eta_a * eta_b * pair_rate
