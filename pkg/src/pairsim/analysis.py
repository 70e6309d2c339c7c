"""Fringe extraction: sinusoid fits, visibilities, pair-removal fraction.

Count records are converted to rates with Poisson weights (variance =
counts, floored at 1) and fitted with weighted nonlinear least squares to

    rate(tau) = C + A * cos(2*pi*tau/period + phase0)

Delays are rescaled by the period guess internally so the optimizer works
on order-one numbers.  The fit multi-starts over phase to dodge the
(A, phase) <-> (-A, phase+pi) degeneracy and reports A nonnegative.
Parameter uncertainties come from the local curvature (covariance) of the
weighted objective.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .detection import ScanRecord
from .errors import CorrectionInvalidError, FitFailureError

_TWO_PI = 2.0 * math.pi

#: Indices into the fit parameter vector / covariance.
_C, _A, _T, _PH = 0, 1, 2, 3


@dataclass(frozen=True)
class FringeFit:
    """Sinusoid parameters with standard errors."""

    offset_c: float
    offset_c_err: float
    amplitude_a: float
    amplitude_a_err: float
    period: float
    period_err: float
    phase0: float
    phase0_err: float
    reduced_chi2: float
    n_points: int
    covariance: np.ndarray = field(repr=False)  # order (C, A, period, phase0)

    def value(self, delay: float) -> float:
        return self.offset_c + self.amplitude_a * math.cos(
            _TWO_PI * delay / self.period + self.phase0
        )

    @property
    def cov_ca(self) -> float:
        return float(self.covariance[_C, _A])


@dataclass(frozen=True)
class VisibilityReport:
    """Raw and accidental-corrected fringe contrast."""

    raw: float
    raw_err: float
    corrected: float
    corrected_err: float
    accidental_rate_used: float


@dataclass(frozen=True)
class UpconversionReport:
    """Fraction of LO pairs removed at the fringe minimum."""

    fraction: float
    fraction_err: float
    fraction_from_amplitude: float
    r_min: float
    r_min_err: float
    significance_below_lo: float
    physical: bool  # False when the fitted minimum violates the rate bound


@dataclass(frozen=True)
class EnhancementReport:
    """Peak/trough of the corrected fringe against the sum of the
    independent-path rates."""

    enhanced: bool
    peak_margin: float
    peak_margin_err: float
    suppressed: bool
    trough_margin: float
    trough_margin_err: float


def _rates_and_sigmas(
    records: Sequence[ScanRecord], channel: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    getters = {
        "coincidences": lambda r: r.counts_cc,
        "singles_a": lambda r: r.counts_a,
        "singles_b": lambda r: r.counts_b,
    }
    if channel not in getters:
        raise ValueError(f"unknown channel {channel!r}")
    take = getters[channel]
    delays = np.array([r.delay for r in records], dtype=float)
    counts = np.array([take(r) for r in records], dtype=float)
    times = np.array([r.integration_time for r in records], dtype=float)
    rates = counts / times
    sigmas = np.sqrt(np.maximum(counts, 1.0)) / times
    return delays, rates, sigmas


def _model(x: np.ndarray, c: float, a: float, t: float, ph: float) -> np.ndarray:
    return c + a * np.cos(_TWO_PI * x / t + ph)


def fit_fringe(
    records: Sequence[ScanRecord],
    period_guess: float,
    *,
    channel: str = "coincidences",
    rates_override: np.ndarray | None = None,
    fixed_period: float | None = None,
    fixed_phase: float | None = None,
    max_starts: int = 8,
) -> FringeFit:
    """Weighted sinusoid fit of a scan.

    ``rates_override`` substitutes the fitted rate values (same Poisson
    weights from the recorded counts); used for per-point
    accidental-corrected data.  ``fixed_period``/``fixed_phase`` freeze
    those parameters (their reported errors are zero), which keeps the
    amplitude estimate linear for null tests against a reference fit.
    """
    if len(records) < 8:
        raise ValueError(f"need at least 8 records, got {len(records)}")
    if period_guess <= 0:
        raise ValueError("period_guess must be positive")
    delays, rates, sigmas = _rates_and_sigmas(records, channel)
    if rates_override is not None:
        rates = np.asarray(rates_override, dtype=float)
        if rates.shape != delays.shape:
            raise ValueError("rates_override must match the record count")
    span = delays.max() - delays.min()
    if span <= 0:
        raise ValueError("degenerate scan: all records share one delay")
    if span < period_guess:
        raise ValueError(
            f"scan span {span:.3e} s covers less than one guessed period "
            f"{period_guess:.3e} s"
        )

    x = delays / period_guess  # dimensionless, order one

    if fixed_period is not None and fixed_phase is not None:
        return _fit_amplitude_only(
            x, rates, sigmas, period_guess, fixed_period, fixed_phase, len(records)
        )

    amp0 = max(float(rates.std()) * math.sqrt(2.0), 1e-9)
    c0 = float(rates.mean())
    starts = [
        (c0, amp0, 1.0, ph0)
        for ph0 in np.linspace(0.0, _TWO_PI, max_starts, endpoint=False)
    ]
    lower = [0.0, 0.0, 0.5, -_TWO_PI]
    upper = [np.inf, np.inf, 2.0, 2.0 * _TWO_PI]

    best = None
    failures = []
    for p0 in starts:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                popt, pcov = curve_fit(
                    _model,
                    x,
                    rates,
                    p0=p0,
                    sigma=sigmas,
                    absolute_sigma=True,
                    bounds=(lower, upper),
                    maxfev=20000,
                )
        except (RuntimeError, ValueError) as exc:
            failures.append(str(exc))
            continue
        chi2 = float(np.sum(((rates - _model(x, *popt)) / sigmas) ** 2))
        if best is None or chi2 < best[2]:
            best = (popt, pcov, chi2)

    if best is None:
        raise FitFailureError(
            "fringe fit failed to converge from every start",
            diagnostics={
                "n_points": len(records),
                "channel": channel,
                "starts": len(starts),
                "errors": failures,
            },
        )
    popt, pcov, chi2 = best
    if not np.all(np.isfinite(pcov)):
        raise FitFailureError(
            "fringe fit covariance is singular",
            diagnostics={"popt": popt.tolist(), "chi2": chi2},
        )

    # undo the delay rescaling: period and its row/column of the covariance
    popt = popt.copy()
    popt[_T] *= period_guess
    scale = np.ones(4)
    scale[_T] = period_guess
    pcov = pcov * np.outer(scale, scale)

    dof = max(len(records) - 4, 1)
    errs = np.sqrt(np.diag(pcov))
    return FringeFit(
        offset_c=float(popt[_C]),
        offset_c_err=float(errs[_C]),
        amplitude_a=float(popt[_A]),
        amplitude_a_err=float(errs[_A]),
        period=float(popt[_T]),
        period_err=float(errs[_T]),
        phase0=float(popt[_PH] % _TWO_PI),
        phase0_err=float(errs[_PH]),
        reduced_chi2=chi2 / dof,
        n_points=len(records),
        covariance=pcov,
    )


def _fit_amplitude_only(
    x: np.ndarray,
    rates: np.ndarray,
    sigmas: np.ndarray,
    period_guess: float,
    period: float,
    phase: float,
    n_points: int,
) -> FringeFit:
    """Linear weighted fit of (C, A) with period and phase frozen; A may
    come out negative and is folded into a nonnegative amplitude."""
    cosine = np.cos(_TWO_PI * x * period_guess / period + phase)
    design = np.column_stack([np.ones_like(x), cosine])
    w = 1.0 / sigmas
    dw = design * w[:, None]
    yw = rates * w
    normal = dw.T @ dw
    try:
        cov2 = np.linalg.inv(normal)
    except np.linalg.LinAlgError as exc:
        raise FitFailureError(f"singular normal matrix: {exc}") from exc
    params = cov2 @ (dw.T @ yw)
    resid = yw - dw @ params
    chi2 = float(resid @ resid)
    c_val, a_val = float(params[0]), float(params[1])
    ph = phase
    if a_val < 0:
        a_val, ph = -a_val, (phase + math.pi) % _TWO_PI
    pcov = np.zeros((4, 4))
    pcov[:2, :2] = cov2
    dof = max(n_points - 2, 1)
    return FringeFit(
        offset_c=c_val,
        offset_c_err=float(math.sqrt(cov2[0, 0])),
        amplitude_a=a_val,
        amplitude_a_err=float(math.sqrt(cov2[1, 1])),
        period=period,
        period_err=0.0,
        phase0=ph,
        phase0_err=0.0,
        reduced_chi2=chi2 / dof,
        n_points=n_points,
        covariance=pcov,
    )


def _ratio_err(a: float, c: float, var_a: float, var_c: float, cov_ac: float) -> float:
    """First-order standard error of a/c."""
    if a == 0.0:
        return math.sqrt(var_a) / abs(c)
    rel = var_a / a**2 + var_c / c**2 - 2.0 * cov_ac / (a * c)
    return abs(a / c) * math.sqrt(max(rel, 0.0))


def visibility(fit: FringeFit, accidental_rate: float) -> VisibilityReport:
    """Raw (A/C) and corrected (A/(C - accidentals)) fringe contrast with
    first-order propagated errors from the fit covariance."""
    if accidental_rate < 0:
        raise ValueError("accidental_rate must be nonnegative")
    if fit.offset_c <= accidental_rate:
        raise CorrectionInvalidError(
            f"offset {fit.offset_c:.4g} Hz does not exceed the accidental "
            f"rate {accidental_rate:.4g} Hz"
        )
    a, c = fit.amplitude_a, fit.offset_c
    var_a = fit.amplitude_a_err**2
    var_c = fit.offset_c_err**2
    cov_ac = fit.cov_ca
    raw = a / c
    raw_err = _ratio_err(a, c, var_a, var_c, cov_ac)
    c_corr = c - accidental_rate
    corrected = a / c_corr
    corrected_err = _ratio_err(a, c_corr, var_a, var_c, cov_ac)
    return VisibilityReport(
        raw=raw,
        raw_err=raw_err,
        corrected=corrected,
        corrected_err=corrected_err,
        accidental_rate_used=accidental_rate,
    )


def upconversion_fraction(
    fit: FringeFit,
    lo_coinc: float,
    dc_coinc: float,
    accidental_rate: float = 0.0,
    lo_coinc_err: float = 0.0,
) -> UpconversionReport:
    """Lower bound on the fraction of LO photon pairs removed at the
    corrected fringe minimum ``R_min = (C - accidentals) - A``:

        fraction = max(0, lo_coinc - R_min) / lo_coinc

    The equivalent form ``(A - dc_coinc) / lo_coinc`` is reported
    alongside; the two agree identically when ``lo + dc = C - acc``.
    Visibility degradations only shrink A, so the value is a lower bound.
    """
    if lo_coinc <= 0:
        raise ValueError("lo_coinc must be positive")
    r_min = (fit.offset_c - accidental_rate) - fit.amplitude_a
    var_rmin = (
        fit.offset_c_err**2 + fit.amplitude_a_err**2 - 2.0 * fit.cov_ca
    )
    r_min_err = math.sqrt(max(var_rmin, 0.0))
    physical = r_min <= lo_coinc + dc_coinc + 3.0 * r_min_err
    if not physical:
        warnings.warn(
            f"fitted corrected minimum {r_min:.3g} Hz exceeds the "
            f"independent-path total {lo_coinc + dc_coinc:.3g} Hz",
            stacklevel=2,
        )
    removed = lo_coinc - r_min
    fraction = max(0.0, removed) / lo_coinc
    var_frac = var_rmin / lo_coinc**2 + (r_min / lo_coinc**2) ** 2 * lo_coinc_err**2
    sig_denominator = math.sqrt(max(var_rmin, 0.0) + lo_coinc_err**2)
    significance = removed / sig_denominator if sig_denominator > 0 else math.inf
    return UpconversionReport(
        fraction=fraction,
        fraction_err=math.sqrt(max(var_frac, 0.0)),
        fraction_from_amplitude=(fit.amplitude_a - dc_coinc) / lo_coinc,
        r_min=r_min,
        r_min_err=r_min_err,
        significance_below_lo=significance,
        physical=physical,
    )


def enhancement_check(
    fit: FringeFit,
    lo_coinc: float,
    dc_coinc: float,
    accidental_rate: float = 0.0,
) -> EnhancementReport:
    """Is the corrected fringe peak above, and the trough below, the sum
    of the independent-path rates?  Margins in Hz with propagated errors."""
    total = lo_coinc + dc_coinc
    c_corr = fit.offset_c - accidental_rate
    var_sum = fit.offset_c_err**2 + fit.amplitude_a_err**2 + 2.0 * fit.cov_ca
    var_diff = fit.offset_c_err**2 + fit.amplitude_a_err**2 - 2.0 * fit.cov_ca
    peak_margin = (c_corr + fit.amplitude_a) - total
    trough_margin = total - (c_corr - fit.amplitude_a)
    return EnhancementReport(
        enhanced=peak_margin > 0,
        peak_margin=peak_margin,
        peak_margin_err=math.sqrt(max(var_sum, 0.0)),
        suppressed=trough_margin > 0,
        trough_margin=trough_margin,
        trough_margin_err=math.sqrt(max(var_diff, 0.0)),
    )


def corrected_rates(records: Sequence[ScanRecord], window: float) -> np.ndarray:
    """Coincidence rates with per-point accidentals removed, estimated
    from the measured singles of each record: ``S_A * S_B * window``."""
    return np.array(
        [r.rate_cc - r.rate_a * r.rate_b * window for r in records], dtype=float
    )
