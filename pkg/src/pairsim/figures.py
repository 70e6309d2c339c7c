"""Built-in scenarios and the figure-reproduction pipelines.

Each pipeline simulates its scan, runs the fringe analysis and evaluates
the corresponding validation gates, returning the produced files (CSV
tables plus a plain-text report with one PASS/FAIL line per gate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

from .analysis import (
    FringeFit,
    corrected_rates,
    enhancement_check,
    fit_fringe,
    upconversion_fraction,
    visibility,
)
from .detection import ExperimentSetup, rates_at, record_seed, simulate_scan
from .model import phase_from_delay
from .scantable import to_csv
from .scenario import Scenario, build_setup, load_scenario, resolve_scenario

FIGURES = ("fig3", "fig4", "fig5")

#: Gate bands shared by the pipelines and the acceptance suite.
RAW_VIS_BAND = (0.45, 0.51)
CORR_VIS_BAND = (0.54, 0.60)
PERIOD_TOLERANCE = 0.05
FIG5_VIS_BAND = (0.18, 0.20)
FIG5_FRACTION_BAND = (0.14, 0.185)
FIG4_RATIO_BAND = (50.0, 200.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name}: {status} ({self.detail})"


@dataclass
class FigureBundle:
    figure: str
    files: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def report(self) -> str:
        return self.files.get(f"{self.figure}_report.txt", "")


def builtin_scenario(name: str) -> Scenario:
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURES}")
    path = resources.files("pairsim").joinpath(f"scenarios/{name}.yaml")
    return load_scenario(str(path))


def independent_path_rates(setup: ExperimentSetup) -> tuple[float, float]:
    """Noiseless coincidence rates of the LO path alone and the
    down-conversion path alone (no accidentals)."""
    det = setup.detection
    ee = det.eta_a * det.eta_b * det.rep_rate
    lo = ee * setup.lo_pair_efficiency * abs(setup.source.lo_product) ** 2
    dc = ee * setup.source.epsilon**2
    return lo, dc


def mean_accidental_rate(setup: ExperimentSetup, delays) -> float:
    """Phase-averaged analytic accidental rate over a delay grid."""
    rates = [setup_accidentals(setup, d) for d in delays]
    return sum(rates) / len(rates)


def setup_accidentals(setup: ExperimentSetup, delay: float) -> float:
    from .detection import setup_rates

    return setup_rates(setup, delay).coinc_accidental


def _fit_lines(tag: str, fit: FringeFit) -> list[str]:
    return [
        f"{tag}.offset_hz = {fit.offset_c:.6g} +- {fit.offset_c_err:.3g}",
        f"{tag}.amplitude_hz = {fit.amplitude_a:.6g} +- {fit.amplitude_a_err:.3g}",
        f"{tag}.period_fs = {fit.period * 1e15:.6g} +- {fit.period_err * 1e15:.3g}",
        f"{tag}.phase_rad = {fit.phase0:.6g} +- {fit.phase0_err:.3g}",
        f"{tag}.reduced_chi2 = {fit.reduced_chi2:.4g}",
    ]


def _in_band(value: float, band: tuple[float, float]) -> bool:
    return band[0] <= value <= band[1]


def reproduce_fig3(seed: int | None = None) -> FigureBundle:
    """Balanced scan: fringe visibilities, period and the
    enhancement/suppression margins."""
    scenario, _ = resolve_scenario(builtin_scenario("fig3"))
    setup = build_setup(scenario)
    master = scenario.scan.seed if seed is None else seed
    delays = scenario.scan.delays_s()
    records = simulate_scan(delays, setup, master, scenario.scan.integration_time_s)

    period_guess = setup.pulses.pump_period
    fit_raw = fit_fringe(records, period_guess)
    window = setup.detection.coinc_window
    fit_corr = fit_fringe(
        records, period_guess, rates_override=corrected_rates(records, window)
    )
    acc_mean = mean_accidental_rate(setup, delays)
    raw = visibility(fit_raw, 0.0)
    corr = visibility(fit_corr, 0.0)
    lo, dc = independent_path_rates(setup)
    enh = enhancement_check(fit_corr, lo, dc, accidental_rate=0.0)

    checks = [
        Check(
            "raw_visibility_band",
            _in_band(raw.raw, RAW_VIS_BAND),
            f"raw = {raw.raw:.4f} +- {raw.raw_err:.4f}, band {RAW_VIS_BAND}",
        ),
        Check(
            "corrected_visibility_band",
            _in_band(corr.raw, CORR_VIS_BAND),
            f"corrected = {corr.raw:.4f} +- {corr.raw_err:.4f}, band {CORR_VIS_BAND}",
        ),
        Check(
            "fringe_period",
            abs(fit_raw.period - period_guess) <= PERIOD_TOLERANCE * period_guess,
            f"period = {fit_raw.period * 1e15:.4f} fs vs pump "
            f"{period_guess * 1e15:.4f} fs (tol {PERIOD_TOLERANCE:.0%})",
        ),
        Check(
            "peak_enhancement_3sigma",
            enh.enhanced and enh.peak_margin > 3.0 * enh.peak_margin_err,
            f"peak margin = {enh.peak_margin:.3f} +- {enh.peak_margin_err:.3f} Hz "
            f"over LO+DC = {lo + dc:.3f} Hz",
        ),
        Check(
            "trough_suppression_3sigma",
            enh.suppressed and enh.trough_margin > 3.0 * enh.trough_margin_err,
            f"trough margin = {enh.trough_margin:.3f} +- {enh.trough_margin_err:.3f} Hz",
        ),
    ]
    lines = [
        f"figure = fig3 (seed {master})",
        f"accidental_rate_hz = {acc_mean:.6g}",
        f"lo_coinc_hz = {lo:.6g}",
        f"dc_coinc_hz = {dc:.6g}",
        *_fit_lines("fit_raw", fit_raw),
        *_fit_lines("fit_corrected", fit_corr),
        f"visibility_raw = {raw.raw:.6g} +- {raw.raw_err:.3g}",
        f"visibility_corrected = {corr.raw:.6g} +- {corr.raw_err:.3g}",
        *[c.line() for c in checks],
    ]
    return FigureBundle(
        figure="fig3",
        files={
            "fig3_scan.csv": to_csv(records),
            "fig3_report.txt": "\n".join(lines) + "\n",
        },
        checks=checks,
    )


_FIG4_ANGLES = (-45.0, 0.0, 45.0, 90.0)


def _angle_tag(angle: float) -> str:
    return f"m{abs(angle):g}" if angle < 0 else f"{angle:g}"


def analytic_modulation_identity(setup: ExperimentSetup) -> tuple[float, float, float]:
    """Noiseless modulation amplitudes: singles-A (Hz), coincidence (Hz)
    and the relative mismatch of ``A_singles * eta_b`` vs ``A_coinc``."""
    hi = rates_at(
        setup.source, 0.0, setup.overlap, setup.detection,
        lo_pair_efficiency=setup.lo_pair_efficiency,
    )
    lo = rates_at(
        setup.source, math.pi, setup.overlap, setup.detection,
        lo_pair_efficiency=setup.lo_pair_efficiency,
    )
    a_singles = (hi.singles_a - lo.singles_a) / 2.0
    a_coinc = (hi.coinc_true - lo.coinc_true) / 2.0
    if a_coinc == 0.0:
        return a_singles, a_coinc, 0.0 if a_singles == 0.0 else math.inf
    mismatch = abs(a_singles * setup.detection.eta_b - a_coinc) / abs(a_coinc)
    return a_singles, a_coinc, mismatch


def reproduce_fig4(seed: int | None = None) -> FigureBundle:
    """Polarizer truth table: singles fringes exist only when both LO
    arms are open, and their contrast sits far below the coincidence
    contrast of the same scan."""
    base = builtin_scenario("fig4")
    master = base.scan.seed if seed is None else seed
    period_guess = base.pulses.to_pulse_train().pump_period

    files = {}
    records_by_angle = {}
    for index, angle in enumerate(_FIG4_ANGLES):
        scenario = base.model_copy(update={"polarizer_angle_deg": angle})
        setup = build_setup(scenario)
        records = simulate_scan(
            scenario.scan.delays_s(),
            setup,
            record_seed(master, index),
            scenario.scan.integration_time_s,
        )
        records_by_angle[angle] = records
        files[f"fig4_scan_{_angle_tag(angle)}.csv"] = to_csv(records)

    fit45 = fit_fringe(records_by_angle[45.0], period_guess, channel="singles_a")
    fit45_cc = fit_fringe(records_by_angle[45.0], period_guess)
    vis_singles = fit45.amplitude_a / fit45.offset_c
    vis_coinc = fit45_cc.amplitude_a / fit45_cc.offset_c
    ratio = vis_coinc / vis_singles if vis_singles > 0 else math.inf

    null_fits = {
        angle: fit_fringe(
            records_by_angle[angle],
            period_guess,
            channel="singles_a",
            fixed_period=fit45.period,
            fixed_phase=fit45.phase0,
        )
        for angle in (-45.0, 0.0, 90.0)
    }

    setup45 = build_setup(base.model_copy(update={"polarizer_angle_deg": 45.0}))
    a_singles, a_coinc, mismatch = analytic_modulation_identity(setup45)

    checks = [
        Check(
            "singles_fringe_at_45",
            fit45.amplitude_a > 5.0 * fit45.amplitude_a_err,
            f"A = {fit45.amplitude_a:.2f} +- {fit45.amplitude_a_err:.2f} Hz "
            f"({fit45.amplitude_a / fit45.amplitude_a_err:.1f} sigma)",
        ),
    ]
    for angle, fit in null_fits.items():
        checks.append(
            Check(
                f"no_singles_fringe_at_{_angle_tag(angle)}",
                fit.amplitude_a < 2.0 * fit.amplitude_a_err,
                f"A = {fit.amplitude_a:.2f} +- {fit.amplitude_a_err:.2f} Hz",
            )
        )
    checks.append(
        Check(
            "visibility_ratio_band",
            _in_band(ratio, FIG4_RATIO_BAND),
            f"coincidence/singles visibility = {vis_coinc:.4f}/{vis_singles:.6f} "
            f"= {ratio:.1f}, band {FIG4_RATIO_BAND}",
        )
    )
    checks.append(
        Check(
            "modulation_identity",
            mismatch <= 1e-12,
            f"|A_singles*eta_b - A_coinc|/A_coinc = {mismatch:.2e} "
            f"(A_singles = {a_singles:.4f} Hz, A_coinc = {a_coinc:.6f} Hz)",
        )
    )
    lines = [
        f"figure = fig4 (seed {master})",
        *_fit_lines("singles_fit_45", fit45),
        *_fit_lines("coincidence_fit_45", fit45_cc),
        f"visibility_singles_45 = {vis_singles:.6g}",
        f"visibility_coincidence_45 = {vis_coinc:.6g}",
        f"visibility_ratio = {ratio:.6g}",
        *[
            f"null_amplitude_{_angle_tag(angle)}_hz = "
            f"{fit.amplitude_a:.4g} +- {fit.amplitude_a_err:.3g}"
            for angle, fit in null_fits.items()
        ],
        *[c.line() for c in checks],
    ]
    files["fig4_report.txt"] = "\n".join(lines) + "\n"
    return FigureBundle(figure="fig4", files=files, checks=checks)


def reproduce_fig5(seed: int | None = None) -> FigureBundle:
    """Imbalanced scan: corrected contrast, removed-pair fraction and the
    significance of the drop below the LO-alone rate."""
    scenario, _ = resolve_scenario(builtin_scenario("fig5"))
    setup = build_setup(scenario)
    master = scenario.scan.seed if seed is None else seed
    delays = scenario.scan.delays_s()
    records = simulate_scan(delays, setup, master, scenario.scan.integration_time_s)

    period_guess = setup.pulses.pump_period
    fit_raw = fit_fringe(records, period_guess)
    fit_corr = fit_fringe(
        records,
        period_guess,
        rates_override=corrected_rates(records, setup.detection.coinc_window),
    )
    lo, dc = independent_path_rates(setup)
    vis_corr = visibility(fit_corr, 0.0)
    upc = upconversion_fraction(fit_corr, lo, dc, accidental_rate=0.0)

    checks = [
        Check(
            "corrected_visibility_band",
            _in_band(vis_corr.raw, FIG5_VIS_BAND),
            f"corrected = {vis_corr.raw:.4f} +- {vis_corr.raw_err:.4f}, "
            f"band {FIG5_VIS_BAND}",
        ),
        Check(
            "upconverted_fraction_band",
            _in_band(upc.fraction, FIG5_FRACTION_BAND),
            f"fraction = {upc.fraction:.4f} +- {upc.fraction_err:.4f}, "
            f"band {FIG5_FRACTION_BAND}",
        ),
        Check(
            "minimum_below_lo_3sigma",
            upc.significance_below_lo >= 3.0,
            f"R_min = {upc.r_min:.3f} +- {upc.r_min_err:.3f} Hz vs LO-alone "
            f"{lo:.3f} Hz ({upc.significance_below_lo:.1f} sigma)",
        ),
    ]
    lines = [
        f"figure = fig5 (seed {master})",
        f"lo_coinc_hz = {lo:.6g}",
        f"dc_coinc_hz = {dc:.6g}",
        *_fit_lines("fit_raw", fit_raw),
        *_fit_lines("fit_corrected", fit_corr),
        f"visibility_corrected = {vis_corr.raw:.6g} +- {vis_corr.raw_err:.3g}",
        f"upconverted_fraction = {upc.fraction:.6g} +- {upc.fraction_err:.3g}",
        f"upconverted_fraction_from_amplitude = {upc.fraction_from_amplitude:.6g}",
        f"corrected_minimum_hz = {upc.r_min:.6g} +- {upc.r_min_err:.3g}",
        f"drop_significance_sigma = {upc.significance_below_lo:.4g}",
        *[c.line() for c in checks],
    ]
    return FigureBundle(
        figure="fig5",
        files={
            "fig5_scan.csv": to_csv(records),
            "fig5_report.txt": "\n".join(lines) + "\n",
        },
        checks=checks,
    )


def reproduce_figure(figure: str, seed: int | None = None) -> FigureBundle:
    pipelines = {
        "fig3": reproduce_fig3,
        "fig4": reproduce_fig4,
        "fig5": reproduce_fig5,
    }
    if figure not in pipelines:
        raise ValueError(f"unknown figure {figure!r}; choose from {FIGURES}")
    return pipelines[figure](seed=seed)
