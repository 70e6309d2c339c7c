"""FastAPI service wrapping the simulation core.

Endpoints mirror the CLI subcommands: calibrate, scan, fit and
reproduce/{fig3,fig4,fig5}.  Package errors map to structured 4xx
responses carrying an ``error_type`` the CLI translates into exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..analysis import (
    corrected_rates,
    fit_fringe,
    upconversion_fraction,
    visibility,
)
from ..errors import FitFailureError, PairSimError
from ..figures import FIGURES, reproduce_figure
from ..scantable import read_records, to_csv, to_json_lines
from ..scenario import build_setup, dumps_scenario, resolve_scenario
from ..detection import simulate_scan
from . import schemas

NS = 1e-9
FS = 1e-15


def _fit_model(fit) -> schemas.FringeFitModel:
    return schemas.FringeFitModel(
        offset_hz=fit.offset_c,
        offset_err_hz=fit.offset_c_err,
        amplitude_hz=fit.amplitude_a,
        amplitude_err_hz=fit.amplitude_a_err,
        period_s=fit.period,
        period_err_s=fit.period_err,
        phase_rad=fit.phase0,
        phase_err_rad=fit.phase0_err,
        reduced_chi2=fit.reduced_chi2,
        n_points=fit.n_points,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="pairsim",
        version=__version__,
        description=(
            "Photon-pair interference simulation between a pulsed "
            "down-conversion source and weak local-oscillator beams"
        ),
    )

    @app.exception_handler(PairSimError)
    async def _pairsim_error(request: Request, exc: PairSimError):
        error_type = (
            "fit_failure" if isinstance(exc, FitFailureError) else "validation"
        )
        return JSONResponse(
            status_code=400,
            content=schemas.ErrorResponse(
                error_type=error_type, message=str(exc)
            ).model_dump(),
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content=schemas.ErrorResponse(
                error_type="validation", message=str(exc)
            ).model_dump(),
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/calibrate", response_model=schemas.CalibrateResponse)
    def calibrate(request: schemas.CalibrateRequest):
        resolved, notes = resolve_scenario(request.scenario)
        text = dumps_scenario(resolved, header_comments=["resolved scenario"] + notes)
        return schemas.CalibrateResponse(scenario=resolved, yaml=text, notes=notes)

    @app.post("/scan", response_model=schemas.ScanResponse)
    def scan(request: schemas.ScanRequest):
        resolved, _ = resolve_scenario(request.scenario)
        setup = build_setup(resolved)
        seed = resolved.scan.seed if request.seed is None else request.seed
        records = simulate_scan(
            resolved.scan.delays_s(),
            setup,
            seed,
            resolved.scan.integration_time_s,
        )
        table = to_csv(records) if request.format == "csv" else to_json_lines(records)
        return schemas.ScanResponse(
            table=table,
            format=request.format,
            records=[
                schemas.ScanRecordModel(
                    delay_s=r.delay,
                    counts_a=r.counts_a,
                    counts_b=r.counts_b,
                    counts_cc=r.counts_cc,
                    int_time_s=r.integration_time,
                    rate_a_hz=r.rate_a,
                    rate_b_hz=r.rate_b,
                    rate_cc_hz=r.rate_cc,
                    seed=r.rng_seed,
                )
                for r in records
            ],
        )

    @app.post("/fit", response_model=schemas.FitResponse)
    def fit(request: schemas.FitRequest):
        records = read_records(request.table)
        period_guess = request.period_guess_fs * FS
        fit_raw = fit_fringe(records, period_guess, channel=request.channel)

        fit_corr = None
        window = request.coinc_window_ns * NS
        if request.correct_accidentals and request.channel == "coincidences":
            fit_corr = fit_fringe(
                records,
                period_guess,
                rates_override=corrected_rates(records, window),
            )

        if request.accidental_rate_hz is not None:
            accidental = request.accidental_rate_hz
        else:
            accidental = float(
                sum(r.rate_a * r.rate_b * window for r in records) / len(records)
            )

        raw_report = visibility(fit_raw, 0.0)
        if fit_corr is not None:
            corr_report = visibility(fit_corr, 0.0)
            vis = schemas.VisibilityModel(
                raw=raw_report.raw,
                raw_err=raw_report.raw_err,
                corrected=corr_report.raw,
                corrected_err=corr_report.raw_err,
                accidental_rate_used_hz=accidental,
            )
        else:
            scalar = visibility(fit_raw, accidental)
            vis = schemas.VisibilityModel(
                raw=scalar.raw,
                raw_err=scalar.raw_err,
                corrected=scalar.corrected,
                corrected_err=scalar.corrected_err,
                accidental_rate_used_hz=accidental,
            )

        upconversion = None
        if request.lo_coinc_hz is not None and request.dc_coinc_hz is not None:
            reference_fit = fit_corr if fit_corr is not None else fit_raw
            residual_acc = 0.0 if fit_corr is not None else accidental
            upc = upconversion_fraction(
                reference_fit,
                request.lo_coinc_hz,
                request.dc_coinc_hz,
                accidental_rate=residual_acc,
            )
            upconversion = schemas.UpconversionModel(
                fraction=upc.fraction,
                fraction_err=upc.fraction_err,
                fraction_from_amplitude=upc.fraction_from_amplitude,
                r_min_hz=upc.r_min,
                r_min_err_hz=upc.r_min_err,
                significance_below_lo=upc.significance_below_lo,
                physical=upc.physical,
            )

        lines = [
            f"channel = {request.channel}",
            f"offset_hz = {fit_raw.offset_c:.6g} +- {fit_raw.offset_c_err:.3g}",
            f"amplitude_hz = {fit_raw.amplitude_a:.6g} +- {fit_raw.amplitude_a_err:.3g}",
            f"period_fs = {fit_raw.period * 1e15:.6g} +- {fit_raw.period_err * 1e15:.3g}",
            f"phase_rad = {fit_raw.phase0:.6g} +- {fit_raw.phase0_err:.3g}",
            f"reduced_chi2 = {fit_raw.reduced_chi2:.4g}",
            f"visibility_raw = {vis.raw:.6g} +- {vis.raw_err:.3g}",
            f"visibility_corrected = {vis.corrected:.6g} +- {vis.corrected_err:.3g}",
            f"accidental_rate_hz = {vis.accidental_rate_used_hz:.6g}",
        ]
        if upconversion is not None:
            lines += [
                f"upconverted_fraction = {upconversion.fraction:.6g} "
                f"+- {upconversion.fraction_err:.3g}",
                f"corrected_minimum_hz = {upconversion.r_min_hz:.6g} "
                f"+- {upconversion.r_min_err_hz:.3g}",
                f"drop_significance_sigma = {upconversion.significance_below_lo:.4g}",
            ]
        return schemas.FitResponse(
            fit=_fit_model(fit_raw),
            fit_corrected=_fit_model(fit_corr) if fit_corr is not None else None,
            visibility=vis,
            upconversion=upconversion,
            report="\n".join(lines) + "\n",
        )

    @app.post("/reproduce/{figure}", response_model=schemas.ReproduceResponse)
    def reproduce(figure: str, request: schemas.ReproduceRequest):
        if figure not in FIGURES:
            return JSONResponse(
                status_code=404,
                content=schemas.ErrorResponse(
                    error_type="validation",
                    message=f"unknown figure {figure!r}; choose from {FIGURES}",
                ).model_dump(),
            )
        bundle = reproduce_figure(figure, seed=request.seed)
        return schemas.ReproduceResponse(
            figure=bundle.figure,
            files=bundle.files,
            checks=[
                schemas.CheckModel(name=c.name, passed=c.passed, detail=c.detail)
                for c in bundle.checks
            ],
            passed=bundle.passed,
        )

    return app


app = create_app()
