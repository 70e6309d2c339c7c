"""Request/response models of the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..scenario import Scenario


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HealthResponse(_Schema):
    status: str
    version: str


class CalibrateRequest(_Schema):
    scenario: Scenario


class CalibrateResponse(_Schema):
    scenario: Scenario
    yaml: str
    notes: list[str]


class ScanRequest(_Schema):
    scenario: Scenario
    seed: int | None = None
    format: Literal["csv", "json-lines"] = "csv"


class ScanRecordModel(_Schema):
    delay_s: float
    counts_a: int
    counts_b: int
    counts_cc: int
    int_time_s: float
    rate_a_hz: float
    rate_b_hz: float
    rate_cc_hz: float
    seed: int


class ScanResponse(_Schema):
    table: str
    format: Literal["csv", "json-lines"]
    records: list[ScanRecordModel]


class FitRequest(_Schema):
    """Fit a scan table (CSV or JSON-lines text).

    ``period_guess_fs`` defaults to the pump-period prior of the standard
    810/405-nm bench.  When ``correct_accidentals`` is on, per-point
    accidentals estimated from the measured singles and the window are
    removed before the corrected fit.  Supplying both LO and DC reference
    rates adds the pair-removal block to the report.
    """

    table: str
    period_guess_fs: float = Field(default=1.3509345855525159, gt=0)
    channel: Literal["coincidences", "singles_a", "singles_b"] = "coincidences"
    correct_accidentals: bool = True
    coinc_window_ns: float = Field(default=1.07, ge=0)
    accidental_rate_hz: float | None = Field(default=None, ge=0)
    lo_coinc_hz: float | None = Field(default=None, gt=0)
    dc_coinc_hz: float | None = Field(default=None, ge=0)


class FringeFitModel(_Schema):
    offset_hz: float
    offset_err_hz: float
    amplitude_hz: float
    amplitude_err_hz: float
    period_s: float
    period_err_s: float
    phase_rad: float
    phase_err_rad: float
    reduced_chi2: float
    n_points: int


class VisibilityModel(_Schema):
    raw: float
    raw_err: float
    corrected: float
    corrected_err: float
    accidental_rate_used_hz: float


class UpconversionModel(_Schema):
    fraction: float
    fraction_err: float
    fraction_from_amplitude: float
    r_min_hz: float
    r_min_err_hz: float
    significance_below_lo: float
    physical: bool


class FitResponse(_Schema):
    fit: FringeFitModel
    fit_corrected: FringeFitModel | None
    visibility: VisibilityModel
    upconversion: UpconversionModel | None
    report: str


class CheckModel(_Schema):
    name: str
    passed: bool
    detail: str


class ReproduceRequest(_Schema):
    seed: int | None = None


class ReproduceResponse(_Schema):
    figure: str
    files: dict[str, str]
    checks: list[CheckModel]
    passed: bool


class ErrorResponse(_Schema):
    error_type: str
    message: str
