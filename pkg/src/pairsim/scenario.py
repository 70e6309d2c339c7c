"""Scenario configuration: schema, YAML I/O, calibration resolution.

Configs are YAML documents validated against a strict pydantic schema
(schema_version 1): unknown keys are hard errors, and every physical
quantity carries its unit in the key name (``*_hz``, ``*_s``, ``*_fs``,
``*_nm``, ``*_ns``).

A scenario's source is given either as explicit per-pulse amplitudes or
as measured rate targets (never both).  ``resolve_scenario`` turns the
target form into the explicit form by inverting the measured rates:
down-conversion singles/coincidences fix the arm efficiencies and the
pair amplitude, LO singles fix the LO amplitude magnitudes, and the
measured LO-path coincidence rate fixes ``lo_pair_efficiency`` (the
joint-mode-match factor of the two LO beams, which the singles rates
alone cannot determine).  Resolution is idempotent.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import optics
from .detection import DetectionParams, ExperimentSetup
from .model import PulseTrain, SourceParams, calibrate_lo, klyshko_calibrate
from .overlap import OverlapModel

NM = 1e-9
NS = 1e-9
FS = 1e-15


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PulseConfig(_StrictModel):
    rep_rate_hz: float = Field(gt=0)
    lo_wavelength_nm: float = Field(gt=0)
    pump_wavelength_nm: float | None = Field(default=None, gt=0)

    def to_pulse_train(self) -> PulseTrain:
        pump_nm = (
            self.pump_wavelength_nm
            if self.pump_wavelength_nm is not None
            else self.lo_wavelength_nm / 2.0
        )
        return PulseTrain(
            rep_rate=self.rep_rate_hz,
            pump_wavelength=pump_nm * NM,
            lo_wavelength=self.lo_wavelength_nm * NM,
        )


class ComplexAmplitude(_StrictModel):
    mag: float = Field(ge=0)
    phase_rad: float = 0.0

    def to_complex(self) -> complex:
        return self.mag * complex(math.cos(self.phase_rad), math.sin(self.phase_rad))


class AmplitudeSource(_StrictModel):
    """Explicit per-pulse amplitudes, referenced to the polarizer at +45
    degrees."""

    alpha_h: ComplexAmplitude
    alpha_v: ComplexAmplitude
    epsilon: float = Field(ge=0)
    pump_phase_rad: float = 0.0
    lo_pair_efficiency: float = Field(default=1.0, ge=0.0, le=1.0)


class RateTargets(_StrictModel):
    singles_a_hz: float = Field(ge=0)
    singles_b_hz: float = Field(ge=0)
    coinc_hz: float | None = Field(default=None, ge=0)


class TargetSource(_StrictModel):
    """Measured calibration rates (background-subtracted singles)."""

    dc: RateTargets
    lo: RateTargets
    pump_phase_rad: float = 0.0


class SourceConfig(_StrictModel):
    amplitudes: AmplitudeSource | None = None
    targets: TargetSource | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.amplitudes is None) == (self.targets is None):
            raise ValueError(
                "source must provide exactly one of 'amplitudes' or 'targets'"
            )
        return self


class TapConfig(_StrictModel):
    kind: Literal["tap"]
    transmission: float = Field(ge=0, le=1)


class AttenuatorConfig(_StrictModel):
    kind: Literal["attenuator"]
    od: float = Field(ge=0)


class HalfWavePlateConfig(_StrictModel):
    kind: Literal["half_wave_plate"]
    axis_deg: float


class PolarizerConfig(_StrictModel):
    kind: Literal["polarizer"]
    angle_deg: float


ElementConfig = Annotated[
    Union[TapConfig, AttenuatorConfig, HalfWavePlateConfig, PolarizerConfig],
    Field(discriminator="kind"),
]


def element_from_config(cfg) -> optics.Element:
    if isinstance(cfg, TapConfig):
        return optics.Tap(transmission=cfg.transmission)
    if isinstance(cfg, AttenuatorConfig):
        return optics.Attenuator(od=cfg.od)
    if isinstance(cfg, HalfWavePlateConfig):
        return optics.HalfWavePlate(axis=math.radians(cfg.axis_deg))
    if isinstance(cfg, PolarizerConfig):
        return optics.Polarizer(angle=math.radians(cfg.angle_deg))
    raise TypeError(f"unknown element config {cfg!r}")


class OverlapConfig(_StrictModel):
    gamma_spectral: float = Field(default=1.0, ge=0, le=1)
    gamma_spatial: float = Field(default=1.0, ge=0, le=1)
    envelope_sigma_fs: float | None = Field(default=None, gt=0)

    def to_overlap(self) -> OverlapModel:
        sigma = None if self.envelope_sigma_fs is None else self.envelope_sigma_fs * FS
        return OverlapModel(
            gamma_spectral=self.gamma_spectral,
            gamma_spatial=self.gamma_spatial,
            envelope_sigma=sigma,
        )


class DetectionConfig(_StrictModel):
    eta_a: float | None = Field(default=None, gt=0, le=1)
    eta_b: float | None = Field(default=None, gt=0, le=1)
    dark_a_hz: float = Field(default=0.0, ge=0)
    dark_b_hz: float = Field(default=0.0, ge=0)
    background_a_hz: float = Field(default=0.0, ge=0)
    background_b_hz: float = Field(default=0.0, ge=0)
    coinc_window_ns: float = Field(default=1.07, ge=0)


class ScanConfig(_StrictModel):
    delay_start_fs: float
    delay_stop_fs: float
    n_points: int = Field(ge=0)
    integration_time_s: float = Field(gt=0)
    seed: int = 0

    def delays_s(self) -> list[float]:
        from .detection import scan_delays

        return scan_delays(
            self.delay_start_fs * FS, self.delay_stop_fs * FS, self.n_points
        )


class Scenario(_StrictModel):
    schema_version: Literal[1] = 1
    name: str = ""
    pulses: PulseConfig
    source: SourceConfig
    lo_chain: list[ElementConfig] = Field(default_factory=list)
    polarizer_angle_deg: float = 45.0
    overlap: OverlapConfig = Field(default_factory=OverlapConfig)
    detection: DetectionConfig = Field(default_factory=DetectionConfig)
    scan: ScanConfig

    @model_validator(mode="after")
    def _etas_present_when_explicit(self):
        if self.source.amplitudes is not None:
            if self.detection.eta_a is None or self.detection.eta_b is None:
                raise ValueError(
                    "detection.eta_a/eta_b are required when source amplitudes "
                    "are explicit"
                )
        return self


def loads_scenario(text: str) -> Scenario:
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ValueError("scenario document must be a mapping")
    return Scenario.model_validate(data)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_scenario(fh.read())


def dumps_scenario(scenario: Scenario, header_comments: list[str] | None = None) -> str:
    body = yaml.safe_dump(
        scenario.model_dump(mode="json"), sort_keys=False, default_flow_style=False
    )
    if not header_comments:
        return body
    header = "".join(f"# {line}\n" for line in header_comments)
    return header + body


def save_scenario(scenario: Scenario, path, header_comments: list[str] | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(scenario, header_comments))


def resolve_scenario(scenario: Scenario) -> tuple[Scenario, list[str]]:
    """Replace rate targets by the amplitudes and efficiencies they imply.

    Returns the resolved scenario and human-readable derivation notes.
    Already-resolved scenarios pass through unchanged (idempotent).
    """
    if scenario.source.amplitudes is not None:
        return scenario, []

    targets = scenario.source.targets
    pulses = scenario.pulses.to_pulse_train()
    notes = []

    if targets.dc.coinc_hz is None or targets.dc.coinc_hz <= 0:
        raise ValueError("dc targets need a positive coincidence rate")
    cal = klyshko_calibrate(
        targets.dc.singles_a_hz, targets.dc.singles_b_hz, targets.dc.coinc_hz, pulses
    )
    notes.append(
        f"arm efficiencies from dc rates ({targets.dc.singles_a_hz:g}/"
        f"{targets.dc.singles_b_hz:g}/{targets.dc.coinc_hz:g} 1/s): "
        f"eta_a={cal.eta_a:.6g}, eta_b={cal.eta_b:.6g}"
    )
    notes.append(
        f"pair amplitude from inferred source rate {cal.pair_rate:.6g} 1/s: "
        f"epsilon={cal.epsilon:.6g}"
    )

    if targets.lo.singles_a_hz > 0 or targets.lo.singles_b_hz > 0:
        alpha_h, alpha_v = calibrate_lo(
            targets.lo.singles_a_hz,
            targets.lo.singles_b_hz,
            cal.eta_a,
            cal.eta_b,
            pulses,
        )
        notes.append(
            f"LO amplitudes from LO singles ({targets.lo.singles_a_hz:g}/"
            f"{targets.lo.singles_b_hz:g} 1/s): |alpha_h|={alpha_h:.6g}, "
            f"|alpha_v|={alpha_v:.6g}"
        )
        if targets.lo.coinc_hz is not None and targets.lo.coinc_hz > 0:
            product_rate = (
                targets.lo.singles_a_hz * targets.lo.singles_b_hz / pulses.rep_rate
            )
            kappa = targets.lo.coinc_hz / product_rate
            if not 0.0 < kappa <= 1.0:
                raise ValueError(
                    f"implied lo_pair_efficiency {kappa:.4g} outside (0, 1]; "
                    "LO coincidence target inconsistent with LO singles"
                )
            notes.append(
                "LO pair-channel mode match from measured LO coincidences "
                f"{targets.lo.coinc_hz:g} 1/s vs {product_rate:.6g} 1/s implied "
                f"by the singles product: lo_pair_efficiency={kappa:.6g}"
            )
        else:
            kappa = 1.0
    else:
        alpha_h = alpha_v = 0.0
        kappa = 1.0
        notes.append("LO blocked (zero singles targets): alpha_h = alpha_v = 0")

    resolved_source = SourceConfig(
        amplitudes=AmplitudeSource(
            alpha_h=ComplexAmplitude(mag=alpha_h),
            alpha_v=ComplexAmplitude(mag=alpha_v),
            epsilon=cal.epsilon,
            pump_phase_rad=targets.pump_phase_rad,
            lo_pair_efficiency=kappa,
        )
    )
    resolved = scenario.model_copy(
        update={
            "source": resolved_source,
            "detection": scenario.detection.model_copy(
                update={"eta_a": cal.eta_a, "eta_b": cal.eta_b}
            ),
        }
    )
    return resolved, notes


def build_setup(scenario: Scenario) -> ExperimentSetup:
    """Runtime physics bundle for a resolved scenario.

    The polarizer angle scales the LO arm amplitudes relative to their
    +45-degree calibration reference.
    """
    if scenario.source.amplitudes is None:
        raise ValueError("scenario is unresolved; call resolve_scenario first")
    amp = scenario.source.amplitudes
    det = scenario.detection
    rh, rv = optics.polarizer_arm_factors(math.radians(scenario.polarizer_angle_deg))
    source = SourceParams(
        alpha_h=amp.alpha_h.to_complex() * rh,
        alpha_v=amp.alpha_v.to_complex() * rv,
        epsilon=amp.epsilon,
        pump_phase=amp.pump_phase_rad,
    )
    return ExperimentSetup(
        source=source,
        pulses=scenario.pulses.to_pulse_train(),
        overlap=scenario.overlap.to_overlap(),
        detection=DetectionParams(
            eta_a=det.eta_a,
            eta_b=det.eta_b,
            dark_a=det.dark_a_hz,
            dark_b=det.dark_b_hz,
            background_a=det.background_a_hz,
            background_b=det.background_b_hz,
            coinc_window=det.coinc_window_ns * NS,
            rep_rate=scenario.pulses.rep_rate_hz,
        ),
        lo_pair_efficiency=amp.lo_pair_efficiency,
    )
