"""Mode-overlap (distinguishability) factors for the interference term.

The cross term of the pair model is multiplied by a scalar gamma in
[0, 1], decomposed as ``gamma_spectral * gamma_spatial``.  Spectral
overlap comes from Gaussian field-amplitude profiles; spatial overlap is
a direct scalar (a pinhole selects a single spatial mode and the residual
mismatch is not decomposed further).  An optional Gaussian envelope in
delay models loss of temporal overlap for scans far beyond the filtered
coherence time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import c as _C_LIGHT


@dataclass(frozen=True)
class GaussianSpectrum:
    """Gaussian field-amplitude spectrum.

    ``center``: center wavelength, meters.  ``amplitude_width``: standard
    deviation of the *intensity* profile in angular frequency (rad/s);
    the amplitude profile is exp(-(w - w0)^2 / (4 s^2)).
    """

    center: float
    amplitude_width: float

    def __post_init__(self):
        if self.center <= 0:
            raise ValueError("center wavelength must be positive")
        if self.amplitude_width <= 0:
            raise ValueError("amplitude_width must be positive")

    @property
    def center_angular_frequency(self) -> float:
        return 2.0 * math.pi * _C_LIGHT / self.center

    @classmethod
    def from_fwhm(cls, center: float, fwhm_wavelength: float) -> "GaussianSpectrum":
        """Build from an intensity FWHM quoted in wavelength units."""
        fwhm_omega = 2.0 * math.pi * _C_LIGHT * fwhm_wavelength / center**2
        sigma = fwhm_omega / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        return cls(center=center, amplitude_width=sigma)


@dataclass(frozen=True)
class OverlapModel:
    """Total distinguishability factor and optional delay envelope."""

    gamma_spectral: float = 1.0
    gamma_spatial: float = 1.0
    envelope_sigma: float | None = None  # seconds; None disables

    def __post_init__(self):
        for name in ("gamma_spectral", "gamma_spatial"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val!r}")
        if self.envelope_sigma is not None and self.envelope_sigma <= 0:
            raise ValueError("envelope_sigma must be positive when set")

    @property
    def gamma(self) -> float:
        return self.gamma_spectral * self.gamma_spatial


def filtered_spectrum(
    spectrum: GaussianSpectrum, filt: GaussianSpectrum
) -> GaussianSpectrum:
    """Spectrum after a Gaussian bandpass filter (product of amplitude
    profiles): widths combine as ``s1*s2/sqrt(s1^2+s2^2)``, centers by the
    variance-weighted mean in angular frequency."""
    s1, s2 = spectrum.amplitude_width, filt.amplitude_width
    width = s1 * s2 / math.sqrt(s1**2 + s2**2)
    w1 = spectrum.center_angular_frequency
    w2 = filt.center_angular_frequency
    center_omega = (w1 * s2**2 + w2 * s1**2) / (s1**2 + s2**2)
    return GaussianSpectrum(
        center=2.0 * math.pi * _C_LIGHT / center_omega, amplitude_width=width
    )


def gaussian_mode_overlap(a: GaussianSpectrum, b: GaussianSpectrum) -> float:
    """|<f_a|f_b>| for unit-normalized Gaussian amplitude profiles:

        sqrt(2 s_a s_b / (s_a^2 + s_b^2)) * exp(-D^2 / (4 (s_a^2 + s_b^2)))

    with D the center detuning in angular frequency.  Symmetric, <= 1,
    equal to 1 iff the spectra are identical.
    """
    sa, sb = a.amplitude_width, b.amplitude_width
    detuning = a.center_angular_frequency - b.center_angular_frequency
    ssum = sa**2 + sb**2
    return math.sqrt(2.0 * sa * sb / ssum) * math.exp(-(detuning**2) / (4.0 * ssum))


def fringe_envelope(delay: float, model: OverlapModel) -> float:
    """Gaussian decay of the interference term with delay; 1 when the
    envelope is disabled."""
    if model.envelope_sigma is None:
        return 1.0
    return math.exp(-(delay**2) / (2.0 * model.envelope_sigma**2))


def coherence_sigma(center: float, fwhm_wavelength: float) -> float:
    """Coherence-time scale ``lambda^2 / (c * dlambda)`` of a bandpass
    filter, used as the default envelope sigma (about 219 fs for a 10-nm
    filter at 810 nm)."""
    return center**2 / (_C_LIGHT * fwhm_wavelength)
