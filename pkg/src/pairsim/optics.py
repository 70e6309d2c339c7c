"""Jones calculus for the LO preparation chain.

Elements of the bench: beamsplitter taps, neutral-density attenuation, a
half-wave plate, and a polarizer.  States are per-pulse amplitude vectors
in the H/V basis (not normalized polarization states), so every element
is norm-nonincreasing.  Angles are radians from horizontal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class JonesVector:
    h: complex
    v: complex

    def __post_init__(self):
        for comp in (self.h, self.v):
            z = complex(comp)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"Jones components must be finite, got {comp!r}")

    @property
    def norm_sq(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.v], dtype=complex)


@dataclass(frozen=True)
class Tap:
    """Beamsplitter pickoff with power transmission T."""

    transmission: float

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError("transmission must lie in [0, 1]")


@dataclass(frozen=True)
class Attenuator:
    """Neutral-density filter of optical density OD (power factor 10^-OD)."""

    od: float

    def __post_init__(self):
        if self.od < 0:
            raise ValueError("optical density must be nonnegative")


@dataclass(frozen=True)
class HalfWavePlate:
    """Ideal lossless half-wave plate with fast axis at ``axis`` radians."""

    axis: float


@dataclass(frozen=True)
class Polarizer:
    """Ideal linear polarizer transmitting along ``angle`` radians."""

    angle: float


Element = Union[Tap, Attenuator, HalfWavePlate, Polarizer]
ElementChain = list


def jones_matrix(element: Element) -> np.ndarray:
    if isinstance(element, Tap):
        return math.sqrt(element.transmission) * np.eye(2, dtype=complex)
    if isinstance(element, Attenuator):
        return 10.0 ** (-element.od / 2.0) * np.eye(2, dtype=complex)
    if isinstance(element, HalfWavePlate):
        c2, s2 = math.cos(2 * element.axis), math.sin(2 * element.axis)
        return np.array([[c2, s2], [s2, -c2]], dtype=complex)
    if isinstance(element, Polarizer):
        c, s = math.cos(element.angle), math.sin(element.angle)
        return np.array([[c * c, c * s], [c * s, s * s]], dtype=complex)
    raise TypeError(f"unknown optical element {element!r}")


def apply_element(state: JonesVector, element: Element) -> JonesVector:
    out = jones_matrix(element) @ state.as_array()
    return JonesVector(h=complex(out[0]), v=complex(out[1]))


def propagate_chain(state: JonesVector, chain: list[Element]) -> JonesVector:
    """Left-to-right fold of the chain; the empty chain is the identity."""
    for element in chain:
        state = apply_element(state, element)
    return state


def polarizer_arm_factors(angle: float) -> tuple[float, float]:
    """Per-arm amplitude factors for a polarizer in the diagonal LO path.

    The LO enters the polarizer linearly polarized at +45 degrees; the
    calibrated arm amplitudes refer to the polarizer set to +45 degrees
    (full transmission).  Rotating it to ``angle`` scales the H and V
    amplitudes by ``(rh, rv)`` relative to that reference: rh = rv = 1 at
    +45, (1, 0) at 0, (0, 1) at 90 and (0, 0) at -45 degrees.
    """
    diagonal = JonesVector(h=1.0 / math.sqrt(2.0), v=1.0 / math.sqrt(2.0))
    out = apply_element(diagonal, Polarizer(angle))
    reference = apply_element(diagonal, Polarizer(math.pi / 4.0))
    factors = [(out.h / reference.h).real, (out.v / reference.v).real]
    # crossed settings leave ~1e-16 trig residue; a blocked arm is blocked
    return tuple(0.0 if abs(f) < 1e-12 else float(f) for f in factors)
