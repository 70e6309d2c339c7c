import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pairsim.optics import (
    Attenuator,
    HalfWavePlate,
    JonesVector,
    Polarizer,
    Tap,
    apply_element,
    jones_matrix,
    polarizer_arm_factors,
    propagate_chain,
)

DIAG = JonesVector(h=1 / math.sqrt(2), v=1 / math.sqrt(2))


def scaled(state: JonesVector, factor: complex) -> JonesVector:
    return JonesVector(h=state.h * factor, v=state.v * factor)


class TestPolarizerTruthTable:
    """Diagonal input against the four bench polarizer settings."""

    def test_45_passes_both(self):
        out = apply_element(scaled(DIAG, 0.3), Polarizer(math.pi / 4))
        assert out.h == pytest.approx(0.3 / math.sqrt(2), rel=1e-12)
        assert out.v == pytest.approx(0.3 / math.sqrt(2), rel=1e-12)

    def test_minus_45_blocks_both(self):
        out = apply_element(scaled(DIAG, 0.3), Polarizer(-math.pi / 4))
        assert abs(out.h) < 1e-15
        assert abs(out.v) < 1e-15

    def test_0_blocks_one(self):
        out = apply_element(scaled(DIAG, 0.3), Polarizer(0.0))
        assert out.h == pytest.approx(0.3 / math.sqrt(2), rel=1e-12)
        assert abs(out.v) < 1e-15

    def test_90_blocks_the_other(self):
        out = apply_element(scaled(DIAG, 0.3), Polarizer(math.pi / 2))
        assert abs(out.h) < 1e-15
        assert out.v == pytest.approx(0.3 / math.sqrt(2), rel=1e-12)


class TestChains:
    def test_empty_chain_is_identity(self):
        state = JonesVector(h=0.2 + 0.1j, v=-0.3j)
        assert propagate_chain(state, []) == state

    def test_two_ten_percent_taps(self):
        out = propagate_chain(JonesVector(h=1.0, v=0.0), [Tap(0.1), Tap(0.1)])
        assert out.h == pytest.approx(0.1, rel=1e-12)
        assert out.v == 0.0

    def test_half_wave_plate_rotates_v_to_diagonal(self):
        out = apply_element(JonesVector(h=0.0, v=1.0), HalfWavePlate(math.radians(22.5)))
        assert abs(out.h) == pytest.approx(abs(out.v), rel=1e-12)
        assert out.norm_sq == pytest.approx(1.0, rel=1e-12)
        # cross-check against the explicit rotation-reflection product
        theta = math.radians(22.5)
        rot = lambda t: np.array(
            [[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]
        )
        ref = rot(theta) @ np.diag([1.0, -1.0]) @ rot(-theta)
        np.testing.assert_allclose(
            jones_matrix(HalfWavePlate(theta)), ref, atol=1e-15
        )

    def test_attenuator_power_law(self):
        out = apply_element(JonesVector(h=1.0, v=1.0), Attenuator(2.0))
        assert out.norm_sq == pytest.approx(2.0 * 1e-2, rel=1e-12)

    def test_bench_chain_amplitude_budget(self):
        # tap, ND, half-wave plate, polarizer at 45, tap: V-polarized
        # input; the plate axis at 67.5 deg maps V onto +45 deg, so the
        # polarizer passes everything
        chain = [
            Tap(0.1),
            Attenuator(1.0),
            HalfWavePlate(math.radians(67.5)),
            Polarizer(math.pi / 4),
            Tap(0.1),
        ]
        out = propagate_chain(JonesVector(h=0.0, v=1.0), chain)
        # two 10% taps and OD 1 leave 1e-3 of the power
        assert out.norm_sq == pytest.approx(1e-3, rel=1e-9)
        assert out.h == pytest.approx(out.v, rel=1e-12)


finite_amp = st.complex_numbers(
    min_magnitude=0, max_magnitude=5, allow_nan=False, allow_infinity=False
)
angles = st.floats(-math.pi, math.pi)


class TestProperties:
    @given(h=finite_amp, v=finite_amp, angle=angles)
    def test_polarizer_norm_nonincreasing(self, h, v, angle):
        state = JonesVector(h=h, v=v)
        out = apply_element(state, Polarizer(angle))
        assert out.norm_sq <= state.norm_sq * (1 + 1e-9) + 1e-12

    @given(h=finite_amp, v=finite_amp, axis=angles)
    def test_half_wave_plate_lossless(self, h, v, axis):
        state = JonesVector(h=h, v=v)
        out = apply_element(state, HalfWavePlate(axis))
        assert out.norm_sq == pytest.approx(state.norm_sq, rel=1e-9, abs=1e-12)

    @given(h=finite_amp, v=finite_amp, angle=angles)
    def test_polarizer_idempotent(self, h, v, angle):
        state = JonesVector(h=h, v=v)
        once = apply_element(state, Polarizer(angle))
        twice = apply_element(once, Polarizer(angle))
        assert twice.h == pytest.approx(once.h, rel=1e-9, abs=1e-12)
        assert twice.v == pytest.approx(once.v, rel=1e-9, abs=1e-12)

    @given(h=finite_amp, v=finite_amp, angle=angles)
    def test_crossed_polarizers_annihilate(self, h, v, angle):
        state = JonesVector(h=h, v=v)
        out = propagate_chain(state, [Polarizer(angle), Polarizer(angle + math.pi / 2)])
        assert abs(out.h) < 1e-9
        assert abs(out.v) < 1e-9

    @given(t1=st.floats(0, 1), t2=st.floats(0, 1), h=finite_amp, v=finite_amp)
    def test_tap_composition(self, t1, t2, h, v):
        state = JonesVector(h=h, v=v)
        seq = propagate_chain(state, [Tap(t1), Tap(t2)])
        combined = apply_element(state, Tap(t1 * t2))
        assert seq.h == pytest.approx(combined.h, rel=1e-9, abs=1e-12)
        assert seq.v == pytest.approx(combined.v, rel=1e-9, abs=1e-12)


class TestArmFactors:
    @pytest.mark.parametrize(
        "angle_deg,expected",
        [
            (45.0, (1.0, 1.0)),
            (-45.0, (0.0, 0.0)),
            (0.0, (1.0, 0.0)),
            (90.0, (0.0, 1.0)),
        ],
    )
    def test_reference_angles(self, angle_deg, expected):
        rh, rv = polarizer_arm_factors(math.radians(angle_deg))
        assert rh == pytest.approx(expected[0], abs=1e-12)
        assert rv == pytest.approx(expected[1], abs=1e-12)

    def test_matches_direct_jones_projection(self):
        angle = math.radians(30.0)
        rh, rv = polarizer_arm_factors(angle)
        out = apply_element(DIAG, Polarizer(angle))
        assert rh == pytest.approx(out.h.real * math.sqrt(2), rel=1e-12)
        assert rv == pytest.approx(out.v.real * math.sqrt(2), rel=1e-12)
