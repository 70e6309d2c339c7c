import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pairsim.detection import (
    DetectionParams,
    ExperimentSetup,
    rates_at,
    record_seed,
    scan_delays,
    setup_rates,
    simulate_scan,
)
from pairsim.model import PulseTrain, SourceParams, klyshko_calibrate
from pairsim.overlap import OverlapModel

PULSES = PulseTrain(rep_rate=80e6, pump_wavelength=405e-9, lo_wavelength=810e-9)
KAPPA = 0.41585281330729


def reference_detection(**overrides) -> DetectionParams:
    params = dict(
        eta_a=3.3 / 470,
        eta_b=3.3 / 770,
        background_a=6000.0,
        background_b=8000.0,
        coinc_window=1.07e-9,
        rep_rate=80e6,
    )
    params.update(overrides)
    return DetectionParams(**params)


def reference_setup() -> ExperimentSetup:
    cal = klyshko_calibrate(770.0, 470.0, 3.3, PULSES)
    return ExperimentSetup(
        source=SourceParams(
            alpha_h=0.14493990395186468,
            alpha_v=0.39612708398526186,
            epsilon=cal.epsilon,
        ),
        pulses=PULSES,
        overlap=OverlapModel(gamma_spectral=0.57, envelope_sigma=219e-15),
        detection=reference_detection(eta_a=cal.eta_a, eta_b=cal.eta_b),
        lo_pair_efficiency=KAPPA,
    )


class TestRatesAt:
    def test_sources_off_gives_background_plus_dark(self):
        src = SourceParams(alpha_h=0.0, alpha_v=0.0, epsilon=0.0)
        det = reference_detection(dark_a=25.0, dark_b=35.0)
        rates = rates_at(src, 0.0, OverlapModel(), det)
        assert rates.singles_a == pytest.approx(6025.0, rel=1e-12)
        assert rates.singles_b == pytest.approx(8035.0, rel=1e-12)
        assert rates.coinc_true == 0.0

    def test_dc_only_roundtrip_recovers_reference_rates(self):
        cal = klyshko_calibrate(770.0, 470.0, 3.3, PULSES)
        src = SourceParams(alpha_h=0.0, alpha_v=0.0, epsilon=cal.epsilon)
        det = reference_detection(eta_a=cal.eta_a, eta_b=cal.eta_b)
        rates = rates_at(src, 0.0, OverlapModel(), det)
        assert rates.singles_a == pytest.approx(6000.0 + 770.0, rel=1e-12)
        assert rates.singles_b == pytest.approx(8000.0 + 470.0, rel=1e-12)
        assert rates.coinc_true == pytest.approx(3.3, rel=1e-12)

    def test_balanced_scenario_rates(self):
        setup = reference_setup()
        rates = setup_rates(setup, 0.0)
        # full singles budget: background + dc + lo
        assert rates.singles_a == pytest.approx(18570.0 + 877.8, rel=1e-3)
        # lo pair channel balanced against dc: peak true coincidences
        assert rates.coinc_true == pytest.approx(6.6 + 6.6 * 0.57, rel=1e-6)

    def test_reference_accidentals(self):
        # 18570 * 62270 * 1.07 ns ~= 1.24 1/s; back-solving the window is
        # the corrected-visibility identity: A/(C - acc) = 0.57 when
        # A/C = 0.48 and C = 6.6 + acc
        acc = 18570.0 * 62270.0 * 1.07e-9
        assert acc == pytest.approx(1.24, abs=0.005)
        a, c_true = 0.57 * 6.6, 6.6
        raw = a / (c_true + acc)
        assert raw == pytest.approx(0.48, abs=0.002)

    def test_lo_pair_efficiency_scales_pairs_not_singles(self):
        setup = reference_setup()
        src, det = setup.source, setup.detection
        full = rates_at(src, 0.0, OverlapModel(gamma_spectral=0.0), det)
        scaled = rates_at(
            src, 0.0, OverlapModel(gamma_spectral=0.0), det, lo_pair_efficiency=0.25
        )
        # singles (phase-independent at gamma 0) are untouched
        assert scaled.singles_a == pytest.approx(full.singles_a, rel=1e-12)
        assert scaled.singles_b == pytest.approx(full.singles_b, rel=1e-12)
        # LO-LO pair rate scales linearly in the knob
        lo_full = full.coinc_true - 3.3
        lo_scaled = scaled.coinc_true - 3.3
        assert lo_scaled == pytest.approx(0.25 * lo_full, rel=1e-9)

    def test_gamma_zero_phase_independent(self):
        setup = reference_setup()
        src = setup.source
        det = setup.detection
        rates = [
            rates_at(src, phi, OverlapModel(gamma_spectral=0.0), det)
            for phi in np.linspace(0, 6, 7)
        ]
        assert len({round(r.coinc_true, 12) for r in rates}) == 1
        assert len({round(r.singles_a, 9) for r in rates}) == 1

    def test_coincidence_modulation_equals_etab_times_singles_modulation(self):
        setup = reference_setup()
        hi = setup_rates(setup, 0.0)
        lo = setup_rates(setup, setup.pulses.pump_period / 2.0)
        a_singles = (hi.singles_a - lo.singles_a) / 2.0
        a_coinc = (hi.coinc_true - lo.coinc_true) / 2.0
        assert a_singles * setup.detection.eta_b == pytest.approx(
            a_coinc, rel=1e-12
        )

    @given(
        s_a=st.floats(100, 1e5),
        s_b=st.floats(100, 1e5),
        window=st.floats(1e-10, 5e-9),
    )
    def test_accidentals_monotone(self, s_a, s_b, window):
        base = s_a * s_b * window
        assert s_a * s_b * (window * 1.5) >= base
        assert (s_a * 1.5) * s_b * window >= base

    def test_window_bound_validated(self):
        with pytest.raises(ValueError):
            reference_detection(coinc_window=20e-9)


class TestSimulateScan:
    def test_zero_rates_zero_counts(self):
        setup = ExperimentSetup(
            source=SourceParams(alpha_h=0.0, alpha_v=0.0, epsilon=0.0),
            pulses=PULSES,
            overlap=OverlapModel(),
            detection=reference_detection(background_a=0.0, background_b=0.0),
        )
        records = simulate_scan([0.0, 1e-15], setup, seed=1, integration_time=5.0)
        assert all(r.counts_a == r.counts_b == r.counts_cc == 0 for r in records)

    def test_deterministic_for_fixed_seed(self):
        setup = reference_setup()
        delays = scan_delays(-4e-15, 4e-15, 10)
        first = simulate_scan(delays, setup, seed=42, integration_time=10.0)
        second = simulate_scan(delays, setup, seed=42, integration_time=10.0)
        assert first == second
        third = simulate_scan(delays, setup, seed=43, integration_time=10.0)
        assert first != third

    def test_record_seed_depends_on_index_only(self):
        assert record_seed(7, 3) == record_seed(7, 3)
        assert record_seed(7, 3) != record_seed(7, 4)
        assert record_seed(8, 3) != record_seed(7, 3)

    def test_poisson_mean_matches_analytic(self):
        setup = reference_setup()
        n = 10_000
        records = simulate_scan([0.0] * n, setup, seed=9, integration_time=10.0)
        rates = setup_rates(setup, 0.0)
        mean_expected = rates.coinc_total * 10.0
        counts = np.array([r.counts_cc for r in records], dtype=float)
        stderr = math.sqrt(mean_expected / n)
        assert abs(counts.mean() - mean_expected) < 3 * stderr

    def test_empty_and_single_delay(self):
        setup = reference_setup()
        assert simulate_scan([], setup, seed=1, integration_time=1.0) == []
        assert scan_delays(0, 1, 0) == []
        assert scan_delays(0.5, 1, 1) == [0.5]

    def test_integration_time_validated(self):
        setup = reference_setup()
        with pytest.raises(ValueError):
            simulate_scan([0.0], setup, seed=1, integration_time=0.0)
