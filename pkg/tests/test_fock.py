import math

import numpy as np
import pytest

from pairsim.errors import TruncationError
from pairsim.fock import fock_oracle, oracle_visibility
from pairsim.model import SourceParams, pair_probability


def test_vacuum_input_stays_vacuum():
    src = SourceParams(alpha_h=0.0, alpha_v=0.0, epsilon=0.0)
    dist = fock_oracle(src, 0.0)
    assert dist.prob(0, 0) == pytest.approx(1.0, abs=1e-14)
    assert dist.p_coincidence() == pytest.approx(0.0, abs=1e-14)


def test_distribution_normalized_for_weak_fields():
    src = SourceParams(alpha_h=0.1, alpha_v=0.2, epsilon=0.05)
    dist = fock_oracle(src, 0.7)
    assert dist.total() >= 1.0 - 1e-9
    assert dist.truncation_loss <= 1e-9


def test_bare_pair_source_two_photon_probability():
    # with the LO blocked, eps is exactly the relative pair amplitude:
    # P(1,1) = eps^2 (1 - eps^2) and P(>=1,>=1) = eps^2
    eps = 0.037
    src = SourceParams(alpha_h=0.0, alpha_v=0.0, epsilon=eps)
    dist = fock_oracle(src, 0.0)
    assert dist.prob(1, 1) == pytest.approx(eps**2 * (1 - eps**2), rel=1e-10)
    assert dist.prob(1, 1) == pytest.approx(1.37e-3, rel=3e-3)
    assert dist.p_coincidence() == pytest.approx(eps**2, rel=1e-10)
    # photon numbers are perfectly correlated
    assert dist.prob(1, 0) == pytest.approx(0.0, abs=1e-16)
    assert dist.prob(0, 1) == pytest.approx(0.0, abs=1e-16)


def known_corrections(src: SourceParams) -> float:
    """Leading terms the closed-form pair probability omits: bosonic
    stimulation of the pair path by the LO intensities, and the
    multi-photon tail of the LO-only coincidences."""
    h = abs(src.alpha_h) ** 2
    v = abs(src.alpha_v) ** 2
    stimulated = src.epsilon**2 * (h + v)
    lo_tail = -(h * v) * (h + v) / 2.0
    return stimulated + lo_tail


def test_coincidence_proxy_sinusoidal_and_near_weak_field_model():
    """The exact coincidence proxy tracks the closed-form p_pair once its
    known lowest-order omissions are restored; the residual is phase-flat,
    so the fringe itself (amplitude and phase) agrees."""
    src = SourceParams(alpha_h=0.1, alpha_v=0.1, epsilon=0.01)
    phis = np.linspace(0, 2 * math.pi, 16, endpoint=False)
    diffs = []
    for phi in phis:
        exact = fock_oracle(src, float(phi)).p_coincidence()
        model = pair_probability(src, float(phi), 1.0).p_pair
        diffs.append(exact - model)
    diffs = np.asarray(diffs)
    assert np.max(np.abs(diffs - known_corrections(src))) < 2e-7
    assert np.ptp(diffs) < 2e-7


def test_oracle_agrees_with_corrected_model_on_grid():
    """Across the weak-field grid the correction-restored closed form
    agrees with the exact proxy to a few 1e-6 (higher-order residuals)."""
    worst = 0.0
    for amag in np.linspace(0.01, 0.1, 5):
        for eps in np.linspace(0.001, 0.05, 5):
            src = SourceParams(alpha_h=amag, alpha_v=amag, epsilon=eps)
            correction = known_corrections(src)
            for phi in np.linspace(0, 2 * math.pi, 16, endpoint=False):
                exact = fock_oracle(src, float(phi), n_max=8).p_coincidence()
                model = pair_probability(src, float(phi), 1.0).p_pair
                worst = max(worst, abs(exact - (model + correction)))
    assert worst < 5e-6


def test_phase_convention_matches_model():
    # extrema of the exact proxy sit where the closed form puts them,
    # including complex LO phases and a pump phase
    src = SourceParams(
        alpha_h=0.08 * np.exp(0.4j), alpha_v=0.06 * np.exp(-1.1j),
        epsilon=0.02, pump_phase=0.9,
    )
    phis = np.linspace(0, 2 * math.pi, 400)
    exact = [fock_oracle(src, float(p)).p_coincidence() for p in phis]
    model = [pair_probability(src, float(p), 1.0).p_pair for p in phis]
    assert phis[int(np.argmax(exact))] == pytest.approx(
        phis[int(np.argmax(model))], abs=0.05
    )
    assert phis[int(np.argmin(exact))] == pytest.approx(
        phis[int(np.argmin(model))], abs=0.05
    )


def test_cutoff_too_small_raises():
    src = SourceParams(alpha_h=1.8, alpha_v=1.8, epsilon=0.2)
    with pytest.raises(TruncationError):
        fock_oracle(src, 0.0, n_max=4)


def test_n_max_validation():
    src = SourceParams(alpha_h=0.1, alpha_v=0.1, epsilon=0.01)
    with pytest.raises(ValueError):
        fock_oracle(src, 0.0, n_max=3)


def test_oracle_visibility_balanced_weak_fields_near_unity():
    eps = 0.004
    src = SourceParams(
        alpha_h=math.sqrt(eps), alpha_v=math.sqrt(eps), epsilon=eps
    )
    vis = oracle_visibility(src, n_max=8)
    assert 0.99 < vis < 1.0


def test_mean_photons_match_coherent_intensity():
    src = SourceParams(alpha_h=0.3, alpha_v=0.2, epsilon=0.0)
    n_h, n_v = fock_oracle(src, 0.0).mean_photons()
    assert n_h == pytest.approx(0.09, rel=1e-9)
    assert n_v == pytest.approx(0.04, rel=1e-9)
