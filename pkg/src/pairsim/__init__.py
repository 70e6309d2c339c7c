"""pairsim: photon-pair interference between a pulsed down-conversion
source and weak local-oscillator beams.

Core layers:

- :mod:`pairsim.model` — closed-form two-path pair model and rate
  calibrations.
- :mod:`pairsim.fock` — exact truncated-Fock reference distribution.
- :mod:`pairsim.optics` — Jones calculus for the LO preparation chain.
- :mod:`pairsim.overlap` — distinguishability factors and delay envelope.
- :mod:`pairsim.detection` — detected rates and Monte Carlo scans.
- :mod:`pairsim.analysis` — fringe fits, visibilities, pair-removal bound.
- :mod:`pairsim.scenario` / :mod:`pairsim.figures` — configs and built-in
  reproduction pipelines.
- :mod:`pairsim.service` / :mod:`pairsim.cli` — HTTP API and its thin
  command-line client.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    PairProbabilities,
    PulseTrain,
    SourceParams,
    calibrate_lo,
    intrinsic_visibility,
    klyshko_calibrate,
    pair_probability,
    phase_from_delay,
)
from .fock import JointPhotonDistribution, fock_oracle, oracle_visibility  # noqa: F401
from .overlap import (  # noqa: F401
    GaussianSpectrum,
    OverlapModel,
    filtered_spectrum,
    fringe_envelope,
    gaussian_mode_overlap,
)
from .detection import (  # noqa: F401
    DetectionParams,
    ExperimentSetup,
    RateSet,
    ScanRecord,
    rates_at,
    simulate_scan,
)
from .analysis import (  # noqa: F401
    FringeFit,
    VisibilityReport,
    enhancement_check,
    fit_fringe,
    upconversion_fraction,
    visibility,
)
