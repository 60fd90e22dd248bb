"""Photon statistics of Fock, coherent and hybrid inputs on a lossless beamsplitter."""

__version__ = "0.1.0"

from .beamsplitter import (
    BeamsplitterParams,
    amplitudes,
    apply_bs_fock_pair,
    apply_bs_general,
    bs_matrix_exponential_oracle,
    coherent_transform,
    sector_block,
)
from .errors import (
    ConfigInvalid,
    CutoffExceeded,
    CutoffMismatch,
    FockmixError,
    OracleLimitExceeded,
    TruncationTooLossy,
)
from .fock import (
    TwoModeState,
    auto_cutoff,
    coherent_amplitudes,
    fidelity,
    fock_amplitudes,
    fock_pair,
    inner_product,
    product_state,
)
from .sampler import SampleReport, sample_counts
from .statistics import (
    StatsSummary,
    g2_cross,
    g2_zero,
    mandel_q,
    marginal_distribution,
    mean_photon,
    summarize,
    variance,
)
