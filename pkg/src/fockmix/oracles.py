"""Closed-form photon statistics for the three input families.

These functions never touch a state vector; they are evaluated directly from
the input parameters and serve as independent checks of the numeric
pipeline (construction, evolution, statistics).

The Fock+coherent Q and g2 expressions are implemented as
``variance / mean - 1`` from the hybrid variance.  The ``*_paper_verbatim``
functions reproduce the previously published form, whose first term carries
``|alpha|^4`` instead of ``|alpha|^2``; they exist only so the discrepancy can
be measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamsplitter import BeamsplitterParams, coherent_transform
from .fock import auto_cutoff, _poisson_pmf
from .statistics import ZERO_MEAN, ModeStats, StatsSummary, _axis


@dataclass(frozen=True)
class FockFockParams:
    n: int
    m: int
    bs: BeamsplitterParams


@dataclass(frozen=True)
class HybridParams:
    n: int
    alpha: complex
    bs: BeamsplitterParams


@dataclass(frozen=True)
class CoherentCoherentParams:
    alpha: complex
    beta: complex
    bs: BeamsplitterParams


def _weights(bs: BeamsplitterParams, mode) -> tuple[float, float]:
    """(weight of first input, weight of second input) in the mode's mean."""
    t2, r2 = bs.t**2, bs.r**2
    return (t2, r2) if _axis(mode) == 0 else (r2, t2)


def _ratio_q(var: float, mean: float) -> float | None:
    if mean < ZERO_MEAN:
        return None
    return (var - mean) / mean


def _ratio_g2(var: float, mean: float) -> float | None:
    q = _ratio_q(var, mean)
    return None if q is None else 1.0 + q / mean


# -- Fock |n>|m> ---------------------------------------------------------------


def fock_mean(p: FockFockParams, mode=0) -> float:
    w_first, w_second = _weights(p.bs, mode)
    return p.n * w_first + p.m * w_second


def fock_variance(p: FockFockParams, mode=0) -> float:
    """``|t|^2 |r|^2 (n + m + 2 n m)``, the same for both output modes."""
    return p.bs.t**2 * p.bs.r**2 * (p.n + p.m + 2 * p.n * p.m)


def fock_q(p: FockFockParams, mode=0) -> float | None:
    return _ratio_q(fock_variance(p), fock_mean(p, mode))


def fock_g2(p: FockFockParams, mode=0) -> float | None:
    return _ratio_g2(fock_variance(p), fock_mean(p, mode))


# -- Fock + coherent |n>|alpha> ------------------------------------------------


def hybrid_mean(p: HybridParams, mode=0) -> float:
    w_first, w_second = _weights(p.bs, mode)
    return p.n * w_first + abs(p.alpha) ** 2 * w_second


def hybrid_variance(p: HybridParams, mode=0) -> float:
    """Photon-number variance of one output mode.

    First mode: ``|r|^4 |a|^2 + |t|^2 |r|^2 (2 n |a|^2 + n + |a|^2)``.  The
    second mode follows from swapping ``t`` and ``r``.
    """
    a2 = abs(p.alpha) ** 2
    t2, r2 = p.bs.t**2, p.bs.r**2
    coherent_weight = r2 if _axis(mode) == 0 else t2
    return coherent_weight**2 * a2 + t2 * r2 * (2 * p.n * a2 + p.n + a2)


def hybrid_q(p: HybridParams, mode=0) -> float | None:
    return _ratio_q(hybrid_variance(p, mode), hybrid_mean(p, mode))


def hybrid_g2(p: HybridParams, mode=0) -> float | None:
    return _ratio_g2(hybrid_variance(p, mode), hybrid_mean(p, mode))


def hybrid_q_paper_verbatim(p: HybridParams) -> float | None:
    """First-mode Q exactly as previously printed (``|r|^4 |alpha|^4`` term)."""
    a2 = abs(p.alpha) ** 2
    t2, r2 = p.bs.t**2, p.bs.r**2
    mean = p.n * t2 + r2 * a2
    if mean < ZERO_MEAN:
        return None
    return (r2**2 * a2**2 + t2 * r2 * (p.n + a2 + 2 * p.n * a2)) / mean - 1.0


def hybrid_g2_paper_verbatim(p: HybridParams) -> float | None:
    q = hybrid_q_paper_verbatim(p)
    return None if q is None else 1.0 + q / (p.n * p.bs.t**2 + p.bs.r**2 * abs(p.alpha) ** 2)


def single_photon_coherent_q_paper_verbatim(alpha: complex) -> float:
    """Printed balanced-splitter Q for ``|1>|alpha>``: ``(a^4 + 3a^2 + 1) / (2(1 + a^2)) - 1``."""
    a2 = abs(alpha) ** 2
    return (a2**2 + 3 * a2 + 1) / (2 * (1 + a2)) - 1.0


def single_photon_coherent_g2_paper_verbatim(alpha: complex) -> float:
    a2 = abs(alpha) ** 2
    return 1.0 + (a2**2 + a2 - 1) / (1 + a2) ** 2


# -- coherent |alpha>|beta> ----------------------------------------------------


def coherent_stats(p: CoherentCoherentParams) -> StatsSummary:
    """Both outputs are coherent, hence Poissonian with Q = 0 and g2 = 1."""
    gammas = coherent_transform(p.alpha, p.beta, p.bs)
    modes = []
    for gamma in gammas:
        mean = abs(gamma) ** 2
        marginal = _poisson_pmf(mean, auto_cutoff(mean)) if mean > 0 else np.ones(1)
        stats = ModeStats.from_moments(mean, mean * mean + mean, marginal)
        if mean >= ZERO_MEAN:
            # exact values instead of round-off residues of the generic ratio
            stats = ModeStats(mean, mean * mean + mean, mean, 0.0, 1.0, marginal)
        modes.append(stats)
    first, second = modes
    product = first.mean * second.mean
    cross = 1.0 if first.mean >= ZERO_MEAN and second.mean >= ZERO_MEAN else None
    return StatsSummary(first, second, product, cross, 0.0, 0.0)
