"""Photon-number statistics of two-mode pure states.

Every quantity is a plain sum over the amplitude grid.  Ratios (Mandel Q,
g2) are ``None`` when the relevant mean photon number vanishes, rather than
being forced to a number.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from .fock import TwoModeState

log = logging.getLogger(__name__)

#: Means below this are treated as zero when forming ratios.
ZERO_MEAN = 1e-12

_MODE_ALIASES = {0: 0, 1: 1, "first": 0, "second": 1, "c": 0, "d": 1}


def _axis(mode) -> int:
    try:
        return _MODE_ALIASES[mode]
    except (KeyError, TypeError):
        raise ValueError(f"unknown mode {mode!r}; use 0/1 or 'first'/'second'") from None


def marginal_distribution(state: TwoModeState, mode=0) -> np.ndarray:
    """Photon-number distribution of one mode with the other traced out."""
    probs = state.probabilities
    return probs.sum(axis=1 - _axis(mode))


def _moments(state: TwoModeState, mode) -> tuple[float, float]:
    p = marginal_distribution(state, mode)
    n = np.arange(p.size, dtype=float)
    return float(n @ p), float((n * n) @ p)


def mean_photon(state: TwoModeState, mode=0) -> float:
    return _moments(state, mode)[0]


def second_moment(state: TwoModeState, mode=0) -> float:
    return _moments(state, mode)[1]


def _clamped_variance(mean: float, second: float) -> float:
    var = second - mean * mean
    if var < 0.0:
        log.debug("clamping negative variance %.3e to 0", var)
        return 0.0
    return var


def variance(state: TwoModeState, mode=0) -> float:
    mean, second = _moments(state, mode)
    return _clamped_variance(mean, second)


def mandel_q(state: TwoModeState, mode=0) -> float | None:
    """``(variance - mean) / mean``; ``None`` for a (numerically) empty mode."""
    mean, second = _moments(state, mode)
    if mean < ZERO_MEAN:
        return None
    return (_clamped_variance(mean, second) - mean) / mean


def g2_zero(state: TwoModeState, mode=0) -> float | None:
    """Zero-delay second-order coherence ``(<N^2> - <N>) / <N>^2``."""
    mean, second = _moments(state, mode)
    if mean < ZERO_MEAN:
        return None
    return (second - mean) / (mean * mean)


def mean_product(state: TwoModeState) -> float:
    """``<N_first N_second>``."""
    probs = state.probabilities
    k = np.arange(probs.shape[0], dtype=float)
    l = np.arange(probs.shape[1], dtype=float)
    return float(k @ probs @ l)


def g2_cross(state: TwoModeState) -> float | None:
    """Normalized coincidence correlation ``<N_c N_d> / (<N_c><N_d>)``."""
    m1 = mean_photon(state, 0)
    m2 = mean_photon(state, 1)
    if m1 < ZERO_MEAN or m2 < ZERO_MEAN:
        return None
    return mean_product(state) / (m1 * m2)


def undefined_as_zero(value: float | None) -> float:
    """Map an undefined ratio to 0, the convention for vacuum in plots."""
    return 0.0 if value is None else value


@dataclass(frozen=True)
class ModeStats:
    mean: float
    second_moment: float
    variance: float
    mandel_q: float | None
    g2: float | None
    marginal: np.ndarray

    @classmethod
    def from_moments(cls, mean: float, second: float, marginal: np.ndarray) -> ModeStats:
        var = _clamped_variance(mean, second)
        if mean < ZERO_MEAN:
            q = g2 = None
        else:
            q = (var - mean) / mean
            g2 = (second - mean) / (mean * mean)
        return cls(mean, second, var, q, g2, marginal)


@dataclass(frozen=True)
class StatsSummary:
    """Statistics of both output modes plus their cross correlation.

    ``mean_error_bound`` is ``norm_deficit * max(cutoff, 1)``: the scale of the
    bias a truncated state can carry in its means.  It is zero for exact Fock
    computations.
    """

    first: ModeStats
    second: ModeStats
    mean_product: float
    g2_cross: float | None
    norm_deficit: float
    mean_error_bound: float

    def to_dict(self, include_marginals: bool = False) -> dict:
        out = asdict(self)
        for key in ("first", "second"):
            marginal = out[key].pop("marginal")
            if include_marginals:
                out[key]["marginal"] = [float(x) for x in marginal]
        return out


def summarize(state: TwoModeState) -> StatsSummary:
    modes = []
    for axis in (0, 1):
        p = marginal_distribution(state, axis)
        n = np.arange(p.size, dtype=float)
        modes.append(ModeStats.from_moments(float(n @ p), float((n * n) @ p), p))
    first, second = modes
    product = mean_product(state)
    if first.mean < ZERO_MEAN or second.mean < ZERO_MEAN:
        cross = None
    else:
        cross = product / (first.mean * second.mean)
    bound = state.norm_deficit * max(state.cutoff_first, state.cutoff_second, 1)
    return StatsSummary(first, second, product, cross, state.norm_deficit, bound)
