"""Monte Carlo photon-number-resolving detection at both output ports.

Outcomes are drawn i.i.d. from ``|amp(k, l)|^2`` by inverse CDF over the
row-major flattened grid.  The generator is numpy's PCG64; with
``streams > 1`` the shots are split into equal contiguous chunks, chunk ``i``
drawing from ``SeedSequence(seed).spawn(streams)[i]``.  Merged counts therefore
depend only on ``(state, shots, seed, streams)``, never on worker scheduling.

Standard errors are plug-in: ``sqrt(grad^T Cov grad / shots)`` over the
per-shot features ``(k, k^2, l, l^2, k l)``, where ``grad`` is the gradient of
the statistic as a function of the feature means (delta method).  For the
plain means this reduces to ``s / sqrt(shots)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationTooLossy
from .fock import TwoModeState
from .statistics import ZERO_MEAN

PRNG_NAME = "numpy.random.PCG64"
MAX_DEFICIT = 0.01


@dataclass
class SampleReport:
    shots: int
    seed: int
    streams: int
    counts: dict[tuple[int, int], int]
    estimates: dict
    std_errors: dict
    renormalization: float
    prng: str = PRNG_NAME
    error_method: str = field(
        default="plug-in moments; delta method for variance, Q, g2 and g2_cross"
    )

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "seed": self.seed,
            "streams": self.streams,
            "prng": self.prng,
            "renormalization": self.renormalization,
            "error_method": self.error_method,
            "counts": [[k, l, c] for (k, l), c in sorted(self.counts.items())],
            "estimates": self.estimates,
            "std_errors": self.std_errors,
        }


def _draw(cdf: np.ndarray, shots: int, seed_seq) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.bincount(idx, minlength=cdf.size)


def _cdf(probs: np.ndarray) -> tuple[np.ndarray, float]:
    flat = probs.ravel()
    total = float(flat.sum())
    cdf = np.cumsum(flat) / total
    # pin the top so round-off can never hand mass to trailing zero cells
    last = np.flatnonzero(flat)[-1]
    cdf[last:] = 1.0
    return cdf, total


def sample_counts(
    state: TwoModeState,
    shots: int,
    seed: int,
    streams: int = 1,
    max_workers: int | None = None,
) -> SampleReport:
    """Simulate ``shots`` detections of both output modes.

    Raises:
        TruncationTooLossy: if the state's ``norm_deficit`` is 1% or more.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    if state.norm_deficit >= MAX_DEFICIT:
        raise TruncationTooLossy(
            f"norm_deficit {state.norm_deficit:.3g} >= {MAX_DEFICIT}; raise the cutoffs"
        )
    cdf, total = _cdf(state.probabilities)

    if streams == 1:
        flat_counts = _draw(cdf, shots, seed)
    else:
        children = np.random.SeedSequence(seed).spawn(streams)
        sizes = [shots // streams + (i < shots % streams) for i in range(streams)]
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(lambda job: _draw(cdf, *job), zip(sizes, children)))
        flat_counts = np.sum(parts, axis=0)

    grid = flat_counts.reshape(state.amplitudes.shape)
    counts = {(int(k), int(l)): int(grid[k, l]) for k, l in zip(*np.nonzero(grid))}
    estimates, errors = estimate_from_counts(grid)
    return SampleReport(shots, seed, streams, counts, estimates, errors, 1.0 / total)


def estimate_from_counts(grid: np.ndarray) -> tuple[dict, dict]:
    """Point estimates and standard errors from a grid of outcome counts."""
    grid = np.asarray(grid, dtype=float)
    shots = grid.sum()
    k, l = np.meshgrid(
        np.arange(grid.shape[0], dtype=float), np.arange(grid.shape[1], dtype=float),
        indexing="ij",
    )
    features = np.stack([k, k * k, l, l * l, k * l]).reshape(5, -1)
    weights = grid.ravel()
    mu = features @ weights / shots
    if shots > 1:
        centered = features - mu[:, None]
        cov = (centered * weights) @ centered.T / (shots - 1)
    else:
        cov = np.zeros((5, 5))

    def se(grad: np.ndarray) -> float:
        return float(np.sqrt(max(grad @ cov @ grad, 0.0) / shots))

    estimates: dict = {}
    errors: dict = {}
    for name, i_mean, i_sq in (("first", 0, 1), ("second", 2, 3)):
        m, s = mu[i_mean], mu[i_sq]
        est = {"mean": m, "second_moment": s, "variance": s - m * m}
        grads = {
            "mean": _unit(i_mean),
            "second_moment": _unit(i_sq),
            "variance": -2 * m * _unit(i_mean) + _unit(i_sq),
        }
        if m >= ZERO_MEAN:
            est["mandel_q"] = s / m - m - 1.0
            grads["mandel_q"] = (-s / m**2 - 1.0) * _unit(i_mean) + _unit(i_sq) / m
            est["g2"] = (s - m) / m**2
            grads["g2"] = (m - 2 * s) / m**3 * _unit(i_mean) + _unit(i_sq) / m**2
        else:
            est["mandel_q"] = est["g2"] = None
        estimates[name] = {key: _float(val) for key, val in est.items()}
        errors[name] = {
            key: (se(grads[key]) if key in grads else None) for key in est
        }

    m1, m2, prod = mu[0], mu[2], mu[4]
    estimates["mean_product"] = float(prod)
    errors["mean_product"] = se(_unit(4))
    if m1 >= ZERO_MEAN and m2 >= ZERO_MEAN:
        estimates["g2_cross"] = float(prod / (m1 * m2))
        grad = (
            -prod / (m1**2 * m2) * _unit(0)
            - prod / (m1 * m2**2) * _unit(2)
            + _unit(4) / (m1 * m2)
        )
        errors["g2_cross"] = se(grad)
    else:
        estimates["g2_cross"] = errors["g2_cross"] = None
    return estimates, errors


def _unit(i: int) -> np.ndarray:
    v = np.zeros(5)
    v[i] = 1.0
    return v


def _float(x):
    return None if x is None else float(x)
