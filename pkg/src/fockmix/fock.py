"""Truncated two-mode photon-number states.

A :class:`TwoModeState` stores a dense grid of complex amplitudes indexed by
``(n_first, n_second)``.  Coherent components are truncated and never
renormalized; the discarded probability is carried as ``norm_deficit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CutoffExceeded, CutoffMismatch

#: Poisson tail mass targeted by :func:`auto_cutoff`.
DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Pure state of two bosonic modes on a truncated Fock grid.

    Attributes:
        amplitudes: complex array of shape ``(cutoff_first+1, cutoff_second+1)``;
            entry ``[k, l]`` is the coefficient of ``|k>|l>``.
        norm_deficit: probability mass dropped by truncation.
        truncated: whether the state is a cut-off expansion of an infinite
            superposition (coherent components).  Fock-basis states are exact.
    """

    amplitudes: np.ndarray
    norm_deficit: float = 0.0
    truncated: bool = False

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or 0 in amps.shape:
            raise ValueError(f"amplitudes must be a non-empty 2-D grid, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain NaN or Inf")
        if self.norm_deficit < 0:
            raise ValueError("norm_deficit must be >= 0")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm_deficit", float(self.norm_deficit))

    @property
    def cutoff_first(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def cutoff_second(self) -> int:
        return self.amplitudes.shape[1] - 1

    @property
    def cutoffs(self) -> tuple[int, int]:
        return self.cutoff_first, self.cutoff_second

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(self.probabilities.sum())

    def amplitude(self, n_first: int, n_second: int) -> complex:
        if not (0 <= n_first <= self.cutoff_first and 0 <= n_second <= self.cutoff_second):
            raise CutoffExceeded(
                f"basis index ({n_first}, {n_second}) outside grid {self.cutoffs}"
            )
        return complex(self.amplitudes[n_first, n_second])

    def with_global_phase(self, phase: float) -> TwoModeState:
        return TwoModeState(
            self.amplitudes * np.exp(1j * phase), self.norm_deficit, self.truncated
        )

    def padded(self, cutoff_first: int, cutoff_second: int) -> TwoModeState:
        """Embed the state in a larger grid (zero-filled)."""
        if cutoff_first < self.cutoff_first or cutoff_second < self.cutoff_second:
            raise CutoffExceeded(
                f"cannot shrink grid {self.cutoffs} to ({cutoff_first}, {cutoff_second})"
            )
        out = np.zeros((cutoff_first + 1, cutoff_second + 1), dtype=np.complex128)
        out[: self.cutoff_first + 1, : self.cutoff_second + 1] = self.amplitudes
        return TwoModeState(out, self.norm_deficit, self.truncated)


class CoherentCoefficients(NamedTuple):
    """Truncated single-mode expansion; unpacks as ``(coefficients, norm_deficit)``."""

    coefficients: np.ndarray
    norm_deficit: float

    @property
    def truncated(self) -> bool:
        # only alpha == 0 (the vacuum) is represented exactly
        return self.norm_deficit > 0 or bool(np.any(self.coefficients[1:]))


def fock_pair(n: int, m: int, cutoff_first: int, cutoff_second: int) -> TwoModeState:
    """Return ``|n>|m>`` on a grid with the given cutoffs."""
    if n < 0 or m < 0:
        raise ValueError("photon numbers must be nonnegative")
    if n > cutoff_first or m > cutoff_second:
        raise CutoffExceeded(
            f"|{n},{m}> does not fit cutoffs ({cutoff_first}, {cutoff_second})"
        )
    amps = np.zeros((cutoff_first + 1, cutoff_second + 1), dtype=np.complex128)
    amps[n, m] = 1.0
    return TwoModeState(amps, 0.0)


def fock_amplitudes(n: int, cutoff: int) -> tuple[np.ndarray, float]:
    """Single-mode coefficient array of ``|n>``."""
    if n > cutoff:
        raise CutoffExceeded(f"|{n}> does not fit cutoff {cutoff}")
    coeffs = np.zeros(cutoff + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    return coeffs, 0.0


def poisson_tail(mean: float, cutoff: int) -> float:
    """Mass of a Poisson(mean) distribution strictly above ``cutoff``.

    Summed directly from the upper end so tiny tails keep full relative
    precision (``1 - cdf`` would not).
    """
    if mean < 0:
        raise ValueError("mean must be nonnegative")
    if mean == 0.0:
        return 0.0
    pmf = _poisson_pmf(mean, _pmf_horizon(mean, cutoff))
    return float(np.sum(pmf[cutoff + 1 :][::-1]))


def auto_cutoff(mean: float, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest cutoff whose Poisson(mean) tail mass is below ``tol``."""
    if mean == 0.0:
        return 0
    pmf = _poisson_pmf(mean, _pmf_horizon(mean))
    # tails[c] = sum_{k > c} pmf[k]
    tails = np.cumsum(pmf[::-1])[::-1]
    tails = np.append(tails[1:], 0.0)
    below = np.nonzero(tails < tol)[0]
    return int(below[0])


def _pmf_horizon(mean: float, start: int = 0) -> int:
    # past max(start, mean) the terms shrink at least geometrically; this many
    # more leave a remainder far below double precision
    return int(math.ceil(max(start, mean) + 25.0 * math.sqrt(mean) + 60.0))


def _poisson_pmf(mean: float, kmax: int) -> np.ndarray:
    pmf = np.empty(kmax + 1)
    pmf[0] = math.exp(-mean)
    for k in range(kmax):
        pmf[k + 1] = pmf[k] * mean / (k + 1)
    return pmf


def coherent_amplitudes(alpha: complex, cutoff: int) -> CoherentCoefficients:
    """Truncated Fock expansion of the coherent state ``|alpha>``.

    Coefficients follow ``c[0] = exp(-|alpha|^2/2)``, ``c[n+1] = c[n] alpha/sqrt(n+1)``,
    so no factorial is ever formed.  The result is *not* renormalized.

    Returns:
        ``(coefficients, norm_deficit)`` where ``norm_deficit`` is the Poisson
        mass above ``cutoff``.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ValueError("alpha must be finite")
    coeffs = np.empty(cutoff + 1, dtype=np.complex128)
    coeffs[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for k in range(cutoff):
        coeffs[k + 1] = coeffs[k] * alpha / math.sqrt(k + 1)
    return CoherentCoefficients(coeffs, poisson_tail(abs(alpha) ** 2, cutoff))


def product_state(
    first: tuple[np.ndarray, float] | np.ndarray,
    second: tuple[np.ndarray, float] | np.ndarray,
) -> TwoModeState:
    """Tensor product of two single-mode coefficient arrays.

    Each argument is either a bare coefficient array or a
    ``(coefficients, norm_deficit)`` pair as returned by the constructors.
    The product counts as truncated if either factor came from
    :func:`coherent_amplitudes` with nonzero amplitude or carries a deficit.
    """
    c1, d1, trunc1 = _unpack(first)
    c2, d2, trunc2 = _unpack(second)
    # 1 - (1 - d1)(1 - d2), arranged so tiny deficits do not round away
    deficit = d1 + d2 - d1 * d2
    return TwoModeState(np.outer(c1, c2), max(deficit, 0.0), trunc1 or trunc2)


def _unpack(arg) -> tuple[np.ndarray, float, bool]:
    if isinstance(arg, CoherentCoefficients):
        coeffs, deficit = arg
        truncated = arg.truncated
    elif isinstance(arg, tuple):
        coeffs, deficit = arg
        truncated = deficit > 0
    else:
        coeffs, deficit, truncated = arg, 0.0, False
    return np.asarray(coeffs, dtype=np.complex128).ravel(), float(deficit), truncated


def inner_product(a: TwoModeState, b: TwoModeState) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    if a.cutoffs != b.cutoffs:
        raise CutoffMismatch(f"cutoffs differ: {a.cutoffs} vs {b.cutoffs}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: TwoModeState, b: TwoModeState) -> float:
    """``|<a|b>|^2`` for (possibly truncated) pure states."""
    return abs(inner_product(a, b)) ** 2
