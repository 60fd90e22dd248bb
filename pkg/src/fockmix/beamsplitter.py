"""Lossless two-mode beamsplitter acting on truncated Fock states.

Convention: ``U(theta, phi) = exp[theta (e^{i phi} a^dag b - e^{-i phi} a b^dag)]``
acts on states as ``|out> = U |in>``.  Conjugating the creation operators gives

    a^dag -> t c^dag - e^{-i phi} r d^dag
    b^dag -> e^{i phi} r c^dag + t d^dag

with ``t = cos(theta)`` and ``r = sin(theta)``.  At ``phi = pi/2`` both
reflection coefficients reduce to ``i r``, i.e. the familiar
``c = t a + i r b``, ``d = i r a + t b`` mode map.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CutoffExceeded, OracleLimitExceeded
from .fock import TwoModeState

ORACLE_LIMIT = 12
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class BeamsplitterParams:
    """Mixing angle ``theta`` in [0, pi/2] and phase ``phi`` (reduced mod 2 pi)."""

    theta: float
    phi: float = math.pi / 2

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("theta and phi must be finite")
        if theta < -_ANGLE_SLACK or theta > math.pi / 2 + _ANGLE_SLACK:
            raise ValueError(f"theta={theta} outside [0, pi/2]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi / 2))
        object.__setattr__(self, "phi", math.fmod(phi, 2 * math.pi) % (2 * math.pi))

    @property
    def t(self) -> float:
        return math.cos(self.theta)

    @property
    def r(self) -> float:
        return math.sin(self.theta)

    @property
    def reflection_first(self) -> complex:
        """Coefficient of ``d^dag`` in the image of the first input's ``a^dag``."""
        return -cmath.exp(-1j * self.phi) * self.r

    @property
    def reflection_second(self) -> complex:
        """Coefficient of ``c^dag`` in the image of the second input's ``b^dag``."""
        return cmath.exp(1j * self.phi) * self.r

    def inverse(self) -> BeamsplitterParams:
        return BeamsplitterParams(self.theta, self.phi + math.pi)


def amplitudes(params: BeamsplitterParams) -> tuple[float, float]:
    """Transmission and reflection magnitudes ``(cos theta, sin theta)``."""
    return params.t, params.r


def _fock_pair_column(n: int, m: int, params: BeamsplitterParams) -> np.ndarray:
    # Output amplitudes of |n,m>, indexed by the photon count l in the second
    # output port (the first port holds n + m - l).  The convolution is the
    # double sum over (p, q) with p + q = l.
    t = params.t
    rho1 = params.reflection_first
    rho2 = params.reflection_second
    p = np.arange(n + 1)
    q = np.arange(m + 1)
    first = _binomials(n) * t ** (n - p) * rho1**p
    second = _binomials(m) * rho2 ** (m - q) * t**q
    coeffs = np.convolve(first, second)
    total = n + m
    # sqrt(k! l! / (n! m!)) == sqrt(C(N, n) / C(N, l)) with k + l == n + m == N
    norms = np.sqrt(float(math.comb(total, n)) / _binomials(total))
    return coeffs * norms


@lru_cache(maxsize=512)
def _binomials(n: int) -> np.ndarray:
    row = np.array([float(math.comb(n, k)) for k in range(n + 1)])
    row.setflags(write=False)
    return row


def apply_bs_fock_pair(
    n: int,
    m: int,
    params: BeamsplitterParams,
    cutoff_first: int | None = None,
    cutoff_second: int | None = None,
) -> TwoModeState:
    """Closed-form output of ``|n>|m>`` through the beamsplitter.

    The output grid defaults to ``n + m`` photons per mode, the smallest grid
    that holds every partition exactly.
    """
    total = n + m
    c1 = total if cutoff_first is None else cutoff_first
    c2 = total if cutoff_second is None else cutoff_second
    if c1 < total or c2 < total:
        raise CutoffExceeded(
            f"output of |{n},{m}> needs cutoffs >= {total}, got ({c1}, {c2})"
        )
    column = _fock_pair_column(n, m, params)
    amps = np.zeros((c1 + 1, c2 + 1), dtype=np.complex128)
    l = np.arange(total + 1)
    amps[total - l, l] = column
    return TwoModeState(amps, 0.0)


@lru_cache(maxsize=4096)
def _sector_block_cached(total: int, theta: float, phi: float) -> np.ndarray:
    # Within the sector, generator = -i theta P X P^dag with X the real symmetric
    # hopping matrix (a^dag b + a b^dag) and P = diag(exp(i k (phi + pi/2))).
    # X has the exact spectrum -N, -N+2, ..., N, so only eigenvectors are computed.
    k = np.arange(total + 1)
    if total == 0:
        return _readonly(np.ones((1, 1), dtype=np.complex128))
    hopping = np.sqrt((k[:-1] + 1.0) * (total - k[:-1]))
    _, vecs = eigh_tridiagonal(np.zeros(total + 1), hopping)
    spectrum = np.arange(-total, total + 1, 2, dtype=float)
    rotation = (vecs * np.exp(-1j * theta * spectrum)) @ vecs.T
    phases = np.exp(1j * k * (phi + math.pi / 2))
    return _readonly(phases[:, None] * rotation * phases.conj()[None, :])


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def sector_block(total: int, params: BeamsplitterParams) -> np.ndarray:
    """Beamsplitter unitary restricted to total photon number ``total``.

    Rows and columns are indexed by the first-mode count ``k`` of ``|k, total-k>``.
    """
    return _sector_block_cached(total, params.theta, params.phi)


def apply_bs_general(state: TwoModeState, params: BeamsplitterParams) -> TwoModeState:
    """Evolve an arbitrary two-mode state, one photon-number sector at a time.

    Sectors that do not fit entirely inside the grid are dropped and their
    probability is added to ``norm_deficit``.  For an exact (untruncated)
    input that is an error, since the result would silently lose norm.
    """
    c1, c2 = state.cutoffs
    amps_in = state.amplitudes
    amps_out = np.zeros_like(amps_in)
    dropped = 0.0
    full_sectors = min(c1, c2)
    for total in range(c1 + c2 + 1):
        k = np.arange(max(0, total - c2), min(total, c1) + 1)
        vec = amps_in[k, total - k]
        if total > full_sectors:
            mass = float(np.sum(np.abs(vec) ** 2))
            if mass == 0.0:
                continue
            if not state.truncated:
                raise CutoffExceeded(
                    f"input has weight in photon-number sector {total}, which does not fit "
                    f"cutoffs {state.cutoffs}; enlarge both cutoffs to at least {total}"
                )
            dropped += mass
            continue
        if not np.any(vec):
            continue
        amps_out[k, total - k] = sector_block(total, params) @ vec
    return TwoModeState(amps_out, state.norm_deficit + dropped, state.truncated)


def coherent_transform(
    alpha: complex, beta: complex, params: BeamsplitterParams
) -> tuple[complex, complex]:
    """Output coherent amplitudes for the product input ``|alpha>|beta>``."""
    t = params.t
    gamma_c = t * alpha + params.reflection_second * beta
    gamma_d = params.reflection_first * alpha + t * beta
    return complex(gamma_c), complex(gamma_d)


def generator_block(total: int, params: BeamsplitterParams) -> np.ndarray:
    """Anti-Hermitian generator of the beamsplitter inside one sector."""
    gen = np.zeros((total + 1, total + 1), dtype=np.complex128)
    up = cmath.exp(1j * params.phi)
    for k in range(total):
        # a^dag b |k, N-k> = sqrt((k+1)(N-k)) |k+1, N-k-1>
        amp = math.sqrt((k + 1) * (total - k))
        gen[k + 1, k] = params.theta * up * amp
        gen[k, k + 1] = -params.theta * up.conjugate() * amp
    return gen


def bs_matrix_exponential_oracle(
    total_n: int, params: BeamsplitterParams, limit: int = ORACLE_LIMIT
) -> np.ndarray:
    """Sector unitary by scaling-and-squaring Taylor series.

    Used only as an independent cross-check of :func:`sector_block`.
    """
    if total_n > limit:
        raise OracleLimitExceeded(f"sector {total_n} above oracle limit {limit}")
    gen = generator_block(total_n, params)
    scale_norm = np.abs(gen).sum(axis=0).max()
    squarings = max(0, math.ceil(math.log2(scale_norm / 0.25))) if scale_norm > 0.25 else 0
    small = gen / 2.0**squarings
    result = np.eye(total_n + 1, dtype=np.complex128)
    term = np.eye(total_n + 1, dtype=np.complex128)
    for j in range(1, 60):
        term = term @ small / j
        result = result + term
        if np.abs(term).max() < 1e-18:
            break
    for _ in range(squarings):
        result = result @ result
    return result
