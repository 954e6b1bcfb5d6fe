"""Eigenvalue spectrum of the time-frequency limiting (sinc-kernel) operator.

A signal bandlimited to [-Omega, Omega] and observed on [-T/2, T/2] is
governed by the Fredholm eigenproblem

    lambda_n psi_n(t) = integral_{-T/2}^{T/2} psi_n(s) sin(Omega(t-s)) / (pi(t-s)) ds,

whose eigenfunctions are the prolate spheroidal wave functions and whose
eigenvalues 1 > lambda_1 > lambda_2 > ... > 0 cluster near 1 up to about
N0 = Omega*T/pi and then plunge to 0 across a transition band of width
O(log N0). Everything downstream (effective dimensionality, volume
corrections, capacity and entropy bounds) is a functional of this spectrum.

The discretization is the Nystrom method on a Gauss-Legendre rule:
with nodes t_i and weights w_i on [-T/2, T/2], the symmetrized matrix

    K_ij = sqrt(w_i w_j) * (Omega/pi) * sinc(Omega (t_i - t_j))

has the same eigenvalues as the quadrature-discretized operator, and its
trace equals (Omega/pi) * sum(w_i) = N0 exactly, which gives a free
self-check on the solve.

Index conventions follow the classical literature: eigenvalues are
1-based in formulas (lambda_1 is the largest) and stored 0-based in
arrays, so lambda_n == spectrum.lambdas[n-1]. Transition-band index
offsets use natural log; information quantities elsewhere use log2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.special import expit

from .errors import ConfigurationError, InsufficientSpectrumError, NumericalError
from .params import DofQuery

logger = logging.getLogger(__name__)

# Eigenvalues are clipped into [CLIP_FLOOR, 1 - CLIP_FLOOR]: the exact ones
# lie strictly inside (0, 1), while the discretized tail goes negative at
# roundoff scale and the leading plateau rounds to 1.
CLIP_FLOOR = 1e-15

# Below arg = 1e-6, sin(arg)/arg loses accuracy to cancellation; the Taylor
# series is exact to double precision there.
_SINC_SERIES_CUTOFF = 1e-6


def _sinc(arg: np.ndarray) -> np.ndarray:
    """sin(x)/x with a series branch near zero; _sinc(0) == 1.0 exactly."""
    arg = np.asarray(arg, dtype=float)
    small = np.abs(arg) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, arg)
    direct = np.sin(safe) / safe
    x2 = arg * arg
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return np.where(small, series, direct)


def default_quad_order(omega: float, t_obs: float) -> int:
    """Default quadrature order: max(256, 8 * ceil(N0)).

    Gauss-Legendre converges spectrally for this analytic kernel; eight
    nodes per nominal degree of freedom resolves the transition band with
    a wide margin (doubling the order moves the first 2*N0 eigenvalues
    by less than 1e-12 in practice).
    """
    n0 = omega * t_obs / math.pi
    return max(256, 8 * math.ceil(n0))


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetrized Nystrom discretization of the sinc kernel."""

    matrix: np.ndarray  # (order, order), symmetric
    nodes: np.ndarray  # quadrature nodes on [-T/2, T/2]
    weights: np.ndarray  # Gauss-Legendre weights, sum = T
    omega: float
    t_obs: float
    quad_order: int


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending eigenvalues and node-sampled eigenfunctions.

    lambdas:     eigenvalues sorted descending, clipped to
                 [clip_floor, 1 - clip_floor]
    eigvecs:     column n holds psi_{n+1} evaluated at the nodes, scaled so
                 that the L2 norm over the whole line is 1, equivalently
                 sum_i w_i psi_n(t_i)^2 == lambda_n (concentration on the
                 observation window)
    trace_error: |sum of raw eigenvalues - N0|, a discretization self-check
    """

    lambdas: np.ndarray
    eigvecs: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    omega: float
    t_obs: float
    quad_order: int
    clip_floor: float
    trace_error: float

    @property
    def nominal_dimension(self) -> float:
        return self.omega * self.t_obs / math.pi

    def __len__(self) -> int:
        return len(self.lambdas)


def build_kernel_matrix(
    omega: float, t_obs: float, quad_order: int | None = None
) -> KernelMatrix:
    """Discretize the sinc kernel on a Gauss-Legendre rule.

    Args:
        omega: one-sided angular bandwidth in rad/s, > 0.
        t_obs: observation window length, > 0.
        quad_order: number of quadrature nodes; defaults to
            max(256, 8 * ceil(N0)). Must be >= 4 * ceil(N0) so the
            transition band is resolved.

    Returns:
        KernelMatrix with the symmetric matrix, nodes, and weights.
    """
    if not (omega > 0 and math.isfinite(omega)):
        raise ValueError(f"omega must be positive and finite, got {omega}")
    if not (t_obs > 0 and math.isfinite(t_obs)):
        raise ValueError(f"t_obs must be positive and finite, got {t_obs}")
    n0 = omega * t_obs / math.pi
    if quad_order is None:
        quad_order = default_quad_order(omega, t_obs)
    quad_order = int(quad_order)
    min_order = 4 * math.ceil(n0)
    if quad_order < min_order:
        raise ConfigurationError(
            f"quad_order {quad_order} is below 4 * ceil(N0) = {min_order}; "
            "the eigenvalue transition band would be unresolved"
        )

    x, w = np.polynomial.legendre.leggauss(quad_order)
    nodes = x * (t_obs / 2.0)
    weights = w * (t_obs / 2.0)

    diff = nodes[:, None] - nodes[None, :]
    kernel = (omega / math.pi) * _sinc(omega * diff)
    matrix = kernel * np.sqrt(np.outer(weights, weights))
    matrix = 0.5 * (matrix + matrix.T)
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("kernel matrix contains non-finite entries")
    return KernelMatrix(
        matrix=matrix,
        nodes=nodes,
        weights=weights,
        omega=omega,
        t_obs=t_obs,
        quad_order=quad_order,
    )


def compute_spectrum(
    kernel: KernelMatrix, clip_floor: float = CLIP_FLOOR
) -> EigenSpectrum:
    """Solve the symmetric eigenproblem and postprocess the spectrum.

    Eigenvalues are sorted descending and clipped into
    [clip_floor, 1 - clip_floor]; clipping events are counted and logged
    because they mark where the discretized tail is pure roundoff.
    Eigenvector columns are rescaled from the symmetrized coordinates back
    to function values at the nodes, normalized to unit energy on the
    whole line.
    """
    if not (0 < clip_floor < 0.5):
        raise ValueError(f"clip_floor must lie in (0, 0.5), got {clip_floor}")
    try:
        raw_lambdas, raw_vecs = eigh(kernel.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh on
        # symmetric input essentially cannot fail, but surface it as ours
        raise NumericalError(f"eigensolve failed: {exc}") from exc
    if not np.all(np.isfinite(raw_lambdas)):
        raise NumericalError("eigensolve returned non-finite eigenvalues")

    # eigh returns ascending order
    raw_lambdas = raw_lambdas[::-1]
    raw_vecs = raw_vecs[:, ::-1]

    n0 = kernel.omega * kernel.t_obs / math.pi
    trace_error = abs(float(raw_lambdas.sum()) - n0)

    below = int(np.sum(raw_lambdas < clip_floor))
    above = int(np.sum(raw_lambdas > 1.0 - clip_floor))
    if below or above:
        logger.debug(
            "clipped %d eigenvalues below %g and %d above %g",
            below,
            clip_floor,
            above,
            1.0 - clip_floor,
        )
    lambdas = np.clip(raw_lambdas, clip_floor, 1.0 - clip_floor)

    # Back out function values: the symmetric solve works in sqrt(w)-scaled
    # coordinates, and sqrt(lambda) converts interval-normalized functions
    # to line-normalized ones (energy lambda_n falls inside the window).
    eigvecs = (raw_vecs / np.sqrt(kernel.weights)[:, None]) * np.sqrt(lambdas)[None, :]

    return EigenSpectrum(
        lambdas=lambdas,
        eigvecs=eigvecs,
        nodes=kernel.nodes,
        weights=kernel.weights,
        omega=kernel.omega,
        t_obs=kernel.t_obs,
        quad_order=kernel.quad_order,
        clip_floor=clip_floor,
        trace_error=trace_error,
    )


def build_spectrum(
    omega: float, t_obs: float, quad_order: int | None = None
) -> EigenSpectrum:
    """Convenience wrapper: discretize and solve in one call."""
    return compute_spectrum(build_kernel_matrix(omega, t_obs, quad_order))


# --- scalar functionals of the spectrum ---


def volume_correction(spectrum: EigenSpectrum, n_dim: int) -> float:
    """Geometric-mean root (prod_{n<=N} lambda_n)^(1/(2N)) of the spectrum.

    This is the volume correction between the energy ellipsoid of the
    first N modes and the enclosing ball; it tends to 1 as the window
    grows. Computed in log space to avoid underflow.
    """
    n_dim = _check_index(spectrum, n_dim)
    log_sum = float(np.sum(np.log(spectrum.lambdas[:n_dim])))
    return math.exp(log_sum / (2.0 * n_dim))


def n_width(spectrum: EigenSpectrum, energy: float, n_dim: int) -> float:
    """Kolmogorov width d_N = sqrt(energy * lambda_{N+1}).

    The worst-case error of the best N-dimensional approximating subspace
    for signals of energy at most `energy`; n_dim = 0 gives the trivial
    subspace and d_0 = sqrt(energy * lambda_1).
    """
    if not (energy > 0 and math.isfinite(energy)):
        raise ValueError(f"energy must be positive and finite, got {energy}")
    if not isinstance(n_dim, (int, np.integer)) or n_dim < 0:
        raise ValueError(f"n_dim must be a nonnegative integer, got {n_dim}")
    if n_dim >= len(spectrum.lambdas):
        raise InsufficientSpectrumError(
            f"n_dim {n_dim} needs eigenvalue {n_dim + 1} but only "
            f"{len(spectrum.lambdas)} were computed; raise quad_order"
        )
    return math.sqrt(energy * float(spectrum.lambdas[n_dim]))


def degrees_of_freedom(spectrum: EigenSpectrum, query: DofQuery) -> int:
    """Smallest N with d_N <= mu: the effective dimensionality at accuracy mu.

    Equivalently the count of eigenvalues exceeding mu^2 / energy. Returns 0
    when even the empty subspace meets the accuracy (mu >= sqrt(E * lambda_1)).

    Raises InsufficientSpectrumError when the threshold falls below the
    trustworthy part of the computed spectrum.
    """
    threshold = query.mu**2 / query.energy
    floor = max(100.0 * spectrum.clip_floor, 1e-13)
    if threshold < floor:
        raise InsufficientSpectrumError(
            f"accuracy threshold {threshold:.3e} is below the spectral "
            f"resolution floor {floor:.3e}; recompute with higher precision"
        )
    hits = np.nonzero(spectrum.lambdas <= threshold)[0]
    if len(hits) == 0:
        raise InsufficientSpectrumError(
            f"all {len(spectrum.lambdas)} computed eigenvalues exceed the "
            f"threshold {threshold:.3e}; raise quad_order"
        )
    return int(hits[0])


def dof_asymptotic(n0: float, energy: float, mu: float) -> float:
    """Large-window prediction N0 + ln(E/mu^2 - 1) * ln(N0*pi/2) / pi^2.

    The o(log N0) remainder of the underlying expansion is dropped.
    Requires n0 > 1 (so the inner log is positive) and 0 < mu^2 < energy.
    """
    if not (n0 > 1 and math.isfinite(n0)):
        raise ValueError(f"n0 must exceed 1, got {n0}")
    if not (energy > 0 and math.isfinite(energy)):
        raise ValueError(f"energy must be positive and finite, got {energy}")
    if not (mu > 0 and mu * mu < energy):
        raise ValueError(
            f"mu must satisfy 0 < mu^2 < energy, got mu={mu}, energy={energy}"
        )
    return n0 + math.log(energy / mu**2 - 1.0) * math.log(n0 * math.pi / 2.0) / math.pi**2


def transition_limit(k: float) -> float:
    """Limiting eigenvalue 1 / (1 + exp(k * pi^2)) at transition offset k."""
    # expit form is overflow-safe for large |k|
    return float(expit(-k * math.pi**2))


def phase_transition_residual(spectrum: EigenSpectrum, k: float) -> float:
    """Deviation of lambda at index floor(N0 + k*ln(N0*pi/2)) from its limit.

    The limit is 1/(1 + exp(k*pi^2)); at k = 0 the eigenvalue nearest the
    nominal dimensionality tends to 1/2. Convergence in N0 is logarithmic,
    so finite-window residuals shrink slowly (about 0.17 at N0 = 20).
    """
    if not math.isfinite(k):
        raise ValueError(f"k must be finite, got {k}")
    n0 = spectrum.nominal_dimension
    index_1b = math.floor(n0 + k * math.log(n0 * math.pi / 2.0))
    if index_1b < 1 or index_1b > len(spectrum.lambdas):
        raise ValueError(
            f"transition index {index_1b} for k={k} is outside the computed "
            f"spectrum of length {len(spectrum.lambdas)}"
        )
    return float(spectrum.lambdas[index_1b - 1]) - transition_limit(k)


def spectrum_record(spectrum: EigenSpectrum) -> dict:
    """JSON-ready summary of a spectrum (eigenvalues, not eigenvectors)."""
    return {
        "omega": spectrum.omega,
        "t_obs": spectrum.t_obs,
        "nominal_dimension": spectrum.nominal_dimension,
        "quad_order": spectrum.quad_order,
        "clip_floor": spectrum.clip_floor,
        "trace_error": spectrum.trace_error,
        "lambdas": [float(v) for v in spectrum.lambdas],
    }


def spectrum_from_record(record: dict) -> EigenSpectrum:
    """Rebuild a spectrum from a summary record.

    Eigenvector and node data are not round-tripped; the result supports
    the scalar functionals (zeta, n_width, degrees_of_freedom, residuals)
    but has empty eigvecs/nodes/weights arrays.
    """
    try:
        lambdas = np.asarray(record["lambdas"], dtype=float)
        omega = float(record["omega"])
        t_obs = float(record["t_obs"])
        quad_order = int(record["quad_order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed spectrum record: {exc}") from exc
    clip_floor = float(record.get("clip_floor", CLIP_FLOOR))
    return EigenSpectrum(
        lambdas=lambdas,
        eigvecs=np.empty((0, 0)),
        nodes=np.empty(0),
        weights=np.empty(0),
        omega=omega,
        t_obs=t_obs,
        quad_order=quad_order,
        clip_floor=clip_floor,
        trace_error=float(record.get("trace_error", math.nan)),
    )


def _check_index(spectrum: EigenSpectrum, n_dim: int) -> int:
    if not isinstance(n_dim, (int, np.integer)):
        raise ValueError(f"n_dim must be an integer, got {n_dim!r}")
    n_dim = int(n_dim)
    if n_dim < 1:
        raise ValueError(f"n_dim must be >= 1, got {n_dim}")
    if n_dim > len(spectrum.lambdas):
        raise InsufficientSpectrumError(
            f"n_dim {n_dim} exceeds the {len(spectrum.lambdas)} computed "
            "eigenvalues; raise quad_order"
        )
    return n_dim
