"""Monte Carlo codebook experiments against the error-fraction bounds.

A codebook of M points inside the energy body is hit by eps-bounded
noise; minimum-distance decoding fails on the part of each noise ball
that lies closer (ties included) to a competing codeword. The fraction
of the i-th ball lost this way is the per-codeword error fraction, and
the codebook-wide mean is the quantity the eps-delta capacity bounds
control: random codebooks of size floor(delta * (zeta*sqrt(E)/eps)^N)
should keep the mean at or below delta.

Randomness is reproducible and order-independent: each codeword gets its
own generator seeded from a content hash of (global seed, codeword
bytes), so permuting the codebook permutes the per-codeword results
without changing any of them.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .geometry import BoundReport, Ellipsoid, finite_reports
from .params import DofQuery, SignalSpaceParams

Z95 = 1.959963984540054  # two-sided 95% normal quantile

# Codewords farther apart than 2*eps*(1 + slack) cannot contribute errors;
# the slack absorbs roundoff in squared-distance computations.
_NEIGHBOR_SLACK = 1e-12

_MIN_SAMPLES = 100


# --- samplers ---


def sample_uniform_ball(
    dim: int, radius: float, rng: np.random.Generator, size: int | None = None
):
    """Uniform points in the dim-ball: isotropic direction times U^(1/dim) radius.

    Returns shape (dim,) for size=None, else (size, dim).
    """
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim}")
    if not (radius >= 0 and math.isfinite(radius)):
        raise ValueError(f"radius must be nonnegative and finite, got {radius}")
    n = 1 if size is None else int(size)
    if n < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    direction = rng.standard_normal((n, int(dim)))
    norms = np.linalg.norm(direction, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0  # probability-zero guard
    scale = radius * rng.random((n, 1)) ** (1.0 / dim)
    points = direction / norms * scale
    return points[0] if size is None else points


def sample_uniform_ellipsoid(
    radii, rng: np.random.Generator, size: int | None = None
):
    """Uniform points in an axis-aligned ellipsoid (ball sample scaled per axis)."""
    radii = Ellipsoid(radii).radii if not isinstance(radii, Ellipsoid) else radii.radii
    ball = sample_uniform_ball(len(radii), 1.0, rng, size=size)
    return ball * radii


# --- codebooks ---


@dataclass(frozen=True)
class Codebook:
    """Points to be distinguished under eps-bounded noise.

    radii, when present, is the generating ellipsoid; every point must lie
    inside it (within roundoff). seed/method record provenance of the draw.
    """

    points: np.ndarray
    radii: np.ndarray | None = None
    seed: int | None = None
    method: str = "explicit"

    def __post_init__(self):
        points = np.ascontiguousarray(np.atleast_2d(self.points), dtype="<f8")
        if points.ndim != 2 or points.shape[0] < 1:
            raise ValueError("points must form a nonempty (M, N) array")
        if not np.all(np.isfinite(points)):
            raise ValueError("codebook points must be finite")
        object.__setattr__(self, "points", points)
        if self.radii is not None:
            radii = np.asarray(self.radii, dtype=float)
            if radii.shape != (points.shape[1],):
                raise ValueError(
                    f"radii shape {radii.shape} does not match point "
                    f"dimension {points.shape[1]}"
                )
            object.__setattr__(self, "radii", radii)
            inside = np.sum((points / radii) ** 2, axis=1)
            if np.any(inside > 1.0 + 1e-12):
                raise ValueError("codebook points must lie inside their ellipsoid")

    @property
    def n_codewords(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def generate_codebook(radii, n_codewords: int, seed, method: str = "uniform_random") -> Codebook:
    """Draw n_codewords points uniformly in the ellipsoid given by radii."""
    if method != "uniform_random":
        raise ValueError(
            f"unknown method {method!r}; use generate_codebook for "
            "'uniform_random' or construct Codebook directly for explicit points"
        )
    if not isinstance(n_codewords, (int, np.integer)) or n_codewords < 1:
        raise ValueError(f"n_codewords must be >= 1, got {n_codewords}")
    radii = np.asarray(radii, dtype=float)
    rng = np.random.default_rng(seed)
    points = sample_uniform_ellipsoid(radii, rng, size=int(n_codewords))
    scalar_seed = int(seed) if isinstance(seed, (int, np.integer)) else None
    return Codebook(points=points, radii=radii, seed=scalar_seed, method=method)


def decode_error_indicator(codebook: Codebook, index: int, received) -> bool:
    """True when minimum-distance decoding of `received` misses codeword `index`.

    A competitor at exactly the same distance counts as an error (ties are
    resolved against the transmitted word).
    """
    points = codebook.points
    if not isinstance(index, (int, np.integer)) or not (0 <= index < len(points)):
        raise IndexError(f"index {index} out of range for {len(points)} codewords")
    received = np.asarray(received, dtype=float).ravel()
    if received.shape != (points.shape[1],):
        raise ValueError(
            f"received point has dimension {received.shape}, "
            f"codebook is {points.shape[1]}-d"
        )
    d2 = np.sum((points - received) ** 2, axis=1)
    own = d2[int(index)]
    d2[int(index)] = np.inf
    return bool(d2.min() <= own)


# --- error-fraction estimation ---


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    if not (0 <= successes <= trials):
        raise ValueError(f"successes {successes} outside [0, {trials}]")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials**2)) / denom
    # the exact endpoints at the degenerate counts; roundoff must not
    # push the interval off the point estimate
    lower = 0.0 if successes == 0 else max(0.0, center - half)
    upper = 1.0 if successes == trials else min(1.0, center + half)
    return lower, upper


def _codeword_digests(seed: int, points: np.ndarray) -> np.ndarray:
    """Content hash per codeword; the basis of order-independent streams."""
    prefix = struct.pack("<q", int(seed))
    out = np.empty(len(points), dtype="S32")
    for i, row in enumerate(points):
        out[i] = hashlib.sha256(prefix + row.tobytes()).digest()
    return out


def _stream_from_digest(digest: bytes) -> np.random.Generator:
    # S-dtype retrieval strips trailing nulls; digests are exactly 32 bytes
    words = struct.unpack("<4Q", digest.ljust(32, b"\x00"))
    return np.random.default_rng(np.random.SeedSequence(list(words)))


@dataclass(frozen=True)
class SimulationResult:
    """Per-codeword and aggregate error fractions with 95% intervals.

    error_fractions[k] is the estimated lost fraction of the noise ball
    around codeword eval_indices[k]; rows of error_fraction_cis are Wilson
    intervals ((0, 0) when no competitor is within reach and the fraction
    is exactly zero). mean_error_fraction averages the evaluated
    codewords; when eval_indices is a strict subset its interval also
    accounts for codeword-to-codeword spread. verdict, when a target was
    given, states whether the interval's upper end stays at or below it.
    """

    error_fractions: np.ndarray
    error_fraction_cis: np.ndarray
    mean_error_fraction: float
    mean_error_ci: tuple[float, float]
    samples_per_codeword: int
    n_codewords: int
    eval_indices: np.ndarray | None
    eps: float
    seed: int
    target_delta: float | None = None
    verdict: bool | None = None

    def to_dict(self) -> dict:
        return {
            "mean_error_fraction": self.mean_error_fraction,
            "mean_error_ci": list(self.mean_error_ci),
            "samples_per_codeword": self.samples_per_codeword,
            "n_codewords": self.n_codewords,
            "n_evaluated": len(self.error_fractions),
            "subsampled": self.eval_indices is not None,
            "eps": self.eps,
            "seed": self.seed,
            "target_delta": self.target_delta,
            "verdict": self.verdict,
            "error_fractions": [float(v) for v in self.error_fractions],
            "error_fraction_cis": [
                [float(a), float(b)] for a, b in self.error_fraction_cis
            ],
        }


def _neighbor_lists(
    points: np.ndarray, eval_idx: np.ndarray, eps: float, chunk: int = 16384
) -> list[np.ndarray]:
    """Indices within 2*eps of each evaluated codeword (itself excluded).

    Blocked dense distance computation; at the scales used here this beats
    spatial trees, which degrade badly in the dimensions of interest.
    """
    m = len(points)
    sq_all = np.einsum("ij,ij->i", points, points)
    eval_pts = points[eval_idx]
    sq_eval = sq_all[eval_idx]
    cutoff = (2.0 * eps) ** 2 * (1.0 + _NEIGHBOR_SLACK)
    hits: list[list[np.ndarray]] = [[] for _ in range(len(eval_idx))]
    for start in range(0, m, chunk):
        stop = min(start + chunk, m)
        block = points[start:stop]
        d2 = sq_eval[:, None] - 2.0 * (eval_pts @ block.T) + sq_all[start:stop][None, :]
        rows, cols = np.nonzero(d2 <= cutoff)
        for r, c in zip(rows, cols, strict=True):
            j = start + int(c)
            if j != int(eval_idx[r]):
                hits[int(r)].append(j)
    return [np.asarray(h, dtype=np.intp) for h in hits]


def estimate_error_fraction(
    codebook: Codebook,
    eps: float,
    samples: int,
    seed: int,
    target_delta: float | None = None,
    max_eval_codewords: int | None = None,
) -> SimulationResult:
    """Monte Carlo estimate of the mean decoding-error fraction.

    For each evaluated codeword, `samples` points are drawn uniformly in
    its eps-ball and decoded by minimum distance over the whole codebook;
    competitors at equal distance count as errors. Only codewords within
    2*eps can claim volume, so decoding reduces to the precomputed
    neighbor set; codewords with no neighbors contribute an exact zero.

    With max_eval_codewords set below the codebook size, evaluation runs
    on that many codewords chosen by smallest content hash (a fixed
    pseudo-random subset independent of codebook order), and the mean's
    interval widens to cover codeword-to-codeword spread.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    if not isinstance(samples, (int, np.integer)) or samples < _MIN_SAMPLES:
        raise ConfigurationError(
            f"samples must be an integer >= {_MIN_SAMPLES}, got {samples}"
        )
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    if target_delta is not None and not (0.0 < target_delta < 1.0):
        raise ValueError(f"target_delta must lie in (0, 1), got {target_delta}")
    if max_eval_codewords is not None and max_eval_codewords < 1:
        raise ConfigurationError("max_eval_codewords must be >= 1")

    points = codebook.points
    m, dim = points.shape
    samples = int(samples)
    seed = int(seed)

    digests = _codeword_digests(seed, points)
    subsampled = max_eval_codewords is not None and m > int(max_eval_codewords)
    if subsampled:
        # stable sort on the digest bytes: a permutation of the codebook
        # selects the same set of codeword values
        order = np.argsort(digests, kind="stable")
        eval_idx = np.sort(order[: int(max_eval_codewords)])
    else:
        eval_idx = np.arange(m)

    neighbors = _neighbor_lists(points, eval_idx, eps)

    k = len(eval_idx)
    fractions = np.zeros(k)
    cis = np.zeros((k, 2))
    error_counts = np.zeros(k, dtype=np.int64)
    for r in range(k):
        i = int(eval_idx[r])
        nb = neighbors[r]
        if len(nb) == 0:
            continue  # exact zero, interval stays (0, 0)
        rng = _stream_from_digest(bytes(digests[i]))
        draws = points[i] + sample_uniform_ball(dim, eps, rng, size=samples)
        # own distance goes through the same matmul as the competitors so
        # that a coincident codeword ties bit-for-bit and counts as error
        cols = np.concatenate([points[i : i + 1], points[nb]], axis=0)
        d2 = (
            np.einsum("ij,ij->i", draws, draws)[:, None]
            - 2.0 * (draws @ cols.T)
            + np.einsum("ij,ij->i", cols, cols)[None, :]
        )
        errors = int(np.sum(np.min(d2[:, 1:], axis=1) <= d2[:, 0]))
        error_counts[r] = errors
        fractions[r] = errors / samples
        cis[r] = wilson_interval(errors, samples)

    mean = float(fractions.mean())
    pooled = wilson_interval(int(error_counts.sum()), k * samples)
    if subsampled:
        # cluster interval: spread across codewords dominates; keep the
        # pooled interval as a floor so an all-zero subset is not read as
        # exactly zero
        se = float(fractions.std(ddof=1)) / math.sqrt(k) if k > 1 else 0.0
        lo = min(max(0.0, mean - Z95 * se), pooled[0])
        hi = max(min(1.0, mean + Z95 * se), pooled[1])
        mean_ci = (lo, hi)
    else:
        mean_ci = pooled

    verdict = None if target_delta is None else bool(mean_ci[1] <= target_delta)
    return SimulationResult(
        error_fractions=fractions,
        error_fraction_cis=cis,
        mean_error_fraction=mean,
        mean_error_ci=mean_ci,
        samples_per_codeword=samples,
        n_codewords=m,
        eval_indices=eval_idx if subsampled else None,
        eps=float(eps),
        seed=seed,
        target_delta=target_delta,
        verdict=verdict,
    )


# --- the randomized codebook experiment ---


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one randomized codebook run.

    Codebook size resolution order: explicit n_codewords, then rate
    (floor(2^(T*rate)) codewords), then the satisfying size
    floor(delta * (zeta*sqrt(E)/eps)^N); always capped at max_codewords.
    dim_override forces the working dimension; otherwise it comes from
    the spectrum's degrees of freedom at accuracy mu (default eps), or
    round(N0) without a spectrum. A run whose verdict fails is retried
    with a fresh codebook up to `retries` times.
    """

    params: SignalSpaceParams
    dim_override: int | None = None
    rate: float | None = None
    n_codewords: int | None = None
    samples: int = 1000
    seed: int = 0
    max_codewords: int = 2**18
    retries: int = 3
    max_eval_codewords: int | None = 512
    mu: float | None = None

    def __post_init__(self):
        if self.dim_override is not None and self.dim_override < 1:
            raise ValueError(f"dim_override must be >= 1, got {self.dim_override}")
        if self.rate is not None and not (self.rate >= 0 and math.isfinite(self.rate)):
            raise ValueError(f"rate must be nonnegative and finite, got {self.rate}")
        if self.n_codewords is not None and self.n_codewords < 1:
            raise ValueError(f"n_codewords must be >= 1, got {self.n_codewords}")
        if self.rate is not None and self.n_codewords is not None:
            raise ValueError("give rate or n_codewords, not both")
        if self.samples < _MIN_SAMPLES:
            raise ConfigurationError(
                f"samples must be >= {_MIN_SAMPLES}, got {self.samples}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.max_codewords < 1 or self.retries < 1:
            raise ConfigurationError("max_codewords and retries must be >= 1")
        if self.mu is not None and self.mu <= 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class ExperimentOutcome:
    """Everything one experiment produced.

    result is None when the codebook size floored to zero (rate_too_low);
    bound is the report of the quantity the run probes (the eps-delta
    capacity, or the 2*eps capacity when delta = 0).
    """

    result: SimulationResult | None
    bound: BoundReport
    n_dim: int
    zeta_value: float
    n_codewords: int
    log2_target_size: float
    capped: bool
    attempts: int
    rate_too_low: bool
    radii_source: str

    def to_dict(self) -> dict:
        return {
            "result": None if self.result is None else self.result.to_dict(),
            "bound": self.bound.to_dict(),
            "n_dim": self.n_dim,
            "zeta_value": self.zeta_value,
            "n_codewords": self.n_codewords,
            "log2_target_size": self.log2_target_size,
            "capped": self.capped,
            "attempts": self.attempts,
            "rate_too_low": self.rate_too_low,
            "radii_source": self.radii_source,
        }


def run_random_code_experiment(
    config: ExperimentConfig, spectrum=None
) -> ExperimentOutcome:
    """Size a random codebook, estimate its error fraction, retry on failure.

    The satisfying-size codebook is the constructive side of the capacity
    lower bound: on average it meets the delta budget, so within a few
    retries a drawn codebook should pass the verdict.
    """
    params = config.params
    if spectrum is not None:
        from .spectrum import degrees_of_freedom, volume_correction

        if config.dim_override is not None:
            n_dim = int(config.dim_override)
        else:
            query = DofQuery(params.energy, config.mu if config.mu else params.eps)
            n_dim = max(1, degrees_of_freedom(spectrum, query))
        zeta_value = volume_correction(spectrum, n_dim)
        radii = np.sqrt(params.energy * spectrum.lambdas[:n_dim])
        radii_source = "spectrum"
    else:
        n_dim = (
            int(config.dim_override)
            if config.dim_override is not None
            else max(1, round(params.nominal_dimension))
        )
        zeta_value = 1.0
        radii = np.full(n_dim, math.sqrt(params.energy))
        radii_source = "ball"

    # codebook size
    capped = False
    if config.n_codewords is not None:
        n_codewords = int(config.n_codewords)
        log2_target = math.log2(n_codewords)
    elif config.rate is not None:
        log2_target = params.t_obs * config.rate
        n_codewords = _floor_pow2_exponent(log2_target)
    else:
        if params.delta <= 0.0:
            raise ConfigurationError(
                "sizing a codebook from the satisfying formula needs delta > 0; "
                "pass rate or n_codewords instead"
            )
        log2_target = n_dim * math.log2(
            zeta_value * math.sqrt(params.energy) / params.eps
        ) + math.log2(params.delta)
        n_codewords = _floor_pow2_exponent(log2_target)
    if n_codewords > config.max_codewords:
        n_codewords = int(config.max_codewords)
        capped = True

    reports = finite_reports(params, n_dim=n_dim, zeta_value=zeta_value)
    bound = reports["capacity_eps_delta" if params.delta > 0 else "capacity_2eps"]

    if n_codewords < 1:
        return ExperimentOutcome(
            result=None,
            bound=bound,
            n_dim=n_dim,
            zeta_value=zeta_value,
            n_codewords=0,
            log2_target_size=log2_target,
            capped=False,
            attempts=0,
            rate_too_low=True,
            radii_source=radii_source,
        )

    target = params.delta if params.delta > 0 else None
    result = None
    attempts = 0
    for attempt in range(config.retries):
        attempts = attempt + 1
        codebook = generate_codebook(radii, n_codewords, [config.seed, attempt])
        result = estimate_error_fraction(
            codebook,
            params.eps,
            config.samples,
            config.seed,
            target_delta=target,
            max_eval_codewords=config.max_eval_codewords,
        )
        if result.verdict is None or result.verdict:
            break
    return ExperimentOutcome(
        result=result,
        bound=bound,
        n_dim=n_dim,
        zeta_value=zeta_value,
        n_codewords=n_codewords,
        log2_target_size=log2_target,
        capped=capped,
        attempts=attempts,
        rate_too_low=False,
        radii_source=radii_source,
    )


def _floor_pow2_exponent(log2_size: float) -> int:
    """floor(2^log2_size) guarded against overflow; huge sizes saturate."""
    if log2_size >= 62:
        return 2**62
    if log2_size < 0:
        return 0
    return int(math.floor(2.0**log2_size))


# --- error exponent ---


def error_exponent(omega: float, energy: float, eps: float, rate: float) -> float:
    """Decay rate (Omega/pi)*log2(sqrt(energy)/eps) - rate of the error fraction.

    For rates below the per-unit-time capacity lower bound, the satisfying
    codebook's error fraction shrinks like 2^(-T * exponent) as the window
    grows.
    """
    if not (omega > 0 and math.isfinite(omega)):
        raise ValueError(f"omega must be positive and finite, got {omega}")
    if not (energy > 0 and math.isfinite(energy)):
        raise ValueError(f"energy must be positive and finite, got {energy}")
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    if not (rate >= 0 and math.isfinite(rate)):
        raise ValueError(f"rate must be nonnegative and finite, got {rate}")
    return (omega / math.pi) * math.log2(math.sqrt(energy) / eps) - rate


@dataclass(frozen=True)
class SweepPoint:
    t_obs: float
    n_dim: int
    n_codewords: int
    capped: bool
    mean_error_fraction: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class ExponentSweep:
    """Measured error fractions over growing windows at a fixed rate.

    fitted_slope is the least-squares slope of log2(mean error fraction)
    against t_obs over the points with a positive measured fraction (None
    when fewer than two qualify); predicted_decay = -error_exponent is the
    theory value to compare against.
    """

    points: tuple
    fitted_slope: float | None
    predicted_decay: float
    rate: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "points": [vars(p) for p in self.points],
            "fitted_slope": self.fitted_slope,
            "predicted_decay": self.predicted_decay,
            "rate": self.rate,
            "samples": self.samples,
            "seed": self.seed,
        }


def empirical_exponent_sweep(
    params: SignalSpaceParams,
    rate: float,
    t_values,
    seed: int,
    samples: int = 2000,
    use_spectrum: bool = False,
    max_codewords: int = 2**18,
    max_eval_codewords: int | None = 256,
) -> ExponentSweep:
    """Run the codebook experiment across window lengths at one rate.

    The rate must sit strictly below the per-unit-time capacity lower
    bound (Omega/pi)*log2(sqrt(snr)); otherwise no decay is predicted and
    the sweep is refused.
    """
    cap_lower = (params.omega / math.pi) * math.log2(params.sqrt_snr)
    if not (0 <= rate < cap_lower):
        raise ValueError(
            f"rate {rate} must lie in [0, {cap_lower:.6g}) so the error "
            "fraction is predicted to decay"
        )
    t_values = [float(t) for t in t_values]
    if len(t_values) < 2 or any(b <= a for a, b in zip(t_values, t_values[1:])):
        raise ValueError("t_values must be at least two strictly increasing windows")
    if any(t <= 0 for t in t_values):
        raise ValueError("t_values must be positive")

    points = []
    for t_obs in t_values:
        p = replace(params, t_obs=t_obs)
        spectrum = None
        if use_spectrum:
            from .spectrum import build_spectrum

            spectrum = build_spectrum(p.omega, p.t_obs)
        config = ExperimentConfig(
            params=p,
            rate=rate,
            samples=samples,
            seed=seed,
            max_codewords=max_codewords,
            retries=1,
            max_eval_codewords=max_eval_codewords,
        )
        outcome = run_random_code_experiment(config, spectrum)
        result = outcome.result
        points.append(
            SweepPoint(
                t_obs=t_obs,
                n_dim=outcome.n_dim,
                n_codewords=outcome.n_codewords,
                capped=outcome.capped,
                mean_error_fraction=result.mean_error_fraction,
                ci_low=result.mean_error_ci[0],
                ci_high=result.mean_error_ci[1],
            )
        )

    positive = [(p.t_obs, p.mean_error_fraction) for p in points if p.mean_error_fraction > 0]
    slope = None
    if len(positive) >= 2:
        ts = np.array([t for t, _ in positive])
        logs = np.log2([v for _, v in positive])
        slope = float(np.polyfit(ts, logs, 1)[0])
    return ExponentSweep(
        points=tuple(points),
        fitted_slope=slope,
        predicted_decay=-error_exponent(params.omega, params.energy, params.eps, rate),
        rate=rate,
        samples=samples,
        seed=seed,
    )
