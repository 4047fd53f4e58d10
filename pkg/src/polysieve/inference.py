"""Sieve priors, the coefficient posterior and a random-walk Metropolis sampler.

Every state is read as the density ``max(g, 0) / Z`` with
``Z = int max(g, 0) w dx``, so the prior may leave ``eta_0`` free.  When
``g >= 0`` this ``Z`` is ``eta_0 gamma_0``.  States whose expansion is
nonpositive at any observation have zero likelihood and are always rejected.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .basis import TRIGONOMETRIC, BasisFamily, get_family
from .density import CoefficientVector, WeightedDensity
from .errors import InputError, StuckChainError
from .quadrature import DIVERGENCE_ORDER, gauss_rule

log = logging.getLogger(__name__)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

ADAPT_EVERY = 200
ADAPT_TARGET = (0.2, 0.4)
STUCK_LIMIT = 1000


class PriorSource(str, enum.Enum):
    THEORETICAL = "theoretical"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class SievePriorSpec:
    """Independent Gaussian coefficients, optionally mixed over truncation levels.

    Coordinates with ``sigma == 0`` are pinned at ``pinned[j]``.  With
    ``mixture_weights = (p_0, ..., p_k)`` the prior is ``sum_i p_i pi_{<i}``,
    where level ``i`` keeps the free coordinates below ``i`` and zeroes the rest.
    """

    family: BasisFamily
    sigmas: np.ndarray
    pinned: np.ndarray
    mixture_weights: np.ndarray | None = None
    source: PriorSource = PriorSource.EXPLICIT
    p: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", get_family(self.family))
        sig = np.array(self.sigmas, dtype=float).ravel()
        pin = np.array(self.pinned, dtype=float).ravel()
        if sig.size < 1 or pin.size != sig.size:
            raise InputError("sigmas and pinned values must be nonempty and equally long")
        if not np.all(np.isfinite(sig)) or np.any(sig < 0):
            raise InputError("prior standard deviations must be finite and >= 0")
        if not np.any(sig > 0):
            raise InputError("prior has no free coordinate")
        sig.setflags(write=False)
        pin.setflags(write=False)
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "pinned", pin)
        if self.mixture_weights is not None:
            mw = np.array(self.mixture_weights, dtype=float).ravel()
            if mw.size != sig.size + 1:
                raise InputError("mixture needs one weight per level 0..k")
            if np.any(mw < 0) or abs(mw.sum() - 1.0) > 1e-12:
                raise InputError("mixture weights must be nonnegative and sum to 1")
            mw.setflags(write=False)
            object.__setattr__(self, "mixture_weights", mw)
        if self.source is PriorSource.THEORETICAL:
            expected = theoretical_sigma_values(self.family, self.p, sig.size)
            if not np.array_equal(sig[1:], expected[1:]):
                raise InputError("theoretical prior sigmas do not follow j^-p gamma_j^-1/2")

    @property
    def k(self) -> int:
        return self.sigmas.size

    @property
    def free(self) -> np.ndarray:
        return self.sigmas > 0

    def start(self) -> np.ndarray:
        """Prior mean: pinned values, zeros on free coordinates."""
        return np.where(self.free, 0.0, self.pinned)

    def to_record(self) -> dict:
        return {
            "family": self.family.name,
            "sigmas": [float(s) for s in self.sigmas],
            "pinned": [float(v) for v in self.pinned],
            "mixture_weights": None
            if self.mixture_weights is None
            else [float(v) for v in self.mixture_weights],
            "source": self.source.value,
            "p": self.p,
        }


def theoretical_sigma_values(family, p: int, k: int) -> np.ndarray:
    family = get_family(family)
    j = np.arange(1, k)
    log_g = np.array([family.log_gamma(int(i)) for i in j])
    return np.concatenate(([0.0], np.exp(-p * np.log(j) - 0.5 * log_g)))


def theoretical_sigmas(family, p: int, k: int) -> SievePriorSpec:
    """Gaussian sieve with ``sigma_j = j^-p gamma_j^-1/2`` and ``eta_0`` pinned at ``1/gamma_0``."""
    family = get_family(family)
    if k < 2:
        raise InputError("truncation k must be >= 2")
    if p < 1:
        raise InputError("smoothness p must be >= 1")
    pinned = np.zeros(k)
    pinned[0] = 1.0 / family.gamma(0)
    return SievePriorSpec(
        family, theoretical_sigma_values(family, p, k), pinned, source=PriorSource.THEORETICAL, p=p
    )


def explicit_prior(family, sigmas, pinned=None) -> SievePriorSpec:
    sig = np.asarray(sigmas, dtype=float)
    pin = np.zeros(sig.size) if pinned is None else pinned
    return SievePriorSpec(get_family(family), sig, pin)


def trigonometric_prior(p: int = 2, frequencies: int = 5) -> SievePriorSpec:
    """Comparison prior on the Fourier basis.

    Coefficient ``j >= 1`` has variance ``s_j^-(2p+1)`` with ``s_j = j + 1``
    for odd ``j`` and ``s_j = j`` for even ``j`` (so the sine/cosine pair of
    each frequency share a scale).  The constant term is pinned at 1.
    """
    k = 2 * frequencies + 1
    j = np.arange(1, k)
    scale = np.where(j % 2 == 1, j + 1, j).astype(float)
    sig = np.concatenate(([0.0], scale ** (-(2 * p + 1) / 2.0)))
    pinned = np.zeros(k)
    pinned[0] = 1.0
    return SievePriorSpec(TRIGONOMETRIC, sig, pinned, p=p)


def with_mixture(spec: SievePriorSpec, weights=None) -> SievePriorSpec:
    """Attach level weights (default: uniform over levels ``2..k``)."""
    if weights is None:
        weights = np.zeros(spec.k + 1)
        weights[2:] = 1.0 / (spec.k - 1)
    return SievePriorSpec(spec.family, spec.sigmas, spec.pinned, weights, spec.source, spec.p)


def _gauss_terms(values, sigmas):
    free = sigmas > 0
    s = sigmas[free]
    return -0.5 * (values[free] / s) ** 2 - np.log(s) - _LOG_SQRT_2PI


def log_prior(eta, spec: SievePriorSpec) -> float:
    """Log prior density; ``-inf`` off the support (pinned or truncated coordinates)."""
    values = eta.values if isinstance(eta, CoefficientVector) else np.asarray(eta, dtype=float)
    if values.size != spec.k:
        raise InputError(f"coefficient vector has {values.size} entries, prior expects {spec.k}")
    free = spec.free
    if np.any(values[~free] != spec.pinned[~free]):
        return -math.inf
    if spec.mixture_weights is None:
        return float(np.sum(_gauss_terms(values, spec.sigmas)))
    terms = np.zeros(spec.k)
    terms[free] = _gauss_terms(values, spec.sigmas)
    nonzero_free = np.flatnonzero(free & (values != 0.0))
    last = nonzero_free[-1] if nonzero_free.size else -1
    levels = []
    for i, w in enumerate(spec.mixture_weights):
        if w <= 0 or i <= last:
            continue
        levels.append(math.log(w) + float(np.sum(terms[:i][free[:i]])))
    return float(logsumexp(levels)) if levels else -math.inf


class ClampedNormalizer:
    """``Z(eta) = int max(g, 0) w dx`` by Gauss quadrature.

    Normalizing by ``eta_0 gamma_0`` alone lets a state put positive mass on
    the data and cancelling negative mass elsewhere, which makes the
    likelihood unbounded as ``eta_0 -> 0``.
    """

    def __init__(self, family, k: int, m: int = DIVERGENCE_ORDER):
        self.family = get_family(family)
        rule = gauss_rule(self.family, m)
        self.weights = rule.weights
        self.basis = self.family.vander(rule.nodes, k)

    def __call__(self, values) -> np.ndarray:
        """Normalizer per state; ``values`` is (k,) or (S, k)."""
        g = self.basis @ np.asarray(values, dtype=float).T
        return self.weights @ np.maximum(g, 0.0)


class LogLikelihood:
    """``sum_i log(g(Y_i|eta) / Z(eta))`` with design matrices cached."""

    def __init__(self, family, data, k: int):
        self.family = get_family(family)
        data = np.asarray(data, dtype=float).ravel()
        if data.size == 0:
            raise InputError("likelihood needs at least one observation")
        self.n = data.size
        self.design = self.family.vander(data, k)
        self.normalizer = ClampedNormalizer(self.family, k)

    def __call__(self, values) -> float:
        g = self.design @ values
        if g.min() <= 0:
            return -math.inf
        z = float(self.normalizer(values))
        if not z > 0:
            return -math.inf
        return float(np.sum(np.log(g)) - self.n * math.log(z))


def log_likelihood(eta: CoefficientVector, data) -> float:
    return LogLikelihood(eta.family, data, len(eta))(eta.values)


@dataclass(frozen=True)
class McmcConfig:
    iterations: int = 10000
    burn_in: int = 2000
    proposal_scale: float = 0.3
    adapt: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise InputError("iterations must be >= 1")
        if not 0 <= self.burn_in < self.iterations:
            raise InputError("burn_in must satisfy 0 <= burn_in < iterations")
        if not self.proposal_scale > 0:
            raise InputError("proposal_scale must be positive")


@dataclass(frozen=True, eq=False)
class MarkovChain:
    family: BasisFamily
    samples: np.ndarray  # (iterations - burn_in, k), post-burn-in states
    log_posterior: np.ndarray
    acceptance_rate: float
    seed: int
    proposal_scale: float
    burn_in_acceptance: float = float("nan")
    normalizers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        z = np.empty(0)
        if len(self.samples):
            z = np.atleast_1d(ClampedNormalizer(self.family, self.samples.shape[1])(self.samples))
        object.__setattr__(self, "normalizers", z)

    def __len__(self) -> int:
        return self.samples.shape[0]

    def vectors(self) -> list[CoefficientVector]:
        return [CoefficientVector(self.family, row) for row in self.samples]

    def to_csv(self, burn_in: int = 0) -> str:
        k = self.samples.shape[1]
        lines = ["iteration,log_posterior," + ",".join(f"eta_{j}" for j in range(k))]
        for i, (row, lp) in enumerate(zip(self.samples, self.log_posterior)):
            vals = ",".join(f"{v:.17g}" for v in row)
            lines.append(f"{burn_in + i},{lp:.17g},{vals}")
        return "\n".join(lines) + "\n"


def rw_metropolis(spec: SievePriorSpec, data, cfg: McmcConfig, flat_likelihood: bool = False) -> MarkovChain:
    """Random-walk Metropolis on the coefficient posterior.

    Each step perturbs every free coordinate by ``scale * sigma_j * N(0, 1)``.
    With ``cfg.adapt`` the scale is rescaled every 200 burn-in steps toward
    an acceptance rate in [0.2, 0.4], then frozen.  ``flat_likelihood``
    replaces the likelihood by a constant so the chain targets the prior.
    """
    free = spec.free
    sig = spec.sigmas[free]
    if flat_likelihood:
        loglik = None
    else:
        loglik = LogLikelihood(spec.family, data, spec.k)

    def log_post(values):
        lp = log_prior(values, spec)
        if lp == -math.inf or loglik is None:
            return lp
        return lp + loglik(values)

    cur = spec.start()
    cur_lp = log_post(cur)
    if cur_lp == -math.inf:
        cur = np.zeros(spec.k)
        cur[0] = 1.0 / spec.family.gamma(0)
        cur = np.where(free, cur, spec.pinned)
        cur_lp = log_post(cur)
        if cur_lp == -math.inf:
            raise InputError("no admissible starting state for this prior and data")

    rng = np.random.default_rng(cfg.seed)
    noise = rng.standard_normal((cfg.iterations, sig.size))
    log_u = np.log(rng.random(cfg.iterations))

    kept = cfg.iterations - cfg.burn_in
    samples = np.empty((kept, spec.k))
    trace = np.empty(kept)
    scale = cfg.proposal_scale
    accepted_post = 0
    accepted_burn = 0
    window = 0
    rejected_run = 0
    for t in range(cfg.iterations):
        prop = cur.copy()
        prop[free] += scale * sig * noise[t]
        prop_lp = log_post(prop)
        accept = prop_lp > -math.inf and log_u[t] < prop_lp - cur_lp
        if accept:
            cur, cur_lp = prop, prop_lp
        if t < cfg.burn_in:
            accepted_burn += accept
            window += accept
            rejected_run = 0 if accept else rejected_run + 1
            if rejected_run >= STUCK_LIMIT:
                raise StuckChainError(
                    f"{STUCK_LIMIT} consecutive rejections during burn-in at scale {scale:.3g}; "
                    "reduce proposal_scale"
                )
            if cfg.adapt and (t + 1) % ADAPT_EVERY == 0:
                rate = window / ADAPT_EVERY
                if not ADAPT_TARGET[0] <= rate <= ADAPT_TARGET[1]:
                    scale *= min(max(rate / 0.3, 0.1), 10.0)
                window = 0
        else:
            accepted_post += accept
            samples[t - cfg.burn_in] = cur
            trace[t - cfg.burn_in] = cur_lp
    log.debug("chain finished: scale %.4g, acceptance %.3f", scale, accepted_post / kept)
    return MarkovChain(
        family=spec.family,
        samples=samples,
        log_posterior=trace,
        acceptance_rate=accepted_post / kept,
        seed=cfg.seed,
        proposal_scale=scale,
        burn_in_acceptance=accepted_burn / cfg.burn_in if cfg.burn_in else float("nan"),
    )


def _normalized_values(chain: MarkovChain, x: np.ndarray) -> np.ndarray:
    """(len(x), S) matrix of ``g(x|eta_s) / Z_s``, unclamped."""
    q = chain.family.vander(x, chain.samples.shape[1])
    return (q @ chain.samples.T) / chain.normalizers


@dataclass(frozen=True)
class Curve:
    x: np.ndarray
    mean: np.ndarray
    clamp_mass: float = 0.0
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None


def _chunks(x: np.ndarray, size: int = 256):
    for start in range(0, x.size, size):
        yield x[start : start + size]


def posterior_mean_density(chain: MarkovChain, grid) -> Curve:
    """Pointwise average of the clamped, normalized sample densities.

    ``clamp_mass`` is the trapezoid integral (against the weight) of the
    average negative part that clamping removed.
    """
    if len(chain) == 0:
        raise InputError("chain has no samples")
    x = chain.family.check_domain(np.asarray(grid, dtype=float).ravel())
    mean = np.empty(x.size)
    neg = np.empty(x.size)
    pos = 0
    for part in _chunks(x):
        vals = _normalized_values(chain, part)
        mean[pos : pos + part.size] = np.maximum(vals, 0.0).mean(axis=1)
        neg[pos : pos + part.size] = np.maximum(-vals, 0.0).mean(axis=1)
        pos += part.size
    clamp = float(np.trapezoid(neg * chain.family.weight(x), x)) if x.size > 1 else 0.0
    return Curve(x, mean, clamp)


def posterior_mean_weighted(chain: MarkovChain) -> WeightedDensity:
    """The posterior mean as a :class:`WeightedDensity` evaluable anywhere."""
    if len(chain) == 0:
        raise InputError("chain has no samples")

    def fn(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.empty(flat.size)
        pos = 0
        for part in _chunks(flat):
            out[pos : pos + part.size] = np.maximum(_normalized_values(chain, part), 0.0).mean(axis=1)
            pos += part.size
        return out.reshape(x.shape)

    return WeightedDensity.closed_form(chain.family, fn, "posterior_mean")


def credible_bands(chain: MarkovChain, grid, level: float = 0.95) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise quantiles ``(1 - level)/2`` and ``(1 + level)/2`` of the sample densities.

    Needs at least ``2 / (1 - level)`` samples so each tail holds one draw;
    ``level == 1`` returns the exact pointwise envelope.
    """
    if not 0.0 <= level <= 1.0:
        raise InputError("level must lie in [0, 1]")
    need = 2 if level >= 1.0 else max(2, math.ceil(2.0 / (1.0 - level) - 1e-9))
    if len(chain) < need:
        raise InputError(f"{len(chain)} samples are too few for a {level:.3g} band (need {need})")
    x = chain.family.check_domain(np.asarray(grid, dtype=float).ravel())
    lo_q, hi_q = (1.0 - level) / 2.0, (1.0 + level) / 2.0
    lower = np.empty(x.size)
    upper = np.empty(x.size)
    pos = 0
    for part in _chunks(x):
        vals = np.maximum(_normalized_values(chain, part), 0.0)
        lower[pos : pos + part.size] = np.quantile(vals, lo_q, axis=1)
        upper[pos : pos + part.size] = np.quantile(vals, hi_q, axis=1)
        pos += part.size
    return lower, upper


class KnVariant(str, enum.Enum):
    EXP1 = "exp1"
    EXP2 = "exp2"


def k_n_rule(n: int, p: int, variant="exp2", override: int | None = None) -> int:
    """Truncation level growing like ``n^((6p+1)/(7p(2p+1)))``.

    ``exp2``: ``2 n^e - 1`` rounded to the nearest integer, odd results
    bumped up to the next even number.  ``exp1``: the override when given,
    otherwise ``n^e - 1`` rounded.  Results are clamped to at least 2.
    """
    if n < 1 or p < 1:
        raise InputError("need n >= 1 and p >= 1")
    variant = KnVariant(variant)
    if override is not None:
        return max(int(override), 2)
    growth = n ** ((6 * p + 1) / (7 * p * (2 * p + 1)))
    if variant is KnVariant.EXP2:
        k = int(math.floor(2.0 * growth - 1.0 + 0.5))
        k += k % 2
    else:
        k = int(math.floor(growth - 1.0 + 0.5))
    return max(k, 2)
