"""Gauss rules for the basis weights, plus a trapezoid fallback grid.

Nodes come from the Golub-Welsch eigenproblem on the Jacobi matrix of the
orthonormal recurrence; one Newton step on ``p_m`` polishes them and the
weights are taken from the Christoffel formula ``1 / sum_k p_k(x)^2``,
accumulated with rescaling so large-node weights do not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import erfcinv

from .basis import WEIGHT_DOMAINS, BasisFamily, Kind, _recurrence_vander, get_family, weight_function
from .errors import CapabilityError, InputError, NumericError

MAX_ORDER = 256
DEFAULT_ORDER = 64
DIVERGENCE_ORDER = 128
FALLBACK_POINTS = 4097
# unbounded fallback grids cover weight mass >= 1 - TAIL_MASS
TAIL_MASS = 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    weight_id: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __iter__(self):
        return iter((self.nodes, self.weights))


def _weight_tag(weight) -> str:
    if isinstance(weight, BasisFamily):
        return weight.weight_id
    tag = str(weight).lower()
    if tag not in WEIGHT_DOMAINS:
        raise InputError(f"unknown weight tag {weight!r}")
    return tag


def _jacobi(tag: str, m: int):
    """Diagonal, off-diagonal (length m) and total mass of the weight."""
    k = np.arange(m, dtype=float)
    kk = np.arange(1, m + 1, dtype=float)
    if tag == "legendre":
        return np.zeros(m), kk / np.sqrt(4.0 * kk * kk - 1.0), 2.0
    if tag == "hermite":
        return np.zeros(m), np.sqrt(kk / 2.0), math.sqrt(math.pi)
    if tag == "laguerre":
        return 2.0 * k + 1.0, kk.copy(), 1.0
    raise InputError(f"no Jacobi matrix for {tag!r}")


def _orthonormal_sweep(x, alpha, beta, mu0):
    """Return p_m/p_m', and log of sum_{k<m} p_k^2 at x (vectorized)."""
    m = alpha.size
    p_prev = np.zeros_like(x)
    dp_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mu0))
    dp = np.zeros_like(x)
    total = p * p
    log_scale = np.zeros_like(x)
    for k in range(m):
        b_prev = beta[k - 1] if k else 0.0
        p_next = ((x - alpha[k]) * p - b_prev * p_prev) / beta[k]
        dp_next = ((x - alpha[k]) * dp + p - b_prev * dp_prev) / beta[k]
        p_prev, dp_prev, p, dp = p, dp, p_next, dp_next
        if k < m - 1:
            total = total + p * p
        big = np.abs(p) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p, p_prev, dp, dp_prev = p * f, p_prev * f, dp * f, dp_prev * f
            total = total * f * f
            log_scale = log_scale - 2.0 * np.log(f)
    return p / dp, np.log(total) + log_scale


@lru_cache(maxsize=64)
def _rule(tag: str, m: int) -> QuadratureRule:
    if tag == "uniform01":
        base = _rule("legendre", m)
        nodes, weights = 0.5 * (base.nodes + 1.0), 0.5 * base.weights
    else:
        alpha, beta, mu0 = _jacobi(tag, m)
        if m == 1:
            nodes = alpha[:1].copy()
        else:
            nodes = eigh_tridiagonal(alpha, beta[:-1], eigvals_only=True)
        step, _ = _orthonormal_sweep(nodes, alpha, beta, mu0)
        nodes = nodes - step
        _, log_total = _orthonormal_sweep(nodes, alpha, beta, mu0)
        weights = np.exp(-log_total)
        if tag in ("legendre", "hermite"):
            # enforce exact symmetry of the rule
            nodes = 0.5 * (nodes - nodes[::-1])
            weights = 0.5 * (weights + weights[::-1])
    order = np.argsort(nodes, kind="stable")
    nodes = np.ascontiguousarray(nodes[order])
    weights = np.ascontiguousarray(weights[order])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(tag, m, nodes, weights)


def gauss_rule(weight, m: int) -> QuadratureRule:
    """Gauss rule with ``m`` nodes for the given weight tag or family.

    Exact for polynomials of degree ``<= 2m - 1`` against the weight.
    """
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= MAX_ORDER:
        raise CapabilityError(f"quadrature order must be in [1, {MAX_ORDER}], got {m!r}")
    return _rule(_weight_tag(weight), int(m))


def _evaluate(f, x):
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.array([float(f(xi)) for xi in x])
    return vals


def integrate(f, rule: QuadratureRule) -> float:
    """``sum_k w_k f(x_k)`` with compensated summation."""
    vals = _evaluate(f, rule.nodes)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        node = float(rule.nodes[np.argmax(bad)])
        raise NumericError(f"integrand is not finite at node {node!r}")
    return math.fsum(rule.weights * vals)


def fallback_grid(weight, points: int = FALLBACK_POINTS) -> np.ndarray:
    """Uniform grid for the trapezoid cross-check.

    Bounded domains are covered exactly; unbounded ones are truncated where
    the weight's outside mass drops below ``TAIL_MASS``.
    """
    tag = _weight_tag(weight)
    if tag == "hermite":
        half = float(erfcinv(TAIL_MASS))
        return np.linspace(-half, half, points)
    if tag == "laguerre":
        return np.linspace(0.0, -math.log(TAIL_MASS), points)
    lo, hi = WEIGHT_DOMAINS[tag]
    return np.linspace(lo, hi, points)


def trapezoid_integrate(f, weight, points: int = FALLBACK_POINTS) -> float:
    """Trapezoid estimate of ``int f w dx`` on :func:`fallback_grid`.

    One Richardson step against the half-resolution trapezoid removes the
    ``h^2`` error term, which otherwise dominates the cross-check.
    """
    tag = _weight_tag(weight)
    x = fallback_grid(tag, points)
    vals = _evaluate(f, x) * weight_function(tag, x)
    fine = float(np.trapezoid(vals, x))
    if points % 2 == 0 or points < 5:
        return fine
    coarse = float(np.trapezoid(vals[::2], x[::2]))
    return (4.0 * fine - coarse) / 3.0


# pi to long double precision; np.pi is only a double
_PI_LD = np.longdouble("3.14159265358979323846264338327950288")


def _gammas_ld(kind: Kind, n: int) -> np.ndarray:
    j = np.arange(n)
    if kind is Kind.LEGENDRE:
        return np.longdouble(2) / (2 * j + 1).astype(np.longdouble)
    if kind is Kind.LAGUERRE:
        return np.ones(n, dtype=np.longdouble)
    if kind is Kind.HERMITE:
        out = np.empty(n, dtype=np.longdouble)
        out[0] = np.sqrt(_PI_LD)
        for i in range(1, n):
            out[i] = out[i - 1] * 2 * i
        return out
    raise CapabilityError(f"no long double norms for {kind.value}")


def extended_gram(family, n: int) -> np.ndarray:
    """Gram matrix of ``q_0..q_{n-1}`` under the weight, in ``np.longdouble``.

    A double-precision Gram leaves off-diagonal errors near eps * sqrt(gamma_i gamma_j)
    (about 1e-8 for Hermite degree 15) from cancellation.  Here the double Gauss
    nodes get Newton steps in long double and the weights are rebuilt from the
    Christoffel formula.  On platforms where long double is a plain double there
    is no gain.
    """
    family = get_family(family)
    m = n + 1
    x = gauss_rule(family, m).nodes.astype(np.longdouble)
    for _ in range(3):
        q = _recurrence_vander(family.kind, x, m + 1, 0)[:, m]
        dq = _recurrence_vander(family.kind, x, m + 1, 1)[:, m]
        x = x - q / dq
    gam = _gammas_ld(family.kind, m)
    v = _recurrence_vander(family.kind, x, m, 0)
    w = 1 / ((v * v) @ (1 / gam))
    vn = v[:, :n]
    return (vn * w[:, None]).T @ vn
