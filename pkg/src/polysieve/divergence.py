"""Hellinger distance, KL divergence and log-ratio variance between weighted densities.

Density values are clamped at zero before entering any integrand, and log
arguments are floored at ``LOG_FLOOR``.  Every integral is taken with the
family's Gauss rule; :func:`divergence_report` also repeats the Hellinger
integral with the trapezoid fallback and records the discrepancy.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .density import WeightedDensity
from .errors import InputError, NumericWarning
from .quadrature import DIVERGENCE_ORDER, gauss_rule, trapezoid_integrate

LOG_FLOOR = 1e-300
SUPPORT_TOL = 1e-12
DISCREPANCY_TOL = 1e-6


def _check_pair(g1: WeightedDensity, g2: WeightedDensity) -> None:
    if g1.family.weight_id != g2.family.weight_id:
        raise InputError(
            f"densities live on different measures ({g1.family.weight_id} vs {g2.family.weight_id})"
        )


def _nodes(g1, g2, m):
    _check_pair(g1, g2)
    rule = gauss_rule(g1.family, m)
    v1 = np.maximum(np.asarray(g1.fn(rule.nodes), dtype=float), 0.0)
    v2 = np.maximum(np.asarray(g2.fn(rule.nodes), dtype=float), 0.0)
    return rule.weights, v1, v2


def _hellinger_integrand(g1, g2):
    def f(x):
        a = np.maximum(np.asarray(g1.fn(x), dtype=float), 0.0)
        b = np.maximum(np.asarray(g2.fn(x), dtype=float), 0.0)
        return (np.sqrt(a) - np.sqrt(b)) ** 2

    return f


def hellinger_sq(g1: WeightedDensity, g2: WeightedDensity, m: int = DIVERGENCE_ORDER) -> float:
    """``int (sqrt g1 - sqrt g2)^2 w dx``, clipped to ``[0, 2]``."""
    w, v1, v2 = _nodes(g1, g2, m)
    val = math.fsum(w * (np.sqrt(v1) - np.sqrt(v2)) ** 2)
    return min(max(val, 0.0), 2.0)


def hellinger(g1: WeightedDensity, g2: WeightedDensity, m: int = DIVERGENCE_ORDER) -> float:
    return math.sqrt(hellinger_sq(g1, g2, m))


def _log_ratio(g1, g2, m):
    w, v1, v2 = _nodes(g1, g2, m)
    if np.any((v1 > SUPPORT_TOL) & (v2 <= LOG_FLOOR)):
        return w, v1, None
    live = v1 > 0
    r = np.zeros_like(v1)
    r[live] = np.log(np.maximum(v1[live], LOG_FLOOR)) - np.log(np.maximum(v2[live], LOG_FLOOR))
    return w, v1, r


def kl(g1: WeightedDensity, g2: WeightedDensity, m: int = DIVERGENCE_ORDER) -> float:
    """``int g1 log(g1/g2) w dx``; ``math.inf`` when ``g2`` vanishes on ``g1``'s support."""
    w, v1, r = _log_ratio(g1, g2, m)
    if r is None:
        return math.inf
    return math.fsum(w * v1 * r)


def log_var(g1: WeightedDensity, g2: WeightedDensity, m: int = DIVERGENCE_ORDER) -> float:
    """Variance under ``g1`` of ``log g1 - log g2``."""
    w, v1, r = _log_ratio(g1, g2, m)
    if r is None:
        return math.inf
    mean = math.fsum(w * v1 * r)
    return math.fsum(w * v1 * r * r) - mean * mean


@dataclass(frozen=True)
class DivergenceReport:
    hellinger_sq: float
    kl: float
    log_var: float
    order: int
    discrepancy: float

    @property
    def warning(self) -> bool:
        return self.discrepancy > DISCREPANCY_TOL

    def csv_header(self) -> str:
        return "h2,kl,logvar,order,discrepancy"

    def csv_row(self) -> str:
        return (
            f"{self.hellinger_sq:.17g},{self.kl:.17g},{self.log_var:.17g},"
            f"{self.order},{self.discrepancy:.17g}"
        )


def divergence_report(
    g1: WeightedDensity, g2: WeightedDensity, m: int = DIVERGENCE_ORDER, warn: bool = True
) -> DivergenceReport:
    """All three divergences plus the Gauss-vs-trapezoid Hellinger discrepancy.

    Tiny negative values from quadrature noise are clamped to zero.
    """
    h2 = hellinger_sq(g1, g2, m)
    fallback = trapezoid_integrate(_hellinger_integrand(g1, g2), g1.family.weight_id)
    report = DivergenceReport(
        hellinger_sq=h2,
        kl=max(kl(g1, g2, m), 0.0),
        log_var=max(log_var(g1, g2, m), 0.0),
        order=m,
        discrepancy=abs(h2 - fallback),
    )
    if warn and report.warning:
        warnings.warn(
            f"Hellinger quadrature and trapezoid fallback differ by {report.discrepancy:.3g}",
            NumericWarning,
            stacklevel=2,
        )
    return report

