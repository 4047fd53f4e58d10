"""Orthogonal bases: evaluation, weights, norms and derivative coefficients.

Polynomial families are evaluated through their three-term recurrences
``q_{j+1} = (A_j x + B_j) q_j - C_j q_{j-1}``, which stay stable well past
the degree cap and never form factorials.  Derivatives use the same
recurrence differentiated ``l`` times.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapabilityError, InputError

MAX_DEGREE = 200

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


class Kind(str, enum.Enum):
    LEGENDRE = "legendre"
    GENERALIZED_LEGENDRE = "generalized_legendre"
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    TRIGONOMETRIC = "trigonometric"


# weight tags double as quadrature rule identifiers
_WEIGHT_ID = {
    Kind.LEGENDRE: "legendre",
    Kind.GENERALIZED_LEGENDRE: "legendre",
    Kind.HERMITE: "hermite",
    Kind.LAGUERRE: "laguerre",
    Kind.TRIGONOMETRIC: "uniform01",
}

WEIGHT_DOMAINS = {
    "legendre": (-1.0, 1.0),
    "hermite": (-math.inf, math.inf),
    "laguerre": (0.0, math.inf),
    "uniform01": (0.0, 1.0),
}


def weight_function(weight_id: str, x):
    x = np.asarray(x, dtype=float)
    if weight_id in ("legendre", "uniform01"):
        return np.ones_like(x)
    if weight_id == "hermite":
        return np.exp(-x * x)
    if weight_id == "laguerre":
        return np.exp(-x)
    raise InputError(f"unknown weight {weight_id!r}")


@dataclass(frozen=True)
class BasisFamily:
    """An orthogonal system ``{q_j}`` together with its weight and domain."""

    kind: Kind

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def weight_id(self) -> str:
        return _WEIGHT_ID[self.kind]

    @property
    def domain(self) -> tuple[float, float]:
        return WEIGHT_DOMAINS[self.weight_id]

    @property
    def is_polynomial(self) -> bool:
        return self.kind is not Kind.TRIGONOMETRIC

    def __str__(self) -> str:
        return self.name

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise InputError(f"{self.name}: non-finite evaluation point")
        lo, hi = self.domain
        if np.any(x < lo) or np.any(x > hi):
            bad = x[(x < lo) | (x > hi)].ravel()[0]
            raise InputError(f"{self.name}: point {bad!r} outside domain [{lo}, {hi}]")
        return x

    def weight(self, x):
        return weight_function(self.weight_id, self.check_domain(x))

    def vander(self, x, n: int) -> np.ndarray:
        """Values ``q_0(x), ..., q_{n-1}(x)`` stacked along a new last axis."""
        return self.derivative_vander(x, n, 0)

    def derivative_vander(self, x, n: int, l: int) -> np.ndarray:
        """``l``-th derivatives of ``q_0, ..., q_{n-1}`` along a new last axis."""
        if n < 1:
            raise InputError("need at least one basis function")
        if n - 1 > MAX_DEGREE:
            raise CapabilityError(f"degree {n - 1} exceeds supported maximum {MAX_DEGREE}")
        if l < 0:
            raise InputError("derivative order must be nonnegative")
        x = self.check_domain(x)
        if self.kind is Kind.TRIGONOMETRIC:
            if l:
                raise CapabilityError("derivatives are only provided for polynomial families")
            return _trig_vander(x, n)
        if self.kind is Kind.GENERALIZED_LEGENDRE:
            leg = _recurrence_vander(Kind.LEGENDRE, x, n, l)
            out = leg.copy()
            out[..., 2:] -= leg[..., :-2]
            return out / np.sqrt(4.0 * np.arange(n) + 6.0)
        return _recurrence_vander(self.kind, x, n, l)

    def eval(self, j: int, x):
        _check_degree(j)
        out = self.vander(x, j + 1)[..., j]
        return out if out.ndim else float(out)

    def log_gamma(self, j: int) -> float:
        _check_degree(j)
        if self.kind in (Kind.LEGENDRE, Kind.GENERALIZED_LEGENDRE):
            return math.log(2.0 / (2 * j + 1))
        if self.kind is Kind.HERMITE:
            return j * math.log(2.0) + math.lgamma(j + 1) + 0.5 * math.log(math.pi)
        return 0.0

    def gamma(self, j: int) -> float:
        lg = self.log_gamma(j)
        if lg > _LOG_FLOAT_MAX:
            raise CapabilityError(
                f"gamma_{j} for {self.name} overflows float64; use log_gamma"
            )
        return math.exp(lg)

    def gammas(self, n: int) -> np.ndarray:
        return np.array([self.gamma(j) for j in range(n)])


LEGENDRE = BasisFamily(Kind.LEGENDRE)
GENERALIZED_LEGENDRE = BasisFamily(Kind.GENERALIZED_LEGENDRE)
HERMITE = BasisFamily(Kind.HERMITE)
LAGUERRE = BasisFamily(Kind.LAGUERRE)
TRIGONOMETRIC = BasisFamily(Kind.TRIGONOMETRIC)
_FAMILIES = {f.kind: f for f in (LEGENDRE, GENERALIZED_LEGENDRE, HERMITE, LAGUERRE, TRIGONOMETRIC)}


def get_family(name) -> BasisFamily:
    if isinstance(name, BasisFamily):
        return name
    aliases = {"trig": "trigonometric", "genlegendre": "generalized_legendre"}
    key = str(name).strip().lower().replace("-", "_")
    try:
        return _FAMILIES[Kind(aliases.get(key, key))]
    except ValueError:
        raise InputError(f"unknown basis family {name!r}") from None


def _check_degree(j: int) -> None:
    if j < 0:
        raise InputError(f"degree must be nonnegative, got {j}")
    if j > MAX_DEGREE:
        raise CapabilityError(f"degree {j} exceeds supported maximum {MAX_DEGREE}")


def _recurrence_coeffs(kind: Kind, j: int) -> tuple[float, float, float]:
    if kind is Kind.LEGENDRE:
        return (2 * j + 1) / (j + 1), 0.0, j / (j + 1)
    if kind is Kind.HERMITE:
        return 2.0, 0.0, 2.0 * j
    if kind is Kind.LAGUERRE:
        return -1.0 / (j + 1), (2 * j + 1) / (j + 1), j / (j + 1)
    raise InputError(f"no three-term recurrence for {kind.value}")


def _recurrence_vander(kind: Kind, x: np.ndarray, n: int, l: int) -> np.ndarray:
    # rows: derivative order 0..l; differentiating the recurrence l times gives
    # q_{j+1}^(l) = (A x + B) q_j^(l) + l A q_j^(l-1) - C q_{j-1}^(l)
    out = np.zeros((l + 1,) + x.shape + (n,), dtype=np.result_type(x, float))
    out[0, ..., 0] = 1.0
    for j in range(n - 1):
        a, b, c = _recurrence_coeffs(kind, j)
        for d in range(l + 1):
            nxt = (a * x + b) * out[d, ..., j]
            if d:
                nxt = nxt + d * a * out[d - 1, ..., j]
            if j:
                nxt = nxt - c * out[d, ..., j - 1]
            out[d, ..., j + 1] = nxt
    return out[l]


def _trig_vander(x: np.ndarray, n: int) -> np.ndarray:
    out = np.empty(x.shape + (n,))
    out[..., 0] = 1.0
    for idx in range(1, n):
        freq = (idx + 1) // 2
        arg = 2.0 * math.pi * freq * x
        out[..., idx] = math.sqrt(2.0) * (np.sin(arg) if idx % 2 else np.cos(arg))
    return out


def basis_eval(family, j: int, x):
    """Value of the degree-``j`` basis member at ``x``."""
    return get_family(family).eval(j, x)


def weight(family, x):
    return get_family(family).weight(x)


def gamma(family, j: int) -> float:
    """Squared norm ``int q_j^2 w dx`` from the closed forms."""
    return get_family(family).gamma(j)


@lru_cache(maxsize=None)
def _legendre_derivative_matrix(n: int, l: int) -> np.ndarray:
    # column j holds a_{.j}^{(l)}; built from L_{k+1}^(l) = L_{k-1}^(l) + (2k+1) L_k^(l-1)
    prev = np.eye(n)
    for _ in range(l):
        cur = np.zeros((n, n))
        for k in range(n - 1):
            cur[:, k + 1] = (2 * k + 1) * prev[:, k]
            if k >= 1:
                cur[:, k + 1] += cur[:, k - 1]
        prev = cur
    prev.setflags(write=False)
    return prev


def _projected_derivative_coeffs(family: BasisFamily, j: int, l: int) -> np.ndarray:
    from .quadrature import gauss_rule

    rule = gauss_rule(family.weight_id, j + 1)
    deriv = family.derivative_vander(rule.nodes, j + 1, l)[:, j]
    q = family.vander(rule.nodes, j)
    return (rule.weights * deriv) @ q / family.gammas(j)


def derivative_coeffs(family, j: int, l: int) -> np.ndarray:
    """Coefficients ``(a_0j, ..., a_{j-1,j})`` of ``q_j^(l)`` in the lower basis."""
    family = get_family(family)
    _check_degree(j)
    if l < 1:
        raise InputError("derivative order must be >= 1; q_j itself is not in the lower span")
    if l > j:
        raise InputError(f"derivative order {l} exceeds degree {j}")
    if family.kind is Kind.HERMITE:
        out = np.zeros(j)
        out[j - l] = 2.0**l * math.perm(j, l)
        return out
    if family.kind is Kind.LEGENDRE:
        return _legendre_derivative_matrix(j + 1, l)[:j, j].copy()
    if family.kind is Kind.LAGUERRE:
        return _projected_derivative_coeffs(family, j, l)
    if family.kind is Kind.GENERALIZED_LEGENDRE:
        # same span as L_0..L_{j-1}; rewrite the Legendre coefficients in the
        # (upper-triangular) generalized basis
        table = _legendre_derivative_matrix(j + 1, l)
        lcoef = table[:j, j].copy()
        if j >= 2:
            lcoef -= table[:j, j - 2]
        return generalized_from_standard(lcoef / math.sqrt(4 * j + 6))
    raise CapabilityError("derivative coefficients are only defined for polynomial families")


def gamma_tilde(family, j: int, p: int, mode: str = "lemma") -> float:
    """Growth weight for coefficient ``j``.

    ``mode="lemma"`` gives the smallest admissible value
    ``max(max_l sum_i (a_ij^(l))^4 gamma_i, j^4 max_i gamma_i)`` with ``l``
    running over ``1..min(j, p)``; ``mode="sieve"`` additionally floors it at
    ``j^(7p) gamma_j`` as required by the Gaussian sieve prior.
    """
    family = get_family(family)
    mode = mode.lower()
    if mode not in ("lemma", "sieve"):
        raise InputError(f"unknown gamma_tilde mode {mode!r}")
    if j < 1:
        raise InputError("gamma_tilde is defined for j >= 1")
    if p < 1:
        raise InputError("smoothness p must be >= 1")
    gam = family.gammas(j)
    value = j**4 * gam.max()
    for l in range(1, min(j, p) + 1):
        a = derivative_coeffs(family, j, l)
        value = max(value, float(np.sum(a**4 * gam)))
    if mode == "sieve":
        value = max(value, float(j) ** (7 * p) * family.gamma(j))
    return value


def generalized_to_standard(eta_tilde) -> np.ndarray:
    """Legendre coefficients of ``sum_j eta_tilde_j (L_j - L_{j-2}) / sqrt(4j+6)``.

    ``L_{-1} = L_{-2} = 0``, so the first two generalized members are plain
    rescaled Legendre polynomials.
    """
    t = np.asarray(eta_tilde, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise InputError("need a coefficient list of length N+1 with N >= 1")
    scaled = t / np.sqrt(4.0 * np.arange(t.size) + 6.0)
    out = scaled.copy()
    out[:-2] -= scaled[2:]
    return out


def generalized_from_standard(eta) -> np.ndarray:
    """Inverse of :func:`generalized_to_standard`."""
    eta = np.asarray(eta, dtype=float)
    n = eta.size
    scaled = np.zeros(n)
    for j in range(n - 1, -1, -1):
        scaled[j] = eta[j] + (scaled[j + 2] if j + 2 < n else 0.0)
    return scaled * np.sqrt(4.0 * np.arange(n) + 6.0)
