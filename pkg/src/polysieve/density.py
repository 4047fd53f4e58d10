"""Coefficient vectors and weighted densities.

A weighted density ``g`` is a density with respect to ``w(x) dx``; the
plain-Lebesgue density of the data is ``g(x) w(x)``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .basis import BasisFamily, gamma_tilde, get_family
from .errors import DegenerateNormalizationError, InputError
from .quadrature import DEFAULT_ORDER, gauss_rule, integrate

NORMALIZED_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Truncated expansion ``(eta_0, ..., eta_N)`` in a basis family."""

    family: BasisFamily
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        fam = get_family(self.family)
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size == 0:
            raise InputError("coefficient vector is empty")
        if not np.all(np.isfinite(vals)):
            raise InputError("coefficient vector has non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "values", vals)
        if self.normalized and abs(vals[0] * fam.gamma(0) - 1.0) > NORMALIZED_TOL:
            raise InputError("vector flagged normalized but eta_0 * gamma_0 != 1")

    @property
    def N(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientVector):
            return NotImplemented
        return self.family == other.family and np.array_equal(self.values, other.values)

    def to_record(self) -> dict:
        return {
            "family": self.family.name,
            "N": self.N,
            "values": [float(v) for v in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_json(cls, text: str) -> "CoefficientVector":
        rec = json.loads(text)
        vals = rec["values"]
        if len(vals) != rec["N"] + 1:
            raise InputError("record N does not match the number of values")
        return cls(get_family(rec["family"]), vals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["family", "N"] + [f"eta_{j}" for j in range(self.values.size)])
        writer.writerow([self.family.name, self.N] + [f"{v:.17g}" for v in self.values])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CoefficientVector":
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) != 2:
            raise InputError("expected a header row and one data row")
        row = rows[1]
        vals = [float(v) for v in row[2:]]
        if len(vals) != int(row[1]) + 1:
            raise InputError("record N does not match the number of values")
        return cls(get_family(row[0]), vals)


def evaluate(eta: CoefficientVector, x):
    """Raw expansion ``sum_j eta_j q_j(x)``; may be negative."""
    out = eta.family.vander(x, len(eta)) @ eta.values
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True, eq=False)
class WeightedDensity:
    """A density relative to the family's weight.

    ``fn`` is a vectorized callable returning ``g(x)``; coefficient-backed
    densities also keep their :class:`CoefficientVector`.
    """

    family: BasisFamily
    fn: Callable
    coeffs: CoefficientVector | None = None
    label: str = ""
    _mass: list = field(default_factory=list, repr=False)

    @classmethod
    def from_coefficients(cls, eta: CoefficientVector, label: str = "") -> "WeightedDensity":
        return cls(eta.family, lambda x: evaluate(eta, x), eta, label or "expansion")

    @classmethod
    def closed_form(cls, family, fn: Callable, label: str = "") -> "WeightedDensity":
        return cls(get_family(family), fn, None, label)

    def __call__(self, x):
        x = self.family.check_domain(x)
        return np.asarray(self.fn(x), dtype=float)

    def mass(self, m: int = 128) -> float:
        """``int g w dx`` (cached)."""
        if not self._mass:
            self._mass.append(integrate(self, gauss_rule(self.family, m)))
        return self._mass[0]


def project(g, family=None, N: int = 10, m: int | None = None) -> CoefficientVector:
    """Coefficients ``theta_j = (1/gamma_j) int g q_j w dx`` for ``j <= N``."""
    family = get_family(family) if family is not None else g.family
    if g.family.weight_id != family.weight_id:
        raise InputError("density and target family use different weights")
    if N < 0:
        raise InputError("truncation must be nonnegative")
    rule = gauss_rule(family, m or max(DEFAULT_ORDER, N + 1))
    q = family.vander(rule.nodes, N + 1)
    vals = np.asarray(g(rule.nodes), dtype=float)
    theta = (rule.weights * vals) @ q / family.gammas(N + 1)
    return CoefficientVector(family, theta)


def normalize(eta: CoefficientVector) -> tuple[CoefficientVector, float]:
    """Divide by ``Z = eta_0 gamma_0`` so the expansion integrates to one."""
    z = float(eta.values[0] * eta.family.gamma(0))
    if abs(z) < 1e-12:
        raise DegenerateNormalizationError(f"normalizer eta_0 * gamma_0 = {z!r}")
    vals = eta.values / z
    vals[0] = 1.0 / eta.family.gamma(0)
    return CoefficientVector(eta.family, vals, normalized=True), z


@dataclass(frozen=True)
class ShiftParams:
    """Shift level ``a_n`` with the family's ``gamma_0``; ``0 <= a_n < 1/gamma_0``."""

    a_n: float
    gamma_0: float

    def __post_init__(self):
        if not self.gamma_0 > 0:
            raise InputError("gamma_0 must be positive")
        if not 0.0 <= self.a_n < 1.0 / self.gamma_0:
            raise InputError(f"shift level {self.a_n!r} outside [0, 1/gamma_0)")

    @classmethod
    def for_family(cls, family, a_n: float) -> "ShiftParams":
        return cls(a_n, get_family(family).gamma(0))


def shift_density_value(g_val, s: ShiftParams):
    """``a_n + g (1 - a_n gamma_0)``."""
    if np.any(np.asarray(g_val) < 0):
        raise InputError("shifted value must come from a nonnegative density")
    return s.a_n + g_val * (1.0 - s.a_n * s.gamma_0)


def shift_coefficients(eta: CoefficientVector, s: ShiftParams) -> CoefficientVector:
    if abs(s.gamma_0 - eta.family.gamma(0)) > 1e-14 * s.gamma_0:
        raise InputError("shift parameters belong to a different family")
    if abs(eta.values[0] * s.gamma_0 - 1.0) > NORMALIZED_TOL:
        raise InputError("shift_coefficients needs a normalized vector")
    shrink = 1.0 - s.a_n * s.gamma_0
    vals = eta.values * shrink
    vals[0] = s.a_n + eta.values[0] * shrink
    return CoefficientVector(eta.family, vals, normalized=eta.normalized)


def shifted_density(g: WeightedDensity, s: ShiftParams) -> WeightedDensity:
    return WeightedDensity.closed_form(
        g.family, lambda x: shift_density_value(np.maximum(g.fn(x), 0.0), s), f"shift({g.label})"
    )


def max_shift_level(K: float, eps_n: float, gamma_0: float) -> float:
    """Largest shift keeping the Hellinger comparison valid: K^4 e^4 / ((16 + K^4 e^4) gamma_0)."""
    if K <= 0 or eps_n <= 0 or gamma_0 <= 0:
        raise InputError("K, eps_n and gamma_0 must be positive")
    t = K**4 * eps_n**4
    return t / ((16.0 + t) * gamma_0)


class SieveMembership(NamedTuple):
    member: bool
    statistic: float
    threshold: float


def sieve_membership(eta: CoefficientVector, n: int, p: int, mode: str = "sieve") -> SieveMembership:
    """Test ``sum_j eta_j^2 gamma_tilde_j <= n^(1/(2p+1))`` with ``gamma_tilde_0 = gamma_0``."""
    if n < 1:
        raise InputError("sample size must be >= 1")
    fam = eta.family
    stat = eta.values[0] ** 2 * fam.gamma(0)
    for j in range(1, len(eta)):
        if eta.values[j] != 0.0:
            stat += eta.values[j] ** 2 * gamma_tilde(fam, j, p, mode)
    threshold = n ** (1.0 / (2 * p + 1))
    return SieveMembership(bool(stat <= threshold), float(stat), float(threshold))


def clamp_mass(g: WeightedDensity, m: int = 128) -> float:
    """``int max(-g, 0) w dx``: the mass removed by clamping at zero."""
    return integrate(lambda x: np.maximum(-np.asarray(g.fn(x)), 0.0), gauss_rule(g.family, m))

