"""True densities used in the experiments and seeded i.i.d. draws from them."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import erf, erfinv

from .basis import HERMITE, LAGUERRE, LEGENDRE, BasisFamily, get_family
from .density import CoefficientVector, WeightedDensity, evaluate
from .errors import InputError, NumericError
from .quadrature import gauss_rule, integrate

CDF_POINTS = 8192
CHECK_POINTS = 2048
MASS_TOL = 1e-8


class TrueKind(str, enum.Enum):
    EXP1_SINE = "exp1_sine"
    SUPP_EXPONENTIAL = "supp_exponential"
    SUPP_GAUSSIAN = "supp_gaussian"
    COEFFICIENT_BACKED = "coefficient_backed"


_DEFAULT_FAMILY = {
    TrueKind.EXP1_SINE: LEGENDRE,
    TrueKind.SUPP_EXPONENTIAL: LAGUERRE,
    TrueKind.SUPP_GAUSSIAN: HERMITE,
}


def _sine_shape(x):
    return np.expm1(np.sin(0.5 * np.pi * (x + 1.0)))


@dataclass(frozen=True)
class TrueDensitySpec:
    kind: TrueKind
    family: BasisFamily
    c0: float
    density: WeightedDensity
    # numeric inverse-CDF table (x grid, cdf values) for kinds without a closed form
    cdf_grid: tuple | None = None

    def __call__(self, x):
        return self.density(x)

    def pdf(self, x):
        """Lebesgue density ``g_0(x) w(x)`` of the observations."""
        return self.density(x) * self.family.weight(x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is TrueKind.SUPP_EXPONENTIAL:
            return -np.expm1(-2.0 * np.maximum(x, 0.0))
        if self.kind is TrueKind.SUPP_GAUSSIAN:
            return 0.5 * (1.0 + erf(math.sqrt(2.0) * x))
        gx, gc = self.cdf_grid
        return np.interp(x, gx, gc)

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind is TrueKind.SUPP_EXPONENTIAL:
            return -np.log1p(-u) / 2.0
        if self.kind is TrueKind.SUPP_GAUSSIAN:
            return erfinv(2.0 * u - 1.0) / math.sqrt(2.0)
        gx, gc = self.cdf_grid
        keep = np.concatenate(([True], np.diff(gc) > 0))
        return np.interp(u, gc[keep], gx[keep])


def _cdf_table(density: WeightedDensity, lo: float, hi: float):
    x = np.linspace(lo, hi, CDF_POINTS)
    pdf = np.maximum(density(x), 0.0) * density.family.weight(x)
    steps = 0.5 * (pdf[1:] + pdf[:-1]) * np.diff(x)
    cdf = np.concatenate(([0.0], np.cumsum(steps)))
    cdf /= cdf[-1]
    cdf.setflags(write=False)
    x.setflags(write=False)
    return x, cdf


def _sampling_range(family: BasisFamily) -> tuple[float, float]:
    if family.weight_id == "hermite":
        return -8.0, 8.0
    if family.weight_id == "laguerre":
        return 0.0, 60.0
    return family.domain


def build_true_density(kind, family=None, coeffs: CoefficientVector | None = None) -> TrueDensitySpec:
    """Construct one of the experiment targets, validated for sign and mass."""
    kind = TrueKind(kind)
    if kind is TrueKind.COEFFICIENT_BACKED:
        if coeffs is None:
            raise InputError("coefficient-backed density needs a CoefficientVector")
        family = coeffs.family
    else:
        family = get_family(family) if family is not None else _DEFAULT_FAMILY[kind]
        if family.weight_id != _DEFAULT_FAMILY[kind].weight_id:
            raise InputError(f"{kind.value} is defined against the {_DEFAULT_FAMILY[kind].name} weight")

    rule = gauss_rule(family, 128)
    table = None
    if kind is TrueKind.EXP1_SINE:
        mass = integrate(_sine_shape, rule)
        if not mass > 0:
            raise NumericError(f"Exp1 normalizer integral is {mass!r}")
        c0 = 1.0 / mass
        dens = WeightedDensity.closed_form(family, lambda x: c0 * _sine_shape(x), "exp1_sine")
    elif kind is TrueKind.SUPP_EXPONENTIAL:
        c0 = 2.0
        dens = WeightedDensity.closed_form(family, lambda x: 2.0 * np.exp(-x), "2exp(-x)")
    elif kind is TrueKind.SUPP_GAUSSIAN:
        c0 = math.sqrt(2.0 / math.pi)
        dens = WeightedDensity.closed_form(family, lambda x: c0 * np.exp(-x * x), "gaussian")
    else:
        z = coeffs.values[0] * family.gamma(0)
        if not z > 0:
            raise NumericError("coefficient-backed density has nonpositive total mass")
        c0 = 1.0 / z
        dens = WeightedDensity.closed_form(family, lambda x: c0 * evaluate(coeffs, x), "coefficients")

    lo, hi = _sampling_range(family)
    grid = np.linspace(lo, hi, CHECK_POINTS)
    if np.any(dens(grid) < -1e-12):
        raise NumericError(f"{kind.value} density is negative on its domain")
    mass = integrate(dens, rule)
    if abs(mass - 1.0) > MASS_TOL:
        raise NumericError(f"{kind.value} density integrates to {mass!r}")
    if kind in (TrueKind.EXP1_SINE, TrueKind.COEFFICIENT_BACKED):
        table = _cdf_table(dens, lo, hi)
    return TrueDensitySpec(kind, family, c0, dens, table)


def draw(spec: TrueDensitySpec, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. points with Lebesgue density ``g_0 w``."""
    if n < 1:
        raise InputError("need n >= 1")
    rng = np.random.default_rng(seed)
    if spec.kind is TrueKind.SUPP_GAUSSIAN:
        return rng.normal(0.0, 0.5, size=n)
    return spec.inverse_cdf(rng.random(n))


def write_observations(path, y) -> None:
    y = np.asarray(y, dtype=float)
    Path(path).write_text("y\n" + "".join(f"{v:.17g}\n" for v in y))


def read_observations(path) -> np.ndarray:
    lines = Path(path).read_text().split()
    if lines and not _is_number(lines[0]):
        lines = lines[1:]
    if not lines:
        raise InputError(f"{path}: no observations")
    return np.array([float(v) for v in lines])


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True
