import math

import numpy as np
import pytest
from numpy.polynomial import hermite, laguerre, legendre

from polysieve.basis import HERMITE, LAGUERRE, LEGENDRE
from polysieve.errors import CapabilityError, InputError, NumericError
from polysieve.quadrature import (
    MAX_ORDER,
    extended_gram,
    fallback_grid,
    gauss_rule,
    integrate,
    trapezoid_integrate,
)


def moment(tag, k):
    """Analytic ``int x^k w(x) dx``."""
    if tag == "legendre":
        return 0.0 if k % 2 else 2.0 / (k + 1)
    if tag == "hermite":
        return 0.0 if k % 2 else math.gamma((k + 1) / 2)
    if tag == "laguerre":
        return float(math.factorial(k))
    return 1.0 / (k + 1)


def test_small_rule_examples():
    x, w = gauss_rule("legendre", 2)
    np.testing.assert_allclose(x, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(w, [1.0, 1.0], rtol=1e-15)
    x, w = gauss_rule("hermite", 1)
    assert x[0] == 0.0 and w[0] == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    x, w = gauss_rule("laguerre", 1)
    assert x[0] == pytest.approx(1.0, rel=1e-15) and w[0] == pytest.approx(1.0, rel=1e-15)


def test_integrate_examples():
    assert integrate(lambda x: np.ones_like(x), gauss_rule("legendre", 4)) == pytest.approx(2.0, rel=1e-15)
    assert integrate(lambda x: x**2, gauss_rule("legendre", 2)) == pytest.approx(2 / 3, rel=1e-15)
    assert integrate(lambda x: np.ones_like(x), gauss_rule("hermite", 3)) == pytest.approx(math.sqrt(math.pi))


def test_scalar_callback_accepted():
    assert integrate(lambda x: 1.0, gauss_rule("legendre", 3)) == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("tag, ref", [("legendre", legendre.leggauss), ("hermite", hermite.hermgauss),
                                      ("laguerre", laguerre.laggauss)])
@pytest.mark.parametrize("m", [3, 10, 40])
def test_matches_numpy_rules(tag, ref, m):
    x, w = gauss_rule(tag, m)
    rx, rw = ref(m)
    np.testing.assert_allclose(x, rx, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(w, rw, rtol=1e-10, atol=1e-300)


@pytest.mark.parametrize("tag", ["legendre", "hermite", "laguerre", "uniform01"])
def test_random_polynomial_exactness(tag):
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = int(rng.integers(1, 13))
        d = int(rng.integers(0, 2 * m))
        c = rng.normal(size=d + 1)
        rule = gauss_rule(tag, m)
        got = integrate(lambda x: np.polyval(c[::-1], x), rule)
        want = math.fsum(ck * moment(tag, k) for k, ck in enumerate(c))
        scale = math.fsum(abs(ck) * abs(moment(tag, k)) for k, ck in enumerate(c))
        assert abs(got - want) <= 1e-11 * max(scale, 1e-300)


@pytest.mark.parametrize("tag", ["legendre", "hermite", "laguerre", "uniform01"])
@pytest.mark.parametrize("m", [1, 7, 64, 128])
def test_rule_invariants(tag, m):
    rule = gauss_rule(tag, m)
    assert rule.nodes.size == m == rule.order
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    lo, hi = {"legendre": (-1, 1), "uniform01": (0, 1), "laguerre": (0, np.inf), "hermite": (-np.inf, np.inf)}[tag]
    assert np.all(rule.nodes > lo) and np.all(rule.nodes < hi)


def test_laguerre_weights_underflow_at_max_order():
    # tail weights fall below the smallest double; they are exact zeros, not negatives
    w = gauss_rule("laguerre", MAX_ORDER).weights
    assert np.all(w >= 0) and w[0] > 0


def test_rule_deterministic_and_readonly():
    a = gauss_rule(HERMITE, 50)
    b = gauss_rule("hermite", 50)
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)
    with pytest.raises(ValueError):
        a.nodes[0] = 0.0


def test_order_bounds():
    with pytest.raises(CapabilityError):
        gauss_rule("legendre", 0)
    with pytest.raises(CapabilityError):
        gauss_rule("legendre", MAX_ORDER + 1)
    with pytest.raises(InputError):
        gauss_rule("jacobi", 4)


def test_integrate_reports_bad_node():
    rule = gauss_rule("legendre", 4)
    with pytest.raises(NumericError, match="node"):
        integrate(lambda x: np.where(x == rule.nodes[2], np.nan, x), rule)


def test_fallback_grid_covers_mass():
    x = fallback_grid(HERMITE)
    assert x.size == 4097
    assert math.erfc(x[-1]) <= 1e-12 * 1.0001
    x = fallback_grid(LAGUERRE)
    assert math.exp(-x[-1]) == pytest.approx(1e-12, rel=1e-9)
    x = fallback_grid(LEGENDRE)
    assert x[0] == -1.0 and x[-1] == 1.0


@pytest.mark.parametrize("tag, f, want", [
    ("legendre", np.cos, 2 * math.sin(1.0)),
    ("hermite", lambda x: np.cos(x), math.sqrt(math.pi) * math.exp(-0.25)),
    ("laguerre", lambda x: np.exp(-x), 0.5),
])
def test_trapezoid_fallback_accuracy(tag, f, want):
    assert trapezoid_integrate(f, tag) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("family", [LEGENDRE, HERMITE, LAGUERRE])
def test_extended_gram_meets_per_column_scale(family):
    gram = extended_gram(family, 16)
    assert gram.dtype == np.longdouble
    gam = family.gammas(16)
    err = np.abs(gram - np.diag(gam).astype(np.longdouble)) / np.maximum(1.0, gam)[None, :]
    if np.finfo(np.longdouble).eps < 1e-18:
        assert float(err.max()) <= 1e-10
    # agrees with the double Gram up to its cancellation floor
    rule = gauss_rule(family, 17)
    q = family.vander(rule.nodes, 16)
    dbl = (q * rule.weights[:, None]).T @ q
    assert np.max(np.abs(dbl - gram.astype(float)) / np.sqrt(np.outer(gam, gam))) <= 1e-12
