import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite as nph
from numpy.polynomial import laguerre as nplag
from numpy.polynomial import legendre as npleg

from polysieve.basis import (
    GENERALIZED_LEGENDRE,
    HERMITE,
    LAGUERRE,
    LEGENDRE,
    MAX_DEGREE,
    TRIGONOMETRIC,
    basis_eval,
    derivative_coeffs,
    gamma,
    gamma_tilde,
    generalized_from_standard,
    generalized_to_standard,
    get_family,
    weight,
)
from polysieve.errors import CapabilityError, InputError
from polysieve.quadrature import gauss_rule


def test_eval_examples():
    assert basis_eval(LEGENDRE, 0, 0.7) == 1.0
    assert basis_eval(LEGENDRE, 2, 0.5) == pytest.approx(-0.125, abs=1e-15)
    assert basis_eval(HERMITE, 1, 1.0) == 2.0


def test_weight_examples():
    assert weight(LEGENDRE, 0.3) == 1.0
    assert weight(HERMITE, 0.0) == 1.0
    assert weight(LAGUERRE, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert weight(TRIGONOMETRIC, 0.25) == 1.0


def test_gamma_examples():
    assert gamma(LEGENDRE, 1) == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert gamma(HERMITE, 0) == pytest.approx(1.7724539, abs=1e-7)
    assert gamma(LEGENDRE, 0) == 2.0
    assert gamma(LAGUERRE, 7) == 1.0
    assert gamma(TRIGONOMETRIC, 5) == 1.0


def test_hermite_gamma_overflow_is_capability_error():
    assert math.isfinite(HERMITE.gamma(140))
    assert math.isfinite(HERMITE.log_gamma(200))
    with pytest.raises(CapabilityError):
        HERMITE.gamma(200)


@pytest.mark.parametrize(
    "family, ref",
    [(LEGENDRE, npleg.legvander), (HERMITE, nph.hermvander), (LAGUERRE, nplag.lagvander)],
)
def test_vander_matches_numpy(family, ref):
    lo, hi = {"legendre": (-1, 1), "hermite": (-3, 3), "laguerre": (0, 12)}[family.name]
    x = np.linspace(lo, hi, 37)
    ours = family.vander(x, 16)
    theirs = ref(x, 15)
    scale = np.maximum(1.0, np.abs(theirs))
    assert np.max(np.abs(ours - theirs) / scale) < 1e-12


def test_trigonometric_members():
    x = np.array([0.1, 0.37, 0.8])
    v = TRIGONOMETRIC.vander(x, 5)
    np.testing.assert_allclose(v[:, 0], 1.0)
    np.testing.assert_allclose(v[:, 1], math.sqrt(2) * np.sin(2 * np.pi * x), atol=1e-15)
    np.testing.assert_allclose(v[:, 2], math.sqrt(2) * np.cos(2 * np.pi * x), atol=1e-15)
    np.testing.assert_allclose(v[:, 3], math.sqrt(2) * np.sin(4 * np.pi * x), atol=1e-14)
    np.testing.assert_allclose(v[:, 4], math.sqrt(2) * np.cos(4 * np.pi * x), atol=1e-14)


def test_domain_and_degree_errors():
    with pytest.raises(InputError):
        basis_eval(LEGENDRE, 1, 1.5)
    with pytest.raises(InputError):
        basis_eval(LAGUERRE, 1, -0.1)
    with pytest.raises(InputError):
        basis_eval(TRIGONOMETRIC, 1, -0.5)
    with pytest.raises(CapabilityError):
        basis_eval(LEGENDRE, MAX_DEGREE + 1, 0.0)
    assert math.isfinite(basis_eval(LEGENDRE, MAX_DEGREE, 0.3))


def test_get_family_aliases():
    assert get_family("trig") is TRIGONOMETRIC
    assert get_family("Legendre") is LEGENDRE
    assert get_family(HERMITE) is HERMITE
    with pytest.raises(InputError):
        get_family("chebyshev")


@pytest.mark.parametrize("family", [LEGENDRE, HERMITE, LAGUERRE])
def test_orthogonality(family):
    rule = gauss_rule(family, 20)
    q = family.vander(rule.nodes, 16)
    gram = (q * rule.weights[:, None]).T @ q
    gam = family.gammas(16)
    scale = np.maximum(1.0, np.sqrt(np.outer(gam, gam)))
    assert np.max(np.abs(gram - np.diag(gam)) / scale) <= 1e-10
    assert np.all(gam > 0)


def test_trigonometric_orthonormal():
    rule = gauss_rule(TRIGONOMETRIC, 64)
    q = TRIGONOMETRIC.vander(rule.nodes, 11)
    gram = (q * rule.weights[:, None]).T @ q
    np.testing.assert_allclose(gram, np.eye(11), atol=1e-12)


def test_q0_is_one():
    for fam in (LEGENDRE, HERMITE, LAGUERRE):
        lo = 0.0 if fam is LAGUERRE else -0.9
        np.testing.assert_array_equal(fam.vander(np.linspace(lo, 0.9, 7), 1)[:, 0], 1.0)


def test_derivative_coeff_examples():
    a = derivative_coeffs(HERMITE, 2, 1)
    np.testing.assert_array_equal(a, [0.0, 4.0])
    np.testing.assert_array_equal(derivative_coeffs(LEGENDRE, 1, 1), [1.0])
    a3 = derivative_coeffs(LEGENDRE, 3, 1)
    # projection oracle: a_i3 = (1/gamma_i) int L_3' L_i dx
    rule = gauss_rule(LEGENDRE, 8)
    d3 = LEGENDRE.derivative_vander(rule.nodes, 4, 1)[:, 3]
    oracle = (rule.weights * d3) @ LEGENDRE.vander(rule.nodes, 3) / LEGENDRE.gammas(3)
    np.testing.assert_allclose(a3, oracle, atol=1e-13)
    np.testing.assert_allclose(a3, [1.0, 0.0, 5.0], atol=1e-13)
    x = np.linspace(-0.95, 0.95, 20)
    recon = LEGENDRE.vander(x, 3) @ a3
    np.testing.assert_allclose(recon, (15 * x**2 - 3) / 2, atol=1e-12)


def test_derivative_coeff_errors():
    with pytest.raises(InputError):
        derivative_coeffs(LEGENDRE, 3, 0)
    with pytest.raises(InputError):
        derivative_coeffs(HERMITE, 2, 3)


def test_hermite_closed_form_exact():
    for j in range(1, 11):
        for l in range(1, min(j, 3) + 1):
            a = derivative_coeffs(HERMITE, j, l)
            expect = np.zeros(j)
            expect[j - l] = 2**l * math.prod(range(j - l + 1, j + 1))
            np.testing.assert_array_equal(a, expect)


@pytest.mark.parametrize("family", [LEGENDRE, LAGUERRE, GENERALIZED_LEGENDRE])
def test_derivative_reconstruction(family):
    lo, hi = (0.05, 6.0) if family is LAGUERRE else (-0.95, 0.95)
    x = np.linspace(lo, hi, 50)
    for j in range(1, 13):
        for l in range(1, min(j, 3) + 1):
            a = derivative_coeffs(family, j, l)
            recon = family.vander(x, j) @ a
            direct = family.derivative_vander(x, j + 1, l)[:, j]
            assert np.max(np.abs(recon - direct)) <= 1e-9, (j, l)


def test_hermite_reconstruction_relative():
    # H_j^(l) reaches ~1e9 on [-2, 2]; compare relative to the magnitude
    x = np.linspace(-2.0, 2.0, 50)
    for j in range(1, 13):
        for l in range(1, min(j, 3) + 1):
            recon = HERMITE.vander(x, j) @ derivative_coeffs(HERMITE, j, l)
            direct = HERMITE.derivative_vander(x, j + 1, l)[:, j]
            assert np.max(np.abs(recon - direct)) <= 1e-12 * max(1.0, np.max(np.abs(direct)))


def test_legendre_derivative_vs_numpy():
    x = np.linspace(-0.9, 0.9, 25)
    for j in range(1, 13):
        c = np.zeros(j + 1)
        c[j] = 1.0
        for l in range(1, min(j, 3) + 1):
            oracle = npleg.legval(x, npleg.legder(c, l))
            ours = LEGENDRE.vander(x, j) @ derivative_coeffs(LEGENDRE, j, l)
            assert np.max(np.abs(ours - oracle)) <= 1e-9


@pytest.mark.parametrize("family", [LEGENDRE, HERMITE, LAGUERRE])
def test_first_derivative_finite_difference(family):
    lo, hi = (0.1, 5.0) if family is LAGUERRE else (-0.9, 0.9)
    x = np.linspace(lo, hi, 30)
    h = 1e-5
    for j in range(1, 9):
        fd = (family.vander(x + h, j + 1)[:, j] - family.vander(x - h, j + 1)[:, j]) / (2 * h)
        recon = family.vander(x, j) @ derivative_coeffs(family, j, 1)
        assert np.max(np.abs(fd - recon) / np.maximum(1.0, np.abs(recon))) <= 1e-5


def test_gamma_tilde_examples():
    assert gamma_tilde(LEGENDRE, 1, 1) == pytest.approx(2.0, rel=1e-14)
    assert gamma_tilde(HERMITE, 1, 1) == pytest.approx(16 * math.sqrt(math.pi), rel=1e-14)
    lemma = gamma_tilde(LEGENDRE, 2, 1)
    assert gamma_tilde(LEGENDRE, 2, 1, "sieve") == pytest.approx(max(lemma, 2**7 * 0.4), rel=1e-14)


def test_gamma_tilde_sieve_dominates_lemma():
    for fam in (LEGENDRE, HERMITE, LAGUERRE):
        for j in range(1, 12):
            for p in (1, 2):
                lemma = gamma_tilde(fam, j, p)
                sieve = gamma_tilde(fam, j, p, "sieve")
                assert sieve >= lemma
                assert sieve >= j ** (7 * p) * fam.gamma(j) * (1 - 1e-14)


def test_gamma_tilde_rejects_bad_input():
    with pytest.raises(InputError):
        gamma_tilde(LEGENDRE, 0, 1)
    with pytest.raises(InputError):
        gamma_tilde(LEGENDRE, 2, 0)
    with pytest.raises(InputError):
        gamma_tilde(LEGENDRE, 2, 1, "other")


def test_generalized_examples():
    np.testing.assert_allclose(generalized_to_standard([1, 0, 0, 0]), [1 / math.sqrt(6), 0, 0, 0], atol=1e-16)
    np.testing.assert_array_equal(generalized_to_standard([0, 0, 0, 0]), [0, 0, 0, 0])
    np.testing.assert_allclose(
        generalized_to_standard([0, 0, 1, 0]), [-1 / math.sqrt(14), 0, 1 / math.sqrt(14), 0], atol=1e-16
    )
    with pytest.raises(InputError):
        generalized_to_standard([1.0])


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=11),
    st.integers(0, 2**31 - 1),
)
def test_generalized_equivalence(eta_tilde, seed):
    x = np.random.default_rng(seed).uniform(-1, 1, 100)
    lhs = GENERALIZED_LEGENDRE.vander(x, len(eta_tilde)) @ np.array(eta_tilde)
    rhs = LEGENDRE.vander(x, len(eta_tilde)) @ generalized_to_standard(eta_tilde)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(eta_tilde)))
    back = generalized_from_standard(generalized_to_standard(eta_tilde))
    np.testing.assert_allclose(back, eta_tilde, atol=1e-12 * max(1.0, np.max(np.abs(eta_tilde))))
