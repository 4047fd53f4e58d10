import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polysieve.basis import HERMITE, LEGENDRE, gamma_tilde
from polysieve.errors import InputError
from polysieve.experiments import (
    HARDY_CONSTANT,
    ExperimentConfig,
    default_config,
    derive_seed,
    divergence_check,
    growth_check,
    growth_ratios,
    hardy_check,
    hardy_sums,
    orthogonality_check,
    run,
    run_experiment2,
    thread_count,
)


def brute_hardy(a, b):
    J = len(a)
    lhs = sum((b[i] * sum(a[j - 1] for j in range(i + 1, J + 1))) ** 3 for i in range(J))
    rhs = sum(j**4 * a[j - 1] ** 3 * max(b[:j]) ** 3 for j in range(1, J + 1))
    return lhs, rhs


def small_exp2(**kw):
    base = dict(n_values=(100, 400), m=2, iterations=600, burn_in=200)
    base.update(kw)
    return default_config("exp2", **base)


def test_hardy_constant():
    assert HARDY_CONSTANT == pytest.approx(2.6123753486854883**2, rel=1e-14)


def test_hardy_examples():
    assert hardy_sums(np.zeros(5), np.ones(5)) == (0.0, 0.0)
    lhs, rhs = hardy_sums([2.0], [3.0])
    assert lhs == rhs == pytest.approx(216.0)
    assert lhs / (HARDY_CONSTANT * rhs) == pytest.approx(1 / HARDY_CONSTANT)
    with pytest.raises(InputError):
        hardy_sums([1.0, -1.0], [1.0, 1.0])
    with pytest.raises(InputError):
        hardy_check(J=2)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12).flatmap(lambda J: st.tuples(
    st.lists(st.floats(0, 10), min_size=J, max_size=J),
    st.lists(st.floats(0, 10), min_size=J, max_size=J))))
def test_hardy_sums_match_brute_force(ab):
    a, b = ab
    lhs, rhs = hardy_sums(a, b)
    blhs, brhs = brute_hardy(a, b)
    assert lhs == pytest.approx(blhs, rel=1e-12, abs=1e-300)
    assert rhs == pytest.approx(brhs, rel=1e-12, abs=1e-300)
    assert lhs <= HARDY_CONSTANT * rhs * (1 + 1e-12)


def test_hardy_random_trials():
    rep = hardy_check(trials=1000, J=50, seed=0)
    assert rep.passed, rep.summary()
    assert "PASS" in rep.summary()


def test_growth_check():
    rep = growth_check()
    assert rep.passed, rep.summary()
    r = growth_ratios(LEGENDRE, 1)
    assert r[0] == pytest.approx(gamma_tilde(LEGENDRE, 5, 1) / 5**5, rel=1e-15)
    assert growth_ratios(HERMITE, 2).size == 36
    with pytest.raises(InputError):
        growth_ratios("laguerre", 1)


def test_orthogonality_and_divergence_checks():
    assert orthogonality_check().passed
    rep = divergence_check()
    assert rep.passed, rep.summary()


def test_derive_seed():
    assert derive_seed(0, 1, 2, 0) == derive_seed(0, 1, 2, 0)
    seeds = {derive_seed(7, i, r, s) for i in range(5) for r in range(20) for s in range(2)}
    assert len(seeds) == 200
    assert derive_seed(7, 0, 0, 0) != derive_seed(8, 0, 0, 0)
    assert 0 <= derive_seed(3, 0) < 2**64


def test_thread_count(monkeypatch):
    monkeypatch.delenv("POLYSIEVE_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("POLYSIEVE_THREADS", "3")
    assert thread_count() == 3 and thread_count(2) == 2
    with pytest.raises(InputError):
        thread_count(0)


def test_config_validation():
    with pytest.raises(InputError):
        ExperimentConfig("exp3")
    with pytest.raises(InputError):
        ExperimentConfig("exp2", n_values=(500, 100))
    with pytest.raises(InputError):
        ExperimentConfig("exp2", n_values=(100, 200), k_values=(4,))
    with pytest.raises(InputError):
        ExperimentConfig("exp2", iterations=100, burn_in=100)
    with pytest.raises(InputError):
        ExperimentConfig("exp1", basis="fourier")


def test_defaults():
    cfg = default_config("exp2")
    assert cfg.n_values == (100, 500, 1000, 1500, 2000) and cfg.m == 20
    assert default_config("exp2", paper_scale=True).m == 100
    assert default_config("exp1").n_values == (2000,)
    assert default_config("exp1", paper_scale=True).n_values == (10000,)
    for name in ("supp-laguerre", "supp-hermite"):
        c = default_config(name)
        assert c.n_values == (10000,) and len(c.sigmas) == 10


def test_rate_curve_and_k_values():
    rep = run_experiment2(small_exp2(n_values=(100,), m=1))
    assert rep.rate_curve()[100] == pytest.approx(100**-0.2, rel=1e-15)
    assert rep.rate_curve()[100] == pytest.approx(0.3981, abs=1e-4)
    assert rep.minimax_curve()[100] == pytest.approx(100**-0.4, rel=1e-15)
    assert len(rep.distances()) == 1 and rep.scalars["k_values"] == [4]


def test_report_files_and_determinism(tmp_path):
    cfg = small_exp2()
    a = run(cfg).write(tmp_path / "a")
    b = run(cfg).write(tmp_path / "b")
    assert set(a) == {"report", "distances", "plot"}
    assert a["distances"].read_bytes() == b["distances"].read_bytes()
    assert a["report"].read_bytes() == b["report"].read_bytes()
    lines = a["distances"].read_text().splitlines()
    assert lines[0] == "n,k,replication,basis,data_seed,mcmc_seed,hellinger,acceptance_rate,clamp_mass"
    assert len(lines) == 1 + 4
    assert a["plot"].read_text().startswith("<svg")


def test_threads_do_not_change_results():
    one = run_experiment2(small_exp2(threads=1))
    two = run_experiment2(small_exp2(threads=2))
    assert one.distances_csv() == two.distances_csv()


def test_distance_range():
    rep = run_experiment2(small_exp2())
    assert all(0.0 <= d <= math.sqrt(2) for d in rep.distances())
    assert [r.n for r in rep.runs] == [100, 100, 400, 400]
    assert [r.replication for r in rep.runs] == [0, 1, 0, 1]


def test_exp1_both_bases(tmp_path):
    cfg = default_config("exp1", n_values=(500,), basis="both", iterations=3000, burn_in=1000, grid_points=101)
    rep = run(cfg)
    assert [r.basis for r in rep.runs] == ["legendre", "trig"]
    for basis in ("legendre", "trig"):
        lo, mid, hi = rep.curves[f"{basis}_lower"], rep.curves[basis], rep.curves[f"{basis}_upper"]
        assert np.all(lo <= hi)
        assert rep.scalars[f"{basis}_mass"] == pytest.approx(1.0, abs=1e-3)
        assert mid.shape == (101,)
    files = rep.write(tmp_path)
    header = files["curves"].read_text().splitlines()[0]
    assert header == "x,truth,legendre,legendre_lower,legendre_upper,trig,trig_lower,trig_upper"
    assert "stroke-dasharray" in files["plot"].read_text()


def test_supplement_truth_curve():
    cfg = default_config("supp-hermite", n_values=(300,), iterations=1500, burn_in=500, grid_points=61)
    rep = run(cfg)
    x = rep.curves["x"]
    mid = int(np.argmin(np.abs(x)))
    assert x[mid] == 0.0
    # Lebesgue density of N(0, 1/4) at 0
    assert rep.curves["truth"][mid] == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)
    assert rep.runs[0].basis == "hermite"


@pytest.mark.slow
def test_default_sweep_shrinks_with_n():
    rep = run(default_config("exp2", seed=0))
    med = rep.medians()
    ns = sorted(med)
    assert rep.scalars["k_values"] == [4, 6, 6, 8, 8]
    assert all(med[n] <= 1.5 * n**-0.2 for n in ns)
    inversions = [(a, b) for a, b in zip(ns, ns[1:]) if med[b] > med[a]]
    assert len(inversions) <= 1
    assert all(med[b] <= 1.1 * med[a] for a, b in inversions)
