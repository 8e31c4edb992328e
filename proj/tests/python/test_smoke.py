import math

import numpy as np
import pytest

import gaussq


def test_hyp2f1_matches_elementary_form():
    # 2F1(1, 1; 2; z) = -log(1 - z) / z
    for z in (0.05, 0.2, 0.6):
        assert gaussq.hyp2f1(1.0, 1.0, 2.0, z) == pytest.approx(-math.log1p(-z) / z, rel=1e-12)


def test_build_cov_standard_fbm_entries():
    H, N = 0.3, 16
    S = gaussq.build_cov("stdfbm", H, N)
    t = np.arange(1, N + 1) / N
    T, U = np.meshgrid(t, t, indexing="ij")
    expected = 0.5 * (T ** (2 * H) + U ** (2 * H) - np.abs(T - U) ** (2 * H))
    np.testing.assert_allclose(S, expected, rtol=1e-13, atol=1e-15)


def test_characteristics_match_numpy():
    S = gaussq.build_cov("rlfbm", 0.7, 24)
    ch = gaussq.characteristics(S)
    w = np.linalg.eigvalsh(S)
    assert ch["lambda_min"] == pytest.approx(w[0], rel=1e-9)
    assert ch["lambda_max"] == pytest.approx(w[-1], rel=1e-12)
    assert ch["frob"] == pytest.approx(np.linalg.norm(S), rel=1e-12)
    assert ch["kappa"] == pytest.approx(w[-1] / w[0], rel=1e-9)


def test_sampler_is_deterministic_and_prefix_stable():
    a = gaussq.sample_std_normal(10, 42)
    b = gaussq.sample_std_normal(20, 42)
    np.testing.assert_array_equal(a, b[:10])
    assert not np.array_equal(a, gaussq.sample_std_normal(10, 43))


@pytest.mark.parametrize("route", ["x", "y"])
def test_path_preparation_fidelity(route):
    prep = gaussq.prepare_x if route == "x" else gaussq.prepare_y
    r = prep("stdfbm", 0.4, 8, eps=0.05, seed=5)
    assert r["fidelity"] >= 1 - 0.05
    assert np.linalg.norm(r["state"]) == pytest.approx(1.0, abs=1e-12)
    assert r["tally"]


def test_exponentiate_identity_covariance():
    N = 7
    z = np.full(N, 0.25)
    r = gaussq.exponentiate(np.eye(N), z, np.ones(N), c=0.5, Xi=0.3, policy="sup-norm", seed=1)
    assert not r["skipped"]
    assert r["fidelity"] >= 0.95


def test_discrete_sum_identity_covariance():
    N = 7
    z = np.full(N, 0.25)
    f = np.linspace(0.5, 1.5, N)
    r = gaussq.discrete_sum(np.eye(N), z, f, c=0.5, Xi=0.3, eps_hat=0.05, policy="sup-norm", seed=1)
    assert r["truth"] == pytest.approx(np.mean(f * np.exp(0.5 * z)), rel=1e-12)
    assert abs(r["estimate"] - r["truth"]) <= 0.05


def test_fit_and_exponent_tables():
    pts = [(n, 3.0 * n ** 1.5) for n in (8, 16, 32, 64)]
    fit = gaussq.fit_power_law(pts)
    assert fit["p"] == pytest.approx(1.5, abs=1e-12)
    assert gaussq.p_tilde(0.3) <= gaussq.complexity_exponent("stdfbm", 0.3, "pv") + 1e-12


def test_errors_surface_as_python_exceptions():
    with pytest.raises(gaussq.InvalidInput):
        gaussq.build_cov("stdfbm", 1.5, 8)
    with pytest.raises(gaussq.UnknownFormula):
        gaussq.predict("no_such_formula")
    with pytest.raises(gaussq.Error):
        gaussq.exponentiate(np.eye(3), np.ones(3), np.ones(2), 0.5, 0.3)
