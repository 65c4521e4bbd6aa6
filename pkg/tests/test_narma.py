"""NARMA10 analysis: fixed points, basins, Lyapunov spectra, surrogate model."""

import math

import numpy as np
import pytest

from ipcap import (
    AnalysisError,
    ApproxModelCoeffs,
    InputShaping,
    LyapunovConfig,
    Narma10Config,
    NoFixedPointError,
    ParameterError,
    approx_model_coeffs,
    basin_scan,
    delta_w,
    divergence_probability,
    fixed_point,
    lyapunov_direct,
    lyapunov_spectrum,
    nullclines,
    simulate_approx_model,
    simulate_narma10,
)


def test_fixed_point_zero_mean_input():
    # a = 0.7 / (20 * 0.05) = 0.7, c = 0.1 / 0.5 = 0.2
    p = fixed_point(Narma10Config())
    assert p == pytest.approx(0.7 - math.sqrt(0.29), abs=1e-12)


def test_fixed_point_matches_iterated_mean_map():
    for mu in (0.0, 0.2, 0.225):
        cfg = Narma10Config(shaping=InputShaping(mu=mu, kappa=0.0))
        p = 0.0
        for _ in range(400):
            p = cfg.alpha * p + 10.0 * cfg.beta * p * p + cfg.gamma * mu * mu + cfg.delta
        assert fixed_point(cfg) == pytest.approx(p, abs=1e-12)


def test_fixed_point_vanishes_without_offset():
    assert fixed_point(Narma10Config(delta=0.0)) == 0.0


def test_fixed_point_error_paths():
    with pytest.raises(NoFixedPointError):
        fixed_point(Narma10Config(delta=30.0))
    with pytest.raises(ParameterError, match="beta"):
        fixed_point(Narma10Config(beta=0.0))


def test_nullclines_intersect_at_saddle():
    cfg = Narma10Config()
    grid = np.linspace(-1.0, 1.0, 21)  # contains 0.2 and 0.0
    w1, n1, n2 = nullclines(cfg, 0.2, grid)
    assert 0.0 not in w1
    i = int(np.argmin(np.abs(w1 - 0.2)))
    assert w1[i] == pytest.approx(0.2)
    assert n1[i] == pytest.approx(4.0, abs=1e-12)
    assert n2[i] == pytest.approx(4.0, abs=1e-12)


def test_nullcline_two_is_flat_when_z10_equals_delta():
    cfg = Narma10Config()
    _, _, n2 = nullclines(cfg, cfg.delta, np.linspace(0.05, 2.0, 40))
    np.testing.assert_allclose(n2, -6.0, atol=1e-12)


def test_delta_w_vanishes_at_saddle():
    dw1, dw2 = delta_w(Narma10Config(), 0.2, 4.0, 0.2)
    assert abs(dw1) < 1e-12
    assert abs(dw2) < 1e-12


def test_basin_scan_shape_and_fixed_point_cell():
    cfg = Narma10Config()
    p = fixed_point(cfg)
    steps = basin_scan(cfg, [p, 3.0, -6.0], [10.0 * p, 30.0], max_steps=2000)
    assert steps.shape == (3, 2)
    assert steps[0, 0] == -1  # uniform history at the fixed point is stationary
    assert steps[1, 1] >= 0


def test_basin_scan_uniform_history_band():
    cfg = Narma10Config()
    steps = basin_scan(
        cfg, [1.23, 1.25, -5.14, -5.16, 0.5], [0.0], mode="psi_sigma"
    ).ravel()
    assert steps[0] == -1 and steps[2] == -1 and steps[4] == -1
    assert steps[1] >= 0 and steps[3] >= 0


def test_basin_scan_matches_direct_simulation():
    cfg = Narma10Config()
    for psi in (2.0, -6.0, 0.5):
        cell = int(basin_scan(cfg, [psi], [0.0], mode="psi_sigma", max_steps=3000)[0, 0])
        direct_cfg = Narma10Config(
            shaping=InputShaping(mu=0.0, kappa=0.0), init=(psi,) * 10
        )
        _, diverged = simulate_narma10(direct_cfg, np.zeros(3000))
        assert cell == (-1 if diverged is None else diverged)


def test_basin_scan_rejects_unknown_mode():
    with pytest.raises(ParameterError, match="mode"):
        basin_scan(Narma10Config(), [0.0], [0.0], mode="radial")


def test_divergence_probability_endpoints():
    cfg = Narma10Config()
    out = divergence_probability(cfg, [0.0], n_seeds=3, horizon=2000)
    assert out == [(0.0, 1.0)]
    out = divergence_probability(cfg, [0.3, 0.9], n_seeds=20, horizon=20000, seed=2)
    assert out[0] == (0.3, 1.0)
    assert out[1] == (0.9, 0.0)


def test_divergence_probability_deterministic():
    cfg = Narma10Config()
    kw = dict(n_seeds=10, horizon=5000, seed=11)
    assert divergence_probability(cfg, [0.5], **kw) == divergence_probability(
        cfg, [0.5], **kw
    )


def test_lyapunov_config_validation():
    with pytest.raises(ParameterError, match="T"):
        LyapunovConfig(T=0)
    with pytest.raises(ParameterError, match="M"):
        LyapunovConfig(M=0)
    with pytest.raises(ParameterError, match="n_exponents"):
        LyapunovConfig(n_exponents=11)


def test_lyapunov_linear_limit_recovers_log_alpha():
    # beta = gamma = 0 turns the map affine with one nonzero eigenvalue alpha
    cfg = Narma10Config(beta=0.0, gamma=0.0)
    lcfg = LyapunovConfig(T=2000, M=40, n_exponents=1)
    lam = lyapunov_spectrum(cfg, lcfg, np.zeros(lcfg.T + lcfg.M))
    assert lam[0] == pytest.approx(math.log(0.3), abs=1e-6)


def test_lyapunov_driven_narma_is_stable():
    cfg = Narma10Config(shaping=InputShaping.asymmetric(0.2))
    zeta = np.random.default_rng(31).uniform(-1.0, 1.0, size=2100)
    lam = lyapunov_spectrum(cfg, LyapunovConfig(T=2000, M=100), zeta)
    assert lam.shape == (3,)
    assert np.all(lam < 0.0)
    assert lam[0] >= lam[1] >= lam[2]


def test_lyapunov_warmup_barely_matters():
    cfg = Narma10Config(shaping=InputShaping.asymmetric(0.3))
    zeta = np.random.default_rng(37).uniform(-1.0, 1.0, size=4100)
    a = lyapunov_spectrum(cfg, LyapunovConfig(T=4000, M=1, n_exponents=1), zeta)
    b = lyapunov_spectrum(cfg, LyapunovConfig(T=4000, M=40, n_exponents=1), zeta)
    assert abs(a[0] - b[0]) < 0.05


def test_lyapunov_direct_window_bias_shrinks():
    cfg = Narma10Config(shaping=InputShaping.asymmetric(0.3))
    rng = np.random.default_rng(41)
    qr = lyapunov_spectrum(
        cfg,
        LyapunovConfig(T=4000, M=40, n_exponents=1),
        rng.uniform(-1.0, 1.0, size=4100),
    )[0]
    zeta = np.random.default_rng(43).uniform(-1.0, 1.0, size=600)
    devs = []
    for M in (10, 40, 160):
        direct = lyapunov_direct(cfg, LyapunovConfig(T=400, M=M, n_exponents=1), zeta)
        devs.append(abs(direct[0] - qr))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.02


def test_lyapunov_raises_on_divergent_trajectory():
    cfg = Narma10Config(shaping=InputShaping.asymmetric(1.0))
    zeta = np.random.default_rng(47).uniform(-1.0, 1.0, size=6100)
    with pytest.raises(AnalysisError):
        lyapunov_spectrum(cfg, LyapunovConfig(T=6000, M=100), zeta)


FIG2A_ASYM = Narma10Config(shaping=InputShaping.asymmetric(0.45))


def test_approx_coeffs_first_delays():
    coeffs = approx_model_coeffs(FIG2A_ASYM, [1, 2], [1])
    # gamma mu kappa and gamma kappa^2 with mu = kappa = 0.225
    assert coeffs.q[1] == pytest.approx(1.5 * 0.225 * 0.225, abs=1e-15)
    assert coeffs.r[1] == pytest.approx(1.5 * 0.225 * 0.225, abs=1e-15)
    p = fixed_point(FIG2A_ASYM)
    q2 = coeffs.q[1] * (0.3 + 10.0 * 0.05 * p + 0.05 * p)
    assert coeffs.q[2] == pytest.approx(q2, abs=1e-15)
    assert q2 == pytest.approx(0.0364949, abs=5e-7)


def test_approx_coeffs_delay_ten_boost():
    coeffs = approx_model_coeffs(FIG2A_ASYM, range(1, 11), [])
    p = fixed_point(FIG2A_ASYM)
    A = 0.3 + 10.0 * 0.05 * p
    partial = A * coeffs.q[9] + 0.05 * p * sum(coeffs.q[s] for s in range(1, 10))
    assert coeffs.q[10] == pytest.approx(partial + 1.5 * 0.225 * 0.225, abs=1e-15)
    assert coeffs.q[10] > coeffs.q[9]


def test_approx_coeffs_symmetric_input_kills_first_order():
    cfg = Narma10Config(shaping=InputShaping.symmetric(0.45))
    coeffs = approx_model_coeffs(cfg, range(1, 13), range(1, 4))
    assert all(v == 0.0 for v in coeffs.q.values())
    assert coeffs.r[1] == pytest.approx(1.5 * 0.45 * 0.45, abs=1e-15)


def test_approx_coeffs_rejects_bad_delays():
    with pytest.raises(ParameterError, match="delays"):
        approx_model_coeffs(FIG2A_ASYM, [0], [1])


def test_ipc_prediction_normalizes_by_chaos_moments():
    coeffs = ApproxModelCoeffs(p=0.1, q={1: 2.0}, r={1: 3.0})
    pred = coeffs.ipc_prediction()
    assert pred["1@1"] == pytest.approx((4.0 / 3.0) / (4.0 / 3.0 + 1.0))
    assert pred["1@1*1@10"] == pytest.approx(1.0 / (4.0 / 3.0 + 1.0))
    assert sum(pred.values()) == pytest.approx(1.0)
    assert ApproxModelCoeffs(p=0.1, q={}, r={}).ipc_prediction() == {}


def test_simulate_approx_model_alignment():
    coeffs = ApproxModelCoeffs(p=0.5, q={1: 2.0}, r={1: 3.0})
    z = np.arange(1, 13) / 10.0
    y = simulate_approx_model(coeffs, z)
    assert y[0] == pytest.approx(0.5 + 2.0 * 0.1)
    assert y[8] == pytest.approx(0.5 + 2.0 * 0.9)
    assert y[9] == pytest.approx(0.5 + 2.0 * 1.0 + 3.0 * 1.0 * 0.1)
    assert y[11] == pytest.approx(0.5 + 2.0 * 1.2 + 3.0 * 1.2 * 0.3)


def test_simulate_approx_model_constant_without_input():
    coeffs = approx_model_coeffs(FIG2A_ASYM, [1, 2, 3], [1, 2])
    y = simulate_approx_model(coeffs, np.zeros(50))
    np.testing.assert_allclose(y, coeffs.p, rtol=0, atol=0)


def test_approx_model_tracks_true_narma():
    zeta = np.random.default_rng(53).uniform(-1.0, 1.0, size=3000)
    series, diverged = simulate_narma10(FIG2A_ASYM, zeta)
    assert diverged is None
    coeffs = approx_model_coeffs(FIG2A_ASYM, range(1, 13), range(1, 4))
    approx = simulate_approx_model(coeffs, zeta)
    err = series[100:] - approx[100:]
    nrmse = math.sqrt(float(err @ err) / float(np.sum((series[100:] - series[100:].mean()) ** 2)))
    assert nrmse < 0.25
