from __future__ import annotations

import logging
import math
from dataclasses import replace

import numpy as np
import pytest


def test_base_point_rates(fig2_params) -> None:
    from model.dynamics import derive_rates, steady_state

    rates = derive_rates(fig2_params)
    assert rates.kappa == pytest.approx(4.709e7, rel=1e-3)
    assert rates.gamma == pytest.approx(fig2_params.omega_m / 3e4, rel=1e-15)
    assert rates.eta**2 == pytest.approx(1.849e25, rel=2e-3)
    assert rates.n_bar == pytest.approx(5.6e-7, rel=0.05)

    steady = steady_state(fig2_params, rates)
    assert steady.alpha_s_sq == pytest.approx(5.08e9, rel=5e-3)
    assert steady.q_s_scaled > 0
    assert steady.Q_s < 0


def test_thermal_occupation_values() -> None:
    from model.dynamics import thermal_occupation
    from model.params import OMEGA_M_BASE

    assert thermal_occupation(OMEGA_M_BASE, 1e-4) == pytest.approx(0.311, abs=1e-3)
    assert thermal_occupation(OMEGA_M_BASE, 1e-9) == 0.0
    # high-temperature limit k_B T / ħω
    assert thermal_occupation(OMEGA_M_BASE, 1.0) == pytest.approx(6945.0, rel=1e-3)


def test_zero_pump_gives_zero_steady_state(fig2_params) -> None:
    from model.dynamics import linear_model

    model = linear_model(replace(fig2_params, pump_power=0.0))
    assert model.steady.alpha_s_sq == 0.0
    assert model.steady.q_s_scaled == 0.0
    assert model.steady.Q_s == 0.0
    assert model.drift[1, 2] == 0.0
    assert model.drift[1, 4] == 0.0


def test_resonant_photon_number(fig2_params) -> None:
    from model.dynamics import derive_rates, steady_state

    params = replace(fig2_params, detuning=0.0)
    rates = derive_rates(params)
    assert steady_state(params, rates).alpha_s_sq == pytest.approx(rates.eta**2 / rates.kappa**2, rel=1e-14)


def test_drift_matrix_layout(fig2_params) -> None:
    from model.dynamics import linear_model

    model = linear_model(fig2_params)
    K = model.drift
    g_m = math.sqrt(2.0) * fig2_params.chi * model.steady.alpha_s
    g_a = math.sqrt(2.0) * fig2_params.zeta * model.steady.alpha_s

    assert K[0, 0] == K[1, 1] == -model.rates.kappa
    assert K[0, 1] == -K[1, 0] == fig2_params.detuning
    assert K[1, 2] == K[3, 0] == pytest.approx(g_m)
    assert K[1, 4] == K[5, 0] == pytest.approx(-g_a)
    assert K[2, 3] == -K[3, 2] == fig2_params.omega_m
    assert K[4, 5] == -K[5, 4] == fig2_params.Omega
    assert K[3, 3] == -model.rates.gamma
    assert K[5, 5] == 0.0
    assert np.count_nonzero(K) == 13


def test_diffusion_matrix_at_zero_temperature(fig2_params) -> None:
    from model.dynamics import derive_rates, diffusion_matrix

    params = replace(fig2_params, temperature=1e-12)
    rates = derive_rates(params)
    D = diffusion_matrix(params, rates)
    assert np.array_equal(np.diag(D), [rates.kappa, rates.kappa, 0.0, rates.gamma, 0.0, 0.0])
    assert np.count_nonzero(D - np.diag(np.diag(D))) == 0


def test_uncoupled_drift_is_block_diagonal(fig2_params) -> None:
    from model.dynamics import linear_model

    K = linear_model(replace(fig2_params, chi=0.0, zeta=0.0)).drift
    for i, j in np.argwhere(K != 0.0):
        assert i // 2 == j // 2


def test_mirror_and_atom_enter_symmetrically(fig2_params) -> None:
    from model.dynamics import linear_model

    # (x, y, q, p, Q, P) -> (x, y, -Q, -P, -q, -p) maps K onto itself when the
    # two oscillators are identical and undamped.
    params = replace(fig2_params, quality=1e300, zeta=fig2_params.chi, Omega=fig2_params.omega_m)
    K = linear_model(params).drift
    U = np.zeros((6, 6))
    U[0, 0] = U[1, 1] = 1.0
    U[2, 4] = U[3, 5] = U[4, 2] = U[5, 3] = -1.0
    assert np.allclose(U @ K @ U, K, rtol=0.0, atol=1e-12)


def test_base_point_is_stable(fig2_params) -> None:
    from model.dynamics import linear_model, stability, static_stability_threshold

    st = stability(linear_model(fig2_params).drift)
    assert st.stable is True
    assert st.margin > 0
    assert st.eigenvalues.shape == (6,)
    assert static_stability_threshold(fig2_params) > 0


def test_blue_detuning_is_unstable(fig2_params) -> None:
    from model.dynamics import linear_model, stability

    st = stability(linear_model(replace(fig2_params, detuning=-fig2_params.omega_m)).drift)
    assert st.stable is False
    assert st.margin < 0


def test_undamped_oscillator_is_marginal(fig2_params) -> None:
    from model.dynamics import linear_model, stability

    st = stability(linear_model(replace(fig2_params, chi=0.0, zeta=0.0)).drift)
    assert st.stable is False
    assert st.margin == 0.0


def test_static_threshold_fails_at_strong_coupling(fig2_params) -> None:
    from model.dynamics import derive_rates, linear_model, stability, static_stability_threshold

    kappa = derive_rates(fig2_params).kappa
    params = replace(fig2_params, detuning=kappa / math.sqrt(3.0), chi=300.0, zeta=300.0)
    assert static_stability_threshold(params) < 0
    assert stability(linear_model(params).drift).stable is False


def test_linear_model_is_pure(fig2_params) -> None:
    from model.dynamics import linear_model

    first = linear_model(fig2_params)
    second = linear_model(fig2_params)
    assert np.array_equal(first.drift, second.drift)
    assert np.array_equal(first.diffusion, second.diffusion)
    assert first.steady == second.steady


def test_strong_back_action_is_logged(fig2_params, caplog: pytest.LogCaptureFixture) -> None:
    from model.dynamics import back_action_ratio, linear_model

    params = replace(fig2_params, chi=1000.0)
    with caplog.at_level(logging.WARNING, logger="model.dynamics"):
        model = linear_model(params)
    assert back_action_ratio(params, model.steady, model.rates) > 0.5
    assert "Back-action not small" in caplog.text


def test_bare_coupling_scales_by_zero_point_length(fig2_params) -> None:
    from model.dynamics import bare_coupling, zero_point_length

    assert zero_point_length(fig2_params) == pytest.approx(3.345e-16, rel=1e-3)
    assert bare_coupling(fig2_params) * zero_point_length(fig2_params) == pytest.approx(fig2_params.chi)


def test_invalid_params_raise(fig2_params) -> None:
    from model.dynamics import linear_model
    from model.errors import ParameterError

    with pytest.raises(ParameterError):
        linear_model(replace(fig2_params, finesse=0.0))
