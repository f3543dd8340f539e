from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest


def test_single_mode_damping() -> None:
    from lyapunov.solver import solve_lyapunov_matrix

    V = solve_lyapunov_matrix(np.array([[-3.0]]), np.array([[2.0]]))
    assert V.shape == (1, 1)
    assert V[0, 0] == pytest.approx(1.0 / 3.0, rel=1e-14)


@pytest.mark.parametrize("method", ["schur", "kronecker"])
def test_uncoupled_modes_reach_their_baths(fig2_params, method: str) -> None:
    from lyapunov.solver import solve_lyapunov
    from model.dynamics import derive_rates, linear_model

    params = replace(fig2_params, chi=0.0, zeta=0.0, temperature=1e-4)
    params = replace(params, atom_damping=1e-6 * derive_rates(params).kappa)
    model = linear_model(params)
    V = solve_lyapunov(model.drift, model.diffusion, method=method)

    n_bar = model.rates.n_bar
    assert np.allclose(V.block("C", "C"), 0.5 * np.eye(2), rtol=0.0, atol=1e-9)
    assert np.allclose(V.block("M", "M"), (n_bar + 0.5) * np.eye(2), rtol=0.0, atol=1e-9)
    assert np.allclose(V.block("A", "A"), 0.5 * np.eye(2), rtol=0.0, atol=1e-9)
    assert np.allclose(V.block("C", "M"), 0.0, atol=1e-9)
    assert np.allclose(V.block("M", "A"), 0.0, atol=1e-9)


def test_decoupled_cavity_and_mirror_blocks_are_exact(fig2_params) -> None:
    from lyapunov.solver import solve_lyapunov
    from model.dynamics import derive_rates, linear_model

    for temperature in (1e-5, 1e-4):
        params = replace(fig2_params, chi=0.0, zeta=0.0, temperature=temperature)
        params = replace(params, atom_damping=1e-6 * derive_rates(params).kappa)
        model = linear_model(params)
        V = solve_lyapunov(model.drift, model.diffusion)

        assert np.max(np.abs(V.block("C", "C") - 0.5 * np.eye(2))) <= 1e-12
        assert np.max(np.abs(V.block("M", "M") - (model.rates.n_bar + 0.5) * np.eye(2))) <= 1e-12


def test_base_point_solution_is_certified(fig2_params, fig2_covariance) -> None:
    from entanglement.gaussian import symplectic_eigenvalues
    from lyapunov.solver import lyapunov_residual, residual_bound
    from model.dynamics import linear_model

    model = linear_model(fig2_params)
    V = fig2_covariance.matrix

    assert np.array_equal(V, V.T)
    assert lyapunov_residual(model.drift, V, model.diffusion) <= residual_bound(model.diffusion)
    assert symplectic_eigenvalues(V)[0] >= 0.5 - 1e-9
    assert fig2_covariance.modes == ("C", "M", "A")


def test_methods_agree(fig2_params) -> None:
    from lyapunov.solver import solve_lyapunov_matrix
    from model.dynamics import linear_model

    model = linear_model(fig2_params)
    schur = solve_lyapunov_matrix(model.drift, model.diffusion, "schur")
    kron = solve_lyapunov_matrix(model.drift, model.diffusion, "kronecker")
    assert np.allclose(schur, kron, rtol=0.0, atol=1e-7 * np.max(np.abs(schur)))


def test_solution_is_linear_in_diffusion(fig2_params) -> None:
    from lyapunov.solver import solve_lyapunov_matrix
    from model.dynamics import linear_model

    model = linear_model(fig2_params)
    V = solve_lyapunov_matrix(model.drift, model.diffusion)
    V3 = solve_lyapunov_matrix(model.drift, 3.0 * model.diffusion)
    assert np.allclose(V3, 3.0 * V, rtol=1e-9, atol=1e-9 * np.max(np.abs(V)))


def test_refuses_unstable_and_marginal_drift(fig2_params) -> None:
    from lyapunov.solver import solve_lyapunov
    from model.dynamics import linear_model
    from model.errors import NoStationaryStateError

    for overrides in ({"detuning": -fig2_params.omega_m}, {"chi": 0.0, "zeta": 0.0}):
        model = linear_model(replace(fig2_params, **overrides))
        with pytest.raises(NoStationaryStateError):
            solve_lyapunov(model.drift, model.diffusion)


def test_unknown_method_is_rejected() -> None:
    from lyapunov.solver import solve_lyapunov_matrix

    with pytest.raises(ValueError, match="unknown Lyapunov method"):
        solve_lyapunov_matrix(-np.eye(2), np.eye(2), method="bicgstab")


def test_non_physical_diffusion_is_rejected() -> None:
    from lyapunov.solver import solve_lyapunov
    from model.errors import NumericalError

    # Damped oscillator fed with a tenth of the vacuum noise.
    K = np.array([[-1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(NumericalError, match="non-physical"):
        solve_lyapunov(K, 0.1 * np.eye(2), modes=("C",))


def test_covariance_selection_and_blocks(fig2_covariance) -> None:
    reduced = fig2_covariance.select(["A", "C"])
    assert reduced.modes == ("C", "A")
    assert np.array_equal(reduced.block("C", "A"), fig2_covariance.block("C", "A"))
    with pytest.raises(ValueError):
        fig2_covariance.select(["B"])
    with pytest.raises(ValueError):
        fig2_covariance.matrix[0, 0] = 1.0


def test_covariance_file_is_exact(tmp_path, fig2_covariance) -> None:
    from lyapunov.matrix_io import read_covariance, write_covariance

    path = tmp_path / "v.txt"
    write_covariance(path, fig2_covariance)
    loaded = read_covariance(path)
    assert loaded.modes == fig2_covariance.modes
    assert np.array_equal(loaded.matrix, fig2_covariance.matrix)


def test_covariance_file_errors() -> None:
    from lyapunov.matrix_io import parse_covariance
    from model.errors import ParameterError

    with pytest.raises(ParameterError, match="header"):
        parse_covariance("1 0\n0 1\n")
    with pytest.raises(ParameterError, match="line 2"):
        parse_covariance("# modes: C\n1 zero\n0 1\n")
    with pytest.raises(ParameterError, match="malformed"):
        parse_covariance("# modes: C M\n1 0\n0 1\n")
