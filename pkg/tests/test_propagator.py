import math

import numpy as np
import pytest

from holosim.algebra import is_hermitian, is_unitary, trace_fidelity
from holosim.errors import ValidationError
from holosim.propagator import (ERROR_ORDER, NOISELESS, NoiseParams, bloch_trajectory, computational_block,
                                dressed_block, dressed_error_amplitude, embed_qubit, evolve_sequence,
                                hamiltonian_3level, numeric_fidelity, scheme_fidelity)
from holosim.pulses import (ALL_SCHEMES, X_HALF, GateParams, PulseSegment, Scheme, bright_dark_basis, build_sequence,
                            target_gate)

pi = math.pi
GAMMAS = [pi / 4, pi / 2, 3 * pi / 4, pi]
EPSILONS = [-0.1, -0.05, 0.0, 0.05, 0.1]


def test_theta_pi_couples_only_zero_and_excited():
    h = hamiltonian_3level(GateParams(pi, 0.0, 1.0), 0.0)
    assert is_hermitian(h)
    assert abs(abs(h[0, 2]) - 1) < 1e-15
    assert np.max(np.abs(h[1, :])) < 1e-15 and abs(h[2, 2]) == 0


def test_x_error_scales_hamiltonian():
    g = GateParams(1.0, 0.3, 1.0)
    h0 = hamiltonian_3level(g, 0.7)
    assert np.allclose(hamiltonian_3level(g, 0.7, n=NoiseParams(0.1)), 1.1 * h0, atol=1e-15)


def test_z_error_on_excited_level_only():
    g = GateParams(1.0, 0.3, 1.0)
    diff = hamiltonian_3level(g, 0.7, n=NoiseParams(0.0, 0.05)) - hamiltonian_3level(g, 0.7)
    assert np.allclose(diff, np.diag([0, 0, 0.05]))


def test_noise_bounds():
    with pytest.raises(ValidationError):
        NoiseParams(0.6)
    with pytest.raises(ValidationError):
        hamiltonian_3level(X_HALF, 0.0, omega=0.0)


@pytest.mark.parametrize("theta,phi,gamma_g", [(pi / 2, 0, pi / 2), (0.4, 1.1, 2.0), (2.5, -0.3, -1.2)])
def test_nhqc_acquires_geometric_phase_on_bright_state(theta, phi, gamma_g):
    g = GateParams(theta, phi, gamma_g)
    u = evolve_sequence(build_sequence(Scheme.NHQC, g), g)
    assert np.allclose(dressed_block(u, g), np.diag([np.exp(1j * gamma_g), 1]), atol=1e-12)


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
def test_error_free_gate_is_target(scheme):
    u = evolve_sequence(build_sequence(scheme, X_HALF), X_HALF)
    assert is_unitary(u)
    assert numeric_fidelity(build_sequence(scheme, X_HALF), X_HALF) == pytest.approx(1.0, abs=1e-10)
    assert abs(u[2, 2]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
@pytest.mark.parametrize("gamma_g", GAMMAS)
@pytest.mark.parametrize("eps", EPSILONS)
def test_closed_form_matches_propagation(scheme, gamma_g, eps):
    g = GateParams(pi / 2, 0.0, gamma_g)
    u = evolve_sequence(build_sequence(scheme, g), g, NoiseParams(eps))
    block = dressed_block(u, g)
    assert abs(block[0, 0] - dressed_error_amplitude(scheme, gamma_g, eps)) < 1e-9
    assert abs(block[1, 1] - 1) < 1e-9
    f_num = trace_fidelity(np.diag([np.exp(1j * gamma_g), 1]), block)
    assert abs(f_num - scheme_fidelity(scheme, gamma_g, eps)) < 1e-9


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
@pytest.mark.parametrize("eps", [-0.3, -0.1, 0.07, 0.2])
def test_dark_state_is_untouched(scheme, eps):
    g = GateParams(1.2, 0.8, 1.9)
    _, dark = bright_dark_basis(g)
    d = embed_qubit(dark)
    u = evolve_sequence(build_sequence(scheme, g, 0.4), g, NoiseParams(eps))
    assert np.max(np.abs(u @ d - d)) < 1e-9


def test_amplitude_examples():
    for scheme in ALL_SCHEMES:
        assert dressed_error_amplitude(scheme, 1.3, 0.0) == pytest.approx(np.exp(1.3j), abs=1e-14)
        assert scheme_fidelity(scheme, 1.3, 0.0) == pytest.approx(1.0, abs=1e-14)
    a = dressed_error_amplitude(Scheme.NHQC, pi / 2, 0.1)
    assert a.real == pytest.approx(0.024472, abs=1e-6)
    assert a.imag == pytest.approx(0.975528, abs=1e-6)


def test_fidelity_examples():
    assert scheme_fidelity(Scheme.NHQC, pi / 2, 0.1) == pytest.approx(0.987840, abs=1e-5)
    assert scheme_fidelity(Scheme.NHQC, pi / 2, 0.1, "series") == pytest.approx(0.987663, abs=1e-6)
    assert scheme_fidelity(Scheme.OPNHQC, pi / 2, 0.1) == pytest.approx(0.99985, abs=1e-5)
    assert 1 - scheme_fidelity(Scheme.OPNHQC, pi / 2, 0.1, "series") == pytest.approx(1.522e-4, abs=1e-7)
    with pytest.raises(ValidationError):
        scheme_fidelity(Scheme.NHQC, 1.0, 0.1, "bogus")


@pytest.mark.parametrize("scheme", [Scheme.OPNHQC, Scheme.DCNHQC])
def test_series_tracks_exact_for_fourth_order(scheme):
    diff = abs(scheme_fidelity(scheme, pi / 2, 0.01) - scheme_fidelity(scheme, pi / 2, 0.01, "series"))
    assert diff < 1e-6


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
def test_log_log_slope(scheme):
    eps = np.geomspace(1e-3, 1e-2, 10)
    infid = [1 - scheme_fidelity(scheme, pi / 2, e) for e in eps]
    slope = np.polyfit(np.log(eps), np.log(infid), 1)[0]
    assert slope == pytest.approx(ERROR_ORDER[scheme], abs=0.05)


def test_opnhqc_block_matches_target_gate():
    u = evolve_sequence(build_sequence(Scheme.OPNHQC, X_HALF), X_HALF)
    assert trace_fidelity(target_gate(X_HALF), computational_block(u)) == pytest.approx(1.0, abs=1e-12)


def test_trajectory_closed_loop_through_poles():
    traj = bloch_trajectory(build_sequence(Scheme.OPNHQC, X_HALF), X_HALF, samples=401)
    assert traj.shape == (401, 3)
    assert np.allclose(traj[0], [0, 0, 1], atol=1e-12)
    assert np.allclose(traj[-1], traj[0], atol=1e-9)
    assert traj[:, 2].min() < -1 + 1e-4
    assert np.allclose(np.linalg.norm(traj, axis=1), 1, atol=1e-12)


def test_trajectory_open_under_x_error():
    traj = bloch_trajectory(build_sequence(Scheme.NHQC, X_HALF), X_HALF, NoiseParams(0.1))
    assert np.linalg.norm(traj[-1] - traj[0]) > 1e-3


def test_trajectory_tiny_segment():
    traj = bloch_trajectory([PulseSegment(1e-12, 0.0)], X_HALF, samples=2)
    assert np.allclose(traj, [[0, 0, 1], [0, 0, 1]], atol=1e-9)
    with pytest.raises(ValidationError):
        bloch_trajectory([PulseSegment(1.0, 0.0)], X_HALF, samples=1)


def test_empty_sequence_rejected():
    with pytest.raises(ValidationError):
        evolve_sequence([], X_HALF, NOISELESS)
