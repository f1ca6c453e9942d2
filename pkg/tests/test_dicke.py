import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from soliton_metrology import dicke
from soliton_metrology.states import DickeVector, SuperpositionSpec, to_dicke


def schwinger_operators(N):
    """Two-mode boson construction restricted to the N-particle sector.

    Basis state k holds N1 = k particles in mode a and N2 = N - k in mode b.
    """
    k = np.arange(N + 1)
    # a^dagger b |k, N-k> = sqrt((k+1)(N-k)) |k+1, N-k-1>
    adag_b = np.zeros((N + 1, N + 1), dtype=complex)
    for i in range(N):
        adag_b[i + 1, i] = math.sqrt((k[i] + 1) * (N - k[i]))
    b_adag = adag_b.conj().T
    Jz = np.diag((k - (N - k)) / 2.0).astype(complex)
    Jx = (adag_b + b_adag) / 2
    Jy = (adag_b - b_adag) / 2j
    return Jz, Jx, Jy


def oracle_parity(amps, N, phi):
    Jz, Jx, _ = schwinger_operators(N)
    U = expm(1j * math.pi / 2 * Jx) @ expm(-1j * phi * Jz)
    P = np.diag([(-1.0) ** (N - k) for k in range(N + 1)])
    psi = U @ amps
    return float((psi.conj() @ P @ psi).real)


def random_state(rng, N):
    a = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
    return DickeVector(N / 2, a / np.linalg.norm(a))


def test_spin_half_is_pauli():
    ops = dicke.build_spin_operators(1)
    sx = np.array([[0, 1], [1, 0]]) / 2
    sy = np.array([[0, -1j], [1j, 0]]) / 2
    sz = np.array([[1, 0], [0, -1]]) / 2
    # basis runs m = -1/2, +1/2, i.e. reversed relative to the usual Pauli order
    R = np.array([[0, 1], [1, 0]])
    assert np.allclose(R @ ops.S1 @ R, sz, atol=1e-15)
    assert np.allclose(R @ ops.S2 @ R, sx, atol=1e-15)
    assert np.allclose(R @ ops.S3 @ R, sy, atol=1e-15)
    assert np.allclose(ops.S0, 0.5 * np.eye(2))


@pytest.mark.parametrize("N", [1, 2, 5, 12, 31])
def test_matches_schwinger_construction(N):
    ops = dicke.build_spin_operators(N)
    Jz, Jx, Jy = schwinger_operators(N)
    assert np.max(np.abs(ops.S1 - Jz)) <= 1e-12
    assert np.max(np.abs(ops.S2 - Jx)) <= 1e-12
    assert np.max(np.abs(ops.S3 - Jy)) <= 1e-12


def test_commutators_small_and_large():
    assert max(dicke.commutator_residuals(dicke.build_spin_operators(2))) <= 1e-14
    for N in range(1, 51):
        ops = dicke.build_spin_operators(N)
        assert max(dicke.commutator_residuals(ops)) <= 1e-12
        for S in (ops.S0, ops.S1, ops.S2, ops.S3):
            assert np.array_equal(S, S.conj().T)
        assert np.array_equal(np.diag(ops.S1).real, np.arange(N + 1) - N / 2)


def test_operators_are_immutable():
    ops = dicke.build_spin_operators(3)
    with pytest.raises(ValueError):
        ops.S1[0, 0] = 5


@pytest.mark.parametrize("N", [0, -1, 2.5, dicke.N_MAX + 1])
def test_rejects_bad_N(N):
    with pytest.raises(ValueError):
        dicke.build_spin_operators(N)


def test_parity_operator():
    assert list(dicke.parity_diagonal(2)) == [1.0, -1.0, 1.0]
    for N in range(1, 10):
        d = dicke.parity_diagonal(N)
        assert d[-1] == 1.0 and d[-2] == -1.0
        P = dicke.parity_operator(N)
        assert np.array_equal(P @ P, np.eye(N + 1))


def test_parity_matches_generator_exponential():
    # P = exp(i pi (S0 - S1)) by direct exponentiation
    for N in (1, 4, 7):
        ops = dicke.build_spin_operators(N)
        P = expm(1j * math.pi * (ops.S0 - ops.S1))
        assert np.max(np.abs(P - dicke.parity_operator(N))) <= 1e-12


def test_mzi_single_particle_rotation():
    U = dicke.mzi_unitary(1, 0.0)
    assert np.allclose(np.abs(U), 1 / math.sqrt(2), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.floats(-10, 10))
def test_mzi_unitary(N, phi):
    U = dicke.mzi_unitary(N, phi)
    assert np.max(np.abs(U @ U.conj().T - np.eye(N + 1))) <= 1e-12


def test_mzi_against_pade():
    for N in (1, 3, 8):
        Jz, Jx, _ = schwinger_operators(N)
        ref = expm(1j * math.pi / 2 * Jx) @ expm(-1j * 0.37 * Jz)
        assert np.max(np.abs(dicke.mzi_unitary(N, 0.37) - ref)) <= 1e-12


def test_full_turn_phase_shift_is_identity_for_even_N():
    for N in (2, 4, 10):
        assert np.allclose(dicke.phase_shift_diagonal(N, 2 * math.pi), 1.0, atol=1e-14)


@pytest.mark.parametrize("N", [1, 2, 7, 20])
def test_swap_identity(N):
    assert dicke.swap_identity_check(N) <= 1e-12


def test_noon_parity_example():
    r = dicke.measure_parity(to_dicke(SuperpositionSpec.noon(2, 2 * math.pi)), 0.0)
    assert r.mean == pytest.approx(-1.0, abs=1e-14)
    assert r.variance == pytest.approx(0.0, abs=1e-13)


def test_single_path_particle_has_flat_parity():
    state = DickeVector(0.5, np.array([0.0, 1.0], dtype=complex))
    means = [abs(dicke.measure_parity(state, phi).mean) for phi in np.linspace(-3, 3, 13)]
    assert np.ptp(means) <= 1e-14


def test_measure_parity_against_fock_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        N = int(rng.integers(1, 15))
        s = random_state(rng, N)
        phi = float(rng.uniform(-np.pi, np.pi))
        r = dicke.measure_parity(s, phi)
        assert r.mean == pytest.approx(oracle_parity(s.amplitudes, N, phi), abs=1e-12)
        assert r.variance == pytest.approx(1 - r.mean ** 2, abs=1e-12)
        assert -1 - 1e-9 <= r.mean <= 1 + 1e-9


def test_rearranged_parity_identity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        N = int(rng.integers(1, 21))
        s = random_state(rng, N)
        for phi in rng.uniform(-np.pi, np.pi, 20):
            assert abs(dicke.measure_parity(s, phi).mean - dicke.rearranged_parity(s, phi)) <= 1e-10


def test_noon_heisenberg_fd():
    state = to_dicke(SuperpositionSpec.noon(4, 2 * math.pi))
    rep = dicke.numeric_sensitivity(state, 0.1, "phase")
    assert abs(rep.sigma * 4 - 1) <= 1e-6


def test_scs_fd_sensitivity():
    state = to_dicke(SuperpositionSpec.scs(10, 0.6))
    rep = dicke.numeric_sensitivity(state, math.pi / 2 + 0.2, "phase")
    assert rep.sigma == pytest.approx(1 / 6, abs=1e-6)


def test_theta_fd_sensitivity():
    # phi = 0 sits on a fringe extremum for N = 4 at Theta = 0, so probe off it
    rep = dicke.numeric_sensitivity(None, math.pi / 16, dicke.ThetaParam(4, 0.0))
    assert rep.sigma == pytest.approx(1.58 / 64, abs=1e-5)


def test_non_informative_point_raises():
    with pytest.raises(dicke.NonInformativeError) as info:
        dicke.numeric_sensitivity(None, 0.0, dicke.ThetaParam(4, 0.0))
    assert info.value.mean == pytest.approx(1.0)
    assert info.value.variance == pytest.approx(0.0, abs=1e-12)


def test_sensitivity_input_validation():
    s = to_dicke(SuperpositionSpec.noon(2, 0.0))
    with pytest.raises(ValueError):
        dicke.numeric_sensitivity(s, 0.1, "phase", fd_step=0)
    with pytest.raises(ValueError):
        dicke.numeric_sensitivity(None, 0.1, "phase")
    with pytest.raises(ValueError):
        dicke.numeric_sensitivity(s, 0.1, "bogus")


def test_expm_hermitian_matches_pade():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    H = A + A.conj().T
    assert np.max(np.abs(dicke.expm_hermitian(H, 0.7) - expm(0.7j * H))) <= 1e-12
