"""Exact two-mode simulation in the symmetric ``|j, m>`` sector.

Basis index ``k = m + j`` runs over ``m = -j, ..., j`` with ``j = N/2`` and
``m = (N1 - N2)/2``.  In terms of standard angular momentum,
``S1 = Jz``, ``S2 = Jx`` and ``S3 = Jy`` with Condon-Shortley phases (the
Fock state ``|N1, N2>`` is ``|j, m>`` with no extra sign), so
``[S1, S2] = i S3`` and cyclic.

Everything here is brute force on dense matrices and is used as ground
truth for the closed forms in :mod:`.interferometry` and
:mod:`.nonlinear`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .states import DickeVector, SuperpositionSpec, theta_noon, to_dicke
from .variational import ALPHA

N_MAX = 2048
DEFAULT_FD_STEP = 1e-5
MIN_DERIVATIVE = 1e-10


class NonInformativeError(ArithmeticError):
    """Derivative of the mean parity vanishes at the operating point."""

    def __init__(self, mean: float, variance: float, derivative: float):
        super().__init__(f"non-informative operating point: d<P> = {derivative!r} "
                         f"(mean={mean!r}, variance={variance!r})")
        self.mean = mean
        self.variance = variance
        self.derivative = derivative


@dataclass(frozen=True)
class SpinOperatorSet:
    S0: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    S3: np.ndarray

    @property
    def dimension(self) -> int:
        return self.S1.shape[0]

    @property
    def j(self) -> float:
        return (self.dimension - 1) / 2.0


@dataclass(frozen=True)
class MeasurementResult:
    mean: float
    variance: float


@dataclass(frozen=True)
class SensitivityReport:
    mean: float
    variance: float
    derivative: float
    sigma: float


@dataclass(frozen=True)
class ThetaParam:
    """Estimate ``Theta = Lambda / N^2`` with a N00N state re-prepared per ``Theta``."""

    N: int
    theta_param: float
    alpha: float = ALPHA


def _check_N(N: int, n_max: int = N_MAX):
    if int(N) != N or not 1 <= N <= n_max:
        raise ValueError(f"N must be an integer in [1, {n_max}], got {N!r}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=64)
def build_spin_operators(N: int, n_max: int = N_MAX) -> SpinOperatorSet:
    _check_N(N, n_max)
    j = N / 2.0
    m = np.arange(N + 1) - j
    # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)), sitting at row k+1, column k
    up = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.diag(up, -1).astype(complex)
    jm = jp.conj().T
    S0 = j * np.eye(N + 1, dtype=complex)
    S1 = np.diag(m).astype(complex)
    S2 = 0.5 * (jp + jm)
    S3 = (jp - jm) / 2j
    return SpinOperatorSet(*(_frozen(x) for x in (S0, S1, S2, S3)))


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """``exp(i t H)`` for Hermitian ``H`` through its eigendecomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * t * w)) @ V.conj().T


def commutator_residuals(ops: SpinOperatorSet) -> tuple[float, float, float]:
    S1, S2, S3 = ops.S1, ops.S2, ops.S3
    r = lambda A, B, C: float(np.linalg.norm(A @ B - B @ A - 1j * C))
    return r(S1, S2, S3), r(S2, S3, S1), r(S3, S1, S2)


def parity_diagonal(N: int) -> np.ndarray:
    """``(-1)^(j - m) = (-1)^N2`` on each basis state."""
    n2 = np.arange(N, -1, -1)  # j - m for m = -j..j
    return np.where(n2 % 2 == 0, 1.0, -1.0)


def parity_operator(N: int) -> np.ndarray:
    _check_N(N)
    return np.diag(parity_diagonal(N)).astype(complex)


def phase_shift_diagonal(N: int, phi: float) -> np.ndarray:
    m = np.arange(N + 1) - N / 2.0
    return np.exp(-1j * phi * m)


@lru_cache(maxsize=64)
def _beam_splitter(N: int) -> np.ndarray:
    return _frozen(expm_hermitian(build_spin_operators(N).S2, math.pi / 2))


def mzi_unitary(N: int, phi: float) -> np.ndarray:
    """``exp(i pi/2 S2) exp(-i phi S1)``."""
    _check_N(N)
    return _beam_splitter(N) * phase_shift_diagonal(N, phi)[None, :]


def swap_identity_check(N: int) -> float:
    """Max deviation of ``exp(i pi S3)|N1, N2> = exp(i pi N1)|N2, N1>`` over the basis."""
    _check_N(N)
    R = expm_hermitian(build_spin_operators(N).S3, math.pi)
    expected = np.zeros_like(R)
    for k in range(N + 1):
        n1 = k  # N1 = j + m = k
        expected[N - k, k] = (-1.0) ** n1
    return float(np.max(np.abs(R - expected)))


def _evolve(state: DickeVector, phi: float) -> np.ndarray:
    return mzi_unitary(state.N, phi) @ state.amplitudes


def measure_parity(state: DickeVector, phi: float) -> MeasurementResult:
    out = _evolve(state, phi)
    prob = np.abs(out) ** 2
    P = parity_diagonal(state.N)
    mean = float(np.sum(P * prob))
    second = float(np.sum(P * P * prob))
    return MeasurementResult(mean, max(0.0, second - mean * mean))


def rearranged_parity(state: DickeVector, phi: float) -> float:
    """``<exp(i pi S0) exp(i phi S1) exp(i pi S3) exp(-i phi S1)>`` via Pade ``expm``."""
    ops = build_spin_operators(state.N)
    op = (expm(1j * math.pi * ops.S0) @ expm(1j * phi * ops.S1)
          @ expm(1j * math.pi * ops.S3) @ expm(-1j * phi * ops.S1))
    psi = state.amplitudes
    val = psi.conj() @ op @ psi
    return float(val.real)


def theta_state(N: int, theta_param: float, alpha: float = ALPHA) -> DickeVector:
    return to_dicke(SuperpositionSpec.noon(N, theta_noon(theta_param * N * N, N, alpha)))


def numeric_sensitivity(state: DickeVector | None, phi: float,
                        estimator: str | ThetaParam = "phase",
                        fd_step: float = DEFAULT_FD_STEP) -> SensitivityReport:
    """Error-propagation uncertainty from a central finite difference.

    ``estimator="phase"`` differentiates w.r.t. ``phi`` with ``state`` fixed.
    A :class:`ThetaParam` differentiates w.r.t. ``Theta``, re-preparing the
    N00N input at ``Theta +- fd_step``; ``state`` is then ignored.
    """
    if not fd_step > 0:
        raise ValueError("fd_step must be > 0")
    if estimator == "phase":
        if state is None:
            raise ValueError("phase estimation needs an input state")
        centre = measure_parity(state, phi)
        plus = measure_parity(state, phi + fd_step).mean
        minus = measure_parity(state, phi - fd_step).mean
    elif isinstance(estimator, ThetaParam):
        e = estimator
        centre = measure_parity(theta_state(e.N, e.theta_param, e.alpha), phi)
        plus = measure_parity(theta_state(e.N, e.theta_param + fd_step, e.alpha), phi).mean
        minus = measure_parity(theta_state(e.N, e.theta_param - fd_step, e.alpha), phi).mean
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    derivative = (plus - minus) / (2.0 * fd_step)
    if abs(derivative) < MIN_DERIVATIVE:
        raise NonInformativeError(centre.mean, centre.variance, derivative)
    sigma = math.sqrt(centre.variance) / abs(derivative)
    return SensitivityReport(centre.mean, centre.variance, derivative, sigma)
