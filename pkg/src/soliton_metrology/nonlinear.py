"""Estimating ``Theta = Lambda / N^2 = U^2 / (16 |kappa|)`` with N00N inputs.

The N00N phase depends on the parameter through

    theta_N(Theta) = N arccos(-Theta N^2 / (2 (1 - alpha))),

so the parity signal (at ``phi = 0``) is ``cos`` or ``sin`` of
``theta_N(Theta)``.  Applying error propagation with the chain rule gives

    sigma_Theta = 1 / |d theta_N / d Theta|
                = 2 (1 - alpha) sqrt(1 - x^2) / N^3,    x = Theta N^2 / (2 (1 - alpha)),

which reduces to ``2 (1 - alpha) / N^3`` at ``Theta = 0`` and falls to zero
with a divergent slope at the window edge ``Theta_max = 2 (1 - alpha) / N^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dicke import MeasurementResult
from .states import OutsideWindowError, WINDOW_SLACK
from .variational import ALPHA


class BeyondCriticalThetaError(OutsideWindowError):
    """Theta lies past the N00N existence window (the gray region edge)."""


@dataclass(frozen=True)
class ThetaEstimationSetup:
    N: int
    theta_param: float
    phi: float = 0.0
    alpha: float = ALPHA

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.theta_param >= 0:
            raise ValueError(f"Theta must be >= 0, got {self.theta_param!r}")

    @property
    def window_fraction(self) -> float:
        """``Theta N^2 / (2 (1 - alpha))``; the setup is valid while this is <= 1."""
        return self.theta_param * self.N ** 2 / (2.0 * (1.0 - self.alpha))


def theta_max(N: int, alpha: float = ALPHA) -> float:
    return 2.0 * (1.0 - alpha) / N ** 2


def _fraction(setup: ThetaEstimationSetup) -> float:
    x = setup.window_fraction
    if x > 1.0 + WINDOW_SLACK:
        raise BeyondCriticalThetaError(
            f"Theta={setup.theta_param!r} exceeds Theta_max={theta_max(setup.N, setup.alpha)!r} "
            f"for N={setup.N}")
    # arccos is ill-conditioned at -1, so the flagged edge band maps to the edge itself
    return 1.0 if abs(x - 1.0) <= WINDOW_SLACK else x


def theta_N_of_Theta(setup: ThetaEstimationSetup) -> float:
    return setup.N * math.acos(-_fraction(setup))


def taylor_linear(setup: ThetaEstimationSetup) -> float:
    N = setup.N
    return math.pi * N / 2 + N ** 3 * setup.theta_param / (2.0 * (1.0 - setup.alpha))


def taylor_check(setup: ThetaEstimationSetup) -> tuple[float, float, float]:
    """``(exact, linear, exact - linear)``; the residual is ``O(Theta^3)``."""
    exact = theta_N_of_Theta(setup)
    linear = taylor_linear(setup)
    return exact, linear, exact - linear


def parity_stats_theta(setup: ThetaEstimationSetup) -> MeasurementResult:
    N = setup.N
    arg = math.fmod(N * setup.phi + theta_N_of_Theta(setup), 2 * math.pi)
    if N % 2 == 0:
        sign = -1 if (N // 2) % 2 else 1
        return MeasurementResult(sign * math.cos(arg), math.sin(arg) ** 2)
    sign = -1 if ((N + 1) // 2) % 2 else 1
    return MeasurementResult(sign * math.sin(arg), math.cos(arg) ** 2)


def is_boundary(setup: ThetaEstimationSetup) -> bool:
    return abs(setup.window_fraction - 1.0) <= WINDOW_SLACK


def sigma_theta(setup: ThetaEstimationSetup) -> float:
    """Exact error-propagation uncertainty of Theta; 0 at the window edge."""
    x = _fraction(setup)
    return 2.0 * (1.0 - setup.alpha) * math.sqrt(max(0.0, 1.0 - x * x)) / setup.N ** 3


def sigma_theta_linear(N: int, alpha: float = ALPHA) -> float:
    """Uncertainty from the Taylor-linearized phase: ``2 (1 - alpha) / N^3``."""
    return 2.0 * (1.0 - alpha) / N ** 3


def sigma_theta_slope(setup: ThetaEstimationSetup) -> float:
    """``d sigma_Theta / d Theta``; ``-inf`` at the window edge."""
    x = _fraction(setup)
    if x >= 1.0:
        return -math.inf
    return -x / math.sqrt(1.0 - x * x) / setup.N


@dataclass(frozen=True)
class ThetaSweepRow:
    N: int
    theta_param: float
    theta_max: float
    sigma_theta: float | None  # None beyond the window
    sigma_theta_linear: float | None
    at_boundary: bool
    beats_single_particle: bool | None  # sigma(N) < sigma(N=1) at the same Theta


def fig4_data(N_list, theta_grid, alpha: float = ALPHA) -> list[ThetaSweepRow]:
    Ns = [int(n) for n in N_list]
    grid = [float(t) for t in theta_grid]
    if not Ns or not grid:
        raise ValueError("fig4_data needs nonempty N and Theta inputs")
    rows = []
    for n in Ns:
        for th in grid:
            setup = ThetaEstimationSetup(n, th, alpha=alpha)
            try:
                sig = sigma_theta(setup)
            except BeyondCriticalThetaError:
                rows.append(ThetaSweepRow(n, th, theta_max(n, alpha), None, None, False, None))
                continue
            ref = sigma_theta(ThetaEstimationSetup(1, th, alpha=alpha))
            rows.append(ThetaSweepRow(n, th, theta_max(n, alpha), sig, sigma_theta_linear(n, alpha),
                                is_boundary(setup), sig < ref if n > 1 else None))
    return rows
