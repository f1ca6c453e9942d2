"""Classical two-soliton dynamics in (p, theta).

Time is the dimensionless ``t' = 2|kappa| t``.  The equations of motion are
Hamilton's equations ``p' = -dH/dtheta``, ``theta' = dH/dp`` for

    H(p, theta) = Lambda p^2 / 2 - (1/M) (1 - p^2) (1 - alpha p^2) cos(theta),

so ``H`` is conserved and serves as the integrity diagnostic of every
trajectory (``Trajectory.energy_drift``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import OdeSettings, ode_solve
from .variational import ALPHA

# Trajectories are integrated in windows of this length; theta is shifted by
# a multiple of 2 pi between windows so its error weight stays O(1).
RECENTER_INTERVAL = 10.0
P_CLAMP_TOL = 1e-9


class IntegrityError(RuntimeError):
    """|p| left [-1, 1] by more than integration noise."""


@dataclass(frozen=True)
class VariationalState:
    p: float
    theta: float
    lam: float
    M: int = 1

    def __post_init__(self):
        if not abs(self.p) <= 1.0:
            raise ValueError(f"|p| must be <= 1, got {self.p!r}")
        if self.M not in (-1, 1):
            raise ValueError(f"M must be +1 or -1, got {self.M!r}")


@dataclass(frozen=True)
class Trajectory:
    t_prime: np.ndarray
    p: np.ndarray
    theta: np.ndarray  # unwrapped
    energy: np.ndarray
    lam: float
    M: int
    energy_drift: float

    @property
    def samples(self):
        return [(t, VariationalState(p, th, self.lam, self.M))
                for t, p, th in zip(self.t_prime, self.p, self.theta)]

    def wrapped_theta(self) -> np.ndarray:
        return np.mod(self.theta, 2 * np.pi)


def _rates(p, theta, lam, M, alpha):
    dp = -(1.0 / M) * (1 - p * p) * (1 - alpha * p * p) * math.sin(theta)
    dtheta = lam * p + (2.0 * p / M) * math.cos(theta) * (1 + alpha - 2 * alpha * p * p)
    return dp, dtheta


def eom_rhs(state: VariationalState, alpha: float = ALPHA) -> tuple[float, float]:
    return _rates(state.p, state.theta, state.lam, state.M, alpha)


def energy(p, theta, lam: float, M: int = 1, alpha: float = ALPHA):
    p = np.asarray(p, dtype=float)
    return lam * p * p / 2 - (1.0 / M) * (1 - p * p) * (1 - alpha * p * p) * np.cos(theta)


def conserved_energy(state: VariationalState, alpha: float = ALPHA) -> float:
    return float(energy(state.p, state.theta, state.lam, state.M, alpha))


def energy_scale(h0: float) -> float:
    """Denominator for relative drift; both terms of H are O(1) in these units."""
    return max(abs(h0), 1.0)


def _clamp_p(p: np.ndarray, t: np.ndarray) -> np.ndarray:
    excess = np.abs(p) - 1.0
    bad = excess > P_CLAMP_TOL
    if np.any(bad):
        i = int(np.argmax(bad))
        raise IntegrityError(f"|p| = {abs(p[i])!r} exceeds 1 at t'={t[i]!r}")
    return np.clip(p, -1.0, 1.0)


def evolve(initial: VariationalState, t_prime_end: float,
           settings: OdeSettings | None = None, alpha: float = ALPHA,
           reverse: bool = False) -> Trajectory:
    """Integrate the equations of motion from ``t'=0`` to ``t_prime_end``.

    With ``reverse=True`` the sign-reversed vector field is integrated, which
    retraces a forward trajectory back to its start.
    """
    if not t_prime_end > 0:
        raise ValueError("t_prime_end must be > 0")
    settings = settings or OdeSettings()
    lam, M = initial.lam, initial.M
    sign = -1.0 if reverse else 1.0

    def rhs(t, y):
        dp, dth = _rates(y[0], y[1], lam, M, alpha)
        return [sign * dp, sign * dth]

    ts = [np.array([0.0])]
    ps = [np.array([initial.p])]
    ths = [np.array([initial.theta])]
    t, y = 0.0, np.array([initial.p, initial.theta], dtype=float)
    offset = 0.0
    while t < t_prime_end:
        t_next = min(t + RECENTER_INTERVAL, t_prime_end)
        shift = 2 * np.pi * np.round(y[1] / (2 * np.pi))
        y[1] -= shift
        offset += shift
        sol = ode_solve(rhs, y, (t, t_next), settings)
        ts.append(sol.t[1:])
        ps.append(sol.y[1:, 0])
        ths.append(sol.y[1:, 1] + offset)
        t, y = float(sol.t[-1]), sol.y[-1].copy()
        if t_next == t_prime_end:
            break
    t_all = np.concatenate(ts)
    p_all = _clamp_p(np.concatenate(ps), t_all)
    th_all = np.concatenate(ths)
    h = energy(p_all, th_all, lam, M, alpha)
    drift = float(np.max(np.abs(h - h[0])) / energy_scale(h[0]))
    return Trajectory(t_prime=t_all, p=p_all, theta=th_all, energy=h,
                      lam=lam, M=M, energy_drift=drift)


def final_state(traj: Trajectory) -> VariationalState:
    return VariationalState(float(traj.p[-1]), float(traj.theta[-1]), traj.lam, traj.M)
