"""Closed-form parity detection at the output of a Mach-Zehnder interferometer.

Mean parity for the two input families:

    SCS:   (-1)^N cos[(phi - pi/2) N |p0|]
    N00N:  (-1)^(N/2) cos(N phi + theta_N)          N even
           (-1)^((N+1)/2) sin(N phi + theta_N)      N odd

Parity is an involution, so the variance is always ``1 - mean^2``.  The
error-propagation uncertainty is phi-independent: ``1/(N |p0|)`` for the SCS
and ``1/N`` (Heisenberg) for N00N.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .states import StateKind, SuperpositionSpec


class ScalingLabel(str, enum.Enum):
    SQL = "SQL"
    HEISENBERG = "Heisenberg"
    SUB_SQL = "SubSQL"


class UninformativeStateError(ValueError):
    pass


@dataclass(frozen=True)
class ParityCurve:
    phi_grid: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    state: SuperpositionSpec


@dataclass(frozen=True)
class PhaseSensitivity:
    sigma_phi: float
    scaling_label: ScalingLabel


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _wrap(x):
    # reduce large unreduced theta_N before trig evaluation
    return np.mod(x, 2 * np.pi)


def mean_parity_scs(N: int, p0_abs: float, phi):
    return _sign(N) * np.cos((np.asarray(phi) - np.pi / 2) * N * p0_abs)


def mean_parity_noon(N: int, theta_N: float, phi):
    arg = _wrap(np.asarray(phi) * N + theta_N)
    if N % 2 == 0:
        return _sign(N // 2) * np.cos(arg)
    return _sign((N + 1) // 2) * np.sin(arg)


def mean_parity(state: SuperpositionSpec, phi):
    if state.kind == StateKind.SCS:
        return mean_parity_scs(state.N, state.p0_abs, phi)
    return mean_parity_noon(state.N, state.theta_N, phi)


def variance_parity(state: SuperpositionSpec, phi):
    N = state.N
    if state.kind == StateKind.SCS:
        return np.sin((np.asarray(phi) - np.pi / 2) * N * state.p0_abs) ** 2
    arg = _wrap(np.asarray(phi) * N + state.theta_N)
    return np.sin(arg) ** 2 if N % 2 == 0 else np.cos(arg) ** 2


def parity_curve(state: SuperpositionSpec, phi_grid) -> ParityCurve:
    phi_grid = np.asarray(phi_grid, dtype=float)
    return ParityCurve(phi_grid, np.asarray(mean_parity(state, phi_grid), dtype=float),
                       np.asarray(variance_parity(state, phi_grid), dtype=float), state)


def scaling_label(sigma_phi: float, N: int) -> ScalingLabel:
    if math.isclose(sigma_phi * N, 1.0, rel_tol=1e-12):
        return ScalingLabel.HEISENBERG
    if sigma_phi < 1.0 / math.sqrt(N):
        return ScalingLabel.SUB_SQL
    return ScalingLabel.SQL


def phase_sensitivity(state: SuperpositionSpec) -> PhaseSensitivity:
    N = state.N
    if state.kind == StateKind.SCS:
        if state.p0_abs == 0:
            raise UninformativeStateError("an SCS with |p0| = 0 carries no phase information")
        sigma = 1.0 / (N * state.p0_abs)
    else:
        sigma = 1.0 / N
    return PhaseSensitivity(sigma, scaling_label(sigma, N))


def sql_sigma(N: int) -> float:
    return 1.0 / math.sqrt(N)


@dataclass(frozen=True)
class SensitivityRow:
    series: str  # "scs", "noon" or "sql"
    N: int
    p0: float | None
    sigma_phi: float
    reduced: float  # sqrt(N) * sigma_phi


def fig3_data(N_range, p0_values, include_noon: bool = False) -> list[SensitivityRow]:
    """Reduced uncertainty ``sqrt(N) sigma_phi`` for SCS inputs plus the SQL line.

    Rows are ordered by series (each ``p0`` in the given order, then N00N if
    requested, then SQL) and by ``N`` within a series.
    """
    Ns = [int(n) for n in N_range]
    p0s = [float(p) for p in p0_values]
    if not Ns or (not p0s and not include_noon):
        raise ValueError("fig3_data needs a nonempty N range and at least one series")
    if any(n < 1 for n in Ns):
        raise ValueError("N must be >= 1")
    rows = []
    for p0 in p0s:
        for n in Ns:
            s = phase_sensitivity(SuperpositionSpec.scs(n, p0)).sigma_phi
            rows.append(SensitivityRow("scs", n, p0, s, math.sqrt(n) * s))
    if include_noon:
        for n in Ns:
            s = 1.0 / n
            rows.append(SensitivityRow("noon", n, None, s, math.sqrt(n) * s))
    for n in Ns:
        rows.append(SensitivityRow("sql", n, None, sql_sigma(n), 1.0))
    return rows
