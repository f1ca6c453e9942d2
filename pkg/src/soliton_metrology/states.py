"""Schroedinger-cat (SCS) and N00N superpositions of soliton states.

Diagnostics live on the field-theory side (branch overlap ``X``, cat size
``1/eps = X^-N``, normalization ``C``); ``to_dicke`` maps a state onto the
symmetric two-mode sector ``|j, m>`` with ``j = N/2`` and
``m = (N1 - N2)/2``, where the two SCS branches are exactly orthogonal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import QuadratureSettings, integrate_line
from .variational import ALPHA

# Tolerance for treating |Lambda / Lambda_cr| marginally above 1 as the edge.
WINDOW_SLACK = 1e-12


class StateKind(str, enum.Enum):
    SCS = "scs"
    NOON = "noon"


class OutsideWindowError(ValueError):
    """Parameters outside the existence window of the requested state."""


@dataclass(frozen=True)
class SuperpositionSpec:
    kind: StateKind
    N: int
    p0_abs: float | None = None
    theta_N: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if self.kind == StateKind.SCS:
            if self.p0_abs is None or not 0.0 <= self.p0_abs <= 1.0:
                raise ValueError(f"SCS needs p0_abs in [0, 1], got {self.p0_abs!r}")
        elif self.kind == StateKind.NOON:
            if self.theta_N is None:
                raise ValueError("N00N needs theta_N")
        else:
            raise ValueError(f"unknown state kind {self.kind!r}")

    @classmethod
    def scs(cls, N: int, p0_abs: float, lam: float | None = None) -> "SuperpositionSpec":
        return cls(StateKind.SCS, N, p0_abs=p0_abs, lam=lam)

    @classmethod
    def noon(cls, N: int, theta_N: float, lam: float | None = None) -> "SuperpositionSpec":
        return cls(StateKind.NOON, N, theta_N=theta_N, lam=lam)

    @classmethod
    def noon_from_lambda(cls, N: int, lam: float, alpha: float = ALPHA) -> "SuperpositionSpec":
        return cls(StateKind.NOON, N, theta_N=theta_noon(lam, N, alpha), lam=lam)


@dataclass(frozen=True)
class DickeVector:
    """Amplitudes over ``m = -j, ..., j`` (index ``k = m + j``)."""

    j: float
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (int(round(2 * self.j)) + 1,):
            raise ValueError("amplitude vector length must be 2j + 1")

    @property
    def N(self) -> int:
        return int(round(2 * self.j))

    @property
    def m(self) -> np.ndarray:
        return np.arange(self.N + 1) - self.j

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_p0(p0_abs: float):
    if not 0.0 <= p0_abs <= 1.0:
        raise ValueError(f"|p0| must lie in [0, 1], got {p0_abs!r}")


def _x_integrand(p0: float):
    def f(x: float) -> float:
        ax = abs(x)
        if ax > 700.0:
            return 0.0
        return 1.0 / (math.cosh(ax) + math.cosh(p0 * ax))
    return f


def overlap_X(p0_abs: float, mode: str = "parabolic", alpha: float = ALPHA,
              settings: QuadratureSettings | None = None) -> float:
    """Single-particle overlap between the two SCS branches.

    ``mode="exact_quadrature"`` evaluates
    ``(1 - p0^2)/2 * int dx / (cosh x + cosh(p0 x))``; ``mode="parabolic"``
    returns ``(1 - p0^2)(1 - alpha p0^2)``.
    """
    _check_p0(p0_abs)
    pref = 1.0 - p0_abs * p0_abs
    if mode == "parabolic":
        return pref * (1.0 - alpha * p0_abs * p0_abs)
    if mode == "exact_quadrature":
        if pref == 0.0:
            return 0.0
        return 0.5 * pref * integrate_line(_x_integrand(float(p0_abs)), settings)
    raise ValueError(f"unknown overlap mode {mode!r}")


def log_overlap_power(p0_abs: float, N: int, alpha: float = ALPHA) -> float:
    """``N log X`` (``-inf`` when ``X = 0``)."""
    X = overlap_X(p0_abs, "parabolic", alpha)
    return -math.inf if X == 0.0 else N * math.log(X)


def log_cat_size(p0_abs: float, N: int, alpha: float = ALPHA) -> float:
    return -log_overlap_power(p0_abs, N, alpha)


def cat_size(p0_abs: float, N: int, alpha: float = ALPHA) -> float:
    """``1/eps = X^-N``; ``inf`` for ``|p0| = 1`` or when the value overflows."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lc = log_cat_size(p0_abs, N, alpha)
    return math.inf if lc > 709.78 else math.exp(lc)


def scs_normalization(p0_abs: float, N: int, alpha: float = ALPHA) -> float:
    eps = math.exp(log_overlap_power(p0_abs, N, alpha))
    return 1.0 / math.sqrt(2.0 * (1.0 + eps))


def noon_cosine(lam: float, alpha: float = ALPHA) -> float:
    """``-Lambda / (2(1 - alpha))``, the stationary ``cos(theta0)`` for M = 1."""
    x = -lam / (2.0 * (1.0 - alpha))
    if abs(x) > 1.0 + WINDOW_SLACK:
        raise OutsideWindowError(
            f"Lambda={lam!r} is outside the N00N existence window |Lambda| <= {2 * (1 - alpha)!r}")
    return min(1.0, max(-1.0, x))


def theta_noon(lam: float, N: int, alpha: float = ALPHA) -> float:
    """Relative N00N phase ``N arccos(-Lambda / (2(1 - alpha)))``, not reduced mod 2 pi."""
    return N * math.acos(noon_cosine(lam, alpha))


def scs_m0(N: int, p0_abs: float) -> float:
    """Nearest allowed ``m`` to ``j |p0|``, ties toward +inf."""
    _check_p0(p0_abs)
    j = N / 2.0
    steps_down = math.ceil(j * (1.0 - p0_abs) - 0.5)
    return j - steps_down


def to_dicke(spec: SuperpositionSpec) -> DickeVector:
    N = spec.N
    j = N / 2.0
    amps = np.zeros(N + 1, dtype=complex)
    if spec.kind == StateKind.NOON:
        amps[0] = 1.0 / math.sqrt(2.0)
        amps[N] += np.exp(-1j * math.fmod(spec.theta_N, 2 * math.pi)) / math.sqrt(2.0)
    else:
        m0 = scs_m0(N, spec.p0_abs)
        lo, hi = int(round(j - m0)), int(round(j + m0))
        amps[lo] += 1.0
        amps[hi] += 1.0
    amps /= np.linalg.norm(amps)
    return DickeVector(j, amps)
