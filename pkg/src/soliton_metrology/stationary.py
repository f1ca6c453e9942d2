"""Nontrivial stationary points of the (p, theta) equations of motion.

Set 1:  p0^2 = (1 + alpha - Lambda/2) / (2 alpha),   cos(theta0) = -M,
        exists for 2(1 - alpha) <= Lambda <= 2(1 + alpha).
Set 2:  p0^2 = 1,   cos(theta0) = -M Lambda / (2 (1 - alpha)),
        exists for 0 <= Lambda <= 2(1 - alpha).

The branches meet at ``Lambda_cr = 2(1 - alpha)`` with ``p0^2 = 1`` and
``cos(theta0) = -M``.  Window edges are inclusive; a relative slack of
``WINDOW_SLACK`` absorbs rounding when callers pass decimal literals such as
1.58 for the computed edge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .dynamics import VariationalState
from .variational import ALPHA

WINDOW_SLACK = 1e-12


class Branch(str, enum.Enum):
    SET1 = "set1"
    SET2 = "set2"


@dataclass(frozen=True)
class StationaryPoint:
    branch: Branch
    p0: float
    theta0: float
    lam: float
    M: int = 1

    def as_state(self) -> VariationalState:
        return VariationalState(self.p0, self.theta0, self.lam, self.M)


def lambda_critical(alpha: float = ALPHA) -> float:
    return 2.0 * (1.0 - alpha)


def set1_window(alpha: float = ALPHA) -> tuple[float, float]:
    return 2.0 * (1.0 - alpha), 2.0 * (1.0 + alpha)


def set2_window(alpha: float = ALPHA) -> tuple[float, float]:
    return 0.0, 2.0 * (1.0 - alpha)


def _check_lambda(lam: float):
    if not lam >= 0 or not math.isfinite(lam):
        raise ValueError(f"Lambda must be non-negative and finite, got {lam!r}")


def _check_M(M: int):
    if M not in (-1, 1):
        raise ValueError(f"M must be +1 or -1, got {M!r}")


def _clip_unit(x: float) -> float:
    return min(1.0, max(-1.0, x))


def set1_solution(lam: float, M: int = 1, alpha: float = ALPHA) -> list[StationaryPoint]:
    _check_lambda(lam)
    _check_M(M)
    lo, hi = set1_window(alpha)
    if lam < lo * (1 - WINDOW_SLACK) or lam > hi * (1 + WINDOW_SLACK):
        return []
    p0_sq = min(1.0, max(0.0, (1.0 + alpha - lam / 2.0) / (2.0 * alpha)))
    p0 = math.sqrt(p0_sq)
    theta0 = math.acos(-M)
    signs = (1.0,) if p0 == 0.0 else (1.0, -1.0)
    return [StationaryPoint(Branch.SET1, s * p0, theta0, lam, M) for s in signs]


def set2_solution(lam: float, M: int = 1, alpha: float = ALPHA) -> list[StationaryPoint]:
    _check_lambda(lam)
    _check_M(M)
    _, hi = set2_window(alpha)
    if lam > hi * (1 + WINDOW_SLACK):
        return []
    theta0 = math.acos(_clip_unit(-M * lam / (2.0 * (1.0 - alpha))))
    return [StationaryPoint(Branch.SET2, s, theta0, lam, M) for s in (1.0, -1.0)]


def stationary_points(lam: float, M: int = 1, alpha: float = ALPHA) -> list[StationaryPoint]:
    return set1_solution(lam, M, alpha) + set2_solution(lam, M, alpha)
