"""Oracle-vs-closed-form checks behind the ``verify`` command.

Every check returns a :class:`CheckResult` holding the worst deviation found
and the threshold it is held to.  ``alpha`` is threaded through the checks
that depend on the parabolic overlap constant, so an incorrect value shows up
as a named failure.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dicke, interferometry, nonlinear, stationary
from .dynamics import eom_rhs
from .states import SuperpositionSpec, to_dicke
from .variational import ALPHA, overlap_I


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28s} max_dev={self.max_deviation:.3e}  threshold={self.threshold:.1e}"


PHI_GRID = np.linspace(-np.pi, np.pi, 100)


def aligned_p0_values(N: int) -> list[float]:
    """``|p0|`` values whose ``j |p0|`` is an allowed ``m`` (excluding 0)."""
    j = N / 2.0
    return [(j - k) / j for k in range(int(math.floor(j)) + 1) if j - k > 0]


def check_su2(n_max: int) -> CheckResult:
    dev = max(max(dicke.commutator_residuals(dicke.build_spin_operators(n)))
              for n in range(1, n_max + 1))
    return CheckResult("su2_commutators", dev, 1e-12)


def check_swap(n_max: int) -> CheckResult:
    dev = max(dicke.swap_identity_check(n) for n in range(1, n_max + 1))
    return CheckResult("swap_identity", dev, 1e-12)


def check_noon_parity(n_max: int) -> CheckResult:
    dev = 0.0
    for n in range(1, n_max + 1):
        for th in np.linspace(0.0, 2 * np.pi, 10, endpoint=False):
            spec = SuperpositionSpec.noon(n, float(th))
            state = to_dicke(spec)
            for phi in PHI_GRID:
                r = dicke.measure_parity(state, phi)
                dev = max(dev, abs(r.mean - interferometry.mean_parity(spec, phi)),
                          abs(r.variance - interferometry.variance_parity(spec, phi)))
    return CheckResult("noon_parity_closed_form", dev, 1e-10)


def check_scs_parity(n_max: int) -> CheckResult:
    dev = 0.0
    for n in range(1, n_max + 1):
        for p0 in aligned_p0_values(n):
            spec = SuperpositionSpec.scs(n, p0)
            state = to_dicke(spec)
            for phi in PHI_GRID:
                r = dicke.measure_parity(state, phi)
                dev = max(dev, abs(r.mean - interferometry.mean_parity(spec, phi)),
                          abs(r.variance - interferometry.variance_parity(spec, phi)))
    return CheckResult("scs_parity_closed_form", dev, 1e-10)


def check_rearrangement(n_max: int, n_states: int = 50, seed: int = 20240601) -> CheckResult:
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(n_states):
        n = int(rng.integers(1, min(n_max, 20) + 1))
        amps = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        state = dicke.DickeVector(n / 2.0, amps / np.linalg.norm(amps))
        phi = float(rng.uniform(-np.pi, np.pi))
        dev = max(dev, abs(dicke.measure_parity(state, phi).mean - dicke.rearranged_parity(state, phi)))
    return CheckResult("parity_rearrangement", dev, 1e-10)


def informative_phi(N: int, offset: float = 0.0) -> float:
    """A phase where the fringe slope of a N00N/SCS signal is maximal."""
    return (math.pi / 4 - offset) / N


def check_heisenberg(n_max: int) -> CheckResult:
    dev = 0.0
    for n in range(1, n_max + 1):
        state = to_dicke(SuperpositionSpec.noon(n, 0.0))
        rep = dicke.numeric_sensitivity(state, informative_phi(n), "phase")
        dev = max(dev, abs(rep.sigma * n - 1.0))
    return CheckResult("noon_heisenberg_fd", dev, 1e-6)


def check_scs_sensitivity(n_max: int) -> CheckResult:
    dev = 0.0
    for n in range(1, n_max + 1):
        for p0 in aligned_p0_values(n):
            spec = SuperpositionSpec.scs(n, p0)
            phi = math.pi / 2 + math.pi / (4 * n * p0)
            rep = dicke.numeric_sensitivity(to_dicke(spec), phi, "phase")
            dev = max(dev, abs(rep.sigma * n * p0 - 1.0))
    return CheckResult("scs_sensitivity_fd", dev, 1e-6)


def check_sigma_theta(n_max: int, alpha: float) -> CheckResult:
    dev = 0.0
    for n in range(1, min(n_max, 10) + 1):
        tmax = nonlinear.theta_max(n, ALPHA)
        for frac in np.linspace(0.0, 0.9, 10):
            th = float(frac * tmax)
            theta_n = nonlinear.theta_N_of_Theta(nonlinear.ThetaEstimationSetup(n, th))
            phi = informative_phi(n, math.fmod(theta_n, math.pi / 2))
            rep = dicke.numeric_sensitivity(None, phi, dicke.ThetaParam(n, th))
            try:
                closed = nonlinear.sigma_theta(nonlinear.ThetaEstimationSetup(n, th, alpha=alpha))
            except nonlinear.BeyondCriticalThetaError:
                closed = math.inf
            dev = max(dev, abs(rep.sigma - closed))
    return CheckResult("sigma_theta_fd", dev, 1e-5)


def check_overlap_parabola(alpha: float) -> CheckResult:
    ps = np.linspace(0.0, 1.0, 101)
    dev = max(abs(overlap_I(p) - (1.0 - alpha * p * p)) for p in ps)
    return CheckResult("overlap_parabolic_fit", dev, 1e-2)


def check_stationary(alpha: float) -> CheckResult:
    # windows against the stated 1.58 / 2.42 plus fixed-point residuals
    lo, hi = stationary.set1_window(alpha)
    dev = max(abs(lo - 1.58), abs(hi - 2.42))
    for lam in np.linspace(lo, hi, 50):
        for pt in stationary.set1_solution(float(lam), 1, alpha):
            dev = max(dev, max(abs(v) for v in eom_rhs(pt.as_state(), alpha)))
    for lam in np.linspace(0.0, lo, 50):
        for pt in stationary.set2_solution(float(lam), 1, alpha):
            dev = max(dev, max(abs(v) for v in eom_rhs(pt.as_state(), alpha)))
    return CheckResult("stationary_points", dev, 1e-12)


def run_checks(n_max: int = 12, alpha: float = ALPHA, threads: int = 1) -> list[CheckResult]:
    if n_max < 1:
        raise ValueError("N_max must be >= 1")
    jobs: list[Callable[[], CheckResult]] = [
        lambda: check_su2(n_max),
        lambda: check_swap(n_max),
        lambda: check_rearrangement(n_max),
        lambda: check_noon_parity(n_max),
        lambda: check_scs_parity(n_max),
        lambda: check_heisenberg(n_max),
        lambda: check_scs_sensitivity(n_max),
        lambda: check_sigma_theta(n_max, alpha),
        lambda: check_overlap_parabola(alpha),
        lambda: check_stationary(alpha),
    ]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda f: f(), jobs))
    return [f() for f in jobs]
