"""Sech-ansatz reduction of the coupled two-soliton field model.

Each well holds a bright soliton

    psi_j(z) = (N_j / 2) sqrt|U| sech(N_j |U| z / 2) exp(i M theta_j),

and the coupling between wells reduces to the overlap integral

    I(p) = int_0^inf dz / (cosh^2 z + sinh^2 (p z)),

which is approximated by 1 - alpha p^2 with ``ALPHA = 0.21`` everywhere
downstream.  ``fit_alpha`` and ``effective_lagrangian_check`` exist to verify
those reductions numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import QuadratureSettings, integrate_line

ALPHA = 0.21


@dataclass(frozen=True)
class ModelParams:
    """Microscopic parameters: particle number, |interaction|, tunnelling, mass sign."""

    N: int
    U: float
    kappa: float
    M: int = 1

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.U > 0:
            raise ValueError(f"U must be > 0, got {self.U!r}")
        if self.M not in (-1, 1):
            raise ValueError(f"M must be +1 or -1, got {self.M!r}")


def lambda_param(params: ModelParams) -> float:
    """Interaction-to-tunnelling ratio ``U^2 N^2 / (16 |kappa|)``."""
    if params.kappa == 0:
        raise ValueError("Lambda is undefined for kappa = 0")
    return params.U ** 2 * params.N ** 2 / (16.0 * abs(params.kappa))


@dataclass(frozen=True)
class SolitonProfile:
    amplitude_scale: float  # N_j |U| / 2
    phase: float
    particle_count: float
    U: float
    M: int = 1

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.particle_count == 0:
            return np.zeros_like(z, dtype=complex)
        peak = 0.5 * self.particle_count * math.sqrt(self.U)
        e = np.exp(-np.abs(self.amplitude_scale * z))
        return peak * 2.0 * e / (1.0 + e * e) * np.exp(1j * self.M * self.phase)

    def density(self, z):
        return np.abs(self(z)) ** 2

    def norm(self, settings: QuadratureSettings | None = None) -> float:
        if self.particle_count == 0:
            return 0.0
        return integrate_line(lambda z: float(self.density(z)), settings)


def soliton_profile(params: ModelParams, n_j: float, theta_j: float) -> SolitonProfile:
    if n_j < 0:
        raise ValueError(f"particle count must be non-negative, got {n_j!r}")
    U = abs(params.U)
    return SolitonProfile(amplitude_scale=0.5 * n_j * U, phase=theta_j,
                          particle_count=float(n_j), U=U, M=params.M)


def _sech(x: float) -> float:
    e = math.exp(-abs(x))
    return 2.0 * e / (1.0 + e * e)


def _overlap_integrand(p: float):
    def f(z: float) -> float:
        # cosh^2 overflows near |z| ~ 355; the integrand is already ~0 there
        if abs(z) > 300.0:
            return 0.0
        return 1.0 / (math.cosh(z) ** 2 + math.sinh(p * z) ** 2)
    return f


def overlap_I(p: float, settings: QuadratureSettings | None = None) -> float:
    """Half-line overlap integral ``I(p)`` for ``|p| <= 1``."""
    if not abs(p) <= 1.0:
        raise ValueError(f"population imbalance must satisfy |p| <= 1, got {p!r}")
    return integrate_line(_overlap_integrand(float(p)), settings, half_line=True)


def overlap_parabolic(p, alpha: float = ALPHA):
    return 1.0 - alpha * np.asarray(p) ** 2


def fit_alpha(grid_size: int = 101, settings: QuadratureSettings | None = None) -> float:
    """Least-squares ``alpha`` in ``I(p) ~ 1 - alpha p^2`` on a uniform grid over [0, 1].

    The intercept is pinned at 1 (``I(0) = 1`` exactly), leaving a single
    linear parameter with the closed-form solution
    ``sum((1 - I) p^2) / sum(p^4)``.
    """
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    ps = np.linspace(0.0, 1.0, grid_size)
    deficit = 1.0 - np.array([overlap_I(p, settings) for p in ps])
    return float(np.sum(deficit * ps ** 2) / np.sum(ps ** 4))


@dataclass(frozen=True)
class LagrangianTerms:
    """Numeric vs closed-form values of the z-dependent Lagrangian terms.

    ``self_numeric`` is the sum ``dispersion_numeric + interaction_numeric``;
    ``coupling_analytic`` uses the quadrature ``I(p)`` and
    ``coupling_parabolic`` the ``1 - alpha p^2`` approximation.
    """

    self_numeric: float
    self_analytic: float
    coupling_numeric: float
    coupling_analytic: float
    coupling_parabolic: float
    dispersion_numeric: float
    interaction_numeric: float


def _single_well_terms(n: float, U: float, M: int, settings) -> tuple[float, float]:
    if n == 0:
        return 0.0, 0.0
    a = 0.5 * n * U
    amp2 = 0.25 * n * n * U
    g = -M * U  # bright solitons need M * g < 0

    def dispersion(z):
        # (1/2M) psi* psi'' integrated by parts: -(1/2M) |psi'|^2
        s = _sech(a * z)
        return -amp2 * (a * s * math.tanh(a * z)) ** 2 / (2.0 * M)

    def interaction(z):
        return -0.5 * g * (amp2 * _sech(a * z) ** 2) ** 2

    return integrate_line(dispersion, settings), integrate_line(interaction, settings)


def effective_lagrangian_check(params: ModelParams, n1: float, n2: float, theta: float,
                               settings: QuadratureSettings | None = None,
                               alpha: float = ALPHA) -> LagrangianTerms:
    """Integrate the sech-ansatz Lagrangian density term by term.

    The self term of the effective Lagrangian, ``U^2 (N1^3 + N2^3) / (24 M)``,
    collects both the dispersion term ``(1/2M) psi* psi''`` and the quartic
    interaction term; the interaction constant carries the sign ``-M |U|``
    required for bright solitons.  The coupling term is compared against
    ``-(4 kappa N1 N2 / N) I(p) cos(theta)``.
    """
    if n1 < 0 or n2 < 0 or n1 + n2 == 0:
        raise ValueError("populations must be non-negative and not both zero")
    U, M, kappa = abs(params.U), params.M, params.kappa
    disp = inter = 0.0
    for n in (n1, n2):
        d, i = _single_well_terms(n, U, M, settings)
        disp += d
        inter += i
    self_analytic = U ** 2 * (n1 ** 3 + n2 ** 3) / (24.0 * M)

    N = n1 + n2
    p = (n2 - n1) / N
    if kappa == 0 or n1 == 0 or n2 == 0:
        coupling_numeric = 0.0
    else:
        a1, a2 = 0.5 * n1 * U, 0.5 * n2 * U
        pref = 0.25 * n1 * n2 * U

        def product(z):
            return pref * _sech(a1 * z) * _sech(a2 * z)

        # psi1* psi2 + c.c. = 2 |psi1||psi2| cos(M (theta2 - theta1))
        coupling_numeric = -2.0 * kappa * math.cos(M * theta) * integrate_line(product, settings)
    prefactor = -4.0 * kappa * n1 * n2 / N * math.cos(theta)
    return LagrangianTerms(
        self_numeric=disp + inter,
        self_analytic=self_analytic,
        coupling_numeric=coupling_numeric,
        coupling_analytic=prefactor * overlap_I(p, settings),
        coupling_parabolic=prefactor * float(overlap_parabolic(p, alpha)),
        dispersion_numeric=disp,
        interaction_numeric=inter,
    )
