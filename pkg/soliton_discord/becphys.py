#
# Copyright 2025 SUSE LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""
Condensate and impurity physics: derived qubit parameters, the
Bogoliubov spectrum, the qubit-phonon coupling and the phonon
mediated rates gamma, Gamma(d) and eta(d).

Public functions take and return SI quantities. Internally everything
is evaluated in soliton units (xi = 1, mu = 1, hbar = 1), where a
wavenumber q stands for k*xi and a frequency for omega*hbar/mu.
"""

import logging
import math
import warnings

from dataclasses import dataclass

import numpy as np
from scipy import constants, special
from scipy.integrate import IntegrationWarning, quad

from soliton_discord.exceptions import (
    DomainError,
    NoResonanceError,
    QuadratureError,
    UnsupportedRegimeError
)

log = logging.getLogger('SolitonDiscord')

QUBIT_NU_RANGE = (0.33, 0.80)
K_MAX = 50.0
TAIL_TOLERANCE = 1e-8
QUAD_LIMIT = 1000
PROFILE_EXTENT = 40.0


@dataclass(frozen=True)
class BecParams:
    """
    Physical inputs in SI units: couplings g and chi (J m), condensate
    and impurity masses M and m (kg), linear density n0 (1/m) and the
    quantization length (m). hbar may be set to 1 together with
    g = n0 = M = 1 to work directly in soliton units.
    """
    g: float
    chi: float
    M: float
    m: float
    n0: float
    quant_length: float
    hbar: float = constants.hbar

    def __post_init__(self):
        checks = (
            ('g', self.g > 0),
            ('chi', self.chi >= 0),
            ('M', self.M > 0),
            ('m', self.m > 0),
            ('n0', self.n0 > 0),
            ('quant_length', self.quant_length > 0),
            ('hbar', self.hbar > 0),
        )
        for name, valid in checks:
            if not valid:
                raise DomainError(
                    'BecParams',
                    (name, getattr(self, name)),
                    f'{name} is out of range'
                )


# Rb-87 condensate with a Li-7 impurity, mu/hbar = 2 pi x 2 kHz
EXAMPLE_PARAMS = BecParams(
    g=1.325211e-38,
    chi=1.722774e-37,
    M=1.44316089e-25,
    m=1.1650348e-26,
    n0=1e8,
    quant_length=1e-4
)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from BecParams by derive_params."""
    xi: float
    mu: float
    nu: float
    omega0: float
    width_exp: float
    A0: float
    A1: float
    n_bound: float
    n_bound_floor: int
    is_qubit: bool
    mu_over_hbar: float
    omega0_reduced: float


@dataclass(frozen=True)
class RateSet:
    """Single qubit decay gamma, collective damping and coherent coupling."""
    gamma: float
    big_gamma: float
    eta: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(
                'RateSet', (self.gamma,), 'gamma must be positive'
            )
        if abs(self.big_gamma) > self.gamma * (1 + 1e-9):
            raise UnsupportedRegimeError(self.gamma, self.big_gamma)

    def normalized(self) -> 'RateSet':
        """Return the rates in units of gamma."""
        return RateSet(
            1.0,
            self.big_gamma / self.gamma,
            self.eta / self.gamma
        )


def gamma_fn(x: float) -> float:
    """Euler gamma function for positive arguments."""
    if not x > 0:
        raise DomainError('gamma_fn', (x,), 'argument must be positive')
    return float(special.gamma(x))


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """
    Gauss hypergeometric function 2F1(a, b; c; z) for z in [-1, 0].

    The Pfaff transformation maps z to z/(z - 1) in [0, 1/2], where
    the defining series converges geometrically even at z = -1.
    """
    params = (a, b, c, z)
    if c <= 0 and float(c).is_integer():
        raise DomainError(
            'hyp2f1', params, 'c must not be a non-positive integer'
        )
    if not -1.0 <= z <= 0.0:
        raise DomainError('hyp2f1', params, 'z must lie in [-1, 0]')

    value = (1.0 - z) ** (-a) * special.hyp2f1(a, c - b, c, z / (z - 1.0))
    if not np.isfinite(value):
        raise DomainError('hyp2f1', params, 'series did not converge')
    return float(value)


def normalization_constants(width_exp: float) -> (float, float):
    """
    Normalization constants of phi0 = A0 sech^a and
    phi1 = 2 A1 tanh phi0 for width exponent a, in units xi = 1.
    """
    alpha = width_exp
    a0 = (
        math.sqrt(math.pi) * gamma_fn(alpha) / gamma_fn(alpha + 0.5)
    ) ** -0.5

    f1, f2, f3 = (
        hyp2f1(alpha + n - 1, 2 * alpha + 2, alpha + n, -1.0)
        for n in (1, 2, 3)
    )
    bracket = f1 / alpha - 2 * f2 / (1 + alpha) + f3 / (2 + alpha)
    a1 = (2 ** (2 * (1 + alpha)) * a0 ** 2 * bracket) ** -0.5
    return a0, a1


def bound_state_count(nu: float) -> (float, int):
    """Bound state measure 1 + nu + sqrt(nu(nu + 1)) and its floor."""
    n_bound = 1.0 + nu + math.sqrt(nu * (nu + 1.0))
    return n_bound, int(math.floor(n_bound))


def profile_norms(width_exp: float,
                  tolerance: float = 1e-10) -> (float, float):
    """
    Squared norms of phi0 and phi1 for the given width exponent by
    adaptive quadrature, in units xi = 1.
    """
    a0, a1 = normalization_constants(width_exp)

    def ground(x):
        return (a0 * _sech_power(x, width_exp)) ** 2

    def excited(x):
        return (2.0 * a1 * np.tanh(x)) ** 2 * ground(x)

    return tuple(
        2.0 * _checked_quad(
            'profile norm', func, 0.0, PROFILE_EXTENT, tolerance
        )
        for func in (ground, excited)
    )


def derive_params(p: BecParams) -> DerivedParams:
    """
    Derive the healing length, chemical potential, gap parameter,
    qubit gap and wavefunction constants.

    A gap parameter outside the qubit range is logged as a warning
    and reported through is_qubit; the remaining quantities are
    still evaluated.
    """
    xi = p.hbar / math.sqrt(p.M * p.n0 * p.g)
    mu = p.g * p.n0
    nu = 0.5 * (-1.0 + math.sqrt(1.0 + 4.0 * p.m * p.chi / (p.g * p.M)))
    omega0 = p.hbar * (2 * nu - 1) / (2 * p.m * xi ** 2)
    width_exp = math.sqrt(2.0 * p.chi * p.m / (p.g * p.M))

    if width_exp > 0:
        a0, a1 = normalization_constants(width_exp)
    else:
        log.warning("No impurity bound state without impurity coupling")
        a0 = a1 = float('nan')

    n_bound, n_bound_floor = bound_state_count(nu)
    is_qubit = QUBIT_NU_RANGE[0] <= nu < QUBIT_NU_RANGE[1]
    if not is_qubit:
        log.warning(
            "Gap parameter nu=%g outside the qubit range [%g, %g)",
            nu,
            *QUBIT_NU_RANGE
        )

    derived = DerivedParams(
        xi=xi,
        mu=mu,
        nu=nu,
        omega0=omega0,
        width_exp=width_exp,
        A0=a0,
        A1=a1,
        n_bound=n_bound,
        n_bound_floor=n_bound_floor,
        is_qubit=is_qubit,
        mu_over_hbar=mu / p.hbar,
        omega0_reduced=omega0 * p.hbar / mu
    )
    log.debug("Derived parameters: %s", derived)
    return derived


def _sech_power(x, power):
    # sech(x)**power via log cosh, finite for any |x|
    ax = np.abs(x)
    log_cosh = ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)
    return np.exp(-power * log_cosh)


def phi0(x, dp: DerivedParams):
    """Ground impurity bound state at x (units of xi)."""
    return dp.A0 * _sech_power(x, dp.width_exp)


def phi1(x, dp: DerivedParams):
    """Excited impurity bound state at x (units of xi)."""
    return 2.0 * dp.A1 * np.tanh(x) * phi0(x, dp)


def reduced_dispersion(q):
    """Bogoliubov energy in units of mu for wavenumber q = k xi."""
    return np.abs(q) * np.sqrt(q * q + 2.0)


def reduced_group_velocity(q):
    """Derivative of reduced_dispersion for q >= 0."""
    return (2.0 * q * q + 2.0) / np.sqrt(q * q + 2.0)


def reduced_resonance(energy: float) -> float:
    """Positive q with reduced_dispersion(q) == energy (units of mu)."""
    if not energy > 0:
        raise DomainError(
            'resonant_k', (energy,), 'energy must be positive'
        )
    root = math.sqrt(1.0 + energy * energy)
    return math.sqrt(energy * energy / (1.0 + root))


def bogoliubov_energy(k, dp: DerivedParams):
    """Bogoliubov energy (J) of the phonon with wavenumber k (1/m)."""
    return dp.mu * reduced_dispersion(np.asarray(k) * dp.xi)


def resonant_k(energy: float, dp: DerivedParams) -> float:
    """Positive wavenumber (1/m) of the phonon with the given energy (J)."""
    return reduced_resonance(energy / dp.mu) / dp.xi


def _fourier_sech(power, q):
    # integral of sech(y)**power * exp(i q y) over the real line
    log_value = (
        (power - 1.0) * math.log(2.0)
        + 2.0 * np.real(special.loggamma((power + 1j * q) / 2.0))
        - special.gammaln(power)
    )
    return np.exp(log_value)


def transition_form_factor(q, dp: DerivedParams):
    """
    Fourier transform of phi0 phi1 tanh at wavenumber q (units 1/xi).

    The product is even, so the transform is real and even in q.
    """
    alpha = dp.width_exp
    return (
        2.0 * dp.A1 * dp.A0 ** 2
        * _fourier_sech(2.0 * alpha, q)
        * (2.0 * alpha - q * q) / (2.0 * alpha * (2.0 * alpha + 1.0))
    )


def _checked_quad(what, func, a, b, tolerance, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', IntegrationWarning)
        value, abserr = quad(
            func, a, b, limit=QUAD_LIMIT, epsabs=tolerance / 10,
            epsrel=1e-10, **kwargs
        )
    if not np.isfinite(value) or abserr > tolerance:
        raise QuadratureError(what, abserr)
    return value


def overlap_quadrature(q: float, dp: DerivedParams,
                       tolerance: float = 1e-9) -> float:
    """
    Adaptive quadrature of the transform of phi0 phi1 tanh, independent
    of the closed form used by transition_form_factor.
    """
    def integrand(y):
        return phi0(y, dp) * phi1(y, dp) * np.tanh(y)

    if q == 0:
        half = _checked_quad(
            'overlap', integrand, 0.0, PROFILE_EXTENT, tolerance
        )
    else:
        half = _checked_quad(
            'overlap', integrand, 0.0, PROFILE_EXTENT, tolerance,
            weight='cos', wvar=abs(q)
        )
    return 2.0 * half


def _mode_coupling(hook, k: float, position: float, dp, p) -> complex:
    # soliton units; the k = 0 mode carries no density fluctuation
    if k == 0:
        return 0j
    return complex(hook.coupling_amplitude(
        k=k,
        position=position,
        amplitudes=hook.bogoliubov_amplitudes(k=k),
        derived=dp,
        params=p
    ))


def coupling_g(k: float, xi_pos: float, dp: DerivedParams, p: BecParams,
               hook) -> complex:
    """
    Coupling (J) of the qubit transition of the soliton at xi_pos (m)
    to the phonon with wavenumber k (1/m), from the mode provider.
    """
    return _mode_coupling(hook, k * dp.xi, xi_pos / dp.xi, dp, p) * dp.mu


def _cross_coupling(q, x1, x2, dp, p, hook):
    # L g1 g2* summed over the +q and -q branches, soliton units
    length = p.quant_length / dp.xi
    total = 0j
    for branch in (q, -q):
        g1 = _mode_coupling(hook, branch, x1, dp, p)
        g2 = _mode_coupling(hook, branch, x2, dp, p)
        total += g1 * np.conj(g2)
    return length * total


def _principal_value(func, q0, omega0, k_max, scale):
    """
    Principal value of the integral of func(q)/(w(q) - w0) over q > 0.

    Since w(q)**2 - w0**2 = (q**2 - q0**2)(q**2 + q0**2 + 2), the pole
    factor equals (w + w0)/((q + q0)(q**2 + q0**2 + 2)) / (q - q0),
    leaving only the Cauchy kernel to QUADPACK's QAWC routine.
    """
    def regular(q):
        return func(q) * (reduced_dispersion(q) + omega0) / (
            (q + q0) * (q * q + q0 * q0 + 2.0)
        )

    tolerance = 1e-8 * scale
    main = _checked_quad(
        'eta', regular, 0.0, k_max, tolerance, weight='cauchy', wvar=q0
    )

    upper = k_max
    for _ in range(6):
        tail = _checked_quad(
            'eta tail',
            lambda q: func(q) / (reduced_dispersion(q) - omega0),
            upper,
            2 * upper,
            tolerance
        )
        main += tail
        upper *= 2
        if abs(tail) <= TAIL_TOLERANCE * max(abs(main), scale):
            break
    return main


def rates(d: float, dp: DerivedParams, p: BecParams, hook,
          with_eta: bool = True, k_max: float = K_MAX) -> RateSet:
    """
    Phonon mediated rates (1/s) for two solitons at separation d (m).

    gamma and Gamma(d) follow from the resonance condition with the
    density of states 1/|dw/dk| summed over both propagation
    directions; eta(d) is the principal value integral over all modes.
    """
    if not dp.omega0 > 0:
        raise NoResonanceError(dp.omega0)

    omega0 = dp.omega0_reduced
    q0 = reduced_resonance(omega0)
    slope = float(reduced_group_velocity(q0))
    x1, x2 = -0.5 * d / dp.xi, 0.5 * d / dp.xi

    gamma = 2.0 * _cross_coupling(q0, x1, x1, dp, p, hook).real / slope
    big_gamma = 2.0 * _cross_coupling(q0, x1, x2, dp, p, hook).real / slope

    eta = 0.0
    if with_eta:
        eta = _principal_value(
            lambda q: _cross_coupling(q, x1, x2, dp, p, hook).real,
            q0,
            omega0,
            k_max,
            gamma
        ) / (2.0 * math.pi)

    result = RateSet(
        gamma * dp.mu_over_hbar,
        big_gamma * dp.mu_over_hbar,
        eta * dp.mu_over_hbar
    )
    log.debug("Rates at d=%g xi (q0=%g): %s", d / dp.xi, q0, result)
    return result


def lorentzian_rate(d: float, dp: DerivedParams, p: BecParams, hook,
                    widths=(0.02, 0.01, 0.005),
                    k_max: float = K_MAX) -> float:
    """
    Collective damping (1/s) from the full mode integral with the
    resonance broadened into Lorentzians of the given widths (units of
    mu/hbar), extrapolated to zero width by a quadratic fit.
    """
    if not dp.omega0 > 0:
        raise NoResonanceError(dp.omega0)

    omega0 = dp.omega0_reduced
    q0 = reduced_resonance(omega0)
    x1, x2 = -0.5 * d / dp.xi, 0.5 * d / dp.xi
    scale = 2.0 * _cross_coupling(q0, x1, x1, dp, p, hook).real \
        / float(reduced_group_velocity(q0))

    values = []
    for width in widths:
        def integrand(q, width=width):
            detuning = reduced_dispersion(q) - omega0
            lorentz = width / math.pi / (detuning ** 2 + width ** 2)
            return 2.0 * _cross_coupling(q, x1, x2, dp, p, hook).real \
                * lorentz

        values.append(_checked_quad(
            'lorentzian rate', integrand, 0.0, k_max, 1e-8 * scale,
            points=[q0]
        ))

    coefficients = np.polynomial.polynomial.polyfit(widths, values, 2)
    return float(coefficients[0]) * dp.mu_over_hbar
