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

"""Soliton discord specific exceptions."""


class SolitonDiscordException(Exception):
    """Base exception class for soliton discord exceptions."""


class ConfigError(SolitonDiscordException):
    """Exception raised when the run configuration is invalid."""


class DomainError(SolitonDiscordException):
    """
    Exception raised when a function argument lies outside the
    domain where the function is defined.

    Attributes:
        name -- the name of the function or quantity
        params -- the offending parameters
        reason -- a short description of the violation
    """

    def __init__(self, name, params, reason):
        self.name = name
        self.params = params
        self.reason = reason
        self.msg = f'{self.name}{self.params!r}: {self.reason}'

    def __str__(self):
        return self.msg


class NoResonanceError(DomainError):
    """
    Exception raised when the qubit gap is not positive, so no
    phonon mode is resonant with the qubit transition.
    """

    def __init__(self, omega0):
        super().__init__(
            'rates',
            (omega0,),
            'qubit gap omega0 must be positive for a resonant phonon'
        )
        self.omega0 = omega0


class UnsupportedRegimeError(DomainError):
    """
    Exception raised when the collective damping is not strictly
    smaller than the single qubit decay rate in magnitude.
    """

    def __init__(self, gamma, big_gamma):
        super().__init__(
            'rates',
            (gamma, big_gamma),
            '|Gamma| < gamma is required by the closed form solution'
        )
        self.gamma = gamma
        self.big_gamma = big_gamma


class QuadratureError(SolitonDiscordException):
    """
    Exception raised when an adaptive quadrature fails to reach the
    requested accuracy.

    Attributes:
        what -- the integral being evaluated
        residual -- the achieved error estimate
    """

    def __init__(self, what, residual):
        self.what = what
        self.residual = residual
        self.msg = (
            f'Quadrature for {self.what} did not converge, '
            f'achieved residual {self.residual:.3g}'
        )

    def __str__(self):
        return self.msg


class NonHermitianError(SolitonDiscordException):
    """
    Exception raised when a matrix expected to be Hermitian is not.

    Attributes:
        asymmetry -- max |M - M^dagger|
    """

    def __init__(self, asymmetry):
        self.asymmetry = asymmetry
        self.msg = f'Matrix is not Hermitian, max asymmetry {asymmetry:.3g}'

    def __str__(self):
        return self.msg


class InvalidDensityMatrixError(SolitonDiscordException):
    """Exception raised when a matrix violates a density matrix invariant."""


class NumericalError(SolitonDiscordException):
    """Exception raised when a numerical residual check fails."""


class DegenerateReducedState(SolitonDiscordException):
    """
    Exception raised when the reduced state of subsystem B is rank
    deficient, so the channel extraction system is singular.

    Attributes:
        min_eigenvalue -- the smallest eigenvalue of rho_B
    """

    def __init__(self, min_eigenvalue, tolerance):
        self.min_eigenvalue = min_eigenvalue
        self.tolerance = tolerance
        self.msg = (
            f'Reduced state is rank deficient: min eigenvalue '
            f'{min_eigenvalue:.3g} below tolerance {tolerance:.3g}'
        )

    def __str__(self):
        return self.msg


class UnsupportedStateError(SolitonDiscordException):
    """
    Exception raised when the closed form evolution is asked to handle
    initial coherences it does not cover.
    """

    def __init__(self, coherences):
        self.coherences = coherences
        self.msg = (
            'Closed form evolution does not cover nonzero initial '
            f'coherences {", ".join(coherences)}; use integrate_master'
        )

    def __str__(self):
        return self.msg


class IntegrationStepError(SolitonDiscordException):
    """
    Exception raised when the numerical integration violates a state
    invariant beyond tolerance.

    Attributes:
        time -- the time at which the violation was detected
        violation -- the magnitude of the violation
    """

    def __init__(self, time, violation, dt):
        self.time = time
        self.violation = violation
        self.dt = dt
        self.msg = (
            f'State invariant violated by {violation:.3g} at t={time:g}; '
            f'retry with a step smaller than dt={dt:g}'
        )

    def __str__(self):
        return self.msg


class DegenerateDenominatorError(SolitonDiscordException):
    """Exception raised when a closed form denominator is not positive."""


class AuxDerivationError(SolitonDiscordException):
    """
    Exception raised when the auxiliary scalars fail to reproduce the
    master equation populations.

    Attributes:
        identity -- the name of the failed identity
        residual -- the absolute residual
    """

    def __init__(self, identity, residual):
        self.identity = identity
        self.residual = residual
        self.msg = (
            f'Auxiliary identity {identity} violated by {residual:.3g}; '
            're-derive the scalars from evolve_closed_form'
        )

    def __str__(self):
        return self.msg
