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
Two qubit open system dynamics under the phonon mediated master
equation, in the frame rotating at the qubit gap.

Dicke basis order is (|e>, |s>, |a>, |g>); product basis order is
(|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>), i.e. 0 = excited, 1 = ground.
"""

import logging
import math

from dataclasses import dataclass
from typing import ClassVar, List, Sequence

import numpy as np

from soliton_discord.becphys import RateSet
from soliton_discord.exceptions import (
    IntegrationStepError,
    UnsupportedRegimeError,
    UnsupportedStateError
)
from soliton_discord.qlinalg import DensityMatrix, dagger

log = logging.getLogger('SolitonDiscord')

DEFAULT_DT = 0.005
INVARIANT_TOLERANCE = 1e-6
COHERENCE_TOLERANCE = 1e-12

E, S, A, G = range(4)
DICKE_LABELS = ('e', 's', 'a', 'g')
EXCITATIONS = np.array([2, 1, 1, 0])

_R2 = 1.0 / math.sqrt(2.0)
DICKE_TO_PRODUCT = np.array([
    [1, 0, 0, 0],
    [0, _R2, _R2, 0],
    [0, _R2, -_R2, 0],
    [0, 0, 0, 1],
], dtype=complex)
"""Columns are |e>, |s>, |a>, |g> expanded in the product basis."""

_SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
_IDENTITY = np.eye(2, dtype=complex)
LOWERING = (
    np.kron(_SIGMA_MINUS, _IDENTITY),
    np.kron(_IDENTITY, _SIGMA_MINUS),
)
RAISING = tuple(dagger(op) for op in LOWERING)

# Coherences whose evolution the closed form does not cover
_UNLISTED = ((E, S), (E, A), (S, G), (A, G))


@dataclass(frozen=True, eq=False)
class DickeState:
    """Two qubit state expressed in the Dicke basis."""
    rho: DensityMatrix
    basis: ClassVar[str] = 'dicke'


@dataclass(frozen=True, eq=False)
class ProductState:
    """Two qubit state expressed in the product basis."""
    rho: DensityMatrix
    basis: ClassVar[str] = 'product'


def to_product(ds: DickeState) -> ProductState:
    mat = DICKE_TO_PRODUCT @ ds.rho.mat @ dagger(DICKE_TO_PRODUCT)
    return ProductState(DensityMatrix(mat, tolerance=ds.rho.tolerance))


def to_dicke(ps: ProductState) -> DickeState:
    mat = dagger(DICKE_TO_PRODUCT) @ ps.rho.mat @ DICKE_TO_PRODUCT
    return DickeState(DensityMatrix(mat, tolerance=ps.rho.tolerance))


def dicke_populations(ds: DickeState) -> (float, float, float, float):
    """Return (rho_ee, rho_ss, rho_aa, rho_gg)."""
    return tuple(float(val) for val in np.real(np.diag(ds.rho.mat)))


def _check_regime(r: RateSet):
    if not abs(r.big_gamma) < r.gamma:
        raise UnsupportedRegimeError(r.gamma, r.big_gamma)


def evolve_closed_form(rho0: DickeState, r: RateSet, t: float) -> DickeState:
    """
    Closed form solution of the master equation for initial states
    without e-s, e-a, s-g and a-g coherences.

    :raises UnsupportedRegimeError: unless |Gamma| < gamma.
    :raises UnsupportedStateError: for nonzero unlisted coherences.
    """
    _check_regime(r)
    if t < 0:
        raise ValueError(f'time must be non-negative, got {t}')

    initial = rho0.rho.mat
    present = [
        f'rho_{DICKE_LABELS[i]}{DICKE_LABELS[j]}'
        for i, j in _UNLISTED
        if abs(initial[i, j]) > COHERENCE_TOLERANCE
    ]
    if present:
        raise UnsupportedStateError(present)

    gamma, big_gamma, eta = r.gamma, r.big_gamma, r.eta
    ee0 = initial[E, E].real
    decay_e = math.exp(-2 * gamma * t)
    decay_s = math.exp(-(gamma + big_gamma) * t)
    decay_a = math.exp(-(gamma - big_gamma) * t)

    ee = decay_e * ee0
    ss = decay_s * initial[S, S].real + (
        (gamma + big_gamma) / (gamma - big_gamma) * (decay_s - decay_e) * ee0
    )
    aa = decay_a * initial[A, A].real + (
        (gamma - big_gamma) / (gamma + big_gamma) * (decay_a - decay_e) * ee0
    )

    mat = np.zeros((4, 4), dtype=complex)
    mat[E, E], mat[S, S], mat[A, A] = ee, ss, aa
    mat[G, G] = 1.0 - ee - ss - aa
    mat[E, G] = math.exp(-gamma * t) * initial[E, G]
    mat[S, A] = np.exp(-(gamma - 2j * eta) * t) * initial[S, A]
    mat[G, E] = np.conj(mat[E, G])
    mat[A, S] = np.conj(mat[S, A])

    return DickeState(DensityMatrix(mat, tolerance=rho0.rho.tolerance))


def _generator(mat: np.ndarray, r: RateSet) -> np.ndarray:
    rates = ((r.gamma, r.big_gamma), (r.big_gamma, r.gamma))
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            jump = RAISING[i] @ LOWERING[j]
            if i != j:
                # coherent exchange, H = -eta (s+^1 s-^2 + s+^2 s-^1)
                out += 1j * r.eta * (jump @ mat - mat @ jump)
            out += rates[i][j] * (
                LOWERING[j] @ mat @ RAISING[i]
                - 0.5 * (jump @ mat + mat @ jump)
            )
    return out


def liouvillian_apply(ps: ProductState, r: RateSet) -> np.ndarray:
    """
    Time derivative of the product basis density matrix under the
    collective damping and coherent exchange generator.
    """
    return _generator(ps.rho.mat, r)


def liouvillian_superoperator(r: RateSet) -> np.ndarray:
    """
    16x16 matrix of the generator acting on row-major vectorized
    density matrices.
    """
    columns = []
    for index in range(16):
        unit = np.zeros(16, dtype=complex)
        unit[index] = 1.0
        columns.append(_generator(unit.reshape(4, 4), r).reshape(16))
    return np.column_stack(columns)


def _rk4_step(superop: np.ndarray, vec: np.ndarray, h: float) -> np.ndarray:
    k1 = superop @ vec
    k2 = superop @ (vec + 0.5 * h * k1)
    k3 = superop @ (vec + 0.5 * h * k2)
    k4 = superop @ (vec + h * k3)
    vec = vec + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    mat = vec.reshape(4, 4)
    return (0.5 * (mat + dagger(mat))).reshape(16)


def _check_invariants(mat: np.ndarray, time: float, dt: float):
    violation = max(
        abs(np.trace(mat).real - 1.0),
        float(np.max(np.abs(mat - dagger(mat)))),
        max(0.0, -float(np.linalg.eigvalsh(mat)[0]))
    )
    if violation > INVARIANT_TOLERANCE:
        raise IntegrationStepError(time, violation, dt)


def integrate_master_samples(
    rho0: ProductState,
    r: RateSet,
    times: Sequence[float],
    dt: float = DEFAULT_DT
) -> List[ProductState]:
    """
    Fixed step classical Runge-Kutta integration of the master
    equation, returning the state at each requested sample time.

    Each interval between consecutive sample times is split into
    equal steps no longer than dt.

    :raises IntegrationStepError: when the state leaves the set of
        density matrices by more than 1e-6.
    """
    if dt <= 0:
        raise ValueError(f'dt must be positive, got {dt}')
    if dt * r.gamma > 0.01 + 1e-12:
        log.warning(
            "Integration step %g exceeds 0.01/gamma; accuracy may suffer",
            dt
        )

    superop = liouvillian_superoperator(r)
    vec = np.array(rho0.rho.mat, dtype=complex).reshape(16)
    current = 0.0
    states = []

    for sample in times:
        if sample < current:
            raise ValueError('sample times must be non-decreasing and >= 0')
        span = sample - current
        steps = int(math.ceil(span / dt - 1e-9)) if span > 0 else 0
        for _ in range(steps):
            vec = _rk4_step(superop, vec, span / steps)
        current = sample

        mat = vec.reshape(4, 4).copy()
        _check_invariants(mat, current, dt)
        states.append(ProductState(DensityMatrix(mat, tolerance=1e-8)))

    log.debug("Integrated %d samples up to t=%g", len(states), current)
    return states


def integrate_master(
    rho0: ProductState,
    r: RateSet,
    t_end: float,
    dt: float = DEFAULT_DT
) -> ProductState:
    """Integrate the master equation from 0 to t_end."""
    if t_end < 0:
        raise ValueError(f't_end must be non-negative, got {t_end}')
    return integrate_master_samples(rho0, r, [t_end], dt)[0]


def to_lab_frame(ds: DickeState, omega0: float, t: float) -> DickeState:
    """
    Reapply the free qubit phases exp(-i omega0 (n_i - n_j) t) dropped
    by the rotating frame, n being the excitation number of each
    Dicke state.
    """
    phases = np.exp(
        -1j * omega0 * t * (EXCITATIONS[:, None] - EXCITATIONS[None, :])
    )
    return DickeState(
        DensityMatrix(ds.rho.mat * phases, tolerance=ds.rho.tolerance)
    )
