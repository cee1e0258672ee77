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

#
# Unit tests for the soliton_discord.dynamics module
#

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pytest import approx, raises

from soliton_discord.becphys import RateSet
from soliton_discord.dynamics import (
    DICKE_TO_PRODUCT,
    A,
    DickeState,
    E,
    G,
    ProductState,
    S,
    dicke_populations,
    evolve_closed_form,
    integrate_master,
    integrate_master_samples,
    liouvillian_apply,
    liouvillian_superoperator,
    to_dicke,
    to_lab_frame,
    to_product
)
from soliton_discord.exceptions import (
    UnsupportedRegimeError,
    UnsupportedStateError
)
from soliton_discord.qlinalg import DensityMatrix, projector

R2 = 1 / math.sqrt(2)


def dicke(vector):
    return DickeState(DensityMatrix(projector(vector)))


@pytest.fixture
def mixed_state():
    return DickeState(DensityMatrix(
        np.diag([0.25, 0.5, 0.1, 0.15]).astype(complex)
        + 0.05 * (np.eye(4, k=3) + np.eye(4, k=-3))
    ))


def test_dicke_to_product_is_unitary():
    assert_allclose(
        DICKE_TO_PRODUCT @ DICKE_TO_PRODUCT.conj().T, np.eye(4), atol=1e-15
    )


def test_basis_round_trip(mixed_state):
    product = to_product(mixed_state)

    assert product.basis == 'product'
    assert_allclose(to_dicke(product).rho.mat, mixed_state.rho.mat,
                    atol=1e-15)


def test_superposition_is_a_product_state():
    state = to_product(dicke([0, R2, R2, 0]))

    # (|s> + |a>)/sqrt(2) = |e1 g2>
    assert_allclose(state.rho.mat, projector([0, 1, 0, 0]), atol=1e-15)


def test_closed_form_at_time_zero(mixed_state):
    r = RateSet(1.0, 0.3, 1.0)
    evolved = evolve_closed_form(mixed_state, r, 0.0)

    assert_allclose(evolved.rho.mat, mixed_state.rho.mat, atol=1e-15)


def test_closed_form_populations():
    r = RateSet(1.0, 0.4, 0.0)
    t = 1.3
    ee, ss, aa, gg = dicke_populations(
        evolve_closed_form(dicke([1, 0, 0, 0]), r, t)
    )

    assert ee == approx(math.exp(-2 * t))
    assert ss == approx(1.4 / 0.6 * (math.exp(-1.4 * t) - math.exp(-2 * t)))
    assert aa == approx(0.6 / 1.4 * (math.exp(-0.6 * t) - math.exp(-2 * t)))
    assert ee + ss + aa + gg == approx(1.0)


def test_closed_form_subradiant_ordering():
    r = RateSet(1.0, -0.5, 1.0)
    initial = dicke([0, R2, R2, 0])

    for t in np.linspace(0.05, 5.0, 25):
        mat = evolve_closed_form(initial, r, t).rho.mat
        assert mat[A, A].real < mat[S, S].real


@pytest.mark.parametrize('eta', [-1.5, 0.7, 2.0])
def test_closed_form_coherence_phase(eta):
    r = RateSet(1.0, 0.3, eta)
    initial = dicke([0, R2, 1j * R2, 0])
    start = initial.rho.mat[S, A]

    for t in (0.4, 1.1, 3.0):
        current = evolve_closed_form(initial, r, t).rho.mat[S, A]
        turned = current / abs(current) * abs(start) / start
        assert turned == approx(np.exp(2j * eta * t), abs=1e-8)


@pytest.mark.parametrize('big_gamma', [-0.9, 0.0, 0.4, 0.9])
@pytest.mark.parametrize('eta', [0.0, 2.0])
def test_closed_form_matches_integration(mixed_state, big_gamma, eta):
    r = RateSet(1.0, big_gamma, eta)
    superposition = dicke([0, R2, R2, 0])
    times = [0.5, 1.7, 4.0]

    for initial in (mixed_state, superposition):
        samples = integrate_master_samples(
            to_product(initial), r, times, dt=0.0025
        )
        for t, state in zip(times, samples):
            closed = to_product(evolve_closed_form(initial, r, t))
            assert_allclose(state.rho.mat, closed.rho.mat, atol=1e-8)


def test_integrate_master_single_time(mixed_state):
    r = RateSet(1.0, 0.2, 0.5)
    state = integrate_master(to_product(mixed_state), r, 2.0, dt=0.0025)
    closed = to_product(evolve_closed_form(mixed_state, r, 2.0))

    assert isinstance(state, ProductState)
    assert_allclose(state.rho.mat, closed.rho.mat, atol=1e-8)

    with raises(ValueError):
        integrate_master(to_product(mixed_state), r, -1.0)


def test_integrate_master_independent_decay():
    r = RateSet(1.0, 0.0, 0.0)
    initial = ProductState(DensityMatrix(projector([0, 1, 0, 0])))
    times = [0.25, 1.0, 2.5, 4.0]

    samples = integrate_master_samples(initial, r, times)
    for t, state in zip(times, samples):
        excited = state.rho.mat[0, 0].real + state.rho.mat[1, 1].real
        assert excited == approx(math.exp(-t), abs=1e-8)


def test_integrate_master_reaches_ground_state():
    r = RateSet(1.0, 0.0, 0.5)
    initial = ProductState(DensityMatrix(projector([0, 1, 0, 0])))

    state = integrate_master(initial, r, 10.0)
    assert_allclose(state.rho.mat, projector([0, 0, 0, 1]), atol=1e-4)


def test_integration_argument_errors(mixed_state):
    r = RateSet(1.0, 0.0, 0.0)
    initial = to_product(mixed_state)

    with raises(ValueError):
        integrate_master_samples(initial, r, [1.0], dt=0.0)

    with raises(ValueError):
        integrate_master_samples(initial, r, [1.0, 0.5], dt=0.01)


def test_large_step_warns(mixed_state, caplog):
    integrate_master_samples(
        to_product(mixed_state), RateSet(1.0, 0.0, 0.0), [0.1], dt=0.05
    )

    assert 'exceeds 0.01/gamma' in caplog.text


def test_liouvillian_superoperator_matches_apply(mixed_state):
    r = RateSet(1.0, -0.3, 0.7)
    product = to_product(mixed_state)
    superop = liouvillian_superoperator(r)

    assert_allclose(
        (superop @ product.rho.mat.reshape(16)).reshape(4, 4),
        liouvillian_apply(product, r),
        atol=1e-14
    )
    # trace preserving
    assert_allclose(
        np.trace(liouvillian_apply(product, r)), 0.0, atol=1e-14
    )


def test_unsupported_initial_state():
    state = dicke([R2, R2, 0, 0])

    with raises(UnsupportedStateError) as error:
        evolve_closed_form(state, RateSet(1.0, 0.0, 0.0), 1.0)

    assert 'rho_es' in str(error.value)


def test_unsupported_regime(mixed_state):
    r = RateSet(1.0, 1.0, 0.0)

    with raises(UnsupportedRegimeError):
        evolve_closed_form(mixed_state, r, 1.0)


def test_negative_time(mixed_state):
    with raises(ValueError):
        evolve_closed_form(mixed_state, RateSet(1.0, 0.0, 0.0), -0.1)


def test_lab_frame_phases():
    state = dicke([R2, 0, 0, R2])
    lab = to_lab_frame(state, omega0=3.0, t=0.5)

    assert lab.rho.mat[E, G] == approx(0.5 * np.exp(-3j))
    assert_allclose(np.diag(lab.rho.mat), np.diag(state.rho.mat))
