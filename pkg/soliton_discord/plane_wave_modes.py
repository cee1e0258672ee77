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
Pluggy hook implementations of the homogeneous condensate phonon
modes.

Modes are plane waves exp(ikx)/sqrt(L) with Bogoliubov weights u, v
fixed by u**2 - v**2 = 1 and the Bogoliubov dispersion. An impurity
couples to the condensate density, whose fluctuation carries the
combination u + v of the two weights.
"""

import cmath
import logging
import math

import soliton_discord

from soliton_discord.becphys import (
    reduced_dispersion,
    transition_form_factor
)
from soliton_discord.exceptions import DomainError

log = logging.getLogger('SolitonDiscord')


@soliton_discord.hookimpl(trylast=True)
def bogoliubov_amplitudes(k: float) -> (float, float):
    """Return the plane-wave Bogoliubov weights (u, v)."""
    if k == 0:
        raise DomainError(
            'bogoliubov_amplitudes', (k,), 'no phonon mode at k = 0'
        )
    energy = float(reduced_dispersion(k))
    u = math.sqrt((k * k + 1.0 + energy) / (2.0 * energy))
    # u v = -1/(2E)
    v = -1.0 / (2.0 * energy * u)
    return u, v


@soliton_discord.hookimpl(trylast=True)
def coupling_amplitude(k: float, position: float, amplitudes, derived,
                       params) -> complex:
    """Return the plane-wave mode coupling in units of mu."""
    u, v = amplitudes
    strength = (params.chi / params.g) / math.sqrt(
        params.n0 * params.quant_length
    )
    return (
        strength
        * (u + v)
        * float(transition_form_factor(k, derived))
        * cmath.exp(1j * k * position)
    )


@soliton_discord.hookimpl
def get_version():
    version = soliton_discord.__version__
    return ('plane_wave_modes', version)
