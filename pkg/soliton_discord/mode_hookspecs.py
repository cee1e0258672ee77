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
Pluggy hook interface specifications for the phonon mode provider.

Wavenumbers are in units of 1/xi and couplings in units of mu, i.e.
soliton units, so providers do not need to deal with SI scaling.
"""

import pluggy

hookspec = pluggy.HookspecMarker('soliton_discord')


@hookspec(firstresult=True)
def bogoliubov_amplitudes(k: float) -> (float, float):
    """
    Return the Bogoliubov amplitude weights of the mode with
    wavenumber k.

    :param k: Wavenumber in units of 1/xi.
    :return: A tuple (u, v) normalized so that u**2 - v**2 == 1.
    """


@hookspec(firstresult=True)
def coupling_amplitude(
    k: float,
    position: float,
    amplitudes,
    derived,
    params
) -> complex:
    """
    Return the coupling of the qubit transition of a soliton at the
    given position to the phonon mode with wavenumber k.

    :param k: Wavenumber in units of 1/xi.
    :param position: Soliton position in units of xi.
    :param amplitudes: The (u, v) weights of the mode, as returned by
        bogoliubov_amplitudes.
    :param derived: The DerivedParams of the condensate and impurity.
    :param params: The BecParams of the condensate and impurity.
    :return: The complex coupling g(k) in units of mu.
    """
