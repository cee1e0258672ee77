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
soliton-discord

This package simulates two dark-soliton qubits immersed in a quasi-1D
Bose-Einstein condensate, coupled through the Bogoliubov phonon
reservoir, and computes the quantum correlations (concurrence,
Renyi-2 classical correlation and quantum discord) of their state.

The reservoir mode functions are provided through Pluggy hook
interface specifications, allowing plugins to replace the default
homogeneous plane-wave Bogoliubov modes.
"""

import pluggy

__author__ = """SUSE"""
__email__ = 'public-cloud-dev@susecloud.net'
__version__ = '0.1.0'

hookimpl = pluggy.HookimplMarker('soliton_discord')
"""Marker to be imported and used in plugins (and for own implementations)"""
