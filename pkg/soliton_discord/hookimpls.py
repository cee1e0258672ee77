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

"""Pluggy hook implementations for core package."""

import soliton_discord

DEFAULTS = {
    'scenario': 'superposition',
    'alpha': 0.5,
    'd': 2.5,
    't_max': 5.0,
    'dt': 0.005,
    'unit': 'dimensionless',
    'd_min': 0.0,
    'd_max': 10.0,
    'd_count': 101,
    'alpha_min': 0.0,
    'alpha_max': 1.0,
    'alpha_count': 21,
    'scan_t_max': 10.0,
    'zero_threshold': 1e-6,
    'grid_n': 64,
    'rank_tolerance': 1e-7,
    'c2_prefactor': 1.0,
    'vn': False,
    'random_states': 1000,
    'seed': 20190401,
}


@soliton_discord.hookimpl(trylast=True)
def load_defaults(defaults: dict) -> None:
    """Load the core run defaults without overriding plugin values."""
    for key, value in DEFAULTS.items():
        defaults.setdefault(key, value)


@soliton_discord.hookimpl
def get_version():
    """
    Returns the version of the current plugin.
    """
    version = soliton_discord.__version__
    return ('core', version)
