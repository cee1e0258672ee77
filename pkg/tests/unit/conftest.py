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

import logging
import pathlib

import pytest

from soliton_discord.becphys import BecParams, derive_params
from soliton_discord.cli import get_plugin_manager
from soliton_discord.config import Config


def pytest_configure(config):
    """Custom pytest configuration."""

    # configure custom markers
    config.addinivalue_line(
        "markers", ('config: the config file path to load')
    )


@pytest.fixture(scope="session")
def data_dir(pytestconfig):
    """
    Fixture returning the path to the data directory under the tests
    area for this pytest run.
    """
    # Get testing root directory, supporting older versions of
    # pytest that don't have rootpath
    if hasattr(pytestconfig, 'rootpath'):
        testroot = pytestconfig.rootpath
    else:
        testroot = pathlib.Path(pytestconfig.rootdir)

    return testroot / "tests/data"


@pytest.fixture
def sd_config_path(data_dir, request):
    """
    Fixture returning the path to the config file to load, as specified
    by the config marker, defaulting to the direct rates config.
    """
    config_marker = request.node.get_closest_marker('config')
    if config_marker:
        config_file = config_marker.args[0]
    else:
        config_file = 'config_rates.yaml'

    return data_dir / config_file


@pytest.fixture
def sd_pm():
    """Fixture returning an initialized plugin manager instance."""
    return get_plugin_manager()


@pytest.fixture
def sd_config(sd_config_path, sd_pm):
    """
    Fixture returning a Config object loaded from the config file
    specified by the sd_config_path fixture, merged over the defaults.
    """
    return Config.load_from_file(str(sd_config_path), sd_pm.hook)


@pytest.fixture
def sd_log():
    log = logging.getLogger('SolitonDiscord')
    log.setLevel(logging.DEBUG)

    return log


@pytest.fixture(scope="session")
def soliton_params():
    """
    Condensate parameters in soliton units (xi = mu = hbar = 1) with a
    qubit gap parameter nu = (sqrt(5) - 1)/2.
    """
    return BecParams(
        g=1.0, chi=10.0, M=1.0, m=0.1, n0=1.0, quant_length=100.0, hbar=1.0
    )


@pytest.fixture(scope="session")
def soliton_derived(soliton_params):
    return derive_params(soliton_params)
