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
test_config.py is part of soliton-discord and provides units tests
for the Config class.
"""
import yaml
from pytest import raises
from yaml.parser import ParserError

from soliton_discord.cli import get_plugin_manager
from soliton_discord.config import Config
from soliton_discord.hookimpls import DEFAULTS

good_config_file = 'tests/data/config_rates.yaml'
bad_config_file = 'tests/data/config_bad.yaml'
missing_config_file = 'tests/data/config_missing.yaml'
pm = get_plugin_manager()


def test_get_config_from_good_config_file():
    """Test reading a config file from the specified location."""

    config = Config.load_from_file(
        good_config_file,
        pm.hook
    )
    assert config.get('Gamma') == 0.5
    assert config.scenario == 'superposition'
    assert config.logging.level == 'DEBUG'

    # defaults fill in the unspecified settings
    assert config.alpha == DEFAULTS['alpha']
    assert config.dt == 0.1


def test_get_config_from_missing_config_file():
    """Test reading a config file that does not exist"""

    with raises(FileNotFoundError):
        Config.load_from_file(
            missing_config_file,
            pm.hook
        )


def test_get_config_from_bad_config_file():
    """Test reading a config file with invalid yaml formatting"""

    with raises(ParserError):
        Config.load_from_file(
            bad_config_file,
            pm.hook
        )


def test_load_defaults_only():
    config = Config(Config.load_defaults(None, pm.hook))

    assert config == DEFAULTS
    assert config.t_max == 5.0


def test_merged_skips_unset_overrides():
    config = Config({'alpha': 0.5, 'scenario': 'mixed'})
    merged = config.merged({'alpha': 0.9, 'scenario': None})

    assert merged.alpha == 0.9
    assert merged.scenario == 'mixed'
    assert config.alpha == 0.5


def test_dump_round_trip():
    config = Config({'eta': 1.0, 'logging': {'level': 'INFO'}})
    text = config.dump()

    assert yaml.safe_load(text) == {'eta': 1.0, 'logging': {'level': 'INFO'}}
    assert Config(yaml.safe_load(text)).dump() == text


def test_get_config_from_non_mapping_file():
    with raises(ValueError, match='must contain a mapping'):
        Config.load_from_file('tests/data/config_list.yaml', pm.hook)
