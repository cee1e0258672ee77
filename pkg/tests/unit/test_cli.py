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
# Unit tests for the soliton_discord.cli module
#

import json
from unittest import mock

import pytest
from pytest import approx, raises

import soliton_discord
from soliton_discord import hookimpls, plane_wave_modes
from soliton_discord.becphys import RateSet
from soliton_discord.cli import (
    CONFIG_ENV,
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_UNSUPPORTED_STATE,
    EXIT_USAGE,
    EXIT_VALIDATION,
    RateContext,
    RunConfig,
    get_config,
    get_plugin_manager,
    main,
    resolve_rates,
    setup_logging,
    update_logger_from_config
)
from soliton_discord.config import Config
from soliton_discord.exceptions import (
    ConfigError,
    NoResonanceError,
    UnsupportedStateError
)
from soliton_discord.scenarios import TimeSeriesRecord
from soliton_discord.validation import CheckResult

DIRECT = ['--gamma', '1', '--Gamma', '0.5', '--eta', '1']


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


def run_main(argv):
    with raises(SystemExit) as e:
        main(argv)
    return e.value.code


def test_version():
    """Verify the package version."""
    assert soliton_discord.__version__ == "0.1.0"


def test_main_version(capsys):
    assert run_main(['--version']) == EXIT_OK

    out = capsys.readouterr().out
    assert 'core 0.1.0' in out
    assert 'plane_wave_modes 0.1.0' in out


def test_get_plugin_manager():
    """Verify that get_plugin_manager() works correctly."""
    pm = get_plugin_manager()

    assert pm.is_registered(hookimpls)
    assert pm.is_registered(plane_wave_modes)
    assert pm.hook.bogoliubov_amplitudes(k=1.0)[0] > 1.0


def test_setup_logging():
    """Verify logging is being setup correctly."""
    log = setup_logging()
    assert log.name == "SolitonDiscord"


def test_update_logger_from_config():
    """Verify logging is updated correctly."""
    log = setup_logging()
    update_logger_from_config({'logging': {'level': 'WARN'}}, log)

    assert log.getEffectiveLevel() == 30

    log = setup_logging()
    expected_level = log.getEffectiveLevel()
    update_logger_from_config({}, log)

    assert log.getEffectiveLevel() == expected_level


def test_get_config(sd_pm, sd_config, sd_config_path, sd_log):
    """Verify correct operation of get_config()."""
    config = get_config(str(sd_config_path), sd_pm.hook, sd_log)

    assert config == sd_config
    assert get_config(None, sd_pm.hook, sd_log).scenario == 'superposition'


def test_get_config_errors(sd_pm, sd_log, data_dir):
    with raises(ConfigError, match='Unable to read'):
        get_config(str(data_dir / 'config_missing.yaml'), sd_pm.hook, sd_log)

    with raises(ConfigError, match='Invalid config file'):
        get_config(str(data_dir / 'config_bad.yaml'), sd_pm.hook, sd_log)


def test_run_config_direct_rates(sd_config):
    run = RunConfig.from_config(sd_config)

    assert run.params is None
    assert run.direct_rates == RateSet(1.0, 0.5, 1.0)
    assert run.t_max == 2.0
    assert run.d_count == 101


@pytest.mark.config('config_physical.yaml')
def test_run_config_physical(sd_config, sd_pm):
    run = RunConfig.from_config(sd_config)

    assert run.direct_rates is None
    assert run.params.chi == approx(1.722774e-37)
    assert run.require_physical('rates') is run.params

    context = resolve_rates(run, sd_pm.hook)
    assert context.rates.gamma == 1.0
    assert context.rates.big_gamma == approx(-0.80, abs=0.05)
    assert context.gamma_si > 0


@pytest.mark.config('config_physical.yaml')
def test_run_config_physical_rate_overrides(sd_config, sd_pm):
    computed = resolve_rates(RunConfig.from_config(sd_config), sd_pm.hook)
    run = RunConfig.from_config(sd_config.merged({'Gamma': -0.3, 'eta': 0.5}))

    assert run.direct_rates is None
    assert run.rate_overrides == {'big_gamma': -0.3, 'eta': 0.5}

    context = resolve_rates(run, sd_pm.hook)
    assert context.rates == RateSet(1.0, -0.3, 0.5)
    assert context.gamma_si == approx(computed.gamma_si)

    only_eta = RunConfig.from_config(sd_config.merged({'eta': 0.25}))
    rates = resolve_rates(only_eta, sd_pm.hook).rates
    assert rates.eta == 0.25
    assert rates.big_gamma == approx(computed.rates.big_gamma)


@pytest.mark.config('config_conflict.yaml')
def test_run_config_conflict(sd_config):
    with raises(ConfigError, match='not both'):
        RunConfig.from_config(sd_config)


@pytest.mark.parametrize('overrides,message', [
    ({'g': 1.0}, 'Missing physical parameters'),
    ({'gamma': 1.0}, 'both gamma and Gamma'),
    ({'alpha': 'high'}, 'alpha must be numeric'),
    ({'dt': True}, 'dt must be numeric'),
    ({'scenario': 'bell'}, 'unknown scenario'),
    ({'unit': 'ms'}, 'unit ms requires physical parameters'),
    ({'t_max': 0.0}, 't_max must be positive'),
    ({'alpha_min': 0.8, 'alpha_max': 0.2}, 'alpha_min'),
    ({'grid_n': 16}, 'grid_n must be at least 64'),
    ({'random_states': 0}, 'random_states must be at least 1'),
])
def test_run_config_invalid(sd_pm, overrides, message):
    config = Config(Config.load_defaults({}, sd_pm.hook)).merged(overrides)

    with raises(ConfigError, match=message):
        RunConfig.from_config(config)


def test_run_config_requires_rates(sd_pm):
    run = RunConfig.from_config(Config(Config.load_defaults({}, sd_pm.hook)))

    with raises(ConfigError, match='requires physical parameters'):
        run.require_physical('params')

    with raises(ConfigError, match='Supply physical parameters'):
        resolve_rates(run, sd_pm.hook)


def test_rate_context_units():
    context = RateContext(RateSet(1.0, 0.0, 0.0), gamma_si=50.0)

    assert context.to_reduced(20.0, 'ms') == approx(1.0)
    assert context.from_reduced(1.0, 'ms') == approx(20.0)
    assert context.to_reduced(3.0, 'dimensionless') == 3.0


def test_main_evolve(tmp_path):
    out = tmp_path / 'series.csv'
    code = run_main(
        ['evolve'] + DIRECT + ['--t-max', '1', '--dt', '0.25',
                               '--out', str(out)]
    )

    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ','.join(TimeSeriesRecord.FIELDS)
    assert len(lines) == 6
    assert lines[1].startswith('0,0,0.5')
    assert lines[-1].startswith('1,')


def test_main_evolve_json_from_config(tmp_path, data_dir):
    out = tmp_path / 'series.json'
    code = run_main([
        'evolve', '--config', str(data_dir / 'config_rates.yaml'),
        '--scenario', 'entangled', '--alpha', '0.7', '--json',
        '--out', str(out)
    ])

    assert code == EXIT_OK
    document = json.loads(out.read_text())
    assert document['scenario'] == 'entangled'
    assert document['alpha'] == 0.7
    assert len(document['rows']) == 21
    assert document['rows'][0]['rho_ee'] == approx(0.7)
    assert not any(row['flag'] for row in document['rows'])


def test_main_params(capsys, data_dir):
    code = run_main([
        'params', '--config', str(data_dir / 'config_physical.yaml')
    ])

    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('name,value\n')
    assert '\nnu,0.63' in out
    assert '\nis_qubit,1\n' in out


def test_main_rates(capsys, data_dir, monkeypatch):
    monkeypatch.setenv(CONFIG_ENV, str(data_dir / 'config_physical.yaml'))
    code = run_main(['rates'])

    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'd,Gamma_over_gamma,eta_over_gamma'
    assert len(lines) == 6
    assert lines[1].startswith('0,1,') or lines[1].startswith('0,0.99999')


def test_main_scan(capsys):
    code = run_main(
        ['scan', '--gamma', '1', '--Gamma', '0', '--scenario', 'entangled',
         '--dt', '0.01']
    )

    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'alpha,death_start,revival_end,dark_duration'
    assert len(lines) == 23
    assert lines[1] == '0,,,'
    assert lines[-1].startswith('# alpha_threshold,')


@pytest.mark.parametrize('argv', [
    [],
    ['evolve', '--bogus'],
    ['evolve'],
    ['evolve'] + DIRECT + ['--t-max', '0'],
    ['evolve'] + DIRECT + ['--unit', 'ms'],
    ['scan'] + DIRECT,
    ['rates'] + DIRECT,
    ['evolve', '--config', 'tests/data/config_missing.yaml'],
])
def test_main_usage_errors(argv):
    assert run_main(argv) == EXIT_USAGE


def test_main_validate():
    passing = [CheckResult('fixtures', True, 'ok')]
    failing = passing + [CheckResult('thresholds', False, 'bad')]

    with mock.patch('soliton_discord.cli.run_checks',
                    return_value=passing):
        assert run_main(['validate', '--quick']) == EXIT_OK

    with mock.patch('soliton_discord.cli.run_checks',
                    return_value=failing):
        assert run_main(['validate']) == EXIT_VALIDATION


def test_main_validate_json(capsys):
    results = [
        CheckResult('fixtures', True, 'ok'),
        CheckResult('timescale', False, 'late', warning_only=True),
    ]

    with mock.patch('soliton_discord.cli.run_checks',
                    return_value=results) as run_checks:
        assert run_main(['validate', '--json', '--quick']) == EXIT_OK

    assert run_checks.call_args[0][1].quick
    document = json.loads(capsys.readouterr().out)
    assert document['passed'] is True
    assert [check['status'] for check in document['checks']] == \
        ['PASS', 'WARN']


@pytest.mark.parametrize('error,expected', [
    (UnsupportedStateError(['rho_es']), EXIT_UNSUPPORTED_STATE),
    (NoResonanceError(-1.0), EXIT_DOMAIN),
    (ConfigError('Mock failure'), EXIT_USAGE),
    (Exception('Mock failure'), EXIT_VALIDATION),
    (KeyboardInterrupt('Mock Ctrl-C'), EXIT_OK),
    (SystemExit(99), 99),
])
def test_main_error_handling(error, expected):
    with mock.patch(
        'soliton_discord.cli.time_series',
        side_effect=error
    ):
        assert run_main(['evolve'] + DIRECT) == expected


def test_main_evolve_physical_with_overrides(tmp_path, data_dir):
    physical = tmp_path / 'physical.csv'
    direct = tmp_path / 'direct.csv'
    window = ['--t-max', '2', '--dt', '0.5']

    assert run_main(
        ['evolve', '--config', str(data_dir / 'config_physical.yaml'),
         '--Gamma', '-0.3', '--eta', '0.5', '--out', str(physical)] + window
    ) == EXIT_OK
    assert run_main(
        ['evolve', '--gamma', '1', '--Gamma', '-0.3', '--eta', '0.5',
         '--out', str(direct)] + window
    ) == EXIT_OK
    assert physical.read_bytes() == direct.read_bytes()

    assert run_main(
        ['evolve', '--config', str(data_dir / 'config_physical.yaml'),
         '--Gamma', '-0.3', '--unit', 'ms', '--t-max', '1', '--dt', '0.5',
         '--out', str(tmp_path / 'ms.csv')]
    ) == EXIT_OK


def test_main_evolve_long_times(tmp_path):
    out = tmp_path / 'long.csv'
    code = run_main(
        ['evolve'] + DIRECT + ['--t-max', '800', '--dt', '400',
                               '--out', str(out)]
    )

    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert 'nan' not in out.read_text()

    last = lines[-1].split(',')
    assert last[0] == '800'
    assert last[4] == '1'
    assert last[-1] == '0'


def test_main_evolve_is_reproducible(tmp_path):
    outputs = []
    for name in ('first.csv', 'second.csv'):
        out = tmp_path / name
        assert run_main(
            ['evolve'] + DIRECT + ['--scenario', 'mixed', '--alpha', '0.4',
                                   '--t-max', '3', '--dt', '0.1',
                                   '--out', str(out)]
        ) == EXIT_OK
        outputs.append(out.read_bytes())

    assert outputs[0] == outputs[1]
