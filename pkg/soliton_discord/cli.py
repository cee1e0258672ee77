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

"""Command line front end for soliton-discord."""

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
import traceback

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pluggy
import yaml

from soliton_discord import (
    hookimpls,
    hookspecs,
    mode_hookspecs,
    plane_wave_modes
)
from soliton_discord.becphys import (
    BecParams,
    RateSet,
    derive_params,
    rates
)
from soliton_discord.config import Config
from soliton_discord.correlations import MIN_GRID_N
from soliton_discord.exceptions import (
    ConfigError,
    DomainError,
    SolitonDiscordException,
    UnsupportedStateError
)
from soliton_discord.scenarios import (
    SCENARIOS,
    ScenarioConfig,
    TimeSeriesRecord,
    crossing_times,
    onset_time,
    sudden_death_scan,
    time_series
)
from soliton_discord.utils import (
    emit,
    format_value,
    json_value,
    rows_to_csv,
    rows_to_json,
    time_grid
)
from soliton_discord.validation import ValidationSettings, run_checks

LOGGER_NAME = 'SolitonDiscord'
LOGGING_FORMAT = '%(asctime)s.%(msecs)03d|%(levelname)s|%(name)s|%(message)s'
LOGGING_DATE_FMT = '%Y-%m-%dT%H:%M:%S'
CONFIG_ENV = 'SOLITON_DISCORD_CONFIG_FILE'

PHYSICAL_KEYS = ('g', 'chi', 'M', 'm', 'n0', 'quant_length')
RATE_KEYS = ('gamma', 'Gamma', 'eta')
UNITS = ('dimensionless', 'ms')
OVERRIDE_KEYS = (
    'gamma', 'Gamma', 'eta', 'd', 'scenario', 'alpha', 't_max', 'dt', 'unit'
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DOMAIN = 2
EXIT_UNSUPPORTED_STATE = 3
EXIT_USAGE = 64

RATES_FIELDS = ('d', 'Gamma_over_gamma', 'eta_over_gamma')
SCAN_FIELDS = ('alpha', 'death_start', 'revival_end', 'dark_duration')
PARAMS_FIELDS = ('name', 'value')


def get_plugin_manager() -> pluggy.PluginManager:
    """
    Creates a PluginManager instance for 'soliton_discord', registering
    the core defaults and the plane wave mode provider before any
    installed plugins.

    :return: Return a configured pluggy.PluginManager instance
    """
    pm = pluggy.PluginManager('soliton_discord')
    pm.add_hookspecs(hookspecs)
    pm.add_hookspecs(mode_hookspecs)
    pm.register(hookimpls)
    pm.register(plane_wave_modes)
    pm.load_setuptools_entrypoints('soliton_discord')
    return pm


def setup_logging() -> logging.Logger:
    """Setup basic logging"""
    logging.basicConfig(
        format=LOGGING_FORMAT,
        datefmt=LOGGING_DATE_FMT
    )
    log = logging.getLogger(LOGGER_NAME)
    log.setLevel(logging.INFO)
    logging.Formatter.converter = time.gmtime
    log.debug(f"{LOGGER_NAME} logging setup complete")
    return log


def get_config(config_path, hook, log: logging.Logger) -> Config:
    """Load the specified config file, or the plugin defaults alone."""
    if config_path:
        try:
            config = Config.load_from_file(config_path, hook)
        except OSError as error:
            raise ConfigError(
                f'Unable to read config file {config_path}: {error}'
            ) from error
        except (ValueError, yaml.YAMLError) as error:
            raise ConfigError(
                f'Invalid config file {config_path}: {error}'
            ) from error
    else:
        config = Config(Config.load_defaults({}, hook))

    log.debug("Config loaded: %s", config)
    return config


def update_logger_from_config(config: Config, log: logging.Logger):
    """Update the logger based on configuration file options."""
    current_level = log.getEffectiveLevel()
    log.setLevel(config.get('logging', {}).get('level', current_level))

    if current_level != log.getEffectiveLevel():
        log.info(
            f"{LOGGER_NAME} logging level updated to {log.getEffectiveLevel()}"
        )


def _number(config: Config, key: str, kind=float):
    value = config.get(key)
    if isinstance(value, bool):
        raise ConfigError(f'Setting {key} must be numeric, got {value!r}')
    try:
        return kind(value)
    except (TypeError, ValueError) as error:
        raise ConfigError(
            f'Setting {key} must be numeric, got {value!r}'
        ) from error


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings derived from a Config."""
    params: Optional[BecParams]
    direct_rates: Optional[RateSet]
    rate_overrides: Dict[str, float]
    scenario: str
    alpha: float
    d: float
    t_max: float
    dt: float
    unit: str
    d_min: float
    d_max: float
    d_count: int
    alpha_min: float
    alpha_max: float
    alpha_count: int
    scan_t_max: float
    zero_threshold: float
    grid_n: int
    rank_tolerance: float
    c2_prefactor: float
    vn: bool
    random_states: int
    seed: int

    @classmethod
    def from_config(cls, config: Config) -> 'RunConfig':
        """
        Validate config, which carries either the physical parameter set
        or the direct rates. With physical parameters, Gamma and eta may
        still be given; they replace the computed ratios to gamma.

        :raises ConfigError: for any invalid setting.
        """
        physical = [key for key in PHYSICAL_KEYS if key in config]
        direct = [key for key in ('gamma', 'Gamma') if key in config]
        if physical and 'gamma' in config:
            raise ConfigError(
                'gamma is fixed by the physical parameters, not both; '
                'only Gamma and eta may be overridden'
            )

        params = None
        overrides = {}
        if physical:
            missing = sorted(set(PHYSICAL_KEYS) - set(physical))
            if missing:
                raise ConfigError(
                    f'Missing physical parameters: {", ".join(missing)}'
                )
            params = BecParams(
                **{key: _number(config, key) for key in PHYSICAL_KEYS}
            )
            overrides = {
                field: _number(config, key)
                for key, field in (('Gamma', 'big_gamma'), ('eta', 'eta'))
                if key in config
            }

        direct_rates = None
        if not physical and (direct or 'eta' in config):
            if len(direct) != 2:
                raise ConfigError('Direct rates need both gamma and Gamma')
            direct_rates = RateSet(
                _number(config, 'gamma'),
                _number(config, 'Gamma'),
                _number(config, 'eta') if 'eta' in config else 0.0
            )

        run = cls(
            params=params,
            direct_rates=direct_rates,
            rate_overrides=overrides,
            scenario=config.get('scenario'),
            alpha=_number(config, 'alpha'),
            d=_number(config, 'd'),
            t_max=_number(config, 't_max'),
            dt=_number(config, 'dt'),
            unit=config.get('unit'),
            d_min=_number(config, 'd_min'),
            d_max=_number(config, 'd_max'),
            d_count=_number(config, 'd_count', int),
            alpha_min=_number(config, 'alpha_min'),
            alpha_max=_number(config, 'alpha_max'),
            alpha_count=_number(config, 'alpha_count', int),
            scan_t_max=_number(config, 'scan_t_max'),
            zero_threshold=_number(config, 'zero_threshold'),
            grid_n=_number(config, 'grid_n', int),
            rank_tolerance=_number(config, 'rank_tolerance'),
            c2_prefactor=_number(config, 'c2_prefactor'),
            vn=bool(config.get('vn')),
            random_states=_number(config, 'random_states', int),
            seed=_number(config, 'seed', int)
        )
        run.check()
        return run

    def check(self):
        problems = []
        if self.scenario not in SCENARIOS:
            problems.append(f'unknown scenario {self.scenario!r}')
        if self.unit not in UNITS:
            problems.append(f'unit must be one of {", ".join(UNITS)}')
        if self.unit == 'ms' and self.params is None:
            problems.append('unit ms requires physical parameters')
        if not 0.0 <= self.alpha <= 1.0:
            problems.append('alpha must lie in [0, 1]')
        for name in ('t_max', 'dt', 'scan_t_max', 'zero_threshold'):
            if not getattr(self, name) > 0:
                problems.append(f'{name} must be positive')
        if self.d_count < 1 or self.alpha_count < 1:
            problems.append('grid counts must be at least 1')
        if self.d_min < 0 or self.d_max < self.d_min:
            problems.append('need 0 <= d_min <= d_max')
        if not 0.0 <= self.alpha_min <= self.alpha_max <= 1.0:
            problems.append('need 0 <= alpha_min <= alpha_max <= 1')
        if self.grid_n < MIN_GRID_N:
            problems.append(f'grid_n must be at least {MIN_GRID_N}')
        if self.random_states < 1:
            problems.append('random_states must be at least 1')
        if problems:
            raise ConfigError('Invalid configuration: ' + '; '.join(problems))

    def require_physical(self, command: str) -> BecParams:
        if self.params is None:
            raise ConfigError(f'{command} requires physical parameters')
        return self.params


@dataclass(frozen=True)
class RateContext:
    """Rates driving a run and the SI gamma used for ms conversion."""
    rates: RateSet
    gamma_si: Optional[float] = None

    def to_reduced(self, t: float, unit: str) -> float:
        return t * 1e-3 * self.gamma_si if unit == 'ms' else t

    def from_reduced(self, t: float, unit: str) -> float:
        return t * 1e3 / self.gamma_si if unit == 'ms' else t


def resolve_rates(run: RunConfig, hook) -> RateContext:
    """
    Direct rates as given, or physical rates at d normalized to gamma
    with any Gamma/eta overrides applied as ratios to gamma.
    """
    if run.direct_rates is not None:
        return RateContext(run.direct_rates)
    if run.params is None:
        raise ConfigError(
            'Supply physical parameters or direct rates (--gamma, --Gamma)'
        )

    derived = derive_params(run.params)
    physical = rates(run.d * derived.xi, derived, run.params, hook)
    log = logging.getLogger(LOGGER_NAME)
    log.info(
        "Rates at d=%g xi: gamma=%.6g 1/s, Gamma/gamma=%.6g, eta/gamma=%.6g",
        run.d,
        physical.gamma,
        physical.big_gamma / physical.gamma,
        physical.eta / physical.gamma
    )
    reduced = physical.normalized()
    if run.rate_overrides:
        log.info("Overriding computed rates with %s", run.rate_overrides)
        reduced = dataclasses.replace(reduced, **run.rate_overrides)
    return RateContext(reduced, physical.gamma)


def _render(fields, rows, as_json: bool, **extra) -> str:
    if as_json:
        return rows_to_json(fields, rows, **extra)
    return rows_to_csv(fields, rows)


def cmd_rates(run: RunConfig, hook, args) -> int:
    """Gamma(d)/gamma and eta(d)/gamma over the separation grid."""
    params = run.require_physical('rates')
    derived = derive_params(params)

    rows = []
    for d in np.linspace(run.d_min, run.d_max, run.d_count):
        r = rates(d * derived.xi, derived, params, hook)
        rows.append({
            'd': float(d),
            'Gamma_over_gamma': r.big_gamma / r.gamma,
            'eta_over_gamma': r.eta / r.gamma,
        })

    emit(_render(RATES_FIELDS, rows, args.json), args.out)
    return EXIT_OK


def cmd_evolve(run: RunConfig, hook, args) -> int:
    """Time series of populations and correlations for the scenario."""
    context = resolve_rates(run, hook)
    grid = time_grid(run.t_max, run.dt)
    cfg = ScenarioConfig(
        run.scenario,
        run.alpha,
        context.rates,
        tuple(context.to_reduced(t, run.unit) for t in grid)
    )
    records = time_series(
        cfg, run.vn, run.grid_n, run.c2_prefactor, run.rank_tolerance
    )

    log = logging.getLogger(LOGGER_NAME)
    onset = onset_time(records)
    if onset is not None:
        log.info("Q onset at t=%g %s", context.from_reduced(
            onset, run.unit), run.unit)
    for crossing in crossing_times(records):
        log.info("Q crosses the concurrence at t=%g %s",
                 context.from_reduced(crossing, run.unit), run.unit)

    rows = []
    for t, record in zip(grid, records):
        row = record.as_dict()
        row['t'] = t
        rows.append(row)

    emit(
        _render(
            TimeSeriesRecord.FIELDS, rows, args.json,
            scenario=run.scenario, alpha=run.alpha, unit=run.unit
        ),
        args.out
    )
    return EXIT_OK


def cmd_scan(run: RunConfig, hook, args) -> int:
    """Sudden death windows of Q(t) over the alpha grid."""
    if run.scenario not in ('entangled', 'mixed'):
        raise ConfigError('scan requires the entangled or mixed scenario')

    context = resolve_rates(run, hook)
    scan = sudden_death_scan(
        run.scenario,
        context.rates,
        np.linspace(run.alpha_min, run.alpha_max, run.alpha_count),
        context.to_reduced(run.scan_t_max, run.unit),
        context.to_reduced(run.dt, run.unit),
        run.zero_threshold,
        run.c2_prefactor,
        run.rank_tolerance
    )

    rows = []
    for row in scan.rows:
        entry = {'alpha': row.alpha}
        if row.windows:
            start, end = row.windows[0]
            entry.update(
                death_start=context.from_reduced(start, run.unit),
                revival_end=context.from_reduced(end, run.unit),
                dark_duration=context.from_reduced(
                    row.dark_duration, run.unit
                )
            )
        rows.append(entry)

    threshold = scan.threshold_alpha
    if args.json:
        text = rows_to_json(
            SCAN_FIELDS, rows,
            scenario=run.scenario, unit=run.unit, alpha_threshold=threshold
        )
    else:
        summary = '' if threshold is None else format_value(threshold)
        text = rows_to_csv(SCAN_FIELDS, rows) \
            + f'# alpha_threshold,{summary}\n'
    emit(text, args.out)
    return EXIT_OK


def cmd_params(run: RunConfig, hook, args) -> int:
    """Derived parameters of the physical configuration."""
    derived = derive_params(run.require_physical('params'))
    rows = [
        {'name': name, 'value': value}
        for name, value in dataclasses.asdict(derived).items()
    ]
    emit(_render(PARAMS_FIELDS, rows, args.json), args.out)
    return EXIT_OK


def cmd_validate(run: RunConfig, hook, args) -> int:
    """Run the acceptance checks; exit status 1 if any check fails."""
    settings = ValidationSettings(
        random_states=run.random_states,
        seed=run.seed,
        grid_n=run.grid_n,
        quick=args.quick
    )
    results = run_checks(hook, settings)
    passed = not any(result.failed for result in results)

    if args.json:
        text = json.dumps({
            'passed': passed,
            'checks': [
                dict(
                    {key: json_value(val) for key, val
                     in dataclasses.asdict(result).items()},
                    status=result.status
                )
                for result in results
            ],
        }, indent=2, sort_keys=True) + '\n'
    else:
        width = max(len(result.name) for result in results)
        text = ''.join(
            f'{result.status:<4}  {result.name:<{width}}  {result.detail}\n'
            for result in results
        )
    emit(text, args.out)
    return EXIT_OK if passed else EXIT_VALIDATION


class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser reporting usage errors as ConfigError."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(
        prog='soliton-discord',
        description='Quantum correlations of two dark soliton qubits.'
    )
    parser.add_argument('--version', action='store_true',
                        help='Print the versions of all loaded plugins.')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='Enable debug logging.')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML configuration file.')
    common.add_argument('--gamma', type=float, help='Single qubit decay.')
    common.add_argument('--Gamma', type=float,
                        help='Collective damping (ratio to gamma when '
                             'physical parameters are given).')
    common.add_argument('--eta', type=float,
                        help='Coherent coupling (ratio to gamma when '
                             'physical parameters are given).')
    common.add_argument('--d', type=float, help='Separation in units of xi.')
    common.add_argument('--scenario', choices=SCENARIOS)
    common.add_argument('--alpha', type=float, help='State parameter.')
    common.add_argument('--t-max', dest='t_max', type=float)
    common.add_argument('--dt', type=float)
    common.add_argument('--unit', choices=UNITS)
    common.add_argument('--out', help='Output path, stdout if omitted.')
    common.add_argument('--json', action='store_true',
                        help='Emit JSON instead of CSV.')

    sub = parser.add_subparsers(dest='command')
    commands = (
        ('rates', cmd_rates, 'Collective rates versus separation.'),
        ('evolve', cmd_evolve, 'Scenario time series.'),
        ('scan', cmd_scan, 'Sudden death scan over alpha.'),
        ('params', cmd_params, 'Derived physical parameters.'),
        ('validate', cmd_validate, 'Run the acceptance checks.'),
    )
    for name, func, help_text in commands:
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.set_defaults(func=func)
        if name == 'validate':
            command.add_argument('--quick', action='store_true',
                                 help='Use reduced sample sizes.')
    return parser


def print_versions(hook):
    for name, version in sorted(hook.get_version()):
        print(f'{name} {version}')


def main(argv=None) -> None:
    """
    Main routine, parsing the command line and running one command.
    """
    pm = get_plugin_manager()

    try:
        log = setup_logging()
        args = build_parser().parse_args(argv)

        if args.version:
            print_versions(pm.hook)
            sys.exit(EXIT_OK)

        if args.command is None:
            raise ConfigError('A command is required')

        config = get_config(
            args.config or os.environ.get(CONFIG_ENV),
            pm.hook,
            log
        )
        update_logger_from_config(config, log)
        if args.verbose:
            log.setLevel(logging.DEBUG)

        config = config.merged(
            {key: getattr(args, key, None) for key in OVERRIDE_KEYS}
        )
        run = RunConfig.from_config(config)

        log.info("Running %s", args.command)
        sys.exit(args.func(run, pm.hook, args))
    except KeyboardInterrupt:
        sys.exit(EXIT_OK)
    except SystemExit:
        raise
    except ConfigError as e:
        log.error('Usage error: {0}'.format(e))
        sys.exit(EXIT_USAGE)
    except UnsupportedStateError as e:
        log.error('Unsupported initial state: {0}'.format(e))
        sys.exit(EXIT_UNSUPPORTED_STATE)
    except DomainError as e:
        log.error('Physics domain error: {0}'.format(e))
        sys.exit(EXIT_DOMAIN)
    except SolitonDiscordException as e:
        log.error('Soliton discord error: {0}'.format(e))
        traceback.print_exc()
        sys.exit(EXIT_DOMAIN)
    except Exception as e:
        # exception we did no expect, show python backtrace
        log.error('Unexpected error: {0}'.format(e))
        traceback.print_exc()
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()  # pragma: no cover
