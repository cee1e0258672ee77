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
# Unit tests for the soliton_discord.validation acceptance suite
#

import pytest

from soliton_discord.exceptions import NumericalError
from soliton_discord.validation import (
    CHECKS,
    CheckResult,
    ValidationSettings,
    check_entangled_mixed,
    check_case_a,
    check_dynamics_oracle,
    check_fixtures,
    check_population_ordering,
    check_rate_structure,
    check_special_functions,
    run_checks
)

QUICK = ValidationSettings(quick=True)


def test_check_result_status():
    assert CheckResult('a', True, '').status == 'PASS'

    warning = CheckResult('b', False, '', warning_only=True)
    assert warning.status == 'WARN'
    assert not warning.failed

    failure = CheckResult('c', False, '')
    assert failure.status == 'FAIL'
    assert failure.failed


def test_settings_times():
    assert len(QUICK.times) == 11
    assert len(ValidationSettings().times) == 50
    assert QUICK.times[0] == pytest.approx(0.01)
    assert QUICK.times[-1] == pytest.approx(5.0)


@pytest.mark.parametrize('check', [
    check_fixtures,
    check_special_functions,
    check_population_ordering,
    check_case_a,
    check_entangled_mixed,
    check_dynamics_oracle,
])
def test_numerical_checks_pass(sd_pm, check):
    result = check(sd_pm.hook, QUICK)

    assert result.passed, result.detail


def test_check_rate_structure(sd_pm):
    result = check_rate_structure(sd_pm.hook, QUICK)

    assert result.passed, result.detail
    assert 'Gamma(2.5 xi)/gamma = -0.' in result.detail


def test_run_checks_records_errors(sd_pm, sd_log, caplog):
    def check_broken(hook, settings):
        raise NumericalError('Mock failure')

    def check_soft(hook, settings):
        return CheckResult('soft', False, 'outside window',
                           warning_only=True)

    results = run_checks(
        sd_pm.hook, QUICK, checks=(check_fixtures, check_broken, check_soft)
    )

    assert [result.status for result in results] == ['PASS', 'FAIL', 'WARN']
    assert results[1].name == 'broken'
    assert results[1].detail == 'NumericalError: Mock failure'
    assert 'Check broken failed' in caplog.text
    assert 'Check soft: outside window' in caplog.text
    assert 'Running check_fixtures' in caplog.text


def test_check_list():
    assert len(CHECKS) == 10
    assert len(set(CHECKS)) == 10
