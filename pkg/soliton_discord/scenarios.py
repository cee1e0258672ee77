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
Initial state case studies for the two qubit system: superposition of
the single excitation Dicke states, the entangled e/g superposition and
the diagonal mixed state.

Every case evaluates its closed form correlations twice, once in the
reconciled form derived from the master equation solution and once as
transcribed term by term from the published expressions, so that both
can be compared against the generic pipeline evolve -> purify ->
extract channel -> L matrix.
"""

import logging
import math

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from soliton_discord.becphys import RateSet
from soliton_discord.correlations import (
    C2_PREFACTOR,
    RANK_TOLERANCE,
    classical_correlation_c2,
    clamp_zero,
    concurrence,
    mutual_information,
    vn_discord
)
from soliton_discord.dynamics import (
    DickeState,
    dicke_populations,
    evolve_closed_form,
    to_product
)
from soliton_discord.exceptions import (
    AuxDerivationError,
    ConfigError,
    DegenerateDenominatorError,
    NumericalError,
    UnsupportedRegimeError
)
from soliton_discord.qlinalg import ENTROPY_CUTOFF, DensityMatrix, projector

log = logging.getLogger('SolitonDiscord')

SCENARIOS = ('superposition', 'entangled', 'mixed')
ZERO_THRESHOLD = 1e-6
AGREEMENT_TOLERANCE = 1e-6
DISCREPANCY_TOLERANCE = 1e-4
AUX_TOLERANCE = 1e-10
SUM_TOLERANCE = 1e-10
NEGATIVE_TOLERANCE = 1e-12
EXP_LIMIT = 700.0


@dataclass(frozen=True)
class ScenarioConfig:
    """A scenario kind, its state parameter, rates and sample times."""
    kind: str
    alpha: float
    rates: RateSet
    t_grid: Tuple[float, ...]

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ConfigError(
                f'Unknown scenario {self.kind!r}, '
                f'expected one of {", ".join(SCENARIOS)}'
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f'alpha must lie in [0, 1], got {self.alpha}')

        grid = tuple(float(t) for t in self.t_grid)
        if not grid:
            raise ConfigError('The time grid is empty')
        if grid[0] < 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError(
                'The time grid must be non-negative and strictly increasing'
            )
        object.__setattr__(self, 't_grid', grid)


@dataclass(frozen=True)
class CaseAScalars:
    kappa_plus: float
    kappa_minus: float
    beta_plus: float
    beta_minus: float
    xi_plus: float
    xi_minus: float
    zeta: Tuple[float, float, float, float]


@dataclass(frozen=True)
class AuxScalars:
    """
    delta_aux and z_aux are the combinations entering the entangled and
    mixed state closed forms;
    w_aux = 2 gamma Gamma Z - (gamma^2 + Gamma^2) sinh(Gamma t).

    The damped_* fields carry the same scalars times e^{-gamma t}; they
    stay finite at any time while the plain ones saturate to +-inf.
    """
    delta_aux: float
    z_aux: float
    w_aux: float
    damped_delta: float = 0.0
    damped_w: float = 0.0


@dataclass(frozen=True)
class CaseResult:
    """Reconciled and as printed closed form correlations at time t."""
    kind: str
    t: float
    c2: float
    q: float
    printed_c2: float
    printed_q: float
    zeta: Tuple[float, ...]
    scalars: Optional[CaseAScalars] = None


@dataclass(frozen=True)
class FormulaDiscrepancy:
    scenario: str
    quantity: str
    time: float
    closed: float
    pipeline: float
    residual: float


@dataclass(frozen=True)
class TimeSeriesRecord:
    """One row of a scenario time series."""
    t: float
    rho_ee: float
    rho_ss: float
    rho_aa: float
    rho_gg: float
    concurrence: float
    c2_closed: float
    c2_pipeline: float
    q_closed: float
    q_pipeline: float
    q_vn: Optional[float] = None
    flag: bool = False

    FIELDS = (
        't', 'rho_ee', 'rho_ss', 'rho_aa', 'rho_gg', 'concurrence',
        'c2_closed', 'c2_pipeline', 'q_closed', 'q_pipeline', 'q_vn', 'flag'
    )

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


@dataclass(frozen=True)
class DeathScanRow:
    """Death windows (death time, revival time) of Q(t) for one alpha."""
    alpha: float
    windows: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    @property
    def dark_duration(self) -> Optional[float]:
        if not self.windows:
            return None
        start, end = self.windows[0]
        return end - start


@dataclass(frozen=True)
class DeathScan:
    kind: str
    rows: Tuple[DeathScanRow, ...]

    @property
    def threshold_alpha(self) -> Optional[float]:
        """Smallest alpha showing a death and revival window."""
        for row in sorted(self.rows, key=lambda row: row.alpha):
            if row.windows:
                return row.alpha
        return None


def _xlog2x(value: float) -> float:
    # NaN flags a negative argument, which only the printed forms produce
    if value > ENTROPY_CUTOFF:
        return value * math.log2(value)
    if value > -NEGATIVE_TOLERANCE:
        return 0.0
    return float('nan')


def _binary_entropy(value: float) -> float:
    return -(_xlog2x(value) + _xlog2x(1.0 - value))


def _entropy(values) -> float:
    return -sum(_xlog2x(value) for value in values)


def _safe_sqrt(value: float) -> float:
    return math.sqrt(value) if value >= 0 else float('nan')


def _damped_cosh(r: RateSet, t: float) -> float:
    # e^{-gamma t} cosh(Gamma t), finite for every t since |Gamma| < gamma
    return 0.5 * (
        math.exp((r.big_gamma - r.gamma) * t)
        + math.exp(-(r.big_gamma + r.gamma) * t)
    )


def _damped_sinh(r: RateSet, t: float) -> float:
    return 0.5 * (
        math.exp((r.big_gamma - r.gamma) * t)
        - math.exp(-(r.big_gamma + r.gamma) * t)
    )


def _saturating_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _saturating_cosh(x: float) -> float:
    try:
        return math.cosh(x)
    except OverflowError:
        return math.inf


def _check_sum(values, where: str):
    total = sum(values)
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise NumericalError(
            f'{where} eigenvalues sum to {total!r} instead of 1'
        )


def _check_regime(r: RateSet):
    if not abs(r.big_gamma) < r.gamma:
        raise UnsupportedRegimeError(r.gamma, r.big_gamma)


def initial_state(cfg: ScenarioConfig) -> DickeState:
    """Initial Dicke basis state of the configured scenario."""
    alpha = cfg.alpha
    if cfg.kind == 'superposition':
        mat = projector([0, math.sqrt(0.5), math.sqrt(0.5), 0])
    elif cfg.kind == 'entangled':
        mat = projector([math.sqrt(alpha), 0, 0, math.sqrt(1.0 - alpha)])
    else:
        mat = np.diag([alpha, 2.0, 0.0, 1.0 - alpha]).astype(complex) / 3.0
    return DickeState(DensityMatrix(mat))


def case_a_scalars(t: float, r: RateSet) -> CaseAScalars:
    decay = math.exp(-r.gamma * t)
    cos_t = math.cos(2 * r.eta * t)
    cosh_t = _saturating_cosh(r.big_gamma * t)
    excited = _damped_cosh(r, t)
    beta_plus = 0.5 * (excited + decay * cos_t)
    beta_minus = 0.5 * (excited - decay * cos_t)

    zeta = (0.0, 1.0 - excited, excited, 0.0)
    _check_sum(zeta, 'Superposition state')
    return CaseAScalars(
        kappa_plus=cosh_t + cos_t,
        kappa_minus=cosh_t - cos_t,
        beta_plus=beta_plus,
        beta_minus=beta_minus,
        xi_plus=1.0 - beta_minus,
        xi_minus=1.0 - beta_plus,
        zeta=zeta
    )


def caseA_correlations(t: float, r: RateSet,
                       prefactor: float = C2_PREFACTOR,
                       rank_tolerance: float = RANK_TOLERANCE) -> CaseResult:
    """
    Closed form C2 and Q for the (|s> + |a>)/sqrt(2) initial state.

    rho_B = diag(beta_-, 1 - beta_-), so C2 falls back to zero while
    beta_- is below rank_tolerance, which covers the t = 0 limit.
    Every kappa term is evaluated times e^{-gamma t}, where
    kappa_- e^{-gamma t} = 2 beta_- and kappa_+ e^{-gamma t} = 2 beta_+.

    :raises DegenerateDenominatorError: if kappa_-(2e^{gamma t} - kappa_-)
        is negative.
    """
    _check_regime(r)
    sc = case_a_scalars(t, r)
    decay = math.exp(-r.gamma * t)
    # kappa_-(2e^{gamma t} - kappa_-) e^{-2 gamma t}
    denominator = 4.0 * sc.beta_minus * (1.0 - sc.beta_minus)
    if denominator < 0:
        raise DegenerateDenominatorError(
            f'Case A denominator {denominator!r} is negative at t={t}'
        )

    sinh_d = _damped_sinh(r, t)
    sin_d = decay * math.sin(2 * r.eta * t)
    degenerate = min(sc.beta_minus, 1.0 - sc.beta_minus) < rank_tolerance

    if degenerate:
        c2 = printed_c2 = 0.0
    else:
        l33 = sc.beta_plus / (sc.beta_minus - 1.0)
        s2 = 4.0 * sc.beta_minus * (1.0 - sc.beta_minus)
        c2 = prefactor * s2 * max(
            (sinh_d ** 2 + sin_d ** 2) / denominator, l33 ** 2
        )

        printed_s2 = 2.0 * sc.beta_minus * (2.0 + 2.0 * sc.beta_minus)
        root = math.sqrt(denominator)
        l11 = -2.0 * sinh_d / root
        l22 = 2j * sin_d / root
        printed_c2 = prefactor * printed_s2 * max(
            l11 ** 2, (l22 ** 2).real, l33 ** 2
        )

    marginals = _binary_entropy(sc.beta_plus) \
        + _binary_entropy(sc.beta_minus)
    q = clamp_zero(marginals - _entropy(sc.zeta) - c2)

    spread = _safe_sqrt(
        decay ** 2 * math.cos(4 * r.eta * t) + sinh_d ** 2
    )
    printed_zeta = (
        0.0,
        sc.zeta[1],
        0.5 * (sc.zeta[2] + spread),
        0.5 * (sc.zeta[2] - spread),
    )
    printed_q = -sum(
        _xlog2x(value) for value in (
            sc.beta_plus, sc.beta_minus, sc.xi_plus, sc.xi_minus
        )
    ) - _entropy(printed_zeta) - printed_c2

    return CaseResult('superposition', t, c2, q, printed_c2, printed_q,
                      sc.zeta, sc)


def derive_aux_scalars(r: RateSet, t: float,
                       check: bool = True) -> AuxScalars:
    """
    Auxiliary scalars Z = cosh(Gamma t) - e^{-gamma t} and
    delta = (gamma^2 + Gamma^2) Z - 2 gamma Gamma sinh(Gamma t).

    With check set, both are verified against the closed form
    evolution of |e><e|, whose populations obey
    rho_ss + rho_aa = 2 e^{-gamma t} delta / (gamma^2 - Gamma^2) and
    rho_ss - rho_aa = 2 e^{-gamma t} w / (gamma^2 - Gamma^2).

    :raises AuxDerivationError: if an identity is violated by more
        than 1e-10.
    """
    _check_regime(r)
    gamma, big_gamma = r.gamma, r.big_gamma
    sum_sq = gamma ** 2 + big_gamma ** 2
    cross = 2 * gamma * big_gamma
    decay = math.exp(-gamma * t)

    damped_z = _damped_cosh(r, t) - decay ** 2
    damped_sinh = _damped_sinh(r, t)
    damped_delta = sum_sq * damped_z - cross * damped_sinh
    damped_w = cross * damped_z - sum_sq * damped_sinh

    if abs(big_gamma * t) < EXP_LIMIT:
        z_aux = math.cosh(big_gamma * t) - decay
        sinh_t = math.sinh(big_gamma * t)
        delta_aux = sum_sq * z_aux - cross * sinh_t
        w_aux = cross * z_aux - sum_sq * sinh_t
    else:
        # only one of e^{+-Gamma t} saturates, so no inf - inf appears
        up = _saturating_exp(big_gamma * t)
        down = _saturating_exp(-big_gamma * t)
        ahead = (gamma - big_gamma) ** 2
        behind = (gamma + big_gamma) ** 2
        z_aux = 0.5 * (up + down) - decay
        delta_aux = 0.5 * (ahead * up + behind * down) - sum_sq * decay
        w_aux = 0.5 * (behind * down - ahead * up) - cross * decay

    aux = AuxScalars(
        delta_aux=delta_aux,
        z_aux=z_aux,
        w_aux=w_aux,
        damped_delta=damped_delta,
        damped_w=damped_w
    )

    if check:
        excited = DickeState(DensityMatrix(projector([1, 0, 0, 0])))
        _, ss, aa, _ = dicke_populations(evolve_closed_form(excited, r, t))
        scale = 2.0 / (gamma ** 2 - big_gamma ** 2)
        identities = (
            ('rho_ss + rho_aa', ss + aa - scale * damped_delta),
            ('rho_ss - rho_aa', ss - aa - scale * damped_w),
        )
        for identity, residual in identities:
            if abs(residual) > AUX_TOLERANCE:
                raise AuxDerivationError(identity, abs(residual))
    return aux


def _x_state_correlations(a, p, w, d, z, prefactor, rank_tolerance):
    """
    C2, Q and eigenvalues for states whose only coherences are
    rho(ee, gg) = z and rho(eg, ge) = w, with rho(eg, eg) = rho(ge, ge) = p.
    """
    p_b = a + p
    q_b = 1.0 - p_b
    if min(p_b, q_b) < rank_tolerance:
        c2 = 0.0
    else:
        norm = p_b * q_b
        squares = (
            (z + w) ** 2 / norm,
            (z - w) ** 2 / norm,
            ((a * d - p ** 2) / norm) ** 2,
        )
        c2 = prefactor * 4.0 * norm * max(squares)

    radius = math.sqrt((a - d) ** 2 + 4.0 * z ** 2)
    zeta = (
        0.5 * (a + d + radius),
        0.5 * (a + d - radius),
        p + w,
        p - w,
    )
    q = clamp_zero(2.0 * _binary_entropy(p_b) - _entropy(zeta) - c2)
    return c2, q, zeta


def caseB_correlations(t: float, r: RateSet, alpha: float,
                       prefactor: float = C2_PREFACTOR,
                       rank_tolerance: float = RANK_TOLERANCE,
                       check: bool = True) -> CaseResult:
    """
    Closed form C2 and Q for sqrt(alpha)|e> + sqrt(1 - alpha)|g>.

    The printed expressions are evaluated after multiplying each
    factor carrying e^{gamma t} by e^{-gamma t}.
    """
    aux = derive_aux_scalars(r, t, check)
    gamma, big_gamma = r.gamma, r.big_gamma
    e2 = gamma ** 2 - big_gamma ** 2
    decay = math.exp(-gamma * t)
    delta = aux.damped_delta

    a = alpha * decay ** 2
    p = alpha * delta / e2
    w = alpha * aux.damped_w / e2
    coherence = math.sqrt(alpha * (1.0 - alpha)) * decay
    c2, q, zeta = _x_state_correlations(
        a, p, w, 1.0 - a - 2.0 * p, coherence, prefactor, rank_tolerance
    )
    _check_sum(zeta, 'Entangled state')

    upper = delta + e2 * decay ** 2
    lower = e2 * (1.0 - alpha * decay ** 2) - alpha * delta
    p_b = alpha * upper / e2
    q_b = lower / e2
    if min(p_b, q_b) < rank_tolerance:
        printed_c2 = 0.0
    else:
        s2 = 2.0 / e2 ** 2 * (
            2.0 * alpha * e2 ** 2 * (
                decay ** 2 - delta + 2.0 * alpha * delta * decay ** 2
            )
            - 2.0 * alpha ** 2 * (delta ** 2 + e2 ** 2 * decay ** 4)
        )
        root = _safe_sqrt(alpha * lower * upper)
        mixing = e2 * math.sqrt(alpha * (1.0 - alpha)) * decay
        l11 = (alpha * aux.damped_w + mixing) / root
        l22 = (alpha * aux.damped_w - mixing) / root
        l33 = (
            e2 ** 2 * (decay ** 2 - alpha * decay ** 4)
            - e2 * 2.0 * alpha * delta * decay ** 2
            - alpha * delta ** 2
        ) / (lower * upper)
        printed_c2 = prefactor * s2 * max(l11 ** 2, l22 ** 2, l33 ** 2)

    spread = _safe_sqrt(
        (e2 * (2.0 * alpha * decay ** 2 - 1.0) + 2.0 * alpha * delta) ** 2
        + 4.0 * alpha * (1.0 - alpha) * e2 ** 2 * decay ** 2
    )
    centre = e2 - 2.0 * alpha * delta
    printed_zeta = (
        (centre + spread) / (2.0 * e2),
        (centre - spread) / (2.0 * e2),
        (gamma + big_gamma) * alpha / (gamma - big_gamma)
        * (math.exp(-(big_gamma + gamma) * t) - decay ** 2),
        (gamma - big_gamma) * alpha / (gamma + big_gamma)
        * (math.exp((big_gamma - gamma) * t) - decay ** 2),
    )
    printed_q = -2.0 * (_xlog2x(p_b) + _xlog2x(q_b)) \
        - _entropy(printed_zeta) - printed_c2

    return CaseResult('entangled', t, c2, q, printed_c2, printed_q, zeta)


def caseC_correlations(t: float, r: RateSet, alpha: float,
                       prefactor: float = C2_PREFACTOR,
                       rank_tolerance: float = RANK_TOLERANCE,
                       check: bool = True) -> CaseResult:
    """
    Closed form C2 and Q for the mixed state diag(a, 2, 0, 1 - a)/3,
    with the same e^{-gamma t} scaling as caseB_correlations.
    """
    aux = derive_aux_scalars(r, t, check)
    e2 = r.gamma ** 2 - r.big_gamma ** 2
    decay = math.exp(-r.gamma * t)
    fall = math.exp(-(r.big_gamma + r.gamma) * t)
    delta = aux.damped_delta

    a = alpha / 3.0 * decay ** 2
    p = (e2 * fall + alpha * delta) / (3.0 * e2)
    w = (e2 * fall + alpha * aux.damped_w) / (3.0 * e2)
    c2, q, zeta = _x_state_correlations(
        a, p, w, 1.0 - a - 2.0 * p, 0.0, prefactor, rank_tolerance
    )
    _check_sum(zeta, 'Mixed state')

    upper = e2 * (alpha * decay ** 2 + fall) + alpha * delta
    lower = e2 * (3.0 - alpha * decay ** 2 - fall) - alpha * delta
    p_b = upper / (3.0 * e2)
    q_b = lower / (3.0 * e2)
    if min(p_b, q_b) < rank_tolerance:
        printed_c2 = 0.0
    else:
        s2 = 2.0 / (9.0 * e2 ** 2) * (9.0 * e2 ** 2 - upper ** 2 - lower ** 2)
        l11 = (alpha * aux.damped_w + e2 * fall) / _safe_sqrt(upper * lower)
        l33 = decay * (
            alpha * e2 ** 2 * (3.0 - alpha * decay ** 2 - 2.0 * fall)
            - 2.0 * alpha ** 2 * e2 * delta
            - (e2 * fall + alpha * delta)
        ) / (upper * lower)
        printed_c2 = prefactor * s2 * max(l11 ** 2, l33 ** 2)

    printed_zeta = (
        alpha / 3.0 * decay ** 2,
        (
            e2 * (3.0 - alpha * decay ** 2 - 2.0 * fall)
            - 2.0 * alpha * delta
        ) / (3.0 * e2),
        (2.0 * e2 * fall + alpha * delta + alpha * aux.damped_w)
        / (3.0 * e2),
        alpha * (delta - aux.damped_w) / (3.0 * e2),
    )
    printed_q = -2.0 * _xlog2x(p_b) - _xlog2x(2.0 * q_b) \
        - _entropy(printed_zeta) - printed_c2

    return CaseResult('mixed', t, c2, q, printed_c2, printed_q, zeta)


def scenario_correlations(kind: str, t: float, r: RateSet, alpha: float,
                          prefactor: float = C2_PREFACTOR,
                          rank_tolerance: float = RANK_TOLERANCE,
                          check: bool = True) -> CaseResult:
    """Dispatch to the closed form of the given scenario kind."""
    if kind == 'superposition':
        return caseA_correlations(t, r, prefactor, rank_tolerance)
    if kind == 'entangled':
        return caseB_correlations(
            t, r, alpha, prefactor, rank_tolerance, check
        )
    if kind == 'mixed':
        return caseC_correlations(
            t, r, alpha, prefactor, rank_tolerance, check
        )
    raise ConfigError(f'Unknown scenario {kind!r}')


def pipeline_correlations(ds: DickeState,
                          prefactor: float = C2_PREFACTOR,
                          rank_tolerance: float = RANK_TOLERANCE
                          ) -> Tuple[float, float]:
    """C2 and Q of a state through the generic purification pipeline."""
    ps = to_product(ds)
    c2 = classical_correlation_c2(ps, prefactor, rank_tolerance)
    return c2, clamp_zero(mutual_information(ps) - c2)


def formula_discrepancies(cfg: ScenarioConfig,
                          prefactor: float = C2_PREFACTOR,
                          rank_tolerance: float = RANK_TOLERANCE
                          ) -> List[FormulaDiscrepancy]:
    """
    Compare reconciled and printed closed forms with the pipeline over
    the configured time grid.

    Reconciled values are reported beyond 1e-6, printed values beyond
    1e-4; a NaN printed value always counts as a discrepancy.
    """
    rho0 = initial_state(cfg)
    found = []
    for t in cfg.t_grid:
        result = scenario_correlations(
            cfg.kind, t, cfg.rates, cfg.alpha, prefactor, rank_tolerance
        )
        c2, q = pipeline_correlations(
            evolve_closed_form(rho0, cfg.rates, t), prefactor, rank_tolerance
        )
        candidates = (
            ('c2', result.c2, c2, AGREEMENT_TOLERANCE),
            ('q', result.q, q, AGREEMENT_TOLERANCE),
            ('printed_c2', result.printed_c2, c2, DISCREPANCY_TOLERANCE),
            ('printed_q', result.printed_q, q, DISCREPANCY_TOLERANCE),
        )
        for quantity, closed, pipeline, tolerance in candidates:
            residual = abs(closed - pipeline)
            if not residual <= tolerance:
                found.append(FormulaDiscrepancy(
                    cfg.kind, quantity, t, closed, pipeline, residual
                ))

    if found:
        log.warning(
            "%d closed form discrepancies in the %s scenario",
            len(found),
            cfg.kind
        )
    return found


def time_series(cfg: ScenarioConfig, vn: bool = False, grid_n: int = 64,
                prefactor: float = C2_PREFACTOR,
                rank_tolerance: float = RANK_TOLERANCE
                ) -> List[TimeSeriesRecord]:
    """
    Populations, concurrence and correlations at each grid time; rows
    where closed form and pipeline differ by more than 1e-6 are
    flagged.
    """
    rho0 = initial_state(cfg)
    records = []
    for t in cfg.t_grid:
        state = evolve_closed_form(rho0, cfg.rates, t)
        result = scenario_correlations(
            cfg.kind, t, cfg.rates, cfg.alpha, prefactor, rank_tolerance
        )
        c2, q = pipeline_correlations(state, prefactor, rank_tolerance)
        product = to_product(state)
        flag = abs(result.c2 - c2) > AGREEMENT_TOLERANCE \
            or abs(result.q - q) > AGREEMENT_TOLERANCE

        records.append(TimeSeriesRecord(
            t,
            *dicke_populations(state),
            concurrence=concurrence(product),
            c2_closed=result.c2,
            c2_pipeline=c2,
            q_closed=result.q,
            q_pipeline=q,
            q_vn=vn_discord(product, grid_n) if vn else None,
            flag=flag
        ))

    flagged = sum(record.flag for record in records)
    if flagged:
        log.warning("%d of %d rows flagged", flagged, len(records))
    return records


def death_windows(times: Sequence[float], values: Sequence[float],
                  threshold: float = ZERO_THRESHOLD
                  ) -> Tuple[Tuple[float, float], ...]:
    """
    Maximal runs of values below threshold that are preceded and
    followed by values at or above it, as (death time, revival time).
    """
    windows = []
    start = None
    alive = False
    for t, value in zip(times, values):
        if value >= threshold:
            if start is not None:
                windows.append((start, t))
                start = None
            alive = True
        elif alive and start is None:
            start = t
    return tuple(windows)


def sudden_death_scan(kind: str, r: RateSet, alpha_grid: Sequence[float],
                      t_max: float, dt: float,
                      zero_threshold: float = ZERO_THRESHOLD,
                      prefactor: float = C2_PREFACTOR,
                      rank_tolerance: float = RANK_TOLERANCE) -> DeathScan:
    """
    Death and revival windows of the closed form Q(t) on [0, t_max]
    sampled every dt, for each alpha of the grid.
    """
    if dt <= 0 or t_max <= 0:
        raise ConfigError('t_max and dt must be positive')
    if dt * r.gamma > 0.01 + 1e-12:
        log.warning("Scan step %g exceeds 0.01/gamma", dt)

    times = dt * np.arange(int(round(t_max / dt)) + 1)
    # the identities hold for every alpha, so verify them once per time
    for t in times[::max(1, len(times) // 10)]:
        derive_aux_scalars(r, float(t))

    rows = []
    for alpha in alpha_grid:
        if not 0.0 <= alpha <= 1.0:
            raise ConfigError(f'alpha must lie in [0, 1], got {alpha}')
        values = [
            scenario_correlations(
                kind, float(t), r, alpha, prefactor, rank_tolerance,
                check=False
            ).q
            for t in times
        ]
        rows.append(DeathScanRow(
            float(alpha), death_windows(times, values, zero_threshold)
        ))
        log.debug("alpha=%g windows=%s", alpha, rows[-1].windows)

    scan = DeathScan(kind, tuple(rows))
    log.info(
        "Sudden death threshold for %s scenario: %s",
        kind,
        scan.threshold_alpha
    )
    return scan


def onset_time(records: Sequence[TimeSeriesRecord],
               fraction: float = 0.01) -> Optional[float]:
    """
    First time at which Q exceeds fraction of its maximum, linearly
    interpolated between the bracketing records.
    """
    peak = max((record.q_closed for record in records), default=0.0)
    if peak <= 0:
        return None
    level = fraction * peak
    previous = None
    for record in records:
        if record.q_closed > level:
            if previous is None:
                return record.t
            share = (level - previous.q_closed) \
                / (record.q_closed - previous.q_closed)
            return previous.t + share * (record.t - previous.t)
        previous = record
    return None


def crossing_times(records: Sequence[TimeSeriesRecord]) -> List[float]:
    """Linearly interpolated times where Q and the concurrence cross."""
    crossings = []
    for before, after in zip(records, records[1:]):
        first = before.q_closed - before.concurrence
        second = after.q_closed - after.concurrence
        if first * second < 0:
            share = first / (first - second)
            crossings.append(before.t + share * (after.t - before.t))
    return crossings
