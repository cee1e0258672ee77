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
Correlation measures of two qubit states: concurrence, mutual
information, the Renyi-2 classical correlation obtained from the
symmetric purification of rho_B and the channel it induces on A,
quantum discord, and the von Neumann measurement based oracles.
"""

import logging

from dataclasses import dataclass

import numpy as np

from soliton_discord.dynamics import ProductState
from soliton_discord.exceptions import (
    DegenerateReducedState,
    NumericalError
)
from soliton_discord.qlinalg import (
    ENTROPY_CUTOFF,
    PAULIS,
    SIGMA_Y,
    DensityMatrix,
    hermitian_eig,
    linear_entropy,
    partial_trace,
    projector,
    sqrtm_psd,
    von_neumann_entropy
)

log = logging.getLogger('SolitonDiscord')

RANK_TOLERANCE = 1e-7
C2_PREFACTOR = 1.0
DEGENERACY_TOLERANCE = 1e-12
IMAG_TOLERANCE = 1e-9
ZERO_CLAMP = 1e-9
GRID_N = 64
MIN_GRID_N = 64
REFINE_ITERATIONS = 20

_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True, eq=False)
class Purification:
    """
    Symmetric purification |r> = sum M_ij |i>|j> of a qubit state with
    M = [[A, B], [B, D]], built from its eigen decomposition.
    """
    A: complex
    B: complex
    D: complex
    lambda1: float
    lambda2: float
    evec1: np.ndarray
    evec2: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.A, self.B], [self.B, self.D]], dtype=complex)

    def vector(self) -> np.ndarray:
        """The purification as a two qubit state vector."""
        return self.matrix.reshape(4)


@dataclass(frozen=True, eq=False)
class ChannelImages:
    """Images Lambda(|i><j|) of the channel mapping the ancilla to A."""
    im00: np.ndarray
    im01: np.ndarray
    im10: np.ndarray
    im11: np.ndarray

    def image(self, i: int, j: int) -> np.ndarray:
        return ((self.im00, self.im01), (self.im10, self.im11))[i][j]

    def pauli_images(self) -> tuple:
        """Images of sigma_x, sigma_y and sigma_z."""
        return (
            self.im01 + self.im10,
            -1j * self.im01 + 1j * self.im10,
            self.im00 - self.im11,
        )


@dataclass(frozen=True, eq=False)
class LMatrix:
    """Real 3x3 matrix L_ij = tr[Lambda(sigma_j) sigma_i] / 2."""
    entries: np.ndarray

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    def max_gram_eigenvalue(self) -> float:
        """Largest eigenvalue of L^T L."""
        return float(np.linalg.eigvalsh(self.entries.T @ self.entries)[-1])


@dataclass(frozen=True)
class DiscordComparison:
    """Distribution of |Q - Q_vN| over a sample of random states."""
    samples: int
    mean: float
    median: float
    p90: float
    maximum: float


def concurrence(rho: ProductState) -> float:
    """
    Wootters concurrence from the eigenvalues of rho rho~, evaluated
    through the Hermitian form sqrt(rho) rho~ sqrt(rho).
    """
    mat = rho.rho.mat
    flipped = _SPIN_FLIP @ mat.conj() @ _SPIN_FLIP
    root = sqrtm_psd(mat)
    values = hermitian_eig(root @ flipped @ root).values[::-1]

    if values.min() < -1e-8:
        raise NumericalError(
            f'Spin flipped spectrum has negative value {values.min():.3g}'
        )
    roots = np.sqrt(np.clip(values, 0.0, None))
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def mutual_information(rho: ProductState) -> float:
    """I = S(rho_A) + S(rho_B) - S(rho_AB) in bits."""
    return (
        von_neumann_entropy(partial_trace(rho.rho, 'A'))
        + von_neumann_entropy(partial_trace(rho.rho, 'B'))
        - von_neumann_entropy(rho.rho)
    )


def purify(rho_b: DensityMatrix) -> Purification:
    """
    Symmetric purification of a qubit state; eigenvalues are ordered
    lambda1 >= lambda2 and a degenerate state uses the computational
    basis.
    """
    eig = hermitian_eig(rho_b.mat)
    values = np.clip(eig.values[::-1], 0.0, None)
    if abs(values[0] - values[1]) < DEGENERACY_TOLERANCE:
        first = np.array([1, 0], dtype=complex)
        second = np.array([0, 1], dtype=complex)
    else:
        first, second = eig.vectors[:, 1], eig.vectors[:, 0]

    root1, root2 = np.sqrt(values)
    return Purification(
        A=root1 * first[0] ** 2 + root2 * second[0] ** 2,
        B=root1 * first[0] * first[1] + root2 * second[0] * second[1],
        D=root1 * first[1] ** 2 + root2 * second[1] ** 2,
        lambda1=float(values[0]),
        lambda2=float(values[1]),
        evec1=first,
        evec2=second
    )


def beta_blocks(rho: ProductState) -> tuple:
    """
    Operator blocks on A of the expansion rho = sum beta_jl (x) |j><l|
    over the computational basis of B, as (b00, b01, b10, b11).
    """
    tensor = rho.rho.mat.reshape(2, 2, 2, 2)
    return tuple(
        tensor[:, j, :, l].copy() for j in (0, 1) for l in (0, 1)
    )


def extract_channel(rho: ProductState,
                    rank_tolerance: float = RANK_TOLERANCE) -> ChannelImages:
    """
    Channel images Lambda(|i><k|) such that (Lambda (x) id) applied to
    the purification of rho_B reproduces rho.

    Each block satisfies beta_jl = sum_ik M_ij conj(M_kl) Lambda(|i><k|),
    a 4x4 linear system whose matrix is kron(M, conj(M)).

    :raises DegenerateReducedState: if rho_B has an eigenvalue below
        rank_tolerance.
    """
    rho_b = partial_trace(rho.rho, 'B')
    lowest = float(np.linalg.eigvalsh(rho_b.mat)[0])
    if lowest < rank_tolerance:
        raise DegenerateReducedState(lowest, rank_tolerance)

    weights = purify(rho_b).matrix
    system = np.kron(weights, weights.conj())
    blocks = np.array([block.reshape(4) for block in beta_blocks(rho)])
    images = np.linalg.solve(system, blocks)

    return ChannelImages(*(image.reshape(2, 2) for image in images))


def reconstruct_state(ch: ChannelImages, pur: Purification) -> np.ndarray:
    """Apply (Lambda (x) id) to the purification projector."""
    weights = pur.matrix
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for k in range(2):
            for j in range(2):
                for l in range(2):
                    unit = np.zeros((2, 2), dtype=complex)
                    unit[j, l] = 1.0
                    out += weights[i, j] * np.conj(weights[k, l]) * np.kron(
                        ch.image(i, k), unit
                    )
    return out


def l_matrix(ch: ChannelImages) -> LMatrix:
    """
    Correlation matrix of the channel, L_ij = tr[Lambda(sigma_j) sigma_i]/2.

    :raises NumericalError: if an entry has an imaginary part above
        1e-9 relative to the largest entry.
    """
    entries = np.array([
        [np.trace(image @ pauli) / 2.0 for image in ch.pauli_images()]
        for pauli in PAULIS
    ])
    scale = max(1.0, float(np.max(np.abs(entries))))
    residue = float(np.max(np.abs(entries.imag)))
    if residue > IMAG_TOLERANCE * scale:
        raise NumericalError(
            f'L matrix has imaginary residue {residue:.3g}'
        )
    return LMatrix(entries.real.copy())


def classical_correlation_c2(rho: ProductState,
                             prefactor: float = C2_PREFACTOR,
                             rank_tolerance: float = RANK_TOLERANCE) -> float:
    """
    Renyi-2 classical correlation S2(rho_B) * lambda_max(L^T L), scaled
    by prefactor; zero when rho_B is rank deficient.
    """
    rho_b = partial_trace(rho.rho, 'B')
    try:
        channel = extract_channel(rho, rank_tolerance)
    except DegenerateReducedState as exc:
        log.debug("Classical correlation fallback to zero: %s", exc)
        return 0.0

    gram = l_matrix(channel).max_gram_eigenvalue()
    return prefactor * linear_entropy(rho_b) * gram


def clamp_zero(value: float) -> float:
    """Map values within 1e-9 of zero to exactly zero."""
    return 0.0 if abs(value) < ZERO_CLAMP else value


def quantum_discord(rho: ProductState,
                    prefactor: float = C2_PREFACTOR,
                    rank_tolerance: float = RANK_TOLERANCE) -> float:
    """Mutual information minus the Renyi-2 classical correlation."""
    return clamp_zero(
        mutual_information(rho)
        - classical_correlation_c2(rho, prefactor, rank_tolerance)
    )


def _xlogx(values):
    safe = np.where(values > ENTROPY_CUTOFF, values, 1.0)
    return np.where(values > ENTROPY_CUTOFF, values * np.log2(safe), 0.0)


def _measured_entropy(rho_a, conditionals, theta, phi):
    """
    Average conditional entropy of A for projective measurements on B
    along the Bloch directions (theta, phi), vectorized over angles.
    """
    direction = np.stack([
        np.sin(theta) * np.cos(phi),
        np.sin(theta) * np.sin(phi),
        np.cos(theta),
    ], axis=-1)
    shift = np.einsum('...k,kac->...ac', direction, conditionals)

    total = 0.0
    for sign in (1.0, -1.0):
        branch = 0.5 * (rho_a + sign * shift)
        trace = np.real(branch[..., 0, 0] + branch[..., 1, 1])
        det = np.real(
            branch[..., 0, 0] * branch[..., 1, 1]
            - branch[..., 0, 1] * branch[..., 1, 0]
        )
        disc = np.sqrt(np.clip(trace * trace - 4.0 * det, 0.0, None))
        low, high = 0.5 * (trace - disc), 0.5 * (trace + disc)
        total = total - _xlogx(low) - _xlogx(high) + _xlogx(trace)
    return total


def vn_classical_correlation(rho: ProductState, grid_n: int = GRID_N,
                             iterations: int = REFINE_ITERATIONS) -> float:
    """
    Classical correlation S(rho_A) - min sum_j p_j S(rho_A^j) over rank
    one projective measurements on B.

    A grid_n x grid_n grid over the Bloch sphere angles is refined
    around its best cell by halving the search window; the result is
    the best value found, hence a lower bound on the supremum.
    """
    if grid_n < MIN_GRID_N:
        raise ValueError(f'grid_n must be at least {MIN_GRID_N}')

    tensor = rho.rho.mat.reshape(2, 2, 2, 2)
    rho_a = partial_trace(rho.rho, 'A').mat
    conditionals = np.array([
        np.einsum('be,aecb->ac', pauli, tensor) for pauli in PAULIS
    ])

    theta, phi = np.meshgrid(
        np.linspace(0.0, np.pi, grid_n),
        np.linspace(0.0, 2.0 * np.pi, grid_n, endpoint=False),
        indexing='ij'
    )
    values = _measured_entropy(rho_a, conditionals, theta, phi)
    best = np.unravel_index(np.argmin(values), values.shape)
    best_theta, best_phi = theta[best], phi[best]
    best_value = values[best]

    d_theta, d_phi = np.pi / (grid_n - 1), 2.0 * np.pi / grid_n
    offsets = np.linspace(-1.0, 1.0, 5)
    for _ in range(iterations):
        theta, phi = np.meshgrid(
            best_theta + d_theta * offsets,
            best_phi + d_phi * offsets,
            indexing='ij'
        )
        values = _measured_entropy(rho_a, conditionals, theta, phi)
        index = np.unravel_index(np.argmin(values), values.shape)
        if values[index] < best_value:
            best_value = values[index]
            best_theta, best_phi = theta[index], phi[index]
        d_theta, d_phi = d_theta / 2.0, d_phi / 2.0

    entropy_a = von_neumann_entropy(partial_trace(rho.rho, 'A'))
    return float(entropy_a - best_value)


def vn_discord(rho: ProductState, grid_n: int = GRID_N) -> float:
    """Mutual information minus the von Neumann classical correlation."""
    return mutual_information(rho) - vn_classical_correlation(rho, grid_n)


def random_rank2_state(rng: np.random.Generator) -> ProductState:
    """Mixture of two random pure states with a uniform weight."""
    vectors = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
    vectors /= np.linalg.norm(vectors, axis=1)[:, None]
    weight = rng.uniform()
    mat = weight * projector(vectors[0]) \
        + (1.0 - weight) * projector(vectors[1])
    return ProductState(DensityMatrix(mat))


def discord_comparison(samples: int, seed: int,
                       grid_n: int = GRID_N) -> DiscordComparison:
    """
    Compare quantum_discord with vn_discord over seeded random rank-2
    states.
    """
    rng = np.random.default_rng(seed)
    differences = np.array([
        abs(quantum_discord(state) - vn_discord(state, grid_n))
        for state in (random_rank2_state(rng) for _ in range(samples))
    ])
    result = DiscordComparison(
        samples=samples,
        mean=float(np.mean(differences)),
        median=float(np.median(differences)),
        p90=float(np.quantile(differences, 0.9)),
        maximum=float(np.max(differences))
    )
    log.info("Renyi-2 vs von Neumann discord: %s", result)
    return result
