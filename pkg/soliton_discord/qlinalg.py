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
Dense linear algebra and entropy utilities for qubit and two-qubit
states.

Two-qubit matrices use the computational basis |00>, |01>, |10>, |11>
with subsystem A as the first tensor factor. Entropies are in bits.
"""

import logging

from dataclasses import dataclass, field

import numpy as np

from soliton_discord.exceptions import (
    InvalidDensityMatrixError,
    NonHermitianError,
    SolitonDiscordException
)

log = logging.getLogger('SolitonDiscord')

HERMITIAN_TOLERANCE = 1e-9
ENTROPY_CUTOFF = 1e-14
PHASE_CUTOFF = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A Hermitian, unit trace, positive semidefinite matrix.

    The invariants are checked on construction, raising
    InvalidDensityMatrixError when any of them is violated by more
    than the tolerance.
    """
    mat: np.ndarray
    tolerance: float = 1e-9
    dim: int = field(init=False)

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] \
                or mat.shape[0] not in (2, 4):
            raise InvalidDensityMatrixError(
                f'Expected a 2x2 or 4x4 matrix, got shape {mat.shape}'
            )
        if not np.all(np.isfinite(mat)):
            raise InvalidDensityMatrixError('Matrix has non-finite entries')

        asymmetry = max_asymmetry(mat)
        if asymmetry > self.tolerance:
            raise InvalidDensityMatrixError(
                f'Matrix is not Hermitian, max asymmetry {asymmetry:.3g}'
            )

        trace = np.trace(mat).real
        if abs(trace - 1.0) > self.tolerance:
            raise InvalidDensityMatrixError(
                f'Trace {trace!r} differs from 1'
            )

        lowest = np.linalg.eigvalsh(mat)[0]
        if lowest < -self.tolerance:
            raise InvalidDensityMatrixError(
                f'Matrix has negative eigenvalue {lowest:.3g}'
            )

        mat.setflags(write=False)
        object.__setattr__(self, 'mat', mat)
        object.__setattr__(self, 'dim', mat.shape[0])

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with PSD noise clamped to zero."""
        return clamp_eigenvalues(
            np.linalg.eigvalsh(self.mat),
            self.tolerance
        )


def max_asymmetry(mat: np.ndarray) -> float:
    """Return max |M - M^dagger|."""
    return float(np.max(np.abs(mat - mat.conj().T)))


def dagger(mat: np.ndarray) -> np.ndarray:
    return mat.conj().T


def projector(vector) -> np.ndarray:
    """Return |v><v| for the given state vector."""
    vec = np.asarray(vector, dtype=complex)
    return np.outer(vec, vec.conj())


def clamp_eigenvalues(values, tolerance=HERMITIAN_TOLERANCE) -> np.ndarray:
    """
    Clamp eigenvalues in [-tolerance, 0] to zero.

    :raises InvalidDensityMatrixError: for eigenvalues below -tolerance
    """
    values = np.asarray(values, dtype=float)
    if values.size and values.min() < -tolerance:
        raise InvalidDensityMatrixError(
            f'Negative eigenvalue {values.min():.3g} below tolerance'
        )
    return np.where(values < 0.0, 0.0, values)


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    # First component with magnitude above the cutoff is made real
    # and positive.
    for component in vector:
        if abs(component) > PHASE_CUTOFF:
            return vector * (abs(component) / component)
    return vector


def hermitian_eig(mat) -> EigenSystem:
    """
    Eigen decomposition of a Hermitian matrix of dimension at most 4.

    Eigenvalues are ascending. Each eigenvector has its first
    significant component real and positive, so identical inputs
    always give identical output.

    :param mat: The Hermitian matrix.
    :return: The EigenSystem of mat.
    :raises NonHermitianError: if mat is not Hermitian within 1e-9.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] > 4:
        raise SolitonDiscordException(
            f'hermitian_eig supports square matrices up to 4x4, '
            f'got {mat.shape}'
        )

    asymmetry = max_asymmetry(mat)
    if asymmetry > HERMITIAN_TOLERANCE:
        raise NonHermitianError(asymmetry)

    values, vectors = np.linalg.eigh((mat + dagger(mat)) / 2)
    vectors = np.column_stack(
        [_fix_phase(vectors[:, col]) for col in range(vectors.shape[1])]
    )
    return EigenSystem(values=values, vectors=vectors)


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """
    Reduce a two-qubit state to one of its qubits.

    :param rho: A two-qubit DensityMatrix.
    :param keep: The subsystem to keep, 'A' or 'B'.
    :return: The reduced qubit DensityMatrix.
    """
    if rho.dim != 4:
        raise InvalidDensityMatrixError(
            'partial_trace expects a two-qubit state'
        )

    tensor = rho.mat.reshape(2, 2, 2, 2)
    if keep == 'A':
        reduced = np.einsum('abcb->ac', tensor)
    elif keep == 'B':
        reduced = np.einsum('abad->bd', tensor)
    else:
        raise ValueError(f'keep must be A or B, got {keep!r}')

    return DensityMatrix(reduced, tolerance=rho.tolerance)


def shannon_entropy(probabilities) -> float:
    """
    Shannon entropy in bits; terms below the cutoff contribute zero.
    """
    probs = np.asarray(probabilities, dtype=float)
    probs = probs[probs > ENTROPY_CUTOFF]
    return float(-np.sum(probs * np.log2(probs)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy of a state in bits."""
    return shannon_entropy(rho.eigenvalues())


def linear_entropy(rho: DensityMatrix) -> float:
    """Linear (Renyi-2) entropy 2(1 - tr rho^2)."""
    purity = np.real(np.trace(rho.mat @ rho.mat))
    return float(2.0 * (1.0 - purity))


def sqrtm_psd(mat) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    eig = hermitian_eig(mat)
    roots = np.sqrt(clamp_eigenvalues(eig.values))
    return (eig.vectors * roots) @ dagger(eig.vectors)
