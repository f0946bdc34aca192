"""Truncated Fock-space density operators and brute-force distinguishability.

Copyright 2024 Blue Brain Project / EPFL

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import logging
import math

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln, xlogy

from qilab.exceptions import BadModeIndex, NegativeEnergy, OutOfRange
from qilab.utils import golden_section_minimize

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
SUPPORT_TOL = 1e-12
NEGATIVE_EIGENVALUE_TOL = 1e-10


class FockOperator:
    """A multimode density operator truncated to per-mode cutoffs.

    Attributes:
        mode_dims: per-mode dimensions (d_1, ..., d_k)
        matrix: Hermitian matrix of dimension prod(d_i)
        trace_target: expected trace before truncation, usually 1
    """

    def __init__(self, matrix, mode_dims, trace_target=1.0, validate=True):
        """Constructor."""
        self.mode_dims = tuple(int(d) for d in np.atleast_1d(mode_dims))
        self.matrix = np.asarray(matrix, dtype=complex)
        self.trace_target = float(trace_target)
        size = int(np.prod(self.mode_dims))
        if self.matrix.shape != (size, size):
            raise OutOfRange(
                f"Matrix of shape {self.matrix.shape} does not match mode dimensions "
                f"{self.mode_dims}."
            )
        if validate:
            scale = max(1.0, float(np.abs(self.matrix).max(initial=0.0)))
            if np.abs(self.matrix - self.matrix.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
                raise OutOfRange("Fock operator is not Hermitian.")

    def __repr__(self):
        """Short description."""
        return f"FockOperator(mode_dims={self.mode_dims}, trace={self.trace():.6f})"

    @property
    def num_modes(self):
        """Number of modes."""
        return len(self.mode_dims)

    def trace(self):
        """Real part of the trace."""
        return float(np.trace(self.matrix).real)

    def min_eigenvalue(self):
        """Smallest eigenvalue, >= -1e-10 for physical operators."""
        return float(np.linalg.eigvalsh(self.matrix).min())

    def _check_mode(self, mode):
        if not 0 <= mode < self.num_modes:
            raise BadModeIndex(f"Mode {mode} is out of range for {self.num_modes} modes.")

    def partial_trace(self, keep):
        """Reduced operator on the modes listed in ``keep``, in their original order."""
        keep = sorted(int(k) for k in np.atleast_1d(keep))
        for k in keep:
            self._check_mode(k)
        n = self.num_modes
        tensor = self.matrix.reshape(self.mode_dims + self.mode_dims)
        row = list(range(n))
        col = [k + n if k in keep else k for k in range(n)]
        out = [k for k in keep] + [k + n for k in keep]
        reduced = np.einsum(tensor, row + col, out)
        dims = tuple(self.mode_dims[k] for k in keep)
        size = int(np.prod(dims))
        return FockOperator(reduced.reshape(size, size), dims, self.trace_target, validate=False)

    def photon_pmf(self, mode=None):
        """Photon-number distribution of one mode, or of the total photon number."""
        if mode is not None:
            return np.real(np.diag(self.partial_trace([mode]).matrix)).copy()
        diag = np.real(np.diag(self.matrix)).reshape(self.mode_dims)
        grids = np.meshgrid(*[np.arange(d) for d in self.mode_dims], indexing="ij")
        total = sum(grids)
        return np.bincount(total.ravel(), weights=diag.ravel())

    def mean_photons(self, mode=None):
        """Mean photon number of one mode, or in total."""
        pmf = self.photon_pmf(mode)
        return float(np.dot(np.arange(len(pmf)), pmf))

    def photon_number_moments(self, mode=None):
        """Mean and variance of the photon number of one mode, or in total."""
        pmf = self.photon_pmf(mode)
        n = np.arange(len(pmf))
        mean = float(np.dot(n, pmf))
        return mean, float(np.dot(n**2, pmf) - mean**2)


def tensor(*operators):
    """Tensor product of Fock operators, modes concatenated in order."""
    matrix = np.array([[1.0 + 0j]])
    dims = ()
    target = 1.0
    for op in operators:
        matrix = np.kron(matrix, op.matrix)
        dims += op.mode_dims
        target *= op.trace_target
    return FockOperator(matrix, dims, target, validate=False)


def fock_from_pure(vector, mode_dims):
    """Rank-one operator |psi><psi| of a state vector over the given dimensions."""
    vector = np.asarray(vector, dtype=complex).ravel()
    return FockOperator(np.outer(vector, vector.conj()), mode_dims)


def fock_number(n, cutoff):
    """Number state |n><n|."""
    if not 0 <= n < cutoff:
        raise OutOfRange(f"Number state {n} does not fit the cutoff {cutoff}.")
    vector = np.zeros(cutoff)
    vector[n] = 1.0
    return fock_from_pure(vector, [cutoff])


def thermal_pmf(mean, cutoff):
    """Geometric photon-number distribution p_n = N^n/(N+1)^(n+1), truncated."""
    if mean < 0:
        raise NegativeEnergy(f"Thermal mean photon number must be >= 0, got {mean}.")
    n = np.arange(cutoff)
    return np.exp(xlogy(n, mean) - (n + 1) * np.log1p(mean))


def fock_thermal(mean, cutoff):
    """Truncated thermal state."""
    return FockOperator(np.diag(thermal_pmf(mean, cutoff)).astype(complex), [cutoff])


def coherent_amplitudes(alpha, cutoff):
    """Number-basis amplitudes of the coherent state |alpha>."""
    alpha = complex(alpha)
    n = np.arange(cutoff)
    log_mod = -0.5 * abs(alpha) ** 2 + xlogy(n, abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))


def fock_coherent(alpha, cutoff):
    """Truncated coherent state."""
    return fock_from_pure(coherent_amplitudes(alpha, cutoff), [cutoff])


def fock_displaced_thermal(alpha, mean, cutoff, padding=None):
    """Displaced thermal state D(alpha) thermal(mean) D(alpha)^dag, truncated.

    The displacement is exponentiated on a padded space and cropped afterwards.
    """
    work = cutoff + (padding if padding is not None else cutoff + 20)
    a = np.diag(np.sqrt(np.arange(1, work)), 1)
    displacement = expm(complex(alpha) * a.conj().T - complex(alpha).conjugate() * a)
    rho = displacement @ np.diag(thermal_pmf(mean, work)) @ displacement.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return FockOperator(rho[:cutoff, :cutoff], [cutoff])


def _as_matrix(rho):
    return rho.matrix if isinstance(rho, FockOperator) else np.asarray(rho)


def _spectral(matrix):
    eigvals, eigvecs = np.linalg.eigh(matrix)
    if eigvals[0] < -NEGATIVE_EIGENVALUE_TOL:
        logger.warning("clamping eigenvalue %.3e of a supposedly PSD operator", eigvals[0])
    return np.clip(eigvals, 0.0, None), eigvecs


def _power(eigvals, s, floor=0.0):
    if s == 0:
        return (eigvals > SUPPORT_TOL).astype(float)
    return np.where(eigvals > floor, eigvals, 0.0) ** s


def hermitian_power(rho, s):
    """Fractional power of a PSD operator; negative round-off eigenvalues are clamped.

    ``s = 0`` returns the projector onto the support (eigenvalues above 1e-12).
    """
    if s < 0:
        raise OutOfRange(f"Power must be non-negative, got {s}.")
    eigvals, eigvecs = _spectral(_as_matrix(rho))
    matrix = (eigvecs * _power(eigvals, s)) @ eigvecs.conj().T
    if isinstance(rho, FockOperator):
        return FockOperator(matrix, rho.mode_dims, rho.trace_target, validate=False)
    return matrix


def trace_norm(a):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(_as_matrix(a)))))


def helstrom_error(rho0, rho1, pi0=0.5):
    """Minimum error probability 1/2 - ||pi1 rho1 - pi0 rho0||_1 / 2, clipped to [0, 1/2]."""
    if not 0.0 <= pi0 <= 1.0:
        raise OutOfRange(f"Prior must lie in [0, 1], got {pi0}.")
    diff = (1.0 - pi0) * _as_matrix(rho1) - pi0 * _as_matrix(rho0)
    return float(np.clip(0.5 - 0.5 * trace_norm(diff), 0.0, 0.5))


def fidelity_fock(rho0, rho1):
    """Uhlmann root fidelity Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)).

    Evaluated as the trace norm of sqrt(rho0) sqrt(rho1) from its singular values,
    with eigenvalues up to 1e-12 left out of both supports.
    """
    eig0, vecs0 = _spectral(_as_matrix(rho0))
    eig1, vecs1 = _spectral(_as_matrix(rho1))
    root0, root1 = _power(eig0, 0.5, SUPPORT_TOL), _power(eig1, 0.5, SUPPORT_TOL)
    product = root0[:, np.newaxis] * (vecs0.conj().T @ vecs1) * root1[np.newaxis, :]
    return float(np.sum(np.linalg.svd(product, compute_uv=False)))


class _OverlapSpectra:
    """Cached eigendecompositions for repeated s-overlap evaluations."""

    def __init__(self, rho0, rho1):
        self.eig0, vecs0 = _spectral(_as_matrix(rho0))
        self.eig1, vecs1 = _spectral(_as_matrix(rho1))
        self.weights = np.abs(vecs0.conj().T @ vecs1) ** 2

    def __call__(self, s):
        # round-off eigenvalues stay outside the support for every s
        return float(
            _power(self.eig0, s, SUPPORT_TOL)
            @ self.weights
            @ _power(self.eig1, 1.0 - s, SUPPORT_TOL)
        )


def s_overlap_fock(rho0, rho1, s):
    """s-overlap Tr(rho0^s rho1^(1-s)) with rho^0 the support projector."""
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"s must lie in [0, 1], got {s}.")
    return _OverlapSpectra(rho0, rho1)(s)


def chernoff_fock(rho0, rho1, tol=1e-6):
    """Minimum of the s-overlap over s in [0, 1] and its argument.

    Returns:
        tuple: ``(value, s_star)``.
    """
    overlap = _OverlapSpectra(rho0, rho1)
    s_star, value = golden_section_minimize(overlap, 0.0, 1.0, tol=tol)
    for edge in (0.0, 1.0):
        edge_value = overlap(edge)
        if edge_value < value:
            s_star, value = edge, edge_value
    return value, s_star


def cutoff_for_tail(mean_photons, tail_tol):
    """Smallest cutoff d with thermal tail mass P(n >= d) = (N/(N+1))^d below ``tail_tol``."""
    if not 0.0 < tail_tol < 1.0:
        raise OutOfRange(f"Tail tolerance must lie in (0, 1), got {tail_tol}.")
    if mean_photons < 0:
        raise NegativeEnergy(f"Mean photon number must be >= 0, got {mean_photons}.")
    if mean_photons == 0:
        return 1
    log_q = math.log(mean_photons) - math.log1p(mean_photons)
    d = max(1, math.ceil(math.log(tail_tol) / log_q))
    while d * log_q > math.log(tail_tol):
        d += 1
    while d > 1 and (d - 1) * log_q <= math.log(tail_tol):
        d -= 1
    return d
