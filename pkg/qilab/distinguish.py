"""Closed-form distinguishability of Gaussian states.

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
import warnings

import numpy as np
from scipy.linalg import sqrtm

from qilab.exceptions import NoisyDerivative, OutOfRange, SingularSum
from qilab.gaussian_core import XPXP, XXPP, coupled_blocks, symplectic_form, williamson_blocks
from qilab.utils import golden_section_minimize

logger = logging.getLogger(__name__)

# s is evaluated on [S_EDGE, 1 - S_EDGE] in the Gaussian formula
S_EDGE = 1e-9
CHERNOFF_TOL = 1e-6
CHERNOFF_MAX_ITER = 60
RICHARDSON_RTOL = 1e-4


class OverlapResult:
    """Value of an s-overlap infimum and where it is attained.

    Attributes:
        value: the overlap, in (0, 1]
        s_star: minimising s
    """

    def __init__(self, value, s_star):
        """Constructor."""
        self.value = float(value)
        self.s_star = float(s_star)

    def __repr__(self):
        """Short description."""
        return f"OverlapResult(value={self.value!r}, s_star={self.s_star!r})"

    @property
    def exponent(self):
        """Per-copy error exponent -ln(value)."""
        return max(0.0, -float(np.log(self.value)))

    def error_upper_bound(self, copies=1):
        """Equal-prior error bound value^M / 2 for M copies."""
        return 0.5 * self.value**copies


def _same_modes(s0, s1):
    if s0.modes != s1.modes:
        raise OutOfRange(f"States have {s0.modes} and {s1.modes} modes.")


def fidelity_gaussian(s0, s1):
    """Root fidelity of two Gaussian states from their first and second moments.

    Args:
        s0 (GaussianState): first state.
        s1 (GaussianState): second state.

    Returns:
        float: the fidelity in [0, 1].
    """
    _same_modes(s0, s1)
    s0, s1 = s0.reordered(XXPP), s1.reordered(XXPP)
    v0, v1 = s0.cov, s1.cov
    v_sum = v0 + v1
    omega = symplectic_form(s0.modes)
    identity = np.eye(2 * s0.modes)
    try:
        inv_sum = np.linalg.inv(v_sum)
        v_aux = omega.T @ inv_sum @ (omega / 4 + v1 @ omega @ v0)
        a_inv = np.linalg.inv(v_aux @ omega)
    except np.linalg.LinAlgError as exc:
        raise SingularSum(f"V0 + V1 is not invertible: {exc}") from exc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        root = sqrtm(identity + a_inv @ a_inv / 4)
    f_tot = max(np.linalg.det(2 * (root + identity) @ v_aux).real, 0.0) ** 0.25
    delta = s0.mean - s1.mean
    fidelity = f_tot / np.linalg.det(v_sum) ** 0.25 * np.exp(-0.25 * delta @ inv_sum @ delta)
    return float(np.clip(fidelity, 0.0, 1.0))


def _g_lambda(nu, s):
    """G_s(nu) and Lambda_s(nu) of every symplectic eigenvalue."""
    g = np.ones_like(nu)
    lam = np.ones_like(nu)
    mixed = nu > 0.5
    x = nu[mixed]
    low = (x - 0.5) ** s
    ratio = np.expm1(s * np.log((x + 0.5) / (x - 0.5)))
    g[mixed] = 1.0 / (low * ratio)
    lam[mixed] = (ratio + 2.0) / ratio
    return g, lam


class _GaussianOverlap:
    """Symplectic data of a Gaussian pair, reused across values of s."""

    def __init__(self, s0, s1):
        _same_modes(s0, s1)
        blocks = coupled_blocks(s0, s1)
        self.modes = s0.modes
        self.nu0, self.symp0 = williamson_blocks(s0, blocks)
        self.nu1, self.symp1 = williamson_blocks(s1, blocks)
        self.delta = s0.reordered(XPXP).mean - s1.reordered(XPXP).mean

    def log_overlap(self, s):
        s = min(max(s, S_EDGE), 1.0 - S_EDGE)
        g0, lam0 = _g_lambda(self.nu0, s)
        g1, lam1 = _g_lambda(self.nu1, 1.0 - s)
        sigma = (self.symp0 * np.repeat(lam0, 2)) @ self.symp0.T + (
            self.symp1 * np.repeat(lam1, 2)
        ) @ self.symp1.T
        _, logdet = np.linalg.slogdet(sigma)
        quad = self.delta @ np.linalg.solve(sigma, self.delta)
        return (
            self.modes * np.log(2.0)
            + np.sum(np.log(g0))
            + np.sum(np.log(g1))
            - 0.5 * logdet
            - quad
        )

    def __call__(self, s):
        return float(np.exp(self.log_overlap(s)))


def s_overlap_gaussian(s0, s1, s):
    """s-overlap Tr(rho0^s rho1^(1-s)) of two Gaussian states.

    Each state is diagonalised per coupled block of one or two modes; two-mode blocks
    must be locally equivalent to the standard form, otherwise
    :class:`~qilab.exceptions.StandardFormUnavailable` is raised.

    Args:
        s0 (GaussianState): first state.
        s1 (GaussianState): second state.
        s (float): exponent in [0, 1]; the endpoints are evaluated at 1e-9 and 1 - 1e-9.

    Returns:
        float: the overlap.
    """
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"s must lie in [0, 1], got {s}.")
    return _GaussianOverlap(s0, s1)(s)


def chernoff(s0, s1, guess=None):
    """Quantum Chernoff overlap: minimum of the s-overlap over s.

    Args:
        s0 (GaussianState): first state.
        s1 (GaussianState): second state.
        guess (float): optional warm start for the golden-section search.

    Returns:
        OverlapResult: infimum and minimising s.
    """
    overlap = _GaussianOverlap(s0, s1)
    s_star, value = golden_section_minimize(
        overlap,
        S_EDGE,
        1.0 - S_EDGE,
        tol=CHERNOFF_TOL,
        max_iter=CHERNOFF_MAX_ITER,
        guess=guess,
    )
    half = overlap(0.5)
    if half < value:
        s_star, value = 0.5, half
    logger.debug("chernoff minimum %.12g at s=%.6f", value, s_star)
    return OverlapResult(min(value, 1.0), s_star)


def bhattacharyya(s0, s1):
    """Bhattacharyya overlap, the s-overlap at s = 1/2."""
    return OverlapResult(min(s_overlap_gaussian(s0, s1, 0.5), 1.0), 0.5)


def fvg_bounds(fidelity):
    """Fuchs-van de Graaf bounds on the equal-prior error probability.

    Returns:
        tuple: ``((1 - sqrt(1 - F^2)) / 2, F / 2)``.
    """
    if not -1e-12 <= fidelity <= 1.0 + 1e-9:
        raise OutOfRange(f"Fidelity must lie in [0, 1], got {fidelity}.")
    fidelity = min(max(fidelity, 0.0), 1.0)
    return 0.5 * (1.0 - np.sqrt(1.0 - fidelity**2)), 0.5 * fidelity


def coherent_illumination_exponent(kappa, n_s, n_b):
    """Per-copy Chernoff exponent kappa N_S (sqrt(N_B+1) - sqrt(N_B))^2 of coherent illumination."""
    return kappa * n_s * (np.sqrt(n_b + 1.0) - np.sqrt(n_b)) ** 2


def _second_derivative(func, theta, h):
    return (
        -func(theta + 2 * h)
        + 16 * func(theta + h)
        - 30 * func(theta)
        + 16 * func(theta - h)
        - func(theta - 2 * h)
    ) / (12 * h**2)


def qfi_from_fidelity(func, theta, h=1e-3, rtol=RICHARDSON_RTOL):
    """Quantum Fisher information -4 d^2F/dtheta'^2 at theta' = theta.

    Args:
        func (callable): root fidelity between the states at theta and theta'.
        theta (float): the true parameter.
        h (float): finite-difference step.
        rtol (float): required agreement between steps h and h/2.

    Returns:
        float: the QFI from the step h/2.
    """
    coarse = -4.0 * _second_derivative(func, theta, h)
    fine = -4.0 * _second_derivative(func, theta, h / 2)
    if abs(coarse - fine) > rtol * max(abs(fine), 1e-8):
        raise NoisyDerivative(
            f"QFI estimates {coarse:.10g} (h={h}) and {fine:.10g} (h={h / 2}) disagree."
        )
    return fine
