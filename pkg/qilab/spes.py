"""Single-photon entangled states (SPES) for target detection without a passive signature.

Two-mode operators are ordered (idler, signal); Gaussian pairs are ordered (return, idler).

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
from scipy.optimize import minimize_scalar

from qilab.channels import PureLoss, ThermalLoss, apply_fock, apply_gaussian, loss_kraus
from qilab.distinguish import bhattacharyya
from qilab.exceptions import ClosedFormMismatch, DegenerateVariances, OutOfRange
from qilab.fock import (
    FockOperator,
    cutoff_for_tail,
    fock_from_pure,
    fock_thermal,
    s_overlap_fock,
    tensor,
    thermal_pmf,
)
from qilab.gaussian_core import coherent, tensor_product, thermal, tmsv

logger = logging.getLogger(__name__)

CUTOFF_TAIL_TOL = 1e-10
CUTOFF_PADDING = 3
CLOSED_FORM_TOL = 1e-10
COMPOSITION_TAIL_TOL = 1e-8
MOMENT_TAIL_TOL = 1e-16
PROBES = ("spes", "tmsv", "coherent")


class NpsScenario:
    """Target detection where the background seen by the return is raised to hide the target.

    Under H1 the signal crosses a thermal-loss channel of transmittance eta and brightness
    N_B / (1 - eta), so the return carries N_B background photons whether or not the
    target is present.

    Attributes:
        eta: reflectivity in [0, 1)
        n_b: nominal background brightness
        n_s: per-mode signal energy
        cutoff: Fock cutoff of the signal mode
    """

    def __init__(self, eta, n_b, n_s, cutoff=None):
        """Constructor."""
        if not 0.0 <= eta < 1.0:
            raise OutOfRange(f"Reflectivity must lie in [0, 1), got {eta}.")
        if n_b < 0:
            raise OutOfRange(f"Background brightness must be >= 0, got {n_b}.")
        if n_s < 0:
            raise OutOfRange(f"Signal energy must be >= 0, got {n_s}.")
        self.eta = float(eta)
        self.n_b = float(n_b)
        self.n_s = float(n_s)
        if cutoff is None:
            cutoff = cutoff_for_tail(self.adjusted_n_b, CUTOFF_TAIL_TOL) + CUTOFF_PADDING
        self.cutoff = int(cutoff)

    @property
    def adjusted_n_b(self):
        """Brightness N_B / (1 - eta) of the H1 channel."""
        return self.n_b / (1.0 - self.eta)

    @property
    def channel(self):
        """The H1 channel acting on the signal."""
        return ThermalLoss(self.eta, self.adjusted_n_b)

    @property
    def gain(self):
        """Amplifier gain G = N_B + 1 of the channel's cascade."""
        return self.n_b + 1.0

    @property
    def transmittance(self):
        """Loss eta / G of the channel's cascade."""
        return self.eta / self.gain


class GaussianMoments1D:
    """Per-copy mean and standard deviation of a photocount under both hypotheses."""

    def __init__(self, mu0, sigma0, mu1, sigma1):
        """Constructor."""
        if sigma0 < 0 or sigma1 < 0:
            raise OutOfRange(f"Standard deviations must be >= 0, got {sigma0}, {sigma1}.")
        self.mu0 = float(mu0)
        self.sigma0 = float(sigma0)
        self.mu1 = float(mu1)
        self.sigma1 = float(sigma1)

    def __repr__(self):
        """Short description."""
        return (
            f"GaussianMoments1D(mu0={self.mu0!r}, sigma0={self.sigma0!r}, "
            f"mu1={self.mu1!r}, sigma1={self.sigma1!r})"
        )


def _check_spes_energy(n_s):
    if not 0.0 <= n_s <= 1.0:
        raise OutOfRange(f"SPES signal energy must lie in [0, 1], got {n_s}.")


def spes_state(n_s):
    """SPES sqrt(N_S)|0>_I|1>_S + sqrt(1 - N_S)|1>_I|0>_S as a two-mode operator."""
    _check_spes_energy(n_s)
    vector = np.zeros(4)
    vector[1] = math.sqrt(n_s)
    vector[2] = math.sqrt(1.0 - n_s)
    return fock_from_pure(vector, (2, 2))


def spes_generation(n_s):
    """SPES obtained by splitting one photon on a beam splitter of transmittance N_S.

    The idler is the environment of the pure-loss dilation: Kraus index k is the
    number of photons reflected into it.
    """
    _check_spes_energy(n_s)
    ops = loss_kraus(PureLoss(n_s).transmittance, 2)
    photon = np.array([0.0, 1.0])
    vector = np.concatenate([ops[k] @ photon for k in range(2)])
    return fock_from_pure(vector, (2, 2))


class _SignalBlocks:
    """Signal-mode data of a SPES return.

    The operator is |1><1|_I (x) diag(p) + |0><0|_I (x) diag(q) + |1><0|_I (x) K + h.c.
    with K = sum_k c_k |k><k+1|.
    """

    def __init__(self, p, q, c):
        self.p = p
        self.q = q
        self.c = c

    @classmethod
    def returned(cls, sc, length, present):
        k = np.arange(length)
        background = thermal_pmf(sc.n_b, length)
        if not present:
            return cls((1.0 - sc.n_s) * background, sc.n_s * background, np.zeros(length - 1))
        g, eta_t = sc.gain, sc.transmittance
        ratio = 1.0 - 1.0 / g
        one_photon = np.where(k >= 1, k * ratio ** np.maximum(k - 1, 0), 0.0) / g**2
        coherence = (
            math.sqrt((1.0 - sc.n_s) * sc.n_s * eta_t)
            * g**-1.5
            * np.sqrt(k[:-1] + 1.0)
            * ratio ** k[:-1]
        )
        return cls(
            (1.0 - sc.n_s) * background,
            sc.n_s * (eta_t * one_photon + (1.0 - eta_t) * background),
            coherence,
        )

    def operator(self):
        d = len(self.p)
        matrix = np.zeros((2 * d, 2 * d), dtype=complex)
        matrix[:d, :d] = np.diag(self.q)
        matrix[d:, d:] = np.diag(self.p)
        off = np.diag(self.c, 1)
        matrix[d:, :d] = off
        matrix[:d, d:] = off.T
        return FockOperator(matrix, (2, d), validate=False)


def spes_returned_states(sc):
    """Idler-return states of a SPES probe in the NPS model.

    rho1 is assembled from its closed form and, independently, by sending the probe's
    signal through the thermal-loss channel in the Fock basis; the two must agree.

    Returns:
        tuple: ``(rho0, rho1)`` with mode dimensions ``(2, cutoff)``.
    """
    _check_spes_energy(sc.n_s)
    probe = spes_state(sc.n_s)
    rho0 = tensor(probe.partial_trace([0]), fock_thermal(sc.n_b, sc.cutoff))
    closed = _SignalBlocks.returned(sc, sc.cutoff, present=True).operator()
    composed = apply_fock(
        sc.channel, probe, mode=1, cutoff_out=sc.cutoff, tail_tol=COMPOSITION_TAIL_TOL
    )
    mismatch = float(np.abs(closed.matrix - composed.matrix).max())
    if mismatch > CLOSED_FORM_TOL:
        raise ClosedFormMismatch(
            f"Closed-form and channel-built returns differ by {mismatch:.3e} "
            f"(eta={sc.eta}, n_b={sc.n_b}, n_s={sc.n_s})."
        )
    logger.debug("SPES returns agree to %.2e at cutoff %d", mismatch, sc.cutoff)
    return rho0, closed


def nps_pair(probe, sc):
    """Gaussian (H0, H1) returns of a coherent or TMSV probe in the NPS model."""
    if probe == "coherent":
        return thermal(sc.n_b), apply_gaussian(sc.channel, coherent(math.sqrt(sc.n_s)))
    if probe == "tmsv":
        absent = tensor_product(thermal(sc.n_b), thermal(sc.n_s))
        return absent, apply_gaussian(sc.channel, tmsv(sc.n_s), mode=0)
    raise OutOfRange(f"Unknown Gaussian probe {probe!r}.")


def bhattacharyya_exponent_nps(probe, sc):
    """Per-copy exponent -ln C_(1/2) of a SPES, TMSV or coherent probe."""
    if probe not in PROBES:
        raise OutOfRange(f"Unknown probe {probe!r}, expected one of {PROBES}.")
    if sc.n_s == 0 or sc.eta == 0:
        return 0.0
    if probe != "spes":
        return bhattacharyya(*nps_pair(probe, sc)).exponent
    rho0, rho1 = spes_returned_states(sc)
    # both operators lose the same truncated tail
    overlap = s_overlap_fock(rho0, rho1, 0.5) / math.sqrt(rho0.trace() * rho1.trace())
    return max(0.0, -math.log(min(overlap, 1.0)))


def ri_covariance(probe, sc):
    """Return-idler correlation matrix <v v^dag> for v = (a_R, a_I, a_R^dag, a_I^dag) under H1.

    A TMSV probe leaves its signature sqrt(eta N_S (N_S + 1)) in the phase-sensitive
    blocks, a SPES probe leaves sqrt(eta N_S (1 - N_S)) in the phase-insensitive ones.
    """
    n_r = sc.eta * sc.n_s + sc.n_b
    if probe == "tmsv":
        n_i = sc.n_s
        signature = math.sqrt(sc.eta * sc.n_s * (sc.n_s + 1.0))
        rows, cols = (0, 1, 2, 3), (3, 2, 1, 0)
    elif probe == "spes":
        _check_spes_energy(sc.n_s)
        n_i = 1.0 - sc.n_s
        signature = math.sqrt(sc.eta * sc.n_s * (1.0 - sc.n_s))
        rows, cols = (0, 1, 2, 3), (1, 0, 3, 2)
    else:
        raise OutOfRange(f"Unknown probe {probe!r} for return-idler correlations.")
    matrix = np.diag([n_r + 1.0, n_i + 1.0, n_r, n_i]).astype(complex)
    matrix[rows, cols] = signature
    return matrix


def threshold_exponent(moments):
    """Threshold and per-copy exponent of a Gaussian-approximated photocount test.

    Returns:
        tuple: ``(t_star, chi)`` with t* = (mu1 sigma0 + mu0 sigma1)/(sigma0 + sigma1) and
        chi = ((mu1 - mu0)/(sigma0 + sigma1))^2 / 2.
    """
    spread = moments.sigma0 + moments.sigma1
    if spread == 0:
        if moments.mu0 == moments.mu1:
            return moments.mu0, 0.0
        raise DegenerateVariances(
            f"Noiseless counts with means {moments.mu0} and {moments.mu1} give an "
            "infinite exponent."
        )
    t_star = (moments.mu1 * moments.sigma0 + moments.mu0 * moments.sigma1) / spread
    return t_star, 0.5 * ((moments.mu1 - moments.mu0) / spread) ** 2


def _quadratic_moments(blocks, c_r, c_i, c_b):
    """Mean and variance of c_R n_R + c_I n_I + c_B (a_R^dag a_I + a_I^dag a_R)."""
    k = np.arange(len(blocks.p))
    weight = blocks.p + blocks.q
    n_r = np.dot(k, weight)
    n_r2 = np.dot(k**2, weight)
    n_i = blocks.p.sum()
    n_ri = np.dot(k, blocks.p)
    root = np.sqrt(k[:-1] + 1.0)
    hop = np.dot(root, blocks.c)
    hop_r = np.dot(root * (2.0 * k[:-1] + 1.0), blocks.c)
    hop_sq = 2.0 * n_ri + n_r + n_i
    mean = c_r * n_r + c_i * n_i + 2.0 * c_b * hop
    second = (
        c_r**2 * n_r2
        + c_i**2 * n_i
        + 2.0 * c_r * c_i * n_ri
        + c_b**2 * hop_sq
        + 2.0 * c_r * c_b * hop_r
        + 2.0 * c_i * c_b * hop
    )
    return mean, math.sqrt(max(0.0, second - mean**2))


def _mode_mixing_moments(sc, c_r, c_i, c_b):
    length = cutoff_for_tail(sc.n_b, MOMENT_TAIL_TOL) + CUTOFF_PADDING
    mu0, sigma0 = _quadratic_moments(_SignalBlocks.returned(sc, length, False), c_r, c_i, c_b)
    mu1, sigma1 = _quadratic_moments(_SignalBlocks.returned(sc, length, True), c_r, c_i, c_b)
    return GaussianMoments1D(mu0, sigma0, mu1, sigma1)


def _check_kappa(kappa):
    if not 0.0 <= kappa <= 1.0:
        raise OutOfRange(f"Mixing reflectivity must lie in [0, 1], got {kappa}.")


def mmpc_moments(sc, kappa):
    """Photocount moments of the X arm a_X = sqrt(kappa) a_R + sqrt(1 - kappa) a_I."""
    _check_kappa(kappa)
    _check_spes_energy(sc.n_s)
    return _mode_mixing_moments(sc, kappa, 1.0 - kappa, math.sqrt(kappa * (1.0 - kappa)))


def mmpdc_moments(sc, kappa):
    """Moments of the balanced difference N_X - N_Y of both mixer arms."""
    _check_kappa(kappa)
    _check_spes_energy(sc.n_s)
    return _mode_mixing_moments(
        sc, 2.0 * kappa - 1.0, 1.0 - 2.0 * kappa, 2.0 * math.sqrt(kappa * (1.0 - kappa))
    )


def mmpc_exponent(sc, kappa):
    """Exponent of the mode-mixing photon-counting receiver."""
    return threshold_exponent(mmpc_moments(sc, kappa))[1]


def mmpdc_exponent(sc, kappa):
    """Exponent of the mode-mixing photon-difference-counting receiver."""
    return threshold_exponent(mmpdc_moments(sc, kappa))[1]


def optimal_mmpc_exponent(sc, log_kappa_min=-8.0):
    """Best mode-mixing photon-counting exponent over the mixer reflectivity.

    kappa = 0 counts idler photons only and carries no signature, so the search runs
    over log10(kappa) in [log_kappa_min, 0].

    Returns:
        tuple: ``(chi, kappa)``.
    """
    result = minimize_scalar(
        lambda u: -mmpc_exponent(sc, 10.0**u),
        bounds=(log_kappa_min, 0.0),
        method="bounded",
        options={"xatol": 1e-6},
    )
    kappa = 10.0**result.x
    logger.debug("optimal MMPC mixer reflectivity %.4g", kappa)
    return -result.fun, kappa


def mmpc_exponent_asymptotic(eta, n_s, n_b, kappa):
    """Weak-signal form (1-k) eta N_S / (2 [3 N_B - k(-N_B^2 + 2 N_B + 1) + 1])."""
    return (
        (1.0 - kappa)
        * eta
        * n_s
        / (2.0 * (3.0 * n_b - kappa * (-(n_b**2) + 2.0 * n_b + 1.0) + 1.0))
    )


def mmpdc_exponent_asymptotic(eta, n_s, n_b):
    """Weak-signal balanced exponent eta N_S / (6 N_B + 2)."""
    return eta * n_s / (6.0 * n_b + 2.0)
