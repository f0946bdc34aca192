"""Estimation of the gain of a quantum-limited amplifier.

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
from scipy.optimize import brentq
from scipy.stats import binom, nbinom

from qilab.exceptions import CutoffOverflow, GainAtUnity, NoCrossing, OutOfRange

logger = logging.getLogger(__name__)

THRESHOLD_UPPER = 100.0
THRESHOLD_XTOL = 1e-8
SERIES_TAIL_TOL = 1e-12
SCHMIDT_TAIL_TOL = 1e-10


class GainScenario:
    """Gain-sensing setup.

    Attributes:
        n: total signal energy N
        m: number of signal modes M
        g: amplifier gain G
        eta_d: detector efficiency
        tau: squeezing parameter arccosh(sqrt(G))
    """

    def __init__(self, n, m, g, eta_d=1.0):
        """Constructor."""
        if n < 0:
            raise OutOfRange(f"Signal energy must be >= 0, got {n}.")
        if m < 1:
            raise OutOfRange(f"Number of modes must be positive, got {m}.")
        if g < 1:
            raise OutOfRange(f"Gain must be >= 1, got {g}.")
        if not 0.0 < eta_d <= 1.0:
            raise OutOfRange(f"Detector efficiency must lie in (0, 1], got {eta_d}.")
        self.n = float(n)
        self.m = int(m)
        self.g = float(g)
        self.eta_d = float(eta_d)
        self.tau = math.acosh(math.sqrt(self.g))


def _require_gain(g):
    if g <= 1.0:
        raise GainAtUnity(f"The gain Fisher information diverges at G={g}.")


def qla_nu(g, g_prime):
    """Per-photon fidelity factor 1 / (sqrt(G G') - sqrt((G-1)(G'-1)))."""
    return 1.0 / (math.sqrt(g * g_prime) - math.sqrt((g - 1.0) * (g_prime - 1.0)))


def nds_output_fidelity(pmf, m, g, g_prime):
    """Fidelity sum_n p_n nu^(n+M) of two amplifier outputs for a number-diagonal probe."""
    pmf = np.asarray(pmf, dtype=float)
    nu = qla_nu(g, g_prime)
    return float(np.dot(pmf, nu ** (np.arange(len(pmf)) + m)))


def nds_fidelity_tau(pmf, m, tau, tau_prime):
    """Same fidelity in the squeezing parametrisation, where nu = 1 / cosh(tau - tau')."""
    pmf = np.asarray(pmf, dtype=float)
    nu = 1.0 / math.cosh(tau - tau_prime)
    return float(np.dot(pmf, nu ** (np.arange(len(pmf)) + m)))


def qfi_nds(n, m, g):
    """QFI of a number-diagonal probe.

    Returns:
        tuple: ``(k_tau, k_g)`` = ``(4(N+M), (N+M)/(G(G-1)))``.
    """
    _require_gain(g)
    k_tau = 4.0 * (n + m)
    return k_tau, k_tau / (4.0 * g * (g - 1.0))


def qfi_coherent(n, m, g):
    """QFI N/(G(2G-1)) + M/(G(G-1)) of a coherent probe."""
    _require_gain(g)
    return n / (g * (2.0 * g - 1.0)) + m / (g * (g - 1.0))


def fi_homodyne_heterodyne(n, m, g):
    """Classical Fisher information of homodyne and heterodyne detection of a coherent probe.

    Returns:
        tuple: ``(j_hom, j_het)``.
    """
    if g < 1:
        raise OutOfRange(f"Gain must be >= 1, got {g}.")
    return n / (g * (2.0 * g - 1.0)), (0.5 * n + m) / g**2


def estimate_gain(y_total, n, m, eta_d=1.0):
    """Unbiased gain estimate (Y/eta_d + M)/(N + M) from the total photocount."""
    if y_total < 0:
        raise OutOfRange(f"Photocount must be >= 0, got {y_total}.")
    return (y_total / eta_d + m) / (n + m)


def mse_number(n, m, g, eta_d=1.0):
    """Mean squared error of the photocount estimator for a number-diagonal probe."""
    total = n + m
    return g * (g - 1.0) / total + (1.0 - eta_d) / (eta_d * total) * (g - m / total)


def mse_coherent(n, m, g, eta_d=1.0):
    """Mean squared error of the photocount estimator for a coherent probe."""
    return mse_number(n, m, g, eta_d) + g**2 * n / (n + m) ** 2


mse_coherent_lossy = mse_coherent


def qfi_coherent_lossy(n, m, g, eta_d):
    """QFI of a coherent probe read out by a detector of efficiency eta_d."""
    _require_gain(g)
    gm1 = g - 1.0
    return eta_d * n / (g * (2.0 * eta_d * gm1 + 1.0)) + eta_d * m / (gm1 * (eta_d * gm1 + 1.0))


def crb_nds(n, m, g):
    """Quantum Cramer-Rao bound 1/K_G of a number-diagonal probe."""
    return 1.0 / qfi_nds(n, m, g)[1]


def crb_coherent(n, m, g, eta_d=1.0):
    """Quantum Cramer-Rao bound of a coherent probe, detector losses included."""
    return 1.0 / qfi_coherent_lossy(n, m, g, eta_d)


def _added_photons(photons, modes, g, cutoff):
    """Added-photon law NB(photons + modes, 1/G) and its G-score on a = 0..cutoff-1."""
    added = np.arange(cutoff)
    law = nbinom.pmf(added, photons + modes, 1.0 / g)
    score = (added - (photons + modes) * (g - 1.0)) / (g * (g - 1.0))
    return added, law, score


def _lossy_number_fisher(photons, g, eta_d, cutoff):
    added, law, score = _added_photons(photons, 1, g, cutoff)
    tail = 1.0 - law.sum()
    if tail > SERIES_TAIL_TOL:
        raise CutoffOverflow(
            f"Amplified |{photons}> keeps {tail:.3e} beyond {cutoff} added photons."
        )
    emitted = photons + added
    k = np.arange(photons + cutoff)
    kernel = binom.pmf(k[:, np.newaxis], emitted[np.newaxis, :], eta_d)
    prob = kernel @ law
    slope = kernel @ (law * score)
    mask = prob > 0
    return float(np.sum(slope[mask] ** 2 / prob[mask]))


def qfi_number_lossy(n_per_mode, g, eta_d, cutoff=None):
    """Gain QFI of Fock probes read out by an inefficient detector.

    The output of each mode stays diagonal in the number basis, so the QFI is the
    classical Fisher information of the detected count, summed over modes.

    Args:
        n_per_mode (array-like): photon number of the Fock state in each mode.
        g (float): gain, > 1.
        eta_d (float): detector efficiency in [0, 1].
        cutoff (int): number of added photons kept; sized from the negative-binomial
            quantile when omitted.

    Returns:
        float: K_G.
    """
    _require_gain(g)
    if not 0.0 <= eta_d <= 1.0:
        raise OutOfRange(f"Detector efficiency must lie in [0, 1], got {eta_d}.")
    total = 0.0
    for photons in np.asarray(n_per_mode, dtype=int):
        size = cutoff
        if size is None:
            size = int(nbinom.ppf(1.0 - SERIES_TAIL_TOL / 10.0, photons + 1, 1.0 / g)) + 10
        total += _lossy_number_fisher(int(photons), g, eta_d, size)
    return total


def threshold_gain(eta_d, n, m=None):
    """Gain beyond which single-photon probes beat the coherent-state bound.

    Root of mse_number(G, eta_d) = 1/qfi_coherent(G) on (1, 100]. The coherent-state
    bound is the ideal one: detector loss only degrades the photon-counting side.
    Single-photon probes put one photon in each mode, so M = N.

    Returns:
        float: the threshold, or 1 when photon counting wins at every gain.
    """
    m = n if m is None else m
    if not 0.0 < eta_d <= 1.0:
        raise OutOfRange(f"Detector efficiency must lie in (0, 1], got {eta_d}.")

    def gap(g):
        return mse_number(n, m, g, eta_d) - 1.0 / qfi_coherent(n, m, g)

    lower = 1.0 + 1e-9
    if eta_d == 1.0 or gap(lower) <= 0:
        logger.debug("photon counting beats the coherent bound down to G=1 at eta_d=%g", eta_d)
        return 1.0
    if gap(THRESHOLD_UPPER) > 0:
        raise NoCrossing(
            f"Photon counting never reaches the coherent bound for G <= {THRESHOLD_UPPER} "
            f"at eta_d={eta_d}."
        )
    return brentq(gap, lower, THRESHOLD_UPPER, xtol=THRESHOLD_XTOL)


def ecb_distance(n, m, g, g_prime):
    """Energy-constrained Bures distance between two amplifiers.

    The minimum fidelity over probes of energy N interpolates linearly between
    the neighbouring Fock states.

    Returns:
        tuple: ``(b_quantum, f_min)``.
    """
    nu = qla_nu(g, g_prime)
    floor = math.floor(n)
    frac = n - floor
    f_min = nu**m * ((1.0 - frac) * nu**floor + frac * nu ** math.ceil(n))
    return math.sqrt(max(0.0, 1.0 - f_min)), f_min


def qla_coherent_fidelity(n, m, g, g_prime):
    """Fidelity of two amplifier outputs for a coherent probe of energy N over M modes."""
    exponent = n * (math.sqrt(g_prime) - math.sqrt(g)) ** 2 / (2.0 * (g + g_prime - 1.0))
    return qla_nu(g, g_prime) ** m * math.exp(-exponent)


def cecb_distance(n, m, g, g_prime):
    """Bures distance restricted to classical (coherent) probes.

    Returns:
        tuple: ``(b_classical, f_min_classical)``.
    """
    f_min = qla_coherent_fidelity(n, m, g, g_prime)
    return math.sqrt(max(0.0, 1.0 - f_min)), f_min


def schmidt_fisher_information(pmf, m, g, cutoff=200):
    """Fisher information on tau of counting photons in the Schmidt bases.

    The joint law of the input count x and the output count y = x + a is
    p_x NB(a; x + M, 1/G); the information is summed directly from the squared score.

    Args:
        pmf (array-like): total photon-number PMF of the probe.
        m (int): number of modes.
        g (float): gain, > 1.
        cutoff (int): number of added photons kept per input count.

    Returns:
        float: K_tau, equal to 4(N + M).
    """
    _require_gain(g)
    pmf = np.asarray(pmf, dtype=float)
    jacobian = 2.0 * math.sqrt(g * (g - 1.0))
    information = 0.0
    missing = 0.0
    for photons, weight in enumerate(pmf):
        if weight == 0:
            continue
        _, law, score = _added_photons(photons, m, g, cutoff)
        information += weight * np.dot(law, (jacobian * score) ** 2)
        missing += weight * (1.0 - law.sum())
    if missing > SCHMIDT_TAIL_TOL:
        raise CutoffOverflow(f"Schmidt sums drop {missing:.3e} of probability at cutoff {cutoff}.")
    return float(information)
