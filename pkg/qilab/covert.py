"""Covert target detection: perfect and epsilon-covert exponents, energy bands and error floors.

Alice probes a target of reflectivity eta hidden in a thermal background of brightness
N_B while the adversary, Willie, collects the transmitted light. Exponents are per
probe copy; M is the number of signal modes.

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
from scipy.special import roots_laguerre
from scipy.stats import nbinom

from qilab.channels import ThermalLoss, apply_gaussian
from qilab.distinguish import OverlapResult, bhattacharyya, chernoff, fvg_bounds
from qilab.exceptions import (
    BracketFailure,
    ConstraintVacuous,
    ConvergenceConditionViolated,
    NoConvergence,
    OutOfRange,
    QuadratureNonConverged,
    TruncationTooSmall,
)
from qilab.gaussian_core import coherent, tensor_product, thermal, tmsv
from qilab.genfun import pmf_thermal, pmf_through_channel
from qilab.utils import damped_newton

logger = logging.getLogger(__name__)

MAX_ETA = 0.4
QUADRATURE_NODES = 64
QUADRATURE_CHECK_NODES = 96
QUADRATURE_RTOL = 1e-8
KKT_MAX_ITER = 200
KKT_QUANTILE_TAIL = 1e-12
KKT_EDGE_MASS = 1e-9
BRIGHTNESS_RTOL = 1e-8
PROBES = ("tmsv", "gcs", "pmf")


class CovertScenario:
    """Parameters of a covert sensing setup.

    Attributes:
        eta: target reflectivity
        n_b: background brightness per mode
        m: number of signal modes
        eps: covertness level, Willie's error must stay above 1/2 - eps
        probe: ``"tmsv"``, ``"gcs"`` or ``"pmf"``
        n_s: per-mode probe energy (N_T for the GCS probe), defaults to ``n_b``
        pmf: total photon-number PMF of a generic probe
    """

    def __init__(self, eta, n_b, m=1, eps=0.0, probe="tmsv", n_s=None, pmf=None):
        """Constructor."""
        if not 0.0 <= eta <= 1.0:
            raise OutOfRange(f"Reflectivity must lie in [0, 1], got {eta}.")
        if n_b < 0:
            raise OutOfRange(f"Background brightness must be >= 0, got {n_b}.")
        if not 0.0 <= eps <= 0.5:
            raise OutOfRange(f"Covertness must lie in [0, 1/2], got {eps}.")
        if m < 1:
            raise OutOfRange(f"Number of modes must be positive, got {m}.")
        if probe not in PROBES:
            raise OutOfRange(f"Unknown probe {probe!r}, expected one of {PROBES}.")
        if probe == "pmf" and pmf is None:
            raise OutOfRange("A generic probe needs its photon-number PMF.")
        self.eta = float(eta)
        self.n_b = float(n_b)
        self.m = int(m)
        self.eps = float(eps)
        self.probe = probe
        self.n_s = float(n_b if n_s is None else n_s)
        self.pmf = None if pmf is None else np.asarray(pmf, dtype=float)


class EnergyBand:
    """Allowed per-mode probe energies under epsilon-covertness.

    Attributes:
        ns_min: smallest allowed energy
        ns_max: largest allowed energy
        lambda1: KKT multipliers (lower branch, upper branch)
        lambda2: KKT multipliers (lower branch, upper branch)
        d: truncation of the photon-number sums
    """

    def __init__(self, ns_min, ns_max, lambda1, lambda2, d):
        """Constructor."""
        self.ns_min = float(ns_min)
        self.ns_max = float(ns_max)
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.d = int(d)

    def __repr__(self):
        """Short description."""
        return f"EnergyBand(ns_min={self.ns_min!r}, ns_max={self.ns_max!r}, d={self.d})"


def willie_mean_photons(n_s, eta, n_b):
    """Per-mode energy N = (1 - eta) N_S + eta N_B reaching Willie."""
    return (1.0 - eta) * n_s + eta * n_b


def willie_states(scenario):
    """Willie's per-mode states without and with the probe.

    Returns:
        tuple: thermal ``(sigma0, sigma1)`` Gaussian states for TMSV and GCS probes, or
        total photon-number PMFs over the M modes for a generic probe.
    """
    willie_channel = ThermalLoss(1.0 - scenario.eta, scenario.n_b)
    if scenario.probe == "pmf":
        cutoff = len(scenario.pmf)
        sigma0 = pmf_thermal(scenario.n_b, scenario.m, cutoff)
        sigma1, _ = pmf_through_channel(scenario.pmf, willie_channel, modes=scenario.m)
        return sigma0, sigma1
    # the reduced signal of both probes is thermal with energy n_s
    sigma1 = apply_gaussian(willie_channel, thermal(scenario.n_s))
    return thermal(scenario.n_b), sigma1


def tmsv_return_states(eta, n_b, n_s):
    """Return-idler states of a TMSV probe, modes ordered (return, idler)."""
    absent = tensor_product(thermal(n_b), thermal(n_s))
    present = apply_gaussian(ThermalLoss(eta, n_b), tmsv(n_s), mode=0)
    return absent, present


def gcs_return_states(eta, n_b, alpha):
    """Returned states of a coherent probe |alpha> for the two hypotheses."""
    return thermal(n_b), apply_gaussian(ThermalLoss(eta, n_b), coherent(alpha))


def _check_perfect(eta, n_b):
    if not 0.0 <= eta <= MAX_ETA:
        raise OutOfRange(f"Reflectivity must lie in [0, {MAX_ETA}], got {eta}.")
    if n_b < 0:
        raise OutOfRange(f"Background brightness must be >= 0, got {n_b}.")


def tmsv_exponent(eta, n_b, n_s, method="chernoff"):
    """Per-copy exponent of a TMSV probe of energy ``n_s``."""
    absent, present = tmsv_return_states(eta, n_b, n_s)
    if method == "bhattacharyya":
        return bhattacharyya(absent, present)
    return chernoff(absent, present)


def perfect_tmsv_exponent(eta, n_b, method="chernoff"):
    """Exponent of a perfectly covert TMSV probe (N_S = N_B).

    Args:
        eta (float): target reflectivity.
        n_b (float): background brightness.
        method (str): ``"chernoff"`` or ``"bhattacharyya"``.

    Returns:
        OverlapResult: overlap, minimising s and exponent.
    """
    _check_perfect(eta, n_b)
    return tmsv_exponent(eta, n_b, n_b, method=method)


def _gcs_integral(eta, n_b, n_t, nodes, method):
    t, weights = roots_laguerre(nodes)
    total = 0.0
    s_prev = None
    for node, weight in zip(t, weights):
        if weight == 0.0:
            continue
        absent, present = gcs_return_states(eta, n_b, math.sqrt(n_t * node))
        if method == "bhattacharyya":
            value = bhattacharyya(absent, present).value
        else:
            result = chernoff(absent, present, guess=s_prev)
            value, s_prev = result.value, result.s_star
        total += weight * value
    return total


def gcs_exponent(
    eta,
    n_b,
    n_t,
    method="chernoff",
    nodes=QUADRATURE_NODES,
    check_nodes=QUADRATURE_CHECK_NODES,
):
    """Per-copy exponent of a Gaussian-distributed coherent-state probe of energy ``n_t``.

    The average over the circular Gaussian amplitude distribution reduces to a radial
    integral in t = |alpha|^2 / N_T, evaluated with Gauss-Laguerre quadrature and checked
    against the ``check_nodes`` rule.
    """
    if n_t == 0 or eta == 0:
        return 0.0
    coarse = _gcs_integral(eta, n_b, n_t, nodes, method)
    fine = _gcs_integral(eta, n_b, n_t, check_nodes, method)
    if abs(coarse - fine) > QUADRATURE_RTOL * abs(fine):
        raise QuadratureNonConverged(
            f"GCS average moved from {coarse:.12g} ({nodes} nodes) to {fine:.12g} "
            f"({check_nodes} nodes)."
        )
    return max(0.0, -math.log(min(fine, 1.0)))


def perfect_gcs_exponent(
    eta,
    n_b,
    method="chernoff",
    nodes=QUADRATURE_NODES,
    check_nodes=QUADRATURE_CHECK_NODES,
):
    """Exponent of a perfectly covert GCS probe (N_T = N_B)."""
    _check_perfect(eta, n_b)
    return gcs_exponent(eta, n_b, n_b, method=method, nodes=nodes, check_nodes=check_nodes)


def gcs_bhattacharyya_closed_form(eta, n_b):
    """Exact GCS Bhattacharyya exponent of the perfectly covert probe.

    The s = 1/2 overlap of each coherent amplitude is Gaussian in |alpha|, so the
    amplitude average has a closed form.
    """
    g1 = (1.0 - eta) * n_b + 1.0
    prefactor = 1.0 / (math.sqrt((n_b + 1.0) * g1) - n_b * math.sqrt(1.0 - eta))
    lam = (math.sqrt(n_b + 1.0) + math.sqrt(n_b)) ** 2 + (
        math.sqrt(g1) + math.sqrt(g1 - 1.0)
    ) ** 2
    return -math.log(prefactor / (1.0 + 2.0 * eta * n_b / lam))


def analytic_exponents(eta, n_b):
    """Weak-reflectivity approximations of the perfectly covert exponents.

    Returns:
        tuple: ``(chi_tmsv, chi_gcs, ratio)`` where ``ratio`` is the small-eta limit
        of ``chi_tmsv / chi_gcs``.
    """
    chi_tmsv = -math.log(1.0 - 0.25 * eta * (1.0 - 1.0 / (2.0 * n_b + 1.0) ** 2))
    chi_gcs = -math.log(1.0 - 2.0 * eta * n_b * (n_b - math.sqrt(n_b * (n_b + 1.0)) + 0.5))
    ratio = (
        (n_b + 1.0) * (2.0 * (n_b + math.sqrt(n_b * (n_b + 1.0))) + 1.0) / (2.0 * n_b + 1.0) ** 2
    )
    return chi_tmsv, chi_gcs, ratio


def _nu(eta, n_b):
    """Fidelity of Willie-side thermal outputs nu = 1/(sqrt(G0 G1) - sqrt((G0-1)(G1-1)))."""
    g0 = n_b + 1.0
    g1 = (1.0 - eta) * n_b + 1.0
    return 1.0 / (math.sqrt(g0 * g1) - math.sqrt((g0 - 1.0) * (g1 - 1.0)))


def _alice_base(eta, n_b):
    return math.sqrt(1.0 - eta / ((1.0 - eta) * n_b + 1.0))


def alice_fidelity_lower_bound(eta, n_b, m, pmf=None, total_energy=None):
    """Lower bound on the fidelity of Alice's returned states for any probe.

    Args:
        eta (float): target reflectivity.
        n_b (float): background brightness.
        m (int): number of signal modes.
        pmf (array-like): total photon-number PMF of the probe.
        total_energy (float): total probe energy, used when ``pmf`` is None (Jensen form).

    Returns:
        float: the bound.
    """
    base = _alice_base(eta, n_b)
    prefactor = _nu(eta, n_b) ** m
    if pmf is not None:
        pmf = np.asarray(pmf, dtype=float)
        return float(prefactor * np.dot(pmf, base ** np.arange(len(pmf))))
    if total_energy is None:
        raise OutOfRange("Either a PMF or the total probe energy is required.")
    return prefactor * base**total_energy


def alice_error_lower_bound(fidelity):
    """Error probability lower bound (1 - sqrt(1 - F^2)) / 2 from a fidelity."""
    return fvg_bounds(fidelity)[0]


def nps_error_lower_bound(n_s_total, eta, n_b):
    """Error lower bound exp(-beta N_S)/4 without a passive signature."""
    if n_s_total < 0 or eta < 0 or n_b < 0:
        raise OutOfRange("Energies and reflectivity must be non-negative.")
    beta = -math.log1p(-eta / (n_b + 1.0))
    return 0.25 * math.exp(-beta * n_s_total)


def nps_error_lower_bound_pmf(pmf, eta, n_b):
    """PMF form (sum_n p_n (1 - eta/(N_B+1))^(n/2))^2 / 4 of the passive-signature-free bound."""
    pmf = np.asarray(pmf, dtype=float)
    base = math.sqrt(1.0 - eta / (n_b + 1.0))
    return 0.25 * float(np.dot(pmf, base ** np.arange(len(pmf)))) ** 2


def _floor_x(eta, n_b):
    """Argument x of Willie's generating function matching Alice's fidelity bound."""
    one_minus_t = 1.0 - _alice_base(eta, n_b)
    return 1.0 - one_minus_t / ((1.0 - eta) - eta * n_b * one_minus_t)


def _check_floor(eta, n_b):
    if not 0.0 <= eta <= MAX_ETA:
        raise ConvergenceConditionViolated(
            f"Reflectivity {eta} exceeds {MAX_ETA}, the floor's series argument is not trusted."
        )
    x = _floor_x(eta, n_b)
    if not n_b / (n_b + 1.0) <= x <= 1.0:
        raise ConvergenceConditionViolated(
            f"x = {x:.6g} leaves [{n_b / (n_b + 1.0):.6g}, 1] for eta={eta}, n_b={n_b}."
        )
    return x


def _log_floor_fidelity(eta, n_b, x):
    """Per-mode log of nu (N_B + 1 - N_B/x) (1 + eta N_B (1 - x))."""
    return (
        math.log(_nu(eta, n_b))
        + math.log(n_b + 1.0 - n_b / x)
        + math.log1p(eta * n_b * (1.0 - x))
    )


def ecovert_error_floor(eta, n_b, m, eps):
    """Probe-independent lower bound on Alice's error under epsilon-covertness.

    Args:
        eta (float): target reflectivity, at most 0.4.
        n_b (float): background brightness.
        m (int): number of signal modes.
        eps (float): covertness level.

    Returns:
        float: the error-probability floor.
    """
    if not 0.0 <= eps <= 0.5:
        raise OutOfRange(f"Covertness must lie in [0, 1/2], got {eps}.")
    x = _check_floor(eta, n_b)
    log_f = 2.0 * m * _log_floor_fidelity(eta, n_b, x)
    a = (1.0 - 2.0 * eps) ** 4 * math.exp(log_f)
    # (1 - sqrt(1 - a)) / 2 without cancellation
    return a / (2.0 * (1.0 + math.sqrt(max(0.0, 1.0 - a))))


def ecovert_floor_exponent(eta, n_b):
    """Large-M per-mode exponent -ln(2 floor)/M of the epsilon-covert error floor."""
    x = _check_floor(eta, n_b)
    return -2.0 * _log_floor_fidelity(eta, n_b, x)


def willie_trace_norm(n_s, eta, n_b, m):
    """Trace distance ||sigma0 - sigma1||_1 between Willie's M-mode thermal states.

    Both total photon-number laws are negative binomial and cross once, at n_t, so the
    norm is twice the gap of their distribution functions there.
    """
    n = willie_mean_photons(n_s, eta, n_b)
    if abs(n - n_b) <= 1e-14 * max(n_b, 1.0):
        return 0.0
    if n == 0 or n_b == 0:
        # one state is the vacuum: twice the other's mass away from n = 0
        other = max(n, n_b)
        return 2.0 * (1.0 - (1.0 + other) ** (-m))
    n_t = math.floor(
        m * math.log((n + 1.0) / (n_b + 1.0)) / math.log(n * (n_b + 1.0) / ((n + 1.0) * n_b))
    )
    gap = nbinom.cdf(n_t, m, 1.0 / (n_b + 1.0)) - nbinom.cdf(n_t, m, 1.0 / (n + 1.0))
    return float(min(2.0, 2.0 * abs(gap)))


def willie_error_probability(n_s, eta, n_b, m):
    """Willie's minimum error probability 1/2 - ||sigma0 - sigma1||_1 / 4."""
    return 0.5 - 0.25 * willie_trace_norm(n_s, eta, n_b, m)


def max_covert_brightness(eta, n_b, m, eps):
    """Largest per-mode probe energy keeping Willie's trace norm within 4 eps.

    Raises:
        BracketFailure: when the search interval does not contain the crossing.
    """
    if eps == 0 or n_b == 0:
        return n_b
    upper = n_b * (1.0 + 1.0 / math.sqrt(m)) * 2.0
    budget = 4.0 * eps

    def excess(n_s):
        return willie_trace_norm(n_s, eta, n_b, m) - budget

    if excess(upper) <= 0:
        raise BracketFailure(
            f"Trace norm stays within {budget} up to N_S={upper:.6g}; the bracket does not "
            "straddle the covertness limit."
        )
    return brentq(excess, n_b, upper, rtol=BRIGHTNESS_RTOL)


def ecovert_probe_exponent(scenario):
    """Per-copy exponent of a TMSV or GCS probe run at its largest covert energy."""
    if scenario.probe not in ("tmsv", "gcs"):
        raise OutOfRange(
            f"Epsilon-covert exponents need a TMSV or GCS probe, got {scenario.probe}."
        )
    n_s = max_covert_brightness(scenario.eta, scenario.n_b, scenario.m, scenario.eps)
    if scenario.probe == "tmsv":
        return tmsv_exponent(scenario.eta, scenario.n_b, n_s).exponent
    return gcs_exponent(scenario.eta, scenario.n_b, n_s)


def kkt_truncation(n_b, m):
    """Twice the 1 - 1e-12 quantile of the M-mode thermal total photon number."""
    return int(2 * nbinom.ppf(1.0 - KKT_QUANTILE_TAIL, m, 1.0 / (n_b + 1.0))) + 2


def _check_eps(eps):
    if eps == 0.5:
        raise ConstraintVacuous("At eps = 1/2 every photon-number law is covert.")
    if not 0.0 <= eps < 0.5:
        raise OutOfRange(f"Covertness must lie in [0, 1/2), got {eps}.")


class _KktBranch:
    """KKT system for one extremum of Willie's mean photon number."""

    def __init__(self, p, target):
        self.n = np.arange(len(p))
        self.norm = 1.0 / p.sum()
        self.p = p
        self.target = target

    def sums(self, lam2):
        dist = self.n - lam2
        s1 = np.sum(self.p / np.abs(dist))
        s2 = np.sum(self.p / dist**2)
        return s1, s2, dist

    def reduced(self, lam2):
        s1, s2, _ = self.sums(lam2)
        return self.norm * s1**2 / s2 - self.target**2

    def residual(self, lams):
        lam1, lam2 = lams
        s1, s2, _ = self.sums(lam2)
        return np.array(
            [self.norm * lam1**2 / 4.0 * s2 - 1.0, self.norm * lam1 / 2.0 * s1 - self.target]
        )

    def jacobian(self, lams):
        lam1, lam2 = lams
        s1, s2, dist = self.sums(lam2)
        ds1 = np.sum(self.p * dist / np.abs(dist) ** 3)
        ds2 = np.sum(2.0 * self.p / dist**3)
        return self.norm * np.array(
            [[lam1 * s2 / 2.0, lam1**2 * ds2 / 4.0], [s1 / 2.0, lam1 * ds1 / 2.0]]
        )

    def lambda1_for(self, lam2):
        _, s2, _ = self.sums(lam2)
        return 2.0 / math.sqrt(self.norm * s2)

    def q(self, lam1, lam2):
        return self.norm * lam1**2 * self.p / (4.0 * (self.n - lam2) ** 2)


def _solve_branch(branch, centre, spread, sign, eps):
    """Root of the eliminated equation on one side of the thermal mean, then Newton polish."""
    width = max(3.0, 1.0 / (2.0 * math.sqrt(eps))) * spread

    def reduced(w):
        return branch.reduced(centre + sign * w)

    hi = width
    for _ in range(KKT_MAX_ITER):
        if reduced(hi) > 0:
            break
        hi *= 1.5
    else:
        raise NoConvergence("KKT multiplier search did not find a feasible upper bracket.")
    lo = hi
    for _ in range(KKT_MAX_ITER):
        if reduced(lo) < 0:
            break
        lo /= 1.5
    else:
        raise NoConvergence("KKT multiplier search did not find a feasible lower bracket.")
    w = brentq(reduced, lo, hi, xtol=1e-12 * spread, rtol=1e-14)
    lam2 = centre + sign * w
    start = np.array([branch.lambda1_for(lam2), lam2])
    lam1, lam2 = damped_newton(
        branch.residual, branch.jacobian, start, tol=1e-10, max_iter=KKT_MAX_ITER
    )
    logger.debug("KKT branch %+d: lambda1=%.10g lambda2=%.10g", sign, lam1, lam2)
    return lam1, lam2


def kkt_energy_band(n_b, m, eps, eta, d=None):
    """Range of per-mode probe energies compatible with epsilon-covertness.

    Willie's mean photon number is extremised over all photon-number laws whose
    Bhattacharyya overlap with the background reaches 1 - 2 eps; the stationarity
    conditions give q_n = lambda1^2 p_n / (4 (n - lambda2)^2) and two equations for the
    multipliers, solved once per branch.

    Args:
        n_b (float): background brightness.
        m (int): number of signal modes.
        eps (float): covertness level in [0, 1/2).
        eta (float): target reflectivity.
        d (int): truncation, by default :func:`kkt_truncation`.

    Returns:
        EnergyBand: the band.
    """
    _check_eps(eps)
    if eps == 0 or n_b == 0:
        return EnergyBand(n_b, n_b, (math.inf, math.inf), (math.inf, math.inf), 0)
    d = kkt_truncation(n_b, m) if d is None else int(d)
    p = pmf_thermal(n_b, m, d + 1)
    branch = _KktBranch(p, 1.0 - 2.0 * eps)
    centre = m * n_b
    spread = math.sqrt(m * n_b * (n_b + 1.0))

    edges, lambdas1, lambdas2 = [], [], []
    for sign in (-1.0, 1.0):
        lam1, lam2 = _solve_branch(branch, centre, spread, sign, eps)
        q = branch.q(lam1, lam2)
        if q[-1] > KKT_EDGE_MASS:
            raise TruncationTooSmall(f"KKT solution keeps {q[-1]:.3e} at the truncation d={d}.")
        willie_energy = float(np.dot(branch.n, q)) / m
        edges.append((willie_energy - eta * n_b) / (1.0 - eta))
        lambdas1.append(lam1)
        lambdas2.append(lam2)
    return EnergyBand(edges[0], edges[1], tuple(lambdas1), tuple(lambdas2), d)


def kkt_fidelity_tightness(eta, n_b, m, eps, d=None):
    """Ratio of the analytic fidelity floor to the numerically minimised fidelity.

    Alice's fidelity bound is nu^M [1 + eta N_B (1 - x)]^M sum_n q_n x^n in terms of
    Willie's photon-number law q; minimising the sum under the covertness constraint
    gives q_n proportional to p_n / (x^n + lambda2)^2, with lambda2 fixed by
    (sum p t)^2 / sum p t^2 = (1 - 2 eps)^2 for t_n = 1 / (x^n + lambda2).

    Returns:
        float: analytic bound divided by the numerical minimum, at most 1.
    """
    _check_eps(eps)
    x = _check_floor(eta, n_b)
    target = 1.0 - 2.0 * eps
    log_bound = m * math.log(n_b + 1.0 - n_b / x) + 2.0 * math.log(target)
    if eps == 0:
        # the constraint pins q to the thermal law
        return math.exp(log_bound + m * math.log(n_b + 1.0 - n_b * x))
    d = kkt_truncation(n_b, m) if d is None else int(d)
    p = pmf_thermal(n_b, m, d + 1)
    p = p / p.sum()
    powers = x ** np.arange(d + 1)
    floor = powers[-1]

    def reduced(lam2):
        t = 1.0 / (powers + lam2)
        return np.dot(p, t) ** 2 / np.dot(p, t**2) - target**2

    lo = -floor * (1.0 - 1e-12)
    hi = 1.0
    for _ in range(KKT_MAX_ITER):
        if reduced(hi) > 0:
            break
        hi *= 2.0
    else:
        raise NoConvergence("Tightness multiplier search did not find an upper bracket.")
    if reduced(lo) >= 0:
        raise NoConvergence("Tightness multiplier search did not find a lower bracket.")
    lam2 = brentq(reduced, lo, hi, xtol=1e-15, rtol=1e-14, maxiter=KKT_MAX_ITER)
    q = p / (powers + lam2) ** 2
    q /= q.sum()
    if q[-1] > KKT_EDGE_MASS:
        raise TruncationTooSmall(f"Tightness solution keeps {q[-1]:.3e} at d={d}.")
    minimum = float(np.dot(q, powers))
    return math.exp(log_bound) / minimum
