"""Test single-photon entangled probes without a passive signature.

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

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.optimize import brentq

from qilab import spes
from qilab.channels import apply_fock
from qilab.distinguish import coherent_illumination_exponent
from qilab.exceptions import DegenerateVariances, OutOfRange


def test_scenario():
    """Adjusted background and cascade parameters."""
    sc = spes.NpsScenario(0.2, 0.4, 0.1)
    assert sc.adjusted_n_b == pytest.approx(0.5)
    assert sc.gain == pytest.approx(1.4)
    assert sc.transmittance == pytest.approx(0.2 / 1.4)
    assert sc.channel.cascade[1].gain == pytest.approx(1.4)
    assert sc.cutoff > 10
    with pytest.raises(OutOfRange):
        spes.NpsScenario(1.0, 0.4, 0.1)
    with pytest.raises(OutOfRange):
        spes.NpsScenario(0.2, -0.4, 0.1)


def test_spes_state():
    """The probe splits one photon between idler and signal."""
    rho = spes.spes_state(0.3)
    assert rho.trace() == pytest.approx(1.0)
    assert rho.mean_photons(mode=1) == pytest.approx(0.3)
    assert rho.mean_photons(mode=0) == pytest.approx(0.7)
    assert_allclose(np.abs(spes.spes_generation(0.3).matrix), np.abs(rho.matrix), atol=1e-14)
    with pytest.raises(OutOfRange):
        spes.spes_state(1.2)


@pytest.mark.parametrize("eta", [0.01, 0.1, 0.5])
@pytest.mark.parametrize("n_b", [0.01, 0.2, 2.0])
@pytest.mark.parametrize("n_s", [0.01, 0.3, 0.9])
def test_returned_states(eta, n_b, n_s):
    """The closed-form return agrees with the channel and keeps the background level."""
    sc = spes.NpsScenario(eta, n_b, n_s)
    rho0, rho1 = spes.spes_returned_states(sc)
    composed = apply_fock(
        sc.channel,
        spes.spes_state(n_s),
        mode=1,
        cutoff_out=sc.cutoff,
        tail_tol=spes.COMPOSITION_TAIL_TOL,
    )
    assert_allclose(rho1.matrix, composed.matrix, rtol=0, atol=1e-10)
    assert rho1.trace() == pytest.approx(1.0, abs=1e-8)
    assert rho0.mean_photons(mode=1) == pytest.approx(n_b, rel=1e-7)
    assert rho1.mean_photons(mode=1) == pytest.approx(eta * n_s + n_b, rel=1e-7)
    assert rho1.mean_photons(mode=0) == pytest.approx(1 - n_s, rel=1e-8)
    assert rho1.min_eigenvalue() > -1e-12


def test_returned_states_without_target():
    """Zero reflectivity leaves the idler and the background uncorrelated."""
    rho0, rho1 = spes.spes_returned_states(spes.NpsScenario(0.0, 0.3, 0.4))
    assert_allclose(rho1.matrix, rho0.matrix, atol=1e-12)


def test_bhattacharyya_exponent_nps():
    """All three probes carry information and vanish with the signal."""
    sc = spes.NpsScenario(0.05, 0.2, 0.1)
    exponents = {probe: spes.bhattacharyya_exponent_nps(probe, sc) for probe in spes.PROBES}
    assert all(value > 0 for value in exponents.values())
    assert spes.bhattacharyya_exponent_nps("spes", spes.NpsScenario(0.05, 0.2, 0.0)) == 0.0
    assert spes.bhattacharyya_exponent_nps("tmsv", spes.NpsScenario(0.0, 0.2, 0.1)) == 0.0
    with pytest.raises(OutOfRange):
        spes.bhattacharyya_exponent_nps("laser", sc)


def test_spes_beats_coherent_for_weak_signals():
    """SPES outperforms a coherent probe of equal energy only below N_S of about one half."""

    def advantage(n_s):
        sc = spes.NpsScenario(0.01, 0.2, n_s)
        return spes.bhattacharyya_exponent_nps("spes", sc) - spes.bhattacharyya_exponent_nps(
            "coherent", sc
        )

    assert advantage(0.35) > 0
    assert advantage(0.47) > 0
    assert advantage(0.6) < 0
    crossover = brentq(advantage, 0.35, 0.6, xtol=1e-4)
    assert 0.47 < crossover < 0.6


def test_coherent_probe_exponent():
    """A coherent probe returns a displaced thermal state of unchanged brightness."""
    eta, n_b, n_s = 0.05, 0.7, 2.0
    value = spes.bhattacharyya_exponent_nps("coherent", spes.NpsScenario(eta, n_b, n_s))
    assert value == pytest.approx(coherent_illumination_exponent(eta, n_s, n_b), rel=1e-8)


def test_ri_covariance():
    """Signatures sit in the phase-sensitive blocks for TMSV, insensitive ones for SPES."""
    sc = spes.NpsScenario(0.1, 0.5, 0.2)
    n_r = 0.1 * 0.2 + 0.5
    tmsv = spes.ri_covariance("tmsv", sc)
    assert_allclose(np.diag(tmsv).real, [n_r + 1, 1.2, n_r, 0.2])
    signature = np.sqrt(0.1 * 0.2 * 1.2)
    for row, col in [(0, 3), (1, 2), (2, 1), (3, 0)]:
        assert tmsv[row, col] == pytest.approx(signature)
    assert tmsv[0, 1] == 0
    probe = spes.ri_covariance("spes", sc)
    assert_allclose(np.diag(probe).real, [n_r + 1, 1.8, n_r, 0.8])
    signature = np.sqrt(0.1 * 0.2 * 0.8)
    for row, col in [(0, 1), (1, 0), (2, 3), (3, 2)]:
        assert probe[row, col] == pytest.approx(signature)
    assert probe[0, 3] == 0
    with pytest.raises(OutOfRange):
        spes.ri_covariance("coherent", sc)


def test_threshold_exponent():
    """Gaussian-approximated threshold test."""
    t_star, chi = spes.threshold_exponent(spes.GaussianMoments1D(0.0, 1.0, 2.0, 1.0))
    assert t_star == pytest.approx(1.0)
    assert chi == pytest.approx(0.5)
    assert spes.threshold_exponent(spes.GaussianMoments1D(1.0, 0.0, 1.0, 0.0)) == (1.0, 0.0)
    with pytest.raises(DegenerateVariances):
        spes.threshold_exponent(spes.GaussianMoments1D(0.0, 0.0, 1.0, 0.0))
    with pytest.raises(OutOfRange):
        spes.GaussianMoments1D(0.0, -1.0, 1.0, 1.0)


def test_return_counting_moments():
    """Counting the return alone sees the thermal statistics plus eta N_S."""
    eta, n_b, n_s = 0.1, 0.5, 0.2
    moments = spes.mmpc_moments(spes.NpsScenario(eta, n_b, n_s), 1.0)
    assert moments.mu0 == pytest.approx(n_b, rel=1e-10)
    assert moments.sigma0 == pytest.approx(np.sqrt(n_b * (n_b + 1)), rel=1e-10)
    assert moments.mu1 == pytest.approx(n_b + eta * n_s, rel=1e-10)
    idler = spes.mmpc_moments(spes.NpsScenario(eta, n_b, n_s), 0.0)
    assert idler.mu0 == pytest.approx(1 - n_s)
    assert idler.mu1 == pytest.approx(1 - n_s)
    assert spes.mmpc_exponent(spes.NpsScenario(eta, n_b, n_s), 0.0) == pytest.approx(0.0)
    with pytest.raises(OutOfRange):
        spes.mmpc_moments(spes.NpsScenario(eta, n_b, n_s), 1.5)


def test_mmpdc_matches_weak_signal_limit():
    """The balanced receiver reaches eta N_S / (6 N_B + 2) for weak signals."""
    eta, n_b, n_s = 0.01, 100.0, 1e-3
    sc = spes.NpsScenario(eta, n_b, n_s)
    expected = spes.mmpdc_exponent_asymptotic(eta, n_s, n_b)
    assert expected == pytest.approx(eta * n_s / 602)
    assert spes.mmpdc_exponent(sc, 0.5) == pytest.approx(expected, rel=0.02)


def test_optimal_mmpc():
    """The best photon-counting mixer sits just below the weak-signal exponent.

    At small kappa the idler variance N_S (1 - N_S) competes with kappa^2 N_B (N_B + 1),
    so the optimum is kappa ~ sqrt(N_S / (N_B (N_B + 1))) and falls about 2.2% short of
    the kappa -> 0 limit eta N_S / (6 N_B + 2).
    """
    eta, n_b, n_s = 0.01, 100.0, 1e-3
    chi, kappa = spes.optimal_mmpc_exponent(spes.NpsScenario(eta, n_b, n_s))
    assert kappa == pytest.approx(np.sqrt(n_s * (1 - n_s) / (n_b * (n_b + 1))), rel=0.05)
    assert chi / (eta * n_s / (6 * n_b + 2)) == pytest.approx(0.978, abs=3e-3)
    assert spes.mmpc_exponent_asymptotic(eta, n_s, n_b, 0.0) == pytest.approx(
        spes.mmpdc_exponent_asymptotic(eta, n_s, n_b)
    )
    assert spes.mmpc_exponent_asymptotic(eta, n_s, n_b, 1.0) == 0.0
