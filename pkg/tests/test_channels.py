"""Test the bosonic channels.

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

from qilab import channels as ch
from qilab import fock
from qilab import gaussian_core as gc
from qilab.exceptions import BadModeIndex, CutoffOverflow, OutOfRange


def _random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_decompose_thermal_loss():
    """Gain and transmittance of the loss/amplifier cascade."""
    eta_tilde, gain = ch.decompose_thermal_loss(0.01, 0.2)
    assert gain == pytest.approx(1.198)
    assert eta_tilde == pytest.approx(0.00834724, rel=1e-6)
    assert ch.decompose_thermal_loss(1.0, 3.0) == (1.0, 1.0)
    assert ch.decompose_thermal_loss(0.3, 0.0) == (0.3, 1.0)


def test_channel_parameters_are_checked():
    """Out-of-range parameters are rejected."""
    with pytest.raises(OutOfRange):
        ch.PureLoss(1.5)
    with pytest.raises(OutOfRange):
        ch.Qla(0.5)
    with pytest.raises(OutOfRange):
        ch.ThermalLoss(0.5, -1.0)
    assert ch.ThermalLoss(0.5, 1.0) == ch.ThermalLoss(0.5, 1.0)
    assert ch.ThermalLoss(0.5, 1.0).cascade == (ch.PureLoss(0.5 / 1.5), ch.Qla(1.5))


def test_apply_gaussian_examples():
    """Thermal loss, amplification and pure loss on standard inputs."""
    out = ch.apply_gaussian(ch.ThermalLoss(0.3, 2.0), gc.vacuum())
    assert out.mean_photons() == pytest.approx(0.7 * 2.0)
    amplified = ch.apply_gaussian(ch.Qla(1.7), gc.vacuum())
    assert_allclose(amplified.cov, gc.thermal(0.7).cov)
    alpha = 0.8 - 0.3j
    lossy = ch.apply_gaussian(ch.PureLoss(0.4), gc.coherent(alpha))
    expected = gc.coherent(np.sqrt(0.4) * alpha)
    assert_allclose(lossy.mean, expected.mean)
    assert_allclose(lossy.cov, expected.cov)
    with pytest.raises(BadModeIndex):
        ch.apply_gaussian(ch.Qla(2.0), gc.vacuum(), mode=1)


def test_cascade_equivalence():
    """Thermal loss equals pure loss followed by the amplifier."""
    state = gc.tmsv(0.6)
    channel = ch.ThermalLoss(0.35, 1.4)
    loss, amp = channel.cascade
    direct = ch.apply_gaussian(channel, state, mode=0)
    staged = ch.apply_gaussian(amp, ch.apply_gaussian(loss, state, mode=0), mode=0)
    assert_allclose(direct.cov, staged.cov, atol=1e-14)
    assert_allclose(direct.mean, staged.mean, atol=1e-14)


def test_thermal_loss_moments():
    """Output moments eta V + (1 - eta)(N_B + 1/2) I on the acted mode, sqrt(eta) on cross terms."""
    eta, n_b = 0.2, 0.9
    state = gc.tmsv(1.1)
    out = ch.apply_gaussian(ch.ThermalLoss(eta, n_b), state, mode=0)
    expected = state.cov.copy()
    scale = np.array([np.sqrt(eta), 1.0, np.sqrt(eta), 1.0])
    expected = np.outer(scale, scale) * expected
    expected[0, 0] += (1 - eta) * (n_b + 0.5)
    expected[2, 2] += (1 - eta) * (n_b + 0.5)
    assert_allclose(out.cov, expected, atol=1e-12)


def test_fock_loss_on_single_photon():
    """A lossy photon survives with probability eta."""
    rho = ch.apply_fock(ch.PureLoss(0.3), fock.fock_number(1, 3))
    assert_allclose(np.diag(rho.matrix).real, [0.7, 0.3, 0.0], atol=1e-14)


def test_fock_amplifier_on_vacuum():
    """The amplifier turns the vacuum into a thermal state of mean G - 1."""
    rho = ch.apply_fock(ch.Qla(1.5), fock.fock_number(0, 80), cutoff_out=80)
    assert_allclose(np.diag(rho.matrix).real, fock.thermal_pmf(0.5, 80), atol=1e-14)
    assert rho.mean_photons() == pytest.approx(0.5, abs=1e-10)


def test_fock_matches_gaussian_moments():
    """Photon-number mean and variance of a coherent input agree across representations."""
    alpha, eta, n_b = 1.0, 0.5, 0.5
    channel = ch.ThermalLoss(eta, n_b)
    rho = ch.apply_fock(channel, fock.fock_coherent(alpha, 40), cutoff_out=80)
    gaussian = ch.apply_gaussian(channel, gc.coherent(alpha))
    thermal_part = gaussian.cov[0, 0] - 0.5
    displacement = 0.5 * float(gaussian.mean @ gaussian.mean)
    mean, variance = rho.photon_number_moments()
    assert mean == pytest.approx(gaussian.mean_photons(), abs=1e-8)
    expected_var = thermal_part * (thermal_part + 1) + displacement * (2 * thermal_part + 1)
    assert variance == pytest.approx(expected_var, abs=1e-8)


def test_fock_channels_preserve_trace_and_positivity():
    """Random inputs keep unit trace and stay positive semidefinite."""
    rng = np.random.default_rng(11)
    for _ in range(5):
        rho = fock.FockOperator(_random_density(rng, 6), [6])
        for channel in (ch.PureLoss(0.6), ch.Qla(1.3), ch.ThermalLoss(0.7, 0.4)):
            out = ch.apply_fock(channel, rho, cutoff_out=120)
            assert out.trace() == pytest.approx(1.0, abs=1e-9)
            assert out.min_eigenvalue() >= -1e-10


def test_fock_channel_on_one_mode_of_two():
    """Acting on the second mode leaves the first marginal untouched."""
    rho = fock.tensor(fock.fock_thermal(0.3, 10), fock.fock_number(1, 2))
    out = ch.apply_fock(ch.ThermalLoss(0.5, 0.2), rho, mode=1, cutoff_out=40)
    assert out.mode_dims == (10, 40)
    assert_allclose(out.partial_trace([0]).matrix, rho.partial_trace([0]).matrix, atol=1e-12)
    assert out.mean_photons(1) == pytest.approx(0.5 * 1 + 0.5 * 0.2, abs=1e-9)


def test_cutoff_overflow():
    """An amplifier into too small a space loses trace."""
    with pytest.raises(CutoffOverflow):
        ch.apply_fock(ch.Qla(3.0), fock.fock_number(0, 5))


def test_cutoff_for():
    """The advisory cutoff bounds the output tail."""
    channel = ch.ThermalLoss(0.5, 2.0)
    assert ch.output_mean_photons(channel, 1.0) == pytest.approx(1.5)
    cutoff = ch.cutoff_for(channel, 1.0, 1e-9)
    assert (1.5 / 2.5) ** cutoff <= 1e-9
