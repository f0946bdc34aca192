"""Test the photon-number generating functions.

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

from qilab import genfun
from qilab.channels import PureLoss, Qla, ThermalLoss
from qilab.exceptions import NegativeEnergy, OutOfRange, RadiusViolation

POINTS = np.array([0.0, 0.3, 0.9, 1.0, -0.5, 0.6j])


def test_pgf_thermal():
    """Closed-form values, mean and radius of the thermal generating function."""
    pgf = genfun.pgf_thermal(0.5, modes=3)
    assert pgf(1.0) == pytest.approx(1.0)
    assert pgf(0.5) == pytest.approx(0.512)
    assert pgf.mean_photons == pytest.approx(1.5)
    assert pgf.modes == 3
    assert genfun.pgf_thermal(0.0)(7.0) == pytest.approx(1.0)
    with pytest.raises(RadiusViolation):
        genfun.pgf_thermal(1.0).eval(2.5)
    with pytest.raises(NegativeEnergy):
        genfun.pgf_thermal(-0.1)
    with pytest.raises(OutOfRange):
        genfun.pgf_thermal(0.1, modes=0)


def test_pgf_pmf_matches_negative_binomial():
    """FFT coefficients recover the negative-binomial law."""
    pgf = genfun.pgf_thermal(0.5, modes=2)
    assert_allclose(pgf.pmf(20), genfun.pmf_thermal(0.5, 2, 20), atol=1e-12)
    with pytest.raises(OutOfRange):
        pgf.pmf(5000)


def test_pgf_numeric():
    """Exact and truncated PMFs."""
    exact = genfun.pgf_numeric([0.25, 0.5, 0.25])
    assert exact(2.0) == pytest.approx(2.25)
    assert exact.mean_photons == pytest.approx(1.0)
    assert exact.tail_bound == 0
    truncated = genfun.pgf_numeric([0.5, 0.25])
    assert truncated.tail_bound == pytest.approx(0.25)
    assert truncated(1.0) == pytest.approx(0.75)
    with pytest.raises(RadiusViolation):
        truncated.eval(1.5)
    with pytest.raises(OutOfRange):
        genfun.pgf_numeric([0.5, 0.25], tail_bound=0.1)
    with pytest.raises(OutOfRange):
        genfun.pgf_numeric([1.2, -0.2])


def test_pure_loss_of_thermal():
    """Loss maps thermal light to thermal light of reduced brightness."""
    out = genfun.pgf_through_channel(genfun.pgf_thermal(2.0, modes=4), PureLoss(0.3))
    assert_allclose(out(POINTS), genfun.pgf_thermal(0.6, modes=4)(POINTS), rtol=1e-12)
    assert out.mean_photons == pytest.approx(2.4)


def test_amplifier_of_thermal():
    """The amplifier maps N to G N + G - 1."""
    gain = 1.5
    out = genfun.pgf_through_channel(genfun.pgf_thermal(0.4, modes=2), Qla(gain))
    expected = genfun.pgf_thermal(gain * 0.4 + gain - 1, modes=2)
    assert_allclose(out(POINTS), expected(POINTS), rtol=1e-12)
    assert out.mean_photons == pytest.approx(2 * (gain * 0.4 + gain - 1))
    with pytest.raises(RadiusViolation):
        out.eval(3.5)


def test_thermal_loss_of_thermal():
    """Thermal loss mixes the input and background brightness."""
    eta, n_b, n = 0.4, 0.3, 0.5
    out = genfun.pgf_through_channel(genfun.pgf_thermal(n, modes=3), ThermalLoss(eta, n_b))
    expected = genfun.pgf_thermal(eta * n + (1 - eta) * n_b, modes=3)
    assert_allclose(out(POINTS), expected(POINTS), rtol=1e-12)
    assert out.mean_photons == pytest.approx(3 * (eta * n + (1 - eta) * n_b))


def test_unsupported_channel():
    """Only the three bosonic channels are transformed."""
    with pytest.raises(OutOfRange):
        genfun.pgf_through_channel(genfun.pgf_thermal(0.1), "loss")


def test_mgf_views():
    """Falling and rising factorial views of a single thermal mode."""
    falling, rising = genfun.mgf_views(genfun.pgf_thermal(2.0))
    assert falling(0.1) == pytest.approx(1.25)
    assert falling(0.0) == pytest.approx(1.0)
    _, rising = genfun.mgf_views(genfun.pgf_thermal(0.5))
    assert rising(0.5) == pytest.approx(4.0)
    assert rising(0.0) == pytest.approx(1.0)
    with pytest.raises(RadiusViolation):
        rising(1.0)


def test_pmf_thermal():
    """Truncated negative-binomial law."""
    pmf = genfun.pmf_thermal(1.0, 1, 10)
    assert_allclose(pmf, 0.5 ** np.arange(1, 11))
    assert_allclose(genfun.pmf_thermal(0.0, 5, 4), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(NegativeEnergy):
        genfun.pmf_thermal(-1.0, 1, 10)


def test_pmf_through_channel():
    """Exact PMF propagation agrees with the thermal closed forms."""
    eta, n_b, n, modes = 0.4, 0.3, 0.5, 2
    pmf = genfun.pmf_thermal(n, modes, 120)
    out, lost = genfun.pmf_through_channel(pmf, ThermalLoss(eta, n_b), modes=modes)
    expected = genfun.pmf_thermal(eta * n + (1 - eta) * n_b, modes, 120)
    assert_allclose(out, expected, atol=1e-12)
    assert lost == pytest.approx(0.0, abs=1e-10)

    out, _ = genfun.pmf_through_channel(pmf, PureLoss(0.5), modes=modes)
    assert_allclose(out, genfun.pmf_thermal(0.25, modes, 120), atol=1e-12)


def test_pmf_through_channel_number_state():
    """A number state through loss is binomially thinned."""
    out, lost = genfun.pmf_through_channel([0, 0, 1.0], PureLoss(0.5))
    assert_allclose(out, [0.25, 0.5, 0.25])
    assert lost == pytest.approx(0.0)
    out, lost = genfun.pmf_through_channel([1.0], Qla(2.0), cutoff_out=200)
    assert_allclose(out[:3], [0.5, 0.25, 0.125])
    assert lost == pytest.approx(0.0, abs=1e-12)
