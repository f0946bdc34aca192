"""Test the Gaussian state machinery.

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

from qilab import gaussian_core as gc
from qilab.exceptions import (
    BadModeIndex,
    DegenerateForm,
    IoError,
    NegativeEnergy,
    NonPositiveDefinite,
    StandardFormUnavailable,
)


def _random_standard_form(rng):
    a = 0.5 + rng.uniform(0.0, 5.0)
    b = 0.5 + rng.uniform(0.0, 5.0)
    # largest c keeping nu_minus >= 1/2 is sqrt((a - 1/2)(b - 1/2))
    c = rng.uniform(0.0, 0.999) * np.sqrt((a - 0.5) * (b - 0.5))
    return gc.TwoModeStandardForm(a, b, c)


def test_symplectic_form():
    """The symplectic form in both layouts."""
    assert_allclose(gc.symplectic_form(1), [[0, 1], [-1, 0]])
    omega = gc.symplectic_form(2)
    assert_allclose(omega[:2, 2:], np.eye(2))
    assert_allclose(omega[2:, :2], -np.eye(2))
    omega3 = gc.symplectic_form(3, gc.XPXP)
    assert_allclose(omega3 @ omega3.T, np.eye(6))
    assert_allclose(omega3 @ omega3, -np.eye(6))
    assert_allclose(omega3, -omega3.T)


def test_reorder_is_an_involution():
    """Converting XXPP to XPXP and back leaves a matrix unchanged."""
    rng = np.random.default_rng(7)
    matrix = rng.normal(size=(6, 6))
    there = gc.reorder(matrix, gc.XXPP, gc.XPXP)
    assert_allclose(gc.reorder(there, gc.XPXP, gc.XXPP), matrix, rtol=0, atol=0)
    vector = np.arange(6.0)
    assert_allclose(gc.reorder(vector, gc.XXPP, gc.XPXP), [0, 3, 1, 4, 2, 5])


def test_symplectic_eigenvalues():
    """Vacuum, thermal and TMSV spectra."""
    assert_allclose(gc.symplectic_eigenvalues(gc.vacuum()), [0.5])
    assert_allclose(gc.symplectic_eigenvalues(gc.thermal(1.0)), [1.5])
    assert_allclose(gc.symplectic_eigenvalues(gc.tmsv(0.3)), [0.5, 0.5], atol=1e-10)
    product = gc.tensor_product(gc.thermal(2.0), gc.thermal(0.25))
    assert_allclose(gc.symplectic_eigenvalues(product), [2.5, 0.75])


def test_invalid_covariance_is_rejected():
    """Covariances below the vacuum level break the uncertainty principle."""
    with pytest.raises(NonPositiveDefinite):
        gc.GaussianState(np.zeros(2), 0.2 * np.eye(2))
    with pytest.raises(NonPositiveDefinite):
        gc.GaussianState(np.zeros(2), [[1.0, 0.5], [0.0, 1.0]])


def test_standard_decomposition_examples():
    """Uncorrelated and pure standard forms."""
    nu_plus, nu_minus, s_tilde = gc.two_mode_standard_decomposition(
        gc.TwoModeStandardForm(0.8, 0.8, 0.0)
    )
    assert nu_plus == pytest.approx(0.8)
    assert nu_minus == pytest.approx(0.8)
    assert_allclose(s_tilde, np.eye(4), atol=1e-12)

    n_s = 1.0
    form = gc.TwoModeStandardForm(n_s + 0.5, n_s + 0.5, np.sqrt(n_s * (n_s + 1)))
    nu_plus, nu_minus, _ = gc.two_mode_standard_decomposition(form)
    assert nu_plus == 0.5
    assert nu_minus == 0.5


def test_standard_decomposition_reconstructs_random_forms():
    """S diag(nu-, nu-, nu+, nu+) S^T rebuilds the standard form."""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        form = _random_standard_form(rng)
        nu_plus, nu_minus, s_tilde = gc.two_mode_standard_decomposition(form)
        rebuilt = s_tilde @ np.diag([nu_minus, nu_minus, nu_plus, nu_plus]) @ s_tilde.T
        assert_allclose(rebuilt, form.matrix(), atol=1e-10)
        state = gc.GaussianState(np.zeros(4), form.matrix(), ordering=gc.XPXP)
        assert_allclose(
            gc.symplectic_eigenvalues(state), sorted([nu_plus, nu_minus], reverse=True), atol=1e-10
        )


def test_standard_decomposition_is_symplectic():
    """The Williamson matrix preserves the XPXP symplectic form."""
    form = gc.TwoModeStandardForm(1.3, 2.1, 0.9)
    _, _, s_tilde = gc.two_mode_standard_decomposition(form)
    omega = gc.symplectic_form(2, gc.XPXP)
    assert_allclose(s_tilde @ omega @ s_tilde.T, omega, atol=1e-12)


def test_degenerate_form():
    """(a+b)^2 = 4c^2 has no decomposition."""
    with pytest.raises(DegenerateForm):
        gc.two_mode_standard_decomposition(gc.TwoModeStandardForm(1.0, 1.0, 1.0))


def test_williamson_blocks_of_rotated_correlations():
    """Correlations equal to a rotated reflection are brought back to the standard form."""
    form = gc.TwoModeStandardForm(1.4, 0.9, 0.6)
    cov = form.matrix()
    theta = 0.7
    rotation = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    local = np.eye(4)
    local[2:, 2:] = rotation
    rotated = gc.GaussianState(np.zeros(4), local @ cov @ local.T, ordering=gc.XPXP)
    nu, symplectic = gc.williamson_blocks(rotated)
    assert_allclose(symplectic @ np.diag(np.repeat(nu, 2)) @ symplectic.T, rotated.cov, atol=1e-10)
    assert_allclose(sorted(nu), sorted(gc.symplectic_eigenvalues(rotated)), atol=1e-10)


def test_williamson_blocks_rejects_squeezed_marginals():
    """Non-isotropic local covariances are outside the supported block forms."""
    cov = np.diag([2.0, 0.2, 1.0, 1.0])
    cov[0, 2] = cov[2, 0] = 0.1
    state = gc.GaussianState(np.zeros(4), cov, ordering=gc.XPXP)
    with pytest.raises(StandardFormUnavailable):
        gc.williamson_blocks(state)


def test_make_state():
    """Standard constructors."""
    assert_allclose(gc.make_state("thermal", n=0.0).cov, gc.vacuum().cov)
    coh = gc.make_state("coherent", alpha=1 + 0j)
    assert_allclose(coh.mean, [np.sqrt(2.0), 0.0])
    assert_allclose(coh.cov, 0.5 * np.eye(2))
    assert np.linalg.det(gc.make_state("tmsv", n_s=0.5).cov) == pytest.approx(1 / 16)
    with pytest.raises(NegativeEnergy):
        gc.make_state("thermal", n=-0.1)


def test_constructed_states_are_physical():
    """V + i Omega / 2 is positive semidefinite for every constructor."""
    states = [
        gc.vacuum(3),
        gc.thermal(0.7, 2),
        gc.coherent(0.3 - 1.2j, n=0.4),
        gc.tmsv(2.5),
        gc.tensor_product(gc.tmsv(0.1), gc.thermal(4.0)),
    ]
    for state in states:
        assert gc.uncertainty_min_eigenvalue(state) >= -1e-9


def test_mean_photons_and_reduced():
    """Marginals of a TMSV are thermal."""
    state = gc.tmsv(0.8)
    assert state.mean_photons() == pytest.approx(1.6)
    idler = state.reduced(1)
    assert_allclose(idler.cov, gc.thermal(0.8).cov, atol=1e-12)
    assert gc.coherent(1j).mean_photons(0) == pytest.approx(1.0)
    with pytest.raises(BadModeIndex):
        state.reduced(2)


def test_state_json_round_trip(tmp_path):
    """State files are read back as written."""
    path = tmp_path / "state.json"
    state = gc.tensor_product(gc.coherent(0.5), gc.thermal(0.2))
    gc.dump_state_json(state, path)
    loaded = gc.load_state_json(path)
    assert loaded.modes == 2
    assert_allclose(loaded.mean, state.mean)
    assert_allclose(loaded.cov, state.cov)

    broken = tmp_path / "broken.json"
    broken.write_text('{"modes": 1, "mean": [0, 0]}')
    with pytest.raises(IoError):
        gc.load_state_json(broken)
