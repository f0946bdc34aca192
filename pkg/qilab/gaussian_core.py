"""Gaussian states, symplectic machinery and the standard probe and background states.

Quadratures follow x = (a + a^dag)/sqrt(2) with vacuum variance 1/2. The canonical
layout is XXPP, (x_1..x_M, p_1..p_M); XPXP, (x_1, p_1, .., x_M, p_M), is used for
the two-mode standard form.

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

import json
import logging
from pathlib import Path

import numpy as np
from scipy.linalg import block_diag

from qilab.exceptions import (
    BadModeIndex,
    DegenerateForm,
    IoError,
    NegativeEnergy,
    NonPositiveDefinite,
    OutOfRange,
    StandardFormUnavailable,
)

logger = logging.getLogger(__name__)

XXPP = "xxpp"
XPXP = "xpxp"
ORDERINGS = (XXPP, XPXP)

SYMPLECTIC_TOL = 1e-9
SYMMETRY_TOL = 1e-12
# symplectic eigenvalues this close to 1/2 are snapped to exactly 1/2
PURITY_SNAP = 1e-10
# relative tolerance when recognising block structure
STRUCTURE_TOL = 1e-9


def _check_ordering(ordering):
    if ordering not in ORDERINGS:
        raise OutOfRange(f"Unknown quadrature ordering {ordering!r}, expected one of {ORDERINGS}.")


def symplectic_form(modes, ordering=XXPP):
    """Return the 2M x 2M symplectic form for the given quadrature layout.

    Args:
        modes (int): number of modes M >= 1.
        ordering (str): ``"xxpp"`` or ``"xpxp"``.

    Returns:
        numpy.ndarray: antisymmetric Omega with Omega @ Omega = -I.
    """
    if modes < 1:
        raise OutOfRange(f"Number of modes must be positive, got {modes}.")
    _check_ordering(ordering)
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    if ordering == XXPP:
        return np.kron(j, np.eye(modes))
    return np.kron(np.eye(modes), j)


def _xpxp_indices(modes):
    """Positions in the XXPP vector of the XPXP entries."""
    return np.ravel(np.column_stack([np.arange(modes), np.arange(modes) + modes]))


def reorder(array, source, target):
    """Convert a quadrature vector or matrix between the XXPP and XPXP layouts.

    ``reorder(reorder(a, s, t), t, s)`` returns ``a`` exactly, since only a
    permutation is applied.
    """
    _check_ordering(source)
    _check_ordering(target)
    array = np.asarray(array, dtype=float)
    if source == target:
        return array.copy()
    modes = array.shape[0] // 2
    perm = _xpxp_indices(modes)
    if source == XPXP:
        perm = np.argsort(perm)
    if array.ndim == 1:
        return array[perm]
    return array[np.ix_(perm, perm)]


class GaussianState:
    """An immutable M-mode Gaussian state.

    Attributes:
        modes: number of modes M
        mean: quadrature mean vector of length 2M
        cov: symmetric 2M x 2M covariance matrix
        ordering: quadrature layout, ``"xxpp"`` or ``"xpxp"``
    """

    def __init__(self, mean, cov, ordering=XXPP, validate=True):
        """Constructor."""
        _check_ordering(ordering)
        cov = np.array(cov, dtype=float)
        mean = np.array(mean, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise OutOfRange(f"Covariance must be square of even dimension, got {cov.shape}.")
        if mean.shape != (cov.shape[0],):
            raise OutOfRange(
                f"Mean of shape {mean.shape} does not match covariance of shape {cov.shape}."
            )
        cov.flags.writeable = False
        mean.flags.writeable = False
        self.mean = mean
        self.cov = cov
        self.ordering = ordering
        self.modes = cov.shape[0] // 2
        if validate:
            validate_state(self)

    def __repr__(self):
        """Short description."""
        return f"GaussianState(modes={self.modes}, ordering={self.ordering!r})"

    def reordered(self, ordering):
        """Return the same state in another quadrature layout."""
        return GaussianState(
            reorder(self.mean, self.ordering, ordering),
            reorder(self.cov, self.ordering, ordering),
            ordering=ordering,
            validate=False,
        )

    def _xxpp(self):
        return self if self.ordering == XXPP else self.reordered(XXPP)

    def reduced(self, modes):
        """Marginal state of the listed modes, in the same layout as ``self``."""
        modes = [int(k) for k in np.atleast_1d(modes)]
        for k in modes:
            if not 0 <= k < self.modes:
                raise BadModeIndex(f"Mode {k} is out of range for a {self.modes}-mode state.")
        state = self._xxpp()
        idx = np.concatenate([modes, np.asarray(modes) + self.modes])
        reduced = GaussianState(
            state.mean[idx], state.cov[np.ix_(idx, idx)], ordering=XXPP, validate=False
        )
        return reduced.reordered(self.ordering)

    def mean_photons(self, mode=None):
        """Mean photon number of one mode, or of all modes when ``mode`` is None."""
        state = self._xxpp()
        m = self.modes
        diag = np.diag(state.cov)
        per_mode = 0.5 * (diag[:m] + diag[m:] + state.mean[:m] ** 2 + state.mean[m:] ** 2) - 0.5
        if mode is None:
            return float(np.sum(per_mode))
        if not 0 <= mode < m:
            raise BadModeIndex(f"Mode {mode} is out of range for a {m}-mode state.")
        return float(per_mode[mode])


def uncertainty_min_eigenvalue(state):
    """Smallest eigenvalue of V + i Omega / 2; non-negative for physical states."""
    omega = symplectic_form(state.modes, state.ordering)
    return float(np.linalg.eigvalsh(state.cov + 0.5j * omega).min())


def validate_state(state, tol=SYMPLECTIC_TOL):
    """Check symmetry and the uncertainty principle, raising NonPositiveDefinite."""
    cov = state.cov
    scale = max(1.0, float(np.abs(cov).max()))
    if np.abs(cov - cov.T).max() > SYMMETRY_TOL * scale:
        raise NonPositiveDefinite("Covariance matrix is not symmetric.")
    min_eig = uncertainty_min_eigenvalue(state)
    if min_eig < -tol:
        raise NonPositiveDefinite(
            f"V + i Omega/2 has eigenvalue {min_eig:.3e}, the uncertainty principle fails."
        )


def _symmetric_sqrt(matrix):
    eigvals, eigvecs = np.linalg.eigh(matrix)
    if eigvals.min() <= 0:
        raise NonPositiveDefinite(f"Matrix is not positive definite (eigenvalue {eigvals.min()}).")
    return (eigvecs * np.sqrt(eigvals)) @ eigvecs.T


def symplectic_eigenvalues(state, tol=SYMPLECTIC_TOL):
    """Symplectic spectrum of the covariance, sorted in descending order.

    The spectrum of i Omega V is obtained from the Hermitian matrix
    i V^(1/2) Omega V^(1/2), which shares its eigenvalues, so that round-off
    never produces complex values.

    Args:
        state (GaussianState): the state.
        tol (float): tolerance of the uncertainty-principle check.

    Returns:
        numpy.ndarray: the M symplectic eigenvalues, each >= 1/2.
    """
    min_eig = uncertainty_min_eigenvalue(state)
    if min_eig < -tol:
        raise NonPositiveDefinite(
            f"V + i Omega/2 has eigenvalue {min_eig:.3e}, the uncertainty principle fails."
        )
    omega = symplectic_form(state.modes, state.ordering)
    root = _symmetric_sqrt(state.cov)
    spectrum = np.abs(np.linalg.eigvalsh(1j * root @ omega @ root))
    nu = np.sort(spectrum)[::-1][::2]
    nu[np.abs(nu - 0.5) < PURITY_SNAP] = 0.5
    return nu


class TwoModeStandardForm:
    """Block covariance [[a I, diag(c, -c)], [diag(c, -c), b I]] in XPXP layout.

    Attributes:
        a: variance of the first mode
        b: variance of the second mode
        c: correlation, c >= 0
    """

    def __init__(self, a, b, c):
        """Constructor."""
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        if self.a < 0.5 - SYMPLECTIC_TOL or self.b < 0.5 - SYMPLECTIC_TOL:
            raise NonPositiveDefinite(f"Standard form needs a, b >= 1/2, got a={a}, b={b}.")
        if self.c < 0:
            raise OutOfRange(f"Standard form correlation must be non-negative, got c={c}.")

    def matrix(self):
        """The 4 x 4 covariance in XPXP layout."""
        a, b, c = self.a, self.b, self.c
        return np.array(
            [[a, 0, c, 0], [0, a, 0, -c], [c, 0, b, 0], [0, -c, 0, b]], dtype=float
        )


def two_mode_standard_decomposition(form):
    """Symplectic eigenvalues and Williamson matrix of a two-mode standard form.

    Args:
        form (TwoModeStandardForm): the (a, b, c) triple.

    Returns:
        tuple: ``(nu_plus, nu_minus, s_tilde)`` where ``s_tilde`` satisfies
        ``s_tilde @ diag(nu_minus, nu_minus, nu_plus, nu_plus) @ s_tilde.T == V``
        in XPXP layout, i.e. nu_minus belongs to the mode of variance ``a``.
    """
    a, b, c = form.a, form.b, form.c
    y = (a + b) ** 2 - 4 * c**2
    if y <= 0:
        raise DegenerateForm(f"(a+b)^2 - 4c^2 = {y:.3e} is not positive for a={a}, b={b}, c={c}.")
    root_y = np.sqrt(y)
    nu_plus = 0.5 * (root_y + (b - a))
    nu_minus = 0.5 * (root_y - (b - a))
    if min(nu_plus, nu_minus) < 0.5 - SYMPLECTIC_TOL:
        raise NonPositiveDefinite(
            f"Standard form (a={a}, b={b}, c={c}) violates the bonafide condition."
        )
    omega_plus = np.sqrt((a + b + root_y) / (2 * root_y))
    omega_minus = np.sqrt(max(a + b - root_y, 0.0) / (2 * root_y))
    swap_z = np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.diag([1.0, -1.0]))
    s_tilde = omega_plus * np.eye(4) + omega_minus * swap_z
    nu_plus, nu_minus = (0.5 if abs(v - 0.5) < PURITY_SNAP else v for v in (nu_plus, nu_minus))
    return nu_plus, nu_minus, s_tilde


def _one_mode_williamson(block):
    nu = np.sqrt(np.linalg.det(block))
    if nu < 0.5 - SYMPLECTIC_TOL:
        raise NonPositiveDefinite(f"Single-mode block has symplectic eigenvalue {nu:.6f} < 1/2.")
    nu = 0.5 if abs(nu - 0.5) < PURITY_SNAP else nu
    return nu, _symmetric_sqrt(block / nu)


def _two_mode_williamson(block):
    """Williamson data of a 4 x 4 XPXP block locally equivalent to a standard form."""
    scale = max(1.0, float(np.abs(block).max()))
    tol = STRUCTURE_TOL * scale
    first, second, cross = block[:2, :2], block[2:, 2:], block[:2, 2:]
    if np.abs(cross).max() <= tol:
        nu_a, s_a = _one_mode_williamson(first)
        nu_b, s_b = _one_mode_williamson(second)
        return np.array([nu_a, nu_b]), block_diag(s_a, s_b)

    a, b = first[0, 0], second[0, 0]
    if (
        np.abs(first - a * np.eye(2)).max() > tol
        or np.abs(second - b * np.eye(2)).max() > tol
    ):
        raise StandardFormUnavailable(
            "Two-mode block has non-isotropic local covariances; "
            "only the standard form is supported."
        )
    c = np.sqrt(abs(np.linalg.det(cross)))
    orth = cross / c
    if np.abs(orth @ orth.T - np.eye(2)).max() > STRUCTURE_TOL * 1e3 or np.linalg.det(orth) > 0:
        raise StandardFormUnavailable(
            "Two-mode correlation block is not a scaled reflection, only the standard form "
            "is supported."
        )
    # local rotation of the second mode bringing the correlations to diag(c, -c)
    rotation = np.diag([1.0, -1.0]) @ orth
    local = block_diag(np.eye(2), rotation)
    nu_plus, nu_minus, s_tilde = two_mode_standard_decomposition(TwoModeStandardForm(a, b, c))
    return np.array([nu_minus, nu_plus]), local.T @ s_tilde


def coupled_blocks(*states):
    """Partition the modes into groups coupled in any of the given states.

    Returns:
        list: sorted lists of mode indices, one per connected group.
    """
    modes = states[0].modes
    parent = list(range(modes))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for state in states:
        cov = state.reordered(XPXP).cov
        scale = max(1.0, float(np.abs(cov).max()))
        for i in range(modes):
            for j in range(i + 1, modes):
                if np.abs(cov[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]).max() > STRUCTURE_TOL * scale:
                    parent[find(j)] = find(i)
    groups = {}
    for k in range(modes):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


def williamson_blocks(state, blocks=None):
    """Per-mode symplectic eigenvalues and a symplectic matrix diagonalising the state.

    Only products of one- and two-mode blocks are supported, where each two-mode
    block is locally equivalent to the standard form.

    Args:
        state (GaussianState): the state.
        blocks (list): mode groups, by default the state's own coupling structure.

    Returns:
        tuple: ``(nu, s)`` with ``nu`` of length M and ``s`` in XPXP layout such that
        ``s @ diag(repeat(nu, 2)) @ s.T`` equals the XPXP covariance.
    """
    if blocks is None:
        blocks = coupled_blocks(state)
    cov = state.reordered(XPXP).cov
    nu = np.zeros(state.modes)
    symplectic = np.zeros_like(cov)
    for group in blocks:
        if len(group) > 2:
            raise StandardFormUnavailable(
                f"Modes {group} form a coupled block of size {len(group)}, at most 2 is supported."
            )
        idx = np.ravel([[2 * k, 2 * k + 1] for k in group])
        block = cov[np.ix_(idx, idx)]
        if len(group) == 1:
            block_nu, block_s = _one_mode_williamson(block)
            block_nu = np.array([block_nu])
        else:
            block_nu, block_s = _two_mode_williamson(block)
        nu[group] = block_nu
        symplectic[np.ix_(idx, idx)] = block_s
    return nu, symplectic


def vacuum(modes=1):
    """The M-mode vacuum."""
    return GaussianState(np.zeros(2 * modes), 0.5 * np.eye(2 * modes))


def thermal(n, modes=1):
    """Thermal state with mean photon number ``n`` in each mode."""
    if n < 0:
        raise NegativeEnergy(f"Thermal mean photon number must be >= 0, got {n}.")
    return GaussianState(np.zeros(2 * modes), (n + 0.5) * np.eye(2 * modes))


def coherent(alpha, n=0.0):
    """Single-mode coherent state, or a displaced thermal state when ``n`` > 0."""
    if n < 0:
        raise NegativeEnergy(f"Thermal mean photon number must be >= 0, got {n}.")
    alpha = complex(alpha)
    mean = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return GaussianState(mean, (n + 0.5) * np.eye(2))


def tmsv(n_s):
    """Two-mode squeezed vacuum with signal (mode 0) and idler (mode 1) energy ``n_s``."""
    if n_s < 0:
        raise NegativeEnergy(f"TMSV mean photon number must be >= 0, got {n_s}.")
    s = n_s + 0.5
    c = np.sqrt(n_s * (n_s + 1))
    x_block = np.array([[s, c], [c, s]])
    p_block = np.array([[s, -c], [-c, s]])
    return GaussianState(np.zeros(4), block_diag(x_block, p_block))


def tensor_product(*states):
    """Product state of the given states, modes concatenated in order."""
    states = [state._xxpp() for state in states]  # pylint: disable=protected-access
    xs = np.concatenate([s.mean[: s.modes] for s in states])
    ps = np.concatenate([s.mean[s.modes :] for s in states])
    total = sum(s.modes for s in states)
    cov = np.zeros((2 * total, 2 * total))
    offset = 0
    for s in states:
        m = s.modes
        rows = np.r_[offset : offset + m, total + offset : total + offset + m]
        cov[np.ix_(rows, rows)] = s.cov
        offset += m
    return GaussianState(np.concatenate([xs, ps]), cov)


_CONSTRUCTORS = {
    "vacuum": lambda **kw: vacuum(kw.get("modes", 1)),
    "thermal": lambda **kw: thermal(kw["n"], kw.get("modes", 1)),
    "coherent": lambda **kw: coherent(kw["alpha"], kw.get("n", 0.0)),
    "tmsv": lambda **kw: tmsv(kw["n_s"]),
}


def make_state(kind, **params):
    """Build one of the standard states by name.

    Args:
        kind (str): ``"vacuum"``, ``"thermal"`` (``n``), ``"coherent"`` (``alpha``)
            or ``"tmsv"`` (``n_s``).
        **params: parameters of the chosen constructor.
    """
    try:
        constructor = _CONSTRUCTORS[kind]
    except KeyError as exc:
        raise OutOfRange(f"Unknown state kind {kind!r}.") from exc
    return constructor(**params)


def load_state_json(path):
    """Read a state file ``{"modes", "ordering", "mean", "cov"}``."""
    try:
        content = json.loads(Path(path).read_text(encoding="utf-8"))
        state = GaussianState(
            content["mean"], content["cov"], ordering=content.get("ordering", XXPP).lower()
        )
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise IoError(f"Cannot read Gaussian state from {path}: {exc}") from exc
    if int(content.get("modes", state.modes)) != state.modes:
        raise IoError(f"{path} declares {content['modes']} modes but holds {state.modes}.")
    return state


def dump_state_json(state, path):
    """Write a state file readable by :func:`load_state_json`."""
    content = {
        "modes": state.modes,
        "ordering": state.ordering,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }
    try:
        Path(path).write_text(json.dumps(content, indent=2), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"Cannot write Gaussian state to {path}: {exc}") from exc
