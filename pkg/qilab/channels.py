"""Bosonic channels on Gaussian moments and on truncated Fock operators.

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

import numpy as np
from scipy.special import gammaln, xlogy

from qilab.exceptions import BadModeIndex, CutoffOverflow, OutOfRange
from qilab.fock import FockOperator, cutoff_for_tail
from qilab.gaussian_core import XXPP, GaussianState

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-9


class BosonicChannel:
    """Base class of the single-mode phase-insensitive channels."""

    kind = None

    def __eq__(self, other):
        """Channels are equal when kind and parameters match."""
        return type(self) is type(other) and self.params() == other.params()

    def __hash__(self):
        """Hash of kind and parameters."""
        return hash((self.kind, self.params()))

    def __repr__(self):
        """Short description."""
        args = ", ".join(f"{k}={v!r}" for k, v in zip(self._fields, self.params()))
        return f"{type(self).__name__}({args})"

    _fields = ()

    def params(self):
        """Parameters as a tuple."""
        return tuple(getattr(self, name) for name in self._fields)


class PureLoss(BosonicChannel):
    """Pure-loss channel of transmittance eta_tilde.

    Attributes:
        transmittance: eta_tilde in [0, 1]
    """

    kind = "pure_loss"
    _fields = ("transmittance",)

    def __init__(self, transmittance):
        """Constructor."""
        if not 0.0 <= transmittance <= 1.0:
            raise OutOfRange(f"Transmittance must lie in [0, 1], got {transmittance}.")
        self.transmittance = float(transmittance)


class Qla(BosonicChannel):
    """Quantum-limited amplifier of gain G >= 1.

    Attributes:
        gain: G
    """

    kind = "qla"
    _fields = ("gain",)

    def __init__(self, gain):
        """Constructor."""
        if gain < 1.0:
            raise OutOfRange(f"Amplifier gain must be >= 1, got {gain}.")
        self.gain = float(gain)


class ThermalLoss(BosonicChannel):
    """Thermal-loss channel mixing the input with a thermal background.

    Attributes:
        eta: transmittance in [0, 1]
        n_b: background mean photon number
    """

    kind = "thermal_loss"
    _fields = ("eta", "n_b")

    def __init__(self, eta, n_b):
        """Constructor."""
        if not 0.0 <= eta <= 1.0:
            raise OutOfRange(f"Transmittance must lie in [0, 1], got {eta}.")
        if n_b < 0:
            raise OutOfRange(f"Background brightness must be >= 0, got {n_b}.")
        self.eta = float(eta)
        self.n_b = float(n_b)

    @property
    def cascade(self):
        """The equivalent (PureLoss, Qla) pair, loss applied first."""
        eta_tilde, gain = decompose_thermal_loss(self.eta, self.n_b)
        return PureLoss(eta_tilde), Qla(gain)


def decompose_thermal_loss(eta, n_b):
    """Split a thermal-loss channel into pure loss followed by a quantum-limited amplifier.

    Returns:
        tuple: ``(eta_tilde, gain)`` with ``gain = (1 - eta) n_b + 1`` and
        ``eta_tilde = eta / gain``.
    """
    gain = (1.0 - eta) * n_b + 1.0
    return eta / gain, gain


def _stages(channel):
    if isinstance(channel, ThermalLoss):
        return channel.cascade
    if isinstance(channel, (PureLoss, Qla)):
        return (channel,)
    raise OutOfRange(f"Unsupported channel {channel!r}.")


def _moment_map(channel):
    """Scaling of the quadratures and added variance of a single stage."""
    if isinstance(channel, PureLoss):
        return np.sqrt(channel.transmittance), 0.5 * (1.0 - channel.transmittance)
    return np.sqrt(channel.gain), 0.5 * (channel.gain - 1.0)


def apply_gaussian(channel, state, mode=0):
    """Apply a channel to one mode of a Gaussian state.

    Args:
        channel (BosonicChannel): the channel.
        state (GaussianState): the input.
        mode (int): index of the mode the channel acts on.

    Returns:
        GaussianState: output in the input's quadrature layout.
    """
    if not 0 <= mode < state.modes:
        raise BadModeIndex(f"Mode {mode} is out of range for a {state.modes}-mode state.")
    work = state.reordered(XXPP)
    mean, cov = work.mean.copy(), work.cov.copy()
    idx = [mode, mode + state.modes]
    for stage in _stages(channel):
        scale, noise = _moment_map(stage)
        kick = np.ones(2 * state.modes)
        kick[idx] = scale
        mean = kick * mean
        cov = np.outer(kick, kick) * cov
        cov[idx, idx] += noise
    out = GaussianState(mean, cov, ordering=XXPP, validate=False)
    return out.reordered(state.ordering)


def loss_kraus(transmittance, cutoff):
    """Kraus operators E_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>, stacked."""
    n = np.arange(cutoff)
    ops = np.zeros((cutoff, cutoff, cutoff))
    for k in range(cutoff):
        src = n[k:]
        log_amp = 0.5 * (
            gammaln(src + 1)
            - gammaln(k + 1)
            - gammaln(src - k + 1)
            + xlogy(src - k, transmittance)
            + xlogy(k, 1.0 - transmittance)
        )
        ops[k, src - k, src] = np.exp(log_amp)
    return ops


def qla_kraus(gain, cutoff_in, cutoff_out):
    """Kraus operators F_a |n> = sech^(n+1) tanh^a sqrt(C(n+a, a)) |n+a>, stacked.

    The environment of the amplifier is traced out, so each ancilla count ``a`` gives
    one Kraus operator.
    """
    n = np.arange(cutoff_in)
    ops = np.zeros((cutoff_out, cutoff_out, cutoff_in))
    for a in range(cutoff_out):
        src = n[n + a < cutoff_out]
        log_amp = (
            -0.5 * (src + 1) * np.log(gain)
            + 0.5 * xlogy(a, (gain - 1.0) / gain)
            + 0.5 * (gammaln(src + a + 1) - gammaln(a + 1) - gammaln(src + 1))
        )
        ops[a, src + a, src] = np.exp(log_amp)
    return ops


def _apply_kraus(rho, mode, ops):
    dims = rho.mode_dims
    before = int(np.prod(dims[:mode]))
    after = int(np.prod(dims[mode + 1 :]))
    d_in, d_out = dims[mode], ops.shape[1]
    tensor = rho.matrix.reshape(before, d_in, after, before, d_in, after)
    out = np.einsum("kij,ajbcle,kml->aibcme", ops, tensor, ops.conj(), optimize=True)
    new_dims = dims[:mode] + (d_out,) + dims[mode + 1 :]
    size = before * d_out * after
    return FockOperator(out.reshape(size, size), new_dims, rho.trace_target, validate=False)


def apply_fock(channel, rho, mode=0, cutoff_out=None, tail_tol=TRACE_TOL):
    """Apply a channel to one mode of a truncated Fock operator.

    Loss keeps the cutoff. The amplifier maps into ``cutoff_out`` (default: the input
    cutoff) and the mass pushed beyond it is audited against ``tail_tol``.

    Args:
        channel (BosonicChannel): the channel.
        rho (FockOperator): the input operator.
        mode (int): index of the mode the channel acts on.
        cutoff_out (int): output cutoff of the acted-on mode.
        tail_tol (float): tolerated trace loss relative to the input trace.

    Returns:
        FockOperator: the output operator.
    """
    if not 0 <= mode < rho.num_modes:
        raise BadModeIndex(f"Mode {mode} is out of range for {rho.num_modes} modes.")
    trace_in = rho.trace()
    out = rho
    for stage in _stages(channel):
        d_in = out.mode_dims[mode]
        if isinstance(stage, PureLoss):
            out = _apply_kraus(out, mode, loss_kraus(stage.transmittance, d_in))
        elif stage.gain > 1.0:
            d_out = cutoff_out if cutoff_out is not None else d_in
            out = _apply_kraus(out, mode, qla_kraus(stage.gain, d_in, d_out))
        elif cutoff_out is not None and cutoff_out != d_in:
            out = _apply_kraus(out, mode, np.eye(cutoff_out, d_in)[np.newaxis])
    lost = trace_in - out.trace()
    if lost > tail_tol * abs(trace_in):
        raise CutoffOverflow(
            f"{channel!r} pushes {lost:.3e} of the trace beyond cutoff {out.mode_dims[mode]}."
        )
    return out


def output_mean_photons(channel, input_mean_photons):
    """Mean photon number at the channel output."""
    mean = input_mean_photons
    for stage in _stages(channel):
        if isinstance(stage, PureLoss):
            mean = stage.transmittance * mean
        else:
            mean = stage.gain * mean + stage.gain - 1.0
    return mean


def cutoff_for(channel, input_mean_photons, tail_tol):
    """Advisory cutoff bounding the output tail mass with a geometric law of the output mean."""
    out_mean = output_mean_photons(channel, input_mean_photons)
    cutoff = cutoff_for_tail(max(out_mean, input_mean_photons), tail_tol)
    logger.debug(
        "advisory cutoff %d for %r at input mean %.4g", cutoff, channel, input_mean_photons
    )
    return cutoff
