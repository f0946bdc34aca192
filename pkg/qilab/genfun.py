"""Photon-number generating functions and their transforms through bosonic channels.

All generating functions are of the total photon number over M modes, evaluated
on the diagonal xi = (x, ..., x).

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
from numpy.polynomial import polynomial
from scipy.stats import binom, nbinom

from qilab.channels import PureLoss, Qla, ThermalLoss, decompose_thermal_loss
from qilab.exceptions import NegativeEnergy, OutOfRange, RadiusViolation

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-10


class Pgf:
    """Generating function P(xi) = sum_n p_n xi^n of a total photon number.

    Attributes:
        func: callable evaluating P on an array of (possibly complex) points
        modes: number of modes M the photons are spread over
        radius: evaluations need ``|xi| <= radius``, None to defer to ``func``
        mean_photons: expected total photon number P'(1)
        tail_bound: truncated probability mass, added to reported errors
        label: short description of how the function was obtained
    """

    def __init__(self, func, modes, mean_photons, radius=None, tail_bound=0.0, label=""):
        """Constructor."""
        self.func = func
        self.modes = int(modes)
        self.mean_photons = float(mean_photons)
        self.radius = radius
        self.tail_bound = float(tail_bound)
        self.label = label

    def __repr__(self):
        """Short description."""
        return f"Pgf({self.label}, modes={self.modes}, mean={self.mean_photons:.6g})"

    def __call__(self, xi):
        """Evaluate at a point or an array of points."""
        return self.eval(xi)

    def eval(self, xi):
        """Evaluate P(xi), raising RadiusViolation outside the convergence region."""
        arr = np.asarray(xi)
        if self.radius is not None and np.any(np.abs(arr) > self.radius * (1.0 + 1e-12)):
            raise RadiusViolation(f"{self!r} evaluated at {xi}, outside radius {self.radius}.")
        value = self.func(arr)
        return value.item() if np.ndim(value) == 0 else value

    def pmf(self, cutoff, points=4096):
        """Taylor coefficients p_0..p_{cutoff-1}, from an FFT on the unit circle."""
        if cutoff > points:
            raise OutOfRange(f"Cutoff {cutoff} exceeds the number of FFT points {points}.")
        circle = np.exp(2j * np.pi * np.arange(points) / points)
        coefficients = np.fft.fft(self.eval(circle)) / points
        return np.real(coefficients[:cutoff])


def _closed_thermal(n_b, modes):
    def func(xi):
        return (1.0 / (n_b + 1.0 - n_b * xi)) ** modes

    return func


def pgf_thermal(n_b, modes=1):
    """Total-photon generating function [1/(N_B + 1 - N_B xi)]^M of M thermal modes."""
    if n_b < 0:
        raise NegativeEnergy(f"Thermal mean photon number must be >= 0, got {n_b}.")
    if modes < 1:
        raise OutOfRange(f"Number of modes must be positive, got {modes}.")
    # the series has radius (N_B + 1)/N_B; stay strictly inside it
    radius = np.inf if n_b == 0 else (n_b + 1.0) / n_b * (1.0 - 1e-12)
    return Pgf(
        _closed_thermal(n_b, modes),
        modes,
        modes * n_b,
        radius=radius,
        label=f"thermal(n_b={n_b})",
    )


def pgf_numeric(pmf, modes=1, tail_bound=None):
    """Generating function of a truncated PMF p_0..p_d.

    Exact finite-support PMFs (zero tail) evaluate anywhere; truncated ones only on
    the unit disc.
    """
    pmf = np.asarray(pmf, dtype=float)
    if np.any(pmf < 0):
        raise OutOfRange("PMF entries must be non-negative.")
    if tail_bound is None:
        tail_bound = max(0.0, 1.0 - pmf.sum())
    if abs(pmf.sum() + tail_bound - 1.0) > NORMALIZATION_TOL:
        raise OutOfRange(f"PMF sums to {pmf.sum():.12f} with tail bound {tail_bound:.3e}.")
    return Pgf(
        lambda xi: polynomial.polyval(xi, pmf),
        modes,
        float(np.dot(np.arange(len(pmf)), pmf)),
        radius=np.inf if tail_bound == 0 else 1.0,
        tail_bound=tail_bound,
        label=f"numeric(d={len(pmf)})",
    )


def _loss_transform(pgf, eta_tilde):
    def func(xi):
        return pgf.eval(1.0 + eta_tilde * (xi - 1.0))

    return Pgf(
        func,
        pgf.modes,
        eta_tilde * pgf.mean_photons,
        tail_bound=pgf.tail_bound,
        label=f"loss({eta_tilde:.6g}) o {pgf.label}",
    )


def _qla_denominator(xi, gain):
    denominator = gain - xi * (gain - 1.0)
    if gain > 1.0:
        limit = gain / (gain - 1.0)
        if np.any(np.abs(xi) >= limit):
            raise RadiusViolation(f"Amplifier transform needs |xi| < {limit:.6g}, got {xi}.")
    return denominator


def _qla_transform(pgf, gain):
    modes = pgf.modes

    def func(xi):
        denominator = _qla_denominator(xi, gain)
        return (1.0 / denominator) ** modes * pgf.eval(xi / denominator)

    return Pgf(
        func,
        modes,
        gain * pgf.mean_photons + modes * (gain - 1.0),
        tail_bound=pgf.tail_bound,
        label=f"qla({gain:.6g}) o {pgf.label}",
    )


def _thermal_loss_transform(pgf, eta, n_b):
    eta_tilde, gain = decompose_thermal_loss(eta, n_b)
    modes = pgf.modes

    def func(xi):
        denominator = _qla_denominator(xi, gain)
        return (1.0 / denominator) ** modes * pgf.eval(
            1.0 + eta_tilde * (xi / denominator - 1.0)
        )

    return Pgf(
        func,
        modes,
        eta * pgf.mean_photons + (1.0 - eta) * n_b * modes,
        tail_bound=pgf.tail_bound,
        label=f"thermal_loss({eta:.6g}, {n_b:.6g}) o {pgf.label}",
    )


def pgf_through_channel(pgf, channel):
    """Output generating function of a channel applied to every mode.

    Args:
        pgf (Pgf): input generating function.
        channel (BosonicChannel): pure loss, amplifier or thermal loss.

    Returns:
        Pgf: the transformed function.
    """
    if isinstance(channel, PureLoss):
        return _loss_transform(pgf, channel.transmittance)
    if isinstance(channel, Qla):
        return _qla_transform(pgf, channel.gain)
    if isinstance(channel, ThermalLoss):
        return _thermal_loss_transform(pgf, channel.eta, channel.n_b)
    raise OutOfRange(f"Unsupported channel {channel!r}.")


def mgf_views(pgf):
    """Falling- and rising-factorial moment generating functions.

    Returns:
        tuple: ``(falling, rising)`` callables, ``falling(xi) = P(1 + xi)`` and
        ``rising(xi) = (1/(1 - xi))^M P(1/(1 - xi))``.
    """

    def falling(xi):
        return pgf.eval(1.0 + np.asarray(xi))

    def rising(xi):
        xi = np.asarray(xi)
        if np.any(np.real(xi) >= 1.0):
            raise RadiusViolation(f"Rising-factorial view needs xi < 1, got {xi}.")
        inverse = 1.0 / (1.0 - xi)
        value = inverse**pgf.modes * pgf.eval(inverse)
        return value.item() if np.ndim(value) == 0 else value

    return falling, rising


def pmf_thermal(n_b, modes, cutoff):
    """Negative-binomial law of the total photon number of M thermal modes, truncated."""
    if n_b < 0:
        raise NegativeEnergy(f"Thermal mean photon number must be >= 0, got {n_b}.")
    return nbinom.pmf(np.arange(cutoff), modes, 1.0 / (n_b + 1.0))


def pmf_through_channel(pmf, channel, modes=1, cutoff_out=None):
    """Exact action of a channel on a total-photon-number PMF.

    Loss thins photons binomially; the amplifier adds a negative-binomial count of
    shape n + M, so the total photon number alone determines the output.

    Returns:
        tuple: ``(output_pmf, lost_mass)``.
    """
    pmf = np.asarray(pmf, dtype=float)
    d_in = len(pmf)
    cutoff_out = d_in if cutoff_out is None else cutoff_out
    stages = channel.cascade if isinstance(channel, ThermalLoss) else (channel,)
    current = pmf
    for stage in stages:
        n = np.arange(len(current))
        k = np.arange(cutoff_out)
        if isinstance(stage, PureLoss):
            kernel = binom.pmf(k[:, np.newaxis], n[np.newaxis, :], stage.transmittance)
        else:
            added = k[:, np.newaxis] - n[np.newaxis, :]
            kernel = np.where(
                added >= 0,
                nbinom.pmf(np.maximum(added, 0), n[np.newaxis, :] + modes, 1.0 / stage.gain),
                0.0,
            )
        current = kernel @ current
    return current, max(0.0, pmf.sum() - current.sum())
