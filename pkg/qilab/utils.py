"""Utility functions.

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

from qilab.exceptions import ConfigError, NoConvergence

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2


def golden_section_minimize(func, lower, upper, tol=1e-6, max_iter=60, guess=None, width=0.1):
    """Golden-section search for the minimum of a unimodal function.

    When ``guess`` is given, the search first runs on ``[guess - width, guess + width]``
    clipped to the interval, and falls back to the full interval if the minimum lands
    on an inner edge of that window.

    Args:
        func (callable): scalar function to minimise.
        lower (float): left end of the interval.
        upper (float): right end of the interval.
        tol (float): stop once the bracket is narrower than ``tol``.
        max_iter (int): maximum number of bracket reductions.
        guess (float): optional warm start.
        width (float): half width of the warm-start window.

    Returns:
        tuple: ``(x_min, f_min)``.
    """
    if guess is not None:
        lo, hi = max(lower, guess - width), min(upper, guess + width)
        x_min, f_min = golden_section_minimize(func, lo, hi, tol=tol, max_iter=max_iter)
        on_inner_edge = (lo > lower and x_min - lo < 2 * tol) or (
            hi < upper and hi - x_min < 2 * tol
        )
        if not on_inner_edge:
            return x_min, f_min
        logger.debug("warm start at %.6f missed the minimum, searching the full interval", guess)

    a, b = min(lower, upper), max(lower, upper)
    c = a + INV_PHI_SQUARE * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI_SQUARE * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)

    candidates = [(fc, c), (fd, d), (func(a), a), (func(b), b)]
    f_min, x_min = min(candidates)
    return x_min, f_min


def damped_newton(residual, jacobian, x0, tol=1e-12, max_iter=200, max_halvings=30):
    """Solve ``residual(x) = 0`` by Newton iteration with step halving.

    A step is accepted once it reduces the residual norm; otherwise it is halved.

    Args:
        residual (callable): vector function of the unknowns.
        jacobian (callable): its Jacobian matrix.
        x0 (array-like): starting point.
        tol (float): convergence threshold on the residual norm.
        max_iter (int): maximum number of Newton steps.
        max_halvings (int): maximum number of halvings per step.

    Returns:
        numpy.ndarray: the root.
    """
    x = np.asarray(x0, dtype=float)
    r = np.asarray(residual(x), dtype=float)
    norm = np.linalg.norm(r)
    for iteration in range(max_iter):
        if norm < tol:
            logger.debug("newton converged in %d iterations", iteration)
            return x
        step = np.linalg.solve(jacobian(x), -r)
        damping = 1.0
        for _ in range(max_halvings):
            trial = x + damping * step
            trial_r = np.asarray(residual(trial), dtype=float)
            trial_norm = np.linalg.norm(trial_r)
            if np.all(np.isfinite(trial_r)) and trial_norm < norm:
                break
            damping *= 0.5
        else:
            raise NoConvergence(f"Newton step could not reduce the residual {norm:.3e} at x={x}.")
        x, r, norm = trial, trial_r, trial_norm
    if norm < tol:
        return x
    raise NoConvergence(
        f"Newton iteration did not converge in {max_iter} steps (residual {norm:.3e})."
    )


def parse_param(text):
    """Parse ``NAME=VALUE`` into ``(name, float)``."""
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise ConfigError(f"Parameter {text!r} must look like NAME=VALUE.")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise ConfigError(f"Parameter {name!r} has a non-numeric value {value!r}.") from exc


def parse_grid(text):
    """Parse ``NAME=START:STOP:COUNT[:log]`` into ``(name, grid)``."""
    name, sep, value = text.partition("=")
    fields = value.split(":")
    if not sep or not name or len(fields) not in (3, 4):
        raise ConfigError(f"Grid {text!r} must look like NAME=START:STOP:COUNT[:log].")
    scale = fields[3] if len(fields) == 4 else "linear"
    try:
        grid = {
            "start": float(fields[0]),
            "stop": float(fields[1]),
            "count": int(fields[2]),
            "scale": scale,
        }
    except ValueError as exc:
        raise ConfigError(f"Grid {name!r} has non-numeric bounds or count.") from exc
    return name.strip(), grid


def grid_values(grid):
    """Points of a grid specification ``{start, stop, count, scale}``."""
    try:
        start, stop, count = float(grid["start"]), float(grid["stop"]), int(grid["count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"Invalid grid specification {grid}.") from exc
    scale = grid.get("scale", "linear")
    if count < 1:
        raise ConfigError(f"Grid count must be >= 1, got {count}.")
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"Log grid needs positive endpoints, got {start} and {stop}.")
        return np.geomspace(start, stop, count)
    if scale != "linear":
        raise ConfigError(f"Grid scale must be 'linear' or 'log', got {scale!r}.")
    return np.linspace(start, stop, count)
