"""Central finite-difference fallbacks shared across modules.

All first-derivative stencils use the step 1e-6 * max(1, |x|_inf); second
derivatives widen the step to 5e-4 * max(1, |x|_inf) so that round-off does
not dominate. Analytic derivative callables, when supplied on the data
types, always take precedence over these fallbacks.
"""

from __future__ import annotations

import numpy as np

FIRST_ORDER_STEP = 1e-6
SECOND_ORDER_STEP = 5e-4


def step_size(x, scale: float = FIRST_ORDER_STEP) -> float:
    """Step for central differences around ``x`` (scalar or array)."""
    mag = float(np.max(np.abs(x))) if np.size(x) else 0.0
    return scale * max(1.0, mag)


def gradient(f, x: np.ndarray, scale: float = FIRST_ORDER_STEP) -> np.ndarray:
    """Central-difference gradient of a scalar function of a vector."""
    x = np.asarray(x, dtype=float)
    h = step_size(x, scale)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def jacobian(f, x: np.ndarray, scale: float = FIRST_ORDER_STEP) -> np.ndarray:
    """Central-difference Jacobian; entry [i, j] is d f_j / d x_i."""
    x = np.asarray(x, dtype=float)
    h = step_size(x, scale)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(f(x + e), dtype=float)
                     - np.asarray(f(x - e), dtype=float)) / (2.0 * h))
    return np.stack(cols, axis=0)


def hessian(f, x: np.ndarray, scale: float = SECOND_ORDER_STEP) -> np.ndarray:
    """Central-difference Hessian of a scalar function (wide step)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = step_size(x, scale)
    out = np.empty((n, n))
    f0 = float(f(x))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        out[i, i] = (float(f(x + ei)) - 2.0 * f0 + float(f(x - ei))) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            mixed = (float(f(x + ei + ej)) - float(f(x + ei - ej))
                     - float(f(x - ei + ej)) + float(f(x - ei - ej)))
            out[i, j] = out[j, i] = mixed / (4.0 * h * h)
    return out


def scalar_derivative(f, t: float, scale: float = FIRST_ORDER_STEP) -> float:
    """Central difference of a scalar function of one scalar variable."""
    h = scale * max(1.0, abs(t))
    return (float(f(t + h)) - float(f(t - h))) / (2.0 * h)
