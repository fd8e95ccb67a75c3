# bickley/quadrature.py
"""
Tanh-sinh (double-exponential) quadrature on finite intervals [0, T]

The substitution t = T * s(u), s(u) = (1 + tanh(pi/2 sinh u)) / 2, turns an
integral over [0, T] into one over the real line whose integrand decays
doubly exponentially; the trapezoidal rule in u with step h then converges
geometrically as h halves.

Levels:
- level 0 uses nodes u = k/2, |u| <= 4
- level j adds the odd multiples of h_j = 2^-(j+1); earlier sums are reused

Batches of independent integrals over [0, T_i] are refined together; rows
that meet their tolerance stop being evaluated.
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
U_MAX = 4.0            # weights beyond |u| = 4 are below 1e-30
H0 = 0.5               # level-0 step in u
MIN_LEVEL = 3          # never accept agreement before this level
ROUNDOFF = 64.0 * np.finfo(float).eps

# (rows, t) -> integrand values, both of shape (len(rows), k)
Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _expit(y: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-y))


def level_nodes(level: int) -> Tuple[np.ndarray, float]:
    """u-nodes new at this level, and the step h of the level."""
    if level == 0:
        k_max = int(U_MAX / H0)
        return np.arange(-k_max, k_max + 1, dtype=float) * H0, H0
    h = H0 / 2 ** level
    m_max = int(round(U_MAX / h))
    return np.arange(-m_max + 1, m_max, 2, dtype=float) * h, h


def map_nodes(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Map u to (s, 1 - s, ds/du) for the unit interval.

    1 - s is computed directly so nodes next to the right end keep their
    relative accuracy.
    """
    v = HALF_PI * np.sinh(u)
    s = _expit(2.0 * v)
    sc = _expit(-2.0 * v)
    ds = 2.0 * HALF_PI * np.cosh(u) * s * sc
    return s, sc, ds


@dataclass
class QuadratureResult:
    """Per-row outcome of a batched tanh-sinh run."""
    value: np.ndarray
    diff: np.ndarray
    abs_value: np.ndarray
    level: np.ndarray
    converged: np.ndarray

    @property
    def roundoff(self) -> np.ndarray:
        return ROUNDOFF * self.abs_value

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))


def integrate_batch(func: Integrand, lengths: np.ndarray,
                    rel_tol: float, abs_tol,
                    max_refinements: int,
                    chunk: int = 512) -> QuadratureResult:
    """
    Integrate func over [0, lengths[i]] for every row i.

    Args:
        func: integrand evaluated on (rows, t)
        lengths: interval lengths T_i > 0
        rel_tol, abs_tol: row i stops when two successive levels agree to
            max(abs_tol, rel_tol * |I_i|)
        max_refinements: last level to compute
        chunk: rows evaluated per call, bounds temporary memory

    Returns:
        QuadratureResult with level estimates, last-level differences and
        the sum of |integrand * weight| for the roundoff floor
    """
    lengths = np.asarray(lengths, dtype=float)
    n_rows = lengths.shape[0]
    raw = np.zeros(n_rows)
    raw_abs = np.zeros(n_rows)
    estimate = np.zeros(n_rows)
    diff = np.full(n_rows, np.inf)
    level_of = np.zeros(n_rows, dtype=int)
    converged = np.zeros(n_rows, dtype=bool)
    abs_tol = np.broadcast_to(np.asarray(abs_tol, dtype=float), (n_rows,))

    for level in range(max_refinements + 1):
        active = np.flatnonzero(~converged)
        if active.size == 0:
            break
        u, h = level_nodes(level)
        s, _, ds = map_nodes(u)

        for start in range(0, active.size, chunk):
            rows = active[start:start + chunk]
            span = lengths[rows][:, None]
            t = span * s[None, :]
            vals = func(rows, t) * (span * ds[None, :])
            raw[rows] += np.sum(vals, axis=1)
            raw_abs[rows] += np.sum(np.abs(vals), axis=1)

        new_estimate = h * raw[active]
        if level > 0:
            diff[active] = np.abs(new_estimate - estimate[active])
        estimate[active] = new_estimate
        level_of[active] = level

        if level >= min(MIN_LEVEL, max_refinements):
            tol = np.maximum(abs_tol[active], rel_tol * np.abs(new_estimate))
            done = diff[active] <= tol
            converged[active[done]] = True

        logger.debug(f"tanh-sinh level {level}: {active.size} active rows, "
                     f"{int(np.count_nonzero(converged))}/{n_rows} converged")

    h_final = np.array([H0 / 2 ** lv for lv in level_of]) if n_rows else np.zeros(0)
    return QuadratureResult(
        value=estimate,
        diff=diff,
        abs_value=h_final * raw_abs,
        level=level_of,
        converged=converged,
    )


def integrate(func: Callable[[np.ndarray], np.ndarray], length: float,
              rel_tol: float = 1e-12, abs_tol: float = 0.0,
              max_refinements: int = 12) -> Tuple[float, float, bool]:
    """
    Scalar convenience wrapper: integral of func(t) over [0, length].

    Returns:
        (value, error estimate, converged)
    """
    def batch_func(rows, t):
        return func(t)

    res = integrate_batch(batch_func, np.array([float(length)]), rel_tol, abs_tol, max_refinements)
    err = float(res.diff[0] + res.roundoff[0])
    return float(res.value[0]), err, bool(res.converged[0])


def tensor_integrate(func: Callable[[np.ndarray, np.ndarray], np.ndarray],
                     length: float, rel_tol: float, abs_tol: float,
                     max_level: int) -> Tuple[float, float, bool, int]:
    """
    Product tanh-sinh rule over the square [0, length]^2.

    The full grid is rebuilt at every level, so max_level bounds memory:
    level j evaluates (16 * 2^j + 1)^2 points.

    Returns:
        (value, error estimate, converged, final level)
    """
    prev: Optional[float] = None
    value = 0.0
    diff = math.inf
    abs_value = 0.0
    level = 0
    for level in range(max_level + 1):
        h = H0 / 2 ** level
        m_max = int(round(U_MAX / h))
        u = np.arange(-m_max, m_max + 1, dtype=float) * h
        s, _, ds = map_nodes(u)
        t = length * s
        w = h * length * ds
        grid = func(t[:, None], t[None, :]) * (w[:, None] * w[None, :])
        value = float(np.sum(grid))
        abs_value = float(np.sum(np.abs(grid)))
        if prev is not None:
            diff = abs(value - prev)
            if level >= MIN_LEVEL and diff <= max(abs_tol, rel_tol * abs(value)):
                logger.debug(f"tensor tanh-sinh converged at level {level} ({u.size}^2 nodes)")
                return value, diff + ROUNDOFF * abs_value, True, level
        prev = value
    return value, diff + ROUNDOFF * abs_value, False, level
