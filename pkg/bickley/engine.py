# bickley/engine.py
"""
Bickley function engine

Evaluates
    Ki_alpha(x) = int_0^inf exp(-x cosh t) (cosh t)^(-alpha) dt,  x > 0,
its x- and alpha-derivatives, its value at x = 0, and the repeated-integral
form (1/Gamma(alpha)) int_x^inf (t - x)^(alpha-1) K_0(t) dt.

Numerics:
- tanh-sinh quadrature on [0, T] (bickley.quadrature), levels doubled until
  two successive levels agree to rel_tol
- T = arccosh(max(2, (L + max(0, -alpha) ln L) / x)),
  L = -ln(rel_tol * 1e-3) + truncation_guard
- the factor e^-x is pulled out of the integrand so values near x = 700
  stay representable until the final product
- abs_err_est = |last level difference| + tail bound + roundoff floor

Contract: |alpha| <= 20 and x in [1e-6, 700] for the headline tolerance;
|alpha| <= 50 and any x > 0 are evaluated best-effort with a warning.
"""

import math
import logging
from typing import Optional, Tuple

import numpy as np

from .config import EvalConfig, X_MIN, X_MAX
from .models import KiValue, BickleyDomainError, BickleyConvergenceError
from .quadrature import integrate, integrate_batch
from .special import log_gamma

logger = logging.getLogger(__name__)

CONTRACT_ALPHA = 20.0
MAX_ALPHA = 50.0
LOG_TWO = math.log(2.0)
HALF_LOG_PI = 0.5 * math.log(math.pi)

DEFAULT_CONFIG = EvalConfig()


# =============================================================================
# Validation
# =============================================================================

def _validate_alpha(alpha: float, op: str) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise BickleyDomainError(f"{op}: alpha must be finite, got {alpha}")
    if abs(alpha) > MAX_ALPHA:
        raise BickleyDomainError(f"{op}: |alpha| must not exceed {MAX_ALPHA}, got {alpha}")
    if abs(alpha) > CONTRACT_ALPHA:
        logger.warning(f"{op}: alpha={alpha} outside the accuracy contract |alpha| <= {CONTRACT_ALPHA}")
    # -0.0 and 0.0 must hit the same cache keys
    return alpha + 0.0


def _validate_x(x: float, op: str) -> float:
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise BickleyDomainError(f"{op}: x must be positive and finite, got {x}")
    if x < X_MIN or x > X_MAX:
        logger.warning(f"{op}: x={x} outside the accuracy contract [{X_MIN}, {X_MAX}]")
    return x


def _validate_order(m: int, op: str) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise BickleyDomainError(f"{op}: derivative order must be a non-negative integer, got {m}")
    return int(m)


# =============================================================================
# Integrand pieces
# =============================================================================

def _cosh_minus_one(t: np.ndarray) -> np.ndarray:
    return 2.0 * np.sinh(0.5 * t) ** 2


def _log_cosh(t: np.ndarray) -> np.ndarray:
    """ln cosh t, accurate for small t and overflow-free for large t."""
    small = t < 20.0
    ts = np.where(small, t, 0.0)
    near = np.log1p(_cosh_minus_one(ts))
    far = t - LOG_TWO + np.log1p(np.exp(-2.0 * np.where(small, 20.0, t)))
    return np.where(small, near, far)


def truncation_length(alpha: float, x: np.ndarray, cfg: EvalConfig) -> np.ndarray:
    """Upper limit T beyond which the integrand tail is below e^-L of the estimate."""
    big_l = cfg.tail_nepers
    grow = max(0.0, -alpha) * math.log(big_l)
    return np.arccosh(np.maximum(2.0, (big_l + grow) / np.asarray(x, dtype=float)))


def _scaled_integrand(alpha: float, x: np.ndarray, t: np.ndarray, log_power: int) -> np.ndarray:
    """e^x times the integrand, optionally with the factor (ln cosh t)^log_power."""
    lc = _log_cosh(t)
    vals = np.exp(-x * _cosh_minus_one(t) - alpha * lc)
    if log_power:
        vals = vals * lc ** log_power
    return vals


def bickley_scaled_batch(alpha: float, xs: np.ndarray, cfg: EvalConfig,
                         log_power: int = 0) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    e^x int_0^inf e^{-x cosh t} (cosh t)^-alpha (ln cosh t)^m dt for many x at once.

    Args:
        alpha: order
        xs: positive arguments
        cfg: quadrature settings
        log_power: m, the power of ln cosh t

    Returns:
        (scaled values, scaled error estimates, converged mask)
    """
    xs = np.asarray(xs, dtype=float)
    lengths = truncation_length(alpha, xs, cfg)
    if cfg.abs_tol > 0.0:
        with np.errstate(over='ignore'):
            abs_tol = cfg.abs_tol * np.exp(xs)
    else:
        abs_tol = 0.0

    def integrand(rows, t):
        return _scaled_integrand(alpha, xs[rows][:, None], t, log_power)

    res = integrate_batch(integrand, lengths, cfg.rel_tol, abs_tol, cfg.max_refinements)

    # tail beyond T: f(T) / (d/dt of the exponent), doubled for the log factor
    f_end = _scaled_integrand(alpha, xs, lengths, log_power)
    slope = xs * np.sinh(lengths) + alpha * np.tanh(lengths)
    tail = np.where(slope > 0.0, f_end / np.where(slope > 0.0, slope, 1.0), f_end * lengths)
    if log_power:
        tail = 2.0 * tail

    err = res.diff + res.roundoff + tail
    return res.value, err, res.converged


def _evaluate(alpha: float, x: float, cfg: EvalConfig, log_power: int, op: str) -> KiValue:
    values, errs, converged = bickley_scaled_batch(alpha, np.array([x]), cfg, log_power)
    scale = math.exp(-x)
    value = float(values[0]) * scale
    err = float(errs[0]) * scale
    if not math.isfinite(value) or not math.isfinite(err):
        raise BickleyDomainError(f"{op}: value at alpha={alpha}, x={x} overflows double precision")
    if not converged[0]:
        partial = KiValue(value, err)
        raise BickleyConvergenceError(
            f"{op}: no convergence at alpha={alpha}, x={x} after {cfg.max_refinements} "
            f"refinements (estimate {value!r}, error {err:.3g})",
            partial=partial,
        )
    return KiValue(value, err)


# =============================================================================
# Public operations
# =============================================================================

def ki(alpha: float, x: float, cfg: Optional[EvalConfig] = None) -> KiValue:
    """
    Bickley function Ki_alpha(x) for x > 0.

    Raises:
        BickleyDomainError: x <= 0, non-finite or |alpha| > 50
        BickleyConvergenceError: tolerance not met; .partial holds the estimate
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _validate_alpha(alpha, "ki")
    x = _validate_x(x, "ki")
    return _evaluate(alpha, x, cfg, 0, "ki")


def ki_at_zero(alpha: float) -> float:
    """
    Ki_alpha(0) = sqrt(pi) Gamma(alpha/2) / (2 Gamma((alpha+1)/2)) for alpha > 0.

    The integral of (cosh t)^-alpha diverges for alpha <= 0, which is a
    domain error rather than an extrapolation.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise BickleyDomainError(f"ki_at_zero requires finite alpha > 0, got {alpha}")
    return math.exp(HALF_LOG_PI - LOG_TWO + log_gamma(0.5 * alpha) - log_gamma(0.5 * (alpha + 1.0)))


def ki_x_derivative(alpha: float, x: float, m: int, cfg: Optional[EvalConfig] = None) -> KiValue:
    """m-th x-derivative: (d/dx)^m Ki_alpha(x) = (-1)^m Ki_{alpha-m}(x)."""
    m = _validate_order(m, "ki_x_derivative")
    base = ki(float(alpha) - m, x, cfg)
    return base if m % 2 == 0 else -base


def ki_alpha_derivative(alpha: float, x: float, m: int, cfg: Optional[EvalConfig] = None) -> KiValue:
    """
    m-th alpha-derivative:
    (d/dalpha)^m Ki_alpha(x) = (-1)^m int_0^inf e^{-x cosh t} (cosh t)^-alpha (ln cosh t)^m dt.
    """
    cfg = cfg or DEFAULT_CONFIG
    m = _validate_order(m, "ki_alpha_derivative")
    alpha = _validate_alpha(alpha, "ki_alpha_derivative")
    x = _validate_x(x, "ki_alpha_derivative")
    result = _evaluate(alpha, x, cfg, m, "ki_alpha_derivative")
    return result if m % 2 == 0 else -result


def _fractional_cutoff(alpha: float, cfg: EvalConfig) -> float:
    """S with s^(alpha-1) e^-s negligible beyond it."""
    big_l = cfg.tail_nepers
    return big_l + 2.0 * max(alpha - 1.0, 0.0) * math.log(big_l + alpha)


def ki_via_fractional(alpha: float, x: float, cfg: Optional[EvalConfig] = None) -> KiValue:
    """
    Ki_alpha(x) = (1/Gamma(alpha)) int_x^inf (t - x)^(alpha-1) K_0(t) dt, alpha > 0.

    K_0 is evaluated as Ki_0 by the same engine. For alpha < 1 the endpoint
    singularity is removed by u = (t - x)^alpha, giving
    (1/Gamma(alpha+1)) int_0^inf K_0(x + u^(1/alpha)) du.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise BickleyDomainError(f"ki_via_fractional requires finite alpha > 0, got {alpha}")
    _validate_alpha(alpha, "ki_via_fractional")
    x = _validate_x(x, "ki_via_fractional")

    cutoff = _fractional_cutoff(alpha, cfg)
    substituted = alpha < 1.0
    if substituted:
        length = cutoff ** alpha
        log_norm = -log_gamma(alpha + 1.0)
    else:
        length = cutoff
        log_norm = -log_gamma(alpha)

    worst_kernel_rel = [0.0]

    def kernel(s: np.ndarray) -> np.ndarray:
        """e^(x+s) K_0(x + s) for the nodes s."""
        vals, errs, ok = bickley_scaled_batch(0.0, x + s, cfg)
        if not np.all(ok):
            raise BickleyConvergenceError(
                f"ki_via_fractional: K_0 kernel failed to converge at alpha={alpha}, x={x}")
        rel = float(np.max(errs / vals)) if vals.size else 0.0
        worst_kernel_rel[0] = max(worst_kernel_rel[0], rel)
        return vals

    def outer(u):
        flat = u.ravel()
        s = flat ** (1.0 / alpha) if substituted else flat
        vals = np.exp(-s) * kernel(s)
        if not substituted and alpha != 1.0:
            vals = vals * s ** (alpha - 1.0)
        return vals.reshape(u.shape)

    total, quad_err, converged = integrate(outer, length, cfg.rel_tol, 0.0, cfg.max_refinements)

    end = np.array([cutoff])
    tail = 2.0 * float(np.exp(-cutoff) * kernel(end)[0] * cutoff ** (alpha - 1.0))

    norm = math.exp(log_norm - x)
    value = total * norm
    err = (quad_err + tail + worst_kernel_rel[0] * abs(total)) * norm
    if not converged:
        raise BickleyConvergenceError(
            f"ki_via_fractional: no convergence at alpha={alpha}, x={x}",
            partial=KiValue(value, err),
        )
    return KiValue(value, err)
