# bickley/determinants.py
"""
Turán-type Hankel determinants of Bickley values

    D_n(alpha; x) = det [Ki_{alpha-j-k}(x)]_{j,k=0..n}

Paths to the same number:
- det_ki: entries from the engine, LU determinant, first-order error bound
- det_oracle_2x2: n = 1 only, the double integral
      1/2 int int e^{-x(cosh t + cosh s)} (cosh t cosh s)^-alpha (cosh t - cosh s)^2 dt ds
  by a product tanh-sinh rule
- det_oracle_mc: any 1 <= n <= 4, the (n+1)-fold integral
      1/(n+1)! int e^{-x sum cosh t_j} prod_{j<k} (cosh t_j - cosh t_k)^2 prod (cosh t_j)^-alpha dt
  by Monte Carlo; t_j drawn from the density e^{-x cosh t} / K_0(x)

det_cm_probe checks positivity and alternating forward differences of
x -> D_n(alpha; x) on an equally spaced grid.
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import EvalConfig, McConfig
from .engine import ki, truncation_length, DEFAULT_CONFIG
from .models import (
    KiValue,
    McEstimate,
    HankelSpec,
    CompleteMonotoneVerdict,
    BickleyDomainError,
    BickleyConvergenceError,
    MARGIN_FLOOR,
)
from .quadrature import tensor_integrate
from .special import bessel_k0_reference

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
MAX_TENSOR_LEVEL = 6        # 1025^2 nodes at the finest level
ORACLE_REL_TOL_FLOOR = 1e-11
VARIANCE_EXPLOSION = 0.5    # standard error above this fraction of the estimate
CM_TOL = 1e-9
MAX_CM_ORDER = 3


# =============================================================================
# Determinant from Bickley values
# =============================================================================

def hankel_entries(spec: HankelSpec, cfg: Optional[EvalConfig] = None) -> List[List[KiValue]]:
    """Entries M[j][k] = Ki_{alpha-j-k}(x); each distinct order is evaluated once."""
    values = {}
    for order in range(2 * spec.n + 1):
        values[order] = ki(spec.alpha - order, spec.x, cfg)
    return [[values[j + k] for k in range(spec.size)] for j in range(spec.size)]


def _determinant(entries: List[List[KiValue]]) -> KiValue:
    m = np.array([[e.value for e in row] for row in entries])
    e = np.array([[e.abs_err_est for e in row] for row in entries])
    size = m.shape[0]
    det = float(np.linalg.det(m))
    try:
        inv = np.linalg.inv(m)
        # d det / d M[j][k] = det * inv[k][j]
        err = abs(det) * float(np.sum(np.abs(inv.T) * e))
        err += size * EPS * float(np.linalg.cond(m)) * abs(det)
    except np.linalg.LinAlgError:
        # singular to working precision: Hadamard-type bound on the perturbation
        row_norms = np.linalg.norm(m, axis=1)
        err = 0.0
        for j in range(size):
            others = np.prod(np.delete(row_norms, j))
            err += float(np.linalg.norm(e[j])) * float(others)
    if not math.isfinite(err):
        err = abs(det) + float(np.sum(e))
    return KiValue(det, err)


def det_ki(spec: HankelSpec, cfg: Optional[EvalConfig] = None) -> KiValue:
    """
    Hankel determinant from engine values.

    n = 0 returns ki(alpha, x) unchanged.
    """
    if spec.n == 0:
        return ki(spec.alpha, spec.x, cfg)
    return _determinant(hankel_entries(spec, cfg))


def leading_minors(spec: HankelSpec, cfg: Optional[EvalConfig] = None) -> List[KiValue]:
    """Leading principal minors of orders 1..n+1."""
    entries = hankel_entries(spec, cfg)
    minors = [entries[0][0]]
    for k in range(2, spec.size + 1):
        minors.append(_determinant([row[:k] for row in entries[:k]]))
    return minors


# =============================================================================
# Quadrature oracle (n = 1)
# =============================================================================

def det_oracle_2x2(alpha: float, x: float, cfg: Optional[EvalConfig] = None) -> KiValue:
    """
    Second-order Hankel determinant from its double-integral form.

    The square is truncated like a single integral of order alpha - 2,
    since (cosh t - cosh s)^2 adds two powers of cosh.
    """
    cfg = cfg or DEFAULT_CONFIG
    spec = HankelSpec(alpha=float(alpha), n=1, x=float(x))
    alpha, x = spec.alpha, spec.x
    length = float(truncation_length(alpha - 2.0, np.array([x]), cfg)[0])
    rel_tol = max(cfg.rel_tol, ORACLE_REL_TOL_FLOOR)
    max_level = min(cfg.max_refinements, MAX_TENSOR_LEVEL)

    def factor(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        cm1 = 2.0 * np.sinh(0.5 * t) ** 2
        return np.exp(-x * cm1 - alpha * np.log1p(cm1)), cm1

    def integrand(t2d: np.ndarray, s2d: np.ndarray) -> np.ndarray:
        ft, ct = factor(t2d)
        fs, cs = factor(s2d)
        return ft * fs * (ct - cs) ** 2

    value, err, converged, level = tensor_integrate(integrand, length, rel_tol, 0.0, max_level)
    scale = 0.5 * math.exp(-2.0 * x)
    result = KiValue(value * scale, err * scale)
    logger.debug(f"det_oracle_2x2(alpha={alpha}, x={x}): level {level}, "
                 f"value {result.value!r} +- {result.abs_err_est:.3g}")
    if not converged:
        raise BickleyConvergenceError(
            f"det_oracle_2x2: no convergence at alpha={alpha}, x={x} by level {level}",
            partial=result,
        )
    return result


# =============================================================================
# Monte-Carlo oracle
# =============================================================================

def sample_cosh_minus_one(rng: np.random.Generator, x: float, count: int) -> Tuple[np.ndarray, int]:
    """
    Draw cosh(t) - 1 for t with density proportional to e^{-x cosh t} on (0, inf).

    Rejection from the half-normal envelope e^{-x(1 + t^2/2)} (cosh t >= 1 + t^2/2),
    acceptance probability e^{-x(cosh t - 1 - t^2/2)}.

    Returns:
        (samples, number of proposals drawn)
    """
    sigma = 1.0 / math.sqrt(x)
    chunks = []
    have = 0
    proposals = 0
    while have < count:
        m = max(2 * (count - have), 1024)
        t = np.abs(rng.standard_normal(m)) * sigma
        cm1 = 2.0 * np.sinh(0.5 * t) ** 2
        accept = rng.random(m) < np.exp(-x * (cm1 - 0.5 * t * t))
        kept = cm1[accept]
        chunks.append(kept)
        have += kept.size
        proposals += m
    return np.concatenate(chunks)[:count], proposals


def _mc_weights(cm1: np.ndarray, alpha: float) -> np.ndarray:
    """prod_{j<k} (c_j - c_k)^2 prod c_j^-alpha for rows of cosh - 1 samples."""
    dims = cm1.shape[1]
    weights = np.exp(-alpha * np.sum(np.log1p(cm1), axis=1))
    for j in range(dims):
        for k in range(j + 1, dims):
            weights = weights * (cm1[:, j] - cm1[:, k]) ** 2
    return weights


def _mc_batch(seed_seq: np.random.SeedSequence, size: int, dims: int,
              alpha: float, x: float) -> Tuple[int, float, float, int]:
    """(count, mean, sum of squared deviations, proposals) for one batch."""
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    cm1, proposals = sample_cosh_minus_one(rng, x, size * dims)
    weights = _mc_weights(cm1.reshape(size, dims), alpha)
    mean = float(np.mean(weights))
    m2 = float(np.sum((weights - mean) ** 2))
    return size, mean, m2, proposals


def _combine(stats: Sequence[Tuple[int, float, float, int]]) -> Tuple[int, float, float, int]:
    """Pairwise mean/variance merge in the given order."""
    n, mean, m2, proposals = 0, 0.0, 0.0, 0
    for nb, mb, m2b, pb in stats:
        total = n + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * n * nb / total
        n = total
        proposals += pb
    return n, mean, m2, proposals


def det_oracle_mc(spec: HankelSpec, mc: Optional[McConfig] = None, workers: int = 1) -> McEstimate:
    """
    Monte-Carlo estimate of D_n(alpha; x), 1 <= n <= 4.

    Batch b draws from SeedSequence(seed).spawn(batches)[b] through PCG64;
    batches are merged in index order, so the result depends only on
    (samples, seed, batch) and not on workers.
    """
    mc = mc or McConfig()
    if spec.n < 1:
        raise BickleyDomainError(f"det_oracle_mc requires n >= 1, got {spec.n}")
    dims = spec.size
    sizes = mc.batch_sizes
    children = np.random.SeedSequence(mc.seed).spawn(len(sizes))

    def run(b: int):
        return _mc_batch(children[b], sizes[b], dims, spec.alpha, spec.x)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, range(len(sizes))))
    else:
        stats = [run(b) for b in range(len(sizes))]

    n, mean, m2, proposals = _combine(stats)
    norm = bessel_k0_reference(spec.x) ** dims / math.factorial(dims)
    variance = m2 / (n - 1) if n > 1 else 0.0
    value = norm * mean
    se = norm * math.sqrt(variance / n)
    exploded = se > VARIANCE_EXPLOSION * abs(value)
    if exploded:
        logger.warning(f"det_oracle_mc(alpha={spec.alpha}, n={spec.n}, x={spec.x}): "
                       f"standard error {se:.3g} exceeds half of the estimate {value:.3g}")
    return McEstimate(
        value=value,
        abs_err_est=se,
        samples=n,
        acceptance_rate=n * dims / proposals,
        variance_exploded=exploded,
    )


def pool_mc_estimates(estimates: Sequence[McEstimate]) -> McEstimate:
    """Sample-weighted pooling of independent Monte-Carlo runs of the same quantity."""
    if not estimates:
        raise ValueError("pool_mc_estimates needs at least one estimate")
    total = sum(e.samples for e in estimates)
    if total <= 0:
        raise ValueError("pooled estimates carry no samples")
    value = sum(e.samples * e.value for e in estimates) / total
    se = math.sqrt(sum((e.samples * e.abs_err_est) ** 2 for e in estimates)) / total
    acceptance = sum(e.samples * e.acceptance_rate for e in estimates) / total
    return McEstimate(
        value=value,
        abs_err_est=se,
        samples=total,
        acceptance_rate=acceptance,
        variance_exploded=se > VARIANCE_EXPLOSION * abs(value),
    )


# =============================================================================
# Complete-monotonicity probe
# =============================================================================

def _binomials(m: int) -> np.ndarray:
    return np.array([math.comb(m, k) for k in range(m + 1)], dtype=float)


def cm_probe_values(values: Sequence[KiValue], order: int, tol: float = CM_TOL,
                    name: str = 'det_cm', params: Optional[dict] = None) -> CompleteMonotoneVerdict:
    """
    (-1)^m Delta^m f >= 0 for m = 0..order on samples f(x_0 + i h).

    Differences are normalised by max |f| over the samples; each one carries
    the binomially weighted sum of its entries' errors.
    """
    if not isinstance(order, int) or not 0 <= order <= MAX_CM_ORDER:
        raise BickleyDomainError(f"difference order must be an integer in [0, {MAX_CM_ORDER}], got {order}")
    vals = np.array([v.value for v in values], dtype=float)
    errs = np.array([v.abs_err_est for v in values], dtype=float)
    scale = max(float(np.max(np.abs(vals))) if vals.size else 0.0, MARGIN_FLOOR)

    holds = True
    order_margins: List[float] = []
    margin, err_budget = 0.0, 0.0
    worst = None
    for m in range(order + 1):
        if vals.size < m + 1:
            order_margins.append(0.0)
            continue
        signed = (-1.0) ** m * np.diff(vals, m) / scale
        diff_err = np.convolve(errs, _binomials(m), mode='valid') / scale
        if np.any(signed < -(tol + diff_err)):
            holds = False
        i = int(np.argmin(signed))
        order_margins.append(float(signed[i]))
        if worst is None or signed[i] < worst:
            worst = float(signed[i])
            margin, err_budget = worst, float(diff_err[i])

    return CompleteMonotoneVerdict(
        name=name,
        params=dict(params or {}),
        margin=margin,
        holds=holds,
        err_budget=err_budget,
        order_margins=order_margins,
        values=[float(v) for v in vals],
    )


def grid_step(grid: Sequence[float]) -> float:
    """Common spacing of an equally spaced grid (0 for a single point)."""
    xs = np.sort(np.asarray(grid, dtype=float))
    if xs.size < 2:
        return 0.0
    steps = np.diff(xs)
    h = float(steps[0])
    if h <= 0.0 or not np.allclose(steps, h, rtol=1e-6, atol=0.0):
        raise BickleyDomainError(f"grid must be strictly increasing and equally spaced, got steps {steps}")
    return h


def det_cm_probe(alpha: float, n: int, grid: Sequence[float], order: int = 2,
                 tol: float = CM_TOL, cfg: Optional[EvalConfig] = None) -> CompleteMonotoneVerdict:
    """Positivity and alternating differences of x -> D_n(alpha; x) up to the given order."""
    xs = sorted(float(x) for x in grid)
    if not xs:
        raise BickleyDomainError("det_cm_probe needs at least one grid point")
    h = grid_step(xs)
    values = [det_ki(HankelSpec(alpha=float(alpha), n=n, x=x), cfg) for x in xs]
    params = {'alpha': alpha, 'n': n, 'order': order, 'h': h, 'x_min': xs[0], 'x_max': xs[-1]}
    return cm_probe_values(values, order, tol, name='det_cm', params=params)
