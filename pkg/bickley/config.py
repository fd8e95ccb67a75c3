# bickley/config.py
"""
Configuration for the Bickley function toolkit

Objects:
- EvalConfig: quadrature tolerances, truncation guard, refinement limit
- McConfig: Monte-Carlo sample count, seed and batch size
- GridSpec: sweep domain over (alpha, x) plus auxiliary parameters

Grid profiles:
- tiny: a handful of points, for smoke runs and CI
- default: every precondition regime, full sweep under a minute
- dense: finer alpha/x lattice for overnight runs

Environment (all optional, flags override):
- BICKLEY_REL_TOL, BICKLEY_MAX_REFINEMENTS, BICKLEY_GRID,
  BICKLEY_WORKERS, BICKLEY_LOG_LEVEL
"""

import os
import math
from typing import Dict, Any, List, Optional
from dataclasses import dataclass, field, asdict

import numpy as np
from dotenv import load_dotenv

from .models import ConfigError

load_dotenv()

# Double-precision floor for the relative tolerance
REL_TOL_FLOOR = 2.0 ** -50
MAX_REFINEMENTS_CAP = 30


@dataclass(frozen=True)
class EvalConfig:
    """Quadrature settings; immutable after construction."""
    rel_tol: float = 1e-12
    abs_tol: float = 0.0
    max_refinements: int = 12
    truncation_guard: float = 40.0  # nepers added to the tail cutoff

    def __post_init__(self):
        if not (REL_TOL_FLOOR <= self.rel_tol < 1.0):
            raise ConfigError(f"rel_tol must lie in [2^-50, 1), got {self.rel_tol}")
        if not (self.abs_tol >= 0.0) or not math.isfinite(self.abs_tol):
            raise ConfigError(f"abs_tol must be finite and >= 0, got {self.abs_tol}")
        if not isinstance(self.max_refinements, int) or not (1 <= self.max_refinements <= MAX_REFINEMENTS_CAP):
            raise ConfigError(f"max_refinements must be an integer in [1, {MAX_REFINEMENTS_CAP}], "
                              f"got {self.max_refinements}")
        if not (self.truncation_guard > 0.0) or not math.isfinite(self.truncation_guard):
            raise ConfigError(f"truncation_guard must be positive, got {self.truncation_guard}")

    @property
    def tail_nepers(self) -> float:
        """L = -ln(rel_tol * 1e-3) + guard; the integrand tail is cut below e^-L."""
        return -math.log(self.rel_tol * 1e-3) + self.truncation_guard

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo settings; results are bit-reproducible for fixed (samples, seed, batch)."""
    samples: int = 1_000_000
    seed: int = 42
    batch: int = 100_000  # samples per batch

    def __post_init__(self):
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError(f"samples must be a positive integer, got {self.samples}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2 ** 64):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not isinstance(self.batch, int) or self.batch < 1:
            raise ConfigError(f"batch must be a positive integer, got {self.batch}")

    @property
    def batch_sizes(self) -> List[int]:
        full, rest = divmod(self.samples, self.batch)
        return [self.batch] * full + ([rest] if rest else [])

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# Contract range of the x axis
X_MIN = 1e-6
X_MAX = 700.0


@dataclass(frozen=True)
class GridSpec:
    """Sweep domain. aux holds beta, y, nu, mu, r, s, p, lam lists."""
    name: str
    alpha_values: List[float]
    x_values: List[float]
    aux: Dict[str, List[float]] = field(default_factory=dict)

    AUX_KEYS = ('beta', 'y', 'nu', 'mu', 'r', 's', 'p', 'lam')

    def __post_init__(self):
        if not self.alpha_values or not self.x_values:
            raise ConfigError("alpha_values and x_values must be non-empty")
        for x in self.x_values:
            if not (X_MIN <= x <= X_MAX):
                raise ConfigError(f"x value {x} outside the contract range [{X_MIN}, {X_MAX}]")
        unknown = set(self.aux) - set(self.AUX_KEYS)
        if unknown:
            raise ConfigError(f"Unknown auxiliary parameters: {sorted(unknown)}")
        for key, values in self.aux.items():
            if not values:
                raise ConfigError(f"auxiliary list '{key}' is empty")

    def aux_values(self, key: str) -> List[float]:
        return list(self.aux.get(key, DEFAULT_AUX[key]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'alpha_values': list(self.alpha_values),
            'x_values': list(self.x_values),
            'aux': {k: self.aux_values(k) for k in self.AUX_KEYS},
        }


DEFAULT_AUX: Dict[str, List[float]] = {
    'beta': [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
    'y': [0.3, 1.0, 3.0],
    'nu': [-0.5, 0.5, 0.9],
    'mu': [-0.3, 0.5],
    'r': [1.0, 2.5],
    's': [1.0, 1.5],
    'p': [1.5, 2.0, 3.0],
    'lam': [0.25, 0.5],
}


def log_spaced(start: float, stop: float, count: int) -> List[float]:
    return [float(v) for v in np.geomspace(start, stop, count)]


# =============================================================================
# Pre-defined Grids
# =============================================================================

def get_grid_tiny() -> GridSpec:
    """
    Tiny grid: smoke runs.

    - alpha: {-1, 0, 0.5, 1, 2}
    - x: {0.5, 1, 2}
    """
    return GridSpec(
        name="tiny",
        alpha_values=[-1.0, 0.0, 0.5, 1.0, 2.0],
        x_values=[0.5, 1.0, 2.0],
        aux={
            'beta': [-1.0, 0.0, 1.0],
            'y': [1.0, 3.0],
            'nu': [0.5],
            'mu': [0.5],
            'r': [1.0, 2.0],
            's': [1.0],
            'p': [2.0],
            'lam': [0.5],
        }
    )


def get_grid_default() -> GridSpec:
    """
    Default grid: spans every precondition regime.

    - alpha: {-5, ..., 5} and {+-0.5, +-1.5, 2.5}
    - x: 13 log-spaced points in [0.05, 20]
    """
    alphas = sorted({float(a) for a in range(-5, 6)} | {-1.5, -0.5, 0.5, 1.5, 2.5})
    return GridSpec(
        name="default",
        alpha_values=alphas,
        x_values=log_spaced(0.05, 20.0, 13),
        aux={k: list(v) for k, v in DEFAULT_AUX.items()},
    )


def get_grid_dense() -> GridSpec:
    """
    Dense grid: half-integer alpha lattice and 25 x points.

    Best for: overnight runs
    """
    alphas = [float(a) / 2.0 for a in range(-10, 11)]
    aux = {k: list(v) for k, v in DEFAULT_AUX.items()}
    aux['beta'] = [-3.0, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.0]
    aux['y'] = [0.1, 0.3, 1.0, 3.0, 10.0]
    return GridSpec(
        name="dense",
        alpha_values=alphas,
        x_values=log_spaced(0.02, 30.0, 25),
        aux=aux,
    )


# =============================================================================
# Grid Factory
# =============================================================================

def get_grid(name: str = "default") -> GridSpec:
    """
    Get a sweep grid by name.

    Args:
        name: Grid name (tiny, default, dense)

    Returns:
        GridSpec
    """
    grids = {
        'tiny': get_grid_tiny,
        'default': get_grid_default,
        'dense': get_grid_dense,
    }

    if name.lower() not in grids:
        raise ValueError(f"Unknown grid: {name}. Available: {', '.join(grids)}")

    return grids[name.lower()]()


# =============================================================================
# Environment defaults
# =============================================================================

class Config:
    # Quadrature
    REL_TOL = float(os.environ.get('BICKLEY_REL_TOL', '1e-12'))
    MAX_REFINEMENTS = int(os.environ.get('BICKLEY_MAX_REFINEMENTS', '12'))

    # Verification runs
    GRID = os.environ.get('BICKLEY_GRID', 'default')
    WORKERS = int(os.environ.get('BICKLEY_WORKERS', '1'))

    # Logging
    LOG_LEVEL = os.environ.get('BICKLEY_LOG_LEVEL', 'WARNING')


def get_eval_config_from_env(rel_tol: Optional[float] = None,
                             max_refinements: Optional[int] = None) -> EvalConfig:
    """
    Build an EvalConfig from environment defaults, with explicit overrides.

    Environment variables:
    - BICKLEY_REL_TOL: relative tolerance
    - BICKLEY_MAX_REFINEMENTS: refinement limit
    """
    return EvalConfig(
        rel_tol=rel_tol if rel_tol is not None else Config.REL_TOL,
        max_refinements=max_refinements if max_refinements is not None else Config.MAX_REFINEMENTS,
    )
