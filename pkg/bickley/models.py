# bickley/models.py
"""
Domain types for the Bickley function toolkit

Values:
- KiValue: a computed value with an absolute-error estimate; supports
  first-order error propagation through +, -, *, /, ** so composite
  expressions carry an honest budget.
- McEstimate: Monte-Carlo KiValue with sample diagnostics
- Bracket: lower/upper pair of bounds.

Verdicts:
- InequalityVerdict: one instance of an inequality lhs <= rhs
- GramVerdict: smallest eigenvalue of a Gram matrix
- MonotoneVerdict: monotonicity of a sampled sequence
- CompleteMonotoneVerdict: alternating forward differences
- SweepEntry / SweepReport: aggregated verdicts of a grid sweep

Matrices:
- HankelSpec: order n, base index alpha, abscissa x

Errors:
- BickleyDomainError, BickleyConvergenceError, ConfigError
"""

import math
import numbers
import threading
from collections import OrderedDict
from dataclasses import dataclass, field, asdict
from typing import Dict, List, Optional, Any, Tuple, Union

Number = Union[int, float]

# Floor for normalising margins when both sides vanish
MARGIN_FLOOR = 1e-300


# =============================================================================
# Errors
# =============================================================================

class BickleyDomainError(ValueError):
    """Input outside the domain or the stated preconditions of an operation."""


class BickleyConvergenceError(RuntimeError):
    """Refinement limit reached before the requested tolerance."""

    def __init__(self, message: str, partial: Optional['KiValue'] = None):
        super().__init__(message)
        self.partial = partial


class ConfigError(ValueError):
    """Invalid configuration object."""


# =============================================================================
# Values
# =============================================================================

@dataclass(frozen=True)
class KiValue:
    """
    A function value with an absolute-error estimate.

    Arithmetic propagates errors to first order, e.g.
    (a*b).abs_err_est = |a| eb + |b| ea.
    """
    value: float
    abs_err_est: float = 0.0

    def __post_init__(self):
        if not (self.abs_err_est >= 0.0) or not math.isfinite(self.abs_err_est):
            raise ValueError(f"abs_err_est must be finite and >= 0, got {self.abs_err_est}")

    @staticmethod
    def exact(value: Number) -> 'KiValue':
        return KiValue(float(value), 0.0)

    @staticmethod
    def _coerce(other: Any) -> 'KiValue':
        if isinstance(other, KiValue):
            return other
        if isinstance(other, numbers.Real):
            return KiValue(float(other), 0.0)
        return NotImplemented

    @property
    def rel_err_est(self) -> float:
        if self.value == 0.0:
            return math.inf if self.abs_err_est > 0 else 0.0
        return self.abs_err_est / abs(self.value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KiValue(self.value + o.value, self.abs_err_est + o.abs_err_est)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KiValue(self.value - o.value, self.abs_err_est + o.abs_err_est)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        err = abs(self.value) * o.abs_err_est + abs(o.value) * self.abs_err_est
        return KiValue(self.value * o.value, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.value == 0.0:
            raise ZeroDivisionError("division by a KiValue with zero value")
        q = self.value / o.value
        err = (self.abs_err_est + abs(q) * o.abs_err_est) / abs(o.value)
        return KiValue(q, err)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return KiValue(-self.value, self.abs_err_est)

    def __abs__(self):
        return KiValue(abs(self.value), self.abs_err_est)

    def __pow__(self, k: Number):
        k = float(k)
        if k == 2.0:
            return self * self
        v = self.value ** k
        if self.value == 0.0:
            if k <= 0.0:
                raise ZeroDivisionError("non-positive power of a KiValue with zero value")
            return KiValue(v, self.abs_err_est ** k if k < 1.0 else 0.0)
        return KiValue(v, abs(k * v / self.value) * self.abs_err_est)

    def sqrt(self) -> 'KiValue':
        return self ** 0.5

    def to_dict(self) -> Dict[str, float]:
        return {'value': self.value, 'abs_err_est': self.abs_err_est}


@dataclass(frozen=True)
class McEstimate(KiValue):
    """Monte-Carlo estimate; abs_err_est is one standard error."""
    samples: int = 0
    acceptance_rate: float = 0.0
    variance_exploded: bool = False

    @property
    def standard_error(self) -> float:
        return self.abs_err_est

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Bracket:
    """Two-sided bound; lower <= upper whenever both are finite."""
    lower: float
    upper: float
    lower_err: float = 0.0
    upper_err: float = 0.0

    def __post_init__(self):
        if math.isfinite(self.lower) and math.isfinite(self.upper) and self.lower > self.upper:
            raise ValueError(f"Bracket lower {self.lower} exceeds upper {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def lower_value(self) -> KiValue:
        return KiValue(self.lower, self.lower_err)

    def upper_value(self) -> KiValue:
        return KiValue(self.upper, self.upper_err)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class HolderBracket(Bracket):
    """Closed lower/upper pair of the Hölder-type bound, with the Gaussian K_0 step."""
    k0_gaussian: float = math.inf
    p: float = 2.0
    q: float = 2.0


@dataclass(frozen=True)
class HankelSpec:
    """Hankel matrix M[j][k] = Ki_{alpha-j-k}(x), 0 <= j,k <= n."""
    alpha: float
    n: int
    x: float

    MAX_N = 4

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0 or self.n > self.MAX_N:
            raise BickleyDomainError(f"n must be an integer in [0, {self.MAX_N}], got {self.n}")
        if not math.isfinite(self.alpha):
            raise BickleyDomainError(f"alpha must be finite, got {self.alpha}")
        if not (self.x > 0.0) or not math.isfinite(self.x):
            raise BickleyDomainError(f"x must be positive and finite, got {self.x}")

    @property
    def size(self) -> int:
        return self.n + 1

    def orders(self) -> List[List[float]]:
        return [[self.alpha - j - k for k in range(self.size)] for j in range(self.size)]


# =============================================================================
# Verdicts
# =============================================================================

@dataclass
class Verdict:
    """Common verdict fields; margin is signed and normalised."""
    name: str
    params: Dict[str, Any]
    margin: float
    holds: bool
    err_budget: float
    asserted: bool = True
    note: str = ''

    @property
    def slack(self) -> float:
        return self.margin + self.err_budget

    @property
    def failed(self) -> bool:
        return self.asserted and not self.holds

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class InequalityVerdict(Verdict):
    lhs: float = 0.0
    rhs: float = 0.0


@dataclass
class GramVerdict(Verdict):
    min_eigenvalue: float = 0.0
    trace: float = 0.0
    leading_minors: List[float] = field(default_factory=list)


@dataclass
class MonotoneVerdict(Verdict):
    direction: str = 'non-decreasing'
    values: List[float] = field(default_factory=list)


@dataclass
class CompleteMonotoneVerdict(Verdict):
    """Alternating-sign forward differences up to a given order."""
    order_margins: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)


def make_verdict(name: str, params: Dict[str, Any], lhs: KiValue, rhs: KiValue,
                 tol: float, asserted: bool = True, note: str = '') -> InequalityVerdict:
    """
    Verdict for lhs <= rhs.

    margin = (rhs - lhs) / max(|lhs|, |rhs|, 1e-300);
    holds <=> margin >= -(tol + err_budget). An infinite side gives margin +-1
    with no error budget.
    """
    lhs = KiValue._coerce(lhs)
    rhs = KiValue._coerce(rhs)
    if math.isinf(lhs.value) or math.isinf(rhs.value):
        # an unbounded side decides the comparison on its own
        margin = 1.0 if rhs.value > lhs.value else (-1.0 if rhs.value < lhs.value else 0.0)
        err_budget = 0.0
    else:
        scale = max(abs(lhs.value), abs(rhs.value), MARGIN_FLOOR)
        margin = (rhs.value - lhs.value) / scale
        err_budget = (lhs.abs_err_est + rhs.abs_err_est) / scale
    holds = margin >= -(tol + err_budget)
    return InequalityVerdict(
        name=name,
        params=dict(params),
        margin=margin,
        holds=bool(holds),
        err_budget=err_budget,
        asserted=asserted,
        note=note,
        lhs=lhs.value,
        rhs=rhs.value,
    )


# =============================================================================
# Sweep reports
# =============================================================================

def param_sort_key(params: Dict[str, Any]) -> Tuple:
    """Deterministic ordering key for a parameter point."""
    return tuple(sorted((k, repr(v)) for k, v in params.items()))


@dataclass
class SweepEntry:
    """Aggregate of every verdict produced under one check name."""
    name: str
    count: int = 0
    asserted: int = 0
    min_margin: Optional[float] = None
    min_slack: Optional[float] = None
    argmin: Optional[Dict[str, Any]] = None
    failures: List[Dict[str, Any]] = field(default_factory=list)
    report_only_violations: int = 0

    def add(self, verdict: Verdict):
        self.count += 1
        if not verdict.asserted:
            if not verdict.holds:
                self.report_only_violations += 1
            return
        self.asserted += 1
        if self.min_margin is None or verdict.margin < self.min_margin:
            self.min_margin = verdict.margin
            self.argmin = dict(verdict.params)
        if self.min_slack is None or verdict.slack < self.min_slack:
            self.min_slack = verdict.slack
        if not verdict.holds:
            self.failures.append(verdict.to_dict())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SweepReport:
    """Per-check aggregation; failures empty <=> min_slack >= -tolerance."""
    tolerance: float
    entries: Dict[str, SweepEntry] = field(default_factory=dict)

    def entry(self, name: str) -> SweepEntry:
        if name not in self.entries:
            self.entries[name] = SweepEntry(name=name)
        return self.entries[name]

    @property
    def failure_count(self) -> int:
        return sum(len(e.failures) for e in self.entries.values())

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tolerance': self.tolerance,
            'passed': self.passed,
            'failure_count': self.failure_count,
            'entries': {name: self.entries[name].to_dict() for name in sorted(self.entries)},
        }


# =============================================================================
# Value cache
# =============================================================================

class KiCache:
    """
    Bounded LRU memo of evaluated Bickley values for one verification run.

    Keys are (kind, alpha, x, m) tuples; values are KiValue. Thread-safe.
    """

    def __init__(self, max_items: int = 200_000):
        self.max_items = max_items
        self._items: 'OrderedDict[Tuple, KiValue]' = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Tuple) -> Optional[KiValue]:
        with self._lock:
            if key in self._items:
                self._items.move_to_end(key)
                self.hits += 1
                return self._items[key]
            self.misses += 1
            return None

    def set(self, key: Tuple, value: KiValue):
        with self._lock:
            self._items[key] = value
            self._items.move_to_end(key)
            while len(self._items) > self.max_items:
                self._items.popitem(last=False)

    def clear(self):
        with self._lock:
            self._items.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self._items)

    def stats(self) -> Dict[str, int]:
        return {'items': len(self._items), 'hits': self.hits, 'misses': self.misses}
