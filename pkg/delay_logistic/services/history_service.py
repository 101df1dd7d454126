"""
Initial functions (histories) on [start, 0], start = -1 unless a longer
delay needs more.

Every history is immutable, continuous and strictly positive; positivity
is checked on a 1e-3 grid when it is built.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator

from ..exceptions import (
    ContractViolation,
    DomainError,
    HistorySpecError,
    InvalidConstructionError,
)
from .equation_service import Params

logger = logging.getLogger(__name__)

POSITIVITY_GRID_SPACING = 1e-3
DOMAIN_SLACK = 1e-12
ANCHOR_TOL = 1e-12


class ProfileKind(str, Enum):
    POLYNOMIAL = 'polynomial'
    SINE = 'sine'


@dataclass(frozen=True)
class Profile:
    """
    Log-deviation psi(s) of an exponential-profile history.

    POLYNOMIAL: psi(s) = sum_k coefficients[k] s**k
    SINE:       psi(s) = amplitude sin(2 pi k s)
    """
    kind: ProfileKind = ProfileKind.POLYNOMIAL
    coefficients: Tuple[float, ...] = (0.0,)
    amplitude: float = 0.0
    wavenumber: int = 0

    def __call__(self, s):
        if self.kind == ProfileKind.SINE:
            return self.amplitude * np.sin(2.0 * np.pi * self.wavenumber * np.asarray(s, dtype=float))
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=float), self.coefficients)

    def scalar(self, s: float) -> float:
        if self.kind == ProfileKind.SINE:
            return self.amplitude * math.sin(2.0 * math.pi * self.wavenumber * s)
        value = 0.0
        for coefficient in reversed(self.coefficients):
            value = value * s + coefficient
        return value


class HistoryKind(str, Enum):
    CONSTANT = 'constant'
    STEP_RAMP = 'step_ramp'
    EXP_PROFILE = 'exp_profile'
    TABULATED = 'tabulated'


@dataclass(frozen=True)
class HistoryFn:
    """Base class; subclasses implement ``_value`` and ``_values``."""

    def __post_init__(self):
        if not (self.start < 0):
            raise InvalidConstructionError(f"history must start before 0, got start={self.start}")
        n = int(math.ceil(-self.start / POSITIVITY_GRID_SPACING)) + 1
        grid = np.linspace(self.start, 0.0, n)
        values = self._values(grid)
        if not np.all(np.isfinite(values)) or values.min() <= 0:
            raise InvalidConstructionError(
                f"{self.kind.value} history is not strictly positive on [{self.start}, 0] "
                f"(min {np.nanmin(values):.3e})"
            )

    def eval(self, s: float) -> float:
        if s < self.start - DOMAIN_SLACK or s > DOMAIN_SLACK:
            raise DomainError(f"history evaluated at s={s}, outside [{self.start}, 0]")
        return self._value(min(max(s, self.start), 0.0))

    __call__ = eval

    def eval_many(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if s.size and (s.min() < self.start - DOMAIN_SLACK or s.max() > DOMAIN_SLACK):
            raise DomainError(f"history evaluated outside [{self.start}, 0]")
        return self._values(np.clip(s, self.start, 0.0))

    def sup(self) -> float:
        grid = np.linspace(self.start, 0.0, int(math.ceil(-self.start / POSITIVITY_GRID_SPACING)) + 1)
        return float(self._values(grid).max())


@dataclass(frozen=True)
class ConstantHistory(HistoryFn):
    value: float = 1.0
    start: float = -1.0
    kind: HistoryKind = field(default=HistoryKind.CONSTANT, init=False)

    def _value(self, s):
        return self.value

    def _values(self, s):
        return np.full_like(s, self.value, dtype=float)


@dataclass(frozen=True)
class StepRampHistory(HistoryFn):
    """Plateau on [start, plateau_end], then linear up to terminal_q at 0."""
    plateau_value: float = 1.0
    plateau_end: float = -0.5
    terminal_q: float = 1.0
    start: float = -1.0
    kind: HistoryKind = field(default=HistoryKind.STEP_RAMP, init=False)

    def _value(self, s):
        if s <= self.plateau_end:
            return self.plateau_value
        weight = (s - self.plateau_end) / (0.0 - self.plateau_end)
        return self.plateau_value + weight * (self.terminal_q - self.plateau_value)

    def _values(self, s):
        weight = np.clip((s - self.plateau_end) / (0.0 - self.plateau_end), 0.0, 1.0)
        return self.plateau_value + weight * (self.terminal_q - self.plateau_value)


@dataclass(frozen=True)
class ExpProfileHistory(HistoryFn):
    """phi(s) = c exp(r s + psi(s))."""
    c: float = 1.0
    r: float = 1.0
    profile: Profile = field(default_factory=Profile)
    start: float = -1.0
    kind: HistoryKind = field(default=HistoryKind.EXP_PROFILE, init=False)

    def _value(self, s):
        return self.c * math.exp(self.r * s + self.profile.scalar(s))

    def _values(self, s):
        return self.c * np.exp(self.r * s + self.profile(s))

    def psi(self, s: float) -> float:
        return self.profile.scalar(s)


@dataclass(frozen=True)
class TabulatedHistory(HistoryFn):
    """Monotone-preserving piecewise-cubic (PCHIP) interpolation of samples."""
    abscissae: Tuple[float, ...] = (-1.0, 0.0)
    samples: Tuple[float, ...] = (1.0, 1.0)
    kind: HistoryKind = field(default=HistoryKind.TABULATED, init=False)
    _interpolant: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = np.asarray(self.abscissae, dtype=float)
        phi = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.shape != phi.shape or s.size < 2:
            raise InvalidConstructionError("tabulated history needs matching 1-d arrays with at least 2 points")
        if np.any(np.diff(s) <= 0):
            raise InvalidConstructionError("tabulated abscissae must be strictly increasing")
        if abs(s[-1]) > ANCHOR_TOL:
            raise InvalidConstructionError(f"tabulated abscissae must end at 0, got {s[-1]}")
        if np.any(phi <= 0):
            raise InvalidConstructionError("tabulated samples must be strictly positive")
        s[-1] = 0.0
        object.__setattr__(self, '_interpolant', PchipInterpolator(s, phi, extrapolate=False))
        super().__post_init__()

    @property
    def start(self) -> float:
        return float(self.abscissae[0])

    def _value(self, s):
        return float(self._interpolant(s))

    def _values(self, s):
        return self._interpolant(s)


class OrderRelation(str, Enum):
    BELOW_EXPONENTIAL = 'below_exponential'
    ABOVE_EXPONENTIAL = 'above_exponential'
    NEITHER = 'neither'


@dataclass(frozen=True)
class OrderCertificate:
    relation: OrderRelation
    c: float
    checked_grid_spacing: float


class HistoryService:
    """Constructors, evaluation, order certification and spec parsing."""

    def eval(self, h: HistoryFn, s: float) -> float:
        return h.eval(s)

    def make_constant(self, value: float, start: float = -1.0) -> ConstantHistory:
        if not value > 0:
            raise InvalidConstructionError(f"constant history must be positive, got {value}")
        return ConstantHistory(value=float(value), start=start)

    def make_step_ramp(self, plateau_value: float, plateau_end: float, terminal_q: float) -> StepRampHistory:
        if not -1.0 <= plateau_end < 0.0:
            raise InvalidConstructionError(f"plateau end must lie in [-1, 0), got {plateau_end}")
        return StepRampHistory(plateau_value=float(plateau_value), plateau_end=float(plateau_end),
                               terminal_q=float(terminal_q))

    def make_exponential(self, c: float, r: float, start: float = -1.0) -> ExpProfileHistory:
        self._require_positive(c=c, r=r)
        return ExpProfileHistory(c=float(c), r=float(r), start=start)

    def make_blowup_seed(self, p: Params, h_param: float) -> StepRampHistory:
        """
        History equal to 1 on [-1, -1/2] and q = h/(r alpha) at 0.

        The delayed term is identically 1 on [0, 1/2], so the solution
        follows x' = r alpha x**2 and escapes at t = 1/h.
        """
        if p.alpha <= 0:
            raise InvalidConstructionError(f"blow-up seed requires alpha > 0, got {p.alpha}")
        if not h_param >= 2:
            raise InvalidConstructionError(f"blow-up seed requires h >= 2, got {h_param}")
        q = h_param / (p.r * p.alpha)
        logger.debug(f"Blow-up seed for {p}: q={q}, predicted escape at {1.0 / h_param}")
        return StepRampHistory(plateau_value=1.0, plateau_end=-0.5, terminal_q=q)

    def make_below_exponential(self, c: float, r: float, delta: float) -> ExpProfileHistory:
        """c exp(r s - delta s**2): lies below c e^{rs}, touches it at 0, strictly below at -1."""
        self._require_positive(c=c, r=r, delta=delta)
        return ExpProfileHistory(c=float(c), r=float(r), profile=Profile(coefficients=(0.0, 0.0, -float(delta))))

    def make_above_exponential(self, c: float, r: float, delta: float) -> ExpProfileHistory:
        self._require_positive(c=c, r=r, delta=delta)
        return ExpProfileHistory(c=float(c), r=float(r), profile=Profile(coefficients=(0.0, 0.0, float(delta))))

    def make_oscillating(self, c: float, r: float, delta: float, k: int) -> ExpProfileHistory:
        """c exp(r s + delta sin(2 pi k s)); crosses c e^{rs} when k >= 1."""
        self._require_positive(c=c, r=r)
        return ExpProfileHistory(c=float(c), r=float(r),
                                 profile=Profile(kind=ProfileKind.SINE, amplitude=float(delta), wavenumber=int(k)))

    def make_tabulated(self, abscissae, samples) -> TabulatedHistory:
        return TabulatedHistory(abscissae=tuple(float(s) for s in abscissae),
                                samples=tuple(float(v) for v in samples))

    def make_random(self, rng: np.random.Generator, start: float = -1.0,
                    low: float = 0.2, high: float = 5.0, knots: int = 6) -> TabulatedHistory:
        """Seeded positive piecewise-cubic history with values in [low, high]."""
        abscissae = np.linspace(start, 0.0, knots)
        return self.make_tabulated(abscissae, rng.uniform(low, high, size=knots))

    def certify_order(self, h: HistoryFn, p: Params, c: float, grid_n: int) -> OrderCertificate:
        """
        Check the ordering hypotheses against c e^{rs} on a uniform grid of
        grid_n + 1 points over [-1, 0].

        below: phi <= c e^{rs}, phi(0) = c, phi(-1) < c e^{-r}
        above: phi >= c e^{rs}, phi(0) = c, phi(-1) > c e^{-r}

        A grid check is necessary, not sufficient.
        """
        if grid_n < 100:
            raise ContractViolation(f"grid_n must be at least 100, got {grid_n}")
        spacing = 1.0 / grid_n
        grid = np.linspace(-1.0, 0.0, grid_n + 1)
        phi = h.eval_many(grid)
        reference = c * np.exp(p.r * grid)

        if abs(h.eval(0.0) - c) > ANCHOR_TOL * max(1.0, c):
            return OrderCertificate(OrderRelation.NEITHER, c, spacing)

        slack = 4.0 * np.finfo(float).eps
        phi_left = h.eval(-1.0)
        reference_left = c * math.exp(-p.r)
        if np.all(phi <= reference * (1.0 + slack)) and phi_left < reference_left:
            relation = OrderRelation.BELOW_EXPONENTIAL
        elif np.all(phi >= reference * (1.0 - slack)) and phi_left > reference_left:
            relation = OrderRelation.ABOVE_EXPONENTIAL
        else:
            relation = OrderRelation.NEITHER
        logger.debug(f"Order certificate for c={c}, r={p.r}: {relation.value}")
        return OrderCertificate(relation, c, spacing)

    def parse_spec(self, spec: str, p: Params) -> HistoryFn:
        """
        Parse the history mini-language:

            const:v=<x> | stepramp:q=<x> | exp:c=<x>
            thm2:c=<x>,delta=<x> | thm3:c=<x>,delta=<x>   (aliases below:, above:)
            osc:c=<x>,delta=<x>,k=<int> | table:<path.csv>

        Errors name the offending token.
        """
        spec = spec.strip()
        kind, sep, body = spec.partition(':')
        if not sep:
            raise HistorySpecError("history spec needs '<kind>:<arguments>'", spec)
        kind = kind.strip().lower()

        if kind == 'table':
            return self._read_table(body.strip())

        builders: Dict[str, Tuple[Tuple[str, ...], Callable[[Dict[str, float]], HistoryFn]]] = {
            'const': (('v',), lambda a: self.make_constant(a['v'])),
            'stepramp': (('q',), lambda a: self.make_step_ramp(1.0, -0.5, a['q'])),
            'exp': (('c',), lambda a: self.make_exponential(a['c'], p.r)),
            'thm2': (('c', 'delta'), lambda a: self.make_below_exponential(a['c'], p.r, a['delta'])),
            'below': (('c', 'delta'), lambda a: self.make_below_exponential(a['c'], p.r, a['delta'])),
            'thm3': (('c', 'delta'), lambda a: self.make_above_exponential(a['c'], p.r, a['delta'])),
            'above': (('c', 'delta'), lambda a: self.make_above_exponential(a['c'], p.r, a['delta'])),
            'osc': (('c', 'delta', 'k'), lambda a: self.make_oscillating(a['c'], p.r, a['delta'], int(a['k']))),
        }
        if kind not in builders:
            raise HistorySpecError("unknown history kind", kind)
        required, build = builders[kind]
        arguments = self._parse_arguments(body, required)
        try:
            return build(arguments)
        except InvalidConstructionError as exc:
            raise HistorySpecError(f"invalid history ({exc})", spec) from exc

    def _parse_arguments(self, body: str, required: Tuple[str, ...]) -> Dict[str, float]:
        arguments: Dict[str, float] = {}
        for token in filter(None, (part.strip() for part in body.split(','))):
            key, sep, raw = token.partition('=')
            key = key.strip().lower()
            if not sep or key not in required:
                raise HistorySpecError("unexpected history argument", token)
            if key in arguments:
                raise HistorySpecError("duplicate history argument", token)
            try:
                value = float(raw)
            except ValueError:
                raise HistorySpecError("history argument is not a number", token) from None
            if key == 'k' and value != int(value):
                raise HistorySpecError("wavenumber must be an integer", token)
            arguments[key] = value
        missing = [key for key in required if key not in arguments]
        if missing:
            raise HistorySpecError("missing history argument", missing[0])
        return arguments

    def _read_table(self, path: str) -> TabulatedHistory:
        if not path:
            raise HistorySpecError("table history needs a CSV path", 'table:')
        if not Path(path).is_file():
            raise HistorySpecError("history table not found", path)
        try:
            frame = pd.read_csv(path)
        except (ValueError, OSError) as exc:
            raise HistorySpecError(f"unreadable history table ({exc})", path) from exc
        if list(frame.columns[:2]) != ['s', 'phi']:
            raise HistorySpecError("history table must have columns s,phi", ','.join(map(str, frame.columns)))
        try:
            return self.make_tabulated(frame['s'].to_numpy(float), frame['phi'].to_numpy(float))
        except InvalidConstructionError as exc:
            raise HistorySpecError(f"invalid history table ({exc})", path) from exc

    @staticmethod
    def _require_positive(**values: Optional[float]) -> None:
        for name, value in values.items():
            if not (value is not None and math.isfinite(value) and value > 0):
                raise InvalidConstructionError(f"{name} must be positive, got {value}")
