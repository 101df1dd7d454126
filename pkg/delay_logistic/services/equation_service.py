"""
Parameters and right-hand sides of the delay logistic equation

    x'(t) = r x(t) (1 + alpha x(t) - x(t-1))

and of its multi-delay generalization

    x'(t) = r x(t) (1 + sum_i a_i x(t - tau_i)),

plus the map from the raw population equation
N'(s) = N(s) (r~ + a N(s) - b N(s - tau)) to the normalized one.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

from ..exceptions import ContractViolation, InvalidParameterError

logger = logging.getLogger(__name__)

DELAY_DEDUP_TOL = 1e-12


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class Params:
    """Normalized parameters (r, alpha); delay is 1."""
    r: float
    alpha: float

    def __post_init__(self):
        r = _require_finite('r', self.r)
        alpha = _require_finite('alpha', self.alpha)
        if r <= 0:
            raise InvalidParameterError(f"r must be positive, got {r}")
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'alpha', alpha)

    def as_dict(self) -> dict:
        return {'r': self.r, 'alpha': self.alpha}


@dataclass(frozen=True)
class RawParams:
    """Parameters of the un-normalized population equation."""
    r_tilde: float
    a: float
    b: float
    tau: float

    def __post_init__(self):
        for name in ('r_tilde', 'a', 'b', 'tau'):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.r_tilde <= 0:
            raise InvalidParameterError(f"r_tilde must be positive, got {self.r_tilde}")
        if self.b <= 0:
            raise InvalidParameterError(f"b must be positive, got {self.b}")
        if self.tau <= 0:
            raise InvalidParameterError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class GenParams:
    """
    Multi-delay parameters: growth rate r and terms (a_i, tau_i).

    Delays are sorted ascending and distinct; a zero delay is an
    instantaneous term.
    """
    r: float
    terms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        r = _require_finite('r', self.r)
        if r <= 0:
            raise InvalidParameterError(f"r must be positive, got {r}")
        terms = tuple((_require_finite('a_i', a), _require_finite('tau_i', tau)) for a, tau in self.terms)
        if not terms:
            raise InvalidParameterError("at least one term is required")
        delays = [tau for _, tau in terms]
        if any(tau < 0 for tau in delays):
            raise InvalidParameterError(f"delays must be nonnegative, got {delays}")
        for lower, upper in zip(delays, delays[1:]):
            if upper - lower <= DELAY_DEDUP_TOL:
                raise InvalidParameterError(f"delays must be sorted ascending and distinct, got {delays}")
        if delays[-1] <= 0:
            raise InvalidParameterError("the largest delay must be positive")
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'terms', terms)

    @property
    def delays(self) -> Tuple[float, ...]:
        return tuple(tau for _, tau in self.terms)

    @property
    def coefficients(self) -> Tuple[float, ...]:
        return tuple(a for a, _ in self.terms)

    @property
    def max_delay(self) -> float:
        return self.terms[-1][1]

    @property
    def instantaneous(self) -> float:
        """Sum of the coefficients attached to a zero delay."""
        return sum(a for a, tau in self.terms if tau == 0.0)

    @property
    def lagged_terms(self) -> Tuple[Tuple[float, float], ...]:
        return tuple((a, tau) for a, tau in self.terms if tau > 0.0)

    def as_dict(self) -> dict:
        return {'r': self.r, 'terms': [list(term) for term in self.terms]}


@dataclass(frozen=True)
class Equilibrium:
    exists: bool
    value: Optional[float] = None


class Normalization(NamedTuple):
    params: Params
    state_scale: float
    time_scale: float


class EquationService:
    """Right-hand sides, equilibria and normalization of the equation."""

    def rhs(self, p: Params, x_now: float, x_delayed: float) -> float:
        return p.r * x_now * (1.0 + p.alpha * x_now - x_delayed)

    def equilibrium(self, p: Params) -> Equilibrium:
        # strict inequality: alpha == 1 has no positive equilibrium
        if p.alpha >= 1.0:
            return Equilibrium(exists=False)
        return Equilibrium(exists=True, value=1.0 / (1.0 - p.alpha))

    def normalize(self, raw: RawParams) -> Normalization:
        """
        Map the raw equation onto the normalized one.

        x(t) = (b / r~) N(tau t) solves the normalized equation with
        r = tau r~ and alpha = a / b.
        """
        params = Params(r=raw.tau * raw.r_tilde, alpha=raw.a / raw.b)
        normalization = Normalization(params, raw.b / raw.r_tilde, raw.tau)
        logger.debug(f"Normalized {raw} -> {normalization}")
        return normalization

    def to_raw(self, normalization: Normalization, t: float, x: float) -> Tuple[float, float]:
        """Map a point (t, x) of a normalized solution back to (s, N)."""
        return normalization.time_scale * t, x / normalization.state_scale

    def raw_as_general(self, raw: RawParams) -> GenParams:
        """The raw equation written as N' = r~ N (1 + (a/r~) N - (b/r~) N(s - tau))."""
        return GenParams(r=raw.r_tilde, terms=((raw.a / raw.r_tilde, 0.0), (-raw.b / raw.r_tilde, raw.tau)))

    def as_general(self, p: Params) -> GenParams:
        return GenParams(r=p.r, terms=((p.alpha, 0.0), (-1.0, 1.0)))

    def rhs_gen(self, p: GenParams, x_now: float, x_delayed: Sequence[float]) -> float:
        """
        Multi-delay right-hand side; ``x_delayed[i]`` is x(t - tau_i),
        which for a zero delay is x_now itself.
        """
        if len(x_delayed) != len(p.terms):
            raise ContractViolation(
                f"expected {len(p.terms)} delayed values, got {len(x_delayed)}"
            )
        feedback = sum(a * xd for (a, _), xd in zip(p.terms, x_delayed))
        return p.r * x_now * (1.0 + feedback)
