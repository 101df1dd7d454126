"""
Closed forms and root finding for the (alpha, r) parameter plane.
"""
import cmath
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect, brentq

from ..exceptions import ConvergenceError, DomainError
from .equation_service import EquationService, GenParams, Params

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12
RATE_XTOL = 1e-12
CHAR_ROOT_RESIDUAL_TOL = 1e-9
RATE_SCAN_POINTS = 2000


class LocalStability(str, Enum):
    STABLE = 'stable'
    UNSTABLE = 'unstable'
    BOUNDARY = 'boundary'


@dataclass(frozen=True)
class RegionClass:
    alpha: float
    r: float
    equilibrium_exists: bool
    equilibrium: Optional[float]
    globally_stable: bool
    locally_stable: Optional[LocalStability]
    bounded_all: bool
    blowup_exists: bool
    unbounded_limsup: bool
    boundary_r: Optional[float]

    def as_dict(self) -> dict:
        data = asdict(self)
        data['locally_stable'] = self.locally_stable.value if self.locally_stable else None
        return data


class AnalysisService:
    """Stability boundary, region classification and exponential-solution conditions."""

    def __init__(self, equation_service: EquationService):
        self.equation_service = equation_service

    def stability_boundary_r(self, alpha: float) -> float:
        """r*(alpha) = sqrt((1 - alpha)/(1 + alpha)) arccos(alpha) on (-1, 1)."""
        if not -1.0 < alpha < 1.0:
            raise DomainError(f"stability boundary is defined for -1 < alpha < 1, got {alpha}")
        return math.sqrt((1.0 - alpha) / (1.0 + alpha)) * math.acos(alpha)

    def char_root_boundary(self, alpha: float) -> float:
        """
        Boundary rate from the characteristic equation of the linearization
        u' = r x* (alpha u(t) - u(t-1)) at x* = 1/(1 - alpha).

        With lambda = i omega the real and imaginary parts read

            r x* (alpha - cos omega) = 0
            omega = r x* sin omega

        The first is rooted for omega in (0, pi) by bisection, the second
        then gives r. The complex residual of the full equation is checked.
        """
        if not -1.0 < alpha < 1.0:
            raise DomainError(f"characteristic boundary is defined for -1 < alpha < 1, got {alpha}")
        x_star = 1.0 / (1.0 - alpha)
        omega = bisect(lambda w: alpha - math.cos(w), 0.0, math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                       maxiter=200)
        r = omega / (x_star * math.sin(omega))
        lam = 1j * omega
        residual = abs(lam - r * x_star * (alpha - cmath.exp(-lam)))
        if not math.isfinite(r) or residual > CHAR_ROOT_RESIDUAL_TOL * max(1.0, omega):
            raise ConvergenceError(f"characteristic root for alpha={alpha} did not converge", residual=residual)
        return r

    def classify(self, p: Params) -> RegionClass:
        alpha, r = p.alpha, p.r
        equilibrium = self.equation_service.equilibrium(p)
        globally_stable = alpha <= -1.0
        boundary_r = self.stability_boundary_r(alpha) if -1.0 < alpha < 1.0 else None

        if not equilibrium.exists:
            local = None
        elif globally_stable:
            local = LocalStability.STABLE
        elif abs(r - boundary_r) <= BOUNDARY_TOL:
            local = LocalStability.BOUNDARY
        else:
            local = LocalStability.STABLE if r < boundary_r else LocalStability.UNSTABLE

        region = RegionClass(
            alpha=alpha,
            r=r,
            equilibrium_exists=equilibrium.exists,
            equilibrium=equilibrium.value,
            globally_stable=globally_stable,
            locally_stable=local,
            bounded_all=alpha <= 0.0,
            blowup_exists=alpha > 0.0,
            unbounded_limsup=alpha >= 1.0,
            boundary_r=boundary_r,
        )
        logger.debug(f"Classified {p}: {region}")
        return region

    def exp_solution_rate(self, alpha: float) -> float:
        """The rate r = -ln(alpha) for which c e^{rt} is a solution."""
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"exponential solutions need 0 < alpha < 1, got {alpha}")
        return -math.log(alpha)

    def exponential_residual(self, g: GenParams) -> float:
        """sum_i a_i e^{-r tau_i}; zero iff c e^{rt} solves the multi-delay equation."""
        return self._residual(g.terms, g.r)

    def exp_solution_rate_gen(self, terms: Sequence[Tuple[float, float]],
                              r_bracket: Tuple[float, float] = (0.0, 50.0)) -> Optional[float]:
        """
        First sign change of the residual on a uniform scan of ``r_bracket``
        (RATE_SCAN_POINTS cells), refined by brentq; None when no cell shows one.

        This is the smallest positive rate only at scan resolution: an even
        number of roots inside one cell, a double root included, goes unseen.
        Narrow the bracket to resolve closely spaced roots.
        """
        low, high = float(r_bracket[0]), float(r_bracket[1])
        if not (math.isfinite(low) and math.isfinite(high)) or low < 0.0 or high <= low:
            raise DomainError(f"invalid rate bracket {r_bracket}")
        terms = tuple((float(a), float(tau)) for a, tau in terms)

        grid = np.linspace(low, high, RATE_SCAN_POINTS + 1)
        if grid[0] == 0.0:
            grid[0] = min(1e-12, grid[1] / 2)
        values = np.array([self._residual(terms, r) for r in grid])
        exact = np.flatnonzero(values == 0.0)
        if exact.size:
            return float(grid[exact[0]])
        changes = np.flatnonzero(np.sign(values[:-1]) != np.sign(values[1:]))
        if not changes.size:
            logger.info(f"No sign change of the exponential residual for {terms} on {r_bracket}")
            return None
        i = changes[0]
        rate = brentq(lambda r: self._residual(terms, r), grid[i], grid[i + 1], xtol=RATE_XTOL)
        logger.debug(f"Exponential rate for {terms}: {rate}")
        return float(rate)

    def boundary_rate_in_angle(self, omega: float) -> float:
        """g1(omega) = omega (1 - cos omega) / sin omega: the boundary rate for alpha = cos omega."""
        self._check_angle(omega)
        return omega * math.tan(omega / 2)

    def exponential_rate_in_angle(self, omega: float) -> float:
        """g2(omega) = -ln(cos omega): the exponential-solution rate for alpha = cos omega."""
        self._check_angle(omega)
        return -math.log1p(-2.0 * math.sin(omega / 2) ** 2)

    def exponential_locus_dominates(self, n: int = 10000) -> bool:
        """
        g2 > g1 at n interior points of a uniform grid of (0, pi/2).

        Both sides are written in half-angle form; the gap is O(omega**4)
        near 0 and would otherwise drown in the cancellation of 1 - cos.
        """
        if n < 1000:
            raise DomainError(f"at least 1000 grid points are required, got {n}")
        omegas = np.linspace(0.0, math.pi / 2, n + 2)[1:-1]
        g1 = omegas * np.tan(omegas / 2)
        g2 = -np.log1p(-2.0 * np.sin(omegas / 2) ** 2)
        violations = int(np.count_nonzero(g2 - g1 <= 0.0))
        if violations:
            logger.warning(f"Exponential locus below the stability boundary at {violations} of {n} angles")
        return violations == 0

    def blowup_time_lower_bound(self, r: float, c: float) -> float:
        """(1/r) ln(1 + e^r/c): blow-up time of y' = r y (1 + e^{-r} y), y(0) = c."""
        if not (r > 0 and c > 0):
            raise DomainError(f"r and c must be positive, got r={r}, c={c}")
        return math.log1p(math.exp(r) / c) / r

    def comparison_solution(self, r: float, c: float, t: float) -> float:
        """y(t) = c e^{rt} / (1 + (1 - e^{rt}) e^{-r} c), defined before the blow-up time."""
        if t >= self.blowup_time_lower_bound(r, c):
            raise DomainError(f"comparison solution blows up before t={t}")
        growth = math.exp(r * t)
        return c * growth / (1.0 + (1.0 - growth) * math.exp(-r) * c)

    def a_priori_bound(self, alpha: float, r: float, history_max: float, x0: float) -> float:
        """
        Upper bound on a solution for -1 < alpha <= 0.

        alpha < 0: x' <= r x (1 + alpha x) keeps x below max(x(0), -1/alpha).
        alpha = 0: every local maximum satisfies x(t-1) = 1 and x grows at most
        by e^r over a unit interval, so x <= max(|phi|, x(0) e^r, e^r).
        """
        if not -1.0 < alpha <= 0.0:
            raise DomainError(f"a priori bound is available for -1 < alpha <= 0, got {alpha}")
        if alpha < 0.0:
            return max(x0, -1.0 / alpha)
        growth = math.exp(r)
        return max(history_max, x0 * growth, growth)

    def stability_chart(self, alpha_min: float, alpha_max: float, n: int) -> pd.DataFrame:
        """Boundary curve and exponential-solution curve sampled at n points."""
        if not (-1.0 < alpha_min <= alpha_max < 1.0):
            raise DomainError(f"alpha range must lie inside (-1, 1), got [{alpha_min}, {alpha_max}]")
        if n < 1 or (n == 1 and alpha_min != alpha_max):
            raise DomainError(f"need at least two samples for a range, got n={n}")
        alphas = np.linspace(alpha_min, alpha_max, n)
        frame = pd.DataFrame({
            'alpha': alphas,
            'r_boundary': [self.stability_boundary_r(a) for a in alphas],
            'exp_solution_r': [self.exp_solution_rate(a) if a > 0.0 else np.nan for a in alphas],
        })
        logger.info(f"Stability chart on [{alpha_min}, {alpha_max}] with {n} samples")
        return frame

    @staticmethod
    def _residual(terms: Sequence[Tuple[float, float]], r: float) -> float:
        return float(sum(a * math.exp(-r * tau) for a, tau in terms))

    @staticmethod
    def _check_angle(omega: float) -> None:
        if not 0.0 < omega < math.pi / 2:
            raise DomainError(f"omega must lie in (0, pi/2), got {omega}")
