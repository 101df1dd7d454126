"""
Method-of-steps integration of the delay logistic equation.

Each interval between consecutive delay-mesh points is integrated as an
ODE with an embedded Runge-Kutta pair; delayed values are read from the
history or from the dense output of already committed pieces, so an
interpolant never straddles a derivative discontinuity.

Three coordinates are used for the state:

    direct      x itself
    reciprocal  w = 1/x, above x_switch; blow-up is the root w = 0
    log         u = ln x, below x_floor; keeps every value positive

Switches are located as events on the dense output and carry hysteresis
(back to direct below x_switch/10, above 10 x_floor).

On the exponential locus sum_i a_i e^{-r tau_i} = 0 the state is the
deviation z = ln(x / (c e^{rt})) instead, c = phi(0); c e^{rt} is then an
exact fixed point and the unstable growth of x never enters the state.
"""
import dataclasses
import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings
from scipy.integrate import DOP853, RK45, OdeSolution
from scipy.integrate._ivp.rk import MAX_FACTOR, MIN_FACTOR, SAFETY, rk_step
from scipy.optimize import brentq

from ..exceptions import ContractViolation, DomainError, InvalidParameterError
from .equation_service import EquationService, GenParams, Params
from .history_service import ExpProfileHistory, HistoryFn, HistoryService, OrderRelation

logger = logging.getLogger(__name__)

MESH_TOL = 1e-12
# parameters quoted to nine decimals, e.g. alpha = 0.367879441 for r = 1, count as the locus
EXP_LOCUS_TOL = 1e-9
EVENT_XTOL = 1e-14
PI_BETA = 0.04
PI_ERROR_FLOOR = 1e-4


class _PIStepControl:
    """
    Proportional-integral step-size control for scipy's explicit pairs.

    After an accepted step h_new = h * SAFETY * err^(-1/(q+1) + 0.75 beta) * err_prev^beta;
    rejected steps shrink with the elementary controller.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.previous_error = PI_ERROR_FLOOR

    def _accepted_factor(self, error_norm: float) -> float:
        if error_norm == 0:
            return MAX_FACTOR
        exponent = self.error_exponent + 0.75 * PI_BETA
        return min(MAX_FACTOR, SAFETY * error_norm ** exponent * self.previous_error ** PI_BETA)

    def _step_impl(self):
        t, y = self.t, self.y
        min_step = 10 * np.abs(np.nextafter(t, self.direction * np.inf) - t)
        h_abs = min(max(self.h_abs, min_step), self.max_step)

        step_rejected = False
        while True:
            if h_abs < min_step:
                return False, self.TOO_SMALL_STEP
            t_new = t + h_abs * self.direction
            if self.direction * (t_new - self.t_bound) > 0:
                t_new = self.t_bound
            h = t_new - t
            h_abs = np.abs(h)

            y_new, f_new = rk_step(self.fun, t, y, self.f, h, self.A, self.B, self.C, self.K)
            scale = self.atol + np.maximum(np.abs(y), np.abs(y_new)) * self.rtol
            error_norm = self._estimate_error_norm(self.K, h, scale)
            if error_norm < 1:
                factor = self._accepted_factor(error_norm)
                if step_rejected:
                    factor = min(1, factor)
                self.previous_error = max(error_norm, PI_ERROR_FLOOR)
                break
            h_abs *= max(MIN_FACTOR, SAFETY * error_norm ** self.error_exponent)
            step_rejected = True

        self.h_previous = h
        self.y_old = y
        self.t = t_new
        self.y = y_new
        self.h_abs = h_abs * factor
        self.f = f_new
        return True, None


class PIDOP853(_PIStepControl, DOP853):
    pass


class PIRK45(_PIStepControl, RK45):
    pass


STEPPERS = {'DOP853': PIDOP853, 'RK45': PIRK45}


class Coordinate(str, Enum):
    DIRECT = 'direct'
    RECIPROCAL = 'reciprocal'
    LOG = 'log'


class RunStatus(str, Enum):
    COMPLETED = 'completed'
    BLOWN_UP = 'blown_up'
    ABORTED = 'aborted'


@dataclass(frozen=True)
class SolverConfig:
    rtol: float = 1e-9
    atol: float = 1e-12
    t_end: float = 10.0
    x_switch: float = 1e3
    x_floor: float = 1e-3
    blowup_time_tol: float = 1e-9
    max_steps: int = 500000
    method: str = 'DOP853'
    mesh_cap: int = 20000
    max_step: float = math.inf
    first_step: Optional[float] = None
    exponential_frame: bool = True

    def __post_init__(self):
        for name in ('rtol', 'atol', 't_end', 'x_switch', 'x_floor', 'blowup_time_tol', 'max_step'):
            value = getattr(self, name)
            if not (value > 0):
                raise InvalidParameterError(f"{name} must be positive, got {value}")
        if self.rtol < 10 * np.finfo(float).eps:
            raise InvalidParameterError(f"rtol must be at least 10 machine epsilons, got {self.rtol}")
        if self.max_steps < 1 or self.mesh_cap < 2:
            raise InvalidParameterError("max_steps and mesh_cap must be positive")
        if self.method not in STEPPERS:
            raise InvalidParameterError(f"unknown method {self.method}, expected one of {sorted(STEPPERS)}")
        if not 100 * self.x_floor < self.x_switch:
            raise InvalidParameterError("x_floor must be at least two decades below x_switch")
        if self.first_step is not None and not self.first_step > 0:
            raise InvalidParameterError(f"first_step must be positive, got {self.first_step}")

    @classmethod
    def from_settings(cls, **overrides) -> 'SolverConfig':
        lab = settings.DDE_LAB
        values = {
            'rtol': lab['RTOL'],
            'atol': lab['ATOL'],
            'x_switch': lab['X_SWITCH'],
            'x_floor': lab['X_FLOOR'],
            'blowup_time_tol': lab['BLOWUP_TIME_TOL'],
            'max_steps': lab['MAX_STEPS'],
            'method': lab['METHOD'],
            'mesh_cap': lab['MESH_CAP'],
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def replace(self, **changes) -> 'SolverConfig':
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {key: (None if isinstance(value, float) and math.isinf(value) else value)
                for key, value in dataclasses.asdict(self).items()}


@dataclass(frozen=True)
class BlowUpReport:
    t_blowup: float
    bracket_width: float
    bracket: Tuple[float, float]
    lower_bound: Optional[float] = None


class _DelayProblem:
    """A scalar delay equation written in all coordinates it supports."""
    variable = 'x'
    supports_log = True
    delays: Tuple[float, ...] = ()

    def history(self, s: float) -> float:
        raise NotImplementedError

    def magnitude(self, value: float) -> float:
        return value

    def from_magnitude(self, m: float) -> float:
        return m

    def derivative(self, coordinate: Coordinate, t: float, y: float, lagged: Sequence[float]) -> float:
        raise NotImplementedError

    def encode(self, coordinate: Coordinate, value: float) -> float:
        if coordinate is Coordinate.RECIPROCAL:
            return 1.0 / self.magnitude(value)
        if coordinate is Coordinate.LOG:
            return math.log(self.magnitude(value))
        return value

    def decode(self, coordinate: Coordinate, y: float) -> float:
        if coordinate is Coordinate.RECIPROCAL:
            return self.from_magnitude(1.0 / y)
        if coordinate is Coordinate.LOG:
            return self.from_magnitude(math.exp(y))
        return y

    def level(self, coordinate: Coordinate, m: float) -> float:
        """Value of the coordinate at which the magnitude equals m."""
        if coordinate is Coordinate.RECIPROCAL:
            return 1.0 / m
        if coordinate is Coordinate.LOG:
            return math.log(m)
        return self.from_magnitude(m)


class _LogisticProblem(_DelayProblem):
    """
    x' = r x (1 + inst x + sum_i a_i x(t - tau_i))
    w' = -r (1 + sum_i a_i x(t - tau_i)) w - r inst
    u' = r (1 + inst e^u + sum_i a_i x(t - tau_i))
    """

    def __init__(self, params: GenParams, history: HistoryFn):
        self.r = params.r
        self.instantaneous = params.instantaneous
        lagged = params.lagged_terms
        self.coefficients = tuple(a for a, _ in lagged)
        self.delays = tuple(tau for _, tau in lagged)
        self._history = history

    def history(self, s: float) -> float:
        return self._history.eval(s)

    def derivative(self, coordinate, t, y, lagged):
        feedback = 1.0 + sum(a * xd for a, xd in zip(self.coefficients, lagged))
        if coordinate is Coordinate.RECIPROCAL:
            return -self.r * feedback * y - self.r * self.instantaneous
        if coordinate is Coordinate.LOG:
            return self.r * (feedback + self.instantaneous * math.exp(y))
        return self.r * y * (feedback + self.instantaneous * y)


class _ExponentialDeviationProblem(_DelayProblem):
    """
    z = ln(x / (c e^{rt})) on the exponential locus sum_i a_i e^{-r tau_i} = 0.

    With b_i = a_i e^{-r tau_i} over the positive delays, the locus removes
    the instantaneous term:

        z' = r c e^{rt} sum_i b_i (e^{z(t-tau_i)} - e^{z})
        v' = -r c e^{rt} sum_i b_i (v e^{z(t-tau_i)} - 1),   v = e^{-z}

    For one unit delay this is z' = r c e^{r(t-1)} (e^{z} - e^{z(t-1)}).
    """
    variable = 'z'
    supports_log = False

    def __init__(self, params: GenParams, c: float, psi: Callable[[float], float]):
        self.r = params.r
        self.c = c
        lagged = params.lagged_terms
        self.weights = tuple(a * math.exp(-params.r * tau) for a, tau in lagged)
        self.delays = tuple(tau for _, tau in lagged)
        self._psi = psi

    def history(self, s: float) -> float:
        return self._psi(s)

    def magnitude(self, value: float) -> float:
        return math.exp(value)

    def from_magnitude(self, m: float) -> float:
        return math.log(m)

    def derivative(self, coordinate, t, y, lagged):
        gain = self.r * self.c * math.exp(self.r * t)
        if coordinate is Coordinate.RECIPROCAL:
            return -gain * sum(b * (y * math.exp(zd) - 1.0) for b, zd in zip(self.weights, lagged))
        now = math.exp(y)
        return gain * sum(b * (math.exp(zd) - now) for b, zd in zip(self.weights, lagged))


@dataclass(frozen=True)
class Segment:
    """A contiguous piece integrated in a single coordinate."""
    t_start: float
    t_end: float
    coordinate: Coordinate
    solution: OdeSolution
    problem: _DelayProblem

    def native(self, t: float) -> float:
        return self.problem.decode(self.coordinate, float(self.solution(t)[0]))


class _Archive:
    """Committed pieces, used for delayed-value lookups."""

    def __init__(self, problem: _DelayProblem):
        self.problem = problem
        self.starts: List[float] = []
        self.segments: List[Segment] = []

    def add(self, segment: Segment) -> None:
        self.starts.append(segment.t_start)
        self.segments.append(segment)

    def value(self, t: float) -> float:
        if t <= 0.0 or not self.starts:
            return self.problem.history(min(t, 0.0))
        return self.segments[bisect_right(self.starts, t) - 1].native(t)


@dataclass(frozen=True)
class Trajectory:
    params: Union[Params, GenParams]
    history: Callable[[float], float]
    segments: Tuple[Segment, ...]
    breakpoints: Tuple[float, ...]
    status: RunStatus
    t_final: float
    n_steps: int
    blowup: Optional[BlowUpReport] = None
    abort_reason: Optional[str] = None
    variable: str = 'x'
    exponential_scale: Optional[Tuple[float, float]] = None

    @property
    def starts(self) -> List[float]:
        return [segment.t_start for segment in self.segments]

    @property
    def deviation_backed(self) -> bool:
        """True when the segments hold z even though eval returns x."""
        return self.exponential_scale is not None and self.variable == 'x'

    def _observed(self, t, z):
        if not self.deviation_backed:
            return z
        c, r = self.exponential_scale
        return c * np.exp(z + r * t)

    def covers(self, t: float) -> bool:
        if t < 0:
            return False
        if self.status is RunStatus.BLOWN_UP:
            return t < self.t_final
        return t <= self.t_final

    def eval(self, t: float) -> float:
        if not self.covers(t):
            raise DomainError(f"t={t} outside the covered span [0, {self.t_final}] ({self.status.value})")
        if t == 0.0 or not self.segments:
            return self.history(0.0)
        index = bisect_right(self.starts, t) - 1
        return float(self._observed(t, self.segments[index].native(t)))

    __call__ = eval

    def eval_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.size == 0:
            return np.empty(0)
        starts = np.asarray(self.starts)
        if not all(self.covers(t) for t in (ts.min(), ts.max())):
            raise DomainError(f"samples outside the covered span [0, {self.t_final}]")
        values = np.empty_like(ts)
        if not self.segments:
            values.fill(self.history(0.0))
            return values
        indices = np.searchsorted(starts, ts, side='right') - 1
        for index in np.unique(indices):
            mask = indices == index
            if index < 0:
                values[mask] = self.history(0.0)
                continue
            segment = self.segments[index]
            raw = segment.solution(ts[mask])[0]
            native = np.array([segment.problem.decode(segment.coordinate, y) for y in raw])
            values[mask] = self._observed(ts[mask], native)
        values[ts == 0.0] = self.history(0.0)
        return values

    def sample_times(self, dt: float) -> np.ndarray:
        if not dt > 0:
            raise ContractViolation(f"sample spacing must be positive, got {dt}")
        n = int(math.floor(self.t_final / dt + 1e-9))
        ts = np.arange(n + 1) * dt
        ts = ts[ts <= self.t_final]
        if self.status is RunStatus.BLOWN_UP:
            ts = ts[ts < self.t_final]
        elif ts.size and self.t_final - ts[-1] > 1e-9 * dt:
            ts = np.append(ts, self.t_final)
        return ts

    def reconstruct_x(self, t: float) -> float:
        """x(t) = c e^{z(t) + rt} for a trajectory of the deviation z."""
        if self.exponential_scale is None:
            raise ContractViolation("only deviation trajectories can be mapped back to x")
        if self.variable == 'x':
            return self.eval(t)
        c, r = self.exponential_scale
        return c * math.exp(self.eval(t) + r * t)

    def deviation_many(self, ts) -> np.ndarray:
        """z(t) = ln(x(t) / (c e^{rt})) at the given times."""
        if self.exponential_scale is None:
            raise ContractViolation("only deviation trajectories carry a reference exponential")
        if self.variable == 'z':
            return self.eval_many(ts)
        c, r = self.exponential_scale
        ts = np.asarray(ts, dtype=float)
        return np.log(self.eval_many(ts) / c) - r * ts


class RatioObservation(NamedTuple):
    sign_changes: int
    last_change_t: Optional[float]
    samples: int


class _PieceOutcome(NamedTuple):
    kind: str
    t: float
    value: float
    coordinate: Optional[Coordinate]
    steps: int
    segment: Optional[Segment]
    report: Optional[BlowUpReport] = None
    reason: Optional[str] = None


class IntegratorService:
    """Method-of-steps integrator with blow-up detection."""

    def __init__(self, equation_service: EquationService, history_service: HistoryService, analysis_service):
        self.equation_service = equation_service
        self.history_service = history_service
        self.analysis_service = analysis_service

    def integrate(self, p: Params, phi: HistoryFn, cfg: Optional[SolverConfig] = None) -> Trajectory:
        cfg = cfg or SolverConfig.from_settings()
        if phi.start > -1.0 + MESH_TOL:
            raise ContractViolation(f"history must cover [-1, 0], starts at {phi.start}")
        mesh = self.breakpoint_mesh((1.0,), cfg.t_end, cfg.mesh_cap)
        trajectory = self._solve_logistic(self.equation_service.as_general(p), p, phi, mesh, cfg)
        if trajectory.status is RunStatus.BLOWN_UP:
            trajectory = self._attach_lower_bound(trajectory, p, phi)
        return trajectory

    def integrate_gen(self, p: GenParams, phi: HistoryFn, cfg: Optional[SolverConfig] = None) -> Trajectory:
        cfg = cfg or SolverConfig.from_settings()
        if phi.start > -p.max_delay + MESH_TOL:
            raise ContractViolation(f"history must cover [-{p.max_delay}, 0], starts at {phi.start}")
        mesh = self.breakpoint_mesh(p.delays, cfg.t_end, cfg.mesh_cap)
        if mesh is None:
            logger.warning(f"Breakpoint mesh for delays {p.delays} exceeds {cfg.mesh_cap} points")
            return Trajectory(params=p, history=phi.eval, segments=(), breakpoints=(), status=RunStatus.ABORTED,
                              t_final=0.0, n_steps=0, abort_reason='mesh explosion')
        return self._solve_logistic(p, p, phi, mesh, cfg)

    def on_exponential_locus(self, p: Union[Params, GenParams]) -> bool:
        """Whether c e^{rt} solves the equation for every c > 0."""
        g = self.equation_service.as_general(p) if isinstance(p, Params) else p
        return abs(self.analysis_service.exponential_residual(g)) <= EXP_LOCUS_TOL

    def integrate_z(self, p: Params, c: float, psi: Union[HistoryFn, Callable[[float], float]],
                    cfg: Optional[SolverConfig] = None) -> Trajectory:
        """
        Integrate the deviation z = ln(x / (c e^{rt})) directly.

        ``psi`` is the deviation history, or a history phi of x from which
        psi(s) = ln(phi(s)/c) - rs is derived.
        """
        cfg = cfg or SolverConfig.from_settings()
        if not self.on_exponential_locus(p):
            raise ContractViolation(f"deviation equation needs alpha = e^-r, got alpha={p.alpha}, r={p.r}")
        if not c > 0:
            raise ContractViolation(f"c must be positive, got {c}")
        if isinstance(psi, HistoryFn):
            psi = self._deviation_history(psi, c, p.r)
        mesh = self.breakpoint_mesh((1.0,), cfg.t_end, cfg.mesh_cap)
        problem = _ExponentialDeviationProblem(self.equation_service.as_general(p), c, psi)
        trajectory = self._solve(problem, p, psi, mesh, cfg)
        return dataclasses.replace(trajectory, variable='z', exponential_scale=(c, p.r))

    def breakpoint_mesh(self, delays: Sequence[float], t_end: float, cap: int) -> Optional[np.ndarray]:
        """
        All sums of nonnegative integer multiples of the positive delays
        below t_end, deduplicated within 1e-12, with t_end appended.
        Returns None when the mesh would exceed ``cap`` points.
        """
        positive = np.asarray(sorted({float(tau) for tau in delays if tau > 0}))
        mesh = np.array([0.0])
        frontier = mesh
        while frontier.size:
            candidates = (frontier[:, None] + positive[None, :]).ravel()
            candidates = candidates[candidates < t_end - MESH_TOL]
            if not candidates.size:
                break
            merged = np.sort(np.concatenate([mesh, candidates]))
            merged = merged[np.concatenate([[True], np.diff(merged) > MESH_TOL])]
            if merged.size + 1 > cap:
                return None
            position = np.searchsorted(mesh, merged)
            left = mesh[np.clip(position - 1, 0, mesh.size - 1)]
            right = mesh[np.clip(position, 0, mesh.size - 1)]
            distance = np.minimum(np.abs(merged - left), np.abs(merged - right))
            frontier = merged[distance > MESH_TOL]
            mesh = merged
        return np.append(mesh, float(t_end))

    def observe_ratio(self, trajectory: Trajectory, c: float, dt: float) -> RatioObservation:
        """
        Sign changes of the increments of x(t) / (c e^{rt}) on a uniform
        sample grid. Purely observational.
        """
        if trajectory.variable != 'x' or not isinstance(trajectory.params, Params):
            raise ContractViolation("ratio monitoring needs a single-delay trajectory of x")
        ts = trajectory.sample_times(dt)
        if ts.size < 3:
            return RatioObservation(0, None, int(ts.size))
        ratio = trajectory.eval_many(ts) / (c * np.exp(trajectory.params.r * ts))
        signs = np.sign(np.diff(ratio))
        nonzero = np.flatnonzero(signs)
        flips = nonzero[1:][signs[nonzero[1:]] != signs[nonzero[:-1]]]
        last = float(ts[flips[-1]]) if flips.size else None
        return RatioObservation(int(flips.size), last, int(ts.size))

    def _deviation_history(self, phi: HistoryFn, c: float, r: float) -> Callable[[float], float]:
        """psi(s) = ln(phi(s) / c) - r s; exact for an exponential-profile history of the same c and r."""
        if isinstance(phi, ExpProfileHistory) and phi.c == c and phi.r == r:
            return phi.psi
        return lambda s: math.log(phi.eval(s) / c) - r * s

    def _solve_logistic(self, g: GenParams, params, phi: HistoryFn, mesh: np.ndarray, cfg: SolverConfig) -> Trajectory:
        if not (cfg.exponential_frame and self.on_exponential_locus(g)):
            return self._solve(_LogisticProblem(g, phi), params, phi.eval, mesh, cfg)
        c = phi.eval(0.0)
        logger.debug(f"{params} lies on the exponential locus; integrating the deviation from {c} e^({g.r} t)")
        problem = _ExponentialDeviationProblem(g, c, self._deviation_history(phi, c, g.r))
        trajectory = self._solve(problem, params, phi.eval, mesh, cfg)
        return dataclasses.replace(trajectory, variable='x', exponential_scale=(c, g.r))

    def _attach_lower_bound(self, trajectory: Trajectory, p: Params, phi: HistoryFn) -> Trajectory:
        if not self.on_exponential_locus(p):
            return trajectory
        c = phi.eval(0.0)
        certificate = self.history_service.certify_order(phi, p, c, settings.DDE_LAB['CERTIFY_GRID_N'])
        if certificate.relation is not OrderRelation.BELOW_EXPONENTIAL:
            return trajectory
        bound = self.analysis_service.blowup_time_lower_bound(p.r, c)
        logger.info(f"Blow-up at {trajectory.blowup.t_blowup:.12g}, lower bound {bound:.12g} (c={c})")
        return dataclasses.replace(trajectory, blowup=dataclasses.replace(trajectory.blowup, lower_bound=bound))

    def _solve(self, problem: _DelayProblem, params, history, mesh: np.ndarray, cfg: SolverConfig) -> Trajectory:
        archive = _Archive(problem)
        t = 0.0
        value = problem.history(0.0)
        coordinate = self._initial_coordinate(problem, value, cfg)
        n_steps = 0

        for t_next in mesh[1:]:
            while t_next - t > 4 * np.finfo(float).eps * max(1.0, abs(t)):
                outcome = self._integrate_piece(problem, archive, coordinate, t, value, float(t_next), cfg,
                                                cfg.max_steps - n_steps)
                n_steps += outcome.steps
                if outcome.segment is not None:
                    archive.add(outcome.segment)
                if outcome.kind in ('blowup', 'abort'):
                    return self._finish(params, history, archive, mesh, outcome, n_steps)
                t, value, coordinate = outcome.t, outcome.value, outcome.coordinate
            t = float(t_next)

        logger.info(f"Integration of {params} completed at t={cfg.t_end} in {n_steps} steps")
        return Trajectory(params=params, history=history, segments=tuple(archive.segments),
                          breakpoints=tuple(float(m) for m in mesh), status=RunStatus.COMPLETED,
                          t_final=float(cfg.t_end), n_steps=n_steps, variable=problem.variable)

    def _finish(self, params, history, archive: _Archive, mesh, outcome: _PieceOutcome, n_steps: int) -> Trajectory:
        breakpoints = tuple(float(m) for m in mesh if m <= outcome.t)
        if outcome.kind == 'blowup':
            logger.info(f"Blow-up of {params} detected at t={outcome.report.t_blowup:.12g} "
                        f"(bracket {outcome.report.bracket_width:.2e}) after {n_steps} steps")
            return Trajectory(params=params, history=history, segments=tuple(archive.segments),
                              breakpoints=breakpoints, status=RunStatus.BLOWN_UP, t_final=outcome.report.t_blowup,
                              n_steps=n_steps, blowup=outcome.report, variable=archive.problem.variable)
        logger.warning(f"Integration of {params} aborted at t={outcome.t:.6g}: {outcome.reason}")
        return Trajectory(params=params, history=history, segments=tuple(archive.segments),
                          breakpoints=breakpoints, status=RunStatus.ABORTED, t_final=outcome.t,
                          n_steps=n_steps, abort_reason=outcome.reason, variable=archive.problem.variable)

    def _initial_coordinate(self, problem: _DelayProblem, value: float, cfg: SolverConfig) -> Coordinate:
        magnitude = problem.magnitude(value)
        if magnitude >= cfg.x_switch:
            return Coordinate.RECIPROCAL
        if problem.supports_log and magnitude <= cfg.x_floor:
            return Coordinate.LOG
        return Coordinate.DIRECT

    def _coordinate_atol(self, coordinate: Coordinate, cfg: SolverConfig) -> float:
        # rtol |x| + atol in x is rtol |w| + atol w**2 in w = 1/x; w stays below 10 / x_switch
        if coordinate is Coordinate.RECIPROCAL:
            return cfg.atol / cfg.x_switch ** 2
        return cfg.atol

    def _events(self, problem: _DelayProblem, coordinate: Coordinate, cfg: SolverConfig):
        """(name, level in the coordinate, direction, next coordinate)."""
        if coordinate is Coordinate.DIRECT:
            events = [('switch', problem.level(coordinate, cfg.x_switch), 1, Coordinate.RECIPROCAL)]
            if problem.supports_log:
                events.append(('switch', problem.level(coordinate, cfg.x_floor), -1, Coordinate.LOG))
            return events
        if coordinate is Coordinate.RECIPROCAL:
            return [('blowup', 0.0, -1, None),
                    ('switch', problem.level(coordinate, cfg.x_switch / 10.0), 1, Coordinate.DIRECT)]
        return [('switch', problem.level(coordinate, 10.0 * cfg.x_floor), 1, Coordinate.DIRECT)]

    def _integrate_piece(self, problem: _DelayProblem, archive: _Archive, coordinate: Coordinate, t0: float,
                         value: float, t_bound: float, cfg: SolverConfig, budget: int) -> _PieceOutcome:
        delays = problem.delays

        def fun(t, y):
            lagged = [archive.value(t - tau) for tau in delays]
            return np.array([problem.derivative(coordinate, t, y[0], lagged)])

        y_old = problem.encode(coordinate, value)
        first_step = None if cfg.first_step is None else min(cfg.first_step, t_bound - t0)
        solver = STEPPERS[cfg.method](fun, t0, np.array([y_old]), t_bound, rtol=cfg.rtol,
                                      atol=self._coordinate_atol(coordinate, cfg),
                                      max_step=cfg.max_step, first_step=first_step)
        events = self._events(problem, coordinate, cfg)
        logger.debug(f"Piece [{t0:.6g}, {t_bound:.6g}] in {coordinate.value} coordinate from {value:.6g}")

        ts: List[float] = [t0]
        interpolants = []
        steps = 0

        def segment(t_end: float) -> Optional[Segment]:
            knots, pieces = ts[:len(interpolants)], list(interpolants)
            # an event sitting on a step's left end leaves that step empty
            while pieces and t_end <= knots[-1]:
                knots, pieces = knots[:-1], pieces[:-1]
            if not pieces:
                return None
            return Segment(t0, t_end, coordinate, OdeSolution(knots + [t_end], pieces), problem)

        while True:
            if steps >= budget:
                return _PieceOutcome('abort', ts[-1], problem.decode(coordinate, y_old), coordinate, steps,
                                     segment(ts[-1]), reason='step budget')
            message = solver.step()
            if solver.status == 'failed':
                logger.debug(f"Stepper failed at t={solver.t:.12g}: {message}")
                return _PieceOutcome('abort', ts[-1], problem.decode(coordinate, y_old), coordinate, steps,
                                     segment(ts[-1]), reason='stiffness/underflow')
            steps += 1
            y_new = float(solver.y[0])
            if not math.isfinite(y_new):
                return _PieceOutcome('abort', ts[-1], problem.decode(coordinate, y_old), coordinate, steps,
                                     segment(ts[-1]), reason='non-finite state')
            if solver.t == solver.t_old:
                if solver.status == 'finished':
                    return _PieceOutcome('done', t_bound, problem.decode(coordinate, y_new), coordinate, steps,
                                         segment(t_bound))
                continue
            dense = solver.dense_output()
            t_old, t_new = solver.t_old, solver.t
            ts.append(t_new)
            interpolants.append(dense)

            hit = None
            for name, level, direction, target in events:
                before, after = y_old - level, y_new - level
                crossed = (before < 0 <= after) if direction > 0 else (before > 0 >= after)
                if not crossed:
                    continue
                root = brentq(lambda s: float(dense(s)[0]) - level, t_old, t_new, xtol=EVENT_XTOL)
                if hit is None or root < hit[0]:
                    hit = (root, name, level, target)

            if hit is not None:
                root, name, level, target = hit
                if name == 'blowup':
                    report = self._bracket_blowup(dense, t_old, t_new, root, cfg.blowup_time_tol)
                    return _PieceOutcome('blowup', report.t_blowup, math.inf, None, steps,
                                         segment(report.t_blowup), report=report)
                logger.debug(f"Coordinate switch {coordinate.value} -> {target.value} at t={root:.12g}")
                return _PieceOutcome('switch', root, problem.decode(coordinate, level), target, steps,
                                     segment(root))

            y_old = y_new
            if solver.status == 'finished':
                return _PieceOutcome('done', t_bound, problem.decode(coordinate, y_new), coordinate, steps,
                                     segment(t_bound))

    def _bracket_blowup(self, dense, t_old: float, t_new: float, root: float, tol: float) -> BlowUpReport:
        """
        Certified bracket [lo, hi] with w(lo) > 0 >= w(hi) and
        hi - lo <= tol on the dense output of the reciprocal coordinate.
        """
        w = lambda s: float(dense(s)[0])  # noqa: E731
        lo, hi = max(t_old, root - tol / 2), min(t_new, root + tol / 2)
        if not (w(lo) > 0 >= w(hi)):
            lo, hi = t_old, t_new
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if w(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            mid = 0.5 * (lo + hi)
            root = mid if w(mid) > 0 else lo
        return BlowUpReport(t_blowup=float(root), bracket_width=float(hi - lo), bracket=(float(lo), float(hi)))
