"""Adaptive classical Runge-Kutta integration with step-doubling error control.

Each attempted step of size h is taken once whole and once as two halves. The
discrepancy between the two, measured in the L2 norm on the period, is compared
with ``rel_tol * ||u||_2``: above it the step is rejected and h halved, below a
tenth of it the next step grows by 1.5. The two-half-step result is kept.

Runs stop on the first of: reaching t_end, the slope supremum S(t) exceeding
``s_max`` (breaking), the spectral tail fraction exceeding ``tail_max``
(resolution lost; also used when the state turns non-finite), or the step size
dropping below ``dt_min``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics, spectral
from .errors import InvalidArgumentError, NumericalOverflowError
from .model import State, rhs_nonlocal_array, rhs_direct

GROW = 1.5
SHRINK = 0.5


class Termination(str, enum.Enum):
    COMPLETED = "Completed"
    BREAKING_DETECTED = "BreakingDetected"
    RESOLUTION_LOST = "ResolutionLost"
    STEP_UNDERFLOW = "StepUnderflow"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StepControls:
    t_end: float
    dt_init: float = None
    dt_min: float = 1e-12
    rel_tol: float = 1e-10
    s_max: float = 1e6
    tail_max: float = 1e-3
    sample_interval: float = None

    def __post_init__(self):
        if not (np.isfinite(self.t_end) and self.t_end > 0):
            raise InvalidArgumentError(f"t_end must be positive, got {self.t_end}")
        if self.dt_init is None:
            object.__setattr__(self, "dt_init", min(1e-3, self.t_end))
        if self.sample_interval is None:
            object.__setattr__(self, "sample_interval", self.t_end / 1000.0)
        for name in ("dt_init", "dt_min", "rel_tol", "s_max", "tail_max", "sample_interval"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be positive and finite, got {v}")
        if not self.dt_min < self.dt_init <= self.t_end:
            raise InvalidArgumentError(
                f"need dt_min < dt_init <= t_end, got dt_min={self.dt_min}, "
                f"dt_init={self.dt_init}, t_end={self.t_end}")


@dataclass
class RunResult:
    final_state: State
    termination: Termination
    t_stop: float
    diagnostics: list = field(default_factory=list)
    accepted_steps: int = 0
    rejected_steps: int = 0


def _rk4(u, dt, f):
    k1 = f(u)
    k2 = f(u + 0.5 * dt * k1)
    k3 = f(u + 0.5 * dt * k2)
    k4 = f(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def make_rhs(params, dealias="two_thirds", form="nonlocal"):
    """Array-level right-hand side u -> u_t."""
    eps, mu = params.epsilon, params.mu
    if form == "nonlocal":
        return lambda u: rhs_nonlocal_array(u, eps, mu, dealias)
    if form == "direct":
        return lambda u: rhs_direct(State(u), params, dealias)
    raise InvalidArgumentError(f"unknown rhs form {form!r}; expected 'nonlocal' or 'direct'")


def step_rk4(state, dt, params, dealias="two_thirds", form="nonlocal"):
    """One classical 4-stage step of size dt."""
    if not (np.isfinite(dt) and dt > 0):
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    f = make_rhs(params, dealias, form)
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            u = _rk4(state.u, dt, f)
        except NumericalOverflowError as exc:
            raise NumericalOverflowError(str(exc), t=state.t, dt=dt) from None
    if not np.all(np.isfinite(u)):
        raise NumericalOverflowError(f"non-finite state after step t={state.t}, dt={dt}",
                                     t=state.t, dt=dt)
    return State(u, state.t + dt)


def integrate_fixed(state, params, dt, steps, dealias="two_thirds", form="nonlocal"):
    """Advance with a constant step; used for convergence studies."""
    for _ in range(steps):
        state = step_rk4(state, dt, params, dealias, form)
    return state


def exponential_filter(n, order, strength=36.0):
    """exp(-strength (k/k_max)^order) on the half spectrum."""
    k = np.arange(n // 2 + 1) / (n // 2)
    return np.exp(-strength * k**order)


def sample_times(t0, t_end, interval):
    """Times t0 + i*interval up to t_end, always ending exactly at t_end."""
    count = int(np.floor((t_end - t0) / interval + 1e-9))
    times = t0 + interval * np.arange(count + 1)
    if t_end - times[-1] <= 1e-9 * interval:
        times[-1] = t_end
    else:
        times = np.append(times, t_end)
    return times


def _l2(v):
    return float(np.sqrt(np.mean(v * v)))


def integrate(initial, params, controls, dealias="two_thirds", form="nonlocal",
              filter_order=None):
    """Adaptive integration from ``initial`` to ``controls.t_end``.

    ``filter_order`` switches on an exponential spectral filter applied after
    every accepted step; it is off by default because it dissipates energy.
    """
    if initial.t >= controls.t_end:
        raise InvalidArgumentError(f"initial time {initial.t} is not before t_end {controls.t_end}")
    tail0 = spectral.tail_fraction(initial.u, params.mu, dealias)
    if tail0 > controls.tail_max:
        raise InvalidArgumentError(
            f"initial tail fraction {tail0:.3e} exceeds tail_max {controls.tail_max:.3e}")
    f = make_rhs(params, dealias, form)
    mu = params.mu
    n = initial.n
    filt = exponential_filter(n, filter_order) if filter_order else None

    t0 = initial.t
    t_end = controls.t_end
    times = sample_times(t0, t_end, controls.sample_interval)

    u = initial.u.copy()
    t = t0
    dt = controls.dt_init
    records = [diagnostics.record(initial, mu, dealias)]
    next_i = 1
    accepted = rejected = 0
    termination = None

    while termination is None:
        target = times[next_i]
        h = min(dt, target - t)
        clipped = h < dt
        with np.errstate(over="ignore", invalid="ignore"):
            try:
                full = _rk4(u, h, f)
                half = _rk4(_rk4(u, 0.5 * h, f), 0.5 * h, f)
                finite = bool(np.all(np.isfinite(full)) and np.all(np.isfinite(half)))
            except NumericalOverflowError:
                finite = False
        if not finite:
            termination = Termination.RESOLUTION_LOST
            break
        err = _l2(half - full)
        scale = controls.rel_tol * _l2(u)
        if err > scale:
            rejected += 1
            dt = SHRINK * h
            if dt < controls.dt_min:
                termination = Termination.STEP_UNDERFLOW
            continue

        accepted += 1
        u = half
        if filt is not None:
            u = spectral.inverse(filt * spectral.transform(u), n)
        hit = h == target - t
        t = target if hit else t + h
        if err < 0.1 * scale and not clipped:
            dt = GROW * h

        rec = diagnostics.record(State(u, t), mu, dealias)
        if hit:
            records.append(rec)
            next_i += 1
        if t >= t_end:
            termination = Termination.COMPLETED
        elif rec.slope_sup > controls.s_max:
            termination = Termination.BREAKING_DETECTED
        elif rec.tail_fraction > controls.tail_max:
            termination = Termination.RESOLUTION_LOST
        if termination is not None and not hit:
            records.append(rec)

    final = State(u, t)
    if records[-1].t != t:
        records.append(diagnostics.record(final, mu, dealias))
    return RunResult(final_state=final, termination=termination, t_stop=t,
                     diagnostics=records, accepted_steps=accepted, rejected_steps=rejected)
