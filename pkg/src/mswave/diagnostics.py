"""Monitored functionals, slope tracking and the wave-breaking criterion.

All integrals over the period are Parseval sums of the grid spectrum, exact for
band-limited fields.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import spectral
from .errors import InvalidArgumentError, OutOfDomainError
from .model import State
from .spectral import check_mu

NORM_SOURCES = ("numeric", "paper")


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy_e: float
    functional_h: float
    slope_sup: float
    slope_argmax: float
    min_ux: float
    max_abs_u: float
    mean_u: float
    tail_fraction: float

    def as_dict(self):
        return asdict(self)


CSV_COLUMNS = tuple(DiagnosticsRecord.__dataclass_fields__)


@dataclass(frozen=True)
class BreakingReport:
    c0: float
    inf_slope_sq: float
    threshold: float
    criterion_satisfied: bool
    s0: float
    t_lower: float
    t_upper: float
    norms_source: str

    def as_dict(self):
        return asdict(self)


def _weighted_power(u, weights):
    n = u.shape[0]
    power = np.abs(spectral.transform(u)) ** 2 * spectral.parseval_weights(n)
    return float(np.dot(weights(n), power))


def _k2(n):
    k2 = (2.0 * np.pi * np.arange(n // 2 + 1)) ** 2
    # u_x drops the Nyquist mode
    k2[-1] = 0.0
    return k2


def energy_E(state, mu):
    """E = (1/2) int (u^2 + (mu/12) u_x^2) dx."""
    mu = check_mu(mu)
    return 0.5 * _weighted_power(state.u, lambda n: 1.0 + (mu / 12.0) * _k2(n))


def functional_H(state, mu):
    """H = (1/2) int (u^2 + (mu/6) u_x^2 + (mu^2/144) u_xx^2) dx."""
    mu = check_mu(mu)

    def w(n):
        k = 2.0 * np.pi * np.arange(n // 2 + 1)
        return 1.0 + (mu / 6.0) * _k2(n) + (mu**2 / 144.0) * k**4

    return 0.5 * _weighted_power(state.u, w)


def sobolev_norm(state, s):
    """(sum_k (1 + (2 pi k)^2)^s |u_hat_k|^2)^(1/2) for 0 <= s <= 4."""
    if not (0.0 <= s <= 4.0):
        raise InvalidArgumentError(f"Sobolev index s must lie in [0, 4], got {s}")
    return float(np.sqrt(_weighted_power(
        state.u, lambda n: (1.0 + (2.0 * np.pi * np.arange(n // 2 + 1)) ** 2) ** s)))


def _wrap(x):
    x = x % 1.0
    # a peak refined to just left of x = 0 wraps to 1 - tiny
    return 0.0 if x > 1.0 - 1e-12 else x


def _slope_peak(u_hat, n, sign):
    """Refined max of sign * u_x as (value, fractional node index)."""
    f_hat = sign * spectral.derivative_symbol(n, 1) * u_hat
    peak, idx = spectral.refine_peak(spectral.inverse(f_hat, n))
    return spectral.polish_peak(f_hat, n, peak, idx)


def slope_sup(state):
    """(S, xi): supremum of u_x and a point where it is attained, xi in [0, 1)."""
    peak, idx = _slope_peak(spectral.transform(state.u), state.n, 1.0)
    return peak, _wrap(idx / state.n)


def slope_inf(state):
    """Infimum of u_x, refined like :func:`slope_sup`."""
    peak, _ = _slope_peak(spectral.transform(state.u), state.n, -1.0)
    return -peak


def c0_energy(u0, mu):
    """C0 = int (u0^2 + (mu/12) u0_x^2) dx, i.e. twice the energy E."""
    state = u0 if hasattr(u0, "u") else State(u0)
    return 2.0 * energy_E(state, mu)


def amplitude_bound(c0, mu):
    """Upper bound (13/mu) C0 on max u^2 along a solution."""
    mu = check_mu(mu)
    if c0 < 0:
        raise InvalidArgumentError(f"c0 must be non-negative, got {c0}")
    return 13.0 / mu * c0


def breaking_threshold(params, c0, norms, source="numeric"):
    """Right-hand side of the initial-slope blow-up criterion.

    The criterion reads |inf u0_x|^2 > threshold with

        threshold = 12/(mu eps) * [ 2 n2 C0^(1/2) + (5/2) eps ninf C0
            + (1/8) eps^2 ninf (13/mu)^(1/2) C0^(3/2) + (3/64) eps^3 ninf (13/mu) C0^2
            + (7/4) eps ninf C0 + 2 (13/mu)^(1/2) C0^(1/2) + (5/2) eps (13/mu) C0
            + (1/8) eps^2 (13/mu)^(3/2) C0^(3/2) + (3/64) eps^3 (13/mu)^2 C0^2 ]
    """
    if c0 < 0 or not np.isfinite(c0):
        raise InvalidArgumentError(f"c0 must be finite and non-negative, got {c0}")
    if source == "numeric":
        n2, ninf = norms.n2_numeric, norms.ninf_numeric
    elif source == "paper":
        n2, ninf = norms.n2_paper, norms.ninf_paper
    else:
        raise InvalidArgumentError(f"norms source must be one of {NORM_SOURCES}, got {source!r}")
    eps, mu = params.epsilon, params.mu
    r = 13.0 / mu
    sr = np.sqrt(r)
    root = np.sqrt(c0)
    kernel_terms = (2.0 * n2 * root
                    + 2.5 * eps * ninf * c0
                    + 0.125 * eps**2 * ninf * sr * c0 * root
                    + (3.0 / 64.0) * eps**3 * ninf * r * c0**2
                    + 1.75 * eps * ninf * c0)
    local_terms = (2.0 * sr * root
                   + 2.5 * eps * r * c0
                   + 0.125 * eps**2 * r * sr * c0 * root
                   + (3.0 / 64.0) * eps**3 * r**2 * c0**2)
    return float(12.0 / (mu * eps) * (kernel_terms + local_terms))


def breaking_time_bounds(s0, epsilon):
    """(lower, upper) = (4/(11 eps S0), 4/(3 eps S0))."""
    if not s0 > 0:
        raise InvalidArgumentError(f"S(0) must be positive, got {s0}")
    return 4.0 / (11.0 * epsilon * s0), 4.0 / (3.0 * epsilon * s0)


def breaking_report(u0, params, norms, source="numeric"):
    state = u0 if hasattr(u0, "u") else State(u0)
    if not np.any(state.u != 0.0):
        raise InvalidArgumentError("initial profile is identically zero: S(0) = 0 leaves the bounds undefined")
    s0, _ = slope_sup(state)
    if not s0 > 0:
        raise InvalidArgumentError(f"initial profile has S(0) = {s0} <= 0 (constant profile)")
    c0 = c0_energy(state, params.mu)
    inf_sq = slope_inf(state) ** 2
    threshold = breaking_threshold(params, c0, norms, source)
    t_lower, t_upper = breaking_time_bounds(s0, params.epsilon)
    return BreakingReport(
        c0=c0,
        inf_slope_sq=inf_sq,
        threshold=threshold,
        criterion_satisfied=bool(inf_sq > threshold),
        s0=s0,
        t_lower=t_lower,
        t_upper=t_upper,
        norms_source=source,
    )


def envelope_bounds(s0, epsilon, t):
    """Solutions of s' = (3/4) eps s^2 (slow) and s' = (11/4) eps s^2 (fast), s(0) = s0."""
    if not s0 > 0:
        raise InvalidArgumentError(f"s0 must be positive, got {s0}")
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t}")
    t_fast, _ = breaking_time_bounds(s0, epsilon)
    if t >= t_fast:
        raise OutOfDomainError(f"t = {t} is at or past the fast envelope blow-up time {t_fast}",
                               which="fast")
    return s0 / (1.0 - 0.75 * epsilon * s0 * t), s0 / (1.0 - 2.75 * epsilon * s0 * t)


def slow_envelope(s0, epsilon, t):
    """Lower envelope alone; defined up to 4/(3 eps s0)."""
    t_slow = 4.0 / (3.0 * epsilon * s0)
    if t >= t_slow:
        raise OutOfDomainError(f"t = {t} is at or past the slow envelope blow-up time {t_slow}",
                               which="slow")
    return s0 / (1.0 - 0.75 * epsilon * s0 * t)


def record(state, mu, dealias="two_thirds"):
    """Snapshot of every monitored scalar at ``state``."""
    u = state.u
    n = state.n
    u_hat = spectral.transform(u)
    power = np.abs(u_hat) ** 2 * spectral.parseval_weights(n)
    k = 2.0 * np.pi * np.arange(n // 2 + 1)
    k2 = _k2(n)
    s, idx = _slope_peak(u_hat, n, 1.0)
    neg, _ = _slope_peak(u_hat, n, -1.0)
    return DiagnosticsRecord(
        t=state.t,
        energy_e=0.5 * float(np.dot(1.0 + (mu / 12.0) * k2, power)),
        functional_h=0.5 * float(np.dot(1.0 + (mu / 6.0) * k2 + (mu**2 / 144.0) * k**4, power)),
        slope_sup=s,
        slope_argmax=_wrap(idx / n),
        min_ux=-neg,
        max_abs_u=float(np.max(np.abs(u))),
        mean_u=float(u_hat[0].real),
        tail_fraction=spectral.tail_from_power(np.abs(u_hat) ** 2, n, mu, dealias),
    )
