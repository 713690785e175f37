"""Right-hand side of the moderate-amplitude shallow-water equation

    u_t + u_x + (3/2) e u u_x - (3/8) e^2 u^2 u_x + (3/16) e^3 u^3 u_x
        + (mu/12)(u_xxx - u_xxt) + (7/24) e mu (u u_xxx + 2 u_x u_xx) = 0

on the unit period, in two algebraically equivalent forms:

* nonlocal (quasi-linear) form, used by the integrator,
      u_t = u_x + (7/2) e u u_x + f(u),
      f(u) = -(1 - (mu/12) d_xx)^-1 d_x g(u),
      g(u) = 2u + (5/2) e u^2 - (1/8) e^2 u^3 + (3/64) e^3 u^4 - (7/48) e mu u_x^2;
* direct form, solving the equation above for u_t with one Helmholtz inverse.

Nonlinear products are formed pointwise on the grid and dealiased by one of
``two_thirds`` (truncate modes k > n//3), ``pad`` (evaluate on a 5/2-padded
grid, exact up to quartic products) or ``none``.
"""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import InvalidArgumentError, NumericalOverflowError


@dataclass(frozen=True)
class Params:
    epsilon: float
    mu: float

    def __post_init__(self):
        for name in ("epsilon", "mu"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise InvalidArgumentError(f"{name} must be a real number, got {v!r}")
            if not (np.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, float(v))


@dataclass(frozen=True)
class State:
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = spectral.check_field(self.u)
        if not (np.isfinite(self.t) and self.t >= 0):
            raise InvalidArgumentError(f"t must be finite and non-negative, got {self.t}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self):
        return self.u.shape[0]


def _finite(v, what):
    if not np.all(np.isfinite(v)):
        raise NumericalOverflowError(f"non-finite values in {what}")
    return v


def _g_nonlinear(u, ux, eps, mu):
    u2 = u * u
    return (eps * u2 * (2.5 - 0.125 * eps * u + (3.0 / 64.0) * eps**2 * u2)
            - (7.0 / 48.0) * eps * mu * ux * ux)


class _Products:
    """Dealiased spectra of pointwise products of u and u_x."""

    def __init__(self, u_hat, n, rule):
        if rule not in spectral.DEALIAS_MODES:
            raise InvalidArgumentError(
                f"unknown dealias rule {rule!r}; expected one of {spectral.DEALIAS_MODES}")
        self.n = n
        self.rule = rule
        ux_hat = spectral.derivative_symbol(n, 1) * u_hat
        if rule == "pad":
            m = spectral.padded_size(n)
            self.u = spectral.to_padded(u_hat, n, m)
            self.ux = spectral.to_padded(ux_hat, n, m)
        else:
            self.u = spectral.inverse(u_hat, n)
            self.ux = spectral.inverse(ux_hat, n)

    def spectrum(self, values):
        if self.rule == "pad":
            return spectral.truncate(spectral.from_padded(values, self.n), self.n, "pad")
        return spectral.truncate(spectral.transform(values), self.n, self.rule)


def _g_hat(u_hat, n, eps, mu, dealias):
    prod = _Products(u_hat, n, dealias)
    with np.errstate(over="ignore", invalid="ignore"):
        nl = _finite(_g_nonlinear(prod.u, prod.ux, eps, mu), "g(u)")
    return 2.0 * u_hat + prod.spectrum(nl), prod


def g_of_u(state, params, dealias="two_thirds"):
    """Nodal values of g(u); the nonlinear part is dealiased."""
    n = state.n
    g_hat, _ = _g_hat(spectral.transform(state.u), n, params.epsilon, params.mu, dealias)
    return spectral.inverse(g_hat, n)


def f_of_u(state, params, dealias="two_thirds"):
    """f(u) = -(1 - (mu/12) d_xx)^-1 d_x g(u)."""
    n = state.n
    g_hat, _ = _g_hat(spectral.transform(state.u), n, params.epsilon, params.mu, dealias)
    sym = -spectral.derivative_symbol(n, 1) * spectral.helmholtz_symbol(n, params.mu)
    return spectral.inverse(sym * g_hat, n)


def rhs_nonlocal_array(u, epsilon, mu, dealias="two_thirds"):
    """u_x + (7/2) e u u_x + f(u) for a raw nodal array; the integrator's hot path."""
    n = u.shape[0]
    u_hat = spectral.transform(u)
    g_hat, prod = _g_hat(u_hat, n, epsilon, mu, dealias)
    d1 = spectral.derivative_symbol(n, 1)
    transport = prod.spectrum(prod.u * prod.ux)
    out_hat = d1 * (u_hat - spectral.helmholtz_symbol(n, mu) * g_hat) + 3.5 * epsilon * transport
    return _finite(spectral.inverse(out_hat, n), "rhs")


def rhs_nonlocal(state, params, dealias="two_thirds"):
    return rhs_nonlocal_array(state.u, params.epsilon, params.mu, dealias)


def rhs_direct(state, params, dealias="two_thirds"):
    """u_t from the original equation, with derivatives up to third order."""
    eps, mu = params.epsilon, params.mu
    u = state.u
    n = state.n
    ux = spectral.derivative(u, 1)
    uxx = spectral.derivative(u, 2)
    uxxx = spectral.derivative(u, 3)
    if dealias == "pad":
        m = spectral.padded_size(n)
        up, uxp, uxxp, uxxxp = (spectral.to_padded(spectral.transform(v), n, m)
                                for v in (u, ux, uxx, uxxx))
    else:
        up, uxp, uxxp, uxxxp = u, ux, uxx, uxxx
    with np.errstate(over="ignore", invalid="ignore"):
        nl = (1.5 * eps * up * uxp
              - 0.375 * eps**2 * up**2 * uxp
              + 0.1875 * eps**3 * up**3 * uxp
              + (7.0 / 24.0) * eps * mu * (up * uxxxp + 2.0 * uxp * uxxp))
    nl = _finite(nl, "rhs_direct products")
    if dealias == "pad":
        nl_hat = spectral.truncate(spectral.from_padded(nl, n), n, "pad")
    else:
        nl_hat = spectral.truncate(spectral.transform(nl), n, dealias)
    rest = ux + (mu / 12.0) * uxxx + spectral.inverse(nl_hat, n)
    return -spectral.helmholtz_inverse(rest, mu)


def identity_residual(state, params, dealias="two_thirds"):
    """max |d_xx (P * g) - (12/mu)(P * g - g)|; zero up to round-off."""
    mu = params.mu
    g = g_of_u(state, params, dealias)
    pg = spectral.helmholtz_inverse(g, mu)
    r = spectral.derivative(pg, 2) - (12.0 / mu) * (pg - g)
    return float(np.max(np.abs(r)))


def linear_frequency(k, mu):
    """Angular frequency w(k) of exp(i(2 pi k x + w t)) for the linearized equation.

    Linearizing the nonlocal form about u = 0 gives
    u_t = d_x u - 2 d_x (1 - (mu/12) d_xx)^-1 u, so
    w = 2 pi k (1 - 2 / (1 + (mu/12)(2 pi k)^2)).
    """
    kk = 2.0 * np.pi * np.asarray(k, dtype=np.float64)
    return kk * (1.0 - 2.0 / (1.0 + (mu / 12.0) * kk**2))
