"""Periodic Green's function P of (1 - (mu/12) d_xx) on the unit period.

Ground truth is the Fourier multiplier P_hat(k) = 1 / (1 + (mu/12) (2 pi k)^2).
Nodal samples are synthesized with every alias folded back onto the grid, so
they are the exact values P(j/n) rather than a truncated Fourier sum; the
latter converges only like 1/n because P has a corner at x = 0.

Closed-form expressions for the kernel and for its L1, L2 and sup norms are
evaluated separately and only compared against, never substituted.
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import zeta

from . import spectral
from .spectral import Grid, check_mu

# direct alias terms per residue class; the rest is summed with Hurwitz zeta
_DIRECT_ALIASES = 32
MIN_QUADRATURE_NODES = 1024


@dataclass(frozen=True)
class KernelNorms:
    mu: float
    n1_paper: float
    n2_paper: float
    ninf_paper: float
    n1_numeric: float
    n2_numeric: float
    ninf_numeric: float

    def as_dict(self):
        return asdict(self)


def kernel_multiplier(n, mu):
    """P_hat(k) on the half spectrum k = 0..n/2."""
    return spectral.helmholtz_symbol(n, check_mu(mu))


def folded_coefficients(n, mu):
    """F_m = sum over all integers l of P_hat(m + l n), for m = 0..n/2."""
    a = check_mu(mu) / 12.0
    c = a * 4.0 * np.pi**2
    m = np.arange(n // 2 + 1, dtype=np.float64)
    ell = np.arange(-_DIRECT_ALIASES, _DIRECT_ALIASES + 1, dtype=np.float64)
    k = m[:, None] + ell[None, :] * n
    direct = (1.0 / (1.0 + c * k**2)).sum(axis=1)

    # |l| > L: 1/(1+ck^2) = sum_p (-1)^(p+1) (ck^2)^(-p), ck^2 >> 1 there
    q_plus = _DIRECT_ALIASES + 1 + m / n
    q_minus = _DIRECT_ALIASES + 1 - m / n
    tail = np.zeros_like(m)
    for p, sign in ((1, 1.0), (2, -1.0), (3, 1.0)):
        s = (zeta(2 * p, q_plus) + zeta(2 * p, q_minus)) / float(n) ** (2 * p)
        tail += sign * s / c**p
    return direct + tail


def kernel_values(mu, grid, folded=True):
    """Nodal samples of P on ``grid``.

    With ``folded`` (the default) these are the exact values P(x_j); their
    grid mean is 1 plus the aliased mass sum_{l != 0} P_hat(l n), which is
    O(1/(mu n^2)). With ``folded=False`` the multiplier is synthesized on the
    grid's own modes only: the mean is then exactly 1, but the nodal values
    carry an O(1/n) truncation error from the corner at x = 0.
    """
    mu = check_mu(mu)
    coeffs = folded_coefficients(grid.n, mu) if folded else kernel_multiplier(grid.n, mu)
    return spectral.inverse(coeffs.astype(np.complex128), grid.n)


def kernel_closed_form(x, mu):
    """sqrt(3/mu) (e^{b y} + e^{b (1 - y)}) / (e^b - 1), y = x - floor(x), b = 2 sqrt(3/mu).

    Evaluated in the overflow-free rearrangement with the factor e^b divided out.
    """
    mu = check_mu(mu)
    r = np.sqrt(3.0 / mu)
    b = 2.0 * r
    y = np.asarray(x, dtype=np.float64)
    y = y - np.floor(y)
    return r * (np.exp(b * (y - 1.0)) + np.exp(-b * y)) / (-np.expm1(-b))


def closed_form_norms(mu):
    """(n1, n2, ninf) from the closed-form expressions; n1 is taken as mu/3."""
    mu = check_mu(mu)
    r = np.sqrt(3.0 / mu)
    b = 2.0 * r
    e1 = np.exp(-b)
    n1 = mu / 3.0
    # (e^{2b} + 2b e^b - 1) / (e^{2b} - 2e^b + 1), numerator and denominator scaled by e^{-2b}
    ratio = (1.0 + 2.0 * b * e1 - e1 * e1) / (1.0 - e1) ** 2
    n2 = (3.0 / (4.0 * mu)) ** 0.25 * np.sqrt(ratio)
    ninf = r / np.tanh(r)
    return float(n1), float(n2), float(ninf)


def _trapezoid_norms(mu, n):
    p = kernel_values(mu, Grid(n))
    return p.mean(), (p * p).mean(), p


def kernel_norms(mu, grid):
    """Closed-form and quadrature values of ||P||_1, ||P||_2, ||P||_inf on [0, 1].

    Quadrature is the trapezoid rule on at least 1024 nodes plus one Richardson
    step against the doubled grid (the corner at x = 0 leaves an h^2 error
    expansion). The sup norm is the refined nodal maximum.
    """
    mu = check_mu(mu)
    n = max(grid.n, MIN_QUADRATURE_NODES)
    i1, i2, p = _trapezoid_norms(mu, n)
    j1, j2, _ = _trapezoid_norms(mu, 2 * n)
    l1 = (4.0 * j1 - i1) / 3.0
    l2 = (4.0 * j2 - i2) / 3.0
    peak, _ = spectral.refine_peak(p)
    n1p, n2p, ninfp = closed_form_norms(mu)
    return KernelNorms(
        mu=mu,
        n1_paper=n1p,
        n2_paper=n2p,
        ninf_paper=ninfp,
        n1_numeric=float(l1),
        n2_numeric=float(np.sqrt(l2)),
        ninf_numeric=float(peak),
    )


def convolve(h, mu):
    """P * h on the grid of ``h``, formed as a product of Fourier coefficients."""
    h = spectral.check_field(h)
    n = h.shape[0]
    return spectral.inverse(kernel_multiplier(n, mu) * spectral.transform(h), n)


def residual_test_fields(grid):
    x = grid.nodes
    return [np.ones(grid.n), np.sin(2 * np.pi * x), np.cos(4 * np.pi * x)]


def residual_helmholtz_kernel(mu, grid):
    """max |(1 - (mu/12) d_xx)(P * h) - h| over the smooth test fields."""
    mu = check_mu(mu)
    worst = 0.0
    for h in residual_test_fields(grid):
        r = spectral.helmholtz_apply(convolve(h, mu), mu) - h
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def closed_form_discrepancy(mu, grid):
    """max |P_closed(x_j) - P(x_j)| over the grid nodes."""
    return float(np.max(np.abs(kernel_closed_form(grid.nodes, mu) - kernel_values(mu, grid))))
