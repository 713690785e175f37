"""Uniform periodic grid on [0, 1) and Fourier-multiplier operators.

Fields are plain 1-D float64 arrays of nodal samples u(x_j), x_j = j/n. The
grid is fully determined by the node count, so operators infer it from the
array length. Coefficients use the ``forward`` normalization, i.e.

    u(x) = sum_k u_hat[k] exp(2 pi i k x),

and only the non-negative half k = 0..n/2 is stored (real FFT layout).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError

MIN_NODES = 8
DEALIAS_MODES = ("two_thirds", "pad", "none")


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n`` nodes on the unit period."""

    n: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    wavenumbers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_n(self.n)
        nodes = np.arange(self.n) / self.n
        # FFT ordering, Nyquist carried as +n/2
        k = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(np.int64)
        k[self.n // 2] = self.n // 2
        nodes.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "wavenumbers", k)

    @property
    def spacing(self):
        return 1.0 / self.n


def _check_n(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidArgumentError(f"n must be an integer, got {n!r}")
    if n < MIN_NODES:
        raise InvalidArgumentError(f"n must be >= {MIN_NODES}, got {n}")
    if n % 2:
        raise InvalidArgumentError(f"n must be even, got {n}")


def make_grid(n):
    return Grid(int(n) if isinstance(n, np.integer) else n)


def check_field(u):
    """Return ``u`` as a float64 array after validating length and finiteness."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1:
        raise InvalidArgumentError("field must be one-dimensional")
    _check_n(u.shape[0])
    if not np.all(np.isfinite(u)):
        raise InvalidArgumentError("field contains non-finite values")
    return u


def check_mu(mu):
    if not (np.isfinite(mu) and mu > 0):
        raise InvalidArgumentError(f"mu must be positive and finite, got {mu}")
    return float(mu)


@lru_cache(maxsize=64)
def _half_modes(n):
    k = np.arange(n // 2 + 1, dtype=np.float64)
    k.setflags(write=False)
    return k


@lru_cache(maxsize=64)
def derivative_symbol(n, order):
    """(2 pi i k)^order on the half spectrum, Nyquist zeroed for odd orders."""
    ik = 2j * np.pi * _half_modes(n)
    sym = ik**order
    if order % 2:
        sym[-1] = 0.0
    else:
        sym = sym.real.astype(np.complex128)
    sym.setflags(write=False)
    return sym


@lru_cache(maxsize=64)
def helmholtz_symbol(n, mu):
    """Multiplier 1 / (1 + (mu/12) (2 pi k)^2) realizing (1 - (mu/12) d_xx)^-1."""
    k2 = (2.0 * np.pi * _half_modes(n)) ** 2
    sym = 1.0 / (1.0 + (mu / 12.0) * k2)
    sym.setflags(write=False)
    return sym


@lru_cache(maxsize=64)
def two_thirds_mask(n):
    """True on retained modes k <= n // 3."""
    mask = _half_modes(n) <= n // 3
    mask.setflags(write=False)
    return mask


def transform(u):
    return np.fft.rfft(u, norm="forward")


def inverse(u_hat, n):
    return np.fft.irfft(u_hat, n, norm="forward")


def derivative(u, order=1):
    """Spectral x-derivative of order 1, 2 or 3."""
    if order not in (1, 2, 3):
        raise InvalidArgumentError(f"derivative order must be 1, 2 or 3, got {order!r}")
    u = check_field(u)
    n = u.shape[0]
    return inverse(derivative_symbol(n, order) * transform(u), n)


def helmholtz_inverse(u, mu):
    """Solve (1 - (mu/12) v_xx) = u for periodic v."""
    mu = check_mu(mu)
    u = check_field(u)
    n = u.shape[0]
    return inverse(helmholtz_symbol(n, mu) * transform(u), n)


def helmholtz_apply(u, mu):
    """Apply (1 - (mu/12) d_xx)."""
    mu = check_mu(mu)
    u = check_field(u)
    return u - (mu / 12.0) * derivative(u, 2)


def truncate(u_hat, n, rule="two_thirds"):
    """Zero the modes removed by ``rule`` (in place on a copy)."""
    if rule == "none":
        return u_hat
    out = u_hat.copy()
    if rule == "two_thirds":
        out[~two_thirds_mask(n)] = 0.0
    elif rule == "pad":
        out[-1] = 0.0
    else:
        raise InvalidArgumentError(f"unknown dealias rule {rule!r}; expected one of {DEALIAS_MODES}")
    return out


def padded_size(n):
    """Even node count of at least 5n/2, enough for quartic products."""
    m = -(-5 * n // 2)
    return m + (m % 2)


def to_padded(u_hat, n, m):
    """Physical samples on an m-point grid of the band-limited field u_hat."""
    ext = np.zeros(m // 2 + 1, dtype=np.complex128)
    ext[: n // 2 + 1] = u_hat
    # real Nyquist mode is cos(pi n x); off-Nyquist on the fine grid it is split evenly
    ext[n // 2] = 0.5 * u_hat[n // 2]
    return np.fft.irfft(ext, m, norm="forward")


def from_padded(v, n):
    """Project fine-grid samples back onto the n-point half spectrum."""
    return np.fft.rfft(v, norm="forward")[: n // 2 + 1].copy()


def active_band(n, rule="two_thirds"):
    """Highest wavenumber that can carry energy under the dealiasing ``rule``."""
    return n // 3 if rule == "two_thirds" else n // 2


@lru_cache(maxsize=64)
def tail_mask(n, rule="two_thirds"):
    """True on the top third of the active band."""
    band = active_band(n, rule)
    mask = 3 * _half_modes(n) > 2 * band
    mask.setflags(write=False)
    return mask


def tail_fraction(u, mu, rule="two_thirds"):
    """Share of the energy (1/2) int (u^2 + (mu/12) u_x^2) held by the top third of the active band.

    Under 2/3 truncation the products never feed modes above n/3, so the
    monitored band is 2n/9 < k <= n/3; otherwise it is n/3 < k <= n/2. The
    mean is excluded and a constant field has tail fraction 0.
    """
    n = u.shape[0]
    return tail_from_power(np.abs(transform(u)) ** 2, n, mu, rule)


def tail_from_power(power, n, mu, rule="two_thirds"):
    w = 2.0 * (1.0 + (mu / 12.0) * (2.0 * np.pi * _half_modes(n)) ** 2)
    w[0] = 0.0
    w[-1] *= 0.5
    weighted = w * power
    total = weighted.sum()
    if total == 0.0:
        return 0.0
    tail = weighted[tail_mask(n, rule)].sum()
    return float(min(max(tail / total, 0.0), 1.0))


def parseval_weights(n):
    """Weights turning half-spectrum |u_hat|^2 into the mean of u^2."""
    w = np.full(n // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def refine_peak(values):
    """Locate the maximum of periodic nodal samples.

    Returns ``(peak, index)`` where ``index`` is a fractional node index in
    [0, n). The nodal maximum (first occurrence on ties) is refined by the
    vertex of the parabola through it and its two neighbours.
    """
    n = values.shape[0]
    top = values.max()
    tol = 1e-13 * max(1.0, abs(top))
    j = int(np.flatnonzero(values >= top - tol)[0])
    y0, y1, y2 = values[j - 1], values[j], values[(j + 1) % n]
    curv = y0 - 2.0 * y1 + y2
    if curv >= 0.0 or y1 < max(y0, y2):
        return float(y1), float(j)
    shift = 0.5 * (y0 - y2) / curv
    peak = y1 - 0.25 * (y0 - y2) * shift
    return float(peak), float((j + shift) % n)


def evaluate(f_hat, n, x, order=0):
    """Value at x of the order-th derivative of the trigonometric interpolant with spectrum f_hat."""
    k = _half_modes(n)
    w = parseval_weights(n)
    phase = np.exp(2j * np.pi * k * x)
    return float(np.real(np.sum(w * f_hat * (2j * np.pi * k) ** order * phase)))


def polish_peak(f_hat, n, peak, index, steps=4):
    """Sharpen a refine_peak estimate with Newton steps on the interpolant.

    The nodal/parabolic estimate is kept unless Newton converges to a point
    within one grid spacing of it with a value at least as large.
    """
    x = index / n
    for _ in range(steps):
        d2 = evaluate(f_hat, n, x, 2)
        if not d2 < 0.0:
            return peak, index
        dx = -evaluate(f_hat, n, x, 1) / d2
        x += dx
        if abs(x - index / n) > 1.0 / n:
            return peak, index
        if abs(dx) < 1e-15:
            break
    value = evaluate(f_hat, n, x)
    if value < peak:
        return peak, index
    return value, (x * n) % n
