import numpy as np
import pytest
from scipy import integrate

from mswave import kernel, spectral
from mswave.errors import InvalidArgumentError
from mswave.spectral import make_grid

MUS = [0.01, 0.1, 0.5, 1.0, 3.0, 12.0, 100.0]


def green(x, mu):
    """Reference kernel (b/2) cosh(b(x - 1/2)) / sinh(b/2), b = 2 sqrt(3/mu), x in [0, 1)."""
    b = 2.0 * np.sqrt(3.0 / mu)
    return 0.5 * b * np.cosh(b * (x - 0.5)) / np.sinh(b / 2)


@pytest.mark.parametrize("mu", [0.1, 1.0, 3.0, 12.0])
def test_band_limited_values_have_unit_mean(mu):
    p = kernel.kernel_values(mu, make_grid(256), folded=False)
    assert np.mean(p) == pytest.approx(1.0, abs=1e-10)
    assert np.all(p > 0)


@pytest.mark.parametrize("mu", [0.1, 1.0, 3.0, 12.0])
def test_exact_samples_mean_is_one_plus_aliases(mu):
    n = 256
    c = mu / 12 * (2 * np.pi) ** 2
    ell = np.arange(1, 200001, dtype=float)
    aliases = 2 * np.sum(1 / (1 + c * (ell * n) ** 2))
    aliases += 2 / (c * n**2 * ell[-1])  # remainder of the sum beyond the cut
    mean = np.mean(kernel.kernel_values(mu, make_grid(n)))
    assert mean - 1 == pytest.approx(aliases, rel=1e-6)


@pytest.mark.parametrize("mu", [0.01, 0.3, 3.0, 100.0])
def test_samples_positive_and_even(mu):
    p = kernel.kernel_values(mu, make_grid(128))
    assert np.all(p > 0)
    np.testing.assert_allclose(p[1:], p[1:][::-1], atol=1e-10)


def test_convolve_is_helmholtz_inverse():
    g = make_grid(64)
    for h in kernel.residual_test_fields(g):
        np.testing.assert_allclose(kernel.convolve(h, 2.0), spectral.helmholtz_inverse(h, 2.0), atol=1e-12)


def test_ninf_closed_form_monotone_and_blows_up():
    mus = np.geomspace(1e-3, 1e2, 30)
    vals = [kernel.closed_form_norms(m)[2] for m in mus]
    assert np.all(np.diff(vals) < 0)
    assert vals[0] > 50


@pytest.mark.parametrize("mu", [0.1, 1.0, 3.0, 12.0])
def test_values_match_reference_samples(mu):
    g = make_grid(128)
    np.testing.assert_allclose(kernel.kernel_values(mu, g), green(g.nodes, mu), rtol=1e-12)


def test_values_max_at_mu3():
    p = kernel.kernel_values(3.0, make_grid(1024))
    assert np.argmax(p) == 0
    assert p.max() == pytest.approx(1 / np.tanh(1.0), rel=1e-12)


def test_values_refinement_consistency():
    coarse = kernel.kernel_values(3.0, make_grid(512))
    fine = kernel.kernel_values(3.0, make_grid(1024))
    assert np.max(np.abs(fine[::2] - coarse)) <= 1e-8


@pytest.mark.parametrize("mu", [0.0, -3.0])
def test_values_reject_bad_mu(mu):
    with pytest.raises(InvalidArgumentError):
        kernel.kernel_values(mu, make_grid(64))


def test_closed_form_evaluator_matches_reference():
    x = np.linspace(0, 1, 101, endpoint=False)
    for mu in (0.1, 1.0, 12.0):
        np.testing.assert_allclose(kernel.kernel_closed_form(x, mu), green(x, mu), rtol=1e-13)


def test_closed_form_survives_tiny_mu():
    # b = 2 sqrt(3/mu) is ~ 3.5e3 here; the naive cosh/sinh form overflows
    v = kernel.kernel_closed_form(np.array([0.0, 0.5]), 1e-6)
    assert np.all(np.isfinite(v))


def test_norms_mu3():
    k = kernel.kernel_norms(3.0, make_grid(1024))
    coth1 = 1 / np.tanh(1.0)
    assert k.ninf_paper == pytest.approx(coth1, rel=1e-14)
    assert k.ninf_numeric == pytest.approx(coth1, rel=1e-6)
    assert k.n1_paper == pytest.approx(1.0)
    assert k.n1_numeric == pytest.approx(1.0, abs=1e-8)
    assert k.n2_numeric == pytest.approx(1.0092316, abs=1e-6)


@pytest.mark.parametrize("mu", MUS)
def test_norms_against_adaptive_quadrature(mu):
    k = kernel.kernel_norms(mu, make_grid(256))
    peaks = [0.0, 0.5, 1.0]
    l1 = integrate.quad(green, 0, 1, args=(mu,), points=peaks, epsabs=1e-13, limit=200)[0]
    l2 = integrate.quad(lambda x: green(x, mu) ** 2, 0, 1, points=peaks, epsabs=1e-13, limit=200)[0]
    assert k.n1_numeric == pytest.approx(l1, rel=1e-8)
    assert k.n2_numeric == pytest.approx(np.sqrt(l2), rel=1e-8)
    assert k.ninf_numeric == pytest.approx(green(0.0, mu), rel=1e-6)
    assert all(v > 0 and np.isfinite(v) for v in k.as_dict().values())


@pytest.mark.parametrize("mu", MUS)
def test_closed_form_n2_and_ninf_agree_with_numeric(mu):
    k = kernel.kernel_norms(mu, make_grid(256))
    assert k.n2_paper == pytest.approx(k.n2_numeric, rel=1e-8)
    assert k.ninf_paper == pytest.approx(k.ninf_numeric, rel=1e-6)


def test_closed_form_n1_diverges_away_from_mu3():
    k = kernel.kernel_norms(12.0, make_grid(256))
    assert k.n1_paper == pytest.approx(4.0)
    assert k.n1_numeric == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("mu", [0.1, 1.0, 3.0, 12.0])
def test_helmholtz_residual(mu):
    assert kernel.residual_helmholtz_kernel(mu, make_grid(256)) <= 1e-10


def test_residual_independent_of_n():
    a = kernel.residual_helmholtz_kernel(0.1, make_grid(64))
    b = kernel.residual_helmholtz_kernel(0.1, make_grid(512))
    assert abs(a - b) <= 1e-10


def test_convolve_matches_direct_quadrature():
    # (P * h)(x) = int P(x - y) h(y) dy, oracle by trapezoid on a fine grid
    mu = 1.0
    g = make_grid(64)
    h = np.cos(2 * np.pi * g.nodes) + 0.3 * np.sin(2 * np.pi * 3 * g.nodes)
    got = kernel.convolve(h, mu)
    fine = np.linspace(0, 1, 20001)
    hf = np.cos(2 * np.pi * fine) + 0.3 * np.sin(2 * np.pi * 3 * fine)
    ref = [integrate.trapezoid(kernel.kernel_closed_form(x - fine, mu) * hf, fine) for x in g.nodes[::8]]
    np.testing.assert_allclose(got[::8], ref, atol=1e-7)


def test_closed_form_discrepancy_small():
    assert kernel.closed_form_discrepancy(1.0, make_grid(256)) < 1e-12
