import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mswave import model, spectral
from mswave.errors import InvalidArgumentError, NumericalOverflowError
from mswave.model import Params, State
from mswave.spectral import make_grid
from mswave.timestepper import integrate_fixed

from conftest import random_modes

DEALIAS = ["two_thirds", "pad", "none"]


@pytest.mark.parametrize("eps,mu", [(0.0, 1.0), (0.1, 0.0), (-1.0, 1.0), (np.nan, 1.0), (0.1, np.inf), (True, 1.0)])
def test_params_validation(eps, mu):
    with pytest.raises(InvalidArgumentError):
        Params(eps, mu)


def test_state_validation():
    with pytest.raises(InvalidArgumentError):
        State(np.zeros(16), t=-1.0)
    with pytest.raises(InvalidArgumentError):
        State(np.full(16, np.inf))


def test_g_of_zero():
    assert np.all(model.g_of_u(State(np.zeros(32)), Params(0.1, 1.0)) == 0.0)


def test_g_of_constant():
    c = 0.4
    g = model.g_of_u(State(np.full(32, c)), Params(1.0, 3.0))
    np.testing.assert_allclose(g, 2 * c + 2.5 * c**2 - c**3 / 8 + 3 / 64 * c**4, rtol=1e-14)


def test_g_against_pointwise_formula(grid256):
    eps, mu = 0.1, 1.0
    x = grid256.nodes
    u = 0.1 * np.sin(2 * np.pi * x)
    ux = 0.2 * np.pi * np.cos(2 * np.pi * x)
    ref = (2 * u + 2.5 * eps * u**2 - eps**2 * u**3 / 8 + 3 / 64 * eps**3 * u**4
           - 7 / 48 * eps * mu * ux**2)
    got = model.g_of_u(State(u), Params(eps, mu))
    assert np.max(np.abs(got - ref)) <= 1e-10


def test_f_modewise(grid256):
    params = Params(0.1, 1.0)
    u = 0.1 * np.sin(2 * np.pi * grid256.nodes)
    g = model.g_of_u(State(u), params)
    g_hat = np.fft.fft(g)
    f_hat = np.zeros_like(g_hat)
    n = grid256.n
    for j in range(n):
        k = j if j < n // 2 else j - n
        if j == n // 2:
            continue
        f_hat[j] = -(2j * np.pi * k) / (1 + params.mu / 12 * (2 * np.pi * k) ** 2) * g_hat[j]
    ref = np.fft.ifft(f_hat).real
    assert np.max(np.abs(model.f_of_u(State(u), params) - ref)) <= 1e-10


def test_f_and_rhs_vanish_on_constants():
    st_ = State(np.full(64, 0.7))
    params = Params(0.5, 2.0)
    assert np.max(np.abs(model.f_of_u(st_, params))) < 1e-14
    for dealias in DEALIAS:
        assert np.max(np.abs(model.rhs_nonlocal(st_, params, dealias))) < 1e-14
        assert np.max(np.abs(model.rhs_direct(st_, params, dealias))) < 1e-14


@pytest.mark.parametrize("dealias", DEALIAS)
def test_rhs_forms_agree_on_sine(sine_fixture, dealias):
    params = Params(0.1, 1.0)
    st_ = State(sine_fixture)
    diff = model.rhs_nonlocal(st_, params, dealias) - model.rhs_direct(st_, params, dealias)
    assert np.max(np.abs(diff)) <= 1e-10


@pytest.mark.parametrize("eps", [0.1, 1.0])
@pytest.mark.parametrize("mu", [1.0, 12.0])
@pytest.mark.parametrize("which", ["sine_fixture", "random_fixture"])
def test_identity_residual(request, which, eps, mu):
    u = request.getfixturevalue(which)
    assert model.identity_residual(State(u), Params(eps, mu)) <= 1e-10


def test_identity_residual_of_zero():
    assert model.identity_residual(State(np.zeros(64)), Params(0.1, 1.0)) == 0.0


def test_overflow_is_reported():
    with pytest.raises(NumericalOverflowError):
        model.rhs_nonlocal(State(np.full(16, 1e100) * np.arange(16)), Params(1.0, 1.0))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), eps=st.floats(0.01, 1.0), mu=st.floats(0.05, 20.0),
       dealias=st.sampled_from(DEALIAS))
def test_rhs_mean_zero_and_forms_agree(seed, eps, mu, dealias):
    u = random_modes(make_grid(64), seed=seed, modes=4, scale=0.1)
    st_ = State(u)
    params = Params(eps, mu)
    a = model.rhs_nonlocal(st_, params, dealias)
    b = model.rhs_direct(st_, params, dealias)
    assert abs(np.mean(a)) < 1e-12
    assert np.max(np.abs(a - b)) <= 1e-9


@pytest.mark.parametrize("k,mu", [(1, 1.0), (3, 1.0), (2, 12.0)])
def test_linear_phase_speed(k, mu):
    # tiny amplitude and epsilon: one Fourier mode rotates at the linear frequency
    g = make_grid(32)
    amp = 1e-8
    params = Params(1e-8, mu)
    u0 = amp * np.sin(2 * np.pi * k * g.nodes)
    t, steps = 0.2, 400
    out = integrate_fixed(State(u0), params, t / steps, steps)
    w = model.linear_frequency(k, mu)
    ref = amp * np.sin(2 * np.pi * k * g.nodes + w * t)
    assert np.max(np.abs(out.u - ref)) <= 1e-6 * amp


def test_linear_frequency_limits():
    # long waves move left at speed 1; the k = 0 mode is stationary
    assert model.linear_frequency(0, 1.0) == 0.0
    assert model.linear_frequency(1e-4, 1.0) / (2 * np.pi * 1e-4) == pytest.approx(-1.0, rel=1e-6)
    assert model.linear_frequency(1e4, 1.0) / (2 * np.pi * 1e4) == pytest.approx(1.0, rel=1e-6)
