import numpy as np
import pytest

from antiprod.linalg import DomainError
from antiprod.mellin import (ConvolvedDensity, QuadratureError,
                             a_sigma, a_sigma_custom, ginibre_weight,
                             jacobi_weight, mellin_convolve, mellin_numeric)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0])
def test_ginibre_mellin_closed_vs_quadrature(nu):
    w = ginibre_weight(nu)
    for j in range(4):
        s = 2 * j + 1
        exact = w.mellin(s)
        num = mellin_numeric(w, s)
        assert abs(num - exact) / abs(exact) < 1e-8


@pytest.mark.parametrize("nu,mu", [(0.0, 0.0), (0.5, 1.0), (1.0, 0.5)])
def test_jacobi_mellin_closed_vs_quadrature(nu, mu):
    w = jacobi_weight(nu, mu, 2)
    for j in range(4):
        s = 2 * j + 1
        exact = w.mellin(s)
        num = mellin_numeric(w, s)
        assert abs(num - exact) / abs(exact) < 1e-8


def test_ginibre_mellin_values():
    w = ginibre_weight(0.0)
    assert w.mellin(1) == pytest.approx(1.0)
    assert w.mellin(3) == pytest.approx(2.0)   # Gamma(3)
    assert w.mellin(5) == pytest.approx(24.0)  # Gamma(5)


def test_density_normalized():
    from scipy import integrate
    for w in (ginibre_weight(0.7), jacobi_weight(0.3, 0.4, 2)):
        hi = min(w.support[1], w.tail)
        val, _ = integrate.quad(lambda t: float(w.density(t)), 0, hi)
        assert val == pytest.approx(1.0, abs=1e-9)


def test_density_deriv_matches_finite_difference():
    for w in (ginibre_weight(1.0), jacobi_weight(1.0, 0.5, 1)):
        for k in (1, 2, 3):
            a = 0.37
            h = 1e-5
            stencil = [w.density_deriv(a + i * h, k - 1) for i in (-1, 1)]
            fd = (stencil[1] - stencil[0]) / (2 * h)
            assert w.density_deriv(a, k) == pytest.approx(fd, rel=1e-7)


def test_neg_xdx_mellin_identity():
    # M[(-a d/da)^m A](s) = s^m M A(s)
    w = ginibre_weight(0.5)
    for m in (1, 2):
        s = 3.0
        num = mellin_numeric(lambda a: w.neg_xdx_pow(a, m), s,
                             support=w.support)
        assert abs(num - s ** m * w.mellin(s)) / abs(w.mellin(s)) < 1e-7


def test_mellin_convolution_factorizes():
    f = ginibre_weight(0.5)
    h = jacobi_weight(0.0, 0.0, 1)
    for s in (1.0, 2.0, 3.0):
        lhs = mellin_numeric(lambda y: mellin_convolve(f, h, y), s,
                             support=(0.0, f.tail))
        rhs = f.mellin(s) * h.mellin(s)
        assert abs(lhs - rhs) / abs(rhs) < 1e-8


def test_convolved_density_matches_quadrature():
    f = ginibre_weight(0.0)
    h = jacobi_weight(0.0, 0.0, 1)
    conv = ConvolvedDensity(f, h)
    for y in (0.1, 0.7, 2.0, 5.0):
        assert conv(y) == pytest.approx(mellin_convolve(f, h, y), rel=1e-6)


def test_a_sigma_catalogue():
    assert a_sigma("ginibre", nu=0.5).kind == "ginibre"
    assert a_sigma("jacobi", nu=0.0, mu=0.0, n=2).kind == "jacobi"
    with pytest.raises(DomainError):
        a_sigma("wishart")
    with pytest.raises(DomainError):
        ginibre_weight(-0.6)
    with pytest.raises(DomainError):
        jacobi_weight(0.0, -1.6, 1)


def test_a_sigma_custom_recovers_exponential():
    rng = np.random.default_rng(2)
    w = a_sigma_custom(lambda r: r.standard_normal((2, 2)), rng,
                       nsamples=50_000)
    grid = np.linspace(0.2, 2.5, 12)
    ref = np.exp(-grid)
    est = np.array([float(w.density(g)) for g in grid])
    assert np.max(np.abs(est - ref)) < 0.05
