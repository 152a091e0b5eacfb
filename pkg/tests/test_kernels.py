import numpy as np
import pytest
from scipy import integrate

from antiprod.ensembles import (PolynomialEnsembleSpec, fixed_base_weights,
                                muttalib_borodin_weights)
from antiprod.kernels import (ContourError, ContourSpec,
                              biorth_fixed, chi_poly, correlation_Rk,
                              gram_biorth, kernel_fixed, kernel_fixed_contour,
                              kernel_poly)
from antiprod.linalg import DomainError
from antiprod.mellin import ginibre_weight, jacobi_weight

GW = ginibre_weight(0.0)


def test_chi_examples():
    # m1 = m2 = 0 keeps only the constant term 1 / M A(1) = 1
    assert chi_poly(GW, 0.7, 0, 0) == pytest.approx(1.0, rel=1e-14)
    # next term divides z^2 by M A(3) = Gamma(3) = 2
    z = 0.6
    assert chi_poly(GW, z, 0, 1) == pytest.approx(1.0 + z * z / 2.0,
                                                  rel=1e-14)


def test_contour_spec_validation():
    with pytest.raises(DomainError):
        ContourSpec(n_nodes=100)
    with pytest.raises(DomainError):
        ContourSpec(n_nodes=32)
    ContourSpec(n_nodes=64, nodes_per_circle=128)


def test_fixed_gram_is_identity():
    sys = biorth_fixed([1.0, 2.0], GW)
    assert np.max(np.abs(sys.gram_matrix() - np.eye(2))) < 1e-8


def test_gram_biorth_modes_agree():
    base = PolynomialEnsembleSpec(2, muttalib_borodin_weights(0.5, 0.5, 2))
    for mode in ("triangular", "dual_weights"):
        sys = gram_biorth(base, mode=mode)
        g = sys.gram_matrix()
        assert np.max(np.abs(g - np.eye(2))) < 1e-8


def test_gram_biorth_rejects_singular_bimoments():
    with pytest.raises((DomainError, ArithmeticError)):
        w = fixed_base_weights([1.0, 1.0 + 1e-13], GW)
        gram_biorth(PolynomialEnsembleSpec(2, w))


def test_kernel_n1_is_weight_density():
    # single block: K(y, y) must reduce to the factor density itself
    sys = biorth_fixed([1.0], GW)
    for y in (0.3, 1.0, 2.5):
        val = kernel_fixed(y, y, [1.0], GW, system=sys)
        assert val == pytest.approx(np.exp(-y), rel=1e-9)


def test_kernel_methods_agree_ginibre():
    at = [1.0, 2.0]
    sys = biorth_fixed(at, GW)
    pts = [(0.4, 0.9), (1.5, 0.7), (2.4, 2.4)]
    for yp, y in pts:
        series = kernel_fixed(yp, y, at, GW, method="series", system=sys)
        contour = kernel_fixed(yp, y, at, GW, method="contour", system=sys)
        double = kernel_fixed_contour(yp, y, at, GW)
        assert contour == pytest.approx(series, rel=1e-9, abs=1e-12)
        assert double == pytest.approx(series, rel=1e-7, abs=1e-10)


def test_kernel_methods_agree_jacobi():
    jw = jacobi_weight(0.0, 0.0, 2)
    at = [0.5, 0.9]
    sys = biorth_fixed(at, jw)
    for yp, y in [(0.05, 0.15), (0.25, 0.4), (0.15, 0.05)]:
        series = kernel_fixed(yp, y, at, jw, method="series", system=sys)
        double = kernel_fixed_contour(yp, y, at, jw)
        assert double == pytest.approx(series, rel=1e-6, abs=1e-9)


def test_kernel_trace_counts_points():
    at = [1.0, 2.0]
    sys = biorth_fixed(at, GW)
    val, _ = integrate.quad(
        lambda y: kernel_fixed(y, y, at, GW, method="series", system=sys),
        0, 40, limit=200)
    assert val == pytest.approx(2.0, abs=1e-5)


def test_kernel_diag_r2_vanishes():
    at = [1.0, 2.0]
    sys = biorth_fixed(at, GW)

    def K(yp, y):
        return kernel_fixed(yp, y, at, GW, method="series", system=sys)

    for y in (0.5, 1.3, 2.6):
        assert abs(correlation_Rk([y, y], K)) < 1e-10


def test_r2_nonnegative_at_random_pairs():
    rng = np.random.default_rng(7)
    at = [1.0, 2.0]
    sys = biorth_fixed(at, GW)

    def K(yp, y):
        return kernel_fixed(yp, y, at, GW, method="series", system=sys)

    for _ in range(5):
        pts = rng.uniform(0.1, 4.0, size=2)
        assert correlation_Rk(pts, K) > -1e-10


def test_double_contour_collision_raises():
    with pytest.raises(ContourError):
        kernel_fixed_contour(0.5, 0.5, [1.0, 2.0], GW,
                             contour=ContourSpec(radius=0.95, rho=0.25))


def test_double_contour_rejects_degenerate_base():
    with pytest.raises(DomainError):
        kernel_fixed_contour(0.5, 0.5, [1.0, 1.0], GW)


def test_kernel_poly_methods_agree():
    base = PolynomialEnsembleSpec(2, fixed_base_weights([1.0, 2.0], GW))
    sys = gram_biorth(base)
    for yp, y in [(0.4, 0.9), (1.5, 0.7)]:
        series = kernel_poly(yp, y, sys, GW, method="series")
        contour = kernel_poly(yp, y, sys, GW, method="contour")
        assert contour == pytest.approx(series, rel=1e-8, abs=1e-12)


def test_kernel_poly_diag_r2_vanishes():
    # the kernel of base convolved with one more factor is still a
    # projection-type kernel, so R2 on the diagonal must vanish
    base = PolynomialEnsembleSpec(2, fixed_base_weights([1.0, 2.0], GW))
    sys = gram_biorth(base)

    def K(yp, y):
        return kernel_poly(yp, y, sys, GW, method="series")

    assert abs(correlation_Rk([1.1, 1.1], K)) < 1e-9
