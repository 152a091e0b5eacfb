import numpy as np
import pytest

from antiprod.linalg import DomainError, SingularSpectrum
from antiprod.spherical import (SphericalParameter, fn_closed, fn_limit,
                                fn_recurrence, harish_chandra_o2n,
                                harish_chandra_o2n_mc, isometry_log_constant,
                                phi_closed, phi_montecarlo, psi_montecarlo,
                                factorization_check_phi,
                                factorization_check_psi)


def test_parameter_properties():
    s = SphericalParameter(np.array([2.0, 0.0], dtype=complex))
    assert s.n == 2
    assert s.in_convergence_domain
    assert not SphericalParameter(
        np.array([1.0, 0.0], dtype=complex)).in_convergence_domain
    assert np.allclose(s.exponents, [0.0, 0.5])


def test_phi_n1_is_power():
    for a in (0.3, 1.0, 2.7):
        for s in (2.0, 3.5):
            assert phi_closed((s,), (a,)) == pytest.approx(a ** s, rel=1e-14)


def test_phi_named_value():
    assert phi_closed((2.0, 0.0), (1.0, 2.0)) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_phi_limit_is_one(n):
    s = tuple(2.0 * (n - j) for j in range(1, n + 1))
    assert abs(phi_closed(s, tuple([1.0] * n)) - 1.0) < 1e-8


def test_phi_degenerate_a_continuity():
    s = (3.0, 1.0)
    near = phi_closed(s, (1.0, 1.0 + 1e-6))
    conf = phi_closed(s, (1.0, 1.0))
    assert abs(near - conf) / abs(conf) < 1e-4


def test_phi_degenerate_s_continuity():
    a = (1.0, 2.0)
    near = phi_closed((2.0 + 1e-7, 2.0 - 1e-7), a)
    conf = phi_closed((2.0, 2.0), a)
    assert abs(near - conf) / abs(conf) < 1e-4


def test_phi_montecarlo_agrees():
    rng = np.random.default_rng(1)
    s, a = (4.0, 0.0), (1.0, 2.0)
    mc, se = phi_montecarlo(s, a, 200_000, rng)
    closed = phi_closed(s, a)
    assert se > 0
    assert abs(mc - closed) < 3.5 * se


def test_phi_montecarlo_rejects_outside_domain():
    rng = np.random.default_rng(1)
    with pytest.raises(DomainError):
        phi_montecarlo((1.0, 0.5), (1.0, 2.0), 10, rng)


def test_psi_identity_matrix():
    rng = np.random.default_rng(2)
    val, se = psi_montecarlo((2.0, 0.0), np.eye(4), 10, rng)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_factorization_phi():
    rng = np.random.default_rng(3)
    g = np.diag([1.2, 0.8, 1.1, 0.9])
    _, _, z = factorization_check_phi((2.0, 0.0), g, (1.0, 2.0),
                                      100_000, rng)
    assert z < 3.5


def test_factorization_psi():
    rng = np.random.default_rng(4)
    g = np.diag([1.2, 0.8, 1.1, 0.9])
    gp = np.diag([0.7, 1.3, 1.0, 1.0])
    _, _, z = factorization_check_psi((2.0, 0.0), g, gp, 100_000, rng)
    assert z < 3.5


def test_fn_recurrence_matches_closed():
    for s, a in [((2.0, 0.0), (1.0, 2.0)),
                 ((3.0, 1.0), (1.0, 2.0)),
                 ((4.0, 2.0, 0.0), (1.0, 2.0, 3.0))]:
        rec = fn_recurrence(s, a)
        clo = fn_closed(s, a)
        assert abs(rec - clo) / abs(clo) < 1e-6


def test_fn_named_value():
    assert fn_closed((2.0, 0.0), (1.0, 2.0)) == pytest.approx(2.0, rel=1e-12)
    assert fn_recurrence((2.0, 0.0), (1.0, 2.0)) == pytest.approx(
        2.0, rel=1e-9)


def test_fn_limit_closed_form():
    # prod (2j)!/j! / prod 2(s_k - s_l - 1)
    s = (4.0, 0.0)
    expect = (1.0 * 2.0) / (2.0 * 3.0)
    assert fn_limit(s) == pytest.approx(expect, rel=1e-10)


def test_harish_chandra_n1():
    assert harish_chandra_o2n((0.7,), (1.3,)) == pytest.approx(
        np.cosh(0.91), rel=1e-14)


def test_harish_chandra_symmetry():
    x, y = (0.5, 1.0), (0.8, 1.6)
    assert harish_chandra_o2n(x, y) == pytest.approx(
        harish_chandra_o2n(y, x), rel=1e-10)


def test_harish_chandra_zero_is_one():
    assert harish_chandra_o2n((0.0, 0.0), (1.0, 2.0)) == 1.0


def test_harish_chandra_mc():
    rng = np.random.default_rng(6)
    closed = harish_chandra_o2n((0.5, 1.0), (0.8, 1.6))
    mc, se = harish_chandra_o2n_mc((0.5, 1.0), (0.8, 1.6), 200_000, rng)
    assert abs(mc - closed) < 3.5 * se


def test_harish_chandra_degenerate_input():
    val = harish_chandra_o2n((1.0, 1.0), (0.8, 1.6))
    near = harish_chandra_o2n((1.0, 1.0 + 1e-6), (0.8, 1.6))
    assert val == pytest.approx(near, rel=1e-4)


def test_transform_factorizes_under_convolution():
    from antiprod.ensembles import (PolynomialEnsembleSpec, convolve_ensemble,
                                    muttalib_borodin_weights)
    from antiprod.mellin import ginibre_weight
    from antiprod.spherical import (spherical_transform_factor,
                                    spherical_transform_poly)
    gw = ginibre_weight(0.0)
    base = PolynomialEnsembleSpec(2, muttalib_borodin_weights(0.0, 0.0, 2))
    conv = convolve_ensemble(base, gw)
    for sv in [(4.0, 2.0), (6.0, 3.0)]:
        lhs = spherical_transform_poly(conv, sv)
        rhs = spherical_transform_factor(gw, sv) \
            * spherical_transform_poly(base, sv)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_transform_rejects_out_of_strip_parameter():
    from antiprod.ensembles import (PolynomialEnsembleSpec,
                                    muttalib_borodin_weights)
    from antiprod.spherical import spherical_transform_poly
    base = PolynomialEnsembleSpec(2, muttalib_borodin_weights(0.0, 0.0, 2))
    with pytest.raises(DomainError):
        spherical_transform_poly(base, (2.0, 0.0))


def test_isometry_constant_positive():
    for n in (1, 2, 3):
        assert np.isfinite(isometry_log_constant(n))
