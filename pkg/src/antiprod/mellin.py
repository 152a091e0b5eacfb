"""Univariate Mellin transforms, multiplicative convolution, and the
determinant-modulus weight catalogue.

A 2x2 factor ensemble acts on spectral densities through the density of
sqrt(det z z^T), called A(a) here.  All catalogued densities are normalized
so that their Mellin transform at s = 1 equals 1, i.e. they are probability
densities of the determinant modulus.  The Mellin transform diagonalizes the
multiplicative convolution, M[f (*) h] = Mf * Mh, which is what makes the
closed forms downstream possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npp
from scipy import integrate, special, stats

from .linalg import DomainError

__all__ = [
    "WeightFunction", "FactorizingWeight", "QuadratureError",
    "mellin_numeric", "mellin_convolve", "a_sigma", "a_sigma_custom",
    "ginibre_weight", "jacobi_weight", "ConvolvedDensity",
]

#: Argument beyond which an exponentially decaying density is treated as zero.
TAIL_CUT = 800.0


class QuadratureError(ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class WeightFunction:
    """Weight w on the positive half line with a Mellin evaluator.

    The Mellin handle is exact where a closed form exists, otherwise it
    falls back to quadrature of the density.
    """

    density: Callable
    mellin: Callable
    support: tuple
    label: str = "w"

    def __call__(self, a):
        return self.density(a)

    @property
    def tail(self) -> float:
        hi = self.support[1]
        return hi if np.isfinite(hi) else TAIL_CUT


@dataclass(frozen=True)
class FactorizingWeight:
    """Determinant-modulus density A of a 2x2 factor ensemble.

    Parameters
    ----------
    kind : {"ginibre", "jacobi", "custom"}
    density : callable
        A(a), normalized so that M A(1) = 1.  For the catalogued kinds the
        callable also accepts complex arguments (the analytic continuation
        used by the double-contour kernel).
    mellin : callable
        s -> M A(s), exact for catalogued kinds.
    support : (lo, hi)
    smoothness : int
        Number of available derivatives of the density.
    params : dict
    """

    kind: str
    density: Callable
    mellin: Callable
    support: tuple
    smoothness: int
    params: dict = field(default_factory=dict)
    _deriv: Callable = None

    def __call__(self, a):
        return self.density(a)

    @property
    def tail(self) -> float:
        hi = self.support[1]
        return hi if np.isfinite(hi) else TAIL_CUT

    def density_deriv(self, a, k: int):
        """k-th derivative of the density at a > 0."""
        if k == 0:
            return self.density(a)
        if self._deriv is None or k > self.smoothness:
            raise DomainError(
                f"{self.kind} weight provides {self.smoothness} derivatives, "
                f"requested {k}")
        return self._deriv(a, k)

    def neg_xdx_pow(self, a, m: int):
        """((-a d/da)^m A)(a), the degenerate-limit column operator."""
        if m == 0:
            return self.density(a)
        if m > self.smoothness:
            raise DomainError(
                f"operator order {m} exceeds smoothness {self.smoothness}")
        # expand in the algebra a^p * A^(k)(a): (-a d/da) maps
        # a^p A^(k) -> -p a^p A^(k) - a^(p+1) A^(k+1)
        terms = {(0, 0): 1.0}
        for _ in range(m):
            new = {}
            for (p, k), c in terms.items():
                new[(p, k)] = new.get((p, k), 0.0) - p * c
                new[(p + 1, k + 1)] = new.get((p + 1, k + 1), 0.0) - c
            terms = new
        a = np.asarray(a, dtype=float)
        out = np.zeros_like(a, dtype=float)
        for (p, k), c in terms.items():
            if c != 0.0:
                out = out + c * a ** p * self.density_deriv(a, k)
        return out


def _log_beta(x, y):
    return special.loggamma(x) + special.loggamma(y) - special.loggamma(x + y)


def ginibre_weight(nu: float) -> FactorizingWeight:
    """Determinant-modulus density of the induced real Ginibre factor.

    A(a) = a^(2 nu) e^(-a) / Gamma(1 + 2 nu) on (0, inf), with exact Mellin
    transform Gamma(s + 2 nu) / Gamma(1 + 2 nu).
    """
    if nu <= -0.5:
        raise DomainError("ginibre weight requires nu > -1/2")
    two_nu = 2.0 * nu
    lognorm = special.loggamma(1.0 + two_nu)

    def density(a):
        a = np.asarray(a)
        if np.iscomplexobj(a):
            return a ** two_nu * np.exp(-a - lognorm)
        a = a.astype(float)
        out = np.zeros_like(a)
        pos = a > 0
        with np.errstate(divide="ignore", over="ignore"):
            out[pos] = np.exp(two_nu * np.log(a[pos]) - a[pos] - lognorm)
        if two_nu == 0.0:
            out[a == 0] = np.exp(-lognorm)
        return out if out.ndim else float(out)

    def mellin(s):
        s = np.asarray(s, dtype=complex)
        val = np.exp(special.loggamma(s + two_nu) - lognorm)
        return val if val.ndim else complex(val)

    # derivative of a^(2nu) e^(-a): polynomial recursion in front of
    # a^(2nu - k) e^(-a)
    polys = [npp.Polynomial([1.0])]

    def _extend(k):
        while len(polys) <= k:
            j = len(polys) - 1
            q = polys[j]
            x = npp.Polynomial([0.0, 1.0])
            polys.append((two_nu - j) * q + x * q.deriv() - x * q)

    def deriv(a, k):
        _extend(k)
        a = np.asarray(a, dtype=float)
        return polys[k](a) * np.exp((two_nu - k) * np.log(a) - a - lognorm)

    return FactorizingWeight(
        kind="ginibre", density=density, mellin=mellin,
        support=(0.0, np.inf), smoothness=64,
        params={"nu": nu}, _deriv=deriv)


def jacobi_weight(nu: float, mu: float, n: int) -> FactorizingWeight:
    """Determinant-modulus density of the induced real Jacobi factor.

    A(a) = a^(2 nu) (1 - a)^(2 (mu + n)) / B(1 + 2 nu, 2 mu + 2 n + 1) on
    (0, 1), with exact Mellin transform a ratio of Beta functions.
    """
    if nu <= -0.5:
        raise DomainError("jacobi weight requires nu > -1/2")
    if mu <= -n - 0.5:
        raise DomainError("jacobi weight requires mu > -n - 1/2")
    two_nu = 2.0 * nu
    beta = 2.0 * (mu + n)
    lognorm = _log_beta(1.0 + two_nu, beta + 1.0)

    def density(a):
        a = np.asarray(a)
        if np.iscomplexobj(a):
            return a ** two_nu * (1.0 - a) ** beta * np.exp(-lognorm)
        a = a.astype(float)
        out = np.zeros_like(a)
        ok = (a > 0) & (a < 1)
        with np.errstate(divide="ignore"):
            out[ok] = np.exp(two_nu * np.log(a[ok])
                             + beta * np.log1p(-a[ok]) - lognorm)
        return out if out.ndim else float(out)

    def mellin(s):
        s = np.asarray(s, dtype=complex)
        val = np.exp(_log_beta(s + two_nu, beta + 1.0) - lognorm)
        return val if val.ndim else complex(val)

    polys = [npp.Polynomial([1.0])]

    def _extend(k):
        while len(polys) <= k:
            j = len(polys) - 1
            r = polys[j]
            x = npp.Polynomial([0.0, 1.0])
            one_m_x = npp.Polynomial([1.0, -1.0])
            polys.append((two_nu - j) * one_m_x * r - (beta - j) * x * r
                         + x * one_m_x * r.deriv())

    def deriv(a, k):
        _extend(k)
        a = np.asarray(a, dtype=float)
        return polys[k](a) * np.exp((two_nu - k) * np.log(a)
                                    + (beta - k) * np.log1p(-a) - lognorm)

    return FactorizingWeight(
        kind="jacobi", density=density, mellin=mellin,
        support=(0.0, 1.0), smoothness=64,
        params={"nu": nu, "mu": mu, "n": n}, _deriv=deriv)


def a_sigma(kind: str, **params) -> FactorizingWeight:
    """Catalogue lookup: kind 'ginibre' (nu) or 'jacobi' (nu, mu, n)."""
    if kind == "ginibre":
        return ginibre_weight(params["nu"])
    if kind == "jacobi":
        return jacobi_weight(params["nu"], params["mu"], params["n"])
    raise DomainError(f"unknown factorizing weight kind {kind!r}")


def a_sigma_custom(sampler2x2: Callable, rng, nsamples: int = 100_000,
                   bw_method=None) -> FactorizingWeight:
    """Determinant-modulus density of a custom 2x2 ensemble, estimated by MC.

    sampler2x2(rng) must return one 2x2 real matrix draw.  The density of
    |det z| is estimated with a Gaussian kernel density in log |det z|;
    intended for exploratory factors only (smoothness 0, quadrature Mellin).
    """
    dets = np.empty(nsamples)
    for i in range(nsamples):
        z = sampler2x2(rng)
        dets[i] = abs(z[0, 0] * z[1, 1] - z[0, 1] * z[1, 0])
    dets = dets[dets > 0]
    span = np.log(dets.max() / dets.min())
    if dets.size / max(span / np.log(10.0), 1.0) < 1e3:
        import warnings
        warnings.warn("custom factor under-resolved: fewer than 1e3 "
                      "effective samples per decade")
    kde = stats.gaussian_kde(np.log(dets), bw_method=bw_method)
    lo, hi = dets.min() * 0.5, dets.max() * 2.0

    def density(a):
        a = np.asarray(a, dtype=float)
        out = np.zeros_like(a)
        ok = (a >= lo) & (a <= hi)
        # density of a from the kde of log a
        out[ok] = kde(np.log(a[ok])) / a[ok]
        return out if out.ndim else float(out)

    def mellin(s):
        return mellin_numeric(density, s, support=(lo, hi))

    return FactorizingWeight(
        kind="custom", density=density, mellin=mellin,
        support=(lo, hi), smoothness=0, params={"nsamples": int(nsamples)})


def _support_of(f):
    if hasattr(f, "support"):
        return f.support
    return (0.0, np.inf)


def _tail_of(f):
    if hasattr(f, "tail"):
        return f.tail
    hi = _support_of(f)[1]
    return hi if np.isfinite(hi) else TAIL_CUT


def mellin_numeric(f, s, support=None, rtol=1e-10) -> complex:
    """M f(s) = int_0^inf f(a) a^(s-1) da by adaptive quadrature.

    The integral is split at a = 1 and both pieces are integrated in the
    log variable, which resolves algebraic endpoint behaviour at 0.
    """
    if support is None:
        support = _support_of(f)
    dens = f.density if hasattr(f, "density") else f
    lo, hi = support
    hi_eff = min(hi, _tail_of(f) if hasattr(f, "tail") else TAIL_CUT)
    lo_eff = max(lo, 1e-280)
    s = complex(s)

    def piece(t_lo, t_hi):
        if t_lo >= t_hi:
            return 0.0
        # substitute a = e^t: integrand f(e^t) e^(st)
        def re(t):
            a = np.exp(t)
            return float(np.real(dens(a) * np.exp(s * t)))

        def im(t):
            a = np.exp(t)
            return float(np.imag(dens(a) * np.exp(s * t)))

        vr, er = integrate.quad(re, np.log(t_lo), np.log(t_hi), limit=400,
                                epsabs=1e-13, epsrel=1e-11)
        vi, ei = integrate.quad(im, np.log(t_lo), np.log(t_hi), limit=400,
                                epsabs=1e-13, epsrel=1e-11)
        scale = max(abs(vr) + abs(vi), 1e-300)
        if (er + ei) / scale > max(rtol, 1e-13) * 1e3 and er + ei > 1e-12:
            raise QuadratureError(
                f"Mellin quadrature error {er + ei:.2e} above tolerance",
                value=vr + 1j * vi, error=er + ei)
        return vr + 1j * vi

    mid = min(max(1.0, 2.0 * lo_eff), hi_eff)
    val = piece(lo_eff, mid) + piece(mid, hi_eff)
    return val


def mellin_convolve(f, h, y: float, rtol=1e-8) -> float:
    """(f (*) h)(y) = int f(t) h(y/t) dt/t by adaptive quadrature in log t."""
    if y <= 0:
        raise DomainError("convolution argument must be positive")
    f_lo, f_hi = _support_of(f)
    h_lo, h_hi = _support_of(h)
    fd = f.density if hasattr(f, "density") else f
    hd = h.density if hasattr(h, "density") else h
    t_lo = max(f_lo, y / min(h_hi, np.inf) if np.isfinite(h_hi) else 0.0,
               y / _tail_of(h), 1e-280)
    t_hi = min(f_hi, _tail_of(f))
    if np.isfinite(h_lo) and h_lo > 0:
        t_hi = min(t_hi, y / h_lo)
    if t_lo >= t_hi:
        return 0.0

    def integrand(tau):
        t = np.exp(tau)
        return float(fd(t) * hd(y / t))

    val, err = integrate.quad(integrand, np.log(t_lo), np.log(t_hi),
                              limit=400, epsabs=1e-12, epsrel=1e-10)
    if err > max(rtol * max(abs(val), 1.0), 1e-11):
        raise QuadratureError(
            f"convolution quadrature error {err:.2e} above tolerance",
            value=val, error=err)
    return val


class ConvolvedDensity:
    """Mellin convolution of a factor density with a weight, tabulated once.

    The convolution is evaluated with fixed Gauss-Legendre quadrature in
    log t on a geometric grid in y (512 points per decade) and interpolated
    with a cubic spline in log y.  Below the grid the density follows the
    power law fitted to the first grid points; outside the support it is 0.
    """

    GRID_PER_DECADE = 512
    GL_NODES = 400

    def __init__(self, factor, weight, y_lo=None, y_hi=None):
        self.factor = factor
        self.weight = weight
        f_lo, f_hi = _support_of(factor)
        w_lo, w_hi = _support_of(weight)
        self.support = (f_lo * w_lo, f_hi * w_hi)
        self._y_lo = 1e-7 if y_lo is None else y_lo
        hi = _tail_of(factor) * _tail_of(weight)
        self._y_hi = hi if y_hi is None else y_hi
        self._spline = None
        self._slope = 0.0

    def _build(self):
        from scipy.interpolate import CubicSpline
        fd = self.factor.density if hasattr(self.factor, "density") \
            else self.factor
        wd = self.weight.density if hasattr(self.weight, "density") \
            else self.weight
        f_lo, _ = _support_of(self.factor)
        w_lo, _ = _support_of(self.weight)
        f_tail = _tail_of(self.factor)
        w_tail = _tail_of(self.weight)
        ndec = np.log10(self._y_hi / self._y_lo)
        ny = int(np.ceil(ndec * self.GRID_PER_DECADE)) + 1
        logy = np.linspace(np.log(self._y_lo), np.log(self._y_hi), ny)
        y = np.exp(logy)
        # per-y integration window in log t
        t_lo = np.maximum(np.maximum(f_lo, y / w_tail), 1e-280)
        t_hi = np.full_like(y, f_tail)
        if w_lo > 0:
            t_hi = np.minimum(t_hi, y / w_lo)
        ok = t_hi > t_lo
        nodes, wts = np.polynomial.legendre.leggauss(self.GL_NODES)
        vals = np.zeros(ny)
        a = np.log(t_lo[ok])
        b = np.log(t_hi[ok])
        half = (b - a) / 2.0
        mid = (b + a) / 2.0
        tau = mid[:, None] + half[:, None] * nodes[None, :]
        t = np.exp(tau)
        integ = fd(t) * wd(y[ok, None] / t)
        vals[ok] = (integ * wts[None, :]).sum(axis=1) * half
        vals = np.maximum(vals, 0.0)
        self._grid_logy = logy
        self._grid_vals = vals
        self._spline = CubicSpline(logy, vals)
        # power-law continuation below the grid
        i0 = np.argmax(vals > 0)
        i1 = i0 + 8
        if vals[i0] > 0 and i1 < ny and vals[i1] > 0:
            self._slope = (np.log(vals[i1]) - np.log(vals[i0])) \
                / (logy[i1] - logy[i0])
            self._anchor = (logy[i0], vals[i0])
        else:
            self._anchor = None

    def __call__(self, y):
        if self._spline is None:
            self._build()
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        out = np.zeros_like(y)
        lo, hi = self.support
        inside = (y > 0) & (y < hi if np.isfinite(hi) else y > 0)
        logy = np.where(y > 0, np.log(np.maximum(y, 1e-300)), 0.0)
        on_grid = inside & (logy >= self._grid_logy[0]) \
            & (logy <= self._grid_logy[-1])
        out[on_grid] = np.maximum(self._spline(logy[on_grid]), 0.0)
        below = inside & (logy < self._grid_logy[0])
        if np.any(below) and self._anchor is not None:
            l0, v0 = self._anchor
            out[below] = v0 * np.exp(self._slope * (logy[below] - l0))
        return float(out[0]) if scalar else out

    def mellin(self, s):
        mf = self.factor.mellin if hasattr(self.factor, "mellin") else None
        mw = self.weight.mellin if hasattr(self.weight, "mellin") else None
        if mf is None or mw is None:
            raise DomainError("exact Mellin handles unavailable")
        return mf(s) * mw(s)
