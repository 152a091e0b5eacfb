"""Spherical functions on antisymmetric matrices and the real linear group.

Phi is the spherical function on o(2n), Psi its counterpart on Gl(2n, R);
both are ratios/averages of powers of principal-minor determinants over the
Haar measure of O(2n).  The closed form of Phi is an alternant ratio

    Phi(s; a) = (prod_j 2^j j!) det[a_c^(s_b + n - 1)] / (Delta(a^2) Delta(s))

whose degenerate limits (coinciding a or s entries) are evaluated through
confluent divided-difference columns rather than by perturbing the input.
The module also carries the auxiliary kernel f_n, its recursion over the
corank-2 projection density, the Harish-Chandra O(2n) integral, and the
spherical transforms with their exact factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy import special

from .linalg import (DEGENERACY_RTOL, DomainError, SingularSpectrum,
                     build_canonical, haar_orthogonal_batch, spectra_batch,
                     vandermonde_sq)
from .mellin import QuadratureError

__all__ = [
    "SphericalParameter", "phi_closed", "phi_montecarlo", "psi_montecarlo",
    "factorization_check_phi", "factorization_check_psi",
    "fn_closed", "fn_recurrence", "harish_chandra_o2n",
    "harish_chandra_o2n_mc", "isometry_density", "isometry_log_constant",
    "spherical_transform_poly", "spherical_transform_factor",
]

#: Relative gap below which parameter entries count as coincident.
S_DEGENERACY_RTOL = 1e-10

_MC_BLOCK = 100_000


@dataclass(frozen=True)
class SphericalParameter:
    """n-vector of complex exponents s with s_(n+1) = -n - 1 implied."""

    s: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.s, dtype=complex))
        if v.ndim != 1 or v.size == 0:
            raise DomainError("s must be a nonempty vector")
        v.setflags(write=False)
        object.__setattr__(self, "s", v)

    @property
    def n(self) -> int:
        return self.s.size

    @property
    def in_convergence_domain(self) -> bool:
        """Re(s_j - s_(j+1)) >= 2 for all j < n, where the defining Haar
        integrals converge absolutely."""
        d = np.real(self.s[:-1] - self.s[1:])
        return bool(np.all(d >= 2.0 - 1e-12))

    @property
    def is_degenerate(self) -> bool:
        v = self.s
        if v.size < 2:
            return False
        scale = max(np.max(np.abs(v)), 1.0)
        for k in range(v.size):
            for l in range(k + 1, v.size):
                if abs(v[l] - v[k]) <= S_DEGENERACY_RTOL * scale:
                    return True
        return False

    @property
    def exponents(self) -> np.ndarray:
        """Minor exponents e_j = (s_j - s_(j+1))/2 - 1, s_(n+1) = -n - 1."""
        ext = np.append(self.s, -self.n - 1.0)
        return (ext[:-1] - ext[1:]) / 2.0 - 1.0


def _as_param(s) -> SphericalParameter:
    return s if isinstance(s, SphericalParameter) else SphericalParameter(np.asarray(s))


def _as_spectrum(a) -> SingularSpectrum:
    return a if isinstance(a, SingularSpectrum) else SingularSpectrum.from_values(a)


def _expm1c(z):
    """exp(z) - 1 without cancellation, for complex scalar z."""
    x, y = np.real(z), np.imag(z)
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(y / 2.0) ** 2 \
        + 1j * np.exp(x) * np.sin(y)


def _snap_clusters(nodes, rtol):
    """Replace clusters of nodes closer than rtol (relative) by their mean.

    Exact coincidence then routes the divided differences to the analytic
    Taylor columns; the snap itself perturbs by at most rtol relative.
    """
    nodes = np.array(nodes)
    order = np.argsort(nodes.real + 1e-9 * nodes.imag) \
        if np.iscomplexobj(nodes) else np.argsort(nodes)
    nodes = nodes[order]
    scale = max(float(np.max(np.abs(nodes))), 1.0)
    out = nodes.copy()
    i = 0
    while i < len(nodes):
        j = i + 1
        while j < len(nodes) and abs(nodes[j] - nodes[j - 1]) <= rtol * scale:
            j += 1
        if j - i > 1:
            out[i:j] = np.mean(nodes[i:j])
        i = j
    return out, order


def _hermite_divdiff(nodes, value, taylor, dd1=None):
    """Top edge of the Newton divided-difference table for one function.

    nodes must be sorted so that coincident entries are adjacent.
    value(u) evaluates f, taylor(u, m) evaluates f^(m)(u)/m!, dd1(u, v) is an
    optional cancellation-free first difference.  Returns the list
    [f[u_0], f[u_0, u_1], ..., f[u_0 .. u_(N-1)]].
    """
    N = len(nodes)
    col = [value(u) for u in nodes]
    edge = [col[0]]
    for m in range(1, N):
        new = []
        for i in range(N - m):
            lo, hi = nodes[i], nodes[i + m]
            if hi == lo:
                new.append(taylor(lo, m))
            elif m == 1 and dd1 is not None:
                new.append(dd1(lo, hi))
            else:
                new.append((col[i + 1] - col[i]) / (hi - lo))
        col = new
        edge.append(col[0])
    return edge


def _alternant_ratio(nodes, rows):
    """det[f_b(u_c)] / prod_(k<l)(u_l - u_k) via confluent divided differences.

    rows is a list of (value, taylor, dd1) triples, one per matrix row.  The
    ratio is invariant under any simultaneous reordering of the nodes, so the
    nodes may be passed pre-sorted.
    """
    n = len(nodes)
    M = np.empty((n, n), dtype=complex)
    for b, (value, taylor, dd1) in enumerate(rows):
        M[b, :] = _hermite_divdiff(nodes, value, taylor, dd1)
    return complex(np.linalg.det(M))


def _gen_binom(q, m):
    """Generalized binomial coefficient q (q-1) ... (q-m+1) / m!."""
    out = 1.0 + 0.0j
    for i in range(m):
        out *= (q - i) / (i + 1)
    return out


def _power_row(q):
    """Row functions for f(u) = u^q on u > 0 with complex exponent q."""

    def value(u):
        return u ** q

    def taylor(u, m):
        return _gen_binom(q, m) * u ** (q - m)

    def dd1(u, v):
        return u ** q * _expm1c(q * np.log1p((v - u) / u)) / (v - u)

    return value, taylor, dd1


def _exp_row(L):
    """Row functions for f(sigma) = exp(sigma L) over complex nodes sigma."""

    def value(sig):
        return np.exp(sig * L)

    def taylor(sig, m):
        return np.exp(sig * L) * L ** m / factorial(m)

    def dd1(s1, s2):
        return np.exp(s1 * L) * _expm1c((s2 - s1) * L) / (s2 - s1)

    return value, taylor, dd1


def _pairwise_prod(v):
    """prod_(k<l) (v_l - v_k) for a 1-d array, in the given order."""
    out = 1.0 + 0.0j if np.iscomplexobj(v) else 1.0
    for k in range(len(v)):
        out = out * np.prod(v[k + 1:] - v[k])
    return out


def _alternant_core(s: SphericalParameter, a: SingularSpectrum) -> complex:
    """det[a_c^(s_b + n - 1)] / (Delta_n(a^2) Delta_n(s)).

    Delta_n(s) = prod_(k<l)(s_l - s_k) in the order the entries of s are
    given.  Coinciding entries of a (or of s) are resolved by confluent
    divided-difference columns (rows); simultaneous degeneracy in both is
    not supported.
    """
    n = s.n
    if a.n != n:
        raise DomainError("s and a must have the same length")
    if np.any(a.values <= 0):
        raise DomainError("closed form requires strictly positive a")
    a_deg = a.is_degenerate
    s_deg = s.is_degenerate
    if a_deg and s_deg:
        raise DomainError("simultaneous degeneracy in a and s unsupported")
    if s_deg:
        # divided differences across the s entries; rows are exponentials
        # exp((s + n - 1) log a_c) and the ratio det/Delta(s) is invariant
        # under the sort applied to s
        nodes, _ = _snap_clusters(s.s, S_DEGENERACY_RTOL)
        rows = [_exp_row(np.log(ac)) for ac in a.values]
        # absorb the +n-1 shift: a^(s+n-1) = a^(n-1) exp(s log a)
        M = np.empty((n, n), dtype=complex)
        for b, ((value, taylor, dd1), ac) in enumerate(zip(rows, a.values)):
            edge = _hermite_divdiff(list(nodes), value, taylor, dd1)
            M[b, :] = np.asarray(edge) * ac ** (n - 1.0)
        # rows of M are indexed by a_c: det[g_c(s_b)]^T = det[g_c(s_b)]
        ratio = complex(np.linalg.det(M))
        return ratio / _pairwise_prod(a.values.astype(complex) ** 2)
    # divided differences across u = a^2; f_b(u) = u^((s_b + n - 1)/2)
    u_nodes, _ = _snap_clusters(a.values ** 2, DEGENERACY_RTOL)
    q = (s.s + n - 1.0) / 2.0
    rows = [_power_row(qb) for qb in q]
    ratio = _alternant_ratio(list(u_nodes), rows)
    return ratio / _pairwise_prod(s.s)


def _log_prefactor(n: int) -> float:
    """log of prod_(j<n) 2^j j!."""
    return sum(j * np.log(2.0) + special.gammaln(j + 1) for j in range(n))


def phi_closed(s, a) -> complex:
    """Spherical function Phi(s; i a (x) tau_2) in closed form.

    Degenerate spectra (in a or in s) are evaluated through the confluent
    path; in particular the limit a -> (1, ..., 1) returns exactly 1.
    """
    s = _as_param(s)
    a = _as_spectrum(a)
    core = _alternant_core(s, a)
    return complex(np.exp(_log_prefactor(s.n)) * core)


def _phi_closed_batch(s: SphericalParameter, spectra: np.ndarray) -> np.ndarray:
    """phi_closed over a stack of non-degenerate spectra, direct formula.

    Used by the Monte Carlo identity checks where degeneracy has measure
    zero and MC noise dominates any near-cancellation error.
    """
    n = s.n
    a = np.asarray(spectra, dtype=float)
    loga = np.log(a)
    p = s.s + n - 1.0
    # powers[m, b, c] = a_c^(s_b + n - 1)
    powers = np.exp(p[None, :, None] * loga[:, None, :])
    dets = np.linalg.det(powers)
    sq = a * a
    vsq = np.ones(a.shape[0], dtype=float)
    for k in range(n):
        for l in range(k + 1, n):
            vsq *= sq[:, l] - sq[:, k]
    return np.exp(_log_prefactor(n)) * dets / (vsq * _pairwise_prod(s.s))


def _minor_exponent_check(s: SphericalParameter, a_min: float):
    if not s.in_convergence_domain:
        raise DomainError(
            "s outside the convergence domain Re(s_j - s_(j+1)) >= 2; "
            "the closed form is the only evaluator there")
    if a_min < 1e-8 and np.real(s.s[-1]) < 0:
        raise DomainError(
            "Re s_n >= 0 required when the spectrum nearly touches zero")


def _haar_minor_stats(mats, exponents, nsamples, rng, dim):
    """Haar averages of prod_j det(minor_2j)^(e_j) for each matrix in mats.

    All matrices share the same Haar samples.  Returns (means, cov) where
    cov[i][j] = E[F_i conj(F_j)] - E[F_i] conj(E[F_j]) estimated from the
    samples, and the count actually used.
    """
    m = len(mats)
    n = dim // 2
    S1 = np.zeros(m, dtype=complex)
    S2 = np.zeros((m, m), dtype=complex)
    done = 0
    while done < nsamples:
        block = min(_MC_BLOCK, nsamples - done)
        k = haar_orthogonal_batch(dim, block, rng)
        F = np.empty((m, block), dtype=complex)
        for i, mat in enumerate(mats):
            y = k @ mat @ np.swapaxes(k, 1, 2)
            logf = np.zeros(block, dtype=complex)
            for j in range(1, n + 1):
                e = exponents[j - 1]
                if e == 0:
                    continue
                d = np.linalg.det(y[:, :2 * j, :2 * j])
                d = np.maximum(d, 1e-300)
                logf = logf + e * np.log(d)
            F[i] = np.exp(logf)
        S1 += F.sum(axis=1)
        S2 += F @ F.conj().T
        done += block
    mean = S1 / done
    cov = S2 / done - np.outer(mean, mean.conj())
    return mean, cov, done


def phi_montecarlo(s, a, nsamples: int, rng):
    """Monte Carlo estimate of Phi(s; i a (x) tau_2) from its definition.

    The numerator and denominator Haar averages share the same sample set;
    the standard error of the ratio comes from the delta method.
    """
    s = _as_param(s)
    a = _as_spectrum(a)
    if a.n != s.n:
        raise DomainError("s and a must have the same length")
    _minor_exponent_check(s, float(np.min(a.values)))
    x = build_canonical(a).entries
    x1 = build_canonical(SingularSpectrum(np.ones(a.n))).entries
    mean, cov, N = _haar_minor_stats([x, x1], s.exponents, nsamples, rng,
                                     2 * a.n)
    num, den = mean
    r = num / den
    var_resid = (cov[0, 0] + abs(r) ** 2 * cov[1, 1]
                 - 2.0 * np.real(np.conj(r) * cov[0, 1])).real
    stderr = np.sqrt(max(var_resid, 0.0) / N) / abs(den)
    return complex(r), float(stderr)


def psi_montecarlo(s, g, nsamples: int, rng):
    """Monte Carlo estimate of Psi(s; g); exact (zero variance) when the
    integrand is k-independent, e.g. g proportional to the identity."""
    s = _as_param(s)
    ge = g.entries if hasattr(g, "entries") else np.asarray(g, dtype=float)
    if ge.shape[0] != 2 * s.n:
        raise DomainError("dimension of g does not match s")
    m = ge @ ge.T
    mean, cov, N = _haar_minor_stats([m], s.exponents, nsamples, rng,
                                     ge.shape[0])
    stderr = np.sqrt(max(cov[0, 0].real, 0.0) / N)
    return complex(mean[0]), float(stderr)


def factorization_check_phi(s, g, a, nsamples: int, rng):
    """Check E_k Phi(s; g k x k^T g^T) = Psi(s; g) Phi(s; x).

    Returns (lhs, rhs, zscore)."""
    s = _as_param(s)
    a = _as_spectrum(a)
    _minor_exponent_check(s, float(np.min(a.values)))
    ge = g.entries if hasattr(g, "entries") else np.asarray(g, dtype=float)
    x = build_canonical(a).entries
    dim = x.shape[0]
    S1 = 0.0 + 0.0j
    S2 = 0.0
    done = 0
    while done < nsamples:
        block = min(_MC_BLOCK, nsamples - done)
        k = haar_orthogonal_batch(dim, block, rng)
        y = ge @ (k @ x @ np.swapaxes(k, 1, 2)) @ ge.T
        y = (y - np.swapaxes(y, 1, 2)) / 2.0
        vals = _phi_closed_batch(s, spectra_batch(y))
        S1 += vals.sum()
        S2 += float(np.sum(np.abs(vals) ** 2))
        done += block
    lhs = S1 / done
    lhs_se = np.sqrt(max(S2 / done - abs(lhs) ** 2, 0.0) / done)
    psi, psi_se = psi_montecarlo(s, ge, nsamples, rng)
    phi = phi_closed(s, a)
    rhs = psi * phi
    se = np.sqrt(lhs_se ** 2 + (psi_se * abs(phi)) ** 2)
    z = abs(lhs - rhs) / se if se > 0 else 0.0
    return complex(lhs), complex(rhs), float(z)


def factorization_check_psi(s, g, gprime, nsamples: int, rng):
    """Check E_k Psi(s; g k g' g'^T k^T g^T) = Psi(s; g) Psi(s; g').

    The left side is a double Haar average (one k from the identity, one
    from Psi itself), estimated with two independent Haar draws per sample.
    Returns (lhs, rhs, zscore)."""
    s = _as_param(s)
    ge = g.entries if hasattr(g, "entries") else np.asarray(g, dtype=float)
    gpe = gprime.entries if hasattr(gprime, "entries") \
        else np.asarray(gprime, dtype=float)
    dim = ge.shape[0]
    n = s.n
    exps = s.exponents
    inner = gpe @ gpe.T
    S1 = 0.0 + 0.0j
    S2 = 0.0
    done = 0
    while done < nsamples:
        block = min(_MC_BLOCK, nsamples - done)
        k1 = haar_orthogonal_batch(dim, block, rng)
        k2 = haar_orthogonal_batch(dim, block, rng)
        m = ge @ (k1 @ inner @ np.swapaxes(k1, 1, 2)) @ ge.T
        y = k2 @ m @ np.swapaxes(k2, 1, 2)
        logf = np.zeros(block, dtype=complex)
        for j in range(1, n + 1):
            e = exps[j - 1]
            if e == 0:
                continue
            d = np.maximum(np.linalg.det(y[:, :2 * j, :2 * j]), 1e-300)
            logf = logf + e * np.log(d)
        vals = np.exp(logf)
        S1 += vals.sum()
        S2 += float(np.sum(np.abs(vals) ** 2))
        done += block
    lhs = S1 / done
    lhs_se = np.sqrt(max(S2 / done - abs(lhs) ** 2, 0.0) / done)
    p1, se1 = psi_montecarlo(s, ge, nsamples, rng)
    p2, se2 = psi_montecarlo(s, gpe, nsamples, rng)
    rhs = p1 * p2
    se = np.sqrt(lhs_se ** 2 + (se1 * abs(p2)) ** 2 + (se2 * abs(p1)) ** 2)
    z = abs(lhs - rhs) / se if se > 0 else 0.0
    return complex(lhs), complex(rhs), float(z)


def _cn_constant(s: SphericalParameter) -> complex:
    """c_n(s) = prod_(j<n) (2j)! / (Delta_n(s) prod_(k<l)(s_k - s_l - 1)).

    The sign follows the recursion and the a -> 1 limit of the closed form
    (Phi normalizes to 1); see the repository notes for the derivation.
    """
    n = s.n
    num = np.prod([float(factorial(2 * j)) for j in range(n)])
    den = _pairwise_prod(s.s)
    for k in range(n):
        for l in range(k + 1, n):
            den *= s.s[k] - s.s[l] - 1.0
    return num / den


def fn_closed(s, a) -> complex:
    """Auxiliary kernel f_n(s; i a (x) tau_2) = c_n(s) det[a^(s+n-1)]/Delta(a^2)."""
    s = _as_param(s)
    a = _as_spectrum(a)
    n = s.n
    core = _alternant_core(s, a)  # det / (Delta(a^2) Delta(s))
    num = np.prod([float(factorial(2 * j)) for j in range(n)])
    den = 1.0 + 0.0j
    for k in range(n):
        for l in range(k + 1, n):
            den *= s.s[k] - s.s[l] - 1.0
    return complex(num * core / den)


def fn_limit(s) -> complex:
    """lim_(a -> 1) f_n(s; i a (x) tau_2), through the confluent path."""
    s = _as_param(s)
    n = s.n
    ones = SingularSpectrum(np.ones(n))
    return fn_closed(s, ones)


def fn_recurrence(s, a, points_per_cell: int = 24, rtol: float = 1e-7) -> complex:
    """f_n through the corank-2 projection recursion, by cell quadrature.

    The (n-1)-fold integral couples the projection density with the closed
    form of f_(n-1); the two antisymmetric Vandermonde factors in the
    integrand cancel analytically, so the quadrature never divides by a
    small gap.  Cells are cut at the singular values (where the integrand
    kinks) and the lowest cell is refined geometrically toward 0 to resolve
    the algebraic endpoint power.
    """
    s = _as_param(s)
    a = _as_spectrum(a)
    n = s.n
    if n < 2:
        raise DomainError("the recursion starts at n = 2")
    if not s.in_convergence_domain:
        raise DomainError("recursion requires the convergence domain")
    if a.is_degenerate or np.any(a.values <= 0):
        raise DomainError("recursion requires non-degenerate positive a")
    av = a.values
    s_shift = s.s[:-1] - s.s[-1] - n          # parameter of f_(n-1)
    p = s_shift + (n - 1) - 1.0               # alternant exponents, size n-1
    # the Vandermonde of the inner spectrum cancels between the projection
    # density and the closed form of f_(n-1); what survives of c_(n-1) is
    num = np.prod([float(factorial(2 * j)) for j in range(n - 1)])
    den = _pairwise_prod(s_shift)
    for k in range(n - 1):
        for l in range(k + 1, n - 1):
            den *= s_shift[k] - s_shift[l] - 1.0
    c_factor = num / den

    def integral(npts):
        # 1-d cell decomposition shared by every coordinate
        brk = np.concatenate([[0.0], av])
        cells = []
        # refine (0, a_1) geometrically toward 0
        lo, hi = brk[0], brk[1]
        edges = [hi]
        t = hi
        for _ in range(12):
            t *= 0.2
            edges.append(t)
        edges.append(0.0)
        edges = edges[::-1]
        cells.extend(zip(edges[:-1], edges[1:]))
        for i in range(1, n):
            cells.append((brk[i], brk[i + 1]))
        nodes, wts = np.polynomial.legendre.leggauss(npts)
        xs, ws = [], []
        for lo, hi in cells:
            half = (hi - lo) / 2.0
            xs.append((hi + lo) / 2.0 + half * nodes)
            ws.append(half * wts)
        xs = np.concatenate(xs)
        ws = np.concatenate(ws)
        d = n - 1
        grids = np.meshgrid(*([xs] * d), indexing="ij")
        wgrids = np.meshgrid(*([ws] * d), indexing="ij")
        X = np.stack([g.ravel() for g in grids], axis=-1)     # (M, d)
        W = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
        total = 0.0 + 0.0j
        chunk = 200_000
        for start in range(0, X.shape[0], chunk):
            Xc = X[start:start + chunk]
            Wc = W[start:start + chunk]
            m = Xc.shape[0]
            # det[ones row; (a_c - x_b) Theta], size n x n
            D1 = np.empty((m, n, n))
            D1[:, 0, :] = 1.0
            diff = av[None, None, :] - Xc[:, :, None]
            D1[:, 1:, :] = np.where(diff > 0.0, diff, 0.0)
            det1 = np.linalg.det(D1)
            # det[x_b^(p_l)], size d x d
            logx = np.log(Xc)
            D2 = np.exp(p[None, :, None] * logx[:, None, :])
            det2 = np.linalg.det(D2)
            total += np.sum(Wc * det1 * det2)
        return total

    I1 = integral(points_per_cell)
    I2 = integral(points_per_cell + 10)
    err = abs(I2 - I1) / max(abs(I2), 1e-300)
    if err > rtol:
        raise QuadratureError(
            f"recursion quadrature achieved relative error {err:.2e}, "
            f"above {rtol:.1e}", value=I2, error=err)
    pref = float(factorial(2 * n - 2)) / float(factorial(n - 1))
    det_a = float(np.prod(av))
    vand = vandermonde_sq(a)
    norm = pref * det_a ** complex(s.s[-1] + n - 1) * c_factor / vand
    return complex(norm * I2)


# Harish-Chandra integral over O(2n)

def _cosh_row(x):
    """Row functions for f(u) = cosh(x sqrt(u)) on u >= 0."""

    def value(u):
        return np.cosh(x * np.sqrt(u))

    def taylor(u, m):
        if u == 0.0:
            return x ** (2 * m) / float(factorial(2 * m))
        # represent d^m/du^m as a combination of cosh/sinh times powers of
        # r = sqrt(u); differentiation rule d/du = (1/(2r)) d/dr
        terms = {("C", 0): 1.0}
        for _ in range(m):
            new = {}
            for (kind, k), c in terms.items():
                other = "S" if kind == "C" else "C"
                new[(other, k + 1)] = new.get((other, k + 1), 0.0) \
                    + c * x / 2.0
                new[(kind, k + 2)] = new.get((kind, k + 2), 0.0) \
                    - c * k / 2.0
            terms = new
        r = np.sqrt(u)
        C, S = np.cosh(x * r), np.sinh(x * r)
        out = 0.0
        for (kind, k), c in terms.items():
            out += c * (C if kind == "C" else S) * r ** (-k)
        return out / float(factorial(m))

    def dd1(u, v):
        r1, r2 = np.sqrt(u), np.sqrt(v)
        return 2.0 * np.sinh(x * (r1 + r2) / 2.0) \
            * np.sinh(x * (v - u) / (2.0 * (r1 + r2))) / (v - u)

    return value, taylor, dd1


def harish_chandra_o2n(x, y) -> float:
    """Closed form of the Haar average of exp(Tr X k Y k^T / 2) over O(2n).

    x and y are the singular spectra of the two antisymmetric matrices.
    Coinciding entries in one of the spectra are handled by the confluent
    path; an all-zero spectrum returns 1 exactly.
    """
    x = _as_spectrum(x)
    y = _as_spectrum(y)
    n = x.n
    if y.n != n:
        raise DomainError("spectra must have equal length")
    if np.all(x.values == 0.0) or np.all(y.values == 0.0):
        return 1.0
    pref = np.prod([float(factorial(2 * k)) for k in range(n)])
    if x.is_degenerate and y.is_degenerate:
        raise DomainError("simultaneous degeneracy in x and y unsupported")
    if x.is_degenerate:
        x, y = y, x
    # divided differences across u = y^2; rows are cosh(x_i sqrt(u))
    u_nodes, _ = _snap_clusters(y.values ** 2, DEGENERACY_RTOL)
    rows = [_cosh_row(xi) for xi in x.values]
    M = np.empty((n, n), dtype=float)
    for b, (value, taylor, dd1) in enumerate(rows):
        M[b, :] = _hermite_divdiff(list(u_nodes), value, taylor, dd1)
    det_dd = float(np.linalg.det(M))
    return pref * det_dd / float(_pairwise_prod(x.values ** 2).real)


def harish_chandra_o2n_mc(x, y, nsamples: int, rng):
    """Monte Carlo counterpart: Haar average of exp(Tr X k Y k^T / 2)."""
    x = _as_spectrum(x)
    y = _as_spectrum(y)
    X = build_canonical(x).entries
    Y = build_canonical(y).entries
    dim = X.shape[0]
    S1 = 0.0
    S2 = 0.0
    done = 0
    while done < nsamples:
        block = min(_MC_BLOCK, nsamples - done)
        k = haar_orthogonal_batch(dim, block, rng)
        kyk = k @ Y @ np.swapaxes(k, 1, 2)
        tr = np.einsum("ij,sji->s", X, kyk)
        vals = np.exp(tr / 2.0)
        S1 += vals.sum()
        S2 += float(np.sum(vals ** 2))
        done += block
    mean = S1 / done
    stderr = np.sqrt(max(S2 / done - mean ** 2, 0.0) / done)
    return float(mean), float(stderr)


def isometry_log_constant(n: int) -> float:
    """log C with C = (1/n!) prod_(j<n) 2 (2 pi)^(2j) / (2j)!."""
    out = -special.gammaln(n + 1)
    for j in range(n):
        out += np.log(2.0) + 2 * j * np.log(2.0 * np.pi) \
            - special.gammaln(2 * j + 1)
    return float(out)


def isometry_density(a, f_H) -> float:
    """Spectral density C Delta_n^2(a^2) f_H(i a (x) tau_2).

    f_H takes the 2n x 2n matrix entries and returns the matrix density.
    """
    a = _as_spectrum(a)
    x = build_canonical(a).entries
    vsq = vandermonde_sq(a)
    return float(np.exp(isometry_log_constant(a.n)) * vsq * vsq * f_H(x))


def spherical_transform_poly(spec, s) -> complex:
    """Transform of a polynomial ensemble: alternant of Mellin values.

    S_Phi(s) = n! (prod 2^j j!) C_n[w] det[M w_c(s_b - n + 1)] / Delta_n(s).
    """
    s = _as_param(s)
    n = s.n
    if spec.n != n:
        raise DomainError("parameter length does not match ensemble size")
    M = np.empty((n, n), dtype=complex)
    for b in range(n):
        arg = s.s[b] - n + 1.0
        for c in range(n):
            M[b, c] = spec.weights[c].mellin(arg)
    if not np.all(np.isfinite(M)):
        raise DomainError(
            "transform parameter outside the Mellin strip of the weights")
    det = complex(np.linalg.det(M))
    pref = float(special.gamma(n + 1)) * np.exp(_log_prefactor(n))
    return pref * spec.norm_constant * det / _pairwise_prod(s.s)


def spherical_transform_factor(factor, s) -> complex:
    """Transform of a factorizing ensemble:
    S_Psi(s) = prod_j M A(s_j - n + 1) / M A(2j - 1)."""
    s = _as_param(s)
    n = s.n
    out = 1.0 + 0.0j
    for j in range(1, n + 1):
        out *= factor.mellin(s.s[j - 1] - n + 1.0) / factor.mellin(2 * j - 1.0)
    if not np.isfinite(out):
        raise DomainError(
            "transform parameter outside the Mellin strip of the factor")
    return complex(out)
