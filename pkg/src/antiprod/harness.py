"""Experiment orchestration: Monte Carlo versus analytic comparisons.

Every experiment is described by an ExperimentConfig and produces a
TestReport with the statistics, per-bin tables and a pass/fail verdict.
Reports are emitted as CSV or JSON-lines tables plus a plain-text summary;
emitted bytes are deterministic for fixed (config, seed), so re-running a
suite reproduces the artifacts exactly (wall-clock stays in memory only).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from scipy import special, stats

from . import __version__
from .linalg import (DomainError, SingularSpectrum, build_canonical,
                     haar_orthogonal_batch, spectra_batch)
from .mellin import (FactorizingWeight, a_sigma, ginibre_weight,
                     jacobi_weight, mellin_numeric)
from .ensembles import (PolynomialEnsembleSpec, corank2_jpdf,
                        fixed_base_weights, jpdf_degenerate, jpdf_fixed,
                        muttalib_borodin_weights, product_weights)
from .samplers import (GinibreSpec, JacobiSpec, ProductSpec,
                       build_product_batch)
from . import spherical as sph

__all__ = [
    "SCHEMA_VERSION", "ExperimentConfig", "TestReport",
    "run_spectrum_experiment", "run_corank2_experiment",
    "run_prop45_check", "prop45_distribution_check",
    "run_spherical_suite", "run_kernel_suite", "run_mellin_suite",
    "run_suite", "emit_results",
]

#: Config/output schema identifier embedded in every artifact.
SCHEMA_VERSION = "antiprod/1"

_CSV_HEADER = "bin_lo,bin_hi,empirical,analytic,zscore"


@dataclass
class ExperimentConfig:
    """Resolved description of one experiment run."""

    kind: str
    params: dict = field(default_factory=dict)
    nsamples: int = 100_000
    seed: int = 0
    bins: int = 50
    tolerances: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.seed is None:
            raise DomainError("seed is mandatory")
        if any(v <= 0 for v in self.tolerances.values()):
            raise DomainError("tolerances must be positive")

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def resolved(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        d["version"] = __version__
        return d


@dataclass
class TestReport:
    """Statistics, per-bin table and verdict of one experiment."""

    __test__ = False  # not a pytest collectible

    name: str
    passed: bool
    statistics: dict
    rows: list = field(default_factory=list)
    nsamples: int = 0
    config: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    wall_clock: float = 0.0


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _factor_from_params(params: dict):
    """(FactorizingWeight, sampler spec) from a config params mapping."""
    kind = params.get("factor", "ginibre")
    n = int(params["n"])
    if kind == "ginibre":
        nu = float(params.get("nu", 0.0))
        return ginibre_weight(nu), GinibreSpec(n, nu)
    if kind == "jacobi":
        N = int(params.get("N", n))
        K1 = int(params.get("K1", 2 * (n + N) + 1))
        spec = JacobiSpec(n, N, K1)
        return jacobi_weight(spec.nu, spec.mu, n), spec
    raise DomainError(f"unknown factor kind {kind!r}")


def _grid_cdf(density, lo: float, hi: float, npts: int = 8192):
    """(grid, pdf, cdf) tables of a 1-D density by trapezoid accumulation."""
    eps = max(lo, 1e-12)
    x = np.linspace(eps, hi, npts)
    p = np.asarray([float(density(v)) for v in x]) \
        if not _vectorized(density) else np.asarray(density(x), dtype=float)
    c = np.concatenate([[0.0], np.cumsum((p[1:] + p[:-1]) / 2.0 * np.diff(x))])
    return x, p, c


def _vectorized(f) -> bool:
    try:
        out = f(np.array([0.5, 0.6]))
        return np.shape(out) == (2,)
    except Exception:
        return False


def _quad_mass(density, support) -> float:
    """Total mass of a 1-D density by adaptive quadrature."""
    from scipy import integrate
    lo, hi = support
    hi = hi if np.isfinite(hi) else 800.0
    val, _ = integrate.quad(
        lambda v: float(np.atleast_1d(density(v))[0]),
        max(lo, 1e-12), hi, limit=400, epsabs=1e-12, epsrel=1e-12)
    return float(val)


def _binned_comparison(samples: np.ndarray, density, support, bins: int):
    """Equal-probability binning of samples under an analytic density.

    Returns (rows, ks, chi2_stat, chi2_pvalue, norm) where rows are
    (bin_lo, bin_hi, empirical fraction, analytic fraction, zscore) and
    norm is the quadrature mass of the density (should be 1).
    """
    lo, hi = support
    hi_eff = min(hi, max(float(np.max(samples)) * 1.25, 1.0))
    x, _, c = _grid_cdf(density, lo, hi_eff)
    norm = float(c[-1])
    cdf = c / norm
    # inverse CDF at equal-probability levels
    levels = np.linspace(0.0, 1.0, bins + 1)
    edges = np.interp(levels, cdf, x)
    edges[0] = lo
    edges[-1] = hi_eff if np.isfinite(hi) else np.inf
    ecdf_x = np.sort(samples)
    N = ecdf_x.size
    f_at = np.interp(ecdf_x, x, cdf, left=0.0, right=1.0)
    ks = float(np.max(np.maximum(np.arange(1, N + 1) / N - f_at,
                                 f_at - np.arange(N) / N)))
    counts, _ = np.histogram(samples, bins=edges)
    expected = np.full(bins, N / bins)
    # merge underpopulated bins into their left neighbor before chi-square
    cts, exps, spans = [], [], []
    for i in range(bins):
        if exps and exps[-1] < 5.0:
            cts[-1] += counts[i]
            exps[-1] += expected[i]
            spans[-1] = (spans[-1][0], edges[i + 1])
        else:
            cts.append(int(counts[i]))
            exps.append(float(expected[i]))
            spans.append((edges[i], edges[i + 1]))
    cts, exps = np.asarray(cts, dtype=float), np.asarray(exps)
    z = (cts - exps) / np.sqrt(exps)
    chi2 = float(np.sum(z * z))
    pval = float(stats.chi2.sf(chi2, len(cts) - 1))
    rows = [(s[0], s[1], ct / N, ex / N, zz)
            for s, ct, ex, zz in zip(spans, cts, exps, z)]
    return rows, ks, chi2, pval, norm


def _pooled_marginal(spec: PolynomialEnsembleSpec):
    """Density of one pooled spectrum entry of a polynomial ensemble (n <= 2)."""
    n = spec.n
    if n == 1:
        w = spec.weights[0]
        c = float(spec.norm_constant)

        def density(y):
            return c * np.asarray(w.density(y), dtype=float)

        return density, spec.support
    if n != 2:
        raise DomainError("quadrature marginal implemented for n <= 2")
    w1, w2 = spec.weights
    c = float(spec.norm_constant)
    lo, hi = spec.support
    hi_eff = hi if np.isfinite(hi) else min(w.tail for w in spec.weights) * 1.0
    nodes, wts = np.polynomial.legendre.leggauss(600)
    xx = (hi_eff - lo) / 2.0 * nodes + (hi_eff + lo) / 2.0
    ww = (hi_eff - lo) / 2.0 * wts
    w1x = np.asarray(w1.density(xx), dtype=float)
    w2x = np.asarray(w2.density(xx), dtype=float)

    def density(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        d = (xx[None, :] ** 2 - y[:, None] ** 2) \
            * (np.asarray(w1.density(y))[:, None] * w2x[None, :]
               - w1x[None, :] * np.asarray(w2.density(y))[:, None])
        out = c * (d * ww[None, :]).sum(axis=1)
        return out if out.shape[0] > 1 else float(out[0])

    return density, (lo, hi_eff)


def run_spectrum_experiment(config: ExperimentConfig) -> TestReport:
    """Sample product spectra and compare the pooled marginal with the
    quadrature marginal of the configured analytic jPDF."""
    t0 = time.perf_counter()
    p = config.params
    n = int(p["n"])
    factor, fspec = _factor_from_params(p)
    atilde = p.get("base", [1.0] * n)
    ens = PolynomialEnsembleSpec(
        n, fixed_base_weights(atilde, factor), label="fixed")
    density, support = _pooled_marginal(ens)
    rng = _rng(config.seed)
    prod = ProductSpec(factors=(fspec,),
                       base=SingularSpectrum.from_values(atilde))
    samples = spectra_batch(
        build_product_batch(prod, config.nsamples, rng)).ravel()
    rows, ks, chi2, pval, _ = _binned_comparison(
        samples, density, support, config.bins)
    norm = _quad_mass(density, support)
    ks_tol = config.tol("ks", 0.01 if n == 1 else 0.015)
    passed = ks < ks_tol and abs(norm - 1.0) < config.tol("norm", 1e-6)
    stats_d = {"ks": ks, "ks_tol": ks_tol, "chi2": chi2,
               "chi2_pvalue": pval, "norm": norm}
    return TestReport(
        name=config.label or f"spectrum-{p.get('factor', 'ginibre')}-n{n}",
        passed=passed, statistics=stats_d, rows=rows,
        nsamples=config.nsamples, config=config.resolved(),
        wall_clock=time.perf_counter() - t0)


def run_corank2_experiment(config: ExperimentConfig) -> TestReport:
    """Corank-2 projection of k (i a (x) tau_2) k^T over Haar k: MC versus
    the closed-form projection density."""
    t0 = time.perf_counter()
    a = SingularSpectrum.from_values(config.params["a"])
    n = a.n
    rng = _rng(config.seed)
    x = build_canonical(a).entries
    vals = []
    done = 0
    while done < config.nsamples:
        block = min(100_000, config.nsamples - done)
        k = haar_orthogonal_batch(2 * n, block, rng)
        y = k @ x @ np.swapaxes(k, 1, 2)
        y = (y - np.swapaxes(y, 1, 2)) / 2.0
        vals.append(spectra_batch(y[:, :-2, :-2]))
        done += block
    samples = np.concatenate(vals).ravel()

    def density(v):
        return np.asarray([corank2_jpdf([u], a) for u in np.atleast_1d(v)])

    rows, ks, chi2, pval, _ = _binned_comparison(
        samples, density, (0.0, float(a.values[-1])), config.bins)
    # the projection density is piecewise polynomial; integrate each cell
    cells = np.concatenate([[0.0], a.values])
    norm = sum(_quad_mass(density, (cells[i], cells[i + 1]))
               for i in range(n))
    norm_tol = config.tol("norm", 1e-10)
    p_min = config.tol("chi2_pvalue", 1e-3)
    passed = abs(norm - 1.0) < norm_tol and pval > p_min
    return TestReport(
        name=config.label or f"corank2-n{n}", passed=passed,
        statistics={"ks": ks, "chi2": chi2, "chi2_pvalue": pval,
                    "norm": norm, "pvalue_min": p_min},
        rows=rows, nsamples=config.nsamples, config=config.resolved(),
        wall_clock=time.perf_counter() - t0)


def _prop45_log_ratio(s, nu, mu, n, perturb=False):
    """log of the real-side over complex-side Mellin factor ratio.

    Real side: Gamma(2s + 2 nu) / Gamma(2s + 2 mu + 2 nu + 2 n + 1).
    Complex side: Gamma(s + nu) Gamma(s + nu + 1/2) /
                  [Gamma(s + mu + nu + n + 1/2) Gamma(s + mu + nu + n + 1)].
    By the Legendre duplication formula the ratio is independent of s.
    """
    top = 2 * s + 2 * mu + 2 * nu + 2 * n + (0 if perturb else 1)
    real = special.loggamma(2 * s + 2 * nu) - special.loggamma(top)
    cplx = (special.loggamma(s + nu) + special.loggamma(s + nu + 0.5)
            - special.loggamma(s + mu + nu + n + 0.5)
            - special.loggamma(s + mu + nu + n + 1.0))
    return real - cplx


def run_prop45_check(nu: float, mu: float, nparam: int, sgrid=None,
                     perturb: bool = False,
                     tolerance: float = 1e-10) -> TestReport:
    """s-independence of the real-versus-complex Mellin factor ratio."""
    t0 = time.perf_counter()
    if sgrid is None:
        sgrid = np.linspace(1.0, 5.0, 20)
    sgrid = np.asarray(sgrid, dtype=float)
    if np.any(sgrid + nu <= 0):
        raise DomainError("Gamma pole on the s grid")
    vals = _prop45_log_ratio(sgrid, nu, mu, nparam, perturb=perturb)
    dev = float(np.max(np.abs(vals - np.mean(vals))))
    passed = (dev > 1e-2) if perturb else (dev < tolerance)
    return TestReport(
        name=f"prop45-nu{nu:g}-mu{mu:g}-n{nparam}"
             + ("-perturbed" if perturb else ""),
        passed=passed,
        statistics={"max_deviation": dev, "tolerance": tolerance,
                    "perturbed": float(perturb)},
        config={"nu": nu, "mu": mu, "n": nparam, "schema": SCHEMA_VERSION},
        wall_clock=time.perf_counter() - t0)


def prop45_distribution_check(nsamples: int = 100_000,
                              seed: int = 0) -> TestReport:
    """Distributional face of the identity at n = 1, nu = mu = 0.

    The squared singular value of the real Jacobi product (N=1, K1=5) must
    match the product of independent Beta(1/2, 3/2) and Beta(1, 3/2)
    variables; the comparator density is a quadrature Mellin convolution of
    the two Beta densities.  The comparison runs on the singular-value
    scale, where the convolved density stays bounded at the origin.
    """
    t0 = time.perf_counter()
    rng = _rng(seed)
    prod = ProductSpec(factors=(JacobiSpec(1, 1, 5),),
                       base=SingularSpectrum.from_values([1.0]))
    a = spectra_batch(build_product_batch(prod, nsamples, rng)).ravel()
    from .mellin import ConvolvedDensity, WeightFunction
    from scipy import special as sp
    b1 = WeightFunction(
        density=lambda t: np.where(
            (t > 0) & (t < 1),
            np.sqrt(np.maximum(1.0 - t, 0.0) / np.maximum(t, 1e-300))
            / sp.beta(0.5, 1.5), 0.0),
        mellin=lambda s: sp.beta(s - 0.5, 1.5) / sp.beta(0.5, 1.5),
        support=(0.0, 1.0), label="beta(1/2,3/2)")
    b2 = WeightFunction(
        density=lambda t: np.where(
            (t > 0) & (t < 1),
            1.5 * np.sqrt(np.maximum(1.0 - t, 0.0)), 0.0),
        mellin=lambda s: sp.beta(s, 1.5) / sp.beta(1.0, 1.5),
        support=(0.0, 1.0), label="beta(1,3/2)")
    conv = ConvolvedDensity(b1, b2, y_lo=1e-10, y_hi=1.0)

    def density(y):
        y = np.asarray(y, dtype=float)
        return 2.0 * y * np.asarray(conv(y * y), dtype=float)

    rows, ks, chi2, pval, norm = _binned_comparison(
        a, density, (0.0, 1.0), 50)
    passed = ks < 0.01 and abs(norm - 1.0) < 1e-6
    return TestReport(
        name="prop45-distribution-n1", passed=passed,
        statistics={"ks": ks, "ks_tol": 0.01, "norm": norm,
                    "chi2_pvalue": pval},
        rows=rows, nsamples=nsamples,
        config={"seed": seed, "nsamples": nsamples,
                "schema": SCHEMA_VERSION},
        wall_clock=time.perf_counter() - t0)


def run_spherical_suite(config: ExperimentConfig) -> TestReport:
    """Closed-form spherical function versus Monte Carlo, factorization
    identities, the 2n-dimensional group integral and the recursion."""
    t0 = time.perf_counter()
    rng = _rng(config.seed)
    N = config.nsamples
    stats_d = {}
    notes = []
    ok = True

    # closed form vs MC on the convergence-domain grid
    points = config.params.get("phi_points", [
        ((2.0, 0.0), (1.0, 2.0)),
        ((3.0, 1.0), (1.0, 2.0)),
        ((2.5, 0.5), (0.5, 1.5)),
        ((4.0, 0.0), (1.0, 1.5)),
        ((2.0, 0.0), (2.0, 3.0)),
    ])
    for i, (s, a) in enumerate(points):
        closed = sph.phi_closed(s, a)
        mc, se = sph.phi_montecarlo(s, a, N, rng)
        z = abs(mc - closed) / se if se > 0 else 0.0
        stats_d[f"phi_z_{i}"] = z
        ok &= z < 3.0

    # a -> 1 normalization, exact limit plus MC confirmation at n=2
    for n in (1, 2, 3, 4):
        s = tuple(2.0 * (n - j) for j in range(1, n + 1))
        lim = sph.phi_closed(s, tuple([1.0] * n))
        stats_d[f"phi_limit_n{n}"] = abs(lim - 1.0)
        ok &= abs(lim - 1.0) < 1e-8
    mc, se = sph.phi_montecarlo((2.0, 0.0), (1.0, 1.0), N, rng)
    z = abs(mc - 1.0) / se if se > 0 else 0.0
    stats_d["phi_limit_mc_z"] = z
    ok &= z < 3.0

    # factorization identities with induced Ginibre factors
    from .samplers import sample_induced_ginibre_batch
    g = sample_induced_ginibre_batch(GinibreSpec(2, 0), 2, rng)
    _, _, z1 = sph.factorization_check_phi((2.0, 0.0), g[0], (1.0, 2.0),
                                           N, rng)
    _, _, z2 = sph.factorization_check_psi((2.0, 0.0), g[0], g[1], N, rng)
    stats_d["factorization_phi_z"] = z1
    stats_d["factorization_psi_z"] = z2
    ok &= z1 < 3.0 and z2 < 3.0

    # group integral: n=1 is the two-component O(2) average (cosh), n=2 MC
    x1, y1 = (0.7,), (1.3,)
    exact = float(np.cosh(x1[0] * y1[0]))
    stats_d["hc_n1_err"] = abs(sph.harish_chandra_o2n(x1, y1) - exact)
    ok &= stats_d["hc_n1_err"] < 1e-12
    closed = sph.harish_chandra_o2n((0.5, 1.0), (0.8, 1.6))
    mc, se = sph.harish_chandra_o2n_mc((0.5, 1.0), (0.8, 1.6), N, rng)
    z = abs(mc - closed) / se if se > 0 else 0.0
    stats_d["hc_n2_z"] = z
    ok &= z < 3.0

    # recursion versus closed form
    rec_pts = config.params.get("fn_points", [
        ((2.0, 0.0), (1.0, 2.0)),
        ((3.0, 1.0), (1.0, 2.0)),
    ])
    for i, (s, a) in enumerate(rec_pts):
        rec = sph.fn_recurrence(s, a)
        clo = sph.fn_closed(s, a)
        rel = abs(rec - clo) / max(abs(clo), 1e-300)
        stats_d[f"fn_rel_{i}"] = rel
        ok &= rel < 1e-6

    notes.append("z thresholds 3.0; limits 1e-8; recursion 1e-6 relative")
    return TestReport(
        name=config.label or "spherical-suite", passed=bool(ok),
        statistics=stats_d, nsamples=N, config=config.resolved(),
        notes=notes, wall_clock=time.perf_counter() - t0)


def run_kernel_suite(config: ExperimentConfig) -> TestReport:
    """Gram, trace, series-versus-contour and correlation consistency."""
    from scipy import integrate
    from .kernels import (biorth_fixed, gram_biorth, kernel_fixed,
                          kernel_fixed_contour, correlation_Rk)
    t0 = time.perf_counter()
    stats_d = {}
    ok = True
    gw = ginibre_weight(0.0)
    jw = jacobi_weight(0.0, 0.0, 2)
    # pts stay inside the double-contour holomorphy domain (y < a_min for
    # Jacobi); trace and marginals integrate over the full support
    cases = [("ginibre", gw, [1.0, 2.0], 40.0, [0.4, 0.9, 1.5, 2.4]),
             ("jacobi", jw, [0.5, 0.9], 0.9, [0.05, 0.15, 0.25, 0.4])]
    for label, fac, at, hi, pts in cases:
        sysf = biorth_fixed(at, fac)
        stats_d[f"{label}_gram"] = sysf.gram_offdiag
        ok &= sysf.gram_offdiag < 1e-8
        ker = lambda yp, y: kernel_fixed(yp, y, at, fac, method="series",
                                         system=sysf)
        tr, _ = integrate.quad(lambda y: ker(y, y), 1e-9, hi, limit=300)
        stats_d[f"{label}_trace_err"] = abs(tr - 2.0)
        ok &= abs(tr - 2.0) < 1e-6
        sc = max(abs(kernel_fixed(yp, y, at, fac, system=sysf)
                     - ker(yp, y))
                 for yp in pts for y in pts)
        dc = max(abs(kernel_fixed_contour(yp, y, at, fac) - ker(yp, y))
                 for yp in pts for y in pts)
        stats_d[f"{label}_series_vs_contour"] = sc
        stats_d[f"{label}_double_contour"] = dc
        ok &= sc < 1e-7 and dc < 1e-7
        r1_sup = 0.0
        for y0 in pts:
            marg, _ = integrate.quad(
                lambda x: jpdf_fixed([y0, x], at, fac), 1e-9, hi, limit=300)
            r1_sup = max(r1_sup, abs(ker(y0, y0) - 2.0 * marg))
        stats_d[f"{label}_r1_sup"] = r1_sup
        ok &= r1_sup < 1e-5
        r2d = max(abs(correlation_Rk([y0, y0], ker)) for y0 in pts)
        stats_d[f"{label}_r2_diag"] = r2d
        ok &= r2d < 1e-10
    # the polynomial-base Gram constructions of the criterion examples
    mb = PolynomialEnsembleSpec(2, muttalib_borodin_weights(0.0, 0.0, 2))
    for mode in ("triangular", "dual_weights"):
        g = gram_biorth(mb, mode=mode)
        stats_d[f"mb_gram_{mode}"] = g.gram_offdiag
        ok &= g.gram_offdiag < 1e-8
    return TestReport(
        name=config.label or "kernel-suite", passed=bool(ok),
        statistics=stats_d, config=config.resolved(),
        wall_clock=time.perf_counter() - t0)


def run_mellin_suite(config: ExperimentConfig) -> TestReport:
    """Closed-form Mellin transforms versus quadrature, plus the transform
    factorization under Mellin convolution."""
    from .mellin import mellin_convolve
    t0 = time.perf_counter()
    stats_d = {}
    ok = True
    worst = 0.0
    for nu in (0.0, 0.5, 1.0):
        for mu in (0.0, 0.5, 1.0):
            for j in range(4):
                s = 2 * j + 1
                gwt = ginibre_weight(nu)
                rel = abs(mellin_numeric(gwt, s) - gwt.mellin(s)) \
                    / abs(gwt.mellin(s))
                worst = max(worst, rel)
                jwt = jacobi_weight(nu, mu, 2)
                rel = abs(mellin_numeric(jwt, s) - jwt.mellin(s)) \
                    / abs(jwt.mellin(s))
                worst = max(worst, rel)
    stats_d["closed_form_rel"] = worst
    ok &= worst < 1e-8
    # M[f (*) h](s) = M f(s) M h(s) by quadrature on the convolved density
    f = ginibre_weight(0.5)
    h = jacobi_weight(0.0, 0.0, 1)
    worst = 0.0
    for s in (1.0, 2.0, 3.0):
        lhs = mellin_numeric(lambda y: mellin_convolve(f, h, y), s,
                             support=(0.0, f.tail))
        rhs = f.mellin(s) * h.mellin(s)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    stats_d["factorization_rel"] = worst
    ok &= worst < 1e-8
    return TestReport(
        name=config.label or "mellin-suite", passed=bool(ok),
        statistics=stats_d, config=config.resolved(),
        wall_clock=time.perf_counter() - t0)


def run_suite(name: str, seed: int = 0, nsamples: int = 100_000):
    """Named verification suite -> list of TestReports."""
    reports = []
    if name in ("spectrum", "all", "quick"):
        for params, label in [
            ({"factor": "ginibre", "n": 1, "nu": 0.0, "base": [1.0]},
             "spectrum-ginibre-n1"),
            ({"factor": "jacobi", "n": 1, "N": 1, "K1": 5, "base": [1.0]},
             "spectrum-jacobi-n1"),
            ({"factor": "ginibre", "n": 2, "nu": 0.0, "base": [1.0, 2.0]},
             "spectrum-ginibre-n2"),
        ]:
            cfg = ExperimentConfig(kind="spectrum-vs-jpdf", params=params,
                                   nsamples=nsamples, seed=seed, label=label)
            reports.append(run_spectrum_experiment(cfg))
    if name in ("corank2", "all", "quick"):
        cfg = ExperimentConfig(kind="corank2", params={"a": [1.0, 2.0]},
                               nsamples=nsamples, seed=seed)
        reports.append(run_corank2_experiment(cfg))
    if name in ("prop45", "all", "quick"):
        reports.append(run_prop45_check(0.0, 0.0, 1))
        reports.append(run_prop45_check(1.0, 0.5, 2))
        reports.append(run_prop45_check(0.0, 0.0, 1, perturb=True))
        if name != "quick":
            reports.append(prop45_distribution_check(nsamples, seed))
    if name in ("mellin", "all", "quick"):
        reports.append(run_mellin_suite(
            ExperimentConfig(kind="mellin-closed-forms", seed=seed)))
    if name in ("kernels", "all"):
        reports.append(run_kernel_suite(
            ExperimentConfig(kind="kernel-consistency", seed=seed)))
    if name in ("spherical", "all"):
        cfg = ExperimentConfig(kind="spherical-identity",
                               nsamples=nsamples, seed=seed)
        reports.append(run_spherical_suite(cfg))
    if not reports:
        raise DomainError(f"unknown suite {name!r}")
    return reports


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def emit_results(reports, out_dir, fmt: str = "csv"):
    """Write per-report tables and summaries; returns the written paths.

    CSV tables carry the header bin_lo,bin_hi,empirical,analytic,zscore;
    JSON-lines tables one object per bin.  Summaries embed the schema
    identifier, package version, resolved config and statistics.  Output
    bytes depend only on the report contents, never on wall-clock.
    """
    if fmt not in ("csv", "jsonlines"):
        raise DomainError(f"unknown output format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for rep in reports:
        if fmt == "csv":
            table = out / f"{rep.name}.csv"
            lines = [_CSV_HEADER]
            for lo, hi, emp, ana, z in rep.rows:
                lines.append(",".join(_fmt(float(v))
                                      for v in (lo, hi, emp, ana, z)))
            table.write_text("\n".join(lines) + "\n")
        else:
            table = out / f"{rep.name}.jsonl"
            lines = []
            for lo, hi, emp, ana, z in rep.rows:
                lines.append(json.dumps(
                    {"bin_lo": lo, "bin_hi": hi, "empirical": emp,
                     "analytic": ana, "zscore": z}, sort_keys=True))
            table.write_text("\n".join(lines) + ("\n" if lines else ""))
        paths.append(table)
        summary = out / f"{rep.name}.summary.txt"
        slines = [f"schema: {SCHEMA_VERSION}",
                  f"version: {__version__}",
                  f"name: {rep.name}",
                  f"passed: {rep.passed}",
                  f"nsamples: {rep.nsamples}",
                  "config: " + json.dumps(rep.config, sort_keys=True,
                                          default=str)]
        for key in sorted(rep.statistics):
            slines.append(f"stat {key}: {_fmt(float(rep.statistics[key]))}")
        for note in rep.notes:
            slines.append(f"note: {note}")
        summary.write_text("\n".join(slines) + "\n")
        paths.append(summary)
    return paths
