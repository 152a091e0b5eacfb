"""Random generators for the concrete factor ensembles and products.

Factors are sampled as g = R (M^T M)^(1/2) with R Haar orthogonal and M a
rectangular Gaussian (induced Ginibre) or a sub-block of a Haar orthogonal
matrix (induced Jacobi).  Products are built as iterated sandwiches
X_M ... X_1 A X_1^T ... X_M^T around a canonical antisymmetric base and
exactly re-antisymmetrized to scrub floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (AntisymmetricMatrix, DomainError, GeneralLinearMatrix,
                     SingularSpectrum, build_canonical, haar_orthogonal_batch)

__all__ = [
    "GinibreSpec", "JacobiSpec", "ProductSpec",
    "sample_ginibre_rect", "sample_induced_ginibre",
    "sample_induced_ginibre_batch", "sample_induced_jacobi",
    "sample_induced_jacobi_batch", "build_product", "build_product_batch",
]

#: Eigenvalues of M^T M below this are clamped to 0 before the square root.
PSD_CLAMP = 1e-14


@dataclass(frozen=True)
class GinibreSpec:
    """Induced Ginibre factor: 2n x 2n with density ~ (det g g^T)^nu e^(-Tr g g^T / 2).

    Direct sampling needs integer nu >= 0; the analytic evaluators accept
    any nu > -1/2.
    """

    n: int
    nu: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.nu <= -0.5:
            raise DomainError("nu must exceed -1/2")

    @property
    def samplable(self) -> bool:
        return self.nu >= 0 and float(self.nu).is_integer()


@dataclass(frozen=True)
class JacobiSpec:
    """Induced Jacobi factor: truncation of a Haar O(K1) matrix.

    Derived weight parameters nu = N - n and mu = (K1 - 2n - 2N - 1) / 2.
    """

    n: int
    N: int
    K1: int

    def __post_init__(self):
        if self.n < 1 or self.N < self.n:
            raise DomainError("need N >= n >= 1")
        if self.K1 < 2 * (self.n + self.N):
            raise DomainError("need K1 >= 2 (n + N)")

    @property
    def nu(self) -> float:
        return float(self.N - self.n)

    @property
    def mu(self) -> float:
        return (self.K1 - 2 * self.n - 2 * self.N - 1) / 2.0


@dataclass(frozen=True)
class ProductSpec:
    """Ordered factor list around a fixed antisymmetric base spectrum.

    base None means the canonical identity spectrum a = (1, ..., 1); an
    empty factor list makes the product the base matrix itself.
    """

    factors: tuple = ()
    base: SingularSpectrum | None = None
    n: int = field(default=0)

    def __post_init__(self):
        ns = {f.n for f in self.factors}
        if self.base is not None:
            base = self.base if isinstance(self.base, SingularSpectrum) \
                else SingularSpectrum.from_values(self.base)
            object.__setattr__(self, "base", base)
            ns.add(base.n)
        if self.n > 0:
            ns.add(self.n)
        if len(ns) > 1:
            raise DomainError(f"inconsistent block counts {sorted(ns)}")
        if not ns:
            raise DomainError("cannot infer n: give factors, base, or n")
        object.__setattr__(self, "n", ns.pop())

    @property
    def base_values(self) -> np.ndarray:
        if self.base is None:
            return np.ones(self.n)
        return self.base.values


def sample_ginibre_rect(rows: int, cols: int,
                        rng: np.random.Generator) -> np.ndarray:
    """rows x cols matrix of i.i.d. standard normal entries."""
    if rows < 2 or cols < 2 or rows % 2 or cols % 2:
        raise DomainError("rows and cols must be even integers >= 2")
    return rng.standard_normal((rows, cols))


def _psd_sqrt_batch(mats: np.ndarray) -> np.ndarray:
    """Symmetric square roots of a stack of PSD matrices, clamped at 0."""
    w, v = np.linalg.eigh(mats)
    w = np.sqrt(np.clip(w, 0.0, None) * (np.abs(w) > PSD_CLAMP))
    return np.einsum("sik,sk,sjk->sij", v, w, v)


def sample_induced_ginibre_batch(spec: GinibreSpec, size: int,
                                 rng: np.random.Generator) -> np.ndarray:
    """Stack of induced Ginibre matrices g = R (M^T M)^(1/2), shape (size, 2n, 2n)."""
    if not spec.samplable:
        raise DomainError(
            f"nu = {spec.nu} is an analytic-only parameter; direct sampling "
            "needs a nonnegative integer")
    n, nu = spec.n, int(spec.nu)
    m = rng.standard_normal((size, 2 * (n + nu), 2 * n))
    root = _psd_sqrt_batch(np.einsum("sji,sjk->sik", m, m))
    r = haar_orthogonal_batch(2 * n, size, rng)
    return np.einsum("sij,sjk->sik", r, root)


def sample_induced_ginibre(spec: GinibreSpec,
                           rng: np.random.Generator) -> GeneralLinearMatrix:
    return GeneralLinearMatrix(sample_induced_ginibre_batch(spec, 1, rng)[0])


def sample_induced_jacobi_batch(spec: JacobiSpec, size: int,
                                rng: np.random.Generator) -> np.ndarray:
    """Stack of induced Jacobi matrices from truncated Haar O(K1) matrices.

    M is the leading 2N x 2n sub-block; all singular values of the result
    lie in [0, 1].
    """
    n = spec.n
    k = haar_orthogonal_batch(spec.K1, size, rng)
    m = k[:, : 2 * spec.N, : 2 * n]
    root = _psd_sqrt_batch(np.einsum("sji,sjk->sik", m, m))
    r = haar_orthogonal_batch(2 * n, size, rng)
    return np.einsum("sij,sjk->sik", r, root)


def sample_induced_jacobi(spec: JacobiSpec,
                          rng: np.random.Generator) -> GeneralLinearMatrix:
    return GeneralLinearMatrix(sample_induced_jacobi_batch(spec, 1, rng)[0])


def _factor_batch(factor, size: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(factor, GinibreSpec):
        return sample_induced_ginibre_batch(factor, size, rng)
    if isinstance(factor, JacobiSpec):
        return sample_induced_jacobi_batch(factor, size, rng)
    raise DomainError(f"unknown factor spec {type(factor).__name__}")


def build_product_batch(spec: ProductSpec, size: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Stack of product matrices X_M ... X_1 A X_1^T ... X_M^T, shape
    (size, 2n, 2n), exactly antisymmetrized."""
    y = np.broadcast_to(
        build_canonical(SingularSpectrum.from_values(spec.base_values)).entries,
        (size, 2 * spec.n, 2 * spec.n)).copy()
    for factor in spec.factors:
        g = _factor_batch(factor, size, rng)
        y = np.einsum("sij,sjk,slk->sil", g, y, g)
    return (y - y.transpose(0, 2, 1)) / 2.0


def build_product(spec: ProductSpec,
                  rng: np.random.Generator) -> AntisymmetricMatrix:
    return AntisymmetricMatrix(build_product_batch(spec, 1, rng)[0])
