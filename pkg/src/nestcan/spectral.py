"""Fourier analysis on product domains under the uniform measure.

A basis is a tensor product of per-coordinate orthonormal families whose row 0
is the constant 1.  Transforms and spectral influences are floating point;
conditional expectations and Laplacians are also offered exactly, since they
only need averages.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

import numpy as np

from .funcspace import MvFunction, ProductDomain

__all__ = [
    "FourierBasis",
    "Spectrum",
    "build_fourier_basis",
    "fourier_transform",
    "inverse_transform",
    "conditional_expectation",
    "conditional_expectation_spectral",
    "laplacian",
    "inner",
    "laplacian_influence",
    "influence_spectral",
]


@dataclass(frozen=True)
class FourierBasis:
    """``tables[i][j, t]`` is the j-th basis function of coordinate i+1 at its t-th active value."""

    tables: tuple[np.ndarray, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(t.shape[0] for t in self.tables)

    def orthonormality_error(self) -> float:
        err = 0.0
        for t in self.tables:
            k = t.shape[0]
            gram = t @ t.T / k
            err = max(err, float(np.abs(gram - np.eye(k)).max()), float(np.abs(t[0] - 1).max()))
        return err

    def function(self, alpha: Sequence[int]) -> np.ndarray:
        """The tensor-product basis function for multi-index ``alpha`` as a domain-shaped array."""
        out = np.ones(())
        for t, a in zip(self.tables, alpha):
            out = np.multiply.outer(out, t[a])
        return out


@dataclass(frozen=True)
class Spectrum:
    """Coefficients indexed by multi-index, same mixed-radix layout as points."""

    domain: ProductDomain
    coefficients: np.ndarray

    def coeff(self, alpha: Sequence[int]) -> float:
        return float(self.coefficients[tuple(alpha)])

    def items(self):
        return np.ndenumerate(self.coefficients)


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Orthonormalise rows under ``<u, v> = mean(u * v)``, re-orthogonalising once."""
    k = vectors.shape[1]
    out = []
    for v in vectors:
        w = v.astype(float).copy()
        for _ in range(2):
            for u in out:
                w -= (w @ u / k) * u
        norm = np.sqrt(w @ w / k)
        if norm < 1e-10:
            raise ValueError("degenerate starting vectors")
        out.append(w / norm)
    return np.array(out)


def build_fourier_basis(
    domain: ProductDomain, kind: Literal["standard", "random"] = "standard", seed: int = 0
) -> FourierBasis:
    """Standard: Gram-Schmidt on monomials of the value position, each row made
    positive at the last entry.  Random: Gram-Schmidt on the constant vector
    followed by seeded Gaussian vectors.
    """
    rng = np.random.default_rng(seed) if kind == "random" else None
    tables = []
    for k in domain.shape:
        t = np.arange(k, dtype=float)
        if kind == "standard":
            start = np.array([t**j for j in range(k)])
        elif kind == "random":
            start = np.vstack([np.ones(k), rng.standard_normal((k - 1, k))])
        else:
            raise ValueError(f"unknown basis kind {kind!r}")
        table = _gram_schmidt(start)
        table[0] = 1.0
        if kind == "standard":
            table[1:] *= np.sign(table[1:, -1])[:, None]
        tables.append(table)
    return FourierBasis(tuple(tables))


def _check_shape(domain: ProductDomain, basis: FourierBasis) -> None:
    if domain.shape != basis.shape:
        raise ValueError(f"basis shape {basis.shape} does not match domain shape {domain.shape}")


def _apply(arr: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    for ax, m in enumerate(mats):
        arr = np.moveaxis(np.tensordot(m, arr, axes=([1], [ax])), 0, ax)
    return arr


def _float_table(f: MvFunction) -> np.ndarray:
    return np.array([float(v) for v in f.values]).reshape(f.domain.shape)


def fourier_transform(f: MvFunction, basis: FourierBasis) -> Spectrum:
    _check_shape(f.domain, basis)
    mats = [t / t.shape[0] for t in basis.tables]
    return Spectrum(f.domain, _apply(_float_table(f), mats))


def _inverse_array(spec: Spectrum, basis: FourierBasis) -> np.ndarray:
    _check_shape(spec.domain, basis)
    return _apply(spec.coefficients, [t.T for t in basis.tables])


def inverse_transform(spec: Spectrum, basis: FourierBasis) -> MvFunction:
    """Reconstruction as an MvFunction; values are the exact binary fractions of the float sums."""
    arr = _inverse_array(spec, basis)
    return MvFunction(spec.domain, tuple(Fraction(float(x)) for x in arr.ravel()))


def _axis(f: MvFunction, i: int) -> int:
    if not 1 <= i <= f.domain.arity:
        raise ValueError(f"coordinate {i} out of range 1..{f.domain.arity}")
    return i - 1


def conditional_expectation(f: MvFunction, i: int) -> MvFunction:
    """``E_i f``: average over coordinate i with the others held fixed (exact)."""
    ax = _axis(f, i)
    w, d = f.scaled
    k = f.domain.shape[ax]
    sums = np.broadcast_to(w.sum(axis=ax, keepdims=True), w.shape)
    return MvFunction(f.domain, tuple(Fraction(int(s), d * k) for s in sums.ravel()))


def conditional_expectation_spectral(f: MvFunction, basis: FourierBasis, i: int) -> np.ndarray:
    """``sum over alpha_i = 0`` of ``hat f(alpha) phi_alpha``, as a float array."""
    ax = _axis(f, i)
    spec = fourier_transform(f, basis)
    coeffs = spec.coefficients.copy()
    idx = [slice(None)] * coeffs.ndim
    idx[ax] = slice(1, None)
    coeffs[tuple(idx)] = 0.0
    return _inverse_array(Spectrum(f.domain, coeffs), basis)


def laplacian(f: MvFunction, i: int) -> MvFunction:
    e = conditional_expectation(f, i)
    return MvFunction(f.domain, tuple(a - b for a, b in zip(f.values, e.values)))


def inner(f: MvFunction, g: MvFunction) -> Fraction:
    if f.domain != g.domain:
        raise ValueError("functions live on different domains")
    return sum((a * b for a, b in zip(f.values, g.values)), Fraction(0)) / f.domain.size


def laplacian_influence(f: MvFunction, i: int) -> Fraction:
    """``<f, L_i f>`` computed exactly."""
    return inner(f, laplacian(f, i))


def influence_spectral(
    f: MvFunction, basis: FourierBasis, i: int, spectrum: Optional[Spectrum] = None
) -> float:
    """Fourier weight on multi-indices with ``alpha_i != 0``."""
    ax = _axis(f, i)
    spec = spectrum if spectrum is not None else fourier_transform(f, basis)
    c = np.moveaxis(spec.coefficients, ax, 0)[1:]
    return float(np.sum(c * c))
