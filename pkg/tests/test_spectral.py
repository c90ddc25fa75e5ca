import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nestcan.funcspace import MvFunction, ProductDomain
from nestcan.spectral import (
    build_fourier_basis,
    conditional_expectation,
    conditional_expectation_spectral,
    fourier_transform,
    influence_spectral,
    inner,
    inverse_transform,
    laplacian,
    laplacian_influence,
)

from conftest import functions, table

medium = functions(max_n=4, max_k=4)


def test_basis_examples():
    b = build_fourier_basis(ProductDomain.full((2, 1, 3)))
    np.testing.assert_allclose(b.tables[0], [[1, 1], [-1, 1]], atol=1e-14)
    np.testing.assert_allclose(b.tables[1], [[1]])
    np.testing.assert_allclose(b.tables[2][1], math.sqrt(1.5) * np.array([-1, 0, 1]), atol=1e-14)


@pytest.mark.parametrize("kind,seed", [("standard", 0), ("random", 0), ("random", 12345)])
@pytest.mark.parametrize("ks", [(1,), (2, 3), (4, 4), (5, 2, 3)])
def test_basis_orthonormal(kind, seed, ks):
    b = build_fourier_basis(ProductDomain.full(ks), kind, seed)
    assert b.orthonormality_error() < 1e-12
    assert all(np.all(t[0] == 1.0) for t in b.tables)


def test_standard_sign_convention():
    b = build_fourier_basis(ProductDomain.full((5,)))
    assert np.all(b.tables[0][:, -1] > 0)


def test_tensor_basis_orthonormal():
    dom = ProductDomain.full((2, 3))
    b = build_fourier_basis(dom, "random", 3)
    alphas = list(dom.points())
    gram = np.array([[np.mean(b.function(a) * b.function(c)) for c in alphas] for a in alphas])
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-12)


def test_transform_examples(AND, f_ci):
    spec = fourier_transform(AND, build_fourier_basis(AND.domain))
    np.testing.assert_allclose(spec.coefficients.ravel(), [0.25] * 4, atol=1e-15)
    c = MvFunction.constant(ProductDomain.full((2, 3)), 3)
    s = fourier_transform(c, build_fourier_basis(c.domain, "random", 1)).coefficients.ravel()
    assert s[0] == pytest.approx(3) and np.abs(s[1:]).max() < 1e-12
    assert fourier_transform(f_ci, build_fourier_basis(f_ci.domain)).coeff((0, 0)) == pytest.approx(1 / 3)


def test_transform_brute_force(f1_cro):
    basis = build_fourier_basis(f1_cro.domain, "random", 9)
    spec = fourier_transform(f1_cro, basis)
    arr = np.array([float(v) for v in f1_cro.values]).reshape(2, 3)
    for alpha in f1_cro.domain.points():
        assert spec.coeff(alpha) == pytest.approx(np.mean(arr * basis.function(alpha)), abs=1e-12)


def test_shape_mismatch(AND):
    with pytest.raises(ValueError):
        fourier_transform(AND, build_fourier_basis(ProductDomain.full((2, 3))))


@given(medium, st.integers(0, 1000))
def test_roundtrip_and_parseval(f, seed):
    for basis in (build_fourier_basis(f.domain), build_fourier_basis(f.domain, "random", seed)):
        spec = fourier_transform(f, basis)
        back = inverse_transform(spec, basis)
        assert max(abs(float(a - b)) for a, b in zip(back.values, f.values)) < 1e-9
        energy = float(sum(v * v for v in f.values) / f.domain.size)
        assert float(np.sum(spec.coefficients**2)) == pytest.approx(energy, rel=1e-9, abs=1e-12)
        assert spec.coefficients.ravel()[0] == pytest.approx(float(sum(f.values) / f.domain.size), abs=1e-12)


def test_conditional_expectation_examples(AND, f_ci):
    e = conditional_expectation(AND, 1)
    assert e.values == tuple(Fraction(v) for v in (0, Fraction(1, 2), 0, Fraction(1, 2)))
    c = MvFunction.constant(ProductDomain.full((3, 2)), 4)
    assert conditional_expectation(c, 2) == c
    assert conditional_expectation(f_ci, 1) == f_ci
    with pytest.raises(ValueError):
        conditional_expectation(AND, 3)


def test_laplacian_examples(AND):
    c = MvFunction.constant(ProductDomain.full((3, 2)), 4)
    assert set(laplacian(c, 1).values) == {0}
    assert laplacian(AND, 1).values == tuple(
        Fraction(v) for v in (0, Fraction(-1, 2), 0, Fraction(1, 2))
    )
    dictator = table((2, 2), [0, 0, 1, 1])
    assert set(laplacian(dictator, 2).values) == {0}
    with pytest.raises(ValueError):
        laplacian(AND, 0)


def test_influence_spectral_examples(AND, XOR):
    b = build_fourier_basis(AND.domain)
    assert influence_spectral(AND, b, 1) == pytest.approx(1 / 8, abs=1e-12)
    assert influence_spectral(XOR, b, 1) == pytest.approx(1 / 4, abs=1e-12)
    c = MvFunction.constant(AND.domain, 1)
    assert influence_spectral(c, b, 2) == pytest.approx(0, abs=1e-12)


@given(medium, st.integers(0, 1000), st.data())
def test_basis_independence(f, seed, data):
    i = data.draw(st.integers(1, f.domain.arity))
    std = build_fourier_basis(f.domain)
    rnd = build_fourier_basis(f.domain, "random", seed)
    exact = np.array([float(v) for v in conditional_expectation(f, i).values])
    for b in (std, rnd):
        np.testing.assert_allclose(conditional_expectation_spectral(f, b, i).ravel(), exact, atol=1e-9)
    assert influence_spectral(f, std, i) == pytest.approx(influence_spectral(f, rnd, i), abs=1e-9)


@given(medium, st.data())
def test_projection_identities(f, data):
    i = data.draw(st.integers(1, f.domain.arity))
    lap = laplacian(f, i)
    assert set(conditional_expectation(lap, i).values) == {0}
    assert inner(f, lap) == inner(lap, lap)
    assert laplacian_influence(f, i) == inner(lap, lap)
    # E_i f must not depend on x_i
    e = conditional_expectation(f, i)
    arr = e.table()
    assert np.all(arr == np.take(arr, [0], axis=i - 1))
