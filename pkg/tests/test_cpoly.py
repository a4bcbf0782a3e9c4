import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ktoeplitz.cpoly import (ComplexPolynomial, RootFindingError, format_poly,
                             magnitude_bound, roots)
from oracles import companion_dominant_root, matched_sort

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def test_trim_and_degree():
    assert ComplexPolynomial([1, 2, 0, 0]).degree == 1
    assert ComplexPolynomial([]).degree == -1
    assert ComplexPolynomial([0]).is_zero()


def test_arithmetic():
    p = ComplexPolynomial([1, 1])
    q = ComplexPolynomial([-1, 1])
    assert p * q == ComplexPolynomial([-1, 0, 1])
    assert p + q == ComplexPolynomial([0, 2])
    assert p - p == ComplexPolynomial()
    assert 2 * p == ComplexPolynomial([2, 2])
    assert 1 - p == ComplexPolynomial([0, -1])


def test_format():
    assert format_poly(ComplexPolynomial([0, -1, 0, 1])) == "z^3 - z"
    assert format_poly(ComplexPolynomial([0, -1, 0, 2, 0, -1, 0, 1])) == "z^7 - z^5 + 2*z^3 - z"
    assert format_poly(ComplexPolynomial()) == "0"


def test_evaluate_array_and_scalar():
    p = ComplexPolynomial([1, 2, 3])
    assert p(2.0) == 17
    assert np.allclose(p(np.array([0, 1j])), [1, 1 + 2j - 3])


def test_derivative():
    assert ComplexPolynomial([5, 3, 0, 2]).derivative() == ComplexPolynomial([3, 0, 6])
    assert ComplexPolynomial([5]).derivative().is_zero()


def test_roots_small_cases():
    r = np.sort_complex(roots(ComplexPolynomial([0, -1, 0, 1])))
    assert np.allclose(r, [-1, 0, 1], atol=1e-13)
    assert np.allclose(roots(ComplexPolynomial([3, 2])), [-1.5])
    with pytest.raises(ValueError):
        roots(ComplexPolynomial([1]))


def test_dominant_root_matches_companion_power_iteration():
    # the two largest roots share a modulus, so iterate with a shift
    coeffs = [-0.5j, -1, 0, 1]
    r = roots(ComplexPolynomial(coeffs))
    for shift in (-1.0, 1.0, 2j):
        far = r[np.argmax(np.abs(r - shift))]
        assert abs(far - companion_dominant_root(coeffs, shift)) < 1e-10


def test_roots_of_unity():
    n = 9
    r = roots(ComplexPolynomial([-1] + [0] * (n - 1) + [1]))
    a, b = matched_sort(r, np.exp(2j * np.pi * np.arange(n) / n))
    assert np.abs(a - b).max() < 1e-13


def test_non_convergence_is_reported():
    p = ComplexPolynomial([-1, 0, 0, 0, 0, 1])
    with pytest.raises(RootFindingError) as info:
        roots(p, max_iter=1)
    assert len(info.value.roots) == 5
    assert len(info.value.residuals) == 5


@settings(max_examples=40, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=10))
def test_reconstruction_from_roots(rs):
    rs = np.array(rs)
    # keep roots separated so the reconstruction is well conditioned
    if len(rs) > 1:
        d = np.abs(rs[:, None] - rs[None, :]) + np.eye(len(rs))
        if d.min() < 0.05:
            return
    p = ComplexPolynomial.from_roots(rs)
    found = roots(p)
    assert np.all(np.abs(p(found)) <= 1e-9 * magnitude_bound(p, found))
    a, b = matched_sort(found, rs)
    assert np.abs(a - b).max() < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=6), st.lists(cplx, min_size=1, max_size=6), cplx)
def test_product_evaluates_as_product(a, b, z):
    p, q = ComplexPolynomial(a), ComplexPolynomial(b)
    lhs = (p * q)(z)
    assert abs(lhs - p(z) * q(z)) <= 1e-10 * (1 + magnitude_bound(p * q, z))


@settings(max_examples=50, deadline=None)
@given(st.lists(cplx, min_size=2, max_size=7), cplx)
def test_derivative_matches_finite_difference(c, z):
    p = ComplexPolynomial(c)
    h = 1e-6
    fd = (p(z + h) - p(z - h)) / (2 * h)
    assert abs(p.derivative()(z) - fd) <= 1e-5 * (1 + magnitude_bound(p, abs(z) + 1))
