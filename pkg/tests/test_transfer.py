import numpy as np
import pytest

from ktoeplitz.cpoly import ComplexPolynomial
from ktoeplitz.model import KToeplitzParams, make_g, make_jacobi, make_tk
from ktoeplitz.transfer import (PoleError, build_u1, build_uk, char_poly, continuant_derivatives,
                                continuant_values, eval_pn, ratio_pn, summarize,
                                transfer_eigenvalues)
from oracles import cofactor_charpoly, random_params

P = ComplexPolynomial


def test_u1_determinant_is_coupling():
    assert build_u1(0.3, 2 - 1j).det() == P([2 - 1j])


def test_u3_for_t3():
    u = build_uk(make_tk(3))
    assert u.A == P([0, 0, 0, 1])
    assert u.B == P([1, 0, -1])
    assert u.C == P([1, 0, 1])
    assert u.D == P([0, -1])
    assert u.det() == P([-1])


@pytest.mark.parametrize("k, q, gamma", [
    (1, [0, 1], -1),
    (2, [0, 0, 1], 1),
    (3, [0, -1, 0, 1], 1),
    (5, [0, 1, 0, -1, 0, 1], -1),
    (7, [0, -1, 0, 2, 0, -1, 0, 1], 1),
])
def test_tk_summaries(k, q, gamma):
    s = summarize(make_tk(k))
    assert s.q == P(q)
    assert s.gamma == gamma


def test_gamma_is_minus_coupling_product():
    rng = np.random.default_rng(11)
    for k in range(1, 7):
        p = random_params(rng, k)
        s = summarize(p)
        assert abs(s.gamma + np.prod(p.u)) <= 1e-14 * abs(s.gamma)
        assert abs(s.det_u - build_uk(p).det()(0.37)) <= 1e-12 * abs(s.det_u)


def test_initial_vector():
    rng = np.random.default_rng(3)
    p = random_params(rng, 4)
    s = summarize(p)
    z = 0.2 - 0.9j
    v = s.u_k.at(z) @ np.array([1, 0])
    assert np.allclose(v, [s.p1(z), s.q1(z)])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_char_poly_vs_cofactor(k):
    rng = np.random.default_rng(k)
    for _ in range(5):
        p = random_params(rng, k)
        for n in (1, 2, 3):
            assert char_poly(p, n).almost_equal(cofactor_charpoly(p, n * k), 1e-11)


def test_recurrence_identity():
    rng = np.random.default_rng(5)
    p = random_params(rng, 3)
    s = summarize(p)
    ps = [char_poly(p, n) for n in (1, 2, 3, 4)]
    for n in (1, 2):
        assert (s.q * ps[n] - s.det_u * ps[n - 1]).almost_equal(ps[n + 1], 1e-12)


def test_char_poly_dimension_cap():
    with pytest.raises(ValueError):
        char_poly(make_tk(3), 100)


def test_eval_pn_matches_dense_determinant():
    rng = np.random.default_rng(9)
    p = random_params(rng, 3)
    from ktoeplitz.model import materialize
    M = materialize(p, 6).dense()
    for z in (0.3, 1 + 1j, -2.5j):
        v, e = eval_pn(p, 2, z)
        ref = np.linalg.det(z * np.eye(6) + M)
        assert abs(v * 2.0 ** e - ref) <= 1e-12 * max(1, abs(ref))


def test_eval_pn_does_not_overflow():
    v, e = eval_pn(make_g(), 3000, 5.0)
    assert np.isfinite(v) and e > 1024


def test_ratio_pn_tends_to_dominant_root():
    s = summarize(make_tk(3))
    z = 3.0 + 0.5j
    big, _ = transfer_eigenvalues(s, z)
    assert abs(ratio_pn(make_tk(3), 400, z) - big) < 1e-10 * abs(big)


def test_ratio_pn_pole():
    # p_1 of T_1-type free Jacobi is z, so p_2/p_1 has a pole at 0
    with pytest.raises(PoleError):
        ratio_pn(make_jacobi(), 2, 0.0)


def test_free_jacobi_chebyshev():
    # det(zI + M_N) with zero diagonal and unit coupling is U_N(z/2)
    for N in (1, 4, 9):
        v = continuant_values(make_jacobi(), N, [0.6])
        theta = np.arccos(0.3)
        ref = np.sin((N + 1) * theta) / np.sin(theta)
        assert abs(np.ldexp(v.value[0].real, int(v.exp[0])) - ref) < 1e-12


def test_continuant_derivatives():
    p = KToeplitzParams([0.5, -1j], [1, 2], [0.3, 1 + 1j])
    N = 5
    z = np.array([0.4 + 0.1j])
    d = continuant_derivatives(p, N, z, 2)
    # all rows share one scale, so only ratios are meaningful
    cp = cofactor_charpoly(p, N)
    ratio1 = cp.derivative()(z[0]) / cp(z[0])
    ratio2 = cp.derivative().derivative()(z[0]) / cp(z[0])
    assert abs(d[1, 0] / d[0, 0] - ratio1) < 1e-10 * abs(ratio1)
    assert abs(d[2, 0] / d[0, 0] - ratio2) < 1e-10 * abs(ratio2)
