"""Transfer (reduction) matrices and characteristic polynomials.

All polynomials here are in ``z = -lambda``: the characteristic polynomial of
an N x N instance ``M`` is ``det(z I + M)``, so eigenvalue ``lambda`` of ``M``
corresponds to the root ``z = -lambda``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cpoly import ComplexPolynomial
from .model import KToeplitzParams

CHAR_POLY_MAX_DIM = 200
_BIG = 2.0 ** 64
_SMALL = 2.0 ** -64
POLE_RTOL = 1e-13

Z = ComplexPolynomial.z()
ONE = ComplexPolynomial([1])


class PoleError(ZeroDivisionError):
    """The denominator of a ratio vanishes to working precision."""


@dataclass(frozen=True)
class TransferMatrix:
    A: ComplexPolynomial
    B: ComplexPolynomial
    C: ComplexPolynomial
    D: ComplexPolynomial

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.A * other.A + self.B * other.C,
            self.A * other.B + self.B * other.D,
            self.C * other.A + self.D * other.C,
            self.C * other.B + self.D * other.D,
        )

    def trace(self) -> ComplexPolynomial:
        return self.A + self.D

    def det(self) -> ComplexPolynomial:
        return self.A * self.D - self.B * self.C

    def at(self, z: complex) -> np.ndarray:
        return np.array([[self.A(z), self.B(z)], [self.C(z), self.D(z)]], dtype=complex)


@dataclass(frozen=True)
class TransferSummary:
    """Everything the three-term recurrence needs for one parameter set.

    ``p_{n+1} = q * p_n - det_u * p_{n-1}`` with ``gamma = -det_u``.
    """

    params: KToeplitzParams
    u_k: TransferMatrix
    q: ComplexPolynomial
    det_u: complex
    gamma: complex
    p1: ComplexPolynomial
    q1: ComplexPolynomial


def build_u1(a: complex, u: complex) -> TransferMatrix:
    return TransferMatrix(Z + a, ComplexPolynomial([-u]), ONE, ComplexPolynomial())


def build_uk(params: KToeplitzParams) -> TransferMatrix:
    """Left-to-right product ``U_1(a_0, u_0) ... U_1(a_{k-1}, u_{k-1})``."""
    out = None
    for aj, uj in zip(params.a, params.u):
        f = build_u1(aj, uj)
        out = f if out is None else out @ f
    return out


def continuant_poly(a: Sequence[complex], u: Sequence[complex]) -> ComplexPolynomial:
    """``det(z I + M)`` for the tridiagonal block with diagonal ``a``.

    ``u[i]`` is the product of the two off-diagonal entries coupling rows
    ``i`` and ``i + 1``; only ``u[:len(a) - 1]`` is used.
    """
    prev, cur = ComplexPolynomial(), ONE
    for i, ai in enumerate(a):
        nxt = (Z + ai) * cur
        if i > 0:
            nxt = nxt - u[i - 1] * prev
        prev, cur = cur, nxt
    return cur


def summarize(params: KToeplitzParams) -> TransferSummary:
    uk = build_uk(params)
    det_u = complex(np.prod(np.array(params.u, dtype=complex)))
    k = params.k
    a, u = params.a, params.u
    p1 = continuant_poly(a, u)
    q1 = continuant_poly(a[1:], u[1:]) if k > 1 else ONE
    return TransferSummary(params, uk, uk.trace(), det_u, 0j - det_u, p1, q1)


def char_poly(params: KToeplitzParams, n: int,
              summary: TransferSummary | None = None) -> ComplexPolynomial:
    """Characteristic polynomial in ``z`` of the ``n*k`` dimensional instance."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n * params.k > CHAR_POLY_MAX_DIM:
        raise ValueError(
            f"coefficient form is limited to n*k <= {CHAR_POLY_MAX_DIM} "
            f"(got {n * params.k}); use eval_pn for pointwise values")
    s = summary or summarize(params)
    prev, cur = ONE, s.p1
    for _ in range(n - 1):
        prev, cur = cur, s.q * cur - s.det_u * prev
    return cur


def _renorm(vec: np.ndarray, exp: int) -> tuple[np.ndarray, int]:
    m = float(np.max(np.abs(vec)))
    if m == 0.0 or _SMALL <= m <= _BIG:
        return vec, exp
    e = math.frexp(m)[1]
    return np.ldexp(vec.real, -e) + 1j * np.ldexp(vec.imag, -e), exp + e


def _walk(s: TransferSummary, steps: int, z: complex):
    """Apply ``U_k(z)`` ``steps`` times to ``[p1(z), q1(z)]``, rescaling."""
    u = s.u_k.at(z)
    vec = np.array([s.p1(z), s.q1(z)], dtype=complex)
    exp = 0
    vec, exp = _renorm(vec, exp)
    for _ in range(steps):
        vec = u @ vec
        vec, exp = _renorm(vec, exp)
    return vec, exp


def eval_pn(params: KToeplitzParams, n: int, z: complex,
            summary: TransferSummary | None = None) -> tuple[complex, int]:
    """``p_n(z)`` as ``(value, e)`` with ``p_n(z) = value * 2**e``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = summary or summarize(params)
    vec, exp = _walk(s, n - 1, z)
    return complex(vec[0]), exp


def ratio_pn(params: KToeplitzParams, n: int, z: complex,
             summary: TransferSummary | None = None) -> complex:
    """``p_n(z) / p_{n-1}(z)`` without forming either polynomial.

    Raises :class:`PoleError` when ``p_{n-1}(z)`` vanishes relative to the
    size of the running transfer vector.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = summary or summarize(params)
    if n == 1:
        return complex(s.p1(z))
    vec, _ = _walk(s, n - 2, z)
    nxt = s.u_k.at(z) @ vec
    den = vec[0]
    if abs(den) <= POLE_RTOL * float(np.max(np.abs(vec))):
        raise PoleError(f"p_{n - 1}(z) vanishes at z = {z}")
    return complex(nxt[0] / den)


def transfer_eigenvalues(s: TransferSummary, z) -> tuple[np.ndarray, np.ndarray]:
    """Roots of ``r^2 - Q(z) r - gamma``, ordered by decreasing modulus.

    These are the eigenvalues of ``U_k(z)``; the larger one is the limit of
    ``p_n(z) / p_{n-1}(z)`` as ``n`` grows.
    """
    qz = np.asarray(s.q(z), dtype=complex)
    disc = np.sqrt(qz * qz + 4.0 * s.gamma)
    r1, r2 = (qz + disc) / 2.0, (qz - disc) / 2.0
    swap = np.abs(r2) > np.abs(r1)
    return np.where(swap, r2, r1), np.where(swap, r1, r2)


@dataclass
class ContinuantValues:
    """Scaled values of ``det(z I + M_N)`` at a batch of points.

    True values are ``value * 2**exp``; ``deriv`` and ``bound`` share the same
    scaling. ``bound`` is the recurrence run on absolute values, the natural
    magnitude against which residuals are judged.
    """

    value: np.ndarray
    deriv: np.ndarray
    bound: np.ndarray
    exp: np.ndarray

    @property
    def relative_residual(self) -> np.ndarray:
        return np.abs(self.value) / np.maximum(self.bound, np.finfo(float).tiny)


def continuant_values(params: KToeplitzParams, N: int, z) -> ContinuantValues:
    """Evaluate the N x N characteristic polynomial and its derivative.

    Works for any N (not only multiples of k) by the scalar continuant
    recurrence, rescaling per point to stay clear of overflow.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    k = params.k
    a = np.array(params.a, dtype=complex)
    u = np.array(params.u, dtype=complex)
    au = np.abs(u)
    p_prev = np.zeros_like(z)
    p_cur = np.ones_like(z)
    d_prev = np.zeros_like(z)
    d_cur = np.zeros_like(z)
    b_prev = np.zeros(z.shape)
    b_cur = np.ones(z.shape)
    exp = np.zeros(z.shape, dtype=np.int64)
    for i in range(N):
        t = z + a[i % k]
        if i == 0:
            p_new, d_new, b_new = t * p_cur, p_cur + t * d_cur, np.abs(t) * b_cur
        else:
            uj = u[(i - 1) % k]
            p_new = t * p_cur - uj * p_prev
            d_new = p_cur + t * d_cur - uj * d_prev
            b_new = np.abs(t) * b_cur + au[(i - 1) % k] * b_prev
        p_prev, p_cur = p_cur, p_new
        d_prev, d_cur = d_cur, d_new
        b_prev, b_cur = b_cur, b_new
        m = np.maximum(b_cur, b_prev)
        bad = (m > _BIG) | ((m < _SMALL) & (m > 0))
        if bad.any():
            e = np.where(bad, np.frexp(np.where(bad, m, 1.0))[1], 0)
            scale = np.ldexp(1.0, -e)
            p_prev, p_cur = p_prev * scale, p_cur * scale
            d_prev, d_cur = d_prev * scale, d_cur * scale
            b_prev, b_cur = b_prev * scale, b_cur * scale
            exp += e
    return ContinuantValues(p_cur, d_cur, b_cur, exp)


def scaled_matpow_apply(u: np.ndarray, n: int, vec: np.ndarray) -> tuple[np.ndarray, int]:
    """``u**n @ vec`` by binary powering; returns ``(v, e)`` meaning ``v * 2**e``."""
    result, r_exp = np.asarray(vec, dtype=complex).copy(), 0
    base, b_exp = np.asarray(u, dtype=complex).copy(), 0
    result, r_exp = _renorm(result, r_exp)
    base, b_exp = _renorm(base, b_exp)
    while n > 0:
        if n & 1:
            result, r_exp = _renorm(base @ result, r_exp + b_exp)
        n >>= 1
        if n:
            base, b_exp = _renorm(base @ base, 2 * b_exp)
    return result, r_exp


def continuant_derivatives(params: KToeplitzParams, N: int, z, order: int) -> np.ndarray:
    """Derivatives ``0..order`` of ``det(z I + M_N)`` at each point.

    Returns an array of shape ``(order + 1, len(z))`` sharing one (unknown)
    positive scale factor per point, which is all root polishing needs.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    k = params.k
    a = np.array(params.a, dtype=complex)
    u = np.array(params.u, dtype=complex)
    prev = np.zeros((order + 1, len(z)), dtype=complex)
    cur = np.zeros_like(prev)
    cur[0] = 1.0
    js = np.arange(1, order + 1)[:, None]
    for i in range(N):
        t = z + a[i % k]
        nxt = t * cur
        nxt[1:] += js * cur[:-1]
        if i > 0:
            nxt -= u[(i - 1) % k] * prev
        prev, cur = cur, nxt
        m = np.max(np.abs(cur), axis=0)
        big = m > _BIG
        if big.any():
            scale = np.where(big, 1.0 / np.where(big, m, 1.0), 1.0)
            prev, cur = prev * scale, cur * scale
    return cur
