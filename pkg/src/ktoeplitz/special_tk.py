"""Closed forms for the trace polynomial and recurrence constant of T_k."""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .cpoly import ComplexPolynomial

INT64_MAX = 2 ** 63 - 1


class SigmaOverflowError(OverflowError):
    pass


@lru_cache(maxsize=None)
def _sigma_table(n: int, m: int) -> int:
    # iterated partial sums: sigma^n(m) = sigma^n(m-1) + sigma^(n-1)(m)
    if n == 0 or m == 1:
        return 1
    return _sigma_table(n, m - 1) + _sigma_table(n - 1, m)


def sigma(n: int, m: int) -> int:
    """Repeated partial-sum operator, equal to ``C(n + m - 1, n)``."""
    if n < 0 or m < 1:
        raise ValueError("sigma needs n >= 0 and m >= 1")
    value = comb(n + m - 1, n)
    if value > INT64_MAX:
        raise SigmaOverflowError(f"sigma^{n}({m}) = {value} exceeds the 64-bit range")
    return value


def sigma_recursive(n: int, m: int) -> int:
    """Same quantity from the summation recurrence (memoized)."""
    if n < 0 or m < 1:
        raise ValueError("sigma needs n >= 0 and m >= 1")
    return _sigma_table(n, m)


def _binom(n: int, r: int) -> int:
    # C(n, r) vanishes for n < r, including negative upper index with r > 0
    if r < 0 or n < r:
        return 1 if r == 0 else 0
    return comb(n, r)


def q_closed_form(k: int) -> ComplexPolynomial:
    """Trace polynomial of T_k as a sum of binomial-weighted odd powers."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"closed form needs odd k >= 1, got {k}")
    if k == 1:
        return ComplexPolynomial([0, 1])
    coeffs = [0] * (k + 1)
    half = (k + 1) // 2
    alpha = (k - 3) // 4
    for v in range(alpha + 1):
        coeffs[k - 4 * v] += _binom(half - v - 1, v)
        coeffs[k - 4 * v - 2] -= _binom(half - v - 2, v)
    if k % 4 == 1:
        coeffs[1] += 1
    return ComplexPolynomial(coeffs)


def gamma_closed_form(k: int) -> int:
    """Coefficient on ``p_{n-2}`` in the T_k recurrence: +1 if k = 3 mod 4, else -1."""
    if k < 1 or (k % 2 == 0 and k != 2):
        raise ValueError(f"T_k is defined for odd k or k = 2, got {k}")
    return (-1) ** ((k % 4) % 3)


def trace_ladder(kmax: int) -> dict[int, ComplexPolynomial]:
    """Traces for odd k from ``tr(U_{k+4}) = z^2 tr(U_{k+2}) + tr(U_k)``."""
    z2 = ComplexPolynomial([0, 0, 1])
    out = {1: ComplexPolynomial([0, 1]), 3: ComplexPolynomial([0, -1, 0, 1])}
    for k in range(5, kmax + 1, 2):
        out[k] = z2 * out[k - 2] + out[k - 4]
    return out
