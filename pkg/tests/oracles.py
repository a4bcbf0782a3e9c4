"""Independent reference computations used only by the tests.

Nothing here reuses the package's recurrences: determinants come from Laplace
expansion, dominant roots from power iteration on the companion matrix.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ktoeplitz.cpoly import ComplexPolynomial
from ktoeplitz.model import materialize


def random_params(rng, k, zero_diag=False):
    from ktoeplitz.model import KToeplitzParams

    def disc(n):
        return np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    a = np.zeros(k) if zero_diag else disc(k)
    return KToeplitzParams(a, disc(k), disc(k))


def cofactor_charpoly(params, N: int) -> ComplexPolynomial:
    """``det(z I + M_N)`` by first-row Laplace expansion over column subsets."""
    M = materialize(params, N).dense()
    z = ComplexPolynomial([0, 1])
    entry = [[(z + M[i, j]) if i == j else ComplexPolynomial([M[i, j]])
              for j in range(N)] for i in range(N)]
    nonzero = [[M[i, j] != 0 or i == j for j in range(N)] for i in range(N)]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> ComplexPolynomial:
        # determinant of rows row..N-1 restricted to the column bitmask ``cols``
        if row == N:
            return ComplexPolynomial([1])
        total = ComplexPolynomial()
        pos = 0
        for c in range(N):
            if not cols >> c & 1:
                continue
            if nonzero[row][c]:
                term = entry[row][c] * minor(row + 1, cols & ~(1 << c))
                total = total - term if pos % 2 else total + term
            pos += 1
        return total

    return minor(0, (1 << N) - 1)


def companion_dominant_root(coeffs, shift: complex = 0.0, iters: int = 5000) -> complex:
    """Root farthest from ``shift``, by power iteration on the shifted companion matrix."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[-1]
    n = len(c) - 1
    C = np.zeros((n, n), dtype=complex)
    C[0, :] = -c[-2::-1]
    C[1:, :-1] = np.eye(n - 1)
    C -= shift * np.eye(n)
    v = np.ones(n, dtype=complex)
    lam = 0j
    for _ in range(iters):
        w = C @ v
        lam = (np.vdot(v, w) / np.vdot(v, v))
        v = w / np.linalg.norm(w)
    return complex(lam) + shift


def dense_det(params, N: int) -> complex:
    return complex(np.linalg.det(materialize(params, N).dense()))


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def matched_sort(a, b):
    """Pair two equal-size multisets optimally; returns the aligned arrays."""
    from scipy.optimize import linear_sum_assignment
    a, b = np.asarray(a), np.asarray(b)
    r, c = linear_sum_assignment(np.abs(a[:, None] - b[None, :]))
    return a[r], b[c]
