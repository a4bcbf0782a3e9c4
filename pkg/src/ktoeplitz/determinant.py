"""Determinants of tridiagonal k-Toeplitz matrices at arbitrary dimension.

Two fast routes are provided:

* dimensions ``n*k``: the period transfer matrix at ``z = 0`` raised to the
  ``n - 1`` power by binary powering;
* any dimension ``N``: the ``k`` coupled determinant recurrences of the cyclic
  equivalents are merged into one constant-coefficient recurrence of order
  ``2k``, whose closed-form solution is fitted to the first ``2k``
  determinants.

``det_direct`` is the plain O(N) continuant and serves as reference.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpoly import ComplexPolynomial, roots as poly_roots
from .model import KToeplitzParams
from .transfer import continuant_values, scaled_matpow_apply, summarize

# roots closer than this (relative) are treated as one repeated root
ROOT_CLUSTER_RTOL = 1e-6
FIT_RTOL = 1e-6


class DeterminantFitError(ArithmeticError):
    """The closed-form fit is singular or does not reproduce its data."""

    def __init__(self, message: str, condition: float, residual: float):
        super().__init__(f"{message} (cond = {condition:.3e}, residual = {residual:.3e})")
        self.condition = condition
        self.residual = residual


def det_direct(params: KToeplitzParams, N: int) -> complex:
    """``det M_N`` by the scalar continuant recurrence."""
    cv = continuant_values(params, N, [0.0])
    return complex(np.ldexp(cv.value.real[0], int(cv.exp[0]))
                   + 1j * np.ldexp(cv.value.imag[0], int(cv.exp[0])))


def det_at_multiple(params: KToeplitzParams, n: int) -> complex:
    """``det`` of the ``n*k`` dimensional instance, O(k + log n) after setup."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = summarize(params)
    vec0 = np.array([s.p1(0.0), s.q1(0.0)], dtype=complex)
    vec, e = scaled_matpow_apply(s.u_k.at(0.0), n - 1, vec0)
    return complex(np.ldexp(vec[0].real, e) + 1j * np.ldexp(vec[0].imag, e))


def coupled_transition(params: KToeplitzParams) -> np.ndarray:
    """State matrix of the coupled cyclic-equivalent recurrences.

    With ``W_j(N)`` the determinant of the N x N instance whose first row is
    period phase ``j``, expanding along the first row gives
    ``W_j(N) = a_j W_{j+1}(N-1) - u_j W_{j+2}(N-2)``. The state
    ``[W_0..W_{k-1} at N, W_0..W_{k-1} at N-1]`` advances by this matrix.
    """
    k = params.k
    a, u = params.a, params.u
    A = np.zeros((2 * k, 2 * k), dtype=complex)
    for j in range(k):
        A[j, (j + 1) % k] += a[j]
        A[j, k + (j + 2) % k] -= u[j]
        A[k + j, j] = 1.0
    return A


def characteristic_coefficients(A: np.ndarray) -> np.ndarray:
    """``det(d I - A)`` coefficients, ascending, by Faddeev-LeVerrier."""
    n = A.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n, dtype=complex)
    for m in range(1, n + 1):
        M = A @ M + c[n - m + 1] * eye
        c[n - m] = -np.trace(A @ M) / m
    return c


@dataclass(frozen=True)
class DeterminantModel:
    """Closed form ``det M_N = sum_i c_i N^{m_i} d_i^(N - origin)``."""

    order: int
    recurrence: ComplexPolynomial
    roots: np.ndarray
    powers: np.ndarray
    constants: np.ndarray
    origin: int
    y_init: np.ndarray
    condition: float

    def basis(self, N) -> np.ndarray:
        N = np.atleast_1d(np.asarray(N, dtype=float))
        d = self.roots[None, :]
        shift = (N - self.origin)[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = shift * np.log(d) + self.powers[None, :] * np.log(N)[:, None]
        return np.exp(logs)

    def real_form(self) -> list[tuple[str, float, float, float]]:
        """Constants for a real cos/sin presentation ``c * |d|^N * f(N theta)``.

        Returns ``(kind, c, |d|, theta)`` tuples with ``kind`` in
        ``{"exp", "cos", "sin"}``, expressed for the unshifted basis
        ``d^N`` (simple roots only). Conjugate-pair partners are folded
        into one cos/sin pair; lone complex roots are reported as two
        entries whose constants may be complex-valued in general.
        """
        out: list[tuple[str, float, float, float]] = []
        used = set()
        c0 = self.constants / self.roots ** self.origin
        for i, d in enumerate(self.roots):
            if i in used or self.powers[i] != 0:
                continue
            used.add(i)
            if abs(d.imag) <= 1e-12 * abs(d) and d.real > 0:
                out.append(("exp", float(c0[i].real), float(abs(d)), 0.0))
                continue
            j = next((j for j in range(len(self.roots)) if j not in used
                      and abs(self.roots[j] - np.conj(d)) <= 1e-9 * abs(d)), None)
            if j is None:
                out.append(("cos", float(c0[i].real), float(abs(d)), float(np.angle(d))))
                out.append(("sin", float(-c0[i].imag), float(abs(d)), float(np.angle(d))))
                continue
            used.add(j)
            if np.angle(d) < 0:
                i, j = j, i
                d = self.roots[i]
            theta = float(np.angle(d))
            out.append(("cos", float((c0[i] + c0[j]).real), float(abs(d)), theta))
            out.append(("sin", float((1j * (c0[i] - c0[j])).real), float(abs(d)), theta))
        return out


def _cluster(raw: np.ndarray, rec: ComplexPolynomial) -> tuple[np.ndarray, np.ndarray]:
    """Merge nearly repeated roots; returns (roots, powers) for the basis.

    A root of multiplicity m is a simple root of the (m-1)-th derivative,
    so the cluster mean is polished by Newton steps on that derivative.
    """
    remaining = list(raw)
    roots, powers = [], []
    while remaining:
        d = remaining.pop(0)
        group = [d]
        tol = ROOT_CLUSTER_RTOL * max(1.0, abs(d))
        for r in list(remaining):
            if abs(r - d) <= tol:
                group.append(r)
                remaining.remove(r)
        centre = complex(np.mean(group))
        if len(group) > 1:
            f = rec
            for _ in range(len(group) - 1):
                f = f.derivative()
            df = f.derivative()
            for _ in range(4):
                slope = df(centre)
                if slope == 0:
                    break
                centre -= f(centre) / slope
        for m in range(len(group)):
            roots.append(centre)
            powers.append(m)
    return np.array(roots, dtype=complex), np.array(powers, dtype=float)


def _fit(roots, powers, ys, origin, first_dim):
    dims = np.arange(first_dim, first_dim + len(ys))
    probe = DeterminantModel(len(ys), ComplexPolynomial([1]), roots, powers,
                             np.zeros(len(ys), complex), origin, ys, 0.0)
    B = probe.basis(dims)
    cond = float(np.linalg.cond(B))
    if not np.all(np.isfinite(B)) or not np.isfinite(cond):
        return None, cond, np.inf
    c = np.linalg.solve(B, ys)
    scale = max(float(np.abs(ys).max()), np.finfo(float).tiny)
    resid = float(np.abs(B @ c - ys).max()) / scale
    return c, cond, resid


def build_general_model(params: KToeplitzParams) -> DeterminantModel:
    """Fit the order-2k closed form for ``det M_N`` at every N."""
    k = params.k
    order = 2 * k
    if any(uj == 0 for uj in params.u):
        # the constant term of the recurrence is prod(u), so zero is a root
        raise DeterminantFitError(
            "characteristic roots at zero: some coupling u_j vanishes and the "
            "matrix decouples", np.inf, np.inf)
    coeffs = characteristic_coefficients(coupled_transition(params))
    rec = ComplexPolynomial(coeffs)
    raw = poly_roots(rec)
    roots, powers = _cluster(raw, rec)
    ys_all = np.array([det_direct(params, N) for N in range(1, order + k + 1)])

    attempts = ((1, 1), (k + 1, k + 1))
    best = None
    for first, origin in attempts:
        ys = ys_all[first - 1: first - 1 + order]
        c, cond, resid = _fit(roots, powers, ys, origin, first)
        if c is not None and (best is None or resid < best[2]):
            best = (c, cond, resid, origin)
        if c is not None and resid <= FIT_RTOL:
            break
    if best is None or best[2] > FIT_RTOL:
        cond = best[1] if best else np.inf
        resid = best[2] if best else np.inf
        raise DeterminantFitError("closed-form fit is ill-conditioned", cond, resid)
    c, cond, _, origin = best
    return DeterminantModel(order, rec, roots, powers, c, origin,
                            ys_all[:order], cond)


def det_general(model: DeterminantModel, N: int) -> complex:
    if N < 1:
        raise ValueError("N must be >= 1")
    return complex(model.basis([N])[0] @ model.constants)
