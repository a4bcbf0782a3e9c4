"""Dense complex polynomials in ``z`` and an Aberth-Ehrlich root finder."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class RootFindingError(RuntimeError):
    """Raised when the simultaneous iteration does not converge.

    ``roots`` holds the best iterate and ``residuals`` the relative residual
    of every entry of it.
    """

    def __init__(self, message: str, roots: np.ndarray, residuals: np.ndarray):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


def _trim(coeffs: np.ndarray) -> np.ndarray:
    # exact-zero trimming only
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Polynomial with complex coefficients in ascending order.

    ``coeffs[i]`` multiplies ``z**i``. The zero polynomial has no
    coefficients.
    """

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex] = ()):
        arr = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                       dtype=complex).ravel()
        arr = _trim(arr).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def constant(cls, c: complex) -> "ComplexPolynomial":
        return cls([c])

    @classmethod
    def z(cls) -> "ComplexPolynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "ComplexPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1]) if len(self.coeffs) else 0j

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def __repr__(self):
        return f"ComplexPolynomial({format_poly(self)})"

    def derivative(self) -> "ComplexPolynomial":
        return derivative(self)

    def roots(self, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
        return roots(self, tol=tol, max_iter=max_iter)

    def almost_equal(self, other: "ComplexPolynomial", rtol: float = 1e-12) -> bool:
        """Coefficientwise comparison relative to the largest coefficient."""
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0), 1e-300)
        return bool(np.abs(a - b).max(initial=0.0) <= rtol * scale)


def _coerce(p) -> ComplexPolynomial:
    if isinstance(p, ComplexPolynomial):
        return p
    if isinstance(p, (int, float, complex, np.number)):
        return ComplexPolynomial([p])
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


def evaluate(p: ComplexPolynomial, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def magnitude_bound(p: ComplexPolynomial, z):
    """``sum |c_i| |z|^i``, the scale used for relative residuals."""
    az = np.abs(np.asarray(z, dtype=complex))
    acc = np.zeros_like(az)
    for c in np.abs(p.coeffs[::-1]):
        acc = acc * az + c
    return float(acc) if acc.ndim == 0 else acc


def derivative(p: ComplexPolynomial) -> ComplexPolynomial:
    if p.degree < 1:
        return ComplexPolynomial()
    return ComplexPolynomial(p.coeffs[1:] * np.arange(1, len(p.coeffs)))


def add(p: ComplexPolynomial, q: ComplexPolynomial) -> ComplexPolynomial:
    n = max(len(p.coeffs), len(q.coeffs))
    out = np.zeros(n, complex)
    out[: len(p.coeffs)] += p.coeffs
    out[: len(q.coeffs)] += q.coeffs
    return ComplexPolynomial(out)


def mul(p: ComplexPolynomial, q: ComplexPolynomial) -> ComplexPolynomial:
    if p.is_zero() or q.is_zero():
        return ComplexPolynomial()
    return ComplexPolynomial(np.convolve(p.coeffs, q.coeffs))


def _initial_guesses(p: ComplexPolynomial) -> np.ndarray:
    n = p.degree
    radius = 1.0 + float(np.max(np.abs(p.coeffs[:-1] / p.coeffs[-1])))
    angles = GOLDEN_ANGLE * np.arange(n) + 0.25
    return radius * np.exp(1j * angles)


def roots(p: ComplexPolynomial, tol: float = DEFAULT_TOL,
          max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """All roots of ``p`` by Aberth-Ehrlich iteration.

    Returns exactly ``p.degree`` roots; repeated roots come back as nearby
    separate values. Every root satisfies
    ``|p(r)| <= tol * magnitude_bound(p, r)``; otherwise
    :class:`RootFindingError` is raised with the best iterate.
    """
    if p.degree < 1:
        raise ValueError("roots() needs a polynomial of degree >= 1")
    if p.degree == 1:
        return np.array([-p.coeffs[0] / p.coeffs[1]])

    dp = derivative(p)
    z = _initial_guesses(p)
    n = len(z)
    off_diag = ~np.eye(n, dtype=bool)
    polish = 2
    best, best_worst = z.copy(), np.inf
    res = np.full(n, np.inf)
    for _ in range(max_iter):
        pv = evaluate(p, z)
        res = np.abs(pv) / np.maximum(magnitude_bound(p, z), np.finfo(float).tiny)
        worst = float(res.max())
        if worst < best_worst:
            best, best_worst = z.copy(), worst
        if worst <= tol:
            if polish == 0:
                return z
            polish -= 1
        dv = evaluate(dp, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = pv / dv
            diff = z[:, None] - z[None, :]
            inv = np.where(off_diag, 1.0 / np.where(off_diag, diff, 1.0), 0.0)
            step = w / (1.0 - w * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(res == 0.0, 0.0, step)
        z = z - step
    pv = evaluate(p, best)
    res = np.abs(pv) / np.maximum(magnitude_bound(p, best), np.finfo(float).tiny)
    if res.max() <= tol:
        return best
    raise RootFindingError(
        f"root iteration did not converge in {max_iter} steps "
        f"(worst relative residual {res.max():.3e})", best, res)


def format_scalar(c: complex) -> str:
    re, im = c.real, c.imag
    if im == 0:
        return f"{int(re)}" if float(re).is_integer() else f"{re:.12g}"
    if re == 0:
        return f"{im:.12g}j"
    return f"({re:.12g}{im:+.12g}j)"


def format_poly(p: ComplexPolynomial, var: str = "z") -> str:
    """Human-readable form, highest power first, e.g. ``z^3 - z``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i in range(p.degree, -1, -1):
        c = complex(p.coeffs[i])
        if c == 0:
            continue
        sign = "+"
        if c.imag == 0 and c.real < 0:
            sign, c = "-", -c
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = format_scalar(c)
        if mono and coef == "1":
            coef = ""
        parts.append((sign, f"{coef}*{mono}" if coef and mono else coef + mono))
    first_sign, first_term = parts[0]
    out = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out
