"""Limiting spectral support, finite-dimension eigenvalues and diagnostics.

Public results are reported for eigenvalues ``lambda`` of the matrix; the
polynomial work happens in ``z = -lambda``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from .cpoly import DEFAULT_TOL, GOLDEN_ANGLE, RootFindingError, roots as poly_roots
from .model import KToeplitzParams
from .transfer import (continuant_derivatives, continuant_values, summarize,
                       transfer_eigenvalues)

KIND_TOL = 1e-12
REAL_AXIS_TOL = 1e-8
COLLISION_TOL = 1e-8
EIG_TOL = 1e-12
EIG_MAX_ITER = 300
# converged roots closer than this (relative) are polished as one multiple root
CLUSTER_RTOL = 1e-6


class DegenerateSupportError(ValueError):
    """gamma = 0: the chain decouples into finite blocks."""


class SupportSolveError(RuntimeError):
    def __init__(self, theta: float, cause: RootFindingError):
        super().__init__(f"root solve failed at theta = {theta:.6f}: {cause}")
        self.theta = theta
        self.cause = cause


class InterlacingHypothesisError(ValueError):
    """Interlacing is only asserted for real negative gamma."""


@dataclass(frozen=True)
class SupportLine:
    """The segment ``L`` that the trace polynomial sweeps on the support.

    ``l(theta) = sqrt|gamma| (e^{i theta} - e^{i(alpha - theta)})``, which
    equals ``half_extent * direction * sin(theta - alpha/2)``.
    """

    gamma: complex
    alpha: float
    direction: complex
    half_extent: float
    kind: str

    def l(self, theta):
        t = np.asarray(theta, dtype=float)
        s = math.sqrt(abs(self.gamma))
        return s * (np.exp(1j * t) - np.exp(1j * (self.alpha - t)))

    def l_product_form(self, theta):
        """Same values written as ``sqrt|gamma| C (sin t - tan(alpha/2) cos t)``."""
        t = np.asarray(theta, dtype=float)
        c = 1j + np.exp(1j * (self.alpha + math.pi / 2))
        return math.sqrt(abs(self.gamma)) * c * (np.sin(t) - math.tan(self.alpha / 2) * np.cos(t))

    def coordinate(self, l) -> np.ndarray:
        """Signed position along the line and perpendicular offset."""
        w = np.asarray(l, dtype=complex) / self.direction
        return w.real, w.imag


def support_line(gamma: complex) -> SupportLine:
    gamma = complex(gamma)
    if gamma == 0:
        raise DegenerateSupportError(
            "gamma = 0: some coupling vanishes, the matrix splits into independent "
            "period blocks; compute block eigenvalues directly instead")
    alpha = math.atan2(gamma.imag, gamma.real)
    direction = 1j * complex(np.exp(1j * alpha / 2))
    if abs(gamma.imag) <= KIND_TOL * abs(gamma):
        kind = "imaginary-interval" if gamma.real > 0 else "real-interval"
    else:
        kind = "general-line"
    return SupportLine(gamma, alpha, direction, 2.0 * math.sqrt(abs(gamma)), kind)


@dataclass
class SpectralSupport:
    theta_grid: np.ndarray
    samples: np.ndarray          # (n_theta, k), lambda convention, solver order
    branches: np.ndarray         # (k, n_theta), continuity-tracked
    line: SupportLine
    collisions: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.branches.shape[0]

    def points(self) -> np.ndarray:
        return self.branches.ravel()


def _track(rows: np.ndarray) -> np.ndarray:
    """Reorder each row to follow the previous one (min-cost matching)."""
    out = np.empty_like(rows)
    out[0] = rows[0]
    for i in range(1, len(rows)):
        cost = np.abs(out[i - 1][:, None] - rows[i][None, :])
        _, col = linear_sum_assignment(cost)
        out[i] = rows[i][col]
    return out.T.copy()


def sample_support(params: KToeplitzParams, n_theta: int = 512,
                   tol: float = DEFAULT_TOL) -> SpectralSupport:
    """Solve ``Q(z) = l(theta)`` on a uniform theta grid over [0, 2 pi)."""
    if n_theta < 8:
        raise ValueError("n_theta must be >= 8")
    s = summarize(params)
    line = support_line(s.gamma)
    thetas = 2.0 * math.pi * np.arange(n_theta) / n_theta
    ls = line.l(thetas)
    rows = np.empty((n_theta, params.k), dtype=complex)
    collisions = []
    for i, (t, lv) in enumerate(zip(thetas, ls)):
        try:
            z = poly_roots(s.q - lv, tol=tol)
        except RootFindingError as exc:
            raise SupportSolveError(float(t), exc) from exc
        rows[i] = -z
        if params.k > 1:
            d = np.abs(rows[i][:, None] - rows[i][None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() < COLLISION_TOL:
                collisions.append(float(t))
    return SpectralSupport(thetas, rows, _track(rows), line, collisions)


def branch_separation(support: SpectralSupport) -> float:
    """Smallest distance between sample points of two different branches."""
    best = np.inf
    for i in range(support.k):
        tree = cKDTree(np.column_stack([support.branches[i].real, support.branches[i].imag]))
        for j in range(i + 1, support.k):
            pts = np.column_stack([support.branches[j].real, support.branches[j].imag])
            best = min(best, float(tree.query(pts)[0].min()))
    return best


@dataclass
class EigenResult:
    eigenvalues: np.ndarray      # lambda convention
    residuals: np.ndarray        # relative Newton correction at each root
    converged: np.ndarray
    iterations: int
    r_values: np.ndarray | None = None

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    @property
    def ok(self) -> bool:
        return bool(self.converged.all())


def _seed_points(params: KToeplitzParams, N: int, s) -> np.ndarray:
    k = params.k
    if s.gamma != 0:
        line = support_line(s.gamma)
        m = -(-N // k)
        thetas = line.alpha / 2 - math.pi / 2 + math.pi * (np.arange(m) + 0.5) / m
        zs = []
        try:
            for lv in line.l(thetas):
                zs.extend(poly_roots(s.q - lv))
        except RootFindingError:
            zs = []
        if len(zs) >= N:
            z = np.array(zs[:N], dtype=complex)
            jitter = 1e-6 * (1.0 + np.abs(z)) * np.exp(1j * (GOLDEN_ANGLE * np.arange(N) + 0.3))
            return z + jitter
    a = np.array(params.a, dtype=complex)
    radius = float(np.abs(a).max() + np.abs(params.x).max() + np.abs(params.y).max()) + 0.5
    return -a.mean() + radius * np.exp(1j * (GOLDEN_ANGLE * np.arange(N) + 0.25))


def _newton_residual(params: KToeplitzParams, N: int, z: np.ndarray):
    cv = continuant_values(params, N, z)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        w = cv.value / cv.deriv
    w = np.where(cv.value == 0, 0.0, w)
    res = np.abs(w) / (1.0 + np.abs(z))
    return w, np.where(np.isfinite(res), res, np.inf)


def eigenvalues(params: KToeplitzParams, N: int, tol: float = EIG_TOL,
                max_iter: int = EIG_MAX_ITER) -> EigenResult:
    """All N eigenvalues by Aberth-Ehrlich iteration on the continuant.

    The characteristic polynomial is never expanded; each step evaluates
    ``det(z I + M_N)`` and its derivative by the rescaled scalar recurrence.
    Starting points are perturbed support points when gamma is nonzero.

    ``residuals`` holds the relative Newton correction ``|p/p'| / (1 + |z|)``
    at the returned points, an a-posteriori estimate of the relative root
    error. Roots that miss ``tol`` are flagged in ``converged``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    s = summarize(params)
    if N == 1:
        lam = np.array([params.a[0]], dtype=complex)
        return EigenResult(lam, np.zeros(1), np.ones(1, bool), 0)
    z = _seed_points(params, N, s)
    off = ~np.eye(N, dtype=bool)
    polish = 1
    it = 0
    best_z, best_worst = z.copy(), np.inf
    for it in range(1, max_iter + 1):
        w, res = _newton_residual(params, N, z)
        worst = float(res.max())
        if worst < best_worst:
            best_z, best_worst = z.copy(), worst
        if worst <= tol:
            if polish == 0:
                break
            polish -= 1
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = z[:, None] - z[None, :]
            inv = np.where(off, 1.0 / np.where(off, diff, 1.0), 0.0)
            step = w / (1.0 - w * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
    _, res = _newton_residual(params, N, z)
    if res.max() > best_worst:
        z = best_z
        _, res = _newton_residual(params, N, z)
    z, res = _polish_clusters(params, N, z, res)
    return EigenResult(-z, res, res <= tol, it)


def _clusters(z: np.ndarray) -> list[np.ndarray]:
    order = np.argsort(z.real)
    groups, seen = [], set()
    for a in range(len(order)):
        i = order[a]
        if i in seen:
            continue
        tol = CLUSTER_RTOL * (1.0 + abs(z[i]))
        members = [i]
        for b in range(a + 1, len(order)):
            j = order[b]
            if z[j].real - z[i].real > tol:
                break
            if j not in seen and abs(z[j] - z[i]) <= tol:
                members.append(j)
        if len(members) > 1:
            seen.update(members)
            groups.append(np.array(members))
    return groups


def _polish_clusters(params, N, z, res):
    """Snap each tight cluster of m roots onto the root of ``p^(m-1)``.

    An m-fold root is only resolved to about eps^(1/m) by simultaneous
    iteration, while it is a simple root of the (m-1)-th derivative.
    """
    z = z.copy()
    res = res.copy()
    for members in _clusters(z):
        m = len(members)
        c = complex(z[members].mean())
        for _ in range(6):
            d = continuant_derivatives(params, N, [c], m)[:, 0]
            if d[m] == 0:
                break
            step = d[m - 1] / d[m]
            c -= step
            if abs(step) <= 1e-16 * (1.0 + abs(c)):
                break
        if abs(c - z[members].mean()) > CLUSTER_RTOL * (1.0 + abs(c)):
            continue
        z[members] = c
        res[members] = abs(step) / (1.0 + abs(c))
    return z, res


def dense_eigenvalues(params: KToeplitzParams, N: int) -> np.ndarray:
    """Reference eigenvalues from LAPACK on the materialized matrix."""
    from .model import materialize
    return np.linalg.eigvals(materialize(params, N).dense())


@dataclass
class RConvergence:
    """Transfer-eigenvalue moduli at the eigenvalues of one dimension.

    At a point of the limiting set both roots of ``r^2 - Q r - gamma`` have
    modulus ``sqrt|gamma|``; at finite N they straddle it.
    """

    eigenvalues: np.ndarray
    r_large: np.ndarray
    r_small: np.ndarray
    target: float

    @property
    def r_min(self) -> float:
        return float(self.r_small.min())

    @property
    def r_max(self) -> float:
        return float(self.r_large.max())

    def pairs(self) -> list[tuple[complex, float]]:
        out = []
        for lam, big, small in zip(self.eigenvalues, self.r_large, self.r_small):
            out.append((complex(lam), float(big)))
            out.append((complex(lam), float(small)))
        return out


def r_convergence(params: KToeplitzParams, N: int,
                  eigs: EigenResult | None = None) -> RConvergence:
    k = params.k
    if N % k or N // k < 2:
        raise ValueError("N must be a multiple of k with N/k >= 2")
    s = summarize(params)
    eigs = eigs or eigenvalues(params, N)
    big, small = transfer_eigenvalues(s, -eigs.eigenvalues)
    return RConvergence(eigs.eigenvalues, np.abs(big), np.abs(small),
                        math.sqrt(abs(s.gamma)))


def support_distance(support: SpectralSupport | np.ndarray, eigs) -> float:
    """Max over eigenvalues of the distance to the nearest support sample."""
    pts = support.points() if isinstance(support, SpectralSupport) else np.ravel(support)
    lam = eigs.eigenvalues if isinstance(eigs, EigenResult) else np.ravel(eigs)
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    dist, _ = tree.query(np.column_stack([lam.real, lam.imag]))
    return float(dist.max())


def stray_count(support: SpectralSupport, eigs: EigenResult, factor: float = 3.0) -> int:
    """Eigenvalues farther from the support than ``factor`` x the median distance."""
    pts = support.points()
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    lam = eigs.eigenvalues
    dist, _ = tree.query(np.column_stack([lam.real, lam.imag]))
    med = float(np.median(dist))
    return int(np.sum(dist > factor * med)) if med > 0 else int(np.sum(dist > 0))


@dataclass
class InterlacingReport:
    status: str                  # "pass", "fail" or "indeterminate"
    n: int
    smaller: np.ndarray          # real eigenvalues at dimension n*k
    larger: np.ndarray           # real eigenvalues at dimension (n+1)*k
    violation: tuple[float, float] | None = None
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def real_axis_eigenvalues(eigs: EigenResult, tol: float = REAL_AXIS_TOL) -> np.ndarray:
    lam = eigs.eigenvalues
    return np.sort(lam[np.abs(lam.imag) < tol].real)


def check_interlacing(params: KToeplitzParams, n: int) -> InterlacingReport:
    """Strict interlacing of real eigenvalues at dimensions nk and nk + k."""
    s = summarize(params)
    g = s.gamma
    if g == 0 or abs(g.imag) > KIND_TOL * abs(g) or g.real >= 0:
        raise InterlacingHypothesisError(
            f"interlacing needs gamma real and negative, got gamma = {g}")
    if n < 2:
        raise ValueError("n must be >= 2")
    k = params.k
    xs = real_axis_eigenvalues(eigenvalues(params, n * k))
    ys = real_axis_eigenvalues(eigenvalues(params, (n + 1) * k))
    if len(ys) != len(xs) + 1:
        return InterlacingReport("fail", n, xs, ys, None,
                                 f"expected {len(xs) + 1} real eigenvalues at the larger "
                                 f"dimension, found {len(ys)}")
    merged = np.empty(len(xs) + len(ys))
    merged[0::2] = ys
    merged[1::2] = xs
    gaps = np.diff(merged)
    close = np.flatnonzero(np.abs(gaps) <= COLLISION_TOL)
    bad = np.flatnonzero(gaps <= 0)
    bad = bad[~np.isin(bad, close)]
    if bad.size:
        i = int(bad[0])
        return InterlacingReport("fail", n, xs, ys, (float(merged[i]), float(merged[i + 1])),
                                 "order violated")
    if close.size:
        i = int(close[0])
        return InterlacingReport("indeterminate", n, xs, ys,
                                 (float(merged[i]), float(merged[i + 1])),
                                 "coincident eigenvalues; interlacing undefined there")
    return InterlacingReport("pass", n, xs, ys)
