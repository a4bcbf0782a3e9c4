"""Invariant suite behind ``ktoeplitz check``.

Each check returns ``(name, passed, detail)``. The parameter draws are seeded
so a run is reproducible.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import determinant as det
from . import special_tk as stk
from . import spectrum as sp
from . import transfer as tr
from .cpoly import ComplexPolynomial
from .model import KToeplitzParams, make_jacobi, make_mprime, make_tk, shift

CheckResult = tuple[str, bool, str]


def _random_params(rng: np.random.Generator, k: int) -> KToeplitzParams:
    def disc(n):
        return np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    return KToeplitzParams(disc(k), disc(k), disc(k))


def matched_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max distance under the optimal one-to-one matching of two multisets."""
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if len(r) else 0.0


def check_transfer_structure(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, 7):
        p = _random_params(rng, k)
        s = tr.summarize(p)
        u = tr.build_uk(p)
        if not s.q.almost_equal(u.trace(), 0.0):
            return "transfer: trace/det structure", False, f"trace k={k}"
        # det U_k is the constant prod(u); roundoff may leave tiny higher terms
        err = u.det() - ComplexPolynomial([s.det_u])
        worst = max(worst, float(np.abs(err.coeffs).max(initial=0.0)) / abs(s.det_u))
        if k > 1:
            tail = KToeplitzParams(p.a[1:], p.x[1:], p.y[1:])
            prod = tr.build_u1(p.a[0], p.u[0]) @ tr.build_uk(tail)
            if not all(getattr(prod, f).almost_equal(getattr(u, f), 1e-12) for f in "ABCD"):
                return "transfer: trace/det structure", False, f"product law fails at k={k}"
        start = u.at(0.7 + 0.2j) @ np.array([1.0, 0.0])
        if abs(start[0] - s.p1(0.7 + 0.2j)) > 1e-12 * (1 + abs(start[0])) or \
                abs(start[1] - s.q1(0.7 + 0.2j)) > 1e-12 * (1 + abs(start[1])):
            return "transfer: trace/det structure", False, f"initial vector k={k}"
    return "transfer: trace/det structure", worst < 1e-12, f"max rel det error {worst:.2e}"


def check_recurrence(seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    for k in range(1, 5):
        p = _random_params(rng, k)
        s = tr.summarize(p)
        polys = [tr.char_poly(p, n, s) for n in range(1, 6)]
        for n in range(1, 4):
            rhs = s.q * polys[n] - s.det_u * polys[n - 1]
            if not rhs.almost_equal(polys[n + 1], 1e-12):
                return "transfer: three-term recurrence", False, f"k={k} n={n + 1}"
        direct = tr.continuant_poly([p.a[i % k] for i in range(3 * k)],
                                    [p.u[i % k] for i in range(3 * k)])
        if not direct.almost_equal(polys[2], 1e-10):
            return "transfer: three-term recurrence", False, f"continuant mismatch k={k}"
    return "transfer: three-term recurrence", True, "k<=4, n<=5"


def check_eval_pn(seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (1, 2, 3):
        p = _random_params(rng, k)
        for n in (1, 2, 5, 9):
            z = complex(*rng.normal(size=2))
            v, e = tr.eval_pn(p, n, z)
            ref = tr.char_poly(p, n)(z)
            worst = max(worst, abs(v * 2.0 ** e - ref) / max(abs(ref), 1e-300))
    return "transfer: scaled evaluation", worst < 1e-9, f"max rel error {worst:.2e}"


def check_closed_form_q() -> CheckResult:
    bad = [k for k in range(1, 15, 2)
           if stk.q_closed_form(k) != tr.summarize(make_tk(k)).q]
    return "special_tk: closed-form Q", not bad, f"mismatch at k={bad}" if bad else "k=1..13"


def check_closed_form_gamma() -> CheckResult:
    bad = [k for k in (1, 2, 3, 5, 7, 9, 11, 13)
           if stk.gamma_closed_form(k) != tr.summarize(make_tk(k)).gamma]
    return "special_tk: closed-form gamma", not bad, f"mismatch at k={bad}" if bad else "ok"


def check_trace_ladder() -> CheckResult:
    ladder = stk.trace_ladder(17)
    bad = [k for k in range(1, 18, 2) if ladder[k] != tr.summarize(make_tk(k)).q]
    return "special_tk: trace ladder", not bad, f"mismatch at k={bad}" if bad else "k=1..17"


def check_parity() -> CheckResult:
    ok = all(np.all(stk.q_closed_form(k).coeffs[0::2] == 0) for k in range(1, 15, 2))
    return "special_tk: odd powers only", ok, ""


def check_sigma() -> CheckResult:
    ok = all(stk.sigma(n, m) == stk.sigma_recursive(n, m) == math.comb(n + m - 1, n)
             for n in range(13) for m in range(1, 13))
    return "special_tk: sigma identity", ok, "n, m <= 12"


def check_support_closure() -> CheckResult:
    worst = 0.0
    for params in (make_tk(3), make_tk(5), make_mprime(5, 0)):
        sup = sp.sample_support(params, 128)
        s = tr.summarize(params)
        qv = s.q(-sup.points())
        _, off = sup.line.coordinate(qv)
        scale = 1.0 + ComplexPolynomial(np.abs(s.q.coeffs))(np.abs(sup.points())).real
        worst = max(worst, float(np.max(np.abs(off) / scale)))
        if sup.k != params.k or sup.branches.shape[1] != 128:
            return "spectrum: support closure", False, "branch count"
    return "spectrum: support closure", worst < 1e-8, f"max off-line {worst:.2e}"


def check_tk_symmetry() -> CheckResult:
    worst_sym, worst_bound = 0.0, 0.0
    for k in (2, 3, 5, 7):
        for N in (k * 10, k * 10 + 1):
            lam = sp.eigenvalues(make_tk(k), N).eigenvalues
            worst_sym = max(worst_sym, matched_distance(lam, -lam))
            worst_bound = max(worst_bound, float(np.abs(lam).max()))
    ok = worst_sym < 1e-8 and worst_bound <= 2 + 1e-8
    return "spectrum: T_k negation symmetry and disc bound", ok, \
        f"sym {worst_sym:.2e}, max |lambda| {worst_bound:.4f}"


def check_eigen_vs_dense(seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (1, 2, 3, 4):
        p = _random_params(rng, k)
        N = 6 * k + 1
        worst = max(worst, matched_distance(sp.eigenvalues(p, N).eigenvalues,
                                            sp.dense_eigenvalues(p, N)))
    return "spectrum: eigenvalues vs dense solver", worst < 1e-8, f"max {worst:.2e}"


def check_shift() -> CheckResult:
    worst = 0.0
    for seed in range(3):
        p = make_mprime(5, seed)
        s = 0.25 - 0.5j
        a = sp.eigenvalues(shift(p, s), 50).eigenvalues
        b = sp.eigenvalues(p, 50).eigenvalues + s
        worst = max(worst, matched_distance(a, b))
    return "spectrum: shift covariance", worst < 1e-8, f"max {worst:.2e}"


def check_interlacing() -> CheckResult:
    for params in (make_tk(5), make_jacobi()):
        for n in (2, 3, 4):
            rep = sp.check_interlacing(params, n)
            if rep.status == "fail":
                return "spectrum: interlacing", False, f"{params.name} n={n}: {rep.message}"
    return "spectrum: interlacing", True, "T_5 and free Jacobi, n=2..4"


def check_determinant(seed: int = 4) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (1, 2, 3):
        p = _random_params(rng, k)
        model = det.build_general_model(p)
        for N in range(1, 41):
            ref = det.det_direct(p, N)
            worst = max(worst, abs(det.det_general(model, N) - ref) / abs(ref))
            if N % k == 0:
                worst = max(worst, abs(det.det_at_multiple(p, N // k) - ref) / abs(ref))
    return "determinant: fast paths vs continuant", worst < 1e-8, f"max rel {worst:.2e}"


def check_determinant_recurrence(seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (1, 2, 3, 4):
        p = _random_params(rng, k)
        s = tr.summarize(p)
        q0 = s.q(0.0)
        w = [det.det_at_multiple(p, n) for n in range(1, 12)]
        for n in range(1, 10):
            rhs = q0 * w[n] + s.gamma * w[n - 1]
            worst = max(worst, abs(w[n + 1] - rhs) / max(abs(w[n + 1]), abs(q0 * w[n]), 1e-300))
        rec = det.build_general_model(p).recurrence
        expect = np.zeros(2 * k + 1, complex)
        expect[0], expect[k], expect[2 * k] = s.det_u, -q0, 1.0
        if not rec.almost_equal(ComplexPolynomial(expect), 1e-10):
            return "determinant: characteristic recurrence", False, f"order-2k polynomial k={k}"
    return "determinant: characteristic recurrence", worst < 1e-10, f"max rel {worst:.2e}"


ALL_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_transfer_structure, check_recurrence, check_eval_pn,
    check_closed_form_q, check_closed_form_gamma, check_trace_ladder, check_parity, check_sigma,
    check_support_closure, check_tk_symmetry, check_eigen_vs_dense, check_shift,
    check_interlacing, check_determinant, check_determinant_recurrence,
)


def run_checks() -> list[CheckResult]:
    out = []
    for fn in ALL_CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # a crashing check is a failed check
            out.append((fn.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
