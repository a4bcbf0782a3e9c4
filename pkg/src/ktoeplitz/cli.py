"""Command-line entry point: ``ktoeplitz <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 convergence or fit failure,
4 invariant-suite failure.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from typing import Sequence

import numpy as np

from . import determinant as det
from . import special_tk as stk
from . import spectrum as sp
from .checks import run_checks
from .cpoly import RootFindingError, format_poly, format_scalar
from .model import KToeplitzParams, ParamsError, family, load_params, make_tk
from .output import cpair, svg_plot, to_csv, to_json
from .transfer import summarize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_CHECK = 4

SVG_COMMANDS = ("support", "eig", "rconv")


class ConfigError(Exception):
    pass


class ConvergenceError(Exception):
    pass


def _parse_seq(text: str, name: str) -> list[complex]:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from None


def resolve_params(args) -> KToeplitzParams:
    if args.config and args.family:
        raise ConfigError("give either --family or --config, not both")
    if args.config:
        try:
            params = load_params(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    elif args.family:
        spec = args.family
        if spec.startswith("mprime") and ":" not in spec:
            spec = f"{spec}:{args.seed}"
        params = family(spec)
    else:
        raise ConfigError("a parameter source is required (--family or --config)")
    over = {n: _parse_seq(getattr(args, n), n) for n in ("a", "x", "y") if getattr(args, n)}
    if over:
        params = replace(params, **over)
    return params


def _sorted(lam: np.ndarray) -> np.ndarray:
    # fixed presentation order: real part descending, then imaginary descending
    return np.lexsort((-lam.imag.round(12), -lam.real.round(12)))


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_dim(args) -> int:
    if args.dim is None:
        raise ConfigError("--dim is required for this command")
    if args.dim < 1:
        raise ConfigError("--dim must be >= 1")
    return args.dim


def _eigen(params, N, args) -> sp.EigenResult:
    res = sp.eigenvalues(params, N, tol=args.tol)
    if not res.ok:
        raise ConvergenceError(
            f"{int((~res.converged).sum())} of {N} eigenvalues did not converge "
            f"(max residual {float(res.residuals.max()):.3e})")
    return res


def cmd_qpoly(params, args) -> str:
    s = summarize(params)
    if args.format == "json":
        return to_json({"k": params.k, "q": [cpair(c) for c in s.q.coeffs],
                        "gamma": cpair(s.gamma), "det_u": cpair(s.det_u)})
    if args.format == "csv":
        return to_csv(["power", "coef_re", "coef_im"],
                      [(i, float(c.real), float(c.imag)) for i, c in enumerate(s.q.coeffs)])
    return f"Q = {format_poly(s.q)}, gamma = {format_scalar(s.gamma)}\n"


def cmd_support(params, args) -> str:
    sup = sp.sample_support(params, args.n_theta, tol=args.tol)
    if sup.collisions:
        print(f"warning: branches meet at {len(sup.collisions)} grid angles", file=sys.stderr)
    if args.format == "svg":
        overlay = _eigen(params, args.dim, args).eigenvalues if args.dim else None
        return svg_plot(list(sup.branches), overlay, title=f"{params.name or 'params'} support")
    if args.format == "json":
        return to_json({"line": {"kind": sup.line.kind, "alpha": sup.line.alpha,
                                 "direction": cpair(sup.line.direction),
                                 "half_extent": sup.line.half_extent},
                        "theta": sup.theta_grid.tolist(),
                        "branches": [[cpair(c) for c in b] for b in sup.branches]})
    rows = [(b, float(t), float(c.real), float(c.imag))
            for b in range(sup.k) for t, c in zip(sup.theta_grid, sup.branches[b])]
    return to_csv(["branch", "theta", "lambda_re", "lambda_im"], rows)


def cmd_eig(params, args) -> str:
    N = _need_dim(args)
    res = _eigen(params, N, args)
    order = _sorted(res.eigenvalues)
    lam, resid = res.eigenvalues[order], res.residuals[order]
    if args.format == "svg":
        sup = sp.sample_support(params, args.n_theta) if summarize(params).gamma != 0 else None
        curves = list(sup.branches) if sup is not None else []
        return svg_plot(curves, lam, title=f"{params.name or 'params'} N={N}")
    if args.format == "json":
        return to_json({"N": N, "eigenvalues": [cpair(c) for c in lam],
                        "residuals": [float(r) for r in resid]})
    return to_csv(["index", "lambda_re", "lambda_im", "residual"],
                  [(i, float(c.real), float(c.imag), float(r))
                   for i, (c, r) in enumerate(zip(lam, resid))])


def cmd_rconv(params, args) -> str:
    N = _need_dim(args)
    try:
        rc = sp.r_convergence(params, N, _eigen(params, N, args))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    order = _sorted(rc.eigenvalues)
    lam, big, small = rc.eigenvalues[order], rc.r_large[order], rc.r_small[order]
    if args.format == "svg":
        pos = np.arange(N) / N
        pts = np.concatenate([pos + 1j * big, pos + 1j * small])
        return svg_plot([], pts, title=f"|r| at eigenvalues, N={N}")
    if args.format == "json":
        return to_json({"N": N, "target": rc.target, "r_min": rc.r_min, "r_max": rc.r_max,
                        "pairs": [{"lambda": cpair(c), "r_large": float(b), "r_small": float(s)}
                                  for c, b, s in zip(lam, big, small)]})
    if args.format == "csv":
        print(f"r_min = {rc.r_min:.6f}, r_max = {rc.r_max:.6f}", file=sys.stderr)
        return to_csv(["index", "lambda_re", "lambda_im", "r_large", "r_small"],
                      [(i, float(c.real), float(c.imag), float(b), float(s))
                       for i, (c, b, s) in enumerate(zip(lam, big, small))])
    return (f"N = {N}, target sqrt|gamma| = {rc.target:.6f}, "
            f"r_min = {rc.r_min:.6f}, r_max = {rc.r_max:.6f}\n")


def cmd_det(params, args) -> str:
    dims = args.dims or ([args.dim] if args.dim else None)
    if not dims or min(dims) < 1:
        raise ConfigError("--dim (one or more positive integers) is required")
    k = params.k
    model = None
    rows = []
    for N in dims:
        t0 = time.perf_counter()
        if N % k == 0:
            fast, method = det.det_at_multiple(params, N // k), "transfer-power"
        else:
            if model is None:
                model = det.build_general_model(params)
            fast, method = det.det_general(model, N), "closed-form"
        t1 = time.perf_counter()
        direct = det.det_direct(params, N)
        t2 = time.perf_counter()
        # wall times go to stderr so that stdout and files stay reproducible
        print(f"N={N}: fast {t1 - t0:.3e}s ({method}), direct {t2 - t1:.3e}s",
              file=sys.stderr)
        rows.append((N, method, fast, direct))
    if args.format == "json":
        return to_json([{"N": N, "method": m, "fast": cpair(f), "direct": cpair(d)}
                        for N, m, f, d in rows])
    if args.format == "csv":
        return to_csv(["N", "method", "fast_re", "fast_im", "direct_re", "direct_im"],
                      [(N, m, float(f.real), float(f.imag), float(d.real), float(d.imag))
                       for N, m, f, d in rows])
    out = []
    for N, m, f, d in rows:
        out.append(f"N = {N}: fast = {_fmt_det(f)} [{m}], direct = {_fmt_det(d)}")
    return "\n".join(out) + "\n"


def _fmt_det(v: complex) -> str:
    if v.imag == 0 or abs(v.imag) <= 1e-12 * abs(v):
        return f"{v.real:.10g}"
    return f"{v.real:.10g}{v.imag:+.10g}j"


def cmd_tk_table(params, args) -> str:
    powers = range(args.kmax, 0, -2)

    def odd(p):
        return [int(p.coeffs[i].real) if i < len(p.coeffs) else 0 for i in powers]

    rows = []
    for k in range(3, args.kmax + 1, 2):
        closed = stk.q_closed_form(k)
        s = summarize(make_tk(k))
        rows.append((k, odd(closed), odd(s.q), closed == s.q,
                     stk.gamma_closed_form(k), int(s.gamma.real)))
    header = [f"z^{i}" if i > 1 else "z" for i in powers]
    if args.format == "json":
        return to_json([{"k": k, "closed_form": c, "transfer": d, "match": bool(m),
                         "gamma_closed_form": g, "gamma_transfer": gt}
                        for k, c, d, m, g, gt in rows])
    if args.format == "csv":
        return to_csv(["k", "source"] + header,
                      [r for k, c, d, *_ in rows
                       for r in ((k, "closed_form", *c), (k, "transfer", *d))])
    width = max(4, max(len(h) for h in header))
    lines = ["k".rjust(3) + "  " + " ".join(h.rjust(width) for h in header) + "  match gamma"]
    for k, c, d, m, g, _ in rows:
        lines.append(f"{k:3d}  " + " ".join(str(v).rjust(width) for v in c)
                     + f"  {'yes' if m else 'NO':5s} {g:+d}")
        if not m:
            lines.append("   T " + " ".join(str(v).rjust(width) for v in d))
    return "\n".join(lines) + "\n"


def cmd_check(params, args) -> tuple[str, int]:
    results = run_checks()
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
             for name, ok, detail in results]
    failed = sum(not ok for _, ok, _ in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", EXIT_CHECK if failed else EXIT_OK


COMMANDS = {"qpoly": cmd_qpoly, "support": cmd_support, "eig": cmd_eig, "rconv": cmd_rconv,
            "det": cmd_det, "tk-table": cmd_tk_table, "check": cmd_check}
NEEDS_PARAMS = {"qpoly", "support", "eig", "rconv", "det"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("parameters")
    src.add_argument("--family", help="built-in family: tk:K, g, jacobi[:a], mprimeK[:seed], "
                                      "mprime5ex:I")
    src.add_argument("--config", help="JSON file with keys k, a, x, y ([re, im] pairs)")
    src.add_argument("--a", help="override diagonal, comma separated complex values")
    src.add_argument("--x", help="override superdiagonal")
    src.add_argument("--y", help="override subdiagonal")
    src.add_argument("--seed", type=int, default=0, help="seed for random families")
    common.add_argument("--dim", type=int, help="matrix dimension N")
    common.add_argument("--n-theta", type=int, default=512, help="support sampling points")
    common.add_argument("--tol", type=float, default=sp.EIG_TOL)
    common.add_argument("--format", choices=("csv", "json", "svg"))
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="ktoeplitz",
                                     description="Tridiagonal k-Toeplitz spectra and determinants")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("qpoly", parents=[common], help="trace polynomial Q and gamma")
    sub.add_parser("support", parents=[common], help="limiting spectrum support branches")
    sub.add_parser("eig", parents=[common], help="eigenvalues at dimension --dim")
    sub.add_parser("rconv", parents=[common], help="|r| at the eigenvalues of dimension --dim")
    p_det = sub.add_parser("det", parents=[common], help="fast and direct determinants")
    p_det.add_argument("--dims", type=int, nargs="+", help="several dimensions at once")
    p_tk = sub.add_parser("tk-table", parents=[common], help="closed-form vs transfer Q for T_k")
    p_tk.add_argument("--kmax", type=int, default=13)
    sub.add_parser("check", parents=[common], help="run the invariant suite")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "svg" and args.command not in SVG_COMMANDS:
        print(f"error: svg output is only available for {', '.join(SVG_COMMANDS)}",
              file=sys.stderr)
        return EXIT_CONFIG
    if not hasattr(args, "dims"):
        args.dims = None
    try:
        params = resolve_params(args) if args.command in NEEDS_PARAMS else None
        if args.command == "tk-table" and (args.kmax < 3 or args.kmax % 2 == 0):
            raise ConfigError("--kmax must be an odd integer >= 3")
        result = COMMANDS[args.command](params, args)
    except (ConfigError, ParamsError, sp.DegenerateSupportError,
            sp.InterlacingHypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, RootFindingError, sp.SupportSolveError,
            det.DeterminantFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    _emit(args, result)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
