"""Spectra, support curves and determinants of tridiagonal k-Toeplitz matrices."""
from .cpoly import ComplexPolynomial, RootFindingError
from .determinant import build_general_model, det_at_multiple, det_direct, det_general
from .model import (KToeplitzParams, ParamsError, family, load_params, make_g, make_jacobi,
                    make_mprime, make_tk, materialize, shift)
from .spectrum import eigenvalues, r_convergence, sample_support, support_line
from .transfer import build_uk, char_poly, summarize

__all__ = [
    "ComplexPolynomial", "RootFindingError", "KToeplitzParams", "ParamsError",
    "family", "load_params", "make_g", "make_jacobi", "make_mprime", "make_tk",
    "materialize", "shift", "build_uk", "char_poly", "summarize",
    "eigenvalues", "r_convergence", "sample_support", "support_line",
    "det_direct", "det_at_multiple", "build_general_model", "det_general",
]
