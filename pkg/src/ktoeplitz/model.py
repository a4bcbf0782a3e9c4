"""Parameter sets for tridiagonal k-Toeplitz matrices and named families.

Indexing is 0-based throughout: row ``i`` of an N x N instance carries
``a[i % k]`` on the diagonal, and the couplings between rows ``i`` and
``i + 1`` are ``x[i % k]`` (above) and ``y[i % k]`` (below).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class ParamsError(ValueError):
    """Malformed or inadmissible parameter set."""


def _as_complex_tuple(values, name: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ParamsError(f"{name} must be a sequence of complex numbers") from exc


@dataclass(frozen=True)
class KToeplitzParams:
    """Period ``k`` and the diagonal/superdiagonal/subdiagonal triples."""

    a: tuple[complex, ...]
    x: tuple[complex, ...]
    y: tuple[complex, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        a = _as_complex_tuple(self.a, "a")
        x = _as_complex_tuple(self.x, "x")
        y = _as_complex_tuple(self.y, "y")
        if not a:
            raise ParamsError("period k must be at least 1")
        if not (len(a) == len(x) == len(y)):
            raise ParamsError(
                f"a, x, y must all have length k (got {len(a)}, {len(x)}, {len(y)})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def u(self) -> tuple[complex, ...]:
        """Coupling products ``x_j * y_j``; always recomputed."""
        return tuple(xj * yj for xj, yj in zip(self.x, self.y))

    def rotate(self, j: int = 1) -> "KToeplitzParams":
        """Parameters seen after deleting the first ``j`` rows and columns."""
        j %= self.k
        return KToeplitzParams(self.a[j:] + self.a[:j], self.x[j:] + self.x[:j],
                               self.y[j:] + self.y[:j], name=self.name)

    def to_json(self) -> dict:
        pair = lambda seq: [[c.real, c.imag] for c in seq]  # noqa: E731
        return {"k": self.k, "a": pair(self.a), "x": pair(self.x), "y": pair(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "KToeplitzParams":
        try:
            a, x, y = (_parse_complex_list(data[key], key) for key in ("a", "x", "y"))
        except KeyError as exc:
            raise ParamsError(f"config is missing key {exc.args[0]!r}") from None
        params = cls(a, x, y, name=str(data.get("name", "")))
        if "k" in data and int(data["k"]) != params.k:
            raise ParamsError(f"k = {data['k']} does not match sequence length {params.k}")
        return params


def _parse_complex_list(values, name: str) -> list[complex]:
    if not isinstance(values, list):
        raise ParamsError(f"{name} must be a list")
    out = []
    for v in values:
        if isinstance(v, (int, float)):
            out.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
            out.append(complex(v[0], v[1]))
        else:
            raise ParamsError(f"entries of {name} must be [re, im] pairs, got {v!r}")
    return out


def load_params(path: str | Path) -> KToeplitzParams:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParamsError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParamsError("config must be a JSON object")
    return KToeplitzParams.from_json(data)


@dataclass(frozen=True)
class MatrixInstance:
    """A concrete N x N tridiagonal matrix stored by its three diagonals."""

    diag: np.ndarray
    sup: np.ndarray
    sub: np.ndarray

    @property
    def N(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag.astype(complex))
        if self.N > 1:
            m += np.diag(self.sup, 1) + np.diag(self.sub, -1)
        return m

    def leading(self, M: int) -> "MatrixInstance":
        return MatrixInstance(self.diag[:M], self.sup[: M - 1], self.sub[: M - 1])


def materialize(params: KToeplitzParams, N: int) -> MatrixInstance:
    if N < 1:
        raise ParamsError("dimension N must be >= 1")
    k = params.k
    idx = np.arange(N) % k
    a, x, y = (np.array(s, dtype=complex) for s in (params.a, params.x, params.y))
    return MatrixInstance(a[idx], x[idx[:-1]], y[idx[:-1]])


def make_tk(k: int) -> KToeplitzParams:
    """Zero diagonal, unit subdiagonal, superdiagonal ``(-1)**j``."""
    if k < 1:
        raise ParamsError("k must be a positive integer")
    if k % 2 == 0 and k != 2:
        raise ParamsError(
            f"T_k is only defined for odd k or k = 2: for even k = {k} the "
            "entries in $T_k$ will be identical to entries in $T_2$")
    return KToeplitzParams([0] * k, [(-1) ** j for j in range(k)], [1] * k, name=f"tk:{k}")


def make_g() -> KToeplitzParams:
    """Period-2 matrix with unit diagonal, superdiagonal -1, 1, -1, ..."""
    return KToeplitzParams([1, 1], [-1, 1], [1, 1], name="g")


def make_jacobi(a: complex = 0, u: complex = 1) -> KToeplitzParams:
    """Period-1 (plain Toeplitz) tridiagonal with coupling product ``u``."""
    return KToeplitzParams([a], [u], [1], name="jacobi")


def make_mprime(k: int, seed: int) -> KToeplitzParams:
    """Zero-diagonal family with x, y drawn uniformly from the unit disc."""
    if k < 1:
        raise ParamsError("k must be a positive integer")
    rng = np.random.default_rng(seed)

    def disc(n):
        r = np.sqrt(rng.uniform(0.0, 1.0, n))
        return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))

    x, y = disc(k), disc(k)
    return KToeplitzParams([0] * k, x.tolist(), y.tolist(), name=f"mprime{k}:{seed}")


# The three period-5 draws shown alongside the worked examples.
MPRIME5_EXAMPLES: tuple[tuple[Sequence[complex], Sequence[complex]], ...] = (
    ((0.14786 - 0.14549j, 0.49296 - 0.14926j, -0.49709 + 0.31233j,
      -0.66051 - 0.63714j, -0.47679 + 0.10519j),
     (-0.46743 - 0.33319j, 0.23728 + 0.09273j, -0.63907 - 0.29653j,
      0.52739 - 0.24468j, -0.32003 + 0.10717j)),
    ((-0.32279 + 0.33886j, -0.32385 + 0.17418j, 0.63371 + 0.28954j,
      -0.61557 - 0.16279j, -0.22557 - 0.15283j),
     (-0.049722 - 0.013321j, 0.365074 - 0.033657j, -0.153465 - 0.073904j,
      0.161107 + 0.049731j, 0.302321 + 0.222266j)),
    ((0.54284 + 0.13073j, -0.38154 - 0.59148j, -0.26609 - 0.04314j,
      -0.41213 + 0.59500j, 0.10894 + 0.11749j),
     (-0.3399555 + 0.2383669j, -0.1179852 + 0.0003872j, 0.4458143 + 0.1994768j,
      0.5977041 + 0.5196681j, 0.0064987 - 0.0034439j)),
)


def mprime5_example(index: int) -> KToeplitzParams:
    x, y = MPRIME5_EXAMPLES[index]
    return KToeplitzParams([0] * 5, x, y, name=f"mprime5ex:{index}")


def shift(params: KToeplitzParams, s: complex) -> KToeplitzParams:
    return KToeplitzParams([aj + s for aj in params.a], params.x, params.y, name=params.name)


def family(spec: str) -> KToeplitzParams:
    """Resolve a family name such as ``tk:3``, ``g``, ``mprime5:7`` or ``jacobi``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "tk":
            return make_tk(int(arg))
        if name == "g" and not arg:
            return make_g()
        if name == "jacobi":
            return make_jacobi(complex(arg) if arg else 0)
        if name.startswith("mprime") and name[6:].isdigit():
            return make_mprime(int(name[6:]), int(arg or 0))
        if name == "mprime5ex":
            return mprime5_example(int(arg))
    except ParamsError:
        raise
    except (ValueError, IndexError) as exc:
        raise ParamsError(f"bad family argument in {spec!r}: {exc}") from exc
    raise ParamsError(f"unknown family {spec!r}")
