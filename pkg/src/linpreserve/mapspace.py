"""Linear maps on n x n matrix space, stored as n^2 x n^2 matrices.

Everything uses column-stacking vectorization, so ``vec(psi(A)) = mat @ vec(A)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    as_square,
    fro,
    inverse,
    rank,
    unvec,
    vec,
)
from .errors import DimensionError, SingularError

VARIANTS = ("identity", "transpose")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MatrixSpaceMap:
    n: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_matrix(self.mat, "map matrix")
        if m.shape != (self.n**2, self.n**2):
            raise DimensionError(f"a map on {self.n}x{self.n} matrices needs a {self.n**2}x{self.n**2} matrix, got {m.shape}")
        object.__setattr__(self, "mat", _frozen(m))

    def __call__(self, a) -> np.ndarray:
        return apply(self, a)

    @classmethod
    def identity(cls, n: int) -> "MatrixSpaceMap":
        return cls(n, np.eye(n * n))

    @classmethod
    def from_function(cls, n: int, f) -> "MatrixSpaceMap":
        """Tabulate a linear function column by column on the e_ij basis."""
        cols = []
        for k in range(n * n):
            e = np.zeros(n * n, dtype=np.complex128)
            e[k] = 1.0
            cols.append(vec(as_square(f(unvec(e, n)))))
        return cls(n, np.column_stack(cols))

    def compose(self, other: "MatrixSpaceMap") -> "MatrixSpaceMap":
        """``self o other``."""
        if other.n != self.n:
            raise DimensionError("cannot compose maps on different sizes")
        return MatrixSpaceMap(self.n, self.mat @ other.mat)


def apply(m: MatrixSpaceMap, a) -> np.ndarray:
    a = as_square(a)
    if a.shape[0] != m.n:
        raise DimensionError(f"map acts on {m.n}x{m.n} matrices, got {a.shape}")
    return unvec(m.mat @ vec(a), m.n)


def compose(f: MatrixSpaceMap, g: MatrixSpaceMap) -> MatrixSpaceMap:
    return f.compose(g)


def canonical_map(n: int, variant: str, c, u, tol: Tolerances = DEFAULT_TOL) -> MatrixSpaceMap:
    """A -> c U A U^-1 (``identity``) or A -> c U A^T U^-1 (``transpose``)."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    c = complex(c)
    if c == 0:
        raise SingularError("the scalar c must be nonzero")
    u = as_square(u, "U")
    if u.shape[0] != n:
        raise DimensionError(f"U must be {n}x{n}")
    u_inv = inverse(u, "U")
    if variant == "identity":
        return MatrixSpaceMap.from_function(n, lambda a: c * u @ a @ u_inv)
    return MatrixSpaceMap.from_function(n, lambda a: c * u @ a.T @ u_inv)


def trace_covector(n: int) -> np.ndarray:
    """Covector whose pairing with vec(A) is trace(A)."""
    return vec(np.eye(n, dtype=np.complex128)).copy()


def functional(eta, a) -> complex:
    return complex(np.asarray(eta) @ vec(a))


def with_trace_functional(m: MatrixSpaceMap, eta) -> MatrixSpaceMap:
    """A -> m(A) + eta(A) I with eta(A) = eta . vec(A)."""
    eta = np.asarray(eta, dtype=np.complex128).reshape(-1)
    if eta.shape[0] != m.n**2:
        raise DimensionError(f"eta must have length {m.n**2}")
    if not np.any(eta):
        return m
    return MatrixSpaceMap(m.n, m.mat + np.outer(trace_covector(m.n), eta))


def invert_map(m: MatrixSpaceMap, tol: Tolerances = DEFAULT_TOL) -> MatrixSpaceMap:
    if rank(m.mat, tol) < m.n**2:
        raise SingularError("map is not bijective on matrix space")
    return MatrixSpaceMap(m.n, np.linalg.inv(m.mat))


# -- the traceless subspace ------------------------------------------------

def sl_basis(n: int) -> list[np.ndarray]:
    """Off-diagonal units in row-major order, then e_ii - e_(i+1)(i+1)."""
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = np.zeros((n, n), dtype=np.complex128)
                e[i, j] = 1.0
                basis.append(e)
    for i in range(n - 1):
        h = np.zeros((n, n), dtype=np.complex128)
        h[i, i] = 1.0
        h[i + 1, i + 1] = -1.0
        basis.append(h)
    return basis


def project_traceless(x) -> np.ndarray:
    x = as_square(x)
    n = x.shape[0]
    return x - (np.trace(x) / n) * np.eye(n)


def sl_coords(x) -> np.ndarray:
    """Coordinates of a traceless matrix in :func:`sl_basis` order."""
    x = as_square(x)
    n = x.shape[0]
    off = x[~np.eye(n, dtype=bool)]
    diag = np.cumsum(np.diag(x))[: n - 1]
    return np.concatenate([off, diag])


def sl_matrix(coords, n: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.complex128)
    x = np.zeros((n, n), dtype=np.complex128)
    x[~np.eye(n, dtype=bool)] = coords[: n * n - n]
    h = coords[n * n - n:]
    d = np.zeros(n, dtype=np.complex128)
    d[: n - 1] += h
    d[1:] -= h
    x[np.diag_indices(n)] = d
    return x


@dataclass(frozen=True, eq=False)
class TracelessMap:
    """A linear map on sl_n in the fixed :func:`sl_basis` coordinates."""

    n: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_matrix(self.mat, "map matrix")
        k = self.n**2 - 1
        if m.shape != (k, k):
            raise DimensionError(f"a map on sl_{self.n} needs a {k}x{k} matrix, got {m.shape}")
        object.__setattr__(self, "mat", _frozen(m))

    def __call__(self, x) -> np.ndarray:
        x = as_square(x)
        if x.shape[0] != self.n:
            raise DimensionError(f"map acts on {self.n}x{self.n} matrices, got {x.shape}")
        return sl_matrix(self.mat @ sl_coords(x), self.n)

    @classmethod
    def from_function(cls, n: int, f) -> "TracelessMap":
        return cls(n, np.column_stack([sl_coords(project_traceless(f(b))) for b in sl_basis(n)]))

    @classmethod
    def identity(cls, n: int) -> "TracelessMap":
        return cls(n, np.eye(n * n - 1))


def restrict_to_traceless(m: MatrixSpaceMap) -> TracelessMap:
    """pi o psi o iota, with pi(X) = X - trace(X)/n I."""
    return TracelessMap.from_function(m.n, m)


# -- canonical forms -------------------------------------------------------

def gauge(u) -> np.ndarray:
    """Scale U so its largest-magnitude entry (first in row-major order) is 1."""
    u = as_matrix(u, "U")
    k = int(np.argmax(np.abs(u).ravel()))
    pivot = u.ravel()[k]
    if pivot == 0:
        raise SingularError("U is zero")
    return u / pivot


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """psi(A) = c U A U^-1 + eta(A) I, or the same with A^T."""

    variant: str
    c: complex
    u: np.ndarray
    eta: np.ndarray
    residual: float = 0.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "u", _frozen(self.u))
        object.__setattr__(self, "eta", _frozen(np.asarray(self.eta).reshape(-1)))

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def to_map(self) -> MatrixSpaceMap:
        return with_trace_functional(canonical_map(self.n, self.variant, self.c, self.u), self.eta)
