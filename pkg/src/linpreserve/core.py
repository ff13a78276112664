"""Dense complex matrix kernels.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Elimination,
null spaces, rank, the Hermitian eigensolver and the matrix square root are
implemented here so that their thresholds are under our control; raw
products and inverses go through numpy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    HermiticityError,
    NoPrincipalRootError,
    NonFiniteError,
    NotRankOneError,
    SingularError,
)

MACHINE_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Tolerances:
    """Residual policy shared by every check.

    A residual passes when it is at most ``rel_eps * scale`` where ``scale`` is
    the largest Frobenius norm involved, floored at 1.
    """

    rel_eps: float = 1e-9
    rank_eps_factor: float = 64.0
    max_sqrt_iters: int = 100

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise ValueError("rel_eps must be positive")
        if self.rank_eps_factor < 0:
            raise ValueError("rank_eps_factor must be nonnegative")
        if self.max_sqrt_iters < 1:
            raise ValueError("max_sqrt_iters must be positive")

    def threshold(self, *norms: float) -> float:
        return self.rel_eps * max([1.0, *norms])


DEFAULT_TOL = Tolerances()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array (copying only when needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name} has NaN or Inf entries")
    return m


def as_square(a, name="matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got {m.shape}")
    return m


def unit(i: int, j: int, n: int) -> np.ndarray:
    """Basis unit e_ij (1-based indices, as written in the literature)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise DimensionError(f"e_{i}{j} is not a {n}x{n} matrix unit")
    e = np.zeros((n, n), dtype=np.complex128)
    e[i - 1, j - 1] = 1.0
    return e


def fro(a) -> float:
    return float(np.linalg.norm(a))


def arith(kind: str, a, b=None, lam=None):
    """Elementary operations by name.

    ``kind`` is one of add, sub, mul, scale, trace, transpose, conj_transpose,
    fro_norm. ``scale`` multiplies ``a`` by ``lam``.
    """
    a = as_matrix(a, "a")
    if kind in ("add", "sub", "mul"):
        if b is None:
            raise DimensionError(f"{kind} needs two operands")
        b = as_matrix(b, "b")
        if kind == "mul":
            if a.shape[1] != b.shape[0]:
                raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
            return a @ b
        if a.shape != b.shape:
            raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
        return a + b if kind == "add" else a - b
    if kind == "scale":
        return complex(lam) * a
    if kind == "trace":
        if a.shape[0] != a.shape[1]:
            raise DimensionError("trace of a non-square matrix")
        return complex(np.trace(a))
    if kind == "transpose":
        return a.T.copy()
    if kind == "conj_transpose":
        return a.conj().T.copy()
    if kind == "fro_norm":
        return fro(a)
    raise ValueError(f"unknown operation {kind!r}")


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v).reshape((n, n), order="F")


# -- elimination -----------------------------------------------------------

def rank_threshold(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    if a.size == 0:
        return 0.0
    return tol.rank_eps_factor * MACHINE_EPS * float(np.max(np.abs(a))) * max(a.shape)


def _gauss_jordan(a: np.ndarray, threshold: float, ncols: int | None = None):
    """Reduced row echelon form with partial pivoting.

    Only the first ``ncols`` columns are eliminated (the rest ride along, e.g.
    an augmented right-hand side). A column whose best remaining pivot is at
    or below ``threshold`` is treated as free.
    """
    r = np.array(a, dtype=np.complex128, copy=True)
    m = r.shape[0]
    ncols = r.shape[1] if ncols is None else ncols
    pivots = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        k = row + int(np.argmax(np.abs(r[row:, col])))
        if abs(r[k, col]) <= threshold:
            continue
        if k != row:
            r[[row, k]] = r[[k, row]]
        r[row] /= r[row, col]
        factors = r[:, col].copy()
        factors[row] = 0.0
        r -= np.outer(factors, r[row])
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a, tol: Tolerances = DEFAULT_TOL, threshold: float | None = None) -> int:
    """Numerical rank: pivots above the threshold in partial-pivot elimination.

    The default threshold is ``rank_eps_factor * eps * max|a_ij| * max(m, n)``.
    """
    a = as_matrix(a)
    t = rank_threshold(a, tol) if threshold is None else threshold
    _, pivots = _gauss_jordan(a, t)
    return len(pivots)


def solve_consistent(a, b, tol: Tolerances = DEFAULT_TOL, threshold: float | None = None):
    """Particular solution of ``a x = b`` with free variables set to zero.

    Returns ``(x, consistent)``. Inconsistency is reported, never raised.
    """
    a = as_matrix(a, "A")
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs has length {b.shape[0]}, expected {a.shape[0]}")
    if not np.all(np.isfinite(b)):
        raise NonFiniteError("rhs has NaN or Inf entries")
    t = rank_threshold(a, tol) if threshold is None else threshold
    r, pivots = _gauss_jordan(np.column_stack([a, b]), t, ncols=a.shape[1])
    x = np.zeros(a.shape[1], dtype=np.complex128)
    for i, col in enumerate(pivots):
        x[col] = r[i, -1]
    resid = np.linalg.norm(a @ x - b)
    bound = tol.threshold(fro(a) * np.linalg.norm(x), np.linalg.norm(b))
    return x, bool(resid <= bound)


def _orthonormalize(vectors: list[np.ndarray]) -> list[np.ndarray]:
    # modified Gram-Schmidt, two passes
    out: list[np.ndarray] = []
    for v in vectors:
        w = v.astype(np.complex128, copy=True)
        for _ in range(2):
            for q in out:
                w -= np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm > 0:
            out.append(w / nrm)
    return out


def null_space(a, tol: Tolerances = DEFAULT_TOL, threshold: float | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel, one 1-D vector per dimension.

    The count always equals ``cols - rank(a)`` for the same threshold.
    """
    a = as_matrix(a)
    t = rank_threshold(a, tol) if threshold is None else threshold
    r, pivots = _gauss_jordan(a, t)
    n = a.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    raw = []
    for f in free:
        v = np.zeros(n, dtype=np.complex128)
        v[f] = 1.0
        for i, col in enumerate(pivots):
            v[col] = -r[i, f]
        raw.append(v)
    basis = _orthonormalize(raw)
    if len(basis) != len(free):
        # kernel vectors from distinct free columns are independent by construction
        raise ArithmeticError("null space basis lost rank during orthonormalization")
    return basis


def inverse(a, name="matrix") -> np.ndarray:
    a = as_square(a, name)
    if rank(a) < a.shape[0]:
        raise SingularError(f"{name} is singular")
    return np.linalg.inv(a)


def cond_fro(a) -> float:
    """Frobenius-norm condition number ``||A|| ||A^-1||``; inf if singular."""
    a = as_square(a)
    try:
        return fro(a) * fro(inverse(a))
    except SingularError:
        return float("inf")


def rank_one_factor(a, tol: Tolerances = DEFAULT_TOL, threshold: float | None = None):
    """Split a rank-one matrix as ``u v^T``; ``u`` is its largest column, normalized."""
    a = as_square(a)
    r = rank(a, tol, threshold)
    if r != 1:
        raise NotRankOneError(f"matrix has rank {r}, not 1")
    norms = np.linalg.norm(a, axis=0)
    k = int(np.argmax(norms))
    u = a[:, k] / norms[k]
    v = a.T @ u.conj()
    return u.reshape(-1, 1), v.reshape(-1, 1)


# -- spectral --------------------------------------------------------------

def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eigen(a, tol: Tolerances = DEFAULT_TOL, max_sweeps: int = 60):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, q)`` with ``w`` ascending real eigenvalues and ``q`` unitary,
    so that ``a = q @ diag(w) @ q^H``.
    """
    a = as_square(a)
    scale = fro(a)
    if fro(a - a.conj().T) > tol.threshold(scale):
        raise HermiticityError("matrix is not Hermitian within tolerance")
    n = a.shape[0]
    h = 0.5 * (a + a.conj().T)
    q = np.eye(n, dtype=np.complex128)
    stop = MACHINE_EPS * max(scale, np.finfo(float).tiny)
    for _ in range(max_sweeps):
        if _off_norm(h) <= stop:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                b = h[p, r]
                mag = abs(b)
                if mag <= stop / n:
                    continue
                phase = b / mag
                # rotate the real 2x2 problem [[h_pp, |b|], [|b|, h_rr]]
                tau = (h[r, r].real - h[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, r]
                h[:, idx] = h[:, idx] @ g
                h[idx, :] = g.conj().T @ h[idx, :]
                q[:, idx] = q[:, idx] @ g
                h[p, r] = h[r, p] = 0.0
    w = np.diag(h).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], q[:, order]


def _is_hermitian(a: np.ndarray, tol: Tolerances) -> bool:
    return fro(a - a.conj().T) <= tol.threshold(fro(a))


def principal_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Principal square root.

    Hermitian positive-definite input goes through :func:`hermitian_eigen`;
    everything else uses the Denman-Beavers coupled iteration

        Y <- (Y + Z^-1) / 2,   Z <- (Z + Y^-1) / 2,   Y0 = A, Z0 = I,

    where Y converges to A^(1/2) when A has no eigenvalues on the closed
    negative real axis.
    """
    a = as_square(a)
    n = a.shape[0]
    if _is_hermitian(a, tol):
        w, q = hermitian_eigen(a, tol)
        if w[0] > tol.threshold(fro(a)):
            return (q * np.sqrt(w)) @ q.conj().T

    y = a.copy()
    z = np.eye(n, dtype=np.complex128)
    with np.errstate(all="ignore"):
        for it in range(tol.max_sqrt_iters):
            try:
                yi = np.linalg.inv(y)
                zi = np.linalg.inv(z)
            except np.linalg.LinAlgError:
                raise NoPrincipalRootError(
                    f"Denman-Beavers hit a singular iterate at step {it}; "
                    "the spectrum likely touches the closed negative real axis"
                ) from None
            y_next = 0.5 * (y + zi)
            z_next = 0.5 * (z + yi)
            if not (np.all(np.isfinite(y_next)) and np.all(np.isfinite(z_next))):
                break
            step = fro(y_next - y)
            y, z = y_next, z_next
            if step <= tol.threshold(fro(y)):
                if fro(y @ y - a) <= tol.threshold(fro(a)):
                    return y
                break
    raise NoPrincipalRootError(
        f"Denman-Beavers did not converge within {tol.max_sqrt_iters} iterations; "
        "the spectrum likely touches the closed negative real axis"
    )
