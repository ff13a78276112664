"""Recover (variant, c, U, eta) from a map given only as a matrix.

The conjugator is the one-dimensional solution space of the intertwining
system ``theta(B) X = c X B`` (or ``c X B^T``) stacked over a basis; it needs
nothing beyond elimination.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, Tolerances, cond_fro, fro, inverse, null_space, rank, unvec
from .errors import AmbiguousFormError, DegenerateMapError, IllConditionedError, NotCanonicalError
from .mapspace import (
    CanonicalForm,
    MatrixSpaceMap,
    TracelessMap,
    gauge,
    restrict_to_traceless,
    sl_basis,
)
from .products import is_scalar

MAX_COND = 1e8


def recover_scale(theta: TracelessMap, tol: Tolerances = DEFAULT_TOL) -> complex:
    """c^2 from trace(theta(h)^2) / 2 with h = e_11 - e_22 (trace(h^2) = 2)."""
    n = theta.n
    h = np.zeros((n, n), dtype=np.complex128)
    h[0, 0], h[1, 1] = 1.0, -1.0
    y = theta(h)
    c2 = complex(np.trace(y @ y)) / 2
    if abs(c2) <= tol.rel_eps * max(fro(y) ** 2, np.finfo(float).tiny):
        raise DegenerateMapError("trace(theta(e11 - e22)^2) vanishes; the map is not bijective on sl_n")
    return c2


@dataclass
class _Candidate:
    variant: str
    c: complex
    nullity: int
    u: np.ndarray | None = None
    residual: float = float("inf")
    accepted: bool = False


def _intertwiner_system(images, basis, c, variant):
    n = basis[0].shape[0]
    eye = np.eye(n)
    blocks = []
    for y, b in zip(images, basis):
        right = b.T if variant == "identity" else b
        # vec(Y X) = (I (x) Y) vec X ; vec(X B) = (B^T (x) I) vec X
        blocks.append(np.kron(eye, y) - c * np.kron(right, eye))
    return np.vstack(blocks)


def _residual(images, basis, c, u, variant):
    u_inv = np.linalg.inv(u)
    worst = 0.0
    for y, b in zip(images, basis):
        core = b if variant == "identity" else b.T
        worst = max(worst, fro(y - c * u @ core @ u_inv))
    return worst


def _try(images, basis, c, variant, tol, accept_at):
    n = basis[0].shape[0]
    system = _intertwiner_system(images, basis, c, variant)
    thresh = tol.rel_eps * float(np.max(np.abs(system)))
    kernel = null_space(system, tol, threshold=thresh)
    cand = _Candidate(variant, c, len(kernel))
    if len(kernel) != 1:
        return cand
    x = unvec(kernel[0], n)
    if rank(x, tol) < n:
        return cand
    cand.u = gauge(x)
    cand.residual = _residual(images, basis, c, cand.u, variant)
    cand.accepted = cand.residual <= accept_at
    return cand


def _settle(cands, n, eta_len, what):
    good = [c for c in cands if c.accepted]
    if not good:
        summary = "; ".join(
            f"{c.variant}, c={c.c:.6g}: kernel dim {c.nullity}, residual {c.residual:.3g}" for c in cands
        )
        raise NotCanonicalError(f"{what} has no canonical form ({summary})")
    forms = [CanonicalForm(c.variant, c.c, c.u, np.zeros(eta_len, dtype=np.complex128), c.residual) for c in good]
    if len(forms) > 1:
        raise AmbiguousFormError(
            f"{what} admits {len(forms)} canonical forms"
            + (" (for n = 2 the transpose variant is a similarity)" if n == 2 else ""),
            forms,
        )
    form = forms[0]
    k = cond_fro(form.u)
    if k > MAX_COND:
        raise IllConditionedError(f"recovered conjugator has condition number {k:.3g} > {MAX_COND:.0e}")
    return form


def decompose_traceless(theta: TracelessMap, tol: Tolerances = DEFAULT_TOL) -> CanonicalForm:
    """Write theta as B -> c U B U^-1 or B -> c U B^T U^-1 on sl_n.

    Every sign of c (from c^2) and every variant is tried; exactly one has to
    give a one-dimensional kernel with an invertible representative and a
    small residual.
    """
    n = theta.n
    root = np.sqrt(recover_scale(theta, tol))
    basis = sl_basis(n)
    images = [theta(b) for b in basis]
    accept_at = tol.rel_eps * n * n * max(fro(y) for y in images)
    cands = [
        _try(images, basis, sign * root, variant, tol, accept_at)
        for variant in ("identity", "transpose")
        for sign in (1, -1)
    ]
    return _settle(cands, n, n * n, "map on sl_n")


def _full_basis(n):
    basis = []
    for k in range(n * n):
        e = np.zeros(n * n, dtype=np.complex128)
        e[k] = 1.0
        basis.append(unvec(e, n))
    return basis


def decompose_full(psi: MatrixSpaceMap, tol: Tolerances = DEFAULT_TOL) -> CanonicalForm:
    """Write psi as A -> c U A U^-1 + eta(A) I (or the transpose variant)."""
    n = psi.n
    p_id = psi(np.eye(n))
    if not is_scalar(p_id, tol):
        raise NotCanonicalError("psi(I) is not a scalar matrix, so psi cannot have the canonical form")
    form = decompose_traceless(restrict_to_traceless(psi), tol)
    u, c = form.u, form.c
    u_inv = inverse(u, "U")
    basis = _full_basis(n)
    eta = np.zeros(n * n, dtype=np.complex128)
    images = []
    cores = []
    for k, e in enumerate(basis):
        y = psi(e)
        core = c * u @ (e if form.variant == "identity" else e.T) @ u_inv
        eta[k] = np.trace(y - core) / n
        images.append(y)
        cores.append(core)
    residual = max(fro(y - core - eta[k] * np.eye(n)) for k, (y, core) in enumerate(zip(images, cores)))
    accept_at = tol.rel_eps * n * n * max(fro(y) for y in images)
    if residual > accept_at:
        raise NotCanonicalError(
            f"trace-functional fit leaves residual {residual:.3g} > {accept_at:.3g}"
        )
    return CanonicalForm(form.variant, c, u, eta, residual)


def decompose_jordan(psi: MatrixSpaceMap, tol: Tolerances = DEFAULT_TOL) -> CanonicalForm:
    """Write psi as A -> c U A U^-1 or A -> c U A^T U^-1 on all of M_n (no eta term)."""
    n = psi.n
    p_id = psi(np.eye(n))
    if not is_scalar(p_id, tol):
        raise NotCanonicalError("psi(I) is not a scalar matrix, so psi cannot have the canonical form")
    c = complex(np.trace(p_id)) / n
    if abs(c) <= tol.threshold() * np.finfo(float).eps:
        raise DegenerateMapError("psi(I) = 0; psi is not bijective")
    basis = _full_basis(n)
    images = [psi(e) for e in basis]
    accept_at = tol.rel_eps * n * n * max(fro(y) for y in images)
    cands = [_try(images, basis, c, variant, tol, accept_at) for variant in ("identity", "transpose")]
    return _settle(cands, n, n * n, "map on M_n")
