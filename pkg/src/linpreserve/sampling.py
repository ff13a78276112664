"""Seeded random constructions used by the checks, the fuzz campaign and tests."""
from __future__ import annotations

import numpy as np

from .core import cond_fro, fro
from .mapspace import VARIANTS, CanonicalForm, MatrixSpaceMap


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) % 2**64)


def random_complex(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_traceless(rng, n: int) -> np.ndarray:
    a = random_complex(rng, n, n)
    return a - (np.trace(a) / n) * np.eye(n)


def random_conjugator(rng, n: int, max_cond: float = 1e3) -> np.ndarray:
    while True:
        u = random_complex(rng, n, n)
        if cond_fro(u) <= max_cond:
            return u


def random_scalar(rng, low: float = 0.5, high: float = 2.0) -> complex:
    return complex(rng.uniform(low, high) * np.exp(2j * np.pi * rng.uniform()))


def random_canonical_form(rng, n: int, variant: str | None = None, with_eta: bool = True,
                          max_cond: float = 1e3) -> CanonicalForm:
    if variant is None:
        variant = VARIANTS[int(rng.integers(2))]
    c = random_scalar(rng)
    u = random_conjugator(rng, n, max_cond)
    eta = random_complex(rng, n * n) if with_eta else np.zeros(n * n, dtype=np.complex128)
    return CanonicalForm(variant, c, u, eta)


def random_bijective_map(rng, n: int) -> MatrixSpaceMap:
    return MatrixSpaceMap(n, random_complex(rng, n * n, n * n))


def perturbed_map(psi: MatrixSpaceMap, eps: float, rng) -> MatrixSpaceMap:
    """psi + eps * G with G random, scaled so ||G|| = ||psi||."""
    g = random_complex(rng, *psi.mat.shape)
    g *= fro(psi.mat) / fro(g)
    return MatrixSpaceMap(psi.n, psi.mat + eps * g)


def random_square_zero(rng, n: int, k: int) -> np.ndarray:
    """Unit-norm N = X Y^T of rank k with Y^T X = 0, hence N^2 = 0 (needs 2k <= n)."""
    if not 1 <= k <= n // 2:
        raise ValueError(f"square-zero rank must lie in 1..{n // 2}")
    x = random_complex(rng, n, k)
    q, _ = np.linalg.qr(x)
    z = random_complex(rng, n, k)
    z -= q @ (q.conj().T @ z)
    y = z.conj()
    nmat = x @ y.T
    return nmat / fro(nmat)


def random_idempotent(rng, n: int, max_cond: float = 1e2) -> np.ndarray:
    """Q P Q^-1 with P a nontrivial coordinate projection."""
    k = int(rng.integers(1, n)) if n > 1 else 1
    p = np.zeros((n, n), dtype=np.complex128)
    idx = rng.permutation(n)[:k]
    p[idx, idx] = 1.0
    q = random_conjugator(rng, n, max_cond)
    return q @ p @ np.linalg.inv(q)


def random_involution(rng, n: int, max_cond: float = 1e2) -> np.ndarray:
    """Q diag(+-1) Q^-1; squares to I."""
    signs = rng.choice([-1.0, 1.0], size=n)
    q = random_conjugator(rng, n, max_cond)
    return q @ np.diag(signs) @ np.linalg.inv(q)
