"""Lie and Jordan products, centralizers, and pairs realizing a fixed product."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import (
    DEFAULT_TOL,
    Tolerances,
    as_square,
    cond_fro,
    fro,
    null_space,
    solve_consistent,
    unvec,
    vec,
)
from .errors import DimensionError, NoWitnessError, WitnessSearchError

KINDS = ("lie", "jordan")


def _pair(a, b):
    a = as_square(a, "a")
    b = as_square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"operands have shapes {a.shape} and {b.shape}")
    return a, b


def lie_bracket(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return a @ b - b @ a


def jordan_product(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return a @ b + b @ a


def product(kind: str, a, b) -> np.ndarray:
    if kind == "lie":
        return lie_bracket(a, b)
    if kind == "jordan":
        return jordan_product(a, b)
    raise ValueError(f"unknown product kind {kind!r}")


def product_threshold(a, b, target, tol: Tolerances = DEFAULT_TOL) -> float:
    # errors in a bilinear expression grow with the product of the factor norms
    return tol.threshold(fro(a) * fro(b), fro(target))


def ad_operator(a) -> np.ndarray:
    """Matrix of X -> aX - Xa on column-stacked vectors: I(x)a - a^T(x)I."""
    a = as_square(a)
    eye = np.eye(a.shape[0])
    return np.kron(eye, a) - np.kron(a.T, eye)


def jordan_operator(a) -> np.ndarray:
    """Matrix of X -> aX + Xa on column-stacked vectors."""
    a = as_square(a)
    eye = np.eye(a.shape[0])
    return np.kron(eye, a) + np.kron(a.T, eye)


def product_operator(kind: str, a) -> np.ndarray:
    if kind == "lie":
        return ad_operator(a)
    if kind == "jordan":
        return jordan_operator(a)
    raise ValueError(f"unknown product kind {kind!r}")


@dataclass(frozen=True)
class CentralizerBasis:
    element: np.ndarray
    basis: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> np.ndarray:
        out = np.zeros_like(self.element)
        for c, p in zip(coeffs, self.basis):
            out = out + c * p
        return out


def centralizer_basis(a, tol: Tolerances = DEFAULT_TOL) -> CentralizerBasis:
    a = as_square(a)
    n = a.shape[0]
    return CentralizerBasis(a, [unvec(v, n) for v in null_space(ad_operator(a), tol)])


def common_centralizer(mats, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of the matrices commuting with every member of ``mats``."""
    mats = [as_square(m) for m in mats]
    n = mats[0].shape[0]
    stacked = np.vstack([ad_operator(m) for m in mats])
    return [unvec(v, n) for v in null_space(stacked, tol)]


def is_scalar(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_square(a)
    n = a.shape[0]
    lam = np.trace(a) / n
    return fro(a - lam * np.eye(n)) <= tol.threshold(fro(a))


class BracketSolution(NamedTuple):
    x0: np.ndarray
    homogeneous: list
    consistent: bool


def solve_bracket_equation(a, d, kind: str = "lie", tol: Tolerances = DEFAULT_TOL) -> BracketSolution:
    """Solve ``[a, X] = d`` (or ``a o X = d``).

    The general solution is ``x0`` plus any combination of ``homogeneous``,
    which for the Lie kind spans the centralizer of ``a``.
    """
    a, d = _pair(a, d)
    n = a.shape[0]
    op = product_operator(kind, a)
    x, ok = solve_consistent(op, vec(d), tol)
    x0 = unvec(x, n)
    if ok:
        ok = fro(product(kind, a, x0) - d) <= product_threshold(a, x0, d, tol)
    hom = [unvec(v, n) for v in null_space(op, tol)]
    return BracketSolution(x0, hom, bool(ok))


@dataclass(frozen=True)
class WitnessPair:
    """A pair whose product equals ``target``; validated on construction."""

    a: np.ndarray
    b: np.ndarray
    kind: str
    target: np.ndarray = field(repr=False)
    provenance: str = "seed"
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown product kind {self.kind!r}")
        r = self.residual()
        if r > product_threshold(self.a, self.b, self.target, self.tol):
            raise ValueError(f"pair does not realize the target product (residual {r:.3e})")

    def residual(self) -> float:
        return fro(product(self.kind, self.a, self.b) - self.target)


# -- witness search --------------------------------------------------------

_COND_LIMIT = 1e4


def _random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unit_pattern(d, tol):
    """Recognize d = alpha e_pq or d = alpha (e_pp - e_qq); 0-based indices."""
    n = d.shape[0]
    big = np.argwhere(np.abs(d) > tol.threshold(fro(d)) * 1e-3)
    if len(big) == 1:
        p, q = big[0]
        if p != q:
            return "unit", int(p), int(q), d[p, q]
    if len(big) == 2:
        (p, p2), (q, q2) = big
        if p == p2 and q == q2 and abs(d[p, p] + d[q, q]) <= tol.threshold(fro(d)):
            return "diff", int(p), int(q), d[p, p]
    return None


def _canonical_lie_seed(d, tol):
    n = d.shape[0]
    pat = _unit_pattern(d, tol)
    if pat is None:
        return None
    shape, p, q, alpha = pat
    e = np.zeros((n, n), dtype=np.complex128)
    if shape == "unit":
        a = e.copy()
        a[p, p] = 1.0
        b = e.copy()
        b[p, q] = alpha
        return a, b, f"canonical seed (e_{p+1}{p+1}, e_{p+1}{q+1})"
    a = e.copy()
    a[p, q] = alpha
    b = e.copy()
    b[q, p] = 1.0
    return a, b, f"canonical seed (e_{p+1}{q+1}, e_{q+1}{p+1})"


def _zero_diagonal_basis(d, rng, tol):
    """Invertible S with S^-1 d S having zero diagonal, for traceless d.

    Put a vector v and d v into the basis so the first diagonal entry vanishes,
    then recurse on the trailing block, which is again traceless.
    """
    n = d.shape[0]
    if n == 1 or fro(d) <= tol.threshold() * 1e-3:
        return np.eye(n, dtype=np.complex128)
    lam = np.trace(d) / n
    if fro(d - lam * np.eye(n)) <= tol.threshold(fro(d)):
        return np.eye(n, dtype=np.complex128)
    for _ in range(20):
        v = _random_complex(rng, n)
        v /= np.linalg.norm(v)
        w = d @ v
        q, _ = np.linalg.qr(np.column_stack([v, w, _random_complex(rng, n, n - 2)]))
        s1 = np.column_stack([v, w / np.linalg.norm(w), q[:, 2:]])
        if cond_fro(s1) < _COND_LIMIT:
            break
    else:
        raise WitnessSearchError("could not find a well-conditioned zero-diagonal basis", 20)
    d1 = np.linalg.solve(s1, d @ s1)
    s2 = _zero_diagonal_basis(d1[1:, 1:], rng, tol)
    block = np.eye(n, dtype=np.complex128)
    block[1:, 1:] = s2
    return s1 @ block


def _random_lie_seed(d, rng, tol):
    n = d.shape[0]
    s = _zero_diagonal_basis(d, rng, tol)
    spread = np.arange(n) + rng.uniform(-0.25, 0.25, n) + 1j * rng.uniform(-0.25, 0.25, n)
    a = s @ np.diag(spread) @ np.linalg.inv(s)
    sol = solve_bracket_equation(a, d, "lie", tol)
    if not sol.consistent:
        return None
    return a, sol.x0, "random seed (distinct-spectrum element in a zero-diagonal basis)"


def _random_jordan_seed(d, rng, tol):
    n = d.shape[0]
    a = _random_complex(rng, n, n) / np.sqrt(n) + np.eye(n)
    sol = solve_bracket_equation(a, d, "jordan", tol)
    if not sol.consistent:
        return None
    return a, sol.x0, "random seed (generic element, Jordan-Sylvester solve)"


def _poly(z, coeffs):
    n = z.shape[0]
    out = coeffs[0] * np.eye(n, dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for c in coeffs[1:]:
        power = power @ z
        out = out + c * power
    return out


def _enrich(a, b, rng, tol, step):
    """One perturbation of a Lie base pair that keeps its bracket unchanged."""
    which = step % 3
    if which == 0:
        cb = centralizer_basis(b, tol)
        s = cb.combine(_random_complex(rng, cb.dim))
        return a + s, b, "a + S with S in C(b)"
    if which == 1:
        ca = centralizer_basis(a, tol)
        t = ca.combine(_random_complex(rng, ca.dim))
        return a, b + t, "b + T with T in C(a)"
    common = common_centralizer([a, b], tol)
    z = sum(c * p for c, p in zip(_random_complex(rng, len(common)), common))
    s = _poly(z, _random_complex(rng, 3))
    t = _poly(z, _random_complex(rng, 3))
    return a + s, b + t, "a + p(Z), b + q(Z) with Z in C(a) and C(b)"


def witness_family(d1, kind: str = "lie", count: int = 10, seed: int = 0,
                   tol: Tolerances = DEFAULT_TOL, max_attempts: int = 200) -> list[WitnessPair]:
    """Pairs (a, b) with product(a, b) = d1, deterministic in ``seed``.

    Base pairs come from canonical seeds when d1 is a recognized unit pattern,
    otherwise from a seeded random search. Each base pair is then enriched by
    centralizer perturbations that leave the product unchanged.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown product kind {kind!r}")
    if count < 1:
        raise ValueError("count must be positive")
    d = as_square(d1, "d1")
    if kind == "lie" and abs(np.trace(d)) > tol.threshold(fro(d)):
        raise NoWitnessError(
            f"trace(d1) = {complex(np.trace(d)):.6g} but every Lie bracket is traceless"
        )
    rng = np.random.default_rng(seed % 2**64)
    found: list[WitnessPair] = []

    def add(a, b, how):
        if len(found) >= count:
            return
        for w in found:
            if fro(w.a - a) + fro(w.b - b) <= tol.threshold(fro(a), fro(b)):
                return
        try:
            found.append(WitnessPair(a, b, kind, d, how, tol))
        except ValueError:
            pass

    if kind == "lie":
        canon = _canonical_lie_seed(d, tol)
    else:
        canon = (np.eye(d.shape[0], dtype=np.complex128), d / 2, "canonical seed (I, d1/2)")
    bases = []
    if canon is not None:
        a, b, how = canon
        add(a, b, how)
        if found:
            bases.append((a, b))
            if kind == "lie":
                add(a + b, b, "a + b (b lies in C(b))")
                add(a, b + a, "b + a (a lies in C(a))")

    search = _random_lie_seed if kind == "lie" else _random_jordan_seed
    failures = 0
    step = 0
    while len(found) < count and failures < max_attempts and step < 50 * count + max_attempts:
        if kind == "jordan" or not bases or step % 4 == 3:
            try:
                got = search(d, rng, tol)
            except WitnessSearchError:
                got = None
            before = len(found)
            if got is not None:
                add(*got)
            if len(found) > before:
                bases.append(got[:2])
            else:
                failures += 1
        else:
            a, b = bases[step % len(bases)]
            add(*_enrich(a, b, rng, tol, step))
        step += 1
    if not found:
        raise WitnessSearchError(
            f"no pair realizing d1 found after {failures} failed attempts", failures
        )
    return found
