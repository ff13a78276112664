"""Executable checks for fixed-product preservers and their consequences.

Every check returns a :class:`CheckReport`. Residuals are reported relative
to the operand scale (largest norm involved, floored at 1), so a check passes
when ``max_residual <= tol.rel_eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, Tolerances, as_square, fro, null_space, principal_sqrt, rank
from .errors import DimensionError, NoPrincipalRootError, NotSquareZeroError
from .mapspace import CanonicalForm, MatrixSpaceMap, restrict_to_traceless
from .products import (
    WitnessPair,
    centralizer_basis,
    common_centralizer,
    is_scalar,
    jordan_product,
    lie_bracket,
    product,
    witness_family,
)
from .sampling import random_complex, random_idempotent, random_involution, random_square_zero, rng_for

SMALL_N_NOTE = "small-n: outside cited literature's guarantees"


@dataclass
class Counterexample:
    identity: str
    matrices: dict
    residual: float


@dataclass
class CheckReport:
    check: str
    verdict: str
    trials: int
    max_residual: float
    seed: int
    tolerance: float
    counterexample: Counterexample | None = None
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


class _Tally:
    """Collects scaled residuals; keeps the worst violation as counterexample."""

    def __init__(self, tol: Tolerances):
        self.tol = tol
        self.trials = 0
        self.worst = 0.0
        self.counterexample = None
        self._worst_bad = -1.0

    def add(self, raw: float, scale: float, identity: str, matrices: dict) -> float:
        r = raw / max(1.0, scale)
        self.trials += 1
        self.worst = max(self.worst, r)
        if r > self.tol.rel_eps and r > self._worst_bad:
            self._worst_bad = r
            self.counterexample = Counterexample(identity, matrices, r)
        return r

    def fail(self, identity: str, matrices: dict, residual: float = float("inf")):
        """Record a violation that is not a plain residual (e.g. wrong rank)."""
        self.trials += 1
        self.worst = max(self.worst, residual)
        if self.counterexample is None or residual > self._worst_bad:
            self._worst_bad = residual
            self.counterexample = Counterexample(identity, matrices, residual)

    def report(self, check, seed, notes=(), **details) -> CheckReport:
        return CheckReport(
            check=check,
            verdict="fail" if self.counterexample is not None else "pass",
            trials=self.trials,
            max_residual=self.worst,
            seed=seed,
            tolerance=self.tol.rel_eps,
            counterexample=self.counterexample,
            notes=list(notes),
            details=details,
        )


def _small_n(n: int) -> list:
    return [SMALL_N_NOTE] if n <= 3 else []


def derive_d2(form: CanonicalForm, d1, kind: str = "lie") -> np.ndarray:
    """The D2 a canonical map must produce when D1 is the source product.

    Lie: c^2 U D1 U^-1, or -c^2 U D1^T U^-1 for the transpose variant.
    Jordan: c^2 U D1 U^-1, or c^2 U D1^T U^-1.
    """
    d1 = as_square(d1, "d1")
    u, c = np.asarray(form.u), form.c
    u_inv = np.linalg.inv(u)
    if form.variant == "identity":
        return c * c * u @ d1 @ u_inv
    sign = -1.0 if kind == "lie" else 1.0
    return sign * c * c * u @ d1.T @ u_inv


# -- fixed products --------------------------------------------------------

def check_fixed_product_preserver(psi: MatrixSpaceMap, d1, d2, kind: str = "lie", trials: int = 20,
                                  seed: int = 0, tol: Tolerances = DEFAULT_TOL,
                                  pairs: list[WitnessPair] | None = None) -> CheckReport:
    """product(psi(a), psi(b)) = d2 for witness pairs with product(a, b) = d1."""
    d1 = as_square(d1, "d1")
    d2 = as_square(d2, "d2")
    if d1.shape != (psi.n, psi.n) or d2.shape != d1.shape:
        raise DimensionError("d1, d2 and the map must agree in size")
    if pairs is None:
        pairs = witness_family(d1, kind, trials, seed, tol)
    t = _Tally(tol)
    for w in pairs:
        pa, pb = psi(w.a), psi(w.b)
        raw = fro(product(kind, pa, pb) - d2)
        t.add(raw, max(fro(pa) * fro(pb), fro(d2)), f"{kind}(psi(a), psi(b)) = d2",
              {"a": w.a, "b": w.b, "d1": d1, "d2": d2})
    return t.report(f"fixed-product-{kind}", seed, _small_n(psi.n) if kind == "lie" else [])


# -- centralizers and rank one ---------------------------------------------

def check_centralizer_inclusion(psi: MatrixSpaceMap, pair: WitnessPair, tol: Tolerances = DEFAULT_TOL,
                                samples: int = 5, seed: int = 0) -> CheckReport:
    """psi(C(a)) commutes with psi(a), psi(C(b)) with psi(b), and commuting
    S in C(b), T in C(a) stay commuting under psi."""
    a, b = pair.a, pair.b
    t = _Tally(tol)
    for elem, name in ((a, "a"), (b, "b")):
        pe = psi(elem)
        for m in centralizer_basis(elem, tol).basis:
            pm = psi(m)
            t.add(fro(lie_bracket(pe, pm)), fro(pe) * fro(pm), f"[psi({name}), psi(M)] = 0 for M in C({name})",
                  {name: elem, "M": m})
    rng = rng_for(seed)
    cb = centralizer_basis(b, tol)
    for _ in range(samples):
        s = cb.combine(random_complex(rng, cb.dim))
        common = common_centralizer([a, s], tol)
        tm = sum(c * p for c, p in zip(random_complex(rng, len(common)), common))
        ps, pt = psi(s), psi(tm)
        t.add(fro(lie_bracket(ps, pt)), fro(ps) * fro(pt), "[psi(S), psi(T)] = 0 for commuting S in C(b), T in C(a)",
              {"a": a, "b": b, "S": s, "T": tm})
    return t.report("centralizer-inclusion", seed, _small_n(psi.n))


def _rank_one_samples(rng, n, trials):
    units = []
    for i in range(n):
        for j in range(n):
            if i != j and len(units) < min(trials, n):
                e = np.zeros((n, n), dtype=np.complex128)
                e[i, j] = 1.0
                units.append(e)
    out = list(units)
    while len(out) < trials:
        u = random_complex(rng, n)
        v = random_complex(rng, n)
        v -= (v @ u) / (u @ u) * u
        x = np.outer(u, v)
        out.append(x / fro(x))
    return out


def check_rank_one_traceless_image(theta, trials: int = 20, seed: int = 0,
                                   tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """Rank-one traceless inputs must map to rank-one traceless images.

    A full :class:`MatrixSpaceMap` is restricted to sl_n first.
    """
    if isinstance(theta, MatrixSpaceMap):
        theta = restrict_to_traceless(theta)
    rng = rng_for(seed)
    t = _Tally(tol)
    for x in _rank_one_samples(rng, theta.n, trials):
        y = theta(x)
        scale = max(1.0, fro(y))
        r = rank(y, tol, threshold=tol.rel_eps * scale)
        if r == 0:
            t.fail("theta(A') != 0", {"A'": x, "image": y})
            continue
        # distance from the rank-one matrix spanned by the largest column
        col = int(np.argmax(np.linalg.norm(y, axis=0)))
        q = y[:, col] / np.linalg.norm(y[:, col])
        off_rank_one = fro(y - np.outer(q, q.conj() @ y))
        resid = max(off_rank_one, abs(np.trace(y))) / scale
        if r != 1:
            t.fail(f"rank(theta(A')) = 1 (got {r})", {"A'": x, "image": y}, resid)
        else:
            t.add(resid, 1.0, "theta(A') rank one and traceless", {"A'": x, "image": y})
    return t.report("rank-one-traceless-image", seed, _small_n(theta.n))


# -- polarization ----------------------------------------------------------

def polarization_transfer(x, y, tol: Tolerances = DEFAULT_TOL):
    """(x, y) -> (x + y, x - y); asserts (x + y) o (x - y) = 2x^2 - 2y^2."""
    x = as_square(x, "x")
    y = as_square(y, "y")
    a1, a2 = x + y, x - y
    lhs = jordan_product(a1, a2)
    rhs = 2 * x @ x - 2 * y @ y
    assert fro(lhs - rhs) <= tol.threshold(fro(x) ** 2, fro(y) ** 2), "polarization identity violated"
    return a1, a2


def inverse_polarization(a1, a2):
    a1 = as_square(a1, "a1")
    a2 = as_square(a2, "a2")
    return (a1 + a2) / 2, (a1 - a2) / 2


def check_polarized_preserver(psi: MatrixSpaceMap, d1, d2, trials: int = 20, seed: int = 0,
                              tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """2 psi(X)^2 - 2 psi(Y)^2 = d2 whenever 2X^2 - 2Y^2 = d1.

    The (X, Y) come from Jordan witnesses for d1 through inverse polarization.
    """
    d1 = as_square(d1, "d1")
    d2 = as_square(d2, "d2")
    t = _Tally(tol)
    for w in witness_family(d1, "jordan", trials, seed, tol):
        x, y = inverse_polarization(w.a, w.b)
        px, py = psi(x), psi(y)
        raw = fro(2 * px @ px - 2 * py @ py - d2)
        t.add(raw, max(fro(px) ** 2, fro(py) ** 2, fro(d2)), "2 psi(X)^2 - 2 psi(Y)^2 = d2",
              {"X": x, "Y": y, "d1": d1, "d2": d2})
    return t.report("polarized-preserver", seed)


# -- square roots and involutions -----------------------------------------

def companion_root(d1, c, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """T with 2cI - 2T^2 = d1, i.e. the principal root of cI - d1/2."""
    d1 = as_square(d1, "d1")
    n = d1.shape[0]
    shifted = complex(c) * np.eye(n) - d1 / 2
    try:
        t = principal_sqrt(shifted, tol)
    except NoPrincipalRootError as exc:
        raise NoPrincipalRootError(
            f"cI - d1/2 has no principal square root for c = {complex(c):.6g}; "
            f"try a real shift c >= ||d1|| = {fro(d1):.6g}"
        ) from exc
    lhs = 2 * complex(c) * np.eye(n) - 2 * t @ t
    if fro(lhs - d1) > tol.threshold(fro(d1), abs(c) * np.sqrt(n), fro(t) ** 2):
        raise NoPrincipalRootError("square root lost accuracy; try a larger real shift c")
    return t


def anticommuting_involution(n_mat, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """M with M^2 = I and n_mat o M = 0, for square-zero n_mat.

    M = 2 K K^H - I where K is an orthonormal basis of ker(n_mat): the
    reflection that fixes the kernel and negates its orthogonal complement.
    """
    nm = as_square(n_mat, "N")
    if fro(nm @ nm) > tol.threshold(fro(nm) ** 2):
        raise NotSquareZeroError("N^2 != 0")
    n = nm.shape[0]
    kernel = null_space(nm, tol)
    if not kernel:
        return -np.eye(n, dtype=np.complex128)
    k = np.column_stack(kernel)
    return 2 * k @ k.conj().T - np.eye(n)


def check_equal_squares(psi: MatrixSpaceMap, c=1.0, trials: int = 20, seed: int = 0,
                        tol: Tolerances = DEFAULT_TOL, d1=None, d2=None) -> CheckReport:
    """psi(P)^2 = psi(Q)^2 whenever P^2 = Q^2 = cI.

    With ``d1`` and ``d2`` given, also checks 2 psi(P)^2 - 2 psi(T)^2 = d2 for
    the companion root T of d1.
    """
    n = psi.n
    c = complex(c)
    root_c = np.sqrt(c)
    rng = rng_for(seed)
    t = _Tally(tol)
    comp = None
    if d1 is not None:
        d1 = as_square(d1, "d1")
        d2 = as_square(d2, "d2")
        comp = companion_root(d1, c, tol)
        pt = psi(comp)
    for i in range(trials):
        if i % 2 == 0 and n >= 2:
            nm = random_square_zero(rng, n, 1 + int(rng.integers(n // 2)))
            m = anticommuting_involution(nm, tol)
            p = root_c * (m + nm) if abs(c) > 0 else nm
            q = root_c * (m - nm) if abs(c) > 0 else -nm
        else:
            p = root_c * random_involution(rng, n)
            q = root_c * random_involution(rng, n)
        pp, pq = psi(p), psi(q)
        t.add(fro(pp @ pp - pq @ pq), max(fro(pp) ** 2, fro(pq) ** 2), "psi(P)^2 = psi(Q)^2",
              {"P": p, "Q": q})
        if comp is not None:
            t.add(fro(2 * pp @ pp - 2 * pt @ pt - d2), max(fro(pp) ** 2, fro(pt) ** 2, fro(d2)),
                  "2 psi(P)^2 - 2 psi(T)^2 = d2", {"P": p, "T": comp, "d1": d1, "d2": d2})
    return t.report("equal-squares", seed, c=[c.real, c.imag])


def check_square_zero_preservation(psi: MatrixSpaceMap, trials: int = 20, seed: int = 0,
                                   tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """psi(N)^2 = 0 for square-zero N: all off-diagonal units plus ``trials``
    random ones whose ranks cycle through 1..n//2."""
    n = psi.n
    rng = rng_for(seed)
    samples = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = np.zeros((n, n), dtype=np.complex128)
                e[i, j] = 1.0
                samples.append(e)
    for k in range(trials):
        samples.append(random_square_zero(rng, n, 1 + k % (n // 2)))
    t = _Tally(tol)
    for nm in samples:
        pn = psi(nm)
        t.add(fro(pn @ pn), fro(pn) ** 2, "psi(N)^2 = 0", {"N": nm})
    return t.report("square-zero", seed)


def idempotent_family(n: int) -> list[np.ndarray]:
    """e_ii and e_ii + e_ij (i != j): idempotents spanning M_n."""
    out = []
    for i in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[i, i] = 1.0
        out.append(e)
    for i in range(n):
        for j in range(n):
            if i != j:
                e = np.zeros((n, n), dtype=np.complex128)
                e[i, i] = 1.0
                e[i, j] = 1.0
                out.append(e)
    return out


def check_idempotent_identities(psi: MatrixSpaceMap, trials: int = 20, seed: int = 0,
                                tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """For idempotent L:

        psi(L) psi(I) + psi(I) psi(L) = 2 psi(L)^2
        psi(I)^2 psi(L) = psi(L) psi(I)^2

    on the spanning family plus ``trials`` random conjugated projections.
    When these hold on the spanning family, psi(I)^2 must be scalar; with
    psi(I) = cI, psi(L)/c must itself be idempotent.
    """
    n = psi.n
    rng = rng_for(seed)
    p_id = psi(np.eye(n))
    p_id2 = p_id @ p_id
    family = idempotent_family(n)
    samples = family + [random_idempotent(rng, n) for _ in range(trials)]
    t = _Tally(tol)
    for idx, lm in enumerate(samples):
        pl = psi(lm)
        t.add(fro(pl @ p_id + p_id @ pl - 2 * pl @ pl), max(fro(pl) * fro(p_id), fro(pl) ** 2),
              "psi(L) psi(I) + psi(I) psi(L) = 2 psi(L)^2", {"L": lm})
        t.add(fro(p_id2 @ pl - pl @ p_id2), fro(p_id) ** 2 * fro(pl),
              "psi(I)^2 psi(L) = psi(L) psi(I)^2", {"L": lm})
    details = {}
    family_ok = t.counterexample is None
    square_scalar = is_scalar(p_id2, tol)
    details["psi_I_square_scalar"] = bool(square_scalar)
    if family_ok and not square_scalar:
        t.fail("psi(I)^2 is scalar", {"psi(I)": p_id}, fro(p_id2 - np.trace(p_id2) / n * np.eye(n)) / max(1.0, fro(p_id2)))
    if is_scalar(p_id, tol):
        c = complex(np.trace(p_id)) / n
        details["psi_I_scalar"] = [c.real, c.imag]
        if abs(c) > 0:
            for lm in samples:
                pl = psi(lm) / c
                t.add(fro(pl @ pl - pl), fro(pl) ** 2, "psi(L)/c is idempotent when psi(I) = cI", {"L": lm})
    if square_scalar:
        lam = complex(np.trace(p_id2)) / n
        if abs(lam) > 0:
            # psi(I) = sqrt(lam) (2 L1 - I) with L1 idempotent
            l1 = (p_id / np.sqrt(lam) + np.eye(n)) / 2
            t.add(fro(l1 @ l1 - l1), fro(l1) ** 2, "L1 = (psi(I)/sqrt(lam) + I)/2 is idempotent", {"psi(I)": p_id})
    return t.report("idempotent-identities", seed, **details)
