"""Acceptance suite: nine criteria, each printing one PASS/FAIL line.

Run on its own with

    pytest tests/test_acceptance.py -v

Every suite builds its inputs from fixed seeds and re-evaluates residuals
with plain numpy instead of trusting the reports alone.
"""
import json
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest

from linpreserve.canonical import decompose_full, decompose_traceless
from linpreserve.core import Tolerances, fro
from linpreserve.errors import NotCanonicalError
from linpreserve.mapspace import MatrixSpaceMap, gauge, restrict_to_traceless
from linpreserve.preserver import (
    anticommuting_involution,
    check_centralizer_inclusion,
    check_equal_squares,
    check_fixed_product_preserver,
    check_idempotent_identities,
    check_polarized_preserver,
    check_rank_one_traceless_image,
    check_square_zero_preservation,
    companion_root,
    derive_d2,
    inverse_polarization,
    polarization_transfer,
)
from linpreserve.products import centralizer_basis, is_scalar, witness_family
from linpreserve.sampling import (
    perturbed_map,
    random_bijective_map,
    random_canonical_form,
    random_complex,
    random_involution,
    random_square_zero,
    random_traceless,
    rng_for,
)

pytestmark = pytest.mark.acceptance

GOLDEN = Path(__file__).parent / "golden"
TIME_LIMIT = 60.0


@pytest.fixture
def verdict(capsys):
    """Print exactly one line for the criterion, then enforce it."""
    start = time.perf_counter()

    def finish(number, title, ok, detail):
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < TIME_LIMIT
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail}; {elapsed:.1f}s)")
        assert ok, f"criterion {number} failed: {detail}"

    return finish


def unit(i, j, n):
    m = np.zeros((n, n), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


def scaled(raw, *norms):
    return raw / max(1.0, *norms)


# -- 1: forward Lie check -------------------------------------------------------

def test_criterion_1_lie_forward_check(verdict):
    tol = Tolerances(rel_eps=1e-8)
    worst, failures = 0.0, 0
    variants = {"identity": 0, "transpose": 0}
    for k in range(200):
        rng = rng_for(1000 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n, ("identity", "transpose")[k % 2])
        assert np.linalg.cond(form.u) <= 1e3 * np.sqrt(n)
        kind_of_d1 = k % 3
        if kind_of_d1 == 0:
            d1 = unit(1, 2, n)
        elif kind_of_d1 == 1:
            d1 = unit(1, 1, n) - unit(2, 2, n)
        else:
            d1 = random_traceless(rng, n)
        d2 = derive_d2(form, d1, "lie")
        psi = form.to_map()
        rep = check_fixed_product_preserver(psi, d1, d2, "lie", 5, 1000 + k, tol)
        # independent re-evaluation of every pair
        for w in witness_family(d1, "lie", 5, 1000 + k, tol):
            pa, pb = psi(w.a), psi(w.b)
            r = scaled(fro(pa @ pb - pb @ pa - d2), fro(pa) * fro(pb), fro(d2))
            worst = max(worst, r)
        failures += not rep.passed
        variants[form.variant] += 1
    ok = failures == 0 and worst <= 1e-8
    verdict(1, "canonical maps pass the Lie check with derived D2", ok,
            f"200 maps {variants}, failures={failures}, max scaled residual={worst:.2e} <= 1e-8")


# -- 2: decomposition round trip and rejection -------------------------------------

def test_criterion_2_decomposition_round_trip(verdict):
    bad = []
    worst = {"c": 0.0, "u": 0.0, "eta": 0.0}
    for k in range(500):
        rng = rng_for(2000 + k)
        n = 3 + k % 4
        form = random_canonical_form(rng, n)
        try:
            got = decompose_full(form.to_map())
        except NotCanonicalError as exc:
            bad.append((k, str(exc)[:60]))
            continue
        ec = abs(got.c - form.c) / abs(form.c)
        eu = fro(got.u - gauge(form.u)) / fro(form.u)
        ee = np.linalg.norm(got.eta - form.eta) / (1 + np.linalg.norm(form.eta))
        worst = {"c": max(worst["c"], ec), "u": max(worst["u"], eu), "eta": max(worst["eta"], ee)}
        if got.variant != form.variant or ec > 1e-8 or eu > 1e-6 or ee > 1e-8:
            bad.append((k, "mismatch"))
    ok = not bad
    verdict("2a", "500 decomposition round trips (n = 3..6)", ok,
            f"mismatches={len(bad)}, max rel errors c={worst['c']:.1e} U={worst['u']:.1e} eta={worst['eta']:.1e}")


def test_criterion_2_random_maps_rejected(verdict):
    accepts = 0
    for k in range(500):
        rng = rng_for(3000 + k)
        n = 3 + k % 4
        try:
            decompose_traceless(restrict_to_traceless(random_bijective_map(rng, n)))
            accepts += 1
        except NotCanonicalError:
            pass
    verdict("2b", "500 random bijective maps rejected", accepts == 0, f"false accepts={accepts}")


# -- 3: centralizers and rank-one images ------------------------------------------

def test_criterion_3_centralizers_and_rank_one_images(verdict):
    tol = Tolerances(rel_eps=1e-9)
    failures, worst, pairs_seen = 0, 0.0, 0
    for k in range(20):
        rng = rng_for(4000 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n)
        psi = form.to_map()
        d1 = unit(1, 2, n) if k % 2 else random_traceless(rng, n)
        for w in witness_family(d1, "lie", 3, 4000 + k, tol):
            pairs_seen += 1
            rep = check_centralizer_inclusion(psi, w, tol, seed=k)
            failures += not rep.passed
            # every basis element of C(a) and C(b), re-evaluated here
            for elem in (w.a, w.b):
                pe = psi(elem)
                for m in centralizer_basis(elem, tol).basis:
                    pm = psi(m)
                    worst = max(worst, scaled(fro(pe @ pm - pm @ pe), fro(pe) * fro(pm)))
        rep = check_rank_one_traceless_image(restrict_to_traceless(psi), 100, 4000 + k, tol)
        failures += not rep.passed or rep.trials != 100

    dims_ok = True
    for n in range(2, 7):
        rng = rng_for(4100 + n)
        for _ in range(5):
            one = np.outer(random_complex(rng, n), random_complex(rng, n))
            dims_ok &= centralizer_basis(one, tol).dim == n * n - 2 * n + 2
            dims_ok &= centralizer_basis(one + random_complex(rng) * np.eye(n), tol).dim == n * n - 2 * n + 2
            dims_ok &= centralizer_basis(random_complex(rng) * np.eye(n), tol).dim == n * n
            near = np.eye(n) + 1e-3 * random_complex(rng, n, n)
            dims_ok &= centralizer_basis(near, tol).dim < n * n
    ok = failures == 0 and worst <= 1e-9 and dims_ok
    verdict(3, "centralizer inclusion, rank-one images, centralizer dimensions", ok,
            f"{pairs_seen} pairs, failing reports={failures}, max residual={worst:.2e}, dimensions exact={dims_ok}")


# -- 4: polarization --------------------------------------------------------------

def test_criterion_4_polarization(verdict):
    worst_fwd = worst_back = 0.0
    count = 0
    for k in range(100):
        rng = rng_for(5000 + k)
        n = 2 + k % 5
        d1 = random_complex(rng, n, n)
        # forward: A1 o A2 = D1  =>  2X^2 - 2Y^2 = D1
        for w in witness_family(d1, "jordan", 5, 5000 + k):
            x, y = inverse_polarization(w.a, w.b)
            r = scaled(fro(2 * x @ x - 2 * y @ y - d1), fro(x) ** 2, fro(y) ** 2, fro(d1))
            worst_fwd = max(worst_fwd, r)
            count += 1
        # backward: 2X^2 - 2Y^2 = D  =>  (X + Y) o (X - Y) = D
        for _ in range(5):
            x, y = random_complex(rng, n, n), random_complex(rng, n, n)
            d = 2 * x @ x - 2 * y @ y
            a1, a2 = polarization_transfer(x, y)
            r = scaled(fro(a1 @ a2 + a2 @ a1 - d), fro(x) ** 2, fro(y) ** 2, fro(d))
            worst_back = max(worst_back, r)
            count += 1
    ok = count >= 1000 and max(worst_fwd, worst_back) <= 1e-10
    verdict(4, "polarization identities in both directions", ok,
            f"{count} pairs, forward {worst_fwd:.2e}, backward {worst_back:.2e} <= 1e-10")


# -- 5: companion roots -----------------------------------------------------------

def test_criterion_5_companion_roots_and_equal_squares(verdict):
    worst_root = 0.0
    for k in range(100):
        rng = rng_for(6000 + k)
        n = 2 + k % 5
        d1 = random_complex(rng, n, n)
        c = 2 * fro(d1)
        t = companion_root(d1, c)
        r = scaled(fro(2 * c * np.eye(n) - 2 * t @ t - d1), fro(d1), c * np.sqrt(n), fro(t) ** 2)
        worst_root = max(worst_root, r)

    tol = Tolerances(rel_eps=1e-8)
    worst_sq, reports_ok, pairs = 0.0, True, 0
    for k in range(10):
        rng = rng_for(6100 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n, with_eta=False)
        psi = form.to_map()
        c = complex(rng.uniform(0.5, 3.0))
        reports_ok &= check_equal_squares(psi, c, 50, 6100 + k, tol).passed
        root = np.sqrt(c)
        for i in range(5):
            if i % 2:
                p, q = root * random_involution(rng, n), root * random_involution(rng, n)
            else:
                nm = random_square_zero(rng, n, 1 + i % (n // 2))
                m = anticommuting_involution(nm)
                p, q = root * (m + nm), root * (m - nm)
            assert fro(p @ p - c * np.eye(n)) <= 1e-8 * max(1, abs(c)) * n
            assert fro(q @ q - c * np.eye(n)) <= 1e-8 * max(1, abs(c)) * n
            pp, pq = psi(p), psi(q)
            worst_sq = max(worst_sq, scaled(fro(pp @ pp - pq @ pq), fro(pp) ** 2, fro(pq) ** 2))
            pairs += 1
    ok = worst_root <= 1e-8 and worst_sq <= 1e-8 and reports_ok
    verdict(5, "companion roots and equal squares", ok,
            f"100 roots max {worst_root:.2e}; 10 maps x 50 pairs via check + {pairs} re-evaluated, max {worst_sq:.2e}")


# -- 6: square-zero pipeline ------------------------------------------------------

def test_criterion_6_square_zero_pipeline(verdict):
    failures, worst = 0, 0.0
    for k in range(10):
        rng = rng_for(7000 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n, with_eta=False)
        psi = form.to_map()
        rep = check_square_zero_preservation(psi, 200, 7000 + k)
        failures += not rep.passed
        worst = max(worst, rep.max_residual)

    # chained: passing the Jordan check implies square-zero preservation
    chain_bad = 0
    for k in range(50):
        rng = rng_for(7100 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n, with_eta=False)
        psi = form.to_map()
        d1 = random_complex(rng, n, n)
        if check_fixed_product_preserver(psi, d1, derive_d2(form, d1, "jordan"), "jordan", 3, k).passed:
            chain_bad += not check_square_zero_preservation(psi, 4, k).passed
        else:
            chain_bad += 1

    inv_worst = 0.0
    for k in range(500):
        rng = rng_for(7200 + k)
        n = 2 + k % 5
        nm = random_square_zero(rng, n, 1 + k % (n // 2))
        m = anticommuting_involution(nm)
        inv_worst = max(inv_worst, np.max(np.abs(m @ m - np.eye(n))), np.max(np.abs(nm @ m + m @ nm)))
    ok = failures == 0 and worst <= 1e-9 and chain_bad == 0 and inv_worst <= 1e-10
    verdict(6, "square-zero preservation and anticommuting involutions", ok,
            f"10 maps x 200 samples max {worst:.2e}; chain failures={chain_bad}/50; involution max abs error {inv_worst:.1e}")


# -- 7: idempotent identities -----------------------------------------------------

def test_criterion_7_idempotent_identities(verdict):
    failures, worst = 0, 0.0
    for k in range(20):
        rng = rng_for(8000 + k)
        n = 2 + k % 5
        form = random_canonical_form(rng, n, with_eta=False)
        rep = check_idempotent_identities(form.to_map(), 50, 8000 + k)
        failures += not rep.passed or not rep.details["psi_I_square_scalar"]
        worst = max(worst, rep.max_residual)

    detection_ok = True
    for n in range(2, 7):
        rng = rng_for(8100 + n)
        lam = random_complex(rng)
        base = lam * np.eye(n)
        wiggle = random_complex(rng, n, n)
        wiggle /= fro(wiggle)
        scale = fro(base)
        detection_ok &= is_scalar(base + 1e-12 * scale * wiggle)
        detection_ok &= not is_scalar(base + 1e-7 * scale * wiggle)
        # a map with non-scalar psi(I)^2 must be flagged
        r = random_complex(rng, n, n)
        skew = MatrixSpaceMap.from_function(n, lambda a, r=r: a + np.trace(a) * r)
        rep = check_idempotent_identities(skew, 5, n)
        detection_ok &= not rep.passed and not rep.details["psi_I_square_scalar"]
    ok = failures == 0 and worst <= 1e-9 and detection_ok
    verdict(7, "idempotent identities and scalar detection", ok,
            f"20 maps on spanning family + 50 projections, failures={failures}, max {worst:.2e}; detection ok={detection_ok}")


# -- 8: negative controls ---------------------------------------------------------------

def _recheck(psi, ce, n):
    """Re-evaluate a counterexample from scratch; returns the scaled residual."""
    m = ce.matrices
    ident = ce.identity
    if ident.startswith(("lie(", "jordan(")):
        pa, pb = psi(m["a"]), psi(m["b"])
        sign = -1 if ident.startswith("lie") else 1
        return scaled(fro(pa @ pb + sign * pb @ pa - m["d2"]), fro(pa) * fro(pb), fro(m["d2"]))
    if "psi(M)" in ident:
        (elem,) = (m[k] for k in ("a", "b") if k in m)
        assert fro(elem @ m["M"] - m["M"] @ elem) <= 1e-9 * max(1, fro(elem) * fro(m["M"]))
        pe, pm = psi(elem), psi(m["M"])
        return scaled(fro(pe @ pm - pm @ pe), fro(pe) * fro(pm))
    if "psi(S), psi(T)" in ident:
        ps, pt = psi(m["S"]), psi(m["T"])
        return scaled(fro(ps @ pt - pt @ ps), fro(ps) * fro(pt))
    if ident.startswith("theta(A')") or ident.startswith("rank(theta"):
        theta = restrict_to_traceless(psi)
        y = theta(m["A'"])
        s = np.linalg.svd(y, compute_uv=False)
        return scaled(max(np.sqrt(np.sum(s[1:] ** 2)), abs(np.trace(y))), fro(y))
    if ident == "2 psi(X)^2 - 2 psi(Y)^2 = d2":
        px, py = psi(m["X"]), psi(m["Y"])
        return scaled(fro(2 * px @ px - 2 * py @ py - m["d2"]), fro(px) ** 2, fro(py) ** 2, fro(m["d2"]))
    if ident == "psi(P)^2 = psi(Q)^2":
        pp, pq = psi(m["P"]), psi(m["Q"])
        return scaled(fro(pp @ pp - pq @ pq), fro(pp) ** 2, fro(pq) ** 2)
    if ident == "psi(N)^2 = 0":
        assert fro(m["N"] @ m["N"]) <= 1e-12
        pn = psi(m["N"])
        return scaled(fro(pn @ pn), fro(pn) ** 2)
    if ident.startswith("psi(L)") or ident.startswith("psi(I)^2 psi(L)"):
        lm = m["L"]
        assert fro(lm @ lm - lm) <= 1e-8 * max(1, fro(lm) ** 2)
        pl, pi = psi(lm), psi(np.eye(n))
        if ident.startswith("psi(L)/c"):
            c = np.trace(pi) / n
            q = pl / c
            return scaled(fro(q @ q - q), fro(q) ** 2)
        if ident.startswith("psi(L) psi(I)"):
            return scaled(fro(pl @ pi + pi @ pl - 2 * pl @ pl), fro(pl) * fro(pi), fro(pl) ** 2)
        return scaled(fro(pi @ pi @ pl - pl @ pi @ pi), fro(pi) ** 2 * fro(pl))
    if ident.startswith("L1") or ident == "psi(I)^2 is scalar":
        pi = psi(np.eye(n))
        p2 = pi @ pi
        lam = np.trace(p2) / n
        if ident == "psi(I)^2 is scalar":
            return scaled(fro(p2 - lam * np.eye(n)), fro(p2))
        l1 = (pi / np.sqrt(lam) + np.eye(n)) / 2
        return scaled(fro(l1 @ l1 - l1), fro(l1) ** 2)
    raise AssertionError(f"no re-evaluator for {ident!r}")


SUITES = ("lie", "jordan", "centralizer", "rank_one", "polarized", "equal_squares", "square_zero",
          "idempotents", "decompose")


def _negative_run(suite, k):
    """Returns (rejected, re-evaluated residual or None)."""
    rng = rng_for(9000 + k)
    n = 3 + k % 3
    form = random_canonical_form(rng, n, with_eta=suite in ("lie", "centralizer", "rank_one", "decompose"))
    psi = perturbed_map(form.to_map(), 1e-2, rng)
    tol = Tolerances()
    d1 = unit(1, 2, n) if k % 2 else random_traceless(rng, n)
    if suite == "decompose":
        try:
            decompose_full(psi, tol)
        except NotCanonicalError:
            # the form psi was built from no longer fits it
            units = [unit(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)]
            exact = form.to_map()
            resid = max(fro(psi(b) - exact(b)) for b in units)
            return True, resid / max(fro(psi(b)) for b in units)
        return False, None
    if suite in ("lie", "jordan"):
        rep = check_fixed_product_preserver(psi, d1, derive_d2(form, d1, suite), suite, 5, k, tol)
    elif suite == "centralizer":
        w = witness_family(d1, "lie", 1, k, tol)[0]
        rep = check_centralizer_inclusion(psi, w, tol, seed=k)
    elif suite == "rank_one":
        rep = check_rank_one_traceless_image(psi, 20, k, tol)
    elif suite == "polarized":
        rep = check_polarized_preserver(psi, d1, derive_d2(form, d1, "jordan"), 5, k, tol)
    elif suite == "equal_squares":
        rep = check_equal_squares(psi, 2.0, 10, k, tol)
    elif suite == "square_zero":
        rep = check_square_zero_preservation(psi, 10, k, tol)
    else:
        rep = check_idempotent_identities(psi, 10, k, tol)
    if rep.passed or rep.counterexample is None:
        return False, None
    return True, _recheck(psi, rep.counterexample, n)


@pytest.mark.parametrize("suite", SUITES)
def test_criterion_8_negative_controls(suite, verdict):
    silent, weak = 0, 0
    lowest = np.inf
    for k in range(100):
        rejected, resid = _negative_run(suite, k)
        if not rejected:
            silent += 1
            continue
        lowest = min(lowest, resid)
        weak += not resid > Tolerances().rel_eps
    ok = silent == 0 and weak == 0
    verdict(f"8/{suite}", f"perturbed maps rejected ({suite})", ok,
            f"100 perturbations with eps=1e-2, silent passes={silent}, "
            f"counterexamples not reproducing={weak}, smallest re-evaluated residual={lowest:.2e}")


# -- 9: CLI determinism --------------------------------------------------------------

def _invoke(argv):
    r = subprocess.run([sys.executable, "-m", "linpreserve.cli", *argv], cwd=GOLDEN,
                       capture_output=True, timeout=120)
    return r.returncode, r.stdout


def test_criterion_9_cli_determinism(verdict):
    cases = json.loads((GOLDEN / "cases.json").read_text())
    jobs = [c["argv"] for c in cases] * 2
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(_invoke, jobs))
    first, second = results[: len(cases)], results[len(cases):]
    differ = [c["name"] for c, a, b in zip(cases, first, second) if a != b]
    codes = [c["name"] for c, (code, _) in zip(cases, first) if code != c["exit"]]
    ok = not differ and not codes
    verdict(9, "repeated CLI runs are byte-identical", ok,
            f"{len(cases)} golden fixtures run twice in fresh processes, differing={differ}, wrong exit={codes}")
