"""Seeded campaign: canonical maps must pass every check, perturbed ones must not."""
from __future__ import annotations

from .canonical import decompose_full, decompose_jordan
from .core import DEFAULT_TOL, Tolerances, fro
from .errors import NotCanonicalError
from .mapspace import gauge
from .preserver import (
    check_fixed_product_preserver,
    check_idempotent_identities,
    check_square_zero_preservation,
    derive_d2,
)
from .products import witness_family
from .sampling import perturbed_map, random_canonical_form, random_traceless, rng_for

PERTURBATION = 1e-2


def _suite(psi, psi_j, form, form_j, d1, trials, seed, tol, lie_pairs, jordan_pairs):
    out = {}
    out["lie"] = check_fixed_product_preserver(
        psi, d1, derive_d2(form, d1, "lie"), "lie", trials, seed, tol, pairs=lie_pairs).verdict
    out["jordan"] = check_fixed_product_preserver(
        psi_j, d1, derive_d2(form_j, d1, "jordan"), "jordan", trials, seed, tol, pairs=jordan_pairs).verdict
    out["square_zero"] = check_square_zero_preservation(psi_j, trials, seed, tol).verdict
    out["idempotents"] = check_idempotent_identities(psi_j, trials, seed, tol).verdict
    return out


def _decompose(psi, form, n, tol):
    try:
        got = decompose_full(psi, tol)
    except NotCanonicalError:
        return "rejected"
    same = (
        got.variant == form.variant
        and abs(got.c - form.c) <= 1e-8 * abs(form.c)
        and fro(got.u - gauge(form.u)) <= 1e-6 * fro(form.u)
    )
    return "recovered" if same else "mismatch"


def run_campaign(n: int, trials: int, seed: int, checks_per_map: int = 5,
                 tol: Tolerances = DEFAULT_TOL) -> dict:
    """One entry per constructed map, in trial order; trial i uses seed + i."""
    entries = []
    anomalies = 0
    for i in range(trials):
        s = seed + i
        rng = rng_for(s)
        form = random_canonical_form(rng, n)
        form_j = random_canonical_form(rng, n, form.variant, with_eta=False)
        psi, psi_j = form.to_map(), form_j.to_map()
        d1 = random_traceless(rng, n)
        d1 /= fro(d1)
        lie_pairs = witness_family(d1, "lie", checks_per_map, s, tol)
        jordan_pairs = witness_family(d1, "jordan", checks_per_map, s, tol)
        good = _suite(psi, psi_j, form, form_j, d1, checks_per_map, s, tol, lie_pairs, jordan_pairs)
        bad = _suite(perturbed_map(psi, PERTURBATION, rng), perturbed_map(psi_j, PERTURBATION, rng),
                     form, form_j, d1, checks_per_map, s, tol, lie_pairs, jordan_pairs)
        entry = {"trial": i, "seed": s, "variant": form.variant, "canonical": good, "perturbed": bad}
        trouble = [k for k, v in good.items() if v != "pass"] + [k for k, v in bad.items() if v != "fail"]
        if n >= 3:
            entry["decompose"] = _decompose(psi, form, n, tol)
            try:
                decompose_jordan(perturbed_map(psi_j, PERTURBATION, rng), tol)
                entry["decompose_perturbed"] = "accepted"
            except NotCanonicalError:
                entry["decompose_perturbed"] = "rejected"
            if entry["decompose"] != "recovered":
                trouble.append("decompose")
            if entry["decompose_perturbed"] != "rejected":
                trouble.append("decompose_perturbed")
        entry["anomalies"] = trouble
        anomalies += bool(trouble)
        entries.append(entry)
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "perturbation": PERTURBATION,
        "anomalous_trials": anomalies,
        "verdict": "pass" if anomalies == 0 else "fail",
        "entries": entries,
    }
