"""Command-line front end.

Exit codes: 0 pass/success, 1 check failed (counterexample in the report),
2 usage or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import jsonio
from .canonical import decompose_full, decompose_jordan, decompose_traceless
from .core import Tolerances, fro
from .errors import AmbiguousFormError, InputError, NotCanonicalError, NumericalError
from .mapspace import canonical_map, restrict_to_traceless, trace_covector, with_trace_functional
from .preserver import (
    anticommuting_involution,
    check_centralizer_inclusion,
    check_fixed_product_preserver,
    check_idempotent_identities,
    check_polarized_preserver,
    check_rank_one_traceless_image,
    check_square_zero_preservation,
    companion_root,
    inverse_polarization,
    polarization_transfer,
)
from .products import (
    centralizer_basis,
    is_scalar,
    jordan_product,
    lie_bracket,
    witness_family,
)
from .fuzz import run_campaign

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(InputError):
    pass


def _need_seed(args):
    if args.seed is None:
        raise UsageError(f"'{args.command}' is randomized and requires --seed")
    return args.seed


def _complex(text: str, flag: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"{flag} expects a number like 2 or 1+0.5j, got {text!r}") from None


def _tol(args) -> Tolerances:
    return Tolerances(rel_eps=args.tol)


def _m(obj):
    return jsonio.matrix_to_json(obj)


def _verdict_code(verdict: str) -> int:
    return EXIT_OK if verdict == "pass" else EXIT_FAIL


# -- subcommands -------------------------------------------------------------

def cmd_bracket(args):
    a, b = jsonio.load_matrix(args.a), jsonio.load_matrix(args.b)
    return {"product": "lie", "result": _m(lie_bracket(a, b))}, EXIT_OK


def cmd_jordan(args):
    a, b = jsonio.load_matrix(args.a), jsonio.load_matrix(args.b)
    return {"product": "jordan", "result": _m(jordan_product(a, b))}, EXIT_OK


def cmd_centralizer(args):
    a = jsonio.load_matrix(args.a)
    cb = centralizer_basis(a, _tol(args))
    n = a.shape[0]
    return {
        "n": n,
        "dim": cb.dim,
        "rank_one_bound": n * n - 2 * n + 2,
        "scalar": bool(is_scalar(a, _tol(args))),
        "basis": [_m(p) for p in cb.basis],
    }, EXIT_OK


def cmd_witnesses(args):
    seed = _need_seed(args)
    if args.count is not None and args.count < 1:
        raise UsageError("--count must be positive")
    d1 = jsonio.load_matrix(args.d1)
    pairs = witness_family(d1, args.kind, args.count or args.trials, seed, _tol(args))
    return {
        "kind": args.kind,
        "seed": seed,
        "pairs": [
            {"a": _m(w.a), "b": _m(w.b), "provenance": w.provenance, "residual": w.residual()}
            for w in pairs
        ],
    }, EXIT_OK


def cmd_check(args):
    seed = _need_seed(args)
    psi = jsonio.load(args.map, "map")
    d1, d2 = jsonio.load_matrix(args.d1), jsonio.load_matrix(args.d2)
    r = check_fixed_product_preserver(psi, d1, d2, args.kind, args.trials, seed, _tol(args))
    return jsonio.report_to_json(r), _verdict_code(r.verdict)


def cmd_lemma1(args):
    seed = _need_seed(args)
    tol = _tol(args)
    psi = jsonio.load(args.map, "map")
    d1 = jsonio.load_matrix(args.d1)
    reports = [
        check_centralizer_inclusion(psi, w, tol, seed=seed + k)
        for k, w in enumerate(witness_family(d1, "lie", args.pairs, seed, tol))
    ]
    reports.append(check_rank_one_traceless_image(restrict_to_traceless(psi), args.trials, seed, tol))
    verdict = "pass" if all(r.passed for r in reports) else "fail"
    return {"verdict": verdict, "reports": [jsonio.report_to_json(r) for r in reports]}, _verdict_code(verdict)


def cmd_polarize(args):
    tol = _tol(args)
    if args.map is not None:
        seed = _need_seed(args)
        psi = jsonio.load(args.map, "map")
        if args.d1 is None or args.d2 is None:
            raise UsageError("polarize --map needs --d1 and --d2")
        d1, d2 = jsonio.load_matrix(args.d1), jsonio.load_matrix(args.d2)
        r = check_polarized_preserver(psi, d1, d2, args.trials, seed, tol)
        return jsonio.report_to_json(r), _verdict_code(r.verdict)
    if args.x is None or args.y is None:
        raise UsageError("polarize needs --x and --y (or --map with --d1/--d2)")
    x, y = jsonio.load_matrix(args.x), jsonio.load_matrix(args.y)
    a1, a2 = polarization_transfer(x, y, tol)
    bx, by = inverse_polarization(a1, a2)
    lhs = jordan_product(a1, a2)
    rhs = 2 * x @ x - 2 * y @ y
    return {
        "a1": _m(a1),
        "a2": _m(a2),
        "jordan_a1_a2": _m(lhs),
        "identity_residual": fro(lhs - rhs),
        "roundtrip_exact": bool(np.array_equal(bx, x) and np.array_equal(by, y)),
    }, EXIT_OK


def cmd_sqroot(args):
    d1 = jsonio.load_matrix(args.d1)
    c = _complex(args.c, "--c")
    t = companion_root(d1, c, _tol(args))
    n = d1.shape[0]
    return {
        "c": [c.real, c.imag],
        "t": _m(t),
        "residual": fro(2 * c * np.eye(n) - 2 * t @ t - d1),
    }, EXIT_OK


def cmd_involution(args):
    nm = jsonio.load_matrix(args.n_mat)
    m = anticommuting_involution(nm, _tol(args))
    n = nm.shape[0]
    return {
        "m": _m(m),
        "square_residual": fro(m @ m - np.eye(n)),
        "anticommutator_residual": fro(jordan_product(nm, m)),
    }, EXIT_OK


def cmd_squarezero(args):
    seed = _need_seed(args)
    psi = jsonio.load(args.map, "map")
    r = check_square_zero_preservation(psi, args.trials, seed, _tol(args))
    return jsonio.report_to_json(r), _verdict_code(r.verdict)


def cmd_idempotents(args):
    seed = _need_seed(args)
    psi = jsonio.load(args.map, "map")
    r = check_idempotent_identities(psi, args.trials, seed, _tol(args))
    return jsonio.report_to_json(r), _verdict_code(r.verdict)


def cmd_decompose(args):
    tol = _tol(args)
    psi = jsonio.load(args.map, "map")
    try:
        if args.space == "sl":
            form = decompose_traceless(restrict_to_traceless(psi), tol)
        elif args.space == "full":
            form = decompose_full(psi, tol)
        else:
            form = decompose_jordan(psi, tol)
    except AmbiguousFormError as exc:
        return {
            "verdict": "fail",
            "space": args.space,
            "reason": str(exc),
            "candidates": [jsonio.form_to_json(f) for f in exc.candidates],
        }, EXIT_FAIL
    except NotCanonicalError as exc:
        return {"verdict": "fail", "space": args.space, "reason": str(exc)}, EXIT_FAIL
    out = {"verdict": "pass", "space": args.space}
    out.update(jsonio.form_to_json(form))
    return out, EXIT_OK


def cmd_construct(args):
    n = args.n
    if n is None:
        raise UsageError("construct needs --n")
    u = jsonio.load_matrix(args.u) if args.u else np.eye(n)
    psi = canonical_map(n, args.variant, _complex(args.c, "--c"), u)
    if args.eta_trace:
        psi = with_trace_functional(psi, _complex(args.eta_trace, "--eta-trace") * trace_covector(n))
    return jsonio.map_to_json(psi), EXIT_OK


def cmd_fuzz(args):
    seed = _need_seed(args)
    n = args.n or 4
    if n < 2:
        raise UsageError("fuzz needs --n >= 2")
    report = run_campaign(n, args.trials, seed, args.checks, _tol(args))
    return report, _verdict_code(report["verdict"])


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="matrix size")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--tol", type=float, default=1e-9, help="relative residual tolerance")
    common.add_argument("--trials", type=int, default=20, help="random trials per check")
    common.add_argument("--out", default=None, help="also write the JSON result to this path")

    parser = argparse.ArgumentParser(
        prog="linpreserve",
        description="Verify and decompose linear maps preserving fixed Lie or Jordan products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    for name, func, what in (("bracket", cmd_bracket, "[A, B]"), ("jordan", cmd_jordan, "A o B")):
        p = add(name, func, f"compute {what}")
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)

    p = add("centralizer", cmd_centralizer, "basis of the centralizer of A")
    p.add_argument("--a", required=True)

    p = add("witnesses", cmd_witnesses, "pairs whose product equals D1")
    p.add_argument("--d1", required=True)
    p.add_argument("--kind", choices=("lie", "jordan"), default="lie")
    p.add_argument("--count", type=int, default=None, help="number of pairs (default: --trials)")

    p = add("check", cmd_check, "fixed-product preserver check")
    p.add_argument("--kind", choices=("lie", "jordan"), default="lie")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--map", required=True)

    p = add("lemma1", cmd_lemma1, "centralizer inclusion and rank-one traceless images")
    p.add_argument("--map", required=True)
    p.add_argument("--d1", required=True)
    p.add_argument("--pairs", type=int, default=3, help="witness pairs to inspect")

    p = add("polarize", cmd_polarize, "polarization identity, or the squared-difference preserver check")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--map")
    p.add_argument("--d1")
    p.add_argument("--d2")

    p = add("sqroot", cmd_sqroot, "companion root T with 2cI - 2T^2 = D1")
    p.add_argument("--d1", required=True)
    p.add_argument("--c", required=True, help="shift, e.g. 2 or 1+0.5j")

    p = add("involution", cmd_involution, "M with M^2 = I anticommuting with square-zero N")
    p.add_argument("--n-mat", dest="n_mat", required=True)

    p = add("squarezero", cmd_squarezero, "square-zero preservation check")
    p.add_argument("--map", required=True)

    p = add("idempotents", cmd_idempotents, "idempotent identities check")
    p.add_argument("--map", required=True)

    p = add("decompose", cmd_decompose, "recover (variant, c, U, eta)")
    p.add_argument("--map", required=True)
    p.add_argument("--space", choices=("sl", "full", "jordan"), default="full")

    p = add("construct", cmd_construct, "build a canonical map as JSON")
    p.add_argument("--variant", choices=("identity", "transpose"), default="identity")
    p.add_argument("--c", default="1")
    p.add_argument("--u", default=None, help="conjugator (default identity)")
    p.add_argument("--eta-trace", dest="eta_trace", default=None, help="add w * trace(A) * I")

    p = add("fuzz", cmd_fuzz, "seeded campaign over canonical and perturbed maps")
    p.add_argument("--checks", type=int, default=5, help="witness pairs / samples per check")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.trials < 1:
            raise UsageError("--trials must be positive")
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        result, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NotCanonicalError as exc:
        print(f"not canonical: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = jsonio.dumps(result)
    sys.stdout.write(text)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
