"""Command-line interface.

Every command prints one JSON document with the keys ``command``,
``algebra``, ``results``, ``provenance`` and ``version`` (``--pretty`` gives
an indented text rendering instead).  Exit status: 0 on success, 1 when a
computation or self-test item fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import __version__
from .algebra import (
    Algebra,
    AlgebraError,
    RadicalUnavailable,
    center,
    group_algebra,
    load_spec,
    nakayama_algebra,
    radical,
    symmetric_group_generators,
    trunc_poly_algebra,
)
from .derlie import Derivation, bracket, derived_series, hh1, witt_basis
from .exactlin import Subspace, check_prime, matmul, solve
from .integrate import DEFAULT_BUDGET, integrable_report
from .symgroup import hh1_dim_sym, lemma_counts, series_coeffs, singular_count


class InputError(Exception):
    pass


# ------------------------------------------------------------ algebra input


def _algebra_from_args(args) -> Algebra:
    preset = args.preset
    if preset == "file" or (preset is None and args.spec):
        if not args.spec:
            raise InputError("--preset file needs --spec PATH")
        try:
            return load_spec(args.spec)
        except OSError as exc:
            raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
    if preset is None:
        raise InputError("choose an algebra with --preset or --spec")
    if args.p is None:
        raise InputError(f"--preset {preset} needs --p")
    if preset == "trunc-poly":
        return trunc_poly_algebra(args.vars, args.p)
    if preset == "nakayama":
        if args.m is None or args.n is None:
            raise InputError("--preset nakayama needs --m and --n")
        return nakayama_algebra(args.m, args.n, args.p)
    if preset == "group":
        gens = args.gens
        if args.sym is not None:
            gens = symmetric_group_generators(args.sym)
        if not gens:
            raise InputError("--preset group needs --gens or --sym")
        return group_algebra(gens, args.p)
    raise InputError(f"unknown preset {preset!r}")


def _labelled_classes(A: Algebra) -> dict[str, Derivation]:
    if A.kind == "trunc-poly" and A.params.get("vars") == 2:
        return witt_basis(A)
    return {f"class{k}": D for k, D in enumerate(hh1(A).class_reps)}


def _format_vector(A: Algebra, v) -> str:
    terms = []
    for k in np.flatnonzero(v):
        c = int(v[k])
        terms.append(A.labels[k] if c == 1 else f"{c}*{A.labels[k]}")
    return " + ".join(terms) if terms else "0"


def _format_derivation(D: Derivation) -> dict[str, str]:
    A = D.algebra
    keys = A.generators if A.generators is not None else range(A.dim)
    return {A.labels[g]: _format_vector(A, D.matrix[:, g]) for g in keys}


def _lie_closure(A: Algebra, S: Subspace) -> Subspace:
    d = A.dim
    while True:
        mats = S.basis.reshape(-1, d, d)
        extra = [
            (matmul(a, b, A.p) - matmul(b, a, A.p)).reshape(-1)
            for i, a in enumerate(mats) for b in mats[i + 1:]
        ]
        nxt = S.sum(Subspace.from_vectors(np.mod(np.array(extra, dtype=np.int64), A.p).reshape(-1, d * d), A.p, d * d))
        if nxt.dim == S.dim:
            return S
        S = nxt


# ---------------------------------------------------------------- commands


def cmd_algebra(A: Algebra, args) -> tuple[dict, Any]:
    try:
        rad = radical(A).dim
    except RadicalUnavailable:
        rad = None
    return {
        "dim": A.dim,
        "center_dim": center(A).dim,
        "radical_dim": rad,
        "commutative": A.is_commutative(),
        "basis": list(A.labels),
    }, "exact"


def cmd_hh1(A: Algebra, args) -> tuple[dict, Any]:
    h = hh1(A)
    return {
        "der_dim": h.der.dim,
        "inn_dim": h.inn.dim,
        "hh1_dim": h.dim,
        "class_representatives": {
            f"class{k}": _format_derivation(D) for k, D in enumerate(h.class_reps)
        },
    }, "exact"


def cmd_bracket_table(A: Algebra, args) -> tuple[dict, Any]:
    h = hh1(A)
    classes = _labelled_classes(A)
    names = list(classes)
    d2 = A.dim**2
    cols = [D.vector for D in classes.values()] + list(h.inn.basis)
    M = np.array(cols, dtype=np.int64).reshape(-1, d2).T
    table = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            v = bracket(classes[a], classes[b]).vector
            sol = solve(M, v, A.p)
            if sol is None:
                raise ArithmeticError("bracket left the span of the class representatives")
            coeffs = sol[0][: len(names)]
            terms = [n if c == 1 else f"{int(c)}*{n}" for n, c in zip(names, coeffs) if c]
            table[f"[{a}, {b}]"] = " + ".join(terms) if terms else "0"
    return {"classes": names, "brackets_mod_inner": table}, "exact"


def _budget(args):
    return None if args.exhaustive else args.budget


def _order(A: Algebra, args) -> int:
    return args.order if args.order is not None else 2 * A.p * A.p


def cmd_integrability(A: Algebra, args) -> tuple[dict, Any]:
    rep = integrable_report(A, _order(A, args), _budget(args), classes=_labelled_classes(A),
                            cert_degree=args.cert_degree)
    rep.pop("_certified_space")
    provenance = {row["class"]: row["provenance"] for row in rep["classes"]}
    return rep, provenance


def cmd_solvability(A: Algebra, args) -> tuple[dict, Any]:
    rep = integrable_report(A, _order(A, args), _budget(args), classes=_labelled_classes(A),
                            cert_degree=args.cert_degree)
    h = hh1(A)
    L = _lie_closure(A, rep["_certified_space"])
    series = derived_series(A, L, modulo=h.inn)
    if series[-1] > 0:
        verdict, label = "NOT SOLVABLE", "CERTIFIED"
    elif L.dim - h.inn.dim == h.dim:
        verdict, label = "SOLVABLE", "CERTIFIED"
    else:
        verdict, label = "UNKNOWN", "UNDECIDED"
    return {
        "certified_integrable_dim": L.dim - h.inn.dim,
        "derived_series": series,
        "verdict": verdict,
        "undecided_classes": rep["undecided"],
    }, {"verdict": label}


def cmd_symgroup(args) -> tuple[dict, Any]:
    p = check_prime(args.p)
    coeffs = series_coeffs(p, args.nmax)
    rows = []
    for n in range(1, args.nmax + 1):
        dim = hh1_dim_sym(n, p)
        counts = lemma_counts(n, p)
        rows.append({
            "n": n,
            "hh1_dim": dim,
            "series_coeff": coeffs[n],
            "singular_count": singular_count(n, p),
            "lemma_counts": list(counts),
            "series_agrees": coeffs[n] == dim,
            "lemma_agrees": counts[0] == counts[1],
        })
    ok = all(r["series_agrees"] and r["lemma_agrees"] for r in rows)
    return {"p": p, "rows": rows, "all_agree": ok}, "exact"


def cmd_selftest(args) -> tuple[dict, Any, list]:
    from .checks import run_checks

    keys = args.only or None
    results = run_checks(keys, corrupt=args.inject_corruption)
    items = [
        {"item": r.key, "title": r.title, "passed": r.passed, "detail": _strip_timing(r.detail)}
        for r in results
    ]
    return {"items": items, "all_passed": all(r.passed for r in results)}, "exact", results


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, (list, tuple)):
        return [_strip_timing(v) for v in obj]
    return obj


# ------------------------------------------------------------------ output


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(report: dict, pretty: bool, out=None) -> None:
    out = out or sys.stdout
    if pretty:
        out.write("\n".join(_render_text(report)) + "\n")
    else:
        out.write(json.dumps(report, default=_jsonable, sort_keys=True) + "\n")


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--preset", choices=["group", "trunc-poly", "nakayama", "file"])
    alg.add_argument("--spec", help="algebra spec file (implies --preset file)")
    alg.add_argument("--p", type=int, help="field characteristic")
    alg.add_argument("--gens", help='permutation generators, e.g. "(1 2),(1 2 3)"')
    alg.add_argument("--sym", type=int, help="symmetric group S_n (overrides --gens)")
    alg.add_argument("--vars", type=int, default=2, help="number of variables for trunc-poly")
    alg.add_argument("--m", type=int, help="nakayama: number of vertices")
    alg.add_argument("--n", type=int, help="nakayama: maximal path length")

    out = argparse.ArgumentParser(add_help=False)
    fmt = out.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="JSON output (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="human-readable output")
    out.set_defaults(pretty=False)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--order", type=int, help="lift target order (default 2p^2)")
    search.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    search.add_argument("--exhaustive", action="store_true", help="ignore the budget")
    search.add_argument("--cert-degree", type=int, default=1, help="extra certificate degrees to search")

    parser = argparse.ArgumentParser(prog="hhint", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hhint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("algebra", parents=[alg, out], help="validate and fingerprint an algebra")
    sub.add_parser("hh1", parents=[alg, out], help="dimensions of Der, Inn and HH^1")
    sub.add_parser("bracket-table", parents=[alg, out], help="brackets of class representatives")
    sub.add_parser("integrability", parents=[alg, out, search], help="per-class integrability verdicts")
    sub.add_parser("solvability", parents=[alg, out, search], help="derived series of the integrable part")
    sym = sub.add_parser("symgroup", parents=[out], help="HH^1(kS_n) dimension table")
    sym.add_argument("--p", type=int, required=True)
    sym.add_argument("--nmax", type=int, default=10)
    st = sub.add_parser("selftest", parents=[out], help="run the reproduction suite")
    st.add_argument("--only", type=int, nargs="*", help="item numbers to run")
    st.add_argument("--inject-corruption", action="store_true",
                    help="add an algebra with corrupted structure constants (negative control)")
    return parser


ALGEBRA_COMMANDS = {
    "algebra": cmd_algebra,
    "hh1": cmd_hh1,
    "bracket-table": cmd_bracket_table,
    "integrability": cmd_integrability,
    "solvability": cmd_solvability,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = {"name": args.command, "args": {k: v for k, v in sorted(vars(args).items())
                                               if k not in ("command", "pretty")}}
    status = 0
    try:
        if args.command in ALGEBRA_COMMANDS:
            A = _algebra_from_args(args)
            results, provenance = ALGEBRA_COMMANDS[args.command](A, args)
            algebra = A.describe()
        elif args.command == "symgroup":
            results, provenance = cmd_symgroup(args)
            algebra = None
        else:
            results, provenance, raw = cmd_selftest(args)
            algebra = None
            status = 0 if results["all_passed"] else 1
            if args.pretty:
                for r in raw:
                    print(r.line())
                return status
    except (InputError, AlgebraError, ValueError) as exc:
        print(f"hhint: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failure
        print(f"hhint: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit({
        "command": command,
        "algebra": algebra,
        "results": results,
        "provenance": provenance,
        "version": __version__,
    }, args.pretty)
    return status


if __name__ == "__main__":
    sys.exit(main())
