"""Command-line front end.

Every command reads JSON documents (see ``documents``) and prints a document.
Exit codes: 0 when the check passes, 1 on a semantic failure (the witness is
in the printed report), 2 on unreadable or invalid input.

File arguments that do not exist on disk are looked up among the bundled
fixtures, so ``fig4`` or ``fixtures/fig4_prism4.json`` both find the staircase trees of the segment times the tetrahedron.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from importlib import resources
from itertools import combinations, product
from typing import Any, Sequence

from . import __version__
from .coherent import diagonal_field, isomorphism_classes, omm, tropically_nonsingular_minors
from .core import Report, SignedVector, check_full_gp, is_chirotope, is_matroid, sign_char, subset_label
from .documents import (
    DocumentError,
    load_document,
    make_document,
    parse,
    signmap_payload,
    validate_document,
)
from .hyperfields import builtin, check_axioms, h_chirotope, has_ip, strong_matroid_check, weak_matroid_check
from .oriented import (
    chirotope,
    circuits_of,
    cocircuits,
    cocircuits_of,
    covector_sweep,
    dual_pair,
    duality_identity,
    is_covector,
    pointed_matrix,
    psi,
    signed_circuits,
)
from .triangulation import MatchingField, TreeSet, extract_matching_field, is_linkage, pointed_extension, validate_triangulation

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- fixtures and argument parsing helpers -----------------------------------------


def fixture_dir():
    return resources.files("matchfield").joinpath("fixtures")


def fixture_names() -> list[str]:
    return sorted(p.name[:-5] for p in fixture_dir().iterdir() if p.name.endswith(".json"))


def resolve_path(path: str) -> str:
    if os.path.exists(path):
        return path
    stem = os.path.basename(path)
    if stem.endswith(".json"):
        stem = stem[:-5]
    names = fixture_names()
    hits = [n for n in names if n == stem] or [n for n in names if n.startswith(stem)]
    if len(hits) == 1:
        return str(fixture_dir().joinpath(hits[0] + ".json"))
    if hits:
        raise InputError(f"ambiguous fixture name {path!r}: {', '.join(hits)}")
    raise InputError(f"no such file or fixture: {path}")


def read(path: str, expect: str | tuple[str, ...] | None = None) -> tuple[dict, Any]:
    """Load a document from a file, a bundled fixture name, or stdin for "-"."""
    try:
        if path == "-":
            try:
                doc = validate_document(json.load(sys.stdin), expect)
            except json.JSONDecodeError as exc:
                raise DocumentError(f"cannot read stdin: {exc}") from None
        else:
            doc = load_document(resolve_path(path), expect)
        return doc, parse(doc)
    except DocumentError as exc:
        raise InputError(str(exc)) from None


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise InputError(f"not a comma separated list of integers: {text!r}") from None


def parse_edges(text: str) -> list[tuple[int, int]]:
    """``"1:1,2:3"`` -> [(1, 1), (2, 3)]."""
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            r, e = tok.split(":")
            out.append((int(r), int(e)))
        except ValueError:
            raise InputError(f"bad edge {tok!r}; expected row:element") from None
    return out


def parse_sign_list(text: str) -> tuple[int, ...]:
    try:
        return SignedVector.parse(text).signs
    except ValueError as exc:
        raise InputError(str(exc)) from None


def random_matrices(d: int, n: int, count: int, seed: int | None):
    rng = random.Random(seed)
    for _ in range(count):
        yield tuple(tuple(rng.choice((1, -1)) for _ in range(n)) for _ in range(d))


def all_matrices(d: int, n: int):
    for signs in product((1, -1), repeat=d * n):
        yield tuple(tuple(signs[i * n:(i + 1) * n]) for i in range(d))


def sweep_matrices(args, d: int, n: int, limit: int = 12):
    """The given --signs matrix, every matrix if there are at most 2^limit,
    or --samples seeded random ones."""
    if args.signs:
        return [read_matrix(args.signs)]
    if d * n <= limit and not args.samples:
        return list(all_matrices(d, n))
    return list(random_matrices(d, n, args.samples or 20, args.seed))


def read_matrix(path: str):
    _, A = read(path, "sign_matrix")
    return A


def read_source(args) -> tuple[TreeSet | None, MatchingField]:
    """Trees or a field from the positional argument, --trees or --field."""
    path = getattr(args, "source", None) or getattr(args, "trees", None) or getattr(args, "field", None)
    if not path:
        raise InputError("no triangulation or matching field given")
    doc, obj = read(path, ("treeset", "matching_field"))
    if isinstance(obj, TreeSet):
        try:
            return obj, extract_matching_field(obj)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return None, obj


def need_trees(ts: TreeSet | None) -> TreeSet:
    if ts is None:
        raise InputError("this command needs a triangulation (treeset document)")
    return ts


def signs_payload(v: SignedVector | Sequence[int]) -> list[str]:
    signs = v.signs if isinstance(v, SignedVector) else v
    return [sign_char(s) for s in signs]


def report_document(rep: Report, result: Any = None) -> dict:
    payload = rep.to_dict()
    if result is not None:
        payload["result"] = result
    return make_document("report", payload)


# --- output -----------------------------------------------------------------------------


def emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
        return
    kind, p = doc["kind"], doc["payload"]
    if kind == "report":
        print(f"{p['name']}: {'PASS' if p['passed'] else 'FAIL'}")
        if p.get("witness") is not None:
            print(f"witness: {json.dumps(p['witness'])}")
        for k, v in (p.get("detail") or {}).items():
            print(f"{k}: {json.dumps(v)}")
        result = p.get("result")
        if isinstance(result, list):
            for row in result:
                print(json.dumps(row))
        elif result is not None:
            print(json.dumps(result))
    elif kind == "sign_map":
        for label, v in p["values"].items():
            print(f"{label}\t{v if isinstance(v, str) else json.dumps(v)}")
        for name, rep in (p.get("checks") or {}).items():
            print(f"{name}: {'PASS' if rep['passed'] else 'FAIL'}")
    else:
        print(json.dumps(doc, indent=2))


# --- commands ----------------------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, bool]:
    _, ts = read(args.file, "treeset")
    try:
        rep = validate_triangulation(ts)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return report_document(rep), rep.passed


def cmd_chirotope(args) -> tuple[dict, bool]:
    ts, mf = read_source(args)
    A = read_matrix(args.signs)
    if args.pointed:
        ts = need_trees(ts)
        mf = extract_matching_field(pointed_extension(ts))
        if len(A[0]) == ts.n:
            A = pointed_matrix(A)
    try:
        chi = chirotope(mf, A)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    gp = check_full_gp(chi)
    payload = signmap_payload(chi)
    payload["checks"] = {"full_gp": gp.to_dict()}
    return make_document("sign_map", payload), gp.passed


def cmd_circuits(args) -> tuple[dict, bool]:
    _, mf = read_source(args)
    taus = [parse_int_list(args.tau)] if args.tau else list(combinations(range(1, mf.n + 1), mf.d + 1))
    results, failure = [], None
    for A in sweep_matrices(args, mf.d, mf.n):
        from_chi = {c.signs for c in circuits_of(chirotope(mf, A))}
        for tau in taus:
            try:
                pos, _ = signed_circuits(mf, A, tau)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            ok = pos.signs in from_chi or pos.neg().signs in from_chi
            if args.signs:
                results.append({"tau": list(tau), "circuit": signs_payload(pos), "matches_chirotope": ok})
            if not ok and failure is None:
                failure = {"tau": list(tau), "circuit": signs_payload(pos), "matrix": [signs_payload(r) for r in A]}
    rep = Report("circuits", failure is None, witness=failure, detail={"taus": len(taus)})
    return report_document(rep, results or None), rep.passed


def cmd_cocircuits(args) -> tuple[dict, bool]:
    ts, mf = read_source(args)
    ts = need_trees(ts)
    rhos = [parse_int_list(args.rho)] if args.rho else list(combinations(range(1, ts.n + 1), ts.n - ts.d + 1))
    results, failure = [], None
    for A in sweep_matrices(args, ts.d, ts.n):
        from_chi = {c.signs for c in cocircuits_of(chirotope(mf, A))}
        for rho in rhos:
            try:
                pos, _ = cocircuits(ts, A, rho)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            ok = pos.signs in from_chi or pos.neg().signs in from_chi
            if args.signs:
                results.append({"rho": list(rho), "cocircuit": signs_payload(pos), "matches_chirotope": ok})
            if not ok and failure is None:
                failure = {"rho": list(rho), "cocircuit": signs_payload(pos), "matrix": [signs_payload(r) for r in A]}
    rep = Report("cocircuits", failure is None, witness=failure, detail={"rhos": len(rhos)})
    return report_document(rep, results or None), rep.passed


def cmd_covector(args) -> tuple[dict, bool]:
    ts, _ = read_source(args)
    ts = need_trees(ts)
    if args.S or args.forest:
        if not (args.S and args.forest and args.signs):
            raise InputError("--S, --forest and --signs go together")
        At = pointed_matrix(read_matrix(args.signs))
        S, F = parse_sign_list(args.S), parse_edges(args.forest)
        try:
            X = psi(S, F, At)
            chi = chirotope(extract_matching_field(pointed_extension(ts)), At)
            ok = is_covector(X, chi)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rep = Report("covector", ok, witness=None if ok else signs_payload(X))
        return report_document(rep, {"X": signs_payload(X)}), ok
    checked, failure = 0, None
    for A in sweep_matrices(args, ts.d, ts.n):
        rep = covector_sweep(ts, A)
        checked += rep.detail.get("checked", 0)
        if not rep.passed:
            failure = {"matrix": [signs_payload(r) for r in A], **rep.witness}
            break
    rep = Report("covectors", failure is None, witness=failure, detail={"checked": checked})
    return report_document(rep), rep.passed


def cmd_dual(args) -> tuple[dict, bool]:
    ts, _ = read_source(args)
    ts = need_trees(ts)
    matrices = sweep_matrices(args, ts.d, ts.n)
    partitions = 0
    for A in matrices:
        try:
            chi1, chi2 = dual_pair(ts, A)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rep = duality_identity(chi1, chi2)
        partitions = rep.detail["checked"]
        if not rep.passed:
            w = {"matrix": [signs_payload(r) for r in A], **rep.witness}
            return report_document(Report("duality", False, witness=w)), False
    rep = Report("duality", True, detail={"matrices": len(matrices), "partitions": partitions})
    return report_document(rep), True


def cmd_hyperfield(args) -> tuple[dict, bool]:
    try:
        H = builtin(args.hyperfield)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.map:
        doc, _ = read(args.map, "sign_map")
        p = dict(doc["payload"])
        p["hyperfield"] = H.name
        try:
            chi = parse({"kind": "sign_map", "payload": p})
        except (DocumentError, ValueError) as exc:
            raise InputError(str(exc)) from None
    elif args.matrix:
        _, mf = read_source(args)
        _, (HM, rows) = read(args.matrix, "hmatrix")
        if HM.name != H.name:
            rows = [[H.normalize(x) for x in row] for row in rows]
        try:
            chi = h_chirotope(mf, rows, H)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        rep = check_axioms(H) if H.finite else Report(f"axioms of {H.name}", True, detail={"exhaustive": False})
        try:
            ip = has_ip(H)
        except ValueError:
            ip = None
        rep.detail["inflation_property"] = ip
        return report_document(rep), rep.passed
    weak = weak_matroid_check(chi, H)
    strong = strong_matroid_check(chi, H)
    rep = Report(
        f"matroid over {H.name}",
        weak.passed and strong.passed,
        witness=None if weak.passed and strong.passed else (weak.witness if not weak.passed else strong.witness),
        detail={"weak": weak.passed, "strong": strong.passed},
    )
    return report_document(rep, signmap_payload(chi)["values"]), rep.passed


def cmd_omm(args) -> tuple[dict, bool]:
    if args.diagonal:
        d, n = args.diagonal
        try:
            mf = diagonal_field(d, n)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        _, mf = read_source(args)
    try:
        oset = omm(mf)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    linkage = is_linkage(mf).passed
    expected = 2 ** (mf.d * (mf.n - mf.d) + 1)
    detail = {"count": len(oset), "linkage": linkage, "expected": expected if linkage else None}
    if args.classes:
        try:
            detail["classes"] = len(isomorphism_classes(oset))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if args.chirotopes:
        detail["all_chirotopes"] = all(is_chirotope(c) for c in oset.maps)
    passed = (not linkage) or len(oset) == expected
    rep = Report("omm count", passed, witness=None if passed else {"count": len(oset), "expected": expected}, detail=detail)
    return report_document(rep), passed


def cmd_tropical_minors(args) -> tuple[dict, bool]:
    _, (H, rows) = read(args.file, "hmatrix")
    if H.name != "tropical":
        raise InputError("tropical-minors needs a tropical hyperfield matrix")
    subsets = sorted(tropically_nonsingular_minors(rows))
    d, n = len(rows), len(rows[0])
    ok = bool(subsets) and is_matroid(subsets)
    rep = Report("tropical minors", ok, witness=None if ok else "not a matroid", detail={"d": d, "n": n})
    return report_document(rep, [subset_label(s) for s in subsets]), ok


def cmd_fixtures(args) -> tuple[dict, bool]:
    names = fixture_names()
    rep = Report("fixtures", True, detail={"directory": str(fixture_dir())})
    return report_document(rep, names), True


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matchfield", description="Oriented matroids from triangulations of products of simplices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p, positional=True):
        if positional:
            p.add_argument("source", nargs="?", help="treeset or matching_field document")
        p.add_argument("--trees", help="treeset document")
        p.add_argument("--field", help="matching_field document")

    def sweep(p):
        p.add_argument("--signs", help="sign_matrix document; without it the command sweeps matrices")
        p.add_argument("--samples", type=int, default=0, help="number of seeded random matrices in a sweep")

    p = sub.add_parser("validate", parents=[common], help="check that trees form a triangulation")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chirotope", parents=[common], help="sign map of a field and a sign matrix")
    source(p)
    p.add_argument("--signs", required=True)
    p.add_argument("--pointed", action="store_true", help="use the pointed field and the matrix (I | A)")
    p.set_defaults(func=cmd_chirotope)

    p = sub.add_parser("circuits", parents=[common], help="signed circuits from linkage pd-graphs")
    source(p)
    sweep(p)
    p.add_argument("--tau", help="a (d+1)-subset, e.g. 1,2,3")
    p.set_defaults(func=cmd_circuits)

    p = sub.add_parser("cocircuits", parents=[common], help="signed cocircuits from Chow trees")
    source(p)
    sweep(p)
    p.add_argument("--rho", help="an (n-d+1)-subset, e.g. 1,2,4")
    p.set_defaults(func=cmd_cocircuits)

    p = sub.add_parser("covector", parents=[common], help="covectors psi(S, F) on the pointed field")
    source(p)
    sweep(p)
    p.add_argument("--S", help="sign vector on the rows, e.g. 0,-,+")
    p.add_argument("--forest", help="edges as row:element with copies labelled 1..d, e.g. 2:2,2:4")
    p.set_defaults(func=cmd_covector)

    p = sub.add_parser("dual", parents=[common], help="duality identity of the pointed pair")
    source(p)
    sweep(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("hyperfield", parents=[common], help="axioms, or weak and strong matroid checks over a hyperfield")
    source(p, positional=False)
    p.add_argument("--hyperfield", required=True)
    p.add_argument("--matrix", help="hmatrix document, used with --field or --trees")
    p.add_argument("--map", help="sign_map document with hyperfield values")
    p.set_defaults(func=cmd_hyperfield)

    p = sub.add_parser("omm", parents=[common], help="all sign maps of a field")
    source(p)
    p.add_argument("--diagonal", nargs=2, type=int, metavar=("D", "N"))
    p.add_argument("--classes", action="store_true", help="also count isomorphism classes")
    p.add_argument("--chirotopes", action="store_true", help="also test every map with the GP relations")
    p.set_defaults(func=cmd_omm)

    p = sub.add_parser("tropical-minors", parents=[common], help="tropically non-singular maximal minors")
    p.add_argument("file")
    p.set_defaults(func=cmd_tropical_minors)

    p = sub.add_parser("fixtures", parents=[common], help="list the bundled fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        doc, passed = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(doc, args.format)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
