"""Command-line front end: ``qtoric <command> --input bundle.json``.

Exit codes: 0 success, 1 a certificate failed verification, 2 invalid input,
3 a decision came back undecided.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__, conic
from .bounds import (
    cohomogeneity_one_predictions,
    homogeneous_check,
    match_cohomogeneity_one,
    symmetry_report,
)
from .catalogue import InputBundle, catalogue
from .certificates import qtype_document, sos_document, verify_document
from .charalg import NondegeneracyError, check_nondegeneracy, pontrjagin_p1, presentation
from .polytope import InvalidPolytope, euler_characteristic, h_vector, validate
from .qtype import CertificateError, Undecided, Verdict, is_q_type, p1_negative_sos

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_UNDECIDED = 3

SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class InputError(Exception):
    """Bad input file: unreadable, malformed JSON, or schema violation."""


@dataclass
class Outcome:
    code: int
    lines: list[str] = field(default_factory=list)
    payload: dict[str, Any] = field(default_factory=dict)


def denom_cap() -> int:
    raw = os.environ.get("QTORIC_DENOM_CAP")
    if raw is None:
        return conic.DEFAULT_DENOM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"QTORIC_DENOM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError("QTORIC_DENOM_CAP must be positive")
    return cap


def load_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"{path}: cannot read: {err.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}") from None


def load_bundle(source: str) -> InputBundle:
    if source.startswith("example:"):
        name = source.split(":", 1)[1]
        for b in catalogue():
            if b.name == name:
                return b
        raise InputError(f"no catalogue example named {name!r}")
    try:
        bundle = InputBundle.from_json(load_json(source))
    except ValueError as err:
        raise InputError(f"{source}: {err}") from None
    if not bundle.name:
        bundle = InputBundle(bundle.polytope, bundle.lam, Path(source).stem, bundle.options)
    return bundle


# -- rendering ---------------------------------------------------------------


def fmt(x) -> str:
    return str(Fraction(x))


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def fmt_mat(m: Sequence[Sequence]) -> str:
    return "[" + ", ".join("[" + ", ".join(fmt(x) for x in row) + "]" for row in m) + "]"


def table(rows: Sequence[tuple[str, Any]]) -> list[str]:
    width = max((len(k) for k, _ in rows), default=0)
    return [f"{k.ljust(width)}  {v}" for k, v in rows]


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, Verdict):
        return x.value
    return x


# -- commands ----------------------------------------------------------------


def cmd_validate(b: InputBundle, opts: dict) -> Outcome:
    report = validate(b.polytope)
    rows = [("polytope", "ok" if report.ok else "INVALID")]
    for v in report.violations:
        rows.append(("  " + v.code, v.message))
    payload: dict[str, Any] = {
        "polytope_ok": report.ok,
        "violations": [{"code": v.code, "message": v.message} for v in report.violations],
        "warnings": list(report.warnings),
    }
    code = EXIT_OK if report.ok else EXIT_INVALID
    if report.ok:
        nd = check_nondegeneracy(b.polytope, b.lam)
        rows.append(("lambda", "nondegenerate" if nd.ok else "DEGENERATE"))
        for vertex, d in nd.failures:
            rows.append(("  vertex " + str(list(vertex)), f"det = {d}"))
        rows.append(("h-vector", fmt_vec(h_vector(b.polytope))))
        payload["lambda_ok"] = nd.ok
        payload["failures"] = [{"vertex": list(v), "det": d} for v, d in nd.failures]
        payload["h_vector"] = list(h_vector(b.polytope))
        if not nd.ok:
            code = EXIT_INVALID
    for w in report.warnings:
        rows.append(("note", w))
    return Outcome(code, table(rows), payload)


def cmd_cohom(b: InputBundle, opts: dict) -> Outcome:
    pres = presentation(b.polytope, b.lam)
    betti = pres.betti()
    h = tuple(h_vector(b.polytope))
    rows = [
        ("n, m", f"{b.polytope.dim}, {b.polytope.num_facets}"),
        ("betti (H^0..H^2n)", fmt_vec(betti)),
        ("h-vector", fmt_vec(h)),
        ("edim = dim H^2", str(pres.h2_dim)),
        ("euler characteristic", str(euler_characteristic(b.polytope))),
    ]
    if betti != h:
        rows.append(("WARNING", "ring dimensions differ from the h-vector"))
    payload = {"betti": list(betti), "h_vector": list(h), "edim": pres.h2_dim, "chi": euler_characteristic(b.polytope)}
    return Outcome(EXIT_OK, table(rows), payload)


def cmd_p1(b: InputBundle, opts: dict) -> Outcome:
    pres = presentation(b.polytope, b.lam)
    p1 = pontrjagin_p1(b.polytope, b.lam, pres)
    rows = [
        ("u-basis facets", str(list(pres.basis_labels))),
        ("p1 gram", fmt_mat(p1.form.matrix)),
        ("H^4 basis", str([list(pres.monomials[i]) for i in pres.h4_basis])),
        ("p1 image in H^4", fmt_vec(p1.image)),
        ("p1 vanishes", "yes" if p1.vanishes else "no"),
    ]
    payload = {"gram": p1.form.matrix, "image": list(p1.image), "vanishes": p1.vanishes, "basis_labels": list(pres.basis_labels)}
    return Outcome(EXIT_OK, table(rows), jsonable(payload))


def _write_cert(doc: dict | None, opts: dict, stem: str, suffix: str) -> str | None:
    out_dir = opts.get("out_dir")
    if doc is None or out_dir is None:
        return None
    path = Path(out_dir) / f"{stem}.{suffix}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    return str(path)


def _undecided_rows(label: str, ev) -> list[tuple[str, str]]:
    if not isinstance(ev, Undecided):
        return []
    return [(f"{label} reason", ev.reason), (f"{label} numeric", json.dumps(ev.numeric))]


def cmd_qtype(b: InputBundle, opts: dict) -> Outcome:
    seed, cap = opts["seed"], opts["denom_cap"]
    pres = presentation(b.polytope, b.lam)
    p1 = pontrjagin_p1(b.polytope, b.lam, pres)
    qt = is_q_type(pres, seed=seed, denom_cap=cap)
    sos = p1_negative_sos(pres, p1.image, seed=seed, denom_cap=cap)
    m, n = b.polytope.num_facets, b.polytope.dim
    rows = [
        ("q-type", qt.verdict.value.upper()),
        ("p1 = -(sum of squares)", sos.verdict.value.upper()),
        ("facet screen", f"m={m} {'>=' if qt.meets_facet_bound else '<'} 2n={2 * n}"),
    ]
    if qt.definite_form is not None:
        rows.append(("definite form", fmt_mat(qt.definite_form)))
    if hasattr(sos.evidence, "psd_gram"):
        rows.append(("psd gram S", fmt_mat(sos.evidence.psd_gram)))
        rows.append(("squares", str(len(sos.evidence.square_list))))
    rows += _undecided_rows("q-type", qt.evidence) + _undecided_rows("sos", sos.evidence)
    violation = sos.verdict is Verdict.YES and qt.verdict is Verdict.NO
    if Verdict.UNDECIDED not in (qt.verdict, sos.verdict):
        rows.append(("implication sos => q-type", "VIOLATED" if violation else "holds"))

    bundle_json = b.to_json()
    qdoc = qtype_document(qt, pres, bundle=bundle_json, name=b.name)
    sdoc = sos_document(sos, pres, p1.image, bundle=bundle_json, name=b.name)
    paths = [_write_cert(qdoc, opts, b.name, "qtype"), _write_cert(sdoc, opts, b.name, "sos")]
    for path in paths:
        if path:
            rows.append(("certificate", path))
    lines = [f"q-type: {qt.verdict.value.upper()}"] + table(rows)
    payload = {
        "q_type": qt.verdict.value,
        "negative_sos": sos.verdict.value,
        "meets_facet_bound": qt.meets_facet_bound,
        "implication_violated": violation,
        "certificates": {"q_type": qdoc, "negative_sos": sdoc},
        "certificate_files": [p for p in paths if p],
    }
    if violation:
        code = EXIT_INVALID
    elif Verdict.UNDECIDED in (qt.verdict, sos.verdict):
        code = EXIT_UNDECIDED
    else:
        code = EXIT_OK
    return Outcome(code, lines, payload)


def cmd_bounds(b: InputBundle, opts: dict) -> Outcome:
    pres = presentation(b.polytope, b.lam)
    qt = is_q_type(pres, seed=opts["seed"], denom_cap=opts["denom_cap"])
    rep = symmetry_report(b.polytope, b.lam, qt.verdict)
    lines = []
    if not rep.facet_bound_ok:
        lines.append(f"m={rep.m} < 2n={2 * rep.n}: not q-type")
    rows = [
        ("n, m", f"{rep.n}, {rep.m}"),
        ("edim", str(rep.edim)),
        ("euler characteristic", str(rep.chi)),
        ("q-type", qt.verdict.value.upper()),
        ("torus degree T_t", f"{rep.t_lower} <= T_t <= {rep.t_upper}" if qt.verdict is Verdict.YES else f">= {rep.t_lower}"),
        ("semisimple degree N_t^ss", f"<= {rep.nss_upper}" if qt.verdict is Verdict.YES else "no bound (not q-type)"),
    ]
    for c in rep.verdicts:
        rows.append((c.name, ("pass" if c.passed else "FAIL") + (f"  {c.detail}" if c.detail else "")))
    code = EXIT_UNDECIDED if qt.verdict is Verdict.UNDECIDED else EXIT_OK
    if rep.contradiction:
        code = EXIT_INVALID
    return Outcome(code, lines + table(rows), rep.to_json())


def cmd_classify(b: InputBundle, opts: dict) -> Outcome:
    pres = presentation(b.polytope, b.lam)
    p1 = pontrjagin_p1(b.polytope, b.lam, pres)
    sos = p1_negative_sos(pres, p1.image, seed=opts["seed"], denom_cap=opts["denom_cap"])
    hom = homogeneous_check(b.polytope, b.lam, sos.verdict, pres)
    ks = match_cohomogeneity_one(b.polytope, b.lam, pres)
    rows = [("p1 = -(sum of squares)", sos.verdict.value.upper()), ("homogeneous", hom.status)]
    for c in hom.checks:
        rows.append(("  " + c.name, ("pass" if c.passed else "fail") + f"  {c.detail}"))
    rows.append(("cohomogeneity one", ", ".join(f"k={k}: SU(2)^{k} (x S^1)" for k in ks) if ks else "excluded"))
    payload = {
        "negative_sos": sos.verdict.value,
        "homogeneous": hom.status,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in hom.checks],
        "cohomogeneity_one_k": ks,
    }
    code = EXIT_UNDECIDED if sos.verdict is Verdict.UNDECIDED else EXIT_OK
    return Outcome(code, table(rows), payload)


def cmd_oracle(b: InputBundle, opts: dict) -> Outcome:
    from .oracle import OracleCapExceeded, brute_ring_dims, brute_sos_search

    rows = []
    payload: dict[str, Any] = {}
    try:
        dims = brute_ring_dims(b.polytope, b.lam)
        rows.append(("brute ring dims", fmt_vec(dims)))
        payload["ring_dims"] = list(dims)
    except OracleCapExceeded as err:
        rows.append(("brute ring dims", f"cap exceeded: {err}"))
    pres = presentation(b.polytope, b.lam)
    p1 = pontrjagin_p1(b.polytope, b.lam, pres)
    try:
        res = brute_sos_search(pres, p1.image, opts["oracle_cap"])
        rows.append(("brute sos search", ("found " + fmt_mat(res.gram)) if res.found else "not found"))
        rows.append(("grid points", str(res.points)))
        payload["sos_found"] = res.found
    except OracleCapExceeded as err:
        rows.append(("brute sos search", f"cap exceeded: {err}"))
    return Outcome(EXIT_OK, table(rows), payload)


HANDLERS = {
    "validate": cmd_validate,
    "cohom": cmd_cohom,
    "p1": cmd_p1,
    "qtype": cmd_qtype,
    "bounds": cmd_bounds,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
}


def run_source(command: str, source: str, opts: dict) -> Outcome:
    """Run one solver command on one input; never raises for bad input."""
    try:
        bundle = load_bundle(source)
        if command != "validate":
            report = validate(bundle.polytope)
            if not report.ok:
                raise InputError(f"{source}: invalid polytope: " + "; ".join(v.message for v in report.violations))
        return HANDLERS[command](bundle, opts)
    except InputError as err:
        return Outcome(EXIT_INVALID, [f"error: {err}"], {"error": str(err)})
    except (NondegeneracyError, InvalidPolytope, ValueError) as err:
        return Outcome(EXIT_INVALID, [f"error: {source}: {err}"], {"error": str(err)})


def cmd_predict(args) -> Outcome:
    try:
        pred = cohomogeneity_one_predictions(args.k, args.with_circle)
    except ValueError as err:
        return Outcome(EXIT_INVALID, [f"error: {err}"], {"error": str(err)})
    poly = " + ".join(
        ("1" if i == 0 else (f"{c}t^{2 * i}" if c != 1 else f"t^{2 * i}")) for i, c in enumerate(pred.base_poincare)
    )
    base = "S²" if pred.k == 1 else "(S²)" + str(pred.k).translate(SUPERSCRIPTS)
    headline = f"χ={pred.euler_characteristic}, base {base}, S²-bundle total space"
    rows = [
        ("group", pred.group),
        ("n (dim M = 2n)", f"{pred.n} ({pred.manifold_dim})"),
        ("euler characteristic", f"{pred.euler_characteristic} = 2 #W, #W = {pred.weyl_order}"),
        ("G/T Poincare polynomial", poly),
        ("dim H^2(M)", f"{pred.total_h2} = rank G' + 1"),
        ("torus degree bound", f"T_t <= {pred.torus_bound}"),
        ("structure", pred.structure),
    ]
    rows += [("note", s) for s in pred.notes]
    return Outcome(EXIT_OK, [headline] + table(rows), pred.to_json())


def cmd_examples(args) -> Outcome:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines, names = [], []
    for b in catalogue():
        path = out / f"{b.name}.json"
        path.write_text(b.dumps() + "\n", encoding="utf-8")
        names.append(b.name)
        lines.append(str(path))
    lines.append(f"wrote {len(names)} examples")
    return Outcome(EXIT_OK, lines, {"written": [str(out / f"{n}.json") for n in names]})


def cmd_verify(args) -> Outcome:
    code, lines, results = EXIT_OK, [], []
    for path in args.files:
        try:
            report = verify_document(load_json(path))
        except InputError as err:
            code = max(code, EXIT_INVALID)
            lines.append(f"error: {err}")
            results.append({"file": path, "ok": False, "error": str(err)})
            continue
        except CertificateError as err:
            code = EXIT_VERIFY_FAILED if code == EXIT_OK else code
            lines.append(f"{path}: FAILED: {err}")
            results.append({"file": path, "ok": False, "error": str(err)})
            continue
        lines.append(f"{path}: {report.summary}")
        lines += [f"  - {c}" for c in report.checks]
        results.append({"file": path, "ok": True, "kind": report.kind, "outcome": report.outcome, "checks": list(report.checks)})
    return Outcome(code, lines, {"results": results})


def combine_codes(codes: Sequence[int]) -> int:
    for c in (EXIT_INVALID, EXIT_VERIFY_FAILED, EXIT_UNDECIDED):
        if c in codes:
            return c
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtoric", description="Cohomology, p1 and q-type certificates for quasitoric manifolds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def solver(name: str, help_text: str | None) -> argparse.ArgumentParser:
        kw = {"help": help_text} if help_text is not None else {}
        p = sub.add_parser(name, **kw)
        p.add_argument("--input", "-i", action="extend", nargs="+", required=True, metavar="FILE",
                       help="input bundle JSON (repeatable); 'example:NAME' uses a catalogue entry")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0, help="seed for the solver's perturbations")
        p.add_argument("--jobs", "-j", type=int, default=1, help="parallel workers across input files")
        return p

    solver("validate", "check the polytope and characteristic matrix")
    solver("cohom", "Betti numbers and edim")
    solver("p1", "first Pontrjagin class")
    q = solver("qtype", "decide q-type and p1 = -(sum of squares), with certificates")
    q.add_argument("--out-dir", help="directory for certificate files (default: beside the input)")
    q.add_argument("--no-certs", action="store_true", help="do not write certificate files")
    solver("bounds", "degree-of-symmetry bounds")
    solver("classify", "homogeneous and cohomogeneity-one checks")
    o = solver("oracle", argparse.SUPPRESS)
    o.add_argument("--cap", type=int, default=4, help="denominator cap for the brute-force search")
    # keep the hidden command out of the usage listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]

    p = sub.add_parser("predict", help="cohomological predictions for SU(2)^k actions of cohomogeneity one")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--with-circle", action="store_true")
    p.add_argument("--json", action="store_true")

    e = sub.add_parser("examples", help="write the example catalogue as JSON files")
    e.add_argument("--out-dir", default="qtoric-examples")
    e.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="re-check serialized certificates with exact arithmetic")
    v.add_argument("files", nargs="+", metavar="FILE")
    v.add_argument("--json", action="store_true")
    return parser


def _emit(outcomes: list[tuple[str, Outcome]], as_json: bool, out) -> None:
    if as_json:
        if len(outcomes) == 1:
            payload = dict(outcomes[0][1].payload, exit_code=outcomes[0][1].code)
        else:
            payload = {"results": [dict(o.payload, input=s, exit_code=o.code) for s, o in outcomes]}
        print(json.dumps(jsonable(payload), indent=2), file=out)
        return
    for i, (source, o) in enumerate(outcomes):
        if len(outcomes) > 1:
            if i:
                print(file=out)
            print(f"== {source} ==", file=out)
        for line in o.lines:
            print(line, file=out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID
    out = sys.stdout

    if args.command == "predict":
        o = cmd_predict(args)
    elif args.command == "examples":
        o = cmd_examples(args)
    elif args.command == "verify":
        o = cmd_verify(args)
    else:
        try:
            cap = denom_cap()
        except InputError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_INVALID
        outcomes = []
        sources = list(args.input)
        jobs = max(1, args.jobs)
        opt_list = []
        for s in sources:
            opts = {"seed": args.seed, "denom_cap": cap, "oracle_cap": getattr(args, "cap", 4), "out_dir": None}
            if args.command == "qtype" and not args.no_certs:
                if args.out_dir:
                    opts["out_dir"] = args.out_dir
                elif not s.startswith("example:"):
                    opts["out_dir"] = str(Path(s).parent)
                else:
                    opts["out_dir"] = "."
            opt_list.append(opts)
        if jobs > 1 and len(sources) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run_source, [args.command] * len(sources), sources, opt_list))
        else:
            results = [run_source(args.command, s, o) for s, o in zip(sources, opt_list)]
        outcomes = list(zip(sources, results))
        _emit(outcomes, args.json, out)
        return combine_codes([o.code for _, o in outcomes])

    _emit([("", o)], args.json, out)
    return o.code


if __name__ == "__main__":
    sys.exit(main())
