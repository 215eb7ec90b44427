"""Command line entry point: ``fusionkit <command> ...``.

Every command prints one JSON document.  Exit codes: 0 pass, 1 a check
failed (the report carries a witness), 2 usage or precondition error,
3 an enumeration budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog, structure, suite, transporter
from .groups import BudgetExceeded, PreconditionError
from .saturation import (
    check_sat1,
    check_saturation,
    check_saturation_alt,
    encode_element,
    encode_subgroup,
    stability_check,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
FORMAT_VERSION = 1


def _emit(doc: dict, out: str | None) -> None:
    doc = {"format": FORMAT_VERSION, **doc}
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_system(target: str):
    """A catalog name, or a path to a JSON fusion-system file."""
    if target.endswith(".json") or os.path.sep in target:
        if not os.path.exists(target):
            raise PreconditionError(f"no such file: {target}")
        with open(target) as fh:
            return catalog.system_from_json(json.load(fh))
    return catalog.build(target).fusion


def parse_elements(F, text: str | None) -> list[int]:
    if not text:
        return []
    G = F.group
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if hasattr(G, "lookup"):
            out.append(G.lookup(tok))
        elif tok.isdigit() and int(tok) < G.order:
            out.append(int(tok))
        else:
            raise PreconditionError(f"unknown element {tok!r}")
    return out


def system_summary(F) -> dict:
    return {
        "name": F.name,
        "p": F.p,
        "order": F.S.order,
        "subgroups": len(F.subgroups()),
        "classes": len(F.classes()),
        "element_classes_of_order_p": [len(c) for c in F.element_classes_of_order_p()],
        "aut_S": F.aut_order(F.canonical(F.S)),
    }


# commands ---------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = []
        for name in catalog.CATALOG_NAMES:
            kind, _, params = name.partition(":")
            rows.append({"name": name, "kind": kind, "params": params})
        _emit({"command": "catalog list", "entries": rows}, args.output)
        return EXIT_PASS
    if not args.name:
        raise PreconditionError("catalog show needs an entry name")
    entry = catalog.build(args.name)
    F = entry.fusion
    doc = {"command": "catalog show", "entry": entry.name, "params": entry.params,
           "expected": entry.expected, "summary": system_summary(F),
           "system": catalog.system_to_json(F)}
    _emit(doc, args.output)
    return EXIT_PASS


def cmd_check(args) -> int:
    F = load_system(args.target)
    if args.axioms == "std":
        rep = check_saturation(F)
    elif args.axioms == "alt":
        rep = check_saturation_alt(F)
    else:
        rep = check_sat1(F, parse_elements(F, args.x))
    _emit({"command": "check", "target": args.target, "axioms": args.axioms,
           "report": rep.to_json(timing=args.timing)}, args.output)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _op_classify(F):
    return structure.classify_subgroups(F).to_json()


def _op_strongly_closed(F):
    return [encode_subgroup(A) for A in structure.strongly_closed_subgroups(F)]


def _op_center(F):
    Z = structure.f_center(F)
    return {"order": Z.order, "generators": encode_subgroup(Z)}


def _op_hyperfocal(F):
    H = structure.hyperfocal(F)
    return {"order": H.order, "generators": encode_subgroup(H), "quotient_order": F.S.order // H.order}


def _op_irreducible(F):
    return structure.is_irreducible_rank1(F).to_json()


def _op_component(F):
    S0, comp, shape = structure.irreducible_component_rank1(F)
    return {"S0": encode_subgroup(S0), "order": S0.order, "shape": shape}


def _op_f_normal(F):
    return [encode_subgroup(A) for A in structure.f_normal_subgroups(F)]


def _op_exotic(F):
    return structure.verify_exotic_simplicity(F).to_json()


OPS = {
    "classify": _op_classify,
    "strongly-closed": _op_strongly_closed,
    "center": _op_center,
    "hyperfocal": _op_hyperfocal,
    "irreducible": _op_irreducible,
    "component": _op_component,
    "f-normal": _op_f_normal,
    "exotic": _op_exotic,
}


def cmd_analyze(args) -> int:
    F = load_system(args.target)
    ops = [o.strip() for o in args.ops.split(",") if o.strip()]
    for o in ops:
        if o not in OPS:
            raise PreconditionError(f"unknown operation {o!r}; choose from {', '.join(OPS)}")
    results = {o: OPS[o](F) for o in ops}
    _emit({"command": "analyze", "target": args.target, "results": results}, args.output)
    return EXIT_PASS


def _default_comparison(target: str, order: int) -> list[str]:
    """Rank-one catalog systems of the given order to try an isomorphism against."""
    out = []
    level = order.bit_length() - 2
    if order & (order - 1) == 0 and level >= 2:
        out += [f"so3:l={level}", f"su2:l={level}"]
    return [n for n in out if n != target]


def cmd_quotient(args) -> int:
    F = load_system(args.target)
    G = F.group
    A = G.subgroup(parse_elements(F, args.by))
    Fq = transporter.quotient_fusion(F, A)
    doc = {"command": "quotient", "target": args.target, "kernel": encode_subgroup(A),
           "summary": system_summary(Fq), "saturation": check_saturation(Fq).verdict}
    if A.order == 1:
        doc["echo"] = catalog.system_to_json(F)
    names = [args.compare] if args.compare else _default_comparison(args.target, Fq.S.order)
    for name in names:
        cert = transporter.fusion_isomorphism(Fq, catalog.build(name).fusion)
        if cert.found or args.compare:
            doc["isomorphism"] = {"with": name, **cert.to_json()}
            break
    _emit(doc, args.output)
    return EXIT_PASS


def cmd_stability(args) -> int:
    probes = [p.split("+") for p in args.probe] if args.probe else None
    rep = stability_check(catalog.builder_for(args.builder), args.level, args.builder, probes)
    _emit({"command": "stability", "report": rep.to_json(timing=args.timing)}, args.output)
    return EXIT_PASS if rep.stable else EXIT_FAIL


def cmd_transporter(args) -> int:
    if args.fixture in transporter.FIXTURES:
        T = transporter.load_fixture(args.fixture)
    else:
        with open(args.fixture) as fh:
            T = transporter.TransporterData.from_json(json.load(fh))
    rep = transporter.validate_transporter(T)
    doc = {"command": "transporter", "fixture": args.fixture, "objects": len(T.objects),
           "morphisms": len(T.morphisms), "report": rep.to_json(timing=args.timing)}
    if args.quotient_by:
        A = T.group.subgroup(int(x) for x in args.quotient_by.split(","))
        Q = transporter.quotient_transporter(T, A)
        doc["quotient"] = {"kernel": [encode_element(T.group, a) for a in A.gens],
                           "morphisms": len(Q.morphisms),
                           "report": transporter.validate_transporter(Q).to_json(timing=args.timing)}
    _emit(doc, args.output)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_suite(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    res = suite.run_suite(level=args.level, jobs=args.jobs, only=only)
    if not args.timing:
        for r in res["criteria"]:
            r["seconds"] = 0
    for r in res["criteria"]:
        print(suite.summary_line(r), file=sys.stderr)
    _emit({"command": "suite", **res}, args.output)
    return EXIT_PASS if res["pass"] else EXIT_FAIL


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fusionkit", description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, help="subgroup enumeration cap (default FUSIONKIT_BUDGET or 4096)")
    ap.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte stability)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or show catalog entries")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("check", help="run a saturation checker")
    p.add_argument("target", help="catalog name or JSON file")
    p.add_argument("--axioms", choices=["std", "alt", "sat1"], default="std")
    p.add_argument("--x", help="comma separated elements of order p for sat1")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="structural analyses")
    p.add_argument("target")
    p.add_argument("--ops", default="classify", help=f"comma separated, from: {', '.join(OPS)}")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("quotient", help="quotient by an F-normal subgroup")
    p.add_argument("target")
    p.add_argument("--by", required=True, help="comma separated generators")
    p.add_argument("--compare", help="catalog entry to test for isomorphism with the quotient")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("stability", help="compare a builder at levels l and l+1")
    p.add_argument("builder", help="so3, su2, exotic3, so2:p=.. or sullivan:p=..,n=..")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--probe", action="append", help="extra subgroup, generators joined by '+'")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("transporter", help="validate a transporter fixture")
    p.add_argument("fixture", help=f"{', '.join(transporter.FIXTURES)} or a JSON file")
    p.add_argument("--quotient-by", help="comma separated element indices of a normal subgroup")
    p.set_defaults(func=cmd_transporter)

    p = sub.add_parser("suite", help="run the acceptance table")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--only", help="comma separated criterion numbers")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    saved = os.environ.get("FUSIONKIT_BUDGET")
    if args.budget is not None:
        if args.budget <= 0:
            ap.error("--budget must be positive")
        os.environ["FUSIONKIT_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _emit({"command": args.command, "error": "budget", "message": str(exc)}, None)
        return EXIT_BUDGET
    except PreconditionError as exc:
        _emit({"command": args.command, "error": "precondition", "message": str(exc)}, None)
        return EXIT_USAGE
    except OSError as exc:
        _emit({"command": args.command, "error": "io", "message": str(exc)}, None)
        return EXIT_USAGE
    finally:
        # the override applies to this invocation only
        if saved is None:
            os.environ.pop("FUSIONKIT_BUDGET", None)
        else:
            os.environ["FUSIONKIT_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
