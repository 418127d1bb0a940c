"""Command-line front end.

Subcommands::

    validate <instance>                 law checks (category, doctrine, products)
    classify <instance>                 classification flags, definitional order
    derive   <instance> --what ...      sigma | implication | cocomp | dual | graph | epsilon
    theorem  <instance> --id X | --all  run registry entries
    search   --filter EXPR [--budget N] counterexample / witness search
    catalog  --list | --emit ID         built-in instances

``<instance>`` is a file path or a catalog id.  Exit codes: 0 all requested
checks hold or are not applicable, 1 some verdict is refuted, 2 usage or
parse error.  Machine reports go to ``--json PATH`` (reports are
byte-deterministic; timings only with ``--timing``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import catalog as _catalog
from . import constructions as _cons
from . import ioformat, logic, theorems
from .doctrine import Doctrine, validate_doctrine
from .verdicts import (DoctrineError, ParseError, Verdict, HOLDS, NOT_APPLICABLE,
                       REFUTED)

USAGE_ERROR = 2
REFUTED_ERROR = 1


def load_instance(spec: str) -> Doctrine:
    if os.path.exists(spec):
        return ioformat.parse_file(spec)
    try:
        return _catalog.instance(spec)
    except KeyError:
        raise ParseError(f"no such file or catalog id: {spec!r}")


def _write_json(path: str | None, payload: Any) -> None:
    if path is None:
        return
    if isinstance(payload, list):
        text = "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in payload)
    else:
        text = ioformat.canonical_json(payload)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _verdict_line(name: str, v: Verdict) -> str:
    mark = {HOLDS: "+", REFUTED: "-", NOT_APPLICABLE: "o"}[v.status]
    extra = ""
    if v.status == REFUTED and v.counterexample:
        extra = f"  [{v.counterexample.get('kind', 'counterexample')}]"
    elif v.status == NOT_APPLICABLE and v.reason:
        extra = f"  ({v.reason})"
    return f"  {mark} {name:<18} {v.status}{extra}"


def _instance_header(d: Doctrine) -> dict:
    return {"name": d.name, "hash": ioformat.instance_hash(d),
            "window": d.window_descriptor}


# -- validate -------------------------------------------------------------------

def _declared_checks(d: Doctrine) -> list[tuple[str, Verdict]]:
    out: list[tuple[str, Verdict]] = []
    declared = d.declared
    window = d.window_descriptor
    if "delta" in declared:
        for a, delta in sorted(declared["delta"].items()):
            ok = logic._delta_validates(d, a, delta)
            out.append((f"declared delta[{a}]",
                        Verdict.holds(window) if ok else
                        Verdict.refuted(kind="declared_delta_invalid",
                                        object=a, delta=delta)))
    for key, dual in (("comprehension", False), ("cocomprehension", True)):
        for a, table in sorted(declared.get(key, {}).items()):
            for alpha, arrow in sorted(table.items()):
                w = logic.ComprehensionWitness(a, alpha, arrow, dual)
                ok = logic.validate_witness(d, w)
                out.append((f"declared {key}[{a},{alpha}]",
                            Verdict.holds(window) if ok else
                            Verdict.refuted(kind=f"declared_{key}_invalid",
                                            object=a, alpha=alpha, arrow=arrow)))
    for rec in declared.get("epsilon", []):
        gamma, a, psi, arrow = rec["gamma"], rec["a"], rec["psi"], rec["arrow"]
        row = d.base.products[(gamma, a)]
        adj = d.sigma(row.proj1)
        ok = (adj is not None and
              d.star(d.base.pair(d.base.identity[gamma], arrow), psi)
              == adj.table[psi])
        out.append((f"declared epsilon[{gamma},{a},{psi}]",
                    Verdict.holds(window) if ok else
                    Verdict.refuted(kind="declared_epsilon_invalid",
                                    Gamma=gamma, A=a, psi=psi, arrow=arrow)))
    for a, table in sorted(declared.get("negation", {}).items()):
        fiber = d.fibers[a]
        ops = fiber.ops
        ok = ops.meet is not None and ops.bottom is not None and all(
            (fiber.leq(alpha, table[beta])
             == (ops.meet[(alpha, beta)] == ops.bottom))
            for alpha in fiber.elements for beta in table)
        out.append((f"declared negation[{a}]",
                    Verdict.holds(window) if ok else
                    Verdict.refuted(kind="declared_negation_invalid", object=a)))
    for a, rec in sorted(declared.get("power_objects", {}).items()):
        p, mem = rec["power"], rec["membership"]
        ok = True
        for y in d.base.window:
            row_y = d.base.products.get((a, y))
            if row_y is None:
                ok = False
                break
            for phi in d.fibers[row_y.obj].elements:
                if not any(d.star(d.base.times(d.base.identity[a], c), mem) == phi
                           for c in d.base.hom(y, p)):
                    ok = False
                    break
            if not ok:
                break
        out.append((f"declared power_object[{a}]",
                    Verdict.holds(window) if ok else
                    Verdict.refuted(kind="declared_power_object_invalid",
                                    object=a, power=p)))
    return out


def cmd_validate(args) -> int:
    d = load_instance(args.instance)
    checks: list[tuple[str, Verdict]] = []
    checks.append(("category_laws", d.base.validate()))
    product_verdict = Verdict.holds(d.window_descriptor)
    if not d.base.presentation.truncated:
        for key in sorted(d.base.products):
            bad = d.base._verify_product(d.base.products[key])
            if bad is not None:
                product_verdict = Verdict.refuted(
                    kind="not_a_product", pair=list(key), detail=bad)
                break
    checks.append(("chosen_products", product_verdict))
    checks.append(("doctrine_laws", validate_doctrine(d)))
    checks.extend(_declared_checks(d))
    print(f"validate {d.name}  [{d.window_descriptor}]")
    for name, v in checks:
        print(_verdict_line(name, v))
    _write_json(args.json, {
        "schema_version": ioformat.SCHEMA_VERSION,
        "kind": "validation",
        "instance": _instance_header(d),
        "checks": {name: v.to_json() for name, v in checks},
    })
    return REFUTED_ERROR if any(v.is_refuted for _, v in checks) else 0


# -- classify --------------------------------------------------------------------

def cmd_classify(args) -> int:
    d = load_instance(args.instance)
    flags = theorems.classify(d)
    print(f"classify {d.name}  [{d.window_descriptor}]")
    for name, v in flags.items():
        print(_verdict_line(name, v))
    _write_json(args.json, {
        "schema_version": ioformat.SCHEMA_VERSION,
        "kind": "classification",
        "instance": _instance_header(d),
        "flags": {name: v.to_json() for name, v in flags.items()},
        "witnesses": theorems.witness_report(d),
    })
    return REFUTED_ERROR if any(v.is_refuted for v in flags.values()) else 0


# -- derive ----------------------------------------------------------------------

def _derive_payload(d: Doctrine, what: str) -> tuple[str, Any]:
    base = d.base
    if what == "sigma":
        table = {}
        for f in base.window_arrows:
            for alpha in d.fibers[base.dom(f)].elements:
                table[f"{f}|{alpha}"] = _cons.derived_sigma(d, f, alpha)
        return "derived existential quantification", table
    if what == "implication":
        tables = _cons.derived_implication_tables(d)
        if tables is None:
            raise DoctrineError("derived implication undefined "
                                "(missing comprehension witness or adjoint)")
        return "derived implication", {
            obj: {f"{a}->{b}": v for (a, b), v in sorted(tab.items())}
            for obj, tab in sorted(tables.items())}
    if what == "cocomp":
        table = {}
        for a in base.window:
            for alpha in d.fibers[a].elements:
                w = _cons.cocomp_from_negation(d, a, alpha)
                table[f"{a}|{alpha}"] = w.arrow
        return "co-comprehension from negation", table
    if what == "dual":
        return "dual instance", ioformat.to_document(_cons.dualize(d))
    if what == "graph":
        return "graphs", {f: _cons.graph(d, f) for f in base.window_arrows}
    if what == "epsilon":
        verdict, eps = logic.ac_check(d)
        if not verdict:
            raise DoctrineError(f"axiom of choice fails: {verdict.status} "
                                f"{verdict.reason or verdict.counterexample}")
        return "epsilon table", {f"{g}|{a}|{psi}": arrow
                                 for (g, a, psi), arrow in sorted(eps.entries.items())}
    raise ParseError(f"unknown derivation {what!r}")


def cmd_derive(args) -> int:
    d = load_instance(args.instance)
    try:
        title, payload = _derive_payload(d, args.what)
    except DoctrineError as exc:
        print(f"derive {args.what}: not applicable: {exc}")
        _write_json(args.json, {
            "schema_version": ioformat.SCHEMA_VERSION, "kind": "derivation",
            "instance": _instance_header(d), "what": args.what,
            "not_applicable": str(exc)})
        return 0
    print(f"derive {args.what} on {d.name}: {title}")
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text if len(text) < 4000 else f"  ({len(payload)} entries; use --json)")
    _write_json(args.json, {
        "schema_version": ioformat.SCHEMA_VERSION, "kind": "derivation",
        "instance": _instance_header(d), "what": args.what, "result": payload})
    return 0


# -- theorem ---------------------------------------------------------------------

def cmd_theorem(args) -> int:
    d = load_instance(args.instance)
    if args.all:
        ids = theorems.theorem_ids()
    elif args.id:
        if args.id not in theorems.REGISTRY:
            raise ParseError(f"unknown theorem id {args.id!r}")
        ids = [args.id]
    else:
        raise ParseError("theorem needs --id NAME or --all")
    reports = [theorems.check_theorem(tid, d) for tid in ids]
    print(f"theorem run on {d.name}  [{d.window_descriptor}]")
    for r in reports:
        status = r.conclusion.status
        hyp = "" if r.hypotheses_hold else \
            f"  (hypothesis {next(n for n, v in r.hypotheses if not v)!r} missing)"
        flag = "  *** VIOLATION ***" if r.is_violation else ""
        print(f"  {r.theorem:<18} {status}{hyp}{flag}")
    _write_json(args.json, [r.to_json(timing=args.timing) for r in reports])
    return REFUTED_ERROR if any(r.is_violation for r in reports) else 0


# -- search ----------------------------------------------------------------------

def cmd_search(args) -> int:
    try:
        expr = theorems.parse_filter(args.filter)
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad filter: {exc}")
    stats: dict = {}
    found = list(theorems.enumerate_doctrines(
        max_base=args.window, max_fiber=args.window,
        filter_expr=expr, budget=args.budget, max_emit=args.limit,
        stats=stats))
    print(f"search --filter {args.filter!r}: {len(found)} match(es), "
          f"{stats['candidates']} candidates examined"
          + (" (budget exhausted)" if stats["budget_exhausted"] else ""))
    for d in found:
        shape = ", ".join(f"{o}:{len(p)}" for o, p in sorted(d.fibers.items()))
        print(f"  {d.name}  fibers {shape}")
    _write_json(args.json, [ioformat.to_document(d) for d in found])
    return 0


# -- catalog ---------------------------------------------------------------------

_CATALOG_BLURBS = {
    "PS(2,0)": "finite sets up to size 2, powerset fibers",
    "PS(1,1)": "finite sets up to size 1 with one powerset step",
    "SIER": "empty, point and Sierpinski spaces, open-set fibers",
    "TRIV": "singleton fibers over the PS(1,1) base",
    "SL3": "3-chain semilattice base, nonempty down-set fibers",
}


def cmd_catalog(args) -> int:
    if args.list:
        for cid in _catalog.catalog_ids():
            print(f"  {cid:<10} {_CATALOG_BLURBS.get(cid, '')}")
        return 0
    if args.emit:
        d = _catalog.instance(args.emit)
        text = ioformat.serialize(d)
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    raise ParseError("catalog needs --list or --emit ID")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="doctrinelab",
        description="finite-model workbench for doctrines and triposes")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH",
                       help="write the machine report to PATH")

    p = sub.add_parser("validate", help="check category/doctrine laws")
    p.add_argument("instance")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("classify", help="run every classification flag")
    p.add_argument("instance")
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("derive", help="compute a derived construction")
    p.add_argument("instance")
    p.add_argument("--what", required=True,
                   choices=["sigma", "implication", "cocomp", "dual", "graph",
                            "epsilon"])
    common(p)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("theorem", help="run theorem registry entries")
    p.add_argument("instance")
    p.add_argument("--id", help="registry id")
    p.add_argument("--all", action="store_true", help="run the whole registry")
    p.add_argument("--timing", action="store_true",
                   help="include wall times in the machine report")
    common(p)
    p.set_defaults(fn=cmd_theorem)

    p = sub.add_parser("search", help="enumerate doctrines matching a filter")
    p.add_argument("--filter", required=True,
                   help="boolean flag expression, e.g. 'full_comp&!classical'")
    p.add_argument("--budget", type=int, default=100_000,
                   help="candidate examination cap")
    p.add_argument("--limit", type=int, default=5,
                   help="stop after this many matches")
    p.add_argument("--window", type=int, default=3,
                   help="enumeration bound: max chain length and fiber size")
    common(p)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("catalog", help="list or emit built-in instances")
    p.add_argument("--list", action="store_true")
    p.add_argument("--emit", metavar="ID")
    common(p)
    p.set_defaults(fn=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except DoctrineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
