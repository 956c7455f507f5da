"""Command-line front end: ``qdomain <command> [options]``.

Exit codes: 0 success, 1 negative verdict under ``--assert``, 2 validation
failure, 3 parse or usage failure, 4 enumeration/search cap exceeded.
"""

import argparse
import json
import os
import sys
import time

from . import io as qio
from .config import DEFAULT_SEED, enumeration_cap
from .errors import (EnumerationCapExceeded, MismatchFound, ParseError, PreconditionFailed,
                     SubsetSearchCapExceeded, ValidationError)

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4
SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


class Report:
    """A command result; ``body`` holds everything beyond the verdict."""

    def __init__(self, command, verdict, body=None, witnesses=None, disclosures=None):
        self.command = command
        self.verdict = bool(verdict)
        self.body = body or {}
        self.witnesses = list(witnesses or [])
        self.disclosures = list(disclosures or [])

    def to_json(self, args):
        doc = {"schema": SCHEMA, "command": self.command, "input": _input_echo(args),
               "verdict": self.verdict, "witnesses": self.witnesses, "disclosures": self.disclosures}
        doc.update(self.body)
        return doc

    def render(self, args, elapsed):
        lines = [f"{self.command}: {'PASS' if self.verdict else 'FAIL'}"]
        echo = _input_echo(args)
        for k, v in echo.items():
            lines.append(f"  {k}: {', '.join(v) if isinstance(v, list) else v}")
        if self.witnesses:
            lines.append("  witnesses: " + json.dumps(self.witnesses, ensure_ascii=False))
        for k in sorted(self.body):
            if k in echo and echo[k] == self.body[k]:
                continue
            v = self.body[k]
            if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                lines.append(f"  {k}:")
                lines.extend("    " + "  ".join(_cell(x[f]) for f in x) for x in v)
                continue
            lines.append(f"  {k}: {v if isinstance(v, str) else json.dumps(v, ensure_ascii=False, sort_keys=True)}")
        for d in self.disclosures:
            lines.append("  disclosure: " + json.dumps(d, ensure_ascii=False, sort_keys=True))
        lines.append(f"  elapsed: {elapsed:.3f}s")
        return "\n".join(lines) + "\n"


def _cell(v):
    return v if isinstance(v, str) else json.dumps(v, ensure_ascii=False, sort_keys=True)


def _input_echo(args):
    echo = {}
    for key in ("fixture", "category", "quantaloid", "presheaf", "cls", "type", "pa", "cap", "seed",
                "max_poset", "named", "co", "name"):
        v = getattr(args, key, None)
        if v not in (None, False, []):
            echo["class" if key == "cls" else key] = v
    return echo


def _fmt(w):
    """Make witnesses JSON-friendly: weights become labels, tuples become lists."""
    if w is None or isinstance(w, (bool, int, str)):
        return w
    if hasattr(w, "label"):
        return w.label()
    if isinstance(w, (tuple, list)):
        return [_fmt(x) for x in w]
    return str(w)


def _cap_disclosure(args):
    return {"kind": "enumeration-cap", "value": enumeration_cap(args.cap)}


# -- input loading -------------------------------------------------------

def _fixture_names(args):
    return args.fixture or []


def _load_any(args):
    """The structure named by the input flags: a quantaloid or a category."""
    from .models import CATALOG

    if getattr(args, "category", None):
        Q = None
        if args.quantaloid:
            Q = qio.quantaloid_from_json(qio.load_file(args.quantaloid, "quantaloid"))
        doc = qio.load_file(args.category, "category")
        return qio.category_from_json(doc, Q, base_dir=os.path.dirname(args.category),
                                      name=os.path.splitext(os.path.basename(args.category))[0])
    if getattr(args, "quantaloid", None):
        return qio.quantaloid_from_json(qio.load_file(args.quantaloid, "quantaloid"))
    names = _fixture_names(args)
    if len(names) != 1:
        raise ParseError("give exactly one input: --fixture NAME, --category FILE or --quantaloid FILE")
    if names[0] not in CATALOG:
        raise ParseError(f"unknown fixture {names[0]!r}; see 'qdomain fixtures list'")
    return CATALOG[names[0]]


def _load_category(args):
    from .presheaf import presheaf_category

    A = _load_any(args)
    if not hasattr(A, "hom") or not hasattr(A, "elements"):
        raise ParseError("this command needs a category, not a quantale or quantaloid")
    if getattr(args, "pa", False):
        A = presheaf_category(A, args.cap).category
    return A


def _need_class(args):
    from .ideals import get_class

    if not args.cls:
        raise ParseError("--class is required for this command")
    try:
        return get_class(args.cls)
    except ValueError as err:
        raise ParseError(str(err)) from None


def _weights_in_scope(A, args, co=False):
    from .presheaf import all_copresheaves, all_presheaves, enumerate_copresheaves, enumerate_presheaves

    Q = A.quantaloid
    if args.type:
        if args.type not in Q.objects:
            raise ParseError(f"{args.type!r} is not an object of the quantaloid")
        return (enumerate_copresheaves if co else enumerate_presheaves)(A, args.type, args.cap)
    return (all_copresheaves if co else all_presheaves)(A, args.cap)


def _select_presheaf(A, args):
    """Resolve ``--presheaf``: a label from ``enumerate``, inline JSON, or a JSON file."""
    given = args.presheaf
    if given.lstrip().startswith("{\"") or os.path.isfile(given):
        doc = qio.loads(given, "presheaf") if not os.path.isfile(given) else qio.load_file(given, "presheaf")
        return qio.presheaf_from_json(doc, A)
    for w in _weights_in_scope(A, args):
        if w.label() == given:
            return w
    raise ParseError(f"no presheaf labelled {given!r}; run 'qdomain enumerate' to list labels")


# -- commands -------------------------------------------------------------

def cmd_validate(args):
    obj = _load_any(args)
    body, disc = {}, []
    if hasattr(obj, "elements"):
        from .category import is_skeletal
        Q = obj.quantaloid
        body.update(kind="category", elements=len(obj), skeletal=bool(is_skeletal(obj)))
    else:
        Q = getattr(obj, "quantaloid", obj)
        body["kind"] = "quantale" if hasattr(obj, "tensor") else "quantaloid"
    body.update(objects=list(Q.objects), arrows=int(Q.n_arrows), integral=Q.is_integral)
    rep = Q.validation_report or {}
    if rep:
        disc.append({"kind": "join-continuity", "subsetCap": rep.get("subset_cap"),
                     "modes": rep.get("join_continuity")})
    return Report("validate", True, body, disclosures=disc)


def cmd_enumerate(args):
    A = _load_category(args)
    ws = _weights_in_scope(A, args, co=args.co)
    items = [{"label": w.label(), "type": w.typ, "values": w.names()} for w in ws]
    if args.jsonl:
        # streaming form: one JSON line per (co)presheaf in canonical order
        for it in items:
            sys.stdout.write(json.dumps(it, sort_keys=True, ensure_ascii=False) + "\n")
        return None
    return Report("enumerate", True, {"kind": "copresheaves" if args.co else "presheaves",
                                      "count": len(items), "items": items},
                  disclosures=[_cap_disclosure(args)])


def cmd_check_ideal(args):
    cls = _need_class(args)
    A = _load_category(args)
    ws = [_select_presheaf(A, args)] if args.presheaf else _weights_in_scope(A, args)
    rows, bad = [], []
    for w in ws:
        ok, wit = cls.check(A, w, args.cap)
        rows.append({"presheaf": w.label(), "member": bool(ok), "witness": None if ok else _fmt(wit)})
        if not ok:
            bad.append({"presheaf": w.label(), "witness": _fmt(wit)})
    return Report("check-ideal", not bad, {"class": cls.id, "results": rows}, witnesses=bad,
                  disclosures=[_cap_disclosure(args)])


def cmd_phi_cat(args):
    from .ideals import phi_category

    cls = _need_class(args)
    A = _load_category(args)
    P = phi_category(cls, A, args.cap)
    C = P.category
    Q = A.quantaloid
    body = {"class": cls.id, "count": len(P), "members": [w.label() for w in P.weights],
            "yoneda": {a: P.weights[j].label() for a, j in zip(A.elements, P.yoneda.mapping)},
            "hom": [[a, b, Q.name(int(C.hom[i, j]))] for i, a in enumerate(C.elements)
                    for j, b in enumerate(C.elements)]}
    return Report("phi-cat", True, body, disclosures=[_cap_disclosure(args)])


def _from_report(command, rep, args, extra_disclosures=()):
    doc = rep.to_json()
    verdict = doc.pop("verdict")
    wit = doc.pop("witnesses", [])
    disc = [_cap_disclosure(args), *extra_disclosures, *doc.pop("disclosures", [])]
    return Report(command, verdict, doc, witnesses=wit, disclosures=disc)


def cmd_check_cocomplete(args):
    from .ideals import check_cocomplete

    cls = _need_class(args)
    return _from_report("check-cocomplete", check_cocomplete(cls, _load_category(args), args.cap), args)


def cmd_way_below(args):
    from .continuity import check_interpolation, way_below

    cls = _need_class(args)
    A = _load_category(args)
    wb = way_below(cls, A, args.cap)
    Q = A.quantaloid
    interp, wit = check_interpolation(cls, A, args.cap)
    body = {"class": cls.id,
            "matrix": [[y, x, Q.name(int(wb.matrix[i, j]))] for i, y in enumerate(A.elements)
                       for j, x in enumerate(A.elements)],
            "functor": {a: wb.column(i).label() for i, a in enumerate(A.elements)},
            "phiS": [m.label() for m in wb.phi_s.members],
            "isDistributor": bool(wb.is_distributor), "belowHom": bool(wb.below_hom),
            "squareBelow": bool(wb.idempotent_below), "interpolating": bool(interp)}
    ok = wb.is_distributor and wb.below_hom and wb.idempotent_below
    return Report("way-below", ok, body, witnesses=[] if interp else [{"interpolation": _fmt(wit)}],
                  disclosures=[_cap_disclosure(args)])


def cmd_check_continuous(args):
    from .continuity import check_continuous

    cls = _need_class(args)
    return _from_report("check-continuous", check_continuous(cls, _load_category(args), args.cap), args)


def cmd_check_algebraic(args):
    from .continuity import check_algebraic

    cls = _need_class(args)
    return _from_report("check-algebraic", check_algebraic(cls, _load_category(args), args.cap), args)


def cmd_equivalence(args):
    from .continuity import algebraic_equivalence

    cls = _need_class(args)
    A = _load_category(args)
    try:
        res = algebraic_equivalence(cls, A, args.cap)
    except PreconditionFailed as err:
        return Report("equivalence", False, {"class": cls.id, "precondition": str(err)},
                      witnesses=[str(err)], disclosures=[_cap_disclosure(args)])
    rep = _from_report("equivalence", res, args)
    rep.body["class"] = cls.id
    return rep


def cmd_saturation(args):
    from .ideals import saturation_harness
    from .models import CATALOG

    cls = _need_class(args)
    names = _fixture_names(args) or ["fix-v", "fix-antichain2"]
    cats = []
    for n in names:
        if n not in CATALOG:
            raise ParseError(f"unknown fixture {n!r}")
        A = CATALOG[n]
        if not hasattr(A, "elements"):
            raise ParseError(f"fixture {n!r} is not a category")
        cats.append(A)
    seed = DEFAULT_SEED if args.seed is None else args.seed
    rep = saturation_harness(cls, cats, args.cap, seed)
    return _from_report("saturation-harness", rep, args, [{"kind": "seed", "value": seed}])


def cmd_cross_validate(args):
    from .models import NAMED_POSETS
    from .oracle import ORACLE_CLASSES, cross_validate, generate_posets

    classes = [_need_class(args).id] if args.cls else list(ORACLE_CLASSES)
    posets = generate_posets(args.max_poset)
    if args.named:
        posets += [NAMED_POSETS[k] for k in sorted(NAMED_POSETS) if len(NAMED_POSETS[k][0]) > args.max_poset]
    checks, mismatches = 0, []
    for carrier, pairs in posets:
        for c in classes:
            checks += 1
            try:
                cross_validate((carrier, pairs), c, args.cap)
            except MismatchFound as err:
                mismatches.append({"poset": {"elements": carrier, "order": sorted(map(list, pairs))},
                                   "class": c, "message": str(err), "details": _fmt_details(err.details)})
    body = {"posets": len(posets), "classes": classes, "checks": checks}
    return Report("cross-validate", not mismatches, body, witnesses=mismatches,
                  disclosures=[_cap_disclosure(args),
                               {"kind": "corpus", "maxPoset": args.max_poset, "named": bool(args.named)}])


def _fmt_details(d):
    return json.loads(json.dumps(d, default=list))


def cmd_check_divisible(args):
    from .quantaloid import check_divisible

    q = _load_any(args)
    if not hasattr(q, "tensor"):
        raise ParseError("check-divisible needs a quantale fixture")
    ok, wit = check_divisible(q)
    return Report("check-divisible", ok, {"carrier": list(q.lattice.carrier)},
                  witnesses=[] if ok else [list(wit)])


def cmd_check_q_power(args):
    from .ideals import check_flat
    from .models import check_q_power

    P = _load_category(args)
    if not hasattr(P, "_power_object"):
        raise ParseError("check-q-power needs a Q^A fixture (fix-qa-*)")
    rep = check_q_power(P, args.cap)
    flat = {e: bool(check_flat(P, mu, args.cap)[0]) for e, mu in rep.d.items()}
    body = {"supFormula": rep.sup_formula_ok, "dLeftAdjointToSup": rep.adjoint_ok,
            "integral": rep.integral, "integralSimplification": rep.simplification_ok,
            "d": {e: mu.label() for e, mu in rep.d.items()}, "dFlat": flat}
    return Report("check-q-power", rep.verdict, body,
                  witnesses=[e for e, ok in flat.items() if not ok],
                  disclosures=[_cap_disclosure(args)])


def cmd_fixtures(args):
    from .models import CATALOG

    if args.action == "list":
        return Report("fixtures", True, {"fixtures": CATALOG.describe()})
    if not args.name or args.name not in CATALOG:
        raise ParseError(f"unknown fixture {args.name!r}")
    obj = CATALOG[args.name]
    if hasattr(obj, "elements"):
        doc = qio.category_to_json(obj)
    else:
        doc = qio.quantaloid_to_json(getattr(obj, "quantaloid", obj))
    return Report("fixtures", True, {"document": doc})


COMMANDS = {
    "validate": (cmd_validate, "validate a quantaloid or category"),
    "enumerate": (cmd_enumerate, "list presheaves (or copresheaves with --co) in canonical order"),
    "check-ideal": (cmd_check_ideal, "test presheaves for membership in an ideal class"),
    "phi-cat": (cmd_phi_cat, "build the category of Φ-ideals"),
    "check-cocomplete": (cmd_check_cocomplete, "decide Φ-cocompleteness"),
    "way-below": (cmd_way_below, "compute the way-below distributor"),
    "check-continuous": (cmd_check_continuous, "decide Φ-continuity"),
    "check-algebraic": (cmd_check_algebraic, "decide Φ-algebraicity"),
    "equivalence": (cmd_equivalence, "rebuild A from its compact elements"),
    "saturation-harness": (cmd_saturation, "search for counterexamples to saturation"),
    "cross-validate": (cmd_cross_validate, "compare with classical poset domain theory"),
    "check-divisible": (cmd_check_divisible, "test divisibility of a quantale"),
    "check-q-power": (cmd_check_q_power, "check the supremum left adjoint on Q^A"),
    "fixtures": (cmd_fixtures, "list fixtures or dump one as JSON"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fixture", action="append", metavar="NAME",
                        help="named fixture (repeatable for saturation-harness)")
    common.add_argument("--category", metavar="FILE", help="category JSON document")
    common.add_argument("--quantaloid", metavar="FILE", help="quantaloid or quantale JSON document")
    common.add_argument("--class", dest="cls", metavar="ID", help="ideal class id")
    common.add_argument("--type", metavar="Q", help="restrict to presheaves of this type")
    common.add_argument("--presheaf", metavar="LABEL|JSON|FILE", help="a single presheaf")
    common.add_argument("--pa", action="store_true", help="work on the presheaf category of the input")
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--cap", type=int, metavar="N", help="enumeration cap")
    common.add_argument("--seed", type=int, metavar="N", help="sampling seed")
    common.add_argument("--assert", dest="assert_", action="store_true",
                        help="exit 1 when the verdict is negative")

    p = _Parser(prog="qdomain", description="Domain theory for finite quantaloid-enriched categories.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if name == "enumerate":
            sp.add_argument("--co", action="store_true", help="copresheaves instead of presheaves")
            sp.add_argument("--jsonl", action="store_true", help="stream one JSON line per item")
        if name == "cross-validate":
            sp.add_argument("--max-poset", type=int, default=4, metavar="N",
                            help="all posets up to N elements (default 4)")
            sp.add_argument("--named", action="store_true", help="add the larger named posets")
        if name == "fixtures":
            sp.add_argument("action", choices=["list", "show"])
            sp.add_argument("name", nargs="?")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    t0 = time.perf_counter()
    try:
        rep = fn(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as err:
        print(f"validation failed: {err}", file=sys.stderr)
        for v in err.violations:
            print(f"  {v.kind}: {', '.join(map(str, v.witness))}", file=sys.stderr)
        return EXIT_INVALID
    except (EnumerationCapExceeded, SubsetSearchCapExceeded) as err:
        print(f"cap exceeded: {err}", file=sys.stderr)
        return EXIT_CAP
    if rep is None:
        return EXIT_OK
    if args.json:
        sys.stdout.write(qio.dumps(rep.to_json(args)))
    else:
        sys.stdout.write(rep.render(args, time.perf_counter() - t0))
    if args.assert_ and not rep.verdict:
        return EXIT_NEGATIVE
    return EXIT_OK


def entry():
    sys.exit(main())
