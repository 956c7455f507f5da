"""JSON documents for quantaloids, categories, functors, distributors and presheaves.

Shapes (``|`` separates types in keys)::

    quantaloid  {"objects": [...], "homs": {"p|q": {"carrier": [...], "leq": [[a, b], ...]}},
                 "compose": {"p|q|r": [[b, a, b∘a], ...]}, "identity": {"q": e}}
    quantale    {"carrier": [...], "leq": [[a, b], ...], "tensor": [[a, b, a&b], ...], "unit": e}
    category    {"elements": [{"id": x, "type": q}, ...], "hom": [[a, b, value], ...],
                 "quantaloid": <quantaloid doc | quantale doc | fixture name | path>}
    functor     {"map": {a: b, ...}}
    distributor {"matrix": [[x, y, value], ...]}
    presheaf    {"type": q, "values": {x: value, ...}}

Malformed documents raise :class:`ParseError`; well-formed documents that
break an axiom raise :class:`ValidationError` from the validators.
"""

import json
import os
from itertools import product

from .category import validate_category, validate_distributor, validate_functor
from .errors import ParseError
from .presheaf import make_copresheaf, make_presheaf
from .quantaloid import validate_quantale, validate_quantaloid


def dumps(doc):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text, what="document"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{what}: malformed JSON ({err.msg} at line {err.lineno})") from None


def load_file(path, what="document"):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read(), f"{what} {path}")
    except OSError as err:
        raise ParseError(f"cannot read {what} {path}: {err.strerror}") from None


def _need(doc, key, kind, what):
    if not isinstance(doc, dict):
        raise ParseError(f"{what}: expected a JSON object")
    if key not in doc:
        raise ParseError(f"{what}: missing key {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise ParseError(f"{what}: {key!r} has the wrong shape")
    return val


def _triples(rows, n, what):
    out = []
    for r in rows:
        if not isinstance(r, list) or len(r) != n or not all(isinstance(v, str) for v in r):
            raise ParseError(f"{what}: expected rows of {n} strings, got {r!r}")
        out.append(tuple(r))
    return out


def _split(key, n, what):
    parts = key.split("|")
    if len(parts) != n:
        raise ParseError(f"{what}: key {key!r} should have {n} parts separated by '|'")
    return tuple(parts)


# -- quantaloids ----------------------------------------------------------

def quantaloid_from_json(doc, subset_cap=None):
    """Build a quantaloid (or the one-object embedding of a quantale document)."""
    if isinstance(doc, dict) and "tensor" in doc:
        carrier = _need(doc, "carrier", list, "quantale")
        leq = set(_triples(_need(doc, "leq", list, "quantale"), 2, "quantale"))
        tensor = {(a, b): c for a, b, c in _triples(_need(doc, "tensor", list, "quantale"), 3, "quantale")}
        unit = _need(doc, "unit", str, "quantale")
        return validate_quantale((carrier, lambda a, b: a == b or (a, b) in leq), tensor, unit).quantaloid
    objects = _need(doc, "objects", list, "quantaloid")
    homs = {}
    for key, h in _need(doc, "homs", dict, "quantaloid").items():
        p, q = _split(key, 2, "quantaloid homs")
        carrier = _need(h, "carrier", list, f"hom {key}")
        rel = set(_triples(_need(h, "leq", list, f"hom {key}"), 2, f"hom {key}"))
        homs[(p, q)] = (carrier, lambda a, b, rel=rel: a == b or (a, b) in rel)
    compose = {}
    for key, rows in _need(doc, "compose", dict, "quantaloid").items():
        p, q, r = _split(key, 3, "quantaloid compose")
        compose[(p, q, r)] = {(b, a): c for b, a, c in _triples(rows, 3, f"compose {key}")}
    identity = _need(doc, "identity", dict, "quantaloid")
    return validate_quantaloid(objects, homs, compose, identity, subset_cap)


def quantaloid_to_json(Q):
    homs, compose = {}, {}
    for p, q in product(Q.objects, repeat=2):
        L = Q.homs[(p, q)]
        homs[f"{p}|{q}"] = {"carrier": list(L.carrier),
                           "leq": [[a, b] for a, b in L.relation() if a != b]}
    for p, q, r in product(Q.objects, repeat=3):
        compose[f"{p}|{q}|{r}"] = [[Q.name(b), Q.name(a), Q.name(int(Q.COMP[b, a]))]
                                   for b in Q.hom(q, r) for a in Q.hom(p, q)]
    return {"objects": list(Q.objects), "homs": homs, "compose": compose,
            "identity": {q: Q.name(Q.identity(q)) for q in Q.objects}}


# -- categories and friends ------------------------------------------------

def _resolve_quantaloid(ref, base_dir):
    from .models import CATALOG, quantaloid_of

    if isinstance(ref, dict):
        return quantaloid_from_json(ref)
    if isinstance(ref, str):
        if ref in CATALOG:
            return quantaloid_of(CATALOG[ref])
        path = ref if os.path.isabs(ref) else os.path.join(base_dir or ".", ref)
        return quantaloid_from_json(load_file(path, "quantaloid"))
    raise ParseError("category: 'quantaloid' must be an object, a fixture name or a path")


def category_from_json(doc, Q=None, base_dir=None, name=None):
    """Build a category; ``Q`` may be omitted when the document names its quantaloid."""
    elems = _need(doc, "elements", list, "category")
    pairs = []
    for e in elems:
        pairs.append((_need(e, "id", str, "category element"), _need(e, "type", str, "category element")))
    rows = _triples(_need(doc, "hom", list, "category"), 3, "category hom")
    if Q is None:
        if "quantaloid" not in doc:
            raise ParseError("category: no quantaloid given")
        Q = _resolve_quantaloid(doc["quantaloid"], base_dir)
    return validate_category(Q, pairs, {(a, b): v for a, b, v in rows}, name=name or doc.get("name"))


def category_to_json(A, embed_quantaloid=True):
    doc = {"elements": [{"id": x, "type": t} for x, t in zip(A.elements, A.types)],
           "hom": [[a, b, A.quantaloid.name(int(A.hom[i, j]))]
                   for i, a in enumerate(A.elements) for j, b in enumerate(A.elements)]}
    if A.name:
        doc["name"] = A.name
    if embed_quantaloid:
        doc["quantaloid"] = quantaloid_to_json(A.quantaloid)
    return doc


def functor_from_json(doc, dom, cod):
    m = _need(doc, "map", dict, "functor")
    return validate_functor(dom, cod, m)


def functor_to_json(F):
    return {"map": F.as_dict()}


def distributor_from_json(doc, dom, cod):
    rows = _triples(_need(doc, "matrix", list, "distributor"), 3, "distributor matrix")
    return validate_distributor(dom, cod, {(x, y): v for x, y, v in rows})


def distributor_to_json(phi):
    Q = phi.dom.quantaloid
    return {"matrix": [[x, y, Q.name(int(phi.matrix[i, j]))]
                       for i, x in enumerate(phi.dom.elements) for j, y in enumerate(phi.cod.elements)]}


def presheaf_from_json(doc, A, co=False):
    typ = _need(doc, "type", str, "presheaf")
    values = _need(doc, "values", dict, "presheaf")
    return (make_copresheaf if co else make_presheaf)(A, typ, values)


def presheaf_to_json(mu):
    return {"type": mu.typ, "values": mu.names()}
