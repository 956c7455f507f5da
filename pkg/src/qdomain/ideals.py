"""Ideal classes of presheaves and the categories of ideals they induce."""

import random
from itertools import combinations

import numpy as np

from .category import QFunctor, _functor_violations, check_adjoint, compose_matrices, dist_compose, underlying_leq
from .config import DEFAULT_SEED, FUNCTOR_EXHAUSTIVE_MAX, FUNCTOR_SAMPLE_SIZE, SUBSET_SEARCH_MAX
from .errors import SubsetSearchCapExceeded, ValidationError, Violation
from .presheaf import (
    Presheaf, WeightCategory, enumerate_copresheaves, enumerate_presheaves, f_to, inhabited,
    presheaf_category, presheaf_homs, sup, sup_in_presheaf_category, sup_table, weighted_presheaf_colim,
)


# -- structural helpers shared by the predicates -------------------------

def _row_lookup(V):
    return {row.tobytes(): i for i, row in enumerate(V)}


def _index_of_rows(lookup, R):
    m, k, n = R.shape
    flat = np.ascontiguousarray(R.reshape(m * k, n))
    return np.array([lookup[r.tobytes()] for r in flat], dtype=np.int64).reshape(m, k)


def _join_structure(A, q, cap):
    """Values of all presheaves of type ``q`` and the index of each pointwise join."""
    key = ("join-structure", q)
    if key not in A._cache:
        ps = enumerate_presheaves(A, q, cap)
        Q = A.quantaloid
        V = np.array([p.values for p in ps], dtype=np.int64).reshape(len(ps), len(A))
        J = _index_of_rows(_row_lookup(V), Q.JOIN[V[:, None, :], V[None, :, :]])
        A._cache[key] = (ps, V, J)
    return A._cache[key]


def _meet_structure(A, p, cap):
    key = ("meet-structure", p)
    if key not in A._cache:
        cs = enumerate_copresheaves(A, p, cap)
        Q = A.quantaloid
        C = np.array([c.values for c in cs], dtype=np.int64).reshape(len(cs), len(A))
        M = _index_of_rows(_row_lookup(C), Q.MEET[C[:, None, :], C[None, :, :]])
        inh = np.array([inhabited(c) for c in cs], dtype=bool)
        A._cache[key] = (cs, C, M, inh)
    return A._cache[key]


def _first_pair(bad):
    # canonical witness: smallest (i, j) with i <= j
    idx = np.argwhere(np.triu(bad))
    return tuple(int(v) for v in idx[0]) if idx.size else None


# -- predicates -----------------------------------------------------------

def check_irreducible(A, phi, cap=None):
    """``PA(φ, φ1 ∨ φ2) = PA(φ, φ1) ∨ PA(φ, φ2)`` for all same-type pairs.

    Returns ``(verdict, witness)`` where the witness is a pair of presheaves.
    """
    Q = A.quantaloid
    tq = Q.obj_index(phi.typ)
    row = np.array(phi.values, dtype=np.int64)[None, :]
    for q in Q.objects:
        ps, V, J = _join_structure(A, q, cap)
        if not ps:
            continue
        h = presheaf_homs(Q, row, [tq], V, [Q.obj_index(q)] * len(ps))[0]
        bad = h[J] != Q.JOIN[h[:, None], h[None, :]]
        w = _first_pair(bad)
        if w:
            return False, (ps[w[0]], ps[w[1]])
    return True, None


def _pairing_vector(Q, phi, C, p):
    acc = np.full(C.shape[0], Q.BOT[Q.obj_index(p), Q.obj_index(phi.typ)], dtype=np.int64)
    for x, v in enumerate(phi.values):
        acc = Q.JOIN[acc, Q.COMP[v, C[:, x]]]
    return acc


def _check_flat(A, phi, cap, only_inhabited):
    Q = A.quantaloid
    for p in Q.objects:
        cs, C, M, inh = _meet_structure(A, p, cap)
        if not cs:
            continue
        s = _pairing_vector(Q, phi, C, p)
        bad = s[M] != Q.MEET[s[:, None], s[None, :]]
        if only_inhabited:
            bad &= inh[:, None] & inh[None, :]
        w = _first_pair(bad)
        if w:
            return False, (cs[w[0]], cs[w[1]])
    return True, None


def check_flat(A, phi, cap=None):
    """``φ o (λ1 ∧ λ2) = (φ o λ1) ∧ (φ o λ2)`` for all same-type copresheaf pairs."""
    return _check_flat(A, phi, cap, only_inhabited=False)


def check_weakly_flat(A, phi, cap=None):
    """As :func:`check_flat`, quantifying only over inhabited copresheaves."""
    return _check_flat(A, phi, cap, only_inhabited=True)


def _dominated(A, phi):
    # positions a of type t(φ) with Y(a) <= φ, i.e. 1 <= φ(a)
    Q = A.quantaloid
    qi = Q.obj_index(phi.typ)
    V = np.array(phi.values, dtype=np.int64)
    cand = np.flatnonzero(A.type_idx == qi)
    return [int(a) for a in cand if Q.LEQ[Q.ID[qi], V[a]]]


def _join_of_representables(A, q, positions):
    Q = A.quantaloid
    acc = Q.BOT[A.type_idx, Q.obj_index(q)].copy()
    for a in positions:
        acc = Q.JOIN[acc, A.hom[:, a]]
    return acc


def check_conical(A, phi):
    """``φ = ⋁ {A(-, a) : Y(a) <= φ}``. The witness on success is the generating set."""
    gens = _dominated(A, phi)
    ok = tuple(_join_of_representables(A, phi.typ, gens).tolist()) == phi.values
    return ok, tuple(A.elements[a] for a in gens) if ok else None


def check_conical_ideal(A, phi, max_candidates=None):
    """Search for a nonempty directed ``S`` with ``⋁ Y(S) = φ``.

    Subsets are tried by size, then lexicographically; the witness is the
    first hit as a tuple of element ids. On failure the witness is the
    exhausted candidate set ``{a : Y(a) <= φ}``: none of its directed
    subsets generates ``φ``.
    """
    limit = SUBSET_SEARCH_MAX if max_candidates is None else max_candidates
    gens = _dominated(A, phi)
    if len(gens) > limit:
        raise SubsetSearchCapExceeded(limit)
    leq = underlying_leq(A)
    target = np.array(phi.values, dtype=np.int64)
    for size in range(1, len(gens) + 1):
        for S in combinations(gens, size):
            if not _directed(leq, S):
                continue
            if np.array_equal(_join_of_representables(A, phi.typ, S), target):
                return True, tuple(A.elements[a] for a in S)
    return False, tuple(A.elements[a] for a in gens)


def _directed(leq, S):
    return all(any(leq[a, c] and leq[b, c] for c in S) for a, b in combinations(S, 2))


def is_representable(A, phi):
    cols = A.of_type(phi.typ)
    for a in cols:
        if tuple(A.hom[:, a].tolist()) == phi.values:
            return True, (A.elements[a],)
    return False, None


# -- the class registry ---------------------------------------------------

class IdealClass:
    """A named predicate on presheaves. ``test(A, φ)`` returns ``(verdict, witness)``."""

    def __init__(self, id, test, saturated=True, needs_inhabited=False, description=""):
        self.id = id
        self._test = test
        self.saturated = saturated
        self.needs_inhabited = needs_inhabited
        self.description = description

    def __repr__(self):
        return f"IdealClass({self.id!r})"

    def check(self, A, phi, cap=None):
        """``(verdict, witness)``; memoized per category."""
        memo = A._cache.setdefault(("member", self.id), {})
        if phi not in memo:
            if self.needs_inhabited and not inhabited(phi):
                memo[phi] = (False, "not inhabited")
            else:
                memo[phi] = self._test(A, phi, cap)
        return memo[phi]

    def contains(self, A, phi, cap=None):
        return bool(self.check(A, phi, cap)[0])

    def inhabited_variant(self):
        return IdealClass("inhabited-" + self.id, self._test, self.saturated, True,
                          "inhabited members of: " + self.description)


BASE_CLASSES = {
    "representable": IdealClass("representable", lambda A, p, cap: is_representable(A, p),
                                description="presheaves of the form A(-, a)"),
    "all": IdealClass("all", lambda A, p, cap: (True, None), description="every presheaf"),
    "irreducible": IdealClass("irreducible", check_irreducible,
                              description="homs into binary joins split"),
    "flat": IdealClass("flat", check_flat, description="pairing preserves binary meets of copresheaves"),
    "weakly-flat": IdealClass("weakly-flat", check_weakly_flat,
                              description="pairing preserves binary meets of inhabited copresheaves"),
    "conical": IdealClass("conical", lambda A, p, cap: check_conical(A, p),
                          description="joins of representables"),
    "conical-ideal": IdealClass("conical-ideal", lambda A, p, cap: check_conical_ideal(A, p),
                                description="joins of directed families of representables"),
}

CLASS_IDS = ("representable", "all", "irreducible", "inhabited-irreducible", "flat",
             "inhabited-flat", "weakly-flat", "conical", "conical-ideal")

# every built-in class is saturated, so the harness should never refute one
SATURATED_IDS = CLASS_IDS


def get_class(cls):
    """Resolve a class id (any base id, optionally prefixed with ``inhabited-``)."""
    if isinstance(cls, IdealClass):
        return cls
    if cls in BASE_CLASSES:
        return BASE_CLASSES[cls]
    if cls.startswith("inhabited-") and cls[len("inhabited-"):] in BASE_CLASSES:
        key = ("variant", cls)
        if key not in _VARIANTS:
            _VARIANTS[key] = BASE_CLASSES[cls[len("inhabited-"):]].inhabited_variant()
        return _VARIANTS[key]
    raise ValueError(f"unknown ideal class {cls!r}; choose from {', '.join(CLASS_IDS)} "
                     "or prefix any of them with 'inhabited-'")


_VARIANTS = {}


def membership(cls, A, phi, cap=None):
    return get_class(cls).contains(A, phi, cap)


# -- ΦA -------------------------------------------------------------------

class PhiCategory(WeightCategory):
    """``ΦA``: the full subcategory of ``PA`` on the Φ-ideals."""

    def __init__(self, cls, A, cap=None):
        cls = get_class(cls)
        PA = presheaf_category(A, cap)
        members = [i for i, m in enumerate(PA.weights) if cls.contains(A, m, cap)]
        self.cls = cls
        self.presheaf_category = PA
        self.weights = [PA.weights[i] for i in members]
        self.base = A
        self.co = False
        self.position = {w: i for i, w in enumerate(self.weights)}
        self.values = PA.values[members]
        self.category = PA.category.full_subcategory(members, name=f"{cls.id}({A.name or 'A'})")
        self.category._weights = self
        self.inclusion = QFunctor(self.category, PA.category, members, name="i")
        missing = [i for i in range(len(A)) if PA.yoneda.mapping[i] not in set(members)]
        if missing:
            raise ValidationError([Violation("MissingRepresentable", (A.elements[missing[0]],))],
                                  f"class {cls.id}")
        self.yoneda = QFunctor(A, self.category, [members.index(int(j)) for j in PA.yoneda.mapping],
                               name="Y")


def phi_category(cls, A, cap=None):
    cls = get_class(cls)
    key = ("phi", cls.id)
    if key not in A._cache or A._cache[key].cls is not cls:
        A._cache[key] = PhiCategory(cls, A, cap)
    return A._cache[key]


def is_phi_distributor(cls, phi, cap=None):
    """Every column ``φ(-, b)`` is a Φ-ideal. Witness: the first failing ``b`` and its column."""
    cls = get_class(cls)
    A = phi.dom
    for j, b in enumerate(phi.cod.elements):
        col = Presheaf(A, phi.cod.types[j], phi.matrix[:, j])
        if not cls.contains(A, col, cap):
            return False, (b, col)
    return True, None


class CocompletenessReport:
    def __init__(self, cls, phi, sups, adjoint_ok):
        self.cls = cls
        self.phi = phi
        self.sup_table = dict(zip(phi.weights, sups))
        self.missing = [w for w, s in self.sup_table.items() if not s.exists]
        self.adjoint_ok = adjoint_ok

    @property
    def verdict(self):
        return not self.missing

    def to_json(self):
        return {
            "class": self.cls.id,
            "verdict": self.verdict,
            "missing": [w.label() for w in self.missing],
            "supTable": {w.label(): s.to_json() for w, s in self.sup_table.items()},
            "supLeftAdjointToYoneda": self.adjoint_ok,
            "witnesses": [w.label() for w in self.missing],
        }


def sup_functor(phi_cat, sups):
    """The functor ``ΦA -> A`` sending each ideal to its canonical supremum."""
    return QFunctor(phi_cat.category, phi_cat.base, [s.canonical_position for s in sups], name="sup")


def check_cocomplete(cls, A, cap=None):
    cls = get_class(cls)
    phi = phi_category(cls, A, cap)
    sups = sup_table(A, phi.weights)
    adjoint_ok = None
    if all(s.exists for s in sups):
        S = sup_functor(phi, sups)
        adjoint_ok = not _functor_violations(S.dom, S.cod, S.mapping) and check_adjoint(S, phi.yoneda)[0]
    return CocompletenessReport(cls, phi, sups, adjoint_ok)


def check_cocontinuous(cls, F, cap=None):
    """Does ``F`` carry suprema of Φ-ideals to suprema? Witness: the offending ideal."""
    cls = get_class(cls)
    A, B = F.dom, F.cod
    phi = phi_category(cls, A, cap)
    for mu, s in zip(phi.weights, sup_table(A, phi.weights)):
        if not s.exists:
            continue
        img = sup(B, f_to(F, mu))
        if F.mapping[s.canonical_position] not in set(img.positions):
            return False, mu
    return True, None


# -- the saturation harness -----------------------------------------------

def _functor_choices(A, target):
    """Backtracking generator over the functors ``A -> target``, as tuples of positions."""
    n = len(A)
    LEQ = A.quantaloid.LEQ
    H, homs = A.hom, target.hom
    by_type = {t: [i for i, tt in enumerate(target.types) if tt == t] for t in set(target.types)}
    cands = [by_type.get(A.types[a], []) for a in range(n)]
    chosen = [0] * n

    def go(k):
        if k == n:
            yield tuple(chosen)
            return
        for c in cands[k]:
            if all(LEQ[H[i, k], homs[chosen[i], c]] and LEQ[H[k, i], homs[c, chosen[i]]] for i in range(k)) \
                    and LEQ[H[k, k], homs[c, c]]:
                chosen[k] = c
                yield from go(k + 1)

    return go, cands


def functors_into(A, target, seed=None, exhaustive_max=None, sample_size=None):
    """Functors ``A -> target`` (a QCategory): all of them, or a seeded sample when there are many.

    Returns ``(list of mapping tuples, disclosure dict)``.
    """
    exhaustive_max = FUNCTOR_EXHAUSTIVE_MAX if exhaustive_max is None else exhaustive_max
    sample_size = FUNCTOR_SAMPLE_SIZE if sample_size is None else sample_size
    go, cands = _functor_choices(A, target)
    found = []
    for f in go(0):
        found.append(f)
        if len(found) > exhaustive_max:
            break
    if len(found) <= exhaustive_max:
        return found, {"mode": "exhaustive", "candidates": len(found)}
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    sample = []
    for _ in range(sample_size):
        f = _random_functor(A, target, cands, rng)
        if f is not None:
            sample.append(f)
    return sample, {"mode": "sampled", "candidates": f"> {exhaustive_max}", "draws": sample_size,
                    "distinct": len(set(sample)), "seed": DEFAULT_SEED if seed is None else seed}


def _random_functor(A, target, cands, rng):
    # depth-first search with shuffled candidate order; the first complete map is the draw
    Q = A.quantaloid
    LEQ, H, T = Q.LEQ, A.hom, target.hom
    n = len(A)
    chosen = [0] * n

    def go(k):
        if k == n:
            return True
        order = list(cands[k])
        rng.shuffle(order)
        for c in order:
            if LEQ[H[k, k], T[c, c]] and all(
                    LEQ[H[i, k], T[chosen[i], c]] and LEQ[H[k, i], T[c, chosen[i]]] for i in range(k)):
                chosen[k] = c
                if go(k + 1):
                    return True
        return False

    return tuple(chosen) if go(0) else None


class SaturationReport:
    """Refutation-style evidence for saturation; a pass is not a proof."""

    def __init__(self, cls):
        self.cls = cls
        self.checks = []
        self.counterexamples = []
        self.disclosures = []

    @property
    def verdict(self):
        return not self.counterexamples

    def to_json(self):
        return {
            "class": self.cls.id,
            "verdict": self.verdict,
            "note": "instance-level evidence only; a pass does not prove saturation",
            "checks": self.checks,
            "witnesses": self.counterexamples,
            "disclosures": self.disclosures,
        }


def _label_map(A, tgt, f):
    return {A.elements[i]: tgt.weights[j].label() for i, j in enumerate(f)}


def saturation_harness(cls, fixtures, cap=None, seed=None, max_phi_for_sup=8, stop_after=5):
    """Try to refute saturation of ``cls`` on the given categories.

    Three probes: colimits of Φ-ideals weighted along Φ-valued functors stay
    in Φ; composites of Φ-distributors are Φ-distributors; suprema in ΦA of
    Φ-ideals on ΦA agree with suprema computed in PA.
    """
    cls = get_class(cls)
    rep = SaturationReport(cls)
    fixtures = list(fixtures)
    for A in fixtures:
        for B in fixtures:
            if A.quantaloid is not B.quantaloid:
                continue
            _probe_colim(cls, A, B, rep, cap, seed, stop_after)
            _probe_composition(cls, A, B, rep, cap, seed, stop_after)
        _probe_phi_sup(cls, A, rep, cap, max_phi_for_sup)
    return rep


def _probe_colim(cls, A, B, rep, cap, seed, stop_after):
    phiA, phiB = phi_category(cls, A, cap), phi_category(cls, B, cap)
    functors, disc = functors_into(A, phiB.category, seed)
    tested = fails = 0
    for f in functors:
        G = [phiB.weights[j] for j in f]
        for mu in phiA.weights:
            tested += 1
            c = weighted_presheaf_colim(mu, G, B)
            if not cls.contains(B, c, cap):
                fails += 1
                if fails <= stop_after:
                    rep.counterexamples.append({
                        "probe": "colimit", "from": A.name, "to": B.name, "weight": mu.label(),
                        "functor": _label_map(A, phiB, f), "colimit": c.label()})
    rep.checks.append({"probe": "colimit", "from": A.name, "to": B.name, "functors": len(functors),
                       "cases": tested, "failures": fails})
    if disc["mode"] != "exhaustive":
        rep.disclosures.append({"probe": "colimit", "from": A.name, "to": B.name, **disc})


def _probe_composition(cls, A, B, rep, cap, seed, stop_after):
    # Φ-distributors A ⇸ B are exactly the functors B -> ΦA read column-wise
    Q = A.quantaloid
    phiA, phiB = phi_category(cls, A, cap), phi_category(cls, B, cap)
    left, d1 = functors_into(B, phiA.category, seed)    # φ: A ⇸ B
    right, d2 = functors_into(B, phiB.category, seed)   # ψ: B ⇸ B
    pairs = [(f, g) for f in left for g in right]
    mode = "exhaustive"
    if len(pairs) > FUNCTOR_EXHAUSTIVE_MAX:
        rng = random.Random((DEFAULT_SEED if seed is None else seed) + 1)
        pairs = [(rng.choice(left), rng.choice(right)) for _ in range(FUNCTOR_SAMPLE_SIZE)]
        mode = "sampled"
    fails = 0
    for f, g in pairs:
        M1 = phiA.values[list(f)].T           # A × B
        M2 = phiB.values[list(g)].T           # B × B
        init = Q.BOT[A.type_idx[:, None], B.type_idx[None, :]]
        comp = compose_matrices(Q, M1, M2, init)
        for j in range(len(B)):
            col = Presheaf(A, B.types[j], comp[:, j])
            if not cls.contains(A, col, cap):
                fails += 1
                if fails <= stop_after:
                    rep.counterexamples.append({
                        "probe": "composition", "from": A.name, "to": B.name,
                        "left": _label_map(B, phiA, f), "right": _label_map(B, phiB, g),
                        "column": B.elements[j], "value": col.label()})
                break
    rep.checks.append({"probe": "composition", "from": A.name, "to": B.name, "pairs": len(pairs),
                       "failures": fails})
    if mode != "exhaustive" or d1["mode"] != "exhaustive" or d2["mode"] != "exhaustive":
        rep.disclosures.append({"probe": "composition", "from": A.name, "to": B.name, "pairs": mode,
                                "left": d1, "right": d2})


def _probe_phi_sup(cls, A, rep, cap, max_phi):
    phi = phi_category(cls, A, cap)
    if len(phi) > max_phi:
        rep.disclosures.append({"probe": "phi-sup", "category": A.name,
                                "skipped": f"|ΦA| = {len(phi)} exceeds {max_phi}"})
        return
    C = phi.category
    PA = phi.presheaf_category
    fails = cases = 0
    for q in C.quantaloid.objects:
        for Psi in enumerate_presheaves(C, q, cap):
            if not cls.contains(C, Psi, cap):
                continue
            cases += 1
            via_pa = sup_in_presheaf_category(PA, f_to(phi.inclusion, Psi))
            s = sup(C, Psi)
            ok = s.exists and via_pa in phi.position and phi.position[via_pa] in s.positions
            if not ok:
                fails += 1
                rep.counterexamples.append({"probe": "phi-sup", "category": A.name, "weight": Psi.label(),
                                            "supInPA": via_pa.label(),
                                            "supInPhi": list(s.representatives)})
    rep.checks.append({"probe": "phi-sup", "category": A.name, "cases": cases, "failures": fails})


def phi_distributor_compose(cls, psi, phi, cap=None):
    """Compose two distributors and report whether the composite is a Φ-distributor."""
    comp = dist_compose(psi, phi)
    return comp, is_phi_distributor(cls, comp, cap)[0]
