"""Way-below distributors, continuity, compact elements and algebraicity."""

import numpy as np

from .category import (
    QDistributor, QFunctor, check_adjoint, compose_matrices, dist_compose, dist_leq, dist_lres,
    identity_distributor, is_valid_distributor, iso_classes,
)
from .errors import InternalInconsistency, PreconditionFailed
from .ideals import check_cocomplete, get_class, phi_category
from .presheaf import Presheaf, f_from, f_to, sup, sup_table


class PhiS:
    """The Φ-ideals of ``A`` that have a supremum, with their canonical suprema."""

    def __init__(self, cls, A, cap=None):
        self.cls = get_class(cls)
        self.base = A
        self.phi = phi_category(self.cls, A, cap)
        sups = sup_table(A, self.phi.weights)
        keep = [i for i, s in enumerate(sups) if s.exists]
        self.member_positions = keep          # positions inside ΦA
        self.members = [self.phi.weights[i] for i in keep]
        self.sups = [sups[i] for i in keep]
        self.sup_positions = np.array([s.canonical_position for s in self.sups], dtype=np.int64)
        self.category = self.phi.category.full_subcategory(keep, name=f"{self.cls.id}_s")
        self.values = self.phi.values[keep] if keep else np.zeros((0, len(A)), dtype=np.int64)
        self.adjunction_ok = self._check_adjunction()

    def __len__(self):
        return len(self.members)

    def _check_adjunction(self):
        A, Q = self.base, self.base.quantaloid
        # sup(Y a) ≅ a
        for a in range(len(A)):
            s = sup(A, Presheaf(A, A.types[a], A.hom[:, a]))
            if a not in s.positions:
                return False
        # μ <= Y(sup μ)
        for mu, s in zip(self.members, self.sup_positions):
            if not np.all(Q.LEQ[np.array(mu.values), A.hom[:, s]]):
                return False
        return True

    def sup_functor(self):
        return QFunctor(self.category, self.base, self.sup_positions, name="sup")

    def position_of(self, mu):
        try:
            return self.members.index(mu)
        except ValueError:
            return None


def phi_s(cls, A, cap=None):
    cls = get_class(cls)
    key = ("phi_s", cls.id)
    if key not in A._cache or A._cache[key].cls is not cls:
        A._cache[key] = PhiS(cls, A, cap)
    return A._cache[key]


class WayBelow:
    """``⇓: A ⇸ A`` together with the invariant checks that always hold for it."""

    def __init__(self, ps):
        self.phi_s = ps
        A = self.base = ps.base
        Q = A.quantaloid
        W = Q.TOP[A.type_idx[:, None], A.type_idx[None, :]].copy()
        # ⇓(y, x) = ⋀_φ A(x, sup φ) ↘ φ(y)
        for mu, s in zip(ps.members, ps.sup_positions):
            V = np.array(mu.values, dtype=np.int64)
            W = Q.MEET[W, Q.RRES[A.hom[None, :, s], V[:, None]]]
        self.distributor = QDistributor(A, A, W)
        self.matrix = self.distributor.matrix
        self.is_distributor = is_valid_distributor(self.distributor)
        self.below_hom = dist_leq(self.distributor, identity_distributor(A))
        self.squared = dist_compose(self.distributor, self.distributor)
        self.idempotent_below = dist_leq(self.squared, self.distributor)

    def column(self, a):
        """``F_⇓(a) = ⇓(-, a)``."""
        A = self.base
        return Presheaf(A, A.types[a], self.matrix[:, a])

    def functor_values(self):
        return [self.column(a) for a in range(len(self.base))]

    def names(self):
        return self.distributor.names()


def way_below(cls, A, cap=None):
    cls = get_class(cls)
    key = ("way_below", cls.id)
    if key not in A._cache or A._cache[key].phi_s.cls is not cls:
        A._cache[key] = WayBelow(phi_s(cls, A, cap))
    return A._cache[key]


def way_below_functor(cls, A, cap=None):
    """``a ↦ ⇓(-, a)`` as a dict from element ids to presheaves."""
    wb = way_below(cls, A, cap)
    return {a: wb.column(i) for i, a in enumerate(A.elements)}


class ContinuityReport:
    def __init__(self, cls, A, wb, per_element, approx_ok, phi_dist_ok, adjoint_ok):
        self.cls = cls
        self.base = A
        self.way_below = wb
        self.per_element = per_element
        self.approx_ok = approx_ok
        self.phi_distributor_ok = phi_dist_ok
        self.adjoint_ok = adjoint_ok
        by_elements = all(e["in_phi_s"] and e["sup_ok"] for e in per_element.values())
        by_approx = phi_dist_ok and approx_ok
        self.cross_check_ok = by_elements == by_approx
        self.verdict = by_elements
        if not self.cross_check_ok:
            raise InternalInconsistency(
                f"continuity characterizations disagree on {A.name or A!r}: "
                f"per-element={by_elements}, approximating={by_approx}")

    @property
    def witnesses(self):
        return [a for a, e in self.per_element.items() if not (e["in_phi_s"] and e["sup_ok"])]

    def to_json(self):
        return {
            "class": self.cls.id,
            "verdict": self.verdict,
            "perElement": {a: {"ideal": e["ideal"].label(), "inPhiS": e["in_phi_s"], "supOk": e["sup_ok"]}
                           for a, e in self.per_element.items()},
            "approximating": self.approx_ok,
            "phiDistributor": self.phi_distributor_ok,
            "crossCheck": self.cross_check_ok,
            "leftAdjointToSup": self.adjoint_ok,
            "equalityMode": "sup compared up to isomorphism; distributors compared exactly",
            "witnesses": self.witnesses,
        }


def check_continuous(cls, A, cap=None):
    """Decide Φ-continuity two independent ways and insist they agree."""
    cls = get_class(cls)
    wb = way_below(cls, A, cap)
    ps = wb.phi_s
    per = {}
    lookup = {m: i for i, m in enumerate(ps.members)}
    for a, name in enumerate(A.elements):
        ideal = wb.column(a)
        j = lookup.get(ideal)
        per[name] = {
            "ideal": ideal,
            "in_phi_s": j is not None,
            "sup_ok": j is not None and a in ps.sups[j].positions,
        }
    phi_dist_ok = all(cls.contains(A, wb.column(a), cap) for a in range(len(A)))
    approx_ok = bool(np.array_equal(dist_lres(identity_distributor(A), wb.distributor).matrix, A.hom))
    adjoint_ok = None
    if all(e["in_phi_s"] and e["sup_ok"] for e in per.values()):
        L = QFunctor(A, ps.category, [lookup[wb.column(a)] for a in range(len(A))], name="F_⇓")
        adjoint_ok = check_adjoint(L, ps.sup_functor())[0]
    return ContinuityReport(cls, A, wb, per, approx_ok, phi_dist_ok, adjoint_ok)


def check_interpolation(cls, A, cap=None):
    """``⇓ = ⇓ o ⇓``? Witness: the first ``(x, y)`` where they differ."""
    wb = way_below(cls, A, cap)
    bad = np.argwhere(wb.squared.matrix != wb.matrix)
    if bad.size:
        x, y = bad[0]
        return False, (A.elements[x], A.elements[y])
    return True, None


def is_compact(cls, A, a, cap=None):
    """``1 <= ⇓(a, a)``, cross-checked against ``A(a, sup φ) <= φ(a)`` over Φ_s."""
    wb = way_below(cls, A, cap)
    Q = A.quantaloid
    i = a if isinstance(a, (int, np.integer)) else A.index(a)
    by_diag = bool(Q.LEQ[Q.ID[A.type_idx[i]], wb.matrix[i, i]])
    ps = wb.phi_s
    by_sups = all(Q.LEQ[A.hom[i, s], mu.values[i]] for mu, s in zip(ps.members, ps.sup_positions))
    if by_diag != by_sups:
        raise InternalInconsistency(f"compactness tests disagree at {A.elements[i]!r}")
    return by_diag


def compacts(cls, A, cap=None):
    """Positions of the Φ-compact elements, in carrier order."""
    return [i for i in range(len(A)) if is_compact(cls, A, i, cap)]


def sigma_and_s(cls, A, cap=None):
    """``Σ(x, y) = ⋁_{a compact} A(a, y) o A(x, a)`` and ``S(a) = Σ(-, a)``."""
    Q = A.quantaloid
    cs = compacts(cls, A, cap)
    init = Q.BOT[A.type_idx[:, None], A.type_idx[None, :]]
    M = compose_matrices(Q, A.hom[:, cs], A.hom[cs, :], init)
    sigma = QDistributor(A, A, M)
    S = {a: Presheaf(A, A.types[i], M[:, i]) for i, a in enumerate(A.elements)}
    if not dist_leq(sigma, way_below(cls, A, cap).distributor):
        raise InternalInconsistency("Σ is not below the way-below distributor")
    return sigma, S


class AlgebraicityReport:
    def __init__(self, cls, A, compact_positions, sigma, per_element, continuity, s_equals_fdown):
        self.cls = cls
        self.base = A
        self.compact_positions = compact_positions
        self.sigma = sigma
        self.per_element = per_element
        self.continuity = continuity
        self.s_equals_fdown = s_equals_fdown
        self.verdict = all(e["in_phi_s"] and e["sup_ok"] for e in per_element.values())
        if self.verdict != (continuity.verdict and s_equals_fdown):
            raise InternalInconsistency(
                f"algebraicity characterizations disagree on {A.name or A!r}")

    @property
    def compacts(self):
        return [self.base.elements[i] for i in self.compact_positions]

    @property
    def witnesses(self):
        return [a for a, e in self.per_element.items() if not (e["in_phi_s"] and e["sup_ok"])]

    def to_json(self):
        return {
            "class": self.cls.id,
            "verdict": self.verdict,
            "compacts": self.compacts,
            "perElement": {a: {"approximation": e["ideal"].label(), "inPhiS": e["in_phi_s"],
                               "supOk": e["sup_ok"]} for a, e in self.per_element.items()},
            "continuous": self.continuity.verdict,
            "sigmaEqualsWayBelow": self.s_equals_fdown,
            "witnesses": self.witnesses,
        }


def check_algebraic(cls, A, cap=None):
    cls = get_class(cls)
    sigma, S = sigma_and_s(cls, A, cap)
    ps = phi_s(cls, A, cap)
    lookup = {m: i for i, m in enumerate(ps.members)}
    per = {}
    for a, name in enumerate(A.elements):
        ideal = S[name]
        j = lookup.get(ideal)
        per[name] = {"ideal": ideal, "in_phi_s": j is not None,
                     "sup_ok": j is not None and a in ps.sups[j].positions}
    cont = check_continuous(cls, A, cap)
    same = bool(np.array_equal(sigma.matrix, way_below(cls, A, cap).matrix))
    return AlgebraicityReport(cls, A, compacts(cls, A, cap), sigma, per, cont, same)


class EquivalenceResult:
    """``F: A -> Φ(A_c)`` and ``G: Φ(A_c) -> A`` with the round-trip verdicts."""

    def __init__(self, A, compact_cat, phi_c, F, G, gf_iso, fg_identity, gf_identity):
        self.base = A
        self.compact_category = compact_cat
        self.phi_c = phi_c
        self.F = F
        self.G = G
        self.gf_iso = gf_iso
        self.fg_identity = fg_identity
        self.gf_identity = gf_identity

    @property
    def verdict(self):
        return self.gf_iso and self.fg_identity

    def to_json(self):
        return {
            "verdict": self.verdict,
            "compacts": list(self.compact_category.elements),
            "phiOfCompacts": [w.label() for w in self.phi_c.weights],
            "F": {a: self.phi_c.weights[j].label() for a, j in zip(self.base.elements, self.F.mapping)},
            "G": {w.label(): self.base.elements[j] for w, j in zip(self.phi_c.weights, self.G.mapping)},
            "GFisoIdentity": self.gf_iso,
            "GFequalsIdentity": self.gf_identity,
            "FGequalsIdentity": self.fg_identity,
            "equalityMode": "G∘F up to isomorphism, F∘G exactly",
            "witnesses": [],
        }


def algebraic_equivalence(cls, A, cap=None):
    """Rebuild ``A`` from its compact elements as ``Φ(A_c)``."""
    cls = get_class(cls)
    if not check_cocomplete(cls, A, cap).verdict:
        raise PreconditionFailed(f"{A.name or 'category'} is not {cls.id}-cocomplete")
    alg = check_algebraic(cls, A, cap)
    if not alg.verdict:
        raise PreconditionFailed(f"{A.name or 'category'} is not {cls.id}-algebraic")
    cs = alg.compact_positions
    Ac = A.full_subcategory(cs, name=f"{A.name or 'A'}_c")
    j = QFunctor(Ac, A, cs, name="j")
    phi_c = phi_category(cls, Ac, cap)
    # F(x) = A(-, x) restricted to the compacts
    F_map = []
    for x in range(len(A)):
        r = f_from(j, Presheaf(A, A.types[x], A.hom[:, x]))
        if r not in phi_c.position:
            raise InternalInconsistency(f"restriction of a representable is not a {cls.id} ideal")
        F_map.append(phi_c.position[r])
    F = QFunctor(A, phi_c.category, F_map, name="F")
    # G(φ) = sup(j→ φ)
    G_map = []
    for w in phi_c.weights:
        s = sup(A, f_to(j, w))
        if not s.exists:
            raise InternalInconsistency("missing supremum on a cocomplete category")
        G_map.append(s.canonical_position)
    G = QFunctor(phi_c.category, A, G_map, name="G")
    gf = np.asarray(G_map)[F_map]
    classes = {i: c for c in iso_classes(A) for i in c}
    gf_iso = all(gf[x] in classes[x] for x in range(len(A)))
    fg = np.asarray(F_map)[G_map]
    fg_id = bool(np.array_equal(fg, np.arange(len(phi_c))))
    return EquivalenceResult(A, Ac, phi_c, F, G, gf_iso, fg_id, bool(np.array_equal(gf, np.arange(len(A)))))


def isomorphic_categories(A, B):
    """Brute-force search for a type- and hom-preserving bijection; returns the map or None."""
    if len(A) != len(B) or sorted(A.types) != sorted(B.types):
        return None
    n = len(A)
    chosen, used = [0] * n, [False] * n

    def go(k):
        if k == n:
            return True
        for c in range(n):
            if used[c] or B.types[c] != A.types[k]:
                continue
            if B.hom[c, c] != A.hom[k, k]:
                continue
            if any(B.hom[chosen[i], c] != A.hom[i, k] or B.hom[c, chosen[i]] != A.hom[k, i] for i in range(k)):
                continue
            chosen[k], used[c] = c, True
            if go(k + 1):
                return True
            used[c] = False
        return False

    return dict(zip(A.elements, (B.elements[c] for c in chosen))) if go(0) else None
