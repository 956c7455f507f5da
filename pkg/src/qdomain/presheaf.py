"""Presheaves, copresheaves, their categories, suprema and weighted colimits."""

import numpy as np

from .category import QCategory, QDistributor, QFunctor, dist_lres, graph, point
from .config import enumeration_cap
from .errors import EnumerationCapExceeded, TypeMismatch, ValidationError, Violation


def _py(Q):
    # plain-list copies of the hot tables; scalar numpy indexing is slow in backtracking loops
    t = getattr(Q, "_py_tables", None)
    if t is None:
        t = Q._py_tables = (Q.COMP.tolist(), Q.LEQ.tolist())
    return t


class _Weighted:
    """Shared behaviour of presheaves and copresheaves: a typed vector of gids."""

    kind = "weight"
    __slots__ = ("base", "typ", "values", "_hash")

    def __init__(self, base, typ, values):
        self.base = base
        self.typ = typ
        self.values = tuple(int(v) for v in values)
        self._hash = None

    def __eq__(self, other):
        return (type(other) is type(self) and self.typ == other.typ
                and self.values == other.values and self.base == other.base)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self.typ, self.values, hash(self.base)))
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({self.label()})"

    @property
    def quantaloid(self):
        return self.base.quantaloid

    @property
    def array(self):
        return np.array(self.values, dtype=np.int64)

    def value(self, x):
        return self.values[self.base.index(x)]

    def names(self):
        Q = self.quantaloid
        return {x: Q.name(v) for x, v in zip(self.base.elements, self.values)}

    def leq(self, other):
        if self.typ != other.typ:
            return False
        LEQ = self.quantaloid.LEQ
        return all(LEQ[a, b] for a, b in zip(self.values, other.values))

    def label(self):
        return weight_label(self.base, self.typ, self.values)


class Presheaf(_Weighted):
    """``μ: A ⇸ {q}``; ``values[i]`` lies in ``hom(t(x_i), q)``."""

    kind = "presheaf"
    __slots__ = ()

    def to_distributor(self):
        return QDistributor(self.base, point(self.quantaloid, self.typ),
                            np.array(self.values, dtype=np.int64).reshape(-1, 1))


class Copresheaf(_Weighted):
    """``λ: {p} ⇸ A``; ``values[i]`` lies in ``hom(p, t(x_i))``."""

    kind = "copresheaf"
    __slots__ = ()

    def to_distributor(self):
        return QDistributor(point(self.quantaloid, self.typ), self.base,
                            np.array(self.values, dtype=np.int64).reshape(1, -1))


def weight_label(A, typ, values):
    """Readable id such as ``{x,y}``; non-boolean values are spelled out as ``x:h``."""
    Q = A.quantaloid
    parts = []
    for x, t, v in zip(A.elements, A.types, values):
        if Q.BOT[Q.arrow_dom[v], Q.arrow_cod[v]] == v:
            continue
        hom = Q._hom_gids[(Q.objects[Q.arrow_dom[v]], Q.objects[Q.arrow_cod[v]])]
        if len(hom) == 2:
            parts.append(str(x))
        else:
            parts.append(f"{x}:{Q.name(v)}")
    body = "{" + ",".join(parts) + "}"
    return body if len(Q.objects) == 1 else f"{typ}{body}"


# -- validation -----------------------------------------------------------

def _presheaf_violation(A, q, vals):
    Q = A.quantaloid
    V = np.asarray(vals, dtype=np.int64)
    if len(A) == 0:
        return None
    # [x, x'] : μ(x') o A(x, x') <= μ(x)
    ok = Q.LEQ[Q.COMP[V[None, :], A.hom], V[:, None]]
    bad = np.argwhere(~ok)
    if bad.size:
        x, x1 = bad[0]
        return Violation("NotAPresheaf", (A.elements[x], A.elements[x1]))
    return None


def _copresheaf_violation(A, p, vals):
    Q = A.quantaloid
    V = np.asarray(vals, dtype=np.int64)
    if len(A) == 0:
        return None
    # [x', x] : A(x', x) o λ(x') <= λ(x)
    ok = Q.LEQ[Q.COMP[A.hom, V[:, None]], V[None, :]]
    bad = np.argwhere(~ok)
    if bad.size:
        x1, x = bad[0]
        return Violation("NotACopresheaf", (A.elements[x1], A.elements[x]))
    return None


def _coerce_values(A, q, values, co):
    Q = A.quantaloid
    if q not in Q.objects:
        raise ValidationError([Violation("TypeMismatch", (q,))], "presheaf")
    out, bad = [], []
    for i, x in enumerate(A.elements):
        p, r = (q, A.types[i]) if co else (A.types[i], q)
        if isinstance(values, dict):
            if x not in values:
                bad.append(Violation("PartialTable", (x,)))
                continue
            name = values[x]
            key = (p, r, name)
            if key not in Q._gid:
                bad.append(Violation("TypeMismatch", (x, name)))
                continue
            out.append(Q._gid[key])
        else:
            g = int(values[i])
            if Q.arrow_dom[g] != Q.obj_index(p) or Q.arrow_cod[g] != Q.obj_index(r):
                bad.append(Violation("TypeMismatch", (x, Q.name(g))))
            out.append(g)
    if isinstance(values, dict):
        extra = set(values) - set(A.elements)
        if extra:
            bad.append(Violation("ForeignElement", tuple(sorted(extra))))
    if bad:
        raise ValidationError(bad, "copresheaf" if co else "presheaf")
    return out


def make_presheaf(A, q, values):
    """Validate ``values`` (``{x: arrow name}`` or a gid sequence) as a presheaf of type ``q``."""
    vals = _coerce_values(A, q, values, co=False)
    v = _presheaf_violation(A, q, vals)
    if v:
        raise ValidationError([v], "presheaf")
    return Presheaf(A, q, vals)


def make_copresheaf(A, p, values):
    vals = _coerce_values(A, p, values, co=True)
    v = _copresheaf_violation(A, p, vals)
    if v:
        raise ValidationError([v], "copresheaf")
    return Copresheaf(A, p, vals)


def representable(A, a):
    """``A(-, a)`` for an element id or position ``a``."""
    i = a if isinstance(a, (int, np.integer)) else A.index(a)
    return Presheaf(A, A.types[i], A.hom[:, i])


def corepresentable(A, a):
    i = a if isinstance(a, (int, np.integer)) else A.index(a)
    return Copresheaf(A, A.types[i], A.hom[i, :])


def bottom_presheaf(A, q):
    Q = A.quantaloid
    return Presheaf(A, q, Q.BOT[A.type_idx, Q.obj_index(q)])


# -- enumeration ----------------------------------------------------------

def _backtrack(A, q, cap, co):
    Q = A.quantaloid
    COMP, LEQ = _py(Q)
    H = A.hom.tolist()
    n = len(A)
    if co:
        cands = [list(Q.hom(q, t)) for t in A.types]
    else:
        cands = [list(Q.hom(t, q)) for t in A.types]
    out = []
    vals = [0] * n

    def fits(k, v):
        if co:
            # A(x', x) o λ(x') <= λ(x)
            if not LEQ[COMP[H[k][k]][v]][v]:
                return False
            for i in range(k):
                u = vals[i]
                if not LEQ[COMP[H[i][k]][u]][v] or not LEQ[COMP[H[k][i]][v]][u]:
                    return False
            return True
        # μ(x') o A(x, x') <= μ(x)
        if not LEQ[COMP[v][H[k][k]]][v]:
            return False
        for i in range(k):
            u = vals[i]
            if not LEQ[COMP[u][H[k][i]]][v] or not LEQ[COMP[v][H[i][k]]][u]:
                return False
        return True

    def go(k):
        if k == n:
            if len(out) >= cap:
                raise EnumerationCapExceeded(cap, f"{'copresheaves' if co else 'presheaves'} of type {q}")
            out.append(tuple(vals))
            return
        for v in cands[k]:
            if fits(k, v):
                vals[k] = v
                go(k + 1)

    go(0)
    return out


def _enumerate(A, q, cap, co):
    cap = enumeration_cap(cap)
    key = ("co" if co else "pre", q)
    hit = A._cache.get(key)
    if hit is None:
        # enumerate once with the requested cap; a completed list is valid for any larger cap
        raw = _backtrack(A, q, cap, co)
        cls = Copresheaf if co else Presheaf
        hit = A._cache[key] = [cls(A, q, v) for v in raw]
    if len(hit) > cap:
        raise EnumerationCapExceeded(cap, f"{'copresheaves' if co else 'presheaves'} of type {q}")
    return list(hit)


def enumerate_presheaves(A, q, cap=None):
    """All presheaves of type ``q`` on ``A``, lexicographic in element and carrier order."""
    if q not in A.quantaloid.objects:
        raise TypeMismatch(f"{q!r} is not an object of the quantaloid")
    return _enumerate(A, q, cap, co=False)


def enumerate_copresheaves(A, p, cap=None):
    if p not in A.quantaloid.objects:
        raise TypeMismatch(f"{p!r} is not an object of the quantaloid")
    return _enumerate(A, p, cap, co=True)


def all_presheaves(A, cap=None):
    return [m for q in A.quantaloid.objects for m in enumerate_presheaves(A, q, cap)]


def all_copresheaves(A, cap=None):
    return [m for p in A.quantaloid.objects for m in enumerate_copresheaves(A, p, cap)]


# -- presheaf categories --------------------------------------------------

def presheaf_homs(Q, V1, t1, V2, t2):
    """``out[i, j] = ⋀_x lres(V2[j, x], V1[i, x])``: the presheaf-category hom."""
    acc = Q.TOP[np.asarray(t1)[:, None], np.asarray(t2)[None, :]].copy()
    for x in range(V1.shape[1]):
        acc = Q.MEET[acc, Q.LRES[V2[None, :, x], V1[:, None, x]]]
    return acc


def copresheaf_homs(Q, V1, t1, V2, t2):
    """``out[i, j] = ⋀_b rres(V2[j, b], V1[i, b])``: the copresheaf-category hom."""
    acc = Q.TOP[np.asarray(t1)[:, None], np.asarray(t2)[None, :]].copy()
    for b in range(V1.shape[1]):
        acc = Q.MEET[acc, Q.RRES[V2[None, :, b], V1[:, None, b]]]
    return acc


class WeightCategory:
    """A category whose elements are (co)presheaves on ``base``.

    ``category`` is the plain :class:`QCategory`; ``weights[i]`` is the
    presheaf standing behind its ``i``-th element.
    """

    def __init__(self, base, weights, co=False, name=None):
        Q = base.quantaloid
        self.base = base
        self.co = co
        self.weights = list(weights)
        self.position = {w: i for i, w in enumerate(self.weights)}
        n = len(base)
        self.values = np.array([w.values for w in self.weights], dtype=np.int64).reshape(len(self.weights), n)
        tix = np.array([Q.obj_index(w.typ) for w in self.weights], dtype=np.int64)
        homs = copresheaf_homs if co else presheaf_homs
        H = homs(Q, self.values, tix, self.values, tix) if self.weights else np.zeros((0, 0), dtype=np.int64)
        labels = [w.label() for w in self.weights]
        self.category = QCategory(Q, labels, [w.typ for w in self.weights], H, name)
        self.category._weights = self

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def index_of(self, w):
        try:
            return self.position[w]
        except KeyError:
            raise ValidationError([Violation("ForeignElement", (w.label(),))], "presheaf category") from None

    def hom(self, w1, w2):
        return int(self.category.hom[self.index_of(w1), self.index_of(w2)])


class PresheafCategory(WeightCategory):
    """``PA``: every presheaf on ``base`` (all types) with ``PA(μ, μ') = μ' ↙ μ``."""

    def __init__(self, base, weights=None, cap=None, name=None):
        if weights is None:
            weights = all_presheaves(base, cap)
        super().__init__(base, weights, co=False, name=name or f"P({base.name or 'A'})")
        self._yoneda = None

    @property
    def yoneda(self):
        """``Y: A -> PA``."""
        if self._yoneda is None:
            A = self.base
            m = [self.index_of(representable(A, i)) for i in range(len(A))]
            self._yoneda = QFunctor(A, self.category, m, name="Y")
        return self._yoneda

    def sup(self, Psi):
        return sup_in_presheaf_category(self, Psi)


def presheaf_category(A, cap=None):
    key = "PA"
    if key not in A._cache:
        A._cache[key] = PresheafCategory(A, cap=cap)
    else:
        # re-check the cap against the cached enumeration
        for q in A.quantaloid.objects:
            enumerate_presheaves(A, q, cap)
    return A._cache[key]


def copresheaf_category(A, cap=None):
    key = "PdagA"
    if key not in A._cache:
        A._cache[key] = WeightCategory(A, all_copresheaves(A, cap), co=True,
                                       name=f"P†({A.name or 'A'})")
    return A._cache[key]


def yoneda(A, cap=None):
    return presheaf_category(A, cap).yoneda


def presheaf_hom(mu, nu):
    """``PA(μ, ν) = ⋀_x lres(ν(x), μ(x))``, an arrow ``t(μ) -> t(ν)``."""
    Q = mu.quantaloid
    acc = Q.top(mu.typ, nu.typ)
    for a, b in zip(mu.values, nu.values):
        acc = Q.MEET[acc, Q.LRES[b, a]]
    return int(acc)


def copresheaf_hom(lam, lam2):
    """``P†A(λ, λ') = ⋀_b rres(λ'(b), λ(b))``."""
    Q = lam.quantaloid
    acc = Q.top(lam.typ, lam2.typ)
    for a, b in zip(lam.values, lam2.values):
        acc = Q.MEET[acc, Q.RRES[b, a]]
    return int(acc)


def join_weights(w1, w2):
    """Pointwise join of two (co)presheaves of the same type."""
    if w1.typ != w2.typ or type(w1) is not type(w2):
        raise TypeMismatch("pointwise join needs weights of the same kind and type")
    J = w1.quantaloid.JOIN
    return type(w1)(w1.base, w1.typ, [J[a, b] for a, b in zip(w1.values, w2.values)])


def meet_weights(w1, w2):
    if w1.typ != w2.typ or type(w1) is not type(w2):
        raise TypeMismatch("pointwise meet needs weights of the same kind and type")
    M = w1.quantaloid.MEET
    return type(w1)(w1.base, w1.typ, [M[a, b] for a, b in zip(w1.values, w2.values)])


def pair(phi, lam):
    """``φ o λ = ⋁_x φ(x) o λ(x)``, an arrow ``t(λ) -> t(φ)``."""
    Q = phi.quantaloid
    acc = Q.bottom(lam.typ, phi.typ)
    for a, b in zip(phi.values, lam.values):
        acc = Q.JOIN[acc, Q.COMP[a, b]]
    return int(acc)


def inhabited(mu):
    """``1_q <= ⋁ {μ(a) : t(a) = q}``."""
    Q = mu.quantaloid
    qi = Q.obj_index(mu.typ)
    acc = Q.BOT[qi, qi]
    for t, v in zip(mu.base.type_idx, mu.values):
        if t == qi:
            acc = Q.JOIN[acc, v]
    return bool(Q.LEQ[Q.ID[qi], acc])


inhabited_co = inhabited


# -- suprema and colimits -------------------------------------------------

class SupResult:
    """Outcome of a supremum search: the whole iso-class of suprema, possibly empty."""

    def __init__(self, base, positions):
        self.base = base
        self.positions = tuple(int(i) for i in positions)

    @property
    def exists(self):
        return bool(self.positions)

    @property
    def representatives(self):
        return tuple(self.base.elements[i] for i in self.positions)

    @property
    def canonical(self):
        return self.base.elements[self.positions[0]] if self.positions else None

    @property
    def canonical_position(self):
        return self.positions[0] if self.positions else None

    def __repr__(self):
        return f"SupResult({list(self.representatives)})"

    def to_json(self):
        return {"exists": self.exists, "canonical": self.canonical,
                "representatives": list(self.representatives)}


def sup_target(A, mu):
    """The row ``A ↙ μ``: ``b ↦ ⋀_x lres(A(x, b), μ(x))``, valued in ``hom(t(μ), t(b))``."""
    Q = A.quantaloid
    V = np.asarray(mu.values, dtype=np.int64)
    acc = Q.TOP[Q.obj_index(mu.typ), A.type_idx].copy()
    for x in range(len(A)):
        acc = Q.MEET[acc, Q.LRES[A.hom[x, :], V[x]]]
    return acc


def sup(A, mu):
    """Every ``a`` of type ``t(μ)`` with ``A(a, -) = A ↙ μ``."""
    if mu.base != A:
        raise TypeMismatch("presheaf lives on a different category")
    target = sup_target(A, mu)
    cands = A.of_type(mu.typ)
    hits = [i for i in cands if np.array_equal(A.hom[i, :], target)]
    return SupResult(A, hits)


def sup_table(A, presheaves):
    """Vectorized :func:`sup` over many presheaves of ``A``; returns one SupResult each."""
    out = []
    rows = {}
    for i in range(len(A)):
        rows.setdefault((A.types[i], A.hom[i, :].tobytes()), []).append(i)
    for mu in presheaves:
        target = sup_target(A, mu)
        out.append(SupResult(A, rows.get((mu.typ, target.tobytes()), [])))
    return out


def f_to(F, mu):
    """Image of a presheaf on ``dom F``: ``y ↦ ⋁_x μ(x) o B(y, Fx)``."""
    if mu.base != F.dom:
        raise TypeMismatch("presheaf is not on the domain of the functor")
    B = F.cod
    Q = B.quantaloid
    acc = Q.BOT[B.type_idx, Q.obj_index(mu.typ)].copy()
    for x, v in enumerate(mu.values):
        acc = Q.JOIN[acc, Q.COMP[v, B.hom[:, F.mapping[x]]]]
    return Presheaf(B, mu.typ, acc)


def f_from(F, lam):
    """Restriction of a presheaf on ``cod F`` along ``F``: ``x ↦ λ(Fx)``."""
    if lam.base != F.cod:
        raise TypeMismatch("presheaf is not on the codomain of the functor")
    return Presheaf(F.dom, lam.typ, np.asarray(lam.values)[F.mapping])


def image_functor(F, PA=None, PB=None, cap=None):
    """``F→: PA -> PB`` as a functor between the enumerated presheaf categories."""
    PA = PA or presheaf_category(F.dom, cap)
    PB = PB or presheaf_category(F.cod, cap)
    return QFunctor(PA.category, PB.category, [PB.index_of(f_to(F, m)) for m in PA.weights])


def preimage_functor(F, PA=None, PB=None, cap=None):
    """``F←: PB -> PA``."""
    PA = PA or presheaf_category(F.dom, cap)
    PB = PB or presheaf_category(F.cod, cap)
    return QFunctor(PB.category, PA.category, [PA.index_of(f_from(F, m)) for m in PB.weights])


def sup_in_presheaf_category(PA, Psi):
    """Supremum in ``PA`` of a presheaf ``Ψ`` on ``PA``: ``x ↦ Ψ(Y x)``."""
    if Psi.base != PA.category:
        raise TypeMismatch("Ψ must be a presheaf on the presheaf category")
    Y = PA.yoneda
    return Presheaf(PA.base, Psi.typ, np.asarray(Psi.values)[Y.mapping])


class ColimResult:
    """Per-``c`` suprema of ``θ(-, c) o F^♮``; ``functor`` is set when all of them exist."""

    def __init__(self, weight, functor, sups, weights):
        self.weight = weight
        self.functor = functor
        self.sups = sups
        self.weights = weights
        self.functor_result = None
        self.graph_law = None

    @property
    def exists(self):
        return all(s.exists for s in self.sups)


def colim(theta, F):
    """Colimit of ``F: B -> A`` weighted by ``θ: B ⇸ C``."""
    if theta.dom != F.dom:
        raise TypeMismatch("weight and functor must share their domain")
    B, A, C = F.dom, F.cod, theta.cod
    Q = A.quantaloid
    sups, weights = [], []
    for c in range(len(C)):
        mu = Presheaf(B, C.types[c], theta.matrix[:, c])
        nu = f_to(F, mu)  # θ(-, c) o F^♮
        weights.append(nu)
        sups.append(sup(A, nu))
    res = ColimResult(theta, F, sups, weights)
    if res.exists:
        G = QFunctor(C, A, [s.canonical_position for s in sups], name="colim")
        res.functor_result = G
        res.graph_law = graph(G) == dist_lres(graph(F), theta)
    return res


def weighted_presheaf_colim(mu, G_values, B):
    """Presheaf ``b ↦ ⋁_a μ(a) o G(a)(b)`` for ``G`` given by per-element presheaves on ``B``."""
    Q = B.quantaloid
    acc = Q.BOT[B.type_idx, Q.obj_index(mu.typ)].copy()
    for a, v in enumerate(mu.values):
        acc = Q.JOIN[acc, Q.COMP[v, np.asarray(G_values[a].values, dtype=np.int64)]]
    return Presheaf(B, mu.typ, acc)
