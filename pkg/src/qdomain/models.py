"""Standard quantales, quantaloids and categories used as fixtures."""

from fractions import Fraction
from itertools import combinations

import numpy as np

from .category import Preorder, QFunctor, check_adjoint, validate_category
from .errors import NotOver2, PreconditionFailed
from .lattice import chain, validate_lattice
from .presheaf import Presheaf, presheaf_category, sup
from .quantaloid import b_q, lres, validate_quantale

# -- quantales ------------------------------------------------------------


def boolean2():
    """The two-element Boolean algebra with ``&`` = ∧."""
    L = chain(["0", "1"])
    return validate_quantale(L, lambda a, b: min(a, b), "1")


def _chain_names(n):
    return [str(Fraction(i, n - 1)) for i in range(n)]


def chain_quantale(n, tensor="godel"):
    """The ``n``-element chain ``{0, 1/(n-1), ..., 1}`` with the Gödel (min),
    Łukasiewicz (``max(0, a+b-1)``) or drastic product."""
    if n < 2:
        raise ValueError("a chain quantale needs at least two elements")
    names = _chain_names(n)
    val = {s: Fraction(s) for s in names}
    back = {v: s for s, v in val.items()}
    if tensor == "godel":
        op = lambda a, b: back[min(val[a], val[b])]
    elif tensor == "lukasiewicz":
        op = lambda a, b: back[max(Fraction(0), val[a] + val[b] - 1)]
    elif tensor == "drastic":
        op = lambda a, b: b if val[a] == 1 else a if val[b] == 1 else "0"
    else:
        raise ValueError(f"unknown tensor {tensor!r}")
    return validate_quantale(chain(names), op, "1")


def _subset_name(s):
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def powerset_quantale(X):
    """Subsets of ``X`` under inclusion, with intersection as product and ``X`` as unit."""
    X = sorted(X)
    subsets = [frozenset(c) for r in range(len(X) + 1) for c in combinations(X, r)]
    names = {s: _subset_name(s) for s in subsets}
    back = {v: k for k, v in names.items()}
    L = validate_lattice([names[s] for s in subsets], lambda a, b: back[a] <= back[b])
    return validate_quantale(L, lambda a, b: names[back[a] & back[b]], names[frozenset(X)])


# -- posets as 2-categories -----------------------------------------------

def _as_pairs(poset):
    if isinstance(poset, Preorder):
        return list(poset.carrier), poset.leq_matrix
    carrier, rel = poset
    carrier = list(carrier)
    idx = {e: i for i, e in enumerate(carrier)}
    M = np.eye(len(carrier), dtype=bool)
    for a, b in rel:
        M[idx[a], idx[b]] = True
    return carrier, M


def poset_to_2cat(poset, Q2=None, name=None):
    """Encode a preorder as a category over 2: ``hom(a, b) = 1`` iff ``a <= b``.

    ``poset`` is a :class:`Preorder` or ``(carrier, pairs)``; the pairs are
    closed under reflexivity but not under transitivity, so pass a full order.
    """
    Q2 = Q2 or TWO.quantaloid
    carrier, M = _as_pairs(poset)
    o = Q2.objects[0]
    return validate_category(Q2, [(e, o) for e in carrier],
                             lambda a, b: "1" if M[carrier.index(a), carrier.index(b)] else "0", name=name)


def _is_two(Q):
    return len(Q.objects) == 1 and len(Q.hom(Q.objects[0], Q.objects[0])) == 2


def cat2_to_poset(A):
    """Inverse of :func:`poset_to_2cat`."""
    Q = A.quantaloid
    if not _is_two(Q):
        raise NotOver2("category is not enriched in the two-element quantale")
    o = Q.objects[0]
    top = Q.top(o, o)
    return Preorder(A.elements, A.hom == top)


def named_poset(name):
    return NAMED_POSETS[name]


NAMED_POSETS = {
    "v": (["x", "y", "z"], [("x", "z"), ("y", "z")]),
    "antichain2": (["x", "y"], []),
    "diamond": (["bot", "a", "b", "top"],
                [("bot", "a"), ("bot", "b"), ("bot", "top"), ("a", "top"), ("b", "top")]),
    "w5": (["a", "b", "c", "d", "e"], [("a", "b"), ("c", "b"), ("c", "d"), ("e", "d")]),
    "pentagon5": (["0", "a", "b", "c", "1"],
                  [("0", "a"), ("0", "b"), ("0", "c"), ("0", "1"), ("a", "b"), ("a", "1"),
                   ("b", "1"), ("c", "1")]),
    "chain5": (["c0", "c1", "c2", "c3", "c4"], [(f"c{i}", f"c{j}") for i in range(5) for j in range(i + 1, 5)]),
    "crown6": (["a1", "a2", "a3", "b1", "b2", "b3"],
               [(f"a{i}", f"b{j}") for i in range(1, 4) for j in range(1, 4) if i != j]),
    "point": (["p"], []),
}


# -- Q^A and the left adjoint of its supremum map ------------------------

def _arrow_label(Q, g):
    return Q.name(g) if len(Q.objects) == 1 else f"{Q.name(g)}:{Q.objects[Q.arrow_cod[g]]}"


def q_power(Q, A, name=None):
    """``Q^A``: arrows out of ``A`` typed by codomain, ``hom(g, f) = f ↙ g``."""
    gids = [g for X in Q.objects for g in Q.hom(A, X)]
    labels = [_arrow_label(Q, g) for g in gids]
    types = [Q.objects[Q.arrow_cod[g]] for g in gids]
    n = len(gids)
    H = np.empty((n, n), dtype=np.int64)
    for i, g in enumerate(gids):
        for j, f in enumerate(gids):
            H[i, j] = lres(Q, f, g)
    cat = validate_category(Q, list(zip(labels, types)), H, name=name or f"Q^{A}")
    cat._arrows = tuple(gids)
    cat._power_object = A
    return cat


def power_element(P, g):
    """Position in ``Q^A`` of the arrow with gid ``g``."""
    return P._arrows.index(int(g))


def q_power_d(P):
    """``d f (g) = f o (1_A ↙ g)`` for every element ``f`` of ``P = Q^A``."""
    Q = P.quantaloid
    A = P._power_object
    one = Q.identity(A)
    out = {}
    for i, f in enumerate(P._arrows):
        vals = [Q.COMP[f, lres(Q, one, g)] for g in P._arrows]
        out[P.elements[i]] = Presheaf(P, P.types[i], vals)
    return out


class PowerReport:
    """Checks on ``Q^A``: supremum formula, ``d ⊣ sup`` and the integral simplification."""

    def __init__(self, P, d, sup_formula_ok, adjoint_ok, integral, simplification_ok):
        self.category = P
        self.d = d
        self.sup_formula_ok = sup_formula_ok
        self.adjoint_ok = adjoint_ok
        self.integral = integral
        self.simplification_ok = simplification_ok

    @property
    def verdict(self):
        return self.sup_formula_ok and self.adjoint_ok and self.simplification_ok is not False


def check_q_power(P, cap=None):
    Q = P.quantaloid
    A = P._power_object
    PA = presheaf_category(P, cap)
    # sup(μ) = μ(1_A)
    one_pos = power_element(P, Q.identity(A))
    sup_ok = True
    sups = []
    for mu in PA.weights:
        s = sup(P, mu)
        expect = power_element(P, mu.values[one_pos])
        sup_ok &= s.exists and expect in s.positions
        sups.append(s.canonical_position if s.exists else -1)
    d = q_power_d(P)
    D = QFunctor(P, PA.category, [PA.index_of(d[e]) for e in P.elements], name="d")
    Sup = QFunctor(PA.category, P, sups, name="sup")
    adjoint_ok = sup_ok and check_adjoint(D, Sup)[0]
    integral = Q.identity(A) == Q.top(A, A)
    simpl = None
    if integral:
        simpl = all(d[P.elements[i]].values[j] == Q.COMP[f, Q.top(P.types[j], A)]
                    for i, f in enumerate(P._arrows) for j in range(len(P)))
    return PowerReport(P, d, bool(sup_ok), bool(adjoint_ok), integral, simpl)


# -- catalog --------------------------------------------------------------

TWO = boolean2()


def _bg3_pair(BG3):
    return validate_category(BG3, [("a", "1"), ("b", "1/2")],
                             {("a", "a"): "1", ("b", "b"): "1/2", ("a", "b"): "1/2", ("b", "a"): "1/2"},
                             name="fix-bg3-pair")


def _g3_chain2(G3):
    # crisp chain lo <= hi; under inhabited-flat weights hi is only half way below itself
    return validate_category(quantaloid_of(G3), [("lo", "*"), ("hi", "*")],
                             {("lo", "lo"): "1", ("hi", "hi"): "1", ("lo", "hi"): "1", ("hi", "lo"): "0"},
                             name="fix-g3-chain2")


_QUANTALES = {
    "fix-2": lambda: TWO,
    "fix-g3": lambda: chain_quantale(3, "godel"),
    "fix-luk3": lambda: chain_quantale(3, "lukasiewicz"),
    "fix-pwr2": lambda: powerset_quantale([1, 2]),
    "fix-drastic4": lambda: chain_quantale(4, "drastic"),
}


class FixtureCatalog:
    """Named fixtures, built lazily and validated on first access."""

    DESCRIPTIONS = {
        "fix-2": "quantale: two-element Boolean algebra",
        "fix-g3": "quantale: three-element chain with the minimum product",
        "fix-luk3": "quantale: three-element chain with the Łukasiewicz product",
        "fix-pwr2": "quantale: subsets of {1,2} with intersection",
        "fix-drastic4": "quantale: four-element chain with the drastic product (not divisible)",
        "fix-bg3": "quantaloid: B_Q of the three-element min-chain",
        "fix-bpwr2": "quantaloid: B_Q of the subsets of {1,2}",
        "fix-v": "category over 2: x, y <= z",
        "fix-antichain2": "category over 2: two incomparable points",
        "fix-diamond": "category over 2: bot <= a, b <= top",
        "fix-w5": "category over 2: a <= b >= c <= d >= e",
        "fix-pentagon5": "category over 2: the non-modular lattice N5",
        "fix-chain5": "category over 2: a five-element chain",
        "fix-crown6": "category over 2: the 3-crown",
        "fix-point": "category over 2: one point",
        "fix-bg3-pair": "category over B_Q(G3): a of type 1, b of type 1/2, all off-diagonal homs 1/2",
        "fix-g3-chain2": "category over G3: lo <= hi, continuous but not algebraic for inhabited-flat",
        "fix-qa-2": "category: Q^A for the Boolean quantale",
        "fix-qa-bg3-1": "category: Q^A for B_Q(G3) at object 1",
        "fix-qa-bg3-h": "category: Q^A for B_Q(G3) at object 1/2",
        "fix-qa-bpwr2-12": "category: Q^A for B_Q(subsets of {1,2}) at object {1,2}",
        "fix-qa-bpwr2-1": "category: Q^A for B_Q(subsets of {1,2}) at object {1}",
        "fix-qa-g3": "category: Q^A for the min-chain quantale",
    }

    def __init__(self):
        self._built = {}

    def names(self):
        return list(self.DESCRIPTIONS)

    def describe(self):
        return [{"name": n, "kind": self.DESCRIPTIONS[n].split(":")[0].split()[0],
                 "description": self.DESCRIPTIONS[n].split(": ", 1)[1]} for n in self.names()]

    def __contains__(self, name):
        return name in self.DESCRIPTIONS

    def __getitem__(self, name):
        if name not in self.DESCRIPTIONS:
            raise KeyError(f"unknown fixture {name!r}")
        if name not in self._built:
            self._built[name] = self._build(name)
        return self._built[name]

    def _build(self, name):
        if name in _QUANTALES:
            return _QUANTALES[name]()
        if name == "fix-bg3":
            return b_q(self["fix-g3"])
        if name == "fix-bpwr2":
            return b_q(self["fix-pwr2"])
        if name == "fix-bg3-pair":
            return _bg3_pair(self["fix-bg3"])
        if name == "fix-g3-chain2":
            return _g3_chain2(self["fix-g3"])
        if name.startswith("fix-qa-"):
            src = {
                "fix-qa-2": ("fix-2", "*"),
                "fix-qa-g3": ("fix-g3", "*"),
                "fix-qa-bg3-1": ("fix-bg3", "1"),
                "fix-qa-bg3-h": ("fix-bg3", "1/2"),
                "fix-qa-bpwr2-12": ("fix-bpwr2", "{1,2}"),
                "fix-qa-bpwr2-1": ("fix-bpwr2", "{1}"),
            }[name]
            return q_power(quantaloid_of(self[src[0]]), src[1], name=name)
        key = name[len("fix-"):]
        if key in NAMED_POSETS:
            return poset_to_2cat(NAMED_POSETS[key], name=name)
        raise KeyError(name)


CATALOG = FixtureCatalog()


def fixture(name):
    return CATALOG[name]


def quantaloid_of(obj):
    """Accept a quantale, quantaloid or category and return the quantaloid."""
    if hasattr(obj, "objects"):
        return obj
    if hasattr(obj, "quantaloid"):
        return obj.quantaloid
    raise PreconditionFailed(f"{obj!r} carries no quantaloid")
