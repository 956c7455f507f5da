"""Finite quantaloids and quantales.

Every arrow of a :class:`Quantaloid` gets a global integer id (a *gid*).
Arrows carry their own domain and codomain, so every table below is a
plain ``N x N`` integer array over gids, with ``-1`` marking pairs that are
not composable or live in different hom-lattices.
"""

from itertools import product

import numpy as np

from . import config
from .errors import ForeignElement, NotDivisible, TypeMismatch, ValidationError, Violation
from .lattice import FiniteLattice, validate_lattice


class Quantaloid:
    """A validated finite quantaloid. Build with :func:`validate_quantaloid`."""

    def __init__(self, objects, homs, comp_tables, identity, report, residuals=True):
        self.objects = tuple(objects)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self.homs = dict(homs)
        self.validation_report = report

        names, doms, cods = [], [], []
        self._gid = {}
        self._hom_gids = {}
        for p, q in product(self.objects, repeat=2):
            L = self.homs[(p, q)]
            ids = []
            for e in L.carrier:
                self._gid[(p, q, e)] = len(names)
                ids.append(len(names))
                names.append(e)
                doms.append(self._obj_index[p])
                cods.append(self._obj_index[q])
            self._hom_gids[(p, q)] = np.array(ids, dtype=np.int64)
        self.arrow_names = tuple(names)
        self.arrow_dom = np.array(doms, dtype=np.int64)
        self.arrow_cod = np.array(cods, dtype=np.int64)
        N = self.n_arrows = len(names)
        k = len(self.objects)

        self.LEQ = np.zeros((N, N), dtype=bool)
        self.JOIN = np.full((N, N), -1, dtype=np.int64)
        self.MEET = np.full((N, N), -1, dtype=np.int64)
        self.BOT = np.zeros((k, k), dtype=np.int64)
        self.TOP = np.zeros((k, k), dtype=np.int64)
        for (p, q), L in self.homs.items():
            g = self._hom_gids[(p, q)]
            self.LEQ[np.ix_(g, g)] = L.leq_matrix
            self.JOIN[np.ix_(g, g)] = g[L.join_table]
            self.MEET[np.ix_(g, g)] = g[L.meet_table]
            i, j = self._obj_index[p], self._obj_index[q]
            self.BOT[i, j] = g[L.bottom_index]
            self.TOP[i, j] = g[L.top_index]

        self.COMP = np.full((N, N), -1, dtype=np.int64)
        for (p, q, r), table in comp_tables.items():
            for (b, a), c in table.items():
                self.COMP[self._gid[(q, r, b)], self._gid[(p, q, a)]] = self._gid[(p, r, c)]
        self.ID = np.array([self._gid[(o, o, identity[o])] for o in self.objects], dtype=np.int64)
        if residuals:
            self.LRES, self.RRES = _residual_tables(self)
        else:
            self.LRES = self.RRES = np.full((N, N), -1, dtype=np.int64)
        for arr in (self.LEQ, self.JOIN, self.MEET, self.BOT, self.TOP, self.COMP, self.ID,
                    self.LRES, self.RRES, self.arrow_dom, self.arrow_cod):
            arr.setflags(write=False)

    def __repr__(self):
        return f"Quantaloid(objects={list(self.objects)}, arrows={self.n_arrows})"

    # -- naming ------------------------------------------------------------
    def obj_index(self, o):
        try:
            return self._obj_index[o]
        except KeyError:
            raise ForeignElement(f"{o!r} is not an object of {self!r}") from None

    def arrow(self, p, q, name):
        """The gid of the element ``name`` of ``hom(p, q)``."""
        try:
            return self._gid[(p, q, name)]
        except KeyError:
            raise ForeignElement(f"{name!r} is not an arrow {p!r} -> {q!r}") from None

    def name(self, g):
        return self.arrow_names[g]

    def dom(self, g):
        return self.objects[self.arrow_dom[g]]

    def cod(self, g):
        return self.objects[self.arrow_cod[g]]

    def describe(self, g):
        return f"{self.name(g)}:{self.dom(g)}->{self.cod(g)}"

    def hom(self, p, q):
        """Gids of ``hom(p, q)`` in carrier order."""
        return self._hom_gids[(p, q)]

    def identity(self, q):
        return int(self.ID[self.obj_index(q)])

    def bottom(self, p, q):
        return int(self.BOT[self.obj_index(p), self.obj_index(q)])

    def top(self, p, q):
        return int(self.TOP[self.obj_index(p), self.obj_index(q)])

    # -- arithmetic on gids ------------------------------------------------
    def compose(self, v, u):
        """``v o u`` for ``u: p -> q`` and ``v: q -> r``."""
        c = self.COMP[v, u]
        if c < 0:
            raise TypeMismatch(f"cannot compose {self.describe(v)} after {self.describe(u)}")
        return int(c)

    def leq(self, a, b):
        if self.arrow_dom[a] != self.arrow_dom[b] or self.arrow_cod[a] != self.arrow_cod[b]:
            raise TypeMismatch(f"{self.describe(a)} and {self.describe(b)} are in different homs")
        return bool(self.LEQ[a, b])

    def join(self, gids, p=None, q=None):
        gids = list(gids)
        if not gids:
            if p is None or q is None:
                raise TypeMismatch("the empty join needs an explicit hom (p, q)")
            return self.bottom(p, q)
        acc = gids[0]
        for g in gids[1:]:
            acc = self.JOIN[acc, g]
            if acc < 0:
                raise TypeMismatch("join of arrows from different homs")
        return int(acc)

    def meet(self, gids, p=None, q=None):
        gids = list(gids)
        if not gids:
            if p is None or q is None:
                raise TypeMismatch("the empty meet needs an explicit hom (p, q)")
            return self.top(p, q)
        acc = gids[0]
        for g in gids[1:]:
            acc = self.MEET[acc, g]
            if acc < 0:
                raise TypeMismatch("meet of arrows from different homs")
        return int(acc)

    def lres(self, v, u):
        return lres(self, v, u)

    def rres(self, u, v):
        return rres(self, u, v)

    @property
    def is_integral(self):
        return bool(np.all(self.ID == np.diag(self.TOP)))


def lres(Q, v, u):
    """``v ↙ u``: the largest ``w`` with ``w o u <= v``.

    ``v: p -> r`` and ``u: p -> q``; the result lives in ``hom(q, r)``.
    """
    w = Q.LRES[v, u]
    if w < 0:
        raise TypeMismatch(f"lres needs a common domain: {Q.describe(v)}, {Q.describe(u)}")
    return int(w)


def rres(Q, u, v):
    """``u ↘ v``: the largest ``w`` with ``u o w <= v``.

    ``u: q -> r`` and ``v: p -> r``; the result lives in ``hom(p, q)``.
    """
    w = Q.RRES[u, v]
    if w < 0:
        raise TypeMismatch(f"rres needs a common codomain: {Q.describe(u)}, {Q.describe(v)}")
    return int(w)


def _residual_tables(Q):
    # brute force: join over every w satisfying the defining inequality
    N = Q.n_arrows
    LR = np.full((N, N), -1, dtype=np.int64)
    RR = np.full((N, N), -1, dtype=np.int64)
    for p, q, r in product(Q.objects, repeat=3):
        U, V, W = Q.hom(p, q), Q.hom(p, r), Q.hom(q, r)
        # lres: v in hom(p,r), u in hom(p,q), w in hom(q,r), w o u <= v
        ok = Q.LEQ[Q.COMP[W[:, None, None], U[None, :, None]], V[None, None, :]]
        acc = np.full((len(U), len(V)), Q.BOT[Q.obj_index(q), Q.obj_index(r)], dtype=np.int64)
        for k, w in enumerate(W):
            acc = np.where(ok[k], Q.JOIN[acc, w], acc)
        LR[np.ix_(V, U)] = acc.T
        # rres: u in hom(q,r), v in hom(p,r), w in hom(p,q), u o w <= v
        U2, W2 = Q.hom(q, r), Q.hom(p, q)
        ok = Q.LEQ[Q.COMP[U2[None, :, None], W2[:, None, None]], V[None, None, :]]
        acc = np.full((len(U2), len(V)), Q.BOT[Q.obj_index(p), Q.obj_index(q)], dtype=np.int64)
        for k, w in enumerate(W2):
            acc = np.where(ok[k], Q.JOIN[acc, w], acc)
        RR[np.ix_(U2, V)] = acc
    return LR, RR


def _materialize(compose, homs, objects):
    """Turn the composition argument into {(p,q,r): {(b, a): c}} and check totality."""
    tables, violations = {}, []
    for p, q, r in product(objects, repeat=3):
        Hpq, Hqr, Hpr = homs[(p, q)], homs[(q, r)], homs[(p, r)]
        if callable(compose):
            raw = {(b, a): compose(p, q, r, b, a) for b in Hqr for a in Hpq}
        else:
            raw = compose.get((p, q, r))
            if raw is None:
                violations.append(Violation("PartialTable", (f"{p}|{q}|{r}",)))
                continue
            raw = dict(raw)
        table = {}
        for b, a in product(Hqr.carrier, Hpq.carrier):
            if (b, a) not in raw:
                violations.append(Violation("PartialTable", (f"{p}|{q}|{r}", b, a)))
                continue
            c = raw[(b, a)]
            if c not in Hpr:
                violations.append(Violation("ForeignElement", (f"{p}|{q}|{r}", b, a, c)))
                continue
            table[(b, a)] = c
        extra = set(raw) - set(table) - {(b, a) for b in Hqr for a in Hpq}
        if extra:
            violations.append(Violation("ForeignElement", (f"{p}|{q}|{r}",) + tuple(sorted(extra))[0]))
        tables[(p, q, r)] = table
    return tables, violations


def _join_continuity(Q, cap):
    """Check composition preserves joins in each variable; returns (violations, report)."""
    violations, report = [], {}
    for p, q in product(Q.objects, repeat=2):
        elems = Q.hom(p, q)
        n = len(elems)
        exhaustive = n <= cap
        report[f"{p}|{q}"] = "all-subsets" if exhaustive else "pairs+empty"
        if exhaustive:
            masks = range(1 << n)
        else:
            masks = [0] + [1 << i for i in range(n)] + [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)]
        # right variable: v o (join S) for v with dom q; left variable: (join S) o u for u with cod p
        vs = np.flatnonzero(Q.arrow_dom == Q.obj_index(q))
        us = np.flatnonzero(Q.arrow_cod == Q.obj_index(p))
        joins, right, left = {}, {}, {}
        joins[0] = Q.BOT[Q.obj_index(p), Q.obj_index(q)]
        right[0] = Q.BOT[Q.obj_index(p), Q.arrow_cod[vs]]
        left[0] = Q.BOT[Q.arrow_dom[us], Q.obj_index(q)]
        for m in sorted(masks, key=lambda m: bin(m).count("1")):
            if m == 0:
                continue
            bit = (m & -m).bit_length() - 1
            prev = m & (m - 1)
            if prev not in joins:
                # pairs mode: build the one-element prefix on demand
                joins[prev] = elems[(prev & -prev).bit_length() - 1]
                right[prev] = Q.COMP[vs, joins[prev]]
                left[prev] = Q.COMP[joins[prev], us]
            e = elems[bit]
            joins[m] = Q.JOIN[joins[prev], e]
            right[m] = Q.JOIN[right[prev], Q.COMP[vs, e]]
            left[m] = Q.JOIN[left[prev], Q.COMP[e, us]]
        for m in masks:
            bad = np.flatnonzero(Q.COMP[vs, joins[m]] != right[m])
            if bad.size:
                subset = [Q.name(elems[i]) for i in range(n) if m >> i & 1]
                violations.append(Violation("NotJoinContinuous", (Q.describe(vs[bad[0]]), f"{p}|{q}", *subset)))
                break
            bad = np.flatnonzero(Q.COMP[joins[m], us] != left[m])
            if bad.size:
                subset = [Q.name(elems[i]) for i in range(n) if m >> i & 1]
                violations.append(Violation("NotJoinContinuous", (f"{p}|{q}", *subset, Q.describe(us[bad[0]]))))
                break
    return violations, report


def validate_quantaloid(objects, homs, compose, identity, subset_cap=None):
    """Validate a candidate quantaloid and return it.

    ``homs`` maps ``(p, q)`` to a :class:`FiniteLattice` (or to a
    ``(carrier, leq)`` pair); ``compose`` maps ``(p, q, r)`` to a table
    ``{(b, a): result}`` with ``a`` in ``hom(p, q)`` and ``b`` in
    ``hom(q, r)``, or is a callable ``compose(p, q, r, b, a)``;
    ``identity`` maps each object to an element of ``hom(q, q)``.
    """
    objects = list(objects)
    if not objects:
        raise ValidationError([Violation("NoObjects")], "quantaloid")
    cap = config.JOIN_SUBSET_CHECK_MAX if subset_cap is None else subset_cap
    violations = []
    lattices = {}
    for p, q in product(objects, repeat=2):
        L = homs.get((p, q))
        if L is None:
            violations.append(Violation("MissingHom", (f"{p}|{q}",)))
            continue
        if not isinstance(L, FiniteLattice):
            try:
                L = validate_lattice(*L)
            except ValidationError as err:
                violations.extend(Violation(v.kind, (f"{p}|{q}",) + v.witness) for v in err.violations)
                continue
        lattices[(p, q)] = L
    if violations:
        raise ValidationError(violations, "quantaloid")
    for q in objects:
        if q not in identity:
            violations.append(Violation("MissingIdentity", (q,)))
        elif identity[q] not in lattices[(q, q)]:
            violations.append(Violation("ForeignElement", (q, identity[q])))
    tables, more = _materialize(compose, lattices, objects)
    violations.extend(more)
    if violations:
        raise ValidationError(violations, "quantaloid")

    # residuals are only meaningful once the laws hold
    Q = Quantaloid(objects, lattices, tables, identity, {}, residuals=False)

    C = Q.COMP
    N = Q.n_arrows
    # associativity: (w o v) o u == w o (v o u)
    for u in range(N):
        vs = np.flatnonzero(C[:, u] >= 0)
        if not vs.size:
            continue
        for v, c in zip(vs, C[vs, u]):
            ws = np.flatnonzero(Q.arrow_dom == Q.arrow_cod[v])
            lhs = C[C[ws, v], u]
            rhs = C[ws, c]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                violations.append(Violation("NotAssociative", (Q.describe(ws[bad[0]]), Q.describe(v), Q.describe(u))))
                break
        if violations:
            break
    # unit laws
    for g in range(N):
        if C[Q.ID[Q.arrow_cod[g]], g] != g:
            violations.append(Violation("UnitLawViolated", (f"1_{Q.cod(g)}", Q.describe(g))))
            break
        if C[g, Q.ID[Q.arrow_dom[g]]] != g:
            violations.append(Violation("UnitLawViolated", (Q.describe(g), f"1_{Q.dom(g)}")))
            break
    if violations:
        raise ValidationError(violations, "quantaloid")
    more, report = _join_continuity(Q, cap)
    if more:
        raise ValidationError(more, "quantaloid")
    return Quantaloid(objects, lattices, tables, identity, {"join_continuity": report, "subset_cap": cap})


class Quantale:
    """A finite unital quantale: lattice, multiplication table and unit.

    The multiplication ``a & b`` becomes composition ``a o b`` of the
    one-object quantaloid :attr:`quantaloid`, whose object is ``"*"``.
    """

    OBJECT = "*"

    def __init__(self, lattice, tensor, unit, quantaloid):
        self.lattice = lattice
        self._tensor = dict(tensor)
        self.unit = unit
        self.quantaloid = quantaloid

    def __repr__(self):
        return f"Quantale({list(self.lattice.carrier)}, unit={self.unit!r})"

    def tensor(self, a, b):
        return self._tensor[(a, b)]

    def _g(self, a):
        return self.quantaloid.arrow(self.OBJECT, self.OBJECT, a)

    def under(self, a, b):
        """``a \\ b``: the largest ``w`` with ``a & w <= b``."""
        Q = self.quantaloid
        return Q.name(rres(Q, self._g(a), self._g(b)))

    def over(self, b, a):
        """``b / a``: the largest ``w`` with ``w & a <= b``."""
        Q = self.quantaloid
        return Q.name(lres(Q, self._g(b), self._g(a)))


def validate_quantale(lattice, tensor, unit):
    """Validate ``(lattice, tensor, unit)`` through its one-object embedding.

    ``tensor`` is a mapping ``{(a, b): a & b}`` or a callable.
    """
    if not isinstance(lattice, FiniteLattice):
        lattice = validate_lattice(*lattice)
    if callable(tensor):
        table = {(a, b): tensor(a, b) for a in lattice for b in lattice}
    else:
        table = dict(tensor)
    o = Quantale.OBJECT
    Q = validate_quantaloid([o], {(o, o): lattice}, {(o, o, o): table}, {o: unit})
    return Quantale(lattice, table, unit, Q)


def check_divisible(q):
    """Return ``(True, None)`` if ``a&(a\\b) = a∧b = (b/a)&a`` for all pairs,
    else ``(False, (a, b))`` for the first violating pair."""
    L = q.lattice
    for a, b in product(L.carrier, repeat=2):
        m = L.meet([a, b])
        if q.tensor(a, q.under(a, b)) != m or q.tensor(q.over(b, a), a) != m:
            return False, (a, b)
    return True, None


def b_q(q):
    """The quantaloid ``B_Q`` of a divisible quantale.

    Objects are the elements of ``q``; ``hom(x, y)`` is the down-set of
    ``x ∧ y``; ``b o a = b & (y \\ a)``; identities ``1_x = x``.
    """
    ok, witness = check_divisible(q)
    if not ok:
        raise NotDivisible(f"quantale is not divisible, witness {witness}")
    L = q.lattice
    objs = list(L.carrier)
    homs = {}
    for x, y in product(objs, repeat=2):
        top = L.meet([x, y])
        carrier = [a for a in objs if L.leq(a, top)]
        homs[(x, y)] = validate_lattice(carrier, lambda a, b: L.leq(a, b))

    def compose(x, y, z, b, a):
        return q.tensor(b, q.under(y, a))

    return validate_quantaloid(objs, homs, compose, {x: x for x in objs})
