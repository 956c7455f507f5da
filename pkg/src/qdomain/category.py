"""Q-categories, Q-functors and Q-distributors over a finite quantaloid.

Hom values and distributor entries are arrow gids of the ambient
:class:`~qdomain.quantaloid.Quantaloid`; matrices are dense numpy arrays
indexed by element position.
"""

from itertools import product

import numpy as np

from .errors import ForeignElement, TypeMismatch, ValidationError, Violation


class QCategory:
    """A validated Q-category. Build with :func:`validate_category`."""

    def __init__(self, quantaloid, elements, types, hom, name=None):
        Q = self.quantaloid = quantaloid
        self.elements = tuple(elements)
        self.types = tuple(types)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.type_idx = np.array([Q.obj_index(t) for t in self.types], dtype=np.int64)
        self.hom = np.asarray(hom, dtype=np.int64).reshape(len(self.elements), len(self.elements))
        self.hom.setflags(write=False)
        self.type_idx.setflags(write=False)
        self.name = name
        # memo for derived structures (presheaf enumerations, ideal classes, ...)
        self._cache = {}
        self._key = None

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"QCategory({label}{len(self)} elements)"

    def _identity_key(self):
        if self._key is None:
            self._key = (id(self.quantaloid), self.elements, self.types, self.hom.tobytes())
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, QCategory) and self._identity_key() == other._identity_key()

    def __hash__(self):
        return hash(self._identity_key())

    def index(self, e):
        try:
            return self._index[e]
        except KeyError:
            raise ForeignElement(f"{e!r} is not an element of {self!r}") from None

    def type_of(self, e):
        return self.types[self.index(e)]

    def hom_of(self, a, b):
        """Gid of ``A(a, b)`` for element ids ``a`` and ``b``."""
        return int(self.hom[self.index(a), self.index(b)])

    def hom_names(self):
        Q = self.quantaloid
        return {(a, b): Q.name(self.hom[i, j])
                for (i, a), (j, b) in product(enumerate(self.elements), repeat=2)}

    def of_type(self, q):
        """Positions of the elements of type ``q``."""
        return np.flatnonzero(self.type_idx == self.quantaloid.obj_index(q))

    def full_subcategory(self, positions, name=None):
        pos = np.asarray(list(positions), dtype=np.int64)
        return QCategory(self.quantaloid, [self.elements[i] for i in pos],
                         [self.types[i] for i in pos], self.hom[np.ix_(pos, pos)], name)


def point(Q, q):
    """The discrete one-element category ``{q}`` with hom ``1_q``."""
    return QCategory(Q, [q], [q], [[Q.identity(q)]], name=f"{{{q}}}")


def validate_category(Q, elements, hom, name=None):
    """Validate a candidate Q-category.

    ``elements`` is a list of ``(id, type)`` pairs. ``hom`` maps ``(a, b)`` to
    the name of an arrow in ``hom(type(a), type(b))``, or is a callable
    ``hom(a, b)``, or an integer matrix of gids.
    """
    elements = list(elements)
    ids = [e for e, _ in elements]
    types = [t for _, t in elements]
    violations = []
    if len(set(ids)) != len(ids):
        violations.append(Violation("DuplicateElement", (next(e for e in ids if ids.count(e) > 1),)))
    for e, t in elements:
        if t not in Q.objects:
            violations.append(Violation("TypeMismatch", (e, t)))
    if violations:
        raise ValidationError(violations, "category")
    n = len(ids)
    H = np.full((n, n), -1, dtype=np.int64)
    if isinstance(hom, np.ndarray):
        H[:, :] = hom
        for i, j in product(range(n), repeat=2):
            g = H[i, j]
            if not (0 <= g < Q.n_arrows) or Q.dom(g) != types[i] or Q.cod(g) != types[j]:
                violations.append(Violation("TypeMismatch", (ids[i], ids[j])))
    else:
        for (i, a), (j, b) in product(enumerate(ids), repeat=2):
            try:
                name_ = hom(a, b) if callable(hom) else hom[(a, b)]
            except KeyError:
                violations.append(Violation("PartialTable", (a, b)))
                continue
            try:
                H[i, j] = Q.arrow(types[i], types[j], name_)
            except ForeignElement:
                violations.append(Violation("TypeMismatch", (a, b, name_)))
    if violations:
        raise ValidationError(violations, "category")
    A = QCategory(Q, ids, types, H, name)
    violations.extend(_category_violations(A))
    if violations:
        raise ValidationError(violations, "category")
    return A


def _category_violations(A):
    Q, H = A.quantaloid, A.hom
    out = []
    if len(A) == 0:
        return out
    # C[a, a', a''] = A(a', a'') o A(a, a')
    C = Q.COMP[H[None, :, :], H[:, :, None]]
    ok = Q.LEQ[C, H[:, None, :]]
    bad = np.argwhere(~ok)
    if bad.size:
        a, a1, a2 = bad[0]
        out.append(Violation("CompositionInequalityViolated", (A.elements[a], A.elements[a1], A.elements[a2])))
    diag = np.diag(H)
    for i in np.flatnonzero(~Q.LEQ[Q.ID[A.type_idx], diag]):
        out.append(Violation("UnitInequalityViolated", (A.elements[i],)))
    return out


def is_valid_category(A):
    return not _category_violations(A)


class QFunctor:
    """A Q-functor; ``mapping[i]`` is the position in ``cod`` of ``F(dom.elements[i])``."""

    def __init__(self, dom, cod, mapping, name=None):
        self.dom = dom
        self.cod = cod
        self.mapping = np.asarray(mapping, dtype=np.int64)
        self.mapping.setflags(write=False)
        self.name = name

    def __repr__(self):
        return f"QFunctor({self.dom!r} -> {self.cod!r})"

    def __call__(self, e):
        return self.cod.elements[self.mapping[self.dom.index(e)]]

    def __eq__(self, other):
        return (isinstance(other, QFunctor) and self.dom == other.dom and self.cod == other.cod
                and np.array_equal(self.mapping, other.mapping))

    def __hash__(self):
        return hash((self.dom, self.cod, self.mapping.tobytes()))

    def as_dict(self):
        return {a: self.cod.elements[j] for a, j in zip(self.dom.elements, self.mapping)}


def _functor_violations(dom, cod, mapping):
    Q = dom.quantaloid
    out = []
    for i, j in enumerate(mapping):
        if dom.type_idx[i] != cod.type_idx[j]:
            out.append(Violation("TypeMismatch", (dom.elements[i], cod.elements[j])))
    if out:
        return out
    ok = Q.LEQ[dom.hom, cod.hom[np.ix_(mapping, mapping)]]
    for a1, a in np.argwhere(~ok)[:1]:
        out.append(Violation("HomInequalityViolated", (dom.elements[a1], dom.elements[a])))
    return out


def validate_functor(dom, cod, mapping, name=None):
    """Validate a type-preserving map given as ``{a: F(a)}`` by element ids."""
    if dom.quantaloid is not cod.quantaloid:
        raise ValidationError([Violation("TypeMismatch", ("different quantaloids",))], "functor")
    if isinstance(mapping, np.ndarray):
        m = mapping
    else:
        missing = [a for a in dom.elements if a not in mapping]
        if missing:
            raise ValidationError([Violation("PartialTable", (missing[0],))], "functor")
        try:
            m = np.array([cod.index(mapping[a]) for a in dom.elements], dtype=np.int64)
        except ForeignElement as err:
            raise ValidationError([Violation("ForeignElement", (str(err),))], "functor") from None
    bad = _functor_violations(dom, cod, m)
    if bad:
        raise ValidationError(bad, "functor")
    return QFunctor(dom, cod, m, name)


def identity_functor(A):
    return QFunctor(A, A, np.arange(len(A)))


def compose_functors(G, F):
    """``G o F``."""
    if F.cod != G.dom:
        raise TypeMismatch("functors are not composable")
    return QFunctor(F.dom, G.cod, G.mapping[F.mapping])


def is_fully_faithful(F):
    return bool(np.array_equal(F.dom.hom, F.cod.hom[np.ix_(F.mapping, F.mapping)]))


class QDistributor:
    """A Q-distributor ``dom ⇸ cod``; ``matrix[x, y]`` is a gid in ``hom(tx, ty)``."""

    def __init__(self, dom, cod, matrix):
        self.dom = dom
        self.cod = cod
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(len(dom), len(cod))
        self.matrix.setflags(write=False)

    def __repr__(self):
        return f"QDistributor({self.dom!r} ⇸ {self.cod!r})"

    def __eq__(self, other):
        return (isinstance(other, QDistributor) and self.dom == other.dom and self.cod == other.cod
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def __le__(self, other):
        return dist_leq(self, other)

    def value(self, x, y):
        return int(self.matrix[self.dom.index(x), self.cod.index(y)])

    def column(self, j):
        return self.matrix[:, j]

    def names(self):
        Q = self.dom.quantaloid
        return {(x, y): Q.name(self.matrix[i, j])
                for (i, x), (j, y) in product(enumerate(self.dom.elements), enumerate(self.cod.elements))}


def _distributor_violations(phi):
    A, B, M = phi.dom, phi.cod, phi.matrix
    Q = A.quantaloid
    out = []
    if len(A) == 0 or len(B) == 0:
        return out
    # one-sided conditions are equivalent to the bimodule inequality given unit inequalities
    left = Q.COMP[B.hom[None, :, :], M[:, :, None]]      # [x, y', y] = B(y',y) o phi(x,y')
    ok = Q.LEQ[left, M[:, None, :]]
    for x, y1, y in np.argwhere(~ok)[:1]:
        out.append(Violation("BimoduleInequalityViolated", (A.elements[x], A.elements[x], B.elements[y1], B.elements[y])))
    right = Q.COMP[M[None, :, :], A.hom[:, :, None]]     # [x, x', y] = phi(x',y) o A(x,x')
    ok = Q.LEQ[right, M[:, None, :]]
    for x, x1, y in np.argwhere(~ok)[:1]:
        out.append(Violation("BimoduleInequalityViolated", (A.elements[x], A.elements[x1], B.elements[y], B.elements[y])))
    return out


def validate_distributor(dom, cod, matrix):
    """Validate a distributor given as ``{(x, y): arrow name}``, a callable, or a gid matrix."""
    Q = dom.quantaloid
    if cod.quantaloid is not Q:
        raise ValidationError([Violation("TypeMismatch", ("different quantaloids",))], "distributor")
    n, m = len(dom), len(cod)
    M = np.full((n, m), -1, dtype=np.int64)
    violations = []
    for (i, x), (j, y) in product(enumerate(dom.elements), enumerate(cod.elements)):
        if isinstance(matrix, np.ndarray):
            g = matrix[i, j]
            if not (0 <= g < Q.n_arrows) or Q.arrow_dom[g] != dom.type_idx[i] or Q.arrow_cod[g] != cod.type_idx[j]:
                violations.append(Violation("TypeMismatch", (x, y)))
            M[i, j] = g
            continue
        try:
            name_ = matrix(x, y) if callable(matrix) else matrix[(x, y)]
        except KeyError:
            violations.append(Violation("PartialTable", (x, y)))
            continue
        try:
            M[i, j] = Q.arrow(dom.types[i], cod.types[j], name_)
        except ForeignElement:
            violations.append(Violation("TypeMismatch", (x, y, name_)))
    if violations:
        raise ValidationError(violations, "distributor")
    phi = QDistributor(dom, cod, M)
    bad = _distributor_violations(phi)
    if bad:
        raise ValidationError(bad, "distributor")
    return phi


def is_valid_distributor(phi):
    return not _distributor_violations(phi)


def identity_distributor(A):
    return QDistributor(A, A, A.hom)


def bottom_distributor(A, B):
    Q = A.quantaloid
    return QDistributor(A, B, Q.BOT[A.type_idx[:, None], B.type_idx[None, :]])


def dist_leq(phi, psi):
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise TypeMismatch("distributors are not parallel")
    return bool(np.all(phi.dom.quantaloid.LEQ[phi.matrix, psi.matrix]))


def dist_join(phi, psi):
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise TypeMismatch("distributors are not parallel")
    return QDistributor(phi.dom, phi.cod, phi.dom.quantaloid.JOIN[phi.matrix, psi.matrix])


def compose_matrices(Q, left, right, init):
    """``out[x, z] = init[x, z] ∨ ⋁_y right[y, z] o left[x, y]``."""
    acc = np.array(init, dtype=np.int64, copy=True)
    for y in range(left.shape[1]):
        acc = Q.JOIN[acc, Q.COMP[right[y][None, :], left[:, y][:, None]]]
    return acc


def dist_compose(psi, phi):
    """``psi o phi`` for ``phi: A ⇸ B`` and ``psi: B ⇸ C``."""
    if phi.cod != psi.dom:
        raise TypeMismatch("distributors are not composable")
    A, C = phi.dom, psi.cod
    Q = A.quantaloid
    init = Q.BOT[A.type_idx[:, None], C.type_idx[None, :]]
    return QDistributor(A, C, compose_matrices(Q, phi.matrix, psi.matrix, init))


def dist_rres(phi, psi):
    """``phi ↘ psi: C ⇸ A`` for ``phi: A ⇸ B`` and ``psi: C ⇸ B``."""
    if phi.cod != psi.cod:
        raise TypeMismatch("dist_rres needs a common codomain")
    A, C = phi.dom, psi.dom
    Q = A.quantaloid
    acc = Q.TOP[C.type_idx[:, None], A.type_idx[None, :]].copy()
    for b in range(len(phi.cod)):
        acc = Q.MEET[acc, Q.RRES[phi.matrix[:, b][None, :], psi.matrix[:, b][:, None]]]
    return QDistributor(C, A, acc)


def dist_lres(phi, gamma):
    """``phi ↙ gamma: C ⇸ B`` for ``phi: A ⇸ B`` and ``gamma: A ⇸ C``."""
    if phi.dom != gamma.dom:
        raise TypeMismatch("dist_lres needs a common domain")
    B, C = phi.cod, gamma.cod
    Q = B.quantaloid
    acc = Q.TOP[C.type_idx[:, None], B.type_idx[None, :]].copy()
    for a in range(len(phi.dom)):
        acc = Q.MEET[acc, Q.LRES[phi.matrix[a][None, :], gamma.matrix[a][:, None]]]
    return QDistributor(C, B, acc)


def graph(F):
    """``F_♮: A ⇸ B`` with ``F_♮(x, y) = B(Fx, y)``."""
    return QDistributor(F.dom, F.cod, F.cod.hom[F.mapping, :])


def cograph(F):
    """``F^♮: B ⇸ A`` with ``F^♮(y, x) = B(y, Fx)``."""
    return QDistributor(F.cod, F.dom, F.cod.hom[:, F.mapping])


def check_adjoint(F, G):
    """Is ``F ⊣ G``, i.e. ``B(Fx, y) = A(x, Gy)`` for all ``x, y``?

    Returns ``(verdict, witness)`` with the first failing ``(x, y)`` pair.
    """
    A, B = F.dom, F.cod
    if G.dom != B or G.cod != A:
        raise TypeMismatch("functors do not form a candidate adjoint pair")
    lhs = B.hom[F.mapping, :]
    rhs = A.hom[:, G.mapping]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        x, y = bad[0]
        return False, (A.elements[x], B.elements[y])
    return True, None


class Preorder:
    """A finite preorder given by a boolean ``leq`` matrix over ``carrier``."""

    def __init__(self, carrier, leq):
        self.carrier = tuple(carrier)
        self.leq_matrix = np.asarray(leq, dtype=bool)

    def leq(self, a, b):
        return bool(self.leq_matrix[self.carrier.index(a), self.carrier.index(b)])

    def pairs(self):
        return {(self.carrier[i], self.carrier[j]) for i, j in np.argwhere(self.leq_matrix)}

    def __eq__(self, other):
        return isinstance(other, Preorder) and self.carrier == other.carrier and np.array_equal(self.leq_matrix, other.leq_matrix)

    def __repr__(self):
        return f"Preorder({sorted(self.pairs())})"


def underlying_leq(A):
    Q = A.quantaloid
    same = A.type_idx[:, None] == A.type_idx[None, :]
    ident = Q.ID[A.type_idx][:, None]
    # LEQ across different homs is False, so only same-type pairs can hold
    return same & Q.LEQ[np.broadcast_to(ident, A.hom.shape), A.hom]


def underlying_preorder(A):
    """``x <= y`` iff same type and ``1 <= A(x, y)``."""
    return Preorder(A.elements, underlying_leq(A))


def iso_classes(A):
    """Partition of the element positions into isomorphism classes, in carrier order."""
    leq = underlying_leq(A)
    iso = leq & leq.T
    seen, classes = set(), []
    for i in range(len(A)):
        if i in seen:
            continue
        cls = [int(j) for j in np.flatnonzero(iso[i])]
        seen.update(cls)
        classes.append(cls)
    return classes


def is_skeletal(A):
    return all(len(c) == 1 for c in iso_classes(A))


def isomorphic(A, i, j):
    leq = underlying_leq(A)
    return bool(leq[i, j] and leq[j, i])
