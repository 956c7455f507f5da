"""Finite complete lattices given by an explicit carrier and order relation."""

from itertools import product

import numpy as np

from .errors import ForeignElement, ValidationError, Violation


class FiniteLattice:
    """A validated finite lattice with memoized join and meet tables.

    Elements are string ids; the carrier order fixes tie-breaking wherever a
    canonical element has to be chosen. Build instances with
    :func:`validate_lattice`.
    """

    def __init__(self, carrier, leq, join_table, meet_table, bottom, top):
        self.carrier = tuple(carrier)
        self._index = {e: i for i, e in enumerate(self.carrier)}
        self.leq_matrix = leq
        self.join_table = join_table
        self.meet_table = meet_table
        self.bottom_index = bottom
        self.top_index = top
        for arr in (leq, join_table, meet_table):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    def __contains__(self, e):
        return e in self._index

    def __repr__(self):
        return f"FiniteLattice({list(self.carrier)})"

    def index(self, e):
        try:
            return self._index[e]
        except KeyError:
            raise ForeignElement(f"{e!r} is not in lattice {list(self.carrier)}") from None

    @property
    def bottom(self):
        return self.carrier[self.bottom_index]

    @property
    def top(self):
        return self.carrier[self.top_index]

    def leq(self, a, b):
        return bool(self.leq_matrix[self.index(a), self.index(b)])

    def join(self, elements):
        acc = self.bottom_index
        for e in elements:
            acc = self.join_table[acc, self.index(e)]
        return self.carrier[acc]

    def meet(self, elements):
        acc = self.top_index
        for e in elements:
            acc = self.meet_table[acc, self.index(e)]
        return self.carrier[acc]

    def relation(self):
        return [(a, b) for a, b in product(self.carrier, repeat=2) if self.leq(a, b)]


def _least(candidates, leq):
    # element of ``candidates`` below all the others, if any
    for c in candidates:
        if all(leq[c, d] for d in candidates):
            return c
    return None


def _greatest(candidates, leq):
    for c in candidates:
        if all(leq[d, c] for d in candidates):
            return c
    return None


def validate_lattice(carrier, leq):
    """Check that ``leq`` is a lattice order on ``carrier``.

    ``leq`` is either a collection of pairs ``(a, b)`` meaning ``a <= b`` (the
    full relation, reflexive pairs included) or a callable ``leq(a, b)``.
    Raises :class:`ValidationError` listing every violated axiom.
    """
    carrier = list(carrier)
    if not carrier:
        raise ValidationError([Violation("EmptyCarrier")], "lattice")
    if len(set(carrier)) != len(carrier):
        dup = next(e for e in carrier if carrier.count(e) > 1)
        raise ValidationError([Violation("DuplicateElement", (dup,))], "lattice")
    n = len(carrier)
    idx = {e: i for i, e in enumerate(carrier)}
    rel = np.zeros((n, n), dtype=bool)
    if callable(leq):
        for a, b in product(carrier, repeat=2):
            rel[idx[a], idx[b]] = bool(leq(a, b))
    else:
        for pair in leq:
            a, b = pair
            if a not in idx or b not in idx:
                raise ValidationError([Violation("ForeignElement", (a, b))], "lattice")
            rel[idx[a], idx[b]] = True

    violations = []
    for i in range(n):
        if not rel[i, i]:
            violations.append(Violation("NotReflexive", (carrier[i],)))
    for i, j in product(range(n), repeat=2):
        if i < j and rel[i, j] and rel[j, i]:
            violations.append(Violation("NotAntisymmetric", (carrier[i], carrier[j])))
    for i, j, k in product(range(n), repeat=3):
        if rel[i, j] and rel[j, k] and not rel[i, k]:
            violations.append(Violation("NotTransitive", (carrier[i], carrier[j], carrier[k])))
            break
    if violations:
        raise ValidationError(violations, "lattice")

    everything = list(range(n))
    bottom = _least(everything, rel)
    top = _greatest(everything, rel)
    if bottom is None:
        violations.append(Violation("MissingBottom"))
    if top is None:
        violations.append(Violation("MissingTop"))

    join = np.full((n, n), -1, dtype=np.int64)
    meet = np.full((n, n), -1, dtype=np.int64)
    for i, j in product(range(n), repeat=2):
        if j < i:
            join[i, j], meet[i, j] = join[j, i], meet[j, i]
            continue
        ub = [k for k in everything if rel[i, k] and rel[j, k]]
        lb = [k for k in everything if rel[k, i] and rel[k, j]]
        lub, glb = _least(ub, rel), _greatest(lb, rel)
        if lub is None:
            violations.append(Violation("MissingJoin", (carrier[i], carrier[j])))
        else:
            join[i, j] = lub
        if glb is None:
            violations.append(Violation("MissingMeet", (carrier[i], carrier[j])))
        else:
            meet[i, j] = glb
    if violations:
        raise ValidationError(violations, "lattice")
    return FiniteLattice(carrier, rel, join, meet, bottom, top)


def chain(carrier):
    """The lattice in which ``carrier`` is listed from bottom to top."""
    pos = {e: i for i, e in enumerate(carrier)}
    return validate_lattice(carrier, lambda a, b: pos[a] <= pos[b])
