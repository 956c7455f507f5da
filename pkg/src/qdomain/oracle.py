"""Classical domain theory on finite posets, written without any enriched machinery.

Elements are positions ``0..n-1``; subsets are int bitmasks.  Nothing here
imports the distributor code, so agreement with the enriched engine is
genuine evidence rather than a tautology.
"""

from itertools import permutations

from .errors import MismatchFound, PreconditionFailed


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class PosetOracle:
    """Brute-force ideals, way-below, continuity and algebraicity of a finite poset."""

    def __init__(self, carrier, pairs):
        self.carrier = list(carrier)
        n = self.n = len(self.carrier)
        idx = {e: i for i, e in enumerate(self.carrier)}
        le = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            le[idx[a]][idx[b]] = True
        for i in range(n):
            for j in range(n):
                if i != j and le[i][j] and le[j][i]:
                    raise PreconditionFailed(f"not antisymmetric at {self.carrier[i]!r}, {self.carrier[j]!r}")
                for k in range(n):
                    if le[i][j] and le[j][k] and not le[i][k]:
                        raise PreconditionFailed("relation is not transitive")
        self.le = le
        self.down = [sum(1 << i for i in range(n) if le[i][j]) for j in range(n)]
        self.up = [sum(1 << j for j in range(n) if le[i][j]) for i in range(n)]
        self.ideals = [m for m in range(1, 1 << n) if self._is_lower(m) and self._is_directed(m)]
        self.sups = {m: self._lub(m) for m in self.ideals}
        self.way_below = self._way_below()

    @classmethod
    def of(cls, poset):
        if hasattr(poset, "carrier") and hasattr(poset, "pairs"):
            return cls(poset.carrier, poset.pairs())
        carrier, pairs = poset
        return cls(carrier, pairs)

    def _is_lower(self, m):
        return all(self.down[i] & ~m == 0 for i in _bits(m))

    def _is_directed(self, m):
        elems = list(_bits(m))
        if not elems:
            return False
        return all(self.up[a] & self.up[b] & m for a in elems for b in elems)

    def _lub(self, m):
        ubs = [u for u in range(self.n) if all(self.le[i][u] for i in _bits(m))]
        least = [u for u in ubs if all(self.le[u][v] for v in ubs)]
        return least[0] if least else None

    def _way_below(self):
        # a << b iff every ideal whose sup lies above b contains a
        n = self.n
        wb = [[True] * n for _ in range(n)]
        for m in self.ideals:
            s = self.sups[m]
            if s is None:
                continue
            for b in range(n):
                if self.le[b][s]:
                    for a in range(n):
                        if not m >> a & 1:
                            wb[a][b] = False
        return wb

    def ideal_sets(self):
        """Ideals as frozensets of element ids."""
        return {frozenset(self.carrier[i] for i in _bits(m)) for m in self.ideals}

    def way_below_pairs(self):
        return {(self.carrier[a], self.carrier[b])
                for a in range(self.n) for b in range(self.n) if self.way_below[a][b]}

    def _approximated(self, mask, b):
        return mask in self.sups and self.sups[mask] == b

    @property
    def continuous(self):
        for b in range(self.n):
            dd = sum(1 << a for a in range(self.n) if self.way_below[a][b])
            if not self._approximated(dd, b):
                return False
        return True

    @property
    def compacts(self):
        return [self.carrier[a] for a in range(self.n) if self.way_below[a][a]]

    @property
    def algebraic(self):
        comp = [a for a in range(self.n) if self.way_below[a][a]]
        for b in range(self.n):
            below = sum(1 << c for c in comp if self.le[c][b])
            if not self._approximated(below, b):
                return False
        return True

    def to_json(self):
        return {"elements": self.carrier,
                "ideals": sorted(sorted(s) for s in self.ideal_sets()),
                "wayBelow": sorted(list(p) for p in self.way_below_pairs()),
                "continuous": self.continuous, "algebraic": self.algebraic,
                "compacts": self.compacts}


def poset_oracle(poset):
    return PosetOracle.of(poset)


# -- posets up to isomorphism --------------------------------------------

def _canonical(n, rel):
    """Lexicographically least strict-order bit string over all relabelings."""
    best = None
    for p in permutations(range(n)):
        key = tuple(sorted((p[a], p[b]) for a, b in rel))
        if best is None or key < best:
            best = key
    return best


def generate_posets(max_n):
    """All posets with ``1..max_n`` elements up to isomorphism, as ``(carrier, pairs)``.

    A poset on ``n`` elements arises from one on ``n-1`` by adding a point
    with a chosen down-set and up-set, so growing the canonical forms level
    by level reaches every isomorphism type.
    """
    out = []
    level = {()}  # canonical strict relations on 0 elements
    for n in range(1, max_n + 1):
        nxt = set()
        for rel in level:
            m = n - 1
            lt = [[False] * m for _ in range(m)]
            for a, b in rel:
                lt[a][b] = True
            lower = [s for s in range(1 << m) if all(not (s >> j & 1) or all(s >> i & 1 for i in range(m) if lt[i][j]) for j in range(m))]
            upper = [s for s in range(1 << m) if all(not (s >> i & 1) or all(s >> j & 1 for j in range(m) if lt[i][j]) for i in range(m))]
            for D in lower:
                for U in upper:
                    if D & U:
                        continue
                    if not all(lt[d][u] for d in _bits(D) for u in _bits(U)):
                        continue
                    new = set(rel) | {(d, m) for d in _bits(D)} | {(m, u) for u in _bits(U)}
                    nxt.add(_canonical(n, new))
        level = nxt
        for rel in sorted(level):
            carrier = [f"p{i}" for i in range(n)]
            out.append((carrier, [(carrier[a], carrier[b]) for a, b in rel]))
    return out


# -- cross-validation against the enriched engine ------------------------

ORACLE_CLASSES = ("inhabited-flat", "inhabited-irreducible", "conical-ideal")


def cross_validate(poset, cls, cap=None):
    """Compare the enriched pipeline over 2 with the classical oracle; raise on any mismatch."""
    from .continuity import check_algebraic, check_continuous, way_below
    from .ideals import phi_category
    from .models import poset_to_2cat

    if cls not in ORACLE_CLASSES:
        raise PreconditionFailed(f"class {cls!r} has no classical counterpart here")
    orc = PosetOracle.of(poset)
    carrier = orc.carrier
    pairs = {(carrier[i], carrier[j]) for i in range(orc.n) for j in range(orc.n) if orc.le[i][j]}
    A = poset_to_2cat((carrier, pairs))
    Q = A.quantaloid
    top = Q.top(Q.objects[0], Q.objects[0])

    enriched_ideals = {frozenset(x for x, v in zip(A.elements, w.values) if v == top)
                       for w in phi_category(cls, A, cap).weights}
    oracle_ideals = orc.ideal_sets()
    if enriched_ideals != oracle_ideals:
        raise MismatchFound(f"ideal sets differ for {cls}",
                            {"enriched": sorted(map(sorted, enriched_ideals)),
                             "oracle": sorted(map(sorted, oracle_ideals))})

    W = way_below(cls, A, cap).matrix
    enriched_wb = {(A.elements[i], A.elements[j]) for i in range(len(A)) for j in range(len(A)) if W[i, j] == top}
    if enriched_wb != orc.way_below_pairs():
        raise MismatchFound(f"way-below differs for {cls}",
                            {"enriched": sorted(enriched_wb), "oracle": sorted(orc.way_below_pairs())})

    cont = check_continuous(cls, A, cap).verdict
    alg = check_algebraic(cls, A, cap).verdict
    if cont != orc.continuous or alg != orc.algebraic:
        raise MismatchFound(f"verdicts differ for {cls}",
                            {"continuous": [cont, orc.continuous], "algebraic": [alg, orc.algebraic]})
    return {"class": cls, "elements": carrier, "ideals": len(oracle_ideals),
            "continuous": cont, "algebraic": alg, "match": True}
