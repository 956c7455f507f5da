"""Brute-force generators shared by several test modules."""

from itertools import product

import numpy as np

from qdomain.category import QDistributor, QFunctor, _functor_violations, is_valid_distributor


def all_distributors(A, B, limit=5000):
    Q = A.quantaloid
    cells = [(i, j) for i in range(len(A)) for j in range(len(B))]
    choices = [Q.hom(A.types[i], B.types[j]) for i, j in cells]
    out = []
    for vals in product(*choices):
        M = np.array(vals, dtype=np.int64).reshape(len(A), len(B))
        phi = QDistributor(A, B, M)
        if is_valid_distributor(phi):
            out.append(phi)
            if len(out) > limit:
                raise RuntimeError("too many distributors for a brute-force test")
    return out


def all_functors(A, B):
    cands = [B.of_type(t) for t in A.types]
    out = []
    for m in product(*cands):
        m = np.array(m, dtype=np.int64)
        if not _functor_violations(A, B, m):
            out.append(QFunctor(A, B, m))
    return out
