"""Randomised laws. Hypothesis draws posets and presheaf pairs; the checks are exact."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qdomain.category import dist_compose, dist_leq
from qdomain.continuity import check_continuous, way_below
from qdomain.models import CATALOG, poset_to_2cat, quantaloid_of
from qdomain.oracle import PosetOracle, cross_validate
from qdomain.presheaf import join_weights, presheaf_category, presheaf_hom
from qdomain.quantaloid import lres, rres

from helpers import all_distributors

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def posets(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    # a random strict order: orient edges along a random linear extension, then close
    perm = draw(st.permutations(range(n)))
    lt = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                lt[perm[i]][perm[j]] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                lt[i][j] = lt[i][j] or (lt[i][k] and lt[k][j])
    carrier = [f"e{i}" for i in range(n)]
    return carrier, [(carrier[i], carrier[j]) for i in range(n) for j in range(n) if lt[i][j]]


@SETTINGS
@given(posets(), st.sampled_from(["inhabited-flat", "inhabited-irreducible", "conical-ideal"]))
def test_random_posets_match_oracle(poset, cls):
    assert cross_validate(poset, cls)["match"]


@SETTINGS
@given(posets())
def test_finite_posets_are_continuous(poset):
    A = poset_to_2cat(poset)
    assert check_continuous("inhabited-flat", A).verdict
    o = PosetOracle(*poset)
    assert o.continuous and o.algebraic


QUANTALOIDS = ["fix-2", "fix-g3", "fix-luk3", "fix-pwr2", "fix-drastic4", "fix-bg3", "fix-bpwr2"]


@SETTINGS
@given(st.sampled_from(QUANTALOIDS), st.data())
def test_residual_laws(name, data):
    Q = quantaloid_of(CATALOG[name])
    p, q, r = (data.draw(st.sampled_from(Q.objects)) for _ in range(3))
    u = data.draw(st.sampled_from(Q.hom(p, q)))
    v = data.draw(st.sampled_from(Q.hom(p, r)))
    w = data.draw(st.sampled_from(Q.hom(q, r)))
    assert Q.LEQ[Q.COMP[w, u], v] == Q.LEQ[w, lres(Q, v, u)]
    # counits: (v↙u)∘u <= v and w∘(w↘(w∘u)) <= w∘u
    assert Q.LEQ[Q.COMP[lres(Q, v, u), u], v]
    assert Q.LEQ[Q.COMP[w, rres(Q, w, Q.COMP[w, u])], Q.COMP[w, u]]


CATS = ["fix-v", "fix-diamond", "fix-g3-chain2", "fix-bg3-pair", "fix-qa-bg3-h", "fix-w5"]


@SETTINGS
@given(st.sampled_from(CATS), st.data())
def test_presheaf_hom_laws(name, data):
    A = CATALOG[name]
    ws = presheaf_category(A).weights
    mu = data.draw(st.sampled_from(ws))
    same = [w for w in ws if w.typ == mu.typ]
    nu = data.draw(st.sampled_from(same))
    rho = data.draw(st.sampled_from(same))
    Q = A.quantaloid
    # PA(μ, ν) ∘ μ(x) <= ν(x) for every x
    h = presheaf_hom(mu, nu)
    assert all(Q.LEQ[Q.COMP[h, m], n] for m, n in zip(mu.values, nu.values))
    # monotone in the second argument and bounded below by the join rule
    j = join_weights(nu, rho)
    assert Q.LEQ[h, presheaf_hom(mu, j)]
    assert Q.LEQ[Q.JOIN[presheaf_hom(mu, nu), presheaf_hom(mu, rho)], presheaf_hom(mu, j)]
    # self-hom contains the identity
    assert Q.LEQ[Q.ID[Q.obj_index(mu.typ)], presheaf_hom(mu, mu)]


@SETTINGS
@given(st.sampled_from(["fix-v", "fix-antichain2", "fix-bg3-pair"]), st.data())
def test_composition_monotone(name, data):
    A = CATALOG[name]
    ds = all_distributors(A, A)
    a, b, c = (data.draw(st.sampled_from(ds)) for _ in range(3))
    if dist_leq(a, b):
        assert dist_leq(dist_compose(c, a), dist_compose(c, b))
        assert dist_leq(dist_compose(a, c), dist_compose(b, c))


@SETTINGS
@given(posets(max_n=4))
def test_way_below_is_order_on_finite_posets(poset):
    A = poset_to_2cat(poset)
    W = way_below("inhabited-flat", A).matrix
    assert np.array_equal(W, A.hom)
