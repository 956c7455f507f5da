import numpy as np
import pytest

from qdomain.category import (QDistributor, check_adjoint, cograph, compose_functors, dist_compose,
                              dist_leq, dist_lres, dist_rres, graph, identity_distributor,
                              identity_functor, is_fully_faithful, is_skeletal, iso_classes,
                              underlying_preorder, validate_category, validate_distributor,
                              validate_functor)
from qdomain.errors import TypeMismatch, ValidationError
from qdomain.models import CATALOG, poset_to_2cat

from helpers import all_distributors, all_functors

SMALL = ["fix-v", "fix-antichain2", "fix-point", "fix-bg3-pair", "fix-g3-chain2", "fix-qa-2"]


class TestValidation:
    def test_fix_v(self, two):
        A = validate_category(two, [(e, "*") for e in "xyz"],
                              lambda a, b: "1" if a == b or b == "z" else "0")
        assert A.hom_names()[("x", "z")] == "1"

    def test_composition_violation(self, two):
        # x <= y <= z without x <= z
        rel = {("x", "y"), ("y", "z")}
        with pytest.raises(ValidationError) as err:
            validate_category(two, [(e, "*") for e in "xyz"],
                              lambda a, b: "1" if a == b or (a, b) in rel else "0")
        assert err.value.violations[0].kind == "CompositionInequalityViolated"
        assert err.value.violations[0].witness == ("x", "y", "z")

    def test_unit_violation(self, two):
        with pytest.raises(ValidationError) as err:
            validate_category(two, [("a", "*")], {("a", "a"): "0"})
        assert err.value.kinds == {"UnitInequalityViolated"}

    def test_type_mismatch(self, two):
        with pytest.raises(ValidationError) as err:
            validate_category(two, [("a", "nowhere")], {})
        assert "TypeMismatch" in err.value.kinds

    def test_partial_table(self, two):
        with pytest.raises(ValidationError) as err:
            validate_category(two, [("a", "*"), ("b", "*")], {("a", "a"): "1"})
        assert "PartialTable" in err.value.kinds

    def test_identity_functor_and_distributor(self, V):
        F = validate_functor(V, V, {e: e for e in V.elements})
        assert F == identity_functor(V)
        phi = validate_distributor(V, V, V.hom_names())
        assert phi == identity_distributor(V)

    def test_hom_inequality(self, V):
        with pytest.raises(ValidationError) as err:
            validate_functor(V, V, {"x": "z", "y": "y", "z": "x"})
        assert err.value.kinds == {"HomInequalityViolated"}

    def test_bimodule_violation(self, V):
        # a relation that is not down-closed in its first argument
        vals = {(a, b): "0" for a in V.elements for b in V.elements}
        vals[("z", "z")] = "1"
        with pytest.raises(ValidationError) as err:
            validate_distributor(V, V, vals)
        assert err.value.kinds == {"BimoduleInequalityViolated"}


class TestPreorder:
    def test_v(self, V):
        P = underlying_preorder(V)
        assert P.pairs() == {("x", "x"), ("y", "y"), ("z", "z"), ("x", "z"), ("y", "z")}
        assert is_skeletal(V)

    def test_not_skeletal(self, two):
        A = validate_category(two, [("a", "*"), ("b", "*")], lambda a, b: "1")
        assert iso_classes(A) == [[0, 1]]
        assert not is_skeletal(A)

    def test_q_power_over_two(self):
        A = CATALOG["fix-qa-2"]
        assert underlying_preorder(A).pairs() == {("0", "0"), ("1", "1"), ("0", "1")}


class TestComposition:
    def test_unit_law(self, V):
        phi = all_distributors(V, V)[3]
        assert dist_compose(phi, identity_distributor(V)) == phi
        assert dist_compose(identity_distributor(V), phi) == phi

    def test_order_squared(self, V):
        le = identity_distributor(V)
        assert dist_compose(le, le) == le

    def test_empty_codomain(self, V, two):
        E = validate_category(two, [], {})
        phi = QDistributor(V, E, np.zeros((3, 0), dtype=np.int64))
        out = dist_compose(QDistributor(E, E, np.zeros((0, 0), dtype=np.int64)), phi)
        assert out.matrix.shape == (3, 0)

    def test_type_mismatch(self, V, antichain):
        with pytest.raises(TypeMismatch):
            dist_compose(identity_distributor(V), identity_distributor(antichain))

    @pytest.mark.parametrize("name", ["fix-v", "fix-antichain2", "fix-bg3-pair"])
    def test_associativity(self, name):
        A = CATALOG[name]
        ds = all_distributors(A, A)[:12]
        for a in ds:
            for b in ds:
                for c in ds:
                    assert dist_compose(c, dist_compose(b, a)) == dist_compose(dist_compose(c, b), a)


class TestResiduation:
    def test_self_residual_is_identity(self, V):
        A = identity_distributor(V)
        assert dist_rres(A, A) == A
        assert dist_lres(A, A) == A

    def test_psi_equal_phi(self, V):
        for phi in all_distributors(V, V):
            assert dist_leq(identity_distributor(V), dist_rres(phi, phi))

    def test_constant_top(self, V, two):
        le = identity_distributor(V)
        top = QDistributor(V, V, np.full((3, 3), two.top("*", "*")))
        assert dist_rres(le, top) == top

    @pytest.mark.parametrize("name", ["fix-v", "fix-antichain2", "fix-g3-chain2", "fix-bg3-pair"])
    def test_adjunctions_over_all_distributors(self, name):
        A = CATALOG[name]
        ds = all_distributors(A, A)
        for phi in ds:
            for psi in ds:
                r = dist_rres(phi, psi)
                l = dist_lres(phi, psi)
                for chi in ds:
                    assert dist_leq(dist_compose(phi, chi), psi) == dist_leq(chi, r)
                    assert dist_leq(dist_compose(chi, psi), phi) == dist_leq(chi, l)


class TestGraphs:
    def test_identity(self, V):
        I = identity_functor(V)
        assert graph(I) == identity_distributor(V) == cograph(I)

    def test_composite_law(self, V, two):
        # V -> V (x, y fixed, z fixed) composed with V -> chain
        C = poset_to_2cat((["lo", "hi"], [("lo", "hi")]))
        F = validate_functor(V, V, {"x": "x", "y": "z", "z": "z"})
        G = validate_functor(V, C, {"x": "lo", "y": "hi", "z": "hi"})
        GF = compose_functors(G, F)
        assert graph(GF) == dist_compose(graph(G), graph(F))
        assert cograph(GF) == dist_compose(cograph(F), cograph(G))

    def test_fully_faithful_inclusion(self, V):
        S = V.full_subcategory([0, 2])
        F = validate_functor(S, V, {"x": "x", "z": "z"})
        assert is_fully_faithful(F)
        assert dist_compose(cograph(F), graph(F)) == identity_distributor(S)

    @pytest.mark.parametrize("name", SMALL)
    def test_graph_cograph_adjunction(self, name):
        A = CATALOG[name]
        for F in all_functors(A, A):
            assert dist_leq(identity_distributor(A), dist_compose(cograph(F), graph(F)))
            assert dist_leq(dist_compose(graph(F), cograph(F)), identity_distributor(A))

    @pytest.mark.parametrize("name", ["fix-v", "fix-antichain2", "fix-g3-chain2"])
    def test_restriction_formula(self, name):
        # φ(F-, G-) = G^♮ ∘ φ ∘ F_♮
        A = CATALOG[name]
        fs = all_functors(A, A)
        for phi in all_distributors(A, A):
            for F in fs:
                for G in fs:
                    direct = QDistributor(A, A, phi.matrix[np.ix_(F.mapping, G.mapping)])
                    assert direct == dist_compose(cograph(G), dist_compose(phi, graph(F)))


class TestAdjoint:
    def test_identity(self, V):
        assert check_adjoint(identity_functor(V), identity_functor(V)) == (True, None)

    def test_constant_z_has_no_right_adjoint(self, V):
        const = validate_functor(V, V, {e: "z" for e in V.elements})
        results = [check_adjoint(const, G) for G in all_functors(V, V)]
        assert results and not any(ok for ok, _ in results)

    def test_witness(self, V):
        const = validate_functor(V, V, {e: "z" for e in V.elements})
        ok, w = check_adjoint(const, identity_functor(V))
        assert not ok and w == ("x", "x")

    @pytest.mark.parametrize("name", SMALL)
    def test_adjunction_transfers_to_distributors(self, name):
        A = CATALOG[name]
        fs = all_functors(A, A)
        for F in fs:
            for G in fs:
                if check_adjoint(F, G)[0]:
                    assert graph(F) == cograph(G)
