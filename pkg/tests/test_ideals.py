import numpy as np
import pytest

from qdomain.category import QDistributor, cograph, identity_distributor, identity_functor, validate_functor
from qdomain.errors import ValidationError
from qdomain.ideals import (CLASS_IDS, IdealClass, check_cocomplete, check_cocontinuous, check_conical,
                            check_conical_ideal, check_flat, check_irreducible, check_weakly_flat,
                            get_class, is_phi_distributor, is_representable, membership, phi_category,
                            saturation_harness)
from qdomain.models import CATALOG
from qdomain.presheaf import inhabited, presheaf_category, representable

from conftest import as_set, lower
from helpers import all_functors

FIXTURES = ["fix-v", "fix-antichain2", "fix-point", "fix-diamond", "fix-w5", "fix-bg3-pair",
            "fix-g3-chain2", "fix-qa-2", "fix-qa-bg3-h"]


class TestIrreducible:
    def test_singleton(self, V):
        assert check_irreducible(V, lower(V, "x"))[0]

    def test_union_splits(self, V):
        ok, w = check_irreducible(V, lower(V, "xy"))
        assert not ok
        assert {as_set(V, m) for m in w} == {frozenset("x"), frozenset("y")}

    def test_top(self, V):
        assert check_irreducible(V, lower(V, "xyz"))[0]

    @pytest.mark.parametrize("name", FIXTURES)
    def test_representables(self, name):
        A = CATALOG[name]
        assert all(check_irreducible(A, representable(A, a))[0] for a in range(len(A)))


class TestFlat:
    def test_xy_not_flat(self, V):
        ok, w = check_flat(V, lower(V, "xy"))
        assert not ok
        # the two principal upper sets of x and y
        assert {as_set(V, c) for c in w} == {frozenset("xz"), frozenset("yz")}

    def test_top_is_flat(self, V):
        assert check_flat(V, lower(V, "xyz"))[0]

    def test_empty_flat_not_inhabited(self, V):
        e = lower(V, "")
        assert check_flat(V, e)[0]
        assert not inhabited(e)
        assert not membership("inhabited-flat", V, e)

    @pytest.mark.parametrize("name", FIXTURES)
    def test_flat_implies_weakly_flat(self, name):
        A = CATALOG[name]
        for mu in presheaf_category(A).weights:
            if check_flat(A, mu)[0]:
                assert check_weakly_flat(A, mu)[0]


class TestConical:
    def test_xy_conical_not_ideal(self, V):
        assert check_conical(V, lower(V, "xy")) == (True, ("x", "y"))
        # every directed subset of the candidates {x, y} was tried
        assert check_conical_ideal(V, lower(V, "xy")) == (False, ("x", "y"))

    def test_top_is_conical_ideal(self, V):
        assert check_conical_ideal(V, lower(V, "xyz")) == (True, ("z",))

    @pytest.mark.parametrize("name", FIXTURES)
    def test_representable_singleton_witness(self, name):
        A = CATALOG[name]
        for a in range(len(A)):
            ok, w = check_conical_ideal(A, representable(A, a))
            assert ok and len(w) == 1

    @pytest.mark.parametrize("name", FIXTURES)
    def test_invariants(self, name):
        A = CATALOG[name]
        for mu in presheaf_category(A).weights:
            if check_conical_ideal(A, mu)[0]:
                assert check_conical(A, mu)[0]
                assert inhabited(mu)
                # finite directed sets have a top, so conical ideals are representable
                assert is_representable(A, mu)[0]


class TestMembership:
    def test_examples(self, V):
        assert membership("inhabited-flat", V, lower(V, "x"))
        assert not membership("representable", V, lower(V, "xy"))
        for mu in presheaf_category(V).weights:
            assert membership("all", V, mu)

    @pytest.mark.parametrize("name", FIXTURES)
    @pytest.mark.parametrize("cls", CLASS_IDS)
    def test_representables_in_every_class(self, name, cls):
        A = CATALOG[name]
        assert all(membership(cls, A, representable(A, a)) for a in range(len(A)))

    @pytest.mark.parametrize("name", FIXTURES)
    def test_inhabited_variant_is_intersection(self, name):
        A = CATALOG[name]
        for base in ("irreducible", "flat", "weakly-flat", "conical"):
            for mu in presheaf_category(A).weights:
                assert membership("inhabited-" + base, A, mu) == (membership(base, A, mu) and inhabited(mu))

    def test_unknown_class(self):
        with pytest.raises(ValueError):
            get_class("compact")


class TestPhiCategory:
    def test_counts(self, V):
        assert {as_set(V, m) for m in phi_category("inhabited-flat", V).weights} == \
            {frozenset("x"), frozenset("y"), frozenset("xyz")}
        assert len(phi_category("all", V)) == 5
        reps = {representable(V, a) for a in range(3)}
        assert set(phi_category("conical-ideal", V).weights) == reps

    def test_missing_representable_rejected(self, V):
        top = V.quantaloid.top("*", "*")
        one_at_x = IdealClass("one-at-x", lambda A, p, cap: (p.values[A.index("x")] == top, None))
        with pytest.raises(ValidationError) as err:
            phi_category(one_at_x, V)
        assert err.value.kinds == {"MissingRepresentable"}


class TestPhiDistributor:
    @pytest.mark.parametrize("cls", CLASS_IDS)
    def test_identity(self, V, cls):
        assert is_phi_distributor(cls, identity_distributor(V)) == (True, None)

    def test_cographs(self, V):
        for F in all_functors(V, V):
            assert is_phi_distributor("flat", cograph(F))[0]

    def test_xy_column(self, V):
        M = np.array(identity_distributor(V).matrix)
        M[:, 0] = lower(V, "xy").values
        ok, (b, col) = is_phi_distributor("flat", QDistributor(V, V, M))
        assert not ok and b == "x" and as_set(V, col) == frozenset("xy")


class TestCocomplete:
    def test_inhabited_flat(self, V):
        r = check_cocomplete("inhabited-flat", V)
        assert r.verdict and r.adjoint_ok
        assert sorted(s.canonical for s in r.sup_table.values()) == ["x", "y", "z"]

    def test_all(self, V):
        r = check_cocomplete("all", V)
        assert not r.verdict
        assert [m.label() for m in r.missing] == ["{}"]

    @pytest.mark.parametrize("name", FIXTURES)
    def test_representable_always(self, name):
        r = check_cocomplete("representable", CATALOG[name])
        assert r.verdict and r.adjoint_ok


class TestCocontinuous:
    @pytest.mark.parametrize("cls", CLASS_IDS)
    def test_identity(self, V, cls):
        assert check_cocontinuous(cls, identity_functor(V)) == (True, None)

    def test_constant_to_point(self, V):
        F = validate_functor(V, CATALOG["fix-point"], {e: "p" for e in V.elements})
        assert check_cocontinuous("inhabited-flat", F)[0]

    def test_antichain_inclusion(self, V, antichain):
        F = validate_functor(antichain, V, {"x": "x", "y": "y"})
        assert check_cocontinuous("inhabited-flat", F)[0]

    def test_failure_witness(self, V):
        # x, y -> x and z -> z: the sup z of {x,y} should go to sup {x} = x
        F = validate_functor(V, V, {"x": "x", "y": "x", "z": "z"})
        ok, mu = check_cocontinuous("conical", F)
        assert not ok and as_set(V, mu) == frozenset("xy")


def _rep_or_top_at(elem):
    def test(A, phi, cap):
        if is_representable(A, phi)[0]:
            return True, None
        top = A.quantaloid.top("*", "*")
        ok = elem in A.elements and phi.values[A.index(elem)] == top
        return ok, None if ok else f"no top at {elem}"
    return IdealClass(f"rep-or-{elem}", test, saturated=False)


class TestSaturation:
    @pytest.mark.parametrize("cls", ["flat", "irreducible"])
    def test_passes(self, cls):
        r = saturation_harness(cls, [CATALOG["fix-v"], CATALOG["fix-antichain2"]])
        assert r.verdict
        assert {c["probe"] for c in r.checks} == {"colimit", "composition", "phi-sup"}

    def test_negative_control(self):
        r = saturation_harness(_rep_or_top_at("x"), [CATALOG["fix-v"], CATALOG["fix-diamond"]])
        assert not r.verdict
        ce = r.counterexamples[0]
        assert ce["probe"] == "colimit" and ce["from"] == "fix-v" and ce["to"] == "fix-diamond"
        assert ce["weight"] == "{x,y}" and ce["colimit"] == "{bot,a,b}"

    def test_report_json(self):
        j = saturation_harness("flat", [CATALOG["fix-v"]]).to_json()
        assert j["verdict"] and "not prove" in j["note"]

    def test_deterministic(self):
        fx = [CATALOG["fix-v"], CATALOG["fix-diamond"]]
        a = saturation_harness(_rep_or_top_at("x"), fx, seed=7).to_json()
        b = saturation_harness(_rep_or_top_at("x"), fx, seed=7).to_json()
        assert a == b
