import json

import pytest

from qdomain import io as qio
from qdomain.category import identity_distributor, identity_functor
from qdomain.cli import main
from qdomain.errors import ParseError, ValidationError
from qdomain.models import CATALOG, quantaloid_of
from qdomain.presheaf import presheaf_category

from conftest import lower


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


BROKEN = {"quantaloid": "fix-2",
          "elements": [{"id": e, "type": "*"} for e in "xyz"],
          "hom": [[a, b, "1" if a == b or (a, b) in {("x", "y"), ("y", "z")} else "0"]
                  for a in "xyz" for b in "xyz"]}


class TestRoundTrips:
    @pytest.mark.parametrize("name", ["fix-v", "fix-bg3-pair", "fix-g3-chain2", "fix-qa-bg3-h"])
    def test_category(self, name):
        A = CATALOG[name]
        B = qio.category_from_json(json.loads(qio.dumps(qio.category_to_json(A))))
        assert B.elements == A.elements and B.types == A.types
        assert B.hom_names() == A.hom_names()

    @pytest.mark.parametrize("name", ["fix-2", "fix-g3", "fix-bg3", "fix-bpwr2"])
    def test_quantaloid(self, name):
        Q = quantaloid_of(CATALOG[name])
        R = qio.quantaloid_from_json(json.loads(qio.dumps(qio.quantaloid_to_json(Q))))
        assert R.objects == Q.objects
        for p in Q.objects:
            for q in Q.objects:
                assert [R.name(g) for g in R.hom(p, q)] == [Q.name(g) for g in Q.hom(p, q)]

    def test_functor_distributor_presheaf(self, V):
        F = qio.functor_from_json(qio.functor_to_json(identity_functor(V)), V, V)
        assert F == identity_functor(V)
        d = qio.distributor_from_json(qio.distributor_to_json(identity_distributor(V)), V, V)
        assert d == identity_distributor(V)
        for mu in presheaf_category(V).weights:
            assert qio.presheaf_from_json(qio.presheaf_to_json(mu), V) == mu

    def test_quantale_doc(self):
        doc = {"carrier": ["0", "1"], "leq": [["0", "1"]],
               "tensor": [[a, b, min(a, b)] for a in "01" for b in "01"], "unit": "1"}
        Q = qio.quantaloid_from_json(doc)
        assert Q.objects == ("*",)

    def test_malformed(self):
        with pytest.raises(ParseError):
            qio.loads("{not json")
        with pytest.raises(ParseError):
            qio.category_from_json({"elements": []})

    def test_broken_table(self):
        with pytest.raises(ValidationError) as err:
            qio.category_from_json(BROKEN)
        assert "CompositionInequalityViolated" in err.value.kinds

    def test_canonical_text(self):
        assert qio.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


class TestExitCodes:
    def test_ok(self, capsys):
        assert run(capsys, "validate", "--fixture", "fix-v")[0] == 0

    def test_negative_with_assert(self, capsys):
        assert run(capsys, "check-cocomplete", "--fixture", "fix-v", "--class", "all")[0] == 0
        assert run(capsys, "check-cocomplete", "--fixture", "fix-v", "--class", "all", "--assert")[0] == 1

    def test_validation(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", "--category", write(tmp_path, "c.json", BROKEN))
        assert code == 2
        assert "CompositionInequalityViolated: x, y, z" in err

    def test_parse(self, capsys, tmp_path):
        assert run(capsys, "validate", "--category", write(tmp_path, "c.json", "{oops"))[0] == 3
        assert run(capsys, "validate", "--fixture", "fix-nope")[0] == 3
        assert run(capsys, "check-ideal", "--fixture", "fix-v")[0] == 3
        assert run(capsys, "check-ideal", "--fixture", "fix-v", "--class", "compact")[0] == 3

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as ex:
            main(["no-such-command"])
        assert ex.value.code == 3

    def test_cap(self, capsys):
        assert run(capsys, "enumerate", "--fixture", "fix-w5", "--cap", "1")[0] == 4


class TestCommands:
    def test_check_continuous(self, capsys):
        code, doc = run_json(capsys, "check-continuous", "--fixture", "fix-v", "--class", "inhabited-flat")
        assert code == 0 and doc["verdict"] is True
        assert doc["schema"] == 1 and doc["command"] == "check-continuous"

    def test_check_ideal_empty_flat(self, capsys):
        code, doc = run_json(capsys, "check-ideal", "--fixture", "fix-v", "--class", "flat",
                             "--type", "*", "--presheaf", "{}")
        assert code == 0 and doc["verdict"] is True

    def test_check_ideal_inline_json(self, capsys):
        mu = json.dumps({"type": "*", "values": {"x": "1", "y": "1", "z": "0"}})
        code, doc = run_json(capsys, "check-ideal", "--fixture", "fix-v", "--class", "flat", "--presheaf", mu)
        assert doc["verdict"] is False and doc["witnesses"]

    def test_cross_validate(self, capsys):
        code, doc = run_json(capsys, "cross-validate", "--max-poset", "4")
        assert code == 0 and doc["verdict"] is True and doc["posets"] == 24

    def test_cocomplete_witness(self, capsys):
        _, doc = run_json(capsys, "check-cocomplete", "--fixture", "fix-v", "--class", "all")
        assert doc["witnesses"] == ["{}"]

    def test_enumerate(self, capsys):
        _, doc = run_json(capsys, "enumerate", "--fixture", "fix-v")
        assert doc["count"] == 5
        assert [it["label"] for it in doc["items"]] == [lower(CATALOG["fix-v"], m).label()
                                                        for m in ["", "y", "x", "xy", "xyz"]]

    def test_enumerate_jsonl(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--fixture", "fix-v", "--co", "--jsonl")
        assert code == 0 and len(out.splitlines()) == 5

    def test_equivalence_precondition(self, capsys):
        code, doc = run_json(capsys, "equivalence", "--fixture", "fix-v", "--class", "all", "--assert")
        assert code == 1 and doc["verdict"] is False and "precondition" in doc

    def test_divisible(self, capsys):
        _, doc = run_json(capsys, "check-divisible", "--fixture", "fix-drastic4")
        assert doc["verdict"] is False and doc["witnesses"] == [["2/3", "1/3"]]

    def test_q_power(self, capsys):
        _, doc = run_json(capsys, "check-q-power", "--fixture", "fix-qa-bg3-h")
        assert doc["verdict"] is True and all(doc["dFlat"].values())

    def test_pa(self, capsys):
        _, doc = run_json(capsys, "check-continuous", "--fixture", "fix-v", "--class", "all", "--pa")
        assert doc["verdict"] is True

    def test_fixtures(self, capsys):
        _, doc = run_json(capsys, "fixtures", "list")
        assert {f["name"] for f in doc["fixtures"]} == set(CATALOG.names())
        _, doc = run_json(capsys, "fixtures", "show", "fix-v")
        A = qio.category_from_json(doc["document"])
        assert A.hom_names() == CATALOG["fix-v"].hom_names()

    def test_human_matches_json(self, capsys):
        _, out, _ = run(capsys, "check-cocomplete", "--fixture", "fix-v", "--class", "all")
        assert out.startswith("check-cocomplete: FAIL")
        assert 'witnesses: ["{}"]' in out and "elapsed:" in out

    def test_category_file_with_fixture_quantaloid(self, capsys, tmp_path):
        doc = qio.category_to_json(CATALOG["fix-v"], embed_quantaloid=False)
        doc["quantaloid"] = "fix-2"
        code, rep = run_json(capsys, "way-below", "--category", write(tmp_path, "v.json", doc),
                             "--class", "inhabited-flat")
        assert code == 0 and rep["verdict"] is True


DETERMINISM = [
    ["validate", "--fixture", "fix-bg3"],
    ["enumerate", "--fixture", "fix-bg3-pair"],
    ["check-ideal", "--fixture", "fix-v", "--class", "flat"],
    ["phi-cat", "--fixture", "fix-v", "--class", "inhabited-flat"],
    ["check-cocomplete", "--fixture", "fix-v", "--class", "all"],
    ["way-below", "--fixture", "fix-g3-chain2", "--class", "inhabited-flat"],
    ["check-continuous", "--fixture", "fix-diamond", "--class", "conical-ideal"],
    ["check-algebraic", "--fixture", "fix-g3-chain2", "--class", "inhabited-flat"],
    ["equivalence", "--fixture", "fix-v", "--class", "inhabited-flat"],
    ["saturation-harness", "--class", "flat", "--fixture", "fix-v", "--fixture", "fix-diamond", "--seed", "3"],
    ["cross-validate", "--max-poset", "3"],
    ["check-divisible", "--fixture", "fix-luk3"],
    ["check-q-power", "--fixture", "fix-qa-bpwr2-1"],
    ["fixtures", "list"],
]


@pytest.mark.parametrize("argv", DETERMINISM, ids=lambda a: a[0])
def test_byte_identical(capsys, argv):
    outs = [run(capsys, *argv, "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1] and outs[0].endswith("\n")
    assert "elapsed" not in outs[0]
