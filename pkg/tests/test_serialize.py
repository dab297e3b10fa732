import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cil import serialize
from cil.demo import DEMO_CONFIG, demo_config
from cil.generate import random_abstract, random_term
from cil.serialize import SchemaError, dumps, loads


@given(st.integers(0, 10 ** 6))
def test_cil_round_trip(seed):
    t = random_term(random.Random(seed), 4, pseudo=("X",))
    assert loads(dumps(t)) == t


@given(st.integers(0, 10 ** 6))
def test_bl_round_trip(seed):
    t = random_abstract(random.Random(seed), 4)
    assert loads(dumps(t, indent=2)) == t


def test_documents_are_versioned_and_stable():
    t = random_term(random.Random(1), 3)
    doc = json.loads(dumps(t))
    assert doc["version"] == serialize.VERSION and doc["kind"] == "cil"
    assert dumps(t) == dumps(loads(dumps(t)))


def test_model_round_trip():
    cfg = demo_config()
    again = loads(dumps(cfg))
    assert [e for e in again.carrier] == [e for e in cfg.carrier]
    assert [h.name for h in again.extensions] == [h.name for h in cfg.extensions]
    assert again.actual == cfg.actual
    assert json.loads(dumps(again)) == json.loads(dumps(cfg))


PRIM = {"op": "prim", "name": "P", "sort": 1}


@pytest.mark.parametrize("doc,path", [
    ({"version": 2, "kind": "cil", "term": PRIM}, "$.version"),
    ({"version": 1, "kind": "nope", "term": PRIM}, "$.kind"),
    ({"version": 1, "kind": "cil"}, "$"),
    ({"version": 1, "kind": "cil", "term": {"op": "frob"}}, "$.term.op"),
    ({"version": 1, "kind": "cil", "term": {"op": "not", "body": {"op": "prim", "name": "P"}}}, "$.term.body"),
    ({"version": 1, "kind": "cil", "term": {"op": "comb", "seq": ["x"], "head": PRIM, "args": []}},
     "$.term.seq[0]"),
    ({"version": 1, "kind": "cil", "term": {"op": "comb", "seq": [1], "head": PRIM,
                                             "args": [{"op": "prim", "name": "c", "sort": -1}]}}, "$.term"),
    ({"version": 1, "kind": "cil", "term": {"op": "per", "images": [1, 1], "body": PRIM}}, "$.term"),
    ({"version": 1, "kind": "bl", "term": {"op": "abs", "scope": {"op": "pred", "name": "P", "args": [1]}, "vseq": []}},
     "$.term.scope.args[0]"),
])
def test_malformed_documents(doc, path):
    with pytest.raises(SchemaError) as info:
        loads(json.dumps(doc))
    assert info.value.path == path


def test_invalid_json():
    with pytest.raises(SchemaError):
        loads("{not json")
    with pytest.raises(SchemaError):
        loads("[1, 2]")


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d["extensions"]["actual"].__setitem__("B", [["s"]]), "$.extensions.actual.B[0]"),
    (lambda d: d["extensions"]["actual"].__setitem__("Zap", [["s"]]), "$.extensions.actual.Zap"),
    (lambda d: d.__setitem__("actual", "nowhere"), "$.actual"),
    (lambda d: d["terms"].__setitem__("bad", "[P(x"), "$.terms.bad"),
])
def test_malformed_model_config(mutate, path):
    doc = json.loads(json.dumps(DEMO_CONFIG))
    mutate(doc)
    with pytest.raises(SchemaError) as info:
        loads(json.dumps(doc))
    assert info.value.path == path
