"""Versioned JSON for CIL terms, BL terms and model configurations.

Every document is an object with ``version`` and ``kind`` fields; ``kind``
is one of ``cil``, ``bl`` or ``model``.
"""

from __future__ import annotations

import json

from . import bl
from .seqcomb import STAR, CombSeq, DumSeq, LinkSeq, PerSeq
from .terms import Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar, SortError

VERSION = 1
KINDS = ("cil", "bl", "model")


class SchemaError(ValueError):
    def __init__(self, msg: str, path: str = "$"):
        super().__init__(f"{path}: {msg}")
        self.path = path


def check_version(data, kind: str) -> None:
    if not isinstance(data, dict):
        raise SchemaError("expected an object")
    if data.get("version") != VERSION:
        raise SchemaError(f"unsupported version {data.get('version')!r}", "$.version")
    if data.get("kind") != kind:
        raise SchemaError(f"expected kind {kind!r}, got {data.get('kind')!r}", "$.kind")


# ---------------------------------------------------------------------------
# CIL


def _entry(e):
    return "*" if e == STAR else e


def cil_to_obj(t) -> dict:
    if isinstance(t, Prim):
        return {"op": "prim", "name": t.name, "sort": t.sort}
    if isinstance(t, PseudoVar):
        return {"op": "pvar", "name": t.name}
    if isinstance(t, Comb):
        return {"op": "comb", "seq": [_entry(e) for e in t.seq.entries],
                "head": cil_to_obj(t.head), "args": [cil_to_obj(a) for a in t.args]}
    if isinstance(t, Link):
        return {"op": "link", "blocks": [list(b) for b in t.seq.blocks], "n": t.seq.n,
                "body": cil_to_obj(t.body)}
    if isinstance(t, Per):
        return {"op": "per", "images": list(t.seq.images), "body": cil_to_obj(t.body)}
    if isinstance(t, Dum):
        return {"op": "dum", "entries": list(t.seq.entries), "body": cil_to_obj(t.body)}
    if isinstance(t, Neg):
        return {"op": "not", "body": cil_to_obj(t.body)}
    if isinstance(t, Conj):
        return {"op": "and", "left": cil_to_obj(t.left), "right": cil_to_obj(t.right)}
    if isinstance(t, Ex):
        return {"op": "ex", "mask": list(t.mask), "body": cil_to_obj(t.body)}
    raise TypeError(f"not a CIL term: {t!r}")


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return val


def _ints(xs, path):
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
        raise SchemaError("expected a list of integers", path)
    return tuple(xs)


def cil_from_obj(obj, path: str = "$"):
    op = _field(obj, "op", path, str)
    try:
        if op == "prim":
            return Prim(_field(obj, "name", path, str), _field(obj, "sort", path, int))
        if op == "pvar":
            return PseudoVar(_field(obj, "name", path, str))
        if op == "comb":
            seq = _field(obj, "seq", path, list)
            entries = []
            for i, e in enumerate(seq):
                if e == "*":
                    entries.append(STAR)
                elif isinstance(e, int) and not isinstance(e, bool):
                    entries.append(e)
                else:
                    raise SchemaError("comb entries are integers or '*'", f"{path}.seq[{i}]")
            args = _field(obj, "args", path, list)
            return Comb(CombSeq(tuple(entries)), cil_from_obj(_field(obj, "head", path), f"{path}.head"),
                        [cil_from_obj(a, f"{path}.args[{i}]") for i, a in enumerate(args)])
        if op == "link":
            blocks = [_ints(b, f"{path}.blocks[{i}]") for i, b in enumerate(_field(obj, "blocks", path, list))]
            return Link(LinkSeq.of(blocks, _field(obj, "n", path, int)),
                        cil_from_obj(_field(obj, "body", path), f"{path}.body"))
        if op == "per":
            return Per(PerSeq(_ints(_field(obj, "images", path), f"{path}.images")),
                       cil_from_obj(_field(obj, "body", path), f"{path}.body"))
        if op == "dum":
            return Dum(DumSeq(_ints(_field(obj, "entries", path), f"{path}.entries")),
                       cil_from_obj(_field(obj, "body", path), f"{path}.body"))
        if op == "not":
            return Neg(cil_from_obj(_field(obj, "body", path), f"{path}.body"))
        if op == "and":
            return Conj(cil_from_obj(_field(obj, "left", path), f"{path}.left"),
                        cil_from_obj(_field(obj, "right", path), f"{path}.right"))
        if op == "ex":
            return Ex(_ints(_field(obj, "mask", path), f"{path}.mask"),
                      cil_from_obj(_field(obj, "body", path), f"{path}.body"))
    except (SortError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc), path) from None
    raise SchemaError(f"unknown op {op!r}", f"{path}.op")


# ---------------------------------------------------------------------------
# BL


def bl_to_obj(t) -> dict:
    if isinstance(t, bl.Var):
        return {"op": "var", "name": t.name}
    if isinstance(t, bl.Const):
        return {"op": "const", "name": t.name}
    if isinstance(t, bl.Abstract):
        return {"op": "abs", "vseq": list(t.vseq), "scope": bl_to_obj(t.scope)}
    if isinstance(t, bl.Pred):
        return {"op": "pred", "name": t.name, "args": [bl_to_obj(a) for a in t.args]}
    if isinstance(t, bl.Not):
        return {"op": "not", "body": bl_to_obj(t.body)}
    if isinstance(t, bl.And):
        return {"op": "and", "left": bl_to_obj(t.left), "right": bl_to_obj(t.right)}
    if isinstance(t, (bl.Exists, bl.Forall)):
        return {"op": "ex" if isinstance(t, bl.Exists) else "all", "vars": list(t.vars),
                "body": bl_to_obj(t.body)}
    raise TypeError(f"not a BL term: {t!r}")


def bl_from_obj(obj, path: str = "$"):
    op = _field(obj, "op", path, str)
    try:
        if op == "var":
            return bl.Var(_field(obj, "name", path, str))
        if op == "const":
            return bl.Const(_field(obj, "name", path, str))
        if op == "abs":
            return bl.Abstract(bl_from_obj(_field(obj, "scope", path), f"{path}.scope"),
                               tuple(_field(obj, "vseq", path, list)))
        if op == "pred":
            args = _field(obj, "args", path, list)
            return bl.Pred(_field(obj, "name", path, str),
                           tuple(bl_from_obj(a, f"{path}.args[{i}]") for i, a in enumerate(args)))
        if op == "not":
            return bl.Not(bl_from_obj(_field(obj, "body", path), f"{path}.body"))
        if op == "and":
            return bl.And(bl_from_obj(_field(obj, "left", path), f"{path}.left"),
                          bl_from_obj(_field(obj, "right", path), f"{path}.right"))
        if op in ("ex", "all"):
            ctor = bl.Exists if op == "ex" else bl.Forall
            return ctor(tuple(_field(obj, "vars", path, list)),
                        bl_from_obj(_field(obj, "body", path), f"{path}.body"))
    except bl.BLError as exc:
        raise SchemaError(str(exc), path) from None
    raise SchemaError(f"unknown op {op!r}", f"{path}.op")


# ---------------------------------------------------------------------------
# documents


def dumps(x, indent: int | None = None) -> str:
    """Serialize a CIL term, a BL term or a ModelConfig."""
    from .model import ModelConfig, config_to_json
    if isinstance(x, ModelConfig):
        doc = config_to_json(x)
    elif isinstance(x, (Prim, PseudoVar, Comb, Link, Per, Dum, Neg, Conj, Ex)):
        doc = {"version": VERSION, "kind": "cil", "term": cil_to_obj(x)}
    else:
        doc = {"version": VERSION, "kind": "bl", "term": bl_to_obj(x)}
    return json.dumps(doc, indent=indent, sort_keys=True, ensure_ascii=False)


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise SchemaError("expected an object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}", "$.kind")
    check_version(data, kind)
    if kind == "model":
        from .model import config_from_json
        return config_from_json(data)
    term = _field(data, "term", "$")
    if kind == "cil":
        return cil_from_obj(term, "$.term")
    return bl_from_obj(term, "$.term")
