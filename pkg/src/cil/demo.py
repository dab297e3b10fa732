"""The bundled demo: inferences about belief and that-clauses, and a small
model in which the valid ones hold and the substitutivity failures have a
counter-example in the actual state of affairs.

``s`` and ``v`` are agents, ``scott`` an individual, ``Rain`` a proposition.
``B`` is belief, ``Nec`` necessity, ``Tr`` truth, ``R``/``W`` run/walk,
``Wo`` wondering whether, ``Au`` authorship of a fixed novel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ModelConfig, config_from_json, satisfies
from .parser import parse_bl, parse_cil
from .terms import Signature, sort_of

SIGNATURE = {"s": -1, "v": -1, "scott": -1, "Rain": 0, "B": 2, "Nec": 1, "Tr": 1,
             "R": 1, "W": 1, "Wo": 2, "Au": 1}

UNIQUE_AUTHOR = "Au(scott) & all z. Au(z) -> z =i scott"


@dataclass(frozen=True)
class Inference:
    name: str
    premises: tuple
    conclusion: str
    expect: str          # "valid" or "fails"
    gloss: str


CORPUS = (
    Inference("necessary-is-true",
              ("all y. B(s, y) -> Nec(y)", "all y. Nec(y) -> Tr(y)"),
              "all y. B(s, y) -> Tr(y)", "valid",
              "whatever s believes is necessary; whatever is necessary is true"),
    Inference("belief-in-a-proposition",
              ("all y. B(s, y) -> Tr(y)", "B(s, [Rain()])"),
              "Tr([Rain()])", "valid",
              "whatever s believes is true; s believes that it rains"),
    Inference("belief-about-belief",
              ("all y. B(s, y) -> Tr(y)", "B(s, [ex w. B(v, w)])"),
              "Tr([ex w. B(v, w)])", "valid",
              "whatever s believes is true; s believes that v believes something"),
    Inference("externally-quantified",
              ("B(s, [ex y. B(s, y)])",),
              "ex u. B(s, [ex y. B(u, y)])", "valid",
              "s believes that s believes something, so s believes of someone that they believe something"),
    Inference("run-walk-substitution",
              ("B(s, [all y. R(y)])", "(all y. R(y)) <-> (all y. W(y))"),
              "B(s, [all y. W(y)])", "fails",
              "materially equivalent that-clauses are not interchangeable in belief"),
    Inference("author-substitution",
              (f"Wo(s, [{UNIQUE_AUTHOR}])", UNIQUE_AUTHOR),
              "Wo(s, [scott =i scott])", "fails",
              "wondering whether scott wrote the novel is not wondering whether scott is scott"),
)

CIL_EXAMPLES = (
    ("mary-knows-she-loves-herself", "prim K : 2. prim L : 2. prim M : -1.\n"
     "comb[0](link[{1,2}](comb[*,1](K, link[{1,2}](L))), M).", 0),
    ("comb-link", "prim A : 1. prim B : 2.\ncomb[1](link[{1,2}](B), A).", 1),
)

BELIEVED = ["[all y. R(y)]", "[Rain()]", "[ex w. B(v, w)]", "[ex y. B(s, y)]"]

DEMO_CONFIG = {
    "version": 1,
    "kind": "model",
    "signature": SIGNATURE,
    "terms": {"allR": "[all y. R(y)]", "allW": "[all y. W(y)]", "rain": "[Rain()]",
              "vb": "[ex w. B(v, w)]", "sb": "[ex y. B(s, y)]",
              "author": f"[{UNIQUE_AUTHOR}]", "selfid": "[scott =i scott]"},
    "carrier": {"depth": 2, "propositions": False, "seeds": ["allW", "selfid"]},
    "extensions": {
        "actual": {
            "B": [["s", b] for b in ("allR", "rain", "vb", "sb")] + [["v", "rain"]],
            "Nec": [[b] for b in ("allR", "rain", "vb", "sb")],
            "Tr": [[b] for b in ("allR", "rain", "vb", "sb")] + [["allW"]],
            "R": [["*"]],
            "W": [["*"]],
            "Wo": [["s", "author"]],
            "Au": [["scott"]],
            "Rain": [[]],
        },
        "dry": {
            "B": [["s", "allR"]],
            "R": [["s"], ["v"]],
            "W": [["*"]],
            "Au": [["scott"]],
        },
    },
    "actual": "actual",
}


def demo_config() -> ModelConfig:
    return config_from_json(DEMO_CONFIG)


@dataclass
class Outcome:
    name: str
    expect: str
    premises_hold: bool
    conclusion_holds: bool
    ok: bool
    detail: str


def check_inference(cfg: ModelConfig, inf: Inference) -> Outcome:
    """``valid``: no extension makes the premises true and the conclusion false.
    ``fails``: the actual extension does."""
    sig = cfg.carrier.signature
    prem = [parse_bl(p, sig) for p in inf.premises]
    concl = parse_bl(inf.conclusion, sig)
    rows = []
    for h in cfg.extensions:
        p = all(satisfies(cfg, f, extension=h.name) for f in prem)
        c = satisfies(cfg, concl, extension=h.name)
        rows.append((h.name, p, c))
    actual = next(r for r in rows if r[0] == cfg.actual)
    if inf.expect == "valid":
        bad = [r[0] for r in rows if r[1] and not r[2]]
        ok = not bad and any(r[1] for r in rows)
        detail = f"counter-example in {bad}" if bad else "premises hold somewhere, conclusion follows"
    else:
        ok = actual[1] and not actual[2]
        detail = "premises true and conclusion false in the actual state" if ok else "no counter-example"
    return Outcome(inf.name, inf.expect, actual[1], actual[2], ok, detail)


def run_demo(cfg: ModelConfig | None = None) -> list:
    cfg = cfg or demo_config()
    out = []
    for name, text, want in CIL_EXAMPLES:
        t = parse_cil(text)
        got = sort_of(t)
        out.append(Outcome(name, f"sort {want}", True, got == want, got == want, f"sort {got}"))
    for inf in CORPUS:
        out.append(check_inference(cfg, inf))
    return out


def demo_signature() -> Signature:
    return Signature.of(SIGNATURE)
