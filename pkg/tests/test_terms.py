import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cil import bl
from cil.generate import DEFAULT_SIG, random_term
from cil.parser import parse_cil
from cil.rewrite import sense_equiv
from cil.seqcomb import STAR, CombSeq, LinkSeq, PerSeq
from cil.terms import (
    AppEntry, Comb, Link, Per, Prim, PseudoVar, Signature, SortError, application_sequence,
    pseudo_vars, sort_of,
)
from cil.translate import j_translate, oracle_sense_equiv, pseudo_bind

MARY = ("prim K : 2. prim L : 2. prim M : -1.\n"
        "comb[0](link[{1,2}](comb[*,1](K, link[{1,2}](L))), M).")


def test_signature_has_distinguished_entries():
    sig = Signature.of(P=1)
    assert sig["Eq_I"] == 2 and sig["Eq_N"] == 2 and sig["Truth"] == 0
    with pytest.raises(SortError):
        sig.declare("Eq_I", 3)
    with pytest.raises(SortError):
        Signature.of(P=-2)
    with pytest.raises(SortError):
        sig["Nope"]


def test_mary_sort():
    assert sort_of(parse_cil(MARY)) == 0


@pytest.mark.parametrize("text,sort", [
    ("prim T : 2. per[2,1](T).", 2),
    ("prim T : 3. ex[0,0,1](T).", 2),
    ("prim T : 3. dum[0,1,0,1](T).", 5),
    ("prim T : 2. link[{1,2}](T).", 1),
    ("prim A : 1. prim B : 2. comb[1](link[{1,2}](B), A).", 1),
    ("prim T : 2. and(T, per[2,1](T)).", 2),
    ("prim T : 1. not(T).", 1),
])
def test_sorts(text, sort):
    assert sort_of(parse_cil(text)) == sort


@pytest.mark.parametrize("build", [
    lambda: Comb(CombSeq((0,)), Prim("P", 2), (Prim("c", -1),)),         # head sort != |s|
    lambda: Comb(CombSeq((2,)), Prim("P", 1), (Prim("A", 1),)),          # arg sort < entry
    lambda: Comb(CombSeq((1,)), Prim("P", 1), (Prim("c", -1),)),         # constant needs entry 0
    lambda: Comb(CombSeq((1,)), Prim("P", 1), (PseudoVar("X"),)),        # pseudo-variable needs 0
    lambda: Link(LinkSeq.identity(2), Prim("T", 2)),                     # trivial parameter
    lambda: Per(PerSeq((1, 2)), Prim("T", 2)),
    lambda: Per(PerSeq((2, 1)), Prim("T", 3)),                           # size mismatch
])
def test_sort_errors(build):
    with pytest.raises((SortError, ValueError)):
        build()


def test_pseudo_variable_has_no_sort():
    with pytest.raises(SortError):
        sort_of(PseudoVar("X"))


def test_sort_checks_against_signature():
    t = parse_cil("prim P : 1. P.")
    with pytest.raises(SortError):
        sort_of(t, Signature.of(P=2))


def test_application_sequence_examples():
    t = parse_cil("prim K : 2. prim A : 1. comb[*,1](K, A).")
    assert application_sequence(t) == (STAR, AppEntry(1, 1, 0))
    t = parse_cil("prim P : 2. comb[0,0](P, ?X, ?Y).")
    assert application_sequence(t) == (AppEntry(1, 0, 0), AppEntry(2, 0, 0))
    t = parse_cil("prim M : 5. prim L : 2. prim Q : -1. prim P : 3. comb[*,2,*,0,2](M, L, Q, P).")
    assert application_sequence(t) == (STAR, AppEntry(1, 2, 0), STAR, AppEntry(2, 0, 0), AppEntry(3, 2, 1))
    with pytest.raises(SortError):
        application_sequence(Prim("P", 1))


@given(st.integers(0, 10 ** 6))
def test_sort_agrees_with_translation(seed):
    t = random_term(random.Random(seed), 4)
    image = j_translate(t)
    if t.sort >= 0:
        assert len(image.vseq) == t.sort
    else:
        assert isinstance(image, bl.Const)


@given(st.integers(0, 10 ** 6))
def test_application_sequence_accounts_for_wires(seed):
    t = random_term(random.Random(seed), 4)
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Comb):
            app = application_sequence(u)
            stars = sum(1 for e in app if e == STAR)
            assert stars + sum(e.used for e in app if e != STAR) == u.sort
            for e, a in zip([e for e in app if e != STAR], u.args):
                if not isinstance(a, PseudoVar) and a.sort >= 0:
                    assert e.used + e.residual == a.sort
        from cil.terms import children
        stack.extend(c for c in children(u) if not isinstance(c, PseudoVar))


def test_pseudo_bind_examples():
    t = parse_cil("prim P : 2. prim Q : 1. comb[0,0](P, ?X, comb[0](Q, ?X)).")
    tx = pseudo_bind(t, "X")
    assert tx == parse_cil("prim P : 2. prim Q : 1. link[{1,2}](comb[*,1](P, Q)).")
    assert pseudo_bind(parse_cil("prim P : 1. comb[0](P, ?X)."), "X") == Prim("P", 1)
    tx = pseudo_bind(parse_cil("prim T : 0. T."), "X")
    assert tx.sort == 1 and bl.redundant_vars(j_translate(tx)) == list(j_translate(tx).vseq)


@given(st.integers(0, 10 ** 6))
def test_pseudo_binding_lemma(seed):
    t = random_term(random.Random(seed), 3, pseudo=("X",))
    if "X" not in pseudo_vars(t) or t.sort < 0:
        return
    tx = pseudo_bind(t, "X")
    assert tx.sort == t.sort + 1
    back = Comb(CombSeq((STAR,) * t.sort + (0,)), tx, (PseudoVar("X"),))
    assert oracle_sense_equiv(back, t)
    assert sense_equiv(back, t)
