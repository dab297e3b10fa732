import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cil import bl
from cil.generate import random_abstract, random_term
from cil.parser import parse_bl, parse_cil
from cil.rewrite import normalize
from cil.terms import Prim, PseudoVar, Signature
from cil.translate import (
    TranslationError, bealer_decompose, canonical_form, j_translate, oracle_sense_equiv,
)

MARY = ("prim K : 2. prim L : 2. prim M : -1.\n"
        "comb[0](link[{1,2}](comb[*,1](K, link[{1,2}](L))), M).")


def test_translate_examples():
    assert bl.alpha_eq(j_translate(parse_cil(MARY)), parse_bl("[K(M,[L(M,M)])]", Signature.of(M=-1)))
    assert bl.alpha_eq(j_translate(Prim("P", 1)), parse_bl("[P(x)]_x"))
    assert j_translate(Prim("c", -1)) == bl.Const("c")
    t = parse_cil("prim P : 2. prim Q : 1. comb[0,0](P, ?X, comb[0](Q, ?X)).")
    assert bl.alpha_eq(j_translate(t, pvmap={"X": "x"}), parse_bl("[P(x,[Q(x)])]"))
    assert bl.alpha_eq(j_translate(Prim("Rain", 0)), parse_bl("[Rain()]"))


def test_decompose_examples():
    sig = Signature.of(M=-1)
    got = bealer_decompose(parse_bl("[K(M,[L(M,M)])]", sig))
    # the algorithm substitutes the constant directly rather than linking it
    assert got == parse_cil("prim K : 2. prim L : 2. prim M : -1. comb[0,0](K, M, comb[0,0](L, M, M)).")
    assert oracle_sense_equiv(got, parse_cil(MARY))
    assert bealer_decompose(parse_bl("[P(x)]_x")) == Prim("P", 1)
    got = bealer_decompose(parse_bl("[P(x,[Q(x)])]_x"))
    assert got == parse_cil("prim P : 2. prim Q : 1. link[{1,2}](comb[*,1](P, Q)).")


def test_decompose_rejects_free_variables():
    with pytest.raises(TranslationError):
        bealer_decompose(parse_bl("[Q(x,y)]_x"))


def test_oracle_examples():
    a = parse_cil("prim A : 1. prim B : 2. comb[1](link[{1,2}](B), A).")
    b = parse_cil("prim A : 1. prim B : 2. link[{1,2}](comb[1,1](B, A, A)).")
    assert oracle_sense_equiv(a, b)
    assert oracle_sense_equiv(a, a)
    m1 = parse_cil("prim P : 1. prim M : -1. comb[0](P, M).")
    m2 = parse_cil("prim P : 1. prim N : -1. comb[0](P, N).")
    assert not oracle_sense_equiv(m1, m2)
    assert not oracle_sense_equiv(Prim("P", 1), Prim("Q", 2))


@given(st.integers(0, 10 ** 6))
def test_round_trip_a(seed):
    t = random_abstract(random.Random(seed), 4)
    assert bl.alpha_eq(j_translate(bealer_decompose(t)), t)


@given(st.integers(0, 10 ** 6))
def test_round_trip_b(seed):
    t = random_term(random.Random(seed), 4)
    assert bealer_decompose(j_translate(t)) == normalize(t)


@given(st.integers(0, 10 ** 6))
def test_determinism_on_alpha_variants(seed):
    t = random_abstract(random.Random(seed), 3)
    fresh = bl.Fresh.above(t)
    variant = bl.canon(bl.rename_vseq(t, fresh.many(len(t.vseq))))
    assert bealer_decompose(t) == bealer_decompose(variant)


@given(st.integers(0, 10 ** 6))
def test_canonical_form_with_pseudo_variables(seed):
    t = random_term(random.Random(seed), 3, pseudo=("X", "Y"))
    c = canonical_form(t)
    assert oracle_sense_equiv(c, t)
    assert canonical_form(c) == c


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_oracle_is_an_equivalence(s1, s2, s3):
    # pick terms sharing a translation through normalization so transitivity is exercised
    a = random_term(random.Random(s1), 3)
    b = normalize(a)
    c = random_term(random.Random(s2), 3)
    assert oracle_sense_equiv(a, b) and oracle_sense_equiv(b, a)
    if oracle_sense_equiv(a, c):
        assert oracle_sense_equiv(b, c)
    assert oracle_sense_equiv(c, c)
