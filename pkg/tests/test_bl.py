import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cil import bl
from cil.generate import random_abstract
from cil.parser import parse_bl
from cil.seqcomb import STAR, CombSeq, DumSeq, LinkSeq, PerSeq
from cil.terms import Signature

SIG = Signature.of(z=-1, c=-1, M=-1)


def B(text):
    return parse_bl(text, SIG)


def seeds():
    return st.integers(0, 10 ** 6)


# -- variables and alpha ---------------------------------------------------

@pytest.mark.parametrize("text,free,bound", [
    ("[P(x)]_x", set(), {"x"}),
    ("[Q(x,y)]_x", {"y"}, {"x"}),
    ("[B(x,[ex w. B(v,w)])]", {"x", "v"}, {"w"}),
])
def test_analyze_vars(text, free, bound):
    assert bl.analyze_vars(B(text)) == (free, bound)


@pytest.mark.parametrize("a,b,same", [
    ("[P(x)]_x", "[P(y)]_y", True),
    ("[P(x)]_x", "[P(y)]_x", False),
    ("[Q(x,y)]_{x y}", "[Q(y,x)]_{y x}", True),
    ("[Q(x,y)]_{x y}", "[Q(y,x)]_{x y}", False),
    ("all x. ex y. Q(x,y)", "all u. ex w. Q(u,w)", True),
])
def test_alpha_eq(a, b, same):
    assert bl.alpha_eq(B(a), B(b)) is same


@given(seeds())
def test_alpha_eq_invariant_under_renaming(seed):
    t = random_abstract(random.Random(seed), 3)
    fresh = bl.Fresh.above(t)
    renamed = bl.rename_vseq(t, fresh.many(len(t.vseq)))
    assert bl.alpha_eq(t, renamed)
    assert bl.alpha_eq(renamed, t)
    assert bl.alpha_eq(t, t)


# -- log -------------------------------------------------------------------

def test_apply_log_examples():
    assert bl.alpha_eq(bl.apply_log("exists", B("[Q(x,y)]_{x y}"), mask=(0, 1)), B("[ex y. Q(x,y)]_x"))
    assert bl.alpha_eq(bl.apply_log("not", B("[P(x)]_x")), B("[~P(x)]_x"))
    got = bl.apply_log("and", B("[~P(x)]_x"), B("[ex y. Q(x,y)]_x"))
    assert bl.alpha_eq(got, B("[~P(x) & ex y. Q(x,y)]_x"))


def test_apply_log_errors():
    with pytest.raises(bl.BLError):
        bl.apply_log("and", B("[P(x)]_x"), B("[P(y)]_y"))
    with pytest.raises(bl.BLError):
        bl.apply_log("exists", B("[P(x)]_x"), mask=(0, 1))


# -- modifiers -------------------------------------------------------------

def test_apply_dum_examples():
    t = B("[P(x)]_x")
    assert bl.apply_dum(DumSeq((0, 0)), t) == t
    out = bl.apply_dum(DumSeq((1, 0)), t)
    assert len(out.vseq) == 2 and out.vseq[1] == "x" and bl.redundant_vars(out) == [out.vseq[0]]
    out = bl.apply_dum(DumSeq((0, 0, 1)), B("[Q(x,y)]_{x y}"))
    assert out.vseq[:2] == ("x", "y") and bl.redundant_vars(out) == [out.vseq[2]]
    with pytest.raises(bl.BLError):
        bl.apply_dum(DumSeq((0,)), t)


def test_apply_per_examples():
    t = B("[Q(x,y)]_{x y}")
    swap = PerSeq((2, 1))
    assert bl.apply_per(swap, t) == B("[Q(x,y)]_{y x}")
    assert bl.apply_per(PerSeq((1, 2)), t) == t
    assert bl.apply_per(swap, bl.apply_per(swap, t)) == t


def test_apply_link_examples():
    t = B("[P([Q(x1,x4)], x4, x2, x3)]_{x1 x2 x3 x4}")
    got = bl.apply_link(LinkSeq.of([[1], [2, 4], [3]]), t)
    assert bl.alpha_eq(got, B("[P([Q(x1,x2)], x2, x2, x3)]_{x1 x2 x3}"))
    assert bl.alpha_eq(bl.apply_link(LinkSeq.of([[1, 2]]), B("[L(x,y)]_{x y}")), B("[L(x,x)]_x"))
    linked = bl.apply_link(LinkSeq.of([[1, 2]]), B("[Q(x,y)]_{x y}"))
    assert not bl.f_sequence(linked)[2].unlinked


def test_apply_link_requires_nonredundant():
    with pytest.raises(bl.BLError):
        bl.apply_link(LinkSeq.of([[1, 2]]), B("[P(x)]_{x y}"))


def test_apply_comb_examples():
    got = bl.apply_comb(CombSeq((0, 0)), B("[Q(x1,x2)]_{x1 x2}"), [bl.Const("c"), bl.Const("z")])
    assert bl.alpha_eq(got, B("[Q(c,z)]"))
    got = bl.apply_comb(CombSeq((STAR, 1)), B("[K(x1,x2)]_{x1 x2}"), [B("[L(x,x)]_x")])
    assert bl.alpha_eq(got, B("[K(x1,[L(x,x)])]_{x1 x}"))
    got = bl.apply_comb(CombSeq((1,)), B("[B(x1)]_x1"), [B("[A(x)]_x")])
    assert bl.alpha_eq(got, B("[B([A(x)])]_x"))


def test_apply_comb_errors():
    with pytest.raises(bl.BLError):
        bl.apply_comb(CombSeq((2,)), B("[B(x1)]_x1"), [B("[A(x)]_x")])
    with pytest.raises(bl.BLError):
        bl.apply_comb(CombSeq((0, 0)), B("[B(x1)]_x1"), [bl.Const("c")])


def test_apply_comb_avoids_capture():
    # the argument's free variable x must not be captured by the head's vseq
    got = bl.apply_comb(CombSeq((STAR, 0)), B("[Q(x,y)]_{x y}"), [B("[P(x)]")])
    assert bl.analyze_vars(got)[0] == {"x"}


# -- f-sequences and decomposition ----------------------------------------

def test_f_sequence_examples():
    fseq, perm, cls = bl.f_sequence(B("[Q(x,[P(y,y,x)],z,y)]_{y x}"))
    assert fseq == (("x",), ("y", "x"), (), ("y",))
    assert perm == PerSeq((2, 1)) and not cls.ordered
    fseq, perm, cls = bl.f_sequence(B("[P(x)]_x"))
    assert fseq == (("x",),) and perm.is_trivial and cls.ordered and cls.elementary
    _, perm, cls = bl.f_sequence(B("[Q(y,x)]_{x y}"))
    assert perm == PerSeq((2, 1)) and not cls.ordered
    with pytest.raises(bl.BLError):
        bl.f_sequence(B("[~P(x)]_x"))


def test_classification_elementary_implies_atomic():
    cls = bl.classify(B("[~P(x)]_x"))
    assert not cls.atomic and not cls.elementary


def test_logical_tree_examples():
    tree = bl.logical_tree_decompose(B("[~P(x) & ex y. Q(x,y)]_x"))
    assert tree.op == "and"
    neg, ex = tree.children
    assert neg.op == "not" and bl.alpha_eq(neg.children[0], B("[P(x)]_x"))
    assert ex.op == "exists" and ex.mask == (0, 1)
    assert bl.alpha_eq(ex.children[0], B("[Q(x,y)]_{x y}"))
    assert bl.logical_tree_decompose(B("[P(x)]_x")) == B("[P(x)]_x")
    t = B("[all y. R(y)]")
    tree = bl.logical_tree_decompose(t)
    assert tree.op == "not" and tree.children[0].op == "exists"
    assert tree.children[0].children[0].op == "not"
    assert bl.alpha_eq(bl.rebuild_log_tree(tree), bl.normal(t))


def test_extract_modifiers_examples():
    dum, per, link, core = bl.extract_modifiers(B("[Q(x,[P(y,y,x)],z,y)]_{x y}"))
    assert dum is None and per is None
    assert link == LinkSeq.of([[1, 3], [2, 4]])
    assert bl.alpha_eq(core, B("[Q(x,[P(y,y,u)],z,w)]_{x y u w}"))
    dum, per, link, core = bl.extract_modifiers(B("[P(x)]_{x v}"))
    assert dum == DumSeq((0, 1)) and per is None and link is None
    assert core == B("[P(x)]_x")
    assert bl.extract_modifiers(B("[P(x)]_x")) == (None, None, None, B("[P(x)]_x"))


def test_extract_comb_examples():
    s, head, args = bl.extract_comb(B("[K(x1,[L(x,x)])]_{x1 x}"))
    assert s == CombSeq((STAR, 1))
    assert bl.alpha_eq(head, B("[K(u,w)]_{u w}"))
    assert len(args) == 1 and bl.alpha_eq(args[0], B("[L(x,x)]_x"))
    s, _, args = bl.extract_comb(B("[Q(c,z)]"))
    assert s == CombSeq((0, 0)) and args == [bl.Const("c"), bl.Const("z")]
    s, head, args = bl.extract_comb(B("[B([A(x)])]_x"))
    assert s == CombSeq((1,)) and bl.alpha_eq(args[0], B("[A(x)]_x"))
    with pytest.raises(bl.BLError):
        bl.extract_comb(B("[P(x)]_x"))


def _atomic_leaves(tree):
    if isinstance(tree, bl.Abstract):
        yield tree
    else:
        for c in tree.children:
            yield from _atomic_leaves(c)


@given(seeds())
def test_round_trips_on_random_abstracts(seed):
    t = random_abstract(random.Random(seed), 4)
    tree = bl.logical_tree_decompose(t)
    assert bl.alpha_eq(bl.rebuild_log_tree(tree), bl.normal(t))
    for leaf in _atomic_leaves(tree):
        dum, per, link, core = bl.extract_modifiers(leaf)
        cls = bl.classify(core)
        assert cls.non_redundant and cls.ordered and cls.unlinked
        assert bl.alpha_eq(bl.reapply_modifiers(dum, per, link, core), leaf)
        fseq, _, cls = bl.f_sequence(core)
        flat = [x for w in fseq for x in w]
        assert sorted(dict.fromkeys(flat)) == sorted(core.vseq)
        if not cls.elementary:
            s, head, args = bl.extract_comb(core)
            assert bl.alpha_eq(bl.apply_comb(s, head, args), core)


@given(seeds())
def test_operations_do_not_capture(seed):
    rng = random.Random(seed)
    t = random_abstract(rng, 3)
    free = bl.analyze_vars(t)[0]
    n = len(t.vseq)
    d = DumSeq(tuple(rng.randint(0, 1) for _ in range(n + 1)))
    assert bl.analyze_vars(bl.apply_dum(d, t))[0] == free
    if n:
        p = PerSeq(tuple(rng.sample(range(1, n + 1), n)))
        assert bl.analyze_vars(bl.apply_per(p, t))[0] == free
        mask = tuple(rng.randint(0, 1) for _ in range(n))
        assert bl.analyze_vars(bl.apply_log("exists", t, mask=mask))[0] == free


def test_extract_comb_unique_small():
    # no other comb-sequence over the same head reproduces the abstract
    t = B("[K(x1,[L(x,x)])]_{x1 x}")
    s, head, args = bl.extract_comb(t)
    hits = []
    for e1 in (STAR, 0, 1, 2):
        for e2 in (STAR, 0, 1, 2):
            try:
                cand = CombSeq((e1, e2))
            except ValueError:
                continue
            trial = [] if e2 == STAR else [args[0]] if e1 == STAR else None
            if trial is None:
                continue
            try:
                out = bl.apply_comb(cand, head, trial)
            except bl.BLError:
                continue
            if bl.alpha_eq(out, t):
                hits.append(cand)
    assert hits == [s]
