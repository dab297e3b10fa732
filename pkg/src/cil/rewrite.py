"""Sense rules: rewriting CIL terms to canonical form.

Rules are read left to right.  Logical operators move outward past
modifiers and combs, modifiers move inward and are kept in the order dum,
per, link (outside in), combs are pushed through modifier and comb heads,
and redundant wires are hoisted out of comb arguments or dropped under an
existential.  Irreducible terms are exactly the terms that
:func:`cil.translate.bealer_decompose` produces.

Every rewrite is computed through wire maps: a chain of modifiers over a
term of sort n with result sort k is the map sending old wire j to its new
position, and is rebuilt as ``dum(per(link(...)))`` from that map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .seqcomb import STAR, CombSeq, compose_maps
from .terms import (MODIFIERS, Comb, Conj, Dum, Ex, Link, Neg, Per, Prim,
                    PseudoVar, SortError, children, comb_groups, mk_comb,
                    mk_ex, mk_mods, mod_map, replace_at, subterm, used_wires,
                    with_children, strip_wire)

RULE_ORDER = tuple(f"R{i}" for i in range(1, 22)) + (
    "R22", "R23", "RFF", "RDUMOUT", "RDUMCAP", "REXSHAPE")
INVERSE_RULES = ("R20inv",)
ALL_RULES = RULE_ORDER + INVERSE_RULES
_RANK = {r: i for i, r in enumerate(ALL_RULES)}
DEFAULT_FUEL = 100000


class RewriteError(RuntimeError):
    pass


class FuelExhausted(RewriteError):
    def __init__(self, msg: str, trace=None):
        super().__init__(msg)
        self.trace = trace or []


@dataclass(frozen=True)
class Redex:
    """A rule instance: rule id, path from the root (child indices), the
    computed parameters and the matched subterm."""

    rule: str
    path: tuple
    params: tuple
    target: object

    def describe(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.rule} at {list(self.path)}" + (f" ({ps})" if ps else "")


@dataclass(frozen=True)
class Step:
    rule: str
    path: tuple
    before: object
    after: object


# ---------------------------------------------------------------------------
# rule bodies; each returns (params, result) or None


_KIND_RANK = {Dum: 0, Per: 1, Link: 2}
_MOD_PAIR = {
    (Dum, Dum): "R2", (Per, Per): "R3", (Link, Link): "R4",
    (Per, Dum): "R17", (Link, Dum): "R18", (Link, Per): "R20",
}
_OVER_NEG = {Per: "R5", Dum: "R6", Link: "R7"}
_OVER_EX = {Per: "R9", Dum: "R10", Link: "R11"}
_OVER_CONJ = {Per: "R13", Link: "R14", Dum: "R15"}
_COMB_OVER = {Neg: "R8", Ex: "R12", Conj: "R16", Dum: "R19", Per: "R21", Link: "R22", Comb: "R23"}


def _ex_merge(t):
    # the merged block lists the outer variables first, then the inner ones
    inner = t.body
    kept, outer_q, inner_q = [], [], []
    it = iter(t.mask)
    for i, m in enumerate(inner.mask, 1):
        if m:
            inner_q.append(i)
        elif next(it):
            outer_q.append(i)
        else:
            kept.append(i)
    order = kept + outer_q + inner_q
    f = [0] * len(order)
    for new_pos, i in enumerate(order, 1):
        f[i - 1] = new_pos
    mask = (0,) * len(kept) + (1,) * (len(outer_q) + len(inner_q))
    return (("mask", list(mask)), ("map", f)), mk_ex(mask, mk_mods(f, len(f), inner.body))


def _mod_merge(t):
    g, k = mod_map(t)
    f, _ = mod_map(t.body)
    h = compose_maps(f, g)
    return (("map", list(h)),), mk_mods(h, k, t.body.body)


def _mod_neg(t):
    return (), Neg(type(t)(t.seq, t.body.body))


def _mod_conj(t):
    c = t.body
    return (), Conj(type(t)(t.seq, c.left), type(t)(t.seq, c.right))


def _mod_ex(t):
    g, k = mod_map(t)
    ex = t.body
    n_kept = 0
    n_q = 0
    lifted = []
    for m in ex.mask:
        if m:
            n_q += 1
            lifted.append(k + n_q)
        else:
            n_kept += 1
            lifted.append(g[n_kept - 1])
    mask = (0,) * k + (1,) * n_q
    return (("mask", list(mask)), ("map", lifted)), Ex(mask, mk_mods(lifted, k + n_q, ex.body))


def _comb_neg(t):
    return (), Neg(Comb(t.seq, t.head.body, t.args))


def _comb_conj(t):
    h = t.head
    return (), Conj(Comb(t.seq, h.left, t.args), Comb(t.seq, h.right, t.args))


def _comb_ex(t):
    ex = t.head
    it = iter(t.seq)
    seq = tuple(STAR if m else next(it) for m in ex.mask)
    inner = Comb(CombSeq(seq), ex.body, t.args)
    mask = []
    for (pos, _, wires), m in zip(comb_groups(inner), ex.mask):
        mask.extend([m] * len(wires))
    return (("seq", list(seq)), ("mask", mask)), mk_ex(mask, inner)


def _comb_mod(t):
    g, _ = mod_map(t.head)
    groups = comb_groups(t)
    body = t.head.body
    seq = []
    args = []
    f = []
    for j in range(1, len(g) + 1):
        pos, m, wires = groups[g[j - 1] - 1]
        seq.append(t.seq[pos - 1])
        if m is not None:
            args.append(t.args[m])
        f.extend(wires)
    new = mk_comb(seq, body, args)
    return (("seq", seq), ("map", f)), mk_mods(f, t.sort, new)


def _comb_comb(t):
    inner = t.head
    cmap = {}
    m = 0
    for w, e in enumerate(t.seq, 1):
        if e == STAR:
            cmap[w] = (STAR, None)
        else:
            cmap[w] = (e, t.args[m])
            m += 1
    seq = []
    args = []
    subseqs = []
    for pos, bi, wires in comb_groups(inner):
        if bi is None:
            e, c = cmap[wires[0]]
            seq.append(e)
            if e != STAR:
                args.append(c)
            continue
        b = inner.args[bi]
        outer = [cmap[w] for w in wires]
        if all(e == STAR for e, _ in outer):
            seq.append(len(wires))
            args.append(b)
            continue
        res = b.sort - len(wires)
        sub = (STAR,) * res + tuple(e for e, _ in outer)
        subseqs.append(list(sub))
        n = Comb(CombSeq(sub), b, [c for e, c in outer if e != STAR])
        seq.append(n.sort - res)
        args.append(n)
    return (("seq", seq), ("inner", subseqs)), Comb(CombSeq(tuple(seq)), inner.head, args)


def _chain_over_comb(t):
    """Maximal chain of modifiers in dum/per/link order starting at ``t``,
    ending at a comb: ``(f, k, comb)`` or None."""
    nodes = []
    u = t
    last = -1
    while isinstance(u, MODIFIERS) and _KIND_RANK[type(u)] > last:
        last = _KIND_RANK[type(u)]
        nodes.append(u)
        u = u.body
    if not nodes or not isinstance(u, Comb):
        return None
    k = u.sort
    f = tuple(range(1, k + 1))
    for node in reversed(nodes):
        g, k = mod_map(node)
        f = compose_maps(f, g)
    return f, k, u


def _fixed_free(t):
    found = _chain_over_comb(t)
    if found is None:
        return None
    f, k, comb = found
    bad = False
    for _, m, wires in comb_groups(comb):
        vals = [f[w - 1] for w in wires]
        if m is not None and any(a >= b for a, b in zip(vals, vals[1:])):
            bad = True
    if not bad:
        return None
    seq = []
    args = []
    outer = []
    pushed = []
    for pos, m, wires in comb_groups(comb):
        vals = [f[w - 1] for w in wires]
        if m is None:
            seq.append(STAR)
            outer.extend(vals)
            continue
        a = comb.args[m]
        u = sorted(set(vals))
        if vals == u:
            seq.append(len(wires))
            args.append(a)
            outer.extend(vals)
            continue
        res = a.sort - len(wires)
        e = list(range(1, res + 1)) + [res + u.index(v) + 1 for v in vals]
        pushed.append((m + 1, e))
        args.append(mk_mods(e, res + len(u), a))
        seq.append(len(u))
        outer.extend(u)
    new = Comb(CombSeq(tuple(seq)), comb.head, args)
    return (("outer", outer), ("pushed", pushed)), mk_mods(outer, k, new)


def _dum_out(t):
    for pos, m, wires in comb_groups(t):
        if m is None or not wires:
            continue
        a = t.args[m]
        ua = used_wires(a)
        off = a.sort - len(wires)
        for q, w in enumerate(wires, 1):
            if off + q not in ua:
                seq = list(t.seq)
                seq[pos - 1] -= 1
                args = list(t.args)
                args[m] = strip_wire(a, off + q)
                new = Comb(CombSeq(tuple(seq)), t.head, args)
                f = [v if v < w else v + 1 for v in range(1, new.sort + 1)]
                return (("arg", m + 1), ("wire", off + q)), mk_mods(f, t.sort, new)
    return None


def _dum_cap(t):
    ub = used_wires(t.body)
    for i, m in enumerate(t.mask, 1):
        if m and i not in ub:
            mask = t.mask[:i - 1] + t.mask[i:]
            return (("wire", i),), mk_ex(mask, strip_wire(t.body, i))
    return None


def _ex_shape(t):
    mask = t.mask
    n = mask.count(0)
    if mask == (0,) * n + (1,) * (len(mask) - n):
        return None
    f = []
    kept = quant = 0
    for m in mask:
        if m:
            quant += 1
            f.append(n + quant)
        else:
            kept += 1
            f.append(kept)
    shaped = (0,) * n + (1,) * (len(mask) - n)
    return (("mask", list(shaped)), ("map", f)), Ex(shaped, mk_mods(f, len(mask), t.body))


def _per_link_inverse(t):
    g, k = mod_map(t)
    f0, _ = mod_map(t.body)
    f = compose_maps(f0, g)
    order = sorted(range(1, len(f) + 1), key=lambda i: (f[i - 1], i))
    pi = [0] * len(f)
    for r, i in enumerate(order, 1):
        pi[i - 1] = r
    ell = [f[i - 1] for i in order]
    body = mk_mods(pi, len(f), t.body.body)
    from .seqcomb import LinkSeq
    return (("per", pi), ("link", ell)), Link(LinkSeq.from_labels(ell), body)


def _continues_chain(parent, child) -> bool:
    """True when ``child`` sits inside the canonically ordered modifier chain
    of ``parent``; RFF only looks at the top of such a chain."""
    return (isinstance(parent, MODIFIERS) and isinstance(child, MODIFIERS)
            and _KIND_RANK[type(parent)] < _KIND_RANK[type(child)])


def _root_candidates(t, inverse: bool = False, in_chain: bool = False) -> list[tuple[str, Callable]]:
    out = []
    if isinstance(t, Ex):
        if isinstance(t.body, Ex):
            out.append(("R1", _ex_merge))
        out.append(("RDUMCAP", _dum_cap))
        out.append(("REXSHAPE", _ex_shape))
    elif isinstance(t, MODIFIERS):
        b = t.body
        kt = type(t)
        if isinstance(b, MODIFIERS) and (kt, type(b)) in _MOD_PAIR:
            out.append((_MOD_PAIR[(kt, type(b))], _mod_merge))
        elif isinstance(b, Neg):
            out.append((_OVER_NEG[kt], _mod_neg))
        elif isinstance(b, Ex):
            out.append((_OVER_EX[kt], _mod_ex))
        elif isinstance(b, Conj):
            out.append((_OVER_CONJ[kt], _mod_conj))
        if not in_chain:
            out.append(("RFF", _fixed_free))
        if inverse and kt is Per and isinstance(b, Link):
            out.append(("R20inv", _per_link_inverse))
    elif isinstance(t, Comb):
        h = type(t.head)
        if h in _COMB_OVER:
            rule = _COMB_OVER[h]
            fn = {Neg: _comb_neg, Conj: _comb_conj, Ex: _comb_ex, Comb: _comb_comb}.get(h, _comb_mod)
            out.append((rule, fn))
        out.append(("RDUMOUT", _dum_out))
    out.sort(key=lambda rf: _RANK[rf[0]])
    return out


def root_rewrites(t, inverse: bool = False, in_chain: bool = False) -> Iterator[tuple[str, tuple, object]]:
    for rule, fn in _root_candidates(t, inverse, in_chain):
        r = fn(t)
        if r is not None:
            yield rule, r[0], r[1]


def first_root_rewrite(t, in_chain: bool = False):
    for r in root_rewrites(t, in_chain=in_chain):
        return r
    return None


# ---------------------------------------------------------------------------
# public API


def applicable_redexes(t, include_inverse: bool = False) -> list[Redex]:
    """All redexes, leftmost-innermost (post-order), then by rule order.

    ``include_inverse`` adds R20inv instances; that rule undoes R20 and is
    never used by normalisation.
    """
    out: list[Redex] = []

    def walk(u, path, in_chain):
        for i, c in enumerate(children(u)):
            walk(c, path + (i,), _continues_chain(u, c))
        for rule, params, _ in root_rewrites(u, include_inverse, in_chain):
            out.append(Redex(rule, path, params, u))

    walk(t, (), False)
    return out


def rewrite_at(u, rule: str, in_chain: bool = False):
    for r, fn in _root_candidates(u, True, in_chain):
        if r == rule:
            res = fn(u)
            if res is not None:
                return res[1]
    return None


def apply_rule(t, r: Redex):
    try:
        u = subterm(t, r.path)
    except IndexError:
        raise RewriteError(f"stale redex: no position {list(r.path)}") from None
    if u != r.target:
        raise RewriteError(f"stale redex: term changed at {list(r.path)}")
    in_chain = bool(r.path) and _continues_chain(subterm(t, r.path[:-1]), u)
    new = rewrite_at(u, r.rule, in_chain)
    if new is None:
        raise RewriteError(f"stale redex: {r.rule} does not apply at {list(r.path)}")
    return replace_at(t, r.path, new)


class _Fuel:
    def __init__(self, n: int):
        self.left = n
        self.limit = n

    def spend(self, t, n: int = 1):
        self.left -= n
        if self.left < 0:
            raise FuelExhausted(f"normalisation did not finish within {self.limit} steps; last term {t}")


_NF_CACHE: dict = {}


def _nf(t, fuel: _Fuel, in_chain: bool = False):
    key = (t, in_chain)
    hit = _NF_CACHE.get(key)
    if hit is not None:
        # a cached result still costs the steps it took the first time
        fuel.spend(t, hit[1])
        return hit[0]
    start = fuel.left
    u = _nf_kids(t, fuel)
    while True:
        step = first_root_rewrite(u, in_chain)
        if step is None:
            break
        fuel.spend(u)
        u = _nf_kids(step[2], fuel)
    if len(_NF_CACHE) > 500000:
        _NF_CACHE.clear()
    _NF_CACHE[key] = (u, start - fuel.left)
    return u


def _nf_kids(t, fuel: _Fuel):
    kids = children(t)
    if not kids:
        return t
    return with_children(t, [_nf(c, fuel, _continues_chain(t, c)) for c in kids])


def normalize(t, fuel: int = DEFAULT_FUEL, trace: bool = False):
    """Canonical form.  With ``trace`` returns ``(normal_form, steps)`` and
    follows the leftmost-innermost strategy one redex at a time."""
    if not trace:
        return _nf(t, _Fuel(fuel))
    steps: list[Step] = []
    left = fuel
    while True:
        rs = applicable_redexes(t)
        if not rs:
            return t, steps
        left -= 1
        if left < 0:
            raise FuelExhausted(f"normalisation did not finish within {fuel} steps", steps)
        r = rs[0]
        before = subterm(t, r.path)
        t = apply_rule(t, r)
        steps.append(Step(r.rule, r.path, before, subterm(t, r.path)))


def normalize_random(t, rng: random.Random, fuel: int = DEFAULT_FUEL):
    """Normal form reached by picking a uniformly random redex at each step."""
    steps = 0
    while True:
        rs = applicable_redexes(t)
        if not rs:
            return t, steps
        steps += 1
        if steps > fuel:
            raise FuelExhausted(f"random reduction did not finish within {fuel} steps from {t}")
        t = apply_rule(t, rng.choice(rs))


def _increasing_on_groups(f, comb) -> bool:
    for _, m, wires in comb_groups(comb):
        vals = [f[w - 1] for w in wires]
        if m is not None and any(a >= b for a, b in zip(vals, vals[1:])):
            return False
    return True


def is_canonical(t) -> bool:
    if isinstance(t, (Prim, PseudoVar)):
        return True
    if isinstance(t, Neg):
        return is_canonical(t.body)
    if isinstance(t, Conj):
        return is_canonical(t.left) and is_canonical(t.right)
    if isinstance(t, Ex):
        n = t.mask.count(0)
        m = len(t.mask) - n
        if t.mask != (0,) * n + (1,) * m or isinstance(t.body, Ex):
            return False
        ub = used_wires(t.body)
        if any(j not in ub for j in range(n + 1, n + m + 1)):
            return False
        return is_canonical(t.body)
    if isinstance(t, MODIFIERS):
        u = t
        last = -1
        while isinstance(u, MODIFIERS):
            if _KIND_RANK[type(u)] <= last:
                return False
            last = _KIND_RANK[type(u)]
            u = u.body
        if isinstance(u, Prim):
            return True
        if not isinstance(u, Comb):
            return False
        f, _, _ = _chain_over_comb(t)
        return _increasing_on_groups(f, u) and _canonical_comb(u)
    if isinstance(t, Comb):
        return _canonical_comb(t)
    return False


def _canonical_comb(t: Comb) -> bool:
    if not isinstance(t.head, Prim):
        return False
    for pos, m, wires in comb_groups(t):
        if m is None:
            continue
        a = t.args[m]
        if not is_canonical(a):
            return False
        if wires:
            ua = used_wires(a)
            off = a.sort - len(wires)
            if any(off + q not in ua for q in range(1, len(wires) + 1)):
                return False
    return True


def sense_equiv(t1, t2, fuel: int = DEFAULT_FUEL, validate: bool = False) -> bool:
    """Sense-equivalence by comparing canonical forms."""
    s1 = getattr(t1, "sort", None)
    s2 = getattr(t2, "sort", None)
    if s1 != s2:
        result = False
    else:
        result = normalize(t1, fuel) == normalize(t2, fuel)
    if validate:
        from .translate import oracle_sense_equiv
        expected = oracle_sense_equiv(t1, t2)
        if expected != result:
            raise RewriteError(f"rewrite and oracle disagree on {t1} vs {t2}: {result} != {expected}")
    return result
