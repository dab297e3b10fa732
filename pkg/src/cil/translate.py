"""Translation between CIL and BL.

``j_translate`` sends a CIL term to the BL abstract it denotes, and
``bealer_decompose`` goes back.  The decomposition picks one representative
per sense: existential variables are appended to the v-sequence, exported
argument variables keep their v-sequence order, and vacuous quantifiers are
dropped.  Its output is the canonical form that ``rewrite.normalize``
reaches.
"""

from __future__ import annotations

from typing import Mapping

from . import bl
from .bl import Abstract, Const, Fresh, Var
from .seqcomb import STAR, CombSeq, wire_map
from .terms import (Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar,
                    Signature, SortError, mk_comb, mk_ex, mk_mods, pseudo_vars)


class TranslationError(ValueError):
    pass


def default_pvmap(names) -> dict:
    """``X -> x``; clashes get primes so the map stays injective."""
    out: dict = {}
    used: set = set()
    for n in names:
        v = n.lower()
        while v in used:
            v += "'"
        used.add(v)
        out[n] = v
    return out


def j_translate(t, sig: Signature | None = None, pvmap: Mapping[str, str] | None = None):
    """BL image of a CIL term.  Sort -1 primitives become constants,
    pseudo-variables become free variables, everything else an abstract."""
    if sig is not None:
        from .terms import sort_of
        if not isinstance(t, PseudoVar):
            sort_of(t, sig)
    if pvmap is None:
        pvmap = default_pvmap(pseudo_vars(t))
    missing = [n for n in pseudo_vars(t) if n not in pvmap]
    if missing:
        raise TranslationError(f"no variable for pseudo-variables {missing}")
    fresh = Fresh(avoid=set(pvmap.values()))
    return _j(t, pvmap, fresh)


def _j(t, pvmap, fresh: Fresh):
    if isinstance(t, Prim):
        if t.sort < 0:
            return Const(t.name)
        xs = fresh.many(t.sort)
        return Abstract(bl.Pred(t.name, tuple(Var(x) for x in xs)), xs)
    if isinstance(t, PseudoVar):
        return Var(pvmap[t.name])
    if isinstance(t, Comb):
        head = _j(t.head, pvmap, fresh)
        args = [_j(a, pvmap, fresh) for a in t.args]
        return bl.apply_comb(t.seq, head, args, fresh)
    if isinstance(t, Link):
        f, k = wire_map("link", t.seq)
        return bl.apply_wire_map(f, k, _j(t.body, pvmap, fresh), fresh)
    if isinstance(t, Per):
        return bl.apply_per(t.seq, _j(t.body, pvmap, fresh))
    if isinstance(t, Dum):
        f, k = wire_map("dum", t.seq)
        return bl.apply_wire_map(f, k, _j(t.body, pvmap, fresh), fresh)
    if isinstance(t, Neg):
        return bl.apply_log("not", _j(t.body, pvmap, fresh))
    if isinstance(t, Conj):
        a = _j(t.left, pvmap, fresh)
        b = _j(t.right, pvmap, fresh)
        return bl.apply_log("and", a, bl.rename_vseq(b, a.vseq))
    if isinstance(t, Ex):
        return bl.apply_log("exists", _j(t.body, pvmap, fresh), mask=t.mask)
    raise TranslationError(f"not a CIL term: {t!r}")


def j_key(t, pvmap: Mapping[str, str] | None = None):
    """Hashable sense key: the alpha-canonical copy of the translation."""
    return bl.canon(j_translate(t, pvmap=pvmap))


# ---------------------------------------------------------------------------
# Bealer decomposition


def bealer_decompose(t, sig: Signature | None = None, pvmap: Mapping[str, str] | None = None,
                     allow_free: bool = False):
    """CIL term whose translation is alpha-equal to the BL term ``t``.

    ``t`` is normally a closed abstract; with ``allow_free`` its free
    variables become pseudo-variables (through the inverse of ``pvmap``,
    default ``x -> X``).  Predicates and constants not in ``sig`` are
    rejected when a signature is given.
    """
    if isinstance(t, Var):
        raise TranslationError("a bare variable has no decomposition")
    free = bl.free_vars(t)
    if free and not allow_free:
        raise TranslationError(f"free variables {free} in a closed decomposition")
    inverse = {v: k for k, v in (pvmap or {}).items()}
    for v in free:
        inverse.setdefault(v, v.upper() if v.upper() != v else v + "_")
    if isinstance(t, Const):
        return _prim(t.name, -1, sig)
    return _decompose(bl.normal(t), sig, inverse)


def _prim(name: str, sort: int, sig: Signature | None) -> Prim:
    if sig is not None:
        declared = sig[name]
        if declared != sort:
            raise SortError(f"{name} occurs with arity {sort} but is declared with sort {declared}")
    return Prim(name, sort)


def _decompose(a: Abstract, sig, inverse):
    phi, xs = a.scope, a.vseq
    if isinstance(phi, bl.Not):
        return Neg(_decompose(Abstract(phi.body, xs), sig, inverse))
    if isinstance(phi, bl.And):
        return Conj(_decompose(Abstract(phi.left, xs), sig, inverse),
                    _decompose(Abstract(phi.right, xs), sig, inverse))
    if isinstance(phi, bl.Exists):
        clash = set(phi.vars) & set(xs)
        if clash:
            fresh = Fresh.above(a)
            ren = {v: fresh() for v in clash}
            body = bl.subst(phi.body, {v: Var(n) for v, n in ren.items()})
            phi = bl.Exists(tuple(ren.get(v, v) for v in phi.vars), body)
        mask = (0,) * len(xs) + (1,) * len(phi.vars)
        return mk_ex(mask, _decompose(Abstract(phi.body, xs + phi.vars), sig, inverse))
    if isinstance(phi, bl.Pred):
        return _leaf(phi, xs, sig, inverse)
    raise TranslationError(f"unexpected formula {phi!r}")


def _leaf(phi: bl.Pred, xs: tuple, sig, inverse):
    pos = {x: i for i, x in enumerate(xs, 1)}
    entries: list = []
    args: list = []
    wires: list[str] = []
    for t in phi.args:
        if isinstance(t, Var):
            if t.name in pos:
                entries.append(STAR)
                wires.append(t.name)
            else:
                entries.append(0)
                args.append(PseudoVar(inverse.get(t.name, t.name.upper())))
        elif isinstance(t, Const):
            entries.append(0)
            args.append(_prim(t.name, -1, sig))
        elif isinstance(t, Abstract):
            fv = set(bl.free_vars(t))
            tail = tuple(x for x in xs if x in fv)
            if set(t.vseq) & set(tail):
                fresh = Fresh.above(t, avoid=xs)
                t = bl.rename_vseq(t, [fresh() if v in tail else v for v in t.vseq])
            entries.append(len(tail))
            args.append(_decompose(Abstract(t.scope, t.vseq + tail), sig, inverse))
            wires.extend(tail)
        else:
            raise TranslationError(f"unexpected argument {t!r}")
    head = _prim(phi.name, len(phi.args), sig)
    core = mk_comb(CombSeq(tuple(entries)), head, args) if entries and any(e != STAR for e in entries) else head
    f = tuple(pos[w] for w in wires)
    return mk_mods(f, len(xs), core)


# ---------------------------------------------------------------------------


def oracle_sense_equiv(t1, t2, sig: Signature | None = None, pvmap=None) -> bool:
    """Sense-equivalence by comparing translations up to bound-variable renaming."""
    s1 = None if isinstance(t1, PseudoVar) else t1.sort
    s2 = None if isinstance(t2, PseudoVar) else t2.sort
    if s1 != s2:
        return False
    if pvmap is None:
        pvmap = default_pvmap(pseudo_vars(t1) + [n for n in pseudo_vars(t2) if n not in pseudo_vars(t1)])
    if sig is not None:
        from .terms import sort_of
        for t in (t1, t2):
            if not isinstance(t, PseudoVar):
                sort_of(t, sig)
    return bl.alpha_eq(j_translate(t1, pvmap=pvmap), j_translate(t2, pvmap=pvmap))


def canonical_form(t, pvmap=None):
    """``bealer_decompose`` of the translation, keeping pseudo-variables."""
    if pvmap is None:
        pvmap = default_pvmap(pseudo_vars(t))
    return bealer_decompose(j_translate(t, pvmap=pvmap), pvmap=pvmap, allow_free=True)


def pseudo_bind(t, x: PseudoVar | str, pvmap=None):
    """``T_X``: the term of sort n+1 whose translation is that of ``t`` with
    the variable of ``X`` appended to the v-sequence."""
    name = x.name if isinstance(x, PseudoVar) else x
    if isinstance(t, PseudoVar):
        raise SortError("pseudo-binding needs a sorted term")
    if t.sort < 0:
        raise SortError("pseudo-binding needs a term of sort >= 0")
    names = pseudo_vars(t)
    if name not in names:
        names = names + [name]
    if pvmap is None:
        pvmap = default_pvmap(names)
    image = j_translate(t, pvmap=pvmap)
    v = pvmap[name]
    bound = Abstract(image.scope, image.vseq + (v,))
    return bealer_decompose(bound, pvmap=pvmap, allow_free=True)
