"""Bealer logic: first-order formulas with intensional abstracts.

Terms are variables, constants and abstracts ``[phi]_{x1..xn}``; the
v-sequence of an abstract binds like a quantifier.  ``=_I`` and ``=_N`` are
ordinary binary predicates named :data:`EQ_I` and :data:`EQ_N`.

Sense identity between BL terms is equality up to bound-variable renaming
after :func:`normal`, which

* rewrites ``all x. phi`` as ``~ex x. ~phi``,
* merges directly nested existentials into one ordered block, and
* drops quantified variables that do not occur in the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .seqcomb import (STAR, CombSeq, DumSeq, LinkSeq, PerSeq, SequenceError,
                      wire_map)

EQ_I = "Eq_I"
EQ_N = "Eq_N"
TRUTH = "Truth"


class BLError(ValueError):
    """Ill-formed BL input or a violated operation precondition."""


# ---------------------------------------------------------------------------
# syntax


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Abstract:
    scope: "Formula"
    vseq: tuple = ()

    def __post_init__(self) -> None:
        vseq = tuple(self.vseq)
        if len(set(vseq)) != len(vseq):
            raise BLError(f"v-sequence {vseq} repeats a variable")
        object.__setattr__(self, "vseq", vseq)


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: "Formula"

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: "Formula"

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(self.vars))


Term = Union[Var, Const, Abstract]
Formula = Union[Pred, Not, And, Exists, Forall]


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


# ---------------------------------------------------------------------------
# variables


_NUM = re.compile(r"^(.*?)(\d*)('*)$")


def var_key(name: str) -> tuple:
    """Fixed total order on variable names: prefix, numeric suffix, primes."""
    m = _NUM.match(name)
    prefix, digits, primes = m.groups()
    return (prefix, int(digits) if digits else -1, len(primes), name)


def free_vars(t) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []
    _free(t, frozenset(), out)
    return out


def _free(t, bound: frozenset, out: list) -> None:
    if isinstance(t, Var):
        if t.name not in bound and t.name not in out:
            out.append(t.name)
    elif isinstance(t, Const):
        pass
    elif isinstance(t, Abstract):
        _free(t.scope, bound | set(t.vseq), out)
    elif isinstance(t, Pred):
        for a in t.args:
            _free(a, bound, out)
    elif isinstance(t, Not):
        _free(t.body, bound, out)
    elif isinstance(t, And):
        _free(t.left, bound, out)
        _free(t.right, bound, out)
    elif isinstance(t, (Exists, Forall)):
        _free(t.body, bound | set(t.vars), out)
    else:
        raise BLError(f"not a BL term or formula: {t!r}")


def all_names(t) -> set[str]:
    """Every variable name occurring anywhere, free or bound."""
    out: set[str] = set()

    def walk(u):
        if isinstance(u, Var):
            out.add(u.name)
        elif isinstance(u, Abstract):
            out.update(u.vseq)
            walk(u.scope)
        elif isinstance(u, Pred):
            for a in u.args:
                walk(a)
        elif isinstance(u, Not):
            walk(u.body)
        elif isinstance(u, And):
            walk(u.left)
            walk(u.right)
        elif isinstance(u, (Exists, Forall)):
            out.update(u.vars)
            walk(u.body)

    walk(t)
    return out


def analyze_vars(t) -> tuple[set[str], set[str]]:
    """``(free, bound)``: bound collects every variable introduced by a binder."""
    return set(free_vars(t)), _binders(t)


def _binders(t) -> set[str]:
    out: set[str] = set()

    def walk(u):
        if isinstance(u, Abstract):
            out.update(u.vseq)
            walk(u.scope)
        elif isinstance(u, Pred):
            for a in u.args:
                walk(a)
        elif isinstance(u, Not):
            walk(u.body)
        elif isinstance(u, And):
            walk(u.left)
            walk(u.right)
        elif isinstance(u, (Exists, Forall)):
            out.update(u.vars)
            walk(u.body)

    walk(t)
    return out


@dataclass
class Fresh:
    """Supply of fresh variables ``v1, v2, ...`` avoiding a set of names."""

    avoid: set = field(default_factory=set)
    counter: int = 0
    prefix: str = "v"

    @classmethod
    def above(cls, *terms, avoid: Iterable[str] = ()) -> "Fresh":
        names = set(avoid)
        for t in terms:
            names |= all_names(t)
        top = 0
        for n in names:
            m = re.fullmatch(r"v(\d+)", n)
            if m:
                top = max(top, int(m.group(1)))
        return cls(names, top)

    def __call__(self) -> str:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def many(self, k: int) -> tuple[str, ...]:
        return tuple(self() for _ in range(k))


# ---------------------------------------------------------------------------
# substitution


def subst(t, mapping: dict, fresh: Fresh | None = None):
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    if not mapping:
        return t
    if fresh is None:
        fresh = Fresh.above(t, *mapping.values(), avoid=mapping.keys())
    return _subst(t, dict(mapping), fresh)


def _rebind(names: Sequence[str], body, mapping: dict, fresh: Fresh):
    inner = {k: v for k, v in mapping.items() if k not in names}
    danger: set[str] = set()
    for k, v in inner.items():
        danger.update(free_vars(v))
    new_names = []
    for n in names:
        if n in danger:
            m = fresh()
            inner[n] = Var(m)
            new_names.append(m)
        else:
            new_names.append(n)
    return tuple(new_names), _subst(body, inner, fresh) if inner else body


def _subst(t, mapping: dict, fresh: Fresh):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Abstract):
        vseq, scope = _rebind(t.vseq, t.scope, mapping, fresh)
        return Abstract(scope, vseq)
    if isinstance(t, Pred):
        return Pred(t.name, tuple(_subst(a, mapping, fresh) for a in t.args))
    if isinstance(t, Not):
        return Not(_subst(t.body, mapping, fresh))
    if isinstance(t, And):
        return And(_subst(t.left, mapping, fresh), _subst(t.right, mapping, fresh))
    if isinstance(t, (Exists, Forall)):
        names, body = _rebind(t.vars, t.body, mapping, fresh)
        return type(t)(names, body)
    raise BLError(f"not a BL term or formula: {t!r}")


def subst_preds(t, interp: dict):
    """Replace each predicate application ``P(t1..tn)`` by ``phi[x1..xn := t1..tn]``
    where ``interp[P] = [phi]_{x1..xn}``."""
    if not interp:
        return t
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Abstract):
        return Abstract(subst_preds(t.scope, interp), t.vseq)
    if isinstance(t, Pred):
        args = tuple(subst_preds(a, interp) for a in t.args)
        if t.name in interp:
            body = interp[t.name]
            if len(body.vseq) != len(args):
                raise BLError(f"reinterpretation of {t.name} has wrong arity")
            return subst(body.scope, dict(zip(body.vseq, args)))
        return Pred(t.name, args)
    if isinstance(t, Not):
        return Not(subst_preds(t.body, interp))
    if isinstance(t, And):
        return And(subst_preds(t.left, interp), subst_preds(t.right, interp))
    if isinstance(t, (Exists, Forall)):
        body = subst_preds(t.body, interp)
        clash = set(t.vars) & {v for a in interp.values() for v in free_vars(a)}
        if clash:
            raise BLError(f"reinterpretation would capture {sorted(clash)}")
        return type(t)(t.vars, body)
    raise BLError(f"not a BL term or formula: {t!r}")


# ---------------------------------------------------------------------------
# normal form and alpha-equivalence


def exists(names: Sequence[str], body: Formula) -> Formula:
    """Smart existential: merges nested blocks, drops vacuous variables."""
    if isinstance(body, Exists):
        names = tuple(names) + body.vars
        body = body.body
    fv = set(free_vars(body))
    kept = tuple(n for n in names if n in fv)
    return Exists(kept, body) if kept else body


def normal(t):
    """The representative used for sense identity (see module docstring)."""
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Abstract):
        return Abstract(normal(t.scope), t.vseq)
    if isinstance(t, Pred):
        return Pred(t.name, tuple(normal(a) for a in t.args))
    if isinstance(t, Not):
        return Not(normal(t.body))
    if isinstance(t, And):
        return And(normal(t.left), normal(t.right))
    if isinstance(t, Exists):
        return exists(t.vars, normal(t.body))
    if isinstance(t, Forall):
        return Not(exists(t.vars, Not(normal(t.body))))
    raise BLError(f"not a BL term or formula: {t!r}")


def canon(t):
    """Normal form with bound variables renamed ``_0, _1, ...`` in binding order.

    Two inputs are alpha-equivalent iff their canonical copies are equal.
    """
    counter = [0]

    def fresh_names(names, env):
        new = dict(env)
        out = []
        for n in names:
            m = f"_{counter[0]}"
            counter[0] += 1
            new[n] = m
            out.append(m)
        return tuple(out), new

    def go(u, env):
        if isinstance(u, Var):
            return Var(env.get(u.name, u.name))
        if isinstance(u, Const):
            return u
        if isinstance(u, Abstract):
            vs, env2 = fresh_names(u.vseq, env)
            return Abstract(go(u.scope, env2), vs)
        if isinstance(u, Pred):
            return Pred(u.name, tuple(go(a, env) for a in u.args))
        if isinstance(u, Not):
            return Not(go(u.body, env))
        if isinstance(u, And):
            return And(go(u.left, env), go(u.right, env))
        if isinstance(u, Exists):
            vs, env2 = fresh_names(u.vars, env)
            return Exists(vs, go(u.body, env2))
        raise BLError(f"unexpected node {u!r}")

    return go(normal(t), {})


def alpha_eq(a, b) -> bool:
    return canon(a) == canon(b)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class AbstractClass:
    atomic: bool
    elementary: bool
    non_redundant: bool
    ordered: bool
    unlinked: bool


def is_atomic(t: Abstract) -> bool:
    return isinstance(t, Abstract) and isinstance(t.scope, Pred)


def is_elementary(t: Abstract) -> bool:
    return (is_atomic(t) and len(t.scope.args) == len(t.vseq)
            and all(isinstance(a, Var) and a.name == x for a, x in zip(t.scope.args, t.vseq)))


def redundant_vars(t: Abstract) -> list[str]:
    fv = set(free_vars(t.scope))
    return [x for x in t.vseq if x not in fv]


def _dedup(seq: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for x in seq:
        if x not in out:
            out.append(x)
    return tuple(out)


def f_sequence(t: Abstract) -> tuple[tuple[tuple[str, ...], ...], PerSeq, AbstractClass]:
    """Per argument, its v-sequence variables in order of first occurrence.

    Also returns the associated permutation p (``p.apply(vseq)`` is the
    deduplicated concatenation of the f-sequence; identity if the abstract
    is redundant) and the classification flags.
    """
    if not is_atomic(t):
        raise BLError("f-sequence needs an atomic abstract")
    vs = set(t.vseq)
    fseq = tuple(tuple(x for x in free_vars(a) if x in vs) for a in t.scope.args)
    flat = _dedup(x for w in fseq for x in w)
    non_redundant = set(flat) == vs
    if non_redundant:
        pos = {x: i for i, x in enumerate(t.vseq, 1)}
        perm = PerSeq(tuple(pos[x] for x in flat))
    else:
        perm = PerSeq.identity(len(t.vseq))
    ordered = non_redundant and perm.is_trivial
    counts: dict[str, int] = {}
    for w in fseq:
        for x in w:
            counts[x] = counts.get(x, 0) + 1
    unlinked = all(c == 1 for c in counts.values())
    cls = AbstractClass(True, is_elementary(t), non_redundant, ordered, unlinked)
    return fseq, perm, cls


def classify(t: Abstract) -> AbstractClass:
    if not is_atomic(t):
        return AbstractClass(False, False, not redundant_vars(t), False, False)
    return f_sequence(t)[2]


# ---------------------------------------------------------------------------
# metasyntactic operations


def rename_vseq(t: Abstract, names: Sequence[str]) -> Abstract:
    if len(names) != len(t.vseq):
        raise BLError("rename_vseq length mismatch")
    fresh = Fresh.above(t, avoid=names)
    return Abstract(subst(t.scope, {x: Var(y) for x, y in zip(t.vseq, names) if x != y}, fresh),
                    tuple(names))


def apply_log(kind: str, *args, mask: Sequence[int] | None = None) -> Abstract:
    if kind == "not":
        (a,) = args
        return Abstract(Not(a.scope), a.vseq)
    if kind == "and":
        a, b = args
        if a.vseq != b.vseq:
            raise BLError(f"LOG& needs identical v-sequences, got {a.vseq} and {b.vseq}")
        return Abstract(And(a.scope, b.scope), a.vseq)
    if kind == "exists":
        (a,) = args
        if mask is None or len(mask) != len(a.vseq) or any(m not in (0, 1) for m in mask):
            raise BLError(f"LOG-exists mask {mask} does not fit v-sequence {a.vseq}")
        bound = [x for x, m in zip(a.vseq, mask) if m]
        kept = tuple(x for x, m in zip(a.vseq, mask) if not m)
        return Abstract(exists(bound, a.scope), kept)
    raise BLError(f"unknown logical operation {kind!r}")


def apply_wire_map(f: Sequence[int], k: int, t: Abstract, fresh: Fresh | None = None) -> Abstract:
    """General modifier: v-sequence variable j is moved to new position f(j).

    Positions hit by several variables identify them; positions not hit get
    fresh (redundant) variables.
    """
    if len(f) != len(t.vseq):
        raise BLError(f"modifier over {len(f)} wires applied to v-sequence {t.vseq}")
    if fresh is None:
        fresh = Fresh.above(t)
    new: list = [None] * k
    for x, target in zip(t.vseq, f):
        if new[target - 1] is None:
            new[target - 1] = x
    new = [x if x is not None else fresh() for x in new]
    mapping = {x: Var(new[target - 1]) for x, target in zip(t.vseq, f) if new[target - 1] != x}
    return Abstract(subst(t.scope, mapping, fresh), tuple(new))


def apply_dum(s: DumSeq, t: Abstract, fresh: Fresh | None = None) -> Abstract:
    if len(s) != len(t.vseq) + 1:
        raise BLError(f"DUM{s} needs a v-sequence of length {len(s) - 1}")
    f, k = wire_map("dum", s)
    return apply_wire_map(f, k, t, fresh)


def apply_per(p: PerSeq, t: Abstract) -> Abstract:
    if p.n != len(t.vseq):
        raise BLError(f"PER of size {p.n} on v-sequence {t.vseq}")
    return Abstract(t.scope, p.apply(t.vseq))


def apply_link(s: LinkSeq, t: Abstract, check: bool = True) -> Abstract:
    if s.n != len(t.vseq):
        raise BLError(f"LINK over {s.n} on v-sequence {t.vseq}")
    if check:
        cls = classify(t)
        if not (cls.atomic and cls.non_redundant):
            raise BLError("LINK needs an atomic, non-redundant abstract")
    f, k = wire_map("link", s)
    return apply_wire_map(f, k, t)


def apply_comb(s: CombSeq, head: Abstract, args: Sequence[Term], fresh: Fresh | None = None) -> Abstract:
    """Generalised substitution of arguments into the head's v-sequence.

    Argument j (abstract with v-sequence length a_j, plugged at the position
    of the j-th numeric entry e) is truncated to its first a_j - e variables;
    the remaining e variables join the result v-sequence at that position.
    """
    if len(s) != len(head.vseq):
        raise BLError(f"COMB{s} needs a head of v-sequence length {len(s)}")
    if len(args) != len(s.starless):
        raise BLError(f"COMB{s} takes {len(s.starless)} arguments, got {len(args)}")
    if fresh is None:
        fresh = Fresh.above(head, *args)
    arg_free: set = set()
    for a in args:
        arg_free |= set(free_vars(a))
    if arg_free & set(head.vseq):
        head = rename_vseq(head, [fresh() if x in arg_free else x for x in head.vseq])
    taken = set(head.vseq) | set(free_vars(head)) | arg_free
    mapping: dict = {}
    out_vseq: list[str] = []
    j = 0
    for x, e in zip(head.vseq, s):
        if e == STAR:
            out_vseq.append(x)
            continue
        a = args[j]
        j += 1
        if isinstance(a, Abstract):
            if len(a.vseq) < e:
                raise BLError(f"argument {j} has arity {len(a.vseq)} < {e}")
            names = [n if n not in taken else fresh() for n in a.vseq]
            taken.update(names)
            a = rename_vseq(a, names) if tuple(names) != a.vseq else a
            cut = len(a.vseq) - e
            mapping[x] = Abstract(a.scope, a.vseq[:cut])
            out_vseq.extend(a.vseq[cut:])
        else:
            if e != 0:
                raise BLError(f"argument {j} is not an abstract but its entry is {e}")
            mapping[x] = a
    return Abstract(subst(head.scope, mapping, fresh), tuple(out_vseq))


# ---------------------------------------------------------------------------
# decomposition lemmas


@dataclass(frozen=True)
class LogNode:
    """A node of the logical decomposition tree; leaves are atomic abstracts."""

    op: str
    children: tuple
    mask: tuple = ()


def logical_tree_decompose(t: Abstract):
    """Split an abstract into LOG&/LOG~/LOG-exists over atomic leaves.

    Universal quantifiers are read as ``~ex~``; the variables of an
    existential block are appended to the v-sequence in block order.
    """
    t = normal(t)
    return _log_tree(t.scope, t.vseq)


def _log_tree(phi: Formula, vseq: tuple):
    if isinstance(phi, Pred):
        return Abstract(phi, vseq)
    if isinstance(phi, Not):
        return LogNode("not", (_log_tree(phi.body, vseq),))
    if isinstance(phi, And):
        return LogNode("and", (_log_tree(phi.left, vseq), _log_tree(phi.right, vseq)))
    if isinstance(phi, Exists):
        clash = set(phi.vars) & set(vseq)
        if clash:
            raise BLError(f"bound variables {sorted(clash)} shadow the v-sequence")
        mask = (0,) * len(vseq) + (1,) * len(phi.vars)
        return LogNode("exists", (_log_tree(phi.body, vseq + phi.vars),), mask)
    raise BLError(f"unexpected formula {phi!r}")


def rebuild_log_tree(tree) -> Abstract:
    if isinstance(tree, Abstract):
        return tree
    kids = [rebuild_log_tree(c) for c in tree.children]
    if tree.op == "exists":
        return apply_log("exists", *kids, mask=tree.mask)
    return apply_log(tree.op, *kids)


def extract_modifiers(t: Abstract):
    """Factor an atomic abstract as ``DUM PER LINK core``.

    The core is atomic, non-redundant, ordered and unlinked; repeated
    variables are replaced by primed copies.  Trivial factors are None.
    """
    if not is_atomic(t):
        raise BLError("extract_modifiers needs an atomic abstract")
    fv = set(free_vars(t.scope))
    kept = tuple(x for x in t.vseq if x in fv)
    dum = None
    if len(kept) != len(t.vseq):
        gaps, run = [], 0
        for x in t.vseq:
            if x in fv:
                gaps.append(run)
                run = 0
            else:
                run += 1
        gaps.append(run)
        dum = DumSeq(tuple(gaps))
    nr = Abstract(t.scope, kept)
    fseq, perm, _ = f_sequence(nr)
    order = _dedup(x for w in fseq for x in w)
    per = None
    if order != kept:
        pos = {x: i for i, x in enumerate(order, 1)}
        per = PerSeq(tuple(pos[x] for x in kept))
    flat = [x for w in fseq for x in w]
    used = set(all_names(t))
    copies: list[str] = []
    seen: set[str] = set()
    renames: list[dict] = []
    for w in fseq:
        local = {}
        for x in w:
            if x in seen:
                c = x + "'"
                while c in used:
                    c += "'"
                used.add(c)
                local[x] = c
                copies.append(c)
            else:
                seen.add(x)
                copies.append(x)
        renames.append(local)
    link = LinkSeq.from_labels(flat)
    args = tuple(subst(a, {x: Var(c) for x, c in r.items()}) for a, r in zip(t.scope.args, renames))
    core = Abstract(Pred(t.scope.name, args), tuple(copies))
    return dum, per, (None if link.is_trivial else link), core


def reapply_modifiers(dum, per, link, core: Abstract) -> Abstract:
    t = core
    if link is not None:
        t = apply_link(link, t)
    if per is not None:
        t = apply_per(per, t)
    if dum is not None:
        t = apply_dum(dum, t)
    return t


def extract_comb(t: Abstract, fresh: Fresh | None = None):
    """``t = COMB_s [P(x1..xn)]_{x1..xn} args`` for an atomic, non-redundant,
    ordered, unlinked, non-elementary abstract."""
    fseq, _, cls = f_sequence(t)
    if not (cls.non_redundant and cls.ordered and cls.unlinked):
        raise BLError("extract_comb needs a non-redundant, ordered, unlinked abstract")
    if cls.elementary:
        raise BLError("extract_comb: abstract is already elementary")
    if fresh is None:
        fresh = Fresh.above(t)
    vs = set(t.vseq)
    entries: list = []
    args: list = []
    for a, w in zip(t.scope.args, fseq):
        if isinstance(a, Var) and a.name in vs:
            entries.append(STAR)
        elif not w:
            entries.append(0)
            args.append(a)
        else:
            if not isinstance(a, Abstract):
                raise BLError(f"argument {a!r} carries v-sequence variables but is not an abstract")
            entries.append(len(w))
            args.append(Abstract(a.scope, a.vseq + w))
    xs = fresh.many(len(entries))
    head = Abstract(Pred(t.scope.name, tuple(Var(x) for x in xs)), xs)
    try:
        s = CombSeq(tuple(entries))
    except SequenceError as exc:
        raise BLError(str(exc)) from exc
    return s, head, args
