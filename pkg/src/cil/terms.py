"""CIL terms, signatures and sort checking.

Every node computes its sort when it is built, so an ill-sorted term cannot
be constructed.  Primitives carry their declared sort; a :class:`Signature`
is only needed to check declarations and to parse names.

Structural parameters follow :mod:`cil.seqcomb`.  The plain constructors
reject trivial parameters; the ``mk_*`` helpers elide them instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .seqcomb import (STAR, CombSeq, DumSeq, LinkSeq, PerSeq, SequenceError,
                      compose_maps, factor_wire_map, is_identity_map, wire_map)

EQ_I = "Eq_I"
EQ_N = "Eq_N"
TRUTH = "Truth"
DISTINGUISHED = {EQ_I: 2, EQ_N: 2, TRUTH: 0}


class SortError(ValueError):
    """A term does not sort-check, or a parameter is trivial where it may not be."""


@dataclass(frozen=True)
class Signature:
    """Primitive names with their sorts; the distinguished entries are always present."""

    entries: tuple = ()

    def __post_init__(self) -> None:
        merged = dict(DISTINGUISHED)
        for name, sort in dict(self.entries).items():
            if not isinstance(sort, int) or sort < -1:
                raise SortError(f"sort of {name} must be an integer >= -1, got {sort!r}")
            if name in merged and merged[name] != sort:
                raise SortError(f"{name} redeclared with sort {sort} (was {merged[name]})")
            merged[name] = sort
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, mapping: Mapping[str, int] | None = None, **kw: int) -> "Signature":
        items = dict(mapping or {})
        items.update(kw)
        return cls(tuple(items.items()))

    def __contains__(self, name: str) -> bool:
        return name in dict(self.entries)

    def __getitem__(self, name: str) -> int:
        try:
            return dict(self.entries)[name]
        except KeyError:
            raise SortError(f"undeclared primitive {name}") from None

    def declare(self, name: str, sort: int) -> "Signature":
        return Signature(self.entries + ((name, sort),))

    def prim(self, name: str) -> "Prim":
        return Prim(name, self[name])

    def user_entries(self) -> dict:
        return {k: v for k, v in self.entries if k not in DISTINGUISHED}


# ---------------------------------------------------------------------------
# nodes


class Node:
    """Common behaviour: cached hash and the computed ``sort`` attribute."""

    __slots__ = ()

    def _finish(self, sort) -> None:
        object.__setattr__(self, "sort", sort)
        object.__setattr__(self, "_h", hash((type(self).__name__,) + self._key()))

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, eq=True)
class Prim(Node):
    name: str
    declared: int
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.declared, int) or self.declared < -1:
            raise SortError(f"bad sort {self.declared!r} for primitive {self.name}")
        self._finish(self.declared)

    def _key(self):
        return (self.name, self.declared)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class PseudoVar(Node):
    name: str
    sort: object = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._finish(None)

    def _key(self):
        return (self.name,)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


def _need_sort(t, what: str) -> int:
    if isinstance(t, PseudoVar):
        raise SortError(f"pseudo-variable ?{t.name} cannot be the operand of {what}")
    if t.sort < 0:
        raise SortError(f"{what} needs an operand of sort >= 0, got sort {t.sort}")
    return t.sort


@dataclass(frozen=True, eq=True)
class Comb(Node):
    seq: CombSeq
    head: Node
    args: tuple
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        n = _need_sort(self.head, "comb")
        if n != len(self.seq):
            raise SortError(f"comb{self.seq} needs a head of sort {len(self.seq)}, got {n}")
        entries = self.seq.starless
        if len(self.args) != len(entries):
            raise SortError(f"comb{self.seq} takes {len(entries)} arguments, got {len(self.args)}")
        for i, (e, a) in enumerate(zip(entries, self.args), 1):
            if isinstance(a, PseudoVar) or a.sort == -1:
                if e != 0:
                    raise SortError(f"argument {i} of comb{self.seq} has no wires but entry {e}")
            elif a.sort < e:
                raise SortError(f"argument {i} of comb{self.seq} has sort {a.sort} < {e}")
        self._finish(self.seq.star_count + sum(entries))

    def _key(self):
        return (self.seq, self.head, self.args)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Link(Node):
    seq: LinkSeq
    body: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = _need_sort(self.body, "link")
        if self.seq.n != n:
            raise SortError(f"link over ground size {self.seq.n} applied to sort {n}")
        if self.seq.is_trivial:
            raise SortError("trivial link")
        self._finish(len(self.seq))

    def _key(self):
        return (self.seq, self.body)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Per(Node):
    seq: PerSeq
    body: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = _need_sort(self.body, "per")
        if self.seq.n != n:
            raise SortError(f"per of size {self.seq.n} applied to sort {n}")
        if self.seq.is_trivial:
            raise SortError("trivial per")
        self._finish(n)

    def _key(self):
        return (self.seq, self.body)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Dum(Node):
    seq: DumSeq
    body: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = _need_sort(self.body, "dum")
        if len(self.seq) != n + 1:
            raise SortError(f"dum{self.seq} needs an operand of sort {len(self.seq) - 1}, got {n}")
        if self.seq.is_trivial:
            raise SortError("trivial dum")
        self._finish(n + sum(self.seq.entries))

    def _key(self):
        return (self.seq, self.body)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Neg(Node):
    body: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._finish(_need_sort(self.body, "not"))

    def _key(self):
        return (self.body,)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Conj(Node):
    left: Node
    right: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        a = _need_sort(self.left, "and")
        b = _need_sort(self.right, "and")
        if a != b:
            raise SortError(f"and needs operands of equal sort, got {a} and {b}")
        self._finish(a)

    def _key(self):
        return (self.left, self.right)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


@dataclass(frozen=True, eq=True)
class Ex(Node):
    mask: tuple
    body: Node
    sort: int = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        mask = tuple(self.mask)
        object.__setattr__(self, "mask", mask)
        n = _need_sort(self.body, "ex")
        if len(mask) != n or any(m not in (0, 1) for m in mask):
            raise SortError(f"ex{list(mask)} does not fit an operand of sort {n}")
        if 1 not in mask:
            raise SortError("trivial ex")
        self._finish(n - sum(mask))

    def _key(self):
        return (self.mask, self.body)

    __hash__ = Node.__hash__
    __str__ = Node.__str__


Term = Union[Prim, PseudoVar, Comb, Link, Per, Dum, Neg, Conj, Ex]
MODIFIERS = (Dum, Per, Link)
MOD_KIND = {Dum: "dum", Per: "per", Link: "link"}


def children(t) -> tuple:
    if isinstance(t, Comb):
        return (t.head,) + t.args
    if isinstance(t, (Link, Per, Dum, Neg, Ex)):
        return (t.body,)
    if isinstance(t, Conj):
        return (t.left, t.right)
    return ()


def with_children(t, kids: Sequence):
    kids = tuple(kids)
    if isinstance(t, Comb):
        return Comb(t.seq, kids[0], kids[1:])
    if isinstance(t, (Link, Per, Dum)):
        return type(t)(t.seq, kids[0])
    if isinstance(t, Neg):
        return Neg(kids[0])
    if isinstance(t, Ex):
        return Ex(t.mask, kids[0])
    if isinstance(t, Conj):
        return Conj(kids[0], kids[1])
    return t


def subterm(t, path: Sequence[int]):
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t, path: Sequence[int], new):
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(t, kids)


def size(t) -> int:
    return 1 + sum(size(c) for c in children(t))


def depth(t) -> int:
    return 1 + max((depth(c) for c in children(t)), default=0)


def prims(t) -> set:
    if isinstance(t, Prim):
        return {t}
    out: set = set()
    for c in children(t):
        out |= prims(c)
    return out


def pseudo_vars(t) -> list[str]:
    out: list[str] = []

    def walk(u):
        if isinstance(u, PseudoVar):
            if u.name not in out:
                out.append(u.name)
        for c in children(u):
            walk(c)

    walk(t)
    return out


def sort_of(t, sig: Signature | None = None) -> int:
    """Sort of a term; with a signature, also checks every primitive's declaration."""
    if isinstance(t, PseudoVar):
        raise SortError(f"pseudo-variable ?{t.name} has no sort")
    if sig is not None:
        for p in prims(t):
            if sig[p.name] != p.declared:
                raise SortError(f"{p.name} used with sort {p.declared}, declared {sig[p.name]}")
    return t.sort


# ---------------------------------------------------------------------------
# smart constructors


def mk_link(s: LinkSeq, t):
    return t if s.is_trivial else Link(s, t)


def mk_per(p: PerSeq, t):
    return t if p.is_trivial else Per(p, t)


def mk_dum(s: DumSeq, t):
    return t if s.is_trivial else Dum(s, t)


def mk_ex(mask: Sequence[int], t):
    return Ex(tuple(mask), t) if 1 in mask else t


def mk_comb(s: CombSeq | Sequence, head, args: Sequence):
    entries = tuple(s.entries if isinstance(s, CombSeq) else s)
    if all(e == STAR for e in entries):
        if args:
            raise SortError("all-star comb with arguments")
        return head
    return Comb(CombSeq(entries), head, tuple(args))


def mk_mods(f: Sequence[int], k: int, t):
    """Wrap ``t`` in the canonical dum/per/link chain with wire map ``f``."""
    if is_identity_map(f, k):
        return t
    dum, per, link = factor_wire_map(f, k)
    if link is not None:
        t = Link(link, t)
    if per is not None:
        t = Per(per, t)
    if dum is not None:
        t = Dum(dum, t)
    return t


def mod_map(t) -> tuple[tuple[int, ...], int]:
    return wire_map(MOD_KIND[type(t)], t.seq)


def mod_chain(t) -> tuple[tuple[int, ...], int, object, list]:
    """Peel all directly nested modifiers: ``(f, k, core, nodes)`` with ``f`` the composite."""
    nodes = []
    while isinstance(t, MODIFIERS):
        nodes.append(t)
        t = t.body
    k = t.sort
    f = tuple(range(1, k + 1))
    for node in reversed(nodes):
        g, k = mod_map(node)
        f = compose_maps(f, g)
    return f, k, t, nodes


# ---------------------------------------------------------------------------
# application sequences and wires


@dataclass(frozen=True)
class AppEntry:
    """The m-th argument, with ``used`` wires exported and ``residual`` kept inside."""

    arg: int
    used: int
    residual: int


def application_sequence(t) -> tuple:
    if not isinstance(t, Comb):
        raise SortError("application sequence of a non-comb term")
    out = []
    m = 0
    for e in t.seq:
        if e == STAR:
            out.append(STAR)
            continue
        a = t.args[m]
        m += 1
        arity = a.sort if isinstance(a, Node) and not isinstance(a, PseudoVar) and a.sort >= 0 else e
        out.append(AppEntry(m, e, arity - e))
    return tuple(out)


def comb_groups(t: Comb) -> list[tuple]:
    """Output wires of a comb grouped by head position: ``(position, arg index|None, wires)``."""
    groups = []
    w = 1
    m = 0
    for i, e in enumerate(t.seq, 1):
        if e == STAR:
            groups.append((i, None, (w,)))
            w += 1
        else:
            groups.append((i, m, tuple(range(w, w + e))))
            w += e
            m += 1
    return groups


def used_wires(t) -> frozenset:
    """Wires (1..sort) whose variable occurs free in the translation."""
    return _used(t)


_USED: dict = {}


def _used(t) -> frozenset:
    hit = _USED.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Prim):
        r = frozenset(range(1, t.sort + 1))
    elif isinstance(t, PseudoVar):
        r = frozenset()
    elif isinstance(t, MODIFIERS):
        f, _ = mod_map(t)
        r = frozenset(f[j - 1] for j in _used(t.body))
    elif isinstance(t, Neg):
        r = _used(t.body)
    elif isinstance(t, Conj):
        r = _used(t.left) | _used(t.right)
    elif isinstance(t, Ex):
        kept = [j for j, m in enumerate(t.mask, 1) if not m]
        ub = _used(t.body)
        r = frozenset(i for i, j in enumerate(kept, 1) if j in ub)
    elif isinstance(t, Comb):
        uh = _used(t.head)
        out = set()
        for pos, m, wires in comb_groups(t):
            if pos not in uh or not wires:
                continue
            if m is None:
                out.update(wires)
            else:
                a = t.args[m]
                ua = _used(a)
                off = a.sort - len(wires)
                out.update(w for q, w in enumerate(wires, 1) if off + q in ua)
        r = frozenset(out)
    else:
        raise SortError(f"not a CIL term: {t!r}")
    if len(_USED) > 200000:
        _USED.clear()
    _USED[t] = r
    return r


def strip_wire(t, j: int):
    """Remove the unused wire ``j``; the result has sort one less and the
    same translation with the vacuous variable dropped."""
    if j in used_wires(t):
        raise SortError(f"wire {j} is used")
    if isinstance(t, MODIFIERS):
        f, k, core, _ = mod_chain(t)
        pre = sorted((i for i, v in enumerate(f, 1) if v == j), reverse=True)
        for i in pre:
            core = strip_wire(core, i)
        f2 = [v if v < j else v - 1 for i, v in enumerate(f, 1) if v != j]
        return mk_mods(f2, k - 1, core)
    if isinstance(t, Neg):
        return Neg(strip_wire(t.body, j))
    if isinstance(t, Conj):
        return Conj(strip_wire(t.left, j), strip_wire(t.right, j))
    if isinstance(t, Ex):
        kept = [i for i, m in enumerate(t.mask, 1) if not m]
        target = kept[j - 1]
        mask = t.mask[:target - 1] + t.mask[target:]
        return Ex(mask, strip_wire(t.body, target))
    if isinstance(t, Comb):
        for pos, m, wires in comb_groups(t):
            if j not in wires:
                continue
            entries = list(t.seq)
            if m is None:
                del entries[pos - 1]
                return mk_comb(entries, strip_wire(t.head, pos), t.args)
            a = t.args[m]
            q = wires.index(j) + 1
            inner = a.sort - len(wires) + q
            if inner not in used_wires(a):
                entries[pos - 1] -= 1
                args = list(t.args)
                args[m] = strip_wire(a, inner)
                return Comb(CombSeq(tuple(entries)), t.head, args)
            # the head ignores this position: drop the argument, keep the other wires loose
            del entries[pos - 1]
            args = t.args[:m] + t.args[m + 1:]
            body = mk_comb(entries, strip_wire(t.head, pos), args)
            gap = wires[0] - 1
            f = [v if v <= gap else v + len(wires) - 1 for v in range(1, body.sort + 1)]
            return mk_mods(f, body.sort + len(wires) - 1, body)
    raise SortError(f"cannot strip wire {j} from {t!r}")


# ---------------------------------------------------------------------------
# printing


def show_link(s: LinkSeq) -> str:
    return ",".join("{" + ",".join(map(str, b)) + "}" for b in s.blocks)


def show(t) -> str:
    if isinstance(t, Prim):
        return t.name
    if isinstance(t, PseudoVar):
        return "?" + t.name
    if isinstance(t, Comb):
        seq = ",".join(str(e) for e in t.seq)
        return f"comb[{seq}](" + ", ".join(show(c) for c in (t.head,) + t.args) + ")"
    if isinstance(t, Link):
        return f"link[{show_link(t.seq)}]({show(t.body)})"
    if isinstance(t, Per):
        return f"per[{','.join(map(str, t.seq.images))}]({show(t.body)})"
    if isinstance(t, Dum):
        return f"dum[{','.join(map(str, t.seq.entries))}]({show(t.body)})"
    if isinstance(t, Neg):
        return f"not({show(t.body)})"
    if isinstance(t, Conj):
        return f"and({show(t.left)}, {show(t.right)})"
    if isinstance(t, Ex):
        return f"ex[{','.join(map(str, t.mask))}]({show(t.body)})"
    raise SortError(f"not a CIL term: {t!r}")
