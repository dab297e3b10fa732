"""Random and exhaustive term generators used by the property suites."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from . import bl
from .seqcomb import (STAR, CombSeq, DumSeq, LinkSeq, PerSeq, all_partitions,
                      all_permutations)
from .terms import (Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar,
                    Signature, SortError)

DEFAULT_SIG = Signature.of(P=1, Q=2, R=3, A=1, B=2, c=-1, d=-1, T=0)
MAX_SORT = 4


def fit(t, want: int, rng: random.Random):
    """Adjust ``t`` to sort ``want`` with a dum (padding) or an ex (quantifying)."""
    n = t.sort
    if n == want:
        return t
    if n < want:
        extra = want - n
        entries = [0] * (n + 1)
        for _ in range(extra):
            entries[rng.randrange(n + 1)] += 1
        return Dum(DumSeq(tuple(entries)), t)
    mask = [0] * n
    for i in rng.sample(range(n), n - want):
        mask[i] = 1
    return Ex(tuple(mask), t)


class TermGen:
    """Random well-sorted CIL terms over a signature."""

    def __init__(self, sig: Signature = DEFAULT_SIG, rng: random.Random | None = None,
                 pseudo: Sequence[str] = (), max_sort: int = MAX_SORT, max_entry: int = 2):
        self.sig = sig
        self.rng = rng or random.Random(0)
        self.pseudo = tuple(pseudo)
        self.max_sort = max_sort
        self.max_entry = max_entry
        self.by_sort: dict = {}
        for name, s in sig.user_entries().items():
            self.by_sort.setdefault(s, []).append(Prim(name, s))
        self.sorted_prims = [p for s, ps in self.by_sort.items() if s >= 0 for p in ps]

    def prim(self, want: int | None = None):
        r = self.rng
        if want is not None and self.by_sort.get(want) and r.random() < 0.7:
            return r.choice(self.by_sort[want])
        p = r.choice(self.sorted_prims)
        return p if want is None else fit(p, want, r)

    def term(self, depth: int, want: int | None = None):
        r = self.rng
        if depth <= 0 or r.random() < 0.2:
            return self.prim(want)
        op = r.choice(["comb", "comb", "comb", "link", "per", "dum", "neg", "conj", "ex"])
        t = getattr(self, "_" + op)(depth - 1)
        if t.sort > self.max_sort:
            t = fit(t, r.randint(0, self.max_sort), r)
        return t if want is None else fit(t, want, r)

    def _neg(self, d):
        return Neg(self.term(d))

    def _conj(self, d):
        a = self.term(d)
        return Conj(a, self.term(d, a.sort))

    def _ex(self, d):
        b = self.term(d)
        if b.sort == 0:
            b = fit(b, self.rng.randint(1, 2), self.rng)
        mask = [self.rng.randint(0, 1) for _ in range(b.sort)]
        if 1 not in mask:
            mask[self.rng.randrange(b.sort)] = 1
        return Ex(tuple(mask), b)

    def _dum(self, d):
        b = self.term(d)
        entries = [0] * (b.sort + 1)
        entries[self.rng.randrange(b.sort + 1)] = self.rng.randint(1, 2)
        return Dum(DumSeq(tuple(entries)), b)

    def _per(self, d):
        b = self.term(d)
        if b.sort < 2:
            b = fit(b, self.rng.randint(2, 3), self.rng)
        while True:
            images = list(range(1, b.sort + 1))
            self.rng.shuffle(images)
            p = PerSeq(tuple(images))
            if not p.is_trivial:
                return Per(p, b)

    def _link(self, d):
        b = self.term(d)
        if b.sort < 2:
            b = fit(b, self.rng.randint(2, 3), self.rng)
        while True:
            labels = [self.rng.randrange(b.sort) for _ in range(b.sort)]
            s = LinkSeq.from_labels(labels)
            if not s.is_trivial:
                return Link(s, b)

    def _comb(self, d):
        r = self.rng
        head = self.term(d)
        if head.sort == 0:
            head = fit(head, r.randint(1, 3), r)
        entries = [STAR if r.random() < 0.35 else r.randint(0, self.max_entry) for _ in range(head.sort)]
        if all(e == STAR for e in entries):
            entries[r.randrange(len(entries))] = r.randint(0, self.max_entry)
        args = []
        for e in entries:
            if e == STAR:
                continue
            if e == 0 and r.random() < 0.3:
                pool = list(self.by_sort.get(-1, [])) + [PseudoVar(x) for x in self.pseudo]
                if pool:
                    args.append(r.choice(pool))
                    continue
            a = self.term(d)
            if a.sort < e:
                a = fit(a, e + r.randint(0, 1), r)
            args.append(a)
        return Comb(CombSeq(tuple(entries)), head, args)


def random_term(rng: random.Random, depth: int = 4, sig: Signature = DEFAULT_SIG,
                pseudo: Sequence[str] = (), want: int | None = None):
    return TermGen(sig, rng, pseudo).term(depth, want)


# ---------------------------------------------------------------------------
# BL abstracts


class AbstractGen:
    """Random closed BL abstracts; ``depth`` bounds formula nesting."""

    def __init__(self, sig: Signature = DEFAULT_SIG, rng: random.Random | None = None,
                 free: Sequence[str] = ()):
        self.sig = sig
        self.rng = rng or random.Random(0)
        self.preds = [(n, s) for n, s in sig.user_entries().items() if s >= 0]
        self.consts = [n for n, s in sig.user_entries().items() if s == -1]
        self.counter = 0
        self.free = tuple(free)

    def fresh(self) -> str:
        self.counter += 1
        return f"y{self.counter}"

    def abstract(self, depth: int, scope: Sequence[str] = ()) -> bl.Abstract:
        r = self.rng
        k = r.randint(0, 3)
        xs = tuple(self.fresh() for _ in range(k))
        body = self.formula(depth, tuple(scope) + xs + self.free)
        vseq = list(xs)
        r.shuffle(vseq)
        return bl.Abstract(body, tuple(vseq))

    def formula(self, depth: int, scope: tuple):
        r = self.rng
        if depth <= 0 or r.random() < 0.35:
            return self.atom(depth, scope)
        op = r.choice(["not", "and", "ex", "all"])
        if op == "not":
            return bl.Not(self.formula(depth - 1, scope))
        if op == "and":
            return bl.And(self.formula(depth - 1, scope), self.formula(depth - 1, scope))
        ys = tuple(self.fresh() for _ in range(r.randint(1, 2)))
        body = self.formula(depth - 1, scope + ys)
        return (bl.Exists if op == "ex" else bl.Forall)(ys, body)

    def atom(self, depth: int, scope: tuple):
        r = self.rng
        name, arity = r.choice(self.preds)
        args = []
        for _ in range(arity):
            c = r.random()
            if scope and c < 0.5:
                args.append(bl.Var(r.choice(scope)))
            elif depth > 0 and c < 0.8:
                args.append(self.abstract(depth - 1, scope))
            elif self.consts:
                args.append(bl.Const(r.choice(self.consts)))
            else:
                args.append(self.abstract(0, scope))
        return bl.Pred(name, tuple(args))


def random_abstract(rng: random.Random, depth: int = 4, sig: Signature = DEFAULT_SIG) -> bl.Abstract:
    return AbstractGen(sig, rng).abstract(depth)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _comb_seqs(n: int, max_entry: int) -> Iterator[CombSeq]:
    for entries in itertools.product([STAR] + list(range(max_entry + 1)), repeat=n):
        if any(e != STAR for e in entries):
            yield CombSeq(entries)


def _dum_seqs(n: int, max_sum: int) -> Iterator[DumSeq]:
    for entries in itertools.product(range(max_sum + 1), repeat=n + 1):
        if 0 < sum(entries) <= max_sum:
            yield DumSeq(entries)


def _masks(n: int) -> Iterator[tuple]:
    for mask in itertools.product((0, 1), repeat=n):
        if 1 in mask:
            yield mask


def enumerate_terms(prims: Sequence[Prim], max_size: int, max_sort: int = 3,
                    max_entry: int = 1, max_dum: int = 1) -> dict[int, list]:
    """Every well-sorted term with at most ``max_size`` nodes over ``prims``.

    Returns terms grouped by size.  Sorts are capped at ``max_sort``, comb
    entries at ``max_entry`` and dum insertions at ``max_dum`` so the
    enumeration stays finite and tractable.
    """
    by_size: dict[int, list] = {1: [p for p in prims if p.sort <= max_sort]}
    for size in range(2, max_size + 1):
        out: list = []
        for t in by_size.get(size - 1, []):
            if isinstance(t, PseudoVar) or t.sort < 0:
                continue
            n = t.sort
            out.append(Neg(t))
            for mask in _masks(n):
                out.append(Ex(mask, t))
            for s in _dum_seqs(n, max_dum):
                if n + sum(s.entries) <= max_sort:
                    out.append(Dum(s, t))
            for p in all_permutations(n):
                if not p.is_trivial:
                    out.append(Per(p, t))
            for s in all_partitions(n):
                if not s.is_trivial:
                    out.append(Link(s, t))
        for ls in range(1, size - 1):
            rs = size - 1 - ls
            for a in by_size.get(ls, []):
                if a.sort < 0:
                    continue
                for b in by_size.get(rs, []):
                    if b.sort == a.sort:
                        out.append(Conj(a, b))
        # comb: head plus k arguments, sizes summing to size - 1
        for hs in range(1, size - 1):
            for head in by_size.get(hs, []):
                if head.sort < 1:
                    continue
                for s in _comb_seqs(head.sort, max_entry):
                    k = len(s.starless)
                    for arg_sizes in _compositions(size - 1 - hs, k):
                        pools = []
                        for e, asz in zip(s.starless, arg_sizes):
                            pool = [a for a in by_size.get(asz, []) if a.sort >= e or (e == 0)]
                            pools.append(pool)
                        for args in itertools.product(*pools):
                            try:
                                t = Comb(s, head, args)
                            except SortError:
                                continue
                            if t.sort <= max_sort:
                                out.append(t)
        by_size[size] = out
    return by_size


def _compositions(total: int, k: int) -> Iterator[tuple]:
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest
