"""Finite term models for CIL.

Elements are alpha-classes of closed BL terms, represented by their
``bl.canon`` copies: constants are individuals (sort -1) and abstracts with
n variables are n-ary senses.  The carrier is a finite, depth-bounded set of
elements; it is the range of quantifiers and the support of the base
relations.  Saturating a relation with carrier elements can produce terms
outside the carrier; these are still elements of the term model and are
evaluated normally.

An extension assigns each declared predicate a finite relation over the
carrier.  ``Eq_I`` (identity), ``Truth`` (always true) and ``Eq_N``
(agreement across every extension of the family) are never configured.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import bl
from .bl import Abstract, Const, Var
from .seqcomb import STAR, wire_map
from .terms import (Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar,
                    Signature, SortError, pseudo_vars)
from .translate import bealer_decompose, default_pvmap, j_translate

FORCED = (bl.EQ_I, bl.EQ_N, bl.TRUTH)
TRUTH_ELEMENT = Abstract(bl.Pred(bl.TRUTH, ()), ())
FALSE_ELEMENT = Abstract(bl.Not(bl.Pred(bl.TRUTH, ())), ())


class ModelError(ValueError):
    pass


def element(t):
    """Carrier representative of a closed BL term."""
    if isinstance(t, Var):
        raise ModelError(f"free variable {t.name} is not an element")
    if bl.free_vars(t):
        raise ModelError(f"free variables {bl.free_vars(t)} in {t!r}")
    return bl.canon(t)


def sort_of_element(e) -> int:
    if isinstance(e, Const):
        return -1
    if isinstance(e, Abstract):
        return len(e.vseq)
    raise ModelError(f"not an element: {e!r}")


def element_depth(e) -> int:
    """Nesting depth of abstracts: constants 0, ``[P(x)]_x`` 1, ``[P([Q])]`` 2."""
    if isinstance(e, (Var, Const)):
        return 0
    if isinstance(e, Abstract):
        return 1 + _formula_depth(e.scope)
    return _formula_depth(e)


def _formula_depth(f) -> int:
    if isinstance(f, bl.Pred):
        return max((element_depth(a) for a in f.args), default=0)
    if isinstance(f, bl.Not):
        return _formula_depth(f.body)
    if isinstance(f, bl.And):
        return max(_formula_depth(f.left), _formula_depth(f.right))
    if isinstance(f, (bl.Exists, bl.Forall)):
        return _formula_depth(f.body)
    return element_depth(f)


def saturate(e: Abstract, values: Sequence) -> Abstract:
    """Fill the last ``len(values)`` v-sequence places of ``e`` (Comb with entry k)."""
    k = len(values)
    if k == 0:
        return e
    if k > len(e.vseq):
        raise ModelError("too many values for saturation")
    keep, filled = e.vseq[:len(e.vseq) - k], e.vseq[len(e.vseq) - k:]
    body = bl.subst(e.scope, dict(zip(filled, values)))
    return bl.canon(Abstract(body, keep))


def _closed_subterms(t, out: list) -> None:
    if isinstance(t, Var):
        return
    if isinstance(t, Const):
        out.append(t)
        return
    if isinstance(t, Abstract):
        if not bl.free_vars(t):
            out.append(t)
        _closed_subterms(t.scope, out)
        return
    if isinstance(t, bl.Pred):
        for a in t.args:
            _closed_subterms(a, out)
    elif isinstance(t, bl.Not):
        _closed_subterms(t.body, out)
    elif isinstance(t, bl.And):
        _closed_subterms(t.left, out)
        _closed_subterms(t.right, out)
    elif isinstance(t, (bl.Exists, bl.Forall)):
        _closed_subterms(t.body, out)


# ---------------------------------------------------------------------------
# carrier


@dataclass(frozen=True)
class Carrier:
    """Finite family D_-1, D_0, D_1, ... of elements, each with one sort."""

    signature: Signature
    depth_bound: int
    elements: tuple

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ModelError("carrier elements must be distinct")
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    @classmethod
    def build(cls, sig: Signature, depth_bound: int = 2, seeds: Iterable = (),
              elementary: bool = True, propositions: bool = True) -> "Carrier":
        """Constants, elementary abstracts of the user predicates (and ``Eq_I``,
        ``Truth``), ground atoms over constants, ``seeds`` and their closed
        subterms, everything cut at ``depth_bound``.

        ``Eq_N`` never enters the carrier: a carrier element whose body asks
        for ``Eq_N`` would make its own computed extension circular.
        """
        found: list = []
        user = sig.user_entries()
        consts = [Const(n) for n, s in user.items() if s == -1]
        found.extend(consts)
        found.append(TRUTH_ELEMENT)
        if elementary:
            for name, s in list(user.items()) + [(bl.EQ_I, 2)]:
                if s >= 1:
                    xs = tuple(f"x{i}" for i in range(1, s + 1))
                    found.append(Abstract(bl.Pred(name, tuple(Var(x) for x in xs)), xs))
                elif s == 0 and name != bl.TRUTH:
                    found.append(Abstract(bl.Pred(name, ()), ()))
        if propositions and consts:
            for name, s in user.items():
                if s >= 1:
                    for args in itertools.product(consts, repeat=s):
                        found.append(Abstract(bl.Pred(name, args), ()))
        for seed in seeds:
            sub: list = []
            _closed_subterms(seed, sub)
            found.extend(sub)
        out: list = []
        seen: set = set()
        for t in found:
            e = element(t)
            if e in seen or element_depth(e) > depth_bound or _mentions(e, bl.EQ_N):
                continue
            seen.add(e)
            out.append(e)
        return cls(sig, depth_bound, tuple(out))

    def __contains__(self, e) -> bool:
        return e in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, e) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise ModelError(f"element outside the carrier: {e!r}") from None

    def of_sort(self, n: int) -> tuple:
        return tuple(e for e in self.elements if sort_of_element(e) == n)

    @property
    def sorts(self) -> list[int]:
        return sorted({sort_of_element(e) for e in self.elements})

    def with_elements(self, extra: Iterable) -> "Carrier":
        new = list(self.elements)
        for t in extra:
            e = element(t)
            if e not in self._index and e not in new:
                new.append(e)
        return Carrier(self.signature, self.depth_bound, tuple(new))


def _mentions(t, name: str) -> bool:
    if isinstance(t, (Var, Const)):
        return False
    if isinstance(t, Abstract):
        return _mentions(t.scope, name)
    if isinstance(t, bl.Pred):
        return t.name == name or any(_mentions(a, name) for a in t.args)
    if isinstance(t, bl.Not):
        return _mentions(t.body, name)
    if isinstance(t, bl.And):
        return _mentions(t.left, name) or _mentions(t.right, name)
    if isinstance(t, (bl.Exists, bl.Forall)):
        return _mentions(t.body, name)
    return False


# ---------------------------------------------------------------------------
# extensions


@dataclass
class Extension:
    """One state of affairs: base relations for the declared predicates."""

    name: str
    base: dict
    memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for p in self.base:
            if p in FORCED:
                raise ModelError(f"the extension of {p} is fixed and cannot be configured")
        self.base = {p: frozenset(tuple(r) for r in rel) for p, rel in self.base.items()}

    def holds(self, pred: str, args: tuple) -> bool:
        return tuple(args) in self.base.get(pred, frozenset())


@dataclass
class ModelConfig:
    """Carrier, the family K of extensions, the actual one, 𝐼 and 𝒜."""

    carrier: Carrier
    extensions: list
    actual: str
    interpretation: dict = field(default_factory=dict)
    assignment: dict = field(default_factory=dict)
    quantify: str = "all"

    def __post_init__(self) -> None:
        names = [h.name for h in self.extensions]
        if len(set(names)) != len(names):
            raise ModelError("extension names must be distinct")
        if self.actual not in names:
            raise ModelError(f"actual extension {self.actual!r} is not in K")
        if self.quantify not in ("all", "individuals"):
            raise ModelError("quantify must be 'all' or 'individuals'")
        sig = self.carrier.signature
        for p, a in self.interpretation.items():
            if p in FORCED:
                raise ModelError(f"{p} cannot be reinterpreted")
            want = sig[p]
            got = sort_of_element(a)
            if want != got:
                raise SortError(f"{p} has sort {want} but is interpreted by an element of sort {got}")
            if bl.free_vars(a):
                raise ModelError(f"interpretation of {p} is not closed")
        for v, e in self.assignment.items():
            if e not in self.carrier:
                raise ModelError(f"assignment of {v} is outside the carrier")
        for h in self.extensions:
            for p, rel in h.base.items():
                n = sig[p]
                for tup in rel:
                    if len(tup) != max(n, 0):
                        raise SortError(f"{h.name}: tuple {tup} for {p} has the wrong length")
                    for e in tup:
                        self.carrier.index(e)
        self._lock = threading.Lock()
        self._local = threading.local()

    @property
    def actual_extension(self) -> Extension:
        return self.extension(self.actual)

    def extension(self, name: str) -> Extension:
        for h in self.extensions:
            if h.name == name:
                return h
        raise ModelError(f"no extension named {name!r}")

    @property
    def domain(self) -> tuple:
        if self.quantify == "individuals":
            return self.carrier.of_sort(-1)
        return self.carrier.elements

    def replace(self, **changes) -> "ModelConfig":
        """Copy with some fields replaced; extensions get fresh memo tables."""
        data = dict(carrier=self.carrier,
                    extensions=[Extension(h.name, dict(h.base)) for h in self.extensions],
                    actual=self.actual, interpretation=dict(self.interpretation),
                    assignment=dict(self.assignment), quantify=self.quantify)
        data.update(changes)
        return ModelConfig(**data)

    # -- meaning of syntax --------------------------------------------------

    def meaning(self, t, assignment: Mapping | None = None):
        """M t: the element denoted by a BL term or CIL term under 𝐼 and 𝒜."""
        asg = dict(self.assignment)
        if assignment:
            asg.update(assignment)
        if isinstance(t, (Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar)):
            if isinstance(t, PseudoVar):
                return self._lookup(asg, t.name)
            names = pseudo_vars(t)
            pvmap = default_pvmap(names)
            image = j_translate(t, pvmap=pvmap)
            asg = {**asg, **{pvmap[n]: self._lookup(asg, n) for n in names}}
            t = image
        if isinstance(t, Var):
            return self._lookup(asg, t.name)
        free = bl.free_vars(t)
        missing = [v for v in free if v not in asg]
        if missing:
            raise ModelError(f"no assignment for {missing}")
        if self.interpretation:
            interp = {p: self.interpretation[p] for p in self.interpretation}
            t = bl.subst_preds(t, interp)
        if free:
            t = bl.subst(t, {v: asg[v] for v in free})
        return element(t)

    @staticmethod
    def _lookup(asg, name):
        if name in asg:
            return asg[name]
        if name.lower() in asg:
            return asg[name.lower()]
        raise ModelError(f"no assignment for {name}")


# ---------------------------------------------------------------------------
# evaluation


class _Evaluator:
    """Extension membership for elements, with per-extension memo tables."""

    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg
        self.decomp: dict = cfg.__dict__.setdefault("_decomp", {})

    def _stack(self) -> set:
        local = self.cfg._local
        if not hasattr(local, "eqn"):
            local.eqn = set()
        return local.eqn

    # via the Bealer decomposition -----------------------------------------

    def member(self, h: Extension, e, tup: tuple) -> bool:
        n = sort_of_element(e)
        if n < 0:
            raise ModelError("individuals have no truth conditions; use H_-1")
        if len(tup) != n:
            raise ModelError(f"arity mismatch: element of sort {n}, tuple of length {len(tup)}")
        key = ("m", e, tup)
        hit = h.memo.get(key)
        if hit is not None:
            return hit
        d = self.decomp.get(e)
        if d is None:
            d = bealer_decompose(e)
            self.decomp[e] = d
        val = self.ev(h, d, tup)
        h.memo[key] = val
        return val

    def ev(self, h: Extension, t, tup: tuple) -> bool:
        if isinstance(t, Prim):
            return self.leaf(h, t.name, tup)
        if isinstance(t, Neg):
            return not self.ev(h, t.body, tup)
        if isinstance(t, Conj):
            return self.ev(h, t.left, tup) and self.ev(h, t.right, tup)
        if isinstance(t, Ex):
            free = iter(tup)
            slots = [None if m else next(free) for m in t.mask]
            holes = [i for i, m in enumerate(t.mask) if m]
            for filling in itertools.product(self.cfg.domain, repeat=len(holes)):
                full = list(slots)
                for i, v in zip(holes, filling):
                    full[i] = v
                if self.ev(h, t.body, tuple(full)):
                    return True
            return False
        if isinstance(t, (Dum, Per, Link)):
            kind = {Dum: "dum", Per: "per", Link: "link"}[type(t)]
            f, _ = wire_map(kind, t.seq)
            return self.ev(h, t.body, tuple(tup[j - 1] for j in f))
        if isinstance(t, Comb):
            rest = list(tup)
            inner: list = []
            args = iter(t.args)
            for entry in t.seq.entries:
                if entry == STAR:
                    inner.append(rest.pop(0))
                    continue
                chunk = tuple(rest[:entry])
                del rest[:entry]
                inner.append(self.saturated(next(args), chunk))
            return self.ev(h, t.head, tuple(inner))
        raise ModelError(f"cannot evaluate {t!r} as a relation")

    def saturated(self, a, chunk: tuple):
        if isinstance(a, Prim) and a.sort < 0:
            return Const(a.name)
        if isinstance(a, PseudoVar):
            return ModelConfig._lookup(self.cfg.assignment, a.name)
        return saturate(element(j_translate(a)), chunk)

    def leaf(self, h: Extension, name: str, tup: tuple) -> bool:
        if name == bl.TRUTH:
            return True
        if name == bl.EQ_I:
            return tup[0] == tup[1]
        if name == bl.EQ_N:
            return self.eq_n(tup[0], tup[1])
        return h.holds(name, tup)

    # necessary co-extensionality -----------------------------------------

    def extent(self, h: Extension, e):
        n = sort_of_element(e)
        if n < 0:
            return frozenset({(e,)})
        if n == 0:
            return self.member(h, e, ())
        key = ("x", e)
        hit = h.memo.get(key)
        if hit is not None:
            return hit
        out = frozenset(tup for tup in itertools.product(self.cfg.carrier.elements, repeat=n)
                        if self.member(h, e, tup))
        h.memo[key] = out
        return out

    def eq_n(self, a, b) -> bool:
        if a == b:
            return True
        if sort_of_element(a) != sort_of_element(b):
            return False
        key = (a, b) if repr(a) <= repr(b) else (b, a)
        cache = self.cfg.__dict__.setdefault("_eqn", {})
        if key in cache:
            return cache[key]
        stack = self._stack()
        if key in stack:
            raise ModelError("circular Eq_N: an element's extension depends on its own Eq_N class")
        stack.add(key)
        try:
            val = all(self.extent(h, a) == self.extent(h, b) for h in self.cfg.extensions)
        finally:
            stack.discard(key)
        cache[key] = val
        return val

    # brute force: substitute and evaluate the ground formula -----------------

    def direct(self, h: Extension, e, tup: tuple) -> bool:
        n = sort_of_element(e)
        if len(tup) != n:
            raise ModelError(f"arity mismatch: element of sort {n}, tuple of length {len(tup)}")
        body = bl.subst(e.scope, dict(zip(e.vseq, tup)))
        return self.truth(h, bl.normal(body))

    def truth(self, h: Extension, f) -> bool:
        if isinstance(f, bl.Not):
            return not self.truth(h, f.body)
        if isinstance(f, bl.And):
            return self.truth(h, f.left) and self.truth(h, f.right)
        if isinstance(f, bl.Exists):
            for vals in itertools.product(self.cfg.domain, repeat=len(f.vars)):
                if self.truth(h, bl.subst(f.body, dict(zip(f.vars, vals)))):
                    return True
            return False
        if isinstance(f, bl.Forall):
            return self.truth(h, bl.normal(f))
        if isinstance(f, bl.Pred):
            args = tuple(element(a) for a in f.args)
            if f.name == bl.EQ_N:
                return self.eq_n_direct(args[0], args[1])
            return self.leaf(h, f.name, args)
        raise ModelError(f"not a formula: {f!r}")

    def eq_n_direct(self, a, b) -> bool:
        if sort_of_element(a) != sort_of_element(b):
            return False
        n = sort_of_element(a)
        if n < 0:
            return a == b
        for h in self.cfg.extensions:
            for tup in itertools.product(self.cfg.carrier.elements, repeat=n):
                if self.direct(h, a, tup) != self.direct(h, b, tup):
                    return False
        return True


def _evaluator(cfg: ModelConfig) -> _Evaluator:
    ev = cfg.__dict__.get("_evaluator")
    if ev is None:
        with cfg._lock:
            ev = cfg.__dict__.get("_evaluator")
            if ev is None:
                ev = _Evaluator(cfg)
                cfg.__dict__["_evaluator"] = ev
    return ev


def eval_extension(cfg: ModelConfig, h: Extension | str, d, tup: Sequence = ()) -> bool:
    """``tup ∈ H(d)`` computed through the Bealer decomposition of ``d``.

    ``d`` is an element (or any closed BL term) of sort n; ``tup`` is an
    n-tuple of carrier elements.
    """
    if isinstance(h, str):
        h = cfg.extension(h)
    d = element(d)
    tup = tuple(element(x) for x in tup)
    for x in tup:
        cfg.carrier.index(x)
    return _evaluator(cfg).member(h, d, tup)


def eval_direct(cfg: ModelConfig, h: Extension | str, d, tup: Sequence = ()) -> bool:
    """Brute-force reference: substitute the tuple and evaluate the ground formula."""
    if isinstance(h, str):
        h = cfg.extension(h)
    d = element(d)
    tup = tuple(element(x) for x in tup)
    for x in tup:
        cfg.carrier.index(x)
    return _evaluator(cfg).direct(h, d, tup)


def extent(cfg: ModelConfig, h: Extension | str, d):
    """H(d): a truth value for propositions, a set of tuples over the carrier otherwise."""
    if isinstance(h, str):
        h = cfg.extension(h)
    return _evaluator(cfg).extent(h, element(d))


def eq_n(cfg: ModelConfig, a, b) -> bool:
    return _evaluator(cfg).eq_n(element(a), element(b))


def satisfies(cfg: ModelConfig, phi, assignment: Mapping | None = None,
              extension: str | None = None) -> bool:
    """H•(M[φ]) = T, for a BL formula or a sort-0 CIL term."""
    if isinstance(phi, (Comb, Conj, Dum, Ex, Link, Neg, Per, Prim)):
        if phi.sort != 0:
            raise SortError(f"satisfaction needs a sort 0 term, got sort {phi.sort}")
        d = cfg.meaning(phi, assignment)
    elif isinstance(phi, Abstract):
        if phi.vseq:
            raise SortError("satisfaction needs a proposition")
        d = cfg.meaning(phi, assignment)
    else:
        d = cfg.meaning(Abstract(phi, ()), assignment)
    h = cfg.extension(extension or cfg.actual)
    return _evaluator(cfg).member(h, d, ())


def valid_in_all(cfg: ModelConfig, phi, assignment: Mapping | None = None) -> bool:
    return all(satisfies(cfg, phi, assignment, h.name) for h in cfg.extensions)


# ---------------------------------------------------------------------------
# conditions (N) and (S)


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"check": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c["ok"]]

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": self.checks}

    def text(self) -> str:
        lines = [f"{self.title}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            mark = "pass" if c["ok"] else "FAIL"
            extra = f"  ({c['detail']})" if c["detail"] else ""
            lines.append(f"  [{mark}] {c['check']}{extra}")
        return "\n".join(lines)


def check_model_conditions(cfg: ModelConfig, max_pairs: int = 2000) -> Report:
    """Conditions (N), (S), T ≁_N F and the equivalence laws for eq_N."""
    from .parser import show_bl
    ev = _evaluator(cfg)
    rep = Report("model conditions")
    elems = cfg.carrier.elements
    pairs = [(a, b) for a, b in itertools.combinations_with_replacement(elems, 2)
             if sort_of_element(a) == sort_of_element(b)][:max_pairs]

    bad = []
    for a, b in pairs:
        agree = all(ev.extent(h, a) == ev.extent(h, b) for h in cfg.extensions)
        if agree != ev.leaf(cfg.actual_extension, bl.EQ_N, (a, b)):
            bad.append((a, b))
    rep.add("(N) eq_N coincides with agreement in every extension", not bad,
            f"{len(pairs)} pairs" + (f"; first violation {show_bl(bad[0][0])}, {show_bl(bad[0][1])}" if bad else ""))

    rep.add("T is not N-equivalent to F", not ev.eq_n(TRUTH_ELEMENT, FALSE_ELEMENT))

    bad_i = [(a, b) for a, b in pairs
             if ev.leaf(cfg.actual_extension, bl.EQ_I, (a, b)) != (a == b)]
    rep.add("eq_I is identity", not bad_i)

    refl = all(ev.eq_n(a, a) for a in elems)
    symm = all(ev.eq_n(a, b) == ev.eq_n(b, a) for a, b in pairs)
    classes: dict = {}
    for a in elems:
        for rep_e in classes:
            if ev.eq_n(a, rep_e):
                classes[rep_e].append(a)
                break
        else:
            classes[a] = [a]
    trans = all(ev.eq_n(x, y) for members in classes.values() for x in members for y in members)
    trans = trans and all(not ev.eq_n(r1, r2) for r1, r2 in itertools.combinations(classes, 2))
    rep.add("eq_N is an equivalence relation", refl and symm and trans,
            f"{len(classes)} classes")

    decomps = {}
    inj_bad = []
    cyc_bad = []
    for e in elems:
        if isinstance(e, Const):
            continue
        d = bealer_decompose(e)
        back = element(j_translate(d))
        if back != e:
            inj_bad.append(e)
        if d in decomps and decomps[d] != e:
            inj_bad.append(e)
        decomps[d] = e
        sub: list = []
        _closed_subterms(e.scope, sub)
        if any(element(s) == e for s in sub):
            cyc_bad.append(e)
    rep.add("(S) operations are injective on the carrier", not inj_bad)
    rep.add("(S) no element occurs in its own decomposition", not cyc_bad)

    contingent = [e for e in cfg.carrier.of_sort(0) if not ev.eq_n(e, TRUTH_ELEMENT)]
    rep.add("propositions not N-equivalent to Truth", True,
            ", ".join(show_bl(e) for e in contingent[:8]) + (" ..." if len(contingent) > 8 else ""))
    return rep


# ---------------------------------------------------------------------------
# validity harness

SUITES = ("fol", "eq", "nec", "s5", "subst", "lemmas")


def _box(phi):
    return bl.Pred(bl.EQ_N, (Abstract(phi, ()), TRUTH_ELEMENT))


def _atoms(cfg: ModelConfig, limit: int) -> list:
    """Ground atoms over carrier elements, in a fixed order."""
    sig = cfg.carrier.signature
    out = []
    for name, n in sorted(sig.user_entries().items()):
        if n < 0 or name in cfg.interpretation:
            continue
        if n == 0:
            out.append(bl.Pred(name, ()))
            continue
        for args in itertools.product(cfg.carrier.elements, repeat=n):
            out.append(bl.Pred(name, args))
    # interleave predicates so truncation keeps variety
    by_pred: dict = {}
    for a in out:
        by_pred.setdefault(a.name, []).append(a)
    mixed = [a for group in itertools.zip_longest(*by_pred.values()) for a in group if a is not None]
    return mixed[:limit]


def _open_atoms(cfg: ModelConfig, var: str, limit: int) -> list:
    sig = cfg.carrier.signature
    out = []
    for name, n in sorted(sig.user_entries().items()):
        if n < 1 or name in cfg.interpretation:
            continue
        for pos in range(n):
            for fill in itertools.product(cfg.carrier.of_sort(-1) or cfg.carrier.elements[:2], repeat=n - 1):
                args = list(fill)
                args.insert(pos, Var(var))
                out.append(bl.Pred(name, tuple(args)))
    return out[:limit]


def _formulas(cfg: ModelConfig, limit: int) -> list:
    atoms = _atoms(cfg, max(2, limit // 2))
    out = list(atoms)
    for a, b in zip(atoms, atoms[1:]):
        out.append(bl.Not(a))
        out.append(bl.And(a, bl.Not(b)))
    out.append(bl.Pred(bl.TRUTH, ()))
    return out[:limit]


class _Harness:
    def __init__(self, cfg: ModelConfig, pool: int):
        self.cfg = cfg
        self.pool = pool
        self.rep = Report("validity")

    def sat(self, phi, asg=None) -> bool:
        return satisfies(self.cfg, phi, asg)

    def scheme(self, name: str, instances: Iterable, check) -> None:
        from .parser import show_bl
        n = 0
        for inst in instances:
            n += 1
            if not check(inst):
                shown = show_bl(inst) if not isinstance(inst, tuple) else ", ".join(
                    show_bl(x) if not isinstance(x, str) else x for x in inst)
                self.rep.add(name, False, f"counterexample: {shown}")
                return
        self.rep.add(name, True, f"{n} instances")

    def valid(self, name: str, formulas: Iterable) -> None:
        self.scheme(name, formulas, self.sat)

    # -- suites -------------------------------------------------------------

    def fol(self) -> None:
        fs = _formulas(self.cfg, self.pool)
        pairs = list(itertools.product(fs[:8], repeat=2))
        self.valid("excluded middle", (bl.disj(f, bl.Not(f)) for f in fs))
        self.valid("contraposition", (bl.implies(bl.implies(a, b), bl.implies(bl.Not(b), bl.Not(a)))
                                      for a, b in pairs))
        self.valid("conjunction elimination", (bl.implies(bl.And(a, b), a) for a, b in pairs))
        opens = _open_atoms(self.cfg, "x", self.pool)
        dom = self.cfg.domain
        self.valid("universal instantiation",
                   (bl.implies(bl.Forall(("x",), f), bl.subst(f, {"x": t}))
                    for f in opens for t in dom[:6]))
        self.valid("existential generalization",
                   (bl.implies(bl.subst(f, {"x": t}), bl.Exists(("x",), f))
                    for f in opens for t in dom[:6]))
        self.valid("forall distributes over a closed antecedent",
                   (bl.implies(bl.Forall(("x",), bl.implies(p, f)), bl.implies(p, bl.Forall(("x",), f)))
                    for p in fs[:6] for f in opens))

        def generalization(f):
            if all(self.sat(f, {"x": d}) for d in dom):
                return self.sat(bl.Forall(("x",), f))
            return True
        self.scheme("generalization", opens + [bl.disj(f, bl.Not(f)) for f in opens], generalization)

    def eq(self) -> None:
        elems = self.cfg.carrier.elements
        self.valid("x =i x", (bl.Pred(bl.EQ_I, (e, e)) for e in elems))
        opens = _open_atoms(self.cfg, "z", self.pool)
        pairs = list(itertools.product(elems[:10], repeat=2))
        self.valid("Leibniz for =i",
                   (bl.implies(bl.Pred(bl.EQ_I, (a, b)),
                               bl.implies(bl.subst(f, {"z": a}), bl.subst(f, {"z": b})))
                    for f in opens[:10] for a, b in pairs))
        self.valid("x =i y -> x =n y",
                   (bl.implies(bl.Pred(bl.EQ_I, (a, b)), bl.Pred(bl.EQ_N, (a, b))) for a, b in pairs))
        self.valid("=n reflexive", (bl.Pred(bl.EQ_N, (e, e)) for e in elems))
        self.valid("=n symmetric",
                   (bl.implies(bl.Pred(bl.EQ_N, (a, b)), bl.Pred(bl.EQ_N, (b, a))) for a, b in pairs))
        triples = list(itertools.product(elems[:7], repeat=3))
        self.valid("=n transitive",
                   (bl.implies(bl.And(bl.Pred(bl.EQ_N, (a, b)), bl.Pred(bl.EQ_N, (b, c))),
                               bl.Pred(bl.EQ_N, (a, c))) for a, b, c in triples))
        self.valid("arity axiom",
                   (bl.Not(bl.Pred(bl.EQ_N, (a, b))) for a, b in pairs
                    if sort_of_element(a) != sort_of_element(b)))

    def nec(self) -> None:
        fs = _formulas(self.cfg, self.pool)
        pairs = list(itertools.product(fs[:10], repeat=2))
        self.valid("[p] =n [q] <-> box(p <-> q)",
                   (bl.iff(bl.Pred(bl.EQ_N, (Abstract(a, ()), Abstract(b, ()))), _box(bl.iff(a, b)))
                    for a, b in pairs))
        opens = _open_atoms(self.cfg, "x", self.pool)
        opairs = list(itertools.product(opens[:8], repeat=2))
        self.valid("[p]_x =n [q]_x <-> box(all x. p <-> q)",
                   (bl.iff(bl.Pred(bl.EQ_N, (Abstract(a, ("x",)), Abstract(b, ("x",)))),
                           _box(bl.Forall(("x",), bl.iff(a, b)))) for a, b in opairs))
        self.valid("all v. [p]_x =n [q]_x <-> [p]_{x v} =n [q]_{x v}",
                   (bl.iff(bl.Forall(("v",), bl.Pred(bl.EQ_N, (Abstract(bl.subst(a, {"x": Var("v")}), ()),
                                                              Abstract(bl.subst(b, {"x": Var("v")}), ())))),
                           bl.Pred(bl.EQ_N, (Abstract(a, ("x",)), Abstract(b, ("x",)))))
                    for a, b in opairs))
        self.valid("[p]_x =i [q]_x -> all x. p <-> q",
                   (bl.implies(bl.Pred(bl.EQ_I, (Abstract(a, ("x",)), Abstract(b, ("x",)))),
                               bl.Forall(("x",), bl.iff(a, b))) for a, b in opairs))

    def s5(self) -> None:
        fs = _formulas(self.cfg, self.pool)
        pairs = list(itertools.product(fs[:8], repeat=2))
        self.valid("K", (bl.implies(_box(bl.implies(a, b)), bl.implies(_box(a), _box(b))) for a, b in pairs))
        self.valid("T", (bl.implies(_box(a), a) for a in fs))
        self.valid("4", (bl.implies(_box(a), _box(_box(a))) for a in fs))
        dia = lambda a: bl.Not(_box(bl.Not(a)))  # noqa: E731
        self.valid("5", (bl.implies(dia(a), _box(dia(a))) for a in fs))
        elems = self.cfg.carrier.elements[:10]
        self.valid("x !=n y -> box(x !=n y)",
                   (bl.implies(bl.Not(bl.Pred(bl.EQ_N, (a, b))), _box(bl.Not(bl.Pred(bl.EQ_N, (a, b)))))
                    for a, b in itertools.product(elems, repeat=2)))

        def necessitation(a):
            if all(satisfies(self.cfg, a, None, h.name) for h in self.cfg.extensions):
                return self.sat(_box(a))
            return True
        self.scheme("necessitation", fs + [bl.disj(a, bl.Not(a)) for a in fs], necessitation)

    def subst(self) -> None:
        """Reinterpreting an unused predicate P as M[ψ] turns φ([P]) into φ([ψ])."""
        cfg = self.cfg
        sig = cfg.carrier.signature
        fresh_name = "Fresh_P"
        while fresh_name in sig:
            fresh_name += "_"
        cases = []
        abstracts = [e for e in cfg.carrier.elements if isinstance(e, Abstract) and e.vseq]
        contexts = _open_atoms(cfg, "v", self.pool)
        for psi in abstracts[:8]:
            n = len(psi.vseq)
            xs = tuple(f"x{i}" for i in range(1, n + 1))
            elem_p = Abstract(bl.Pred(fresh_name, tuple(Var(x) for x in xs)), xs)
            for ctx in contexts[:8]:
                cases.append((ctx, elem_p, psi, n))

        def check(case):
            ctx, elem_p, psi, n = case
            carrier = Carrier(sig.declare(fresh_name, n), cfg.carrier.depth_bound, cfg.carrier.elements)
            re = cfg.replace(carrier=carrier, interpretation={**cfg.interpretation, fresh_name: psi})
            with_p = bl.subst(ctx, {"v": elem_p})
            with_psi = bl.subst(ctx, {"v": psi})
            return satisfies(re, with_p) == satisfies(cfg, with_psi)
        self.scheme("reinterpretation of an unused elementary predicate",
                    ((c, e, p, str(n)) for c, e, p, n in cases),
                    lambda c: check((c[0], c[1], c[2], int(c[3]))))

    def lemmas(self) -> None:
        cfg = self.cfg
        opens = _open_atoms(cfg, "x", self.pool)
        fs = opens + [bl.Not(f) for f in opens[:6]] + [bl.And(a, b) for a, b in zip(opens, opens[1:6])]

        def quantifier(f):
            return self.sat(bl.Exists(("x",), f)) == any(self.sat(f, {"x": d}) for d in cfg.domain)
        self.scheme("ex x. phi iff some reassignment of x satisfies phi", fs, quantifier)

        def substitution(case):
            f, t = case
            lhs = cfg.meaning(Abstract(f, ()), {"x": element(t)})
            rhs = cfg.meaning(Abstract(bl.subst(f, {"x": t}), ()))
            return lhs == rhs
        self.scheme("substitution lemma", ((f, t) for f in opens[:10] for t in cfg.carrier.elements[:6]),
                    substitution)

        ev = _evaluator(cfg)

        def from_h0(e):
            for h in cfg.extensions:
                for tup in itertools.product(cfg.carrier.elements, repeat=len(e.vseq)):
                    if ev.member(h, e, tup) != ev.member(h, saturate(e, tup), ()):
                        return False
            return True
        self.scheme("H determined by H_0", [e for e in cfg.carrier.elements
                                            if isinstance(e, Abstract) and 0 < len(e.vseq) <= 2], from_h0)


def validity_harness(cfg: ModelConfig, suite: str | Sequence[str] = SUITES, pool: int = 24) -> Report:
    """Instantiate the schemes of the chosen suites over the carrier and check them under H•."""
    suites = (suite,) if isinstance(suite, str) else tuple(suite)
    h = _Harness(cfg, pool)
    for s in suites:
        if s not in SUITES:
            raise ModelError(f"unknown suite {s!r}; expected one of {', '.join(SUITES)}")
        before = len(h.rep.checks)
        getattr(h, s)()
        for c in h.rep.checks[before:]:
            c["check"] = f"{s}: {c['check']}"
    return h.rep


# ---------------------------------------------------------------------------
# JSON configuration

CONFIG_VERSION = 1


def _parse_elem(text, sig, terms):
    from .parser import parse_bl
    if isinstance(text, str) and text in terms:
        return terms[text]
    if not isinstance(text, str):
        raise ModelError(f"expected a term id or BL text, got {text!r}")
    return element(parse_bl(text, sig))


def config_from_json(data) -> ModelConfig:
    """Build a ModelConfig from parsed JSON (see README for the format).

    Tuple entries are term ids, BL text, or ``"*"`` for every carrier element.
    """
    from .parser import ParseError
    from .serialize import SchemaError, check_version
    if isinstance(data, str):
        data = json.loads(data)
    check_version(data, "model")
    path = "$"
    try:
        path = "$.signature"
        sig = Signature.of(data.get("signature", {}))
        terms: dict = {}
        for key, text in data.get("terms", {}).items():
            path = f"$.terms.{key}"
            terms[key] = _parse_elem(text, sig, terms)
        car = data.get("carrier", {})
        path = "$.carrier"
        seeds = [_parse_elem(x, sig, terms) for x in car.get("seeds", [])]
        raw = {}
        mentioned = list(terms.values()) + seeds
        for name, rels in data.get("extensions", {}).items():
            base = {}
            for pred, tuples in rels.items():
                path = f"$.extensions.{name}.{pred}"
                arity = max(sig[pred], 0)
                rows = []
                for i, tup in enumerate(tuples):
                    path = f"$.extensions.{name}.{pred}[{i}]"
                    if not isinstance(tup, list) or len(tup) != arity:
                        raise SchemaError(f"{pred} takes {arity} arguments", path)
                    rows.append(tuple(x if x == "*" else _parse_elem(x, sig, terms) for x in tup))
                base[pred] = rows
                mentioned.extend(x for tup in base[pred] for x in tup if x != "*")
            raw[name] = base
        path = "$.carrier"
        if "elements" in car:
            carrier = Carrier(sig, car.get("depth", 2),
                              tuple(_parse_elem(x, sig, terms) for x in car["elements"]))
        else:
            carrier = Carrier.build(sig, car.get("depth", 2), seeds,
                                    elementary=car.get("elementary", True),
                                    propositions=car.get("propositions", True))
        path = "$.interpretation"
        interp = {p: _parse_elem(t, sig, terms) for p, t in data.get("interpretation", {}).items()}
        path = "$.assignment"
        asg = {v: _parse_elem(t, sig, terms) for v, t in data.get("assignment", {}).items()}
        carrier = carrier.with_elements(mentioned + list(asg.values()))
        exts = []
        for name, base in raw.items():
            expanded = {}
            for pred, tuples in base.items():
                rows = []
                for tup in tuples:
                    choices = [carrier.elements if x == "*" else (x,) for x in tup]
                    rows.extend(itertools.product(*choices))
                expanded[pred] = rows
            exts.append(Extension(name, expanded))
        path = "$.actual"
        return ModelConfig(carrier, exts, data.get("actual", exts[0].name if exts else ""),
                           interp, asg, car.get("quantify", "all"))
    except SchemaError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise SchemaError(f"bad term: {exc}", path) from None
        raise SchemaError(f"malformed model config: {exc}", path) from None


def config_to_json(cfg: ModelConfig) -> dict:
    sig = cfg.carrier.signature
    return {
        "version": CONFIG_VERSION,
        "kind": "model",
        "signature": dict(sig.user_entries()),
        "carrier": {"depth": cfg.carrier.depth_bound, "quantify": cfg.quantify,
                    "elements": [_show(e) for e in cfg.carrier.elements]},
        "extensions": {h.name: {p: [[_show(x) for x in tup] for tup in sorted(rel, key=repr)]
                                for p, rel in sorted(h.base.items())}
                       for h in cfg.extensions},
        "actual": cfg.actual,
        "interpretation": {p: _show(e) for p, e in sorted(cfg.interpretation.items())},
        "assignment": {v: _show(e) for v, e in sorted(cfg.assignment.items())},
    }


def _readable(t, names: dict, used: set):
    """Rename the ``_k`` variables of a canonical element to parseable names."""
    def name(x):
        if x not in names:
            k = len(names) + 1
            while f"x{k}" in used:
                k += 1
            names[x] = f"x{k}"
            used.add(names[x])
        return names[x]
    if isinstance(t, Var):
        return Var(name(t.name))
    if isinstance(t, Const):
        return t
    if isinstance(t, Abstract):
        return Abstract(_readable(t.scope, names, used), tuple(name(x) for x in t.vseq))
    if isinstance(t, bl.Pred):
        return bl.Pred(t.name, tuple(_readable(a, names, used) for a in t.args))
    if isinstance(t, bl.Not):
        return bl.Not(_readable(t.body, names, used))
    if isinstance(t, bl.And):
        return bl.And(_readable(t.left, names, used), _readable(t.right, names, used))
    return type(t)(tuple(name(x) for x in t.vars), _readable(t.body, names, used))


def _show(e) -> str:
    from .parser import show_bl
    return show_bl(_readable(e, {}, set(bl.all_names(e))))


def load_config(path: str) -> ModelConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_json(json.load(fh))
