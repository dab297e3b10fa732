"""Parameter sequences for the structural operators and their combinatorics.

Four kinds of sequence drive the CIL operators:

* comb-sequences: entries in ``{STAR} | N0`` with at least one non-star entry,
* link-sequences: partitions of ``{1..n}``,
* per-sequences: permutations of ``{1..n}``,
* dum-sequences: non-empty sequences over ``N0``.

Indices are 1-based throughout.  Link and per values may be *raw* (the
trivial partition or the identity permutation); non-triviality is enforced
where a term is built, not here, so that the algebra stays closed under
composition.

Besides the textbook operations this module provides *wire maps*.  A
modifier (per, link, dum or any stack of them) over a term with ``n`` open
wires and result sort ``k`` is the same thing as a function
``f: {1..n} -> {1..k}``: input wire ``j`` is connected to output wire
``f(j)``.  Every such function factors uniquely as link, then per, then dum,
which is how modifier stacks are normalised.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence

STAR = "*"


class SequenceError(ValueError):
    """A parameter sequence is malformed or two sequences do not fit."""


# ---------------------------------------------------------------------------
# comb-sequences


@dataclass(frozen=True)
class CombSeq:
    entries: tuple

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise SequenceError("comb-sequence must be non-empty")
        for e in entries:
            if e != STAR and not (isinstance(e, int) and not isinstance(e, bool) and e >= 0):
                raise SequenceError(f"bad comb-sequence entry {e!r}")
        if all(e == STAR for e in entries):
            raise SequenceError("comb-sequence needs at least one non-star entry")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def __getitem__(self, i: int):
        return self.entries[i]

    @property
    def starless(self) -> tuple[int, ...]:
        return tuple(e for e in self.entries if e != STAR)

    @property
    def star_count(self) -> int:
        return sum(1 for e in self.entries if e == STAR)

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.entries) + "]"


def sigma_comb(s: CombSeq) -> int:
    """Sort of ``comb_s ...``: sum of the numeric entries plus one per star."""
    return sum(s.starless) + s.star_count


def star_strip(s: CombSeq) -> tuple[tuple[int, ...], int, frozenset[int]]:
    positions = frozenset(i for i, e in enumerate(s.entries, 1) if e == STAR)
    return s.starless, len(positions), positions


def widths(s: CombSeq | Sequence) -> tuple[int, ...]:
    """Number of result wires contributed by each position (a star counts 1)."""
    return tuple(1 if e == STAR else e for e in s)


# ---------------------------------------------------------------------------
# link-sequences (partitions)


@dataclass(frozen=True)
class LinkSeq:
    """A partition of ``{1..n}``, stored with sorted blocks ordered by minima."""

    blocks: tuple
    n: int

    def __post_init__(self) -> None:
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        seen: list[int] = []
        for b in blocks:
            if not b:
                raise SequenceError("partition blocks must be non-empty")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise SequenceError(f"blocks {blocks} do not partition 1..{self.n}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "LinkSeq":
        """Build from the listed blocks, completing with singletons up to ``n``."""
        listed = [tuple(b) for b in blocks]
        mentioned = {x for b in listed for x in b}
        if n is None:
            n = max(mentioned, default=0)
        listed.extend((x,) for x in range(1, n + 1) if x not in mentioned)
        return cls(tuple(listed), n)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "LinkSeq":
        """Kernel partition of a labelling: positions with equal labels share a block."""
        groups: dict = {}
        for i, lab in enumerate(labels, 1):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(tuple(g) for g in groups.values()), len(labels))

    @classmethod
    def identity(cls, n: int) -> "LinkSeq":
        return cls(tuple((i,) for i in range(1, n + 1)), n)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) == self.n

    def block_of(self, x: int) -> tuple[int, ...]:
        for b in self.blocks:
            if x in b:
                return b
        raise SequenceError(f"{x} not in 1..{self.n}")

    def block_index(self) -> dict[int, int]:
        """Map each element to the 1-based rank of its block."""
        return {x: r for r, b in enumerate(self.blocks, 1) for x in b}

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def natural(s: LinkSeq) -> tuple[int, ...]:
    """Increasing sequence of block minima."""
    return tuple(b[0] for b in s.blocks)


def sharp(t: Sequence, s: LinkSeq) -> tuple:
    """Spread a length-``|s|`` sequence over ``1..n``: position i gets t at i's block rank."""
    if len(t) != len(s):
        raise SequenceError(f"sharp: |t|={len(t)} but partition has {len(s)} blocks")
    rank = s.block_index()
    return tuple(t[rank[i] - 1] for i in range(1, s.n + 1))


# ---------------------------------------------------------------------------
# per-sequences


@dataclass(frozen=True)
class PerSeq:
    """A permutation of ``{1..n}`` given by its images: ``images[i-1] = p(i)``."""

    images: tuple

    def __post_init__(self) -> None:
        images = tuple(self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise SequenceError(f"{images} is not a permutation")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "PerSeq":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "PerSeq":
        images = list(range(1, n + 1))
        for c in cycles:
            for a, b in zip(c, tuple(c[1:]) + (c[0],)):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    @property
    def is_trivial(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def inverse(self) -> "PerSeq":
        inv = [0] * self.n
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return PerSeq(tuple(inv))

    def apply(self, seq: Sequence) -> tuple:
        """Permute a sequence: result position i holds ``seq[p(i)]``."""
        if len(seq) != self.n:
            raise SequenceError(f"per of size {self.n} applied to length {len(seq)}")
        return tuple(seq[x - 1] for x in self.images)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


# ---------------------------------------------------------------------------
# dum-sequences


@dataclass(frozen=True)
class DumSeq:
    """Fresh-wire insertions: ``entries[i-1]`` new wires before old wire i, the last after all."""

    entries: tuple

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if not entries:
            raise SequenceError("dum-sequence must be non-empty")
        if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in entries):
            raise SequenceError(f"bad dum-sequence {entries}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_trivial(self) -> bool:
        return not any(self.entries)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.entries)) + "]"


def sigma_dum(s: DumSeq) -> int:
    """Result sort of ``dum_s`` on a term of sort ``|s| - 1``."""
    return sum(s.entries) + len(s) - 1


# ---------------------------------------------------------------------------
# composition


def compose(kind: str, outer, inner):
    """Compose two sequences of one kind: ``op_outer(op_inner T) = op_result T``.

    For ``per`` the result r satisfies r(i) = inner(outer(i)).  For ``link``
    ``outer`` partitions the blocks of ``inner`` (taken in order of their
    minima).  For ``dum`` ``|outer|`` must equal ``sigma_dum(inner) + 1``.
    The result may be trivial.
    """
    if kind == "per":
        if outer.n != inner.n:
            raise SequenceError("per composition size mismatch")
        return PerSeq(tuple(inner(outer(i)) for i in range(1, outer.n + 1)))
    if kind == "link":
        if outer.n != len(inner):
            raise SequenceError("link composition: outer ground size must be inner block count")
        merged = [sum((inner.blocks[r - 1] for r in b), ()) for b in outer.blocks]
        return LinkSeq(tuple(merged), inner.n)
    if kind == "dum":
        if len(outer) != sigma_dum(inner) + 1:
            raise SequenceError(f"dum composition: |outer|={len(outer)} but needs {sigma_dum(inner) + 1}")
        f, k = wire_map("dum", inner)
        g, m = wire_map("dum", outer)
        return factor_wire_map(compose_maps(f, g), m)[0] or DumSeq((0,) * len(inner))
    raise SequenceError(f"unknown sequence kind {kind!r}")


# ---------------------------------------------------------------------------
# fixed sets and splittings


def in_fix(kind: str, x, subset: Iterable[int]) -> bool:
    a = set(subset)
    if kind == "per":
        return all(x(i) in a for i in a)
    if kind == "link":
        return all(set(x.block_of(i)) <= a for i in a)
    raise SequenceError(f"unknown kind {kind!r}")


def fix_and_split(kind: str, x, subset: Iterable[int]):
    """Split x along a fixed set A into ``(part1, part2)`` with ``x = part1 part2``.

    ``part2`` acts as x on A and trivially elsewhere; ``part1`` is trivial on
    A.  For links, ``part1`` is a partition of the blocks of ``part2``.
    """
    a = set(subset)
    if not in_fix(kind, x, a):
        raise SequenceError(f"{sorted(a)} is not in fix({x})")
    if kind == "per":
        p2 = PerSeq(tuple(x(i) if i in a else i for i in range(1, x.n + 1)))
        p1 = PerSeq(tuple(i if i in a else x(i) for i in range(1, x.n + 1)))
        return p1, p2
    s2 = LinkSeq(tuple(b for b in x.blocks if set(b) <= a)
                 + tuple((i,) for i in range(1, x.n + 1) if i not in a), x.n)
    rank = s2.block_index()
    outer = [tuple(sorted({rank[i] for i in b})) for b in x.blocks]
    return LinkSeq(tuple(outer), len(s2)), s2


def partition_relative_decompose(kind: str, x, parts: Sequence[Iterable[int]]):
    """Decompose x relative to an ordered partition ``P_1..P_m`` of ``1..n``.

    Returns ``(outer, inner)`` where ``inner`` is a list of ``(j, x_j)`` for
    the non-trivial factors acting inside a single ``P_j``.  For ``per`` the
    factors satisfy ``x = outer o x_1 o ... o x_k`` and ``outer`` only fixes
    points or moves them between blocks.  For ``link`` the meet of x with P is
    the composite of the inner factors and ``outer`` (a partition of the
    meet's blocks) only merges across blocks.
    """
    blocks = [tuple(sorted(b)) for b in parts]
    n = x.n
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(1, n + 1)):
        raise SequenceError("P is not a partition of 1..n")
    blocks.sort(key=lambda b: b[0])
    where = {i: j for j, b in enumerate(blocks, 1) for i in b}
    if kind == "link":
        meet = LinkSeq(tuple(tuple(i for i in u if where[i] == j)
                             for u in x.blocks for j in sorted({where[i] for i in u})), n)
        inner = []
        for j, b in enumerate(blocks, 1):
            part = LinkSeq(tuple(u for u in meet.blocks if where[u[0]] == j)
                           + tuple((i,) for i in range(1, n + 1) if where[i] != j), n)
            if not part.is_trivial:
                inner.append((j, part))
        rank = meet.block_index()
        outer = LinkSeq(tuple(tuple(sorted({rank[i] for i in u})) for u in x.blocks), len(meet))
        return outer, inner
    if kind == "per":
        q = list(range(1, n + 1))
        for b in blocks:
            bset = set(b)
            a_set = [i for i in b if x(i) in bset]
            for i in a_set:
                q[i - 1] = x(i)
            rest_src = [i for i in b if i not in a_set]
            rest_dst = sorted(set(b) - {x(i) for i in a_set})
            for i, d in zip(rest_src, rest_dst):
                q[i - 1] = d
        qp = PerSeq(tuple(q))
        qinv = qp.inverse()
        outer = PerSeq(tuple(x(qinv(i)) for i in range(1, n + 1)))
        inner = []
        for j, b in enumerate(blocks, 1):
            part = PerSeq(tuple(q[i - 1] if where[i] == j else i for i in range(1, n + 1)))
            if not part.is_trivial:
                inner.append((j, part))
        return outer, inner
    raise SequenceError(f"unknown kind {kind!r}")


def splitting(s: Sequence, sizes: Sequence[int]) -> list[tuple]:
    if any(k < 0 for k in sizes) or sum(sizes) != len(s):
        raise SequenceError(f"cannot split length {len(s)} as {list(sizes)}")
    out, i = [], 0
    for k in sizes:
        out.append(tuple(s[i:i + k]))
        i += k
    return out


# ---------------------------------------------------------------------------
# wire maps


def wire_map(kind: str, x) -> tuple[tuple[int, ...], int]:
    """Wire map ``(f, k)`` of a single modifier: old wire j ends at new position f(j)."""
    if kind == "per":
        inv = x.inverse()
        return inv.images, x.n
    if kind == "link":
        rank = x.block_index()
        return tuple(rank[j] for j in range(1, x.n + 1)), len(x)
    if kind == "dum":
        f, acc = [], 0
        for j in range(1, len(x)):
            acc += x.entries[j - 1]
            f.append(j + acc)
        return tuple(f), sigma_dum(x)
    raise SequenceError(f"unknown modifier kind {kind!r}")


def compose_maps(inner: Sequence[int], outer: Sequence[int]) -> tuple[int, ...]:
    """Apply ``inner`` first, then ``outer``."""
    return tuple(outer[i - 1] for i in inner)


def factor_wire_map(f: Sequence[int], k: int) -> tuple[DumSeq | None, PerSeq | None, LinkSeq | None]:
    """Factor ``f: 1..n -> 1..k`` as dum o per o link; trivial factors come back as None."""
    n = len(f)
    link = LinkSeq.from_labels(f) if n else LinkSeq((), 0)
    mins = natural(link)
    targets = [f[m - 1] for m in mins]
    image = sorted(set(targets))
    pos = {v: r for r, v in enumerate(image, 1)}
    # per image: block rank r goes to position pos[targets[r-1]]; store its inverse
    ranks = [pos[v] for v in targets]
    per = PerSeq(tuple(ranks)).inverse() if ranks else PerSeq(())
    gaps, prev = [], 0
    for v in image:
        gaps.append(v - prev - 1)
        prev = v
    gaps.append(k - prev)
    dum = DumSeq(tuple(gaps))
    return (None if dum.is_trivial else dum,
            None if per.is_trivial else per,
            None if link.is_trivial else link)


def is_identity_map(f: Sequence[int], k: int) -> bool:
    return len(f) == k and all(v == j for j, v in enumerate(f, 1))


# ---------------------------------------------------------------------------
# enumeration helpers


def all_partitions(n: int) -> Iterator[LinkSeq]:
    def rec(i: int, blocks: list[list[int]]):
        if i > n:
            yield LinkSeq(tuple(tuple(b) for b in blocks), n)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()
    yield from rec(1, [])


def all_permutations(n: int) -> Iterator[PerSeq]:
    for images in permutations(range(1, n + 1)):
        yield PerSeq(images)
