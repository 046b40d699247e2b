"""Partitions-as-congruences: generation, lattice operations, quotients.

A congruence is stored canonically as a block-index array: blocks are
numbered by their least element (the block of 0 is block 0, the next new
block is 1, and so on), which makes equality of congruences equality of
tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import FiniteAlgebra, Operation
from .errors import InvariantViolation, LatticeBudgetExceeded, NotACongruence

DEFAULT_LATTICE_SIZE_CAP = 12
DEFAULT_LATTICE_BUDGET = 100_000


@dataclass(frozen=True)
class Congruence:
    size: int
    block_index: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_index) != self.size:
            raise InvariantViolation("congruence-length", len(self.block_index))
        nxt = 0
        for b in self.block_index:
            if b > nxt:
                raise InvariantViolation("congruence-canonical", self.block_index)
            if b == nxt:
                nxt += 1
        # surjectivity onto 0..nblocks-1 is implied by the canonical numbering

    @classmethod
    def from_labels(cls, labels) -> "Congruence":
        """Canonicalise an arbitrary element->label map (first occurrence order)."""
        relabel: dict = {}
        out = []
        for lab in labels:
            if lab not in relabel:
                relabel[lab] = len(relabel)
            out.append(relabel[lab])
        return cls(len(out), tuple(out))

    @classmethod
    def diagonal(cls, size: int) -> "Congruence":
        return cls(size, tuple(range(size)))

    @classmethod
    def total(cls, size: int) -> "Congruence":
        return cls(size, (0,) * size)

    @classmethod
    def from_blocks(cls, size: int, blocks) -> "Congruence":
        labels = [None] * size
        for i, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < size or labels[x] is not None:
                    raise InvariantViolation("blocks-partition", x)
                labels[x] = i
        if any(l is None for l in labels):
            raise InvariantViolation("blocks-cover-carrier", labels)
        return cls.from_labels(labels)

    @property
    def nblocks(self) -> int:
        return max(self.block_index) + 1 if self.size else 0

    def same(self, a: int, b: int) -> bool:
        return self.block_index[a] == self.block_index[b]

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.nblocks)]
        for x, b in enumerate(self.block_index):
            out[b].append(x)
        return out

    def relation(self) -> frozenset:
        return frozenset(
            (a, b)
            for a in range(self.size)
            for b in range(self.size)
            if self.same(a, b)
        )

    def leq(self, other: "Congruence") -> bool:
        """Refinement order: every block of self lies inside a block of other."""
        image: dict[int, int] = {}
        for x in range(self.size):
            b = self.block_index[x]
            ob = other.block_index[x]
            if image.setdefault(b, ob) != ob:
                return False
        return True

    def is_diagonal(self) -> bool:
        return self.nblocks == self.size

    def is_total(self) -> bool:
        return self.nblocks <= 1


def _translations(alg: FiniteAlgebra):
    """All elementary translations: one argument free, the rest frozen."""
    out = []
    for op in alg.ops:
        if op.arity == 0:
            continue
        for pos in range(op.arity):
            for consts in itertools.product(range(alg.size), repeat=op.arity - 1):
                table = []
                for x in range(alg.size):
                    args = consts[:pos] + (x,) + consts[pos:]
                    table.append(alg.apply(op, args))
                out.append(tuple(table))
    return out


def congruence_violation(alg: FiniteAlgebra, cong: Congruence):
    """First incompatibility witness, or None.

    Compatibility with every operation is equivalent to closure under the
    elementary translations, which keeps the check quadratic in practice.
    """
    if cong.size != alg.size:
        raise InvariantViolation("congruence-size", cong.size)
    for t in _translations(alg):
        for a in range(alg.size):
            for b in range(a + 1, alg.size):
                if cong.same(a, b) and not cong.same(t[a], t[b]):
                    return (t, a, b)
    return None


def is_congruence(alg: FiniteAlgebra, cong: Congruence) -> bool:
    return congruence_violation(alg, cong) is None


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def labels(self):
        return [self.find(x) for x in range(len(self.parent))]


def cg(alg: FiniteAlgebra, pairs) -> Congruence:
    """Least congruence containing the given pairs.

    Standard worklist closure: union-find for the equivalence part, with
    every newly merged pair pushed through all elementary translations.
    """
    uf = _UnionFind(alg.size)
    queue = [tuple(p) for p in pairs]
    for a, b in queue:
        if not (0 <= a < alg.size and 0 <= b < alg.size):
            raise InvariantViolation("pair-in-carrier", (a, b))
    translations = _translations(alg)
    while queue:
        a, b = queue.pop()
        if not uf.union(a, b):
            continue
        for t in translations:
            ta, tb = t[a], t[b]
            if uf.find(ta) != uf.find(tb):
                queue.append((ta, tb))
    return Congruence.from_labels(uf.labels())


def meet(c1: Congruence, c2: Congruence) -> Congruence:
    if c1.size != c2.size:
        raise InvariantViolation("meet-same-carrier", (c1.size, c2.size))
    return Congruence.from_labels(list(zip(c1.block_index, c2.block_index)))


def join(alg: FiniteAlgebra, c1: Congruence, c2: Congruence) -> Congruence:
    """Join in the congruence lattice: the congruence generated by the union."""
    if c1.size != c2.size or c1.size != alg.size:
        raise InvariantViolation("join-same-carrier", (c1.size, c2.size, alg.size))
    uf = _UnionFind(alg.size)
    for c in (c1, c2):
        for block in c.blocks():
            for x in block[1:]:
                uf.union(block[0], x)
    # the transitive closure of a union of congruences is already compatible
    return Congruence.from_labels(uf.labels())


def compose(c1: Congruence, c2: Congruence) -> frozenset:
    """Relational composition c1 ; c2 as a set of pairs (not a congruence in general)."""
    if c1.size != c2.size:
        raise InvariantViolation("compose-same-carrier", (c1.size, c2.size))
    out = set()
    for b in range(c1.size):
        lefts = [a for a in range(c1.size) if c1.same(a, b)]
        rights = [c for c in range(c2.size) if c2.same(b, c)]
        out.update((a, c) for a in lefts for c in rights)
    return frozenset(out)


def principal_congruences(alg: FiniteAlgebra) -> list[Congruence]:
    out = []
    seen = set()
    for a in range(alg.size):
        for b in range(a + 1, alg.size):
            c = cg(alg, [(a, b)])
            if c.block_index not in seen:
                seen.add(c.block_index)
                out.append(c)
    return out


def all_congruences(
    alg: FiniteAlgebra,
    max_size: int = DEFAULT_LATTICE_SIZE_CAP,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> tuple[Congruence, ...]:
    """The complete congruence lattice.

    Principal congruences closed under join; complete because every
    congruence is the join of the principal congruences below it.  Guarded
    by a carrier-size cap (override `max_size` for larger inputs at your
    own risk) and an element budget.
    """
    if alg.size > max_size:
        raise LatticeBudgetExceeded(
            f"carrier size {alg.size} exceeds lattice cap {max_size}"
        )
    found: dict[tuple, Congruence] = {}
    diag = Congruence.diagonal(alg.size)
    found[diag.block_index] = diag
    work = principal_congruences(alg)
    for c in work:
        found.setdefault(c.block_index, c)
    frontier = list(found.values())
    while frontier:
        fresh = []
        for c1 in frontier:
            for c2 in list(found.values()):
                j = join(alg, c1, c2)
                if j.block_index not in found:
                    if len(found) >= budget:
                        raise LatticeBudgetExceeded(
                            f"lattice budget {budget} exceeded", count=len(found)
                        )
                    found[j.block_index] = j
                    fresh.append(j)
        frontier = fresh
    return tuple(sorted(found.values(), key=lambda c: c.block_index))


def quotient(alg: FiniteAlgebra, theta: Congruence):
    """Quotient algebra and projection map; raises NotACongruence when unfit."""
    witness = congruence_violation(alg, theta)
    if witness is not None:
        raise NotACongruence(f"partition is not a congruence (witness {witness})")
    proj = theta.block_index
    reps = [block[0] for block in theta.blocks()]
    n = theta.nblocks
    ops = []
    for op in alg.ops:
        table = []
        for args in itertools.product(range(n), repeat=op.arity):
            table.append(proj[alg.apply(op, tuple(reps[a] for a in args))])
        ops.append(Operation(op.name, op.arity, tuple(table)))
    return FiniteAlgebra(n, tuple(ops)), tuple(proj)


def quotient_congruence(
    alg: FiniteAlgebra, theta: Congruence, below: Congruence
) -> Congruence:
    """Image of theta on the quotient by `below`.

    `below <= theta` is not required: the result is the congruence on
    M/below whose preimage is join(theta, below).
    """
    j = join(alg, theta, below)
    labels = []
    for block in below.blocks():
        labels.append(j.block_index[block[0]])
    return Congruence.from_labels(labels)
