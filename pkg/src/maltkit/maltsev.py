"""Maltsev operations, herds/torsors, and the torsor <-> group correspondence.

A TernaryTable is a candidate Maltsev operation given by explicit values.
Its domain is either the full cube, the fibre cube of a base map p
(p(x)=p(y)=p(z)), or the mixed domain p(x)=p(y) with z free; the mixed
variant is what a torsor under a constant group looks like fibrewise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import DEFAULT_CLONE_BUDGET, FiniteAlgebra, TermOp, iter_term_ops, tuple_index
from .congruence import Congruence, _UnionFind, congruence_violation
from .errors import (
    DomainError,
    EmptyTorsor,
    InternalError,
    InvariantViolation,
    NotAHerd,
)

FULL = "full"
FIBERED = "fibered"
MIXED = "mixed"


@dataclass(frozen=True)
class TernaryTable:
    size: int
    kind: str = FULL
    base: tuple[int, ...] | None = None
    entries: tuple[int, ...] = ()
    name: str = field(default="", compare=False)

    # entries are stored flat over the *declared* domain in lexicographic
    # order of the triples; `_offsets` rebuilds the triple -> slot map.

    def __post_init__(self):
        if self.kind not in (FULL, FIBERED, MIXED):
            raise InvariantViolation("tern-kind", self.kind)
        if self.kind != FULL:
            if self.base is None or len(self.base) != self.size:
                raise InvariantViolation("tern-base-length", self.base)
        dom = list(self.domain())
        if len(self.entries) != len(dom):
            raise InvariantViolation(
                "tern-entries-length", (len(self.entries), len(dom))
            )
        for v in self.entries:
            if not 0 <= v < self.size:
                raise InvariantViolation("tern-entry-range", v)
        object.__setattr__(
            self, "_slots", {t: i for i, t in enumerate(dom)}
        )

    def domain(self):
        n = self.size
        if self.kind == FULL:
            return itertools.product(range(n), repeat=3)
        if self.kind == FIBERED:
            return (
                (x, y, z)
                for x in range(n)
                for y in range(n)
                if self.base[x] == self.base[y]
                for z in range(n)
                if self.base[y] == self.base[z]
            )
        return (
            (x, y, z)
            for x in range(n)
            for y in range(n)
            if self.base[x] == self.base[y]
            for z in range(n)
        )

    def defined(self, triple) -> bool:
        return triple in self._slots

    def __call__(self, x: int, y: int, z: int) -> int:
        slot = self._slots.get((x, y, z))
        if slot is None:
            raise DomainError(f"triple {(x, y, z)} outside declared domain")
        return self.entries[slot]

    @classmethod
    def full_from_fn(cls, size: int, fn, name: str = "") -> "TernaryTable":
        entries = tuple(
            fn(x, y, z) for x, y, z in itertools.product(range(size), repeat=3)
        )
        return cls(size, FULL, None, entries, name)

    @classmethod
    def full_from_flat(cls, size: int, flat, name: str = "") -> "TernaryTable":
        return cls(size, FULL, None, tuple(flat), name)

    @classmethod
    def from_entries(cls, size, kind, base, mapping, name: str = "") -> "TernaryTable":
        """Build from a triple->value mapping which must cover the domain exactly."""
        if kind == FULL:
            dom = list(itertools.product(range(size), repeat=3))
        else:
            dummy = object.__new__(cls)
            object.__setattr__(dummy, "size", size)
            object.__setattr__(dummy, "kind", kind)
            object.__setattr__(dummy, "base", tuple(base))
            dom = list(dummy.domain())
        extra = set(mapping) - set(dom)
        if extra:
            raise DomainError(f"entries outside domain: {sorted(extra)[:3]}")
        missing = [t for t in dom if t not in mapping]
        if missing:
            raise InvariantViolation("tern-domain-covered", missing[:3])
        entries = tuple(mapping[t] for t in dom)
        return cls(size, kind, None if kind == FULL else tuple(base), entries, name)

    def to_json(self) -> dict:
        out = {"name": self.name, "size": self.size, "kind": self.kind}
        if self.base is not None:
            out["base"] = list(self.base)
        out["entries"] = [
            {"args": list(t), "value": self(t[0], t[1], t[2])} for t in self.domain()
        ]
        return out


def check_maltsev(m: TernaryTable) -> bool:
    """m(x,y,y) = x = m(y,y,x) on the declared domain."""
    n = m.size
    if m.kind == FULL:
        pairs = itertools.product(range(n), repeat=2)
        return all(m(x, y, y) == x and m(y, y, x) == x for x, y in pairs)
    if m.kind == FIBERED:
        return all(
            m(x, y, y) == x and m(y, y, x) == x
            for x in range(n)
            for y in range(n)
            if m.base[x] == m.base[y]
        )
    # mixed: (x,y,y) needs p(x)=p(y); (y,y,x) is defined for every x
    ok_right = all(m(y, y, x) == x for y in range(n) for x in range(n))
    ok_left = all(
        m(x, y, y) == x
        for x in range(n)
        for y in range(n)
        if m.base[x] == m.base[y]
    )
    return ok_left and ok_right


def _assoc_quantifier(m: TernaryTable):
    """5-tuples (u,v,x,y,z) for which both sides of associativity are formed."""
    n = m.size
    if m.kind == FULL:
        return itertools.product(range(n), repeat=5)
    if m.kind == FIBERED:
        def gen():
            for u, v, x, y, z in itertools.product(range(n), repeat=5):
                if m.defined((u, v, x)) and m.defined((x, y, z)):
                    yield u, v, x, y, z
        return gen()
    def gen_mixed():
        for u in range(n):
            for v in range(n):
                if m.base[u] != m.base[v]:
                    continue
                for x in range(n):
                    for y in range(n):
                        if m.base[x] != m.base[y]:
                            continue
                        for z in range(n):
                            yield u, v, x, y, z
    return gen_mixed()


def check_associative(m: TernaryTable) -> bool:
    """m(u,v,m(x,y,z)) = m(m(u,v,x),y,z) wherever both composites are declared."""
    for u, v, x, y, z in _assoc_quantifier(m):
        if m(u, v, m(x, y, z)) != m(m(u, v, x), y, z):
            return False
    return True


def associativity_witness(m: TernaryTable):
    for u, v, x, y, z in _assoc_quantifier(m):
        if m(u, v, m(x, y, z)) != m(m(u, v, x), y, z):
            return (u, v, x, y, z)
    return None


def check_commutative(m: TernaryTable) -> bool:
    """m(x,y,z) = m(z,y,x) wherever both triples are declared."""
    return all(
        m(x, y, z) == m(z, y, x)
        for (x, y, z) in m.domain()
        if m.defined((z, y, x))
    )


def asmal_holds(m: TernaryTable) -> bool:
    """The derived identity m(u,v,m(x,y,z)) = m(u,m(y,x,v),z) of associative
    Maltsev operations, checked as a consequence rather than assumed."""
    for u, v, x, y, z in _assoc_quantifier(m):
        if not (m.defined((y, x, v)) and m.defined((u, m(y, x, v), z))):
            continue
        if m(u, v, m(x, y, z)) != m(u, m(y, x, v), z):
            return False
    return True


def is_maltsev_table(table, size: int) -> bool:
    """Maltsev check on a flat full-domain table without building a TernaryTable."""
    n = size
    for x in range(n):
        for y in range(n):
            if table[tuple_index(n, (x, y, y))] != x:
                return False
            if table[tuple_index(n, (y, y, x))] != x:
                return False
    return True


def find_maltsev_term(
    alg: FiniteAlgebra, budget: int = DEFAULT_CLONE_BUDGET
) -> TermOp | None:
    """First Maltsev member of the ternary clone in generation order.

    Returns None when the clone completes without one (a definite answer);
    CloneBudgetExceeded propagates and means "inconclusive".
    """
    if alg.size == 0:
        raise EmptyTorsor("empty algebra has no Maltsev structure to witness")
    for t in iter_term_ops(alg, 3, budget):
        if is_maltsev_table(t.table, alg.size):
            return t
    return None


@dataclass(frozen=True)
class TorsorGroup:
    """Group extracted from an associative Maltsev operation.

    carrier: classes of T x T under (x,y) ~ (m(x,y,z), z); `sub` maps a
    pair to its class, `action` applies a class to a point.
    """

    size: int
    add: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    zero: int
    action: tuple[tuple[int, ...], ...]
    sub: tuple[tuple[int, ...], ...]
    abelian: bool

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "zero": self.zero,
            "add": [list(r) for r in self.add],
            "neg": list(self.neg),
            "action": [list(r) for r in self.action],
            "sub": [list(r) for r in self.sub],
            "abelian": self.abelian,
        }


def _group_axioms_hold(size, add, neg, zero) -> bool:
    for a in range(size):
        if add[zero][a] != a or add[a][zero] != a:
            return False
        if add[a][neg[a]] != zero or add[neg[a]][a] != zero:
            return False
    return all(
        add[add[a][b]][c] == add[a][add[b][c]]
        for a in range(size)
        for b in range(size)
        for c in range(size)
    )


def torsor_to_group(m: TernaryTable, require_commutative: bool = False) -> TorsorGroup:
    """Coequalise (x,y) ~ (m(x,y,z), z) and read off the acting group.

    Sum of classes is (x-y)+(z-t) = m(x,y,z)-t, the inverse of x-y is y-x,
    and the class of (x,y) acts by z -> m(x,y,z).  Every identity is
    re-verified exhaustively before the group is returned.
    """
    n = m.size
    if n == 0:
        raise EmptyTorsor("torsor carrier must be non-empty")
    if m.kind != FULL:
        raise NotAHerd("torsor_to_group expects a full-domain table")
    if not check_maltsev(m):
        raise NotAHerd("table fails the Maltsev identities")
    if not check_associative(m):
        raise NotAHerd("table fails associativity")
    commutative = check_commutative(m)
    if require_commutative and not commutative:
        raise NotAHerd("table is not commutative")

    uf = _UnionFind(n * n)
    for x, y, z in itertools.product(range(n), repeat=3):
        uf.union(x * n + y, m(x, y, z) * n + z)
    labels = uf.labels()
    classes: dict[int, int] = {}
    reps: list[tuple[int, int]] = []
    sub = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            root = labels[x * n + y]
            if root not in classes:
                classes[root] = len(reps)
                reps.append((x, y))
            sub[x][y] = classes[root]
    g = len(reps)
    zero = sub[0][0]
    if any(sub[x][x] != zero for x in range(n)):
        raise InternalError("classes of diagonal pairs disagree")

    add = [[0] * g for _ in range(g)]
    neg = [0] * g
    action = [[0] * n for _ in range(g)]
    for i, (x, y) in enumerate(reps):
        neg[i] = sub[y][x]
        for z in range(n):
            action[i][z] = m(x, y, z)
        for j, (z, t) in enumerate(reps):
            add[i][j] = sub[m(x, y, z)][t]

    # well-definedness across representative choices
    for x, y, z, t in itertools.product(range(n), repeat=4):
        if sub[m(x, y, z)][t] != add[sub[x][y]][sub[z][t]]:
            raise InternalError("addition not well defined on classes")
    if not _group_axioms_hold(g, add, neg, zero):
        raise InternalError("group axioms fail on the coequaliser")
    for i in range(g):
        for z in range(n):
            if sub[action[i][z]][z] != i:
                raise InternalError("(g+x)-x = g fails")
    for x in range(n):
        for y in range(n):
            if action[sub[x][y]][y] != x:
                raise InternalError("(x-y)+y = x fails")
    abelian = all(add[a][b] == add[b][a] for a in range(g) for b in range(g))
    if require_commutative and commutative and not abelian:
        raise InternalError("commutative table produced a non-abelian group")

    return TorsorGroup(
        g,
        tuple(tuple(r) for r in add),
        tuple(neg),
        zero,
        tuple(tuple(r) for r in action),
        tuple(tuple(r) for r in sub),
        abelian,
    )


def reconstruct_table(group: TorsorGroup) -> TernaryTable:
    """The operation (x-y)+z recovered from a torsor group."""
    n = len(group.sub)
    return TernaryTable.full_from_fn(
        n, lambda x, y, z: group.action[group.sub[x][y]][z]
    )


def _abstract_groups(n: int):
    """Addition tables of the abelian groups of order n <= 4 (one per iso class)."""
    def cyclic(k):
        return [[(a + b) % k for b in range(k)] for a in range(k)]

    if n == 4:
        klein = [[a ^ b for b in range(4)] for a in range(4)]
        return [cyclic(4), klein]
    return [cyclic(n)]


def enumerate_herds(size: int) -> tuple[TernaryTable, ...]:
    """All associative Maltsev tables on a carrier of the given size (size <= 4).

    Complete by the torsor <-> group correspondence: every such table is
    phi^-1(phi(x) - phi(y) + phi(z)) for a group structure transported
    along a bijection phi, so enumerating groups and bijections and
    de-duplicating tables is exhaustive.
    """
    if size <= 0:
        raise EmptyTorsor("herd carrier must be non-empty")
    if size > 4:
        raise InvariantViolation("herd-enumeration-cap", size)
    tables = set()
    for add in _abstract_groups(size):
        neg = [0] * size
        for a in range(size):
            for b in range(size):
                if add[a][b] == 0:
                    neg[a] = b
        for phi in itertools.permutations(range(size)):
            inv = [0] * size
            for i, v in enumerate(phi):
                inv[v] = i
            flat = tuple(
                inv[add[add[phi[x]][neg[phi[y]]]][phi[z]]]
                for x, y, z in itertools.product(range(size), repeat=3)
            )
            tables.add(flat)
    return tuple(
        TernaryTable.full_from_flat(size, t) for t in sorted(tables)
    )


@dataclass(frozen=True)
class CentralTorsorReport:
    ok: bool
    reason: str
    group: TorsorGroup | None
    witness: tuple | None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "witness": list(self.witness) if self.witness is not None else None,
            "group": self.group.to_json() if self.group is not None else None,
        }


def central_torsor_check(
    alg: FiniteAlgebra, p, m_ext: TernaryTable
) -> CentralTorsorReport:
    """Decide whether p: E ->> B carries a torsor structure under a constant group.

    Requires the mixed-domain table to satisfy the Maltsev and
    associativity identities, to be fibre-constant (p(m(x,y,z)) = p(z)) and
    to commute with every operation of the algebra on E; the last condition
    is what distinguishes a central extension from a merely abelian one
    once E carries structure.  On success the constant group is built as
    the quotient of E x_B E by (x,y) ~ (m(x,y,z), z) over *all* z, and the
    action identities are verified.
    """
    n = alg.size
    p = tuple(p)
    if len(p) != n:
        raise InvariantViolation("base-map-length", len(p))
    b = max(p) + 1 if n else 0
    if sorted(set(p)) != list(range(b)):
        raise InvariantViolation("base-map-surjective", p)
    if m_ext.kind != MIXED or m_ext.base != p:
        raise InvariantViolation("tern-kind-mixed", m_ext.kind)
    ker = Congruence.from_labels(p)
    if congruence_violation(alg, ker) is not None:
        raise InvariantViolation("base-map-kernel-congruence", p)

    if not check_maltsev(m_ext):
        return CentralTorsorReport(False, "maltsev identity fails", None, None)
    for x, y, z in m_ext.domain():
        if p[m_ext(x, y, z)] != p[z]:
            return CentralTorsorReport(
                False, "value leaves the fibre of z", None, (x, y, z)
            )
    if not check_associative(m_ext):
        return CentralTorsorReport(
            False, "associativity fails", None, associativity_witness(m_ext)
        )
    # homomorphism condition: the mixed domain is a subalgebra of E^3
    dom = list(m_ext.domain())
    for op in alg.ops:
        for combo in itertools.product(dom, repeat=op.arity):
            fx = alg.apply(op, tuple(t[0] for t in combo))
            fy = alg.apply(op, tuple(t[1] for t in combo))
            fz = alg.apply(op, tuple(t[2] for t in combo))
            if m_ext(fx, fy, fz) != alg.apply(op, tuple(m_ext(*t) for t in combo)):
                return CentralTorsorReport(
                    False,
                    f"restriction is not a homomorphism (operation {op.name})",
                    None,
                    (op.name,) + combo,
                )

    # constant group: quotient of E x_B E by (x,y) ~ (m(x,y,z), z), z arbitrary
    fiber_pairs = [(x, y) for x in range(n) for y in range(n) if p[x] == p[y]]
    pair_slot = {pr: i for i, pr in enumerate(fiber_pairs)}
    uf = _UnionFind(len(fiber_pairs))
    for x, y in fiber_pairs:
        for z in range(n):
            uf.union(pair_slot[(x, y)], pair_slot[(m_ext(x, y, z), z)])
    labels = uf.labels()
    classes: dict[int, int] = {}
    reps: list[tuple[int, int]] = []
    sub: dict[tuple[int, int], int] = {}
    for pr in fiber_pairs:
        root = labels[pair_slot[pr]]
        if root not in classes:
            classes[root] = len(reps)
            reps.append(pr)
        sub[pr] = classes[root]
    g = len(reps)
    zero = sub[(0, 0)] if n else 0
    add = [[0] * g for _ in range(g)]
    neg = [0] * g
    action = [[0] * n for _ in range(g)]
    for i, (x, y) in enumerate(reps):
        neg[i] = sub[(y, x)]
        for z in range(n):
            action[i][z] = m_ext(x, y, z)
        for j, (z, t) in enumerate(reps):
            add[i][j] = sub[(m_ext(x, y, z), t)]
    for x, y in fiber_pairs:
        for j, (z, t) in enumerate(reps):
            if sub[(m_ext(x, y, z), t)] != add[sub[(x, y)]][j]:
                raise InternalError("constant-group addition not well defined")
    if not _group_axioms_hold(g, add, neg, zero):
        raise InternalError("constant-group axioms fail")
    for i in range(g):
        for z in range(n):
            if p[action[i][z]] != p[z] or sub[(action[i][z], z)] != i:
                raise InternalError("constant-group action identities fail")
    for x, y in fiber_pairs:
        if action[sub[(x, y)]][y] != x:
            raise InternalError("(x-y)+y = x fails for the constant group")
    group = TorsorGroup(
        g,
        tuple(tuple(r) for r in add),
        tuple(neg),
        zero,
        tuple(tuple(r) for r in action),
        tuple(tuple(sub[(x, y)] if p[x] == p[y] else -1 for y in range(n)) for x in range(n)),
        all(add[a][c] == add[c][a] for a in range(g) for c in range(g)),
    )
    return CentralTorsorReport(True, "torsor under a constant group", group, None)


def restrict_to_fibered(m_ext: TernaryTable) -> TernaryTable:
    """Restriction of a mixed-domain table to the fully fibred domain."""
    mapping = {
        (x, y, z): m_ext(x, y, z)
        for (x, y, z) in m_ext.domain()
        if m_ext.base[y] == m_ext.base[z]
    }
    return TernaryTable.from_entries(m_ext.size, FIBERED, m_ext.base, mapping)
