"""Natural systems on finite monoids, trivial extensions, linear-extension
and untwistedness checks, and the built-in non-abelian-unit counterexample.

A natural system assigns an abelian group D_x to every monoid element and
additive actions x(-): D_y -> D_{xy}, (-)y: D_x -> D_{xy} subject to the
three mixed associativity equations (plus unitality).  A linear extension
is a surjective monoid map whose fibres are free transitive D_b-sets
satisfying the subtraction identities

    e1 e2 - e1 e2' = P(e1)(e2 - e2'),   e1 e2 - e1' e2 = (e1 - e1') P(e2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .abgroup import AbelianGroup, isomorphisms
from .errors import (
    CounterexampleBroken,
    InternalError,
    InvariantViolation,
    SearchBudgetExceeded,
)

UNTWISTED_FIBER_CAP = 8


@dataclass(frozen=True)
class FiniteMonoid:
    size: int
    unit: int
    mul: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.size
        if len(self.mul) != n * n:
            raise InvariantViolation("monoid-table-length", len(self.mul))
        for v in self.mul:
            if not 0 <= v < n:
                raise InvariantViolation("monoid-entry", v)
        if not 0 <= self.unit < n:
            raise InvariantViolation("monoid-unit-range", self.unit)
        for a in range(n):
            if self.mulv(self.unit, a) != a or self.mulv(a, self.unit) != a:
                raise InvariantViolation("monoid-unit", a)
            for b in range(n):
                for c in range(n):
                    if self.mulv(self.mulv(a, b), c) != self.mulv(a, self.mulv(b, c)):
                        raise InvariantViolation("monoid-associative", (a, b, c))

    def mulv(self, a: int, b: int) -> int:
        return self.mul[a * self.size + b]

    def to_json(self):
        return {
            "name": self.name,
            "size": self.size,
            "unit": self.unit,
            "mul": list(self.mul),
        }


@dataclass(frozen=True)
class NaturalSystemOnMonoid:
    """Groups D_x with left maps left[b][x]: D_x -> D_{bx} and right maps
    right[x][b]: D_x -> D_{xb}."""

    monoid: FiniteMonoid
    groups: tuple[AbelianGroup, ...]
    left: tuple[tuple[tuple[int, ...], ...], ...]
    right: tuple[tuple[tuple[int, ...], ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        mon = self.monoid
        n = mon.size
        if len(self.groups) != n or len(self.left) != n or len(self.right) != n:
            raise InvariantViolation("natsys-shape", None)
        for b in range(n):
            for x in range(n):
                lmap = self.left[b][x]
                if len(lmap) != self.groups[x].size:
                    raise InvariantViolation("natsys-left-length", (b, x))
                tgt = self.groups[mon.mulv(b, x)]
                for v in lmap:
                    if not 0 <= v < tgt.size:
                        raise InvariantViolation("natsys-left-range", (b, x, v))
                rmap = self.right[x][b]
                if len(rmap) != self.groups[x].size:
                    raise InvariantViolation("natsys-right-length", (x, b))
                tgt = self.groups[mon.mulv(x, b)]
                for v in rmap:
                    if not 0 <= v < tgt.size:
                        raise InvariantViolation("natsys-right-range", (x, b, v))
        # additivity
        for b in range(n):
            for x in range(n):
                g, h = self.groups[x], self.groups[mon.mulv(b, x)]
                lmap = self.left[b][x]
                for d1 in range(g.size):
                    for d2 in range(g.size):
                        if lmap[g.plus(d1, d2)] != h.plus(lmap[d1], lmap[d2]):
                            raise InvariantViolation("natsys-left-additive", (b, x, d1, d2))
                h2 = self.groups[mon.mulv(x, b)]
                rmap = self.right[x][b]
                for d1 in range(g.size):
                    for d2 in range(g.size):
                        if rmap[g.plus(d1, d2)] != h2.plus(rmap[d1], rmap[d2]):
                            raise InvariantViolation("natsys-right-additive", (x, b, d1, d2))
        # unitality and the three compatibility equations
        e = mon.unit
        for x in range(n):
            if self.left[e][x] != tuple(range(self.groups[x].size)):
                raise InvariantViolation("natsys-left-unital", x)
            if self.right[x][e] != tuple(range(self.groups[x].size)):
                raise InvariantViolation("natsys-right-unital", x)
        for b1 in range(n):
            for b2 in range(n):
                for x in range(n):
                    g = self.groups[x]
                    for d in range(g.size):
                        # (b1 b2) d = b1 (b2 d)
                        if (
                            self.left[mon.mulv(b1, b2)][x][d]
                            != self.left[b1][mon.mulv(b2, x)][self.left[b2][x][d]]
                        ):
                            raise InvariantViolation("natsys-left-compose", (b1, b2, x, d))
                        # (d b1) b2 = d (b1 b2)
                        if (
                            self.right[mon.mulv(x, b1)][b2][self.right[x][b1][d]]
                            != self.right[x][mon.mulv(b1, b2)][d]
                        ):
                            raise InvariantViolation("natsys-right-compose", (x, b1, b2, d))
                        # (b1 d) b2 = b1 (d b2)
                        if (
                            self.right[mon.mulv(b1, x)][b2][self.left[b1][x][d]]
                            != self.left[b1][mon.mulv(x, b2)][self.right[x][b2][d]]
                        ):
                            raise InvariantViolation("natsys-mixed-compose", (b1, x, b2, d))

    def to_json(self):
        return {
            "name": self.name,
            "monoid": self.monoid.to_json(),
            "groups": [{"size": g.size, "add": list(g.add)} for g in self.groups],
            "left": [[list(m) for m in row] for row in self.left],
            "right": [[list(m) for m in row] for row in self.right],
        }


def constant_system(mon: FiniteMonoid, group: AbelianGroup, name: str = "") -> NaturalSystemOnMonoid:
    """All fibres equal with identity actions: the natural system of a
    constant bifunctor."""
    ident = tuple(range(group.size))
    n = mon.size
    return NaturalSystemOnMonoid(
        mon,
        (group,) * n,
        tuple(tuple(ident for _ in range(n)) for _ in range(n)),
        tuple(tuple(ident for _ in range(n)) for _ in range(n)),
        name=name or "constant",
    )


@dataclass(frozen=True)
class MonoidExtension:
    """Surjective monoid map with fibrewise actions of the natural system.

    actions[b] is a flat |D_b| x |fibre(b)| table of total elements.
    Construction validates shapes, that proj is a unital homomorphism and
    the action axioms; freeness/transitivity and the subtraction
    identities are the business of check_linear_extension.
    """

    total: FiniteMonoid
    base: FiniteMonoid
    proj: tuple[int, ...]
    system: NaturalSystemOnMonoid
    actions: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.system.monoid != self.base:
            raise InvariantViolation("extension-system-base", None)
        if len(self.proj) != self.total.size:
            raise InvariantViolation("extension-proj-length", len(self.proj))
        if set(self.proj) != set(range(self.base.size)):
            raise InvariantViolation("extension-proj-surjective", None)
        if self.proj[self.total.unit] != self.base.unit:
            raise InvariantViolation("extension-proj-unit", None)
        for a in range(self.total.size):
            for b in range(self.total.size):
                if (
                    self.proj[self.total.mulv(a, b)]
                    != self.base.mulv(self.proj[a], self.proj[b])
                ):
                    raise InvariantViolation("extension-proj-hom", (a, b))
        for b in range(self.base.size):
            fib = self.fiber(b)
            g = self.system.groups[b]
            table = self.actions[b]
            if len(table) != g.size * len(fib):
                raise InvariantViolation("extension-action-length", b)
            pos = {e: i for i, e in enumerate(fib)}
            for d in range(g.size):
                for i, e in enumerate(fib):
                    v = table[d * len(fib) + i]
                    if self.proj[v] != b:
                        raise InvariantViolation("extension-action-fiber", (b, d, e))
            for i, e in enumerate(fib):
                if table[g.zero * len(fib) + i] != e:
                    raise InvariantViolation("extension-action-zero", (b, e))
                for d1 in range(g.size):
                    for d2 in range(g.size):
                        step = table[d2 * len(fib) + i]
                        if (
                            table[g.plus(d1, d2) * len(fib) + i]
                            != table[d1 * len(fib) + pos[step]]
                        ):
                            raise InvariantViolation("extension-action-sum", (b, d1, d2, e))

    def fiber(self, b: int) -> tuple[int, ...]:
        return tuple(e for e in range(self.total.size) if self.proj[e] == b)

    def act(self, b: int, d: int, e: int) -> int:
        fib = self.fiber(b)
        return self.actions[b][d * len(fib) + fib.index(e)]

    def to_json(self):
        return {
            "name": self.name,
            "total": self.total.to_json(),
            "base": self.base.to_json(),
            "proj": list(self.proj),
            "actions": [list(t) for t in self.actions],
        }


def trivial_extension(mon: FiniteMonoid, system: NaturalSystemOnMonoid,
                      name: str = "") -> MonoidExtension:
    """The split extension: carrier the disjoint union of the D_x, product
    (x1, d1)(x2, d2) = (x1 x2, d1 x2 + x1 d2), fibre actions by addition."""
    if system.monoid != mon:
        raise InvariantViolation("system-monoid-mismatch", None)
    offsets = []
    total_size = 0
    for x in range(mon.size):
        offsets.append(total_size)
        total_size += system.groups[x].size
    enc = lambda x, d: offsets[x] + d
    proj = []
    for x in range(mon.size):
        proj.extend([x] * system.groups[x].size)
    mul = []
    for e1 in range(total_size):
        x1 = proj[e1]
        d1 = e1 - offsets[x1]
        for e2 in range(total_size):
            x2 = proj[e2]
            d2 = e2 - offsets[x2]
            x = mon.mulv(x1, x2)
            d = system.groups[x].plus(
                system.right[x1][x2][d1], system.left[x1][x2][d2]
            )
            mul.append(enc(x, d))
    total = FiniteMonoid(
        total_size,
        enc(mon.unit, system.groups[mon.unit].zero),
        tuple(mul),
        name=name or f"{mon.name}:semidirect",
    )
    actions = []
    for b in range(mon.size):
        g = system.groups[b]
        fib = list(range(offsets[b], offsets[b] + g.size))
        table = []
        for d in range(g.size):
            for e in fib:
                table.append(enc(b, g.plus(d, e - offsets[b])))
        actions.append(tuple(table))
    ext = MonoidExtension(total, mon, tuple(proj), system, tuple(actions), name=name)
    rep = check_linear_extension(ext)
    if not rep.ok:
        raise InternalError(f"trivial extension failed its own check: {rep.reason}")
    return ext


@dataclass(frozen=True)
class LinearExtReport:
    ok: bool
    reason: str
    witness: tuple | None

    def to_json(self):
        return {
            "ok": self.ok,
            "reason": self.reason,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def _subtraction_tables(ext: MonoidExtension):
    """sub[b][(e, e')] = the unique d with d + e' = e, or None if the fibre
    action is not free and transitive."""
    subs = []
    for b in range(ext.base.size):
        fib = ext.fiber(b)
        g = ext.system.groups[b]
        if g.size != len(fib):
            return None, (b, "fibre size differs from group order")
        table = {}
        for d in range(g.size):
            for i, e2 in enumerate(fib):
                e1 = ext.actions[b][d * len(fib) + i]
                if (e1, e2) in table:
                    return None, (b, "action is not free")
                table[(e1, e2)] = d
        for e1 in fib:
            for e2 in fib:
                if (e1, e2) not in table:
                    return None, (b, "action is not transitive")
        subs.append(table)
    return subs, None


def check_linear_extension(ext: MonoidExtension) -> LinearExtReport:
    """Free transitive fibre actions plus both subtraction identities."""
    subs, bad = _subtraction_tables(ext)
    if subs is None:
        return LinearExtReport(False, bad[1], (bad[0],))
    proj, total, base, sys_ = ext.proj, ext.total, ext.base, ext.system
    for e1 in range(total.size):
        b1 = proj[e1]
        for b2 in range(base.size):
            fib2 = ext.fiber(b2)
            tgt = base.mulv(b1, b2)
            for e2 in fib2:
                for e2p in fib2:
                    d = subs[b2][(e2, e2p)]
                    lhs = subs[tgt][(total.mulv(e1, e2), total.mulv(e1, e2p))]
                    if lhs != sys_.left[b1][b2][d]:
                        return LinearExtReport(
                            False, "left subtraction identity fails", (e1, e2, e2p)
                        )
    for e2 in range(total.size):
        b2 = proj[e2]
        for b1 in range(base.size):
            fib1 = ext.fiber(b1)
            tgt = base.mulv(b1, b2)
            for e1 in fib1:
                for e1p in fib1:
                    d = subs[b1][(e1, e1p)]
                    lhs = subs[tgt][(total.mulv(e1, e2), total.mulv(e1p, e2))]
                    if lhs != sys_.right[b1][b2][d]:
                        return LinearExtReport(
                            False, "right subtraction identity fails", (e1, e1p, e2)
                        )
    return LinearExtReport(True, "linear extension", None)


@dataclass(frozen=True)
class UntwistedReport:
    found: bool
    family: tuple | None  # entries ((f1, f2, f), value)
    reason: str

    def family_map(self):
        return dict(self.family) if self.family is not None else None

    def to_json(self):
        return {
            "found": self.found,
            "reason": self.reason,
            "family": [
                {"args": list(k), "value": v} for k, v in (self.family or ())
            ],
        }


def check_untwisted(ext: MonoidExtension) -> UntwistedReport:
    """Search for a commutative associative Maltsev family on the hom-set.

    Any valid family m determines base-point isomorphisms
    phi_{b,b'}(f1 - f2) = m(f1, f2, f) - f with phi_{b,b} = id and the
    cocycle rule, so it is induced by a tuple of isomorphisms
    psi_b: D_{b0} -> D_b; the search over those tuples is therefore
    exhaustive.  Every candidate family is verified directly against all
    required identities before being returned.
    """
    pre = check_linear_extension(ext)
    if not pre.ok:
        raise InvariantViolation("untwisted-requires-linear-extension", pre.reason)
    base, total, proj, sys_ = ext.base, ext.total, ext.proj, ext.system
    for g in sys_.groups:
        if g.size > UNTWISTED_FIBER_CAP:
            raise SearchBudgetExceeded(
                f"fibre size {g.size} exceeds the cap {UNTWISTED_FIBER_CAP}"
            )
    subs, _ = _subtraction_tables(ext)
    b0 = 0
    iso_choices = []
    for b in range(base.size):
        if b == b0:
            iso_choices.append([tuple(range(sys_.groups[b0].size))])
            continue
        isos = isomorphisms(sys_.groups[b0], sys_.groups[b])
        if not isos:
            return UntwistedReport(
                False, None, f"fibres over {b0} and {b} are not isomorphic"
            )
        iso_choices.append(isos)

    def build_family(psi):
        fam = {}
        for f1 in range(total.size):
            for f2 in range(total.size):
                if proj[f1] != proj[f2]:
                    continue
                b = proj[f1]
                d = subs[b][(f1, f2)]
                # transport d along psi_b^-1 then psi_{b'}
                d0 = psi[b].index(d)
                for f in range(total.size):
                    bp = proj[f]
                    fam[(f1, f2, f)] = ext.act(bp, psi[bp][d0], f)
        return fam

    def verify(fam):
        for (f1, f2, f), v in fam.items():
            if proj[v] != proj[f]:
                return False
        for f in range(total.size):
            for g in range(total.size):
                if proj[f] == proj[g] and fam[(f, g, g)] != f:
                    return False
                if fam[(g, g, f)] != f:
                    return False
        for (f1, f2, f), v in fam.items():
            # commutativity where defined
            if proj[f] == proj[f1] and fam[(f, f2, f1)] != v:
                return False
        for f1 in range(total.size):
            for f2 in range(total.size):
                if proj[f1] != proj[f2]:
                    continue
                for x in range(total.size):
                    for y in range(total.size):
                        if proj[x] != proj[y]:
                            continue
                        for z in range(total.size):
                            if fam[(f1, f2, fam[(x, y, z)])] != fam[
                                (fam[(f1, f2, x)], y, z)
                            ]:
                                return False
        for g in range(total.size):
            for (f1, f2, f), v in fam.items():
                if fam[(total.mulv(g, f1), total.mulv(g, f2), total.mulv(g, f))] != total.mulv(g, v):
                    return False
                if fam[(total.mulv(f1, g), total.mulv(f2, g), total.mulv(f, g))] != total.mulv(v, g):
                    return False
        return True

    for psi in itertools.product(*iso_choices):
        fam = build_family(psi)
        if verify(fam):
            return UntwistedReport(
                True, tuple(sorted(fam.items())), "untwisted family found"
            )
    return UntwistedReport(False, None, "no equivariant family exists")


# --- the built-in counterexample -------------------------------------------

@dataclass(frozen=True)
class CounterexampleReport:
    """Record of the multiplicative-monoid counterexample: a linear
    extension of monoid theories whose unit map is not abelian."""

    base_names: tuple[str, ...]
    total_names: tuple[str, ...]
    products: tuple  # ((name1, name2), product name) for non-unit elements
    s_names: tuple[str, ...]
    action: tuple  # ((total name, s name), s name)
    candidates: int
    forced_value: str
    forced_in_all: bool
    associative_count: int
    chain: tuple  # ((expr, value), ...)
    violations: tuple  # per candidate: (index, (u,v,x,y,z) witness as names)

    def to_json(self):
        return {
            "base": list(self.base_names),
            "total": list(self.total_names),
            "products": [
                {"left": a, "right": b, "value": v} for (a, b), v in self.products
            ],
            "s_elements": list(self.s_names),
            "action": [
                {"g": g, "s": s, "value": v} for (g, s), v in self.action
            ],
            "candidates": self.candidates,
            "forced_value": self.forced_value,
            "forced_in_all": self.forced_in_all,
            "associative_count": self.associative_count,
            "chain": [{"expr": e, "value": v} for e, v in self.chain],
            "violations": [
                {"candidate": i, "witness": list(w)} for i, w in self.violations
            ],
        }

    def golden_text(self) -> str:
        lines = []
        lines.append("two-element multiplicative monoid, extended by D_1 = 0, "
                     "D_0 = Z/2 x Z/2 with 0(x,y) = (y,y), (x,y)0 = (0,0)")
        lines.append("total monoid: {" + ", ".join(self.total_names) + "}")
        lines.append("products (unit omitted):")
        for (a, b), v in self.products:
            lines.append(f"  {a}.{b} = {v}")
        lines.append("left action on S = {" + ", ".join(self.s_names) + "}"
                     " (00 and 10 identified as *0):")
        for (g, s), v in self.action:
            lines.append(f"  {g}.{s} = {v}")
        lines.append(f"maltsev equivariant candidates: {self.candidates}")
        lines.append(f"forced value m(*0,01,11) = {self.forced_value}"
                     f" in all candidates: {self.forced_in_all}")
        lines.append(f"associative candidates: {self.associative_count}")
        lines.append("obstruction chain:")
        for e, v in self.chain:
            lines.append(f"  {e} = {v}")
        lines.append("first associativity violation per candidate (u,v,x,y,z):")
        for i, w in self.violations:
            lines.append(f"  candidate {i}: " + " ".join(w))
        return "\n".join(lines) + "\n"


def counterexample_monoid() -> tuple[FiniteMonoid, NaturalSystemOnMonoid]:
    """The two-element multiplicative monoid {1,0} with D_1 = 0 and
    D_0 = Z/2 + Z/2, left action (x,y) |-> (y,y), right action zero."""
    mon = FiniteMonoid(2, 0, (0, 1, 1, 1), name="M2")
    d0 = AbelianGroup.trivial()
    klein = AbelianGroup(
        4, tuple((a // 2 ^ b // 2) * 2 + (a % 2 ^ b % 2) for a in range(4) for b in range(4))
    )
    id1 = (0,)
    id4 = (0, 1, 2, 3)
    zero_to_four = (0,)
    left = (
        (id1, id4),  # unit acts trivially
        (zero_to_four, tuple((d % 2) * 2 + (d % 2) for d in range(4))),  # 0(x,y)=(y,y)
    )
    right = (
        (id1, zero_to_four),  # maps out of D_1
        (id4, (0, 0, 0, 0)),  # (x,y)0 = (0,0)
    )
    system = NaturalSystemOnMonoid(mon, (d0, klein), left, right, name="D")
    return mon, system


def counterexample_harness() -> CounterexampleReport:
    """Reproduce the counterexample end to end and assert its key facts.

    Build the five-element total monoid, identify 00 ~ 10 into the set
    S = {1, *0, 01, 11}, enumerate every equivariant Maltsev operation on
    S over the base fibration by backtracking with constraint propagation,
    and verify that all of them take the forced value at (*0, 01, 11) and
    that none is associative.
    """
    mon, system = counterexample_monoid()
    ext = trivial_extension(mon, system, name="MxD")
    total = ext.total
    # naming: fibre over the unit is "1"; fibre over 0 consists of pairs xy
    total_names = ("1", "00", "01", "10", "11")
    # element e = 1 + d where d = 2x + y; name accordingly
    def tname(e):
        if e == 0:
            return "1"
        d = e - 1
        return f"{d // 2}{d % 2}"
    if tuple(tname(e) for e in range(5)) != total_names:
        raise CounterexampleBroken("unexpected element naming")

    expected = {}
    for a in ("00", "10", "01", "11"):
        expected[(a, "00")] = "00"
        expected[(a, "10")] = "00"
        expected[(a, "01")] = "11"
        expected[(a, "11")] = "11"
    products = []
    name_to_idx = {tname(e): e for e in range(5)}
    for (a, b), want in sorted(expected.items()):
        got = tname(total.mulv(name_to_idx[a], name_to_idx[b]))
        if got != want:
            raise CounterexampleBroken(f"product {a}.{b} = {got}, expected {want}")
        products.append(((a, b), got))

    # S: identify 00 ~ 10; class order 1, *0, 01, 11
    s_names = ("1", "*0", "01", "11")
    cls = {0: 0, name_to_idx["00"]: 1, name_to_idx["10"]: 1,
           name_to_idx["01"]: 2, name_to_idx["11"]: 3}
    rep = {0: 0, 1: name_to_idx["00"], 2: name_to_idx["01"], 3: name_to_idx["11"]}
    act = {}
    for g in range(5):
        for s in range(4):
            v1 = cls[total.mulv(g, rep[s])]
            # well-definedness across the identified pair
            alts = [e for e in range(5) if cls[e] == s]
            for e in alts:
                if cls[total.mulv(g, e)] != v1:
                    raise CounterexampleBroken("action not well defined on classes")
            act[(g, s)] = v1
    for (gname, sname, want) in (("10", "*0", "*0"), ("10", "01", "11"), ("10", "11", "11")):
        if s_names[act[(name_to_idx[gname], s_names.index(sname))]] != want:
            raise CounterexampleBroken(f"action {gname}.{sname} != {want}")
    action = tuple(
        ((tname(g), s_names[s]), s_names[act[(g, s)]])
        for g in range(5)
        for s in range(4)
    )

    eta = (0, 1, 1, 1)  # S -> M
    fibers = {0: (0,), 1: (1, 2, 3)}
    domain = [
        (x, y, z)
        for x in range(4)
        for y in range(4)
        for z in range(4)
        if eta[x] == eta[y] == eta[z]
    ]
    forced: dict = {}
    for x in range(4):
        for y in range(4):
            if eta[x] != eta[y]:
                continue
            forced[(x, y, y)] = x
            forced[(y, y, x)] = x

    free_slots = [t for t in domain if t not in forced]

    def propagate(assign):
        """Close under equivariance; return None on conflict."""
        state = dict(assign)
        changed = True
        while changed:
            changed = False
            for (x, y, z), v in list(state.items()):
                for g in range(5):
                    tx, ty, tz = act[(g, x)], act[(g, y)], act[(g, z)]
                    tv = act[(g, v)]
                    cur = state.get((tx, ty, tz))
                    if cur is None:
                        state[(tx, ty, tz)] = tv
                        changed = True
                    elif cur != tv:
                        return None
        return state

    base_state = propagate(forced)
    if base_state is None:
        raise CounterexampleBroken("forced assignments already conflict")

    candidates = []

    def search(state):
        missing = [t for t in free_slots if t not in state]
        if not missing:
            candidates.append({t: state[t] for t in domain})
            return
        slot = missing[0]
        for v in range(4):
            if eta[v] != eta[slot[2]]:
                continue
            nxt = propagate({**state, slot: v})
            if nxt is not None:
                search(nxt)

    search(base_state)
    if not candidates:
        raise CounterexampleBroken("no equivariant Maltsev candidates found")

    star0, o01, o11 = 1, 2, 3
    forced_value = s_names[star0]
    forced_in_all = all(c[(star0, o01, o11)] == star0 for c in candidates)
    if not forced_in_all:
        raise CounterexampleBroken("forced value fails in some candidate")

    chain = (
        ("m(11,*0,*0)", s_names[candidates[0][(o11, star0, star0)]]),
        ("m(*0,01,11)", s_names[candidates[0][(star0, o01, o11)]]),
        ("m(01,*0,*0)", s_names[candidates[0][(o01, star0, star0)]]),
        ("m(11,11,m(01,*0,*0))", s_names[candidates[0][(o11, o11, candidates[0][(o01, star0, star0)])]]),
    )
    # associativity would force m(11,*0,*0) = m(11, m(*0,01,11), *0)
    # = m(11,11,m(01,*0,*0)), i.e. 11 = 01

    assoc_count = 0
    violations = []
    for i, cand in enumerate(candidates):
        witness = None
        for u in range(4):
            if witness:
                break
            for v in range(4):
                if eta[u] != eta[v]:
                    continue
                if witness:
                    break
                for (x, y, z) in domain:
                    if eta[x] != eta[u]:
                        continue
                    if cand[(u, v, cand[(x, y, z)])] != cand[(cand[(u, v, x)], y, z)]:
                        witness = (u, v, x, y, z)
                        break
        if witness is None:
            assoc_count += 1
        else:
            violations.append((i, tuple(s_names[w] for w in witness)))
    if assoc_count != 0:
        raise CounterexampleBroken("an associative candidate exists")

    return CounterexampleReport(
        ("1", "0"),
        total_names,
        tuple(products),
        s_names,
        action,
        len(candidates),
        forced_value,
        forced_in_all,
        0,
        chain,
        tuple(violations),
    )
