"""Finite rings, left modules, linear forms and form-bimodules.

A linear form d: M -> R (an R-module map into the ring with its left
regular action) is the classifying datum of an abelian Maltsev theory
without constants; a form-bimodule (B, K, delta, dot) is the coefficient
datum of its abelian extensions.  All laws are verified exhaustively at
construction time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .abgroup import AbelianGroup, group_from_presentation
from .errors import InvariantViolation


@dataclass(frozen=True)
class FiniteRing:
    size: int
    add: tuple[int, ...]
    mul: tuple[int, ...]
    zero: int
    one: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.size
        grp = AbelianGroup(n, self.add)  # validates the additive group
        if grp.zero != self.zero:
            raise InvariantViolation("ring-zero", self.zero)
        object.__setattr__(self, "_grp", grp)
        if len(self.mul) != n * n:
            raise InvariantViolation("ring-mul-length", len(self.mul))
        for a in range(n):
            if self.mulv(self.one, a) != a or self.mulv(a, self.one) != a:
                raise InvariantViolation("ring-unit", a)
            for b in range(n):
                for c in range(n):
                    if self.mulv(self.mulv(a, b), c) != self.mulv(a, self.mulv(b, c)):
                        raise InvariantViolation("ring-mul-associative", (a, b, c))
                    if self.mulv(a, self.plus(b, c)) != self.plus(
                        self.mulv(a, b), self.mulv(a, c)
                    ):
                        raise InvariantViolation("ring-left-distributive", (a, b, c))
                    if self.mulv(self.plus(a, b), c) != self.plus(
                        self.mulv(a, c), self.mulv(b, c)
                    ):
                        raise InvariantViolation("ring-right-distributive", (a, b, c))

    @classmethod
    def from_tables(cls, add, mul, name: str = "") -> "FiniteRing":
        n = int(len(add) ** 0.5)
        grp = AbelianGroup(n, tuple(add))
        one = None
        for e in range(n):
            if all(mul[e * n + a] == a and mul[a * n + e] == a for a in range(n)):
                one = e
                break
        if one is None:
            raise InvariantViolation("ring-unit-exists", None)
        return cls(n, tuple(add), tuple(mul), grp.zero, one, name)

    def plus(self, a, b):
        return self.add[a * self.size + b]

    def minus(self, a, b):
        return self._grp.minus(a, b)

    def neg(self, a):
        return self._grp.neg[a]

    def mulv(self, a, b):
        return self.mul[a * self.size + b]

    def additive_group(self) -> AbelianGroup:
        return self._grp

    def to_json(self):
        return {
            "name": self.name,
            "size": self.size,
            "add": list(self.add),
            "mul": list(self.mul),
            "zero": self.zero,
            "one": self.one,
        }


def cyclic_ring(n: int, name: str = "") -> FiniteRing:
    add = tuple((a + b) % n for a in range(n) for b in range(n))
    mul = tuple((a * b) % n for a in range(n) for b in range(n))
    return FiniteRing.from_tables(add, mul, name or f"Z{n}")


def dual_numbers_f2(name: str = "F2eps") -> FiniteRing:
    """F2[eps]/(eps^2): elements a + b*eps indexed 2a + b."""
    def enc(a, b):
        return 2 * a + b

    add = []
    mul = []
    for x in range(4):
        for y in range(4):
            a1, b1 = x // 2, x % 2
            a2, b2 = y // 2, y % 2
            add.append(enc(a1 ^ a2, b1 ^ b2))
            mul.append(enc(a1 & a2, (a1 & b2) ^ (b1 & a2)))
    return FiniteRing.from_tables(tuple(add), tuple(mul), name)


@dataclass(frozen=True)
class LeftModule:
    ring: FiniteRing
    size: int
    add: tuple[int, ...]
    act: tuple[int, ...]  # flat ring.size x size table
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.size
        grp = AbelianGroup(n, self.add)
        object.__setattr__(self, "_grp", grp)
        if len(self.act) != self.ring.size * n:
            raise InvariantViolation("module-act-length", len(self.act))
        R = self.ring
        for r in range(R.size):
            for x in range(n):
                for y in range(n):
                    if self.smul(r, grp.plus(x, y)) != grp.plus(
                        self.smul(r, x), self.smul(r, y)
                    ):
                        raise InvariantViolation("module-distributive-right", (r, x, y))
        for r in range(R.size):
            for s in range(R.size):
                for x in range(n):
                    if self.smul(R.plus(r, s), x) != grp.plus(
                        self.smul(r, x), self.smul(s, x)
                    ):
                        raise InvariantViolation("module-distributive-left", (r, s, x))
                    if self.smul(R.mulv(r, s), x) != self.smul(r, self.smul(s, x)):
                        raise InvariantViolation("module-mul-compatible", (r, s, x))
        for x in range(n):
            if self.smul(R.one, x) != x:
                raise InvariantViolation("module-unit", x)

    def plus(self, a, b):
        return self.add[a * self.size + b]

    def minus(self, a, b):
        return self._grp.minus(a, b)

    def neg(self, a):
        return self._grp.neg[a]

    @property
    def zero(self):
        return self._grp.zero

    def smul(self, r, x):
        return self.act[r * self.size + x]

    def additive_group(self) -> AbelianGroup:
        return self._grp

    def to_json(self):
        return {
            "name": self.name,
            "size": self.size,
            "add": list(self.add),
            "act": list(self.act),
        }


def module_over_self(ring: FiniteRing, name: str = "") -> LeftModule:
    return LeftModule(ring, ring.size, ring.add, ring.mul, name or f"{ring.name}-reg")


def zero_module(ring: FiniteRing, name: str = "0") -> LeftModule:
    return LeftModule(ring, 1, (0,), (0,) * ring.size, name)


def submodule(module: LeftModule, elements, name: str = "") -> tuple[LeftModule, tuple[int, ...]]:
    """Submodule on a closed subset; returns the module and the element list."""
    elems = sorted(set(elements))
    if module.zero not in elems:
        raise InvariantViolation("submodule-zero", elems)
    slot = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    add = []
    for a in elems:
        for b in elems:
            v = module.plus(a, b)
            if v not in slot:
                raise InvariantViolation("submodule-closed-add", (a, b))
            add.append(slot[v])
    act = []
    for r in range(module.ring.size):
        for a in elems:
            v = module.smul(r, a)
            if v not in slot:
                raise InvariantViolation("submodule-closed-act", (r, a))
            act.append(slot[v])
    return LeftModule(module.ring, k, tuple(add), tuple(act), name), tuple(elems)


@dataclass(frozen=True)
class LinearForm:
    """A left-module map d: M -> R, with R acting on itself from the left."""

    module: LeftModule
    d: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        M, R = self.module, self.module.ring
        if len(self.d) != M.size:
            raise InvariantViolation("form-length", len(self.d))
        for x in range(M.size):
            for y in range(M.size):
                if self.d[M.plus(x, y)] != R.plus(self.d[x], self.d[y]):
                    raise InvariantViolation("form-additive", (x, y))
        for r in range(R.size):
            for x in range(M.size):
                if self.d[M.smul(r, x)] != R.mulv(r, self.d[x]):
                    raise InvariantViolation("form-linear", (r, x))

    @property
    def ring(self) -> FiniteRing:
        return self.module.ring

    def to_json(self):
        return {
            "name": self.name,
            "ring": self.ring.to_json(),
            "module": self.module.to_json(),
            "d": list(self.d),
        }


def tensor_over_ring(
    ring: FiniteRing,
    bgroup: AbelianGroup,
    bright: tuple[int, ...],
    module: LeftModule,
):
    """B (x)_R M for a right action `bright` of the ring on B.

    Presented by one generator per pair (b, m) with biadditivity and
    balance relations, collapsed by Smith normal form.  Returns the tensor
    group and the pairing table (b, m) -> element.
    """
    nb, nm = bgroup.size, module.size
    gen = lambda b, m: b * nm + m
    ngens = nb * nm
    relations = []

    def rel(pos, negs):
        row = [0] * ngens
        row[pos] += 1
        for g in negs:
            row[g] -= 1
        relations.append(row)

    for b1 in range(nb):
        for b2 in range(nb):
            for m in range(nm):
                rel(gen(bgroup.plus(b1, b2), m), [gen(b1, m), gen(b2, m)])
    for b in range(nb):
        for m1 in range(nm):
            for m2 in range(nm):
                rel(gen(b, module.plus(m1, m2)), [gen(b, m1), gen(b, m2)])
    for b in range(nb):
        for r in range(ring.size):
            for m in range(nm):
                rel(gen(bright[b * ring.size + r], m), [gen(b, module.smul(r, m))])
    # bound generator orders so the quotient is manifestly finite
    for b in range(nb):
        for m in range(nm):
            row = [0] * ngens
            row[gen(b, m)] = _exponent(bgroup)
            relations.append(row)
    tensor, coords = group_from_presentation(ngens, relations)
    pair = tuple(coords[gen(b, m)] for b in range(nb) for m in range(nm))
    return tensor, pair


def _exponent(g: AbelianGroup) -> int:
    exp = 1
    for a in range(g.size):
        k = 1
        v = a
        while v != g.zero:
            v = g.plus(v, a)
            k += 1
        exp = exp * k // _gcd(exp, k)
    return exp


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class DBimodule:
    """Coefficient datum over a linear form: an R-R-bimodule B, a left
    module K, an R-linear delta: K -> B and a pairing dot: B x M -> K with
    delta(b.m) = b * d(m)."""

    form: LinearForm
    bgroup: AbelianGroup
    bleft: tuple[int, ...]  # R.size x B.size
    bright: tuple[int, ...]  # B.size x R.size
    kmodule: LeftModule
    delta: tuple[int, ...]  # K.size -> B
    dot: tuple[int, ...]  # B.size x M.size -> K
    name: str = field(default="", compare=False)

    def __post_init__(self):
        R = self.form.ring
        M = self.form.module
        B, K = self.bgroup, self.kmodule
        if K.ring is not R and K.ring != R:
            raise InvariantViolation("bimodule-kmodule-ring", None)
        if len(self.bleft) != R.size * B.size or len(self.bright) != B.size * R.size:
            raise InvariantViolation("bimodule-action-length", None)
        if len(self.delta) != K.size or len(self.dot) != B.size * M.size:
            raise InvariantViolation("bimodule-map-length", None)
        lact = lambda r, b: self.bleft[r * B.size + b]
        ract = lambda b, r: self.bright[b * R.size + r]
        for r in range(R.size):
            for b1 in range(B.size):
                for b2 in range(B.size):
                    if lact(r, B.plus(b1, b2)) != B.plus(lact(r, b1), lact(r, b2)):
                        raise InvariantViolation("bimodule-left-additive", (r, b1, b2))
                    if ract(B.plus(b1, b2), r) != B.plus(ract(b1, r), ract(b2, r)):
                        raise InvariantViolation("bimodule-right-additive", (r, b1, b2))
        for r in range(R.size):
            for s in range(R.size):
                for b in range(B.size):
                    if lact(R.plus(r, s), b) != B.plus(lact(r, b), lact(s, b)):
                        raise InvariantViolation("bimodule-left-distributive", (r, s, b))
                    if ract(b, R.plus(r, s)) != B.plus(ract(b, r), ract(b, s)):
                        raise InvariantViolation("bimodule-right-distributive", (r, s, b))
                    if lact(R.mulv(r, s), b) != lact(r, lact(s, b)):
                        raise InvariantViolation("bimodule-left-action", (r, s, b))
                    if ract(b, R.mulv(r, s)) != ract(ract(b, r), s):
                        raise InvariantViolation("bimodule-right-action", (r, s, b))
                    if ract(lact(r, b), s) != lact(r, ract(b, s)):
                        raise InvariantViolation("bimodule-actions-commute", (r, s, b))
        for b in range(B.size):
            if lact(R.one, b) != b or ract(b, R.one) != b:
                raise InvariantViolation("bimodule-unital", b)
        for k1 in range(K.size):
            for k2 in range(K.size):
                if self.delta[K.plus(k1, k2)] != B.plus(self.delta[k1], self.delta[k2]):
                    raise InvariantViolation("delta-additive", (k1, k2))
        for r in range(R.size):
            for k in range(K.size):
                if self.delta[K.smul(r, k)] != lact(r, self.delta[k]):
                    raise InvariantViolation("delta-linear", (r, k))
        dotv = lambda b, m: self.dot[b * M.size + m]
        for b in range(B.size):
            for m1 in range(M.size):
                for m2 in range(M.size):
                    if dotv(b, M.plus(m1, m2)) != K.plus(dotv(b, m1), dotv(b, m2)):
                        raise InvariantViolation("dot-additive-m", (b, m1, m2))
        for b1 in range(B.size):
            for b2 in range(B.size):
                for m in range(M.size):
                    if dotv(B.plus(b1, b2), m) != K.plus(dotv(b1, m), dotv(b2, m)):
                        raise InvariantViolation("dot-additive-b", (b1, b2, m))
        for b in range(B.size):
            for r in range(R.size):
                for m in range(M.size):
                    if dotv(ract(b, r), m) != dotv(b, M.smul(r, m)):
                        raise InvariantViolation("dot-balanced", (b, r, m))
                    if dotv(lact(r, b), m) != K.smul(r, dotv(b, m)):
                        raise InvariantViolation("dot-left-linear", (r, b, m))
        for b in range(B.size):
            for m in range(M.size):
                if self.delta[dotv(b, m)] != ract(b, self.form.d[m]):
                    raise InvariantViolation("delta-dot-compatible", (b, m))

    def lact(self, r, b):
        return self.bleft[r * self.bgroup.size + b]

    def ract(self, b, r):
        return self.bright[b * self.form.ring.size + r]

    def dotv(self, b, m):
        return self.dot[b * self.form.module.size + m]

    def to_json(self):
        return {
            "name": self.name,
            "b_size": self.bgroup.size,
            "b_add": list(self.bgroup.add),
            "b_left": list(self.bleft),
            "b_right": list(self.bright),
            "k_size": self.kmodule.size,
            "k_add": list(self.kmodule.add),
            "k_act": list(self.kmodule.act),
            "delta": list(self.delta),
            "dot": list(self.dot),
        }


def shifted_module(form: LinearForm, kmodule: LeftModule, name: str = "") -> DBimodule:
    """The bimodule with B = 0: only the left module K survives."""
    return DBimodule(
        form,
        AbelianGroup.trivial(),
        (0,) * form.ring.size,
        (0,) * form.ring.size,
        kmodule,
        (0,) * kmodule.size,
        (0,) * form.module.size,
        name or f"{kmodule.name}[1]",
    )


def cone_bimodule(
    form: LinearForm,
    bgroup: AbelianGroup,
    bleft: tuple[int, ...],
    bright: tuple[int, ...],
    name: str = "",
) -> DBimodule:
    """The bimodule with K = B (x)_R M, dot the canonical pairing and
    delta(b (x) m) = b * d(m)."""
    R, M = form.ring, form.module
    tensor, pair = tensor_over_ring(R, bgroup, bright, M)
    pairv = lambda b, m: pair[b * M.size + m]
    # left module structure on the tensor: r.(b (x) m) = (rb) (x) m
    act = [None] * (R.size * tensor.size)
    for r in range(R.size):
        # images of generators determine the additive map
        table = [None] * tensor.size
        table[tensor.zero] = tensor.zero
        frontier = [tensor.zero]
        pending = [(pairv(b, m), pairv(bleft[r * bgroup.size + b], m))
                   for b in range(bgroup.size) for m in range(M.size)]
        for src, dst in pending:
            if table[src] is None:
                table[src] = dst
                frontier.append(src)
            elif table[src] != dst:
                raise InvariantViolation("tensor-action-ill-defined", (r, src))
            while frontier:
                y = frontier.pop()
                for x in range(tensor.size):
                    if table[x] is None:
                        continue
                    v = tensor.plus(x, y)
                    w = tensor.plus(table[x], table[y])
                    if table[v] is None:
                        table[v] = w
                        frontier.append(v)
                    elif table[v] != w:
                        raise InvariantViolation("tensor-action-ill-defined", (r, v))
        if any(v is None for v in table):
            raise InvariantViolation("tensor-not-generated", r)
        for m_, val in enumerate(table):
            act[r * tensor.size + m_] = val
    kmod = LeftModule(R, tensor.size, tensor.add, tuple(act), name=f"{name}-K")
    delta = [None] * tensor.size
    delta[tensor.zero] = bgroup.zero
    # delta on generators, extended additively
    dtable = {tensor.zero: bgroup.zero}
    frontier = [tensor.zero]
    for b in range(bgroup.size):
        for m in range(M.size):
            src = pairv(b, m)
            dst = bright[b * R.size + form.d[m]]
            if src in dtable:
                if dtable[src] != dst:
                    raise InvariantViolation("tensor-delta-ill-defined", (b, m))
            else:
                dtable[src] = dst
                frontier.append(src)
            while frontier:
                y = frontier.pop()
                for x in list(dtable):
                    v = tensor.plus(x, y)
                    w = bgroup.plus(dtable[x], dtable[y])
                    if v in dtable:
                        if dtable[v] != w:
                            raise InvariantViolation("tensor-delta-ill-defined", v)
                    else:
                        dtable[v] = w
                        frontier.append(v)
    if len(dtable) != tensor.size:
        raise InvariantViolation("tensor-delta-partial", len(dtable))
    delta = tuple(dtable[t] for t in range(tensor.size))
    return DBimodule(
        form, bgroup, bleft, bright, kmod, delta, pair, name or "C(B)"
    )


def regular_bimodule(ring: FiniteRing) -> tuple[AbelianGroup, tuple[int, ...], tuple[int, ...]]:
    """R as an R-R-bimodule: (group, left action, right action)."""
    grp = ring.additive_group()
    left = ring.mul
    right = ring.mul
    return grp, tuple(left), tuple(right)
