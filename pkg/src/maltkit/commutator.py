"""Commutator calculus for finite Maltsev algebras.

Centrality of a pair of congruences is decided by restricting a Maltsev
term to the mixed relation {(x,y,z) : x R y, y S z} and checking that the
restriction is a homomorphism with x S m(x,y,z) R z.  The commutator [R,S]
is computed by generating a congruence on the pair algebra R from the
doubled S-pairs and reading off its same-first-coordinate part; an
independent lattice-based oracle is provided for cross-checking.

Every entry point requires an explicit Maltsev term; non-Maltsev algebras
are rejected rather than silently falling back to a different commutator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra, Operation, TermOp, tuple_index
from .congruence import (
    Congruence,
    all_congruences,
    cg,
    congruence_violation,
    join,
    meet,
    quotient,
    quotient_congruence,
)
from .errors import InternalError, NotMaltsev
from .maltsev import TernaryTable, check_associative, is_maltsev_table


def _require_maltsev(alg: FiniteAlgebra, p: TermOp):
    if p.arity != 3 or len(p.table) != alg.size**3:
        raise NotMaltsev("term must be ternary over the algebra's carrier")
    if not is_maltsev_table(p.table, alg.size):
        raise NotMaltsev("term fails the Maltsev identities")


def _mixed_relation(alg, R, S):
    """Triples (x,y,z) with x R y and y S z, in lexicographic order."""
    return [
        (x, y, z)
        for x in range(alg.size)
        for y in range(alg.size)
        if R.same(x, y)
        for z in range(alg.size)
        if S.same(y, z)
    ]


def _restriction_is_hom(alg: FiniteAlgebra, dom, pvals, ptab) -> bool:
    """Vectorised check that p restricted to `dom` commutes with all operations."""
    d = len(dom)
    if d == 0:
        return True
    cols = [np.fromiter((t[i] for t in dom), dtype=np.int64, count=d) for i in range(3)]
    pv = np.asarray(pvals, dtype=np.int64)
    for op in alg.ops:
        a = op.arity
        if a == 0:
            continue
        table = alg.op_array(op)
        if a == 1:
            fx, fy, fz = table[cols[0]], table[cols[1]], table[cols[2]]
            if not np.array_equal(ptab[fx, fy, fz], table[pv]):
                return False
        elif a == 2:
            i = np.repeat(np.arange(d), d)
            j = np.tile(np.arange(d), d)
            fx = table[cols[0][i], cols[0][j]]
            fy = table[cols[1][i], cols[1][j]]
            fz = table[cols[2][i], cols[2][j]]
            if not np.array_equal(ptab[fx, fy, fz], table[pv[i], pv[j]]):
                return False
        else:
            # chunk the leading arguments; high-arity ops only occur on
            # small carriers so this stays affordable
            i = np.repeat(np.arange(d), d)
            j = np.tile(np.arange(d), d)
            for lead in itertools.product(range(d), repeat=a - 2):
                args_x = [np.full(d * d, cols[0][k]) for k in lead] + [cols[0][i], cols[0][j]]
                args_y = [np.full(d * d, cols[1][k]) for k in lead] + [cols[1][i], cols[1][j]]
                args_z = [np.full(d * d, cols[2][k]) for k in lead] + [cols[2][i], cols[2][j]]
                fx = table[tuple(args_x)]
                fy = table[tuple(args_y)]
                fz = table[tuple(args_z)]
                pargs = [np.full(d * d, pv[k]) for k in lead] + [pv[i], pv[j]]
                if not np.array_equal(ptab[fx, fy, fz], table[tuple(pargs)]):
                    return False
    return True


def centralize(alg: FiniteAlgebra, R: Congruence, S: Congruence, p: TermOp,
               extra_terms=()) -> bool:
    """True iff R and S centralise each other, witnessed through the term p.

    The answer does not depend on the choice of Maltsev term; when
    extra_terms are supplied their restrictions are asserted to agree with
    p's on the mixed relation.
    """
    _require_maltsev(alg, p)
    for q in extra_terms:
        _require_maltsev(alg, q)
    dom = _mixed_relation(alg, R, S)
    n = alg.size
    pvals = [p.table[tuple_index(n, t)] for t in dom]
    for q in extra_terms:
        qvals = [q.table[tuple_index(n, t)] for t in dom]
        if qvals != pvals:
            raise InternalError("Maltsev terms disagree on the mixed relation")
    for (x, y, z), v in zip(dom, pvals):
        if not (S.same(x, v) and R.same(v, z)):
            return False
    ptab = np.asarray(p.table, dtype=np.int64).reshape((alg.size,) * 3)
    return _restriction_is_hom(alg, dom, pvals, ptab)


def commutator(alg: FiniteAlgebra, R: Congruence, S: Congruence, p: TermOp) -> Congruence:
    """[R,S]: congruence generated on the pair algebra R by doubled S-pairs,
    intersected with the same-first-coordinate relation and pushed to M."""
    _require_maltsev(alg, p)
    n = alg.size
    pairs = [(x, y) for x in range(n) for y in range(n) if R.same(x, y)]
    slot = {pr: i for i, pr in enumerate(pairs)}
    ops = []
    for op in alg.ops:
        table = []
        for combo in itertools.product(pairs, repeat=op.arity):
            vx = alg.apply(op, tuple(t[0] for t in combo))
            vy = alg.apply(op, tuple(t[1] for t in combo))
            table.append(slot[(vx, vy)])
        ops.append(Operation(op.name, op.arity, tuple(table)))
    pair_alg = FiniteAlgebra(len(pairs), tuple(ops))

    gens = [
        (slot[(y, y)], slot[(z, z)])
        for y in range(n)
        for z in range(n)
        if S.same(y, z)
    ]
    delta = cg(pair_alg, gens)

    raw = set()
    by_class: dict[tuple[int, int], list[int]] = {}
    for i, (x, y) in enumerate(pairs):
        by_class.setdefault((x, delta.block_index[i]), []).append(y)
    for (_, _), ys in by_class.items():
        for y in ys:
            for y2 in ys:
                raw.add((y, y2))

    labels = _closure_labels(n, raw)
    out = Congruence.from_labels(labels)
    # in the Maltsev case the raw relation is already an equivalence; any
    # discrepancy means a non-Maltsev input slipped through
    for a in range(n):
        for b in range(n):
            if out.same(a, b) and (a, b) not in raw:
                raise InternalError("commutator relation is not transitive-symmetric")
    if congruence_violation(alg, out) is not None:
        raise InternalError("commutator relation is not a congruence")
    return out


def _closure_labels(n, rel):
    from .congruence import _UnionFind

    uf = _UnionFind(n)
    for a, b in rel:
        uf.union(a, b)
    return uf.labels()


def _project_term(p: TermOp, proj, reps, qsize: int) -> TermOp:
    """Image of a term operation under a surjective homomorphism."""
    n = len(proj)
    table = []
    for args in itertools.product(range(qsize), repeat=3):
        lifted = tuple(reps[a] for a in args)
        table.append(proj[p.table[tuple_index(n, lifted)]])
    return TermOp(3, tuple(table), p.witness)


def commutator_oracle(
    alg: FiniteAlgebra,
    R: Congruence,
    S: Congruence,
    p: TermOp,
    max_size: int = 12,
) -> Congruence:
    """Independent lattice characterisation: the meet of all congruences T
    whose quotient makes R/T and S/T centralise each other."""
    _require_maltsev(alg, p)
    acc = Congruence.total(alg.size)
    for T in all_congruences(alg, max_size=max_size):
        qalg, proj = quotient(alg, T)
        reps = [blk[0] for blk in T.blocks()]
        p_t = _project_term(p, proj, reps, qalg.size)
        r_t = quotient_congruence(alg, R, T)
        s_t = quotient_congruence(alg, S, T)
        if centralize(qalg, r_t, s_t, p_t):
            acc = meet(acc, T)
    return acc


def center(alg: FiniteAlgebra, p: TermOp) -> Congruence:
    """Largest congruence centralised by the total congruence.

    Computed as the join of the central principal congruences, then
    verified post hoc: the join is still central and no further principal
    congruence can be added.
    """
    _require_maltsev(alg, p)
    total = Congruence.total(alg.size)
    diag = Congruence.diagonal(alg.size)
    acc = diag
    for a in range(alg.size):
        for b in range(a + 1, alg.size):
            c = cg(alg, [(a, b)])
            if commutator(alg, total, c, p) == diag:
                acc = join(alg, acc, c)
    if commutator(alg, total, acc, p) != diag:
        raise InternalError("join of central principal congruences is not central")
    for a in range(alg.size):
        for b in range(a + 1, alg.size):
            if not acc.same(a, b):
                widened = join(alg, acc, cg(alg, [(a, b)]))
                if commutator(alg, total, widened, p) == diag:
                    raise InternalError(
                        f"center is not maximal: pair {(a, b)} could be added"
                    )
    return acc


@dataclass(frozen=True)
class SeriesReport:
    kind: str  # "lower" | "upper"
    terms: tuple[Congruence, ...]
    stabilized: bool
    class_: int | None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "terms": [[list(b) for b in t.blocks()] for t in self.terms],
            "stabilized": self.stabilized,
            "class": self.class_,
        }


def lower_series(alg: FiniteAlgebra, p: TermOp, max_steps: int | None = None) -> SeriesReport:
    """Descending series G0 = total, G(n+1) = [total, Gn]."""
    _require_maltsev(alg, p)
    total = Congruence.total(alg.size)
    cap = max(alg.size - 1, 1)
    if max_steps is not None:
        cap = min(cap, max_steps)
    terms = [total]
    stabilized = False
    for _ in range(cap):
        nxt = commutator(alg, total, terms[-1], p)
        if nxt == terms[-1]:
            stabilized = True
            break
        terms.append(nxt)
        if nxt.is_diagonal():
            stabilized = True
            break
    cls = None
    for i, t in enumerate(terms):
        if t.is_diagonal():
            cls = i
            break
    return SeriesReport("lower", tuple(terms), stabilized, cls)


def upper_series(alg: FiniteAlgebra, p: TermOp, max_steps: int | None = None) -> SeriesReport:
    """Ascending series z0 = diagonal, z(n+1) = preimage of the center of M/zn."""
    _require_maltsev(alg, p)
    diag = Congruence.diagonal(alg.size)
    cap = max(alg.size - 1, 1)
    if max_steps is not None:
        cap = min(cap, max_steps)
    terms = [diag]
    stabilized = False
    for _ in range(cap):
        cur = terms[-1]
        qalg, proj = quotient(alg, cur)
        reps = [blk[0] for blk in cur.blocks()]
        p_q = _project_term(p, proj, reps, qalg.size)
        z = center(qalg, p_q)
        nxt = Congruence.from_labels([z.block_index[proj[x]] for x in range(alg.size)])
        if nxt == cur:
            stabilized = True
            break
        terms.append(nxt)
        if nxt.is_total():
            stabilized = True
            break
    cls = None
    for i, t in enumerate(terms):
        if t.is_total():
            cls = i
            break
    return SeriesReport("upper", tuple(terms), stabilized, cls)


def is_abelian(alg: FiniteAlgebra, p: TermOp) -> bool:
    """[total,total] = diagonal, cross-checked against the torsor criterion:
    the algebra is abelian iff its Maltsev term is an associative
    homomorphic operation on the full cube."""
    _require_maltsev(alg, p)
    total = Congruence.total(alg.size)
    by_commutator = commutator(alg, total, total, p).is_diagonal()
    hom = centralize(alg, total, total, p)
    assoc = check_associative(TernaryTable.full_from_flat(alg.size, p.table))
    by_torsor = hom and assoc
    if by_commutator != by_torsor:
        raise InternalError("commutator and torsor abelianness criteria disagree")
    return by_commutator


def nilpotence_class(alg: FiniteAlgebra, p: TermOp, max_steps: int | None = None) -> int | None:
    return lower_series(alg, p, max_steps).class_
