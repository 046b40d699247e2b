"""Ready-made finite algebras: groups, semilattices and Maltsev quasigroups.

Group-like algebras carry the signature (mul/2, inv/1, e/0) — cyclic groups
use (plus/2, neg/1, zero/0) — so their Maltsev term x * inv(y) * z can be
written down directly instead of being rediscovered by clone search.
"""

from __future__ import annotations

import itertools

from .algebra import FiniteAlgebra, Operation, TermOp, eval_term


def _binary_table(n, fn):
    return tuple(fn(a, b) for a, b in itertools.product(range(n), repeat=2))


def cyclic_group(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(
        n,
        (
            Operation("plus", 2, _binary_table(n, lambda a, b: (a + b) % n)),
            Operation("neg", 1, tuple((-a) % n for a in range(n))),
            Operation("zero", 0, (0,)),
        ),
        name=f"Z{n}",
    )


def klein_four() -> FiniteAlgebra:
    return FiniteAlgebra(
        4,
        (
            Operation("plus", 2, _binary_table(4, lambda a, b: a ^ b)),
            Operation("neg", 1, (0, 1, 2, 3)),
            Operation("zero", 0, (0,)),
        ),
        name="V4",
    )


def _group_algebra(name, n, mul, inv_map, unit=0) -> FiniteAlgebra:
    return FiniteAlgebra(
        n,
        (
            Operation("mul", 2, _binary_table(n, mul)),
            Operation("inv", 1, tuple(inv_map(a) for a in range(n))),
            Operation("e", 0, (unit,)),
        ),
        name=name,
    )


def dihedral_group(n: int) -> FiniteAlgebra:
    """Dihedral group of order 2n; element i + n*j is (rotation^i, flip^j)."""

    def mul(a, b):
        i1, j1 = a % n, a // n
        i2, j2 = b % n, b // n
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return i + n * (j1 ^ j2)

    def inv(a):
        i, j = a % n, a // n
        return ((-i) % n if j == 0 else i) + n * j

    return _group_algebra(f"D{n}", 2 * n, mul, inv)


def quaternion_group() -> FiniteAlgebra:
    """Q8 with elements 1,-1,i,-i,j,-j,k,-k numbered 0..7."""
    # (unit, sign): units 0=1, 1=i, 2=j, 3=k; index = 2*unit + sign
    mul_unit = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }

    def mul(a, b):
        ua, sa = a // 2, a % 2
        ub, sb = b // 2, b % 2
        u, s = mul_unit[(ua, ub)]
        return 2 * u + (sa ^ sb ^ s)

    def inv(a):
        u, s = a // 2, a % 2
        if u == 0:
            return a
        return 2 * u + (s ^ 1)

    return _group_algebra("Q8", 8, mul, inv)


def symmetric_group_3() -> FiniteAlgebra:
    perms = list(itertools.permutations(range(3)))

    def mul(a, b):
        pa, pb = perms[a], perms[b]
        return perms.index(tuple(pa[pb[i]] for i in range(3)))

    def inv(a):
        pa = perms[a]
        out = [0, 0, 0]
        for i, v in enumerate(pa):
            out[v] = i
        return perms.index(tuple(out))

    return _group_algebra("S3", 6, mul, inv, unit=perms.index((0, 1, 2)))


def two_element_semilattice() -> FiniteAlgebra:
    return FiniteAlgebra(
        2, (Operation("meet", 2, (0, 0, 0, 1)),), name="semilattice2"
    )


def subtraction_quasigroup(n: int) -> FiniteAlgebra:
    """(Z_n, x - y): a quasigroup whose clone contains x - y + z."""
    return FiniteAlgebra(
        n,
        (Operation("sub", 2, _binary_table(n, lambda a, b: (a - b) % n)),),
        name=f"SubQ{n}",
    )


def affine_quasigroup_3() -> FiniteAlgebra:
    """(Z_3, -x - y): idempotent commutative quasigroup, Maltsev."""
    return FiniteAlgebra(
        3,
        (Operation("star", 2, _binary_table(3, lambda a, b: (-a - b) % 3)),),
        name="AffQ3",
    )


def _term_op(alg: FiniteAlgebra, witness) -> TermOp:
    table = tuple(
        eval_term(alg, witness, args)
        for args in itertools.product(range(alg.size), repeat=3)
    )
    return TermOp(3, table, witness)


def group_maltsev_term(alg: FiniteAlgebra, mul="mul", inv="inv") -> TermOp:
    """The term x * inv(y) * z as a ternary TermOp of a group-like algebra."""
    witness = (mul, ("var", 0), (mul, (inv, ("var", 1)), ("var", 2)))
    return _term_op(alg, witness)


def quasigroup_maltsev_term(alg: FiniteAlgebra) -> TermOp:
    if alg.name.startswith("SubQ"):
        witness = ("sub", ("var", 0), ("sub", ("var", 1), ("var", 2)))
    elif alg.name == "AffQ3":
        witness = (
            "star",
            ("var", 0),
            ("star", ("var", 1), ("star", ("var", 0), ("star", ("var", 1), ("var", 2)))),
        )
    else:
        raise KeyError(alg.name)
    return _term_op(alg, witness)


def maltsev_corpus() -> list[tuple[FiniteAlgebra, TermOp]]:
    """Maltsev algebras of size <= 8 with their Maltsev terms."""
    out = []
    for n in (2, 3, 4, 5, 6):
        g = cyclic_group(n)
        out.append((g, group_maltsev_term(g, "plus", "neg")))
    v4 = klein_four()
    out.append((v4, group_maltsev_term(v4, "plus", "neg")))
    for g in (dihedral_group(4), quaternion_group(), symmetric_group_3()):
        out.append((g, group_maltsev_term(g)))
    sq = subtraction_quasigroup(5)
    out.append((sq, quasigroup_maltsev_term(sq)))
    aq = affine_quasigroup_3()
    out.append((aq, quasigroup_maltsev_term(aq)))
    return out


def group_corpus() -> list[tuple[FiniteAlgebra, TermOp, str, str]]:
    """Groups with their Maltsev terms and (mul, inv) operation names."""
    out = []
    for n in (2, 3, 4, 5, 6):
        g = cyclic_group(n)
        out.append((g, group_maltsev_term(g, "plus", "neg"), "plus", "neg"))
    v4 = klein_four()
    out.append((v4, group_maltsev_term(v4, "plus", "neg"), "plus", "neg"))
    for g in (dihedral_group(4), quaternion_group(), symmetric_group_3()):
        out.append((g, group_maltsev_term(g), "mul", "inv"))
    return out
