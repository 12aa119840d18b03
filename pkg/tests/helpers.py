"""Seeded generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from nilorbit.exact import I_UNIT, Matrix
from nilorbit.hodge import HodgeFiltration, NilpotentCone, SymplecticLattice, standard_form


def weight1_form(g: int) -> Matrix:
    """[[0, -I], [I, 0]] on (e_1..e_g, e^1..e^g)."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[i][g + i] = -1
        rows[g + i][i] = 1
    return Matrix(rows)


def weight1_lattice(g: int) -> SymplecticLattice:
    return SymplecticLattice(weight1_form(g), 1, (g, g))


def ns(S) -> Matrix:
    """Weight-1 nilpotent [[0, S], [0, 0]] for a symmetric g x g matrix S."""
    g = len(S)
    rows = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        for j in range(g):
            rows[i][g + j] = S[i][j]
    return Matrix(rows)


def f_hodge_tate(g: int) -> HodgeFiltration:
    """F^1 spanned by i e_j + e^j, an orbit witness for every cone of NS(S) with S >= 0."""
    vecs = []
    for j in range(g):
        v = [0] * (2 * g)
        v[j] = I_UNIT
        v[g + j] = 1
        vecs.append(tuple(v))
    return HodgeFiltration.from_pieces(2 * g, {1: vecs})


def random_psd(g: int, rng: random.Random, rank: int | None = None):
    """Sum of rank-one forms v v^T with small integer v."""
    rank = rank if rank is not None else rng.randint(1, g)
    S = [[0] * g for _ in range(g)]
    for _ in range(rank):
        v = [rng.randint(-2, 2) for _ in range(g)]
        if not any(v):
            v[rng.randrange(g)] = 1
        for i in range(g):
            for j in range(g):
                S[i][j] += v[i] * v[j]
    return S


def random_weight1_cone(rng: random.Random):
    """(lattice, cone, witness) with 2 or 3 commuting generators NS(S_i), S_i >= 0."""
    g = rng.choice((2, 3))
    k = rng.choice((2, 3))
    while True:
        gens = [ns(random_psd(g, rng)) for _ in range(k)]
        ranks = {m.rank() for m in gens}
        if 0 in ranks:
            continue
        if len({tuple(m.flatten()) for m in gens}) == k:
            break
    return weight1_lattice(g), NilpotentCone(tuple(gens)), f_hodge_tate(g)


def transvection(Q: Matrix, v, c=1) -> Matrix:
    """x -> x + c Q(v, x) v, an integral symplectic matrix for integral v and c."""
    col = Matrix([[a] for a in v])
    return Matrix.identity(Q.nrows) + (col @ (col.T @ Q)) * c


def random_symplectic(Q: Matrix, rng: random.Random, steps: int = 4) -> Matrix:
    g = Matrix.identity(Q.nrows)
    for _ in range(steps):
        v = [rng.randint(-1, 1) for _ in range(Q.nrows)]
        if any(v):
            g = transvection(Q, v, rng.choice((-1, 1))) @ g
    return g


def random_sp_nilpotent(Q: Matrix, rng: random.Random, density: float = 0.5) -> Matrix:
    """N = (X - Q^{-1} X^T Q) / 2 for a sparse strictly upper triangular X, then conjugated.

    For antidiagonal Q both terms are strictly upper triangular, so N is nilpotent,
    and the antisymmetrisation puts it in sp(Q).
    """
    n = Q.nrows
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                rows[i][j] = rng.randint(-3, 3)
    X = Matrix(rows)
    qi = Q.inverse()
    N = (X - qi @ X.T @ Q) * Fraction(1, 2)
    g = random_symplectic(Q, rng)
    return g @ N @ g.inverse()


def sp_forms():
    """Antidiagonal forms for sp(4) and sp(6)."""
    return [standard_form((2,)), standard_form((3,))]
