"""Independent oracles used to freeze derived values.

None of these call the package's own linear algebra, LP, weight filtration
or Deligne splitting code.  They use sympy (exact Jordan form, nullspaces),
scipy (HiGHS LP) and mpmath (high precision Hodge-Riemann checks), so an
agreement between the package and an oracle is a real cross-check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import numpy as np
import scipy.optimize
import sympy

from nilorbit.exact import GaussianRational, Matrix


# --- conversions -------------------------------------------------------------

def to_sympy(m: Matrix) -> sympy.Matrix:
    def entry(x):
        if isinstance(x, GaussianRational):
            return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(
                x.im.numerator, x.im.denominator)
        x = Fraction(x)
        return sympy.Rational(x.numerator, x.denominator)
    return sympy.Matrix([[entry(m[i, j]) for j in range(m.ncols)] for i in range(m.nrows)])


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(float(x.re), float(x.im))
    return complex(float(x))


def to_numpy(m: Matrix) -> np.ndarray:
    return np.array([[to_complex(m[i, j]) for j in range(m.ncols)] for i in range(m.nrows)])


def to_fractions(v) -> tuple:
    """sympy rationals -> Fractions."""
    out = []
    for x in v:
        p, q = sympy.fraction(sympy.nsimplify(x))
        out.append(Fraction(int(p), int(q)))
    return tuple(out)


def sympy_span_equal(vectors_a, vectors_b, n) -> bool:
    a = sympy.Matrix.hstack(*[sympy.Matrix(v) for v in vectors_a]) if vectors_a else sympy.zeros(n, 0)
    b = sympy.Matrix.hstack(*[sympy.Matrix(v) for v in vectors_b]) if vectors_b else sympy.zeros(n, 0)
    ra = a.rank() if a.shape[1] else 0
    rb = b.rank() if b.shape[1] else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return sympy.Matrix.hstack(a, b).rank() == ra


# --- weight filtration from Jordan chains -----------------------------------

def jm_oracle(n: Matrix) -> dict:
    """{k: basis of W_k} from a Jordan basis: in a block of size s with chain
    p_1, ..., p_s (N p_1 = 0, N p_{i+1} = p_i) the vector p_i has weight 2i - s - 1."""
    N = to_sympy(n)
    d = N.shape[0]
    P, J = N.jordan_form()
    # walk the blocks along the diagonal of J
    weights = []
    i = 0
    while i < d:
        s = 1
        while i + s < d and J[i + s - 1, i + s] == 1:
            s += 1
        weights += [2 * (j + 1) - s - 1 for j in range(s)]
        i += s
    cols = [P[:, j] for j in range(d)]
    lo, hi = min(weights), max(weights)
    out = {}
    for k in range(lo - 1, hi + 1):
        out[k] = [tuple(c) for c, w in zip(cols, weights) if w <= k]
    return out


# --- chamber counts by sign vectors -------------------------------------------

def facet_normals(gens: list[tuple]) -> list[tuple]:
    """Inward facet normals of a full-dimensional cone, by brute force over (d-1)-subsets."""
    d = len(gens[0])
    normals = set()
    for sub in itertools.combinations(gens, d - 1):
        ns = sympy.Matrix([list(g) for g in sub]).nullspace()
        if len(ns) != 1:
            continue
        v = ns[0]
        v = v * sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        g = sympy.igcd(*[int(x) for x in v])
        v = tuple(int(x) // g for x in v)
        vals = [sum(a * b for a, b in zip(v, x)) for x in gens]
        if all(x >= 0 for x in vals):
            normals.add(v)
        elif all(x <= 0 for x in vals):
            normals.add(tuple(-a for a in v))
    return sorted(normals)


def _feasible(d: int, eq: list, gt: list, ge: list) -> bool:
    """Is there x with eq.x = 0, gt.x >= 1, ge.x >= 0 (homogeneous, so strict rows scale to 1)?"""
    A_ub, b_ub = [], []
    for f in gt:
        A_ub.append([-a for a in f])
        b_ub.append(-1.0)
    for f in ge:
        A_ub.append([-a for a in f])
        b_ub.append(0.0)
    res = scipy.optimize.linprog(np.zeros(d), A_ub=np.array(A_ub, float) if A_ub else None,
                                 b_ub=np.array(b_ub) if b_ub else None,
                                 A_eq=np.array(eq, float) if eq else None,
                                 b_eq=np.zeros(len(eq)) if eq else None,
                                 bounds=[(None, None)] * d, method="highs")
    return res.status == 0


def chamber_count_oracle(cones: list[list[tuple]]) -> int:
    """Number of relatively open cells (origin included) of the arrangement of all
    facet hyperplanes, restricted to the union of the given full-dimensional closed cones.

    Depth-first over sign vectors; a partial sign vector is dropped as soon as the
    LP finds it infeasible or it excludes every cone.
    """
    d = len(cones[0][0])
    per_cone = [set(facet_normals(c)) for c in cones]
    forms = sorted(set().union(*per_cone))
    count = 0

    def alive(signs):
        return [i for i, fs in enumerate(per_cone)
                if all(s >= 0 for f, s in zip(forms, signs) if f in fs)]

    def walk(signs):
        nonlocal count
        if not alive(signs):
            return
        eq = [f for f, s in zip(forms, signs) if s == 0]
        gt = [f if s > 0 else tuple(-a for a in f) for f, s in zip(forms, signs) if s != 0]
        if not _feasible(d, eq, gt, []):
            return
        if len(signs) == len(forms):
            count += 1
            return
        for s in (-1, 0, 1):
            walk(signs + [s])

    walk([])
    return count


def in_closed_union(x, cones: list[list[tuple]]) -> bool:
    """x in the union of the closed cones, by LP on nonnegative combinations."""
    for gens in cones:
        A = np.array(gens, float).T
        res = scipy.optimize.linprog(np.zeros(len(gens)), A_eq=A, b_eq=np.array(x, float),
                                     bounds=[(0, None)] * len(gens), method="highs")
        if res.status == 0:
            return True
    return False


# --- nilpotent orbit test by the orbit theorem --------------------------------

def _mp_matrix(m: Matrix):
    return mpmath.matrix([[mpmath.mpc(*_reim(m[i, j])) for j in range(m.ncols)] for i in range(m.nrows)])


def _reim(x):
    if isinstance(x, GaussianRational):
        return mpmath.mpf(x.re.numerator) / x.re.denominator, mpmath.mpf(x.im.numerator) / x.im.denominator
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator, 0


def _cols(m, idx):
    out = mpmath.matrix(m.rows, len(idx))
    for c, j in enumerate(idx):
        for i in range(m.rows):
            out[i, c] = m[i, j]
    return out


def _hstack(*ms):
    ms = [m for m in ms if m.cols]
    out = mpmath.matrix(ms[0].rows, sum(m.cols for m in ms))
    c = 0
    for m in ms:
        for j in range(m.cols):
            for i in range(m.rows):
                out[i, c] = m[i, j]
            c += 1
    return out


def _conj(m):
    return m.apply(mpmath.conj)


def _orth_k(a, k):
    """Orthonormal basis of the top-k left singular directions of a."""
    u, _, _ = mpmath.svd_c(a)
    return _cols(u, range(k))


def _null_k(m, k):
    """k smallest right singular directions of m, with the singular values."""
    _, s, v = mpmath.svd_c(m, full_matrices=True)
    vh = v  # mpmath returns V^H as rows
    n = m.cols
    rows = list(range(n - k, n))
    out = mpmath.matrix(n, k)
    for c, r in enumerate(rows):
        for i in range(n):
            out[i, c] = mpmath.conj(vh[r, i])
    sv = [s[i] for i in range(min(m.rows, m.cols))] + [mpmath.mpf(0)] * max(0, n - m.rows)
    return out, sv


def hodge_riemann_oracle(Q: Matrix, weight: int, sign: int, F_steps: dict, gens: list[Matrix],
                         t: float = 60.0, dps: int = 60) -> bool:
    """Is exp(i t sum N_j) F a Q-polarized pure Hodge structure of the given weight?

    ``F_steps`` maps p to a list of spanning vectors of F^p.  Checks the Hodge
    decomposition H = sum H^{p,w-p} and positivity of i^{p-q} Q(v, conj v) on each
    H^{p,q}, together with Q-orthogonality of the pieces.  Orbit theorem: for a
    nilpotent orbit this holds for t large; with the wrong sign or without
    transversality it fails.  Runs in mpmath at ``dps`` digits since exp(itN)
    is badly conditioned for large t; the exponential is the finite Taylor sum.
    """
    with mpmath.workdps(dps):
        q = _mp_matrix(Q) * sign
        n = q.rows
        N = _mp_matrix(gens[0])
        for g in gens[1:]:
            N += _mp_matrix(g)
        tN = N * mpmath.mpc(0, t)
        G = mpmath.eye(n)
        term = mpmath.eye(n)
        for k in range(1, n + 1):
            term = term * tN / k
            G += term
        Fp = {}
        for p in range(weight + 2):
            vs = F_steps.get(p) if p else None
            if p == 0:
                Fp[p] = mpmath.eye(n)
            elif vs:
                raw = G * mpmath.matrix([[mpmath.mpc(*_reim(x)) for x in v] for v in vs]).T
                Fp[p] = _orth_k(raw, len(vs))
            else:
                Fp[p] = mpmath.matrix(n, 0)
        pieces = {}
        for p in range(weight + 1):
            k = Fp[p].cols - Fp[p + 1].cols
            if k < 0:
                return False
            if k == 0:
                pieces[p] = mpmath.matrix(n, 0)
                continue
            a, b = Fp[p], _conj(Fp[weight - p])
            if b.cols == 0:
                return False
            m = _hstack(a, b * -1)
            null, sv = _null_k(m, k)
            # the k smallest singular values must vanish to working precision
            if max(abs(x) for x in sorted(sv, key=abs)[:k]) > mpmath.mpf(10) ** (-dps // 3):
                return False
            top = mpmath.matrix([[null[i, j] for j in range(k)] for i in range(a.cols)])
            pieces[p] = a * top
        total = _hstack(*[pieces[p] for p in range(weight + 1)])
        if total.cols != n or min(abs(x) for x in mpmath.svd_c(total, compute_uv=False)) < mpmath.mpf(10) ** -10:
            return False
        for p in range(weight + 1):
            v = pieces[p]
            if v.cols == 0:
                continue
            h = v.T * q * _conj(v) * (mpmath.mpc(0, 1) ** (2 * p - weight))
            h = (h + h.H) / 2
            if min(mpmath.eigh(h, eigvals_only=True)) <= 0:
                return False
            for p2 in range(weight + 1):
                if p2 != p and pieces[p2].cols:
                    cross = v.T * q * _conj(pieces[p2])
                    if mpmath.mnorm(cross, 1) > mpmath.mpf(10) ** (-dps // 3):
                        return False
        return True


def transversal_oracle(gens: list[Matrix], F_steps: dict) -> bool:
    """N F^p ⊆ F^{p-1} by sympy rank counts."""
    top = max(F_steps)
    n = gens[0].nrows if gens else 0
    for g in gens:
        Ns = to_sympy(g)
        for p in range(1, top + 1):
            src = [sympy.Matrix(_sym_vec(v)) for v in F_steps.get(p, [])]
            if not src:
                continue
            dst = [sympy.Matrix(_sym_vec(v)) for v in F_steps.get(p - 1, [])] if p - 1 >= 1 else None
            if dst is None:
                continue
            img = [Ns * v for v in src]
            if not sympy_span_equal(dst + img, dst, n):
                return False
    return True


def _sym_vec(v):
    return [to_sympy(Matrix([[x]]))[0, 0] for x in v]


def orbit_oracle(Q, weight, sign, F_steps, gens, ts=(10.0, 100.0)) -> bool:
    return transversal_oracle(gens, F_steps) and all(
        hodge_riemann_oracle(Q, weight, sign, F_steps, gens, t) for t in ts)


# --- Hodge-Deligne numbers ----------------------------------------------------

def hodge_numbers_at_limit(W_steps: dict, F_steps: dict, n: int) -> dict:
    """dim Gr^W_k of the weight filtration, from a dict k -> spanning vectors (sympy)."""
    out = {}
    prev = 0
    for k in sorted(W_steps):
        vs = W_steps[k]
        r = sympy.Matrix.hstack(*[sympy.Matrix(v) for v in vs]).rank() if vs else 0
        if r != prev:
            out[k] = r - prev
        prev = r
    return out
