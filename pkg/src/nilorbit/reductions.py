"""Weight-3 to weight-1 reductions.

Two constructions are implemented:

* type I: restrict to H_2 = I^{2,2} + I^{1,1}, pick the real basis
  beta_i = Re(alpha_i), e_j and read off a Hodge-Tate weight-1 structure;
* type IV: pass to the quotient W_1 / W_{-2} of the monodromy weight
  filtration, which carries a weight-1 structure of type I(a).

Both start from an adapted symplectic basis: a basis of the lattice in which
Q has the block antidiagonal standard form and every W_k is a coordinate span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .cones import Cone, combine, cone_inside, independent_basis, intersect, matrix_cone
from .errors import (NotParabolic, NotTypeI, NotTypeIV, RealityFailure,
                     WrongShape)
from .exact import (ONE, ZERO, Matrix, Subspace, conj, dot, is_zero_vector,
                    primitive_integer_vector, real_part, vec_add, vec_scale)
from .lp import find_point
from .hodge import (Certificate, HodgeFiltration, LMHSType, NilpotentCone,
                    SymplecticLattice, WeightFiltration, classify_lmhs,
                    is_nilpotent_orbit, jm_weight_filtration, lmhs_splitting,
                    standard_form)


def _q(Q: Matrix, u, v):
    return dot(u, Q.apply(v))


def _integral(v) -> tuple:
    """Primitive integer multiple when v is rational, else v unchanged."""
    if all(isinstance(a, Fraction) for a in v):
        return tuple(Fraction(a) for a in primitive_integer_vector(v))
    return tuple(v)


# --- adapted bases ---------------------------------------------------------

KINDS = ("weight1", "CY3_I", "CY3_IV")


@dataclass
class AdaptedBasis:
    """Adapted basis as the columns of ``P`` (old coordinates), with labels and weights."""

    kind: str
    P: Matrix
    labels: tuple
    weights: tuple  # W(N)-weight of each basis vector (centred at 0)
    blocks: tuple   # sizes of the half blocks used by standard_form
    index_denominator: int = 1

    @property
    def vectors(self) -> list[tuple]:
        return self.P.columns()

    @property
    def P_inv(self) -> Matrix:
        return self.P.inverse()

    def to_adapted(self, m: Matrix) -> Matrix:
        return self.P_inv @ m @ self.P

    def from_adapted(self, m: Matrix) -> Matrix:
        return self.P @ m @ self.P_inv

    def coords(self, v) -> tuple:
        return self.P_inv.apply(v)

    def template(self) -> Matrix:
        return standard_form(self.blocks)

    def to_json(self):
        return {"kind": self.kind, "labels": list(self.labels), "P": self.P.to_json(),
                "index_denominator": self.index_denominator}


def _symplectic_pairs(cands: list[tuple], Q: Matrix) -> tuple[list, list]:
    """Symplectic Gram-Schmidt on a nondegenerate span: returns lows, highs with Q(high_j, low_k) = delta."""
    lows, highs = [], []
    work = list(cands)
    while work:
        x = work.pop(0)
        partner = next((i for i, y in enumerate(work) if _q(Q, y, x) != 0), None)
        if partner is None:
            raise WrongShape("induced form is degenerate on the middle block")
        y = work.pop(partner)
        c = _q(Q, y, x)
        y = vec_scale(1 / Fraction(c), y)
        # make the rest Q-orthogonal to x and y
        rest = []
        for z in work:
            # z' = z + a x + b y with Q(z', x) = Q(z', y) = 0; Q(y, x) = 1
            b = -_q(Q, z, x)  # Q(z + b y, x) = Q(z,x) + b
            a = _q(Q, z, y)   # Q(z + a x, y) = Q(z,y) - a
            z2 = vec_add(z, vec_add(vec_scale(a, x), vec_scale(b, y)))
            if not is_zero_vector(z2):
                rest.append(z2)
        work = rest
        lows.append(x)
        highs.append(y)
    return lows, highs


def _weight1_block(Q: Matrix, n: int, low: Subspace, mid: Subspace, ambient: Subspace):
    """Adapted basis for a three-step filtration low ⊂ mid ⊂ ambient with low = mid^perp ∩ ambient."""
    es = [_integral(v) for v in low.basis]
    a = len(es)
    # complement of low inside mid
    cands = []
    cur = low
    for v in mid.basis:
        if not cur.contains(v):
            cands.append(_integral(v))
            cur = cur + Subspace.span([v], n)
    fl, fh = _symplectic_pairs(cands, Q)
    # complement of mid inside ambient, dual to the e's
    us = []
    cur = mid
    for v in ambient.basis:
        if not cur.contains(v):
            us.append(_integral(v))
            cur = cur + Subspace.span([v], n)
    if len(us) != a:
        raise WrongShape("outer block does not match the lowest step")
    if a:
        m = Matrix([[_q(Q, u, e) for e in es] for u in us])  # m[i][j] = Q(u_i, e_j)
        if m.det() == 0:
            raise WrongShape("lowest step is not dual to the top quotient")
        minv = m.inverse()
        # e^i = sum_k minv[i][k] u_k has Q(e^i, e_j) = delta
        us = [tuple(sum((minv[i, k] * us[k][t] for k in range(a)), ZERO) for t in range(n)) for i in range(a)]
    # orthogonal to the middle pairs
    fixed = []
    for u in us:
        for x, y in zip(fl, fh):
            al = _q(Q, u, y)
            be = -_q(Q, u, x)
            u = vec_add(u, vec_add(vec_scale(al, x), vec_scale(be, y)))
        fixed.append(u)
    us = fixed
    # isotropic among themselves: u_i += sum_{j>i} Q(u_i, u_j) e_j
    iso = []
    for i in range(a):
        u = us[i]
        for j in range(i + 1, a):
            c = _q(Q, us[i], us[j])
            if c != 0:
                u = vec_add(u, vec_scale(c, es[j]))
        iso.append(u)
    return es, fl, fh, iso


def _expected_dims(kind: str, W: WeightFiltration, n: int):
    dims = {k: W[k].dim for k in range(-4, 5)}
    if kind in ("weight1", "CY3_I"):
        if dims[-2] != 0 or dims[1] != n or dims[-1] + dims[0] != n:
            raise WrongShape(f"weight filtration dims {dims} do not fit the {kind} template")
        if kind == "CY3_I" and dims[-1] == 0:
            raise WrongShape("type I needs a nonzero W_-1")
    else:
        if dims[-4] != 0 or dims[-3] != 1 or dims[-2] != 1 or dims[2] != n - 1 or dims[1] != n - 1 or dims[3] != n:
            raise WrongShape(f"weight filtration dims {dims} do not fit the type IV template")
    return dims


def adapted_symplectic_basis(W: WeightFiltration, Q: Matrix, kind: str) -> AdaptedBasis:
    """Symplectic basis adapted to the centred weight filtration ``W``.

    weight1 / CY3_I order: e_1..e_a, f_1..f_b, f^b..f^1, e^a..e^1.
    CY3_IV order: w_-, e_1..e_a, f.., f^.., e^a..e^1, w_+.
    In both, Q(e^i, e_i) = Q(f^j, f_j) = Q(w_+, w_-) = 1 and all other pairings vanish.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    n = Q.nrows
    if W.center != 0:
        W = W.shift(-W.center)
    _expected_dims(kind, W, n)
    full = Subspace.full(n)
    if kind in ("weight1", "CY3_I"):
        es, fl, fh, ehs = _weight1_block(Q, n, W[-1], W[0], full)
        cols = es + fl + list(reversed(fh)) + list(reversed(ehs))
        a, b = len(es), len(fl)
        off = 1 if kind == "weight1" else 0
        labels = ([f"e_{i + 1}" for i in range(a)] + [f"f_{j + off}" for j in range(b)]
                  + [f"f^{j + off}" for j in reversed(range(b))] + [f"e^{i + 1}" for i in reversed(range(a))])
        weights = [-1] * a + [0] * (2 * b) + [1] * a
        blocks = (a, b) if b else (a,)
    else:
        wm = _integral(W[-2].basis[0])
        # w_+ with Q(w_+, w_-) = 1, taken from the basis of H outside W_2
        cand = next(v for v in full.basis if not W[2].contains(v))
        wp = vec_scale(1 / Fraction(_q(Q, cand, wm)), cand)
        # H' = {w_-, w_+}^perp
        hprime = Subspace.span([wm, wp], n).perp(Q)
        low = W[-1] & hprime
        mid = W[0] & hprime
        es, fl, fh, ehs = _weight1_block(Q, n, low, mid, hprime)
        # keep w_+ isotropic: it already is (alternating form)
        cols = [wm] + es + fl + list(reversed(fh)) + list(reversed(ehs)) + [wp]
        a, b = len(es), len(fl)
        labels = (["w_-"] + [f"e_{i + 1}" for i in range(a)] + [f"f_{j + 1}" for j in range(b)]
                  + [f"f^{j + 1}" for j in reversed(range(b))] + [f"e^{i + 1}" for i in reversed(range(a))] + ["w_+"])
        weights = [-3] + [-1] * a + [0] * (2 * b) + [1] * a + [3]
        blocks = tuple(x for x in (1, a, b) if x)
    P = Matrix.from_columns(cols)
    basis = AdaptedBasis(kind, P, tuple(labels), tuple(weights), blocks, _index_denominator(P))
    gram = P.T @ Q @ P
    if gram != basis.template():
        raise WrongShape("adapted basis does not reach the standard form")
    return basis


def _index_denominator(P: Matrix) -> int:
    """1 when the columns of P form a Z-basis of the lattice; otherwise a positive integer witness of the index."""
    dens = 1
    for m in (P, P.inverse()):
        for row in m.rows:
            for x in row:
                dens = lcm(dens, Fraction(x).denominator)
    return dens


# --- Levi decomposition ----------------------------------------------------

@dataclass
class LeviPair:
    levi: Matrix
    unipotent: Matrix

    def product(self) -> Matrix:
        return self.levi @ self.unipotent


def levi_decompose(gamma: Matrix, basis: AdaptedBasis) -> LeviPair:
    """gamma = gamma_l * gamma_u with gamma_l block diagonal in the adapted grading."""
    g = basis.to_adapted(gamma)
    w = basis.weights
    n = g.nrows
    for i in range(n):
        for j in range(n):
            if g[i, j] != 0 and w[i] > w[j]:
                raise NotParabolic("group element does not preserve the weight filtration")
    levi = Matrix([[g[i, j] if w[i] == w[j] else ZERO for j in range(n)] for i in range(n)])
    unip = levi.inverse() @ g
    return LeviPair(basis.from_adapted(levi), basis.from_adapted(unip))


# --- reduced scenarios -----------------------------------------------------

@dataclass
class ReducedScenario:
    kind: str
    lattice: SymplecticLattice
    cone: NilpotentCone
    F: HodgeFiltration
    group_elements: list
    basis: list            # reduced basis vectors in source coordinates
    labels: list
    checks: Certificate = field(default_factory=Certificate)
    reduced_type: LMHSType | None = None
    polarized: Certificate | None = None
    index_denominator: int = 1
    provenance: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def _reduce_cone(gens, vectors, to_coords):
    out = []
    for n in gens:
        cols = [to_coords(n.apply(v)) for v in vectors]
        out.append(Matrix.from_columns(cols))
    return out


def type_I_restrict(cone: NilpotentCone, F: HodgeFiltration, lattice: SymplecticLattice,
                    witnesses: Sequence[Matrix] = ()) -> ReducedScenario:
    """Restrict a weight-3 type I nilpotent orbit to H_2 = I^{2,2} + I^{1,1}."""
    if lattice.weight != 3:
        raise NotTypeI("type I restriction needs a weight-3 lattice")
    t = classify_lmhs(cone, F, lattice)
    if t.kind != "I" or not t.a:
        raise NotTypeI(f"LMHS type is {t.tag}, not I_a with a >= 1")
    a = t.a
    n = lattice.rank
    Q = lattice.Q
    W = jm_weight_filtration(cone.interior_point())
    basis = adapted_symplectic_basis(W, Q, "CY3_I")
    split = lmhs_splitting(cone, F, lattice)
    h22 = split.components[(2, 2)]
    es = basis.vectors[:a]                       # e_1..e_a
    # alpha_i = e^i + g_i + sum z_ij e_j: normalise the I^{2,2} basis on the e^ coordinates
    coords = [basis.coords(v) for v in h22.basis]
    top = [[c[n - 1 - i] for i in range(a)] for c in coords]  # coefficient of e^{i+1}
    tmat = Matrix(top)
    if tmat.det() == 0:
        raise RealityFailure("I^{2,2} does not project onto the e^ block")
    tinv = tmat.inverse()
    alphas = []
    for i in range(a):
        v = tuple(ZERO for _ in range(n))
        for k in range(a):
            c = tinv[i, k]
            if c != 0:
                v = vec_add(v, vec_scale(c, h22.basis[k]))
        alphas.append(v)
    betas = [tuple((x + conj(x)) / 2 for x in al) for al in alphas]
    betas = [tuple(real_part(x) for x in b) for b in betas]
    ordered = betas + list(reversed(es))  # beta_1..beta_a, e_a..e_1
    cert = Certificate()
    real = all(isinstance(x, Fraction) for v in ordered for x in v)
    if not cert.add("basis_real", real, "the reduced basis has rational coordinates"):
        raise RealityFailure("reduced basis is not real")
    qt = Matrix([[_q(Q, u, v) for v in ordered] for u in ordered])
    std = Matrix([[ZERO] * a + [ONE if j == a - 1 - i else ZERO for j in range(a)] for i in range(a)]
                 + [[-ONE if j == 2 * a - 1 - i else ZERO for j in range(a)] + [ZERO] * a for i in range(a, 2 * a)])
    cert.add("standard_form", qt == std, "Gram matrix of Q on the reduced basis is [[0, E], [-E, 0]]")

    def to_coords(v):
        return _solve_cols(ordered, v)

    red_gens = _reduce_cone(cone.generators, ordered, to_coords)
    killed = all(is_zero_vector(g.apply(v)) for g in cone.generators for v in _h1_vectors(split))
    cert.add("acts_on_H2_only", killed, "generators vanish on I^{3,0}+I^{2,1}+I^{1,2}+I^{0,3}")
    f1 = [to_coords(v) for v in h22.basis]
    Ft = HodgeFiltration.from_pieces(2 * a, {1: f1})
    qlat = SymplecticLattice(qt, 1, (a, a), lattice.sign)
    rcone = NilpotentCone(tuple(red_gens))
    reds = []
    for g in witnesses:
        pair = levi_decompose(g, basis)
        reds.append(_levi_on_h2(pair.levi, basis, a, n))
    for i, g in enumerate(reds):
        cert.add(f"witness_{i + 1}_preserves_form", g.T @ qt @ g == qt and g.is_integral(),
                 "reduced group element is integral and preserves the reduced form")
    orbit = is_nilpotent_orbit(rcone, Ft, qlat)
    cert.add("reduced_orbit", orbit.ok, "; ".join(orbit.failed))
    rtype = classify_lmhs(rcone, Ft, qlat, require_orbit=False)
    cert.add("hodge_tate", rtype.kind == "HT", f"reduced type {rtype.tag}")
    return ReducedScenario("type_I", qlat, rcone, Ft, reds, ordered,
                           [f"beta_{i + 1}" for i in range(a)] + [f"e_{i}" for i in range(a, 0, -1)],
                           cert, rtype, orbit, basis.index_denominator,
                           {"reduction": "type_I", "source_type": t.tag})


def _h1_vectors(split):
    out = []
    for pq in ((3, 0), (2, 1), (1, 2), (0, 3)):
        s = split.components.get(pq)
        if s is not None:
            out.extend(s.basis)
    return out


def _solve_cols(cols, v):
    m = Matrix.from_columns(cols)
    x = m.solve(v)
    if x is None:
        raise NotTypeI("vector outside the reduced space")
    return x


def _levi_on_h2(levi: Matrix, basis: AdaptedBasis, a: int, n: int) -> Matrix:
    """The Levi factor as an operator on span{beta, e} via e^i -> beta_i."""
    g = basis.to_adapted(levi)
    # adapted order: e_1..e_a, ..., e^a..e^1 ; reduced order: beta_1..beta_a, e_a..e_1
    # index maps: reduced k<a is e^{k+1} at adapted n-1-k; reduced k>=a is e_{2a-k} at adapted 2a-1-k
    idx = [n - 1 - k for k in range(a)] + [2 * a - 1 - k for k in range(a, 2 * a)]
    return Matrix([[g[idx[i], idx[j]] for j in range(2 * a)] for i in range(2 * a)])


def quotient_block(m: Matrix, basis: AdaptedBasis) -> Matrix:
    """Operator induced on W_1 / W_-2 (the middle block of the type IV adapted basis)."""
    g = basis.to_adapted(m)
    n = g.nrows
    return g.submatrix(range(1, n - 1), range(1, n - 1))


def type_IV_quotient(cone: NilpotentCone, F: HodgeFiltration, lattice: SymplecticLattice,
                     witnesses: Sequence[Matrix] = ()) -> ReducedScenario:
    """Pass a weight-3 type IV orbit to the quotient W_1 / W_-2.

    The quotient form is Q restricted to the middle block.  Positivity on the
    quotient holds for the opposite sign convention together with the
    conjugate of the induced filtration, so the reduced lattice carries the
    flipped sign flag and F is conjugated.
    """
    if lattice.weight != 3:
        raise NotTypeIV("type IV quotient needs a weight-3 lattice")
    t = classify_lmhs(cone, F, lattice)
    if t.kind != "IV":
        raise NotTypeIV(f"LMHS type is {t.tag}, not IV_a")
    a = t.a
    n = lattice.rank
    Q = lattice.Q
    W = jm_weight_filtration(cone.interior_point())
    basis = adapted_symplectic_basis(W, Q, "CY3_IV")
    cert = Certificate()
    qt = basis.template().submatrix(range(1, n - 1), range(1, n - 1))
    cert.add("rank", qt.nrows == 2 * lattice.h, f"quotient rank {qt.nrows}")
    gens = []
    for g in cone.generators:
        gens.append(quotient_block(g, basis))
    kills = all(is_zero_vector(g.apply(W[-2].basis[0])) for g in cone.generators)
    cert.add("annihilates_W-2", kills, "every generator kills W_-2")
    # induced filtration: image of F^2 ∩ W_1 in the middle coordinates, then conjugated
    f2 = F[2] & W[1]
    pieces = []
    for v in f2.basis:
        c = basis.coords(v)
        pieces.append(tuple(conj(x) for x in c[1:n - 1]))
    Ft = HodgeFiltration.from_pieces(n - 2, {1: pieces})
    qlat = SymplecticLattice(qt, 1, (lattice.h, lattice.h), -lattice.sign)
    rcone = NilpotentCone(tuple(gens))
    reds = []
    for g in witnesses:
        low = basis.to_adapted(g)
        for i in range(n):
            for j in range(n):
                if low[i, j] != 0 and basis.weights[i] > basis.weights[j]:
                    raise NotParabolic("group element does not preserve W")
        reds.append(quotient_block(g, basis))
    for i, g in enumerate(reds):
        cert.add(f"witness_{i + 1}_preserves_form", g.T @ qt @ g == qt and g.is_integral(),
                 "reduced group element is integral and preserves the quotient form")
    rtype = classify_lmhs(rcone, Ft, qlat, require_orbit=False)
    ra = rtype.a
    cert.add("reduced_type", rtype.kind in ("I", "HT") and ra == a,
             f"reduced type {rtype.tag} with a = {ra}, source IV_{a}")
    orbit = is_nilpotent_orbit(rcone, Ft, qlat)
    labels = list(basis.labels[1:n - 1])
    vecs = basis.vectors[1:n - 1]
    return ReducedScenario("type_IV", qlat, rcone, Ft, reds, vecs, labels, cert, rtype, orbit,
                           basis.index_denominator,
                           {"reduction": "type_IV", "source_type": t.tag,
                            "form_sign": -lattice.sign, "filtration": "conjugate of induced"})


# --- quotient comparison for pairs of type IV cones --------------------------

@dataclass
class BracketCertificate:
    fires: bool
    checks: Certificate
    N1: Matrix | None = None
    N2: Matrix | None = None
    N3: Matrix | None = None
    v: tuple | None = None
    lhs: tuple | None = None
    rhs: tuple | None = None
    note: str = ""

    def to_json(self):
        fmt = lambda v: None if v is None else [str(x) for x in v]
        return {"fires": self.fires, "checks": self.checks.to_json(), "v": fmt(self.v),
                "lhs": fmt(self.lhs), "rhs": fmt(self.rhs), "note": self.note,
                "N1": None if self.N1 is None else self.N1.to_json(),
                "N2": None if self.N2 is None else self.N2.to_json(),
                "N3": None if self.N3 is None else self.N3.to_json()}


def quotient_cone(cone: NilpotentCone, basis: AdaptedBasis) -> list[Matrix]:
    return [quotient_block(g, basis) for g in cone.generators]


def _nonzero_matrices(ms):
    return [m for m in ms if not m.is_zero()]


def same_quotient(sigma: NilpotentCone, tau: NilpotentCone, basis: AdaptedBasis) -> bool:
    """Equality of the images of two type IV cones in End(W_1 / W_-2)."""
    qs, qt = quotient_cone(sigma, basis), quotient_cone(tau, basis)
    common = independent_basis(_nonzero_matrices(qs + qt))
    if not common:
        return True
    return matrix_cone(_nonzero_matrices(qs), common) == matrix_cone(_nonzero_matrices(qt), common)


def _point_outside(cs: Cone, ct: Cone, p: tuple):
    """A point of the open cone cs that is not in the open cone ct (cs not inside ct)."""
    for g in cs.generators:
        if ct.contains_closed(g):
            continue
        t = Fraction(1)
        for _ in range(64):
            x = tuple(a + t * b for a, b in zip(g, p))
            if not ct.contains(x):
                return x
            t /= 2
    return None


def bracket_certificate(sigma: NilpotentCone, tau: NilpotentCone, F: HodgeFiltration,
                        lattice: SymplecticLattice) -> BracketCertificate:
    """Certificate that two distinct meeting type IV cones with equal quotients share no base point.

    Picks N1 in one cone but not the other, N2 in the other cone with the same
    quotient image, N3 in the intersection and v in I^{3,3} of (sigma, F).
    A common base point would give (N1-N2) N3 v = 0 while N3 (N1-N2) v != 0;
    the two vectors agree because N1-N2 commutes with N3.  The certificate fires
    when all hypotheses hold; the computed vectors are recorded for audit.
    """
    cert = Certificate()
    W = jm_weight_filtration(sigma.interior_point())
    cert.add("same_weight_filtration", jm_weight_filtration(tau.interior_point()) == W,
             "W(sigma) = W(tau)")
    if not cert.ok:
        return BracketCertificate(False, cert, note="weight filtrations differ")
    basis = adapted_symplectic_basis(W, lattice.Q, "CY3_IV")
    coords = independent_basis(list(sigma.generators) + list(tau.generators))
    cs, ct = matrix_cone(sigma.generators, coords), matrix_cone(tau.generators, coords)
    meet = intersect(cs, ct)
    cert.add("cones_meet", meet is not None and not meet.is_zero(), "sigma ∩ tau contains a nonzero element")
    cert.add("cones_distinct", cs != ct, "sigma != tau")
    cert.add("equal_quotients", same_quotient(sigma, tau, basis), "images in End(W_1/W_-2) agree")
    if not cert.ok:
        return BracketCertificate(False, cert, note="hypotheses of the quotient criterion fail")
    swapped = cone_inside(cs, ct)
    if swapped:
        cs, ct = ct, cs
    p = meet.interior_point()
    x1 = _point_outside(cs, ct, p)
    cert.add("N1_found", x1 is not None, "N1 in one cone and outside the other")
    if x1 is None:
        return BracketCertificate(False, cert, note="could not separate the cones")
    N1 = combine(x1, coords)
    # N2 in ct with the same quotient image: sum lam_j g_j = t N1 mod W_-2, lam > 0, t > 0
    qg = [quotient_block(combine(g, coords), basis).flatten() for g in ct.generators]
    q1 = quotient_block(N1, basis).flatten()
    k = len(qg)
    eq = [tuple([qg[j][r] for j in range(k)] + [-q1[r]]) for r in range(len(q1))]
    gt = [tuple(ONE if j == i else ZERO for j in range(k + 1)) for i in range(k + 1)]
    sol = find_point(k + 1, eq, gt)
    cert.add("N2_found", sol is not None, "N2 in the other cone with the same quotient image")
    if sol is None:
        return BracketCertificate(False, cert, N1=N1, note="no element with matching quotient")
    lam = [c / sol[-1] for c in sol[:-1]]
    N2 = combine(tuple(sum((lam[j] * ct.generators[j][t] for j in range(k)), ZERO)
                       for t in range(len(coords))), coords)
    N3 = combine(p, coords)
    D = N1 - N2
    cert.add("difference_nonzero", not D.is_zero(), "N1 - N2 != 0")
    cert.add("difference_kills_quotient", quotient_block(D, basis).is_zero(), "N1 - N2 acts by 0 on W_1/W_-2")
    cert.add("commutes", (D @ N3 - N3 @ D).is_zero(), "[N1 - N2, N3] = 0")
    split = lmhs_splitting(sigma, F, lattice)
    top = split.components.get((3, 3))
    cert.add("v_in_I33", top is not None and top.dim == 1, "I^{3,3} is a line")
    if not cert.ok:
        return BracketCertificate(False, cert, N1, N2, N3, note="hypotheses fail")
    v = top.basis[0]
    lhs = D.apply(N3.apply(v))
    rhs = N3.apply(D.apply(v))
    note = ("a common base point forces (N1-N2)N3v = 0 and N3(N1-N2)v != 0, "
            "but the commutator vanishes, so the two vectors are equal")
    return BracketCertificate(True, cert, N1, N2, N3, v, lhs, rhs, note)
