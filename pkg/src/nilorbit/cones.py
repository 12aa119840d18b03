"""Relatively open rational polyhedral cones in a fixed coordinate space.

A ``Cone`` is the open positive span of its extreme rays, stored as primitive
integer vectors sorted lexicographically.  The zero cone has no generators.
Cones are assumed strictly convex (they come from nilpotent families, which
never contain a line).

When the coordinates are coordinates on a span of commuting matrices, the
matrices themselves are kept in ``basis`` so the cone can be turned back into
matrices and moved around by the adjoint action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import FormNotPreserved, NotFaceClosed, RayOutside
from .exact import (ONE, ZERO, Matrix, Subspace, dot, null_vectors,
                    preserves_form, primitive_integer_vector, rank_of)
from .lp import find_point


def _prim(v) -> tuple:
    return primitive_integer_vector(v)


def _sign_normal(v) -> tuple:
    """Primitive integer form whose first nonzero entry is positive."""
    p = _prim(v)
    for a in p:
        if a != 0:
            return p if a > 0 else tuple(-b for b in p)
    return p


def _reduce_mod(form, ann: Subspace) -> tuple:
    """Canonical representative of a linear form modulo the span of ``ann``."""
    w = [Fraction(a) for a in form]
    for row, pc in zip(ann.basis, ann.pivots):
        f = w[pc]
        if f != 0:
            w = [a - f * b for a, b in zip(w, row)]
    return tuple(w)


@dataclass(frozen=True)
class HRep:
    """Equalities (forms that vanish) and facet forms (strictly positive inside)."""

    equalities: tuple
    facets: tuple

    def forms(self) -> tuple:
        return self.equalities + self.facets

    def to_json(self):
        return {"equalities": [list(f) for f in self.equalities],
                "facets": [list(f) for f in self.facets]}

    def describe(self, names: Sequence[str] | None = None) -> list[str]:
        out = []
        for rel, forms in (("=", self.equalities), (">", self.facets)):
            for f in forms:
                out.append(f"{format_form(f, names)} {rel} 0")
        return out


def format_form(f, names=None) -> str:
    names = names or [f"x{i + 1}" for i in range(len(f))]
    terms = []
    for c, nm in zip(f, names):
        if c == 0:
            continue
        sgn = "-" if c < 0 else "+"
        mag = abs(c)
        body = nm if mag == 1 else f"{mag}{nm}"
        terms.append((sgn, body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sgn, body in terms[1:]:
        s += f" {sgn} {body}"
    return s


class Cone:
    """Relatively open cone spanned by primitive integer vectors in Q^dim."""

    __slots__ = ("dim", "generators", "basis", "_hrep", "_span")

    def __init__(self, dim: int, generators: Iterable[Sequence] = (), basis: tuple | None = None,
                 _trusted: bool = False):
        self.dim = dim
        self.basis = tuple(basis) if basis is not None else None
        self._hrep = None
        self._span = None
        if _trusted:
            self.generators = tuple(generators)
            return
        gens = set()
        for g in generators:
            if len(g) != dim:
                raise ValueError(f"generator of length {len(g)} in dimension {dim}")
            p = _prim(g)
            if any(p):
                gens.add(p)
        self.generators = _extreme_rays(sorted(gens), dim)

    # identity
    def __eq__(self, other):
        return isinstance(other, Cone) and self.dim == other.dim and self.generators == other.generators

    def __hash__(self):
        return hash((self.dim, self.generators))

    def __repr__(self):
        return f"Cone({list(map(list, self.generators))})"

    def __len__(self):
        return len(self.generators)

    @property
    def span(self) -> Subspace:
        if self._span is None:
            self._span = Subspace.span(self.generators, self.dim) if self.generators else Subspace.zero(self.dim)
        return self._span

    @property
    def cone_dim(self) -> int:
        return self.span.dim

    def is_zero(self) -> bool:
        return not self.generators

    def is_simplicial(self) -> bool:
        return len(self.generators) == self.cone_dim

    def interior_point(self) -> tuple:
        pt = tuple(ZERO for _ in range(self.dim))
        for g in self.generators:
            pt = tuple(a + b for a, b in zip(pt, g))
        return pt

    def with_basis(self, basis) -> "Cone":
        c = Cone(self.dim, self.generators, basis, _trusted=True)
        c._hrep = self._hrep
        return c

    # half-space description
    def hrep(self) -> HRep:
        if self._hrep is None:
            self._hrep = _compute_hrep(self)
        return self._hrep

    def contains(self, x) -> bool:
        """x in the relative interior."""
        h = self.hrep()
        return all(dot(f, x) == 0 for f in h.equalities) and all(dot(f, x) > 0 for f in h.facets)

    def contains_closed(self, x) -> bool:
        h = self.hrep()
        return all(dot(f, x) == 0 for f in h.equalities) and all(dot(f, x) >= 0 for f in h.facets)

    def is_face_of(self, other: "Cone") -> bool:
        return self in set(faces(other).cones)

    def matrices(self) -> list[Matrix]:
        """Generator matrices, when the cone lives on a span of matrices."""
        if self.basis is None:
            raise ValueError("cone has no matrix basis")
        return [combine(g, self.basis) for g in self.generators]

    def to_json(self):
        return [list(g) for g in self.generators]


def combine(coords, basis) -> Matrix:
    out = None
    for c, b in zip(coords, basis):
        if c == 0:
            continue
        out = b * c if out is None else out + b * c
    return out if out is not None else basis[0] * 0


def _extreme_rays(gens: list, dim: int) -> tuple:
    """Drop generators that lie in the closed cone of the others."""
    keep = list(gens)
    i = 0
    while i < len(keep):
        g = keep[i]
        others = keep[:i] + keep[i + 1:]
        if others and _in_closed_cone(g, others, dim):
            keep.pop(i)
        else:
            i += 1
    return tuple(keep)


def _in_closed_cone(x, gens, dim) -> bool:
    """Is x a nonnegative combination of gens?  Solved as an LP in the coefficients."""
    k = len(gens)
    # unknowns lambda_1..k and t: sum lambda_j g_j - t x = 0, t > 0, lambda >= 0
    eq = []
    for i in range(dim):
        eq.append(tuple(Fraction(g[i]) for g in gens) + (-Fraction(x[i]),))
    gt = [tuple(ZERO for _ in range(k)) + (ONE,)]
    ge = [tuple(ONE if j == i else ZERO for j in range(k + 1)) for i in range(k)]
    return find_point(k + 1, eq, gt, ge) is not None


def _compute_hrep(cone: Cone) -> HRep:
    d = cone.dim
    span = cone.span
    ann = span.annihilator()
    eqs = tuple(_sign_normal(f) for f in ann.basis)
    k = span.dim
    if k == 0:
        return HRep(eqs, ())
    gens = cone.generators
    facets = set()
    for sub in combinations(range(len(gens)), k - 1):
        pts = [gens[i] for i in sub]
        if rank_of(pts, d) != k - 1:
            continue
        cand = None
        for f in null_vectors(pts, d) if pts else [tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)]:
            r = _reduce_mod(f, ann)
            if any(r):
                cand = r
                break
        if cand is None:
            continue
        vals = [dot(cand, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            cand = tuple(-a for a in cand)
        else:
            continue
        facets.add(_prim(cand))
    return HRep(eqs, tuple(sorted(facets)))


def zero_cone(dim: int, basis=None) -> Cone:
    return Cone(dim, (), basis, _trusted=True)


def cone_from_constraints(dim: int, eq: Sequence, ineq: Sequence, basis=None) -> Cone:
    """Closed cone {eq = 0, ineq >= 0} as the open cone of its relative interior.

    The caller guarantees a point with every ``ineq`` strictly positive exists,
    so the linear span is exactly the kernel of ``eq``.
    """
    kern = null_vectors([tuple(f) for f in eq], dim) if eq else [
        tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)]
    kd = len(kern)
    if kd == 0:
        return zero_cone(dim, basis)
    restricted = set()
    for f in ineq:
        r = tuple(dot(f, v) for v in kern)
        if any(r):
            restricted.add(_prim(r))
    restricted = sorted(restricted)
    rays = set()
    if kd == 1:
        for s in (1, -1):
            if all(r[0] * s >= 0 for r in restricted):
                rays.add(_prim(_lift((Fraction(s),), kern, dim)))
    else:
        for sub in combinations(restricted, kd - 1):
            y = _cofactor_vector(sub, kd)
            if y is None:
                continue
            for s in (1, -1):
                ys = tuple(s * a for a in y)
                if all(sum(a * b for a, b in zip(r, ys)) >= 0 for r in restricted):
                    rays.add(_prim(_lift(ys, kern, dim)))
                    break
    rays = sorted(rays)
    if rank_of(rays, dim) == kd:
        # pointed: rays cut out by kd-1 independent tight rows are extreme already
        return Cone(dim, rays, basis, _trusted=True)
    return Cone(dim, rays, basis)


def _int_det(m: list) -> int:
    """Bareiss determinant of a square integer matrix."""
    m = [list(r) for r in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def _cofactor_vector(rows, k: int):
    """Integer kernel vector of k-1 integer rows in Z^k by signed maximal minors, or None if rank < k-1."""
    y = tuple((-1) ** j * _int_det([r[:j] + r[j + 1:] for r in rows]) for j in range(k))
    return y if any(y) else None


def _lift(y, kern, dim):
    x = [ZERO] * dim
    for c, v in zip(y, kern):
        if c != 0:
            x = [a + c * b for a, b in zip(x, v)]
    return tuple(x)


# --- complexes -------------------------------------------------------------

@dataclass(frozen=True)
class ConeComplex:
    dim: int
    cones: tuple
    basis: tuple | None = None

    @classmethod
    def of(cls, dim, cones: Iterable[Cone], basis=None) -> "ConeComplex":
        uniq = sorted(set(cones), key=_cone_order)
        return cls(dim, tuple(uniq), tuple(basis) if basis is not None else None)

    def __len__(self):
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)

    def __contains__(self, c):
        return c in set(self.cones)

    def by_dim(self) -> dict:
        out = {}
        for c in self.cones:
            out.setdefault(c.cone_dim, []).append(c)
        return out

    def maximal(self) -> list[Cone]:
        """Cones that are not proper faces of another member."""
        proper = set()
        for c in self.cones:
            for f in faces(c).cones:
                if f != c:
                    proper.add(f)
        return [c for c in self.cones if c not in proper]

    def rays(self) -> list[tuple]:
        return sorted({g for c in self.cones for g in c.generators})

    def face_closure(self) -> "ConeComplex":
        out = set()
        for c in self.cones:
            out.update(faces(c).cones)
        return ConeComplex.of(self.dim, out, self.basis)

    def is_face_closed(self) -> bool:
        have = set(self.cones)
        return all(f in have for c in self.cones for f in faces(c).cones)

    def same_cones(self, other: "ConeComplex") -> bool:
        return set(self.cones) == set(other.cones)

    def to_json(self):
        out = {"cones": [c.to_json() for c in self.cones]}
        if self.basis is not None:
            out["ambient_basis"] = [b.to_json() for b in self.basis]
        return out


def _cone_order(c: Cone):
    return (c.cone_dim if c.generators else 0, c.generators)


# --- operations ------------------------------------------------------------

def hrep(cone: Cone) -> HRep:
    return cone.hrep()


def intersect(a: Cone, b: Cone) -> Cone | None:
    """Intersection of two relatively open cones; None when it is empty."""
    if a.dim != b.dim:
        raise ValueError("cones live in different spaces")
    if a == b:
        return a
    ha, hb = a.hrep(), b.hrep()
    eq = ha.equalities + hb.equalities
    gt = ha.facets + hb.facets
    if find_point(a.dim, eq, gt) is None:
        return None
    return cone_from_constraints(a.dim, eq, gt, a.basis)


def faces(cone: Cone) -> ConeComplex:
    """All faces of the closed cone, each as a relatively open cone, including 0 and the cone."""
    facets = cone.hrep().facets
    gens = cone.generators
    start = frozenset(range(len(gens)))
    seen = {start}
    todo = [start]
    while todo:
        cur = todo.pop()
        for f in facets:
            nxt = frozenset(i for i in cur if dot(f, gens[i]) == 0)
            if nxt != cur and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    seen.add(frozenset())
    out = [Cone(cone.dim, [gens[i] for i in sorted(s)], cone.basis, _trusted=True) for s in seen]
    return ConeComplex.of(cone.dim, out, cone.basis)


def is_integral_symplectic(g: Matrix, q: Matrix | None) -> bool:
    return g.is_integral() and (q is None or preserves_form(g, q))


def transport(gamma: Matrix, cone: Cone, q: Matrix | None = None, gamma_inv: Matrix | None = None) -> Cone:
    """Ad_gamma applied to a cone of matrices.

    The coordinates stay the same; the matrix basis is conjugated.  Use
    ``recoordinate`` to compare with cones written in another basis.
    """
    if not gamma.is_integral():
        raise FormNotPreserved("group element is not integral")
    if q is not None and not preserves_form(gamma, q):
        raise FormNotPreserved("group element does not preserve Q")
    if cone.basis is None:
        raise ValueError("cone has no matrix basis to transport")
    gi = gamma.inverse() if gamma_inv is None else gamma_inv
    return cone.with_basis(tuple(gamma @ b @ gi for b in cone.basis))


def coordinates_in(m: Matrix, basis: Sequence[Matrix]) -> tuple | None:
    """Coefficients of m in the (linearly independent) matrix basis, or None."""
    cols = [b.flatten() for b in basis]
    target = m.flatten()
    a = Matrix.from_columns(cols)
    return a.solve(target)


def independent_basis(mats: Iterable[Matrix]) -> list[Matrix]:
    """Greedy linearly independent subset, in the order given."""
    out, rows = [], []
    for m in mats:
        v = m.flatten()
        if rank_of(rows + [v], len(v)) > len(rows):
            rows.append(v)
            out.append(m)
    return out


def matrix_cone(gens: Iterable[Matrix], basis: Sequence[Matrix]) -> Cone:
    """Cone of matrices in the coordinates of ``basis`` (generators must lie in its span)."""
    coords = []
    for g in gens:
        c = coordinates_in(g, basis)
        if c is None:
            raise RayOutside("matrix outside the span of the coordinate basis")
        coords.append(c)
    return Cone(len(basis), coords, tuple(basis))


def recoordinate(cone: Cone, basis: Sequence[Matrix]) -> Cone:
    """The same cone of matrices written in the coordinates of ``basis``."""
    gens = []
    for g in cone.matrices():
        c = coordinates_in(g, basis)
        if c is None:
            raise RayOutside("cone generator is outside the span of the new basis")
        gens.append(c)
    return Cone(len(basis), gens, tuple(basis))


def star_subdivision(cone: Cone, ray: Sequence) -> ConeComplex:
    """Star subdivision of the closed cone at ``ray``, as relatively open pieces."""
    r = _prim(ray)
    if not any(r) or not cone.contains_closed(r):
        raise RayOutside(f"ray {list(r)} is not in the closed cone")
    pieces = set()
    for tau in faces(cone).cones:
        if tau.contains_closed(r):
            continue
        pieces.add(tau)
        pieces.add(Cone(cone.dim, list(tau.generators) + [r], cone.basis))
    return ConeComplex.of(cone.dim, pieces, cone.basis)


def star_subdivide_complex(cx: ConeComplex, ray: Sequence) -> ConeComplex:
    """Star subdivision of a face-closed complex at a ray of its support."""
    r = _prim(ray)
    if not any(c.contains_closed(r) for c in cx.cones if c.generators):
        raise RayOutside(f"ray {list(r)} is outside the support")
    hit = [c for c in cx.cones if c.contains_closed(r)]
    out = {c for c in cx.cones if not c.contains_closed(r)}
    for c in hit:
        for tau in faces(c).cones:
            if not tau.contains_closed(r):
                out.add(Cone(cx.dim, list(tau.generators) + [r], cx.basis))
    return ConeComplex.of(cx.dim, out, cx.basis)


def is_fan(cx: ConeComplex):
    """(True, None) or (False, description of the first violation)."""
    have = set(cx.cones)
    for c in cx.cones:
        for f in faces(c).cones:
            if f not in have:
                return False, {"kind": "missing_face", "cone": c.to_json(), "face": f.to_json()}
    cones = cx.cones
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            meet = intersect(cones[i], cones[j])
            if meet is not None:
                return False, {"kind": "overlap", "pair": [cones[i].to_json(), cones[j].to_json()],
                               "meet": meet.to_json()}
    return True, None


# --- chamber subdivision ---------------------------------------------------

def arrangement_forms(cx: ConeComplex, pullback: Matrix | None = None,
                      image_cones: Sequence[Cone] | None = None) -> list[tuple]:
    """Hyperplanes of the arrangement: all hrep forms of the maximal cones.

    With ``pullback`` the forms come from ``image_cones`` (cones in another
    space) and are pulled back along the linear map with matrix ``pullback``
    (rows index the image coordinates).
    """
    forms = set()
    if pullback is None:
        for c in cx.maximal():
            for f in c.hrep().forms():
                forms.add(_sign_normal(f))
    else:
        maxi = ConeComplex.of(pullback.nrows, image_cones).maximal()
        for c in maxi:
            for f in c.hrep().forms():
                g = tuple(dot(f, col) for col in pullback.columns())
                if any(g):
                    forms.add(_sign_normal(g))
    return sorted(forms)


def _signs_of(cone: Cone, forms: list[tuple]) -> dict:
    """Signs forced on each form by the cone's own hrep (as far as they are its forms)."""
    h = cone.hrep()
    fixed = {}
    index = {f: i for i, f in enumerate(forms)}
    for f in h.equalities:
        i = index.get(_sign_normal(f))
        if i is not None:
            fixed[i] = 0
    for f in h.facets:
        sn = _sign_normal(f)
        i = index.get(sn)
        if i is not None:
            fixed[i] = 1 if sn == _prim(f) else -1
    return fixed


def _constraints(forms, signs: dict):
    eq, gt = [], []
    for i, s in signs.items():
        f = forms[i]
        if s == 0:
            eq.append(f)
        elif s > 0:
            gt.append(f)
        else:
            gt.append(tuple(-a for a in f))
    return eq, gt


def chamber_cells(cx: ConeComplex, forms: list[tuple], by_signs: bool = True) -> dict:
    """Sign vector -> cell for every cell of the arrangement that meets the support.

    When the forms do not contain every cone's own hyperplanes (forms pulled
    back from a quotient), a sign vector alone does not pin down the cell;
    ``by_signs=False`` keys cells by the input cone as well.
    """
    cells = {}
    m = len(forms)
    d = cx.dim
    for ci, cone in enumerate(cx.cones):
        base = _signs_of(cone, forms)
        # a form that does not change sign on the closed cone has one sign on its interior
        for i, f in enumerate(forms):
            if i in base or not cone.generators:
                continue
            vals = [dot(f, g) for g in cone.generators]
            if all(v >= 0 for v in vals):
                base[i] = 1 if any(vals) else 0
            elif all(v <= 0 for v in vals):
                base[i] = -1
        h = cone.hrep()
        base_eq = list(h.equalities)
        base_gt = list(h.facets)
        free = [i for i in range(m) if i not in base]

        def branch(signs, i, s):
            signs[i] = s
            eq, gt = _constraints(forms, signs)
            q = find_point(d, eq + base_eq, gt + base_gt)
            del signs[i]
            return q

        def dfs(pos, signs, p):
            # p is a point of the open cell cut out so far
            if pos == len(free):
                key = tuple(signs.get(i) for i in range(m))
                if not by_signs:
                    key = (ci, key)
                if key not in cells:
                    eq, gt = _constraints(forms, signs)
                    cells[key] = (eq + base_eq, gt + base_gt)
                return
            i = free[pos]
            f = forms[i]
            fp = dot(f, p)
            children = []
            if fp == 0:
                children.append((0, p))
                for s in (1, -1):
                    q = branch(signs, i, s)
                    if q is not None:
                        children.append((s, q))
            else:
                s0 = 1 if fp > 0 else -1
                children.append((s0, p))
                q = branch(signs, i, -s0)
                if q is not None:
                    # the cell is convex, so the segment from p to q crosses f = 0 inside it
                    fq = dot(f, q)
                    mid = tuple(-fq * a + fp * b for a, b in zip(p, q))
                    children += [(-s0, q), (0, mid)]
            for s, pt in children:
                signs[i] = s
                dfs(pos + 1, signs, pt)
                del signs[i]

        p0 = find_point(d, base_eq, base_gt)
        if p0 is None:
            continue
        dfs(0, dict(base), p0)
    return cells


def chamber_subdivision(cx: ConeComplex, forms: list[tuple] | None = None,
                        by_signs: bool = True) -> ConeComplex:
    """Common refinement of a face-closed complex by the hyperplanes of its maximal cones.

    Each input cone is cut by every hyperplane; the pieces are the relatively
    open cells of the arrangement that lie in the support.
    """
    if not cx.is_face_closed():
        raise NotFaceClosed("input complex is not closed under taking faces")
    if forms is None:
        forms = arrangement_forms(cx)
    cells = chamber_cells(cx, forms, by_signs)
    out = set()
    for eq, gt in cells.values():
        out.add(cone_from_constraints(cx.dim, eq, gt, cx.basis))
    return ConeComplex.of(cx.dim, out, cx.basis)


def cone_inside(c: Cone, k: Cone) -> bool:
    """Relative interior of c inside the relative interior of k."""
    return k.contains(c.interior_point()) and all(k.contains_closed(g) for g in c.generators)


def sample_points(c: Cone) -> list[tuple]:
    """The interior point and one point near each generator, all in the open cone."""
    p = c.interior_point()
    big = len(c.generators) + 1
    return [p] + [tuple(a + big * b for a, b in zip(p, g)) for g in c.generators]


def refines(fine: ConeComplex, coarse: ConeComplex) -> bool:
    """Each fine cone sits inside one coarse cone and the sampled support agrees."""
    for c in fine.cones:
        if not any(cone_inside(c, k) for k in coarse.cones):
            return False
    for k in coarse.cones:
        for pt in sample_points(k):
            if not any(c.contains(pt) for c in fine.cones):
                return False
    return True
