"""Weight filtrations, Hodge filtrations, Deligne splittings and the orbit test.

Conventions
-----------
* Vectors are column vectors in the lattice basis; ``Q(u, v) = u^T Q v``.
* ``W(N)`` is centred at 0.  The weight filtration of the limiting structure
  of weight ``l`` is the shift ``W(N)[-l]``, whose k-th step is ``W(N)_{k-l}``.
* Positivity uses the Hermitian form ``h(u, v) = i^{p-q} s Q(u, N^k conj v)``
  on each primitive part, where ``s`` is the lattice's sign convention flag.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (InteriorDisagreement, InvariantError, NotMHS,
                     NotNilpotentOrbit, UnknownDiagram)
from .exact import (I_UNIT, ONE, ZERO, Matrix, Subspace, dot,
                    is_symplectic_algebra_element, nilpotency_index,
                    primitive_integer_vector, rank_of, vec_conj)


# --- lattice ---------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticLattice:
    """Integral lattice with alternating form Q and the Hodge numbers h^{l,0}, ..., h^{0,l}.

    ``sign`` is +1 or -1 and multiplies Q wherever positivity is tested.
    """

    Q: Matrix
    weight: int
    hodge_numbers: tuple
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "hodge_numbers", tuple(int(h) for h in self.hodge_numbers))
        q = self.Q
        if not q.is_square():
            raise InvariantError("Q must be square")
        if not q.is_integral():
            raise InvariantError("Q integrality")
        if not (q + q.T).is_zero():
            raise InvariantError("Q antisymmetry")
        if q.det() == 0:
            raise InvariantError("Q nondegeneracy")
        if self.sign not in (1, -1):
            raise InvariantError("sign convention must be +1 or -1")
        hn = self.hodge_numbers
        if len(hn) != self.weight + 1:
            raise InvariantError(f"expected {self.weight + 1} Hodge numbers, got {len(hn)}")
        if sum(hn) != q.nrows:
            raise InvariantError("Hodge numbers must sum to the rank")
        if hn != hn[::-1]:
            raise InvariantError("Hodge numbers must be symmetric")
        if self.weight == 3 and hn[0] != 1:
            raise InvariantError("weight-3 lattices must have Calabi-Yau shape (1,h,h,1)")
        if self.weight not in (1, 3):
            raise InvariantError("only weights 1 and 3 are supported")

    @property
    def rank(self) -> int:
        return self.Q.nrows

    @property
    def h(self) -> int:
        """g for weight 1, h for the (1,h,h,1) shape."""
        return self.hodge_numbers[0] if self.weight == 1 else self.hodge_numbers[1]

    def form(self, u, v):
        return dot(u, self.Q.apply(v))

    def polarization(self) -> Matrix:
        return self.Q if self.sign == 1 else -self.Q

    def check_element(self, n: Matrix, name="N"):
        if n.shape != self.Q.shape:
            raise InvariantError(f"{name}: shape {n.shape} does not match the lattice")
        if not n.is_real():
            raise InvariantError(f"{name}: rationality")
        if nilpotency_index(n) is None:
            raise InvariantError(f"{name}: nilpotency")
        if not is_symplectic_algebra_element(n, self.Q):
            raise InvariantError(f"{name}: Q-compatibility (QN + N^T Q = 0)")


def standard_form(blocks: Sequence[int]) -> Matrix:
    """Block antidiagonal Q for a basis {x_1.., y_1.., ..., y^.., x^1} given half-block sizes.

    With ``blocks = (a, b)`` the basis is {e_1..e_a, f_1..f_b, f^b..f^1, e^a..e^1}
    and Q(e^i, e_i) = Q(f^j, f_j) = 1.  The matrix is the antidiagonal with -1 in
    the upper half and +1 in the lower half.
    """
    n = 2 * sum(blocks)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n // 2):
        rows[i][n - 1 - i] = -ONE
        rows[n - 1 - i][i] = ONE
    return Matrix(rows)


# --- filtrations -----------------------------------------------------------

@dataclass(frozen=True)
class WeightFiltration:
    """Increasing filtration; ``steps`` holds W_lo, ..., W_hi (W_hi is the full space).

    Below ``lo`` the filtration is 0, from ``hi`` on it is everything.
    """

    n: int
    lo: int
    steps: tuple
    center: int = 0

    @classmethod
    def from_dict(cls, n: int, steps: dict, center: int = 0) -> "WeightFiltration":
        ks = sorted(steps)
        full = Subspace.full(n)
        zero = Subspace.zero(n)
        # fill gaps, then trim the constant ends
        seq = {}
        prev = zero
        for k in range(ks[0], ks[-1] + 1):
            seq[k] = steps.get(k, prev)
            prev = seq[k]
        if seq[ks[-1]] != full:
            seq[ks[-1] + 1] = full
        items = sorted(seq.items())
        while len(items) > 1 and items[0][1].is_zero() and items[1][1].is_zero():
            items.pop(0)
        while items and items[0][1].is_zero():
            items.pop(0)
        while len(items) > 1 and items[-2][1].is_full():
            items.pop()
        if not items:
            return cls(n, 0, (full,), center)
        lo = items[0][0]
        for (_, a), (_, b) in zip(items, items[1:]):
            if not a <= b:
                raise ValueError("weight filtration must be increasing")
        return cls(n, lo, tuple(s for _, s in items), center)

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    def __getitem__(self, k: int) -> Subspace:
        if k < self.lo:
            return Subspace.zero(self.n)
        if k > self.hi:
            return Subspace.full(self.n)
        return self.steps[k - self.lo]

    def shift(self, l: int) -> "WeightFiltration":
        """W[-l]: (W[-l])_k = W_{k-l}."""
        return WeightFiltration(self.n, self.lo + l, self.steps, self.center + l)

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def graded_dims(self) -> dict:
        return {k: self[k].dim - self[k - 1].dim for k in self.indices() if self[k].dim != self[k - 1].dim}

    def transform(self, g: Matrix) -> "WeightFiltration":
        return WeightFiltration(self.n, self.lo, tuple(s.image(g) for s in self.steps), self.center)

    def as_dict(self) -> dict:
        return {k: self[k] for k in self.indices()}


@dataclass(frozen=True)
class HodgeFiltration:
    """Decreasing filtration F^0 = H ⊇ F^1 ⊇ ... ⊇ F^top over Q(i); F^p = 0 for p > top."""

    n: int
    steps: tuple

    def __post_init__(self):
        if not self.steps or not self.steps[0].is_full():
            raise ValueError("F^0 must be the whole space")
        for a, b in zip(self.steps, self.steps[1:]):
            if not b <= a:
                raise ValueError("Hodge filtration must be decreasing")

    @classmethod
    def from_pieces(cls, n: int, pieces: dict) -> "HodgeFiltration":
        """F^p spanned by the vectors listed under every key r >= p; F^0 is forced full."""
        top = max(pieces) if pieces else 0
        steps = []
        for p in range(0, top + 1):
            if p == 0:
                steps.append(Subspace.full(n))
                continue
            vecs = [v for r, vs in pieces.items() if r >= p for v in vs]
            steps.append(Subspace.span(vecs, n))
        return cls(n, tuple(steps))

    @property
    def top(self) -> int:
        return len(self.steps) - 1

    def __getitem__(self, p: int) -> Subspace:
        if p <= 0:
            return Subspace.full(self.n)
        if p > self.top:
            return Subspace.zero(self.n)
        return self.steps[p]

    def conj_step(self, p: int) -> Subspace:
        return self[p].conj()

    def transform(self, g: Matrix) -> "HodgeFiltration":
        return HodgeFiltration(self.n, tuple(s.image(g) for s in self.steps))

    def conjugate(self) -> "HodgeFiltration":
        return HodgeFiltration(self.n, tuple(s.conj() for s in self.steps))

    def dims(self) -> tuple:
        return tuple(s.dim for s in self.steps)

    def defects(self, lattice: SymplecticLattice) -> list[str]:
        """Reasons F fails to lie in the compact dual of ``lattice`` (empty if it does)."""
        l = lattice.weight
        out = []
        hn = lattice.hodge_numbers  # h^{l,0}, ..., h^{0,l}
        for p in range(0, l + 2):
            want = sum(hn[: max(0, l - p + 1)]) if p >= 0 else lattice.rank
            if self[p].dim != want:
                out.append(f"dim F^{p} = {self[p].dim}, expected {want}")
        q = lattice.Q
        for p in range(1, l + 1):
            a, b = self[p], self[l + 1 - p]
            for u in a.basis:
                qu = tuple(dot(u, col) for col in q.columns())
                if any(dot(qu, v) != 0 for v in b.basis):
                    out.append(f"Q(F^{p}, F^{l + 1 - p}) != 0")
                    break
            else:
                continue
            break
        return out


@dataclass
class DeligneSplitting:
    components: dict  # (p, q) -> Subspace

    def h(self, p: int, q: int) -> int:
        s = self.components.get((p, q))
        return s.dim if s is not None else 0

    def table(self) -> dict:
        return {pq: s.dim for pq, s in sorted(self.components.items()) if s.dim}

    def weight_part(self, k: int) -> list[tuple]:
        return [pq for pq, s in sorted(self.components.items()) if pq[0] + pq[1] == k and s.dim]


# --- nilpotent cones -------------------------------------------------------

def primitive_matrix_key(m: Matrix) -> tuple:
    return primitive_integer_vector(m.flatten())


@dataclass(frozen=True)
class NilpotentCone:
    """Relatively open Q_{>0}-span of commuting nilpotent matrices.

    ``generators`` should be the extreme rays; they are linearly independent for
    the simplicial cones supplied by users, refined cones may be non-simplicial.
    """

    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            return
        n = gens[0].nrows
        for g in gens:
            if g.shape != (n, n):
                raise InvariantError("cone generators must be square of equal size")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if not (a @ b - b @ a).is_zero():
                    raise InvariantError("cone generators must commute")

    @property
    def size(self) -> int:
        return self.generators[0].nrows if self.generators else 0

    @property
    def dim(self) -> int:
        if not self.generators:
            return 0
        return rank_of([g.flatten() for g in self.generators], self.size ** 2)

    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    def interior_point(self) -> Matrix:
        out = self.generators[0]
        for g in self.generators[1:]:
            out = out + g
        return out

    def key(self) -> tuple:
        """Order-free identity of the cone (extreme rays assumed)."""
        return tuple(sorted(primitive_matrix_key(g) for g in self.generators))

    def same_as(self, other: "NilpotentCone") -> bool:
        return self.key() == other.key()

    def transport(self, g: Matrix, g_inv: Matrix | None = None) -> "NilpotentCone":
        gi = g.inverse() if g_inv is None else g_inv
        return NilpotentCone(tuple(g @ n @ gi for n in self.generators))


def zero_cone_weight(n: int) -> "WeightFiltration":
    return WeightFiltration(n, 0, (Subspace.full(n),), 0)


# --- weight filtrations ----------------------------------------------------

def jm_weight_filtration(n: Matrix) -> WeightFiltration:
    """Monodromy weight filtration of a nilpotent N, centred at 0.

    Uses W_k = sum_{j>=0} Im N^j ∩ ker N^{j+k+1}, which on a Jordan block with
    basis v, Nv, ..., N^m v puts N^i v in weight m - 2i.
    """
    d = n.nrows
    mu = nilpotency_index(n)
    if mu is None:
        raise InvariantError("N: nilpotency")
    mu -= 1  # N^mu != 0, N^(mu+1) = 0
    if mu <= 0:
        return zero_cone_weight(d)
    powers = [Matrix.identity(d)]
    for _ in range(2 * mu + 2):
        powers.append(powers[-1] @ n)
    images = [p.image() for p in powers]
    kernels = [p.kernel() for p in powers]
    steps = {}
    for k in range(-mu, mu + 1):
        s = Subspace.zero(d)
        for j in range(0, mu + 1):
            kk = j + k + 1
            if kk <= 0:
                continue
            s = s + (images[j] & kernels[min(kk, len(kernels) - 1)])
        steps[k] = s
    return WeightFiltration.from_dict(d, steps, 0)


def random_interior_point(cone: NilpotentCone, rng: random.Random) -> Matrix:
    out = None
    for g in cone.generators:
        c = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        out = g * c if out is None else out + g * c
    return out


def cone_weight_filtration(cone: NilpotentCone, rng: random.Random | None = None,
                           samples: int = 3) -> WeightFiltration:
    """W(σ) at the generator sum, re-checked at random interior points."""
    if not cone.generators:
        raise ValueError("the zero cone has no weight filtration of its own")
    w = jm_weight_filtration(cone.interior_point())
    if len(cone.generators) > 1 and samples:
        rng = rng if rng is not None else random.Random(0)
        for _ in range(samples):
            pt = random_interior_point(cone, rng)
            if jm_weight_filtration(pt) != w:
                raise InteriorDisagreement("interior points of the cone have different weight filtrations")
    return w


# --- Deligne splitting -----------------------------------------------------

def _f_range(f: HodgeFiltration):
    return 0, f.top


def mhs_defect(w: WeightFiltration, f: HodgeFiltration):
    """First (k, p) where F fails to induce a weight-k Hodge structure on Gr_k^W, else None."""
    for k in w.indices():
        wk, wk1 = w[k], w[k - 1]
        if wk == wk1:
            continue
        for p in range(0, f.top + 2):
            a = (f[p] & wk) + wk1
            b = (f.conj_step(k + 1 - p) & wk) + wk1
            if (a & b) != wk1 or (a + b) != wk:
                return k, p
    return None


def deligne_splitting(w: WeightFiltration, f: HodgeFiltration) -> DeligneSplitting:
    """The bigrading I^{p,q} of the mixed Hodge structure (W, F).

    Raises NotMHS when (W, F) is not a mixed Hodge structure, i.e. when the
    components fail to split W and F.
    """
    n = w.n
    bad = mhs_defect(w, f)
    if bad is not None:
        k, p = bad
        raise NotMHS(f"F does not induce a weight-{k} Hodge structure on Gr_{k} (fails at p={p})")
    plo, phi = _f_range(f)
    comps = {}
    for p in range(plo, phi + 1):
        for q in range(plo, phi + 1):
            k = p + q
            wk = w[k]
            if wk.is_zero():
                continue
            right = f.conj_step(q) & wk
            j = 1
            while True:
                wj = w[k - j - 1]
                if wj.is_zero():
                    break
                right = right + (f.conj_step(q - j) & wj)
                j += 1
            piece = f[p] & wk & right
            if piece.dim:
                comps[(p, q)] = piece
    total = sum(s.dim for s in comps.values())
    span = Subspace.zero(n)
    for s in comps.values():
        span = span + s
    if total != n or span.dim != n:
        raise NotMHS(f"components span dimension {span.dim} with total {total}, expected {n}")
    for k in w.indices():
        part = Subspace.zero(n)
        for (p, q), s in comps.items():
            if p + q <= k:
                part = part + s
        if part != w[k]:
            raise NotMHS(f"components do not rebuild W_{k}")
    for p in range(plo, phi + 2):
        part = Subspace.zero(n)
        for (r, q), s in comps.items():
            if r >= p:
                part = part + s
        if part != f[p]:
            raise NotMHS(f"components do not rebuild F^{p}")
    return DeligneSplitting(comps)


# --- polarization test -----------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Certificate:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        return ok

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]

    def to_json(self):
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _i_power(k: int):
    return (ONE, I_UNIT, -ONE, -I_UNIT)[k % 4]


def transversal(n: Matrix, f: HodgeFiltration) -> bool:
    """N F^p ⊆ F^{p-1} for all p."""
    return all(f[p].image(n) <= f[p - 1] for p in range(1, f.top + 1))


def leading_minors(gram: Matrix) -> list:
    return [gram.submatrix(range(k), range(k)).det() for k in range(1, gram.nrows + 1)]


def is_polarized_mhs(w: WeightFiltration, f: HodgeFiltration, n: Matrix,
                     lattice: SymplecticLattice, l: int | None = None) -> Certificate:
    """Check that (W, F) is a mixed Hodge structure polarized by N and Q."""
    l = lattice.weight if l is None else l
    cert = Certificate()
    jm = jm_weight_filtration(n).shift(l)
    if not cert.add("weight_filtration", jm == w, "W = W(N)[-l]" if jm == w else "W differs from W(N)[-l]"):
        return cert
    if not cert.add("transversality", transversal(n, f), "N F^p ⊆ F^{p-1}"):
        return cert
    try:
        split = deligne_splitting(w, f)
    except NotMHS as exc:
        cert.add("hodge_decomposition", False, str(exc))
        return cert
    cert.add("hodge_decomposition", True, "F induces pure Hodge structures on every Gr")
    q = lattice.polarization()
    d = n.nrows
    powers = [Matrix.identity(d)]
    for _ in range(d + 1):
        powers.append(powers[-1] @ n)
    for k in range(0, w.hi - l + 1):
        m = l + k
        pieces = []
        for (p, qq) in split.weight_part(m):
            prim = split.components[(p, qq)] & powers[k + 1].kernel()
            for v in prim.basis:
                pieces.append(((p, qq), v))
        if not pieces:
            continue
        qnk = q @ powers[k]
        size = len(pieces)
        rows = []
        for (pa, va) in pieces:
            scal = _i_power(pa[0] - pa[1])
            qv = tuple(dot(va, col) for col in qnk.columns())
            rows.append(tuple(scal * dot(qv, vec_conj(vb)) for (_, vb) in pieces))
        gram = Matrix(rows)
        herm = gram == gram.T.conj()
        if not cert.add(f"hermitian_P{m}", herm, f"Gram matrix of Q_{k} on P_{m}"):
            return cert
        ortho = all(rows[i][j] == 0 for i in range(size) for j in range(size)
                    if pieces[i][0] != pieces[j][0])
        if not cert.add(f"orthogonality_P{m}", ortho, "distinct Hodge types are h-orthogonal"):
            return cert
        minors = leading_minors(gram)
        pos = all(not hasattr(x, "im") and x > 0 for x in minors)
        cert.add(f"positivity_P{m}", pos,
                 "leading minors " + ", ".join(str(x) for x in minors))
        if not pos:
            return cert
    return cert


def is_nilpotent_orbit(cone: NilpotentCone, f: HodgeFiltration, lattice: SymplecticLattice,
                       l: int | None = None) -> Certificate:
    """Griffiths transversality for each generator plus the polarized-MHS test at the generator sum."""
    l = lattice.weight if l is None else l
    cert = Certificate()
    dfx = f.defects(lattice)
    if not cert.add("compact_dual", not dfx, "; ".join(dfx)):
        return cert
    for i, g in enumerate(cone.generators):
        if not cert.add(f"transversality_N{i + 1}", transversal(g, f), "N F^p ⊆ F^{p-1}"):
            return cert
    if not cone.generators:
        cert.add("pure", True, "zero cone")
        return cert
    nint = cone.interior_point()
    w = jm_weight_filtration(nint).shift(l)
    sub = is_polarized_mhs(w, f, nint, lattice, l)
    cert.checks.extend(sub.checks)
    return cert


# --- classification --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LMHSType:
    """Degeneration label; Hodge-Tate weight-1 structures are I_g and carry a = g."""

    kind: str  # "pure", "HT", "I", "II", "III", "IV"
    a: int | None = None

    def __eq__(self, other):
        return isinstance(other, LMHSType) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    @property
    def tag(self) -> str:
        if self.kind in ("pure", "HT"):
            return self.kind
        return f"{self.kind}_{self.a}"

    def __str__(self):
        return self.tag

    @classmethod
    def parse(cls, tag: str) -> "LMHSType":
        t = tag.strip()
        if t.lower() == "pure":
            return cls("pure")
        if t.upper() in ("HT", "HODGETATE"):
            return cls("HT")
        kind, _, a = t.partition("_")
        if kind not in ("I", "II", "III", "IV") or not a.isdigit():
            raise ValueError(f"unknown LMHS tag {tag!r}")
        return cls(kind, int(a))

    def in_phi(self, phi: Iterable[str]) -> bool:
        phi = set(phi)
        return self.tag in phi or self.kind in phi or (self.kind == "HT" and ("I" in phi or "HT" in phi))


def _templates(lattice: SymplecticLattice):
    h = lattice.h
    if lattice.weight == 1:
        g = h
        yield LMHSType("pure"), {(1, 0): g, (0, 1): g}
        for a in range(1, g + 1):
            t = LMHSType("HT", a) if a == g else LMHSType("I", a)
            yield t, {(1, 1): a, (0, 0): a, (1, 0): g - a, (0, 1): g - a}
        return
    yield LMHSType("pure"), {(3, 0): 1, (0, 3): 1, (2, 1): h, (1, 2): h}
    for a in range(1, h + 1):
        yield LMHSType("I", a), {(3, 0): 1, (0, 3): 1, (2, 1): h - a, (1, 2): h - a, (2, 2): a, (1, 1): a}
    for b in range(0, h):
        yield LMHSType("II", b), {(3, 1): 1, (1, 3): 1, (2, 0): 1, (0, 2): 1,
                                  (2, 2): b, (1, 1): b, (2, 1): h - 1 - b, (1, 2): h - 1 - b}
    for c in range(0, h - 1):
        yield LMHSType("III", c), {(3, 2): 1, (2, 3): 1, (1, 0): 1, (0, 1): 1,
                                   (2, 2): c, (1, 1): c, (2, 1): h - 2 - c, (1, 2): h - 2 - c}
    for a in range(1, h + 1):
        yield LMHSType("IV", a), {(3, 3): 1, (0, 0): 1, (2, 2): a, (1, 1): a, (2, 1): h - a, (1, 2): h - a}


def type_from_table(table: dict, lattice: SymplecticLattice) -> LMHSType:
    observed = {pq: d for pq, d in table.items() if d}
    for t, tmpl in _templates(lattice):
        if {pq: d for pq, d in tmpl.items() if d} == observed:
            return t
    raise UnknownDiagram(f"Hodge-Deligne diagram {observed} matches no template")


def lmhs_splitting(cone: NilpotentCone, f: HodgeFiltration, lattice: SymplecticLattice) -> DeligneSplitting:
    l = lattice.weight
    if not cone.generators:
        return deligne_splitting(zero_cone_weight(f.n).shift(l), f)
    return deligne_splitting(jm_weight_filtration(cone.interior_point()).shift(l), f)


def classify_lmhs(cone: NilpotentCone, f: HodgeFiltration, lattice: SymplecticLattice,
                  require_orbit: bool = True) -> LMHSType:
    """Degeneration type read off the Hodge-Deligne diagram of (W(σ)[-l], F)."""
    if require_orbit:
        cert = is_nilpotent_orbit(cone, f, lattice)
        if not cert.ok:
            raise NotNilpotentOrbit("not a nilpotent orbit: failed " + ", ".join(cert.failed))
    split = lmhs_splitting(cone, f, lattice)
    return type_from_table(split.table(), lattice)
