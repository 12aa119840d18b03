"""Exact linear algebra over Q and Q(i).

Entries are ``fractions.Fraction`` or :class:`GaussianRational`; a Gaussian
value with zero imaginary part is always normalized back to a ``Fraction`` so
that real data stays in the fast path.  Vectors are plain tuples, matrices are
immutable :class:`Matrix` objects and subspaces are stored by their reduced
row-echelon basis, so equality of subspaces is tuple equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NotNilpotent, NotUnipotent

ZERO = Fraction(0)
ONE = Fraction(1)


class GaussianRational:
    """a + b i with a, b rational and b != 0 (use :func:`gauss` to build)."""

    __slots__ = ("re", "im")

    def __init__(self, re_part, im_part):
        self.re = Fraction(re_part)
        self.im = Fraction(im_part)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return gauss(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            d = other.re * other.re + other.im * other.im
            return gauss((self.re * other.re + self.im * other.im) / d,
                         (self.im * other.re - self.re * other.im) / d)
        if isinstance(other, (int, Fraction)):
            return gauss(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            d = self.re * self.re + self.im * self.im
            return gauss(other * self.re / d, -other * self.im / d)
        return NotImplemented

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return False  # normalized values never have im == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_entry(self)


I_UNIT = GaussianRational(0, 1)


def gauss(re_part, im_part=0):
    """Normalized element of Q(i): a Fraction when the imaginary part is 0."""
    if im_part == 0:
        return Fraction(re_part)
    return GaussianRational(re_part, im_part)


def conj(x):
    if isinstance(x, GaussianRational):
        return GaussianRational(x.re, -x.im)
    return x


def real_part(x):
    return x.re if isinstance(x, GaussianRational) else Fraction(x)


def imag_part(x):
    return x.im if isinstance(x, GaussianRational) else ZERO


def coerce(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, complex):
        raise TypeError("floating complex entries are not allowed")
    if isinstance(x, float):
        raise TypeError("floating entries are not allowed")
    if isinstance(x, str):
        return parse_entry(x)
    raise TypeError(f"cannot use {x!r} as an exact entry")


# --- text form -------------------------------------------------------------

def parse_entry(text: str):
    """Parse "p/q", "p/q+r/s i", "r/s i" or "-i" into an exact value."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty entry")
    if not s.endswith("i"):
        return Fraction(s)
    body = s[:-1].rstrip("*")
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut <= 0:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:cut], body[cut:]
    if im_txt in ("", "+"):
        im_txt = "1"
    elif im_txt == "-":
        im_txt = "-1"
    return gauss(Fraction(re_txt), Fraction(im_txt))


def format_entry(x) -> str:
    if isinstance(x, GaussianRational):
        sign = "-" if x.im < 0 else "+"
        return f"{x.re}{sign}{abs(x.im)} i"
    return str(Fraction(x))


# --- row reduction ---------------------------------------------------------

def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row-echelon form.  Returns (nonzero rows as tuples, pivot columns)."""
    m = [[Fraction(a) if isinstance(a, int) else a for a in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        if inv != 1:
            m[r] = [v * inv for v in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f != 0:
                    m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def _integer_rows(rows):
    """Rows scaled to integers, or None if some entry is not rational."""
    out = []
    for r in rows:
        den = 1
        for a in r:
            if isinstance(a, int):
                continue
            if not isinstance(a, Fraction):
                return None
            den = den * a.denominator // gcd(den, a.denominator)
        out.append([int(a * den) for a in r])
    return out


def rank_of(rows: Sequence[Sequence], ncols: int) -> int:
    m = _integer_rows(rows)
    if m is None:
        return len(rref(rows, ncols)[0])
    # fraction-free elimination over the integers
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                row = [a * x - f * y for x, y in zip(m[i], pr)]
                g = gcd(*row)
                m[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(m):
            break
    return r


def null_vectors(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of {x : r . x = 0 for every row r} (bilinear, no conjugation)."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        out.append(tuple(v))
    return out


def dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            s = s + a * b
    return s


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_conj(v):
    return tuple(conj(a) for a in v)


def is_zero_vector(v) -> bool:
    return all(a == 0 for a in v)


def primitive_integer_vector(v) -> tuple[int, ...]:
    """Positive rational multiple of v with coprime integer entries."""
    v = [Fraction(a) for a in v]
    if all(a == 0 for a in v):
        return tuple(0 for _ in v)
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints)


# --- matrices --------------------------------------------------------------

class Matrix:
    """Immutable exact matrix over Q or Q(i)."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(coerce(x) for x in r) for r in rows)
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        if ncols == 0 or any(len(r) != ncols for r in rows):
            raise ValueError("ragged or empty matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0])
        m._hash = None
        return m

    @classmethod
    def zeros(cls, n, m=None):
        m = n if m is None else m
        return cls._raw(tuple((ZERO,) * m for _ in range(n)))

    @classmethod
    def identity(cls, n):
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, cols):
        cols = [tuple(coerce(x) for x in c) for c in cols]
        return cls._raw(tuple(zip(*cols)))

    @classmethod
    def diag(cls, entries):
        entries = [coerce(x) for x in entries]
        n = len(entries)
        return cls._raw(tuple(tuple(entries[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def elementary(cls, n, i, j, value=1):
        rows = [[ZERO] * n for _ in range(n)]
        rows[i][j] = coerce(value)
        return cls._raw(tuple(tuple(r) for r in rows))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [tuple(c) for c in zip(*self.rows)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_entry(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"

    def __add__(self, other):
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        c = coerce(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / coerce(c))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other.rows))
            return Matrix._raw(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))
        return tuple(dot(r, other) for r in self.rows)

    def apply(self, v) -> tuple:
        return tuple(dot(r, v) for r in self.rows)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self):
        return Matrix._raw(tuple(zip(*self.rows)))

    def conj(self):
        return Matrix._raw(tuple(tuple(conj(a) for a in r) for r in self.rows))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_real(self) -> bool:
        return not any(isinstance(a, GaussianRational) for r in self.rows for a in r)

    def is_integral(self) -> bool:
        return self.is_real() and all(a.denominator == 1 for r in self.rows for a in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def rank(self) -> int:
        return rank_of(self.rows, self.ncols)

    def kernel(self) -> "Subspace":
        return Subspace.from_rref(self.ncols, null_vectors(self.rows, self.ncols))

    def image(self) -> "Subspace":
        return Subspace.span(self.columns(), self.nrows)

    def flatten(self) -> tuple:
        return tuple(a for r in self.rows for a in r)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), ZERO)

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        d = ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c] != 0), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            d = d * m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                f = m[i][c]
                if f != 0:
                    f = f * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != tuple(range(n)) or len(red) < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix._raw(tuple(tuple(r[n:]) for r in red))

    def solve(self, b) -> tuple | None:
        """Some solution x of self @ x = b, or None."""
        aug = [list(r) + [coerce(v)] for r, v in zip(self.rows, b)]
        red, piv = rref(aug, self.ncols + 1)
        if piv and piv[-1] == self.ncols:
            return None
        x = [ZERO] * self.ncols
        for row, pc in zip(red, piv):
            x[pc] = row[-1]
        return tuple(x)

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def to_json(self) -> list[list[str]]:
        return [[format_entry(a) for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls([[parse_entry(str(a)) if isinstance(a, str) else a for a in r] for r in data])


RationalMatrix = Matrix
GaussianMatrix = Matrix


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def nilpotency_index(n: Matrix) -> int | None:
    """Smallest k >= 0 with N^k = 0 (N^0 = I), or None if N^dim != 0."""
    p = Matrix.identity(n.nrows)
    for k in range(n.nrows + 1):
        if p.is_zero():
            return k
        p = p @ n
    return None


def is_nilpotent(n: Matrix) -> bool:
    return nilpotency_index(n) is not None


def exp_nilpotent(n: Matrix) -> Matrix:
    """exp(N) by the finite power series."""
    if not n.is_square():
        raise NotNilpotent("exp of a non-square matrix")
    total = Matrix.identity(n.nrows)
    term = Matrix.identity(n.nrows)
    for k in range(1, n.nrows + 1):
        term = (term @ n) * Fraction(1, k)
        if term.is_zero():
            return total
        total = total + term
    if not (term @ n).is_zero():
        raise NotNilpotent("matrix is not nilpotent")
    return total


def log_unipotent(t: Matrix) -> Matrix:
    """log(T) = sum (-1)^(k+1) (T-I)^k / k for unipotent T."""
    if not t.is_square():
        raise NotUnipotent("log of a non-square matrix")
    m = t - Matrix.identity(t.nrows)
    if nilpotency_index(m) is None:
        raise NotUnipotent("T - I is not nilpotent")
    total = Matrix.zeros(t.nrows)
    power = Matrix.identity(t.nrows)
    for k in range(1, t.nrows + 1):
        power = power @ m
        if power.is_zero():
            break
        c = Fraction(1 if k % 2 else -1, k)
        total = total + power * c
    return total


# --- subspaces -------------------------------------------------------------

class Subspace:
    """Subspace of K^n stored as a reduced row-echelon basis (rows)."""

    __slots__ = ("n", "basis", "pivots", "_ann")

    def __init__(self, n: int, basis: tuple, pivots: tuple):
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._ann = None

    @classmethod
    def span(cls, vectors: Iterable[Sequence], n: int) -> "Subspace":
        vecs = []
        for v in vectors:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {n}")
            vecs.append(tuple(coerce(a) for a in v))
        red, piv = rref(vecs, n)
        return cls(n, red, piv)

    @classmethod
    def from_rref(cls, n, vectors):
        red, piv = rref(vectors, n)
        return cls(n, red, piv)

    @classmethod
    def zero(cls, n):
        return cls(n, (), ())

    @classmethod
    def full(cls, n):
        return cls.span(Matrix.identity(n).rows, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[tuple]:
        return list(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an n x dim matrix."""
        return Matrix.from_columns(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n})"

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.n

    def contains(self, v) -> bool:
        # reduce v against the echelon basis
        w = list(v)
        for row, pc in zip(self.basis, self.pivots):
            f = w[pc]
            if f != 0:
                w = [a - f * b for a, b in zip(w, row)]
        return all(a == 0 for a in w)

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Subspace.from_rref(self.n, self.basis + other.basis)

    def annihilator(self) -> "Subspace":
        """{y : u . y = 0 for all u in self} (bilinear)."""
        if self._ann is None:
            self._ann = Subspace.from_rref(self.n, null_vectors(self.basis, self.n))
        return self._ann

    def __and__(self, other: "Subspace") -> "Subspace":
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.n)
        if self <= other:
            return self
        if other <= self:
            return other
        rows = self.annihilator().basis + other.annihilator().basis
        return Subspace.from_rref(self.n, null_vectors(rows, self.n))

    def conj(self) -> "Subspace":
        if all(not isinstance(a, GaussianRational) for r in self.basis for a in r):
            return self
        return Subspace.from_rref(self.n, [vec_conj(v) for v in self.basis])

    def is_real(self) -> bool:
        return self.conj() == self

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.from_rref(m.nrows, [m.apply(v) for v in self.basis])

    def preimage(self, m: Matrix) -> "Subspace":
        """{x : m x in self}."""
        ann = self.annihilator().basis
        rows = [tuple(dot(a, col) for col in m.columns()) for a in ann]  # a^T m
        return Subspace.from_rref(m.ncols, null_vectors(rows, m.ncols))

    def perp(self, q: Matrix) -> "Subspace":
        """{x : Q(u, x) = 0 for all u in self} with Q(u,x) = u^T q x."""
        rows = [tuple(dot(u, col) for col in q.columns()) for u in self.basis]
        return Subspace.from_rref(self.n, null_vectors(rows, self.n))

    def complement_in(self, bigger: "Subspace") -> list[tuple]:
        """Vectors of ``bigger``'s echelon basis completing self to a basis of it."""
        out = []
        cur = self
        for v in bigger.basis:
            if not cur.contains(v):
                out.append(v)
                cur = cur + Subspace.from_rref(self.n, [v])
        return out

    def coordinates(self, v) -> tuple | None:
        """Coefficients of v in the echelon basis, or None if v is not in self."""
        if not self.contains(v):
            return None
        return tuple(v[pc] for pc in self.pivots)


def canonical_subspace(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    """Span of ``vectors`` in canonical (reduced row-echelon) form."""
    return Subspace.span(list(vectors), ambient_dim)


def is_symplectic_algebra_element(n: Matrix, q: Matrix) -> bool:
    """Q N + N^T Q = 0."""
    return (q @ n + n.T @ q).is_zero()


def preserves_form(g: Matrix, q: Matrix) -> bool:
    """g^T Q g = Q."""
    return g.T @ q @ g == q


def antidiagonal_ones(n: int) -> Matrix:
    return Matrix._raw(tuple(tuple(ONE if i + j == n - 1 else ZERO for j in range(n)) for i in range(n)))
