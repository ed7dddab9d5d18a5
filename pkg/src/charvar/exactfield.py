"""Exact linear algebra over the rationals and over prime fields.

Entries are stored raw: ``Fraction`` for QQ, reduced ``int`` for GF(p).
Matrices and subspaces are immutable and hashable, and carry their field.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import random as _random

from .errors import FieldMismatch, ShapeMismatch, Singular


class Field:
    kind = None
    p = None

    def is_finite(self):
        return self.p is not None


@dataclass(frozen=True)
class Rationals(Field):
    kind = "Q"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass an int, Fraction or 'a/b' string")
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def reduce(self, x):
        return x

    def inv(self, x):
        if x == 0:
            raise Singular("division by zero")
        return 1 / Fraction(x)

    def elements(self):
        raise ValueError("QQ is infinite")

    def __repr__(self):
        return "QQ"


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField(Field):
    p: int
    kind = "Fp"

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise Singular(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, bool) or not isinstance(x, int):
            x = int(x)
        return x % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def reduce(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise Singular("division by zero")
        return pow(x, -1, self.p)

    def elements(self):
        return range(self.p)

    def primitive_root(self):
        return _primitive_root(self.p)

    def __repr__(self):
        return f"GF({self.p})"


@lru_cache(maxsize=None)
def _primitive_root(p):
    if p == 2:
        return 1
    order = p - 1
    factors = {f for f in range(2, order + 1) if order % f == 0 and _is_prime(f)}
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise AssertionError("no primitive root")


QQ = Rationals()


def GF(p):
    return PrimeField(p)


def field_from_json(obj):
    kind = obj.get("kind")
    if kind == "Q":
        return QQ
    if kind == "Fp":
        return PrimeField(int(obj["p"]))
    raise ValueError(f"unknown field kind {kind!r}")


def field_to_json(field):
    if field.kind == "Q":
        return {"kind": "Q"}
    return {"kind": "Fp", "p": field.p}


def scalar_to_json(field, x):
    if field.kind == "Fp":
        return int(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _check_field(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


# -- row reduction --------------------------------------------------------

def _rref(field, rows, ncols):
    """Reduced row echelon form; returns (nonzero rows as lists, pivot columns)."""
    m = [list(r) for r in rows]
    p = field.p
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = field.inv(row[c])
        if p is None:
            row = [x * inv for x in row]
        else:
            row = [x * inv % p for x in row]
        m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    other = m[i]
                    if p is None:
                        m[i] = [x - f * y for x, y in zip(other, row)]
                    else:
                        m[i] = [(x - f * y) % p for x, y in zip(other, row)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _kernel_rows(field, rows, ncols):
    red, pivots = _rref(field, rows, ncols)
    pivset = set(pivots)
    one = field.one
    zero = field.zero
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(red, pivots):
            v[pc] = field.reduce(-row[f])
        out.append(v)
    return out


# -- matrices -------------------------------------------------------------

class ExactMatrix:
    __slots__ = ("field", "rows", "_hash")

    def __init__(self, rows, field):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ShapeMismatch("ragged rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, rows, field):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.rows)))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"ExactMatrix([{body}], {self.field!r})"

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return mat_mul(self, c)
        c = self.field(c)
        red = self.field.reduce
        return ExactMatrix._raw(tuple(tuple(red(c * x) for x in r) for r in self.rows), self.field)

    __rmul__ = __mul__

    def __add__(self, other):
        _check_field(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        red = self.field.reduce
        return ExactMatrix._raw(
            tuple(tuple(red(x + y) for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.field)

    def __neg__(self):
        return self * (-1)

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        return ExactMatrix._raw(tuple(zip(*self.rows)), self.field)

    T = property(transpose)

    def inverse(self):
        return mat_inverse(self)

    def __pow__(self, k):
        if self.nrows != self.ncols:
            raise ShapeMismatch("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return list(zip(*self.rows))

    def rank(self):
        return len(_rref(self.field, self.rows, self.ncols)[1])

    def det(self):
        if self.nrows != self.ncols:
            raise ShapeMismatch("determinant of a non-square matrix")
        field = self.field
        m = [list(r) for r in self.rows]
        n = len(m)
        det = field.one
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return field.zero
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = field.reduce(det * m[c][c])
            inv = field.inv(m[c][c])
            for i in range(c + 1, n):
                f = field.reduce(m[i][c] * inv)
                if f:
                    m[i] = [field.reduce(x - f * y) for x, y in zip(m[i], m[c])]
        return field.reduce(det)

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def is_square(self):
        return self.nrows == self.ncols

    def is_upper_triangular(self):
        return all(self.rows[i][j] == 0 for i in range(self.nrows) for j in range(min(i, self.ncols)))

    def is_borel(self):
        """Invertible upper triangular."""
        return self.is_square() and self.is_upper_triangular() and all(
            self.rows[i][i] != 0 for i in range(self.nrows))

    def is_unipotent_upper(self):
        return self.is_upper_triangular() and all(self.rows[i][i] == 1 for i in range(self.nrows))

    def is_scalar_unipotent(self):
        """A nonzero scalar times an upper unitriangular matrix."""
        if not self.is_square() or not self.is_upper_triangular():
            return False
        if not self.rows:
            return True
        d = self.rows[0][0]
        return d != 0 and all(self.rows[i][i] == d for i in range(self.nrows))

    def is_scalar(self):
        if not self.is_square():
            return False
        d = self.rows[0][0] if self.rows else None
        return all(self.rows[i][j] == (d if i == j else 0)
                   for i in range(self.nrows) for j in range(self.ncols))

    def diagonal(self):
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def apply(self, v):
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ShapeMismatch("vector length")
        red = self.field.reduce
        return tuple(red(sum(x * y for x, y in zip(r, v))) for r in self.rows)

    def kernel(self):
        return kernel(self)

    def image(self):
        return Subspace.span(self.columns(), self.field, self.nrows)

    def key(self):
        return self.rows

    def to_json(self):
        return [[scalar_to_json(self.field, x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj, field):
        return cls(obj, field)


def identity(n, field):
    one, zero = field.one, field.zero
    return ExactMatrix._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), field)


def zeros(nrows, ncols, field):
    z = field.zero
    return ExactMatrix._raw(tuple(tuple(z for _ in range(ncols)) for _ in range(nrows)), field)


def diag(values, field):
    values = [field(v) for v in values]
    n = len(values)
    z = field.zero
    return ExactMatrix._raw(tuple(tuple(values[i] if i == j else z for j in range(n)) for i in range(n)), field)


def elementary(n, i, j, c, field):
    """Identity plus c at (i, j), zero-based."""
    rows = [list(r) for r in identity(n, field).rows]
    rows[i][j] = field.reduce(rows[i][j] + field(c))
    return ExactMatrix._raw(tuple(tuple(r) for r in rows), field)


def from_columns(cols, field):
    cols = [tuple(field(x) for x in c) for c in cols]
    return ExactMatrix._raw(tuple(zip(*cols)), field)


def permutation_matrix(perm, field):
    """Matrix sending e_j to e_{perm[j]}; perm is a 1-based image list."""
    n = len(perm)
    rows = [[field.zero] * n for _ in range(n)]
    for j, pj in enumerate(perm):
        rows[pj - 1][j] = field.one
    return ExactMatrix._raw(tuple(tuple(r) for r in rows), field)


def mat_mul(a, b):
    _check_field(a, b)
    if a.ncols != b.nrows:
        raise ShapeMismatch(f"{a.shape} @ {b.shape}")
    cols = tuple(zip(*b.rows))
    p = a.field.p
    if p is None:
        zero = Fraction(0)
        rows = tuple(tuple(sum([x * y for x, y in zip(r, c)], zero) for c in cols) for r in a.rows)
    else:
        rows = tuple(tuple(sum([x * y for x, y in zip(r, c)]) % p for c in cols) for r in a.rows)
    if not cols:
        rows = tuple(() for _ in a.rows)
    return ExactMatrix._raw(rows, a.field)


def mat_prod(mats, n=None, field=None):
    """Left-to-right product of a sequence of matrices."""
    mats = list(mats)
    if not mats:
        if n is None:
            raise ValueError("empty product needs a size")
        return identity(n, field)
    out = mats[0]
    for m in mats[1:]:
        out = mat_mul(out, m)
    return out


def mat_inverse(a):
    if a.nrows != a.ncols:
        raise ShapeMismatch("inverse of a non-square matrix")
    n = a.nrows
    field = a.field
    one, zero = field.one, field.zero
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.rows)]
    red, pivots = _rref(field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise Singular("matrix is not invertible")
    return ExactMatrix._raw(tuple(tuple(r[n:]) for r in red), field)


def conj(g, x):
    """g x g^-1."""
    return g @ x @ g.inverse()


# -- subspaces ------------------------------------------------------------

class Subspace:
    """Subspace of F^n held as its RREF row basis."""
    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, basis, field, n, _canonical=False):
        if _canonical:
            rows, piv = tuple(tuple(r) for r in basis), None
        else:
            vecs = [tuple(field(x) for x in v) for v in basis]
            if any(len(v) != n for v in vecs):
                raise ShapeMismatch("vector length does not match ambient dimension")
            red, piv = _rref(field, vecs, n)
            rows = tuple(tuple(r) for r in red)
        self.field = field
        self.n = n
        self.basis = rows
        self.pivots = tuple(piv) if piv is not None else tuple(
            next(j for j, x in enumerate(r) if x) for r in rows)

    @classmethod
    def span(cls, vectors, field, n):
        return cls(list(vectors), field, n)

    @classmethod
    def zero(cls, n, field):
        return cls((), field, n, _canonical=True)

    @classmethod
    def full(cls, n, field):
        return cls(identity(n, field).rows, field, n, _canonical=True)

    @classmethod
    def coordinate(cls, k, n, field):
        """span(e_1, ..., e_k)."""
        return cls(identity(n, field).rows[:k], field, n, _canonical=True)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.field, self.n, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, {self.field!r}, basis={list(self.basis)})"

    def _compat(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if self.n != other.n:
            raise ShapeMismatch("ambient dimensions differ")

    def reduce(self, v):
        """Remainder of v after clearing the pivot coordinates."""
        v = list(v)
        red = self.field.reduce
        for row, pc in zip(self.basis, self.pivots):
            f = v[pc]
            if f:
                v = [red(x - f * y) for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v):
        if len(v) != self.n:
            raise ShapeMismatch("vector length")
        v = tuple(self.field(x) for x in v)
        return not any(self.reduce(v))

    def contains_subspace(self, other):
        self._compat(other)
        return all(not any(self.reduce(v)) for v in other.basis)

    def __le__(self, other):
        return other.contains_subspace(self)

    def __add__(self, other):
        self._compat(other)
        if not other.basis:
            return self
        if not self.basis:
            return other
        return Subspace(self.basis + other.basis, self.field, self.n)

    def annihilator(self):
        """Vectors y with <v, y> = 0 for all v in self (standard pairing)."""
        if not self.basis:
            return Subspace.full(self.n, self.field)
        return Subspace(_kernel_rows(self.field, self.basis, self.n), self.field, self.n)

    def __and__(self, other):
        self._compat(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.n, self.field)
        if self.dim == self.n:
            return other
        if other.dim == self.n:
            return self
        return (self.annihilator() + other.annihilator()).annihilator()

    intersect = __and__

    def image(self, m):
        if m.field != self.field:
            raise FieldMismatch("matrix field")
        if m.ncols != self.n:
            raise ShapeMismatch("matrix does not act on this space")
        return Subspace([m.apply(v) for v in self.basis], self.field, m.nrows)

    def complement_basis(self):
        """Standard basis vectors on the non-pivot coordinates."""
        piv = set(self.pivots)
        one, zero = self.field.one, self.field.zero
        return [tuple(one if k == j else zero for k in range(self.n)) for j in range(self.n) if j not in piv]

    def vectors(self):
        """All vectors of a subspace over a finite field."""
        if not self.field.is_finite():
            raise ValueError("infinite field")
        import itertools
        p = self.field.p
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [(x + c * y) % p for x, y in zip(v, row)]
            yield tuple(v)

    def to_json(self):
        return [[scalar_to_json(self.field, x) for x in r] for r in self.basis]


def sub_intersect(u, v):
    return u & v


def sub_sum(u, v):
    return u + v


def kernel(a):
    """Right kernel {x : a x = 0}."""
    return Subspace(_kernel_rows(a.field, a.rows, a.ncols), a.field, a.ncols)


def rank(a):
    return a.rank()


# -- characteristic polynomial --------------------------------------------

def charpoly(a):
    """Coefficients of det(x I - a), highest degree first (Berkowitz, division free)."""
    if a.nrows != a.ncols:
        raise ShapeMismatch("characteristic polynomial of a non-square matrix")
    field = a.field
    red = field.reduce
    m = a.rows
    n = len(m)
    if n == 0:
        return (field.one,)
    # vector of coefficients for the leading r x r block, built up one row at a time
    poly = [field.one, red(-m[0][0])]
    for r in range(1, n):
        # Toeplitz column for block of size r+1
        R = [m[r][j] for j in range(r)]          # row r, columns < r
        C = [m[i][r] for i in range(r)]          # column r, rows < r
        A = [row[:r] for row in m[:r]]
        col = [field.one, red(-m[r][r])]
        v = C
        for _ in range(r):
            col.append(red(-sum(x * y for x, y in zip(R, v))))
            v = [red(sum(x * y for x, y in zip(row, v))) for row in A]
        # multiply lower-triangular Toeplitz matrix of col (size r+2 x r+1) by poly
        new = []
        for i in range(r + 2):
            s = 0
            for j in range(r + 1):
                if 0 <= i - j < len(col):
                    s += col[i - j] * poly[j]
            new.append(red(s))
        poly = new
    return tuple(poly)


@lru_cache(maxsize=4096)
def _factor_cached(field, coeffs):
    import sympy
    x = sympy.Symbol("x")
    if field.kind == "Fp":
        poly = sympy.Poly([int(c) for c in coeffs], x, modulus=field.p)
    else:
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        cs = f.all_coeffs()
        if field.kind == "Fp":
            cs = [int(c) % field.p for c in cs]
        else:
            cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in cs]
        out.append((tuple(cs), int(mult)))
    return tuple(out)


def factor_poly(field, coeffs):
    """Irreducible factorization: tuple of (coeffs, multiplicity), coefficients highest first."""
    return _factor_cached(field, tuple(coeffs))


def eigenvalues(a):
    """Dict eigenvalue -> algebraic multiplicity, or None if some factor is not linear."""
    field = a.field
    out = {}
    for cs, mult in factor_poly(field, charpoly(a)):
        if len(cs) != 2:
            return None
        lead, c0 = cs
        lam = field.reduce(-c0 * field.inv(lead))
        out[lam] = out.get(lam, 0) + mult
    return out


# -- random elements ------------------------------------------------------

def random_scalar(field, rng, nonzero=False, bound=3):
    if field.is_finite():
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.p)
    while True:
        x = Fraction(rng.randint(-bound, bound))
        if x or not nonzero:
            return x


def random_matrix(n, field, rng, kind="G", bound=3):
    """Random element of GL_n ('G'), the upper Borel ('B'), upper unitriangular ('U'),
    or scalar times unitriangular ('PU')."""
    rng = rng if rng is not None else _random.Random()
    zero, one = field.zero, field.one
    if kind == "G":
        while True:
            m = ExactMatrix._raw(tuple(tuple(random_scalar(field, rng, bound=bound) for _ in range(n))
                                       for _ in range(n)), field)
            if m.is_invertible():
                return m
    rows = []
    lam = random_scalar(field, rng, nonzero=True, bound=bound)
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(zero)
            elif j > i:
                row.append(random_scalar(field, rng, bound=bound))
            elif kind == "B":
                row.append(random_scalar(field, rng, nonzero=True, bound=bound))
            elif kind == "U":
                row.append(one)
            elif kind == "PU":
                row.append(lam)
            else:
                raise ValueError(f"unknown matrix kind {kind!r}")
        rows.append(tuple(row))
    return ExactMatrix._raw(tuple(rows), field)


def all_matrices(n, field, kind="G"):
    """Enumerate GL_n, B, U or scalar*U over a prime field."""
    import itertools
    if not field.is_finite():
        raise ValueError("enumeration needs a finite field")
    p = field.p
    if kind == "G":
        for entries in itertools.product(range(p), repeat=n * n):
            m = ExactMatrix._raw(tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n)), field)
            if m.det() != 0:
                yield m
        return
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if kind == "B":
        diags = itertools.product(range(1, p), repeat=n)
    elif kind == "U":
        diags = [(1,) * n]
    elif kind == "PU":
        diags = [(c,) * n for c in range(1, p)]
    else:
        raise ValueError(f"unknown matrix kind {kind!r}")
    diags = list(diags)
    for d in diags:
        for ups in itertools.product(range(p), repeat=len(upper)):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = d[i]
            for (i, j), x in zip(upper, ups):
                rows[i][j] = x
            yield ExactMatrix._raw(tuple(tuple(r) for r in rows), field)


def group_order(n, q, kind="G"):
    if kind == "G":
        out = 1
        for k in range(n):
            out *= q ** n - q ** k
        return out
    u = q ** (n * (n - 1) // 2)
    if kind == "B":
        return (q - 1) ** n * u
    if kind == "U":
        return u
    if kind == "PU":
        return (q - 1) * u
    raise ValueError(kind)
