"""Complete flags, frames and the relative position of two flags."""

from dataclasses import dataclass

from .errors import FieldMismatch, ShapeMismatch, Singular
from .exactfield import ExactMatrix, Subspace, from_columns, identity, permutation_matrix


class Flag:
    """Complete flag F_1 < ... < F_n in F^n, steps held in RREF."""
    __slots__ = ("steps", "field", "n")

    def __init__(self, steps):
        steps = tuple(steps)
        if not steps:
            raise ShapeMismatch("empty flag")
        n = steps[0].n
        field = steps[0].field
        for k, s in enumerate(steps, start=1):
            if s.n != n or s.field != field:
                raise ShapeMismatch("flag steps live in different spaces")
            if s.dim != k:
                raise ShapeMismatch(f"step {k} has dimension {s.dim}")
        for a, b in zip(steps, steps[1:]):
            if not b.contains_subspace(a):
                raise ShapeMismatch("flag steps are not nested")
        if len(steps) != n:
            raise ShapeMismatch("flag is not complete")
        self.steps = steps
        self.field = field
        self.n = n

    @classmethod
    def from_basis(cls, basis):
        """Flag spanned by the columns of ``basis`` (a matrix) or a list of vectors."""
        if isinstance(basis, ExactMatrix):
            vecs, field, n = basis.columns(), basis.field, basis.nrows
        else:
            raise TypeError("pass an ExactMatrix whose columns are the basis")
        if len(vecs) != n:
            raise ShapeMismatch("a frame needs n vectors")
        steps = []
        for k in range(1, n + 1):
            s = Subspace.span(vecs[:k], field, n)
            if s.dim != k:
                raise Singular("basis vectors are dependent")
            steps.append(s)
        return cls(steps)

    def step(self, k):
        if k == 0:
            return Subspace.zero(self.n, self.field)
        return self.steps[k - 1]

    def adapted_basis(self):
        """Columns e_1..e_n with F_k = span(e_1..e_k)."""
        vecs = []
        prev = Subspace.zero(self.n, self.field)
        for s in self.steps:
            v = next(v for v in s.basis if v not in prev)
            vecs.append(v)
            prev = s
        return from_columns(vecs, self.field)

    def __eq__(self, other):
        if not isinstance(other, Flag):
            return NotImplemented
        return self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self):
        return f"Flag(n={self.n}, {self.field!r}, basis={self.adapted_basis()!r})"

    def to_json(self):
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, obj, field):
        if not obj:
            raise ShapeMismatch("empty flag")
        n = len(obj[-1][0]) if obj[-1] else 0
        return cls([Subspace.span(step, field, n) for step in obj])


def standard_flag(n, field):
    return Flag([Subspace.coordinate(k, n, field) for k in range(1, n + 1)])


def opposite_flag(n, field):
    return Flag.from_basis(permutation_matrix(list(range(n, 0, -1)), field))


def transport_flag(g, f):
    if g.field != f.field:
        raise FieldMismatch("matrix and flag over different fields")
    if not g.is_invertible() or g.nrows != f.n:
        raise Singular("transport needs an invertible n x n matrix")
    return Flag([s.image(g) for s in f.steps])


def is_invariant(phi, f):
    return all(s.image(phi) == s for s in f.steps)


def is_filtered_map(phi, f, f2):
    """phi(F_i) is contained in F'_i for every i."""
    return all(b.contains_subspace(a.image(phi)) for a, b in zip(f.steps, f2.steps))


@dataclass(frozen=True)
class RelativePosition:
    """A permutation as a 1-based image list: perm[i-1] = j when sigma_ij = 1."""
    perm: tuple

    def matrix(self, field):
        # sigma_ij = 1 at row i, column perm[i]
        n = len(self.perm)
        rows = [[field.zero] * n for _ in range(n)]
        for i, j in enumerate(self.perm):
            rows[i][j - 1] = field.one
        return ExactMatrix._raw(tuple(tuple(r) for r in rows), field)

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm, start=1):
            inv[j - 1] = i
        return RelativePosition(tuple(inv))

    def is_identity(self):
        return all(j == i for i, j in enumerate(self.perm, start=1))

    def is_longest(self):
        n = len(self.perm)
        return all(j == n + 1 - i for i, j in enumerate(self.perm, start=1))

    def length(self):
        p = self.perm
        return sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])

    def to_json(self):
        return list(self.perm)

    def __str__(self):
        return "".join(str(x) for x in self.perm) if len(self.perm) < 10 else str(list(self.perm))


def intersection_dims(f, f2):
    """Table d[i][j] = dim(F_i & F'_j), 0 <= i, j <= n."""
    if f.field != f2.field:
        raise FieldMismatch("flags over different fields")
    if f.n != f2.n:
        raise ShapeMismatch("flags in different dimensions")
    n = f.n
    d = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d[i][j] = i + j - (f.steps[i - 1] + f2.steps[j - 1]).dim
    return d


def relative_position(f, f2):
    """sigma_ij = dim F_i&F'_j / (F_i&F'_{j-1} + F_{i-1}&F'_j)."""
    d = intersection_dims(f, f2)
    n = f.n
    perm = [0] * n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            # the two subspaces in the denominator meet in F_{i-1} & F'_{j-1}
            v = d[i][j] - d[i][j - 1] - d[i - 1][j] + d[i - 1][j - 1]
            if v:
                assert v == 1 and perm[i - 1] == 0
                perm[i - 1] = j
    return RelativePosition(tuple(perm))


# -- frames ------------------------------------------------------------------

class Frame:
    """Ordered basis, stored as the matrix whose columns are the basis vectors."""
    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if not matrix.is_invertible():
            raise Singular("frame vectors are dependent")
        self.matrix = matrix

    @classmethod
    def standard(cls, n, field):
        return cls(identity(n, field))

    def flag(self):
        return Flag.from_basis(self.matrix)

    def __eq__(self, other):
        return isinstance(other, Frame) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)


class ProjectiveFrame(Frame):
    """Frame up to a common nonzero scalar."""

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (self.matrix.inverse() @ other.matrix).is_scalar()

    def __hash__(self):
        m = self.matrix
        pivot = next(x for r in m.rows for x in r if x)
        return hash((m * m.field.inv(pivot)).rows)


def in_frame(phi, beta, beta2):
    """Matrix of phi from frame beta to frame beta2: beta2^-1 phi beta."""
    return beta2.matrix.inverse() @ phi @ beta.matrix


def is_unipotent_iso(phi, beta, beta2):
    return in_frame(phi, beta, beta2).is_unipotent_upper()


def is_strict_iso(phi, beta, beta2):
    return in_frame(phi, beta, beta2) == identity(phi.nrows, phi.field)


def is_projectively_unipotent(phi, beta, beta2):
    return in_frame(phi, beta, beta2).is_scalar_unipotent()


def is_filtered_iso(phi, f, f2):
    return phi.is_invertible() and is_filtered_map(phi, f, f2)
