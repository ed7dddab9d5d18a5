"""Jordan types, shuffles of Young tableaux, shuffled Jordan matrices, and the
correspondence between invariant complete flags and shuffled Jordan types.

A box is a triple ``(k, i, j)``: eigenvalue index k (1-based, eigenvalues in
increasing order), row i of that eigenvalue's tableau (rows by decreasing
length), column j (j = 1 is the eigenvector end of the chain).  A shuffle is
the tuple of all boxes listed by position 1..n.
"""

from dataclasses import dataclass
from math import factorial, prod
import itertools
import re

from .errors import (EigenvaluesNotInField, EnumerationTooLarge, NotClassifiable,
                     NotInvariant, ShapeMismatch, TypeShapeMismatch, check_budget)
from .exactfield import (ExactMatrix, Subspace, all_matrices, eigenvalues, from_columns,
                         identity, kernel, scalar_to_json)
from .flags import Flag, is_invariant

MAX_ENUM = 2 ** 63 - 1


def _partition(part):
    part = tuple(sorted((int(x) for x in part), reverse=True))
    if not part or part[-1] < 1:
        raise ValueError("partitions are nonempty lists of positive integers")
    return part


@dataclass(frozen=True)
class JordanType:
    """Pairs (eigenvalue, partition), sorted by eigenvalue.

    Eigenvalues may be field elements or plain labels when only the
    combinatorics matter.
    """
    blocks: tuple

    def __post_init__(self):
        blocks = tuple((lam, _partition(part)) for lam, part in self.blocks)
        blocks = tuple(sorted(blocks, key=lambda b: b[0]))
        lams = [b[0] for b in blocks]
        if len(set(lams)) != len(lams):
            raise ValueError("eigenvalues must be distinct")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_partitions(cls, *parts):
        return cls(tuple((k, p) for k, p in enumerate(parts, start=1)))

    @property
    def n(self):
        return sum(sum(p) for _, p in self.blocks)

    @property
    def shape(self):
        return tuple(p for _, p in self.blocks)

    @property
    def eigenvalues(self):
        return tuple(lam for lam, _ in self.blocks)

    def rows(self):
        """All (k, i, length) rows."""
        return [(k, i, ln) for k, (_, part) in enumerate(self.blocks, start=1)
                for i, ln in enumerate(part, start=1)]

    def row_length(self, k, i):
        return self.blocks[k - 1][1][i - 1]

    def to_json(self, field=None):
        out = []
        for lam, part in self.blocks:
            eig = scalar_to_json(field, lam) if field is not None else (
                lam if isinstance(lam, int) else str(lam))
            out.append({"eig": eig, "part": list(part)})
        return out

    @classmethod
    def from_json(cls, obj, field=None):
        return cls(tuple(((field(b["eig"]) if field is not None else b["eig"]), tuple(b["part"]))
                         for b in obj))


# -- Jordan type of a matrix ---------------------------------------------------

def _split_eigenvalues(m):
    if not m.is_square():
        raise ShapeMismatch("Jordan type of a non-square matrix")
    ev = eigenvalues(m)
    if ev is None:
        raise EigenvaluesNotInField("characteristic polynomial does not split over the base field")
    return ev


def jordan_type(m):
    ev = _split_eigenvalues(m)
    n = m.nrows
    blocks = []
    for lam, mult in ev.items():
        nu = m - identity(n, m.field) * lam
        dims = [0]
        power = identity(n, m.field)
        while dims[-1] < mult:
            power = power @ nu
            dims.append(n - power.rank())
        at_least = [dims[k] - dims[k - 1] for k in range(1, len(dims))]
        part = [sum(1 for c in at_least if c > i) for i in range(at_least[0])]
        blocks.append((lam, tuple(part)))
    return JordanType(tuple(blocks))


def jordan_chains(m):
    """Jordan basis as chains[k-1][i-1] = [v_1, ..., v_len] with (m - lam) v_1 = 0
    and (m - lam) v_{j+1} = v_j."""
    jt = jordan_type(m)
    n, field = m.nrows, m.field
    chains = []
    for lam, part in jt.blocks:
        nu = m - identity(n, field) * lam
        top = part[0]
        kernels = [Subspace.zero(n, field)]
        power = identity(n, field)
        for _ in range(top):
            power = power @ nu
            kernels.append(kernel(power))
        heads = []          # (length, head vector)
        for size in range(top, 0, -1):
            span = kernels[size - 1]
            extra = []
            for ln, h in heads:
                v = h
                for _ in range(ln - size):
                    v = nu.apply(v)
                extra.append(v)
            span = span + Subspace.span(extra, field, n) if extra else span
            want = sum(1 for x in part if x == size)
            got = 0
            for v in kernels[size].basis:
                if got == want:
                    break
                if v not in span:
                    heads.append((size, v))
                    span = span + Subspace.span([v], field, n)
                    got += 1
            assert got == want
        rows = []
        for ln, h in heads:
            chain = [h]
            for _ in range(ln - 1):
                chain.append(nu.apply(chain[-1]))
            rows.append(list(reversed(chain)))
        chains.append(rows)
    return jt, chains


def jordan_matrix(jt, field):
    """Block diagonal Jordan matrix, blocks in box order."""
    return shuffled_matrix(jt, standard_shuffle(jt), field)


# -- shuffles ----------------------------------------------------------------

def count_shuffles(jt):
    return factorial(jt.n) // prod(factorial(ln) for _, _, ln in jt.rows())


def _equal_length_symmetry(jt):
    c = 1
    for _, part in jt.blocks:
        for ln in set(part):
            c *= factorial(part.count(ln))
    return c


def count_shuffled_jordan_types(jt):
    total = count_shuffles(jt)
    c = _equal_length_symmetry(jt)
    assert total % c == 0
    return total // c


def standard_shuffle(jt):
    return tuple((k, i, j) for k, i, ln in jt.rows() for j in range(1, ln + 1))


def _enumerate(jt, canonical_only):
    rows = jt.rows()
    n = jt.n
    # previous row of equal length in the same tableau, if any
    prev_equal = []
    for idx, (k, i, ln) in enumerate(rows):
        prev_equal.append(idx - 1 if idx and rows[idx - 1][0] == k and rows[idx - 1][2] == ln else None)
    nxt = [1] * len(rows)
    seq = []

    def rec():
        if len(seq) == n:
            yield tuple(seq)
            return
        for idx, (k, i, ln) in enumerate(rows):
            j = nxt[idx]
            if j > ln:
                continue
            if canonical_only and j == 1 and prev_equal[idx] is not None and nxt[prev_equal[idx]] == 1:
                continue
            nxt[idx] += 1
            seq.append((k, i, j))
            yield from rec()
            seq.pop()
            nxt[idx] -= 1

    return rec()


def enumerate_shuffles(jt):
    if count_shuffles(jt) > MAX_ENUM:
        raise EnumerationTooLarge("shuffle count exceeds 64 bits")
    return _enumerate(jt, canonical_only=False)


def canonicalize(jt, shuffle):
    """Relabel equal-length rows by order of first appearance."""
    check_shuffle(jt, shuffle)
    relabel = {}
    used = {}
    for k, i, j in shuffle:
        if j == 1:
            ln = jt.row_length(k, i)
            group = [ii for ii, x in enumerate(jt.blocks[k - 1][1], start=1) if x == ln]
            taken = used.setdefault((k, ln), 0)
            relabel[(k, i)] = group[taken]
            used[(k, ln)] = taken + 1
    return tuple((k, relabel[(k, i)], j) for k, i, j in shuffle)


def check_shuffle(jt, shuffle):
    expected = set(standard_shuffle(jt))
    if len(shuffle) != len(expected) or set(shuffle) != expected:
        raise TypeShapeMismatch("box sequence does not match the Jordan type")
    seen = {}
    for k, i, j in shuffle:
        if seen.get((k, i), 0) != j - 1:
            raise TypeShapeMismatch("a row is not listed in column order")
        seen[(k, i)] = j
    return shuffle


@dataclass(frozen=True)
class ShuffledJordanType:
    jt: JordanType
    shuffle: tuple

    def __post_init__(self):
        object.__setattr__(self, "shuffle", canonicalize(self.jt, tuple(tuple(b) for b in self.shuffle)))

    def position(self, box):
        return self.shuffle.index(box) + 1

    def labels(self):
        return [box_label(b) for b in self.shuffle]

    def eigenvalue_sequence(self):
        return tuple(self.jt.blocks[k - 1][0] for k, _, _ in self.shuffle)

    def to_json(self, field=None):
        return {"jordan_type": self.jt.to_json(field), "shuffle": self.labels()}

    def __str__(self):
        return " ".join(self.labels())


def enumerate_shuffled_jordan_types(jt):
    if count_shuffles(jt) > MAX_ENUM:
        raise EnumerationTooLarge("shuffle count exceeds 64 bits")
    for s in _enumerate(jt, canonical_only=True):
        yield ShuffledJordanType(jt, s)


def box_label(box):
    k, i, j = box
    return f"λ{k}:{i}.{j}"


_LABEL = re.compile(r"(?:λ|L|l)?(\d+):(\d+)\.(\d+)")


def parse_box(text):
    m = _LABEL.fullmatch(text.strip())
    if not m:
        raise ValueError(f"cannot parse box label {text!r}")
    return tuple(int(x) for x in m.groups())


# -- shuffled Jordan matrices ------------------------------------------------

def shuffled_matrix(jt, t, field):
    shuffle = t.shuffle if isinstance(t, ShuffledJordanType) else check_shuffle(jt, tuple(t))
    if isinstance(t, ShuffledJordanType) and t.jt.shape != jt.shape:
        raise TypeShapeMismatch("shuffled type has a different tableau shape")
    n = jt.n
    pos = {b: p for p, b in enumerate(shuffle)}
    rows = [[field.zero] * n for _ in range(n)]
    for (k, i, j), p in pos.items():
        rows[p][p] = field(jt.blocks[k - 1][0])
        nxt = pos.get((k, i, j + 1))
        if nxt is not None:
            rows[p][nxt] = field.one
    return ExactMatrix._raw(tuple(tuple(r) for r in rows), field)


def jw_set(phi):
    """All shuffled Jordan matrices with the Jordan type of phi."""
    jt = jordan_type(phi)
    return [shuffled_matrix(jt, t, phi.field) for t in enumerate_shuffled_jordan_types(jt)]


# -- invariant flags ---------------------------------------------------------

def flag_from_type(phi, t):
    jt, chains = jordan_chains(phi)
    if t.jt != jt:
        raise TypeShapeMismatch(f"type {t.jt.blocks} does not match Jordan type {jt.blocks}")
    vecs = [chains[k - 1][i - 1][j - 1] for k, i, j in t.shuffle]
    return Flag.from_basis(from_columns(vecs, phi.field))


def classify_invariant_flag(phi, f):
    """Shuffled Jordan type of a phi-invariant complete flag.

    In a basis adapted to the flag phi is upper triangular.  For each
    eigenvalue lam with nilpotent part nu on the generalized eigenspace E,
    a level i with diagonal entry lam is linked to the least level l such
    that nu(F_i & E) lies in (F_l & E) + nu(F_{i-1} & E); level 0 means the
    level starts a new Jordan chain.  Following links gives the rows of
    the tableau.  None of this depends on a choice of vectors.
    """
    if phi.nrows != f.n or phi.field != f.field:
        raise ShapeMismatch("matrix and flag do not match")
    if not is_invariant(phi, f):
        raise NotInvariant("phi does not preserve every step of the flag")
    jt = jordan_type(phi)
    field, n = phi.field, phi.nrows
    p = f.adapted_basis()
    a = p.inverse() @ phi @ p
    coord = [Subspace.coordinate(k, n, field) for k in range(n + 1)]
    box_at = [None] * (n + 1)
    for k, (lam, part) in enumerate(jt.blocks, start=1):
        nu = a - identity(n, field) * lam
        e = kernel(nu ** sum(part))
        levels = [i for i in range(1, n + 1) if a[i - 1, i - 1] == lam]
        inter = {0: Subspace.zero(n, field)}
        for i in range(1, n + 1):
            inter[i] = coord[i] & e
        link = {}
        for i in levels:
            img = inter[i].image(nu)
            base = inter[i - 1].image(nu)
            for ell in [0] + [x for x in levels if x < i]:
                if (inter[ell] + base).contains_subspace(img):
                    link[i] = ell
                    break
        succ = {}
        for i, ell in link.items():
            if ell:
                if ell in succ:
                    raise NotClassifiable("two levels continue the same chain")
                succ[ell] = i
        rows = []
        for i in levels:
            if link[i] == 0:
                row = [i]
                while row[-1] in succ:
                    row.append(succ[row[-1]])
                rows.append(row)
        if sorted((len(r) for r in rows), reverse=True) != list(part):
            raise NotClassifiable("chain lengths do not match the Jordan type")
        rows.sort(key=lambda r: (-len(r), r[0]))
        for ri, row in enumerate(rows, start=1):
            for j, lev in enumerate(row, start=1):
                box_at[lev] = (k, ri, j)
    return ShuffledJordanType(jt, tuple(box_at[1:]))


def _lines_mod(w, field):
    """Normalized representatives of the lines of F^n / w, supported off w's pivots."""
    comp = [j for j in range(w.n) if j not in set(w.pivots)]
    p = field.p
    for coeffs in itertools.product(range(p), repeat=len(comp)):
        nz = next((c for c in coeffs if c), 0)
        if nz != 1:
            continue
        v = [0] * w.n
        for j, c in zip(comp, coeffs):
            v[j] = c
        yield tuple(v)


def _flag_count(n, q):
    out = 1
    for k in range(1, n + 1):
        out *= (q ** k - 1) // (q - 1)
    return out


def invariant_flags_bruteforce(phi):
    """All phi-invariant complete flags over a prime field, by extending invariant chains."""
    field = phi.field
    if not field.is_finite():
        raise ValueError("brute force needs a finite field")
    n = phi.nrows
    check_budget(_flag_count(n, field.p), "flag enumeration")
    out = []

    def extend(steps):
        top = steps[-1] if steps else Subspace.zero(n, field)
        if top.dim == n:
            out.append(Flag(steps))
            return
        for v in _lines_mod(top, field):
            w = top + Subspace.span([v], field, n)
            if phi.apply(v) in w:
                extend(steps + [w])

    extend([])
    return out


def centralizer(phi):
    """All invertible psi with psi phi = phi psi, over a prime field."""
    field = phi.field
    if not field.is_finite():
        raise ValueError("enumeration needs a finite field")
    n = phi.nrows
    # unknown psi flattened row-major; (psi phi - phi psi)_{ab}
    eqs = []
    for a_ in range(n):
        for b in range(n):
            row = [0] * (n * n)
            for c in range(n):
                row[a_ * n + c] += phi[c, b]
                row[c * n + b] -= phi[a_, c]
            eqs.append([field(x) for x in row])
    basis = kernel(ExactMatrix._raw(tuple(tuple(r) for r in eqs), field)).basis
    check_budget(field.p ** len(basis), "centralizer enumeration")
    out = []
    p = field.p
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        flat = [0] * (n * n)
        for c, v in zip(coeffs, basis):
            if c:
                flat = [(x + c * y) % p for x, y in zip(flat, v)]
        m = ExactMatrix._raw(tuple(tuple(flat[r * n:(r + 1) * n]) for r in range(n)), field)
        if m.det() != 0:
            out.append(m)
    return out


def commuting_equivalence_classes(phi, flags, method="types"):
    """Partition flags (list of lists) under the centralizer of phi."""
    flags = list(flags)
    if method == "types":
        groups = {}
        for f in flags:
            groups.setdefault(classify_invariant_flag(phi, f), []).append(f)
        return list(groups.values())
    if method == "centralizer":
        from .flags import transport_flag
        cent = centralizer(phi)
        classes = []
        seen = set()
        for f in flags:
            if f in seen:
                continue
            orbit = {transport_flag(psi, f) for psi in cent}
            cls = [g for g in flags if g in orbit]
            seen.update(cls)
            classes.append(cls)
        return classes
    raise ValueError(f"unknown method {method!r}")


def split_jordan_types(n, q):
    """Jordan types of size n with eigenvalues in F_q^x."""
    def partitions(k, largest=None):
        largest = k if largest is None else largest
        if k == 0:
            yield ()
            return
        for first in range(min(k, largest), 0, -1):
            for rest in partitions(k - first, first):
                yield (first,) + rest

    def rec(lams, remaining):
        if remaining == 0:
            yield ()
            return
        if not lams:
            return
        lam, rest = lams[0], lams[1:]
        yield from rec(rest, remaining)
        for size in range(1, remaining + 1):
            for part in partitions(size):
                for tail in rec(rest, remaining - size):
                    yield ((lam, part),) + tail

    for blocks in rec(list(range(1, q)), n):
        yield JordanType(blocks)


def split_matrices(n, field):
    """All invertible matrices over a prime field with split characteristic polynomial."""
    for m in all_matrices(n, field, "G"):
        if eigenvalues(m) is not None:
            yield m
