"""Points of the decorated representation variety as matrix tuples.

In the trivialized model every marked point carries the standard flag (and
frame), so a point is a tuple

    A_1..A_g, B_1..B_g   (alpha, beta cycles)
    M_1..M_l             (loops around unmarked boundaries)
    N_1..N_r             (boundary loops at secondary points, upper triangular)
    C_1..C_d, D_1..D_r   (connecting paths; C_1 = I if d > 0, else D_1 = I)
    T_ij                 (boundary segments of irregular boundaries)

subject to the single relation obtained from the groupoid presentation.
"""

from dataclasses import dataclass, replace
import random as _random

from .errors import (CannotEliminate, IndexOutOfRange, NoHoles, NotInBorel,
                     NothingToEliminate, PinningViolated, ShapeMismatch, WrongSubgroup)
from .exactfield import (ExactMatrix, field_from_json, field_to_json, identity,
                         mat_prod, random_matrix)
from .flags import relative_position, standard_flag, transport_flag
from .surface import GeneratorId, SurfaceType, check_segment, relation_factors

SLOT_OF_KIND = {"alpha": "A", "beta": "B", "gamma": "M", "delta": "N", "c": "C", "d": "D", "seg": "T"}

CLASSES = {"fi": "Fi", "fr": "Fr", "pfr": "PFr", "g": "G", "fullg": "G"}
# subgroup kind used at each marked point
CLASS_KIND = {"Fi": "B", "Fr": "U", "PFr": "PU", "G": "G"}


def decoration_class(name):
    key = str(name).lower()
    if key not in CLASSES:
        raise ValueError(f"unknown decoration class {name!r}")
    return CLASSES[key]


@dataclass(frozen=True)
class DecoratedRep:
    surface: SurfaceType
    field: object
    n: int
    A: tuple = ()
    B: tuple = ()
    M: tuple = ()
    N: tuple = ()
    C: tuple = ()
    D: tuple = ()
    T: tuple = ()

    def __post_init__(self):
        t = self.surface
        for name, size in (("A", t.g), ("B", t.g), ("M", t.l), ("N", t.r), ("C", t.d), ("D", t.r)):
            val = tuple(getattr(self, name))
            object.__setattr__(self, name, val)
            if len(val) != size:
                raise ShapeMismatch(f"{name} has {len(val)} entries, expected {size}")
        T = tuple(tuple(row) for row in self.T)
        object.__setattr__(self, "T", T)
        if tuple(len(row) for row in T) != t.m:
            raise ShapeMismatch("T does not match the primary point counts")
        for _, m in self.slots():
            if m is not None and (m.shape != (self.n, self.n) or m.field != self.field):
                raise ShapeMismatch("every slot is an n x n matrix over the same field")

    # slot access -----------------------------------------------------------
    def slot_ids(self):
        return slot_ids(self.surface)

    def slots(self):
        for gid in slot_ids(self.surface):
            yield gid, self[gid]

    def __getitem__(self, gid):
        if isinstance(gid, str):
            gid = GeneratorId.parse(gid)
        name = SLOT_OF_KIND[gid.kind]
        try:
            if gid.kind == "seg":
                return self.T[gid.i - 1][gid.j - 1]
            if gid.i < 1:
                raise IndexError
            return getattr(self, name)[gid.i - 1]
        except IndexError:
            raise IndexOutOfRange(f"{gid} is not a slot of {self.surface}") from None

    def with_slot(self, gid, value):
        if isinstance(gid, str):
            gid = GeneratorId.parse(gid)
        self[gid]  # range check
        if gid.kind == "seg":
            T = [list(row) for row in self.T]
            T[gid.i - 1][gid.j - 1] = value
            return replace(self, T=tuple(tuple(r) for r in T))
        name = SLOT_OF_KIND[gid.kind]
        vals = list(getattr(self, name))
        vals[gid.i - 1] = value
        return replace(self, **{name: tuple(vals)})

    def assignment(self):
        return {gid: m for gid, m in self.slots()}

    def key(self):
        return tuple(m.rows for _, m in self.slots())

    def pinned_slot(self):
        return pinned_slot(self.surface)

    # serialization -----------------------------------------------------------
    def to_json(self):
        def mats(xs):
            return [m.to_json() if m is not None else None for m in xs]
        return {"surface": self.surface.to_json(), "n": self.n, "field": field_to_json(self.field),
                "A": mats(self.A), "B": mats(self.B), "M": mats(self.M), "N": mats(self.N),
                "C": mats(self.C), "D": mats(self.D), "T": [mats(row) for row in self.T]}

    @classmethod
    def from_json(cls, obj):
        t = SurfaceType.from_json(obj["surface"])
        field = field_from_json(obj["field"])

        def mats(xs):
            return tuple(ExactMatrix(m, field) if m is not None else None for m in xs)
        return cls(t, field, int(obj["n"]), mats(obj.get("A", [])), mats(obj.get("B", [])),
                   mats(obj.get("M", [])), mats(obj.get("N", [])), mats(obj.get("C", [])),
                   mats(obj.get("D", [])), tuple(mats(row) for row in obj.get("T", [])))


def slot_ids(t):
    out = [GeneratorId(k, i) for i in range(1, t.g + 1) for k in ("alpha", "beta")]
    out += [GeneratorId("gamma", i) for i in range(1, t.l + 1)]
    out += [GeneratorId("delta", i) for i in range(1, t.r + 1)]
    out += [GeneratorId("c", i) for i in range(1, t.d + 1)]
    out += [GeneratorId("d", i) for i in range(1, t.r + 1)]
    out += [GeneratorId("seg", i, j) for i, mi in enumerate(t.m, start=1) for j in range(1, mi + 1)]
    return out


def pinned_slot(t):
    t.check()
    return GeneratorId("c", 1) if t.d else GeneratorId("d", 1)


def identity_rep(t, n, field):
    t.check()
    one = identity(n, field)
    return DecoratedRep(t, field, n, (one,) * t.g, (one,) * t.g, (one,) * t.l, (one,) * t.r,
                        (one,) * t.d, (one,) * t.r, tuple((one,) * mi for mi in t.m))


# -- the relation ------------------------------------------------------------

def relation_terms(rep):
    """(slot, exponent) pairs of the relation in product order."""
    return [(GeneratorId(k, i, j), e) for k, i, j, e in relation_factors(rep.surface)]


def relation_product(rep):
    mats = []
    for gid, e in relation_terms(rep):
        m = rep[gid]
        mats.append(m.inverse() if e == -1 else m)
    return mat_prod(mats, rep.n, rep.field)


def verify_relation(rep):
    try:
        return relation_product(rep) == identity(rep.n, rep.field)
    except Exception:
        return False


def is_pinned(rep):
    return rep[pinned_slot(rep.surface)] == identity(rep.n, rep.field)


def is_valid(rep):
    """Relation, pinning, invertibility and the Borel condition on N."""
    return (all(m.is_invertible() for _, m in rep.slots())
            and all(x.is_borel() for x in rep.N)
            and is_pinned(rep) and verify_relation(rep))


def solve_for(rep, target):
    """Recompute one M, N or T slot so that the relation holds."""
    if isinstance(target, str):
        target = GeneratorId.parse(target)
    if target.kind not in ("gamma", "delta", "seg"):
        raise CannotEliminate(f"the relation cannot be solved for {target}")
    rep[target]
    x = solve_for_unchecked(rep, target)
    if target.kind == "delta" and not x.is_upper_triangular():
        raise NotInBorel(f"solved {target} is not upper triangular")
    return rep.with_slot(target, x)


def default_dependent(t):
    t.check()
    if t.d:
        return GeneratorId("seg", t.d, t.m[-1])
    if t.l:
        return GeneratorId("gamma", t.l)
    return GeneratorId("delta", t.r)


def slot_inventory(t, dependent=None):
    """Which slots the sampler draws from G, which from B, and which one is solved."""
    t.check()
    dep = dependent or default_dependent(t)
    pin = pinned_slot(t)
    G, B = [], []
    for gid in slot_ids(t):
        if gid in (dep, pin):
            continue
        (B if gid.kind == "delta" else G).append(gid)
    return {"G": G, "B": B, "pinned": pin, "dependent": dep}


def free_parameter_count(t, n, dependent=None):
    """Scalar parameters in the sampler's inventory; a solved N slot costs its
    off-Borel codimension."""
    inv = slot_inventory(t, dependent)
    b = n * (n + 1) // 2
    count = len(inv["G"]) * n * n + len(inv["B"]) * b
    if inv["dependent"].kind == "delta":
        count -= n * n - b
    return count


def sample_random(t, n, field, seed=None, dependent=None, max_tries=10000):
    """Random point over the given field, deterministic in ``seed``.

    Free slots are drawn from GL_n or B; the dependent slot is solved from
    the relation.  When only N slots are solvable (no M and no T), the
    solved N is made triangular by conjugating with a basis adapted to one
    of its invariant flags, redrawing while its spectrum does not split.
    """
    t.check()
    rng = seed if isinstance(seed, _random.Random) else _random.Random(seed)
    inv = slot_inventory(t, dependent)
    dep = inv["dependent"]
    one = identity(n, field)
    for _ in range(max_tries):
        rep = identity_rep(t, n, field)
        for gid in inv["G"]:
            rep = rep.with_slot(gid, random_matrix(n, field, rng, "G"))
        for gid in inv["B"]:
            rep = rep.with_slot(gid, random_matrix(n, field, rng, "B"))
        if dep.kind != "delta":
            return solve_for(rep, dep)
        try:
            return solve_for(rep, dep)
        except NotInBorel:
            pass
        fixed = _triangularize_dependent(rep, dep, rng)
        if fixed is not None:
            return fixed
    raise RuntimeError("could not draw a point within the attempt limit")


def _triangularize_dependent(rep, dep, rng):
    from .errors import EigenvaluesNotInField
    from .jordan import enumerate_shuffled_jordan_types, flag_from_type, jordan_type
    n, field = rep.n, rep.field
    d_slot = GeneratorId("d", dep.i)
    # z is the required value of D^-1 N D
    z = solve_for_unchecked(rep, dep)
    z = rep[d_slot].inverse() @ z @ rep[d_slot]
    try:
        jt = jordan_type(z)
    except EigenvaluesNotInField:
        return None
    types = list(enumerate_shuffled_jordan_types(jt))
    f = flag_from_type(z, types[rng.randrange(len(types))])
    p = f.adapted_basis()
    b = random_matrix(n, field, rng, "B")
    x0 = b @ p.inverse()
    if d_slot == pinned_slot(rep.surface):
        # conjugate the whole point; D_1 = I survives because x_1 = x0
        x = MixedGroupElement.identity(rep.surface, n, field)
        x = x.with_point(("s", dep.i), x0)
        out = mixed_conjugate(x, rep.with_slot(dep, z), "G")
    else:
        # D^-1 N D = z with N = x0 z x0^-1 and D = x0
        out = rep.with_slot(dep, x0 @ z @ x0.inverse()).with_slot(d_slot, x0)
    assert out[dep].is_borel() and verify_relation(out)
    return out


def solve_for_unchecked(rep, target):
    """Value of ``target`` forced by the relation L * target * R = I, namely L^-1 R^-1."""
    terms = relation_terms(rep)
    k = next(idx for idx, (gid, _) in enumerate(terms) if gid == target)
    mats = [rep[g].inverse() if e == -1 else rep[g] for g, e in terms]
    left = mat_prod(mats[:k], rep.n, rep.field)
    right = mat_prod(mats[k + 1:], rep.n, rep.field)
    return left.inverse() @ right.inverse()


# -- mixed conjugation -------------------------------------------------------

class MixedGroupElement:
    """One matrix per marked point (primary (i, j) and secondary i) plus the
    basepoint factor x0.  Without the hatted variant x0 is the factor at the
    pinned point."""
    __slots__ = ("surface", "n", "field", "primary", "secondary", "x0")

    def __init__(self, surface, n, field, primary, secondary, x0=None):
        self.surface = surface
        self.n = n
        self.field = field
        self.primary = tuple(tuple(row) for row in primary)
        self.secondary = tuple(secondary)
        self.x0 = x0
        if tuple(len(r) for r in self.primary) != surface.m or len(self.secondary) != surface.r:
            raise ShapeMismatch("group element does not match the marked points")

    @classmethod
    def identity(cls, t, n, field):
        one = identity(n, field)
        return cls(t, n, field, [[one] * mi for mi in t.m], [one] * t.r)

    @classmethod
    def random(cls, t, n, field, cls_name, rng, hatted=False):
        kind = CLASS_KIND[decoration_class(cls_name)]
        prim = [[random_matrix(n, field, rng, kind) for _ in range(mi)] for mi in t.m]
        sec = [random_matrix(n, field, rng, kind) for _ in range(t.r)]
        x0 = random_matrix(n, field, rng, "G") if hatted else None
        return cls(t, n, field, prim, sec, x0)

    def points(self):
        for i, row in enumerate(self.primary, start=1):
            for j, m in enumerate(row, start=1):
                yield ("p", i, j), m
        for i, m in enumerate(self.secondary, start=1):
            yield ("s", i), m

    def at(self, point):
        if point[0] == "p":
            return self.primary[point[1] - 1][point[2] - 1]
        return self.secondary[point[1] - 1]

    def with_point(self, point, m):
        prim = [list(r) for r in self.primary]
        sec = list(self.secondary)
        if point[0] == "p":
            prim[point[1] - 1][point[2] - 1] = m
        else:
            sec[point[1] - 1] = m
        return MixedGroupElement(self.surface, self.n, self.field, prim, sec, self.x0)

    def basepoint_factor(self):
        if self.x0 is not None:
            return self.x0
        t = self.surface
        return self.primary[0][0] if t.d else self.secondary[0]

    def __matmul__(self, other):
        prim = [[a @ b for a, b in zip(r1, r2)] for r1, r2 in zip(self.primary, other.primary)]
        sec = [a @ b for a, b in zip(self.secondary, other.secondary)]
        x0 = None
        if self.x0 is not None or other.x0 is not None:
            x0 = self.basepoint_factor() @ other.basepoint_factor()
        return MixedGroupElement(self.surface, self.n, self.field, prim, sec, x0)

    def inverse(self):
        prim = [[a.inverse() for a in r] for r in self.primary]
        sec = [a.inverse() for a in self.secondary]
        x0 = self.x0.inverse() if self.x0 is not None else None
        return MixedGroupElement(self.surface, self.n, self.field, prim, sec, x0)

    def in_class(self, cls_name):
        test = _MEMBERSHIP[CLASS_KIND[decoration_class(cls_name)]]
        return all(test(m) for _, m in self.points())

    def to_json(self):
        out = {"primary": {f"{i}_{j}": m.to_json() for (_, i, j), m in
                           ((p, m) for p, m in self.points() if p[0] == "p")},
               "secondary": {str(p[1]): m.to_json() for p, m in self.points() if p[0] == "s"}}
        if self.x0 is not None:
            out["x0"] = self.x0.to_json()
        return out

    @classmethod
    def from_json(cls, obj, t, n, field):
        x = cls.identity(t, n, field)
        for key, m in obj.get("primary", {}).items():
            i, j = (int(v) for v in key.split("_"))
            x = x.with_point(("p", i, j), ExactMatrix(m, field))
        for key, m in obj.get("secondary", {}).items():
            x = x.with_point(("s", int(key)), ExactMatrix(m, field))
        if obj.get("x0") is not None:
            x.x0 = ExactMatrix(obj["x0"], field)
        return x


_MEMBERSHIP = {
    "B": lambda m: m.is_borel(),
    "U": lambda m: m.is_unipotent_upper(),
    "PU": lambda m: m.is_scalar_unipotent() and m.is_invertible(),
    "G": lambda m: m.is_invertible(),
}


def mixed_conjugate(x, rep, cls="Fi", hatted=False):
    """Act on a point: each path matrix becomes x_target * matrix * x_source^-1."""
    if x.surface != rep.surface or x.n != rep.n or x.field != rep.field:
        raise ShapeMismatch("group element and point do not match")
    if not x.in_class(cls):
        raise WrongSubgroup(f"group element is not in the {decoration_class(cls)} subgroup")
    t = rep.surface
    if hatted:
        if x.x0 is None:
            raise PinningViolated("the hatted action needs a basepoint factor x0")
        x0 = x.x0
    else:
        pin = x.primary[0][0] if t.d else x.secondary[0]
        if x.x0 is not None and x.x0 != pin:
            raise PinningViolated("x0 must equal the factor at the pinned basepoint")
        x0 = pin
    x0i = x0.inverse()

    def conj(m):
        return x0 @ m @ x0i

    A = tuple(conj(m) for m in rep.A)
    B = tuple(conj(m) for m in rep.B)
    M = tuple(conj(m) for m in rep.M)
    N = tuple(xi @ m @ xi.inverse() for xi, m in zip(x.secondary, rep.N))
    C = tuple(row[0] @ m @ x0i for row, m in zip(x.primary, rep.C))
    D = tuple(xi @ m @ x0i for xi, m in zip(x.secondary, rep.D))
    T = tuple(tuple(row[j % len(row)] @ m @ row[j - 1].inverse() for j, m in enumerate(trow, start=1))
              for row, trow in zip(x.primary, rep.T))
    return DecoratedRep(t, rep.field, rep.n, A, B, M, N, C, D, T)


# -- dimensions --------------------------------------------------------------

DIM_OBJECTS = ("RepVariety", "RepVarietyHat", "LocFi", "LocFr", "LocPFr", "MonSpace", "Hom")


def dims(t, n, obj):
    if t.s == 0:
        raise NoHoles("dimension formulas need at least one boundary circle")
    g, s, m, r = t.g, t.s, t.m_tot, t.r
    b2 = r * (n * n + n)          # twice r * dim B
    if obj == "RepVariety":
        return n * n * (2 * g + s + m - 2) + b2 // 2
    if obj == "RepVarietyHat":
        return n * n * (2 * g + s + m - 1) + b2 // 2
    if obj in ("LocFi", "LocFr", "LocPFr"):
        # RepVariety minus (m + r) copies of the structure group K, where
        # dim K = dim B - nu.  This gives + r * nu; the sign in front of the
        # r term of the closed form is taken from this count.
        nu = {"LocFi": 0, "LocFr": n, "LocPFr": n - 1}[obj]
        return (2 * g + s - 2) * n * n + m * (n * n - n + 2 * nu) // 2 + r * nu
    if obj == "MonSpace":
        return n * n * (2 * g + s - 1)
    if obj == "Hom":
        return n * n * (2 * g + s + m + r - 2)
    raise ValueError(f"unknown object {obj!r}")


def dims_report(t, n, obj):
    value = dims(t, n, obj)
    return {"object": obj, "dim": value, "negative": value < 0}


# -- relative position on segments -------------------------------------------

def adjacent_position(rep, segment):
    check_segment(rep.surface, segment)
    i, j = segment
    std = standard_flag(rep.n, rep.field)
    return relative_position(transport_flag(rep.T[i - 1][j - 1], std), std)


def stratum(rep):
    return [adjacent_position(rep, (i, j)) for i, mi in enumerate(rep.surface.m, start=1)
            for j in range(1, mi + 1)]


# -- monodromy data (single basepoint) ---------------------------------------

@dataclass(frozen=True)
class MonodromyData:
    A: tuple
    B: tuple
    M: tuple

    @property
    def g(self):
        return len(self.A)

    @property
    def s(self):
        return len(self.M)


def monodromy_product(md, n=None, field=None):
    mats = []
    for a, b in reversed(list(zip(md.A, md.B))):
        mats += [a, b, a.inverse(), b.inverse()]
    mats += list(reversed(md.M))
    some = (md.A or md.M or (None,))[0]
    if some is None and n is None:
        raise ValueError("empty monodromy data needs a size")
    return mat_prod(mats, n or some.nrows, field or some.field)


def verify_monodromy_data(md):
    p = monodromy_product(md)
    return p == identity(p.nrows, p.field)


def eliminate_mono(md, index=None):
    """Fill in M[index] (default the last; None entries mark the gap)."""
    if not md.M:
        raise NothingToEliminate("there are no boundary loops to solve for")
    if index is None:
        gaps = [k for k, m in enumerate(md.M, start=1) if m is None]
        index = gaps[0] if gaps else len(md.M)
    if not 1 <= index <= len(md.M):
        raise IndexOutOfRange(f"no boundary loop {index}")
    some = next(m for m in list(md.A) + list(md.M) if m is not None)
    n, field = some.nrows, some.field
    mats = []
    for a, b in reversed(list(zip(md.A, md.B))):
        mats += [a, b, a.inverse(), b.inverse()]
    k = len(mats) + (len(md.M) - index)
    mats += list(reversed(md.M))
    left = mat_prod(mats[:k], n, field)
    right = mat_prod(mats[k + 1:], n, field)
    M = list(md.M)
    M[index - 1] = left.inverse() @ right.inverse()
    return MonodromyData(md.A, md.B, tuple(M))


def monodromy_from_rep(rep):
    """Boundary loops at the basepoint, numbered so that the monodromy
    relation is the relation of the point: irregular loops C_i^-1 (prod T) C_i
    first, then D_i^-1 N_i D_i, then the M_i."""
    M = [C.inverse() @ mat_prod(list(reversed(row))) @ C for C, row in zip(rep.C, rep.T)]
    M += [D.inverse() @ N @ D for N, D in zip(rep.N, rep.D)]
    M += list(rep.M)
    return MonodromyData(rep.A, rep.B, tuple(M))
