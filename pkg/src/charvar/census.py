"""Brute-force orbit counts over small finite fields."""

from dataclasses import dataclass, asdict, field as dc_field
import itertools
import json
import time

from .errors import CannotEliminate, check_budget
from .exactfield import GF, all_matrices, diag, elementary, group_order, identity
from .jordan import (commuting_equivalence_classes, count_shuffled_jordan_types,
                     enumerate_shuffled_jordan_types, invariant_flags_bruteforce, jordan_type,
                     shuffled_matrix, split_jordan_types, split_matrices)
from .repvar import (CLASS_KIND, DecoratedRep, MixedGroupElement, decoration_class,
                     default_dependent, mixed_conjugate, pinned_slot, slot_ids, solve_for_unchecked)
from .surface import GeneratorId


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def count(self):
        return sum(1 for k in range(len(self.parent)) if self.find(k) == k)


@dataclass
class CensusReport:
    n: int
    q: int
    surface: str
    decoration: str
    method: str
    total_points: int
    orbits: int
    eliminated: str = ""
    wall_time: float = 0.0
    extra: dict = dc_field(default_factory=dict)

    def to_json(self):
        return asdict(self)

    def append_to(self, path):
        with open(path, "a") as fh:
            fh.write(json.dumps(self.to_json()) + "\n")


def admissible_eliminations(t):
    """Slots that can be solved from the relation."""
    return [g for g in slot_ids(t) if g.kind in ("gamma", "delta", "seg")]


def _build(t, n, field, values):
    one = identity(n, field)
    get = lambda gid: values.get(gid, one)
    return DecoratedRep(
        t, field, n,
        [get(GeneratorId("alpha", i)) for i in range(1, t.g + 1)],
        [get(GeneratorId("beta", i)) for i in range(1, t.g + 1)],
        [get(GeneratorId("gamma", i)) for i in range(1, t.l + 1)],
        [get(GeneratorId("delta", i)) for i in range(1, t.r + 1)],
        [get(GeneratorId("c", i)) for i in range(1, t.d + 1)],
        [get(GeneratorId("d", i)) for i in range(1, t.r + 1)],
        [[get(GeneratorId("seg", i, j)) for j in range(1, mi + 1)] for i, mi in enumerate(t.m, start=1)])


def count_points_bound(t, n, q, eliminate=None, borel=True):
    elim = eliminate or default_dependent(t)
    pin = pinned_slot(t)
    size = 1
    for gid in slot_ids(t):
        if gid in (elim, pin):
            continue
        size *= group_order(n, q, "B" if (gid.kind == "delta" and borel) else "G")
    return size


def enumerate_points(t, n, q, eliminate=None, borel=True):
    """Every point of the representation variety over F_q, each exactly once.

    The ``eliminate`` slot is solved from the relation; with ``borel`` False
    the N slots range over all of GL_n (the undecorated Hom space).
    """
    t.check()
    if isinstance(eliminate, str):
        eliminate = GeneratorId.parse(eliminate)
    elim = eliminate or default_dependent(t)
    if elim not in admissible_eliminations(t):
        raise CannotEliminate(f"cannot eliminate {elim}")
    check_budget(count_points_bound(t, n, q, elim, borel), "point enumeration")
    field = GF(q)
    pin = pinned_slot(t)
    free = [g for g in slot_ids(t) if g not in (elim, pin)]
    G = list(all_matrices(n, field, "G"))
    B = list(all_matrices(n, field, "B")) if borel else G
    domains = [B if g.kind == "delta" else G for g in free]
    for combo in itertools.product(*domains):
        values = dict(zip(free, combo))
        rep = _build(t, n, field, values)
        x = solve_for_unchecked(rep, elim)
        if elim.kind == "delta" and borel and not x.is_upper_triangular():
            continue
        yield rep.with_slot(elim, x)


def group_generators(n, field, kind):
    """Generators of B, U, scalar*U or GL_n over a prime field."""
    w = field.primitive_root()
    gens = []
    for i in range(n):
        for j in range(n):
            if i < j or (kind == "G" and i != j):
                gens.append(elementary(n, i, j, 1, field))
    if kind == "B":
        for k in range(n):
            gens.append(diag([w if a == k else 1 for a in range(n)], field))
    elif kind == "PU":
        gens.append(diag([w] * n, field))
    elif kind == "G":
        gens.append(diag([w] + [1] * (n - 1), field))
    return [g for g in gens if g != identity(n, field)]


def _marked_points(t):
    return [("p", i, j) for i, mi in enumerate(t.m, start=1) for j in range(1, mi + 1)] + \
           [("s", i) for i in range(1, t.r + 1)]


def _points_and_index(points):
    points = list(points)
    index = {}
    for k, rep in enumerate(points):
        index.setdefault(rep.key(), k)
    assert len(index) == len(points), "enumeration produced a duplicate point"
    return points, index


def orbit_count(t, n, q, cls="Fi", method="orbits", eliminate=None):
    start = time.perf_counter()
    cls = decoration_class(cls)
    kind = CLASS_KIND[cls]
    field = GF(q)
    borel = cls != "G"
    points, index = _points_and_index(enumerate_points(t, n, q, eliminate, borel))
    if method == "orbits":
        orbits = _orbits_union_find(t, n, field, kind, cls, points, index)
    elif method == "burnside":
        orbits = _orbits_burnside(t, n, field, kind, cls, points, index)
    else:
        raise ValueError(f"unknown method {method!r}")
    elim = eliminate or default_dependent(t)
    return CensusReport(n, q, str(t), cls, method, len(points), orbits, str(elim),
                        time.perf_counter() - start)


def _orbits_union_find(t, n, field, kind, cls, points, index):
    uf = _UnionFind(len(points))
    one = MixedGroupElement.identity(t, n, field)
    moves = [one.with_point(pt, h) for pt in _marked_points(t)
             for h in group_generators(n, field, kind)]
    for k, rep in enumerate(points):
        for x in moves:
            uf.union(k, index[mixed_conjugate(x, rep, cls).key()])
    return uf.count()


def _orbits_burnside(t, n, field, kind, cls, points, index):
    pts = _marked_points(t)
    group = list(all_matrices(n, field, kind))
    order = len(group) ** len(pts)
    check_budget(order * max(1, len(points)), "Burnside sum")
    one = MixedGroupElement.identity(t, n, field)
    fixed = 0
    for combo in itertools.product(group, repeat=len(pts)):
        x = one
        for pt, h in zip(pts, combo):
            x = x.with_point(pt, h)
        fixed += sum(1 for rep in points if mixed_conjugate(x, rep, cls).key() == rep.key())
    assert fixed % order == 0
    return fixed // order


def monodromy_orbit_count(g, s, n, q):
    """Orbits of simultaneous conjugation on Hom(pi_1(surface, p0), GL_n(F_q)),
    which is free on 2g + s - 1 generators."""
    field = GF(q)
    k = 2 * g + s - 1
    check_budget(group_order(n, q) ** k, "monodromy enumeration")
    G = list(all_matrices(n, field, "G"))
    tuples = list(itertools.product(G, repeat=k))
    index = {tuple(m.rows for m in tup): a for a, tup in enumerate(tuples)}
    uf = _UnionFind(len(tuples))
    for h in group_generators(n, field, "G"):
        hi = h.inverse()
        for a, tup in enumerate(tuples):
            uf.union(a, index[tuple((h @ m @ hi).rows for m in tup)])
    return uf.count()


@dataclass
class BConjugacyReport:
    n: int
    q: int
    classes: int
    jw_count: int
    one_jw_per_class: bool

    def as_tuple(self):
        return (self.classes, self.jw_count)


def b_conjugacy_census(n, q):
    """B-conjugacy classes in B(F_q) against shuffled Jordan matrices over F_q."""
    field = GF(q)
    check_budget(group_order(n, q, "B"), "Borel enumeration")
    B = list(all_matrices(n, field, "B"))
    index = {b.rows: k for k, b in enumerate(B)}
    uf = _UnionFind(len(B))
    for h in group_generators(n, field, "B"):
        hi = h.inverse()
        for k, b in enumerate(B):
            uf.union(k, index[(h @ b @ hi).rows])
    classes = uf.count()
    jw = []
    for jt in split_jordan_types(n, q):
        jw += [shuffled_matrix(jt, t, field) for t in enumerate_shuffled_jordan_types(jt)]
    assert len(jw) == sum(count_shuffled_jordan_types(jt) for jt in split_jordan_types(n, q))
    roots = [uf.find(index[m.rows]) for m in jw]
    one_each = len(set(roots)) == len(roots) == classes
    return BConjugacyReport(n, q, classes, len(jw), one_each)


def invariant_flag_census(n, q, cross_check=True, matrices=None):
    """For each split phi in GL_n(F_q): classes of invariant flags under the
    centralizer against the number of shuffled Jordan types."""
    field = GF(q)
    checked, mismatches = 0, []
    for phi in (matrices if matrices is not None else split_matrices(n, field)):
        jt = jordan_type(phi)
        flags = invariant_flags_bruteforce(phi)
        by_type = commuting_equivalence_classes(phi, flags, "types")
        ok = len(by_type) == count_shuffled_jordan_types(jt)
        if ok and cross_check:
            by_cent = commuting_equivalence_classes(phi, flags, "centralizer")
            ok = {frozenset(c) for c in by_type} == {frozenset(c) for c in by_cent}
        checked += 1
        if not ok:
            mismatches.append(phi.to_json())
    return {"n": n, "q": q, "checked": checked, "mismatches": mismatches, "ok": not mismatches}


def _census_chunk(args):
    n, q, rows_list, cross_check = args
    from .exactfield import ExactMatrix
    field = GF(q)
    mats = [ExactMatrix._raw(rows, field) for rows in rows_list]
    return invariant_flag_census(n, q, cross_check, mats)


def invariant_flag_census_parallel(n, q, jobs=1, cross_check=True):
    if jobs <= 1:
        return invariant_flag_census(n, q, cross_check)
    from concurrent.futures import ProcessPoolExecutor
    mats = [m.rows for m in split_matrices(n, GF(q))]
    chunks = [mats[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(jobs) as pool:
        parts = list(pool.map(_census_chunk, [(n, q, c, cross_check) for c in chunks]))
    mismatches = [m for p in parts for m in p["mismatches"]]
    return {"n": n, "q": q, "checked": sum(p["checked"] for p in parts),
            "mismatches": mismatches, "ok": not mismatches}
