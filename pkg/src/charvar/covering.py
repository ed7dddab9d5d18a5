"""Fibres of the map that forgets the flags at secondary marked points."""

from dataclasses import dataclass
from math import factorial, prod

from .errors import IndexOutOfRange
from .flags import standard_flag
from .jordan import (classify_invariant_flag, count_shuffled_jordan_types,
                     enumerate_shuffled_jordan_types, flag_from_type, jordan_type, jw_set)


def boundary_monodromy(rep, i):
    if not 1 <= i <= rep.surface.r:
        raise IndexOutOfRange(f"no secondary point {i}")
    return rep.N[i - 1]


@dataclass(frozen=True)
class FibrePoint:
    index: int
    monodromy: object
    jordan_type: object
    jw: tuple

    @property
    def size(self):
        return len(self.jw)


@dataclass(frozen=True)
class FibreDescription:
    n: int
    points: tuple

    @property
    def cardinality(self):
        return prod(p.size for p in self.points)

    @property
    def degree(self):
        return factorial(self.n) ** len(self.points)

    @property
    def generic(self):
        return self.cardinality == self.degree

    def to_json(self, field=None):
        return {"per_point": [{"jordan_type": p.jordan_type.to_json(field), "jw_count": p.size}
                              for p in self.points],
                "cardinality": self.cardinality, "generic": self.generic}


def fibre_over(rep):
    pts = []
    for i, N in enumerate(rep.N, start=1):
        pts.append(FibrePoint(i, N, jordan_type(N), tuple(jw_set(N))))
    return FibreDescription(rep.n, tuple(pts))


def fibre_cardinality(rep):
    """Product of shuffled Jordan type counts, without building the matrices."""
    return prod(count_shuffled_jordan_types(jordan_type(N)) for N in rep.N)


def is_branch_point(rep):
    return any(len(jt.blocks) < rep.n for jt in (jordan_type(N) for N in rep.N))


def fibre_position(rep):
    """Shuffled Jordan type of the standard flag at each secondary point,
    i.e. which element of the fibre the point itself is."""
    std = standard_flag(rep.n, rep.field)
    return tuple(classify_invariant_flag(N, std) for N in rep.N)


def fibre_flags(rep):
    """One invariant flag per shuffled type at each secondary point; choosing
    one flag per point gives the lifts of the point."""
    out = []
    for N in rep.N:
        jt = jordan_type(N)
        out.append([(t, flag_from_type(N, t)) for t in enumerate_shuffled_jordan_types(jt)])
    return out
