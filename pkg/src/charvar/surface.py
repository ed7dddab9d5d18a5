"""Surfaces with marked boundary and a finite presentation of their
discrete fundamental groupoid.

Boundary circles are numbered simple 1..l, regular 1..r, irregular 1..d.
Each regular circle carries one secondary point ``s_i``; irregular circle i
carries primary points ``p_{i,1}, ..., p_{i,m_i}`` in positive order.

Words are written in the composition order of paths, ``a * b`` meaning
"first b, then a", which is also the order of the matrix product.
"""

from dataclasses import dataclass, field as dc_field
import re

from .errors import (CannotEliminate, InvalidBasepoint, InvalidSegment, NoHoles,
                     NoMarkedPoints, NotComposable)


@dataclass(frozen=True)
class SurfaceType:
    g: int = 0
    l: int = 0
    r: int = 0
    d: int = 0
    m: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        for name in ("g", "l", "r", "d"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if len(self.m) != self.d:
            raise ValueError(f"m has {len(self.m)} entries but d = {self.d}")
        if any(x < 1 for x in self.m):
            raise ValueError("every irregular boundary carries at least one primary point")

    @property
    def s(self):
        return self.l + self.r + self.d

    @property
    def m_tot(self):
        return sum(self.m)

    @property
    def num_marked(self):
        return self.m_tot + self.r

    def check(self):
        if self.s == 0:
            raise NoHoles("surface has no boundary circles")
        if self.num_marked == 0:
            raise NoMarkedPoints("surface has no marked points")
        return self

    def marked_points(self):
        pts = [MarkedPoint.primary(i + 1, j + 1) for i, mi in enumerate(self.m) for j in range(mi)]
        pts += [MarkedPoint.secondary(i + 1) for i in range(self.r)]
        return pts

    def default_basepoint(self):
        self.check()
        return MarkedPoint.primary(1, 1) if self.d else MarkedPoint.secondary(1)

    def to_json(self):
        return {"g": self.g, "l": self.l, "r": self.r, "d": self.d, "m": list(self.m)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj.get("g", 0)), int(obj.get("l", 0)), int(obj.get("r", 0)),
                   int(obj.get("d", len(obj.get("m", [])))), tuple(obj.get("m", ())))

    @classmethod
    def parse(cls, text):
        """Parse 'g=1,l=0,r=1,m=2:1' style strings (d defaults to len(m))."""
        vals = {}
        for part in re.split(r"[,;\s]+", text.strip()):
            if not part:
                continue
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "m":
                vals["m"] = tuple(int(x) for x in re.split(r"[:/]", value) if x)
            elif key in ("g", "l", "r", "d"):
                vals[key] = int(value)
            else:
                raise ValueError(f"unknown surface field {key!r}")
        vals.setdefault("m", ())
        vals.setdefault("d", len(vals["m"]))
        return cls(**vals)

    def __str__(self):
        m = ":".join(str(x) for x in self.m)
        return f"g={self.g},l={self.l},r={self.r},d={self.d},m={m}"


@dataclass(frozen=True, order=True)
class MarkedPoint:
    kind: str        # "primary" or "secondary"
    i: int
    j: int = 0

    @classmethod
    def primary(cls, i, j):
        return cls("primary", i, j)

    @classmethod
    def secondary(cls, i):
        return cls("secondary", i, 0)

    @property
    def is_primary(self):
        return self.kind == "primary"

    def validate(self, t):
        if self.is_primary:
            ok = 1 <= self.i <= t.d and 1 <= self.j <= t.m[self.i - 1]
        else:
            ok = 1 <= self.i <= t.r
        if not ok:
            raise InvalidBasepoint(f"{self} is not a marked point of {t}")
        return self

    def __str__(self):
        return f"p{self.i}_{self.j}" if self.is_primary else f"s{self.i}"

    def to_json(self):
        return str(self)

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"p(\d+)_(\d+)", text.strip())
        if m:
            return cls.primary(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"s(\d+)", text.strip())
        if m:
            return cls.secondary(int(m.group(1)))
        raise ValueError(f"cannot parse marked point {text!r}")

    from_json = parse


_PREFIX = {"alpha": "a", "beta": "b", "gamma": "g", "delta": "n", "seg": "t", "c": "c", "d": "d"}
_KIND = {v: k for k, v in _PREFIX.items()}


@dataclass(frozen=True)
class GeneratorId:
    kind: str
    i: int
    j: int = 0
    source: MarkedPoint = dc_field(default=None, compare=False, repr=False)
    target: MarkedPoint = dc_field(default=None, compare=False, repr=False)

    @property
    def name(self):
        base = f"{_PREFIX[self.kind]}{self.i}"
        return f"{base}_{self.j}" if self.kind == "seg" else base

    def __str__(self):
        return self.name

    @property
    def solvable(self):
        """The relation can be solved for this generator."""
        return self.kind in ("gamma", "delta", "seg")

    @classmethod
    def parse(cls, text):
        text = text.strip()
        m = re.fullmatch(r"t(\d+)_(\d+)", text)
        if m:
            return cls("seg", int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"([abgncd])(\d+)", text)
        if m:
            return cls(_KIND[m.group(1)], int(m.group(2)))
        raise ValueError(f"cannot parse generator {text!r}")


class PathWord:
    """Reduced-or-not word in the generators, letters in composition order."""
    __slots__ = ("letters", "basepoint")

    def __init__(self, letters=(), basepoint=None):
        letters = tuple((g, int(e)) for g, e in letters)
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError("exponents are +1 or -1")
        for (a, ea), (b, eb) in zip(letters, letters[1:]):
            if _src(a, ea) != _tgt(b, eb):
                raise NotComposable(f"{a}^{ea} cannot follow {b}^{eb}")
        if not letters and basepoint is None:
            raise ValueError("the empty word needs a basepoint")
        self.letters = letters
        self.basepoint = basepoint if not letters else None

    @property
    def source(self):
        if not self.letters:
            return self.basepoint
        g, e = self.letters[-1]
        return _src(g, e)

    @property
    def target(self):
        if not self.letters:
            return self.basepoint
        g, e = self.letters[0]
        return _tgt(g, e)

    def is_closed(self):
        return self.source == self.target

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        if not isinstance(other, PathWord):
            return NotImplemented
        return self.letters == other.letters and self.source == other.source

    def __hash__(self):
        return hash((self.letters, self.source))

    def reduced(self):
        out = []
        for g, e in self.letters:
            if out and out[-1][0] == g and out[-1][1] == -e:
                out.pop()
            else:
                out.append((g, e))
        return PathWord(out, basepoint=self.source)

    def __str__(self):
        if not self.letters:
            return f"1@{self.basepoint}"
        return " ".join(g.name if e == 1 else f"{g.name}^-1" for g, e in self.letters)

    def to_json(self):
        return [[g.name, e] for g, e in self.letters]

    def evaluate(self, assignment, one=None):
        """Product of assigned matrices (exponent -1 uses the inverse)."""
        out = one
        for g, e in self.letters:
            m = assignment[g]
            if e == -1:
                m = m.inverse()
            out = m if out is None else out @ m
        return out


def _src(g, e):
    return g.source if e == 1 else g.target


def _tgt(g, e):
    return g.target if e == 1 else g.source


def word_compose(a, b):
    """a after b."""
    if a.source != b.target:
        raise NotComposable(f"source {a.source} != target {b.target}")
    return PathWord(a.letters + b.letters, basepoint=b.source).reduced()


def word_inverse(a):
    return PathWord([(g, -e) for g, e in reversed(a.letters)], basepoint=a.target)


def letter(g, e=1):
    return PathWord([(g, e)])


@dataclass(frozen=True)
class Presentation:
    surface: SurfaceType
    basepoint: MarkedPoint
    generators: tuple
    relation: PathWord
    pinned: GeneratorId

    def generator(self, name):
        gid = GeneratorId.parse(name) if isinstance(name, str) else name
        for g in self.generators + (self.pinned,):
            if g == gid:
                return g
        raise KeyError(f"{name} is not a generator of this presentation")

    def relation_with_pinned(self):
        """Relation word including the pinned constant path as a letter."""
        return _relation_word(self.surface, self._all_generators(), skip=None)

    def _all_generators(self):
        return {g: g for g in self.generators + (self.pinned,)}

    def to_json(self):
        out = self.surface.to_json()
        out.update({"basepoint": str(self.basepoint),
                    "generators": [g.name for g in self.generators],
                    "relation": self.relation.to_json(),
                    "pinned": self.pinned.name})
        return out


def _generators(t, p0):
    P, S = MarkedPoint.primary, MarkedPoint.secondary
    gens = []
    for i in range(1, t.g + 1):
        gens.append(GeneratorId("alpha", i, 0, p0, p0))
        gens.append(GeneratorId("beta", i, 0, p0, p0))
    for i in range(1, t.l + 1):
        gens.append(GeneratorId("gamma", i, 0, p0, p0))
    for i in range(1, t.r + 1):
        gens.append(GeneratorId("delta", i, 0, S(i), S(i)))
    for i, mi in enumerate(t.m, start=1):
        for j in range(1, mi + 1):
            gens.append(GeneratorId("seg", i, j, P(i, j), P(i, j % mi + 1)))
    for i in range(1, t.d + 1):
        gens.append(GeneratorId("c", i, 0, p0, P(i, 1)))
    for i in range(1, t.r + 1):
        gens.append(GeneratorId("d", i, 0, p0, S(i)))
    return gens


def relation_factors(t):
    """The relation as a list of (kind, i, j, exponent) in product order."""
    out = []
    for i in range(t.g, 0, -1):
        out += [("alpha", i, 0, 1), ("beta", i, 0, 1), ("alpha", i, 0, -1), ("beta", i, 0, -1)]
    for i in range(t.l, 0, -1):
        out.append(("gamma", i, 0, 1))
    for i in range(t.r, 0, -1):
        out += [("d", i, 0, -1), ("delta", i, 0, 1), ("d", i, 0, 1)]
    for i in range(t.d, 0, -1):
        out.append(("c", i, 0, -1))
        for j in range(t.m[i - 1], 0, -1):
            out.append(("seg", i, j, 1))
        out.append(("c", i, 0, 1))
    return out


def _relation_word(t, lookup, skip):
    letters = []
    for kind, i, j, e in relation_factors(t):
        key = GeneratorId(kind, i, j)
        if key == skip:
            continue
        letters.append((lookup[key], e))
    return PathWord(letters, basepoint=None if letters else t.default_basepoint())


def build_presentation(t, basepoint=None):
    t.check()
    if basepoint is None:
        basepoint = t.default_basepoint()
    basepoint.validate(t)
    if basepoint.is_primary:
        if (basepoint.i, basepoint.j) != (1, 1):
            raise InvalidBasepoint("number the boundaries so that a primary basepoint is p1_1")
        pinned_key = GeneratorId("c", 1)
    else:
        if basepoint.i != 1:
            raise InvalidBasepoint("number the boundaries so that a secondary basepoint is s1")
        if t.d:
            raise InvalidBasepoint("a secondary basepoint is only used when there are no primary points")
        pinned_key = GeneratorId("d", 1)
    gens = _generators(t, basepoint)
    lookup = {g: g for g in gens}
    pinned = lookup[pinned_key]
    relation = _relation_word(t, lookup, skip=pinned)
    return Presentation(t, basepoint, tuple(g for g in gens if g != pinned), relation, pinned)


def free_generators(p, drop):
    """Generators left after dropping one solvable generator; they form a free basis."""
    drop = p.generator(drop)
    if not drop.solvable:
        raise CannotEliminate(f"the relation cannot be solved for {drop}")
    return [g for g in p.generators if g != drop]


def solve_relation_for(p, target):
    """Word in the remaining generators equal to ``target``.

    With relation L * target * R = 1 this is L^-1 * R^-1.
    """
    target = p.generator(target)
    if not target.solvable:
        raise CannotEliminate(f"the relation cannot be solved for {target}")
    letters = p.relation.letters
    idx = [k for k, (g, _) in enumerate(letters) if g == target]
    assert len(idx) == 1
    k = idx[0]
    left = PathWord(letters[:k], basepoint=p.basepoint)
    right = PathWord(letters[k + 1:], basepoint=target.source)
    return word_compose(word_inverse(left), word_inverse(right))


def substitute(word, target, replacement):
    letters = []
    for g, e in word.letters:
        if g == target:
            rep = replacement if e == 1 else word_inverse(replacement)
            letters.extend(rep.letters)
        else:
            letters.append((g, e))
    return PathWord(letters, basepoint=word.source).reduced()


def boundary_segments(t):
    P = MarkedPoint.primary
    out = []
    for i, mi in enumerate(t.m, start=1):
        for j in range(1, mi + 1):
            out.append(((i, j), P(i, j), P(i, j % mi + 1)))
    return out


def check_segment(t, seg):
    i, j = seg
    if not (1 <= i <= t.d and 1 <= j <= t.m[i - 1]):
        raise InvalidSegment(f"no boundary segment ({i},{j}) on {t}")
    return seg
