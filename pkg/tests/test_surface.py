import itertools
import random

import pytest

from charvar.errors import CannotEliminate, InvalidBasepoint, NoHoles, NoMarkedPoints, NotComposable
from charvar.exactfield import GF, identity, random_matrix
from charvar.surface import (GeneratorId, MarkedPoint, PathWord, SurfaceType, boundary_segments,
                             build_presentation, free_generators, letter, solve_relation_for,
                             substitute, word_compose, word_inverse)

DISC = SurfaceType(d=1, m=(2,))
ANNULUS = SurfaceType(l=1, r=1)


def names(gens):
    return sorted(g.name for g in gens)


def test_disc_presentation():
    p = build_presentation(DISC, MarkedPoint.primary(1, 1))
    assert names(p.generators) == ["t1_1", "t1_2"]
    assert p.pinned.name == "c1"
    assert str(p.relation) == "t1_2 t1_1"
    assert len(free_generators(p, "t1_2")) == 1


def test_annulus_presentation():
    p = build_presentation(ANNULUS, MarkedPoint.secondary(1))
    assert names(p.generators) == ["g1", "n1"]
    assert p.pinned.name == "d1"
    # gamma first, then the conjugated boundary loop (d1 = 1 is left out)
    assert str(p.relation) == "g1 n1"
    assert names(free_generators(p, "g1")) == ["n1"]


def test_invalid_surfaces():
    with pytest.raises(NoMarkedPoints):
        build_presentation(SurfaceType(g=1, l=1))
    with pytest.raises(NoHoles):
        build_presentation(SurfaceType(g=2))
    with pytest.raises(InvalidBasepoint):
        build_presentation(DISC, MarkedPoint.primary(1, 2))
    with pytest.raises(InvalidBasepoint):
        build_presentation(ANNULUS, MarkedPoint.primary(1, 1))
    with pytest.raises(ValueError):
        SurfaceType(d=1, m=())


def test_cannot_drop_unsolvable():
    p = build_presentation(SurfaceType(g=1, d=1, m=(1,), r=1))
    for name in ("a1", "b1", "d1"):
        with pytest.raises(CannotEliminate):
            free_generators(p, name)


def test_boundary_segments():
    assert boundary_segments(SurfaceType(d=1, m=(1,))) == [
        ((1, 1), MarkedPoint.primary(1, 1), MarkedPoint.primary(1, 1))]
    segs = boundary_segments(SurfaceType(d=1, m=(3,)))
    assert [(s.j, t.j) for _, s, t in segs] == [(1, 2), (2, 3), (3, 1)]
    assert len(boundary_segments(SurfaceType(d=2, m=(2, 1)))) == 3


def test_word_algebra():
    p = build_presentation(DISC)
    t1, t2 = p.generator("t1_1"), p.generator("t1_2")
    a = letter(t1)
    assert len(word_compose(a, word_inverse(a))) == 0
    w = word_compose(letter(t2), letter(t1))
    assert len(word_compose(w, word_inverse(w))) == 0
    assert len(p.relation.reduced()) == 2
    with pytest.raises(NotComposable):
        PathWord([(t1, 1), (t1, 1)])
    with pytest.raises(NotComposable):
        word_compose(letter(t1), letter(t1))


def test_parse_names():
    for text in ("a1", "b2", "g3", "n1", "t2_3", "c1", "d4"):
        assert GeneratorId.parse(text).name == text
    assert str(MarkedPoint.parse("p2_1")) == "p2_1"
    assert SurfaceType.parse("g=1,l=0,r=1,m=2:1") == SurfaceType(1, 0, 1, 2, (2, 1))


def surface_sweep():
    for g in range(4):
        for l, r, d in itertools.product(range(5), repeat=3):
            if not 1 <= l + r + d <= 4:
                continue
            for m in itertools.product(range(1, 4), repeat=d):
                t = SurfaceType(g, l, r, d, m)
                if t.num_marked:
                    yield t


def test_generator_count_sweep():
    count = 0
    for t in surface_sweep():
        p = build_presentation(t)
        assert len(p.generators) == 2 * t.g + t.s + t.r + t.m_tot - 1
        assert p.relation.is_closed() and p.relation.source == p.basepoint
        count += 1
    assert count > 500


def test_free_generators_rederive_dropped_sweep():
    rng = random.Random(5)
    surfaces = list(surface_sweep())
    for t in rng.sample(surfaces, 80):
        p = build_presentation(t)
        for g in p.generators:
            if not g.solvable:
                continue
            free = free_generators(p, g)
            assert len(free) == 2 * t.g + t.s + t.r + t.m_tot - 2
            w = solve_relation_for(p, g)
            assert g not in {x for x, _ in w.letters}
            assert w.source == g.source and w.target == g.target
            # substituting the word back makes the relation a free identity
            assert len(substitute(p.relation, g, w)) == 0


def test_relation_word_evaluates_like_product():
    """With every generator but one drawn at random and the last solved from
    its word, the relation word evaluates to the identity."""
    rng = random.Random(11)
    F = GF(5)
    for t in [SurfaceType(1, 1, 1, 1, (2,)), SurfaceType(0, 0, 2, 2, (1, 3)), ANNULUS]:
        p = build_presentation(t)
        target = [g for g in p.generators if g.solvable][-1]
        values = {g: random_matrix(2, F, rng) for g in p.generators if g != target}
        values[target] = solve_relation_for(p, target).evaluate(values, identity(2, F))
        assert p.relation.evaluate(values, identity(2, F)) == identity(2, F)
