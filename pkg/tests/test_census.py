import json

import pytest

from charvar.census import (CensusReport, admissible_eliminations, b_conjugacy_census,
                            enumerate_points, invariant_flag_census, monodromy_orbit_count,
                            orbit_count)
from charvar.errors import CannotEliminate, EnumerationTooLarge
from charvar.repvar import is_valid
from charvar.surface import SurfaceType

from oracles import borel_class_count

DISC = SurfaceType(d=1, m=(2,))
ANNULUS = SurfaceType(l=1, r=1)


def test_point_counts():
    pts = list(enumerate_points(DISC, 2, 2))
    assert len(pts) == 6 and all(is_valid(p) for p in pts)
    # one free GL_2 slot is used up by the relation, leaving N in B(F_2)
    assert len(list(enumerate_points(ANNULUS, 2, 2))) == 2
    assert len(list(enumerate_points(ANNULUS, 2, 2, borel=False))) == 6
    assert len(list(enumerate_points(SurfaceType(g=1, d=1, m=(2,)), 1, 5))) == 4 ** 3


def test_regression_orbit_counts():
    assert [orbit_count(DISC, 2, 2, c).orbits for c in ("fi", "fr", "pfr", "g")] == [2, 2, 2, 1]
    assert orbit_count(ANNULUS, 2, 2, "fi").orbits == 2
    assert orbit_count(ANNULUS, 2, 2, "g").orbits == 3


def test_n1_single_point_surfaces_have_trivial_action():
    for t in (SurfaceType(d=1, m=(1,)), SurfaceType(g=1, d=1, m=(1,))):
        rep = orbit_count(t, 1, 3, "fi")
        assert rep.orbits == rep.total_points


@pytest.mark.parametrize("t", [DISC, ANNULUS, SurfaceType(d=1, m=(3,)), SurfaceType(l=1, d=1, m=(1,))])
def test_burnside_equals_union_find(t):
    for cls in ("fi", "fr", "g"):
        a = orbit_count(t, 2 if t.m_tot + t.r <= 2 else 1, 2, cls, "orbits")
        b = orbit_count(t, a.n, 2, cls, "burnside")
        assert a.orbits == b.orbits


@pytest.mark.parametrize("t", [DISC, ANNULUS, SurfaceType(l=1, d=1, m=(1,))])
def test_elimination_independence(t):
    for cls in ("fi", "g"):
        counts = {orbit_count(t, 2, 2, cls, eliminate=e).orbits for e in admissible_eliminations(t)}
        assert len(counts) == 1


def test_cannot_eliminate_pinned():
    with pytest.raises(CannotEliminate):
        list(enumerate_points(DISC, 2, 2, eliminate="c1"))


def test_basepoint_independence():
    assert orbit_count(DISC, 2, 2, "g").orbits == monodromy_orbit_count(0, 1, 2, 2)
    assert orbit_count(ANNULUS, 2, 2, "g").orbits == monodromy_orbit_count(0, 2, 2, 2)


def test_monodromy_orbits_small():
    # conjugacy classes of GL_2(F_2) and of GL_2(F_3)
    assert monodromy_orbit_count(0, 2, 2, 2) == 3
    assert monodromy_orbit_count(0, 2, 2, 3) == 8


@pytest.mark.parametrize("n,q", [(1, 5), (2, 2), (2, 3), (3, 2)])
def test_b_conjugacy_census_against_oracle(n, q):
    rep = b_conjugacy_census(n, q)
    assert rep.classes == borel_class_count(n, q) == rep.jw_count
    assert rep.one_jw_per_class


def test_b_conjugacy_regressions():
    assert b_conjugacy_census(2, 5).as_tuple() == (20, 20)
    assert b_conjugacy_census(2, 2).as_tuple() == (2, 2)


def test_invariant_flag_census_small():
    for n, q in ((1, 3), (2, 2), (2, 3)):
        rep = invariant_flag_census(n, q)
        assert rep["ok"], rep
    assert invariant_flag_census(2, 2)["checked"] == 4


def test_budget(monkeypatch):
    monkeypatch.setenv("CHARVAR_BUDGET", "10")
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_points(SurfaceType(g=1, d=1, m=(1,)), 2, 2))


def test_report_lines(tmp_path):
    out = tmp_path / "r.jsonl"
    rep = orbit_count(DISC, 2, 2, "fi")
    rep.append_to(out)
    rep.append_to(out)
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    obj = json.loads(lines[0])
    assert obj["orbits"] == 2 and obj["total_points"] == 6
    assert CensusReport(**obj).orbits == 2
