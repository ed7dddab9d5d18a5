import random

import pytest
from hypothesis import given, settings, strategies as st

from charvar.errors import CannotEliminate, NoHoles, NotInBorel, PinningViolated, WrongSubgroup
from charvar.exactfield import GF, QQ, ExactMatrix, identity, random_matrix
from charvar.repvar import (DIM_OBJECTS, DecoratedRep, MixedGroupElement, MonodromyData,
                            default_dependent, dims, eliminate_mono, free_parameter_count,
                            identity_rep, is_valid, mixed_conjugate, monodromy_from_rep,
                            relation_product, sample_random, slot_ids, slot_inventory, solve_for,
                            stratum, verify_monodromy_data, verify_relation)
from charvar.surface import GeneratorId, SurfaceType

GRID = [SurfaceType(g, l, r, d, (m,) if d else ())
        for g in (0, 1)
        for l, r, d in ((1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1))
        for m in ((1, 2, 3) if d else (0,))]
GRID = [t for t in GRID if t.num_marked]


def test_identity_point_is_valid():
    for t in GRID:
        assert is_valid(identity_rep(t, 2, GF(3)))


def test_sample_is_valid_and_deterministic():
    for t in GRID:
        a = sample_random(t, 3, GF(5), seed=4)
        assert is_valid(a)
        assert a == sample_random(t, 3, GF(5), seed=4)


def test_sample_over_rationals():
    t = SurfaceType(1, 0, 1, 1, (2,))
    assert is_valid(sample_random(t, 2, QQ, seed=1))


def test_r_only_surface_sampling():
    """Only N slots are solvable here; the sampler must still land in B."""
    for t in (SurfaceType(0, 0, 1, 0, ()), SurfaceType(1, 0, 1, 0, ()), SurfaceType(0, 0, 2, 0, ())):
        for seed in range(5):
            rep = sample_random(t, 2, GF(3), seed=seed)
            assert is_valid(rep)


def test_mutation_breaks_relation():
    t = SurfaceType(0, 1, 1, 0, ())
    rep = sample_random(t, 2, GF(5), seed=0)
    assert verify_relation(rep)
    assert not verify_relation(rep.with_slot("g1", rep["g1"] * 2))


def test_solve_for_round_trip_every_slot():
    t = SurfaceType(1, 1, 1, 1, (2,))
    rep = sample_random(t, 2, GF(5), seed=3)
    for gid in slot_ids(t):
        if gid.kind in ("gamma", "seg"):
            assert solve_for(rep, gid) == rep
        elif gid.kind == "delta":
            assert solve_for(rep, gid) == rep
        else:
            with pytest.raises(CannotEliminate):
                solve_for(rep, gid)


def test_solve_for_delta_off_borel():
    t = SurfaceType(0, 1, 1, 0, ())
    F = GF(5)
    # with d1 pinned the relation reads gamma * N = 1, so a lower triangular
    # gamma forces a lower triangular N
    rep = identity_rep(t, 2, F).with_slot("g1", ExactMatrix([[1, 0], [1, 1]], F))
    with pytest.raises(NotInBorel):
        solve_for(rep, "n1")


def test_json_round_trip():
    rep = sample_random(SurfaceType(1, 0, 1, 1, (2,)), 2, GF(3), seed=9)
    assert DecoratedRep.from_json(rep.to_json()) == rep


@pytest.mark.parametrize("cls", ["Fi", "Fr", "PFr"])
def test_mixed_conjugation_preserves_structure(cls):
    rng = random.Random(7)
    F = GF(5)
    for t in GRID:
        rep = sample_random(t, 3, F, seed=rng.randrange(10 ** 6))
        x = MixedGroupElement.random(t, 3, F, cls, rng)
        out = mixed_conjugate(x, rep, cls)
        assert is_valid(out)
        assert stratum(out) == stratum(rep)
        # group action law
        y = MixedGroupElement.random(t, 3, F, cls, rng)
        assert mixed_conjugate(y, out, cls) == mixed_conjugate(y @ x, rep, cls)
        assert mixed_conjugate(x.inverse(), out, cls) == rep


def test_hatted_action_moves_pin():
    t = SurfaceType(0, 0, 1, 1, (1,))
    F = GF(3)
    rng = random.Random(0)
    rep = sample_random(t, 2, F, seed=0)
    x = MixedGroupElement.random(t, 2, F, "Fi", rng, hatted=True)
    out = mixed_conjugate(x, rep, "Fi", hatted=True)
    assert verify_relation(out)
    with pytest.raises(PinningViolated):
        mixed_conjugate(MixedGroupElement.random(t, 2, F, "Fi", rng), rep, "Fi", hatted=True)


def test_wrong_subgroup():
    t = SurfaceType(0, 0, 0, 1, (1,))
    F = GF(5)
    rep = identity_rep(t, 2, F)
    x = MixedGroupElement.random(t, 2, F, "Fi", random.Random(2))
    x = x.with_point(("p", 1, 1), identity(2, F) * 2)
    with pytest.raises(WrongSubgroup):
        mixed_conjugate(x, rep, "Fr")
    mixed_conjugate(x, rep, "PFr")


def test_dims_formula_examples():
    disc = SurfaceType(d=1, m=(2,))
    assert dims(disc, 2, "RepVariety") == 4
    annulus = SurfaceType(l=1, r=1)
    assert dims(annulus, 2, "RepVariety") == 3
    with pytest.raises(NoHoles):
        dims(SurfaceType(g=1), 2, "RepVariety")
    for obj in DIM_OBJECTS:
        assert isinstance(dims(annulus, 3, obj), int)


def test_loc_dims_from_group_dims():
    """Stack dimension = RepVariety minus one structure group per marked point."""
    for t in GRID:
        for n in (1, 2, 3):
            b = n * (n + 1) // 2
            pts = t.m_tot + t.r
            for obj, kdim in (("LocFi", b), ("LocFr", b - n), ("LocPFr", b - n + 1)):
                assert dims(t, n, obj) == dims(t, n, "RepVariety") - pts * kdim


def test_loc_dims_example():
    t = SurfaceType(g=1, d=1, m=(2,))
    assert dims(t, 2, "RepVariety") == 12
    assert dims(t, 2, "LocFi") == 6


def test_inventory_matches_dims():
    for t in GRID:
        for n in (1, 2, 3):
            for dep in [g for g in slot_ids(t) if g.kind in ("gamma", "delta", "seg")]:
                assert free_parameter_count(t, n, dep) == dims(t, n, "RepVariety")


def test_inventory_shape():
    inv = slot_inventory(SurfaceType(1, 0, 2, 1, (1,)))
    assert inv["pinned"] == GeneratorId("c", 1)
    assert inv["dependent"] == default_dependent(SurfaceType(1, 0, 2, 1, (1,)))
    assert len(inv["B"]) == 2 and len(inv["G"]) == 2 + 2


def test_monodromy_data():
    rng = random.Random(0)
    F = GF(5)
    md = MonodromyData(tuple(random_matrix(2, F, rng) for _ in range(1)),
                       tuple(random_matrix(2, F, rng) for _ in range(1)),
                       (random_matrix(2, F, rng), None))
    full = eliminate_mono(md)
    assert verify_monodromy_data(full)
    rep = sample_random(SurfaceType(1, 1, 1, 1, (2,)), 2, F, seed=5)
    assert verify_monodromy_data(monodromy_from_rep(rep))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(GRID), st.integers(1, 3), st.sampled_from([3, 5]))
def test_sample_and_act_property(seed, t, n, p):
    rng = random.Random(seed)
    F = GF(p)
    rep = sample_random(t, n, F, seed=rng)
    assert relation_product(rep) == identity(n, F)
    cls = rng.choice(["Fi", "Fr", "PFr"])
    out = mixed_conjugate(MixedGroupElement.random(t, n, F, cls, rng), rep, cls)
    assert is_valid(out) and stratum(out) == stratum(rep)
