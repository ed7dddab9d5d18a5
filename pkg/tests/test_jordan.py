import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from charvar.errors import EigenvaluesNotInField, NotInvariant, TypeShapeMismatch
from charvar.exactfield import GF, QQ, ExactMatrix, diag, from_columns, random_matrix
from charvar.flags import Flag, is_invariant, standard_flag, transport_flag
from charvar.jordan import (JordanType, ShuffledJordanType, box_label, canonicalize,
                            centralizer, classify_invariant_flag, commuting_equivalence_classes,
                            count_shuffled_jordan_types, count_shuffles, enumerate_shuffled_jordan_types,
                            enumerate_shuffles, flag_from_type, invariant_flags_bruteforce,
                            jordan_chains, jordan_matrix, jordan_type, jw_set, parse_box,
                            shuffled_matrix, split_jordan_types)

from oracles import (block_jordan, brute_shuffles, brute_type_classes, invariant_flag_sets,
                     jordan_blocks_sympy, partitions, w_search)


def M(rows, field=QQ):
    return ExactMatrix(rows, field)


def test_worked_count():
    jt = JordanType.from_partitions([3, 2, 2, 1], [2, 1])
    assert count_shuffles(jt) == 831600
    assert count_shuffled_jordan_types(jt) == 415800


def test_small_counts():
    assert count_shuffles(JordanType.from_partitions([1], [1], [1])) == 6
    assert count_shuffled_jordan_types(JordanType.from_partitions([1, 1])) == 1
    assert count_shuffled_jordan_types(JordanType.from_partitions([2, 1])) == 3
    assert count_shuffled_jordan_types(JordanType.from_partitions([3])) == 1


def test_jordan_type_examples():
    assert jordan_type(diag([1, 2], QQ)).blocks == ((1, (1,)), (2, (1,)))
    assert jordan_type(M([[2, 1, 0], [0, 2, 0], [0, 0, 2]])).shape == ((2, 1),)
    with pytest.raises(EigenvaluesNotInField):
        jordan_type(M([[0, 1], [-1, 0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 4))
def test_jordan_type_matches_sympy(seed, n):
    rng = random.Random(seed)
    # conjugate a random block Jordan matrix so the spectrum is rational
    blocks = []
    left = n
    while left:
        s = rng.randint(1, left)
        blocks.append((rng.randint(-2, 2), s))
        left -= s
    j = M(block_jordan(blocks))
    g = random_matrix(n, QQ, rng)
    m = g @ j @ g.inverse()
    want = jordan_blocks_sympy([[int(x) for x in r] for r in j.rows])
    got = {lam: list(part) for lam, part in jordan_type(m).blocks}
    assert got == {Fraction(int(k)): v for k, v in want.items()}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 4), st.sampled_from([3, 5]))
def test_jordan_chains_are_chains(seed, n, p):
    rng = random.Random(seed)
    F = GF(p)
    m = random_matrix(n, F, rng, "B")
    jt, chains = jordan_chains(m)
    vecs = []
    for (lam, part), rows in zip(jt.blocks, chains):
        nu = m - M([[lam if i == j else 0 for j in range(n)] for i in range(n)], F)
        assert [len(r) for r in rows] == list(part)
        for row in rows:
            assert not any(nu.apply(row[0]))
            for a, b in zip(row, row[1:]):
                assert nu.apply(b) == a
            vecs.extend(row)
    assert from_columns(vecs, F).is_invertible()


def test_box_labels():
    assert box_label((1, 2, 3)) == "λ1:2.3"
    assert parse_box("λ2:1.4") == (2, 1, 4)
    assert parse_box("L1:1.1") == (1, 1, 1)
    with pytest.raises(ValueError):
        parse_box("x")


def test_shuffle_validation_and_canonical_form():
    jt = JordanType.from_partitions([1, 1])
    with pytest.raises(TypeShapeMismatch):
        ShuffledJordanType(jt, ((1, 1, 1),))
    jt2 = JordanType.from_partitions([2])
    with pytest.raises(TypeShapeMismatch):
        ShuffledJordanType(jt2, ((1, 1, 2), (1, 1, 1)))
    a = ShuffledJordanType(jt, ((1, 2, 1), (1, 1, 1)))
    assert a.shuffle == ((1, 1, 1), (1, 2, 1))


def all_types(max_n, max_eigs=3):
    for n in range(1, max_n + 1):
        for k in range(1, max_eigs + 1):
            for sizes in itertools.product(range(1, n + 1), repeat=k):
                if sum(sizes) != n:
                    continue
                for parts in itertools.product(*[list(partitions(s)) for s in sizes]):
                    yield JordanType.from_partitions(*parts)


def test_enumeration_matches_brute_force():
    seen = 0
    for jt in all_types(5):
        if jt.n > 5:
            continue
        shapes = [list(p) for p in jt.shape]
        if count_shuffles(jt) > 2000:
            continue
        brute = brute_shuffles(shapes)
        assert set(enumerate_shuffles(jt)) == set(brute)
        types = {t.shuffle for t in enumerate_shuffled_jordan_types(jt)}
        assert types == brute_type_classes(shapes)
        seen += 1
    assert seen > 50


def test_enumeration_lengths_match_formulas():
    for jt in all_types(6):
        assert sum(1 for _ in enumerate_shuffles(jt)) == count_shuffles(jt)
        assert sum(1 for _ in enumerate_shuffled_jordan_types(jt)) == count_shuffled_jordan_types(jt)


def test_distinct_eigenvalues_give_all_orders():
    for n in range(1, 6):
        jt = JordanType.from_partitions(*[[1]] * n)
        assert count_shuffled_jordan_types(jt) == len(list(itertools.permutations(range(n))))


def test_shuffled_matrices_are_upper_triangular_conjugates():
    for parts in ([[2, 1]], [[1], [2]], [[2], [1, 1]], [[3, 1]], [[1], [1], [2]], [[2, 2]]):
        jt = JordanType.from_partitions(*parts)
        J = jordan_matrix(jt, QQ)
        ours = {shuffled_matrix(jt, t, QQ).rows for t in enumerate_shuffled_jordan_types(jt)}
        want = {tuple(tuple(QQ(x) for x in r) for r in m) for m in w_search(J.rows)}
        assert ours == want
        assert len(jw_set(J)) == count_shuffled_jordan_types(jt)


def test_small_invariant_flag_examples():
    F = GF(3)
    # distinct eigenvalues: two invariant flags, two classes
    phi = diag([1, 2], F)
    flags = invariant_flags_bruteforce(phi)
    assert len(flags) == 2
    assert len(commuting_equivalence_classes(phi, flags)) == 2
    # one Jordan block: only the standard flag
    j3 = jordan_matrix(JordanType.from_partitions([3]), F)
    assert invariant_flags_bruteforce(j3) == [standard_flag(3, F)]
    # blocks [2, 1] at one eigenvalue: three classes
    j21 = jordan_matrix(JordanType.from_partitions([2, 1]), F)
    assert len(commuting_equivalence_classes(j21, invariant_flags_bruteforce(j21))) == 3


def test_flag_enumeration_against_vector_sets():
    rng = random.Random(2)
    for p, n in ((2, 2), (2, 3), (3, 2), (3, 3)):
        F = GF(p)
        for _ in range(6):
            m = random_matrix(n, F, rng, "B")
            assert len(invariant_flags_bruteforce(m)) == len(invariant_flag_sets(
                [list(r) for r in m.rows], p))


def test_two_equal_blocks_classes():
    """Blocks [2,2] at one eigenvalue: the greedy-chain reading would merge
    shuffles that are in fact different orbits."""
    F = GF(2)
    phi = jordan_matrix(JordanType.from_partitions([2, 2]), F)
    flags = invariant_flags_bruteforce(phi)
    by_types = commuting_equivalence_classes(phi, flags, "types")
    by_cent = commuting_equivalence_classes(phi, flags, "centralizer")
    assert len(by_types) == count_shuffled_jordan_types(jordan_type(phi)) == 3
    assert {frozenset(c) for c in by_types} == {frozenset(c) for c in by_cent}


def test_classify_rejects_non_invariant():
    with pytest.raises(NotInvariant):
        classify_invariant_flag(M([[1, 0], [1, 2]]), standard_flag(2, QQ))


def test_flag_from_type_round_trip_exhaustive():
    for parts in ([[1], [1], [1]], [[2, 1]], [[1, 1], [1]], [[2], [1, 1]], [[2, 2]], [[3, 1]],
                  [[1], [2], [1]], [[2, 1, 1]]):
        jt0 = JordanType.from_partitions(*parts)
        F = GF(5)
        rng = random.Random(len(parts))
        g = random_matrix(jt0.n, F, rng)
        phi = g @ jordan_matrix(jt0, F) @ g.inverse()
        jt = jordan_type(phi)
        for t in enumerate_shuffled_jordan_types(jt):
            f = flag_from_type(phi, t)
            assert is_invariant(phi, f)
            assert classify_invariant_flag(phi, f) == t
            # the flag's basis conjugates phi to the shuffled matrix
            p = f.adapted_basis()
            assert (p.inverse() @ phi @ p).is_upper_triangular()


def test_flag_from_type_rejects_wrong_type():
    phi = diag([1, 2], QQ)
    other = next(enumerate_shuffled_jordan_types(JordanType.from_partitions([2])))
    with pytest.raises(TypeShapeMismatch):
        flag_from_type(phi, other)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_classification_is_centralizer_invariant(seed):
    rng = random.Random(seed)
    F = GF(3)
    phi = random_matrix(3, F, rng, "B")
    flags = invariant_flags_bruteforce(phi)
    cent = centralizer(phi)
    f = rng.choice(flags)
    psi = rng.choice(cent)
    assert classify_invariant_flag(phi, transport_flag(psi, f)) == classify_invariant_flag(phi, f)


def test_centralizer_small():
    F = GF(2)
    assert len(centralizer(diag([1, 1], F))) == 6
    assert len(centralizer(jordan_matrix(JordanType.from_partitions([2]), F))) == 2


def test_split_jordan_types_counts():
    # split conjugacy classes of GL_2(F_3): eigenvalues in {1, 2}
    types = list(split_jordan_types(2, 3))
    assert len(types) == 5
    assert len(list(split_jordan_types(1, 5))) == 4


def test_json_round_trip():
    F = GF(5)
    jt = jordan_type(M([[2, 1, 0], [0, 2, 0], [0, 0, 3]], F))
    assert JordanType.from_json(jt.to_json(F), F) == jt
    t = next(enumerate_shuffled_jordan_types(jt))
    obj = t.to_json(F)
    back = ShuffledJordanType(JordanType.from_json(obj["jordan_type"], F),
                              tuple(parse_box(x) for x in obj["shuffle"]))
    assert back == t
    assert canonicalize(jt, t.shuffle) == t.shuffle
