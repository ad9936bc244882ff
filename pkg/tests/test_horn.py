import itertools

import pytest

from burnside_lab.errors import InputError
from burnside_lab.horn import (AnodyneDecomposition, FaceUnion,
                               anodyne_decomposition, classification_sweep,
                               crossings, essential_vertices,
                               exceptional_cases, expected_exceptional_cases,
                               intersection_oracle, is_condition_star, juts,
                               ones_prefix_n, oracle_matches_formula,
                               oracle_report, walk)


# --- walks -------------------------------------------------------------------


def test_walk_all_zero_digits():
    w = walk(4, 0)
    assert w.vertices == ((0, 4), (0, 3), (0, 2), (0, 1), (0, 0))


def test_walk_all_one_digits():
    w = walk(4, 15)
    assert w.vertices == ((0, 4), (1, 4), (2, 4), (3, 4), (4, 4))


def test_walk_13_of_5():
    w = walk(5, 13)
    assert w.digits == (0, 1, 1, 0, 1)
    assert w.vertices == ((0, 5), (0, 4), (1, 4), (2, 4), (2, 3), (3, 3))


def test_walk_range_validation():
    with pytest.raises(InputError):
        walk(3, 8)
    with pytest.raises(InputError):
        walk(3, -1)


def test_walks_are_completely_factored():
    for m in range(1, 7):
        for n in range(1 << m):
            w = walk(m, n)
            assert w.vertices[0] == (0, m)
            for (i0, j0), (i1, j1) in zip(w.vertices, w.vertices[1:]):
                assert i1 - i0 + j0 - j1 == 1


# --- juts and crossings --------------------------------------------------------


def test_juts_examples():
    assert sorted(juts(5, 13)) == [3, 5]
    assert juts(5, 0) == frozenset()
    assert juts(5, 31) == {5}
    assert juts(4, 0b1010) == {1, 3}


def test_crossings_all_ones_away_from_zero():
    m = 5
    assert crossings(m, (1 << m) - 1, 0) == frozenset(range(1, m))


def test_crossings_respect_k_exclusion():
    # for sigma(13), x = 2 has i_2 = 1: a crossing away from k iff k != 1
    assert 2 not in crossings(5, 13, 1)
    for k in [0, 2, 3, 4]:
        assert 2 in crossings(5, 13, k)
    # x = 0 with d_1 = 0 is a crossing for every k
    for k in range(5):
        assert 0 in crossings(5, 13, k)


def test_crossings_reject_k_equal_m():
    with pytest.raises(InputError):
        crossings(4, 3, 4)


def test_juts_and_crossings_disjoint():
    for m in range(2, 7):
        for n in range(1 << m):
            z = juts(m, n)
            for k in range(m):
                assert not (z & crossings(m, n, k))


# --- essential vertices and the exceptional classification ---------------------


def test_essential_exceptional_values():
    m = 5
    for k in range(1, m):
        e1 = essential_vertices(m, ones_prefix_n(m, k - 1), k).essential
        assert e1 == {m - 1, m}
        e2 = essential_vertices(m, ones_prefix_n(m, k), k).essential
        assert e2 == {m}
    for t in range(1, m):
        assert essential_vertices(m, ones_prefix_n(m, t), 0).essential == {0, m}
    assert essential_vertices(m, 0, 0).essential == {m}
    assert essential_vertices(m, (1 << m) - 1, 0).essential == {0}


@pytest.mark.parametrize("m", range(2, 8))
def test_exceptional_cases_match_table(m):
    for k in range(m):
        assert exceptional_cases(m, k) == expected_exceptional_cases(m, k)


def test_exceptional_counts():
    assert len(exceptional_cases(5, 3)) == 2
    assert len(exceptional_cases(5, 0)) == 6
    got = exceptional_cases(2, 1)
    assert [n for n, _ in got] == [0, 2]


# --- the intersection oracle ----------------------------------------------------


@pytest.mark.parametrize("m", range(2, 7))
def test_oracle_equals_formula(m):
    assert classification_sweep(m) == []


def test_oracle_small_case_by_hand():
    # m=2, N=0, k=1: the intersection is the single face skipping vertex 0
    union = intersection_oracle(2, 0, 1)
    assert union.maximal_faces() == [[1, 2]]
    e = essential_vertices(2, 0, 1).essential
    assert e == {1, 2}
    assert union == FaceUnion.generalized_horn(2, e)


def test_warning_case_k_equals_m():
    union = intersection_oracle(5, 13, 5)
    faces = union.maximal_faces()
    assert [0, 1, 2, 3, 4] in faces   # Delta^{5-hat}
    assert [0, 1, 2, 4, 5] in faces   # Delta^{3-hat}
    assert [2, 3, 4, 5] in faces      # the codimension-2 face
    assert union.is_generalized_horn() is None
    # the face the source text does not list (see the oracle report)
    assert [0, 1, 3, 4, 5] in faces


def test_warning_case_report_flags_discrepancy():
    report = oracle_report(5, 13, 5)
    assert report["warning_case"]["all_listed_faces_present"]
    assert report["warning_case"]["additional_maximal_faces"] == [[0, 1, 3, 4, 5]]
    assert not report["is_generalized_horn"]


def test_oracle_report_regular_case():
    report = oracle_report(5, 13, 1)
    assert report["matches_formula"]
    assert report["juts"] == [3, 5]
    assert report["crossings"] == [0]
    assert report["essential_vertices"] == [1, 2, 4]


def test_filtration_final_stage_covers_everything():
    # P_{2^m}(k) contains every completely factored simplex: the last walk
    # intersects the union of everything earlier in its full boundary or more
    m = 4
    top = (1 << m) - 1
    union = intersection_oracle(m, top, 0)
    for y in range(m + 1):
        face = tuple(v for v in range(m + 1) if v != y)
        contained = union.contains_face(sum(1 << v for v in face))
        e = essential_vertices(m, top, 0).essential
        assert contained == (y not in e)


def test_filtration_monotone_in_n():
    # sigma(N) cap P_M(k) grows with M (union over a growing set of walks)
    m = 3
    for k in range(m):
        for n in range(1 << m):
            wn = walk(m, n)
            previous = None
            for stage in range(n + 1):
                faces = set()
                for other in range(stage):
                    common = set(walk(m, other).vertices)
                    faces.add(sum(1 << r for r, v in enumerate(wn.vertices)
                                  if v in common))
                for j in range(m + 1):
                    if j != k:
                        faces.add(sum(1 << r
                                      for r, v in enumerate(wn.vertices)
                                      if j not in v))
                union = FaceUnion(m, faces)
                if previous is not None:
                    for f in previous.maximal:
                        assert union.contains_face(f)
                previous = union


def test_final_filtration_stage_covers_the_whole_subdivision():
    # every nondegenerate simplex of the twisted-arrow poset nerve lies in
    # some completely factored walk (chains extend to maximal chains, and
    # maximal chains are exactly the walks)
    for m in range(2, 5):
        poset = [(i, j) for i in range(m + 1) for j in range(i, m + 1)]
        walks = [set(walk(m, n).vertices) for n in range(1 << m)]
        chains = [[v] for v in poset]
        while chains:
            nxt = []
            for chain in chains:
                assert any(set(chain) <= w for w in walks), chain
                (i, j) = chain[-1]
                for (i2, j2) in poset:
                    strictly_after = (i <= i2 and j2 <= j
                                      and (i, j) != (i2, j2))
                    if strictly_after:
                        nxt.append(chain + [(i2, j2)])
            chains = nxt


def test_face_union_canonicalization():
    fu = FaceUnion(3, [0b0111, 0b0011, 0b1000])
    assert fu.maximal_faces() == [[0, 1, 2], [3]]
    assert fu.contains_face(0b0011)
    assert not fu.contains_face(0b1100)
    assert FaceUnion(3, []) == FaceUnion(3, [0])


def test_face_union_horn_detection():
    horn = FaceUnion.generalized_horn(4, {1, 2})
    assert horn.is_generalized_horn() == {1, 2}
    assert FaceUnion.generalized_horn(4, set()).is_generalized_horn() == set()
    not_horn = FaceUnion(3, [0b0111, 0b1100])
    assert not_horn.is_generalized_horn() is None


# --- condition (*) and the anodyne decomposer -----------------------------------


def test_condition_star_examples():
    assert is_condition_star(4, {2})
    assert not is_condition_star(4, {3, 4})
    assert not is_condition_star(4, {4})
    assert not is_condition_star(4, {0, 4})
    assert not is_condition_star(4, {0})
    assert is_condition_star(3, {1, 2})
    assert not is_condition_star(2, {0, 1})


def test_condition_star_validation():
    with pytest.raises(InputError):
        is_condition_star(3, set())
    with pytest.raises(InputError):
        is_condition_star(3, {0, 1, 2, 3})


def test_single_vertex_decomposition_is_one_horn():
    dec = anodyne_decomposition(4, {2})
    assert dec.steps == (((0, 1, 2, 3, 4), 2),)
    assert dec.replay()


def test_two_stage_decomposition():
    dec = anodyne_decomposition(3, {1, 2})
    assert len(dec.steps) == 2
    assert dec.replay()


@pytest.mark.parametrize("m", range(2, 7))
def test_all_star_subsets_decompose_and_replay(m):
    count = 0
    for r in range(1, m + 1):
        for s_set in itertools.combinations(range(m + 1), r):
            s_set = frozenset(s_set)
            if len(s_set) == m + 1:
                continue
            if is_condition_star(m, s_set):
                dec = anodyne_decomposition(m, s_set)
                assert dec.replay(), (m, sorted(s_set))
                count += 1
            else:
                with pytest.raises(InputError):
                    anodyne_decomposition(m, s_set)
    assert count > 0


def test_replay_rejects_outer_horn_step():
    bad = AnodyneDecomposition(2, frozenset({0}), (((0, 1, 2), 0),))
    assert not bad.replay()


def test_replay_rejects_wrong_order():
    good = anodyne_decomposition(3, {1, 2})
    reordered = AnodyneDecomposition(3, frozenset({1, 2}),
                                     tuple(reversed(good.steps)))
    assert not reordered.replay()
