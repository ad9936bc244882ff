import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside_lab.errors import InputError, ResourceLimitError
from burnside_lab.groups import named_group
from burnside_lab.simplicial import (CatFunctor, FiniteCategory, all_posets,
                                     boundary_simplex, chain_complex,
                                     compose_maps, delta_map,
                                     edgewise_comparison, edgewise_map,
                                     edgewise_subdivision, generalized_horn,
                                     homology, identity_map,
                                     is_discrete_opfibration, nerve,
                                     poset_category, sigma_map,
                                     standard_simplex, tw_nerve_edgewise_agree,
                                     twisted_arrow_category,
                                     twisted_arrow_projection)


# --- simplicial sets and operators ------------------------------------------


def test_standard_simplex_counts():
    for m in range(4):
        x = standard_simplex(m)
        for n in range(m + 1):
            from math import comb
            assert x.n_cells(n) == comb(m + 1, n + 1)


def test_simplicial_identities_checked_at_construction():
    standard_simplex(4)  # _check_structure asserts d_i d_j = d_{j-1} d_i
    nerve(FiniteCategory.from_group(named_group("C3")), 4)


def test_act_degenerate_normalization():
    x = standard_simplex(2)
    top = (0, 1, 2)
    # s_0 then d_0 recovers the simplex
    degen = x.act(x.virtual(top), sigma_map(2, 0))
    assert degen == (top, (0, 0, 1, 2))
    back = x.act(degen, delta_map(2, 0))
    assert back == x.virtual(top)


monotone_maps = st.integers(0, 3).flatmap(
    lambda n: st.integers(0, 3).flatmap(
        lambda m: st.lists(st.integers(0, n), min_size=m + 1, max_size=m + 1)
        .map(lambda vs: tuple(sorted(vs)))))


@given(monotone_maps, monotone_maps)
@settings(max_examples=200, deadline=None)
def test_edgewise_map_is_functorial(alpha, beta):
    # compose when shapes allow: beta: [m]->[n], alpha: [n]->[p]
    n = max(beta) if beta else 0
    p = max(alpha) if alpha else 0
    alpha_full = tuple(min(v, p) for v in alpha)
    if len(alpha_full) < n + 1:
        alpha_full = alpha_full + (alpha_full[-1],) * (n + 1 - len(alpha_full))
    alpha_full = tuple(sorted(alpha_full))[:n + 1]
    m = len(beta) - 1
    composed = compose_maps(alpha_full, beta)
    lhs = edgewise_map(composed, m, p)
    rhs = compose_maps(edgewise_map(alpha_full, n, p),
                       edgewise_map(beta, m, n))
    assert lhs == rhs


def test_edgewise_map_identity():
    for n in range(4):
        assert edgewise_map(identity_map(n), n, n) == identity_map(2 * n + 1)


def test_edgewise_of_point_and_interval():
    e0 = edgewise_subdivision(standard_simplex(0))
    assert {n: e0.n_cells(n) for n in e0.simplices} == {0: 1}
    e1 = edgewise_subdivision(standard_simplex(1))
    assert e1.n_cells(0) == 3
    assert e1.n_cells(1) == 2
    # both edges end at the outer vertex (0, 1): the terminal object
    outer = ((0, 1), (0, 1))
    for edge in e1.cells(1):
        assert e1.faces[edge][0] == (outer, (0,))


@pytest.mark.parametrize("m", range(6))
def test_edgewise_vertex_count(m):
    e = edgewise_subdivision(standard_simplex(m))
    assert e.n_cells(0) == (m + 1) * (m + 2) // 2
    assert e.max_dim() == m


def test_edgewise_counts_against_raw_simplex_formula():
    # (Otilde X)_n = X_{2n+1}: count all virtuals, not only nondegenerate
    x = standard_simplex(2)
    e = edgewise_subdivision(x)
    for n in range(3):
        from math import comb
        monotone = comb((2 * n + 1) + 2 + 1, 2)  # monotone maps [2n+1] -> [2]
        total = len(e.all_virtuals(n))
        assert total == len(x.all_virtuals(2 * n + 1)) == monotone


def test_edgewise_requires_materialization():
    capped = nerve(FiniteCategory.from_group(named_group("C2")), 3)
    assert capped.complete_through == 3
    with pytest.raises(ResourceLimitError):
        edgewise_subdivision(capped, cap=2)
    edgewise_subdivision(capped, cap=1)


def test_edgewise_comparison_map_on_vertices():
    x = standard_simplex(3)
    e = edgewise_subdivision(x)
    for v in e.cells(0):
        left, right = edgewise_comparison(x, v, 0)
        (i,), _ = left[0], left[1]
        (j,), _ = right[0], right[1]
        assert v[0] == (i, j) or v[0] == (i,) and i == j


def test_edgewise_commutes_with_horn_unions():
    m, k = 3, 1
    horn = generalized_horn(m, {k})
    lhs = edgewise_subdivision(horn)
    face_subdivisions = [edgewise_subdivision(
        _face_complex(m, j)) for j in range(m + 1) if j != k]
    for n in range(m + 1):
        union = set()
        for sub in face_subdivisions:
            union.update(sub.cells(n))
        assert set(lhs.cells(n)) == union


def _face_complex(m, j):
    verts = [v for v in range(m + 1) if v != j]
    family = [t for r in range(1, m + 1)
              for t in itertools.combinations(verts, r)]
    from burnside_lab.simplicial import _subset_complex
    return _subset_complex(m, family)


# --- nerves ------------------------------------------------------------------


def test_nerve_of_chain_is_simplex():
    x = nerve(FiniteCategory.chain(3), 6)
    assert x.complete_through is None
    for n in range(4):
        assert x.n_cells(n) == standard_simplex(3).n_cells(n)


def test_nerve_of_discrete_category():
    x = nerve(FiniteCategory.discrete(["a", "b"]), 3)
    assert {n: x.n_cells(n) for n in x.simplices} == {0: 2}


def test_nerve_of_c3_counts_and_flag():
    x = nerve(FiniteCategory.from_group(named_group("C3")), 3)
    assert [x.n_cells(n) for n in range(4)] == [1, 2, 4, 8]
    assert x.complete_through == 3


def test_nerve_face_composition():
    cat = FiniteCategory.from_group(named_group("C2"))
    x = nerve(cat, 2)
    # the 2-chain (s, s) has inner face s*s = identity: a degenerate edge
    chain = x.cells(2)[0]
    y, eta = x.faces[chain][1]
    assert eta == (0, 0)  # collapsed onto a vertex


# --- twisted arrow categories -------------------------------------------------


def test_twisted_arrow_of_terminal_category():
    tw = twisted_arrow_category(FiniteCategory.chain(0))
    assert len(tw.objects) == 1
    assert tw.n_morphisms == 1


def test_twisted_arrow_of_interval():
    cat = FiniteCategory.chain(1)
    tw = twisted_arrow_category(cat)
    assert len(tw.objects) == 3
    nonid = tw.nonidentity_morphisms()
    # arrows 00 => 01 and 11 => 01; (0, 1) is terminal
    arrow_ends = sorted((cat.src[tw.objects[tw.src[m]]],
                         cat.tgt[tw.objects[tw.src[m]]],
                         cat.src[tw.objects[tw.tgt[m]]],
                         cat.tgt[tw.objects[tw.tgt[m]]]) for m in nonid)
    assert arrow_ends == [(0, 0, 0, 1), (1, 1, 0, 1)]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_twisted_arrow_terminal_object(m):
    cat = FiniteCategory.chain(m)
    tw = twisted_arrow_category(cat)
    terminal = [o for o in range(len(tw.objects))
                if all(len(tw.hom(x, o)) == 1 for x in range(len(tw.objects)))]
    assert len(terminal) == 1
    f = tw.objects[terminal[0]]
    assert (cat.src[f], cat.tgt[f]) == (0, m)


@pytest.mark.parametrize("make", [
    lambda: FiniteCategory.chain(1),
    lambda: FiniteCategory.chain(2),
    lambda: FiniteCategory.from_group(named_group("C2")),
    lambda: FiniteCategory.from_group(named_group("C3")),
])
def test_projection_is_discrete_opfibration(make):
    cat = make()
    assert is_discrete_opfibration(twisted_arrow_projection(cat))


def test_non_opfibration_detected():
    # collapse functor tw([1]) -> [0] x [0] has non-unique lifts
    cat = FiniteCategory.chain(1)
    tw = twisted_arrow_category(cat)
    point = FiniteCategory.chain(0)
    target = FiniteCategory.product(point.op(), point)
    collapse = CatFunctor(tw, target, (0,) * len(tw.objects),
                          (0,) * tw.n_morphisms)
    assert not is_discrete_opfibration(collapse)


@pytest.mark.parametrize("cap,make", [
    (3, lambda: FiniteCategory.chain(1)),
    (3, lambda: FiniteCategory.chain(3)),
    (3, lambda: FiniteCategory.from_group(named_group("C2"))),
    (3, lambda: FiniteCategory.from_group(named_group("C3"))),
])
def test_tw_nerve_is_edgewise_subdivision(cap, make):
    assert tw_nerve_edgewise_agree(make(), cap)


def test_tw_nerve_agreement_on_poset_corpus():
    assert len(all_posets(4)) == 16
    assert len(all_posets(5)) == 63
    for rel in all_posets(4):
        assert tw_nerve_edgewise_agree(poset_category(rel, 4), 3)


# --- homology ----------------------------------------------------------------


def test_homology_of_simplices_vanishes():
    for m in range(4):
        h = homology(standard_simplex(m), min(m, 2))
        assert all(v == [] for v in h.values())


def test_homology_of_sphere():
    h = homology(boundary_simplex(2), 1)
    assert h[0] == []
    assert h[1] == [0]
    h3 = homology(boundary_simplex(3), 2)
    assert h3[2] == [0]


def test_homology_torsion_rp2():
    # minimal-ish RP^2 triangulation: 6 vertices, 15 edges, 10 faces
    faces = [(0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
             (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5)]
    family = set()
    for f in faces:
        for r in range(1, 4):
            family.update(itertools.combinations(f, r))
    from burnside_lab.simplicial import _subset_complex
    x = _subset_complex(5, family)
    h = homology(x, 2)
    assert h[0] == []
    assert h[1] == [2]
    assert h[2] == []


@pytest.mark.parametrize("m", range(6))
def test_edgewise_subdivision_weakly_contractible(m):
    e = edgewise_subdivision(standard_simplex(m))
    h = homology(e, min(3, max(e.max_dim(), 0)))
    assert all(v == [] for v in h.values())


def test_homology_requires_materialization():
    capped = nerve(FiniteCategory.from_group(named_group("C2")), 2)
    with pytest.raises(ResourceLimitError):
        homology(capped, 2)


def test_chain_complex_boundary_squares_to_zero():
    chain_complex(edgewise_subdivision(standard_simplex(3)), 2)


# --- generalized horns --------------------------------------------------------


def test_generalized_horn_is_standard_horn_for_singleton():
    m, k = 3, 1
    horn = generalized_horn(m, {k})
    full = standard_simplex(m)
    missing = {n: set(full.cells(n)) - set(horn.cells(n))
               for n in range(m + 1)}
    assert missing[3] == {(0, 1, 2, 3)}
    assert missing[2] == {(0, 2, 3)}  # the face opposite vertex 1


def test_generalized_horn_rejects_bad_s():
    with pytest.raises(InputError):
        generalized_horn(3, set())
    with pytest.raises(InputError):
        generalized_horn(3, {0, 1, 2, 3})
    with pytest.raises(InputError):
        generalized_horn(3, {4})


def test_generalized_horn_union_of_faces():
    horn = generalized_horn(3, {1, 2})
    # union of the faces skipping 0 and skipping 3
    assert (1, 2, 3) in horn.cells(2)
    assert (0, 1, 2) in horn.cells(2)
    assert (0, 1, 3) not in horn.cells(2)
    assert (0, 2, 3) not in horn.cells(2)
