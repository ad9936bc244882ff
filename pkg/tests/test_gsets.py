import itertools

import pytest

from burnside_lab.errors import InputError
from burnside_lab.groups import enumerate_subgroups, named_group, weyl_group
from burnside_lab.gsets import (GMap, GSet, aut_group, coproduct, coset_gset,
                                count_iso_classes_bruteforce, empty_gset,
                                equivariant_maps, find_iso, fixed_points,
                                iso_class_multisets, iso_class_reps,
                                model_of_multiset, product, pullback,
                                pullback_mediate, regular_gset, sub_gset,
                                transitive_models, trivial_gset)


def test_action_validation_catches_relation_violation():
    c2 = named_group("C2")
    with pytest.raises(InputError):
        GSet(c2, 3, [(1, 2, 0)])  # generator of order 2 acting with order 3


def test_regular_gset_single_free_orbit():
    s3 = named_group("S3")
    reg = regular_gset(s3)
    assert reg.n_points == 6
    assert reg.canonical_form() == (0,)


def test_coproduct_concatenates_multisets():
    c2 = named_group("C2")
    x = regular_gset(c2)
    y = trivial_gset(c2, 2)
    total, (ix, iy) = coproduct([x, y])
    assert total.canonical_form() == tuple(sorted(x.canonical_form()
                                                  + y.canonical_form()))
    assert [total.act(g, ix(0)) for g in c2.elements] == \
        [ix(x.act(g, 0)) for g in c2.elements]


def test_coset_gset_stabilizer_class():
    s3 = named_group("S3")
    table = enumerate_subgroups(s3)
    c2 = next(c for c in table if c.order == 2)
    x = coset_gset(s3, c2.representative)
    dec = x.decompose()
    assert len(dec.orbits) == 1
    assert dec.multiset == (c2.index,)


def test_pullback_over_point_is_product():
    c2 = named_group("C2")
    x = regular_gset(c2)
    y = trivial_gset(c2, 2)
    prod, p1, p2 = product(x, y)
    assert prod.n_points == x.n_points * y.n_points
    assert prod.canonical_form() == (0, 0)  # two free orbits


def test_pullback_of_identity_gives_source():
    c2 = named_group("C2")
    x = regular_gset(c2)
    y = trivial_gset(c2, 1)
    f = GMap(x, y, [0, 0])
    apex, p1, p2 = pullback(GMap.identity(y), f)
    assert find_iso(apex, x) is not None
    assert [p2(i) for i in range(apex.n_points)] == \
        [p2(i) for i in range(apex.n_points)]


def test_pullback_universal_property_exhaustive():
    c2 = named_group("C2")
    objs = iso_class_reps(c2, 3)
    z = model_of_multiset(c2, (0, 1))  # free + fixed
    for x in objs:
        for f in equivariant_maps(x, z):
            for y in objs:
                for g in equivariant_maps(y, z):
                    apex, p1, p2 = pullback(f, g)
                    for w in iso_class_reps(c2, 2):
                        for h1 in equivariant_maps(w, x):
                            for h2 in equivariant_maps(w, y):
                                if any(f(h1(p)) != g(h2(p))
                                       for p in range(w.n_points)):
                                    continue
                                u = pullback_mediate(apex, p1, p2, h1, h2)
                                assert p1.compose(u).images == h1.images
                                assert p2.compose(u).images == h2.images
                                # uniqueness
                                others = [
                                    cand for cand in equivariant_maps(w, apex)
                                    if p1.compose(cand).images == h1.images
                                    and p2.compose(cand).images == h2.images]
                                assert others == [u]


def test_pullback_symmetric_in_arguments():
    s3 = named_group("S3")
    pt = trivial_gset(s3, 1)
    x = coset_gset(s3, enumerate_subgroups(s3)[1].representative)
    y = coset_gset(s3, enumerate_subgroups(s3)[2].representative)
    f = GMap(x, pt, [0] * x.n_points)
    g = GMap(y, pt, [0] * y.n_points)
    one, _, _ = pullback(f, g)
    two, _, _ = pullback(g, f)
    assert one.canonical_form() == two.canonical_form()


def test_coproducts_disjoint_and_universal():
    c2 = named_group("C2")
    x = regular_gset(c2)
    y = trivial_gset(c2, 1)
    total, (ix, iy) = coproduct([x, y])
    apex, _, _ = pullback(ix, iy)
    assert apex.n_points == 0


def test_find_iso_identity_and_conjugates():
    d4 = named_group("D4")
    table = enumerate_subgroups(d4)
    cls = next(c for c in table if len(c.conjugates) > 1)
    x = coset_gset(d4, cls.conjugates[0])
    y = coset_gset(d4, cls.conjugates[1])
    assert find_iso(x, x) is not None
    iso = find_iso(x, y)
    assert iso is not None and iso.is_iso()


def test_find_iso_certified_mismatch():
    c4 = named_group("C4")
    table = enumerate_subgroups(c4)
    c2 = next(c for c in table if c.order == 2).representative
    free = regular_gset(c4)
    two_cosets, _ = coproduct([coset_gset(c4, c2)] * 2)
    assert free.n_points == two_cosets.n_points
    assert find_iso(free, two_cosets) is None


def test_fixed_points_counts():
    s3 = named_group("S3")
    table = enumerate_subgroups(s3)
    c2 = next(c for c in table if c.order == 2).representative
    x = coset_gset(s3, c2)
    assert fixed_points(x, s3.trivial_subgroup()).count == x.n_points
    assert fixed_points(trivial_gset(s3, 1), c2).count == 1
    assert fixed_points(x, c2).count == 1


def test_fixed_points_quotient_action_requires_normal():
    s3 = named_group("S3")
    table = enumerate_subgroups(s3)
    c2 = next(c for c in table if c.order == 2).representative
    fp = fixed_points(regular_gset(s3), c2)
    with pytest.raises(InputError):
        fp.quotient_gset()


def test_fixed_points_weyl_action():
    c4 = named_group("C4")
    table = enumerate_subgroups(c4)
    c2 = next(c for c in table if c.order == 2).representative
    x = coset_gset(c4, c2)
    fp = fixed_points(x, c2)
    assert fp.count == 2
    wset, quot = fp.weyl_gset()
    assert wset.group.order == 2
    assert wset.canonical_form() == (0,)  # regular orbit of the Weyl group


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"])
def test_aut_of_transitive_is_weyl_sized(name):
    group = named_group(name)
    for cls in enumerate_subgroups(group):
        model = transitive_models(group)[cls.index]
        assert aut_group(model).order == weyl_group(group,
                                                    cls.representative).order


def test_aut_point_and_trivial_orbits():
    s3 = named_group("S3")
    assert aut_group(trivial_gset(s3, 1)).order == 1
    assert aut_group(trivial_gset(s3, 3)).order == 6  # symmetric group S3


def test_equivariant_maps_counts():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    assert len(equivariant_maps(free, free)) == 2
    assert len(equivariant_maps(free, pt)) == 1
    assert len(equivariant_maps(pt, free)) == 0
    assert len(equivariant_maps(pt, pt)) == 1


def test_gmap_validation():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 2)
    with pytest.raises(InputError):
        GMap(free, free, [0, 0])  # not equivariant
    GMap(free, pt, [1, 1])


def test_iso_class_counts_match_bruteforce():
    for name in ["C2", "C3", "S3"]:
        group = named_group(name)
        sizes = [m.n_points for m in transitive_models(group)]
        for n in range(4):
            multisets = sum(1 for ms in iso_class_multisets(group, n)
                            if sum(sizes[c] for c in ms) == n)
            assert multisets == count_iso_classes_bruteforce(group, n)


def test_sub_gset_requires_invariance():
    c2 = named_group("C2")
    free = regular_gset(c2)
    with pytest.raises(InputError):
        sub_gset(free, [0])
    sub, incl = sub_gset(free, [0, 1])
    assert sub.n_points == 2


def test_empty_gset_is_first_class():
    c2 = named_group("C2")
    e = empty_gset(c2)
    assert e.is_empty and e.canonical_form() == ()
    assert len(equivariant_maps(e, regular_gset(c2))) == 1


def test_gset_json_round_trip():
    s3 = named_group("S3")
    x = coset_gset(s3, enumerate_subgroups(s3)[1].representative)
    again = GSet.from_json(x.to_json())
    assert again.gen_action == x.gen_action
