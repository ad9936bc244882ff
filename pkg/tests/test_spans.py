import random

import pytest

from burnside_lab.errors import InputError
from burnside_lab.groups import enumerate_subgroups, named_group, weyl_group
from burnside_lab.gsets import (GMap, coproduct, empty_gset, equivariant_maps,
                                iso_class_reps, regular_gset,
                                transitive_models, trivial_gset)
from burnside_lab.spans import (Span, SpanClass, TripleStructure,
                                atomic_span_classes, base_change_check,
                                check_triple_adequate, compose,
                                compose_concrete, direct_sum_check, dualize,
                                embed_contravariant, embed_covariant,
                                identity_class, is_pullback_square,
                                maximal_triple, span_class, span_classes,
                                zero_class)


def c2_objects():
    return iso_class_reps(named_group("C2"), 3)


def test_identity_is_a_unit():
    c2 = named_group("C2")
    for x in c2_objects():
        for y in c2_objects():
            ident_x, ident_y = identity_class(x), identity_class(y)
            for atom in atomic_span_classes(x, y):
                cls = SpanClass(x, y, (atom,))
                assert compose(ident_x, cls) == cls
                assert compose(cls, ident_y) == cls


def test_compose_with_identity_leg_spans():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    fl = embed_covariant(f)
    ident = identity_class(pt)
    assert compose(fl, ident) == fl


def test_atomic_composition_matches_concrete_pullback():
    """Every atomic pair composed two ways: through the memoized atomic
    route and by one honest pullback of representatives."""
    c2 = named_group("C2")
    objs = c2_objects()
    for x in objs:
        for y in objs:
            for a1 in atomic_span_classes(x, y):
                s1 = SpanClass(x, y, (a1,))
                rep1 = s1.representative()
                for z in objs:
                    for a2 in atomic_span_classes(y, z):
                        s2 = SpanClass(y, z, (a2,))
                        direct = span_class(
                            compose_concrete(rep1, s2.representative()))
                        assert compose(s1, s2) == direct


def test_composition_distributes_over_apex_coproducts():
    """Pullback of a coproduct apex = coproduct of pullbacks, on concrete
    spans (the bi-additivity that the atomic route relies on)."""
    c2 = named_group("C2")
    objs = c2_objects()
    rng = random.Random(7)
    cases = 0
    for x in objs[:4]:
        for y in objs[:4]:
            classes = span_classes(x, y, 3)
            for z in objs[:4]:
                targets = span_classes(y, z, 3)
                if not classes or not targets:
                    continue
                for _ in range(4):
                    s1 = rng.choice(classes)
                    s2 = rng.choice(targets)
                    direct = span_class(compose_concrete(
                        s1.representative(), s2.representative()))
                    assert direct == compose(s1, s2)
                    cases += 1
    assert cases > 0


def test_composition_independent_of_relabeling():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    total, _ = coproduct([free, pt])
    rng = random.Random(3)
    for x in [free, total]:
        for s in span_classes(x, x, 3)[:6]:
            rep = s.representative()
            apex = rep.apex
            perm = list(range(apex.n_points))
            rng.shuffle(perm)
            inv = [0] * len(perm)
            for i, p in enumerate(perm):
                inv[p] = i
            from burnside_lab.gsets import GSet
            shuffled = GSet(apex.group, apex.n_points,
                            [tuple(perm[a[inv[q]]] for q in range(apex.n_points))
                             for a in apex.gen_action])
            left = GMap(shuffled, rep.source,
                        [rep.left(inv[q]) for q in range(apex.n_points)])
            right = GMap(shuffled, rep.target,
                         [rep.right(inv[q]) for q in range(apex.n_points)])
            assert span_class(Span(left, right)) == s


def test_associativity_small_exhaustive():
    c3 = named_group("C3")
    objs = iso_class_reps(c3, 3)
    for x in objs:
        for y in objs:
            aa = [SpanClass(x, y, (a,)) for a in atomic_span_classes(x, y)]
            for z in objs:
                bb = [SpanClass(y, z, (a,)) for a in atomic_span_classes(y, z)]
                for w in objs[:3]:
                    cc = [SpanClass(z, w, (a,))
                          for a in atomic_span_classes(z, w)]
                    for s1 in aa[:4]:
                        for s2 in bb[:4]:
                            left = compose(s1, s2)
                            for s3 in cc[:4]:
                                assert compose(left, s3) == \
                                    compose(s1, compose(s2, s3))


def test_zero_object():
    c2 = named_group("C2")
    e = empty_gset(c2)
    x = regular_gset(c2)
    assert span_classes(e, x, 4) == [zero_class(e, x)]
    assert span_classes(x, e, 4) == [zero_class(x, e)]
    assert compose(zero_class(x, e), zero_class(e, x)) == zero_class(x, x)


def test_spans_with_empty_apex_are_equal():
    c2 = named_group("C2")
    x = regular_gset(c2)
    e = empty_gset(c2)
    s = span_class(Span(GMap(e, x, ()), GMap(e, x, ())))
    assert s == zero_class(x, x)
    assert s.is_zero


def test_direct_sum_biproduct_identities():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    for x, y in [(free, pt), (pt, pt), (free, free)]:
        report = direct_sum_check(x, y)
        assert report["ok"], report
    e = empty_gset(c2)
    report = direct_sum_check(e, free)
    assert report["ok"], report


def test_aut_counts():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    # identity span: only the identity commutes with both identity legs
    assert identity_class(free).aut_count() == 1
    # pt <- free -> pt: all of Aut(free) = Weyl = C2 commutes
    to_pt = GMap(free, pt, [0, 0])
    loop = span_class(Span(to_pt, to_pt))
    assert loop.aut_count() == 2
    # multiplicities contribute symmetric-group factors
    doubled = SpanClass(pt, pt, loop.atoms * 2)
    assert doubled.aut_count() == 8  # (2^2) * 2!


def test_aut_count_matches_bruteforce():
    c2 = named_group("C2")
    objs = c2_objects()
    from burnside_lab.gsets import aut_group
    for x in objs[:4]:
        for y in objs[:4]:
            for s in span_classes(x, y, 3)[:8]:
                rep = s.representative()
                count = 0
                for phi in aut_group(rep.apex).elements:
                    if all(rep.left(phi[p]) == rep.left(p)
                           and rep.right(phi[p]) == rep.right(p)
                           for p in range(rep.apex.n_points)):
                        count += 1
                assert count == s.aut_count()


def test_aut_of_point_spans_is_weyl():
    for name in ["C2", "C3", "S3", "D4"]:
        group = named_group(name)
        pt = trivial_gset(group, 1)
        for cls in enumerate_subgroups(group):
            model = transitive_models(group)[cls.index]
            to_pt = GMap(model, pt, [0] * model.n_points)
            s = span_class(Span(to_pt, to_pt))
            assert s.aut_count() == weyl_group(group, cls.representative).order


def test_embeddings_are_functorial():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    two = trivial_gset(c2, 2)
    f = GMap(free, two, [0, 0])
    g = GMap(two, pt, [0, 0])
    gf = g.compose(f)
    assert compose(embed_covariant(f), embed_covariant(g)) == \
        embed_covariant(gf)
    assert compose(embed_contravariant(g), embed_contravariant(f)) == \
        embed_contravariant(gf)
    ident = GMap.identity(free)
    assert embed_covariant(ident) == identity_class(free)
    assert embed_contravariant(ident) == identity_class(free)


def test_pushpull_composite_structure():
    # f^* f_* for f: [G/e] -> [G/G] has apex G x G/e = |G| free orbits
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    back_forth = compose(embed_covariant(f), embed_contravariant(f))
    assert len(back_forth.atoms) == 2
    assert all(a[0] == 0 for a in back_forth.atoms)


def test_duality_involution_and_embedding_swap():
    c2 = named_group("C2")
    objs = c2_objects()
    for x in objs[:4]:
        for y in objs[:4]:
            for s in span_classes(x, y, 3):
                assert dualize(dualize(s)) == s
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    assert dualize(embed_covariant(f)) == embed_contravariant(f)


def test_duality_reverses_composition():
    c2 = named_group("C2")
    objs = c2_objects()
    for x in objs[:3]:
        for y in objs[:3]:
            for a1 in atomic_span_classes(x, y)[:5]:
                s1 = SpanClass(x, y, (a1,))
                for z in objs[:3]:
                    for a2 in atomic_span_classes(y, z)[:5]:
                        s2 = SpanClass(y, z, (a2,))
                        assert dualize(compose(s1, s2)) == \
                            compose(dualize(s2), dualize(s1))


def test_dualize_checks_predicates():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    triple = TripleStructure(c2, ingressive="all", egressive="injective")
    # f_* has egressive-side identity, fine; its dual has left leg f which
    # is not injective
    with pytest.raises(InputError):
        dualize(embed_covariant(f, triple), triple)


def test_span_class_validates_predicates():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    triple = TripleStructure(c2, ingressive="injective", egressive="all")
    with pytest.raises(InputError):
        span_class(Span(GMap.identity(free), f), triple)
    span_class(Span(f, GMap.identity(free)), triple)


def test_base_change_identity_square():
    c2 = named_group("C2")
    free = regular_gset(c2)
    ident = GMap.identity(free)
    assert base_change_check(ident, ident, ident, ident)


def test_base_change_product_square():
    c2 = named_group("C2")
    x = regular_gset(c2)
    y = trivial_gset(c2, 2)
    pt = trivial_gset(c2, 1)
    from burnside_lab.gsets import product
    prod, p1, p2 = product(x, y)
    assert base_change_check(p1, p2, GMap(x, pt, [0, 0]),
                             GMap(y, pt, [0, 0]))


def test_base_change_exhaustive_small():
    c2 = named_group("C2")
    objs = iso_class_reps(c2, 2)
    checked = 0
    for x in objs:
        for y in objs:
            for z in objs:
                for f in equivariant_maps(x, z):
                    for g in equivariant_maps(y, z):
                        from burnside_lab.gsets import pullback
                        apex, p1, p2 = pullback(f, g)
                        assert base_change_check(p1, p2, f, g)
                        checked += 1
    assert checked > 10


def test_base_change_rejects_non_pullback():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    e = empty_gset(c2)
    with pytest.raises(InputError):
        base_change_check(GMap(e, free, ()), GMap(e, free, ()), f, f)


def test_is_pullback_square_detects_failure():
    c2 = named_group("C2")
    free = regular_gset(c2)
    pt = trivial_gset(c2, 1)
    f = GMap(free, pt, [0, 0])
    # free -(id, f)-> is a cone but not the universal one for (f, f)
    assert not is_pullback_square(GMap.identity(free), GMap.identity(free),
                                  f, f)


def test_adequacy_reports():
    c2 = named_group("C2")
    maximal = check_triple_adequate(maximal_triple(c2), max_points=3)
    assert maximal["adequate"] and maximal["disjunctive"]
    inj = check_triple_adequate(TripleStructure(c2, "injective", "all"),
                                max_points=3)
    assert inj["adequate"]
    assert not inj["disjunctive"]  # overlapping-image coproducts break it
    assert any("coproduct" in v["axiom"] for v in inj["violations"])
    iso = check_triple_adequate(TripleStructure(c2, "iso", "iso"),
                                max_points=3)
    assert iso["adequate"]


def test_surjective_triple_is_adequate():
    c2 = named_group("C2")
    surj = check_triple_adequate(TripleStructure(c2, "all", "surjective"),
                                 max_points=3)
    assert surj["adequate"]


def test_unknown_predicate_rejected():
    with pytest.raises(InputError):
        TripleStructure(named_group("C2"), "open", "all")


def test_hom_monoid_freeness():
    """Canonical atom multisets give unique decompositions: the hom monoid
    is free on the atoms (group completion is by basis bookkeeping)."""
    c2 = named_group("C2")
    x = trivial_gset(c2, 2)
    seen = {}
    for s in span_classes(x, x, 4):
        key = s.atoms
        assert key not in seen
        seen[key] = s
