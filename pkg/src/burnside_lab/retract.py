"""Retractive G-sets over a base, their K_0, and the decategorified
consequences: complements of summand inclusions are unique up to
canonical isomorphism, K_0 of the retractive category over S is the
group-completed span module A(1, S) (naturally in span classes), the
unfurled pushforward/pullback calculus satisfies Beck-Chevalley on K_0,
and the monoid of G-sets is free on the transitive classes (tom Dieck).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .gsets import (GMap, aut_group, coproduct, empty_gset,
                    equivariant_maps, iso_class_multisets, pullback,
                    sub_gset, transitive_models, trivial_gset)
from .groups import enumerate_subgroups, weyl_group
from .intlinalg import IMat
from .spans import (SpanClass, _orbit_atom, atomic_span_classes, compose)


# --- summand inclusions and complements -------------------------------------


def is_summand_inclusion(i_map):
    """In G-sets a map is a summand inclusion iff it is injective."""
    return i_map.is_injective()


def complement(i_map):
    """The complementary sub-G-set of a summand inclusion, with its
    inclusion and the witnessing isomorphism X u U -> W."""
    if not is_summand_inclusion(i_map):
        raise InputError("not a summand inclusion")
    w_set = i_map.target
    rest = sorted(set(range(w_set.n_points)) - set(i_map.images))
    u_set, u_incl = sub_gset(w_set, rest)
    total, (inj_x, inj_u) = coproduct([i_map.source, u_set])
    witness_images = [None] * total.n_points
    for x in range(i_map.source.n_points):
        witness_images[inj_x(x)] = i_map(x)
    for u in range(u_set.n_points):
        witness_images[inj_u(u)] = u_incl(u)
    witness = GMap(total, w_set, witness_images)
    assert witness.is_iso()
    return u_set, u_incl, witness


def complements_pairwise_iso(w_set):
    """Every two complements of one summand inclusion into W are linked by
    an explicit isomorphism commuting over W (the contractibility shadow).

    A complement of i is any injective equivariant map onto the points W
    misses; all of them are enumerated and compared pairwise."""
    group = w_set.group
    candidates = _bounded_sums(group, w_set.n_points)
    for dom in candidates:
        for inc in equivariant_maps(dom, w_set):
            if not inc.is_injective():
                continue
            missing = frozenset(range(w_set.n_points)) - set(inc.images)
            comps = []
            for dom2 in candidates:
                if dom2.n_points != len(missing):
                    continue
                comps.extend(m for m in equivariant_maps(dom2, w_set)
                             if m.is_injective()
                             and set(m.images) == missing)
            for a in comps:
                for b in comps:
                    where = {b(q): q for q in range(b.source.n_points)}
                    images = [where[a(p)] for p in range(a.source.n_points)]
                    iso = GMap(a.source, b.source, images)
                    if not iso.is_iso():
                        return False
                    if any(b(iso(p)) != a(p)
                           for p in range(a.source.n_points)):
                        return False
    return True


def _bounded_sums(group, max_points):
    sources = [m for m in transitive_models(group)
               if m.n_points <= max_points]
    out = [empty_gset(group)]
    for r in range(1, len(sources) + max_points):
        for combo in itertools.combinations_with_replacement(
                range(len(sources)), r):
            if sum(sources[c].n_points for c in combo) <= max_points:
                out.append(coproduct([sources[c] for c in combo])[0])
    return out


@dataclass(frozen=True)
class RetractiveObject:
    """S' = S u U retracting onto S; stored by the complement (S, U, u)."""
    base: GSet
    part: GSet
    retraction_part: GMap  # u: U -> S

    def total(self):
        """Reconstruct the retract diagram S -> S u U -> S."""
        total, (inj_s, inj_u) = coproduct([self.base, self.part])
        retraction = [None] * total.n_points
        for s in range(self.base.n_points):
            retraction[inj_s(s)] = s
        for u in range(self.part.n_points):
            retraction[inj_u(u)] = self.retraction_part(u)
        return total, inj_s, GMap(total, self.base, retraction)


class K0Basis:
    """K_0 of the retractive category over S: free on iso classes of
    (transitive orbit, map class to S), canonicalized like span atoms."""

    def __init__(self, base):
        self.group = base.group
        self.base = base
        point = trivial_gset(self.group, 1)
        self.atoms = atomic_span_classes(point, base)
        self.full_index = {a: i for i, a in enumerate(self.atoms)}

    @property
    def rank(self):
        return len(self.atoms)

    def vector_of(self, obj):
        """Class of a retractive object (S, U, u) in K_0."""
        if not obj.base.same_as(self.base):
            raise InputError("retractive object over a different base")
        u_set, u_map = obj.part, obj.retraction_part
        vec = [0] * self.rank
        to_point = [0] * u_set.n_points
        for orbit in u_set.orbits():
            atom = _orbit_atom(self.group, u_set, orbit, to_point,
                               u_map.images)
            vec[self.full_index[atom]] += 1
        return tuple(vec)

    def atom_object(self, i):
        """A concrete retractive object representing one basis atom."""
        cls, _, v_tab = self.atoms[i]
        model = transitive_models(self.group)[cls]
        return RetractiveObject(self.base, model,
                                GMap(model, self.base, v_tab))


def k0_retractive(base):
    return K0Basis(base)


def k0_pushforward(f_map, k0_src, k0_tgt):
    """f_!: (U, u) over X goes to (U, f o u) over Y, on K_0 bases."""
    if not f_map.source.same_as(k0_src.base) or \
            not f_map.target.same_as(k0_tgt.base):
        raise InputError("pushforward endpoints do not match the bases")
    cols = []
    for i in range(k0_src.rank):
        obj = k0_src.atom_object(i)
        image = RetractiveObject(k0_tgt.base, obj.part,
                                 f_map.compose(obj.retraction_part))
        cols.append(k0_tgt.vector_of(image))
    return IMat(k0_tgt.rank, k0_src.rank,
                [[cols[j][i] for j in range(k0_src.rank)]
                 for i in range(k0_tgt.rank)])


def k0_pullback(f_map, k0_tgt, k0_src):
    """f^*: (V, v) over Y goes to (V x_Y X, projection) over X."""
    if not f_map.source.same_as(k0_src.base) or \
            not f_map.target.same_as(k0_tgt.base):
        raise InputError("pullback endpoints do not match the bases")
    cols = []
    for i in range(k0_tgt.rank):
        obj = k0_tgt.atom_object(i)
        apex, p_v, p_x = pullback(obj.retraction_part, f_map)
        image = RetractiveObject(k0_src.base, apex, p_x)
        cols.append(k0_src.vector_of(image))
    return IMat(k0_src.rank, k0_tgt.rank,
                [[cols[j][i] for j in range(k0_tgt.rank)]
                 for i in range(k0_src.rank)])


def k0_span_matrix(span_cls, k0_by_id=None, broken_pushforward=False):
    """K_0(g_! f^*) for a span class X <-f- U -g-> Y, summed over apex
    orbits.  `broken_pushforward` deliberately corrupts g_! (mutation
    probe for the Beck-Chevalley tests)."""
    x_set, y_set = span_cls.source, span_cls.target
    k0x = _k0_cached(x_set, k0_by_id)
    k0y = _k0_cached(y_set, k0_by_id)
    rep = span_cls.representative()
    k0u = K0Basis(rep.apex)
    pull = k0_pullback(rep.left, k0x, k0u)
    push = k0_pushforward(rep.right, k0u, k0y)
    if broken_pushforward and push.rows and push.cols:
        data = [list(r) for r in push.data]
        data[0][0] += 1
        push = IMat(push.rows, push.cols, data)
    return push @ pull


def _k0_cached(base, registry):
    if registry is None:
        return K0Basis(base)
    key = base.key()
    if key not in registry:
        registry[key] = K0Basis(base)
    return registry[key]


# --- the Burnside-Mackey theorem at K_0 -------------------------------------


def verify_burnside_theorem(group, base, span_budget=4, targets=None):
    """K_0(R_S) = A(1, S) naturally: the bases agree atom-by-atom, and for
    every atomic span class w: S -> T the square

        K_0(R_S) --K_0(g_! f^*)--> K_0(R_T)
           |                          |
        A(1, S) --compose with w--> A(1, T)

    commutes."""
    point = trivial_gset(group, 1)
    k0s = K0Basis(base)
    module_basis = atomic_span_classes(point, base)
    report = {"base_points": base.n_points,
              "rank": k0s.rank,
              "basis_matches": tuple(k0s.atoms) == tuple(module_basis),
              "naturality_failures": [],
              "pairs_checked": 0}
    registry = {}
    if targets is None:
        targets = [m for m in transitive_models(group)
                   if m.n_points <= span_budget]
    for target in list(targets) + [base]:
        k0t = _k0_cached(target, registry)
        for atom in atomic_span_classes(base, target):
            omega = SpanClass(base, target, (atom,))
            mat = k0_span_matrix(omega, registry)
            for i in range(k0s.rank):
                col = [mat.data[r][i] for r in range(mat.rows)]
                source_class = SpanClass(point, base, (k0s.atoms[i],))
                composed = compose(source_class, omega)
                rhs = [0] * k0t.rank
                for a in composed.atoms:
                    rhs[k0t.full_index[a]] += 1
                report["pairs_checked"] += 1
                if col != rhs:
                    report["naturality_failures"].append(
                        {"span_atom": atom, "basis_atom": k0s.atoms[i],
                         "k0_image": col, "span_image": rhs})
    report["ok"] = report["basis_matches"] and not report["naturality_failures"]
    return report


# --- unfurling at K_0: Beck-Chevalley functoriality --------------------------


@dataclass
class UnfurlReport:
    group_name: str
    max_points: int
    pairs_checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def unfurl_functoriality_check(group, max_points=4, mutate=False,
                               objects=None):
    """For all composable atomic span classes w1: X -> Y, w2: Y -> Z over
    objects with at most max_points points, K_0 of the composed span
    equals the composite of the K_0 matrices (the Beck-Chevalley
    identity).  `mutate` corrupts one pushforward and must be caught."""
    from .gsets import iso_class_reps
    if objects is None:
        objects = iso_class_reps(group, max_points)
    registry = {}
    matrices = {}
    failures = []
    pairs = 0
    for x_set in objects:
        for y_set in objects:
            for atom in atomic_span_classes(x_set, y_set):
                cls = SpanClass(x_set, y_set, (atom,))
                matrices[(x_set.key(), y_set.key(), atom)] = k0_span_matrix(
                    cls, registry, broken_pushforward=mutate)
    for x_set in objects:
        for y_set in objects:
            for a1 in atomic_span_classes(x_set, y_set):
                m1 = matrices[(x_set.key(), y_set.key(), a1)]
                cls1 = SpanClass(x_set, y_set, (a1,))
                for z_set in objects:
                    for a2 in atomic_span_classes(y_set, z_set):
                        m2 = matrices[(y_set.key(), z_set.key(), a2)]
                        composed = compose(cls1, SpanClass(y_set, z_set, (a2,)))
                        total = IMat.zero(_k0_cached(z_set, registry).rank,
                                          _k0_cached(x_set, registry).rank)
                        for atom in composed.atoms:
                            total = total + matrices[
                                (x_set.key(), z_set.key(), atom)]
                        pairs += 1
                        if total != m2 @ m1:
                            failures.append(
                                {"w1": a1, "w2": a2,
                                 "X": x_set.canonical_form(),
                                 "Y": y_set.canonical_form(),
                                 "Z": z_set.canonical_form()})
    return UnfurlReport(group.name, max_points, pairs, failures)


# --- tom Dieck: free monoid of G-sets and the splitting rank -----------------


def splitting_rank(group):
    """Rank of pi_0 S_G(G/G) = number of subgroup conjugacy classes."""
    return len(enumerate_subgroups(group))


def tomdieck_monoid_check(group, max_n=4, bruteforce_n=None):
    """(a) iso classes of n-point G-sets biject with orbit-class multisets
    (checked by independent brute-force enumeration of actions up to
    bruteforce_n); (b) splitting rank = subgroup class count = rank A(G);
    (c) Aut[G/H] = Weyl(H) via an explicit isomorphism for every class."""
    from .gsets import count_iso_classes_bruteforce
    from .rings import burnside_ring
    report = {"group": group.name, "ok": True, "details": {}}
    sizes = [m.n_points for m in transitive_models(group)]
    multiset_counts = {}
    for n in range(max_n + 1):
        multiset_counts[n] = sum(
            1 for ms in iso_class_multisets(group, n)
            if sum(sizes[c] for c in ms) == n)
    report["details"]["multiset_counts"] = multiset_counts
    if bruteforce_n is None:
        bruteforce_n = min(max_n, 4)
    brute = {n: count_iso_classes_bruteforce(group, n)
             for n in range(bruteforce_n + 1)}
    report["details"]["bruteforce_counts"] = brute
    if any(brute[n] != multiset_counts[n] for n in brute):
        report["ok"] = False
    ring = burnside_ring(group)
    report["details"]["splitting_rank"] = splitting_rank(group)
    if splitting_rank(group) != ring.rank:
        report["ok"] = False
    aut_checks = {}
    table = enumerate_subgroups(group)
    for cls in table:
        model = transitive_models(group)[cls.index]
        aut = aut_group(model)
        weyl = weyl_group(group, cls.representative)
        matched = aut.order == weyl.order and _groups_isomorphic(aut, weyl.group)
        aut_checks[cls.index] = matched
        if not matched:
            report["ok"] = False
    report["details"]["aut_equals_weyl"] = aut_checks
    return report


def _groups_isomorphic(g1, g2):
    """Explicit isomorphism search for tiny groups (used for Aut vs Weyl)."""
    from .groups import closure
    if g1.order != g2.order:
        return False
    gens = []
    cur = {g1.identity}
    for e in g1.elements:
        if e not in cur:
            gens.append(e)
            cur = closure(g1.degree, gens)
    if not gens:
        return True
    orders = [g1.element_order(g) for g in gens]
    candidates = [[h for h in g2.elements if g2.element_order(h) == o]
                  for o in orders]
    for images in itertools.product(*candidates):
        hom = _extend_hom(g1, g2, gens, images)
        if hom is not None and len(set(hom.values())) == g2.order:
            return True
    return False


def _extend_hom(g1, g2, gens, images):
    from .groups import pmul
    hom = {g1.identity: g2.identity}
    frontier = [g1.identity]
    gen_img = dict(zip(gens, images))
    while frontier:
        nxt = []
        for h in frontier:
            for gen in gens:
                e = pmul(gen, h)
                img = pmul(gen_img[gen], hom[h])
                if e in hom:
                    if hom[e] != img:
                        return None
                else:
                    hom[e] = img
                    nxt.append(e)
        frontier = nxt
    if len(hom) != g1.order:
        return None
    return hom
