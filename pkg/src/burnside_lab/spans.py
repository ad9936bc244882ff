"""The effective Burnside category of finite G-sets at homotopy-category
level: spans, composition by pullback, canonical forms of span classes,
triple structures with marked morphism classes, direct sums, duality, the
two embeddings, and the base-change identity.

A span class is a multiset of "atoms": spans with transitive apex, in a
canonical form that is a complete invariant of the span up to apex
isomorphism commuting with both legs.  Composition is computed atomically
(pullback distributes over apex coproducts; that distributivity is itself
exhaustively tested, not assumed silently).
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .gsets import (GMap, GSet, coproduct, empty_gset, equivariant_maps,
                    iso_class_reps, pullback, pullback_mediate,
                    transitive_models)
from .groups import enumerate_subgroups


# --- marked morphism classes ---------------------------------------------

PREDICATES = {
    "all": lambda f: True,
    "injective": lambda f: f.is_injective(),
    "surjective": lambda f: f.is_surjective(),
    "iso": lambda f: f.is_iso(),
}


@dataclass(frozen=True)
class TripleStructure:
    """A triple structure on finite G-sets: ingressive and egressive
    morphism classes drawn from a fixed predicate vocabulary."""
    group: object
    ingressive: str = "all"
    egressive: str = "all"

    def __post_init__(self):
        if self.ingressive not in PREDICATES or self.egressive not in PREDICATES:
            raise InputError(f"unknown predicate; choose from {sorted(PREDICATES)}")

    def is_ingressive(self, f):
        return PREDICATES[self.ingressive](f)

    def is_egressive(self, f):
        return PREDICATES[self.egressive](f)

    def swapped(self):
        return TripleStructure(self.group, self.egressive, self.ingressive)


def maximal_triple(group):
    return TripleStructure(group, "all", "all")


# --- spans and their canonical forms --------------------------------------


class Span:
    """A span X <- U -> Y of G-sets: left leg into the source, right leg
    into the target."""

    def __init__(self, left, right):
        if not left.source.same_as(right.source):
            raise InputError("span legs must share their apex")
        self.apex = left.source
        self.left = left
        self.right = right
        self.source = left.target
        self.target = right.target

    def __repr__(self):
        return (f"Span({self.source!r} <- {self.apex!r} -> {self.target!r})")


@lru_cache(maxsize=None)
def _class_transversal(group, class_index):
    """Group elements g_j with g_j . base = j in the canonical transitive
    model of the class, base being the point fixed by the representative."""
    model = transitive_models(group)[class_index]
    rep = enumerate_subgroups(group)[class_index].representative
    base = next(x for x in range(model.n_points)
                if model.stabilizer(x).elements == rep.elements)
    trans = [None] * model.n_points
    for g in group.elements:
        y = model.act(g, base)
        if trans[y] is None:
            trans[y] = g
    return base, tuple(trans)


def _orbit_atom(group, apex, orbit_points, u_images, v_images):
    """Canonical atom key (class, u table, v table) for one apex orbit."""
    table = enumerate_subgroups(group)
    base0 = orbit_points[0]
    stab = apex.stabilizer(base0)
    cls = table.class_of(stab)
    rep = table[cls].representative
    _, trans = _class_transversal(group, cls)
    best = None
    for y in orbit_points:
        if apex.stabilizer(y).elements != rep.elements:
            continue
        u_tab = tuple(u_images[apex.act(g, y)] for g in trans)
        v_tab = tuple(v_images[apex.act(g, y)] for g in trans)
        if best is None or (u_tab, v_tab) < best:
            best = (u_tab, v_tab)
    assert best is not None
    return (cls, best[0], best[1])


def span_atoms(span):
    """Sorted multiset (tuple with repeats) of canonical atoms."""
    apex = span.apex
    atoms = [_orbit_atom(apex.group, apex, orbit, span.left.images,
                         span.right.images)
             for orbit in apex.orbits()]
    return tuple(sorted(atoms))


class SpanClass:
    """Isomorphism class of a span between two fixed G-sets."""

    __slots__ = ("source", "target", "atoms")

    def __init__(self, source, target, atoms):
        self.source = source
        self.target = target
        self.atoms = tuple(sorted(atoms))

    def __eq__(self, other):
        return (isinstance(other, SpanClass)
                and self.source.key() == other.source.key()
                and self.target.key() == other.target.key()
                and self.atoms == other.atoms)

    def __hash__(self):
        return hash((self.source.key(), self.target.key(), self.atoms))

    def __repr__(self):
        return f"SpanClass({len(self.atoms)} orbits: {self.atoms})"

    @property
    def is_zero(self):
        return not self.atoms

    def representative(self):
        """A concrete span in this class (apex = disjoint union of models)."""
        group = self.source.group
        if not self.atoms:
            apex = empty_gset(group)
            return Span(GMap(apex, self.source, ()),
                        GMap(apex, self.target, ()))
        models = transitive_models(group)
        parts = [models[c] for (c, _, _) in self.atoms]
        apex, injections = coproduct(parts)
        u = [None] * apex.n_points
        v = [None] * apex.n_points
        for (c, u_tab, v_tab), inj in zip(self.atoms, injections):
            for j in range(len(u_tab)):
                u[inj(j)] = u_tab[j]
                v[inj(j)] = v_tab[j]
        return Span(GMap(apex, self.source, u), GMap(apex, self.target, v))

    def aut_count(self):
        """Apex automorphisms commuting with both legs (pi_1 shadow)."""
        count = 1
        for atom, mult in Counter(self.atoms).items():
            k = _atom_aut_count(self.source.group, atom)
            count *= k ** mult
            for i in range(2, mult + 1):
                count *= i
        return count


@lru_cache(maxsize=None)
def _atom_aut_count(group, atom):
    cls, u_tab, v_tab = atom
    model = transitive_models(group)[cls]
    rep = enumerate_subgroups(group)[cls].representative
    _, trans = _class_transversal(group, cls)
    count = 0
    for y in range(model.n_points):
        if model.stabilizer(y).elements != rep.elements:
            continue
        u2 = tuple(u_tab[model.act(g, y)] for g in trans)
        v2 = tuple(v_tab[model.act(g, y)] for g in trans)
        if (u2, v2) == (u_tab, v_tab):
            count += 1
    return count


def span_class(span, triple=None):
    """Canonical class of a span, validating the triple's leg predicates."""
    if triple is not None:
        if not triple.is_egressive(span.left):
            raise InputError("left leg violates the egressive predicate")
        if not triple.is_ingressive(span.right):
            raise InputError("right leg violates the ingressive predicate")
    return SpanClass(span.source, span.target, span_atoms(span))


def identity_class(x_set):
    ident = GMap.identity(x_set)
    return span_class(Span(ident, ident))


def zero_class(x_set, y_set):
    return SpanClass(x_set, y_set, ())


def class_from_atoms(x_set, y_set, atoms):
    return SpanClass(x_set, y_set, atoms)


# --- composition by pullback ----------------------------------------------


@lru_cache(maxsize=None)
def _compose_atoms(group, atom1, atom2):
    """Pullback composition of two atoms; the middle tables are equated.

    Returns the sorted atom multiset of the composite.  Only the group and
    the atom tables matter, so this cache is shared across hom-sets.
    """
    c1, u1, v1 = atom1
    c2, u2, v2 = atom2
    models = transitive_models(group)
    m1, m2 = models[c1], models[c2]
    pts = [(p, q) for p in range(m1.n_points) for q in range(m2.n_points)
           if v1[p] == u2[q]]
    index = {pq: i for i, pq in enumerate(pts)}
    action = []
    for a1, a2 in zip(m1.gen_action, m2.gen_action):
        action.append(tuple(index[(a1[p], a2[q])] for (p, q) in pts))
    apex = GSet(group, len(pts), action)
    u = [u1[p] for (p, _) in pts]
    v = [v2[q] for (_, q) in pts]
    atoms = [_orbit_atom(group, apex, orbit, u, v)
             for orbit in apex.orbits()]
    return tuple(sorted(atoms))


def compose(s1, s2):
    """Composite span class of s1: X -> Y and s2: Y -> Z (diagram order)."""
    if not s1.target.same_as(s2.source):
        raise InputError("span classes are not composable")
    group = s1.source.group
    out = []
    for a1 in s1.atoms:
        for a2 in s2.atoms:
            out.extend(_compose_atoms(group, a1, a2))
    return SpanClass(s1.source, s2.target, out)


def compose_concrete(span1, span2):
    """Composition by one direct pullback of the middle legs, with no atom
    decomposition; the oracle against which `compose` is checked."""
    if not span1.right.target.same_as(span2.left.target):
        raise InputError("spans are not composable")
    apex, p1, p2 = pullback(span1.right, span2.left)
    return Span(span1.left.compose(p1), span2.right.compose(p2))


def is_pullback_square(p1, p2, f, g):
    """Do (p1, p2) exhibit their common source as the pullback of (f, g)?"""
    if not p1.source.same_as(p2.source) or not f.target.same_as(g.target):
        return False
    if f.compose(p1).images != g.compose(p2).images:
        return False
    apex, q1, q2 = pullback(f, g)
    try:
        comparison = pullback_mediate(apex, q1, q2, p1, p2)
    except InputError:
        return False
    return comparison.is_iso()


def base_change_check(i, f, g, j):
    """For an ambigressive pullback square

            U --i--> X
            |        |
            f        g
            v        v
            V --j--> Y

    (i, j ingressive; f, g egressive), check g* o j_* = i_* o f^* as span
    classes V -> X."""
    if g.compose(i).images != j.compose(f).images:
        raise InputError("square does not commute")
    if not is_pullback_square(i, f, g, j):
        raise InputError("square is not a pullback")
    lhs = compose(embed_covariant(j), embed_contravariant(g))
    rhs = compose(embed_contravariant(f), embed_covariant(i))
    return lhs == rhs


# --- embeddings and duality ------------------------------------------------


def embed_covariant(f, triple=None):
    """f_*: X -> Y, the span X <= X -> Y."""
    if triple is not None and not triple.is_ingressive(f):
        raise InputError("map is not ingressive")
    return span_class(Span(GMap.identity(f.source), f))


def embed_contravariant(f, triple=None):
    """f^*: Y -> X for f: X -> Y, the span Y <- X => X."""
    if triple is not None and not triple.is_egressive(f):
        raise InputError("map is not egressive")
    return span_class(Span(f, GMap.identity(f.source)))


@lru_cache(maxsize=None)
def _dual_atom(group, atom):
    cls, u_tab, v_tab = atom
    model = transitive_models(group)[cls]
    return _orbit_atom(group, model, tuple(range(model.n_points)),
                       v_tab, u_tab)


def dualize(s, triple=None):
    """Legs swapped; an equivalence A_eff(in, eg)^op = A_eff(eg, in)."""
    atoms = tuple(sorted(_dual_atom(s.source.group, a) for a in s.atoms))
    out = SpanClass(s.target, s.source, atoms)
    if triple is not None:
        rep = out.representative()
        if not triple.is_egressive(rep.left) or not triple.is_ingressive(rep.right):
            raise InputError("dual span violates the triple's predicates")
    return out


# --- enumeration -----------------------------------------------------------


def atomic_span_classes(x_set, y_set):
    """All span classes with transitive apex (the hom-basis), sorted."""
    key = (x_set.key(), y_set.key())
    cache = _ATOM_ENUM_CACHE.setdefault(x_set.group, {})
    if key not in cache:
        atoms = set()
        for model in transitive_models(x_set.group):
            for u in equivariant_maps(model, x_set):
                for v in equivariant_maps(model, y_set):
                    atoms.add(_orbit_atom(x_set.group, model,
                                          tuple(range(model.n_points)),
                                          u.images, v.images))
        cache[key] = tuple(sorted(atoms))
    return cache[key]


_ATOM_ENUM_CACHE = {}


def span_classes(x_set, y_set, max_apex_points, triple=None):
    """All span classes X -> Y with apex of at most the given size; when a
    non-maximal triple is given, classes whose legs violate it are dropped."""
    models = transitive_models(x_set.group)
    atoms = atomic_span_classes(x_set, y_set)
    sizes = [models[a[0]].n_points for a in atoms]
    out = []

    def rec(start, budget, acc):
        cls = SpanClass(x_set, y_set, tuple(acc))
        if triple is None:
            out.append(cls)
        else:
            rep = cls.representative()
            if triple.is_egressive(rep.left) and triple.is_ingressive(rep.right):
                out.append(cls)
        for i in range(start, len(atoms)):
            if sizes[i] <= budget:
                acc.append(atoms[i])
                rec(i, budget - sizes[i], acc)
                acc.pop()

    rec(0, max_apex_points, [])
    return out


# --- direct sums ------------------------------------------------------------


def direct_sum_check(x_set, y_set, probe_points=3):
    """Verify that X u Y is a biproduct in the span category and that the
    empty G-set is a zero object; returns a report dict of booleans."""
    group = x_set.group
    total, (inj_x, inj_y) = coproduct([x_set, y_set])
    i_star = embed_covariant(inj_x)
    j_star = embed_covariant(inj_y)
    p_star = embed_contravariant(inj_x)   # projection X u Y -> X
    q_star = embed_contravariant(inj_y)
    report = {}
    report["p i = id_X"] = compose(i_star, p_star) == identity_class(x_set)
    report["q j = id_Y"] = compose(j_star, q_star) == identity_class(y_set)
    report["p j = 0"] = compose(j_star, p_star) == zero_class(y_set, x_set)
    report["q i = 0"] = compose(i_star, q_star) == zero_class(x_set, y_set)
    ip = compose(p_star, i_star)
    jq = compose(q_star, j_star)
    summed = SpanClass(total, total, ip.atoms + jq.atoms)
    report["ip + jq = id"] = summed == identity_class(total)
    empty = empty_gset(group)
    report["Hom(0, X) is a point"] = (
        span_classes(empty, x_set, x_set.n_points + 2) == [zero_class(empty, x_set)])
    report["Hom(X, 0) is a point"] = (
        span_classes(x_set, empty, x_set.n_points + 2) == [zero_class(x_set, empty)])
    probes = [m for m in transitive_models(group) if m.n_points <= probe_points]
    pairing_ok = True
    for probe in probes:
        into_sum = span_classes(probe, total, probe_points)
        paired = [(compose(s, p_star), compose(s, q_star)) for s in into_sum]
        lhs = sorted((tuple(a.atoms), tuple(b.atoms)) for a, b in paired)
        rhs = sorted((tuple(a.atoms), tuple(b.atoms))
                     for a in span_classes(probe, x_set, probe_points)
                     for b in span_classes(probe, y_set, probe_points)
                     if _apex_size(group, a) + _apex_size(group, b) <= probe_points)
        pairing_ok = pairing_ok and lhs == rhs
    report["Hom(A, X+Y) = Hom(A,X) x Hom(A,Y)"] = pairing_ok
    report["ok"] = all(v for k, v in report.items() if k != "ok")
    return report


def _apex_size(group, cls):
    models = transitive_models(group)
    return sum(models[c].n_points for (c, _, _) in cls.atoms)


# --- adequacy of triples ----------------------------------------------------


def check_triple_adequate(triple, max_points=3, coproduct_points=2):
    """Exhaustively verify the triple axioms on all instances within the
    budget.  The first two conditions make the triple adequate; the
    coproduct conditions upgrade it to disjunctive."""
    group = triple.group
    objects = iso_class_reps(group, max_points)
    violations = []
    checked = Counter()

    maps_between = {}
    for a in objects:
        for b in objects:
            maps_between[(id(a), id(b))] = equivariant_maps(a, b)

    # pullback stability of each class along arbitrary maps
    for c_obj in objects:
        for a_obj in objects:
            for b_obj in objects:
                for f in maps_between[(id(a_obj), id(c_obj))]:
                    for g in maps_between[(id(b_obj), id(c_obj))]:
                        checked["pullback squares"] += 1
                        _, p1, p2 = pullback(f, g)
                        if triple.is_ingressive(f) and not triple.is_ingressive(p2):
                            violations.append(
                                {"axiom": "ingressives stable under pullback",
                                 "f": list(f.images), "g": list(g.images)})
                        if triple.is_egressive(f) and not triple.is_egressive(p2):
                            violations.append(
                                {"axiom": "egressives stable under pullback",
                                 "f": list(f.images), "g": list(g.images)})
                        if triple.is_ingressive(g) and triple.is_egressive(f):
                            checked["ambigressive pullbacks"] += 1

    # predicates contain isomorphisms
    for a_obj in objects:
        ident = GMap.identity(a_obj)
        if not triple.is_ingressive(ident) or not triple.is_egressive(ident):
            violations.append({"axiom": "classes contain equivalences",
                               "object": a_obj.canonical_form()})

    adequate = not violations

    # compatibility with coproducts
    empty = empty_gset(group)
    for z_obj in objects:
        from_empty = GMap(empty, z_obj, ())
        checked["maps from the initial object"] += 1
        if not triple.is_ingressive(from_empty) or not triple.is_egressive(from_empty):
            violations.append({"axiom": "initial maps are in both classes",
                               "object": z_obj.canonical_form()})
    small = [o for o in objects if o.n_points <= coproduct_points]
    for x_obj in small:
        for y_obj in small:
            total, (jx, jy) = coproduct([x_obj, y_obj])
            for z_obj in small:
                for hx in maps_between[(id(x_obj), id(z_obj))]:
                    for hy in maps_between[(id(y_obj), id(z_obj))]:
                        h = GMap(total, z_obj, hx.images + hy.images)
                        checked["coproduct compatibility"] += 1
                        for name, pred in (("ingressive", triple.is_ingressive),
                                           ("egressive", triple.is_egressive)):
                            if pred(h) != (pred(hx) and pred(hy)):
                                violations.append(
                                    {"axiom": f"{name} class compatible with coproducts",
                                     "hx": list(hx.images), "hy": list(hy.images)})

    # coproducts of ambigressive pullbacks are pullbacks
    for y_obj in small:
        ing = [f for x_obj in small
               for f in maps_between[(id(x_obj), id(y_obj))]
               if triple.is_ingressive(f)]
        egr = [g for w_obj in small
               for g in maps_between[(id(w_obj), id(y_obj))]
               if triple.is_egressive(g)]
        for f1, f2 in itertools.product(ing[:6], repeat=2):
            for g1, g2 in itertools.product(egr[:6], repeat=2):
                checked["coproducts of pullbacks"] += 1
                squares = {}
                for (fi, iname) in ((f1, 0), (f2, 1)):
                    for (gj, jname) in ((g1, 0), (g2, 1)):
                        squares[(iname, jname)] = pullback(fi, gj)
                sum_x, (ix1, ix2) = coproduct([f1.source, f2.source])
                sum_g, (ig1, ig2) = coproduct([g1.source, g2.source])
                big_f = GMap(sum_x, y_obj, f1.images + f2.images)
                big_g = GMap(sum_g, y_obj, g1.images + g2.images)
                parts = [squares[(i, j)] for i in (0, 1) for j in (0, 1)]
                sum_apex, injs = coproduct([p[0] for p in parts])
                p1_images = [None] * sum_apex.n_points
                p2_images = [None] * sum_apex.n_points
                for (i, j), (ap, pr1, pr2), inj in zip(
                        [(0, 0), (0, 1), (1, 0), (1, 1)], parts, injs):
                    emb_x = ix1 if i == 0 else ix2
                    emb_g = ig1 if j == 0 else ig2
                    for p in range(ap.n_points):
                        p1_images[inj(p)] = emb_x(pr1(p))
                        p2_images[inj(p)] = emb_g(pr2(p))
                big_p1 = GMap(sum_apex, sum_x, p1_images)
                big_p2 = GMap(sum_apex, sum_g, p2_images)
                if not is_pullback_square(big_p1, big_p2, big_f, big_g):
                    violations.append(
                        {"axiom": "coproducts of ambigressive pullbacks",
                         "f1": list(f1.images), "f2": list(f2.images),
                         "g1": list(g1.images), "g2": list(g2.images)})

    return {
        "triple": {"ingressive": triple.ingressive, "egressive": triple.egressive},
        "adequate": adequate,
        "disjunctive": not violations,
        "instances_checked": dict(checked),
        "violations": violations,
    }
