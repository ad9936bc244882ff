"""Finite G-sets and equivariant maps: orbits, stabilizers, pullbacks,
coproducts, fixed points, automorphisms, canonical forms.

A GSet stores only the generator actions; the action of every group
element is derived once and the derivation doubles as the validity check
(the assignment must be consistent along every edge of the Cayley graph).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .groups import (FiniteGroup, Subgroup, enumerate_subgroups, pidentity,
                     pmul, quotient_group, weyl_group)


class GSet:
    """Finite left G-set given by generator permutations of its points."""

    def __init__(self, group, n_points, gen_action, name=None):
        gen_action = tuple(tuple(a) for a in gen_action)
        if len(gen_action) != len(group.generators):
            raise InputError("one action table per group generator required")
        for a in gen_action:
            if sorted(a) != list(range(n_points)):
                raise InputError("generator action is not a permutation of the points")
        self.group = group
        self.n_points = n_points
        self.gen_action = gen_action
        self.name = name
        self._key = (id(group), n_points, gen_action)
        self._element_action = self._materialize()

    def _materialize(self):
        """Extend generator actions to all elements, checking consistency."""
        g = self.group
        ident = tuple(range(self.n_points))
        action = {g.identity: ident}
        frontier = [g.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for gen, gen_act in zip(g.generators, self.gen_action):
                    e = pmul(gen, h)
                    img = tuple(gen_act[x] for x in action[h])
                    if e in action:
                        if action[e] != img:
                            raise InputError(
                                "generator actions violate a group relation")
                    else:
                        action[e] = img
                        nxt.append(e)
            frontier = nxt
        # every Cayley edge must agree, not just a spanning tree
        for h, perm in action.items():
            for gen, gen_act in zip(g.generators, self.gen_action):
                if action[pmul(gen, h)] != tuple(gen_act[x] for x in perm):
                    raise InputError("generator actions violate a group relation")
        return action

    @property
    def is_empty(self):
        return self.n_points == 0

    def key(self):
        """Content key: safe for caching where object identity is not."""
        return self._key

    def same_as(self, other):
        return self.key() == other.key()

    def __len__(self):
        return self.n_points

    def __repr__(self):
        nm = self.name or "GSet"
        return f"{nm}({self.n_points} points over {self.group.name})"

    def act(self, g, x):
        return self._element_action[tuple(g)][x]

    def act_perm(self, g):
        return self._element_action[tuple(g)]

    def orbits(self):
        seen = [False] * self.n_points
        out = []
        for x in range(self.n_points):
            if seen[x]:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for a in self.gen_action:
                        z = a[y]
                        if z not in orbit:
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            for y in orbit:
                seen[y] = True
            out.append(tuple(sorted(orbit)))
        return out

    def stabilizer(self, x):
        els = [g for g in self.group.elements if self.act(g, x) == x]
        return Subgroup(self.group, els, _closed=True)

    def transporter(self, x, y):
        """Some g with g.x = y, or None."""
        for g in self.group.elements:
            if self.act(g, x) == y:
                return g
        return None

    def decompose(self):
        table = enumerate_subgroups(self.group)
        orbits = []
        for orbit in self.orbits():
            base = orbit[0]
            cls = table.class_of(self.stabilizer(base))
            orbits.append(OrbitData(orbit, base, cls))
        orbits.sort(key=lambda o: (o.stabilizer_class, o.points))
        return OrbitDecomposition(self, tuple(orbits),
                                  tuple(sorted(o.stabilizer_class for o in orbits)))

    def canonical_form(self):
        """Complete isomorphism invariant: sorted multiset of orbit classes."""
        return self.decompose().multiset

    def to_json(self):
        return {"group": self.group.to_json(), "points": self.n_points,
                "action": {str(i): list(a) for i, a in enumerate(self.gen_action)}}

    @staticmethod
    def from_json(data, group=None):
        try:
            if group is None:
                group = FiniteGroup.from_json(data["group"])
            n = data["points"]
            action = [data["action"][str(i)]
                      for i in range(len(group.generators))]
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad G-set record: {exc}") from exc
        return GSet(group, n, action)


@dataclass(frozen=True)
class OrbitData:
    points: tuple
    base: int
    stabilizer_class: int


@dataclass(frozen=True)
class OrbitDecomposition:
    gset: GSet
    orbits: tuple
    multiset: tuple

    def __len__(self):
        return len(self.orbits)


class GMap:
    """Equivariant map of G-sets as a point image table."""

    def __init__(self, source, target, images):
        images = tuple(images)
        if source.group is not target.group:
            raise InputError("map between G-sets over different groups")
        if len(images) != source.n_points:
            raise InputError("image table length mismatch")
        if any(not (0 <= y < target.n_points) for y in images):
            raise InputError("image out of range")
        for a_src, a_tgt in zip(source.gen_action, target.gen_action):
            for x in range(source.n_points):
                if images[a_src[x]] != a_tgt[images[x]]:
                    raise InputError("map is not equivariant")
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, x):
        return self.images[x]

    def __eq__(self, other):
        return (isinstance(other, GMap) and self.source is other.source
                and self.target is other.target and self.images == other.images)

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.images))

    def __repr__(self):
        return f"GMap({self.images})"

    @staticmethod
    def identity(gset):
        return GMap(gset, gset, range(gset.n_points))

    def compose(self, other):
        """self after other."""
        if not other.target.same_as(self.source):
            raise InputError("composition mismatch")
        return GMap(other.source, self.target,
                    [self.images[x] for x in other.images])

    def is_injective(self):
        return len(set(self.images)) == self.source.n_points

    def is_surjective(self):
        return len(set(self.images)) == self.target.n_points

    def is_iso(self):
        return (self.source.n_points == self.target.n_points
                and self.is_injective())

    def inverse(self):
        if not self.is_iso():
            raise InputError("inverse of a non-isomorphism")
        inv = [0] * self.target.n_points
        for x, y in enumerate(self.images):
            inv[y] = x
        return GMap(self.target, self.source, inv)


# --- constructions -----------------------------------------------------


@lru_cache(maxsize=None)
def empty_gset(group):
    return GSet(group, 0, [()] * len(group.generators), name="0")


@lru_cache(maxsize=None)
def trivial_gset(group, n=1):
    return GSet(group, n, [tuple(range(n))] * len(group.generators))


def coset_gset(group, sub):
    """The transitive G-set G/H on the left cosets of H, in canonical order."""
    if sub.parent is not group:
        raise InputError("subgroup of a different group")
    seen = set()
    cosets = []
    for g in group.elements:
        if g in seen:
            continue
        cs = frozenset(pmul(g, h) for h in sub.elements)
        seen.update(cs)
        cosets.append((min(cs), cs))
    cosets.sort()
    index = {}
    for i, (_, cs) in enumerate(cosets):
        for e in cs:
            index[e] = i
    action = []
    for gen in group.generators:
        action.append(tuple(index[pmul(gen, rep)] for rep, _ in cosets))
    return GSet(group, len(cosets), action, name=f"{group.name}/H{sub.order}")


def regular_gset(group):
    return coset_gset(group, group.trivial_subgroup())


def coproduct(parts):
    """Disjoint union with injections; points of part i are shifted."""
    parts = list(parts)
    if not parts:
        raise InputError("coproduct of no parts needs an explicit group")
    group = parts[0].group
    if any(p.group is not group for p in parts):
        raise InputError("coproduct parts over different groups")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n_points
    action = []
    for i in range(len(group.generators)):
        table = []
        for p, off in zip(parts, offsets):
            table.extend(off + y for y in p.gen_action[i])
        action.append(tuple(table))
    out = GSet(group, total, action)
    injections = [GMap(p, out, [off + x for x in range(p.n_points)])
                  for p, off in zip(parts, offsets)]
    return out, injections


def pullback(f, g):
    """Pullback of f: X -> Z along g: Y -> Z with both projections.

    Points are the lexicographically sorted pairs (x, y) with f(x) = g(y).
    """
    if not f.target.same_as(g.target):
        raise InputError("pullback needs a common target")
    x_set, y_set = f.source, g.source
    pts = [(x, y) for x in range(x_set.n_points) for y in range(y_set.n_points)
           if f(x) == g(y)]
    index = {p: i for i, p in enumerate(pts)}
    action = []
    for ax, ay in zip(x_set.gen_action, y_set.gen_action):
        action.append(tuple(index[(ax[x], ay[y])] for (x, y) in pts))
    apex = GSet(x_set.group, len(pts), action)
    p1 = GMap(apex, x_set, [p[0] for p in pts])
    p2 = GMap(apex, y_set, [p[1] for p in pts])
    return apex, p1, p2


def pullback_mediate(apex, p1, p2, h1, h2):
    """Unique map W -> apex through a cone (h1, h2); witnesses universality."""
    if not h1.target.same_as(p1.target) or not h2.target.same_as(p2.target):
        raise InputError("cone legs do not match the pullback")
    if not h1.source.same_as(h2.source):
        raise InputError("cone legs have different sources")
    index = {}
    for i in range(apex.n_points):
        index[(p1(i), p2(i))] = i
    images = []
    for w in range(h1.source.n_points):
        key = (h1(w), h2(w))
        if key not in index:
            raise InputError("not a cone over the pullback diagram")
        images.append(index[key])
    return GMap(h1.source, apex, images)


def product(x_set, y_set):
    """X x Y = pullback over the point."""
    pt = trivial_gset(x_set.group, 1)
    to_pt_x = GMap(x_set, pt, [0] * x_set.n_points)
    to_pt_y = GMap(y_set, pt, [0] * y_set.n_points)
    return pullback(to_pt_x, to_pt_y)


def sub_gset(gset, points):
    """Sub-G-set on an invariant subset of points, with the inclusion."""
    points = tuple(sorted(points))
    pos = {x: i for i, x in enumerate(points)}
    action = []
    for a in gset.gen_action:
        for x in points:
            if a[x] not in pos:
                raise InputError("point subset is not invariant")
        action.append(tuple(pos[a[x]] for x in points))
    sub = GSet(gset.group, len(points), action)
    return sub, GMap(sub, gset, points)


def find_iso(x_set, y_set):
    """Explicit equivariant bijection, or None if orbit multisets differ."""
    if x_set.group is not y_set.group:
        raise InputError("G-sets over different groups")
    dx, dy = x_set.decompose(), y_set.decompose()
    if dx.multiset != dy.multiset:
        return None
    by_class = {}
    for o in dy.orbits:
        by_class.setdefault(o.stabilizer_class, []).append(o)
    images = [None] * x_set.n_points
    for o in dx.orbits:
        t = by_class[o.stabilizer_class].pop()
        stab = x_set.stabilizer(o.base)
        base_img = next(y for y in t.points
                        if y_set.stabilizer(y).elements == stab.elements)
        for g in x_set.group.elements:
            images[x_set.act(g, o.base)] = y_set.act(g, base_img)
    iso = GMap(x_set, y_set, images)
    assert iso.is_iso()
    return iso


class FixedPoints:
    """Fixed points X^H with the induced Weyl-group action."""

    def __init__(self, gset, sub):
        if sub.parent is not gset.group:
            raise InputError("subgroup of a different group")
        gens = sub.generating_set()
        self.gset = gset
        self.sub = sub
        self.points = tuple(x for x in range(gset.n_points)
                            if all(gset.act(h, x) == x for h in gens))
        self.count = len(self.points)

    def weyl_gset(self):
        """X^H as a G-set for the Weyl group N_G(H)/H."""
        w = weyl_group(self.gset.group, self.sub)
        pos = {x: i for i, x in enumerate(self.points)}
        action = []
        for q in w.group.generators:
            rep = w.lift(q)
            action.append(tuple(pos[self.gset.act(rep, x)] for x in self.points))
        return GSet(w.group, self.count, action), w

    def quotient_gset(self):
        """X^N as a G/N-set; requires N normal."""
        if not self.sub.is_normal():
            raise InputError("quotient action needs a normal subgroup")
        q = quotient_group(self.gset.group, self.sub)
        pos = {x: i for i, x in enumerate(self.points)}
        action = []
        for gen in q.group.generators:
            rep = q.lift(gen)
            action.append(tuple(pos[self.gset.act(rep, x)] for x in self.points))
        return GSet(q.group, self.count, action), q


def fixed_points(gset, sub):
    return FixedPoints(gset, sub)


def mark(gset, sub):
    """The mark m_H(X) = |X^H|."""
    return FixedPoints(gset, sub).count


def equivariant_maps(x_set, y_set):
    """All equivariant maps X -> Y (product of per-orbit base choices)."""
    dx = x_set.decompose()
    per_orbit = []
    for o in dx.orbits:
        stab = x_set.stabilizer(o.base)
        gens = stab.generating_set()
        targets = [y for y in range(y_set.n_points)
                   if all(y_set.act(h, y) == y for h in gens)]
        per_orbit.append((o, targets))
    out = []
    for choice in itertools.product(*(t for _, t in per_orbit)):
        images = [None] * x_set.n_points
        for (o, _), y in zip(per_orbit, choice):
            for g in x_set.group.elements:
                images[x_set.act(g, o.base)] = y_set.act(g, y)
        out.append(GMap(x_set, y_set, images))
    return out


def aut_group(gset):
    """Equivariant self-bijections as a permutation group on the points."""
    dec = gset.decompose()
    by_class = {}
    for i, o in enumerate(dec.orbits):
        by_class.setdefault(o.stabilizer_class, []).append(i)
    perms = []
    groups = list(by_class.values())
    matchings = [list(itertools.permutations(ixs)) for ixs in groups]
    for assignment in itertools.product(*matchings):
        base_choices = []
        pairs = []
        for ixs, perm in zip(groups, assignment):
            pairs.extend(zip(ixs, perm))
        for i, j in pairs:
            src, tgt = dec.orbits[i], dec.orbits[j]
            stab = gset.stabilizer(src.base).elements
            choices = [y for y in tgt.points
                       if gset.stabilizer(y).elements == stab]
            base_choices.append(((i, j), choices))
        for combo in itertools.product(*(c for _, c in base_choices)):
            images = [None] * gset.n_points
            for ((i, _), _), y in zip(base_choices, combo):
                src = dec.orbits[i]
                for g in gset.group.elements:
                    images[gset.act(g, src.base)] = gset.act(g, y)
            perms.append(tuple(images))
    perms = sorted(set(perms))
    assert pidentity(gset.n_points) in perms
    # pick a small deterministic generating set
    from .groups import closure
    gens = []
    reached = {pidentity(gset.n_points)}
    for p in perms:
        if p not in reached:
            gens.append(p)
            reached = closure(gset.n_points, gens)
    aut = FiniteGroup(gset.n_points, gens, name=f"Aut({gset!r})")
    assert len(aut) == len(perms)
    return aut


# --- enumeration of iso classes ----------------------------------------


@lru_cache(maxsize=None)
def transitive_models(group):
    """Canonical transitive model [G/H_rep] per subgroup class."""
    table = enumerate_subgroups(group)
    return tuple(coset_gset(group, c.representative) for c in table)


@lru_cache(maxsize=None)
def model_of_multiset(group, multiset):
    """Canonical G-set with the given sorted multiset of orbit classes."""
    models = transitive_models(group)
    if not multiset:
        return empty_gset(group)
    out, _ = coproduct([models[c] for c in multiset])
    return out


def iso_class_multisets(group, max_points):
    """Sorted orbit-class multisets of all iso classes with <= max_points."""
    sizes = [m.n_points for m in transitive_models(group)]
    out = []

    def rec(start, budget, acc):
        out.append(tuple(acc))
        for c in range(start, len(sizes)):
            if sizes[c] <= budget:
                acc.append(c)
                rec(c, budget - sizes[c], acc)
                acc.pop()

    rec(0, max_points, [])
    return sorted(out)


def iso_class_reps(group, max_points):
    return [model_of_multiset(group, ms)
            for ms in iso_class_multisets(group, max_points)]


def count_iso_classes_bruteforce(group, n_points):
    """Count iso classes of G-sets on exactly n points by enumerating all
    generator-image tuples and bucketing by canonical form.  Independent of
    the orbit-multiset picture; the two counts agreeing is a theorem."""
    degree_perms = list(itertools.permutations(range(n_points)))
    candidate_lists = []
    for gen in group.generators:
        d = group.element_order(gen)
        ok = [p for p in degree_perms if _perm_power(p, d) == tuple(range(n_points))]
        candidate_lists.append(ok)
    forms = set()
    for combo in itertools.product(*candidate_lists):
        try:
            gs = GSet(group, n_points, combo)
        except InputError:
            continue
        forms.add(gs.canonical_form())
    return len(forms)


def _perm_power(p, d):
    q = tuple(range(len(p)))
    for _ in range(d):
        q = tuple(p[x] for x in q)
    return q
