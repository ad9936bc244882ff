"""Finite permutation groups: subgroup lattices, conjugacy classes of
subgroups, normalizers, Weyl groups, double cosets and quotients.

Permutations are image tables: a permutation of degree n is a tuple p of
length n with p[x] the image of x.  Composition is (p * q)(x) = p(q(x)),
so groups act on points from the left.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, ResourceLimitError

GROUP_ORDER_BOUND = 10080
SUBGROUP_ENUM_BOUND = 64


def pmul(p, q):
    """Compose image tables: (p * q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def pinv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def pidentity(n):
    return tuple(range(n))


def is_perm(p, degree):
    return len(p) == degree and sorted(p) == list(range(degree))


def closure(degree, perms):
    """Closure of a set of permutations under composition."""
    elems = {pidentity(degree)}
    frontier = [pidentity(degree)]
    gens = [tuple(p) for p in perms]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                e = pmul(g, h)
                if e not in elems:
                    elems.add(e)
                    nxt.append(e)
        frontier = nxt
    return elems


class FiniteGroup:
    """Permutation group with materialized, canonically ordered elements.

    Elements are sorted lexicographically by image table, so all derived
    structures (subgroup tables, coset lists, quotients) are reproducible.
    """

    def __init__(self, degree, generators, name=None, order_bound=GROUP_ORDER_BOUND):
        if degree < 0:
            raise InputError("degree must be nonnegative")
        generators = [tuple(g) for g in generators]
        for g in generators:
            if not is_perm(g, degree):
                raise InputError(f"not a permutation of degree {degree}: {g!r}")
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name or f"G{degree}"
        elems = {pidentity(degree)}
        frontier = [pidentity(degree)]
        while frontier:
            nxt = []
            for h in frontier:
                for g in generators:
                    e = pmul(g, h)
                    if e not in elems:
                        elems.add(e)
                        nxt.append(e)
            if len(elems) > order_bound:
                raise ResourceLimitError(
                    f"group closure exceeds order bound {order_bound}")
            frontier = nxt
        self.elements = tuple(sorted(elems))
        self._index = {e: i for i, e in enumerate(self.elements)}
        assert math.factorial(degree) % len(self.elements) == 0 if degree else True

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return tuple(p) in self._index

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order}, degree={self.degree})"

    @property
    def identity(self):
        return pidentity(self.degree)

    def mul(self, a, b):
        return pmul(a, b)

    def inv(self, a):
        return pinv(a)

    def conj(self, g, h):
        """g h g^-1."""
        return pmul(pmul(g, h), pinv(g))

    def element_order(self, p):
        e = self.identity
        q, n = p, 1
        while q != e:
            q = pmul(q, p)
            n += 1
        return n

    def subgroup(self, elements):
        return Subgroup(self, elements)

    def subgroup_generated(self, gens):
        return Subgroup(self, closure(self.degree, gens), _closed=True)

    def trivial_subgroup(self):
        return Subgroup(self, [self.identity], _closed=True)

    def full_subgroup(self):
        return Subgroup(self, self.elements, _closed=True)

    # --- canonical constructions -------------------------------------

    @staticmethod
    def cyclic(n, name=None):
        if n < 1:
            raise InputError("cyclic group needs n >= 1")
        rot = tuple((i + 1) % n for i in range(n))
        return FiniteGroup(n, [rot] if n > 1 else [], name or f"C{n}")

    @staticmethod
    def symmetric(n, name=None):
        if n < 1:
            raise InputError("symmetric group needs n >= 1")
        gens = []
        if n >= 2:
            gens.append((1, 0) + tuple(range(2, n)))
        if n >= 3:
            gens.append(tuple((i + 1) % n for i in range(n)))
        return FiniteGroup(n, gens, name or f"S{n}")

    @staticmethod
    def dihedral(n, name=None):
        # Symmetries of the regular n-gon, order 2n, acting on n vertices.
        if n < 3:
            raise InputError("dihedral group needs n >= 3")
        rot = tuple((i + 1) % n for i in range(n))
        refl = tuple((n - i) % n for i in range(n))
        return FiniteGroup(n, [rot, refl], name or f"D{n}")

    @staticmethod
    def klein_four(name="C2xC2"):
        return FiniteGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)], name)

    @staticmethod
    def quaternion8(name="Q8"):
        # Regular action on (1, -1, i, -i, j, -j, k, -k); generators are
        # left multiplication by i and by j.
        li = (2, 3, 1, 0, 6, 7, 5, 4)
        lj = (4, 5, 7, 6, 1, 0, 2, 3)
        return FiniteGroup(8, [li, lj], name)

    def to_json(self):
        return {"degree": self.degree,
                "generators": [list(g) for g in self.generators],
                "name": self.name}

    @staticmethod
    def from_json(data):
        """Deserialize; equal records share one instance, so that caches
        keyed by group identity behave across repeated file loads."""
        try:
            key = (data["degree"],
                   tuple(tuple(g) for g in data["generators"]),
                   data.get("name"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad group record: {exc}") from exc
        if key not in _LOADED_GROUPS:
            _LOADED_GROUPS[key] = FiniteGroup(key[0], key[1], key[2])
        return _LOADED_GROUPS[key]


_LOADED_GROUPS = {}


@lru_cache(maxsize=None)
def named_group(name):
    """Builtin groups by name (C<n>, S<n>, D<n> on n vertices, Q8, V4).

    Cached so that repeated lookups share one instance, which in turn keys
    all per-group caches downstream.
    """
    key = name.strip()
    if key in ("V4", "C2xC2", "C2XC2"):
        return FiniteGroup.klein_four()
    if key == "Q8":
        return FiniteGroup.quaternion8()
    if key and key[0] in "CSD" and key[1:].isdigit():
        n = int(key[1:])
        if key[0] == "C":
            return FiniteGroup.cyclic(n)
        if key[0] == "S":
            return FiniteGroup.symmetric(n)
        return FiniteGroup.dihedral(n)
    raise InputError(f"unknown group name: {name!r}")


class Subgroup:
    """Subset of a FiniteGroup, validated to be closed with identity."""

    def __init__(self, parent, elements, _closed=False):
        self.parent = parent
        elems = frozenset(tuple(e) for e in elements)
        if not _closed:
            for e in elems:
                if e not in parent._index:
                    raise InputError("subgroup element not in parent group")
            if parent.identity not in elems:
                raise InputError("subgroup must contain the identity")
            for a in elems:
                if pinv(a) not in elems:
                    raise InputError("subgroup not closed under inverse")
                for b in elems:
                    if pmul(a, b) not in elems:
                        raise InputError("subgroup not closed under product")
        self.elements = elems
        self.sorted_elements = tuple(sorted(elems))

    @property
    def order(self):
        return len(self.elements)

    def key(self):
        return self.sorted_elements

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.elements == other.elements)

    def __hash__(self):
        return hash(self.elements)

    def __le__(self, other):
        return self.elements <= other.elements

    def __contains__(self, p):
        return tuple(p) in self.elements

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.name})"

    def conjugate(self, g):
        gi = pinv(g)
        return Subgroup(self.parent,
                        frozenset(pmul(pmul(g, h), gi) for h in self.elements),
                        _closed=True)

    def is_normal(self):
        return all(self.conjugate(g).elements == self.elements
                   for g in self.parent.generators)

    def generating_set(self):
        """Small deterministic generating set."""
        gens = []
        cur = {self.parent.identity}
        for e in self.sorted_elements:
            if e not in cur:
                gens.append(e)
                cur = closure(self.parent.degree, gens)
        return tuple(gens)

    def as_group(self):
        if not hasattr(self, "_as_group"):
            g = FiniteGroup(self.parent.degree, self.generating_set(),
                            name=f"{self.parent.name}.sub{self.order}")
            assert set(g.elements) == set(self.elements)
            self._as_group = g
        return self._as_group

    def normalizer(self):
        els = [g for g in self.parent.elements
               if self.conjugate(g).elements == self.elements]
        return Subgroup(self.parent, els, _closed=True)


def left_cosets(group, sub):
    """Left cosets gH, each as a sorted tuple, ordered by minimal element."""
    seen = set()
    cosets = []
    for g in group.elements:
        if g in seen:
            continue
        cs = tuple(sorted(pmul(g, h) for h in sub.elements))
        seen.update(cs)
        cosets.append(cs)
    cosets.sort(key=lambda c: c[0])
    return cosets


@dataclass(frozen=True)
class QuotientGroup:
    """A quotient G/N with its projection and a chosen section."""
    group: FiniteGroup
    source: FiniteGroup
    kernel: Subgroup
    cosets: tuple
    projection: dict
    section: dict

    @property
    def order(self):
        return self.group.order

    def project(self, g):
        return self.projection[tuple(g)]

    def lift(self, q):
        return self.section[tuple(q)]


def quotient_group(group, normal):
    """G/N as a permutation group on the cosets of N, with projection."""
    if not isinstance(normal, Subgroup) or normal.parent is not group:
        normal = group.subgroup(normal.elements if isinstance(normal, Subgroup)
                                else normal)
    if not normal.is_normal():
        raise InputError("quotient requires a normal subgroup")
    cosets = left_cosets(group, normal)
    of_elem = {}
    for i, cs in enumerate(cosets):
        for e in cs:
            of_elem[e] = i
    projection = {}
    for g in group.elements:
        projection[g] = tuple(of_elem[pmul(g, cs[0])] for cs in cosets)
    gen_imgs = []
    for g in group.generators:
        q = projection[g]
        if q not in gen_imgs:
            gen_imgs.append(q)
    q_group = FiniteGroup(len(cosets), gen_imgs,
                          name=f"{group.name}/N{normal.order}")
    assert set(q_group.elements) == set(projection.values())
    section = {}
    for g in group.elements:  # ascending, so each class gets its min rep
        q = projection[g]
        if q not in section:
            section[q] = g
    return QuotientGroup(q_group, group, normal, tuple(cosets),
                         projection, section)


def weyl_group(group, sub):
    """N_G(H)/H as a QuotientGroup."""
    if sub.parent is not group:
        raise InputError("subgroup belongs to a different group")
    n = sub.normalizer().as_group()
    return quotient_group(n, n.subgroup(sub.elements))


def double_cosets(group, h_sub, k_sub):
    """Minimal representatives g of the double cosets H g K, ascending."""
    if h_sub.parent is not group or k_sub.parent is not group:
        raise InputError("subgroups belong to a different group")
    seen = set()
    reps = []
    for g in group.elements:
        if g in seen:
            continue
        reps.append(g)
        for h in h_sub.elements:
            hg = pmul(h, g)
            for k in k_sub.elements:
                seen.add(pmul(hg, k))
    return reps


def double_coset_sizes(group, h_sub, k_sub):
    sizes = []
    for g in double_cosets(group, h_sub, k_sub):
        block = {pmul(pmul(h, g), k)
                 for h in h_sub.elements for k in k_sub.elements}
        sizes.append(len(block))
    return sizes


@dataclass(frozen=True)
class SubgroupClass:
    """One conjugacy class of subgroups."""
    index: int
    representative: Subgroup
    conjugates: tuple
    normalizer: Subgroup

    @property
    def order(self):
        return self.representative.order

    def __len__(self):
        return len(self.conjugates)


class SubgroupClassTable:
    """All subgroups of G partitioned into conjugacy classes.

    Classes are sorted by (order, lexicographic representative); the
    representative is the minimum of its class under the element-list order.
    """

    def __init__(self, group, classes):
        self.group = group
        self.classes = tuple(classes)
        self._class_of = {}
        for c in self.classes:
            for h in c.conjugates:
                self._class_of[h.key()] = c.index

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    @property
    def subgroup_count(self):
        return sum(len(c) for c in self.classes)

    def class_of(self, sub):
        try:
            return self._class_of[sub.key()]
        except KeyError:
            raise InputError("not a subgroup of this group") from None

    def class_of_elements(self, elements):
        return self.class_of(self.group.subgroup(elements))

    def all_subgroups(self):
        return [h for c in self.classes for h in c.conjugates]

    def weyl(self, index):
        return weyl_group(self.group, self.classes[index].representative)


@lru_cache(maxsize=None)
def enumerate_subgroups(group, bound=SUBGROUP_ENUM_BOUND):
    """Subgroup conjugacy classes of a group of order <= bound."""
    if group.order > bound:
        raise ResourceLimitError(
            f"subgroup enumeration bound {bound} exceeded (|G|={group.order})")
    known = {frozenset([group.identity])}
    frontier = list(known)
    while frontier:
        nxt = []
        for h in frontier:
            for g in group.elements:
                if g in h:
                    continue
                extended = frozenset(closure(group.degree, list(h) + [g]))
                if extended not in known:
                    known.add(extended)
                    nxt.append(extended)
        frontier = nxt
    subgroups = {h: Subgroup(group, h, _closed=True) for h in known}
    unassigned = set(known)
    classes = []
    while unassigned:
        h = min(unassigned, key=lambda s: tuple(sorted(s)))
        orbit = {h}
        for g in group.elements:
            orbit.add(subgroups[h].conjugate(g).elements)
        unassigned -= orbit
        conjugates = tuple(sorted((subgroups[o] for o in orbit),
                                  key=lambda s: s.key()))
        classes.append(conjugates)
    classes.sort(key=lambda conj: (conj[0].order, conj[0].key()))
    out = []
    for i, conjugates in enumerate(classes):
        rep = conjugates[0]
        out.append(SubgroupClass(i, rep, conjugates, rep.normalizer()))
    return SubgroupClassTable(group, out)
