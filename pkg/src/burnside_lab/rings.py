"""Group completion of the span category's hom monoids: Burnside modules
A(X, Y), the Burnside ring A(G) with its structure constants, the table
of marks and mark homomorphism, and the fixed-point / inflation ring maps
between A(G) and A(G/N).

Products in A(G) are computed by the pullback oracle (decomposing actual
product G-sets); the double-coset formula is a derived test elsewhere,
never an input.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .gsets import GSet, fixed_points, product, transitive_models
from .groups import enumerate_subgroups, quotient_group
from .intlinalg import IMat, det
from .spans import SpanClass, atomic_span_classes, compose


class BurnsideModule:
    """A(X, Y): the free abelian group on transitive-apex span classes.

    Elements are integer vectors over the canonical basis; a general span
    class maps to the multiset count of its atoms (the hom monoid is free
    on atoms, which is itself a tested fact, not an assumption).
    """

    def __init__(self, x_set, y_set):
        if x_set.group is not y_set.group:
            raise InputError("module needs G-sets over one group")
        self.group = x_set.group
        self.source = x_set
        self.target = y_set
        self.basis = atomic_span_classes(x_set, y_set)
        self.index = {a: i for i, a in enumerate(self.basis)}

    @property
    def rank(self):
        return len(self.basis)

    def zero(self):
        return (0,) * self.rank

    def vector_of(self, span_cls):
        if not span_cls.source.same_as(self.source) or \
                not span_cls.target.same_as(self.target):
            raise InputError("span class lives in a different hom module")
        vec = [0] * self.rank
        for atom in span_cls.atoms:
            vec[self.index[atom]] += 1
        return tuple(vec)

    def class_of_basis(self, i):
        return SpanClass(self.source, self.target, (self.basis[i],))

    def describe(self, vec):
        return {str(self.basis[i]): c for i, c in enumerate(vec) if c}


def group_complete_hom(x_set, y_set):
    return BurnsideModule(x_set, y_set)


def assembly_product(module_xy, module_yz, module_xz, vec1, vec2):
    """Bilinear composition A(X,Y) x A(Y,Z) -> A(X,Z) on vectors."""
    out = [0] * module_xz.rank
    for i, c1 in enumerate(vec1):
        if not c1:
            continue
        for j, c2 in enumerate(vec2):
            if not c2:
                continue
            comp = compose(module_xy.class_of_basis(i),
                           module_yz.class_of_basis(j))
            for atom in comp.atoms:
                out[module_xz.index[atom]] += c1 * c2
    return tuple(out)


# --- the Burnside ring -----------------------------------------------------


class BurnsideRing:
    """A(G) with basis [G/H] over subgroup classes, structure constants
    computed by decomposing honest product G-sets."""

    def __init__(self, group):
        self.group = group
        self.table = enumerate_subgroups(group)
        self.models = transitive_models(group)
        self.rank = len(self.table)
        self.unit_index = self.rank - 1  # classes sorted by order: G is last
        assert self.table[self.unit_index].order == group.order
        self.constants = self._structure_constants()

    def _structure_constants(self):
        out = {}
        for i in range(self.rank):
            for j in range(i, self.rank):
                prod, _, _ = product(self.models[i], self.models[j])
                vec = [0] * self.rank
                for cls in prod.canonical_form():
                    vec[cls] += 1
                out[(i, j)] = tuple(vec)
                out[(j, i)] = tuple(vec)
        return out

    def unit(self):
        vec = [0] * self.rank
        vec[self.unit_index] = 1
        return tuple(vec)

    def multiply(self, u, v):
        out = [0] * self.rank
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in enumerate(self.constants[(i, j)]):
                    out[k] += a * b * c
        return tuple(out)

    def class_vector(self, gset):
        vec = [0] * self.rank
        for cls in gset.canonical_form():
            vec[cls] += 1
        return tuple(vec)

    def verify_ring_axioms(self):
        """Commutative, associative, unital; associativity is cross-checked
        against triple product G-sets, not just the cached table."""
        basis = range(self.rank)
        for i in basis:
            if self.multiply(self.unit(), self._e(i)) != self._e(i):
                return False
            for j in basis:
                if self.constants[(i, j)] != self.constants[(j, i)]:
                    return False
                if any(c < 0 for c in self.constants[(i, j)]):
                    return False
        for i in basis:
            for j in basis:
                for k in basis:
                    lhs = self.multiply(self.constants[(i, j)], self._e(k))
                    rhs = self.multiply(self._e(i), self.constants[(j, k)])
                    if lhs != rhs:
                        return False
                    triple, _, _ = product(self.models[i], self.models[j])
                    triple2, _, _ = product(triple, self.models[k])
                    if self.class_vector(triple2) != lhs:
                        return False
        return True

    def _e(self, i):
        vec = [0] * self.rank
        vec[i] = 1
        return tuple(vec)


@lru_cache(maxsize=None)
def burnside_ring(group):
    return BurnsideRing(group)


# --- tables of marks -------------------------------------------------------


@dataclass(frozen=True)
class MarksMatrix:
    """Rows indexed by orbit types [G/K], columns by subgroup classes H,
    entry |(G/K)^H|; lower triangular in the size order with Weyl-order
    diagonal."""
    group: object
    matrix: tuple

    def entry(self, k_index, h_index):
        return self.matrix[k_index][h_index]

    @property
    def size(self):
        return len(self.matrix)

    def determinant(self):
        return det([list(r) for r in self.matrix])

    def as_lists(self):
        return [list(r) for r in self.matrix]


def table_of_marks(group):
    table = enumerate_subgroups(group)
    models = transitive_models(group)
    rows = []
    for model in models:
        row = tuple(fixed_points(model, cls.representative).count
                    for cls in table)
        rows.append(row)
    return MarksMatrix(group, tuple(rows))


def mark_vector(group, ring_vec):
    """The mark homomorphism A(G) -> Z^{classes} on a basis vector."""
    marks = table_of_marks(group)
    n = marks.size
    return tuple(sum(ring_vec[k] * marks.entry(k, h) for k in range(n))
                 for h in range(n))


# --- Appendix-B ring maps --------------------------------------------------


@dataclass(frozen=True)
class RingMap:
    """Additive map between Burnside rings, as a matrix over the bases."""
    source: BurnsideRing
    target: BurnsideRing
    matrix: IMat

    def apply(self, vec):
        return self.matrix.apply(vec)

    def is_unital(self):
        return self.apply(self.source.unit()) == self.target.unit()

    def is_multiplicative(self):
        n = self.source.rank
        for i in range(n):
            for j in range(n):
                lhs = self.apply(self.source.constants[(i, j)])
                rhs = self.target.multiply(self.apply(self.source._e(i)),
                                           self.apply(self.source._e(j)))
                if lhs != rhs:
                    return False
        return True

    def is_ring_hom(self):
        return self.is_unital() and self.is_multiplicative()


def fixed_point_ring_map(group, normal):
    """Phi^N: A(G) -> A(G/N), [X] -> [X^N] with the quotient action."""
    if not normal.is_normal():
        raise InputError("fixed-point map needs a normal subgroup")
    quot = quotient_group(group, normal)
    src = burnside_ring(group)
    tgt = burnside_ring(quot.group)
    cols = []
    for model in src.models:
        fp = fixed_points(model, normal)
        qset, _ = fp.quotient_gset()
        cols.append(tgt.class_vector(qset))
    matrix = IMat(tgt.rank, src.rank,
                  [[cols[j][i] for j in range(src.rank)]
                   for i in range(tgt.rank)])
    return RingMap(src, tgt, matrix), quot


def inflation_map(group, normal, quot=None):
    """A(G/N) -> A(G): pull the G/N-action back along G -> G/N."""
    if not normal.is_normal():
        raise InputError("inflation needs a normal subgroup")
    if quot is None:
        quot = quotient_group(group, normal)
    src = burnside_ring(quot.group)
    tgt = burnside_ring(group)
    cols = []
    for model in src.models:
        action = [tuple(model.act(quot.project(gen), x)
                        for x in range(model.n_points))
                  for gen in group.generators]
        inflated = GSet(group, model.n_points, action)
        cols.append(tgt.class_vector(inflated))
    matrix = IMat(tgt.rank, src.rank,
                  [[cols[j][i] for j in range(src.rank)]
                   for i in range(tgt.rank)])
    return RingMap(src, tgt, matrix)


def double_coset_product_vector(group, h_index, k_index):
    """The classical double-coset expansion of [G/H][G/K]; used only as a
    derived cross-check against the pullback products."""
    from .groups import double_cosets
    table = enumerate_subgroups(group)
    h_sub = table[h_index].representative
    k_sub = table[k_index].representative
    vec = [0] * len(table)
    for g in double_cosets(group, h_sub, k_sub):
        conj = k_sub.conjugate(g)
        meet = group.subgroup(h_sub.elements & conj.elements)
        vec[table.class_of(meet)] += 1
    return tuple(vec)
