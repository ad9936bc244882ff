"""Finite simplicial sets, finite categories, nerves, edgewise subdivision,
twisted arrow categories, and integer simplicial homology.

A simplicial set is stored by its nondegenerate simplices.  An arbitrary
simplex is a "virtual" pair (x, eta) with x nondegenerate and eta a
monotone surjection (the Eilenberg-Zilber normal form); all simplicial
operators are computed generically from the stored face tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import intlinalg
from .errors import InputError, ResourceLimitError
from .intlinalg import IMat


def delta_map(n, i):
    """Coface [n] -> [n+1] skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n + 1))


def sigma_map(n, i):
    """Codegeneracy [n+1] -> [n] hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def identity_map(n):
    return tuple(range(n + 1))


def compose_maps(outer, inner):
    """(outer o inner) for monotone maps given as image tuples."""
    return tuple(outer[v] for v in inner)


def is_surjection_onto(f, k):
    return len(set(f)) == k + 1


class SimplicialSetFin:
    """Finite simplicial set by nondegenerate simplices and face tables.

    `faces[x][i]` is the i-th face of the nondegenerate simplex x as a
    virtual (label, surjection).  `complete_through` is the dimension up to
    which the data is complete; None means fully materialized.
    """

    def __init__(self, simplices, faces, complete_through=None, check=True):
        self.simplices = {n: tuple(xs) for n, xs in simplices.items() if xs}
        self.faces = dict(faces)
        self.dim_of = {}
        for n, xs in self.simplices.items():
            for x in xs:
                if x in self.dim_of:
                    raise InputError(f"duplicate simplex label {x!r}")
                self.dim_of[x] = n
        self.complete_through = complete_through
        if check:
            self._check_structure()

    def _check_structure(self):
        for x, n in self.dim_of.items():
            if n == 0:
                continue
            fs = self.faces[x]
            if len(fs) != n + 1:
                raise InputError(f"simplex {x!r} needs {n + 1} faces")
            for y, eta in fs:
                k = self.dim_of[y]
                if len(eta) != n or not is_surjection_onto(eta, k):
                    raise InputError(f"bad face surjection on {x!r}")
                if any(eta[i] > eta[i + 1] for i in range(len(eta) - 1)):
                    raise InputError(f"face surjection not monotone on {x!r}")
        # simplicial identities d_i d_j = d_{j-1} d_i for i < j
        for x, n in self.dim_of.items():
            if n < 2:
                continue
            for j in range(1, n + 1):
                for i in range(j):
                    lhs = self.act(self.faces[x][j], delta_map(n - 2, i))
                    rhs = self.act(self.faces[x][i], delta_map(n - 2, j - 1))
                    assert lhs == rhs, f"simplicial identity fails at {x!r}"

    def n_cells(self, n):
        return len(self.simplices.get(n, ()))

    def cells(self, n):
        return self.simplices.get(n, ())

    def max_dim(self):
        return max(self.simplices, default=-1)

    def total_cells(self):
        return sum(len(v) for v in self.simplices.values())

    def virtual(self, x):
        return (x, identity_map(self.dim_of[x]))

    def face(self, x, i):
        if self.dim_of[x] == 0:
            raise InputError("vertices have no faces")
        return self.faces[x][i]

    def act(self, virt, alpha):
        """Apply the simplicial operator alpha: [m] -> [n] to a virtual
        n-simplex, returning the normal form of the resulting m-simplex."""
        x, eta = virt
        f = compose_maps(eta, alpha)
        while True:
            k = self.dim_of[x]
            values = set(f)
            if len(values) == k + 1:
                return (x, f)
            missing = max(v for v in range(k + 1) if v not in values)
            y, tau = self.faces[x][missing]
            f = compose_maps(tau, tuple(v - 1 if v > missing else v for v in f))
            x = y

    def is_complete_through(self, n):
        return self.complete_through is None or self.complete_through >= n

    def all_virtuals(self, n):
        """Every n-simplex (degenerate or not) as a virtual."""
        if not self.is_complete_through(n):
            raise ResourceLimitError(f"simplicial set not materialized to dim {n}")
        out = []
        for k in sorted(self.simplices):
            if k > n:
                break
            for x in self.simplices[k]:
                for steps in itertools.combinations(range(n), k):
                    eta = [0]
                    for p in range(n):
                        eta.append(eta[-1] + (1 if p in steps else 0))
                    out.append((x, tuple(eta)))
        return out

    def to_json(self):
        cells = []
        for n in sorted(self.simplices):
            for x in self.simplices[n]:
                rec = {"dim": n, "id": _label_str(x)}
                if n > 0:
                    rec["faces"] = [[_label_str(y), list(eta)]
                                    for y, eta in self.faces[x]]
                cells.append(rec)
        return {"cells": cells, "complete_through": self.complete_through}


def _label_str(x):
    return repr(x)


# --- complexes of vertex subsets ----------------------------------------


def _subset_complex(m, family):
    """Simplicial subcomplex of Delta^m on a downward-closed family of
    nonempty vertex subsets, labels being sorted vertex tuples."""
    by_dim = {}
    for t in family:
        t = tuple(sorted(t))
        by_dim.setdefault(len(t) - 1, []).append(t)
    simplices = {n: tuple(sorted(xs)) for n, xs in by_dim.items()}
    faces = {}
    members = {t for xs in by_dim.values() for t in xs}
    for n, xs in simplices.items():
        if n == 0:
            continue
        for t in xs:
            fs = []
            for i in range(n + 1):
                sub = t[:i] + t[i + 1:]
                if sub not in members:
                    raise InputError("family of faces is not downward closed")
                fs.append((sub, identity_map(n - 1)))
            faces[t] = tuple(fs)
    return SimplicialSetFin(simplices, faces, complete_through=None)


def standard_simplex(m):
    if m < 0:
        raise InputError("negative dimension")
    family = [t for r in range(1, m + 2)
              for t in itertools.combinations(range(m + 1), r)]
    return _subset_complex(m, family)


def boundary_simplex(m):
    family = [t for r in range(1, m + 1)
              for t in itertools.combinations(range(m + 1), r)]
    return _subset_complex(m, family)


def generalized_horn(m, s_set):
    """Union of the codimension-1 faces of Delta^m containing Delta^S."""
    s_set = frozenset(s_set)
    if not s_set:
        raise InputError("generalized horn needs a nonempty vertex set")
    if not s_set <= set(range(m + 1)):
        raise InputError("vertex set out of range")
    if s_set == set(range(m + 1)):
        raise InputError("S = {0..m} gives the empty union; rejected")
    outside = set(range(m + 1)) - s_set
    family = [t for r in range(1, m + 1)
              for t in itertools.combinations(range(m + 1), r)
              if any(j not in t for j in outside)]
    return _subset_complex(m, family)


# --- finite categories ---------------------------------------------------


class FiniteCategory:
    """Finite category with integer morphism ids and an explicit
    composition table; unit and associativity laws checked exhaustively."""

    def __init__(self, objects, src, tgt, comp, identities, check=True):
        self.objects = tuple(objects)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.comp = dict(comp)
        self.identities = tuple(identities)
        self.n_morphisms = len(self.src)
        if check:
            self._validate()

    def _validate(self):
        n_obj = len(self.objects)
        if len(self.identities) != n_obj:
            raise InputError("one identity per object required")
        for x, m in enumerate(self.identities):
            if self.src[m] != x or self.tgt[m] != x:
                raise InputError("identity endpoints wrong")
        for g in range(self.n_morphisms):
            for f in range(self.n_morphisms):
                composable = self.tgt[f] == self.src[g]
                if composable != ((g, f) in self.comp):
                    raise InputError("composition table domain mismatch")
                if composable:
                    c = self.comp[(g, f)]
                    if self.src[c] != self.src[f] or self.tgt[c] != self.tgt[g]:
                        raise InputError("composite endpoints wrong")
        for f in range(self.n_morphisms):
            if self.compose(self.identities[self.tgt[f]], f) != f:
                raise InputError("left unit law fails")
            if self.compose(f, self.identities[self.src[f]]) != f:
                raise InputError("right unit law fails")
        for h in range(self.n_morphisms):
            for g in range(self.n_morphisms):
                if self.src[h] != self.tgt[g]:
                    continue
                hg = self.comp[(h, g)]
                for f in range(self.n_morphisms):
                    if self.src[g] != self.tgt[f]:
                        continue
                    if self.comp[(hg, f)] != self.comp[(h, self.comp[(g, f)])]:
                        raise InputError("associativity fails")

    def compose(self, g, f):
        """g after f."""
        return self.comp[(g, f)]

    def is_identity(self, m):
        return self.identities[self.src[m]] == m

    def hom(self, x, y):
        return [m for m in range(self.n_morphisms)
                if self.src[m] == x and self.tgt[m] == y]

    def nonidentity_morphisms(self):
        return [m for m in range(self.n_morphisms) if not self.is_identity(m)]

    def op(self):
        comp = {(f, g): c for (g, f), c in self.comp.items()}
        return FiniteCategory(self.objects, self.tgt, self.src, comp,
                              self.identities, check=False)

    def has_cycle(self):
        """Cycle in the digraph of nonidentity morphisms (nerve unbounded)."""
        adj = {i: set() for i in range(len(self.objects))}
        for m in self.nonidentity_morphisms():
            if self.src[m] == self.tgt[m]:
                return True
            adj[self.src[m]].add(self.tgt[m])
        state = {}

        def dfs(v):
            state[v] = 1
            for w in adj[v]:
                if state.get(w) == 1:
                    return True
                if state.get(w) is None and dfs(w):
                    return True
            state[v] = 2
            return False

        return any(state.get(v) is None and dfs(v) for v in adj)

    @staticmethod
    def from_poset(labels, le):
        """Poset category: le(a, b) must be a partial order on labels."""
        n = len(labels)
        morphisms = [(i, j) for i in range(n) for j in range(n)
                     if le(labels[i], labels[j])]
        index = {m: k for k, m in enumerate(morphisms)}
        comp = {}
        for (j, k2) in morphisms:
            for (i, j2) in morphisms:
                if j2 == j:
                    comp[(index[(j, k2)], index[(i, j2)])] = index[(i, k2)]
        identities = [index[(i, i)] for i in range(n)]
        return FiniteCategory(labels, [m[0] for m in morphisms],
                              [m[1] for m in morphisms], comp, identities)

    @staticmethod
    def chain(m):
        return FiniteCategory.from_poset(list(range(m + 1)), lambda a, b: a <= b)

    @staticmethod
    def discrete(labels):
        return FiniteCategory.from_poset(list(labels), lambda a, b: a == b)

    @staticmethod
    def from_group(group):
        """One-object category with the group's elements as morphisms."""
        els = list(group.elements)
        index = {e: i for i, e in enumerate(els)}
        comp = {(index[a], index[b]): index[group.mul(a, b)]
                for a in els for b in els}
        return FiniteCategory(("*",), [0] * len(els), [0] * len(els),
                              comp, (index[group.identity],))

    @staticmethod
    def product(c, d):
        objs = [(x, y) for x in range(len(c.objects))
                for y in range(len(d.objects))]
        obj_index = {o: i for i, o in enumerate(objs)}
        mors = [(f, g) for f in range(c.n_morphisms)
                for g in range(d.n_morphisms)]
        mor_index = {m: i for i, m in enumerate(mors)}
        src = [obj_index[(c.src[f], d.src[g])] for f, g in mors]
        tgt = [obj_index[(c.tgt[f], d.tgt[g])] for f, g in mors]
        comp = {}
        for i2, (f2, g2) in enumerate(mors):
            for i1, (f1, g1) in enumerate(mors):
                if c.tgt[f1] == c.src[f2] and d.tgt[g1] == d.src[g2]:
                    comp[(i2, i1)] = mor_index[(c.comp[(f2, f1)],
                                                d.comp[(g2, g1)])]
        idents = [mor_index[(c.identities[x], d.identities[y])]
                  for x, y in objs]
        labels = [(c.objects[x], d.objects[y]) for x, y in objs]
        cat = FiniteCategory(labels, src, tgt, comp, idents, check=False)
        cat._factor_index = mor_index
        cat._obj_index = obj_index
        return cat


@dataclass(frozen=True)
class CatFunctor:
    dom: FiniteCategory
    cod: FiniteCategory
    obj_map: tuple
    mor_map: tuple

    def validate(self):
        for x in range(len(self.dom.objects)):
            if self.mor_map[self.dom.identities[x]] != \
                    self.cod.identities[self.obj_map[x]]:
                raise InputError("functor does not preserve identities")
        for m in range(self.dom.n_morphisms):
            fm = self.mor_map[m]
            if self.cod.src[fm] != self.obj_map[self.dom.src[m]] or \
                    self.cod.tgt[fm] != self.obj_map[self.dom.tgt[m]]:
                raise InputError("functor breaks endpoints")
        for (g, f), c in self.dom.comp.items():
            if self.cod.comp[(self.mor_map[g], self.mor_map[f])] != self.mor_map[c]:
                raise InputError("functor breaks composition")
        return self


def twisted_arrow_category(cat):
    """tw(C): objects are morphisms f of C; an arrow f => g is a pair
    (a, b) with g = b o f o a.  (0, m) is terminal in tw([m])."""
    objects = tuple(range(cat.n_morphisms))
    arrows = []
    for f in range(cat.n_morphisms):
        for g in range(cat.n_morphisms):
            for a in cat.hom(cat.src[g], cat.src[f]):
                for b in cat.hom(cat.tgt[f], cat.tgt[g]):
                    if cat.comp[(b, cat.comp[(f, a)])] == g:
                        arrows.append((f, g, a, b))
    index = {m: i for i, m in enumerate(arrows)}
    src = [m[0] for m in arrows]
    tgt = [m[1] for m in arrows]
    comp = {}
    for i2, (g2, h, a2, b2) in enumerate(arrows):
        for i1, (f, g1, a1, b1) in enumerate(arrows):
            if g1 == g2:
                comp[(i2, i1)] = index[(f, h, cat.comp[(a1, a2)],
                                        cat.comp[(b2, b1)])]
    idents = [index[(f, f, cat.identities[cat.src[f]],
                     cat.identities[cat.tgt[f]])] for f in objects]
    tw = FiniteCategory(objects, src, tgt, comp, idents)
    tw.arrow_data = tuple(arrows)
    return tw


def twisted_arrow_projection(cat, tw=None):
    """The canonical functor tw(C) -> C^op x C."""
    if tw is None:
        tw = twisted_arrow_category(cat)
    target = FiniteCategory.product(cat.op(), cat)
    obj_map = [target._obj_index[(cat.src[f], cat.tgt[f])]
               for f in tw.objects]
    mor_map = [target._factor_index[(a, b)]
               for (_, _, a, b) in tw.arrow_data]
    return CatFunctor(tw, target, tuple(obj_map), tuple(mor_map)).validate()


def is_discrete_opfibration(functor):
    """Every arrow downstairs with a given source lift has a unique lift."""
    dom, cod = functor.dom, functor.cod
    for e in range(len(dom.objects)):
        fe = functor.obj_map[e]
        for alpha in range(cod.n_morphisms):
            if cod.src[alpha] != fe:
                continue
            lifts = [m for m in range(dom.n_morphisms)
                     if dom.src[m] == e and functor.mor_map[m] == alpha]
            if len(lifts) != 1:
                return False
    return True


# --- nerves ---------------------------------------------------------------


def nerve(cat, cap):
    """Nerve of a finite category, materialized through dimension `cap`.

    Nondegenerate n-simplices are chains of n composable nonidentity
    morphisms; a vertex is an object index.  If the nerve keeps growing past
    the cap the result is marked as truncated.
    """
    if cap < 0:
        raise InputError("cap must be >= 0")
    simplices = {0: tuple(range(len(cat.objects)))}
    faces = {}
    nonident = cat.nonidentity_morphisms()
    level = [(m,) for m in nonident]
    n = 1
    while level and n <= cap:
        simplices[n] = tuple(sorted(level))
        for chain in level:
            faces[chain] = tuple(_nerve_face(cat, chain, i)
                                 for i in range(n + 1))
        nxt = []
        for chain in level:
            tail = cat.tgt[chain[-1]]
            for m in nonident:
                if cat.src[m] == tail:
                    nxt.append(chain + (m,))
        level = nxt
        n += 1
    truncated = bool(level)
    return SimplicialSetFin(simplices, faces,
                            complete_through=cap if truncated else None)


def _nerve_face(cat, chain, i):
    n = len(chain)
    if n == 1:
        return (cat.tgt[chain[0]] if i == 0 else cat.src[chain[0]], (0,))
    if i == 0:
        return (chain[1:], identity_map(n - 1))
    if i == n:
        return (chain[:-1], identity_map(n - 1))
    c = cat.comp[(chain[i], chain[i - 1])]
    if cat.is_identity(c):
        stripped = chain[:i - 1] + chain[i + 1:]
        label = stripped if stripped else cat.src[chain[0]]
        return (label, sigma_map(n - 2, i - 1))
    return (chain[:i - 1] + (c,) + chain[i + 1:], identity_map(n - 1))


# --- edgewise subdivision -------------------------------------------------


def edgewise_map(alpha, m, n):
    """epsilon(alpha): [2m+1] -> [2n+1] for alpha: [m] -> [n], where
    epsilon is [n] |-> [n]^op * [n]."""
    first = tuple(n - alpha[m - p] for p in range(m + 1))
    second = tuple(n + 1 + alpha[p] for p in range(m + 1))
    return first + second


def _ew_face_map(n, i):
    return edgewise_map(delta_map(n - 1, i), n - 1, n)


def _ew_degeneracy_map(n, i):
    return edgewise_map(sigma_map(n, i), n + 1, n)


def edgewise_subdivision(x_set, cap=None):
    """The simplicial set with n-simplices X_{2n+1}.

    Structure maps are induced by [n] |-> [n]^op * [n].  Raises a resource
    error if X is not materialized deeply enough for the requested cap.
    """
    if x_set.complete_through is None:
        natural = max(x_set.simplices, default=-1)
        limit = natural if cap is None else min(cap, natural)
        complete = None if cap is None or cap >= natural else cap
    else:
        avail = (x_set.complete_through - 1) // 2
        if cap is None:
            limit = avail
        elif cap > avail:
            raise ResourceLimitError(
                f"edgewise subdivision to dim {cap} needs the source "
                f"materialized to dim {2 * cap + 1}")
        else:
            limit = cap
        complete = limit
    simplices = {}
    faces = {}
    nondeg_by_level = {}
    for n in range(limit + 1):
        level = []
        for virt in x_set.all_virtuals(2 * n + 1):
            if not _ew_is_degenerate(x_set, virt, n):
                level.append(virt)
        nondeg_by_level[n] = set(level)
        if level:
            simplices[n] = tuple(level)
        for virt in level:
            if n == 0:
                continue
            fs = []
            for i in range(n + 1):
                down = x_set.act(virt, _ew_face_map(n, i))
                fs.append(_ew_normalize(x_set, down, n - 1))
            faces[virt] = tuple(fs)
    out = SimplicialSetFin(simplices, faces, complete_through=complete)
    return out


def _ew_is_degenerate(x_set, virt, n):
    for i in range(n):
        down = x_set.act(virt, _ew_face_map(n, i))
        if x_set.act(down, _ew_degeneracy_map(n - 1, i)) == virt:
            return True
    return False


def _ew_normalize(x_set, virt, n):
    """Express an edgewise n-simplex (given as an X-virtual) as a
    degeneracy of an edgewise-nondegenerate simplex."""
    for i in range(n):
        down = x_set.act(virt, _ew_face_map(n, i))
        if x_set.act(down, _ew_degeneracy_map(n - 1, i)) == virt:
            root, eta = _ew_normalize(x_set, down, n - 1)
            return (root, compose_maps(eta, sigma_map(n - 1, i)))
    return (virt, identity_map(n))


def edgewise_comparison(x_set, virt, n):
    """The two halves of an edgewise n-simplex: its images under the maps
    to X^op and to X (first and second join factor)."""
    left = x_set.act(virt, tuple(range(n + 1)))
    right = x_set.act(virt, tuple(range(n + 1, 2 * n + 2)))
    return left, right


def nerve_tw_map(cat, n, tw_simplex):
    """Image of a nondegenerate n-simplex of N(tw C) inside the edgewise
    subdivision of N(C): unwind the chain of twisted arrows into a
    (2n+1)-chain of C and normalize away identity arrows.

    `tw_simplex` is a tw object (C-morphism id) for n = 0, else a tuple of
    tw-arrow data (f, g, a, b)."""
    if n == 0:
        full = [tw_simplex]
    else:
        arrows = tw_simplex
        f0 = arrows[0][0]
        full = [a for (_, _, a, _) in reversed(arrows)]
        full.append(f0)
        full.extend(b for (_, _, _, b) in arrows)
    positions = [0]
    for m in full:
        positions.append(positions[-1] + (0 if cat.is_identity(m) else 1))
    stripped = tuple(m for m in full if not cat.is_identity(m))
    label = stripped if stripped else cat.src[full[0]]
    return (label, tuple(positions))


def tw_nerve_edgewise_agree(cat, cap):
    """Check that N(tw C) and the edgewise subdivision of N(C) agree
    through dimension `cap`: equal cell counts, and the canonical
    unwinding map is a face-compatible bijection in each dimension."""
    nc = nerve(cat, 2 * cap + 1)
    ew_cap = None if nc.complete_through is None else cap
    ew = edgewise_subdivision(nc, ew_cap)
    tw = twisted_arrow_category(cat)
    ntw = nerve(tw, cap)
    top = cap
    if ntw.complete_through is None:
        top = min(top, max(list(ntw.simplices) + [-1]))
    mapped = {}
    for n in range(top + 1):
        for x in ntw.cells(n):
            if n == 0:
                mapped[x] = nerve_tw_map(cat, 0, tw.objects[x])
            else:
                mapped[x] = nerve_tw_map(
                    cat, n, tuple(tw.arrow_data[t] for t in x))
    for n in range(top + 1):
        imgs = [mapped[x] for x in ntw.cells(n)]
        if len(set(imgs)) != len(imgs) or set(imgs) != set(ew.cells(n)):
            return False
        if n == 0:
            continue
        for x in ntw.cells(n):
            for i in range(n + 1):
                y, eta = ntw.faces[x][i]
                expected = (mapped[y], eta)
                if ew.faces[mapped[x]][i] != expected:
                    return False
    return True


# --- homology -------------------------------------------------------------


class ChainComplexZ:
    """Integer chain complex; checks that boundaries square to zero."""

    def __init__(self, dims, boundaries):
        self.dims = dict(dims)
        self.boundaries = dict(boundaries)
        for n, mat in self.boundaries.items():
            if mat.cols != self.dims.get(n, 0) or \
                    mat.rows != self.dims.get(n - 1, 0):
                raise InputError(f"boundary {n} has the wrong shape")
        for n, mat in self.boundaries.items():
            nxt = self.boundaries.get(n + 1)
            if nxt is not None:
                assert (mat @ nxt).is_zero(), "boundary squared is nonzero"

    def homology(self, n):
        """Invariant factors of H_n: 0 per free summand, then torsion."""
        d_n = self.boundaries.get(n)
        d_next = self.boundaries.get(n + 1)
        c_n = self.dims.get(n, 0)
        rank_n = intlinalg.SNF(d_n.tolists()).rank if d_n is not None and c_n else 0
        if d_next is not None and d_next.cols:
            snf = intlinalg.SNF(d_next.tolists())
            rank_next = snf.rank
            torsion = [snf.d[i][i] for i in range(rank_next)
                       if abs(snf.d[i][i]) > 1]
        else:
            rank_next = 0
            torsion = []
        betti = c_n - rank_n - rank_next
        assert betti >= 0
        return [0] * betti + sorted(abs(t) for t in torsion)


def chain_complex(x_set, max_deg, reduced=True):
    """Normalized (reduced) chain complex of the nondegenerate simplices."""
    if not x_set.is_complete_through(max_deg + 1):
        raise ResourceLimitError(
            f"homology through degree {max_deg} needs materialization "
            f"to dimension {max_deg + 1}")
    dims = {n: x_set.n_cells(n) for n in range(-1, max_deg + 2)}
    if reduced:
        dims[-1] = 1
    index = {n: {x: i for i, x in enumerate(x_set.cells(n))}
             for n in range(max_deg + 2)}
    boundaries = {}
    for n in range(1, max_deg + 2):
        rows, cols = dims[n - 1], dims[n]
        data = [[0] * cols for _ in range(rows)]
        for j, x in enumerate(x_set.cells(n)):
            for i in range(n + 1):
                y, eta = x_set.faces[x][i]
                if eta == identity_map(n - 1):
                    data[index[n - 1][y]][j] += (-1) ** i
        boundaries[n] = IMat(rows, cols, data)
    if reduced:
        boundaries[0] = IMat(1, dims[0], [[1] * dims[0]])
    return ChainComplexZ(dims, boundaries)


def homology(x_set, max_deg, reduced=True):
    """Reduced integer homology through degree max_deg, as invariant
    factors per degree (0 denotes a free summand)."""
    cx = chain_complex(x_set, max_deg, reduced=reduced)
    return {n: cx.homology(n) for n in range(max_deg + 1)}


# --- poset corpus ---------------------------------------------------------


@lru_cache(maxsize=None)
def all_posets(n):
    """All posets on n elements up to isomorphism, as le-matrices.

    Every finite poset linearizes, so it suffices to scan transitive
    reflexive antisymmetric relations contained in the natural order.
    """
    if n == 0:
        return (frozenset(),)
    pairs = [(i, j) for i in range(n) for j in range(n) if i < j]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        rel.update(p for k, p in enumerate(pairs) if bits >> k & 1)
        if any((i, j) in rel and (j, k) in rel and (i, k) not in rel
               for i in range(n) for j in range(n) for k in range(n)):
            continue
        canon = min(tuple(sorted((p[i], p[j]) for i, j in rel))
                    for p in itertools.permutations(range(n)))
        if canon not in seen:
            seen.add(canon)
            out.append(frozenset(rel))
    return tuple(sorted(out, key=sorted))


def poset_category(relation, n):
    rel = set(relation)
    return FiniteCategory.from_poset(list(range(n)),
                                     lambda a, b: (a, b) in rel)
