"""Completely factored simplices in the twisted-arrow poset of [m], their
juts/crossings/essential vertices, the intersection of each walk with the
horn filtration, the exceptional-case classification, and a constructive
inner-anodyne decomposer for generalized horns.

The intersection oracle works with raw vertex sets of walks and is fully
independent of the jut/crossing formulas, so the two sides of the main
classification theorem are computed along different routes.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError


@dataclass(frozen=True)
class Walk:
    """The completely factored m-simplex sigma(N): a descending walk from
    (0, m) in which step r either raises i (digit 1) or lowers j (digit 0)."""
    m: int
    big_n: int
    digits: tuple
    vertices: tuple


@lru_cache(maxsize=None)
def walk(m, big_n):
    if m < 1:
        raise InputError("walks need m >= 1")
    if not 0 <= big_n < (1 << m):
        raise InputError(f"N must satisfy 0 <= N < 2^{m}")
    digits = tuple((big_n >> (m - s)) & 1 for s in range(1, m + 1))
    vertices = []
    i = 0
    for r in range(m + 1):
        if r:
            i += digits[r - 1]
        vertices.append((i, (m - r) + i))
    w = Walk(m, big_n, digits, tuple(vertices))
    assert all(v[0] - u[0] + u[1] - v[1] == 1
               for u, v in zip(w.vertices, w.vertices[1:]))
    return w


def juts(m, big_n):
    """Positions z with d_z = 1 and (d_{z+1} = 0 or z = m)."""
    d = walk(m, big_n).digits
    return frozenset(z for z in range(1, m + 1)
                     if d[z - 1] == 1 and (z == m or d[z] == 0))


def crossings(m, big_n, k):
    """Crossings of sigma(N) away from k, by the four defining cases."""
    if not 0 <= k < m:
        raise InputError("crossings need 0 <= k < m")
    w = walk(m, big_n)
    d = w.digits
    out = set()
    for x in range(m):
        if x == 0:
            if d[0] == 0 or k != 0:
                out.add(0)
        elif d[x - 1] == 1 and d[x] == 1 and w.vertices[x][0] != k:
            out.add(x)
        elif d[x - 1] == 0 and d[x] == 0 and w.vertices[x][1] != k:
            out.add(x)
    return frozenset(out)


@dataclass(frozen=True)
class VertexSets:
    m: int
    big_n: int
    k: int
    juts: frozenset
    crossings: frozenset
    essential: frozenset


def essential_vertices(m, big_n, k):
    z = juts(m, big_n)
    x = crossings(m, big_n, k)
    e = frozenset(range(m + 1)) - z - x
    return VertexSets(m, big_n, k, z, x, e)


class FaceUnion:
    """A union of faces of Delta^m as the antichain of its maximal faces.

    Faces are vertex subsets stored as bitmasks; a face belongs to the
    union iff it is contained in some maximal face, so the antichain is a
    complete invariant.
    """

    def __init__(self, m, face_masks):
        masks = {f for f in face_masks if f}
        maximal = set()
        for f in masks:
            if not any(f != g and f | g == g for g in masks):
                maximal.add(f)
        self.m = m
        self.maximal = frozenset(maximal)

    def __eq__(self, other):
        return (isinstance(other, FaceUnion) and self.m == other.m
                and self.maximal == other.maximal)

    def __hash__(self):
        return hash((self.m, self.maximal))

    def __repr__(self):
        return f"FaceUnion(m={self.m}, faces={self.maximal_faces()})"

    def contains_face(self, mask):
        return any(mask | g == g for g in self.maximal)

    def maximal_faces(self):
        return sorted(sorted(_mask_bits(f)) for f in self.maximal)

    def is_generalized_horn(self):
        """The essential-vertex set E if this equals Lambda^m_E, else None."""
        if not self.maximal:
            return None
        full = (1 << (self.m + 1)) - 1
        missing = set()
        for f in self.maximal:
            gone = full & ~f
            if bin(gone).count("1") != 1:
                return None
            missing.add(gone.bit_length() - 1)
        return frozenset(range(self.m + 1)) - missing

    @staticmethod
    def generalized_horn(m, e_set):
        full = (1 << (m + 1)) - 1
        return FaceUnion(m, [full & ~(1 << y)
                             for y in range(m + 1) if y not in e_set])


def _mask_bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def intersection_oracle(m, big_n, k):
    """sigma(N) cap P_N(k) as a union of faces of sigma(N) = Delta^m.

    Computed from raw vertex sets: the walks are chains in the twisted
    arrow poset of [m], so the intersection of sigma(N) with sigma(K) is
    the face on their common vertices, and its intersection with the
    subdivided j-th face is the face on the vertices avoiding coordinate
    j.  k = m is allowed here (to reproduce the warning case); it is
    rejected by the formula side.
    """
    if not 0 <= k <= m:
        raise InputError("oracle needs 0 <= k <= m")
    wn = walk(m, big_n)
    faces = set()
    for other in range(big_n):
        common = _vertex_set(m, other)
        faces.add(_positions_mask(wn, lambda v: v in common))
    for j in range(m + 1):
        if j != k:
            faces.add(_positions_mask(wn, lambda v: j not in v))
    return FaceUnion(m, faces)


@lru_cache(maxsize=None)
def _vertex_set(m, big_n):
    return frozenset(walk(m, big_n).vertices)


def _positions_mask(w, pred):
    mask = 0
    for r, v in enumerate(w.vertices):
        if pred(v):
            mask |= 1 << r
    return mask


def oracle_matches_formula(m, big_n, k):
    return intersection_oracle(m, big_n, k) == FaceUnion.generalized_horn(
        m, essential_vertices(m, big_n, k).essential)


def classification_sweep(m, jobs=None):
    """All (N, k) pairs for which the oracle disagrees with the formula."""
    bad = []
    for k in range(m):
        for big_n in _sweep_order(1 << m):
            if not oracle_matches_formula(m, big_n, k):
                bad.append((big_n, k))
    bad.sort()
    return bad


def _sweep_order(n):
    order = list(range(n))
    seed = os.environ.get("BURNSIDE_LAB_SEED")
    if seed is not None:
        random.Random(seed).shuffle(order)
    return order


def is_condition_star(m, s_set):
    """Is there a < s < b with s in S and a, b outside S?"""
    s_set = frozenset(s_set)
    if not s_set or not s_set < set(range(m + 1)):
        raise InputError("S must be a nonempty proper subset of {0..m}")
    outside = sorted(set(range(m + 1)) - s_set)
    return any(outside[0] < s < outside[-1] for s in s_set)


def exceptional_cases(m, k):
    """All N whose essential-vertex set fails condition (*), with E."""
    if not 0 <= k < m:
        raise InputError("exceptional cases need 0 <= k < m")
    out = []
    for big_n in range(1 << m):
        e = essential_vertices(m, big_n, k).essential
        if not e or not is_condition_star(m, e):
            out.append((big_n, e))
    return out


def ones_prefix_n(m, t):
    """N_t: the walk with t leading 1-digits then all 0-digits."""
    if not 0 <= t <= m:
        raise InputError("t out of range")
    return ((1 << t) - 1) << (m - t)


def expected_exceptional_cases(m, k):
    """The classification table: two cases for k != 0, m+1 cases for k = 0."""
    if k != 0:
        return [(ones_prefix_n(m, k - 1), frozenset({m - 1, m})),
                (ones_prefix_n(m, k), frozenset({m}))]
    out = [(0, frozenset({m}))]
    out.extend((ones_prefix_n(m, t), frozenset({0, m}))
               for t in range(1, m))
    out.append(((1 << m) - 1, frozenset({0})))
    return sorted(out)


# --- inner anodyne decomposition ------------------------------------------


@dataclass(frozen=True)
class AnodyneDecomposition:
    """Fill sequence realizing Lambda^m_S -> Delta^m by inner horns.

    Each step (T, j) fills the simplex on the vertex set T through the
    inner horn of T at j; replaying the steps is the built-in proof.
    """
    m: int
    s_set: frozenset
    steps: tuple

    def replay(self):
        """Apply the steps starting from Lambda^m_S; returns True iff every
        step is an inner-horn fill and the result is all of Delta^m."""
        present = _horn_family(self.m, self.s_set)
        for t_verts, j in self.steps:
            t_set = frozenset(t_verts)
            if len(t_set) < 3:
                return False
            order = sorted(t_set)
            pos = order.index(j)
            if pos in (0, len(order) - 1):
                return False  # not inner
            if t_set in present or t_set - {j} in present:
                return False  # nothing to fill, or wrong horn state
            for v in t_set:
                if v != j and t_set - {v} not in present:
                    return False  # horn of T at j is not yet present
            present.add(t_set - {j})
            present.add(t_set)
        full = set(range(self.m + 1))
        expected = {frozenset(c) for c in _all_nonempty_subsets(full)}
        return present == expected


def _all_nonempty_subsets(vertices):
    vs = sorted(vertices)
    out = []
    for mask in range(1, 1 << len(vs)):
        out.append([vs[i] for i in range(len(vs)) if mask >> i & 1])
    return out


def _horn_family(m, s_set):
    """All simplices of Lambda^m_S as a set of vertex frozensets."""
    outside = set(range(m + 1)) - set(s_set)
    family = set()
    for sub in _all_nonempty_subsets(range(m + 1)):
        f = frozenset(sub)
        if any(j not in f for j in outside):
            family.add(f)
    return family


def anodyne_decomposition(m, s_set):
    """The recursive fill sequence from the condition-(*) proof."""
    s_set = frozenset(s_set)
    if not is_condition_star(m, s_set):
        raise InputError("condition (*) fails; no inner-anodyne decomposition")
    steps = _decompose(tuple(range(m + 1)), s_set)
    return AnodyneDecomposition(m, s_set, tuple(steps))


def _decompose(t_verts, s_set):
    """Fill sequence for Lambda^T_S -> Delta^T, assuming (*) holds for S
    inside the vertex set T."""
    order = list(t_verts)
    if len(s_set) == 1:
        (s,) = s_set
        return [(tuple(order), s)]
    if order[0] in s_set:
        s = order[0]
    elif order[-1] in s_set:
        s = order[-1]
    else:
        s = min(s_set)
    rest = tuple(v for v in order if v != s)
    smaller = s_set - {s}
    assert _star_on(rest, smaller), "choice of s broke condition (*)"
    assert _star_on(tuple(order), smaller)
    steps = _decompose(rest, smaller)   # fills the face Delta^{T - s}
    steps += _decompose(tuple(order), smaller)
    return steps


def _star_on(t_verts, s_set):
    outside = [v for v in t_verts if v not in s_set]
    return bool(outside) and any(outside[0] < s < outside[-1] for s in s_set)


def oracle_report(m, big_n, k):
    """Machine-readable account of one oracle run, with the k = m warning
    comparison when applicable."""
    union = intersection_oracle(m, big_n, k)
    report = {
        "m": m, "N": big_n, "k": k,
        "walk": [list(v) for v in walk(m, big_n).vertices],
        "maximal_faces": union.maximal_faces(),
        "is_generalized_horn": union.is_generalized_horn() is not None,
    }
    if k < m:
        vs = essential_vertices(m, big_n, k)
        report["juts"] = sorted(vs.juts)
        report["crossings"] = sorted(vs.crossings)
        report["essential_vertices"] = sorted(vs.essential)
        report["matches_formula"] = oracle_matches_formula(m, big_n, k)
    else:
        report["note"] = ("k = m lies outside the classification; "
                          "the intersection need not be a generalized horn")
        if (m, big_n) == (5, 13):
            listed = [[0, 1, 2, 4, 5], [0, 1, 2, 3, 4], [2, 3, 4, 5]]
            extras = [f for f in union.maximal_faces() if f not in listed]
            report["warning_case"] = {
                "faces_listed_in_source": listed,
                "all_listed_faces_present": all(
                    union.contains_face(_mask_of(f)) for f in listed),
                "additional_maximal_faces": extras,
            }
    return report


def _mask_of(verts):
    mask = 0
    for v in verts:
        mask |= 1 << v
    return mask
