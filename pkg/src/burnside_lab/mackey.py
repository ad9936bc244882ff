"""Abelian-group-valued Mackey functors in Dress form: value groups with
restriction / transfer / conjugation matrices, axiom verification, and
evaluation on span classes (which reconciles the Dress data with the
functor-on-spans definition; their agreement is the decisive test).

Data is stored for every subgroup, with conjugate subgroups sharing one
value presentation per class; serialization keys values by class and
writes complete per-subgroup-pair map records.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .groups import FiniteGroup, enumerate_subgroups, pinv, pmul
from .gsets import GSet, coset_gset
from .intlinalg import IMat, SNF, invariant_factors, solve_matrix
from .spans import _class_transversal


class AbGroupPres:
    """Finitely generated abelian group as cokernel of a relation matrix.

    Elements are integer coordinate tuples on the generators; equality is
    membership of the difference in the relation lattice, decided by Smith
    normal form.
    """

    def __init__(self, n_gens, relations=()):
        self.n_gens = n_gens
        self.relations = tuple(tuple(r) for r in relations)
        for r in self.relations:
            if len(r) != n_gens:
                raise InputError("relation length must match generator count")
        cols = [[r[i] for r in self.relations] for i in range(n_gens)]
        self._lattice = SNF(cols) if self.relations else None
        self.invariants = (invariant_factors([list(r) for r in self.relations])
                           if self.relations else [])

    @property
    def rank(self):
        return self.n_gens - len(self.invariants)

    @property
    def torsion(self):
        return [d for d in self.invariants if d > 1]

    @property
    def is_free_presentation(self):
        return not self.relations

    def zero(self):
        return (0,) * self.n_gens

    def contains_zero(self, vec):
        if all(v == 0 for v in vec):
            return True
        if self._lattice is None:
            return False
        return self._lattice.contains(list(vec))

    def equal(self, u, v):
        return self.contains_zero([a - b for a, b in zip(u, v)])

    def elements_equal_mod(self, mat_a, mat_b):
        """Matrix equality as maps into this group (columnwise mod lattice)."""
        if (mat_a.rows, mat_a.cols) != (mat_b.rows, mat_b.cols):
            return False
        for j in range(mat_a.cols):
            col = [mat_a.data[i][j] - mat_b.data[i][j] for i in range(mat_a.rows)]
            if not self.contains_zero(col):
                return False
        return True

    def accepts_hom(self, mat, source):
        """Does the matrix kill the source's relations mod this lattice?"""
        if mat.rows != self.n_gens or mat.cols != source.n_gens:
            return False
        for r in source.relations:
            if not self.contains_zero(mat.apply(r)):
                return False
        return True

    def to_json(self):
        return {"generators": self.n_gens,
                "relations": [list(r) for r in self.relations]}

    @staticmethod
    def from_json(data):
        try:
            return AbGroupPres(data["generators"], data.get("relations", ()))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad abelian group record: {exc}") from exc

    def __repr__(self):
        return f"AbGroupPres(rank={self.rank}, torsion={self.torsion})"


@dataclass
class AxiomEntry:
    name: str
    ok: bool
    counterexample: dict | None = None


class MackeyAxiomReport:
    def __init__(self, entries):
        self.entries = list(entries)

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.ok]

    def __repr__(self):
        bad = self.failures()
        if not bad:
            return f"MackeyAxiomReport(ok, {len(self.entries)} axioms)"
        return f"MackeyAxiomReport(FAIL: {[e.name for e in bad]})"


class MackeyFunctor:
    """Dress-form Mackey functor over a fixed finite group."""

    def __init__(self, group, values, res, tr, conj, name=None):
        self.group = group
        self.table = enumerate_subgroups(group)
        self.subgroups = tuple(self.table.all_subgroups())
        self.sub_index = {h.key(): i for i, h in enumerate(self.subgroups)}
        self.class_of_sub = tuple(self.table.class_of(h) for h in self.subgroups)
        self.values = tuple(values)
        self.res = dict(res)
        self.tr = dict(tr)
        self.conj = dict(conj)
        self.name = name or "M"
        self._atom_matrices = {}
        self._check_shapes()

    def _check_shapes(self):
        n = len(self.subgroups)
        if len(self.values) != n:
            raise InputError("one value group per subgroup required")
        for (k, h), mat in self.res.items():
            if mat.rows != self.values[h].n_gens or mat.cols != self.values[k].n_gens:
                raise InputError(f"restriction ({k},{h}) has the wrong shape")
        for (k, h), mat in self.tr.items():
            if mat.rows != self.values[k].n_gens or mat.cols != self.values[h].n_gens:
                raise InputError(f"transfer ({k},{h}) has the wrong shape")
        for h in range(n):
            for k in range(n):
                nested = self.subgroups[h].elements <= self.subgroups[k].elements
                if nested != ((k, h) in self.res) or nested != ((k, h) in self.tr):
                    raise InputError("res/tr must exist exactly for nested pairs")
        for g in self.group.elements:
            for h in range(n):
                if (g, h) not in self.conj:
                    raise InputError("conjugation matrices must cover G x subgroups")
                target = self._conjugate_index(g, h)
                mat = self.conj[(g, h)]
                if mat.rows != self.values[target].n_gens or \
                        mat.cols != self.values[h].n_gens:
                    raise InputError("conjugation matrix has the wrong shape")

    def _conjugate_index(self, g, h_idx):
        conj_sub = self.subgroups[h_idx].conjugate(g)
        return self.sub_index[conj_sub.key()]

    def subgroup_index(self, sub):
        try:
            return self.sub_index[sub.key()]
        except KeyError:
            raise InputError("not a subgroup of this functor's group") from None

    def value(self, h_idx):
        return self.values[h_idx]

    def res_mat(self, k_idx, h_idx):
        return self.res[(k_idx, h_idx)]

    def tr_mat(self, k_idx, h_idx):
        return self.tr[(k_idx, h_idx)]

    def conj_mat(self, g, h_idx):
        return self.conj[(tuple(g), h_idx)]

    # --- evaluation on G-sets and span classes -----------------------------

    def gset_blocks(self, x_set):
        """Ordered orbit blocks of M(X) = sum over orbits of M(Stab(base))."""
        dec = x_set.decompose()
        blocks = []
        offset = 0
        for orbit in dec.orbits:
            h_idx = self.subgroup_index(x_set.stabilizer(orbit.base))
            ngens = self.values[h_idx].n_gens
            blocks.append((orbit, h_idx, offset, ngens))
            offset += ngens
        return blocks, offset

    def evaluate_on_span(self, span_cls):
        """The matrix M(X) -> M(Y) of a span class, additive over apex
        orbits, each contributing transfer o conjugation o restriction."""
        key = (span_cls.source.key(), span_cls.target.key(), span_cls.atoms)
        if key in self._atom_matrices:
            return self._atom_matrices[key]
        src_blocks, src_dim = self.gset_blocks(span_cls.source)
        tgt_blocks, tgt_dim = self.gset_blocks(span_cls.target)
        total = [[0] * src_dim for _ in range(tgt_dim)]
        for atom in span_cls.atoms:
            piece = self._atom_matrix(span_cls.source, span_cls.target,
                                      src_blocks, tgt_blocks, atom)
            for i, row in enumerate(piece):
                trow = total[i]
                for j, val in enumerate(row):
                    trow[j] += val
        out = IMat(tgt_dim, src_dim, total)
        self._atom_matrices[key] = out
        return out

    def _atom_matrix(self, x_set, y_set, src_blocks, tgt_blocks, atom):
        group = self.group
        cls, u_tab, v_tab = atom
        base, _ = _class_transversal(group, cls)
        s_sub = self.table[cls].representative
        s_idx = self.subgroup_index(s_sub)
        x_pt, y_pt = u_tab[base], v_tab[base]
        src = next(b for b in src_blocks if x_pt in b[0].points)
        tgt = next(b for b in tgt_blocks if y_pt in b[0].points)
        (src_orbit, h_idx, src_off, _) = src
        (tgt_orbit, k_idx, tgt_off, _) = tgt
        a = x_set.transporter(src_orbit.base, x_pt)
        b = y_set.transporter(tgt_orbit.base, y_pt)
        h_conj = self._conjugate_index(a, h_idx)
        k_conj = self._conjugate_index(b, k_idx)
        into_s = self.res[(h_conj, s_idx)] @ self.conj[(a, h_idx)]
        out_of_s = self.conj[(pinv(b), k_conj)] @ self.tr[(k_conj, s_idx)]
        block = out_of_s @ into_s
        src_dim = sum(bb[3] for bb in src_blocks)
        tgt_dim = sum(bb[3] for bb in tgt_blocks)
        data = [[0] * src_dim for _ in range(tgt_dim)]
        for i in range(block.rows):
            for j in range(block.cols):
                data[tgt_off + i][src_off + j] = block.data[i][j]
        return data

    # --- constructions ------------------------------------------------------

    def direct_sum(self, other):
        if other.group is not self.group:
            raise InputError("direct sum needs functors over one group")
        values = [AbGroupPres(a.n_gens + b.n_gens,
                              [r + (0,) * b.n_gens for r in a.relations]
                              + [(0,) * a.n_gens + r for r in b.relations])
                  for a, b in zip(self.values, other.values)]
        res = {k: _block_diag(self.res[k], other.res[k]) for k in self.res}
        tr = {k: _block_diag(self.tr[k], other.tr[k]) for k in self.tr}
        conj = {k: _block_diag(self.conj[k], other.conj[k]) for k in self.conj}
        return MackeyFunctor(self.group, values, res, tr, conj,
                             name=f"{self.name}+{other.name}")

    def dual(self):
        """Values dualized: res and tr swap (transposed), conjugations
        become inverse-transposed.  Torsion-free presentations only."""
        for v in self.values:
            if not v.is_free_presentation:
                raise InputError(
                    "dual Mackey functor needs free (relation-free) values")
        res = {}
        tr = {}
        for (k, h), mat in self.tr.items():
            res[(k, h)] = mat.transpose()
        for (k, h), mat in self.res.items():
            tr[(k, h)] = mat.transpose()
        conj = {}
        for g in self.group.elements:
            for h in range(len(self.subgroups)):
                target = self._conjugate_index(g, h)
                conj[(g, h)] = self.conj[(pinv(g), target)].transpose()
        return MackeyFunctor(self.group, self.values, res, tr, conj,
                             name=f"{self.name}^v")

    # --- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "group": self.group.to_json(),
            "name": self.name,
            "subgroups": [[list(e) for e in h.sorted_elements]
                          for h in self.subgroups],
            "values": {str(c): self.values[self._first_of_class(c)].to_json()
                       for c in range(len(self.table))},
            "restrictions": [{"K": k, "H": h, "matrix": m.tolists()}
                             for (k, h), m in sorted(self.res.items())],
            "transfers": [{"K": k, "H": h, "matrix": m.tolists()}
                          for (k, h), m in sorted(self.tr.items())],
            "conjugations": [{"g": list(g), "H": h, "matrix": m.tolists()}
                             for (g, h), m in sorted(self.conj.items())],
        }

    def _first_of_class(self, c):
        return next(i for i, ci in enumerate(self.class_of_sub) if ci == c)

    @staticmethod
    def from_json(data, group=None):
        if "builtin" in data:
            if group is None:
                group = FiniteGroup.from_json(data["group"])
            return builtin_functor(group, data["builtin"])
        try:
            if group is None:
                group = FiniteGroup.from_json(data["group"])
            table = enumerate_subgroups(group)
            provided = [group.subgroup([tuple(e) for e in els])
                        for els in data["subgroups"]]
            canonical = table.all_subgroups()
            canon_index = {h.key(): i for i, h in enumerate(canonical)}
            if sorted(h.key() for h in provided) != \
                    sorted(h.key() for h in canonical):
                raise InputError("subgroup list must cover all subgroups")
            translate = [canon_index[h.key()] for h in provided]
            class_values = {int(c): AbGroupPres.from_json(v)
                            for c, v in data["values"].items()}
            values = [None] * len(canonical)
            for i, h in enumerate(provided):
                values[translate[i]] = class_values[table.class_of(h)]
            res = {}
            for rec in data["restrictions"]:
                mat = rec["matrix"]
                k, h = translate[rec["K"]], translate[rec["H"]]
                res[(k, h)] = IMat(values[h].n_gens, values[k].n_gens, mat)
            tr = {}
            for rec in data["transfers"]:
                k, h = translate[rec["K"]], translate[rec["H"]]
                tr[(k, h)] = IMat(values[k].n_gens, values[h].n_gens,
                                  rec["matrix"])
            conj = {}
            for rec in data["conjugations"]:
                g = tuple(rec["g"])
                h = translate[rec["H"]]
                target = canon_index[canonical[h].conjugate(g).key()]
                conj[(g, h)] = IMat(values[target].n_gens, values[h].n_gens,
                                    rec["matrix"])
            return MackeyFunctor(group, values, res, tr, conj,
                                 name=data.get("name"))
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"bad Mackey functor record: {exc}") from exc


def _block_diag(a, b):
    data = [[0] * (a.cols + b.cols) for _ in range(a.rows + b.rows)]
    for i in range(a.rows):
        data[i][:a.cols] = list(a.data[i])
    for i in range(b.rows):
        data[a.rows + i][a.cols:] = list(b.data[i])
    return IMat(a.rows + b.rows, a.cols + b.cols, data)


# --- axiom verification ----------------------------------------------------


def _double_cosets_in(sub_l, sub_k, sub_h):
    """Representatives of K\\L/H inside the subgroup L."""
    seen = set()
    reps = []
    for g in sub_l.sorted_elements:
        if g in seen:
            continue
        reps.append(g)
        for k in sub_k.elements:
            kg = pmul(k, g)
            for h in sub_h.elements:
                seen.add(pmul(kg, h))
    return reps


def check_mackey_axioms(m_fun):
    """Exhaustive verification of the Dress axioms; each failure carries a
    replayable counterexample."""
    group = m_fun.group
    subs = m_fun.subgroups
    n = len(subs)
    entries = []

    def check(name, instances):
        for inst in instances:
            ok, detail = inst()
            if not ok:
                entries.append(AxiomEntry(name, False, detail))
                return
        entries.append(AxiomEntry(name, True))

    def hom_instances():
        for (k, h), mat in sorted(m_fun.res.items()):
            yield lambda k=k, h=h, mat=mat: (
                m_fun.values[h].accepts_hom(mat, m_fun.values[k]),
                {"map": "res", "K": k, "H": h})
        for (k, h), mat in sorted(m_fun.tr.items()):
            yield lambda k=k, h=h, mat=mat: (
                m_fun.values[k].accepts_hom(mat, m_fun.values[h]),
                {"map": "tr", "K": k, "H": h})
        for (g, h), mat in sorted(m_fun.conj.items()):
            yield lambda g=g, h=h, mat=mat: (
                m_fun.values[m_fun._conjugate_index(g, h)].accepts_hom(
                    mat, m_fun.values[h]),
                {"map": "conj", "g": list(g), "H": h})

    check("maps are well-defined homomorphisms", hom_instances())

    def identity_instances():
        for h in range(n):
            eye = IMat.eye(m_fun.values[h].n_gens)
            yield lambda h=h, eye=eye: (
                m_fun.values[h].elements_equal_mod(m_fun.res[(h, h)], eye)
                and m_fun.values[h].elements_equal_mod(m_fun.tr[(h, h)], eye),
                {"H": h})

    check("res and tr are the identity on equal subgroups",
          identity_instances())

    def unit_conj_instances():
        for h in range(n):
            for g in sorted(subs[h].elements):
                eye = IMat.eye(m_fun.values[h].n_gens)
                yield lambda h=h, g=g, eye=eye: (
                    m_fun.values[h].elements_equal_mod(m_fun.conj[(g, h)], eye),
                    {"H": h, "g": list(g)})

    check("inner conjugations act trivially", unit_conj_instances())

    def conj_functorial_instances():
        for h in range(n):
            for g2 in group.elements:
                mid = m_fun._conjugate_index(g2, h)
                for g1 in group.elements:
                    tgt = m_fun._conjugate_index(pmul(g1, g2), h)
                    yield lambda h=h, g1=g1, g2=g2, mid=mid, tgt=tgt: (
                        m_fun.values[tgt].elements_equal_mod(
                            m_fun.conj[(g1, mid)] @ m_fun.conj[(g2, h)],
                            m_fun.conj[(pmul(g1, g2), h)]),
                        {"H": h, "g1": list(g1), "g2": list(g2)})

    check("conjugation is functorial", conj_functorial_instances())

    nested = [(k, h) for k in range(n) for h in range(n)
              if subs[h].elements <= subs[k].elements]

    def res_transitive_instances():
        for (l, k) in nested:
            for (k2, h) in nested:
                if k2 != k:
                    continue
                yield lambda l=l, k=k, h=h: (
                    m_fun.values[h].elements_equal_mod(
                        m_fun.res[(k, h)] @ m_fun.res[(l, k)],
                        m_fun.res[(l, h)]),
                    {"L": l, "K": k, "H": h})

    check("restriction is transitive", res_transitive_instances())

    def tr_transitive_instances():
        for (l, k) in nested:
            for (k2, h) in nested:
                if k2 != k:
                    continue
                yield lambda l=l, k=k, h=h: (
                    m_fun.values[l].elements_equal_mod(
                        m_fun.tr[(l, k)] @ m_fun.tr[(k, h)],
                        m_fun.tr[(l, h)]),
                    {"L": l, "K": k, "H": h})

    check("transfer is transitive", tr_transitive_instances())

    def conj_compat_instances():
        for (k, h) in nested:
            for g in group.elements:
                gk = m_fun._conjugate_index(g, k)
                gh = m_fun._conjugate_index(g, h)
                yield lambda k=k, h=h, g=g, gk=gk, gh=gh: (
                    m_fun.values[gh].elements_equal_mod(
                        m_fun.conj[(g, h)] @ m_fun.res[(k, h)],
                        m_fun.res[(gk, gh)] @ m_fun.conj[(g, k)])
                    and m_fun.values[gk].elements_equal_mod(
                        m_fun.conj[(g, k)] @ m_fun.tr[(k, h)],
                        m_fun.tr[(gk, gh)] @ m_fun.conj[(g, h)]),
                    {"K": k, "H": h, "g": list(g)})

    check("conjugation commutes with res and tr", conj_compat_instances())

    def double_coset_instances():
        for l in range(n):
            inside = [i for i in range(n)
                      if subs[i].elements <= subs[l].elements]
            for k in inside:
                for h in inside:
                    yield lambda l=l, k=k, h=h: _double_coset_check(
                        m_fun, l, k, h)

    check("double coset formula", double_coset_instances())

    return MackeyAxiomReport(entries)


def _double_coset_check(m_fun, l, k, h):
    subs = m_fun.subgroups
    lhs = m_fun.res[(l, k)] @ m_fun.tr[(l, h)]
    total = IMat.zero(m_fun.values[k].n_gens, m_fun.values[h].n_gens)
    for g in _double_cosets_in(subs[l], subs[k], subs[h]):
        meet_lo = m_fun.group.subgroup(
            subs[h].elements & subs[k].conjugate(pinv(g)).elements)
        lo = m_fun.subgroup_index(meet_lo)
        hi = m_fun._conjugate_index(g, lo)
        term = m_fun.tr[(k, hi)] @ m_fun.conj[(g, lo)] @ m_fun.res[(h, lo)]
        total = total + term
    ok = m_fun.values[k].elements_equal_mod(lhs, total)
    return ok, None if ok else {"L": l, "K": k, "H": h,
                                "lhs": lhs.tolists(),
                                "rhs": total.tolists()}


# --- built-in functors -----------------------------------------------------


@lru_cache(maxsize=None)
def _subgroup_burnside_data(sub):
    """Subgroup class table of a subgroup viewed as its own group."""
    return enumerate_subgroups(sub.as_group())


def burnside_mackey(group):
    """M(G/H) = A(H): res = restriction of K-sets, tr = induction,
    conjugation = transport of structure."""
    table = enumerate_subgroups(group)
    subs = table.all_subgroups()
    sub_tables = [_subgroup_burnside_data(h) for h in subs]
    values = {}
    for c in range(len(table)):
        rep_i = next(i for i, h in enumerate(subs)
                     if table.class_of(h) == c)
        values[c] = AbGroupPres(len(sub_tables[rep_i]))
    value_list = [values[table.class_of(h)] for h in subs]
    index = {h.key(): i for i, h in enumerate(subs)}

    res = {}
    tr = {}
    for k_i, k_sub in enumerate(subs):
        k_table = sub_tables[k_i]
        k_group = k_sub.as_group()
        for h_i, h_sub in enumerate(subs):
            if not h_sub.elements <= k_sub.elements:
                continue
            h_table = sub_tables[h_i]
            h_group = h_sub.as_group()
            # res: decompose each [K/L] as an H-set
            cols = []
            for l_cls in k_table:
                kl = coset_gset(k_group, l_cls.representative)
                action = [kl.act_perm(g) for g in h_group.generators]
                restricted = GSet(h_group, kl.n_points, action)
                vec = [0] * len(h_table)
                for c in restricted.canonical_form():
                    vec[c] += 1
                cols.append(vec)
            res[(k_i, h_i)] = IMat(len(h_table), len(k_table),
                                   [[cols[j][i] for j in range(len(k_table))]
                                    for i in range(len(h_table))])
            # tr: [H/L] -> [K/L]
            cols = []
            for l_cls in h_table:
                l_in_k = k_group.subgroup(l_cls.representative.elements)
                vec = [0] * len(k_table)
                vec[k_table.class_of(l_in_k)] = 1
                cols.append(vec)
            tr[(k_i, h_i)] = IMat(len(k_table), len(h_table),
                                  [[cols[j][i] for j in range(len(h_table))]
                                   for i in range(len(k_table))])

    conj = {}
    for h_i, h_sub in enumerate(subs):
        h_table = sub_tables[h_i]
        for g in group.elements:
            target_sub = h_sub.conjugate(g)
            t_i = index[target_sub.key()]
            t_table = sub_tables[t_i]
            t_group = target_sub.as_group()
            cols = []
            for l_cls in h_table:
                conj_l = t_group.subgroup(
                    l_cls.representative.conjugate(g).elements)
                vec = [0] * len(t_table)
                vec[t_table.class_of(conj_l)] = 1
                cols.append(vec)
            conj[(g, h_i)] = IMat(len(t_table), len(h_table),
                                  [[cols[j][i] for j in range(len(h_table))]
                                   for i in range(len(t_table))])
    return MackeyFunctor(group, value_list, res, tr, conj, name="burnside")


def constant_z_mackey(group):
    """M(G/H) = Z, res = 1, tr = index multiplication, conj = 1."""
    table = enumerate_subgroups(group)
    subs = table.all_subgroups()
    z = AbGroupPres(1)
    values = [z] * len(subs)
    res = {}
    tr = {}
    for k_i, k_sub in enumerate(subs):
        for h_i, h_sub in enumerate(subs):
            if h_sub.elements <= k_sub.elements:
                res[(k_i, h_i)] = IMat(1, 1, [[1]])
                tr[(k_i, h_i)] = IMat(1, 1, [[k_sub.order // h_sub.order]])
    conj = {(g, h_i): IMat(1, 1, [[1]])
            for g in group.elements for h_i in range(len(subs))}
    return MackeyFunctor(group, values, res, tr, conj, name="constant_z")


def zero_mackey(group):
    table = enumerate_subgroups(group)
    subs = table.all_subgroups()
    z = AbGroupPres(0)
    values = [z] * len(subs)
    res = {}
    tr = {}
    for k_i, k_sub in enumerate(subs):
        for h_i, h_sub in enumerate(subs):
            if h_sub.elements <= k_sub.elements:
                res[(k_i, h_i)] = IMat(0, 0, [])
                tr[(k_i, h_i)] = IMat(0, 0, [])
    conj = {(g, h_i): IMat(0, 0, [])
            for g in group.elements for h_i in range(len(subs))}
    return MackeyFunctor(group, values, res, tr, conj, name="zero")


def builtin_functor(group, name):
    builders = {"zero": zero_mackey, "constant_z": constant_z_mackey,
                "burnside": burnside_mackey}
    if name not in builders:
        raise InputError(f"unknown builtin Mackey functor {name!r}")
    return builders[name](group)


# --- morphisms, kernels, assembly ------------------------------------------


def is_mackey_morphism(maps, m_fun, n_fun):
    """maps: per-subgroup-index matrices M(H) -> N(H); must commute with
    res, tr and conj and be well-defined homs."""
    for h, mat in maps.items():
        if not n_fun.values[h].accepts_hom(mat, m_fun.values[h]):
            return False
    for (k, h) in m_fun.res:
        if not n_fun.values[h].elements_equal_mod(
                maps[h] @ m_fun.res[(k, h)], n_fun.res[(k, h)] @ maps[k]):
            return False
        if not n_fun.values[k].elements_equal_mod(
                maps[k] @ m_fun.tr[(k, h)], n_fun.tr[(k, h)] @ maps[h]):
            return False
    for (g, h), cm in m_fun.conj.items():
        t = m_fun._conjugate_index(g, h)
        if not n_fun.values[t].elements_equal_mod(
                maps[t] @ cm, n_fun.conj[(g, h)] @ maps[h]):
            return False
    return True


def _kernel_basis_imat(mat):
    if mat.cols == 0:
        return IMat(0, 0, [])
    if mat.rows == 0:
        return IMat.eye(mat.cols)
    ker = SNF(mat.tolists()).kernel_basis()
    k_rank = len(ker[0]) if ker else 0
    return IMat(mat.cols, k_rank, ker)


def kernel_mackey(maps, m_fun, n_fun):
    """Kernel of a morphism of Mackey functors with free values, again a
    Mackey functor (with the induced maps in kernel coordinates)."""
    for v in m_fun.values:
        if not v.is_free_presentation:
            raise InputError("kernel construction needs free values")
    if not is_mackey_morphism(maps, m_fun, n_fun):
        raise InputError("not a morphism of Mackey functors")
    bases = {h: _kernel_basis_imat(maps[h])
             for h in range(len(m_fun.subgroups))}
    values = [AbGroupPres(bases[h].cols)
              for h in range(len(m_fun.subgroups))]

    def induce(mat, src_idx, tgt_idx):
        rhs = mat @ bases[src_idx]
        sol = solve_matrix(bases[tgt_idx].tolists(), rhs.tolists())
        assert sol is not None, "induced map left the kernel lattice"
        return IMat(bases[tgt_idx].cols, bases[src_idx].cols, sol)

    res = {(k, h): induce(m_fun.res[(k, h)], k, h) for (k, h) in m_fun.res}
    tr = {(k, h): induce(m_fun.tr[(k, h)], h, k) for (k, h) in m_fun.tr}
    conj = {(g, h): induce(m_fun.conj[(g, h)], h,
                           m_fun._conjugate_index(g, h))
            for (g, h) in m_fun.conj}
    return MackeyFunctor(m_fun.group, values, res, tr, conj,
                         name=f"ker({m_fun.name})")


def objectwise_limit_check(m_fun, n_fun, gsets, span_classes):
    """Direct sums of Mackey functors are computed objectwise: value
    dimensions add up on every G-set and evaluation on spans is blockwise.
    Returns a report dict; kernels are covered by kernel_mackey."""
    total = m_fun.direct_sum(n_fun)
    report = {"values_objectwise": True, "evaluation_blockwise": True,
              "axioms_inherited": check_mackey_axioms(total).ok}
    for x_set in gsets:
        _, dim_m = m_fun.gset_blocks(x_set)
        _, dim_n = n_fun.gset_blocks(x_set)
        _, dim_t = total.gset_blocks(x_set)
        if dim_t != dim_m + dim_n:
            report["values_objectwise"] = False
    for cls in span_classes:
        mat_m = m_fun.evaluate_on_span(cls)
        mat_n = n_fun.evaluate_on_span(cls)
        mat_t = total.evaluate_on_span(cls)
        if mat_t != _interleave_blocks(m_fun, n_fun, cls, mat_m, mat_n):
            report["evaluation_blockwise"] = False
    report["ok"] = all(report.values())
    return report


def _interleave_blocks(m_fun, n_fun, cls, mat_m, mat_n):
    """Assemble the direct-sum evaluation matrix from the two summands,
    respecting the per-orbit interleaving of generators."""
    def layout(fun, x_set):
        blocks, dim = fun.gset_blocks(x_set)
        return blocks, dim

    src_m, sdim_m = layout(m_fun, cls.source)
    src_n, _ = layout(n_fun, cls.source)
    tgt_m, tdim_m = layout(m_fun, cls.target)
    tgt_n, _ = layout(n_fun, cls.target)

    def positions(blocks_m, blocks_n):
        # direct-sum values concatenate M-generators then N-generators
        # within each orbit block
        pos_m, pos_n = [], []
        cursor = 0
        for (bm, bn) in zip(blocks_m, blocks_n):
            pos_m.extend(range(cursor, cursor + bm[3]))
            cursor += bm[3]
            pos_n.extend(range(cursor, cursor + bn[3]))
            cursor += bn[3]
        return pos_m, pos_n, cursor

    src_pos_m, src_pos_n, src_dim = positions(src_m, src_n)
    tgt_pos_m, tgt_pos_n, tgt_dim = positions(tgt_m, tgt_n)
    data = [[0] * src_dim for _ in range(tgt_dim)]
    for i, ti in enumerate(tgt_pos_m):
        for j, sj in enumerate(src_pos_m):
            data[ti][sj] = mat_m.data[i][j]
    for i, ti in enumerate(tgt_pos_n):
        for j, sj in enumerate(src_pos_n):
            data[ti][sj] = mat_n.data[i][j]
    return IMat(tgt_dim, src_dim, data)


def assembly_action(module, vec, m_fun, element):
    """The pairing A(X, Y) (x) M(X) -> M(Y) on an integer vector over the
    module basis and an element of M(X)."""
    _, src_dim = m_fun.gset_blocks(module.source)
    if len(element) != src_dim:
        raise InputError("element has the wrong length for M(X)")
    _, tgt_dim = m_fun.gset_blocks(module.target)
    out = [0] * tgt_dim
    for i, c in enumerate(vec):
        if not c:
            continue
        mat = m_fun.evaluate_on_span(module.class_of_basis(i))
        img = mat.apply(element)
        out = [o + c * x for o, x in zip(out, img)]
    return tuple(out)
