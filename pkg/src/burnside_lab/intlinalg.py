"""Exact integer matrix arithmetic: Smith normal form with transforms,
lattice membership, integer solves, kernel bases, Bareiss determinant.

Matrices are lists of row lists of Python ints; everything is exact.
"""
from __future__ import annotations

from .errors import InputError


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def copy(mat):
    return [row[:] for row in mat]


def shape(mat):
    return (len(mat), len(mat[0]) if mat else 0)


def transpose(mat):
    m, n = shape(mat)
    return [[mat[i][j] for i in range(m)] for j in range(n)]


def matmul(a, b):
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2:
        raise InputError(f"matmul shape mismatch: {shape(a)} x {shape(b)}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    m, n = shape(a)
    if len(v) != n:
        raise InputError("matvec shape mismatch")
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_eq(a, b):
    return shape(a) == shape(b) and all(ra == rb for ra, rb in zip(a, b))


def block_diag(a, b):
    m1, n1 = shape(a)
    m2, n2 = shape(b)
    out = zeros(m1 + m2, n1 + n2)
    for i in range(m1):
        out[i][:n1] = a[i][:]
    for i in range(m2):
        out[m1 + i][n1:] = b[i][:]
    return out


def smith_normal_form(mat):
    """U A V = D with U, V unimodular and D in Smith form.

    Returns (d, u, v) where d is the full diagonal-form matrix.  Pivots are
    chosen by minimal absolute value for stability of intermediate sizes.
    """
    a = copy(mat)
    m, n = shape(a)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            progressed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        progressed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        progressed = True
            if not progressed:
                break
        # divisibility: fold any nondivisible entry into the pivot block
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, t, 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
        if t == min(m, n):
            break
    return a, u, v


def invariant_factors(mat):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    d, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(shape(d))):
        if d[i][i]:
            out.append(abs(d[i][i]))
    return out


def rank(mat):
    return len(invariant_factors(mat))


class SNF:
    """Cached Smith data for one matrix, with solve helpers."""

    def __init__(self, mat):
        self.mat = copy(mat)
        self.m, self.n = shape(mat)
        self.d, self.u, self.v = smith_normal_form(mat)
        self.rank = sum(1 for i in range(min(self.m, self.n))
                        if self.d[i][i])

    def solve(self, b):
        """Some integer x with A x = b, or None."""
        if len(b) != self.m:
            raise InputError("solve: length mismatch")
        c = matvec(self.u, b)
        y = [0] * self.n
        for i in range(self.m):
            di = self.d[i][i] if i < min(self.m, self.n) else 0
            if i < self.n and di:
                if c[i] % di:
                    return None
                y[i] = c[i] // di
            elif c[i]:
                return None
        return matvec(self.v, y)

    def contains(self, b):
        """Is b in the column lattice of A?"""
        return self.solve(b) is not None

    def kernel_basis(self):
        """Columns spanning {x : A x = 0} (a full lattice basis of the kernel)."""
        cols = []
        for j in range(self.n):
            if j >= min(self.m, self.n) or not self.d[j][j]:
                cols.append([self.v[i][j] for i in range(self.n)])
        return transpose(cols) if cols else [[] for _ in range(self.n)]


def kernel_basis(mat):
    return SNF(mat).kernel_basis()


def det(mat):
    """Bareiss fraction-free determinant."""
    m, n = shape(mat)
    if m != n:
        raise InputError("determinant of a non-square matrix")
    if m == 0:
        return 1
    a = copy(mat)
    sign = 1
    prev = 1
    for k in range(m - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, m) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[m - 1][m - 1]


def solve_matrix(a, b):
    """Integer X with A X = B (columnwise), or None."""
    snf = SNF(a)
    cols = []
    for j in range(shape(b)[1]):
        x = snf.solve([row[j] for row in b])
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return [[] for _ in range(shape(a)[1])]
    return transpose(cols)


class IMat:
    """Immutable integer matrix with explicit shape.

    Bare list-of-rows matrices lose their column count when the row count is
    zero; rank-0 abelian groups make that case routine, hence this wrapper.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise InputError("matrix data does not match shape")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", tuple(tuple(r) for r in data))

    def __setattr__(self, *args):
        raise AttributeError("IMat is immutable")

    @staticmethod
    def zero(rows, cols):
        return IMat(rows, cols, [[0] * cols for _ in range(rows)])

    @staticmethod
    def eye(n):
        return IMat(n, n, identity(n))

    def __eq__(self, other):
        return (isinstance(other, IMat) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IMat({self.rows}x{self.cols}, {list(map(list, self.data))})"

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix addition shape mismatch")
        return IMat(self.rows, self.cols,
                    [[x + y for x, y in zip(r, s)]
                     for r, s in zip(self.data, other.data)])

    def scale(self, c):
        return IMat(self.rows, self.cols,
                    [[c * x for x in r] for r in self.data])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise InputError(
                f"matmul shape mismatch: {self.rows}x{self.cols} @ "
                f"{other.rows}x{other.cols}")
        ot = list(zip(*other.data)) if other.data else [()] * other.cols
        data = [[sum(x * y for x, y in zip(row, col)) for col in ot]
                for row in self.data]
        return IMat(self.rows, other.cols, data)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise InputError("apply: vector length mismatch")
        return tuple(sum(x * y for x, y in zip(row, vec))
                     for row in self.data)

    def transpose(self):
        data = [[self.data[i][j] for i in range(self.rows)]
                for j in range(self.cols)]
        return IMat(self.cols, self.rows, data)

    def tolists(self):
        return [list(r) for r in self.data]

    def is_zero(self):
        return all(all(x == 0 for x in r) for r in self.data)
