"""Exact integer linear algebra over Z and Z/m.

Everything here works on arbitrary-precision Python integers.  Questions over
Z/m are answered by lifting to Z and appending ``m * I`` columns, so a single
Smith normal form routine serves both rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import YonedaError


@dataclass(frozen=True)
class RingSpec:
    """The coefficient ring: ``modulus == 0`` is Z, ``modulus >= 2`` is Z/m."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise YonedaError(f"modulus must be 0 or >= 2, got {self.modulus}")

    def reduce(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"


ZZ = RingSpec(0)


class Matrix:
    """Immutable integer matrix with explicit shape (empty shapes allowed)."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise YonedaError(f"ragged or mis-shaped matrix data for {rows}x{cols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, data, rows: int, cols: int) -> "Matrix":
        """Unchecked constructor for rows that are already sequences of ints."""
        M = object.__new__(cls)
        object.__setattr__(M, "rows", rows)
        object.__setattr__(M, "cols", cols)
        object.__setattr__(M, "data", tuple(map(tuple, data)))
        object.__setattr__(M, "_hash", None)
        return M

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._raw([(0,) * cols] * rows, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "Matrix":
        cols = len(columns)
        if any(len(c) != rows for c in columns):
            raise YonedaError(f"columns must all have length {rows}")
        if cols == 0:
            return cls._raw([()] * rows, rows, 0)
        return cls._raw(zip(*columns), rows, cols) if rows else cls._raw((), 0, cols)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence[int]) -> "Matrix":
        if len(entries) != rows * cols:
            raise YonedaError("entry count does not match shape")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)], rows, cols)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "Matrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls(out, rows, cols)

    # -- accessors ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> list[int]:
        return [x for r in self.data for x in r]

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple([r[j] for r in self.data])

    def columns(self) -> list[tuple[int, ...]]:
        if not self.rows:
            return [()] * self.cols
        return list(zip(*self.data))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.data))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.data]}, {self.rows}, {self.cols})"

    # -- arithmetic ---------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise YonedaError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return Matrix._raw(
            [[sum(a * b for a, b in zip(r, c) if a and b) for c in ocols] for r in self.data],
            self.rows, other.cols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise YonedaError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                           self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise YonedaError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw([[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                           self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw([[-a for a in r] for r in self.data], self.rows, self.cols)

    def scale(self, c: int) -> "Matrix":
        return Matrix._raw([[c * a for a in r] for r in self.data], self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.columns(), self.cols, self.rows)

    def reduce(self, modulus: int) -> "Matrix":
        if not modulus:
            return self
        return Matrix._raw([[a % modulus for a in r] for r in self.data], self.rows, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw([[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)


def hstack(*mats: Matrix) -> Matrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise YonedaError("hstack needs equal row counts")
    return Matrix._raw([sum((m.data[i] for m in mats), ()) for i in range(rows)], rows,
                       sum(m.cols for m in mats))


def vstack(*mats: Matrix) -> Matrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise YonedaError("vstack needs equal column counts")
    return Matrix._raw([r for m in mats for r in m.data], sum(m.rows for m in mats), cols)


def block_diag(*mats: Matrix) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.data):
            out[r0 + i][c0:c0 + m.cols] = row
        r0 += m.rows
        c0 += m.cols
    return Matrix._raw(out, rows, cols)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [[0] * cols for _ in range(rows)]
    for i, arow in enumerate(a.data):
        for j, x in enumerate(arow):
            if not x:
                continue
            for k, brow in enumerate(b.data):
                r = out[i * b.rows + k]
                for l, y in enumerate(brow):
                    r[j * b.cols + l] = x * y
    return Matrix._raw(out, rows, cols)


def det(M: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = M.rows
    if n != M.cols:
        raise YonedaError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in M.data]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Smith:
    U: Matrix | None
    Uinv: Matrix | None
    D: Matrix
    V: Matrix | None
    diag: tuple[int, ...]
    rank: int


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(M: Matrix, track_u=True, track_uinv=False, track_v=True) -> _Smith:
    r, c = M.rows, M.cols
    a = [list(row) for row in M.data]
    U = _eye(r) if track_u else None
    Ui = _eye(r) if track_uinv else None
    V = _eye(c) if track_v else None

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def row_addmul(i, t, q):
        # row_i += q * row_t
        ai, at = a[i], a[t]
        for k in range(c):
            if at[k]:
                ai[k] += q * at[k]
        if U is not None:
            ui, ut = U[i], U[t]
            for k in range(r):
                if ut[k]:
                    ui[k] += q * ut[k]
        if Ui is not None:
            for row in Ui:
                if row[i]:
                    row[t] -= q * row[i]

    def col_addmul(j, t, q):
        # col_j += q * col_t
        for row in a:
            if row[t]:
                row[j] += q * row[t]
        if V is not None:
            for row in V:
                if row[t]:
                    row[j] += q * row[t]

    t = 0
    n = min(r, c)
    while t < n:
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        p = a[t][t]
        dirty = False
        for i in range(t + 1, r):
            if a[i][t]:
                row_addmul(i, t, -(a[i][t] // p))
                dirty = dirty or a[i][t] != 0
        for j in range(t + 1, c):
            if a[t][j]:
                col_addmul(j, t, -(a[t][j] // p))
                dirty = dirty or a[t][j] != 0
        if dirty:
            continue
        bad = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_addmul(t, bad, 1)
            continue
        if p < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
            if Ui is not None:
                for row in Ui:
                    row[t] = -row[t]
        t += 1
    diag = tuple(a[i][i] for i in range(t))
    return _Smith(
        Matrix._raw(U, r, r) if U is not None else None,
        Matrix._raw(Ui, r, r) if Ui is not None else None,
        Matrix._raw(a, r, c),
        Matrix._raw(V, c, c) if V is not None else None,
        diag, t)


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` and U, V unimodular.

    D is diagonal with nonnegative entries, each dividing the next.  Pivots are
    chosen as the nonzero entry of least absolute value, ties going to the
    lexicographically first (row, col) position.
    """
    s = _smith(M)
    return s.U, s.D, s.V


@lru_cache(maxsize=4096)
def _smith_cached(M: Matrix) -> _Smith:
    return _smith(M)


@lru_cache(maxsize=4096)
def _smith_both(M: Matrix) -> _Smith:
    return _smith(M, track_u=True, track_uinv=True, track_v=False)


def invariant_factors(M: Matrix) -> tuple[int, ...]:
    return _smith(M, track_u=False, track_v=False).diag


def lift_to_integers(A: Matrix, modulus: int) -> Matrix:
    """Append ``modulus * I`` columns so that Z/m questions become Z questions."""
    if not modulus:
        return A
    return hstack(A.reduce(modulus), Matrix.identity(A.rows).scale(modulus))


def _solve_integer(A: Matrix, b: Sequence[int]) -> list[int] | None:
    s = _smith_cached(A)
    ub = [sum(u * x for u, x in zip(row, b) if u and x) for row in s.U.data]
    y = [0] * A.cols
    for i, d in enumerate(s.diag):
        if ub[i] % d:
            return None
        y[i] = ub[i] // d
    if any(ub[i] for i in range(s.rank, A.rows)):
        return None
    return [sum(v * x for v, x in zip(row, y) if v and x) for row in s.V.data]


def solve_modular(A: Matrix, b: Matrix, ring: RingSpec = ZZ) -> Matrix | None:
    """Find a column x with ``A @ x == b`` over the ring, or None.

    The returned solution is the Smith back-substitution representative (free
    coordinates set to zero), reduced into ``[0, m)`` when ``m > 0``.
    """
    if A.rows != b.rows or b.cols != 1:
        raise YonedaError(f"solve_modular: A is {A.shape}, b is {b.shape}")
    m = ring.modulus
    rhs = b.column(0)
    if m:
        rhs = [x % m for x in rhs]
    x = _solve_integer(lift_to_integers(A, m), rhs)
    if x is None:
        return None
    x = x[:A.cols]
    if m:
        x = [v % m for v in x]
    return Matrix._raw([[v] for v in x], A.cols, 1)


def solve_columns(A: Matrix, B: Matrix, ring: RingSpec = ZZ) -> Matrix | None:
    """Solve ``A @ X == B`` column by column; None if any column fails."""
    m = ring.modulus
    L = lift_to_integers(A, m)
    cols = []
    for j in range(B.cols):
        rhs = B.column(j)
        if m:
            rhs = [x % m for x in rhs]
        x = _solve_integer(L, rhs)
        if x is None:
            return None
        x = x[:A.cols]
        cols.append([v % m for v in x] if m else x)
    return Matrix.from_columns(cols, A.cols)


def kernel_columns(A: Matrix, ring: RingSpec = ZZ) -> Matrix:
    """Columns generating ``{x : A x = 0}`` as a module over the ring."""
    m = ring.modulus
    L = lift_to_integers(A, m)
    s = _smith_cached(L)
    cols = [s.V.column(j)[:A.cols] for j in range(s.rank, L.cols)]
    if m:
        cols = [tuple(x % m for x in col) for col in cols]
        cols = [col for col in cols if any(col)]
    return Matrix.from_columns(cols, A.cols)


# ---------------------------------------------------------------------------
# Column Hermite normal form (canonical lattice bases)
# ---------------------------------------------------------------------------

def lattice_basis(vectors: Iterable[Sequence[int]], dim: int,
                  modulus: int = 0) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Canonical echelon basis of the lattice spanned by ``vectors``.

    With ``modulus > 0`` the lattice ``modulus * Z^dim`` is added, so every
    coordinate gets a pivot dividing ``modulus``.  Returns ``(pivot_row,
    vector)`` pairs in increasing pivot order; each vector vanishes above its
    pivot, the pivot is positive, and entries in later pivot rows are reduced
    into ``[0, pivot)``.  This is the column Hermite normal form.
    """
    pool = [list(v) for v in vectors]
    if modulus:
        pool = [[x % modulus for x in v] for v in pool]
    pool = [v for v in pool if any(v)]
    basis: list[tuple[int, list[int]]] = []
    for p in range(dim):
        cand = [v for v in pool if v[p]]
        rest = [v for v in pool if not v[p]]
        if modulus:
            e = [0] * dim
            e[p] = modulus
            cand.append(e)
        while len(cand) > 1:
            cand.sort(key=lambda v: abs(v[p]))
            piv = cand[0]
            nxt = [piv]
            for v in cand[1:]:
                q = v[p] // piv[p]
                w = [x - q * y for x, y in zip(v, piv)]
                if modulus:
                    w = [x % modulus for x in w[:p]] + [w[p]] + [x % modulus for x in w[p + 1:]]
                if w[p]:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            cand = nxt
        if cand:
            piv = cand[0]
            if piv[p] < 0:
                piv = [-x for x in piv]
            if modulus:
                piv = [x % modulus if i != p else x for i, x in enumerate(piv)]
            basis.append((p, piv))
        pool = rest
    for k in range(len(basis)):
        pk, bk = basis[k]
        h = bk[pk]
        for j in range(k):
            bj = basis[j][1]
            q = bj[pk] // h
            if q:
                for i in range(pk, dim):
                    bj[i] -= q * bk[i]
    return tuple((p, tuple(v)) for p, v in basis)


def hermite_columns(M: Matrix, modulus: int = 0) -> Matrix:
    """Column Hermite normal form of M (with m*I appended when modulus > 0)."""
    basis = lattice_basis(M.columns(), M.rows, modulus)
    return Matrix.from_columns([v for _, v in basis], M.rows)


def reduce_vector(basis, v: Sequence[int], modulus: int = 0) -> tuple[int, ...]:
    """Canonical coset representative of v modulo an echelon lattice basis."""
    x = [a % modulus for a in v] if modulus else list(v)
    for p, b in basis:
        q = x[p] // b[p]
        if q:
            for i in range(p, len(x)):
                if b[i]:
                    x[i] -= q * b[i]
    return tuple(x)
