"""Exact dense linear algebra over cyclotomic scalars.

Everything is plain Gaussian elimination with exact pivoting.  Subspaces
are kept in reduced column echelon form so that equality of subspaces is
structural equality of their basis matrices.
"""

from __future__ import annotations

from itertools import product as iter_product
from typing import Optional, Sequence

from .scalar import Scalar, format_scalar


class LinalgError(Exception):
    pass


class Matrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Scalar]):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise LinalgError(
                f"entry count {len(entries)} != {rows}x{cols}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        flat: list = []
        for r in rows:
            if len(r) != width:
                raise LinalgError("ragged rows")
            flat.extend(r)
        return Matrix(len(rows), width, flat)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(
            n, n, [Scalar.one() if i == j else Scalar.zero() for i in range(n) for j in range(n)]
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [Scalar.zero()] * (rows * cols))

    @staticmethod
    def scalar_matrix(n: int, value: Scalar) -> "Matrix":
        m = Matrix.zeros(n, n)
        for i in range(n):
            m.entries[i * n + i] = value
        return m

    # -- access -------------------------------------------------------

    def at(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def row_lists(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [self.at(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, value: Scalar) -> "Matrix":
        return Matrix(self.rows, self.cols, [value * a for a in self.entries])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(
                f"shape mismatch in product: {self.rows}x{self.cols} by "
                f"{other.rows}x{other.cols}"
            )
        out: list = []
        zero = Scalar.zero()
        for i in range(self.rows):
            my_row = self.row(i)
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    x = my_row[t]
                    if not x.is_zero():
                        acc = acc + x * other.at(t, j)
                out.append(acc)
        return Matrix(self.rows, other.cols, out)

    def apply(self, vector: Sequence[Scalar]) -> list:
        zero = Scalar.zero()
        out = []
        for i in range(self.rows):
            acc = zero
            row = self.row(i)
            for x, v in zip(row, vector):
                if not x.is_zero():
                    acc = acc + x * v
            out.append(acc)
        return out

    def power(self, m: int) -> "Matrix":
        if self.rows != self.cols:
            raise LinalgError("power of a non-square matrix")
        result = Matrix.identity(self.rows)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for a, b in zip(self.entries, other.entries))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries)

    def __repr__(self) -> str:
        body = "; ".join(
            ", ".join(format_scalar(x) for x in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix[{self.rows}x{self.cols}: {body}]"

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise LinalgError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    # -- stacking -----------------------------------------------------

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        mats = list(mats)
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise LinalgError("hstack: row counts differ")
        out_rows = [sum((m.row(i) for m in mats), []) for i in range(rows)]
        return Matrix.from_rows(out_rows, cols=sum(m.cols for m in mats))

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        mats = list(mats)
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise LinalgError("vstack: column counts differ")
        rows: list = []
        for m in mats:
            rows.extend(m.row_lists())
        return Matrix.from_rows(rows, cols=cols)

    @staticmethod
    def block_diag(mats: Sequence["Matrix"]) -> "Matrix":
        mats = list(mats)
        total_r = sum(m.rows for m in mats)
        total_c = sum(m.cols for m in mats)
        out = Matrix.zeros(total_r, total_c)
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                for j in range(m.cols):
                    out.entries[(r0 + i) * total_c + (c0 + j)] = m.at(i, j)
            r0 += m.rows
            c0 += m.cols
        return out

    def to_json(self) -> list:
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]


# -- elimination ------------------------------------------------------


def row_reduce(rows: list) -> tuple:
    """In-place reduced row echelon form; returns (rows, pivot_columns)."""
    if not rows:
        return rows, []
    n_rows = len(rows)
    n_cols = len(rows[0])
    pivots: list = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if not rows[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(n_rows):
            if i != r and not rows[i][c].is_zero():
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def nullspace(m: Matrix) -> list:
    """Basis vectors (length cols) of the kernel of m."""
    rows, pivots = row_reduce(m.row_lists())
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    zero = Scalar.zero()
    for f in free:
        vec = [zero] * m.cols
        vec[f] = Scalar.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][f]
        basis.append(vec)
    return basis


def solve(m: Matrix, rhs: Sequence[Scalar]) -> Optional[list]:
    """One solution of m x = rhs, or None if inconsistent."""
    aug_rows = [m.row(i) + [rhs[i]] for i in range(m.rows)]
    rows, pivots = row_reduce(aug_rows)
    if m.cols in pivots:
        return None
    zero = Scalar.zero()
    x = [zero] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m.cols]
    return x


def determinant(m: Matrix) -> Scalar:
    if m.rows != m.cols:
        raise LinalgError("determinant of a non-square matrix")
    n = m.rows
    rows = m.row_lists()
    det = Scalar.one()
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not rows[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            return Scalar.zero()
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inv()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                factor = rows[i][c] * inv
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise LinalgError("inverse of a non-square matrix")
    n = m.rows
    aug = [m.row(i) + Matrix.identity(n).row(i) for i in range(n)]
    rows, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise LinalgError("matrix is singular")
    return Matrix.from_rows([r[n:] for r in rows], cols=n)


def char_poly(m: Matrix) -> list:
    """Coefficients of det(xI - m), ascending degree, exact."""
    if m.rows != m.cols:
        raise LinalgError("characteristic polynomial of a non-square matrix")
    n = m.rows
    # Faddeev-LeVerrier
    coeffs = [Scalar.zero()] * (n + 1)
    coeffs[n] = Scalar.one()
    mk = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        trace = Scalar.zero()
        for i in range(n):
            trace = trace + mk.at(i, i)
        c = trace / Scalar.from_rational(k)
        c = -c
        coeffs[n - k] = c
        for i in range(n):
            mk.entries[i * n + i] = mk.at(i, i) + c
    return coeffs


# -- subspaces --------------------------------------------------------


class Subspace:
    """Subspace of K^n with basis columns in reduced column echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivot_rows")

    def __init__(self, ambient_dim: int, basis: Matrix, pivot_rows: list):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivot_rows = pivot_rows

    @staticmethod
    def from_columns(ambient_dim: int, columns: Sequence[Sequence[Scalar]]) -> "Subspace":
        rows = [list(c) for c in columns]
        for r in rows:
            if len(r) != ambient_dim:
                raise LinalgError("column length does not match ambient dimension")
        reduced, pivots = row_reduce(rows)
        reduced = reduced[: len(pivots)]
        basis = Matrix.from_rows(reduced, cols=ambient_dim).transpose()
        return Subspace(ambient_dim, basis, pivots)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.zeros(ambient_dim, 0), [])

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(
            ambient_dim, Matrix.identity(ambient_dim), list(range(ambient_dim))
        )

    @property
    def dim(self) -> int:
        return self.basis.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    __hash__ = None

    def columns(self) -> list:
        return [self.basis.col(j) for j in range(self.basis.cols)]

    def contains_vector(self, vec: Sequence[Scalar]) -> bool:
        if self.dim == 0:
            return all(x.is_zero() for x in vec)
        return solve(self.basis, list(vec)) is not None

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains_vector(c) for c in other.columns())

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_columns(self.ambient_dim, self.columns() + other.columns())

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        stacked = Matrix.hstack([self.basis, -other.basis])
        cols = []
        for vec in nullspace(stacked):
            cols.append(self.basis.apply(vec[: self.dim]))
        return Subspace.from_columns(self.ambient_dim, cols)

    def quotient_map(self) -> tuple:
        """Projection onto a complement of this subspace.

        Returns (proj, incl): proj is q x n mapping a vector to its
        coordinates modulo the subspace in the coordinate-vector
        complement; incl is the n x q inclusion of that complement.
        """
        n = self.ambient_dim
        comp_rows = [r for r in range(n) if r not in set(self.pivot_rows)]
        q = len(comp_rows)
        incl = Matrix.zeros(n, q)
        for idx, r in enumerate(comp_rows):
            incl.entries[r * q + idx] = Scalar.one()
        change = Matrix.hstack([self.basis, incl]) if self.dim else incl
        inv = inverse(change)
        proj = Matrix.from_rows([inv.row(i) for i in range(self.dim, n)], cols=n)
        return proj, incl

    def induced_map(self, endo: Matrix) -> Matrix:
        """Endomorphism induced on the quotient by an endo preserving self."""
        if not self.is_invariant_under(endo):
            raise LinalgError("endomorphism does not preserve the subspace")
        proj, incl = self.quotient_map()
        return proj * endo * incl

    def is_invariant_under(self, endo: Matrix) -> bool:
        return all(self.contains_vector(endo.apply(c)) for c in self.columns())

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )


def rank_kernel_image(m: Matrix) -> tuple:
    """Exact rank, kernel subspace and image subspace of a matrix."""
    image = Subspace.from_columns(m.rows, [m.col(j) for j in range(m.cols)])
    kernel = Subspace.from_columns(m.cols, nullspace(m))
    assert image.dim + kernel.dim == m.cols
    return image.dim, kernel, image


def rank(m: Matrix) -> int:
    _, pivots = row_reduce(m.row_lists())
    return len(pivots)


# -- generated algebra ------------------------------------------------


class _EchelonSpan:
    """Incremental echelon basis of vectors in K^m."""

    def __init__(self, length: int):
        self.length = length
        self.rows: list = []  # list of (pivot_index, vector)

    def insert(self, vec: list) -> bool:
        """Reduce vec against the span; add it if independent."""
        v = list(vec)
        for pivot, row in self.rows:
            if not v[pivot].is_zero():
                factor = v[pivot]
                v = [x - factor * y for x, y in zip(v, row)]
        pivot = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if pivot is None:
            return False
        inv = v[pivot].inv()
        v = [inv * x for x in v]
        self.rows.append((pivot, v))
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def generated_algebra_dim(mats: Sequence[Matrix]) -> int:
    """Dimension of the unital matrix algebra generated by the inputs.

    Returns n*n exactly when the tuple is absolutely irreducible.
    """
    mats = list(mats)
    if not mats:
        raise LinalgError("need at least one matrix")
    n = mats[0].rows
    for m in mats:
        if m.rows != n or m.cols != n:
            raise LinalgError("generators must be square of equal size")
    if n == 0:
        return 0
    span = _EchelonSpan(n * n)
    worklist: list = []
    for m in [Matrix.identity(n)] + mats:
        if span.insert(list(m.entries)):
            worklist.append(m)
    while worklist:
        current = worklist.pop()
        for g in mats:
            for prod in (current * g, g * current):
                if span.insert(list(prod.entries)):
                    worklist.append(prod)
                    if span.dim == n * n:
                        return n * n
    return span.dim


# -- intertwiners -----------------------------------------------------


def hom_space(repA: Sequence[Matrix], repB: Sequence[Matrix]) -> tuple:
    """Solutions X of X A_i = B_i X for all i.

    Returns (basis, is_isomorphic) where basis is a list of nB x nA
    matrices and is_isomorphic is True, False or "undetermined".
    """
    repA = list(repA)
    repB = list(repB)
    if len(repA) != len(repB):
        raise LinalgError("tuples have different lengths")
    nA = repA[0].rows
    nB = repB[0].rows
    # unknowns: X entries, row-major, X is nB x nA
    zero = Scalar.zero()
    eq_rows: list = []
    for a_mat, b_mat in zip(repA, repB):
        # (X A - B X)[p, q] = sum_t X[p,t] A[t,q] - sum_t B[p,t] X[t,q]
        for p in range(nB):
            for qcol in range(nA):
                row = [zero] * (nB * nA)
                for t in range(nA):
                    row[p * nA + t] = row[p * nA + t] + a_mat.at(t, qcol)
                for t in range(nB):
                    row[t * nA + qcol] = row[t * nA + qcol] - b_mat.at(p, t)
                eq_rows.append(row)
    system = Matrix.from_rows(eq_rows, cols=nB * nA)
    basis_vecs = nullspace(system)
    basis = [Matrix(nB, nA, vec) for vec in basis_vecs]
    is_iso = _decide_isomorphic(basis, nA, nB)
    return basis, is_iso


_GRID_DIM_CAP = 5


def _decide_isomorphic(basis: list, nA: int, nB: int):
    if nA != nB or not basis:
        return False
    for b in basis:
        if not determinant(b).is_zero():
            return True
    d = len(basis)
    if d > _GRID_DIM_CAP:
        return "undetermined"
    # det of a combination is a polynomial of degree <= nA in the d
    # coefficients; vanishing on a grid with > nA points per axis forces
    # it to vanish identically
    half = max(2, (nA + 1) // 2 + 1)
    grid = range(-half, half + 1)
    if len(grid) <= nA:
        return "undetermined"
    for coeffs in iter_product(grid, repeat=d):
        if all(c == 0 for c in coeffs):
            continue
        combo = Matrix.zeros(nA, nA)
        for c, b in zip(coeffs, basis):
            if c:
                combo = combo + b.scale(Scalar.from_rational(c))
        if not determinant(combo).is_zero():
            return True
    return False
