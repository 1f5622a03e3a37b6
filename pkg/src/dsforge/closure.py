"""Orbit-closure decisions and certificates.

Membership of a matrix in the closure of a conjugacy class is decided by
the Gerstenhaber-Hesselink rank criterion on Jordan data.  A separate,
human-readable certificate is the chain of spaces and maps (phi_j,
psi_j) whose identities are re-checked exactly by verify_triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classes import ClassSpec, JordanForm, class_to_jordan
from .linalg import Matrix, Subspace, char_poly, rank, solve
from .scalar import Scalar


class ClosureError(Exception):
    pass


def jordan_matrix(j: JordanForm) -> Matrix:
    """A representative matrix of the class with the given Jordan form."""
    blocks = []
    for eig, size, count in j.blocks:
        for _ in range(count):
            block = Matrix.scalar_matrix(size, eig)
            for r in range(size - 1):
                block.entries[r * size + r + 1] = Scalar.one()
            blocks.append(block)
    if not blocks:
        return Matrix.zeros(0, 0)
    return Matrix.block_diag(blocks)


def gh_leq(a: JordanForm, b: JordanForm) -> bool:
    """True iff b lies in the closure of the class of a.

    Criterion: rank((B - lam)^m) <= rank((A - lam)^m) for all eigenvalues
    lam and all m, with ranks read off combinatorially from block data.
    """
    n = a.total_size
    if n != b.total_size:
        raise ClosureError(
            f"size mismatch: {n} vs {b.total_size}"
        )
    eigs = list(a.eigenvalues())
    for eig in b.eigenvalues():
        if not any(eig == seen for seen in eigs):
            eigs.append(eig)
    for lam in eigs:
        for m in range(1, n + 1):
            if b.rank_power(lam, m) > a.rank_power(lam, m):
                return False
    return True


def jordan_of_matrix(B: Matrix, eigenvalues: Sequence[Scalar]) -> JordanForm:
    """Jordan form of B, given that its eigenvalues are among the list.

    Raises if the characteristic polynomial of B does not split over the
    given eigenvalue list.
    """
    n = B.rows
    if B.cols != n:
        raise ClosureError("matrix is not square")
    distinct: list = []
    for eig in eigenvalues:
        if not any(eig == seen for seen in distinct):
            distinct.append(eig)
    blocks = []
    total = 0
    for lam in distinct:
        shifted = B - Matrix.scalar_matrix(n, lam)
        ranks = [n]
        power = Matrix.identity(n)
        while True:
            power = power * shifted
            r = rank(power)
            ranks.append(r)
            if r == ranks[-2]:
                break
        # blocks of size >= m: ranks[m-1] - ranks[m]
        for m in range(1, len(ranks) - 1):
            at_least_m = ranks[m - 1] - ranks[m]
            at_least_next = ranks[m] - ranks[m + 1] if m + 1 < len(ranks) else 0
            exact = at_least_m - at_least_next
            if exact > 0:
                blocks.append((lam, m, exact))
                total += m * exact
    if total != n:
        raise ClosureError(
            "characteristic polynomial does not split over the given eigenvalues"
        )
    return JordanForm(blocks)


def _char_poly_of_jordan(j: JordanForm) -> list:
    # prod (x - lam)^mult, ascending coefficients
    coeffs = [Scalar.one()]
    for eig, size, count in j.blocks:
        for _ in range(size * count):
            # multiply by (x - eig)
            new = [Scalar.zero()] * (len(coeffs) + 1)
            for idx, c in enumerate(coeffs):
                new[idx + 1] = new[idx + 1] + c
                new[idx] = new[idx] - eig * c
            coeffs = new
    return coeffs


def closure_contains(c: ClassSpec, B: Matrix) -> bool:
    """Is B in the closure of the class described by c?"""
    target = class_to_jordan(c)
    if B.rows != B.cols or B.rows != c.size:
        raise ClosureError(
            f"matrix size {B.rows}x{B.cols} does not match class size {c.size}"
        )
    # closure preserves the characteristic polynomial, so a mismatch is a
    # definite "no" and also guarantees the eigenvalues of B are known
    if char_poly(B) != _char_poly_of_jordan(target):
        return False
    b_form = jordan_of_matrix(B, target.eigenvalues())
    return gh_leq(target, b_form)


@dataclass
class TripleCertificate:
    """Spaces and maps witnessing closure membership.

    dims = (n_0, ..., n_d) with n_d = 0; phis[j] is an n_{j+1} x n_j
    matrix, psis[j] is n_j x n_{j+1}, for 0 <= j < d.
    """

    dims: tuple
    phis: list
    psis: list
    reductions: tuple = ()

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "phis": [m.to_json() for m in self.phis],
            "psis": [m.to_json() for m in self.psis],
            "reductions": [list(rs) for rs in self.reductions],
        }


def verify_triple(cert: TripleCertificate, B: Matrix, xi_row: Sequence[Scalar]) -> bool:
    """Exact check of the certificate identities against B."""
    d = len(xi_row)
    if len(cert.dims) != d + 1 or cert.dims[-1] != 0:
        raise ClosureError("certificate has wrong number of levels")
    if len(cert.phis) != d or len(cert.psis) != d:
        raise ClosureError("certificate needs d maps in each direction")
    for j in range(d):
        if cert.phis[j].rows != cert.dims[j + 1] or cert.phis[j].cols != cert.dims[j]:
            raise ClosureError(f"phi_{j + 1} has the wrong shape")
        if cert.psis[j].rows != cert.dims[j] or cert.psis[j].cols != cert.dims[j + 1]:
            raise ClosureError(f"psi_{j + 1} has the wrong shape")
    if B.rows != cert.dims[0]:
        raise ClosureError("matrix size does not match the certificate")
    lhs = B - cert.psis[0] * cert.phis[0]
    if lhs != Matrix.scalar_matrix(cert.dims[0], xi_row[0]):
        return False
    for j in range(1, d):
        lhs = cert.phis[j - 1] * cert.psis[j - 1] - cert.psis[j] * cert.phis[j]
        rhs = Matrix.scalar_matrix(cert.dims[j], xi_row[j] - xi_row[j - 1])
        if lhs != rhs:
            return False
    return True


def _solve_in_basis(basis: Matrix, target_cols: Matrix) -> Matrix:
    """Coordinates of target columns in the given column basis."""
    out_cols = []
    for jcol in range(target_cols.cols):
        x = solve(basis, target_cols.col(jcol))
        if x is None:
            raise ClosureError("vector not inside the expected subspace")
        out_cols.append(x)
    rows = [[out_cols[jcol][i] for jcol in range(target_cols.cols)] for i in range(basis.cols)]
    return Matrix.from_rows(rows, cols=target_cols.cols)


def _flag_of(B: Matrix, xi_row: Sequence[Scalar]) -> list:
    """Bases of V_j = Im((B - xi_1)...(B - xi_j)) for j = 0..d."""
    n = B.rows
    flags = [Subspace.full(n)]
    current = Matrix.identity(n)
    for xi in xi_row:
        current = (B - Matrix.scalar_matrix(n, xi)) * current
        flags.append(Subspace.from_columns(n, [current.col(j) for j in range(current.cols)]))
    return flags


def _direct_triple(B: Matrix, xi_row: Sequence[Scalar]) -> TripleCertificate:
    """Construction from the image flag: phi_j = (B - xi_j) restricted."""
    flags = _flag_of(B, xi_row)
    n = B.rows
    dims = tuple(f.dim for f in flags)
    phis = []
    psis = []
    prev_basis = Matrix.identity(n)
    for j, xi in enumerate(xi_row, start=1):
        basis = flags[j].basis
        shifted = (B - Matrix.scalar_matrix(n, xi)) * prev_basis
        phis.append(_solve_in_basis(basis, shifted) if basis.cols else Matrix.zeros(0, prev_basis.cols))
        psis.append(_solve_in_basis(prev_basis, basis))
        prev_basis = basis
    return TripleCertificate(dims, phis, psis)


def reduction_chain(dims: tuple, xi_row: Sequence[Scalar], target: tuple) -> Optional[list]:
    """Chain of (r, s) reductions from dims to target, or None.

    Exhaustive DFS with memoization on the dims sequence; the first
    chain found is returned.
    """
    d = len(xi_row)
    dims = tuple(dims) + (0,)
    target = tuple(target) + (0,)
    seen: set = set()
    pairs = [
        (r, s)
        for r in range(1, d)
        for s in range(r, d)
        if xi_row[r - 1] == xi_row[s]
    ]

    def dfs(current: tuple) -> Optional[list]:
        if current == target:
            return []
        if current in seen:
            return None
        seen.add(current)
        for r, s in pairs:
            nxt = list(current)
            ok = True
            for pos in range(r, s + 1):
                nxt[pos] -= 1
                if nxt[pos] < 0 or nxt[pos] < target[pos]:
                    ok = False
                    break
            if not ok:
                continue
            tail = dfs(tuple(nxt))
            if tail is not None:
                return [(r, s)] + tail
        return None

    return dfs(dims)


def build_triple(c: ClassSpec, B: Matrix) -> TripleCertificate:
    """Certificate that B is in the closure of c.

    Uses the image-flag construction when the flag of B already has the
    dims of c, otherwise pads a reduced triple with scalar one-dimensional
    chains along a reduction chain (searched exhaustively).
    """
    xi_row = c.type_row
    d = c.d
    flags = _flag_of(B, xi_row)
    flag_dims = tuple(f.dim for f in flags)
    if flag_dims[-1] != 0:
        raise ClosureError(
            "matrix does not satisfy the annihilating polynomial of the class"
        )
    want = tuple(c.dims) + (0,)
    if flag_dims == want:
        cert = _direct_triple(B, xi_row)
        return cert
    chain = reduction_chain(tuple(c.dims), xi_row, flag_dims[:-1])
    if chain is None:
        raise ClosureError(
            f"no reduction chain from dims {tuple(c.dims)} to the flag dims "
            f"{flag_dims[:-1]} of the given matrix"
        )
    base = _direct_triple(B, xi_row)
    # pad each level with one-dimensional chains r..s carrying the maps
    # (xi_r - xi_j) and 1; the reduction condition xi_r = xi_{s+1} makes
    # the commutation identities close up at both ends
    dims = list(base.dims)
    phis = list(base.phis)
    psis = list(base.psis)
    for r, s in chain:
        new_phis = []
        new_psis = []
        for j in range(1, d + 1):
            in_prev = r <= j - 1 <= s
            in_cur = r <= j <= s
            if in_prev and in_cur:
                phi_block = Matrix.scalar_matrix(1, xi_row[r - 1] - xi_row[j - 1])
                psi_block = Matrix.identity(1)
            else:
                phi_block = Matrix.zeros(1 if in_cur else 0, 1 if in_prev else 0)
                psi_block = Matrix.zeros(1 if in_prev else 0, 1 if in_cur else 0)
            new_phis.append(Matrix.block_diag([phis[j - 1], phi_block]))
            new_psis.append(Matrix.block_diag([psis[j - 1], psi_block]))
        phis = new_phis
        psis = new_psis
        for pos in range(r, s + 1):
            dims[pos] += 1
    cert = TripleCertificate(tuple(dims), phis, psis, reductions=tuple(chain))
    if cert.dims != want:
        raise ClosureError("assembled certificate has inconsistent dimensions")
    if not verify_triple(cert, B, xi_row):
        raise ClosureError("assembled certificate failed verification")
    return cert
