"""The convolution functor on monodromy tuples.

Convolution realizes the reflection s_0 at the central vertex on
dimension vectors while transforming the eigenvalue data by r0_prime.
It is defined on noncollapsing representations only; the collapsing
obstructions are detected by collapsing_status.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classes import TypeData, xi_bracket
from .linalg import (
    Matrix,
    Subspace,
    generated_algebra_dim,
    inverse,
    nullspace,
    rank,
)
from .roots import DimVector, Weights, reflect
from .scalar import Scalar, format_scalar


class ConvolutionError(Exception):
    pass


@dataclass(frozen=True)
class Representation:
    """A tuple of invertible matrices with product equal to the identity."""

    mats: tuple

    def __init__(self, mats: Sequence[Matrix]):
        mats = tuple(mats)
        if not mats:
            raise ConvolutionError("a representation needs at least one matrix")
        n = mats[0].rows
        for m in mats:
            if m.rows != n or m.cols != n:
                raise ConvolutionError("all matrices must be square of equal size")
        product = Matrix.identity(n)
        for m in mats:
            product = product * m
        if product != Matrix.identity(n):
            raise ConvolutionError("product of the matrices is not the identity")
        object.__setattr__(self, "mats", mats)

    @property
    def k(self) -> int:
        return len(self.mats)

    @property
    def n(self) -> int:
        return self.mats[0].rows

    def has_type(self, t: TypeData) -> bool:
        """Does every matrix satisfy its row's annihilating polynomial?"""
        if t.k != self.k:
            return False
        n = self.n
        for m, row in zip(self.mats, t.rows):
            product = Matrix.identity(n)
            for xi in row:
                product = product * (m - Matrix.scalar_matrix(n, xi))
            if not product.is_zero():
                return False
        return True

    def require_type(self, t: TypeData) -> None:
        if not self.has_type(t):
            raise ConvolutionError("representation does not have the stated type")

    def dimension_vector(self, t: TypeData) -> DimVector:
        """alpha_0 = n; alpha_{ij} = rank of the j-th partial product."""
        self.require_type(t)
        n = self.n
        arms = []
        for m, row in zip(self.mats, t.rows):
            product = Matrix.identity(n)
            arm = []
            for xi in row[:-1]:
                product = product * (m - Matrix.scalar_matrix(n, xi))
                arm.append(rank(product))
            arms.append(arm)
        return DimVector(n, arms)

    def is_irreducible(self) -> bool:
        """Absolute irreducibility: the matrices generate all of End(V)."""
        return generated_algebra_dim(list(self.mats)) == self.n * self.n

    def to_json(self) -> dict:
        return {"matrices": [m.to_json() for m in self.mats]}


def r0_prime(t: TypeData) -> TypeData:
    """Eigenvalue transform attached to the reflection at the centre."""
    lam = Scalar.one()
    for row in t.rows:
        lam = lam * row[0]
    rows = []
    for row in t.rows:
        first = row[0]
        new_row = [first.inv()]
        factor = lam / (first * first)
        for xi in row[1:]:
            new_row.append(xi * factor)
        rows.append(new_row)
    return TypeData(rows)


def rv_prime(t: TypeData, v: tuple) -> TypeData:
    """Eigenvalue transform attached to the reflection at arm vertex [i,j]."""
    t.weights().check_vertex(v)
    if v == 0:
        raise ConvolutionError("rv_prime applies to arm vertices only")
    i, j = v
    if j > len(t.rows[i - 1]) - 1:
        raise ConvolutionError(f"vertex {v!r} out of range for the type rows")
    rows = [list(row) for row in t.rows]
    rows[i - 1][j - 1], rows[i - 1][j] = rows[i - 1][j], rows[i - 1][j - 1]
    return TypeData(rows)


@dataclass(frozen=True)
class CollapsingReport:
    has_collapsing_sub: bool
    has_collapsing_quotient: bool
    sub_witness: Optional[tuple] = None  # (index i, scalar, subspace)
    quotient_witness: Optional[tuple] = None

    def noncollapsing(self) -> bool:
        return not (self.has_collapsing_sub or self.has_collapsing_quotient)


def _dr_matrices(rep: Representation, t: TypeData) -> list:
    # A_{k+1-i} = rho(g_i)/xi_{i1}, listed as A_1, ..., A_k
    k = rep.k
    return [
        rep.mats[k - m].scale(t.rows[k - m][0].inv()) for m in range(1, k + 1)
    ]


def collapsing_status(rep: Representation, t: TypeData) -> CollapsingReport:
    """Detect collapsing subrepresentations and quotients.

    Condition (*) fails for some scalar tau exactly when the common
    eigenvector space of the other matrices meets an eigenspace of A_i;
    only finitely many tau give Ker(tau A_i - 1) nonzero, namely the
    reciprocals of the eigenvalues of A_i, all known from the type.
    """
    rep.require_type(t)
    k = rep.k
    n = rep.n
    A = _dr_matrices(rep, t)
    ident = Matrix.identity(n)
    fixed = [Subspace.from_columns(n, nullspace(m - ident)) for m in A]
    moved = [
        Subspace.from_columns(n, [(m - ident).col(j) for j in range(n)]) for m in A
    ]
    # eigenvalue candidates for A_{k+1-i} = rho(g_i)/xi_{i1}: xi_{ij}/xi_{i1}
    candidates = []
    for m in range(1, k + 1):
        row = t.rows[k - m]
        cands = []
        for xi in row:
            mu = xi / row[0]
            if not any(mu == seen for seen in cands):
                cands.append(mu)
        candidates.append(cands)

    sub_witness = None
    quot_witness = None
    full = Subspace.full(n)
    for i in range(k):
        others_fixed = Subspace.full(n)
        others_moved = Subspace.zero(n)
        for j in range(k):
            if j != i:
                others_fixed = others_fixed.intersect(fixed[j])
                others_moved = others_moved.sum(moved[j])
        for mu in candidates[i]:
            if sub_witness is None and others_fixed.dim > 0:
                eigsp = Subspace.from_columns(
                    n, nullspace(A[i] - Matrix.scalar_matrix(n, mu))
                )
                meet = others_fixed.intersect(eigsp)
                if meet.dim > 0:
                    sub_witness = (k - i, mu, meet)
            if quot_witness is None and others_moved.dim < n:
                shifted_im = Subspace.from_columns(
                    n,
                    [
                        (A[i] - Matrix.scalar_matrix(n, mu)).col(j)
                        for j in range(n)
                    ],
                )
                if others_moved.sum(shifted_im) != full:
                    quot_witness = (k - i, mu, others_moved.sum(shifted_im))
    return CollapsingReport(
        sub_witness is not None, quot_witness is not None, sub_witness, quot_witness
    )


def _g_matrix(A: list, lam: Scalar, i: int, n: int) -> Matrix:
    """The block matrix G_i (1-based i), identity except in block row i."""
    k = len(A)
    rows = []
    ident = Matrix.identity(n)
    for r in range(1, k + 1):
        if r != i:
            rows.append(
                Matrix.hstack(
                    [ident if c == r else Matrix.zeros(n, n) for c in range(1, k + 1)]
                )
            )
            continue
        blocks = []
        for c in range(1, k + 1):
            if c < i:
                blocks.append(A[c - 1] - ident)
            elif c == i:
                blocks.append(A[i - 1].scale(lam))
            else:
                blocks.append((A[c - 1] - ident).scale(lam))
        rows.append(Matrix.hstack(blocks))
    return Matrix.vstack(rows)


def convolve(rep: Representation, t: TypeData) -> tuple:
    """Apply the convolution functor; returns (new rep, r0_prime(t)).

    Requires the product of the first eigenvalues to differ from 1 and
    the input to be noncollapsing.  All contract conditions (output
    dimension, type, dimension vector) are re-verified exactly.
    """
    rep.require_type(t)
    w = t.weights()
    lam = xi_bracket(t, DimVector.coordinate(w, 0))
    if lam.is_one():
        raise ConvolutionError(
            "convolution undefined: the product of first eigenvalues is 1"
        )
    report = collapsing_status(rep, t)
    if not report.noncollapsing():
        raise ConvolutionError("representation is collapsing; convolution undefined")

    k = rep.k
    n = rep.n
    alpha = rep.dimension_vector(t)
    A = _dr_matrices(rep, t)
    big_ident = Matrix.identity(k * n)
    G = [_g_matrix(A, lam, i, n) for i in range(1, k + 1)]
    D = Matrix.block_diag(A)

    kernel_d = Subspace.from_columns(k * n, nullspace(D - big_ident))
    common = Subspace.full(k * n)
    for g in G:
        common = common.intersect(
            Subspace.from_columns(k * n, nullspace(g - big_ident))
        )
    dropped = kernel_d.sum(common)
    for g in G:
        if not dropped.is_invariant_under(g):
            raise ConvolutionError("internal error: dropped subspace not invariant")
    proj, incl = dropped.quotient_map()

    # rho'(g_{k+1-i}) = (1/xi_{k+1-i,1}) G_i on the quotient; re-index to g-order
    new_mats: list = [None] * k
    for i in range(1, k + 1):
        induced = proj * G[i - 1] * incl
        new_mats[k - i] = induced.scale(t.rows[k - i][0].inv())
    new_rep = Representation(new_mats)
    new_t = r0_prime(t)

    expected_dim = sum(alpha.arm_entry(i, 1) for i in range(1, k + 1)) - alpha.a0
    if new_rep.n != expected_dim:
        raise ConvolutionError(
            f"internal error: output dimension {new_rep.n}, expected {expected_dim}"
        )
    if not new_rep.has_type(new_t):
        raise ConvolutionError("internal error: output does not have the new type")
    if new_rep.dimension_vector(new_t) != reflect(w, 0, alpha):
        raise ConvolutionError(
            "internal error: output dimension vector is not the reflection"
        )
    return new_rep, new_t
