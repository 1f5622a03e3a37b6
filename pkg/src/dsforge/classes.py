"""Conjugacy-class bookkeeping.

A class of matrices is fixed by a row of eigenvalues (its type row) and
the ranks of the partial products (A - xi_1)...(A - xi_j).  This module
converts between that description and Jordan data, validates it, and
evaluates the multiplicative bracket xi^[a] and its additive analogue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from gmpy2 import mpq

from .roots import DimVector, Weights
from .scalar import Scalar, format_scalar


class ClassesError(Exception):
    pass


@dataclass(frozen=True)
class TypeData:
    """Eigenvalue rows xi_{ij}, one row of length w_i per class."""

    rows: tuple

    def __init__(self, rows: Sequence[Sequence[Scalar]]):
        rows = tuple(tuple(row) for row in rows)
        for row in rows:
            if not row:
                raise ClassesError("type rows must be nonempty")
            if any(x.is_zero() for x in row):
                raise ClassesError("multiplicative type entries must be nonzero")
        object.__setattr__(self, "rows", rows)

    def weights(self) -> Weights:
        return Weights(tuple(len(row) for row in self.rows))

    @property
    def k(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ZetaData:
    """Additive variant: rational rows zeta_{ij}."""

    rows: tuple

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(mpq(x) for x in row) for row in rows)
        if any(not row for row in rows):
            raise ClassesError("additive type rows must be nonempty")
        object.__setattr__(self, "rows", rows)

    def weights(self) -> Weights:
        return Weights(tuple(len(row) for row in self.rows))

    @property
    def k(self) -> int:
        return len(self.rows)


def xi_bracket(t: TypeData, a: DimVector) -> Scalar:
    """prod over i,j of xi_{ij}^(a_{i,j-1} - a_{ij}); multiplicative in a."""
    a.require(t.weights())
    result = Scalar.one()
    for i, row in enumerate(t.rows, start=1):
        for j, xi in enumerate(row, start=1):
            e = a.arm_entry(i, j - 1) - a.arm_entry(i, j)
            if e:
                result = result * (xi**e)
    return result


def zeta_star(z: ZetaData, a: DimVector):
    """sum over i,j of zeta_{ij} * (a_{i,j-1} - a_{ij}); additive in a."""
    a.require(z.weights())
    total = mpq(0)
    for i, row in enumerate(z.rows, start=1):
        for j, zeta in enumerate(row, start=1):
            total += zeta * (a.arm_entry(i, j - 1) - a.arm_entry(i, j))
    return total


def zeta_is_integer(value) -> bool:
    return mpq(value).denominator == 1


@dataclass(frozen=True)
class ClassSpec:
    """One conjugacy class: eigenvalue row plus partial-product ranks."""

    type_row: tuple
    dims: tuple  # (n_0, ..., n_{d-1}); n_d = 0 by convention

    def __init__(self, type_row: Sequence[Scalar], dims: Sequence[int]):
        type_row = tuple(type_row)
        dims = tuple(int(x) for x in dims)
        if len(dims) != len(type_row):
            raise ClassesError(
                f"need one rank per eigenvalue: got {len(dims)} ranks "
                f"for {len(type_row)} eigenvalues"
            )
        object.__setattr__(self, "type_row", type_row)
        object.__setattr__(self, "dims", dims)

    @property
    def d(self) -> int:
        return len(self.type_row)

    @property
    def size(self) -> int:
        return self.dims[0]

    def dim_at(self, j: int) -> int:
        # n_j with the convention n_d = 0
        return self.dims[j] if j < self.d else 0

    def to_json(self) -> dict:
        return {
            "eigenvalues": [format_scalar(x) for x in self.type_row],
            "dims": list(self.dims),
        }


def validate_class(c: ClassSpec) -> tuple:
    """Check monotonicity and the equal-eigenvalue rank condition.

    Returns (ok, diagnostics); diagnostics name each violated pair.
    """
    diagnostics = []
    d = c.d
    for j in range(1, d + 1):
        if c.dim_at(j - 1) < c.dim_at(j):
            diagnostics.append(f"ranks increase at position {j}: n_{j-1} < n_{j}")
    if c.dim_at(d - 1) < 0:
        diagnostics.append("negative rank")
    for j in range(1, d + 1):
        for ell in range(j + 1, d + 1):
            if c.type_row[j - 1] == c.type_row[ell - 1]:
                lhs = c.dim_at(j - 1) - c.dim_at(j)
                rhs = c.dim_at(ell - 1) - c.dim_at(ell)
                if lhs < rhs:
                    diagnostics.append(
                        f"equal eigenvalues at positions {j},{ell}: "
                        f"n_{j-1}-n_{j}={lhs} < n_{ell-1}-n_{ell}={rhs}"
                    )
    return (not diagnostics, diagnostics)


@dataclass(frozen=True)
class JordanForm:
    """Multiset of Jordan blocks (eigenvalue, block size, count)."""

    blocks: tuple  # ((Scalar, size, count), ...)

    def __init__(self, blocks: Sequence[tuple]):
        merged: list = []
        for eig, size, count in blocks:
            size = int(size)
            count = int(count)
            if size < 1 or count < 1:
                raise ClassesError("block size and count must be positive")
            for entry in merged:
                if entry[0] == eig and entry[1] == size:
                    entry[2] += count
                    break
            else:
                merged.append([eig, size, count])
        merged.sort(key=lambda e: -e[1])
        object.__setattr__(self, "blocks", tuple((e, s, c) for e, s, c in merged))

    @property
    def total_size(self) -> int:
        return sum(size * count for _, size, count in self.blocks)

    def eigenvalues(self) -> list:
        """Distinct eigenvalues, in order of first appearance."""
        out: list = []
        for eig, _, _ in self.blocks:
            if not any(eig == seen for seen in out):
                out.append(eig)
        return out

    def blocks_for(self, eig: Scalar) -> list:
        return [(size, count) for e, size, count in self.blocks if e == eig]

    def max_block_size(self, eig: Scalar) -> int:
        sizes = [size for size, _ in self.blocks_for(eig)]
        return max(sizes) if sizes else 0

    def rank_power(self, lam: Scalar, m: int) -> int:
        """rank((A - lam)^m), computed from the block data."""
        total = self.total_size
        for size, count in self.blocks_for(lam):
            total -= min(size, m) * count
        return total

    def same_as(self, other: "JordanForm") -> bool:
        def as_multiset(j: "JordanForm") -> list:
            return [(eig, size, count) for eig, size, count in j.blocks]

        mine = as_multiset(self)
        theirs = as_multiset(other)
        if len(mine) != len(theirs):
            return False
        used = [False] * len(theirs)
        for eig, size, count in mine:
            for idx, (e2, s2, c2) in enumerate(theirs):
                if not used[idx] and size == s2 and count == c2 and eig == e2:
                    used[idx] = True
                    break
            else:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "jordan": [
                {"eig": format_scalar(eig), "size": size, "count": count}
                for eig, size, count in self.blocks
            ]
        }


def class_to_jordan(c: ClassSpec) -> JordanForm:
    """The unique Jordan form with the given type row and rank data."""
    ok, diagnostics = validate_class(c)
    if not ok:
        raise ClassesError("invalid class: " + "; ".join(diagnostics))
    blocks = []
    d = c.d
    for j in range(1, d + 1):
        eig = c.type_row[j - 1]
        # m_j = multiplicity of xi_j among xi_1..xi_j
        m = sum(1 for ell in range(1, j + 1) if c.type_row[ell - 1] == eig)
        at_least_m = c.dim_at(j - 1) - c.dim_at(j)
        # blocks of eigenvalue eig with size at least m+1
        positions = [
            ell for ell in range(1, d + 1) if c.type_row[ell - 1] == eig
        ]
        if m < len(positions):
            nxt = positions[m]
            at_least_next = c.dim_at(nxt - 1) - c.dim_at(nxt)
        else:
            at_least_next = 0
        exact = at_least_m - at_least_next
        if exact < 0:
            raise ClassesError("rank data is not realizable")
        if exact > 0:
            blocks.append((eig, m, exact))
    jf = JordanForm(blocks)
    if jf.total_size != c.size:
        raise ClassesError("rank data is not realizable")
    return jf


def class_from_jordan(j: JordanForm, xi_row: Optional[Sequence[Scalar]] = None) -> ClassSpec:
    """Build the rank description of a Jordan form.

    Without an explicit row, the minimal one is synthesized: eigenvalues
    ordered by first appearance, each repeated as often as its largest
    block size.  An explicit row must annihilate the class.
    """
    if xi_row is None:
        row: list = []
        for eig in j.eigenvalues():
            row.extend([eig] * j.max_block_size(eig))
    else:
        row = list(xi_row)
        for eig in j.eigenvalues():
            have = sum(1 for x in row if x == eig)
            if have < j.max_block_size(eig):
                raise ClassesError(
                    f"type row does not annihilate the class: eigenvalue "
                    f"{format_scalar(eig)} needs multiplicity {j.max_block_size(eig)}, "
                    f"row has {have}"
                )
    dims = [j.total_size]
    for pos, eig in enumerate(row, start=1):
        m = sum(1 for x in row[:pos] if x == eig)
        at_least_m = sum(count for size, count in j.blocks_for(eig) if size >= m)
        dims.append(dims[-1] - at_least_m)
    assert dims[-1] == 0
    return ClassSpec(tuple(row), tuple(dims[:-1]))


def reduce_sequence(dims: Sequence[int], r: int, s: int, xi_row: Sequence[Scalar]) -> tuple:
    """Decrement positions r..s of a rank sequence (1-based).

    Requires xi_r == xi_{s+1}; the result must stay nonnegative.
    """
    dims = tuple(int(x) for x in dims)
    d = len(xi_row)
    if not (1 <= r <= s <= d - 1):
        raise ClassesError(f"reduction indices out of range: r={r}, s={s}, d={d}")
    if not (xi_row[r - 1] == xi_row[s]):
        raise ClassesError(
            f"reduction requires equal eigenvalues at positions {r} and {s + 1}"
        )
    out = list(dims)
    for pos in range(r, s + 1):
        out[pos] -= 1
        if out[pos] < 0:
            raise ClassesError(f"reduction makes n_{pos} negative")
    return tuple(out)
