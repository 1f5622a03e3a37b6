"""Independent oracles and generators shared across the test suite.

Everything here is deliberately written against the definitions, not
against the library's own algorithms, so agreement is meaningful.
"""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Iterator

from dsforge.roots import DimVector, Weights, has_connected_support, pairing


def vectors_of_mass_at_most(w: Weights, bound: int) -> Iterator[DimVector]:
    """All nonzero nonnegative vectors with component sum <= bound."""
    num = 1 + sum(wi - 1 for wi in w.w)
    arm_lens = [wi - 1 for wi in w.w]

    def rec(idx: int, remaining: int, acc: list):
        if idx == num:
            yield tuple(acc)
            return
        for value in range(remaining + 1):
            acc.append(value)
            yield from rec(idx + 1, remaining - value, acc)
            acc.pop()

    for comps in rec(0, bound, []):
        if not any(comps):
            continue
        arms = []
        idx = 1
        for length in arm_lens:
            arms.append(comps[idx : idx + length])
            idx += length
        yield DimVector(comps[0], arms)


def _reflect_at(w: Weights, v, a: DimVector) -> DimVector:
    c = pairing(w, a, DimVector.coordinate(w, v))
    return a.with_value(v, a.get(v) - c)


def _orbit_within_mass(w: Weights, seeds: list, bound: int) -> set:
    """Close a set of positive vectors under reflections, keeping only
    nonnegative vectors of mass <= bound.

    Complete for roots of mass <= bound: the reflection path from any
    positive root down to a seed is weakly mass-monotone, so its
    reversal never leaves the mass bound.
    """
    seen = set()
    queue = deque()
    for s in seeds:
        key = s.sort_key()
        if key not in seen and s.mass() <= bound:
            seen.add(key)
            queue.append(s)
    vertices = w.vertices()
    while queue:
        a = queue.popleft()
        for v in vertices:
            b = _reflect_at(w, v, a)
            if not b.is_nonnegative() or b.mass() > bound:
                continue
            key = b.sort_key()
            if key not in seen:
                seen.add(key)
                queue.append(b)
    return seen


def weyl_real_roots(w: Weights, mass_bound: int) -> set:
    """Positive real roots of mass <= bound, as sort_key tuples:
    the reflection orbit of the coordinate vectors."""
    seeds = [DimVector.coordinate(w, v) for v in w.vertices()]
    return _orbit_within_mass(w, seeds, mass_bound)


def fundamental_region(w: Weights, mass_bound: int) -> list:
    """Nonzero positive vectors with connected support and all pairings
    against coordinate vectors <= 0."""
    out = []
    for a in vectors_of_mass_at_most(w, mass_bound):
        if not has_connected_support(w, a):
            continue
        if all(
            pairing(w, a, DimVector.coordinate(w, v)) <= 0 for v in w.vertices()
        ):
            out.append(a)
    return out


def weyl_imaginary_roots(w: Weights, mass_bound: int) -> set:
    """Positive imaginary roots of mass <= bound, as sort_key tuples:
    the reflection orbit of the fundamental region."""
    return _orbit_within_mass(w, fundamental_region(w, mass_bound), mass_bound)


def dominance_leq(p: tuple, q: tuple) -> bool:
    """Partition dominance: q <= p in dominance order (p dominates q).

    Partitions are given as non-increasing tuples of equal total.
    """
    if sum(p) != sum(q):
        return False
    pp = list(p) + [0] * max(0, len(q) - len(p))
    qq = list(q) + [0] * max(0, len(p) - len(q))
    acc_p = acc_q = 0
    for x, y in zip(pp, qq):
        acc_p += x
        acc_q += y
        if acc_q > acc_p:
            return False
    return True


def partitions_of(n: int, largest: int = None) -> Iterator[tuple]:
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def brute_force_decompositions(alpha: DimVector, parts: list) -> set:
    """All multisets of the given parts summing to alpha, by counting.

    Independent of the solver's DFS: loops over all count vectors
    bounded by componentwise division.
    """
    caps = []
    comps_a = alpha.components()
    for b in parts:
        comps_b = b.components()
        cap = min(
            (x // y) for x, y in zip(comps_a, comps_b) if y > 0
        )
        caps.append(cap)
    results = set()
    for counts in product(*(range(c + 1) for c in caps)):
        if not any(counts):
            continue
        total = [0] * len(comps_a)
        for count, b in zip(counts, parts):
            for idx, y in enumerate(b.components()):
                total[idx] += count * y
        if total == comps_a:
            multiset = []
            for count, b in zip(counts, parts):
                multiset.extend([b.sort_key()] * count)
            results.add(tuple(sorted(multiset, reverse=True)))
    return results


def triangular_tuple(rng, order: int = 24):
    """A random irreducible 2x2 tuple (A, B, (AB)^-1) with prescribed
    root-of-unity eigenvalues, as (Representation, TypeData), or None.

    A is upper triangular, B lower triangular, and the free entry of B
    is solved from the trace so that (AB)^-1 has the chosen pair of
    eigenvalues (Cayley-Hamilton supplies the annihilation exactly).
    """
    from dsforge.classes import TypeData
    from dsforge.convolution import ConvolutionError, Representation, collapsing_status
    from dsforge.linalg import Matrix, inverse
    from dsforge.scalar import Scalar

    exps = [rng.randrange(order) for _ in range(5)]
    exps.append((-sum(exps)) % order)
    a1, a2, b1, b2, c1, c2 = (Scalar.zeta(order, e) for e in exps)
    t_entry = c1.inv() + c2.inv() - a1 * b1 - a2 * b2
    one, zero = Scalar.one(), Scalar.zero()
    A = Matrix.from_rows([[a1, one], [zero, a2]])
    B = Matrix.from_rows([[b1, zero], [t_entry, b2]])
    C = inverse(A * B)
    rep = Representation([A, B, C])
    t = TypeData([[a1, a2], [b1, b2], [c1, c2]])
    if not rep.has_type(t):
        return None
    if not collapsing_status(rep, t).noncollapsing():
        return None
    return rep, t


def one_dimensional_tuple(rng, k: int = 4, order: int = 24):
    """A noncollapsing 1-dimensional tuple: every generator acts by the
    second eigenvalue of its row, so no row acts by xi_i1."""
    from dsforge.classes import TypeData
    from dsforge.convolution import Representation, collapsing_status
    from dsforge.linalg import Matrix
    from dsforge.scalar import Scalar

    vals = [rng.randrange(order) for _ in range(k - 1)]
    vals.append((-sum(vals)) % order)
    firsts = [rng.randrange(order) for _ in range(k)]
    rows = []
    mats = []
    for first, val in zip(firsts, vals):
        if first == val:
            first = (first + 1) % order
        rows.append([Scalar.zeta(order, first), Scalar.zeta(order, val)])
        mats.append(Matrix.scalar_matrix(1, Scalar.zeta(order, val)))
    rep = Representation(mats)
    t = TypeData(rows)
    if not collapsing_status(rep, t).noncollapsing():
        return None
    return rep, t


def hypergeometric_problem(rng, n: int, order: int = 24):
    """A random rank-n rigid candidate with weights (n, n, 2), or None.

    Two regular semisimple classes and one pseudo-reflection class; the
    dimension vector (n; n-1..1 | n-1..1 | 1) is a strict real root, so
    the instance is rigid exactly when no sub-bracket is 1.
    """
    from dsforge.classes import ClassSpec
    from dsforge.scalar import Scalar
    from dsforge.solver import Problem, decide_rigid

    a = rng.sample(range(order), n)
    b = rng.sample(range(order), n)
    c1 = rng.randrange(order)
    c2 = (-(sum(a) + sum(b) + (n - 1) * c1)) % order
    if c2 == c1:
        return None
    dims_big = tuple(range(n, 0, -1))
    classes = [
        ClassSpec([Scalar.zeta(order, e) for e in a], dims_big),
        ClassSpec([Scalar.zeta(order, e) for e in b], dims_big),
        ClassSpec([Scalar.zeta(order, c1), Scalar.zeta(order, c2)], (n, 1)),
    ]
    p = Problem(classes)
    if not decide_rigid(p).answer:
        return None
    return p
