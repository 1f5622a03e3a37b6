"""Top-level decision procedures and the constructive rigid algorithm."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import invert, is_prime, mpq

from .classes import (
    ClassSpec,
    TypeData,
    ZetaData,
    validate_class,
    xi_bracket,
    zeta_is_integer,
    zeta_star,
)
from .closure import closure_contains
from .convolution import Representation, convolve, r0_prime, rv_prime
from .linalg import Matrix, rank
from .roots import (
    DimVector,
    Weights,
    classify,
    enumerate_positive_roots_below,
    is_strict,
    iter_box,
    p_form,
    pairing,
    reflect,
)
from .scalar import Scalar, format_scalar, max_field_order


class SolverError(Exception):
    pass


@dataclass(frozen=True)
class Problem:
    """k conjugacy classes of a common size, multiplicative or additive."""

    classes: tuple
    mode: str = "multiplicative"

    def __init__(self, classes: Sequence[ClassSpec], mode: str = "multiplicative"):
        classes = tuple(classes)
        if not classes:
            raise SolverError("a problem needs at least one class")
        if mode not in ("multiplicative", "additive"):
            raise SolverError(f"unknown mode {mode!r}")
        sizes = {c.size for c in classes}
        if len(sizes) != 1:
            raise SolverError(f"classes have different sizes: {sorted(sizes)}")
        for idx, c in enumerate(classes, start=1):
            ok, diagnostics = validate_class(c)
            if not ok:
                raise SolverError(f"class {idx} invalid: " + "; ".join(diagnostics))
            if mode == "multiplicative" and any(x.is_zero() for x in c.type_row):
                raise SolverError(f"class {idx} has eigenvalue 0 in multiplicative mode")
            if mode == "additive" and any(not x.is_rational() for x in c.type_row):
                raise SolverError(f"class {idx} has irrational eigenvalue in additive mode")
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "mode", mode)

    @property
    def k(self) -> int:
        return len(self.classes)

    def weights(self) -> Weights:
        return Weights(tuple(c.d for c in self.classes))

    def type_data(self) -> TypeData:
        if self.mode != "multiplicative":
            raise SolverError("type_data requires a multiplicative problem")
        return TypeData([c.type_row for c in self.classes])

    def zeta_data(self) -> ZetaData:
        if self.mode != "additive":
            raise SolverError("zeta_data requires an additive problem")
        return ZetaData([[x.as_rational() for x in c.type_row] for c in self.classes])

    def dimension_vector(self) -> DimVector:
        return DimVector(self.classes[0].size, [c.dims[1:] for c in self.classes])


@dataclass
class Verdict:
    answer: bool
    reason: str
    decomposition: Optional[tuple] = None
    representation: Optional[Representation] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"answer": "yes" if self.answer else "no", "reason": self.reason}
        if self.decomposition is not None:
            out["decomposition"] = [b.to_json() for b in self.decomposition]
        if self.representation is not None:
            out["matrices"] = self.representation.to_json()["matrices"]
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class DecompositionSearch:
    decompositions: list  # tuples of DimVector, parts in non-increasing order
    limit_hit: bool


def _part_admissible(p: Problem, mode: str, beta: DimVector) -> bool:
    if mode == "multiplicative":
        return xi_bracket(p.type_data(), beta).is_one()
    value = zeta_star(p.zeta_data(), beta)
    if mode == "additive-zero":
        return value == 0
    if mode == "additive-integer":
        if not zeta_is_integer(value):
            return False
        return value == 0 or is_strict(p.weights(), beta)
    raise SolverError(f"unknown decomposition mode {mode!r}")


def enumerate_admissible_decompositions(
    p: Problem, mode: str, limit: Optional[int] = None
) -> DecompositionSearch:
    """All ways to write alpha as a sum of admissible positive roots.

    Parts are canonicalized in non-increasing lexicographic order, so
    each unordered decomposition appears exactly once.  A limit stops
    the search after that many decompositions; hitting it is reported
    separately from exhausting the search space.
    """
    return _decomposition_search(
        p.weights(),
        p.dimension_vector(),
        lambda b: _part_admissible(p, mode, b),
        limit,
    )


def _decomposition_search(
    w: Weights, alpha: DimVector, admissible, limit: Optional[int]
) -> DecompositionSearch:
    parts = [
        b for b, _ in enumerate_positive_roots_below(w, alpha) if admissible(b)
    ]
    parts.sort(key=lambda b: b.sort_key(), reverse=True)
    results: list = []
    limit_hit = False
    dead: set = set()

    def dfs(residual: DimVector, start: int, chosen: list) -> bool:
        # returns False when aborted by the limit
        nonlocal limit_hit
        if residual.is_zero():
            results.append(tuple(chosen))
            if limit is not None and len(results) >= limit:
                limit_hit = True
                return False
            return True
        key = (residual.sort_key(), start)
        if key in dead:
            return True
        found_here = len(results)
        for idx in range(start, len(parts)):
            b = parts[idx]
            if not b.leq(residual):
                continue
            chosen.append(b)
            ok = dfs(residual - b, idx, chosen)
            chosen.pop()
            if not ok:
                return False
        if len(results) == found_here:
            dead.add(key)
        return True

    dfs(alpha, 0, [])
    if limit_hit:
        # the abort may have cut the search before proving exhaustion
        return DecompositionSearch(results, True)
    return DecompositionSearch(results, False)


def decide_closure_multiplicative(p: Problem, construct: bool = True) -> Verdict:
    """Solvability of A_1 ... A_k = 1 with A_i in the class closures."""
    if p.mode != "multiplicative":
        raise SolverError("decide_closure_multiplicative needs a multiplicative problem")
    t = p.type_data()
    alpha = p.dimension_vector()
    if not xi_bracket(t, alpha).is_one():
        return Verdict(False, "determinant obstruction: the bracket of alpha is not 1")
    search = enumerate_admissible_decompositions(p, "multiplicative", limit=1)
    if not search.decompositions:
        return Verdict(False, "no admissible decomposition of alpha into positive roots")
    dec = search.decompositions[0]
    verdict = Verdict(
        True,
        "alpha decomposes into positive roots with bracket 1",
        decomposition=dec,
    )
    if construct:
        verdict.representation, verdict.details = _best_effort_construction(p, dec)
    return verdict


def _best_effort_construction(p: Problem, dec: tuple) -> tuple:
    """Block-diagonal matrices from the rigid pieces of a decomposition.

    Parts outside the rigid set get existence-by-theorem only; in that
    case no matrices are produced and the verdict is unchanged.
    """
    t = p.type_data()
    w = p.weights()
    details: dict = {"construction": "complete"}
    pieces = []
    for b in dec:
        in_s, _ = in_S_xi(w, t, b)
        if not in_s:
            details = {
                "construction": "existence-by-theorem",
                "unconstructed_part": b.to_json(),
            }
            return None, details
        pieces.append(_construct(t, b, False))
    mats = []
    for i in range(p.k):
        mats.append(Matrix.block_diag([piece.mats[i] for piece in pieces]))
    rep = Representation(mats)
    for c, m in zip(p.classes, rep.mats):
        if not closure_contains(c, m):
            raise SolverError("internal error: constructed matrix left the closure")
    return rep, details


def decide_closure_additive(p: Problem) -> Verdict:
    """Solvability of A_1 + ... + A_k = 0 with A_i in the class closures."""
    if p.mode != "additive":
        raise SolverError("decide_closure_additive needs an additive problem")
    z = p.zeta_data()
    alpha = p.dimension_vector()
    if zeta_star(z, alpha) != 0:
        return Verdict(False, "trace obstruction: the additive bracket of alpha is not 0")
    search = enumerate_admissible_decompositions(p, "additive-zero", limit=1)
    if not search.decompositions:
        return Verdict(False, "no admissible decomposition of alpha into positive roots")
    return Verdict(
        True,
        "alpha decomposes into positive roots with additive bracket 0",
        decomposition=search.decompositions[0],
    )


def in_S_xi(w: Weights, t: TypeData, a: DimVector) -> tuple:
    """Membership in the rigid set, with a human-readable explanation."""
    a.require(w)
    if a.is_zero():
        return False, "the zero vector is not a root"
    cls = classify(w, a)
    if cls.tag != "RealRoot" or cls.sign != "positive":
        return False, f"not a positive real root (classified {cls.tag}, {cls.sign})"
    if not cls.strict:
        return False, "not strict"
    if not xi_bracket(t, a).is_one():
        return False, "bracket of the vector is not 1"
    search = _decomposition_search(
        w, a, lambda b: xi_bracket(t, b).is_one(), 2
    )
    for dec in search.decompositions:
        if len(dec) >= 2:
            return False, "a nontrivial bracket-1 decomposition exists"
    return True, "strict real root, bracket 1, no nontrivial decomposition"


def decide_rigid(p: Problem) -> Verdict:
    """Existence of a rigid irreducible solution with exact classes."""
    if p.mode != "multiplicative":
        raise SolverError("decide_rigid needs a multiplicative problem")
    answer, reason = in_S_xi(p.weights(), p.type_data(), p.dimension_vector())
    return Verdict(answer, reason)


def _construct(t: TypeData, alpha: DimVector, reverse_arms: bool) -> Representation:
    """Recursive descent: arm reflections first, then convolution."""
    w = t.weights()
    if alpha == DimVector.coordinate(w, 0):
        return Representation([Matrix.scalar_matrix(1, row[0]) for row in t.rows])
    arm_vertices = [v for v in w.vertices() if v != 0]
    if reverse_arms:
        arm_vertices.reverse()
    for v in arm_vertices:
        if pairing(w, alpha, DimVector.coordinate(w, v)) > 0:
            if xi_bracket(t, DimVector.coordinate(w, v)).is_one():
                raise SolverError(
                    "internal error: descent blocked by an equal eigenvalue pair"
                )
            return _construct(rv_prime(t, v), reflect(w, v, alpha), reverse_arms)
    t_down = r0_prime(t)
    a_down = reflect(w, 0, alpha)
    rep_down = _construct(t_down, a_down, reverse_arms)
    rep, _ = convolve(rep_down, t_down)
    return rep


def construct_rigid(p: Problem, reverse_arms: bool = False) -> Representation:
    """Matrices for the rigid case, verified against every postcondition."""
    verdict = decide_rigid(p)
    if not verdict.answer:
        raise SolverError(f"not a rigid-solvable instance: {verdict.reason}")
    w = p.weights()
    t = p.type_data()
    alpha = p.dimension_vector()
    if p_form(w, alpha) != 0:
        raise SolverError("internal error: rigid vector with p(alpha) != 0")
    rep = _construct(t, alpha, reverse_arms)
    if not rep.has_type(t):
        raise SolverError("internal error: constructed matrices have wrong type")
    if rep.dimension_vector(t) != alpha:
        raise SolverError("internal error: constructed matrices have wrong dimension vector")
    if not rep.is_irreducible():
        raise SolverError("internal error: constructed representation is reducible")
    return rep


def verify_solution(mats: Sequence[Matrix], p: Problem, mode: str = "exact") -> tuple:
    """Check a proposed solution; returns (ok, report lines)."""
    if mode not in ("exact", "closure"):
        raise SolverError(f"unknown verification mode {mode!r}")
    report = []
    mats = list(mats)
    n = p.classes[0].size
    if len(mats) != p.k:
        return False, [f"expected {p.k} matrices, got {len(mats)}"]
    for idx, m in enumerate(mats, start=1):
        if m.rows != n or m.cols != n:
            return False, [f"matrix {idx} is {m.rows}x{m.cols}, expected {n}x{n}"]
    if p.mode == "multiplicative":
        product = Matrix.identity(n)
        for m in mats:
            product = product * m
        if product != Matrix.identity(n):
            report.append("product of the matrices is not the identity")
    else:
        total = Matrix.zeros(n, n)
        for m in mats:
            total = total + m
        if not total.is_zero():
            report.append("sum of the matrices is not zero")
    ok = not report
    if ok:
        report.append("product identity holds" if p.mode == "multiplicative" else "zero-sum identity holds")
    for idx, (c, m) in enumerate(zip(p.classes, mats), start=1):
        if mode == "closure":
            good = closure_contains(c, m)
            report.append(
                f"class {idx}: {'inside' if good else 'outside'} the closure"
            )
            ok = ok and good
            continue
        product = Matrix.identity(n)
        good = True
        for j, xi in enumerate(c.type_row, start=1):
            product = product * (m - Matrix.scalar_matrix(n, xi))
            want = c.dim_at(j)
            have = rank(product)
            if have != want:
                report.append(
                    f"class {idx}: rank of partial product {j} is {have}, expected {want}"
                )
                good = False
                break
        if good:
            report.append(f"class {idx}: exact rank data matches")
        ok = ok and good
    return ok, report


def conjecture_condition(p: Problem) -> dict:
    """The conjectural combinatorial condition; CONJECTURAL, not a verdict."""
    if p.mode != "multiplicative":
        raise SolverError("conjecture_condition needs a multiplicative problem")
    w = p.weights()
    t = p.type_data()
    alpha = p.dimension_vector()
    out = {"status": "CONJECTURAL", "condition_holds": False}
    cls = classify(w, alpha)
    out["alpha_is_positive_root"] = cls.is_root() and cls.sign == "positive"
    out["bracket_is_one"] = xi_bracket(t, alpha).is_one()
    if not (out["alpha_is_positive_root"] and out["bracket_is_one"]):
        return out
    p_alpha = p_form(w, alpha)
    strict_ok = True
    search = enumerate_admissible_decompositions(p, "multiplicative")
    for dec in search.decompositions:
        if len(dec) < 2:
            continue
        if p_alpha <= sum(p_form(w, b) for b in dec):
            strict_ok = False
            break
    out["p_strictly_dominates"] = strict_ok
    out["condition_holds"] = strict_ok
    return out


def _increments(w: Weights, b: DimVector) -> list:
    out = []
    for i, wi in enumerate(w.w, start=1):
        for j in range(1, wi + 1):
            out.append(b.arm_entry(i, j - 1) - b.arm_entry(i, j))
    return out


def _is_positive_multiple(b: DimVector, a: DimVector) -> bool:
    comps_a = a.components()
    comps_b = b.components()
    ratio = None
    for x, y in zip(comps_a, comps_b):
        if x == 0:
            if y != 0:
                return False
            continue
        if y % x != 0:
            return False
        r = y // x
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return ratio is not None and ratio >= 1


def generic_xi(
    w: Weights,
    a: DimVector,
    box_bound: DimVector,
    N_hint: int = 0,
) -> tuple:
    """Roots-of-unity eigenvalues generic over a finite box.

    Returns (TypeData, proof) where the proof records the prime N, the
    exponents, and the exhaustive sweep: within the box, the bracket is
    1 exactly on the positive integer multiples of a.
    """
    a.require(w)
    box_bound.require(w)
    if a.is_zero():
        raise SolverError("the target vector must be nonzero")
    if not a.leq(box_bound):
        raise SolverError("the box must contain the target vector")
    inc_a = _increments(w, a)
    num_positions = len(inc_a)
    bound = max(
        max(abs(x) for x in inc_a),
        max(abs(x) for x in _increments(w, box_bound)),
        N_hint,
        4,
    )
    N = bound + 1
    cap = max_field_order()
    while True:
        while not is_prime(N):
            N += 1
        if N > cap:
            raise SolverError(
                f"no generic exponents found below the field-order cap {cap}"
            )
        pivot = next(idx for idx, x in enumerate(inc_a) if x % N != 0)
        rng = random.Random(repr((tuple(w.w), a.sort_key(), box_bound.sort_key(), N)))
        for _ in range(200):
            m = [rng.randrange(N) for _ in range(num_positions)]
            residue = sum(mi * xi for mi, xi in zip(m, inc_a)) - m[pivot] * inc_a[pivot]
            m[pivot] = int((-residue * invert(inc_a[pivot], N)) % N)
            good = True
            checked = 0
            for b in iter_box(w, box_bound):
                if b.is_zero():
                    continue
                checked += 1
                e = sum(mi * xi for mi, xi in zip(m, _increments(w, b))) % N
                if (e == 0) != _is_positive_multiple(b, a):
                    good = False
                    break
            if good:
                rows = []
                idx = 0
                for wi in w.w:
                    rows.append([Scalar.zeta(N, m[idx + j]) for j in range(wi)])
                    idx += wi
                proof = {
                    "N": N,
                    "exponents": [m[sum(w.w[:i]) : sum(w.w[: i + 1])] for i in range(w.k)],
                    "box": box_bound.to_json(),
                    "vectors_checked": checked,
                }
                return TypeData(rows), proof
        N += 1
