"""Root-system combinatorics of the star-shaped graph.

The graph has a central vertex 0 and, for each weight w_i, an arm of
w_i - 1 vertices [i,1], ..., [i,w_i-1].  Vertices are represented as 0
for the centre and (i, j) with 1-based indices for arm vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence, Union

Vertex = Union[int, tuple]  # 0 or (i, j)


class RootsError(Exception):
    pass


@dataclass(frozen=True)
class Weights:
    w: tuple

    def __init__(self, w: Sequence[int]):
        w = tuple(int(x) for x in w)
        if any(x < 1 for x in w):
            raise RootsError(f"weights must be positive, got {w}")
        object.__setattr__(self, "w", w)

    @property
    def k(self) -> int:
        return len(self.w)

    def vertices(self) -> list:
        vs: list = [0]
        for i, wi in enumerate(self.w, start=1):
            for j in range(1, wi):
                vs.append((i, j))
        return vs

    def neighbours(self, v: Vertex) -> list:
        if v == 0:
            return [(i, 1) for i, wi in enumerate(self.w, start=1) if wi >= 2]
        i, j = v
        out: list = []
        out.append(0 if j == 1 else (i, j - 1))
        if j + 1 <= self.w[i - 1] - 1:
            out.append((i, j + 1))
        return out

    def check_vertex(self, v: Vertex) -> None:
        if v == 0:
            return
        if (
            isinstance(v, tuple)
            and len(v) == 2
            and 1 <= v[0] <= self.k
            and 1 <= v[1] <= self.w[v[0] - 1] - 1
        ):
            return
        raise RootsError(f"unknown vertex {v!r} for weights {self.w}")


@dataclass(frozen=True)
class DimVector:
    """Integer vector on the vertex set: centre component plus arm rows."""

    a0: int
    arms: tuple

    def __init__(self, a0: int, arms: Sequence[Sequence[int]]):
        object.__setattr__(self, "a0", int(a0))
        object.__setattr__(self, "arms", tuple(tuple(int(x) for x in arm) for arm in arms))

    def conforms(self, w: Weights) -> bool:
        return len(self.arms) == w.k and all(
            len(arm) == wi - 1 for arm, wi in zip(self.arms, w.w)
        )

    def require(self, w: Weights) -> None:
        if not self.conforms(w):
            raise RootsError(f"dimension vector shape does not match weights {w.w}")

    def get(self, v: Vertex) -> int:
        if v == 0:
            return self.a0
        i, j = v
        return self.arms[i - 1][j - 1]

    def with_value(self, v: Vertex, value: int) -> "DimVector":
        if v == 0:
            return DimVector(value, self.arms)
        i, j = v
        arms = [list(arm) for arm in self.arms]
        arms[i - 1][j - 1] = value
        return DimVector(self.a0, arms)

    # arm entry with the conventions a_{i,0} = a0 and a_{i,w_i} = 0
    def arm_entry(self, i: int, j: int) -> int:
        if j == 0:
            return self.a0
        if j == len(self.arms[i - 1]) + 1:
            return 0
        return self.arms[i - 1][j - 1]

    def components(self) -> list:
        out = [self.a0]
        for arm in self.arms:
            out.extend(arm)
        return out

    def mass(self) -> int:
        return sum(self.components())

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.components())

    def is_nonpositive(self) -> bool:
        return all(c <= 0 for c in self.components())

    def __add__(self, other: "DimVector") -> "DimVector":
        return DimVector(
            self.a0 + other.a0,
            tuple(
                tuple(x + y for x, y in zip(a, b))
                for a, b in zip(self.arms, other.arms)
            ),
        )

    def __sub__(self, other: "DimVector") -> "DimVector":
        return self + (-other)

    def __neg__(self) -> "DimVector":
        return DimVector(-self.a0, tuple(tuple(-x for x in arm) for arm in self.arms))

    def scale(self, r: int) -> "DimVector":
        return DimVector(r * self.a0, tuple(tuple(r * x for x in arm) for arm in self.arms))

    def leq(self, other: "DimVector") -> bool:
        return all(x <= y for x, y in zip(self.components(), other.components()))

    def sort_key(self) -> tuple:
        return tuple(self.components())

    @staticmethod
    def zero_like(w: Weights) -> "DimVector":
        return DimVector(0, tuple((0,) * (wi - 1) for wi in w.w))

    @staticmethod
    def coordinate(w: Weights, v: Vertex) -> "DimVector":
        return DimVector.zero_like(w).with_value(v, 1)

    def to_json(self) -> dict:
        return {"a0": self.a0, "arms": [list(arm) for arm in self.arms]}

    @staticmethod
    def from_json(data: dict) -> "DimVector":
        return DimVector(data["a0"], data["arms"])


@dataclass(frozen=True)
class RootClass:
    tag: str  # "NotRoot" | "RealRoot" | "ImaginaryRoot"
    sign: str  # "positive" | "negative" | "mixed"
    strict: bool
    in_fundamental_region: bool

    def is_root(self) -> bool:
        return self.tag in ("RealRoot", "ImaginaryRoot")


def pairing(w: Weights, a: DimVector, b: DimVector) -> int:
    """Symmetric bilinear form: 2 on the diagonal, -1 across edges."""
    a.require(w)
    b.require(w)
    total = 2 * a.a0 * b.a0
    for i, wi in enumerate(w.w, start=1):
        for j in range(1, wi):
            total += 2 * a.arm_entry(i, j) * b.arm_entry(i, j)
    # edges: 0 -- [i,1] and [i,j] -- [i,j+1]
    for i, wi in enumerate(w.w, start=1):
        for j in range(1, wi):
            u = a.arm_entry(i, j - 1) * b.arm_entry(i, j)
            u += a.arm_entry(i, j) * b.arm_entry(i, j - 1)
            total -= u
    return total


def q_form(w: Weights, a: DimVector) -> int:
    return pairing(w, a, a) // 2


def p_form(w: Weights, a: DimVector) -> int:
    return 1 - q_form(w, a)


def reflect(w: Weights, v: Vertex, a: DimVector) -> DimVector:
    w.check_vertex(v)
    a.require(w)
    c = pairing(w, a, DimVector.coordinate(w, v))
    return a.with_value(v, a.get(v) - c)


def is_strict(w: Weights, a: DimVector) -> bool:
    """a0 >= a_{i1} >= ... >= a_{i,w_i-1} >= 0 on every arm."""
    a.require(w)
    for i, wi in enumerate(w.w, start=1):
        prev = a.a0
        for j in range(1, wi):
            cur = a.arm_entry(i, j)
            if cur > prev:
                return False
            prev = cur
        if prev < 0:
            return False
    return True


def is_nonstrict_positive_root_shape(w: Weights, a: DimVector) -> bool:
    """Centre 0 and a single run of 1's on one arm."""
    if a.a0 != 0:
        return False
    runs = 0
    for arm in a.arms:
        if all(x == 0 for x in arm):
            continue
        ones = [j for j, x in enumerate(arm) if x == 1]
        if len(ones) != sum(1 for x in arm if x != 0):
            return False
        if ones != list(range(ones[0], ones[-1] + 1)):
            return False
        runs += 1
    return runs == 1


def has_connected_support(w: Weights, a: DimVector) -> bool:
    support = {v for v in w.vertices() if a.get(v) != 0}
    if not support:
        return False
    start = next(iter(support))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in w.neighbours(v):
            if u in support and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == support


def _is_coordinate(a: DimVector) -> bool:
    comps = a.components()
    return sum(comps) == 1 and all(c in (0, 1) for c in comps)


def classify(w: Weights, a: DimVector) -> RootClass:
    """Reflection-descent root test.

    Repeatedly applies reflections that strictly decrease a positive
    vector, terminating at a coordinate vector (real root) or in the
    fundamental region (imaginary root if the support is connected).
    Ties are broken by the fixed vertex order 0, [1,1], [1,2], ...
    """
    a.require(w)
    if a.is_zero():
        raise RootsError("cannot classify the zero vector")

    if a.is_nonnegative():
        sign = "positive"
        b = a
    elif a.is_nonpositive():
        sign = "negative"
        b = -a
    else:
        return RootClass("NotRoot", "mixed", False, False)

    strict = is_strict(w, a)
    in_fr = (
        sign == "positive"
        and has_connected_support(w, a)
        and all(
            pairing(w, a, DimVector.coordinate(w, v)) <= 0 for v in w.vertices()
        )
    )

    order = w.vertices()
    while True:
        if _is_coordinate(b):
            return RootClass("RealRoot", sign, strict, False)
        moved = False
        for v in order:
            c = pairing(w, b, DimVector.coordinate(w, v))
            if c > 0:
                b = b.with_value(v, b.get(v) - c)
                moved = True
                break
        if not moved:
            if has_connected_support(w, b):
                return RootClass("ImaginaryRoot", sign, strict, in_fr)
            return RootClass("NotRoot", sign, strict, False)
        if not b.is_nonnegative():
            return RootClass("NotRoot", sign, strict, False)


def iter_box(w: Weights, bound: DimVector) -> Iterator[DimVector]:
    """All vectors 0 <= b <= bound, lexicographic in component order."""
    bound.require(w)
    comps = bound.components()
    arm_lens = [len(arm) for arm in bound.arms]
    for values in product(*(range(c + 1) for c in comps)):
        arms = []
        idx = 1
        for length in arm_lens:
            arms.append(values[idx : idx + length])
            idx += length
        yield DimVector(values[0], arms)


def enumerate_positive_roots_below(w: Weights, bound: DimVector) -> list:
    """Positive roots b with 0 <= b <= bound, with their classifications."""
    bound.require(w)
    if not bound.is_nonnegative():
        raise RootsError("bound must be componentwise nonnegative")
    out = []
    for b in iter_box(w, bound):
        if b.is_zero():
            continue
        cls = classify(w, b)
        if cls.is_root():
            out.append((b, cls))
    out.sort(key=lambda item: item[0].sort_key())
    return out
