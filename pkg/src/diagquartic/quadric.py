"""Points on the quadric sum a_i Y_i^2 = 0 and the tangent form f = sum a_i y_i X_i^2."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

from .arith import REAL, Place, gcd_all, hilbert_symbol, is_square_in_completion, primes_dividing
from .surface import Surface


class NotFoundWithinBound(LookupError):
    pass


class NoRealPoint(ValueError):
    pass


class NoQuadricPoint(NotFoundWithinBound):
    """The quadric is insoluble at some place, so no search bound would help."""


@dataclass(frozen=True)
class QuadricPoint:
    y: tuple[int, int, int, int]

    def __post_init__(self):
        y = tuple(int(v) for v in self.y)
        if len(y) != 4 or not any(y):
            raise ValueError("need a nonzero quadruple")
        object.__setattr__(self, "y", y)

    def primitive(self) -> "QuadricPoint":
        g = gcd_all(self.y)
        return QuadricPoint(tuple(v // g for v in self.y))

    def on(self, X: Surface) -> bool:
        return X.quadric(self.y) == 0

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.y)) + "]"


@dataclass(frozen=True)
class QuadraticForm:
    b: tuple[int, int, int, int]

    def __post_init__(self):
        b = tuple(int(v) for v in self.b)
        if len(b) != 4 or not any(b):
            raise ValueError("quadratic form must be nonzero")
        object.__setattr__(self, "b", b)

    def __call__(self, x: Sequence[int]) -> int:
        return sum(bi * xi * xi for bi, xi in zip(self.b, x))

    def normalized(self) -> "QuadraticForm":
        g = gcd_all(self.b)
        return QuadraticForm(tuple(v // g for v in self.b))

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.b)) + ")"


def _iter_points(a: Sequence[int], bound: int) -> Iterator[QuadricPoint]:
    """Primitive solutions with nonnegative coordinates, by max-norm then lexicographically."""
    left: dict[int, list[tuple[int, int]]] = defaultdict(list)
    right: dict[int, list[tuple[int, int]]] = defaultdict(list)
    a0, a1, a2, a3 = a
    for h in range(bound + 1):
        rim = [(h, t) for t in range(h + 1)] + [(t, h) for t in range(h)]
        new_left = [((u * u * a0 + v * v * a1), (u, v)) for u, v in rim]
        new_right = [(-(u * u * a2 + v * v * a3), (u, v)) for u, v in rim]
        for key, pair in new_left:
            left[key].append(pair)
        for key, pair in new_right:
            right[key].append(pair)
        found = set()
        for key, pair in new_left:
            for other in right.get(key, ()):
                found.add(pair + other)
        for key, pair in new_right:
            for other in left.get(key, ()):
                found.add(other + pair)
        for y in sorted(found):
            if any(y) and gcd_all(y) == 1:
                yield QuadricPoint(y)


def quadric_isotropic_at(a: Sequence[int], v: Place) -> bool:
    """Diagonal quaternary forms are anisotropic exactly when the discriminant is a
    square and the Hasse invariant differs from (-1,-1)."""
    if v.is_real:
        return min(a) < 0 < max(a)
    if not is_square_in_completion(a[0] * a[1] * a[2] * a[3], v):
        return True
    c = 1
    for i in range(4):
        for j in range(i + 1, 4):
            c *= hilbert_symbol(a[i], a[j], v)
    return c == hilbert_symbol(-1, -1, v)


def quadric_obstruction(a: Sequence[int]) -> Place | None:
    for v in [REAL] + [Place(p) for p in sorted({2, *primes_dividing(*a)})]:
        if not quadric_isotropic_at(a, v):
            return v
    return None


def find_points(X: Surface, count: int = 1, avoid: int | None = None, height_bound: int = 10_000) -> list[QuadricPoint]:
    """The first ``count`` admissible points in search order."""
    if height_bound < 1:
        raise ValueError("height_bound must be positive")
    if min(X.a) > 0 or max(X.a) < 0:
        raise NoRealPoint(f"{X} has no real points on its quadric")
    bad = quadric_obstruction(X.a)
    if bad is not None:
        raise NoQuadricPoint(f"the quadric of {X} has no points over the completion at {bad}")
    out = []
    for P in _iter_points(X.a, height_bound):
        if avoid is not None and all(v % avoid == 0 for v in P.y[1:]):
            continue
        out.append(P)
        if len(out) == count:
            return out
    if out:
        return out
    raise NotFoundWithinBound(f"no point of height <= {height_bound}; try a larger bound")


def find_point(X: Surface, avoid: int | None = None, height_bound: int = 10_000) -> QuadricPoint:
    return find_points(X, 1, avoid, height_bound)[0]


def tangent_form(X: Surface, P: QuadricPoint) -> QuadraticForm:
    if not P.on(X):
        raise ValueError(f"{P} is not on the quadric of {X}")
    return QuadraticForm(tuple(a * y for a, y in zip(X.a, P.y))).normalized()


def pullback(g: QuadraticForm) -> QuadraticForm:
    # phi: Y_i = X_i^2 turns the linear form into the same coefficients on X_i^2
    return QuadraticForm(g.b)
