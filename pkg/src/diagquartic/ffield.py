"""Prime-field kernels: quartic residue classes and point enumeration on diagonal forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

Point = tuple[int, ...]


@dataclass(frozen=True)
class _Tables:
    p: int
    roots4: tuple[tuple[int, ...], ...]
    roots2: tuple[tuple[int, ...], ...]
    is_square: tuple[bool, ...]
    class_rep: tuple[int, ...]
    reps: tuple[int, ...]


@lru_cache(maxsize=None)
def tables(p: int) -> _Tables:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"need an odd prime, got {p}")
    roots4: list[list[int]] = [[] for _ in range(p)]
    roots2: list[list[int]] = [[] for _ in range(p)]
    for x in range(p):
        roots4[pow(x, 4, p)].append(x)
        roots2[x * x % p].append(x)
    fourth_powers = sorted({pow(x, 4, p) for x in range(1, p)})
    class_rep = [0] * p
    for x in range(1, p):
        class_rep[x] = min(x * t % p for t in fourth_powers)
    return _Tables(
        p=p,
        roots4=tuple(tuple(r) for r in roots4),
        roots2=tuple(tuple(r) for r in roots2),
        is_square=tuple(bool(r) and v != 0 for v, r in enumerate(roots2)),
        class_rep=tuple(class_rep),
        reps=tuple(sorted(set(class_rep[1:]))),
    )


def quartic_class_reps(p: int) -> list[int]:
    """Least representative of each coset of fourth powers in F_p^x, ascending."""
    return list(tables(p).reps)


def iter_diagonal_points(p: int, coeffs: Sequence[int], degree: int = 4) -> Iterator[Point]:
    """Projective zeros of sum c_i x_i^degree over F_p, last nonzero coordinate 1.

    Within each block of points sharing the position of the last nonzero
    coordinate, one free coordinate is solved through a root table, so the
    cost is p^(n-2) per block instead of p^(n-1).
    """
    t = tables(p)
    roots = t.roots4 if degree == 4 else t.roots2
    c = [x % p for x in coeffs]
    n = len(c)
    powers = [pow(x, degree, p) for x in range(p)]
    for k in range(n - 1, -1, -1):
        tail = (1,) + (0,) * (n - 1 - k)
        solvable = [i for i in range(k) if c[i]]
        if not solvable:
            for head in itertools.product(range(p), repeat=k):
                if (sum(c[i] * powers[x] for i, x in enumerate(head)) + c[k]) % p == 0:
                    yield head + tail
            continue
        s = solvable[-1]
        inv = pow(c[s], -1, p)
        others = [i for i in range(k) if i != s]
        for vals in itertools.product(range(p), repeat=len(others)):
            rest = c[k] + sum(c[i] * powers[x] for i, x in zip(others, vals))
            target = (-rest * inv) % p
            for r in roots[target]:
                head = list(vals)
                head.insert(s, r)
                yield tuple(head) + tail


def has_diagonal_point(p: int, coeffs: Sequence[int], degree: int = 4, smooth_only: bool = False) -> bool:
    for pt in iter_diagonal_points(p, coeffs, degree):
        if not smooth_only or is_smooth_point(p, coeffs, pt):
            return True
    return False


def is_smooth_point(p: int, coeffs: Sequence[int], pt: Point) -> bool:
    # partial derivatives 4 a_i x_i^3; 4 is a unit for odd p
    return any(c % p and x % p for c, x in zip(coeffs, pt))


@dataclass(frozen=True)
class DiagonalCurve:
    p: int
    b: tuple[int, int, int]

    def __post_init__(self):
        b = tuple(x % self.p for x in self.b)
        if len(b) != 3 or not all(b):
            raise ValueError(f"curve coefficients must be nonzero mod {self.p}: {self.b}")
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class ResidueForm:
    p: int
    c: tuple[int, ...]

    def __post_init__(self):
        c = tuple(x % self.p for x in self.c)
        if not any(c):
            raise ValueError("residue form is identically zero")
        object.__setattr__(self, "c", c)

    def __call__(self, x: Sequence[int]) -> int:
        return sum(ci * xi * xi for ci, xi in zip(self.c, x)) % self.p


class BothValues(NamedTuple):
    takes_square: bool
    takes_nonsquare: bool

    @property
    def both(self) -> bool:
        return self.takes_square and self.takes_nonsquare


def curve_points(C: DiagonalCurve) -> list[Point]:
    return sorted(iter_diagonal_points(C.p, C.b))


def surface_points(p: int, a: Sequence[int], smooth_only: bool = False) -> list[Point]:
    if not any(x % p for x in a):
        raise ValueError("all coefficients vanish mod p")
    pts = iter_diagonal_points(p, a)
    if smooth_only:
        pts = (pt for pt in pts if is_smooth_point(p, a, pt))
    return sorted(pts)


def conic_point(p: int, c: Sequence[int], prefer_nonzero: bool = True) -> Point:
    """First zero of c1*Y1^2 + c2*Y2^2 + c3*Y3^2 in scan order.

    With ``prefer_nonzero`` the first zero with no vanishing coordinate wins
    when one exists.
    """
    if any(x % p == 0 for x in c):
        raise ValueError("conic coefficients must be nonzero mod p")
    first = None
    for pt in iter_diagonal_points(p, c, degree=2):
        if first is None:
            first = pt
            if not prefer_nonzero:
                return pt
        if all(pt):
            return pt
    if first is None:
        raise AssertionError(f"smooth conic without points over F_{p}")
    return first


def tangent_residue_form(p: int, c: Sequence[int], pt: Sequence[int]) -> ResidueForm:
    if sum(ci * y * y for ci, y in zip(c, pt)) % p:
        raise ValueError(f"{tuple(pt)} is not on the conic {tuple(c)} mod {p}")
    return ResidueForm(p, tuple(ci * y for ci, y in zip(c, pt)))


def fermat_equivalent(C: DiagonalCurve) -> bool:
    p = C.p
    rep = tables(p).class_rep
    inv = pow(C.b[0], -1, p)
    return rep[C.b[1] * inv % p] == 1 and rep[C.b[2] * inv % p] == 1


def both_values(C: DiagonalCurve, f: ResidueForm) -> BothValues:
    if f.p != C.p:
        raise ValueError("curve and form live over different primes")
    sq = tables(C.p).is_square
    square = nonsquare = False
    for pt in iter_diagonal_points(C.p, C.b):
        v = f(pt)
        if v == 0:
            continue
        if sq[v]:
            square = True
        else:
            nonsquare = True
        if square and nonsquare:
            break
    return BothValues(square, nonsquare)


def canonical_class(p: int, coeffs: Sequence[int]) -> tuple[int, ...]:
    """Least sorted tuple of quartic-class representatives over all scalings."""
    rep = tables(p).class_rep
    return min(tuple(sorted(rep[lam * b % p] for b in coeffs)) for lam in range(1, p))


def canonical_curve_class(C: DiagonalCurve) -> tuple[int, int, int]:
    return canonical_class(C.p, C.b)


def pointless_quartic_curves(p: int) -> set[tuple[int, int, int]]:
    out = set()
    reps = quartic_class_reps(p)
    for a2 in reps:
        for a3 in reps:
            C = DiagonalCurve(p, (1, a2, a3))
            if not has_diagonal_point(p, C.b):
                out.add(canonical_curve_class(C))
    return out


class CoverCheck(NamedTuple):
    curve: DiagonalCurve
    has_points: bool
    conic_point: Point | None
    form: ResidueForm | None
    values: BothValues | None
    fallback: bool


def cover_check(C: DiagonalCurve) -> CoverCheck:
    """Both-values test for the tangent form built from the first conic point."""
    if not has_diagonal_point(C.p, C.b):
        return CoverCheck(C, False, None, None, None, False)
    pt = conic_point(C.p, C.b, prefer_nonzero=True)
    f = tangent_residue_form(C.p, C.b, pt)
    return CoverCheck(C, True, pt, f, both_values(C, f), not all(pt))


class PatchedValues(NamedTuple):
    values: BothValues
    unresolved: int


def patched_values(C: DiagonalCurve) -> PatchedValues:
    """Quadratic character of the tangent forms, patched across all conic points.

    Any two tangent forms differ on C by a constant times a square, so their
    characters agree up to a fixed sign wherever both are nonzero. Gluing them
    gives a function on all of C(F_p) that does not depend on the chosen point.
    """
    p = C.p
    sq = tables(p).is_square
    pts = curve_points(C)
    if not pts:
        return PatchedValues(BothValues(False, False), 0)

    def chi(v: int) -> int:
        return 0 if v == 0 else (1 if sq[v] else -1)

    rows = [[chi(tangent_residue_form(p, C.b, P)(q)) for q in pts] for P in iter_diagonal_points(p, C.b, 2)]
    rows.sort(key=lambda r: -sum(1 for v in r if v))
    signs = {0: 1}
    pending = set(range(1, len(rows)))
    progress = True
    while pending and progress:
        progress = False
        for j in sorted(pending):
            for i, s in list(signs.items()):
                common = next((k for k in range(len(pts)) if rows[i][k] and rows[j][k]), None)
                if common is not None:
                    signs[j] = s * rows[i][common] * rows[j][common]
                    pending.discard(j)
                    progress = True
                    break
    glued: list[int | None] = [None] * len(pts)
    for j, s in signs.items():
        for k, v in enumerate(rows[j]):
            if v:
                w = s * v
                if glued[k] is not None and glued[k] != w:
                    raise AssertionError(f"tangent forms disagree at {pts[k]} over F_{p}")
                glued[k] = w
    values = BothValues(1 in glued, -1 in glued)
    return PatchedValues(values, sum(1 for g in glued if g is None))


def lifts_to_curve(p: int, P: Sequence[int]) -> bool:
    """Whether the conic point P is (Q_1^2, Q_2^2, Q_3^2) for some curve point Q."""
    sq = tables(p).is_square
    nz = [y % p for y in P if y % p]
    lam_ok = [all(sq[y * lam % p] for y in nz) for lam in range(1, p)]
    return any(lam_ok)
