"""Real and p-adic solubility, Hensel lifting, and residue-disk search trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, inf
from typing import Iterator, Sequence

from .arith import REAL, Place, int_valuation
from .ffield import is_smooth_point, surface_points
from .surface import Surface, bad_primes


class NonSmoothResidue(ValueError):
    pass


@dataclass(frozen=True)
class PadicPoint:
    """Integer coordinates representing a p-adic point to precision p^k."""

    p: int
    coords: tuple[int, int, int, int]
    precision: int
    smooth_index: int | None = None

    @property
    def primitive(self) -> bool:
        return any(x % self.p for x in self.coords)

    def residue(self) -> tuple[int, ...]:
        return tuple(x % self.p for x in self.coords)


@dataclass(frozen=True)
class SolubilityCertificate:
    p: int
    soluble: bool
    point: PadicPoint | None = None
    search_depth: int = 0
    nodes: int = 0

    def __str__(self) -> str:
        if self.soluble:
            return f"Soluble({list(self.point.coords)} mod {self.p}^{self.point.precision})"
        return f"Insoluble(depth {self.search_depth})"


def completeness_depth(p: int) -> int:
    return 2 * (int_valuation(4, p) + 3) + 1


def real_soluble(X: Surface) -> bool:
    return min(X.a) < 0 < max(X.a)


# ---------------------------------------------------------------------------
# Lazy-digit disk arithmetic
#
# A disk is a tuple of integer residues r_i known modulo p^d_i (d_i = None
# means the coordinate is exact).  For a monomial c*x^n the variation over
# the disk has valuation at least v(c) + min_k [v(C(n,k)) + (n-k) v(r) + k d].


@lru_cache(maxsize=None)
def _binom_vals(p: int, n: int) -> tuple[int, ...]:
    return tuple(int_valuation(comb(n, k), p) for k in range(n + 1))


def term_precision(p: int, vc: float, n: int, r: int, d: int | None) -> float:
    if d is None or vc == inf:
        return inf
    bv = _binom_vals(p, n)
    vr = int_valuation(r, p)
    if vr == inf:
        return vc + n * d
    return vc + min(bv[k] + (n - k) * vr + k * d for k in range(1, n + 1))


def hensel_data(coeffs: Sequence[int], p: int, r: Sequence[int]) -> tuple[float, int | None]:
    """(e, i): least valuation of 4 a_i r_i^3 and the first index achieving it."""
    best, arg = inf, None
    for i, (a, x) in enumerate(zip(coeffs, r)):
        if x:
            v = int_valuation(4 * a * x**3, p)
            if v < best:
                best, arg = v, i
    return best, arg


@dataclass
class Disk:
    r: list[int]
    d: list[int | None]

    def child(self, i: int, t: int, p: int) -> "Disk":
        r = list(self.r)
        d = list(self.d)
        r[i] += t * p ** d[i]
        d[i] += 1
        return Disk(r, d)

    def children(self, i: int, p: int) -> Iterator["Disk"]:
        for t in range(p):
            yield self.child(i, t, p)


class QuarticOnDisk:
    """Evaluation of F = sum a_i x_i^4 with guaranteed precision on a disk."""

    def __init__(self, X: Surface, p: int):
        self.X = X
        self.p = p
        self.vc = [int_valuation(a, p) for a in X.a]

    def term_precisions(self, disk: Disk) -> list[float]:
        return [term_precision(self.p, vc, 4, r, d) for vc, r, d in zip(self.vc, disk.r, disk.d)]

    def value(self, disk: Disk) -> int:
        return self.X.F(disk.r)


def root_disks(p: int) -> list[Disk]:
    """Cover of primitive points: the last unit coordinate is fixed to 1."""
    out = []
    for j in range(3, -1, -1):
        r = [0, 0, 0, 0]
        r[j] = 1
        d: list[int | None] = [0 if i < j else 1 for i in range(4)]
        d[j] = None
        out.append(Disk(r, d))
    return out


def residue_root(p: int, residue: Sequence[int]) -> Disk:
    """Disk of primitive points reducing to ``residue`` (scaled so its last unit is 1)."""
    res = [x % p for x in residue]
    nz = [i for i, x in enumerate(res) if x]
    if not nz:
        raise ValueError("zero residue tuple")
    j = nz[-1]
    inv = pow(res[j], -1, p)
    r = [x * inv % p for x in res]
    d: list[int | None] = [1, 1, 1, 1]
    d[j] = None
    return Disk(r, d)


def _pick_coordinate(disk: Disk, precs: list[float]) -> int:
    free = [i for i, d in enumerate(disk.d) if d is not None]
    return min(free, key=lambda i: (precs[i], disk.d[i], i))


def search_disks(X: Surface, p: int, roots: Sequence[Disk], max_nodes: int | None = None):
    """Depth-first search for a Hensel-certified point; returns (point | None, nodes, complete)."""
    Fd = QuarticOnDisk(X, p)
    kmax = completeness_depth(p)
    nodes = 0
    stack = list(reversed(roots))
    while stack:
        disk = stack.pop()
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            return None, nodes, False
        precs = Fd.term_precisions(disk)
        prec = min(min(precs), kmax)
        val = Fd.value(disk)
        if val % p**prec:
            continue
        e, i = hensel_data(X.a, p, disk.r)
        vF = int_valuation(val, p)
        if vF >= 2 * e + 1:
            k = vF if vF != inf else kmax
            return PadicPoint(p, tuple(disk.r), int(k), i), nodes, True
        if prec >= kmax:
            raise AssertionError("node at completeness depth without a Hensel certificate")
        c = _pick_coordinate(disk, precs)
        stack.extend(reversed(list(disk.children(c, p))))
    return None, nodes, True


def qp_soluble(X: Surface, p: int) -> SolubilityCertificate:
    point, nodes, _ = search_disks(X, p, root_disks(p))
    if point is None:
        return SolubilityCertificate(p, False, None, completeness_depth(p), nodes)
    return SolubilityCertificate(p, True, point, completeness_depth(p), nodes)


@dataclass
class LocalSolubility:
    result: bool
    witnesses: dict[Place, object]
    skipped: dict[int, str] = field(default_factory=dict)

    @property
    def failing(self) -> list[Place]:
        return [v for v, w in self.witnesses.items() if not _witness_ok(w)]


def _witness_ok(w) -> bool:
    return w if isinstance(w, bool) else w.soluble


WEIL_NOTE = "good reduction and p >= 23: the Weil bound gives a smooth F_p-point, which lifts"


def checked_places(X: Surface) -> list[Place]:
    primes = sorted({2, *range(3, 20, 2), *bad_primes(X)} - {9, 15})
    return [REAL] + [Place(p) for p in primes]


def everywhere_locally_soluble(X: Surface) -> LocalSolubility:
    witnesses: dict[Place, object] = {REAL: real_soluble(X)}
    for v in checked_places(X)[1:]:
        witnesses[v] = qp_soluble(X, v.p)
    result = all(_witness_ok(w) for w in witnesses.values())
    return LocalSolubility(result, witnesses, {23: WEIL_NOTE})


# ---------------------------------------------------------------------------
# Lifting


def hensel_lift(X: Surface, p: int, r: Sequence[int], k: int, index: int | None = None) -> PadicPoint:
    """Newton iteration on one coordinate; needs v(F(r)) >= 2e+1 for that coordinate."""
    x = list(r)
    e, i = hensel_data(X.a, p, x)
    if index is not None:
        i = index
        e = int_valuation(4 * X.a[i] * x[i] ** 3, p)
    if i is None or e == inf:
        raise NonSmoothResidue("no coordinate with finite derivative valuation")
    vF = int_valuation(X.F(x), p)
    if vF < 2 * e + 1:
        raise NonSmoothResidue(f"Hensel criterion fails: v(F) = {vF}, e = {e}")
    mod = p ** (k + 2 * e + 2)
    while True:
        val = X.F(x)
        vF = int_valuation(val, p)
        if vF >= k:
            break
        deriv = 4 * X.a[i] * x[i] ** 3
        unit = deriv // p**e
        step = (val // p**e) * pow(unit, -1, mod) % mod
        x[i] = (x[i] - step) % mod
    return PadicPoint(p, tuple(x), int(k), i)


def lift_residue_point(X: Surface, p: int, Qt: Sequence[int], k: int) -> PadicPoint:
    if p == 2:
        raise ValueError("residue lifting is for odd p")
    res = tuple(x % p for x in Qt)
    if X.F(res) % p:
        raise ValueError(f"{res} is not on the reduction mod {p}")
    if not is_smooth_point(p, X.a, res):
        raise NonSmoothResidue(f"{res} is a singular point of the reduction mod {p}")
    i = next(i for i, (a, x) in enumerate(zip(X.a, res)) if a % p and x)
    return hensel_lift(X, p, res, k, index=i)


@dataclass
class ResidueDisks:
    p: int
    smooth: list[tuple[int, ...]]
    singular: list[tuple[int, ...]]
    singular_empty: dict[tuple[int, ...], bool]


def disk_has_points(X: Surface, p: int, residue: Sequence[int]) -> bool:
    point, _, _ = search_disks(X, p, [residue_root(p, residue)])
    return point is not None


def residue_disks(X: Surface, p: int) -> ResidueDisks:
    if p == 2:
        raise ValueError("residue disks are classified for odd p")
    pts = surface_points(p, [a % p for a in X.a])
    smooth = [q for q in pts if is_smooth_point(p, X.a, q)]
    singular = [q for q in pts if not is_smooth_point(p, X.a, q)]
    return ResidueDisks(p, smooth, singular, {q: not disk_has_points(X, p, q) for q in singular})
