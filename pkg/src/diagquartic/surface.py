"""Diagonal quartic surfaces a0*X0^4 + a1*X1^4 + a2*X2^4 + a3*X3^4 = 0 over Q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .arith import FactoredRational, Rational, as_fraction, factor, gcd_all, primes_dividing, valuation
from .ffield import DiagonalCurve, fermat_equivalent

SPECIAL_PRIMES = frozenset({7, 11, 17, 41})


@dataclass(frozen=True)
class Surface:
    a: tuple[int, int, int, int]
    theta: FactoredRational = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if len(a) != 4 or 0 in a:
            raise ValueError(f"need four nonzero integer coefficients, got {self.a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", factor(a[0] * a[1] * a[2] * a[3]))

    def F(self, x: Sequence[int]) -> int:
        return sum(ai * xi**4 for ai, xi in zip(self.a, x))

    def quadric(self, y: Sequence[int]) -> int:
        return sum(ai * yi * yi for ai, yi in zip(self.a, y))

    @property
    def theta_value(self) -> int:
        return self.a[0] * self.a[1] * self.a[2] * self.a[3]

    def is_normalized(self) -> bool:
        return normalize(self.a) == self

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.a) + ")"


def normalize(raw: Sequence[Rational]) -> Surface:
    """Equivalent integral, coprime, fourth-power-free model; coefficient order is kept."""
    if len(raw) != 4:
        raise ValueError("need exactly four coefficients")
    vals = [as_fraction(x) for x in raw]
    if any(v == 0 for v in vals):
        raise ValueError("coefficients must be nonzero")
    reduced = []
    for v in vals:
        fr = factor(v)
        n = fr.sign
        for p, e in fr.factors.items():
            n *= p ** (e % 4)
        reduced.append(n)
    g = gcd_all(reduced)
    return Surface(tuple(n // g for n in reduced))


@dataclass(frozen=True)
class ReductionType:
    kind: str  # Smooth | Cone | FourPlanes | QuadruplePlane | UnclassifiedEven
    vanishing: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.vanishing:
            return f"{self.kind}({','.join(map(str, self.vanishing))})"
        return self.kind


_KINDS = {0: "Smooth", 1: "Cone", 2: "FourPlanes", 3: "QuadruplePlane"}


def reduction_type(X: Surface, p: int) -> ReductionType:
    if p == 2:
        return ReductionType("UnclassifiedEven", tuple(i for i, a in enumerate(X.a) if a % 2 == 0))
    vanishing = tuple(i for i, a in enumerate(X.a) if a % p == 0)
    if len(vanishing) == 4:
        raise ValueError("all coefficients divisible by p: surface is not normalized")
    return ReductionType(_KINDS[len(vanishing)], vanishing)


def bad_primes(X: Surface) -> list[int]:
    return sorted({2, *primes_dividing(*X.a)})


def residual_curve(X: Surface, p: int, index: int) -> DiagonalCurve:
    return DiagonalCurve(p, tuple(a % p for i, a in enumerate(X.a) if i != index))


@dataclass(frozen=True)
class Condition4Record:
    p: int
    index: int
    odd_power: bool
    special_ok: bool

    @property
    def qualifies(self) -> bool:
        return self.odd_power and self.special_ok


def condition4_witnesses(X: Surface) -> list[Condition4Record]:
    """Odd primes dividing exactly one coefficient, to an odd power."""
    out = []
    for p in primes_dividing(*X.a):
        if p == 2:
            continue
        hits = [i for i, a in enumerate(X.a) if a % p == 0]
        if len(hits) != 1:
            continue
        i = hits[0]
        if valuation(X.a[i], p) % 2 == 0:
            continue
        special_ok = p not in SPECIAL_PRIMES or not fermat_equivalent(residual_curve(X, p, i))
        out.append(Condition4Record(p, i, True, special_ok))
    return out


@dataclass
class TheoremReport:
    els: bool
    els_witnesses: dict
    h_order: int
    meets_235: bool
    condition4: list[Condition4Record]
    conclusion: str | None = None

    @property
    def qualifying_primes(self) -> list[int]:
        return [r.p for r in self.condition4 if r.qualifies]

    @property
    def all_conditions(self) -> bool:
        return self.els and not self.meets_235 and self.h_order == 256 and bool(self.qualifying_primes)


CONCLUSION = (
    "Br X / Br Q has order 2 and there is no Brauer-Manin obstruction "
    "to the existence of rational points on X"
)


def theorem_conditions(X: Surface) -> TheoremReport:
    from .classgroup import h_group, meets_235
    from .localpoints import everywhere_locally_soluble

    els = everywhere_locally_soluble(X)
    H = h_group(X)
    report = TheoremReport(
        els=els.result,
        els_witnesses=els.witnesses,
        h_order=H.order,
        meets_235=meets_235(H),
        condition4=condition4_witnesses(X),
    )
    if report.all_conditions:
        report.conclusion = CONCLUSION
    return report


def canonical_order(X: Surface) -> tuple[int, ...]:
    """Sort key used only to deduplicate surfaces in searches."""
    return tuple(sorted(X.a, key=lambda a: (abs(a), a < 0)))


def clear_denominators(raw: Sequence[Fraction]) -> list[int]:
    m = lcm(*(as_fraction(x).denominator for x in raw))
    return [int(as_fraction(x) * m) for x in raw]
