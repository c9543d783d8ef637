"""Finite subgroups of Q^x / (Q^x)^4 and the group H attached to a diagonal quartic."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, TYPE_CHECKING

from .arith import Rational, factor

if TYPE_CHECKING:
    from .surface import Surface


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class FourthPowerClass:
    """Class of a nonzero rational modulo fourth powers.

    ``sign`` is 0 or 1; ``exponents`` holds sorted ``(prime, e)`` pairs with
    ``e`` in {1, 2, 3}.
    """

    sign: int = 0
    exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        cleaned = tuple(sorted((p, e % 4) for p, e in self.exponents if e % 4))
        object.__setattr__(self, "sign", self.sign % 2)
        object.__setattr__(self, "exponents", cleaned)

    def __mul__(self, other: "FourthPowerClass") -> "FourthPowerClass":
        merged = dict(self.exponents)
        for p, e in other.exponents:
            merged[p] = merged.get(p, 0) + e
        return FourthPowerClass(self.sign + other.sign, tuple(merged.items()))

    def inverse(self) -> "FourthPowerClass":
        return FourthPowerClass(self.sign, tuple((p, -e) for p, e in self.exponents))

    def __pow__(self, n: int) -> "FourthPowerClass":
        return FourthPowerClass(self.sign * n, tuple((p, e * n) for p, e in self.exponents))

    @property
    def is_identity(self) -> bool:
        return self.sign == 0 and not self.exponents

    def order(self) -> int:
        n = 1
        while not (self**n).is_identity:
            n += 1
        return n

    def representative(self) -> int:
        """Smallest-magnitude integer in the class with exponents in 0..3."""
        value = -1 if self.sign else 1
        for p, e in self.exponents:
            value *= p**e
        return value

    def __str__(self) -> str:
        return str(self.representative())


IDENTITY = FourthPowerClass()
MINUS_ONE = FourthPowerClass(1)
FOUR = FourthPowerClass(0, ((2, 2),))


def class_of(a: Rational) -> FourthPowerClass:
    fr = factor(a)
    return FourthPowerClass(0 if fr.sign > 0 else 1, tuple(fr.factors.items()))


@dataclass(frozen=True)
class ClassSubgroup:
    generators: tuple[FourthPowerClass, ...]
    elements: frozenset[FourthPowerClass]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, c: FourthPowerClass) -> bool:
        return c in self.elements


def subgroup_closure(gens: Iterable[FourthPowerClass], cap: int = 256) -> ClassSubgroup:
    """Breadth-first closure of ``gens``; raises CapExceeded beyond ``cap`` elements."""
    if cap < 1:
        raise ValueError("cap must be positive")
    gens = tuple(gens)
    seen = {IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"subgroup has more than {cap} elements")
                queue.append(y)
    # every generator has finite order, so products alone already give inverses
    return ClassSubgroup(gens, frozenset(seen))


def h_generators(a: Sequence[int], all_ratios: bool = True) -> list[FourthPowerClass]:
    gens = [MINUS_ONE, FOUR]
    if all_ratios:
        pairs = [(i, j) for i in range(4) for j in range(4) if i != j]
    else:
        pairs = [(i, 0) for i in range(1, 4)]
    for i, j in pairs:
        gens.append(class_of(a[i]) * class_of(a[j]).inverse())
    return gens


def h_group(X: "Surface | Sequence[int]") -> ClassSubgroup:
    a = X.a if hasattr(X, "a") else tuple(X)
    return subgroup_closure(h_generators(a), cap=256)


def meets_235(H: ClassSubgroup) -> bool:
    return any(class_of(n) in H for n in (2, 3, 5))
