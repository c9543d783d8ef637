"""The quaternion algebra (theta, f/X_i^2), its local invariants, and obstruction verdicts."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (
    REAL,
    FactoredRational,
    Place,
    hilbert_symbol,
    int_valuation,
    is_rational_square,
    is_square_in_completion,
    legendre_symbol,
    primes_dividing,
)
from .localpoints import (
    PadicPoint,
    QuarticOnDisk,
    everywhere_locally_soluble,
    hensel_data,
    hensel_lift,
    root_disks,
    term_precision,
)
from .quadric import NotFoundWithinBound, QuadraticForm, QuadricPoint, find_points, tangent_form
from .surface import Surface, bad_primes, condition4_witnesses

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class PrecisionExhausted(ArithmeticError):
    pass


class ConsistencyFailure(AssertionError):
    pass


@dataclass(frozen=True)
class AzumayaAlgebra:
    surface: Surface
    theta: FactoredRational
    f: QuadraticForm
    source_point: QuadricPoint
    trivial: bool = False

    @property
    def theta_value(self) -> int:
        return self.surface.theta_value


def construct_algebra(X: Surface, P: QuadricPoint) -> AzumayaAlgebra:
    f = tangent_form(X, P)
    return AzumayaAlgebra(X, X.theta, f, P.primitive(), is_rational_square(X.theta_value))


def symbol_value(theta: int, value, v: Place) -> Fraction:
    return ZERO if hilbert_symbol(theta, value, v) == 1 else HALF


def _class_slack(p: int) -> int:
    # a p-adic number is determined up to squares by its leading t+1 digits
    return 3 if p == 2 else 1


# ---------------------------------------------------------------------------
# Point evaluation


@dataclass(frozen=True)
class RealPoint:
    coords: tuple[float, float, float, float]


def _form_precision(p: int, vb: Sequence[float], x: Sequence[int], k: int) -> float:
    return min(term_precision(p, v, 2, xi, k) for v, xi in zip(vb, x))


def _determined(A: AzumayaAlgebra, Q: PadicPoint) -> bool:
    p = Q.p
    vb = [int_valuation(b, p) for b in A.f.b]
    vf = int_valuation(A.f(Q.coords), p)
    return vf + _class_slack(p) <= _form_precision(p, vb, Q.coords, Q.precision)


def refine(A: AzumayaAlgebra, Q: PadicPoint, cap: int = 40) -> PadicPoint:
    """Raise the precision of Q by Newton lifting until f(Q) has a known square class."""
    k = Q.precision
    while not _determined(A, Q):
        if k >= cap or Q.smooth_index is None:
            raise PrecisionExhausted(f"f vanishes to precision {Q.precision} at {Q.coords}")
        k = min(2 * k, cap)
        Q = hensel_lift(A.surface, Q.p, Q.coords, k, index=Q.smooth_index)
    return Q


def invariant_at(
    A: AzumayaAlgebra,
    Q: PadicPoint | RealPoint,
    index: int | None = None,
    method: str = "symbol",
    cap: int = 40,
) -> Fraction:
    """inv_v A(Q); ``index`` selects the denominator X_i (default: first unit coordinate)."""
    if isinstance(Q, RealPoint):
        val = sum(b * x * x for b, x in zip(A.f.b, Q.coords))
        if abs(val) < 1e-9 * max(1.0, *(abs(x) for x in Q.coords)) ** 2:
            raise PrecisionExhausted("f vanishes at this real point to working precision")
        return HALF if A.theta_value < 0 and val < 0 else ZERO
    Q = refine(A, Q, cap)
    p = Q.p
    x = Q.coords
    fq = A.f(x)
    if method == "fast":
        if p == 2 or int_valuation(A.theta_value, p) % 2 == 0 or fq % p == 0:
            raise ValueError("fast path needs odd p, odd v_p(theta) and a unit value of f")
        return ZERO if legendre_symbol(fq, p) == 1 else HALF
    if index is None:
        index = next(i for i, xi in enumerate(x) if xi % p)
    if x[index] % p == 0:
        raise ValueError(f"X_{index} is not a unit at this point")
    return symbol_value(A.theta_value, Fraction(fq, x[index] ** 2), Place(p))


def exact_invariant(A: AzumayaAlgebra, x: Sequence[int], v: Place) -> Fraction:
    """Local invariant at a rational point of X, with f(x) != 0."""
    if A.surface.F(x):
        raise ValueError(f"{tuple(x)} is not on {A.surface}")
    fx = A.f(x)
    if fx == 0:
        raise PrecisionExhausted("f vanishes at this rational point; choose another quadric point")
    return symbol_value(A.theta_value, fx, v)


def rational_point_places(A: AzumayaAlgebra, x: Sequence[int]) -> list[Place]:
    return [REAL] + [Place(p) for p in primes_dividing(2, A.theta_value, A.f(x))]


# ---------------------------------------------------------------------------
# Profiles


@dataclass
class InvariantProfile:
    place: Place
    values: frozenset
    exhaustive: bool
    detail: dict = field(default_factory=dict)

    @property
    def both(self) -> bool:
        return len(self.values) == 2

    def describe(self) -> str:
        vals = ", ".join(str(v) for v in sorted(self.values))
        return f"{self.place}: {{{vals}}}" + ("" if self.exhaustive else " (partial)")


def _sign_of(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Sign of a + b*sqrt(c) for rationals a, b and c >= 0."""
    if b == 0 or c == 0:
        return (a > 0) - (a < 0)
    s = 1 if b > 0 else -1
    if a == 0 or (a > 0) == (s > 0):
        return s if a == 0 else (1 if a > 0 else -1)
    # a and b*sqrt(c) have opposite signs; compare squares
    lhs, rhs = a * a, b * b * c
    if lhs == rhs:
        return 0
    return (1 if a > 0 else -1) if lhs > rhs else s


def real_sign_range(a: Sequence[int], b: Sequence[int]) -> tuple[bool, bool]:
    """Whether sum b_i x_i^2 takes positive / negative values on sum a_i x_i^4 = 0 over R.

    With y_i = x_i^2 the real locus is a cone over a spherical patch on which f
    is linear, so both extremes have closed forms in square roots.
    """
    neg = [i for i, ai in enumerate(a) if ai < 0]
    k = neg[0] if len(neg) == 1 else next(i for i, ai in enumerate(a) if ai > 0)
    rest = [i for i in range(4) if i != k]
    c = {i: Fraction(abs(a[i]), abs(a[k])) for i in rest}
    bk = Fraction(b[k])
    s_pos = sum((Fraction(b[i]) ** 2 / c[i] for i in rest if b[i] > 0), Fraction(0))
    s_neg = sum((Fraction(b[i]) ** 2 / c[i] for i in rest if b[i] < 0), Fraction(0))
    singles = [_sign_of(bk, Fraction(b[i]), 1 / c[i]) for i in rest]
    positive = _sign_of(bk, Fraction(1), s_pos) > 0 if s_pos else any(s > 0 for s in singles)
    negative = _sign_of(bk, Fraction(-1), s_neg) < 0 if s_neg else any(s < 0 for s in singles)
    return positive, negative


def real_profile(A: AzumayaAlgebra) -> InvariantProfile:
    if A.theta_value > 0:
        return InvariantProfile(REAL, frozenset({ZERO}), True, {"reason": "theta > 0"})
    pos, neg = real_sign_range(A.surface.a, A.f.b)
    values = frozenset(v for v, hit in ((ZERO, pos), (HALF, neg)) if hit)
    return InvariantProfile(REAL, values, True, {"f_positive": pos, "f_negative": neg})


@dataclass
class _Form:
    g: QuadraticForm
    vb: list[float]
    shift: Fraction


def _lifted_class(A, p, g: QuadraticForm, x: PadicPoint):
    """Invariant of (theta, g) at a lifted point, or None if not determined."""
    vb = [int_valuation(b, p) for b in g.b]
    e = int_valuation(4 * A.surface.a[x.smooth_index] * x.coords[x.smooth_index] ** 3, p)
    prec = _form_precision(p, vb, x.coords, x.precision - e)
    val = g(x.coords)
    if int_valuation(val, p) + _class_slack(p) > prec:
        return None
    return symbol_value(A.theta_value, val, Place(p))


def certified_nodes(X: Surface, p: int, limit: int, max_nodes: int = 20_000) -> list[PadicPoint]:
    """Hensel-certified points from distinct branches of the solubility tree."""
    Fd = QuarticOnDisk(X, p)
    out: list[PadicPoint] = []
    stack = list(reversed(root_disks(p)))
    nodes = 0
    while stack and len(out) < limit and nodes < max_nodes:
        disk = stack.pop()
        nodes += 1
        precs = Fd.term_precisions(disk)
        val = Fd.value(disk)
        if val % p ** min(precs):
            continue
        e, i = hensel_data(X.a, p, disk.r)
        vF = int_valuation(val, p)
        if vF >= 2 * e + 1:
            out.append(PadicPoint(p, tuple(disk.r), int(min(vF, 2 * e + 1)), i))
            continue
        free = [j for j, d in enumerate(disk.d) if d is not None]
        c = min(free, key=lambda j: (precs[j], disk.d[j], j))
        stack.extend(reversed(list(disk.children(c, p))))
    return out


def seed_points(X: Surface, p: int, count: int, k: int = 40) -> list[PadicPoint]:
    """Distinct lifted points: certified leaves of the search tree and small
    perturbations of their non-pivot coordinates, lifted to precision p^k."""
    out: list[PadicPoint] = []
    seen = set()
    for leaf in certified_nodes(X, p, limit=count):
        e, _ = hensel_data(X.a, p, leaf.coords)
        step = p ** (2 * int(e) + 2)
        others = [j for j in range(4) if j != leaf.smooth_index]
        shifts = [(0, 0)] + [(j, t) for t in (1, 2, 3) for j in others]
        for j, t in shifts:
            r = list(leaf.coords)
            r[j] += t * step
            x = hensel_lift(X, p, r, k, index=leaf.smooth_index)
            if x.coords not in seen:
                seen.add(x.coords)
                out.append(x)
            if len(out) >= count:
                return out
    return out


def _auxiliary_shifts(A: AzumayaAlgebra, p: int, aux: Sequence[QuadraticForm], cap: int) -> list[_Form]:
    """Constant offsets inv(theta, f) - inv(theta, g) measured at lifted points."""
    seeds = seed_points(A.surface, p, 16, cap)
    forms = []
    for g in aux:
        shifts = set()
        for x in seeds:
            u, w = _lifted_class(A, p, A.f, x), _lifted_class(A, p, g, x)
            if u is not None and w is not None:
                shifts.add((u - w) % 1)
        if len(shifts) > 1:
            raise ConsistencyFailure(f"algebras from different quadric points differ non-constantly at {p}")
        if shifts:
            forms.append(_Form(g, [int_valuation(b, p) for b in g.b], shifts.pop()))
    return forms


def padic_profile(
    A: AzumayaAlgebra,
    p: int,
    aux: Sequence[QuadraticForm] = (),
    cap: int = 40,
    max_nodes: int = 400_000,
) -> InvariantProfile:
    """Cover X(Q_p) by disks on which F has no zero or some tangent form has a fixed square class."""
    X = A.surface
    v = Place(p)
    theta = A.theta_value
    t = _class_slack(p)
    Fd = QuarticOnDisk(X, p)
    forms = [_Form(A.f, [int_valuation(b, p) for b in A.f.b], ZERO)]
    aux_loaded = not aux
    realized: dict[Fraction, tuple[int, ...]] = {}
    unresolved: list[tuple[int, ...]] = []
    stack = list(reversed(root_disks(p)))
    nodes = 0
    while stack:
        if len(realized) == 2:
            break
        nodes += 1
        if nodes > max_nodes:
            unresolved.extend(tuple(x % p for x in dsk.r) for dsk in stack)
            break
        disk = stack.pop()
        precs = Fd.term_precisions(disk)
        precF = min(precs)
        val = Fd.value(disk)
        if val % p ** min(precF, cap + 1):
            continue
        value = form = None
        for fm in forms:
            gv = fm.g(disk.r)
            vg = int_valuation(gv, p)
            if vg + t <= min(term_precision(p, vb, 2, r, d) for vb, r, d in zip(fm.vb, disk.r, disk.d)):
                value, form = (symbol_value(theta, gv, v) + fm.shift) % 1, (fm, vg)
                break
        if value is None and not aux_loaded:
            forms += _auxiliary_shifts(A, p, aux, cap)
            aux_loaded = True
            stack.append(disk)
            nodes -= 1
            continue
        if value is not None:
            if value in realized:
                continue
            e, i = hensel_data(X.a, p, disk.r)
            vF = int_valuation(val, p)
            if vF >= 2 * e + 1:
                fm, vg = form
                m = vF - e
                moved = fm.vb[i] + m + min(int_valuation(2 * disk.r[i], p), m)
                if moved >= vg + t:
                    realized[value] = tuple(disk.r)
                    continue
        if precF >= cap:
            unresolved.append(tuple(x % p for x in disk.r))
            continue
        free = [j for j, d in enumerate(disk.d) if d is not None]
        fprec = [min(term_precision(p, vb, 2, r, d) for vb, r, d in [(forms[0].vb[j], disk.r[j], disk.d[j])]) for j in range(4)]
        c = min(free, key=lambda j: (min(precs[j], fprec[j]), disk.d[j], j))
        stack.extend(reversed(list(disk.children(c, p))))
    exhaustive = not unresolved
    detail = {
        "nodes": nodes,
        "witnesses": {str(k): list(r) for k, r in sorted(realized.items())},
        "unresolved": sorted(set(unresolved))[:20],
        "auxiliary_forms": len(forms) - 1,
    }
    return InvariantProfile(v, frozenset(realized), exhaustive, detail)


def place_profile(
    A: AzumayaAlgebra,
    place: Place,
    aux: Sequence[QuadraticForm] = (),
    cap: int = 40,
) -> InvariantProfile:
    if is_square_in_completion(A.theta_value, place):
        return InvariantProfile(place, frozenset({ZERO}), True, {"reason": "theta is a local square"})
    if place.is_real:
        return real_profile(A)
    return padic_profile(A, place.p, aux, cap)


def evaluation_places(A: AzumayaAlgebra) -> list[Place]:
    primes = set(bad_primes(A.surface)) | set(primes_dividing(*[b for b in A.f.b if b]))
    return [REAL] + [Place(p) for p in sorted(primes | {2})]


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Verdict:
    kind: str  # ObstructionToRationalPoints | NoObstructionNonconstant | NoObstructionConstantZero | Indeterminate | Vacuous
    place: Place | None = None
    reason: str = ""
    total: Fraction | None = None

    def __str__(self) -> str:
        if self.kind == "NoObstructionNonconstant":
            return f"{self.kind}({self.place})"
        if self.kind in ("Indeterminate", "Vacuous"):
            return f"{self.kind}({self.reason})"
        return self.kind


def combine(profiles: Sequence[InvariantProfile]) -> Verdict:
    for pr in profiles:
        if pr.both:
            return Verdict("NoObstructionNonconstant", pr.place)
    open_places = [str(pr.place) for pr in profiles if not pr.exhaustive or len(pr.values) != 1]
    if open_places:
        return Verdict("Indeterminate", reason="unresolved places: " + ", ".join(open_places))
    total = sum((next(iter(pr.values)) for pr in profiles), Fraction(0)) % 1
    kind = "ObstructionToRationalPoints" if total == HALF else "NoObstructionConstantZero"
    return Verdict(kind, total=total)


@dataclass
class VerdictReport:
    verdict: Verdict
    els: object
    algebra: AzumayaAlgebra | None
    profiles: list[InvariantProfile]
    auxiliary_points: list[QuadricPoint] = field(default_factory=list)


def preferred_avoid_prime(X: Surface) -> int | None:
    recs = condition4_witnesses(X)
    return recs[0].p if recs else None


def _profile_job(args):
    return place_profile(*args)


def verdict(
    X: Surface,
    height_bound: int = 10_000,
    cap: int = 40,
    jobs: int = 1,
    els=None,
    n_aux: int = 2,
) -> VerdictReport:
    els = els if els is not None else everywhere_locally_soluble(X)
    if not els.result:
        failing = ", ".join(str(v) for v in els.failing)
        return VerdictReport(Verdict("Vacuous", reason=f"no local points at {failing}"), els, None, [])
    try:
        pts = find_points(X, 1 + n_aux, avoid=preferred_avoid_prime(X), height_bound=height_bound)
    except NotFoundWithinBound as exc:
        return VerdictReport(Verdict("Indeterminate", reason=str(exc)), els, None, [])
    A = construct_algebra(X, pts[0])
    aux = [tangent_form(X, P) for P in pts[1:]]
    places = evaluation_places(A)
    tasks = [(A, v, aux, cap) for v in places]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            profiles = list(pool.map(_profile_job, tasks))
    else:
        profiles = [_profile_job(t) for t in tasks]
    return VerdictReport(combine(profiles), els, A, profiles, pts[1:])


def real_sample_points(X: Surface, count: int) -> list[RealPoint]:
    a = X.a
    neg = [i for i, ai in enumerate(a) if ai < 0]
    k = neg[0] if len(neg) == 1 else next(i for i, ai in enumerate(a) if ai > 0)
    rest = [i for i in range(4) if i != k]
    out = []
    n = 1
    while len(out) < count:
        for u in range(n + 1):
            w = n - u
            ys = {rest[0]: float(u), rest[1]: float(w), rest[2]: 1.0}
            s = sum(abs(a[i]) * ys[i] ** 2 for i in rest) / abs(a[k])
            ys[k] = s**0.5
            out.append(RealPoint(tuple(ys[i] ** 0.5 for i in range(4))))
        n += 1
    return out[:count]


def independence_check(X: Surface, P1: QuadricPoint, P2: QuadricPoint, place: Place, sample_size: int = 24) -> bool:
    A1, A2 = construct_algebra(X, P1), construct_algebra(X, P2)
    if A1.trivial:
        return True
    if place.is_real:
        pts = real_sample_points(X, sample_size)
    else:
        pts = seed_points(X, place.p, sample_size)
    diffs = set()
    for Q in pts:
        try:
            diffs.add((invariant_at(A1, Q) - invariant_at(A2, Q)) % 1)
        except PrecisionExhausted:
            if place.is_real:
                continue
            raise
    return len(diffs) <= 1


def apply_main_theorem(X: Surface, report: VerdictReport | None = None, **kw) -> str | None:
    from .surface import theorem_conditions

    conditions = theorem_conditions(X)
    if conditions.conclusion is None:
        return None
    report = report or verdict(X, **kw)
    if report.verdict.kind != "NoObstructionNonconstant":
        raise ConsistencyFailure(f"conditions hold for {X} but the computed verdict is {report.verdict}")
    return conditions.conclusion
