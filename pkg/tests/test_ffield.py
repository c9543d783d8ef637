from itertools import product

import pytest

from diagquartic.ffield import (
    DiagonalCurve,
    ResidueForm,
    both_values,
    canonical_class,
    conic_point,
    cover_check,
    curve_points,
    fermat_equivalent,
    has_diagonal_point,
    iter_diagonal_points,
    lifts_to_curve,
    patched_values,
    pointless_quartic_curves,
    quartic_class_reps,
    surface_points,
    tangent_residue_form,
)

from oracles import is_prime

SMALL_PRIMES = [p for p in range(3, 60) if is_prime(p)]


def _brute_projective(p, coeffs, degree):
    out = set()
    for x in product(range(p), repeat=len(coeffs)):
        if not any(x) or sum(c * t**degree for c, t in zip(coeffs, x)) % p:
            continue
        last = max(i for i, t in enumerate(x) if t)
        inv = pow(x[last], -1, p)
        out.add(tuple(t * inv % p for t in x))
    return out


def test_class_reps():
    assert quartic_class_reps(3) == [1, 2]
    assert quartic_class_reps(5) == [1, 2, 3, 4]
    assert quartic_class_reps(7) == [1, 3]
    assert len(quartic_class_reps(13)) == 4
    assert len(quartic_class_reps(11)) == 2
    with pytest.raises(ValueError):
        quartic_class_reps(2)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_enumeration_matches_brute_force(p):
    for coeffs in [(1, 1, 1), (1, 2, 3), (1, -1, 0), (2, 0, 0, 1), (1, 1, 1, 1), (1, 3, 0, 5)]:
        for degree in (2, 4):
            fast = list(iter_diagonal_points(p, coeffs, degree))
            assert len(fast) == len(set(fast))
            assert set(fast) == _brute_projective(p, coeffs, degree)


def test_pointless_curves_small_primes():
    assert pointless_quartic_curves(5) == {(1, 1, 1), (1, 1, 2)}
    assert pointless_quartic_curves(13) == {(1, 1, 2)}
    assert pointless_quartic_curves(29) == {(1, 1, 1)}
    assert pointless_quartic_curves(31) == set()
    assert pointless_quartic_curves(37) == set()


def test_fermat_surface_over_f5():
    assert not has_diagonal_point(5, (1, 1, 1, 1))
    assert has_diagonal_point(5, (1, 1, 1, 2))
    assert all(has_diagonal_point(7, (1, a, b, c)) for a in (1, 3) for b in (1, 3) for c in (1, 3))


def test_surface_points_smoothness():
    pts = surface_points(17, (1, 47, -103, -82297))
    smooth = surface_points(17, (1, 47, -103, -82297), smooth_only=True)
    assert set(pts) - set(smooth) == {(0, 0, 0, 1)}
    assert len(smooth) == 204


def test_conic_point_and_tangent_form():
    pt = conic_point(17, (1, 47, -103))
    assert sum(c * y * y for c, y in zip((1, 47, -103), pt)) % 17 == 0
    assert all(pt)
    f = tangent_residue_form(17, (1, 47, -103), pt)
    assert f.c == tuple(c * y % 17 for c, y in zip((1, 47, -103), pt))
    with pytest.raises(ValueError):
        tangent_residue_form(17, (1, 47, -103), (1, 0, 0))
    with pytest.raises(ValueError):
        ResidueForm(5, (5, 10, 0))


def test_canonical_class_is_scaling_invariant():
    for p in (5, 13, 29):
        for b in product(range(1, p), repeat=3):
            if b[0] != 1:
                continue
            c = canonical_class(p, b)
            assert canonical_class(p, tuple(3 * x for x in b)) == c
            assert canonical_class(p, tuple(x * 16 for x in reversed(b))) == c


def test_fermat_equivalence():
    assert fermat_equivalent(DiagonalCurve(17, (1, 1, 1)))
    assert fermat_equivalent(DiagonalCurve(17, (1, 47, -103)))  # 47 = 13 = 3^4 and -103 = 16 mod 17
    assert not fermat_equivalent(DiagonalCurve(17, (1, 3, 1)))


def test_counterexample_curve_is_single_valued():
    C = DiagonalCurve(17, (1, 47, -103))
    chk = cover_check(C)
    assert chk.has_points and not chk.values.both
    pv = patched_values(C)
    assert not pv.values.both and pv.unresolved == 0


@pytest.mark.parametrize("p", [p for p in SMALL_PRIMES if p > 3])
def test_non_lifting_conic_points_match_patched_character(p):
    """A conic point that is not Q^2 gives a tangent form with no zeros on C,
    so its square classes are the patched ones up to a global sign."""
    for a2 in quartic_class_reps(p):
        for a3 in quartic_class_reps(p):
            C = DiagonalCurve(p, (1, a2, a3))
            if not curve_points(C):
                continue
            pv = patched_values(C).values
            first = cover_check(C).values
            if first.both:
                assert pv.both
            for P in iter_diagonal_points(p, C.b, 2):
                if lifts_to_curve(p, P):
                    continue
                f = tangent_residue_form(p, C.b, P)
                bv = both_values(C, f)
                assert bv in (pv, type(pv)(pv.takes_nonsquare, pv.takes_square))


def test_patched_exceptions_below_60():
    bad = set()
    for p in SMALL_PRIMES:
        for a2 in quartic_class_reps(p):
            for a3 in quartic_class_reps(p):
                C = DiagonalCurve(p, (1, a2, a3))
                if curve_points(C) and not patched_values(C).values.both:
                    bad.add((p, canonical_class(p, C.b)))
    assert bad == {(3, (1, 1, 1)), (11, (1, 1, 1)), (17, (1, 1, 1)), (41, (1, 1, 1))}
