from diagquartic import verify
from diagquartic.verify import (
    EC_CLAIM,
    POINTLESS_CLAIM,
    classify_pair,
    family_search,
    family_surface,
    first_accepted,
    primitive_zero_mod_2k,
    verify_constant_family,
    verify_counterexample,
    verify_ec_exceptions,
    verify_family,
    verify_pointless_curves,
    verify_surface_solubility,
)


def test_pointless_curves_report():
    rep = verify_pointless_curves()
    assert rep.ok, rep.lines()
    assert rep.observed == [(5, (1, 1, 1)), (5, (1, 1, 2)), (13, (1, 1, 2)), (29, (1, 1, 1))]


def test_corrupted_table_is_reported_with_claim():
    rep = verify_pointless_curves(expected={5: {(1, 1, 1)}, 13: {(1, 1, 2)}, 29: {(1, 1, 1)}, 31: {(1, 1, 1)}})
    assert not rep.ok
    text = "\n".join(rep.lines())
    assert POINTLESS_CLAIM in text
    assert "(5, (1, 1, 2))" in text and "(31, (1, 1, 1))" in text


def test_surface_solubility_report():
    rep = verify_surface_solubility()
    assert rep.ok, rep.lines()
    assert rep.observed == [(5, (1, 1, 1, 1))]


def test_ec_sweep_with_the_first_point_rule():
    rep = verify_ec_exceptions(max_p=53, spot_check=None)
    observed = set(rep.observed)
    assert (11, (1, 1, 1)) in observed and (17, (1, 1, 1)) in observed and (41, (1, 1, 1)) in observed
    # the first admissible conic point over F_7 gives both values on the Fermat curve
    assert (7, (1, 1, 1)) not in observed
    assert {(3, (1, 1, 1)), (3, (1, 1, 2)), (7, (1, 1, 3))} <= observed
    assert rep.patched == [(3, (1, 1, 1)), (11, (1, 1, 1)), (17, (1, 1, 1)), (41, (1, 1, 1))]
    assert not rep.ok and EC_CLAIM in "\n".join(rep.lines())


def test_ec_spot_check_beyond_genus_bound():
    assert verify._ec_rows(127) == []
    assert verify._ec_rows(131) == []


def test_family_statuses():
    assert classify_pair(47, 67).status == "RejectedLocal(2)"
    assert classify_pair(67, 47).status == "RejectedLegendre"
    assert classify_pair(103, 47).status == "Accepted"
    assert classify_pair(5, 47).status == "RejectedCongruence"
    assert classify_pair(11, 47).status == "RejectedFourthPower"
    assert family_surface(103, 47).a == (1, 47, -103, -82297)


def test_family_search_order_and_first():
    cands = family_search(103)
    assert [(c.p, c.q) for c in cands][:2] == [(47, 67), (67, 47)]
    first = first_accepted(cands)
    assert (first.p, first.q) == (103, 47)
    assert not any(c.accepted for c in cands if max(c.p, c.q) < 103)
    assert first_accepted(family_search(70)) is None
    assert family_search(3) == []


def test_family_statuses_do_not_depend_on_order():
    forward = {(c.p, c.q): c.status for c in family_search(103)}
    again = {(p, q): classify_pair(p, q).status for p, q in reversed(list(forward))}
    assert forward == again


def test_local_rejection_confirmed_by_enumeration():
    assert not primitive_zero_mod_2k(family_surface(47, 67), 11)
    assert not primitive_zero_mod_2k(family_surface(103, 67), 11)


def test_family_report():
    rep = verify_family(103)
    assert rep.ok, rep.lines()
    assert any("(47, 67)" in n for n in rep.notes)


def test_counterexample_report():
    rep = verify_counterexample()
    assert rep.ok, rep.lines()


def test_constant_family_report():
    rep = verify_constant_family()
    assert rep.ok, rep.lines()
    assert rep.observed >= 10


def test_parallel_matches_serial():
    serial = verify_pointless_curves(jobs=1)
    parallel = verify_pointless_curves(jobs=2)
    assert serial.observed == parallel.observed
    assert [(c.p, c.q, c.status) for c in family_search(103, jobs=2)] == [
        (c.p, c.q, c.status) for c in family_search(103, jobs=1)
    ]
