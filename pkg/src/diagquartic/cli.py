"""Command-line front end: ``analyze``, ``verify-paper`` and ``find-family``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import verify
from .brauer import VerdictReport, verdict
from .classgroup import h_group, meets_235
from .localpoints import everywhere_locally_soluble
from .surface import bad_primes, normalize, reduction_type, theorem_conditions


def _default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _witness(w) -> dict:
    if isinstance(w, bool):
        return {"soluble": w}
    out = {"soluble": w.soluble, "search_depth": w.search_depth, "nodes": w.nodes}
    if w.point is not None:
        out["point"] = list(w.point.coords)
        out["precision"] = w.point.precision
    return out


def _algebra_section(rep: VerdictReport) -> dict | None:
    A = rep.algebra
    if A is None:
        return None
    return {
        "theta": {"value": A.theta_value, "sign": A.theta.sign, "factors": {str(p): e for p, e in A.theta.factors.items()}},
        "f": list(A.f.b),
        "quadric_point": list(A.source_point.y),
        "auxiliary_points": [list(P.y) for P in rep.auxiliary_points],
        "trivial": A.trivial,
    }


def _verdict_section(rep: VerdictReport) -> dict:
    v = rep.verdict
    return {
        "kind": v.kind,
        "place": None if v.place is None else str(v.place),
        "reason": v.reason,
        "total": None if v.total is None else str(v.total),
        "vacuous": v.kind == "Vacuous",
        "summary": str(v),
    }


def analysis_document(raw: Sequence[int], height_bound: int = 10_000, cap: int = 40, jobs: int = 1) -> dict:
    X = normalize(raw)
    els = everywhere_locally_soluble(X)
    H = h_group(X)
    rep = verdict(X, height_bound=height_bound, cap=cap, jobs=jobs, els=els)
    thm = theorem_conditions(X)
    return {
        "surface": {
            "input": [int(a) for a in raw],
            "normalized": list(X.a),
            "theta": str(X.theta),
            "reduction": {str(p): str(reduction_type(X, p)) for p in bad_primes(X)},
        },
        "h_group": {"order": H.order, "meets_235": meets_235(H)},
        "local": {
            "result": els.result,
            "places": {str(v): _witness(w) for v, w in els.witnesses.items()},
            "skipped": {str(p): note for p, note in els.skipped.items()},
        },
        "algebra": _algebra_section(rep),
        "profiles": [
            {"place": str(pr.place), "values": [str(x) for x in sorted(pr.values)], "exhaustive": pr.exhaustive}
            for pr in rep.profiles
        ],
        "verdict": _verdict_section(rep),
        "theorem": {
            "els": thm.els,
            "h_order": thm.h_order,
            "meets_235": thm.meets_235,
            "condition4": [
                {"p": r.p, "index": r.index, "odd_power": r.odd_power, "special_ok": r.special_ok} for r in thm.condition4
            ],
            "qualifying_primes": thm.qualifying_primes,
            "all_conditions": thm.all_conditions,
            "conclusion": thm.conclusion,
        },
    }


def render_text(doc: dict) -> str:
    s, loc, alg, thm = doc["surface"], doc["local"], doc["algebra"], doc["theorem"]
    lines = [
        f"surface      {tuple(s['normalized'])}  (input {tuple(s['input'])})",
        f"theta        {s['theta']}",
        "reduction    " + ", ".join(f"{p}: {t}" for p, t in s["reduction"].items()),
        f"H            order {doc['h_group']['order']}, meets {{2,3,5}}: {doc['h_group']['meets_235']}",
        f"local        everywhere soluble: {loc['result']}",
    ]
    for place, w in loc["places"].items():
        extra = f" point {w['point']} mod p^{w['precision']}" if "point" in w else ""
        lines.append(f"    {place:>4}  {'soluble' if w['soluble'] else 'insoluble'}{extra}")
    for p, note in loc["skipped"].items():
        lines.append(f"    >={p}  {note}")
    if alg is None:
        lines.append("algebra      none")
    else:
        lines.append(f"algebra      (theta, f) with theta = {alg['theta']['value']}, f = {tuple(alg['f'])}")
        lines.append(f"             quadric point {alg['quadric_point']}, auxiliary {alg['auxiliary_points']}, trivial: {alg['trivial']}")
    lines.append("profiles")
    for pr in doc["profiles"]:
        tag = "" if pr["exhaustive"] else "  (partial)"
        lines.append(f"    {pr['place']:>4}  {{{', '.join(pr['values'])}}}{tag}")
    v = doc["verdict"]
    lines.append(f"verdict      {v['summary']}" + (f"  total {v['total']}" if v["total"] is not None else ""))
    if v["vacuous"]:
        lines.append("             (vacuous: the surface has no adelic points)")
    lines.append(f"theorem      all conditions: {thm['all_conditions']}, qualifying primes {thm['qualifying_primes']}")
    for r in thm["condition4"]:
        lines.append(f"    p={r['p']} index {r['index']} odd power {r['odd_power']} special ok {r['special_ok']}")
    if thm["conclusion"]:
        lines.append(f"conclusion   {thm['conclusion']}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    doc = analysis_document(args.coefficients, args.height_bound, args.precision_cap, args.jobs)
    if args.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(render_text(doc))
    return 0


def cmd_verify(args) -> int:
    reports = verify.run_all(max_p=args.max_p, jobs=args.jobs)
    for rep in reports:
        print("\n".join(rep.lines()))
    ok = all(rep.ok for rep in reports)
    print("all reproductions consistent" if ok else "some reproductions do not match the stated claims")
    return 0 if ok else 1


def cmd_find_family(args) -> int:
    cands = verify.family_search(args.max_prime, jobs=args.jobs)
    first = verify.first_accepted(cands)
    if not cands:
        print("no candidate pairs")
        return 0
    print(f"{'p':>5} {'q':>5}  status")
    for c in cands:
        mark = "  <- first accepted" if c is first else ""
        print(f"{c.p:>5} {c.q:>5}  {c.status}{mark}")
    if first is None:
        print("no accepted pairs")
    return 0


def _nonzero_int(text: str) -> int:
    try:
        n = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    if n == 0:
        raise argparse.ArgumentTypeError("coefficients must be nonzero")
    return n


def _positive_int(text: str) -> int:
    try:
        n = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _at_least_3(text: str) -> int:
    n = _positive_int(text)
    if n < 3:
        raise argparse.ArgumentTypeError("must be at least 3")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diagquartic", description="Brauer-Manin analysis of diagonal quartic surfaces")
    sub = parser.add_subparsers(dest="command", required=True)
    jobs = dict(type=_positive_int, default=_default_jobs(), help="worker processes")

    a = sub.add_parser("analyze", help="analyse a0 X0^4 + a1 X1^4 + a2 X2^4 + a3 X3^4 = 0")
    a.add_argument("coefficients", nargs=4, type=_nonzero_int, metavar="a")
    a.add_argument("--json", action="store_true", help="emit a key-sorted JSON document")
    a.add_argument("--height-bound", type=_positive_int, default=10_000)
    a.add_argument("--precision-cap", type=_positive_int, default=40)
    a.add_argument("--jobs", **jobs)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify-paper", help="rerun every exhaustive search and compare with the recorded claims")
    v.add_argument("--max-p", type=_at_least_3, default=113)
    v.add_argument("--jobs", **jobs)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("find-family", help="list candidate prime pairs for the two-prime family")
    f.add_argument("--max-prime", type=_at_least_3, default=103)
    f.add_argument("--jobs", **jobs)
    f.set_defaults(func=cmd_find_family)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
