"""Command-line interface: scenario ingestion, command dispatch, and
machine-readable JSON reports.

Exit codes: 0 success, 1 assertion failure, 2 input error, 3 budget
exceeded.  Reports are deterministic for a fixed (scenario, command,
options, seed) apart from the timing field; canonical_report_bytes drops
exactly that field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .cochains import coboundary, random_cochain, restrict
from .cohomology import (cohomology, les_exactness_check, refinement_action_check)
from .bundles import (bundle_violations, bundle_from_cocycle,
                      enumerate_liftings_bruteforce, roundtrip_check, solve_liftings)
from .cochains import compose, homotopy, invert
from .scenario_io import cochain_entries, parse_scenario, scenario_digest
from .simplicial import (verify_face_compat, verify_simplicial_identities,
                         verify_twist_identities)
from .transition import DEFAULT_SEARCH_BUDGET, dd
from .validation import BudgetExceededError, ScenarioError, SeccohError

REPORT_SCHEMA = 1
VERIFY_SAMPLES = 20  # random cochains per degree in `verify`

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def canonical_report_bytes(report: dict) -> bytes:
    """The deterministic serialization: everything except the timing."""
    slim = {k: v for k, v in report.items() if k != "timing_seconds"}
    return json.dumps(slim, sort_keys=True, separators=(",", ":")).encode()


def _serialize_cocycle(phi) -> dict:
    cochain = phi.cochain if hasattr(phi, "cochain") else phi
    return {"degree": cochain.degree, "values": cochain_entries(cochain)}


def _pick(scenario, table: dict, requested, what: str):
    if requested is not None:
        if requested not in table:
            raise ScenarioError(what, f"unknown {what} {requested!r}; "
                                f"available: {sorted(table)}")
        return requested, table[requested]
    if len(table) == 1:
        name = next(iter(table))
        return name, table[name]
    raise ScenarioError(what, f"--{what} required; available: {sorted(table)}")


def _cmd_cohomology(scenario, args, results, require_point=False):
    if require_point and scenario.space.size != 1:
        raise ScenarioError("space", "group-cohomology needs a one-point space")
    degrees = [args.degree] if args.degree is not None else [0, 1, 2]
    out = []
    for p in degrees:
        H = cohomology(scenario, p)
        out.append({
            "degree": p,
            "invariant_factors": list(H.factors),
            "size": H.size,
            "generators": [_serialize_cocycle(g) for g in H.generators],
            "value_slots": len(scenario.keys(p)),
            "empty_indices": scenario.empty_index_count(p),
        })
    results["cohomology"] = out
    return EXIT_OK


def _cmd_dd(scenario, args, results):
    ename, ext = _pick(scenario, scenario.extensions, args.extension, "extension")
    kname, phi = _pick(scenario, scenario.cocycles, args.cocycle, "cocycle")
    if getattr(phi, "cochain", None) is None:
        raise ScenarioError("cocycle", f"{kname!r} is not a degree-1 cocycle")
    cls = dd(phi, ext)
    results["dd"] = {
        "extension": ename,
        "cocycle": kname,
        "coordinates": list(cls.coords),
        "h2_invariant_factors": list(cls.group.factors),
        "zero": cls.is_zero,
    }
    return EXIT_OK


def _cmd_lift(scenario, args, results):
    ename, ext = _pick(scenario, scenario.extensions, args.extension, "extension")
    kname, phi = _pick(scenario, scenario.cocycles, args.cocycle, "cocycle")
    if getattr(phi, "cochain", None) is None:
        raise ScenarioError("cocycle", f"{kname!r} is not a degree-1 cocycle")
    out = {"extension": ename, "cocycle": kname, "oracle": args.oracle}
    solved = brute = None
    if args.oracle in ("solve", "both"):
        solved = solve_liftings(phi, ext, budget=args.budget)
        out["solve"] = {
            "dd_coordinates": list(solved.dd_class.coords),
            "exists": solved.exists,
            "class_count": solved.class_count,
            "h1_size": solved.h1_size,
            "representatives": [_serialize_cocycle(r) for r in solved.representatives],
        }
    if args.oracle in ("brute", "both"):
        brute = enumerate_liftings_bruteforce(phi, ext, bound=args.budget)
        out["brute"] = {
            "candidate_count": brute.candidate_count,
            "lifting_count": len(brute.liftings),
            "class_count": brute.class_count,
            "representatives": [_serialize_cocycle(r) for r in brute.representatives()],
        }
    code = EXIT_OK
    if solved is not None and brute is not None:
        agree = (solved.exists == (brute.class_count > 0)
                 and (not solved.exists or solved.class_count == brute.class_count))
        out["agreement"] = agree
        if not agree:
            code = EXIT_ASSERTION
    results["lift"] = out
    return code


def _cmd_roundtrip(scenario, args, results):
    names = ([args.cocycle] if args.cocycle is not None
             else sorted(scenario.cocycles))
    out = []
    ok = True
    for name in names:
        phi = scenario.cocycles.get(name)
        if phi is None:
            raise ScenarioError("cocycle", f"unknown cocycle {name!r}")
        if getattr(phi, "cochain", None) is None:
            continue  # degree-0 cochains have no bundle
        forward = roundtrip_check(phi)
        P = bundle_from_cocycle(phi)
        backward = roundtrip_check(P)
        axioms = bundle_violations(P)
        entry = {
            "cocycle": name,
            "recovered_exactly": forward.ok,
            "bundle_isomorphism_verified": backward.ok,
            "bundle_axioms": axioms.ok,
            "total_classes": P.total_size,
        }
        ok = ok and forward.ok and backward.ok and axioms.ok
        out.append(entry)
    results["roundtrip"] = out
    return EXIT_OK if ok else EXIT_ASSERTION


def _cmd_verify(scenario, args, results):
    failures = []
    checks = {}

    def audit(name, report):
        checks[name] = {"checked": report.checked, "violations": list(report.violations)}
        if not report.ok:
            failures.append(name)

    audit("simplicial_identities", verify_simplicial_identities(scenario))
    audit("face_compatibility", verify_face_compat(scenario))
    for cname, coeff in sorted(scenario.coefficients.items()):
        audit(f"twist_identities[{cname}]", verify_twist_identities(scenario, coeff))
    # coboundary squares to zero on seeded random cochains
    dd_checks = 0
    dd_failures = []
    for cname, coeff in sorted(scenario.coefficients.items()):
        if not coeff.is_abelian:
            continue
        for p in (0, 1, 2):
            for k in range(VERIFY_SAMPLES):
                phi = random_cochain(scenario, coeff, p, args.seed + 1000 * p + k)
                dd_checks += 1
                if not coboundary(coboundary(phi)).is_identity():
                    dd_failures.append(f"dd != 0 at {cname}, degree {p}, sample {k}")
    checks["coboundary_squares_to_zero"] = {"checked": dd_checks,
                                            "violations": dd_failures}
    if dd_failures:
        failures.append("coboundary_squares_to_zero")
    for ename, ext in sorted(scenario.extensions.items()):
        if ext.B.is_abelian:
            audit(f"les_exactness[{ename}]", les_exactness_check(scenario, ext, 2))
    for rname, maps in sorted(scenario.refinements.items()):
        mnames = sorted(maps)
        for mname in mnames:
            ref = maps[mname]
            for p in (0, 1):
                rep = refinement_action_check(scenario, ref, ref, p)
                audit(f"refinement_self[{rname}.{mname}].H{p}", rep)
        for i, m1 in enumerate(mnames):
            for m2 in mnames[i + 1:]:
                for p in (0, 1):
                    audit(f"refinement_action[{rname}:{m1},{m2}].H{p}",
                          refinement_action_check(scenario, maps[m1], maps[m2], p))
                hviol = []
                hchecked = 0
                for k in range(VERIFY_SAMPLES):
                    for p in (1, 2):
                        phi = random_cochain(scenario, scenario.coeff, p, args.seed + k)
                        lhs = compose(restrict(phi, maps[m2]),
                                      invert(restrict(phi, maps[m1])))
                        rhs = compose(homotopy(coboundary(phi), maps[m1], maps[m2]),
                                      coboundary(homotopy(phi, maps[m1], maps[m2])))
                        hchecked += 1
                        if lhs != rhs:
                            hviol.append(f"homotopy identity fails: degree {p}, sample {k}")
                checks[f"homotopy_identity[{rname}:{m1},{m2}]"] = {
                    "checked": hchecked, "violations": hviol}
                if hviol:
                    failures.append(f"homotopy_identity[{rname}:{m1},{m2}]")
    for kname in sorted(scenario.cocycles):
        phi = scenario.cocycles[kname]
        if getattr(phi, "cochain", None) is None:
            continue
        rep = roundtrip_check(phi)
        audit(f"roundtrip[{kname}]", rep)
    results["verify"] = {"checks": checks, "failures": failures}
    return EXIT_OK if not failures else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seccoh",
        description="Exact semi-equivariant Cech cohomology, transition "
                    "cocycles, and Dixmier-Douady lifting obstructions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("cohomology", "invariant factors and generators of H^p"),
            ("group-cohomology", "same, requiring a one-point space"),
            ("dd", "the lifting obstruction class of a cocycle"),
            ("lift", "classify liftings through a central extension"),
            ("verify", "run the identity/exactness/oracle suites"),
            ("roundtrip", "bundle/cocycle round-trip checks")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--degree", type=int, default=None,
                       help="cohomology degree (default: 0..2)")
        p.add_argument("--extension", default=None, help="named extension")
        p.add_argument("--cocycle", default=None, help="named cocycle")
        p.add_argument("--oracle", choices=("solve", "brute", "both"),
                       default="solve", help="lifting method (lift only)")
        p.add_argument("--seed", type=int, default=0, help="randomized-check seed")
        p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                       help="search/enumeration budget")
        p.add_argument("--json", dest="json_out", default=None,
                       help="write the JSON report to this file")
    return parser


_DISPATCH = {
    "cohomology": lambda s, a, r: _cmd_cohomology(s, a, r),
    "group-cohomology": lambda s, a, r: _cmd_cohomology(s, a, r, require_point=True),
    "dd": _cmd_dd,
    "lift": _cmd_lift,
    "verify": _cmd_verify,
    "roundtrip": _cmd_roundtrip,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    report = {
        "tool": "seccoh",
        "version": __version__,
        "report_schema": REPORT_SCHEMA,
        "command": args.command,
        "options": {
            "scenario": args.scenario,
            "degree": args.degree,
            "extension": args.extension,
            "cocycle": args.cocycle,
            "oracle": args.oracle,
            "budget": args.budget,
        },
        "seed": args.seed,
    }
    code = EXIT_OK
    try:
        scenario = parse_scenario(args.scenario)
        report["scenario"] = {"name": scenario.name,
                              "digest": scenario_digest(args.scenario)}
        results: dict = {}
        code = _DISPATCH[args.command](scenario, args, results)
        report["results"] = results
    except ScenarioError as exc:
        report["error"] = {"kind": "input", "message": str(exc)}
        code = EXIT_INPUT
    except BudgetExceededError as exc:
        report["error"] = {"kind": "budget", "message": str(exc)}
        code = EXIT_BUDGET
    except SeccohError as exc:
        report["error"] = {"kind": "assertion", "message": str(exc)}
        code = EXIT_ASSERTION
    report["exit_code"] = code
    report["timing_seconds"] = round(time.perf_counter() - started, 6)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
