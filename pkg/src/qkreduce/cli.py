"""Command-line front end.

Commands: check, strata, sample, verify, compare, search.  Every command
prints either a human table or machine JSON (--output json); randomized
commands take --seed (env QKREDUCE_SEED as fallback) and are fully
deterministic for a fixed seed.

Exit codes: 0 all checks passed, 1 a verification assertion failed,
2 malformed input, 3 inadmissible weight matrix.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .numerics import Tolerances, constraint_rank, orbit_rank, project_to_N
from .quat import HPoint
from .reduction import ReductionConfig
from .strata import (PositivityError, compare_families, enumerate_strata,
                     omega_positive_sign_pattern, v3_positive_sign_pattern,
                     verify_stratum)
from .weights import (OmegaMatrix, ThetaMatrix, admissible_omega,
                      admissible_theta, boxes_omega, boxes_theta,
                      format_box_signs, free_impossibility_search,
                      is_free_omega, minors_omega, minors_theta,
                      parse_weight_matrix)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INADMISSIBLE = 0, 1, 2, 3


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def emit(payload: dict, args) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True,
                         default=_json_default))
    else:
        _print_table(payload)


def _scalar_list(value):
    return (isinstance(value, list)
            and all(not isinstance(v, (dict, list)) for v in value))


def _print_table(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for key, value in payload.items():
            if _scalar_list(value) or not isinstance(value, (dict, list)):
                rendered = value if not _scalar_list(value) else \
                    "[" + ", ".join(str(v) for v in value) + "]"
                print(f"{pad}{key}: {rendered}")
            elif value:
                print(f"{pad}{key}:")
                _print_table(value, indent + 1)
            else:
                print(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for item in payload:
            if _scalar_list(item):
                print(f"{pad}- [" + ", ".join(str(v) for v in item) + "]")
            elif isinstance(item, (dict, list)):
                _print_table(item, indent)
                print()
            else:
                print(f"{pad}- {item}")
    else:
        print(f"{pad}{payload}")


def _parse_matrix(literal, family_override=None):
    m = parse_weight_matrix(literal)
    if family_override == "theta" and not isinstance(m, ThetaMatrix):
        raise ValueError("--family theta requires a 3x4 matrix")
    if family_override == "omega" and not isinstance(m, OmegaMatrix):
        raise ValueError("--family omega requires a 2x3 matrix")
    return m


def _battery(m) -> dict:
    if isinstance(m, ThetaMatrix):
        mins = minors_theta(m)
        boxes = boxes_theta(m)
        ok, witness = admissible_theta(m)
        out = {
            "family": "theta",
            "matrix": m.to_json(),
            "minors": {"Delta_" + "".join(map(str, k)): v
                       for k, v in mins.items()},
            "boxes": {format_box_signs(k): v for k, v in boxes.items()},
            "admissible": ok,
        }
    else:
        mins = minors_omega(m)
        boxes = boxes_omega(m)
        ok, witness = admissible_omega(m)
        out = {
            "family": "omega",
            "matrix": m.to_json(),
            "minors": {"Delta_" + "".join(map(str, k)): v
                       for k, v in mins.items()},
            "boxes": {format_box_signs(k): v for k, v in boxes.items()},
            "minor_sum": sum(v for _, v in mins.items()),
            "admissible": ok,
        }
        if ok:
            out["free_on_u1_chart"] = is_free_omega(m)
    if witness:
        out["witness"] = witness
    return out


def cmd_check(args) -> int:
    m = _parse_matrix(args.matrix, args.family)
    report = _battery(m)
    emit(report, args)
    return EXIT_OK if report["admissible"] else EXIT_INADMISSIBLE


def cmd_strata(args) -> int:
    m = _parse_matrix(args.matrix, args.family)
    levels = ("twistor", "sasakian") if args.level == "both" else (args.level,)
    payload = {"matrix": m.to_json(), "levels": {}}
    tol = _tolerances(args)
    for level in levels:
        reports = enumerate_strata(m, level)
        if args.with_numerics:
            cfg = ReductionConfig.for_matrix(m)
            for rep in reports:
                verify_stratum(cfg, rep, tol=tol, seed=args.seed,
                               n_probe=args.n)
        payload["levels"][level] = {
            "count_total": len(reports),
            "count_surviving": sum(1 for r in reports if not r.pruned),
            "strata": [r.to_json() for r in reports],
        }
    emit(payload, args)
    return EXIT_OK


def cmd_sample(args) -> int:
    m = _parse_matrix(args.matrix, args.family)
    cfg = ReductionConfig.for_matrix(m)
    tol = _tolerances(args)
    rng = np.random.default_rng(args.seed)
    ranks = {}
    orbit_g = {}
    orbit_gt = {}
    converged = 0
    worst_residual = 0.0
    min_pair_norm2 = float("inf")
    for k in range(args.n):
        start = HPoint(rng.standard_normal(cfg.ambient_n)
                       + 1j * rng.standard_normal(cfg.ambient_n),
                       rng.standard_normal(cfg.ambient_n)
                       + 1j * rng.standard_normal(cfg.ambient_n))
        res = project_to_N(cfg, start=start, tol=tol, seed=args.seed + k)
        worst_residual = max(worst_residual, res.residual)
        if not res.converged:
            continue
        converged += 1
        p = res.point
        for ia, ib in cfg.pairs():
            pn = float(abs(p.z[ia])**2 + abs(p.w[ia])**2
                       + abs(p.z[ib])**2 + abs(p.w[ib])**2)
            min_pair_norm2 = min(min_pair_norm2, pn)
        crep = constraint_rank(cfg, p, tol=tol)
        ranks[crep.rank] = ranks.get(crep.rank, 0) + 1
        og = orbit_rank(cfg, p, twistor=False, tol=tol)
        ogt = orbit_rank(cfg, p, twistor=True, tol=tol)
        orbit_g[og.rank] = orbit_g.get(og.rank, 0) + 1
        orbit_gt[ogt.rank] = orbit_gt.get(ogt.rank, 0) + 1
    dim_dom = max(ranks, key=ranks.get) if ranks else None
    payload = {
        "matrix": m.to_json(),
        "n_samples": args.n,
        "converged": converged,
        "worst_residual": worst_residual,
        "constraint_rank_histogram": ranks,
        "zero_set_dim": (4 * cfg.ambient_n - 1 - dim_dom)
        if dim_dom is not None else None,
        "orbit_rank_histogram_G": orbit_g,
        "orbit_rank_histogram_Gtilde": orbit_gt,
        "min_pair_norm2": min_pair_norm2,
    }
    emit(payload, args)
    return EXIT_OK if converged == args.n else EXIT_FAIL


def cmd_verify(args) -> int:
    m = _parse_matrix(args.matrix, args.family)
    cfg = ReductionConfig.for_matrix(m)
    tol = _tolerances(args)
    failures = []
    try:
        if isinstance(m, ThetaMatrix):
            sol = v3_positive_sign_pattern(m)
        else:
            sol = omega_positive_sign_pattern(m)
        positivity = {
            "moment_signs": list(sol.moment_signs),
            "box": format_box_signs(sol.box_signs),
            "box_value": sol.box_value,
            "solution": [str(v) for v in sol.solution],
            "sum": str(sum(sol.solution)),
        }
    except PositivityError as exc:
        positivity = {"error": str(exc)}
        failures.append("positivity uniqueness")

    catalogs = {}
    for level in ("twistor", "sasakian"):
        reports = enumerate_strata(m, level)
        entries = []
        for rep in reports:
            numeric = verify_stratum(cfg, rep, tol=tol, seed=args.seed,
                                     n_probe=args.n)
            entry = rep.to_json()
            entries.append(entry)
            if rep.pruned:
                continue
            if numeric.get("converged"):
                if numeric.get("max_fix_residual", 1.0) > 1e-8:
                    failures.append(f"isotropy fixing {rep.descriptor.label()}")
            elif not numeric.get("empty", False):
                failures.append(f"undecided feasibility {rep.descriptor.label()}")
        catalogs[level] = entries

    payload = {"matrix": m.to_json(), "positivity": positivity,
               "catalogs": catalogs, "failures": failures,
               "all_passed": not failures}
    emit(payload, args)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_compare(args) -> int:
    theta = _parse_matrix(args.theta)
    omega = _parse_matrix(args.omega)
    if not isinstance(theta, ThetaMatrix) or not isinstance(omega, OmegaMatrix):
        raise ValueError("compare expects a 3x4 matrix then a 2x3 matrix")
    payload = compare_families(theta, omega)
    emit(payload, args)
    return EXIT_OK


def cmd_search(args) -> int:
    report = free_impossibility_search(bound=args.bound)
    payload = {
        "bound": args.bound,
        "candidate_minor_tuples": [list(t) for t in report.candidate_minor_tuples],
        "matrices_checked": report.matrices_checked,
        "free_actions_found": len(report.free_matrices),
        "residual_check": {
            str(k): {"minors": list(v["minors"]),
                     "violations": v["violations"]}
            for k, v in report.residual_check.items()},
    }
    emit(payload, args)
    return EXIT_OK if report.no_free_action else EXIT_FAIL


def _tolerances(args) -> Tolerances:
    tol = Tolerances()
    if getattr(args, "tol_residual", None):
        tol.residual = args.tol_residual
    if getattr(args, "tol_rank", None):
        tol.rank = args.tol_rank
    return tol


def _add_common(sub, matrix_arg=True):
    if matrix_arg:
        sub.add_argument("matrix", help="weight matrix literal "
                         "'p1,p2,../q1,../..' or JSON {\"rows\": ...}")
        sub.add_argument("--family", choices=("theta", "omega"),
                         help="override auto-detection (error-path testing)")
    sub.add_argument("--output", choices=("json", "table"), default="table")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--n", type=int, default=100,
                     help="sample / restart count")
    sub.add_argument("--tol-residual", type=float, default=None)
    sub.add_argument("--tol-rank", type=float, default=None)
    sub.add_argument("--parallel", type=int, default=1,
                     help="worker count (accepted for interface parity; "
                     "evaluation is vectorized)")
    sub.add_argument("--strict", action="store_true",
                     help="require an explicit --seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkreduce",
        description="Weighted-torus quaternion-Kahler / 3-Sasakian "
                    "reduction toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="determinant battery and admissibility")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = subs.add_parser("strata", help="singular-stratum catalog")
    _add_common(p)
    p.add_argument("--level", choices=("twistor", "sasakian", "both"),
                   default="both")
    p.add_argument("--with-numerics", action="store_true",
                   help="attach feasibility/dimension/isotropy numerics")
    p.set_defaults(func=cmd_strata)

    p = subs.add_parser("sample", help="projection and rank statistics")
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("verify", help="full property suite")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("compare", help="side-by-side family comparison")
    p.add_argument("theta", help="3x4 weight matrix literal")
    p.add_argument("omega", help="2x3 weight matrix literal")
    _add_common(p, matrix_arg=False)
    p.set_defaults(func=cmd_compare)

    p = subs.add_parser("search", help="free-action impossibility scan")
    p.add_argument("--bound", type=int, default=2)
    _add_common(p, matrix_arg=False)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        env = os.environ.get("QKREDUCE_SEED")
        if env is not None:
            args.seed = int(env)
        elif getattr(args, "strict", False):
            print("error: --strict requires an explicit --seed "
                  "(or QKREDUCE_SEED)", file=sys.stderr)
            return EXIT_PARSE
        else:
            args.seed = 0
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        message = str(exc)
        print(f"error: {message}", file=sys.stderr)
        if "inadmissible" in message:
            return EXIT_INADMISSIBLE
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
