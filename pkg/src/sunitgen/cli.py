"""Batch command-line front end.

Every subcommand prints a single JSON manifest to stdout (CSV is available
for enumeration lists).  Output is deterministic for fixed flags: reals are
serialized as decimal strings at the stated precision and list orderings are
canonical.  Wall-clock timing is only included when --timings is passed.

Exit codes: 0 all checks passed, 1 a mathematical verification failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .bounds import DEFAULT_DIGITS, AlgebraShape, BoxScaleBelowOneError, bound_report
from .enumeration import elements_of_norm, generating_set, unit_group_report
from .errors import VerificationError
from .padic import PrecisionError
from .presentation import rescale_to_s_unit, verify_relators
from .quaternion import (
    RatQuaternion,
    SPlaceSet,
    format_quaternion,
    height,
    is_s_unit,
    parse_quaternion,
)
from .tree import neighbor_coverage, product_transitivity, tree_precision

ENV_DIGITS = "SUNITGEN_DIGITS"


class UsageError(Exception):
    pass


def _default_digits() -> int:
    raw = os.environ.get(ENV_DIGITS)
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError as exc:
        raise UsageError(f"{ENV_DIGITS} must be an integer, got {raw!r}") from exc
    if digits < 10:
        raise UsageError(f"{ENV_DIGITS} must be at least 10")
    return digits


def _parse_primes(raw: str) -> SPlaceSet:
    try:
        values = [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse prime list {raw!r}") from exc
    if not values:
        raise UsageError("empty prime list")
    try:
        return SPlaceSet.of(*values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(manifest: dict, args) -> None:
    if getattr(args, "timings", False):
        manifest["duration_seconds"] = round(time.perf_counter() - args._t0, 3)
    json.dump(manifest, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _manifest(command: str, parameters: dict, status: str, payload: dict) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "status": status,
        "payload": payload,
    }


# -- subcommands ----------------------------------------------------------------


def cmd_bounds(args) -> int:
    digits = args.digits
    if args.shape_json:
        with open(args.shape_json, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        try:
            shape = AlgebraShape(n=int(doc["n"]), d=int(doc["d"]), s=int(doc["s"]),
                                 r1=int(doc["r1"]), r2=int(doc["r2"]),
                                 covolume=str(doc.get("covolume", 1)))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad shape document: {exc}") from exc
        norms = [int(v) for v in doc.get("finite_norms", [])]
        ms = doc.get("ms")
    else:
        for flag in ("n", "d", "s", "r1", "r2", "covolume"):
            if getattr(args, flag) is None:
                raise UsageError(f"missing --{flag} (or use --shape-json)")
        try:
            shape = AlgebraShape(n=args.n, d=args.d, s=args.s,
                                 r1=args.r1, r2=args.r2, covolume=args.covolume)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        norms = [int(tok) for tok in args.norms.split(",")] if args.norms else []
        ms = args.ms
    if ms is not None and norms:
        raise UsageError("pass either --norms or --ms, not both")

    kwargs = {"max_finite_norm": str(ms)} if ms is not None else {"finite_norms": norms}
    try:
        report = bound_report(shape, digits=digits, strict=False, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = report.to_json_dict()
    warnings = []
    if report.box_scale_below_one:
        warnings.append("box scale below 1: closed-form coefficients unavailable")
    if warnings:
        payload["warnings"] = warnings
    params = {"shape": payload["shape"], "finite_norms": norms, "ms": ms,
              "digits": digits}
    _emit(_manifest("bounds", params, "pass", payload), args)
    return 0


def cmd_enumerate(args) -> int:
    try:
        norms = sorted({int(tok) for tok in args.norms.split(",") if tok.strip()})
    except ValueError as exc:
        raise UsageError(f"cannot parse norm list {args.norms!r}") from exc
    if not norms or any(m < 1 for m in norms):
        raise UsageError("norms must be positive integers")
    classes = [(m, elements_of_norm(m)) for m in norms]

    if args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["norm", "element"])
        for m, elems in classes:
            for h in elems:
                writer.writerow([m, str(h)])
        sys.stdout.write(out.getvalue())
        return 0

    payload = {
        "classes": [
            {"norm": m, "count": len(elems), "elements": [str(h) for h in elems]}
            for m, elems in classes
        ],
        "total": sum(len(elems) for _, elems in classes),
    }
    _emit(_manifest("enumerate", {"norms": norms}, "pass", payload), args)
    return 0


def cmd_height(args) -> int:
    try:
        q = parse_quaternion(args.element)
    except ValueError as exc:
        raise UsageError(f"bad quaternion: {exc}") from exc
    if q.is_zero():
        raise UsageError("height of zero is undefined")
    payload = {
        "input": format_quaternion(q),
        "reduced_norm": str(q.reduced_norm()),
        "height": str(height(q)),
        "is_hurwitz": q.is_hurwitz(),
    }
    if args.s_primes:
        places = _parse_primes(args.s_primes)
        payload["s_primes"] = list(places.primes)
        payload["is_s_unit"] = is_s_unit(q, places)
    _emit(_manifest("height", {"element": args.element}, "pass", payload), args)
    return 0


def cmd_verify_units(args) -> int:
    report = unit_group_report()
    payload = {
        "count": report.count,
        "order_histogram": {str(k): v for k, v in report.order_histogram.items()},
        "involutions": report.involutions,
    }
    _emit(_manifest("verify-units", {}, "pass", payload), args)
    return 0


def _tree_payload(places: SPlaceSet, radius: int, witness_path=None) -> dict:
    coverage = {}
    for p in places.primes:
        rep = neighbor_coverage(p, tree_precision(max(radius, 1)))
        coverage[str(p)] = {
            "norm_class_size": rep.norm_class_size,
            "neighbors": rep.neighbor_count,
            "witnesses": {v.key(): str(g) for v, g in rep.witness_per_neighbor.items()},
        }
    transitivity = product_transitivity(places, radius)
    payload = {
        "primes": list(places.primes),
        "radius": radius,
        "neighbor_coverage": coverage,
        "ball_vertices": transitivity.expected,
        "reached": transitivity.reached,
        "generators": transitivity.generator_count,
        "precision": transitivity.precision,
    }
    if witness_path:
        witnesses = {pv.key(): str(w) for pv, w in
                     sorted(transitivity.witnesses.items())}
        with open(witness_path, "w", encoding="utf-8") as fh:
            json.dump(witnesses, fh, indent=2, sort_keys=True)
        payload["witness_file"] = witness_path
    return payload


def cmd_verify_tree(args) -> int:
    places = _parse_primes(args.primes)
    if args.radius < 0:
        raise UsageError("radius must be non-negative")
    payload = _tree_payload(places, args.radius, args.witnesses)
    params = {"primes": list(places.primes), "radius": args.radius}
    _emit(_manifest("verify-tree", params, "pass", payload), args)
    return 0


def _presentation_payload() -> dict:
    reports = verify_relators()
    places = SPlaceSet.of(3, 5)
    relators = []
    for r in reports:
        relators.append({
            "name": r.name,
            "word": str(r.word),
            "scalar": str(r.scalar),
            "scalar_halved_generators": str(r.halved_scalar),
            "central": r.central,
        })
    witnesses = {}
    from .presentation import GENERATOR_A, GENERATOR_B
    for name, gen in (("a", GENERATOR_A), ("b", GENERATOR_B)):
        scale, witness = rescale_to_s_unit(gen, places)
        witnesses[name] = {"scale": str(scale), "element": str(witness),
                           "norm": witness.norm()}
    return {"relators": relators, "s_unit_witnesses": witnesses}


def cmd_verify_presentation(args) -> int:
    payload = _presentation_payload()
    if args.json:
        _emit(_manifest("verify-presentation", {}, "pass", payload), args)
    else:
        for entry in payload["relators"]:
            status = "central" if entry["central"] else "NOT CENTRAL"
            print(f"{entry['name']}: {status}  scalar = {entry['scalar']}  "
                  f"(halved generators: {entry['scalar_halved_generators']})")
        for name, info in payload["s_unit_witnesses"].items():
            print(f"{name}/{info['scale']} = {info['element']}  norm {info['norm']}")
        print("all relators central: pass")
    return 0


def cmd_verify_all(args) -> int:
    places = _parse_primes(args.primes)
    if args.radius < 0:
        raise UsageError("radius must be non-negative")
    unit_rep = unit_group_report()
    enum_check = []
    for m in range(1, args.enum_limit + 1):
        got = len(elements_of_norm(m))
        from .enumeration import odd_divisor_sum
        want = 24 * odd_divisor_sum(m)
        if got != want:
            raise VerificationError(f"norm-{m} class has {got} elements, expected {want}")
        enum_check.append(got)
    payload = {
        "units": {"count": unit_rep.count,
                  "order_histogram": {str(k): v for k, v in unit_rep.order_histogram.items()}},
        "enumeration": {"checked_norms": args.enum_limit,
                        "class_sizes_match_odd_divisor_sums": True},
        "generating_set_size": len(generating_set(places)),
        "tree": _tree_payload(places, args.radius),
        "presentation": _presentation_payload(),
    }
    params = {"primes": list(places.primes), "radius": args.radius}
    _emit(_manifest("verify-all", params, "pass", payload), args)
    return 0


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sunitgen",
        description="Height bounds and exact verifications for S-unit groups "
                    "of the rational Hamilton quaternions.")
    parser.add_argument("--version", action="version", version=f"sunitgen {__version__}")
    parser.add_argument("--timings", action="store_true",
                        help="include wall-clock duration in the manifest")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate the height-bound pipeline for a shape")
    p.add_argument("--n", type=int, help="degree of the center over the rationals")
    p.add_argument("--d", type=int, help="algebra degree (dimension d^2)")
    p.add_argument("--s", type=int, help="number of ramified real places")
    p.add_argument("--r1", type=int, help="number of real places")
    p.add_argument("--r2", type=int, help="number of complex places")
    p.add_argument("--covolume", type=str, help="lattice covolume (decimal string)")
    p.add_argument("--norms", type=str, default=None,
                   help="comma-separated finite-place norms in S")
    p.add_argument("--ms", type=str, default=None,
                   help="maximal finite-place norm in S (alternative to --norms)")
    p.add_argument("--digits", type=int, default=None,
                   help=f"precision digits (default {DEFAULT_DIGITS}, env {ENV_DIGITS})")
    p.add_argument("--shape-json", type=str, default=None,
                   help="JSON file with keys n, d, s, r1, r2, covolume, finite_norms")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("enumerate", help="list Hurwitz elements by reduced norm")
    p.add_argument("--norms", type=str, required=True,
                   help="comma-separated norms, e.g. 1,3,5")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("height", help="height and norm of a quaternion")
    p.add_argument("element", type=str,
                   help="quaternion string, e.g. '1/2 + 1/2*I + 1/2*J + 1/2*K'")
    p.add_argument("--s-primes", type=str, default=None,
                   help="also test S-unit membership for these odd primes")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("verify-units", help="check the 24-element unit group structure")
    p.set_defaults(func=cmd_verify_units)

    p = sub.add_parser("verify-tree", help="neighbor coverage and product transitivity")
    p.add_argument("--primes", type=str, required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--witnesses", type=str, default=None,
                   help="write per-vertex quaternion witnesses to this JSON file")
    p.set_defaults(func=cmd_verify_tree)

    p = sub.add_parser("verify-presentation", help="evaluate the eight relators")
    p.add_argument("--json", action="store_true", help="emit a JSON manifest")
    p.set_defaults(func=cmd_verify_presentation)

    p = sub.add_parser("verify-all", help="run every verification suite")
    p.add_argument("--primes", type=str, required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--enum-limit", type=int, default=50,
                   help="largest norm class checked against the divisor-sum count")
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.perf_counter()
    if getattr(args, "digits", None) is None and hasattr(args, "digits"):
        try:
            args.digits = _default_digits()
        except UsageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VerificationError, PrecisionError, BoxScaleBelowOneError) as exc:
        failure = _manifest(args.command, {}, "fail", {"error": str(exc)})
        json.dump(failure, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
