"""Command-line surface: every pipeline behind JSON input/output.

Exit codes: 0 definitive positive verdict / certificate, 1 definitive
negative, 2 inconclusive or bounded verdict, 3 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .automata import (kernel_system, load_builtin_dfao, scalar_equation_search,
                       sequence_terms, DFAO)
from .errors import MahlerError, ParseError
from .evaluation import (CounterexampleAt, RegularityCertificate,
                         RegularityInconclusive, check_admissible_pair,
                         check_regular, evaluate_values)
from .multrel import verify_progression_relation
from .poly import parse_poly
from .probe import independence_report
from .purity import (build_schedule, log_relation_probe, monomial_basis,
                     relation_matrix, verify_schedule, zero_orbit_scan)
from .systems import load_system, iterate_system, verify_functional_identity
from .transforms import (LimitZeroCertificate, MonomialTransform,
                         OrbitExponents)

SCHEMA_VERSION = "1"

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_system_arg(spec: str):
    if spec.startswith("builtin:"):
        from .automata import load_builtin_system
        return load_builtin_system(spec.split(":", 1)[1])
    return load_system(_read_json(spec))


def _load_dfao_arg(spec: str) -> DFAO:
    if spec.startswith("builtin:"):
        return load_builtin_dfao(spec.split(":", 1)[1])
    return DFAO.from_json(_read_json(spec))


def _load_transform_arg(spec: str) -> MonomialTransform:
    return MonomialTransform.from_json(_read_json(spec))


def _parse_point(text: str):
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad point {text!r}: {exc}") from exc


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _envelope(command: str, verdict: str, payload: dict, verified=None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command,
           "verdict": verdict, "report": payload}
    if verified is not None:
        out["verified"] = verified
    return out


# -- subcommand handlers ----------------------------------------------------------


def _cmd_check_admissible(args) -> int:
    t = _load_transform_arg(args.transform)
    alpha = _parse_point(args.point)
    rep = check_admissible_pair(t, alpha, k_max=args.k_max, b_max=args.b_max)
    verified = None
    if args.verify:
        verified = True
        if isinstance(rep.limit_zero, LimitZeroCertificate):
            orbit = OrbitExponents(t, alpha)
            point = orbit.materialize(rep.limit_zero.k0)
            verified &= max(abs(c) for c in point) == rep.limit_zero.witness_norm
            verified &= rep.limit_zero.witness_norm < 1
        ti = rep.t_independence
        if ti is not None and not ti.independent:
            verified &= verify_progression_relation(
                t, alpha, ti.witness_mu, ti.witness_a, ti.witness_b,
                2 * t.size + 8)
    _emit(_envelope("check-admissible", rep.verdict, rep.to_json(), verified),
          args.output)
    if rep.verdict == "admissible":
        return EXIT_POSITIVE
    if rep.verdict == "not_admissible":
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def _cmd_check_regular(args) -> int:
    system = _load_system_arg(args.system)
    alpha = _parse_point(args.point)
    result = check_regular(system, alpha, k_exact=args.k_exact)
    verified = None
    if args.verify and isinstance(result, RegularityCertificate):
        verified = all(b.holds() for b in result.tail_argument)
        orbit = OrbitExponents(system.T, alpha)
        for k in range(result.checked_exactly_up_to + 1):
            point = orbit.materialize(k)
            for row in system.A:
                for entry in row:
                    verified &= entry.den.eval(point) != 0
            verified &= system.det().num.eval(point) != 0
        verified &= orbit.norm_at_most(result.polydisc_entry_k,
                                       result.tail_radius)
    if isinstance(result, RegularityCertificate):
        verdict, code = "regular", EXIT_POSITIVE
    elif isinstance(result, CounterexampleAt):
        verdict, code = "not_regular", EXIT_NEGATIVE
    else:
        verdict, code = "inconclusive", EXIT_INCONCLUSIVE
    _emit(_envelope("check-regular", verdict, result.to_json(), verified),
          args.output)
    return code


def _cmd_iterate(args) -> int:
    system = _load_system_arg(args.system)
    matrix = iterate_system(system, args.k)
    payload = {"k": args.k,
               "matrix": [[entry.to_text() for entry in row] for row in matrix]}
    _emit(_envelope("iterate", "ok", payload), args.output)
    return EXIT_POSITIVE


def _cmd_eval(args) -> int:
    system = _load_system_arg(args.system)
    alpha = _parse_point(args.point)
    values = evaluate_values(system, alpha, precision_bits=args.precision)
    payload = {"precision_bits": args.precision, "values": []}
    for name, v in zip(system.component_names, values):
        payload["values"].append({
            "component": name,
            "decimal": v.decimal(max(20, args.precision // 4)),
            "enclosure": [str(v.lower_fraction()), str(v.upper_fraction())],
        })
    _emit(_envelope("eval", "ok", payload), args.output)
    return EXIT_POSITIVE


def _cmd_from_dfa(args) -> int:
    dfao = _load_dfao_arg(args.dfa)
    ks = kernel_system(dfao, order=args.order)
    payload = ks.to_json()
    payload["sequence_prefix"] = [str(v) for v in sequence_terms(dfao, 32)]
    _emit(_envelope("from-dfa", "ok", payload), args.output)
    return EXIT_POSITIVE


def _cmd_scalar_eq(args) -> int:
    dfao = _load_dfao_arg(args.dfa)
    ks = kernel_system(dfao, order=max(args.order, 4 * args.match_order))
    series = ks.system.series[args.component]
    eq = scalar_equation_search(series, dfao.q, args.m_max, args.d_max,
                                args.match_order)
    if eq is None:
        _emit(_envelope("scalar-eq", "none_found",
                        {"note": "no equation within the given bounds; "
                                 "this is a search outcome, not a proof"}),
              args.output)
        return EXIT_INCONCLUSIVE
    _emit(_envelope("scalar-eq", "found", eq.to_json()), args.output)
    return EXIT_POSITIVE


def _cmd_relation_matrix(args) -> int:
    data = _read_json(args.blocks)
    blocks = [[[int(x) for x in row] for row in block]
              for block in data["blocks"]]
    degrees = [int(d) for d in data["degrees"]]
    index = monomial_basis([len(b) for b in blocks], degrees)
    rm = relation_matrix(blocks, index)
    payload = {"index": index.to_json(),
               "matrix": [[int(x) for x in row] for row in rm.entries]}
    _emit(_envelope("relation-matrix", "ok", payload), args.output)
    return EXIT_POSITIVE


def _cmd_schedule(args) -> int:
    if args.transforms:
        sources = [_load_transform_arg(p) for p in args.transforms]
    else:
        sources = [int(x) for x in args.rhos.split(",")]
    schedule = build_schedule(sources, args.length)
    verified = verify_schedule(schedule) if args.verify else None
    _emit(_envelope("schedule", "ok", schedule.to_json(), verified), args.output)
    return EXIT_POSITIVE


def _cmd_zero_scan(args) -> int:
    variables = [v.strip() for v in args.vars.split(",")]
    g = parse_poly(args.poly, variables)
    if args.transforms:
        transforms = [_load_transform_arg(p) for p in args.transforms]
    else:
        transforms = [MonomialTransform.scaling(int(x))
                      for x in args.rhos.split(",")]
    alpha = _parse_point(args.point)
    if args.schedule == "trivial":
        entries = [tuple([l] * len(transforms)) for l in range(args.length + 1)]
    else:
        entries = [tuple(k) for k in _read_json(args.schedule)["entries"]]
    report = zero_orbit_scan(g, transforms, alpha, entries, args.length)
    _emit(_envelope("zero-scan", "ok", report.to_json()), args.output)
    return EXIT_POSITIVE


def _cmd_probe(args) -> int:
    data = _read_json(args.bundle)
    bundle = []
    for item in data["bundle"]:
        system = (_load_system_arg(item["system"]) if isinstance(item["system"], str)
                  else load_system(item["system"]))
        bundle.append((system, _parse_point(item["point"])))
    rep = independence_report(bundle, degree_bound=args.degree,
                              precision_bits=args.precision,
                              height_bound=args.height, b_max=args.b_max)
    kind = rep.probe_result["kind"]
    _emit(_envelope("probe", kind, rep.to_json()), args.output)
    return EXIT_POSITIVE if kind == "CandidateRelation" else EXIT_INCONCLUSIVE


def _cmd_verify_identity(args) -> int:
    system = _load_system_arg(args.system)
    if system.series is None and args.dfa:
        dfao = _load_dfao_arg(args.dfa)
        ks = kernel_system(dfao, order=max(2 * args.order, 64))
        borrowed = {name: ks.system.series[name]
                    for name in system.component_names}
        system = system.with_series(borrowed)
    report = verify_functional_identity(system, order=args.order)
    verdict = "vanishes" if report.vanishes else "residual_found"
    _emit(_envelope("verify-identity", verdict, report.to_json()), args.output)
    return EXIT_POSITIVE if report.vanishes else EXIT_NEGATIVE


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mahlertk",
        description="Exact certificates and rigorous evaluation for linear "
                    "Mahler systems.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the JSON report to this path")
        p.add_argument("--verify", action="store_true",
                       help="replay certificates with exact arithmetic")

    p = sub.add_parser("check-admissible", help="class M + orbit limit + "
                                                "T-independence")
    p.add_argument("--transform", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--k-max", type=int, default=64)
    p.add_argument("--b-max", type=int, default=16)
    common(p)
    p.set_defaults(func=_cmd_check_admissible)

    p = sub.add_parser("check-regular", help="regularity certificate for a "
                                             "system at a point")
    p.add_argument("--system", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--k-exact", type=int, default=8)
    common(p)
    p.set_defaults(func=_cmd_check_regular)

    p = sub.add_parser("iterate", help="symbolic iterated matrix A_k(z)")
    p.add_argument("--system", required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("eval", help="rigorous component values at a point")
    p.add_argument("--system", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--precision", type=int, default=256)
    common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("from-dfa", help="kernel Mahler system of an automaton")
    p.add_argument("--dfa", required=True)
    p.add_argument("--order", type=int, default=512)
    common(p)
    p.set_defaults(func=_cmd_from_dfa)

    p = sub.add_parser("scalar-eq", help="search a scalar Mahler equation")
    p.add_argument("--dfa", required=True)
    p.add_argument("--component", default="f")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--d-max", type=int, default=3)
    p.add_argument("--match-order", type=int, default=64)
    p.add_argument("--order", type=int, default=512)
    common(p)
    p.set_defaults(func=_cmd_scalar_eq)

    p = sub.add_parser("relation-matrix", help="expansion matrix R(B)")
    p.add_argument("--blocks", required=True,
                   help='JSON {"blocks": [[[..]]], "degrees": [..]}')
    common(p)
    p.set_defaults(func=_cmd_relation_matrix)

    p = sub.add_parser("schedule", help="iteration schedule k_l ~ l*Theta")
    p.add_argument("--rhos", help="comma-separated integer radii")
    p.add_argument("--transforms", nargs="*",
                   help="transform JSON files (alternative to --rhos)")
    p.add_argument("--length", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("zero-scan", help="exact zero scan along a schedule")
    p.add_argument("--poly", required=True)
    p.add_argument("--vars", required=True)
    p.add_argument("--rhos")
    p.add_argument("--transforms", nargs="*")
    p.add_argument("--point", required=True)
    p.add_argument("--schedule", default="trivial",
                   help='"trivial" for k_l = (l,...,l) or a schedule JSON path')
    p.add_argument("--length", type=int, default=1000)
    common(p)
    p.set_defaults(func=_cmd_zero_scan)

    p = sub.add_parser("probe", help="independence hypotheses + integer-"
                                     "relation probe")
    p.add_argument("--bundle", required=True,
                   help='JSON {"bundle": [{"system": path-or-object, '
                        '"point": "1/2"}]}')
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--precision", type=int, default=512)
    p.add_argument("--height", type=int, default=10 ** 15)
    p.add_argument("--b-max", type=int, default=16)
    common(p)
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("verify-identity", help="residual of f - A f(Tz)")
    p.add_argument("--system", required=True)
    p.add_argument("--dfa", help="derive series from this automaton if the "
                                 "system has none")
    p.add_argument("--order", type=int, default=64)
    common(p)
    p.set_defaults(func=_cmd_verify_identity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (MahlerError, KeyError, OSError, ValueError, ZeroDivisionError) as exc:
        error = {"schema_version": SCHEMA_VERSION,
                 "error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error, indent=2), file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
