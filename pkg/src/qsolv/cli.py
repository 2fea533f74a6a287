"""Command-line front end.

Subcommands: validate, gk, verify, specialize, catalog.  Exit codes:
0 success, 1 validation/verification failure (including inadmissible
specialization points), 2 embedded-Weyl detection (certificate printed),
3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import catalog
from .algebra import element_str
from .errors import (
    InadmissiblePoint,
    Inconsistent,
    ParseError,
    QsolvError,
    SpecViolation,
    UnknownName,
    ValidationFailed,
    WeylDetected,
)
from .gk import gk_transform, specialize_presentation, verify_twisted
from .scalars import Assignment, gamma_str
from .textio import (
    dump_presentation,
    dump_result,
    load_json,
    load_presentation,
    presentation_from_dict,
    presentation_to_dict,
    result_from_dict,
    result_to_dict,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_WEYL = 2
EXIT_BAD_INPUT = 3


def _write_json(data: dict, out: str | None):
    text = json.dumps(data, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _print_certificate(certificate):
    print(f"weyl certificate at pivot x{certificate.pivot}:")
    print(f"  alpha = {gamma_str(certificate.alpha)}")
    print(f"  u     = {element_str(certificate.u)}")
    print(f"  v     = {element_str(certificate.v)}")
    print("  Y = alpha*u^-1*v*x^-1 satisfies x*Y - Y*x = 1 in the skew field")


def _stage_table(result) -> str:
    rows = []
    for stage in result.stages:
        eigen = "; ".join(
            f"x{j}: " + ", ".join(gamma_str(ev) for ev in evs)
            for j, evs in sorted(stage.eigenvalues.items())
        )
        denoms = ", ".join(sorted({str(d.value) for d in stage.denominators}))
        rows.append((f"x{stage.pivot}", eigen or "-", denoms or "-"))
    widths = [
        max(len(header), *(len(row[k]) for row in rows))
        for k, header in enumerate(("pivot", "eigenvalues", "denominators"))
    ]
    lines = []
    header = ("pivot", "eigenvalues", "denominators")
    lines.append("  ".join(h.ljust(widths[k]) for k, h in enumerate(header)))
    lines.append("  ".join("-" * widths[k] for k in range(3)))
    for row in rows:
        lines.append("  ".join(row[k].ljust(widths[k]) for k in range(3)))
    return "\n".join(lines)


def cmd_validate(args) -> int:
    p = load_presentation(args.file)
    diagnostics = p.validate()
    counterexample = p.check_pbw_consistency() if not diagnostics else None
    if not diagnostics and counterexample is None:
        print("ok: presentation is valid and the overlap check passes")
        return EXIT_OK
    for message in diagnostics:
        print(f"invalid: {message}")
    if counterexample is not None:
        print(f"inconsistent: {counterexample}")
    return EXIT_FAIL


def cmd_gk(args) -> int:
    p = load_presentation(args.file)
    try:
        result = gk_transform(p)
    except WeylDetected as exc:
        print("transform aborted: the algebra is not pure quantum")
        _print_certificate(exc.certificate)
        return EXIT_WEYL
    print(_stage_table(result))
    final = result.final
    relations = ", ".join(
        f"x{i}*x{j} = {gamma_str(final.qmat[(i, j)])}*x{j}*x{i}"
        for i in range(1, final.n + 1)
        for j in range(i + 1, final.n + 1)
    )
    print(f"final twisted Laurent relations: {relations}")
    _write_json(result_to_dict(result), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    result = result_from_dict(load_json(args.result))
    original = load_presentation(args.original)
    report = verify_twisted(result, original)
    if report.ok:
        print("ok: final tails zero")
        print("ok: final q-matrix equals the associated graded q-matrix")
        print("ok: every stage replays its relations exactly")
        return EXIT_OK
    for failure in report.failures:
        print(f"failure: {failure}")
    return EXIT_FAIL


def _parse_assignment(pairs, space) -> Assignment:
    values = {}
    for pair in pairs:
        if "=" not in pair:
            raise ParseError(f"--set expects name=value, got {pair!r}")
        name, _, raw = pair.partition("=")
        try:
            values[name.strip()] = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse rational value {raw!r}") from None
    try:
        return Assignment(space, values)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cmd_specialize(args) -> int:
    data = load_json(args.file)
    if "stages" in data:
        result = result_from_dict(data)
        assignment = _parse_assignment(args.set, result.final.params)
        specialized = specialize_presentation(result, assignment)
        _write_json(result_to_dict(specialized), args.out)
    else:
        p = presentation_from_dict(data)
        assignment = _parse_assignment(args.set, p.params)
        specialized = specialize_presentation(p, assignment)
        _write_json(presentation_to_dict(specialized), args.out)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.CATALOG_NAMES:
            print(name)
        return EXIT_OK
    p = catalog.build(args.name, args.n)
    if args.out:
        dump_presentation(p, args.out)
    else:
        _write_json(presentation_to_dict(p), None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsolv",
        description="PBW presentations and their twisted-Laurent transforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="check a presentation file")
    validate.add_argument("file")
    validate.set_defaults(func=cmd_validate)

    gk = sub.add_parser("gk", help="run the twisted-Laurent transform")
    gk.add_argument("file")
    gk.add_argument("--out", help="write the result JSON here instead of stdout")
    gk.set_defaults(func=cmd_gk)

    verify = sub.add_parser("verify", help="re-verify a transform result")
    verify.add_argument("result")
    verify.add_argument("original")
    verify.set_defaults(func=cmd_verify)

    specialize = sub.add_parser("specialize", help="evaluate parameters at a point")
    specialize.add_argument("file", help="presentation or result JSON")
    specialize.add_argument(
        "--set", action="append", default=[], metavar="NAME=VALUE", required=True
    )
    specialize.add_argument("--out")
    specialize.set_defaults(func=cmd_specialize)

    cat = sub.add_parser("catalog", help="built-in example presentations")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    cat_list = cat_sub.add_parser("list")
    cat_list.set_defaults(func=cmd_catalog, action="list")
    cat_emit = cat_sub.add_parser("emit")
    cat_emit.add_argument("name")
    cat_emit.add_argument("--n", type=int, default=None)
    cat_emit.add_argument("--out")
    cat_emit.set_defaults(func=cmd_catalog, action="emit")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WeylDetected as exc:
        print("weyl algebra detected")
        _print_certificate(exc.certificate)
        return EXIT_WEYL
    except InadmissiblePoint as exc:
        print(f"inadmissible point: {exc}")
        return EXIT_FAIL
    except ValidationFailed as exc:
        for message in exc.diagnostics:
            print(f"invalid: {message}")
        return EXIT_FAIL
    except Inconsistent as exc:
        print(f"inconsistent: {exc}")
        if exc.counterexample is not None:
            print(str(exc.counterexample))
        return EXIT_FAIL
    except (ParseError, UnknownName, SpecViolation) as exc:
        print(f"error: {exc}")
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}")
        return EXIT_BAD_INPUT
    except QsolvError as exc:
        print(f"error: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
