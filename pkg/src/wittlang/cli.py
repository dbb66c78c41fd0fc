"""Command line front-end: every verification suite as a subcommand.

Each command builds a report dict, writes it as JSON/CSV/text and exits 0
iff every embedded check passed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import __version__, linalg
from .caps import global_cap
from .covers import match_filtrations, rows_to_csv, tame_count
from .errors import WittlangError
from .gf import FieldSpec
from .hopf import CoordinateRing, pairing_suite
from .lang import Isogeny, LangContext, alpha_report, lang_fibers, rational_subgroup
from .lgroup import (
    TruncElem,
    check_group_laws,
    det_map,
    enumerate_group,
    enumerate_punctured,
    homomorphism_failures,
    lmul,
    punctured_inv,
    punctured_mul,
)
from .quasip import (
    build_s3_f2,
    component_homomorphism_failures,
    generated_group,
    matrix_group_table,
    quasi_p_check,
    sl2_f2_target,
    theta_image,
)
from .subgrp import prosub_level


def _field(args) -> FieldSpec:
    modulus = [int(c) for c in args.modulus.split(",")] if args.modulus else None
    return FieldSpec.of(args.p, args.r, modulus)


def _config(args) -> dict:
    skip = {"func", "out", "format"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def cmd_enumerate(args) -> dict:
    F = _field(args)
    laws = check_group_laws(args.n, args.d, F, samples=args.sample, seed=args.seed)
    report = {"field": F.to_dict(), "size": laws.size, "group_laws": laws.to_dict()}
    passed = laws.passed
    elements = enumerate_group(args.n, args.d, F)
    if args.check_det_hom:
        fails = homomorphism_failures(elements, det_map, lmul, lmul)
        report["det_hom"] = {"pairs": len(elements) ** 2, "failures": len(fails)}
        passed &= not fails
    if args.punctured:
        punct = enumerate_punctured(args.n, args.d, F, args.nu_max)
        ident = [x for x in punct if x.is_identity()]
        bad_inv = sum(1 for x in punct if not punctured_mul(x, punctured_inv(x)).is_identity())
        bad_comp = sum(
            1
            for x in punct[:: max(1, len(punct) // 200)]
            for y in punct[:: max(1, len(punct) // 200)]
            if punctured_mul(x, y).nu != x.nu + y.nu or punctured_mul(x, y).body != lmul(x.body, y.body)
        )
        report["punctured"] = {
            "nu_max": args.nu_max,
            "size": len(punct),
            "identities": len(ident),
            "inverse_failures": bad_inv,
            "componentwise_failures": bad_comp,
        }
        passed &= len(ident) == 1 and bad_inv == 0 and bad_comp == 0
        if args.list:
            report["elements"] = [x.to_dict() for x in punct]
    elif args.list:
        report["elements"] = [x.to_dict() for x in elements]
    report["passed"] = passed
    return report


def cmd_lang(args) -> dict:
    p = args.p
    work = FieldSpec.of(p, args.r * args.work_degree if args.work_degree else args.r)
    base_q = args.base_q or p
    ctx = LangContext(base_q, work, args.n, args.d)
    fibers = lang_fibers(ctx)
    rational = set(rational_subgroup(ctx))
    report = fibers.to_dict()
    if not args.list:
        report.pop("elements")
    report["kernel_is_rational_subgroup"] = set(fibers.kernel) == rational
    report["context"] = ctx.to_dict()
    passed = fibers.uniform and report["kernel_is_rational_subgroup"]
    if args.alpha:
        if args.gamma != "lang-self":
            raise WittlangError(f"unsupported --gamma {args.gamma!r}; only lang-self is available")
        alpha = alpha_report(Isogeny.lang(base_q), ctx)
        report["alpha"] = alpha.to_dict()
        passed &= alpha.passed
    report["passed"] = passed
    return report


def cmd_s3(args) -> dict:
    if args.target == "s3":
        target = build_s3_f2()
    elif args.target == "sl2":
        target = sl2_f2_target(3)
    else:
        raise WittlangError(f"unknown --target {args.target!r}")
    order = args.order.split(",") if args.order else list(target.labels)
    F = target.field
    image = theta_image(target, args.d, order)
    group = generated_group(target)
    hom = component_homomorphism_failures(target, enumerate_group(target.n, 1, F))
    image_table = matrix_group_table(sorted(image), F, "theta image") if len(image) == group.order else None
    quasi = quasi_p_check(group, F.p)
    levels = prosub_level(group)
    passed = (
        set(image) == set(group.elements)
        and all(v == 0 for v in hom.values())
        and quasi
        and image_table is not None
    )
    return {
        "target": target.to_dict(),
        "order": order,
        "image_size": len(image),
        "image": [linalg.to_coeffs(F, m) for m in sorted(image)],
        "generated_group_order": group.order,
        "image_equals_generated_group": set(image) == set(group.elements),
        "component_hom_failures": hom,
        "quasi_p": quasi,
        "subgroup_orders": levels.orders,
        "prosub": levels.to_dict(),
        "passed": passed,
    }


def cmd_covers(args) -> dict:
    if args.tame:
        q = args.q or args.p
        divs = tame_count(q)
        return {"q": q, "tame_orders": divs, "passed": True}
    rows = match_filtrations(args.p, args.dmax)
    return {"p": args.p, "rows": [r.to_dict() for r in rows], "passed": all(r.equal for r in rows)}


def cmd_hopf(args) -> dict:
    F = _field(args)
    ring = CoordinateRing(args.n, args.d, F)
    gens = ring.generators()
    coassoc = [g for g in gens if not ring.check_coassociativity(g)]
    counit = [g for g in gens if not ring.check_counit(g)]
    primitive = [g for g in gens if g[2] == 1 and len(ring.comult(g)) == 2]
    pairing = pairing_suite(ring, samples=args.sample, seed=args.seed)
    return {
        "field": F.to_dict(),
        "generators": len(gens),
        "coassociativity_failures": [list(g) for g in coassoc],
        "counit_failures": [list(g) for g in counit],
        "primitive_generators": [list(g) for g in primitive],
        "pairing": pairing.to_dict(),
        "comult": {f"X{i}{j}{lam}": ring.comult((i, j, lam)).to_json() for i, j, lam in gens},
        "passed": not coassoc and not counit and pairing.passed,
    }


def _to_text(command: str, report: dict) -> str:
    lines = [f"wittlang {command}: {'PASS' if report.get('passed') else 'FAIL'}"]
    for key, value in report.items():
        if key in {"elements", "image", "target", "comult", "prosub", "config", "field"}:
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"  {key}:")
            lines.extend("    " + ", ".join(f"{k}={v}" for k, v in row.items()) for row in value)
        else:
            lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"


def _to_csv(report: dict) -> str:
    if "rows" in report:
        from .covers import FiltrationRow

        return rows_to_csv([FiltrationRow(r["D"], r["as_count"], r["witt_count"]) for r in report["rows"]])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in report.items():
        if not isinstance(value, (dict, list)):
            writer.writerow([key, value])
    return buf.getvalue()


def render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        return _to_csv(report)
    return _to_text(command, report)


COMMANDS = {
    "enumerate": cmd_enumerate,
    "lang": cmd_lang,
    "s3": cmd_s3,
    "covers": cmd_covers,
    "hopf": cmd_hopf,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic")
    common.add_argument("--r", type=int, default=1, help="extension degree of the field")
    common.add_argument("--modulus", help="comma-separated modulus coefficients, constant term first")
    common.add_argument("--n", type=int, default=1, help="matrix size")
    common.add_argument("--d", type=int, default=1, help="truncation level")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sample", type=int, default=None, help="sample size for randomized checks")
    common.add_argument("--out", type=Path, help="write the report here")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--list", action=argparse.BooleanOptionalAction, default=True,
                        help="include element lists in the report")

    parser = argparse.ArgumentParser(prog="wittlang", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wittlang {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate L_{n,d}(F_q) and check group laws")
    p.add_argument("--check-det-hom", action="store_true")
    p.add_argument("--punctured", action="store_true", help="enumerate Z x L with |nu| <= --nu-max")
    p.add_argument("--nu-max", type=int, default=8)

    p = sub.add_parser("lang", parents=[common], help="kernel and fibers of the Lang map")
    p.add_argument("--base-q", type=int, help="size of the fixed field (default p)")
    p.add_argument("--work-degree", type=int, help="multiply the field degree r by this factor")
    p.add_argument("--alpha", action="store_true", help="report the induced map alpha onto ker(gamma)")
    p.add_argument("--gamma", default="lang-self")

    p = sub.add_parser("s3", parents=[common], help="quotient map onto S_3 or SL_2(F_2)")
    p.add_argument("--target", choices=["s3", "sl2"], default="s3")
    p.add_argument("--order", help="composition order, e.g. 13,23,12")

    p = sub.add_parser("covers", parents=[common], help="Artin-Schreier vs Witt counts")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--tame", action="store_true", help="cyclic subgroup orders of F_q^x")
    p.add_argument("--q", type=int)

    sub.add_parser("hopf", parents=[common], help="coalgebra and pairing checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enumerate" and args.sample is None:
        args.sample = 10_000
    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except WittlangError as exc:
        print(f"wittlang {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report["config"] = _config(args)
    report["seed"] = args.seed
    report["version"] = __version__
    report["cap"] = global_cap()
    report["seconds"] = round(time.perf_counter() - started, 3)
    text = render(args.command, report, args.format)
    if args.out:
        args.out.write_text(text)
        sys.stdout.write(render(args.command, report, "text"))
    else:
        sys.stdout.write(text)
    return 0 if report.get("passed") else 1


if __name__ == "__main__":
    raise SystemExit(main())
