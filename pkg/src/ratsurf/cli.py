"""Command-line front end.

    ratsurf build  --construction Z-L4 --q 7 [--out-dir DIR] [--witness] [--system-out FILE]
    ratsurf verify --construction Z-L3 --q 4 [--exhaustive-cap N] [--isd-cap N] [--report FILE]
    ratsurf bounds --q 9 --family cube
    ratsurf count  curve.txt [--q Q]    |    ratsurf count --form "x*y*z" --q 7

Exit codes: 0 success / match, 1 mismatch, 2 inconclusive, 3 usage error,
4 input/output failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bounds
from .codes import (
    CONSTRUCTIONS,
    construct,
    construct_custom,
    determine_distance,
    format_generator,
    format_system,
    report,
    witness_max_curve,
)
from .distance import DEFAULT_EXHAUSTIVE_CAP, DEFAULT_ISD_CAP
from .field import FieldError, field_of_order
from .geometry import HomogeneousForm, count_curve_points, parse_form_file

EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3, 4

FAMILIES = ("aubry-perret", "homma-kim", "cor-major", "quadric-irreducible", "tot-singular", "cube", "delta",
            "plane", "construction")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _workers(args) -> int:
    env = os.environ.get("RATSURF_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("RATSURF_THREADS must be an integer") from None
    return max(1, args.threads)


def _make_code(args):
    if args.construction == "custom":
        if args.model is None or args.degree is None:
            raise UsageError("custom constructions need --model and --degree")
        return construct_custom(args.model, args.q, args.degree), f"{args.model}-deg{args.degree}"
    return construct(args.construction, args.q), args.construction


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_build(args) -> int:
    code, name = _make_code(args)
    if args.witness:
        w = witness_max_curve(code, exhaustive_cap=0)
        code.offer_upper(w.codeword)
    rep = report(code)
    out = Path(args.out_dir)
    stem = f"{name}_q{args.q}"
    outputs = {out / f"{stem}.gen": format_generator(code.gen, code.q), out / f"{stem}.json": rep.to_json()}
    if args.system_out:
        outputs[Path(args.system_out)] = format_system(code.system)
    for path, text in outputs.items():
        _write(path, text)
    print(rep.to_text())
    if code.deficiency:
        print(f"warning: {code.deficiency} section(s) vanish at every evaluation point")
    return EXIT_OK


def cmd_verify(args) -> int:
    code, _ = _make_code(args)
    rep = report(code)
    target = None
    if rep.paper_expected and not rep.paper_expected["d_is_lower_bound"]:
        target = rep.paper_expected["d"]
    outcome = determine_distance(
        code,
        target=target,
        exhaustive_cap=args.exhaustive_cap,
        isd_cap=args.isd_cap,
        use_witness=not args.no_witness,
        workers=_workers(args),
    )
    rep = report(code)
    if args.report:
        _write(Path(args.report), rep.to_json())
    print(rep.to_text())
    how = "independent search" if outcome.independent else "bound"
    print(f"distance method: {outcome.method} ({how}); lower bound from {code.lower_source}")
    if rep.status == "match":
        return EXIT_OK
    if rep.status == "mismatch":
        return EXIT_MISMATCH
    if rep.status == "no expectation":
        return EXIT_OK if code.d_exact is not None else EXIT_INCONCLUSIVE
    return EXIT_INCONCLUSIVE


def _need(value, flag, family):
    if value is None:
        raise UsageError(f"--family {family} needs {flag}")
    return value


def cmd_bounds(args) -> int:
    q, fam = args.q, args.family
    if fam == "aubry-perret":
        if args.genus is None and args.d is None:
            raise UsageError("--family aubry-perret needs --genus or --d")
        pa = args.genus if args.genus is not None else bounds.genus("plane", args.d).arithmetic_genus
        results = [bounds.aubry_perret(q, pa)]
    elif fam == "homma-kim":
        results = [bounds.homma_kim(q, _need(args.d, "--d", fam))]
    elif fam == "cor-major":
        results = [bounds.cor_major(q, _need(args.d, "--d", fam))]
    elif fam == "quadric-irreducible":
        results = [bounds.quadric_irreducible(q, _need(args.s, "--s", fam))]
    elif fam == "tot-singular":
        results = [bounds.tot_singular(q, _need(args.s, "--s", fam))]
    elif fam == "cube":
        results = [bounds.cube_bound(q)]
    elif fam == "delta":
        n, k, d = bounds.quadric_cubic_params(q)
        print(d)
        print(f"  quadric cubic-section code [{n},{k},>={d}]")
        return EXIT_OK
    elif fam == "plane":
        results = bounds.plane_bounds(q, _need(args.d, "--d", fam))
    else:
        results = [bounds.construction_lower_bound(_need(args.construction, "--construction", fam), q)]
    for r in results:
        print(r.value)
        extra = f" assuming {', '.join(r.assumptions)}" if r.assumptions else ""
        print(f"  {r.source}{extra}")
    return EXIT_OK


def cmd_count(args) -> int:
    if args.form is not None:
        if args.q is None:
            raise UsageError("--form needs --q")
        f = HomogeneousForm.parse(args.form, field_of_order(args.q), args.nvars)
        field = None
    else:
        if args.curve is None:
            raise UsageError("give a curve file or --form")
        try:
            text = Path(args.curve).read_text()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        f = parse_form_file(text)
        field = None if args.q is None or args.q == f.field.order else field_of_order(args.q)
    print(count_curve_points(f, field))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ratsurf", description="AG codes on rational surfaces over small finite fields")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def code_args(sp):
        sp.add_argument("--construction", required=True, choices=sorted(CONSTRUCTIONS) + ["custom"])
        sp.add_argument("--q", type=int, required=True, help="field order (prime power)")
        sp.add_argument("--model", choices=["quadric", "Y", "Z"], help="surface for --construction custom")
        sp.add_argument("--degree", type=int, help="degree of the system for --construction custom")
        sp.add_argument("--threads", type=int, default=1, help="worker threads (RATSURF_THREADS takes precedence)")

    b = sub.add_parser("build", help="write the generator matrix and a parameter report")
    code_args(b)
    b.add_argument("--out-dir", default=".", help="directory for <name>_q<q>.gen and .json")
    b.add_argument("--witness", action="store_true", help="also search for a section with many zeros")
    b.add_argument("--system-out", help="write the basis of the linear system here")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="compute or bracket d and compare with the stored table")
    code_args(v)
    v.add_argument("--exhaustive-cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    v.add_argument("--isd-cap", type=int, default=DEFAULT_ISD_CAP)
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--no-witness", action="store_true", help="skip the constructed low-weight codeword")
    v.set_defaults(func=cmd_verify)

    bd = sub.add_parser("bounds", help="evaluate a point-count bound")
    bd.add_argument("--q", type=int, required=True)
    bd.add_argument("--family", required=True, choices=FAMILIES)
    bd.add_argument("--d", type=int, help="plane curve degree")
    bd.add_argument("--s", type=int, help="multiple of the hyperplane class on the quadric")
    bd.add_argument("--genus", type=int, help="arithmetic genus (aubry-perret)")
    bd.add_argument("--construction", choices=sorted(CONSTRUCTIONS))
    bd.set_defaults(func=cmd_bounds)

    c = sub.add_parser("count", help="count rational points of a curve")
    c.add_argument("curve", nargs="?", help="curve file: 'q= nvars= deg=' header and a coefficient line")
    c.add_argument("--q", type=int, help="count over F_q (an extension of the file's field)")
    c.add_argument("--form", help="the form as text, e.g. 'x^2*z - y^3'")
    c.add_argument("--nvars", type=int, default=3)
    c.set_defaults(func=cmd_count)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, bounds.OutOfRangeError, FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
