"""Command-line driver.

Exit codes: 0 success, 1 verification or model-validation failure, 2 bad
command-line arguments.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field

from sullivan import expr_io
from sullivan.cdga import (
    betti,
    check_d_squared,
    check_morphism,
    induced_cohomology_map,
    is_isomorphism,
    is_pure,
)
from sullivan.models import (
    BUILTIN_MODELS,
    builtin_model,
    corrected_morphism_f,
    paper_morphism_f,
    verify_chern_normalization,
)
from sullivan.reduction import ReductionError, certify_reduction, minimize
from sullivan.report import CheckReport
from sullivan.ring import (
    euler_characteristic,
    flag_presentation,
    poincare_product_oracle,
    projective_bundle_presentation,
    verify_ring_presentation,
)


class UsageError(Exception):
    pass


@dataclass
class VerificationReport:
    n: int
    checks: list = field(default_factory=list)
    betti_tables: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "n": self.n,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "betti_tables": {k: list(v) for k, v in self.betti_tables.items()},
        }
        if timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out


def run_verification(n: int, max_degree: int | None = None, morphism: str = "published") -> VerificationReport:
    """Run every check for one rank ``n``, in a fixed order."""
    if n < 2:
        raise UsageError(f"n must be at least 2 (got {n})")
    top = 4 * n - 2
    bound = 4 * n if max_degree is None else max_degree
    if bound <= top:
        raise UsageError(
            f"--max-degree {bound} is too low for n={n}: need at least {top + 1} to see vanishing above degree {top}"
        )
    report = VerificationReport(n)

    def timed(name, fn):
        t0 = time.perf_counter()
        try:
            result = fn()
        except (ValueError, ArithmeticError) as exc:
            result = CheckReport(name, False, f"error: {exc}")
        report.timings[name] = time.perf_counter() - t0
        result = _rename(result, name)
        report.checks.append(result)
        return result

    models = {name: builtin_model(name, n) for name in BUILTIN_MODELS}

    timed(
        "d∘d = 0 on built-in models",
        lambda: CheckReport.combine("", [_rename(check_d_squared(m), name) for name, m in models.items()]),
    )
    timed(
        "ptangent model is pure",
        lambda: CheckReport("", is_pure(models["ptangent"])),
    )
    timed("Chern normalization", lambda: verify_chern_normalization(n))

    def reduction_check():
        red = minimize(models["flag-big"])
        degs = sorted(g.degree for g in red.model.generators)
        want = sorted([2, 2, 2 * n - 1, 2 * n + 1])
        checks = [
            CheckReport(
                "surviving generator degrees",
                degs == want,
                f"{degs}" if degs == want else f"got {degs}, expected {want}",
            ),
            certify_reduction(models["flag-big"], red.model, bound),
        ]
        return CheckReport.combine("", checks)

    timed("flag-big reduces to four generators", reduction_check)

    def morphism_check():
        f = paper_morphism_f(n) if morphism == "published" else corrected_morphism_f(n)
        mc = check_morphism(f)
        checks = [mc]
        if mc:
            checks.append(CheckReport("linear part is an isomorphism", is_isomorphism(f)))
            cm = induced_cohomology_map(f, bound)
            checks.append(
                CheckReport(
                    f"induced map on cohomology is an isomorphism through degree {bound}",
                    cm.quasi_isomorphism,
                    "" if cm.quasi_isomorphism else f"fails in degrees {cm.failing_degrees}",
                )
            )
        else:
            checks.append(CheckReport("linear part is an isomorphism", False, "not run: f is not a chain map"))
        return CheckReport.combine("", checks)

    timed(f"comparison morphism ({morphism})", morphism_check)

    def rings():
        pt, fm = models["ptangent"], models["flag-min"]
        r1 = verify_ring_presentation(pt, projective_bundle_presentation(n), {"x2": "x2", "y2": "y2"}, bound)
        r2 = verify_ring_presentation(fm, flag_presentation(n), {"a2": "a2", "b2": "b2"}, bound)
        return CheckReport.combine("", [_rename(r1, "P(E) presentation"), _rename(r2, "flag presentation")])

    timed("cohomology ring presentations", rings)

    def betti_check():
        oracle = poincare_product_oracle(n, bound)
        report.betti_tables["oracle"] = oracle
        checks = []
        for name in ("ptangent", "flag-min", "flag-big"):
            b = betti(models[name], bound)
            report.betti_tables[name] = b
            checks.append(CheckReport(f"{name} Betti numbers", b == oracle, f"{b}" if b == oracle else f"{b} vs {oracle}"))
        return CheckReport.combine("", checks)

    timed("Betti numbers match the Poincaré product", betti_check)

    def euler_check():
        chi = euler_characteristic(flag_presentation(n))
        want = n * (n + 1)
        return CheckReport("", chi == want, f"χ = {chi}, expected {want}")

    timed("Euler characteristic", euler_check)
    return report


def _rename(r: CheckReport, name: str) -> CheckReport:
    return CheckReport(name, r.passed, r.details, r.witnesses, r.children)


# -- argument handling ----------------------------------------------------------


def _parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _load_source(args):
    if args.file:
        if args.name:
            raise UsageError("give either a built-in model name or --file, not both")
        doc = expr_io.read_document(args.file)
        return expr_io.load_model(doc)
    if not args.name:
        raise UsageError("a built-in model name or --file is required")
    if args.n is None:
        raise UsageError("--n is required with a built-in model")
    try:
        return builtin_model(args.name, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit_model(c, fmt, out):
    doc = expr_io.save_model(c)
    if fmt == "structured":
        out.write(expr_io.document_to_json(doc))
    else:
        out.write(expr_io.document_to_text(doc))


def cmd_model(args, out):
    minimum = 1 if args.name == "cpn" else 2
    if args.n < minimum:
        raise UsageError(f"{args.name} requires n ≥ {minimum}")
    _emit_model(builtin_model(args.name, args.n), args.format, out)
    return 0


def cmd_betti(args, out):
    c = _load_source(args)
    table = betti(c, args.max_degree)
    if args.format == "structured":
        out.write(json.dumps(table.as_dict()) + "\n")
    else:
        out.write("degree  dim\n")
        for d, v in enumerate(table):
            out.write(f"{d:>6}  {v}\n")
    return 0


def cmd_reduce(args, out):
    c = _load_source(args)
    try:
        result = minimize(c, max_steps=args.max_steps)
    except ReductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "structured":
        data = {
            "steps": [
                {
                    "killed_odd": s.killed_odd.name,
                    "killed_even": s.killed_even.name,
                    "substitution": expr_io.print_element(s.substitution),
                }
                for s in result.steps
            ],
            "model": expr_io.save_model(result.model).to_dict(),
        }
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(f"{len(result.steps)} elimination step(s)\n")
        for i, s in enumerate(result.steps, 1):
            out.write(f"step {i}: {s.describe()}\n")
        out.write("final model:\n")
        _emit_model(result.model, "text", out)
    return 0


def cmd_verify(args, out):
    ns = args.n
    if ns[0] < 2:
        raise UsageError("verification needs n ≥ 2")
    reports = [run_verification(n, args.max_degree, args.morphism) for n in ns]
    ok = all(r.passed for r in reports)
    if args.format == "structured":
        data = {"passed": ok, "reports": [r.to_dict(timings=args.timings) for r in reports]}
        out.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        for r in reports:
            out.write(f"n = {r.n}: {'PASS' if r.passed else 'FAIL'}\n")
            for c in r.checks:
                t = f"  [{r.timings[c.name]:.3f}s]" if args.timings else ""
                out.write(f"  {c}{t}\n")
    if not ok:
        for r in reports:
            for c in r.checks:
                if not c.passed:
                    print(f"first failing check: n={r.n}: {c.name}: {c.details}", file=sys.stderr)
                    return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sullivan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="print a built-in model")
    p.add_argument("name", choices=BUILTIN_MODELS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_model)

    for cmd, func, helptext in (
        ("betti", cmd_betti, "Betti numbers of a model"),
        ("reduce", cmd_reduce, "eliminate contractible pairs"),
    ):
        p = sub.add_parser(cmd, help=helptext)
        p.add_argument("name", nargs="?", choices=BUILTIN_MODELS)
        p.add_argument("--n", type=int)
        p.add_argument("--file", help="model document (JSON or text)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        if cmd == "betti":
            p.add_argument("--max-degree", type=int, required=True)
        else:
            p.add_argument("--max-steps", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run the full verification pipeline")
    p.add_argument("--n", type=_parse_range, required=True, help="rank or inclusive range A..B")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument(
        "--morphism",
        choices=("published", "corrected"),
        default="published",
        help="comparison map to certify: as published, or with the even-n sign fixed",
    )
    p.add_argument("--timings", action="store_true", help="include per-check timings")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except expr_io.ModelValidationError as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
