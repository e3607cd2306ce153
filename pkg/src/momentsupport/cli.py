"""Command-line front end.

Subcommands mirror the library layers: ``gen`` writes moment files,
``check`` runs the internal-consistency battery, ``growth``/``box``/
``mass``/``finite`` expose the support analyses, ``recover`` runs atom
recovery, and ``report`` bundles everything.

Exit codes: 0 success, 1 a check battery failed, 2 invalid input,
3 the analysis refused to certify (diverging growth, unstable rank),
4 a degree or budget limit was hit.  Output is deterministic JSON
(sorted keys, no timestamps) unless ``--format csv`` is chosen.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import growth as growth_mod
from . import moments, recovery, support
from .errors import (
    BudgetExceeded,
    DegreeExceeded,
    DimensionMismatch,
    GrowthDiverging,
    IllConditioned,
    MomentFileError,
    NegativePower,
    RankUnstable,
)
from .poly import Polynomial

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_REFUSED = 3
EXIT_BUDGET = 4


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_json(args: argparse.Namespace, obj: object) -> None:
    _emit(args, json.dumps(obj, sort_keys=True, indent=2))


def _load(args: argparse.Namespace) -> moments.MomentSequence:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    return moments.loads(text)


def _parse_point(text: str) -> List[Fraction]:
    cleaned = text.strip().strip("()")
    if not cleaned:
        raise MomentFileError("empty point")
    try:
        return [Fraction(part.strip()) for part in cleaned.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise MomentFileError(f"bad point {text!r}: {exc}") from None


def _parse_atoms(text: str) -> List:
    groups = re.findall(r"\(([^()]*)\)", text)
    if not groups:
        raise MomentFileError(
            "atoms must look like (x:w),(y:w) or (x1,x2:w),(...)"
        )
    pairs = []
    for group in groups:
        if ":" not in group:
            raise MomentFileError(f"atom {group!r} is missing a :weight part")
        coords, weight = group.rsplit(":", 1)
        try:
            pairs.append(
                (
                    [Fraction(c.strip()) for c in coords.split(",")],
                    Fraction(weight.strip()),
                )
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise MomentFileError(f"bad atom {group!r}: {exc}") from None
    return pairs


def cmd_gen(args: argparse.Namespace) -> int:
    if args.atoms:
        measure = moments.AtomicMeasure.from_pairs(_parse_atoms(args.atoms))
        L = moments.from_atomic(measure, args.degree)
    elif args.family:
        L = moments.from_closed_form(args.family, args.degree, count=args.count)
    else:
        raise MomentFileError("gen needs either --atoms or --family")
    _emit(args, moments.dumps(L))
    return EXIT_OK


def _check_battery(L: moments.MomentSequence, seed: int) -> dict:
    checks = []
    top = L.max_degree // 2
    all_psd = True
    worst = 0.0
    for t in range(top + 1):
        report = moments.psd_check(moments.moment_matrix(L, t))
        worst = min(worst, report.min_eigenvalue)
        if not report.is_psd:
            all_psd = False
    checks.append(
        {
            "name": "moment-matrix-psd",
            "passed": all_psd,
            "levels": top + 1,
            "min_eigenvalue": worst,
        }
    )
    rng = random.Random(seed)
    cbs_ok = True
    pair_count = 0
    for _ in range(20):
        a = _random_poly(rng, L.num_vars, 2)
        b = _random_poly(rng, L.num_vars, 2)
        if a.is_zero() or b.is_zero():
            continue
        if a.degree + b.degree > L.max_degree or 2 * max(a.degree, b.degree) > L.max_degree:
            continue
        pair_count += 1
        if not moments.cbs_check(L, a, b):
            cbs_ok = False
    checks.append({"name": "product-inequality", "passed": cbs_ok, "pairs": pair_count})
    mono_ok = all(
        growth_mod.roots_monotone_exact(L, Polynomial.variable(L.num_vars, i))
        for i in range(L.num_vars)
    )
    checks.append({"name": "root-monotonicity", "passed": mono_ok})
    kernel_ok = all(
        growth_mod.kernel_check(L, Polynomial.variable(L.num_vars, i), d=2)
        for i in range(L.num_vars)
    )
    checks.append({"name": "kernel-consistency", "passed": kernel_ok})
    samples = []
    for _ in range(10):
        a = _random_poly(rng, L.num_vars, 1)
        b = _random_poly(rng, L.num_vars, 1)
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        if not a.is_zero() and not b.is_zero():
            samples.append((a, b, lam))
    seminorm = growth_mod.seminorm_props(L, samples, d=1)
    checks.append(
        {"name": "seminorm-laws", "passed": seminorm.all_ok, "samples": len(samples)}
    )
    return {"checks": checks, "passed": all(c["passed"] for c in checks)}


def _random_poly(rng: random.Random, num_vars: int, degree: int) -> Polynomial:
    from .poly import monomials_up_to

    coeffs = {
        exp: Fraction(rng.randint(-3, 3))
        for exp in monomials_up_to(num_vars, degree)
    }
    return Polynomial(num_vars, coeffs)


def cmd_check(args: argparse.Namespace) -> int:
    L = _load(args)
    report = _check_battery(L, args.seed)
    _emit_json(args, report)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def cmd_growth(args: argparse.Namespace) -> int:
    L = _load(args)
    if args.poly:
        polys = [Polynomial.from_text(args.poly, L.num_vars)]
    else:
        polys = [Polynomial.variable(L.num_vars, i) for i in range(L.num_vars)]
    profiles = [growth_mod.growth_profile(L, p) for p in polys]
    if args.format == "csv":
        lines = ["index,value"]
        profile = profiles[0]
        series = profile.roots if args.series == "roots" else profile.ladder
        for idx, value in series:
            lines.append(f"{idx},{value!r}")
        _emit(args, "\n".join(lines))
    else:
        _emit_json(args, [p.to_json_dict() for p in profiles])
    return EXIT_OK


def cmd_box(args: argparse.Namespace) -> int:
    L = _load(args)
    box = support.support_box(L, slack=args.slack)
    _emit_json(args, box.to_json_dict())
    return EXIT_OK


def cmd_mass(args: argparse.Namespace) -> int:
    L = _load(args)
    point = _parse_point(args.point)
    estimate = support.atom_mass(
        L,
        point,
        d=args.d,
        budget=args.budget,
        slack=args.slack,
        epsilon=args.epsilon,
    )
    if args.format == "csv":
        lines = ["n,bound"] + [f"{n},{v!r}" for n, v in estimate.upper_bounds]
        _emit(args, "\n".join(lines))
    else:
        _emit_json(args, estimate.to_json_dict())
    return EXIT_OK


def cmd_finite(args: argparse.Namespace) -> int:
    L = _load(args)
    candidates = None
    if args.candidates:
        candidates = [_parse_point(p) for p in args.candidates.split(";")]
    report = support.finite_support_check(
        L,
        d=args.d,
        bump_candidates=candidates,
        slack=args.slack,
        seed=args.seed,
        budget=args.budget,
    )
    _emit_json(args, report.to_json_dict())
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    L = _load(args)
    if args.method == "prony":
        result = recovery.prony_recover(L)
    else:
        result = recovery.grid_scan(
            L,
            resolution=args.resolution,
            d=args.d,
            budget=args.budget,
            mass_floor=args.mass_floor,
            slack=args.slack,
        )
    _emit_json(args, result.to_json_dict())
    if not result.measure.atoms:
        print("refused: no atoms above the mass floor", file=sys.stderr)
        return EXIT_REFUSED
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    L = _load(args)
    sections: dict = {}
    any_refused = False
    any_failed = False

    profiles = [
        growth_mod.growth_profile(L, Polynomial.variable(L.num_vars, i))
        for i in range(L.num_vars)
    ]
    sections["growth-dichotomy"] = {
        "status": "ok",
        "profiles": [p.to_json_dict() for p in profiles],
    }

    try:
        box = support.support_box(L, slack=args.slack)
        sections["support-box"] = {"status": "ok", "box": box.to_json_dict()}
    except GrowthDiverging as exc:
        any_refused = True
        sections["support-box"] = {"status": "refused", "reason": str(exc)}

    battery = _check_battery(L, args.seed)
    status = "ok" if battery["passed"] else "failed"
    if not battery["passed"]:
        any_failed = True
    sections["consistency-checks"] = {"status": status, **battery}

    try:
        finite = support.finite_support_check(L, d=args.d, seed=args.seed)
        sections["finite-support"] = {"status": "ok", **finite.to_json_dict()}
    except GrowthDiverging as exc:
        any_refused = True
        sections["finite-support"] = {"status": "refused", "reason": str(exc)}

    if args.point:
        try:
            estimate = support.atom_mass(
                L, _parse_point(args.point), d=args.d, slack=args.slack
            )
            sections["singleton-mass"] = {"status": "ok", **estimate.to_json_dict()}
        except GrowthDiverging as exc:
            any_refused = True
            sections["singleton-mass"] = {"status": "refused", "reason": str(exc)}

    _emit_json(args, sections)
    if any_refused:
        return EXIT_REFUSED
    if any_failed:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentsupport",
        description="Support analysis and atom recovery for truncated moment data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a moment file")
    gen.add_argument("--atoms", help='atomic measure, e.g. "(-1:3/4),(1/2:1/4)"')
    gen.add_argument(
        "--family",
        choices=["uniform01", "gaussian", "diracseries"],
        help="closed-form moment family",
    )
    gen.add_argument("--count", type=int, default=20, help="atoms in diracseries")
    gen.add_argument("--degree", type=int, required=True, help="max total degree")
    gen.add_argument("--output", default="-")

    def analysis(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", default="-", help="moment file, - for stdin")
        p.add_argument("--output", default="-")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--slack", type=float, default=0.05)
        return p

    analysis("check", "run the internal-consistency battery")

    growth = analysis("growth", "growth profile of coordinates or a polynomial")
    growth.add_argument("--poly", help="polynomial text, e.g. X1^2 - 2*X1")
    growth.add_argument("--format", choices=["json", "csv"], default="json")
    growth.add_argument("--series", choices=["roots", "ladder"], default="roots")

    analysis("box", "certified support box")

    mass = analysis("mass", "singleton mass upper bounds at a point")
    mass.add_argument("--point", required=True, help='point, e.g. "1/2" or "1/2,0"')
    mass.add_argument("--d", type=int, default=2)
    mass.add_argument("--budget", type=int, default=None)
    mass.add_argument("--epsilon", type=float, default=1.0)
    mass.add_argument("--format", choices=["json", "csv"], default="json")

    finite = analysis("finite", "finite-support certification")
    finite.add_argument("--d", type=int, default=2)
    finite.add_argument("--budget", type=int, default=None)
    finite.add_argument(
        "--candidates", help='semicolon-separated points, e.g. --candidates="-1;1/2"'
    )

    recover = analysis("recover", "recover an atomic measure")
    recover.add_argument("--method", choices=["prony", "grid"], default="prony")
    recover.add_argument("--resolution", type=int, default=21)
    recover.add_argument("--d", type=int, default=2)
    recover.add_argument("--budget", type=int, default=None)
    recover.add_argument("--mass-floor", dest="mass_floor", type=float, default=0.1)

    report = analysis("report", "bundle growth, box, checks, and finiteness")
    report.add_argument("--d", type=int, default=2)
    report.add_argument("--point", help="optional point for a mass section")

    parser.set_defaults(func=None)
    for name, func in [
        ("gen", cmd_gen),
        ("check", cmd_check),
        ("growth", cmd_growth),
        ("box", cmd_box),
        ("mass", cmd_mass),
        ("finite", cmd_finite),
        ("recover", cmd_recover),
        ("report", cmd_report),
    ]:
        sub.choices[name].set_defaults(func=func)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MomentFileError, DimensionMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GrowthDiverging, RankUnstable, IllConditioned, NegativePower) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (BudgetExceeded, DegreeExceeded) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
