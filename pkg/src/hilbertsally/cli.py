"""Batch front end: parse a job file, run the pipeline, emit reports.

Job files are flat sectioned text (grammar in the README); reports are a
fixed-key JSON object on stdout (or --out), byte-identical for identical
job and seed.  Human-readable progress goes to stderr.  Exit codes:
0 success, 2 parse errors, 3 violated mathematical hypotheses,
4 window too small.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import classify
from .closure import MonomialIdeal, integral_closure, normal_power
from .errors import (
    ClassifierInconsistencyError,
    DegreeWindowError,
    HilbertSallyError,
    HypothesisViolation,
    JobError,
    PolyParseError,
    WindowTooSmallError,
)
from .filtration import Filtration, check_admissible
from .hilbert import build_hilbert_data, hilbert_function, infer_stabilization
from .ideals import Ideal, monomial_layer
from .poly import Ring, parse_polynomial
from .reduction import (
    check_itoh,
    find_minimal_reduction,
    sally_lengths,
    valabrega_valla,
)

COMMANDS = ("hilbert", "reduction", "sally", "classify", "closure", "selftest")


class JobSpec:
    def __init__(self):
        self.variables = None
        self.field = 32003
        self.ideals = {}  # name -> list of generator strings
        self.filtration_kind = None
        self.filtration_base = None
        self.filtration_table = None
        self.command = None
        self.max_n = None
        self.seed = 0
        self.levels = 2
        self.reduction_name = None
        self.closure_power = 1
        self.sally_direct = None


def parse_job(text):
    """Parse the sectioned job grammar; raises JobError with a line number."""
    spec = JobSpec()
    section = None
    section_arg = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise JobError(f"line {lineno}: unterminated section header")
            header = line[1:-1].strip().split()
            if not header:
                raise JobError(f"line {lineno}: empty section header")
            section = header[0]
            section_arg = header[1] if len(header) > 1 else None
            if section == "ideal":
                if section_arg is None:
                    raise JobError(f"line {lineno}: ideal section needs a name")
                spec.ideals.setdefault(section_arg, [])
            elif section not in ("ring", "filtration", "task"):
                raise JobError(f"line {lineno}: unknown section {section!r}")
            continue
        if "=" not in line:
            raise JobError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if section == "ring":
            if key == "variables":
                spec.variables = tuple(
                    v for v in value.replace(",", " ").split() if v
                )
            elif key == "field":
                if value.lower() in ("q", "qq"):
                    spec.field = None
                elif value.lower().startswith("fp:"):
                    spec.field = int(value[3:])
                else:
                    raise JobError(f"line {lineno}: field must be fp:<p> or q")
            else:
                raise JobError(f"line {lineno}: unknown ring key {key!r}")
        elif section == "ideal":
            if key != "gens":
                raise JobError(f"line {lineno}: unknown ideal key {key!r}")
            spec.ideals[section_arg] = [
                t.strip() for t in value.split(";") if t.strip()
            ]
        elif section == "filtration":
            if key == "kind":
                spec.filtration_kind = value
            elif key == "base":
                spec.filtration_base = value
            elif key == "entries":
                spec.filtration_table = [
                    t.strip() for t in value.split(";") if t.strip()
                ]
            else:
                raise JobError(f"line {lineno}: unknown filtration key {key!r}")
        elif section == "task":
            if key == "command":
                spec.command = value
            elif key == "max_n":
                spec.max_n = int(value)
            elif key == "seed":
                spec.seed = int(value)
            elif key == "levels":
                spec.levels = int(value)
            elif key == "reduction":
                spec.reduction_name = value
            elif key == "n":
                spec.closure_power = int(value)
            elif key == "sally_direct":
                spec.sally_direct = int(value)
            else:
                raise JobError(f"line {lineno}: unknown task key {key!r}")
        else:
            raise JobError(f"line {lineno}: key outside any section")
    if spec.command not in COMMANDS:
        raise JobError(f"unknown or missing command {spec.command!r}")
    if spec.command != "selftest":
        if not spec.variables:
            raise JobError("missing [ring] variables")
    return spec


def _expand_generator(token, ring):
    """A generator entry: a polynomial, or m^K for the degree-K monomials."""
    stripped = token.replace(" ", "")
    if stripped.startswith("m^"):
        return monomial_layer(ring, int(stripped[2:]))
    return [parse_polynomial(token, ring)]


def _build_ring(spec):
    return Ring(spec.variables, spec.field)


def _build_ideal(spec, ring, name):
    if name not in spec.ideals:
        raise JobError(f"ideal {name!r} not defined")
    gens = []
    for token in spec.ideals[name]:
        gens.extend(_expand_generator(token, ring))
    return Ideal(ring, gens)


def _build_filtration(spec, ring):
    kind = spec.filtration_kind
    if kind is None:
        raise JobError("missing [filtration] kind")
    if kind == "table":
        if not spec.filtration_table:
            raise JobError("table filtration needs entries")
        ideals = [_build_ideal(spec, ring, n) for n in spec.filtration_table]
        return Filtration.from_table(ring, ideals)
    if spec.filtration_base is None:
        raise JobError("missing [filtration] base")
    base = _build_ideal(spec, ring, spec.filtration_base)
    if kind == "adic":
        return Filtration.adic(base)
    if kind == "declared_normal":
        return Filtration.declared_normal(base)
    if kind == "normal_monomial":
        return Filtration.normal_monomial(ring, MonomialIdeal.from_ideal(base))
    raise JobError(f"unknown filtration kind {kind!r}")


def _empty_report(spec):
    field = "q" if spec.field is None else f"fp:{spec.field}"
    return {
        "ring": list(spec.variables or ()),
        "field": field,
        "command": spec.command,
        "seed": spec.seed,
        "lengths": None,
        "e": None,
        "numerator": None,
        "r": None,
        "itoh": None,
        "vv": None,
        "cm": None,
        "case": None,
        "m": None,
        "checks": [],
        "normality_assumed": False,
        "warnings": [],
        "sally": None,
        "generators": None,
    }


def _verbose(args, msg):
    if args and getattr(args, "verbose", False):
        print(msg, file=sys.stderr, flush=True)


def _window(spec):
    if spec.max_n is None:
        raise JobError("missing task max_n")
    d = len(spec.variables)
    if spec.max_n < d + 5:
        raise JobError(f"max_n must be at least d + 5 = {d + 5}")
    return spec.max_n


def _run_pipeline(spec, args, want):
    ring = _build_ring(spec)
    F = _build_filtration(spec, ring)
    report = _empty_report(spec)
    report["normality_assumed"] = F.normality_assumed
    N = _window(spec)
    if F.kind == "table":
        adm = check_admissible(F, min(N, 4))
        if not adm.ok:
            raise HypothesisViolation(
                "table filtration is not admissible: " + "; ".join(adm.violations)
            )
    threads = getattr(args, "threads", 1) if args else 1
    if want == "hilbert":
        lengths = hilbert_function(F, N, threads=threads)
        r_hat = infer_stabilization(lengths, ring.d)
        hd = build_hilbert_data(F, N, r_hat, threads=threads)
        report["lengths"] = list(hd.lengths)
        report["e"] = list(hd.coefficients)
        report["numerator"] = list(hd.series_numerator)
        report["r"] = r_hat
        report["warnings"].append(
            "stabilization index inferred from the samples, not from a reduction"
        )
        return report
    explicit = None
    if spec.reduction_name:
        explicit = _build_ideal(spec, ring, spec.reduction_name)
    _verbose(args, "searching for a minimal reduction...")
    red = find_minimal_reduction(F, spec.seed, N, explicit_J=explicit)
    _verbose(args, f"reduction number r = {red.r}")
    hd = build_hilbert_data(F, N, red.r, threads=threads)
    check_itoh(F, red)
    valabrega_valla(F, red)
    report["lengths"] = list(hd.lengths)
    report["e"] = list(hd.coefficients)
    report["numerator"] = list(hd.series_numerator)
    report["r"] = red.r
    report["itoh"] = red.itoh_ok
    report["vv"] = list(red.vv_table)
    report["cm"] = red.cm_verdict
    report["warnings"].extend(red.warnings)
    if want == "reduction":
        report["checks"].append(
            {
                "name": "reduction generators",
                "expected": None,
                "computed": [g.to_text() for g in red.J.generators],
                "ok": True,
            }
        )
        return report
    _verbose(args, "building Sally tables...")
    tab = sally_lengths(
        F, red, spec.levels, N, hd, direct_window=spec.sally_direct
    )
    report["sally"] = {
        "s": list(tab.s),
        "c": {str(k): list(v) for k, v in sorted(tab.c.items())},
        "l": {str(k): list(v) for k, v in sorted(tab.l.items())},
        "diag": [v if v is not None else None for v in tab.diag],
        "l2": tab.l2,
        "delta": tab.delta,
        "c2_mult": tab.c2_mult,
        "c2_fit": tab.c2_fit,
        "provenance": {str(k): list(v) for k, v in sorted(tab.provenance.items())},
        "level_condition": {
            str(k): v for k, v in sorted(tab.level_condition.items())
        },
    }
    report["warnings"].extend(tab.warnings)
    if want == "sally":
        return report
    _verbose(args, "classifying...")
    try:
        rep = classify(F, red, hd, tab)
    except ClassifierInconsistencyError as exc:
        if exc.report is not None:
            _fill_classification(report, exc.report)
        raise ClassifierInconsistencyError(str(exc), report) from exc
    _fill_classification(report, rep)
    return report


def _fill_classification(report, rep):
    report["case"] = rep.case
    report["m"] = rep.m
    report["cm"] = rep.cm_verdict
    report["checks"] = [c.as_dict() for c in rep.checks]
    report["checks"].append(
        {
            "name": "depth verdict",
            "expected": None,
            "computed": rep.depth,
            "ok": True,
        }
    )
    report["warnings"] = list(dict.fromkeys(report["warnings"] + rep.warnings))


def _run_closure(spec):
    ring = _build_ring(spec)
    report = _empty_report(spec)
    if spec.filtration_base is None:
        # closure of the only ideal in the job when base is unset
        if len(spec.ideals) != 1:
            raise JobError("closure command needs a filtration base ideal name")
        name = next(iter(spec.ideals))
    else:
        name = spec.filtration_base
    mono = MonomialIdeal.from_ideal(_build_ideal(spec, ring, name))
    result = normal_power(mono, spec.closure_power)
    report["generators"] = sorted(list(e) for e in result.exponents)
    return report


def _run_selftest(spec):
    report = _empty_report(spec)
    report["ring"] = []
    checks = report["checks"]

    def record(name, ok):
        checks.append({"name": name, "expected": True, "computed": ok, "ok": ok})

    ring = Ring(("x", "y"))
    F = Filtration.adic(Ideal.maximal(ring))
    red = find_minimal_reduction(F, 7, 8)
    hd = build_hilbert_data(F, 7, red.r)
    check_itoh(F, red)
    valabrega_valla(F, red)
    tab = sally_lengths(F, red, 2, 7, hd)
    rep = classify(F, red, hd, tab)
    record("maximal-ideal filtration classifies as R1", rep.case == "R1")
    record("maximal-ideal multiplicity is 1", hd.coefficients == (1, 0, 0))

    mono = MonomialIdeal(2, [(3, 0), (0, 3)])
    closed = integral_closure(mono)
    record(
        "closure of the two cubics is the cube of the maximal ideal",
        set(closed.exponents) == {(3, 0), (2, 1), (1, 2), (0, 3)},
    )
    Fn = Filtration.normal_monomial(ring, mono)
    J = Ideal(ring, [parse_polynomial("x^3", ring), parse_polynomial("y^3", ring)])
    red2 = find_minimal_reduction(Fn, 1, 8, explicit_J=J)
    hd2 = build_hilbert_data(Fn, 7, red2.r)
    check_itoh(Fn, red2)
    valabrega_valla(Fn, red2)
    tab2 = sally_lengths(Fn, red2, 2, 7, hd2)
    rep2 = classify(Fn, red2, hd2, tab2)
    record("normal cubic pair has coefficients (9, 3, 0)", hd2.coefficients == (9, 3, 0))
    record("normal cubic pair is Cohen-Macaulay with empty tables", rep2.cm_verdict
           and all(v == 0 for v in tab2.s))
    ok_all = all(c["ok"] for c in checks)
    if not ok_all:
        raise HypothesisViolation("selftest failed")
    return report


def run(spec, args=None):
    """Execute a parsed job; returns (exit_code, report dict)."""
    try:
        if spec.command == "selftest":
            return 0, _run_selftest(spec)
        if spec.command == "closure":
            return 0, _run_closure(spec)
        return 0, _run_pipeline(spec, args, spec.command)
    except (JobError, PolyParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    except (WindowTooSmallError, DegreeWindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4, None
    except ClassifierInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        report = exc.report if isinstance(exc.report, dict) else None
        return 3, report
    except HilbertSallyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3, None


def render(report):
    return json.dumps(report, separators=(",", ":"), sort_keys=False) + "\n"


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hilbertsally",
        description="Hilbert coefficients, reduction numbers and Sally tables "
        "for m-primary ideals in polynomial rings",
    )
    parser.add_argument("--job", required=True, help="job file path")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--seed", type=int, help="override the job seed")
    parser.add_argument("--max-n", type=int, help="override the job window")
    parser.add_argument("--field", help="override the field: fp:<p> or q")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel workers for the Hilbert function")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    try:
        with open(args.job, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read job file: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_job(text)
    except (JobError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        spec.seed = args.seed
    if args.max_n is not None:
        spec.max_n = args.max_n
    if args.field:
        if args.field.lower() in ("q", "qq"):
            spec.field = None
        elif args.field.lower().startswith("fp:"):
            spec.field = int(args.field[3:])
        else:
            print("error: --field must be fp:<p> or q", file=sys.stderr)
            return 2
    code, report = run(spec, args)
    if report is not None:
        payload = render(report)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
