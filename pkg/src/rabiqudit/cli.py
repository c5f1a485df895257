"""Command-line entry point: ``rabiqudit {gen,synthesize,propagate,verify,rwa-scan}``.

Exit codes: 0 success, 2 usage or parse error, 3 Strict-to-Projective
fallback or schedule validation error, 4 numerical threshold breached.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from pathlib import Path

from . import algebra, numerics
from .propagators import AtomSpec, DriveKind, DriveParams, TwoLevelAtom
from .schedule import ScheduleFormatError, compose, deserialize, dump_json, serialize, validate
from .synthesis import GateTarget, SynthesisMode, UnsupportedTarget, synthesize

log = logging.getLogger("rabiqudit")

EXIT_OK, EXIT_USAGE, EXIT_FALLBACK, EXIT_THRESHOLD = 0, 2, 3, 4

TARGETS = {
    "sigma1": "Sigma1_2lvl",
    "sigma-theta": "SigmaTheta",
    "w2": "W2",
    "perm01": "Perm01",
    "perm02": "Perm02",
    "sigma1-3": "Sigma1_3",
    "k3": "K3",
    "sigma3": "Sigma3_3",
    "diag-phases": "DiagPhases",
    "matrix-i": "MatrixI",
    "matrix-f": "MatrixF",
    "w3": "W3",
    "custom": "Custom",
}

KINDS = {
    "free0": DriveKind.FREE0,
    "type1": DriveKind.TYPE_I,
    "type2": DriveKind.TYPE_II,
    "type3": DriveKind.TYPE_III,
    "type4": DriveKind.TYPE_IV,
    "type5": DriveKind.TYPE_V,
    "type6": DriveKind.TYPE_VI,
    "type7": DriveKind.TYPE_VII,
    "two-level-u": DriveKind.TWO_LEVEL_U,
    "two-level-v": DriveKind.TWO_LEVEL_V,
}


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_atom_flags(p: argparse.ArgumentParser, two_level_default: bool = False) -> None:
    g = p.add_argument_group("atom")
    g.add_argument("--E0", type=float, default=0.0 if two_level_default else None)
    g.add_argument("--E1", type=float)
    g.add_argument("--E2", type=float)
    g.add_argument("--delta", type=float, default=1.0 if two_level_default else None,
                   help="level spacing E1-E0 of a two-level atom")


def _atom(args, dimension: int):
    if args.E0 is None:
        raise UsageError("--E0 is required")
    try:
        if dimension == 2:
            if args.delta is None:
                raise UsageError("two-level operations need --E0 and --delta")
            return TwoLevelAtom(args.E0, args.delta)
        if args.E1 is None or args.E2 is None:
            raise UsageError("three-level operations need --E0, --E1 and --E2")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            atom = AtomSpec(args.E0, args.E1, args.E2)
        for w in caught:
            log.warning("%s", w.message)
        return atom
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabiqudit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print a fixed matrix as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", required=True, choices=["sigma1", "sigma3", "walsh", "exchange", "gellmann"])

    p = sub.add_parser("synthesize", help="compile a catalog gate into a schedule")
    p.add_argument("--target", required=True, choices=sorted(TARGETS))
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--mode", choices=["strict", "projective"], default="strict")
    p.add_argument("-o", "--output", type=Path, help="schedule file (default: stdout)")
    _add_atom_flags(p)

    p = sub.add_parser("propagate", help="compose a schedule file into its unitary")
    p.add_argument("schedule", type=Path)

    p = sub.add_parser("verify", help="check a closed-form propagator against RK4")
    p.add_argument("--kind", required=True, type=str.lower, choices=sorted(KINDS))
    p.add_argument("--g", type=float, help="coupling on every driven transition")
    p.add_argument("--g1", type=float, default=0.0)
    p.add_argument("--g2", type=float, default=0.0)
    p.add_argument("--g3", type=float, default=0.0)
    p.add_argument("--equal-couplings", action="store_true",
                   help="copy g1 onto g2 and g3 (same as --g)")
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.add_argument("--phi3", type=float, default=None,
                   help="default phi1 + phi2, which keeps TypeVII in closed form")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--tolerance", type=float, default=1e-6)
    _add_atom_flags(p)

    p = sub.add_parser("rwa-scan", help="rotating-wave error of a two-level pi/2 pulse")
    p.add_argument("--g", type=_float_list, default=[0.1, 0.01, 0.001])
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--t", type=float, default=None, help="fixed duration (default: pi/(2g) per g)")
    p.add_argument("--max-infidelity", type=float, default=None)
    _add_atom_flags(p, two_level_default=True)
    return parser


def cmd_gen(args, out) -> int:
    n = args.n
    if n < 2:
        raise UsageError(f"--n must be >= 2, got {n}")
    if args.which == "gellmann":
        if n != 3:
            raise UsageError("gellmann matrices exist for --n 3 only")
        doc = {k: algebra.matrix_to_doc(m) for k, m in algebra.gell_mann_subset().items()}
    else:
        table = {
            "sigma1": lambda: algebra.sigma_generators(n)[0],
            "sigma3": lambda: algebra.sigma_generators(n)[1],
            "walsh": lambda: algebra.walsh_hadamard(n),
            "exchange": lambda: algebra.exchange_matrix(n),
        }
        doc = algebra.matrix_to_doc(table[args.which]())
    out.write(dump_json(doc) + "\n")
    return EXIT_OK


def cmd_synthesize(args, out) -> int:
    name = TARGETS[args.target]
    if name == "Custom":
        raise UsageError("custom targets cannot be synthesized; pick a catalog gate")
    target = GateTarget(name, theta=args.theta, alpha=args.alpha, beta=args.beta)
    atom = _atom(args, target.dimension)
    if not args.g > 0:
        raise UsageError("--g must be positive")
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        result = synthesize(target, atom, args.g, SynthesisMode(args.mode.capitalize()))
    text = serialize(result.schedule)
    if args.output is None:
        out.write(text)
    else:
        args.output.write_text(text)
    for w in result.warnings:
        log.warning("%s", w)
    _report(result)
    return EXIT_FALLBACK if result.warnings else EXIT_OK


def _report(result) -> None:
    err = sys.stderr
    sched = result.schedule
    err.write(f"levels      {result.target.shape[0]}, mode {result.mode.value}\n")
    err.write(f"fidelity    {result.fidelity:.17g}\n")
    err.write(f"max error   {result.max_error:.3e}\n")
    err.write(f"duration    {sched.total_duration:.17g}\n")
    err.write(f"{'#':>3}  {'kind':<10} {'duration':>22}  phases\n")
    for i, s in enumerate(sched.segments):
        p = s.params
        err.write(f"{i:>3}  {s.kind.value:<10} {s.duration:>22.17g}  "
                  f"{p.phi1:.6f} {p.phi2:.6f} {p.phi3:.6f}\n")


def cmd_propagate(args, out) -> int:
    try:
        text = args.schedule.read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    schedule = deserialize(text)
    diag = validate(schedule)
    for w in diag.warnings:
        log.warning("%s", w)
    if not diag.ok:
        for e in diag.errors:
            log.error("%s", e)
        return EXIT_FALLBACK
    out.write(dump_json(algebra.matrix_to_doc(compose(schedule))) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    kind = KINDS[args.kind]
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if args.t < 0:
        raise UsageError("--t must be >= 0")
    g1, g2, g3 = args.g1, args.g2, args.g3
    if args.g is not None:
        g1 = g2 = g3 = args.g
    elif args.equal_couplings:
        g2 = g3 = g1
    phi3 = args.phi1 + args.phi2 if args.phi3 is None else args.phi3
    try:
        params = DriveParams(g1=g1, g2=g2, g3=g3, phi1=args.phi1, phi2=args.phi2, phi3=phi3)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    atom = _atom(args, kind.dimension)
    report = numerics.verify_kind(kind, atom, params, args.t, args.steps)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["kind", "max_state_error", "norm_drift", "steps", "step_norm"])
    w.writerow([report.kind.value, f"{report.max_state_error:.17g}", f"{report.norm_drift:.17g}",
                report.steps, f"{report.step_norm:.17g}"])
    if report.step_norm > numerics.STEP_NORM:
        log.warning("||H|| h = %.3g exceeds %.2g; increase --steps", report.step_norm, numerics.STEP_NORM)
    return EXIT_OK if report.max_state_error <= args.tolerance else EXIT_THRESHOLD


def cmd_rwa_scan(args, out) -> int:
    if not args.g or any(g < 0 for g in args.g):
        raise UsageError("--g needs one or more non-negative values")
    atom = _atom(args, 2)
    points = numerics.rwa_error_scan(atom, args.g, args.phi, args.t)
    out.write(numerics.scan_to_csv(points))
    if args.max_infidelity is not None and any(p.infidelity > args.max_infidelity for p in points):
        return EXIT_THRESHOLD
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "synthesize": cmd_synthesize,
    "propagate": cmd_propagate,
    "verify": cmd_verify,
    "rwa-scan": cmd_rwa_scan,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"rabiqudit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedTarget as exc:
        print(f"rabiqudit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScheduleFormatError as exc:
        print(f"rabiqudit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
