"""Command line: ``nonfreeness {compute,restrict,model,verify}``.

Exit codes: 0 ok, 2 parse/validation error, 3 numerical failure (including a
failed verification trial), 4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import models, stateio, verify
from .errors import CapacityError, NumericalError, ValidationError
from .fock import Bipartition
from .measures import nonfreeness
from .states import PureState, density_from_pure, restrict

EXIT_OK, EXIT_PARSE, EXIT_NUMERICAL, EXIT_CAPACITY = 0, 2, 3, 4


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _options(args, *names) -> dict:
    return {name: getattr(args, name) for name in names}


def cmd_compute(args) -> int:
    raw = Path(args.input).read_bytes()
    state = stateio.parse_state(args.input)
    report = nonfreeness(state, cross_check=args.cross_check, corr=args.corr, log_base=args.log_base)
    opts = _options(args, "cross_check", "corr", "log_base")
    _emit(stateio.dumps_report(report, stateio.digest(raw), opts), args.out)
    return EXIT_OK


def _parse_modes(text: str, d: int) -> tuple[int, ...]:
    try:
        modes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad mode list {text!r}") from exc
    if not modes:
        raise ValidationError("mode list is empty")
    if len(set(modes)) != len(modes) or not all(1 <= m <= d for m in modes):
        raise ValidationError(f"mode list {text!r} must hold distinct labels in 1..{d}")
    return tuple(m - 1 for m in modes)


def cmd_restrict(args) -> int:
    raw = Path(args.input).read_bytes()
    state = stateio.parse_state(args.input)
    rho = density_from_pure(state) if isinstance(state, PureState) else state
    part = restrict(rho, Bipartition(_parse_modes(args.modes, rho.d), rho.d))
    report = nonfreeness(part, cross_check=args.cross_check, corr=args.corr, log_base=args.log_base)
    if args.out:
        stateio.write_state(args.out, part)
    opts = _options(args, "modes", "cross_check", "corr", "log_base")
    _emit(stateio.dumps_report(report, stateio.digest(raw), opts), args.report)
    return EXIT_OK


def cmd_model(args) -> int:
    if args.name == "heisenberg":
        state = models.heisenberg_ground_fermionic(models.LatticeSpec(args.sites, args.geometry))
    else:
        state = models.double_slater(args.m)
    _emit(stateio.dumps_state(state), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in verify.SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}; choose from {sorted(verify.SUITES)}")
    rows = verify.run_suite(args.suite, args.trials, args.seed, args.max_modes)
    _emit(verify.rows_to_csv(rows).rstrip("\n"), args.out)
    failed = sum(not r.ok for r in rows)
    worst = min((r.margin + r.tolerance for r in rows), default=0.0)
    print(f"{args.suite}: {len(rows) - failed}/{len(rows)} trials ok, "
          f"smallest slack {worst:.3e}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonfreeness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def measure_flags(p):
        p.add_argument("--cross-check", action="store_true",
                       help="also evaluate the direct relative-entropy route")
        p.add_argument("--corr", action="store_true", help="also evaluate the fidelity measure")
        p.add_argument("--log-base", choices=["2", "e"], default="2")

    p = sub.add_parser("compute", help="nonfreeness report for a state file")
    p.add_argument("input")
    measure_flags(p)
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("restrict", help="restrict a state to a subset of modes")
    p.add_argument("input")
    p.add_argument("--modes", required=True, help="comma-separated 1-based mode labels to keep")
    measure_flags(p)
    p.add_argument("--out", help="write the restricted state here")
    p.add_argument("--report", help="report path (default: stdout)")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("model", help="write an example state file")
    msub = p.add_subparsers(dest="name", required=True)
    h = msub.add_parser("heisenberg", help="Heisenberg ground state as lattice fermions")
    h.add_argument("--sites", type=int, required=True)
    h.add_argument("--geometry", choices=["ring", "chain"], default="ring")
    h.add_argument("--out")
    ds = msub.add_parser("double-slater", help="superposition of two disjoint Slater determinants")
    ds.add_argument("--m", type=int, required=True)
    ds.add_argument("--out")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("verify", help="randomized property suites, one CSV row per trial")
    p.add_argument("--suite", required=True, help=", ".join(verify.SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-modes", type=int, default=6)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
