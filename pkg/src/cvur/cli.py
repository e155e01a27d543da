"""``cvur`` command line.

Exit codes: 0 success, 1 input error, 2 a relation was violated beyond
tolerance (for proven relations this is a numerics alarm).
"""

from __future__ import annotations

import argparse
import inspect
import json
import math
import re
import sys
from fractions import Fraction

import numpy as np

from . import conjecture_lab as lab
from . import relations
from .quadratures import state_moments
from .serialization import SchemaError, load_quadrature_file, load_state
from .states import GaussianState, is_physical, purity
from .symplectic import two_mode_symplectic_eigenvalues, williamson

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2

TABLE1_ROWS = (
    "bbm",
    "tight_ccv",
    "vector_eur",
    "tight_vector_eur",
    "conjecture1",
    "conjecture2",
    "conjecture3",
    "conjecture4",
)
ONE_MODE_ROWS = {"conjecture3", "conjecture4"}

_ANGLE = re.compile(r"^\s*([+-]?)\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$", re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Radians from ``"0.7"``, ``"pi"``, ``"pi/4"``, ``"5pi/3"``, ``"-2*pi/3"``."""
    match = _ANGLE.match(str(text))
    if match is None:
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None
    sign, num, den = match.groups()
    factor = Fraction(num or "1") / Fraction(den or "1")
    return (-1 if sign == "-" else 1) * float(factor) * math.pi


def parse_angle_list(text: str) -> list[float]:
    return [parse_angle(part) for part in text.split(",") if part.strip()]


class InputError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_physical_state(path, allow_unphysical: bool = False):
    state = load_state(path)
    if isinstance(state, GaussianState) and not allow_unphysical and not is_physical(state):
        raise InputError(f"{path}: covariance matrix violates nu_min >= 1/2 (unphysical state)")
    return state


def _relation_options(args, state) -> dict:
    accepted = list(inspect.signature(relations.RELATIONS[args.relation]).parameters)[1:]
    opts = lab.default_options(args.relation, state.n)
    if args.quadratures:
        given = load_quadrature_file(args.quadratures)
        extra = sorted(set(given) - set(accepted))
        if extra:
            raise InputError(f"relation {args.relation} takes {accepted}; quadrature file gives {extra}")
        opts.update(given)
    for name in ("alpha", "beta", "theta", "phi", "m"):
        value = getattr(args, name, None)
        if value is not None:
            if name not in accepted:
                raise InputError(f"relation {args.relation} does not take --{name}")
            opts[name] = value
    missing = [name for name in accepted if name not in opts]
    if missing:
        raise InputError(f"relation {args.relation} needs {missing}")
    return {k: v for k, v in opts.items() if k in accepted}


def _text_report(report: relations.RelationReport) -> str:
    status = "degenerate bound" if report.degenerate else ("saturated" if report.saturated else "holds")
    if report.violated:
        status = "VIOLATED"
    return (
        f"{report.id} [{report.path}]\n"
        f"  lhs   = {report.lhs:.12g}\n"
        f"  rhs   = {report.rhs:.12g}\n"
        f"  slack = {report.slack:.6e}  ({status}, tol {report.tolerance:g})\n"
    )


def cmd_check(args) -> int:
    state = _load_physical_state(args.state, allow_unphysical=args.relation == "simon_physicality")
    report = relations.evaluate(args.relation, state, **_relation_options(args, state))
    _emit(_dumps(report.to_dict()) if args.out == "json" else _text_report(report), None)
    return EXIT_VIOLATION if report.violated else EXIT_OK


def table1_rows(state) -> tuple[list[dict], bool]:
    """Evaluate each summary row (entropic, entropy-power and variance forms); returns the JSON rows and whether a proven row was violated."""
    rows, violated = [], False
    for rid in TABLE1_ROWS:
        if rid in ONE_MODE_ROWS and state.n != 1:
            rows.append({"id": rid, "skipped": True, "reason": "relation is stated for one-mode states"})
            continue
        report = relations.evaluate(rid, state, **lab.default_options(rid, state.n))
        proven = rid in relations.PROVEN
        violated |= proven and report.violated
        rows.append({**report.to_dict(), "skipped": False, "proven": proven})
    return rows, violated


def cmd_table1(args) -> int:
    state = _load_physical_state(args.state)
    rows, violated = table1_rows(state)
    kind = "gaussian" if isinstance(state, GaussianState) else "fock"
    _emit(_dumps({"state": {"type": kind, "n_modes": state.n}, "rows": rows}), args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_figure2(args) -> int:
    if args.phi_steps < 2:
        raise InputError("--phi-steps must be >= 2")
    rows = lab.figure2_curve(args.r, args.thetas, args.phi_steps)
    if args.out in (None, "-"):
        lab.write_figure2_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="\n") as fh:
            lab.write_figure2_csv(rows, fh)
    return EXIT_OK


def cmd_scan(args) -> int:
    relation = f"conjecture{args.conjecture}" if args.conjecture else args.relation
    family = lab.make_family(args.family)
    options = {"m": args.m} if args.m is not None else {}
    if args.iters < 1:
        raise InputError("--iters must be >= 1")
    result = lab.scan(relation, family, args.iters, seed=args.seed, optimize=args.optimize, options=options)
    _emit(_dumps(result.to_dict()), args.out)
    return EXIT_VIOLATION if result.violated else EXIT_OK


def cmd_williamson(args) -> int:
    state = load_state(args.state)
    _, cov = state_moments(state)
    try:
        nu = williamson(cov)
        physical = bool(nu[-1] >= 0.5 - 1e-10)
    except ValueError as exc:
        nu, physical = None, False
        note = str(exc)
    else:
        note = None
    out = {
        "n_modes": state.n,
        "symplectic_eigenvalues": None if nu is None else nu.tolist(),
        "det_cov": float(np.linalg.det(cov)),
        "physical": physical,
    }
    if isinstance(state, GaussianState):
        out["purity"] = purity(state) if physical else None
    else:
        out["purity"] = 1.0
    if state.n == 2 and nu is not None:
        out["two_mode_closed_form"] = two_mode_symplectic_eigenvalues(cov).tolist()
    if note:
        out["error"] = note
    if args.out == "json":
        _emit(_dumps(out), None)
    else:
        lines = [f"{k}: {v}" for k, v in out.items()]
        _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); exit 2 is reserved for violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvur", description="Continuous-variable uncertainty relations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate one relation on a state file")
    p.add_argument("--relation", required=True, choices=sorted(relations.RELATIONS))
    p.add_argument("--state", required=True)
    p.add_argument("--quadratures", help="JSON quadrature set, or object of named sets (Y, Z, A, B, R)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--theta", type=parse_angle)
    p.add_argument("--phi", type=parse_angle)
    p.add_argument("--m", type=int)
    p.add_argument("--out", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("table1", help="every entropic, entropy-power and variance row for a state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", help="output JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figure2", help="rotated-quadrature entropy sums over squeezing angle (CSV)")
    p.add_argument("--r", type=float, default=0.2)
    p.add_argument("--thetas", type=parse_angle_list, default=list(lab.FIGURE2_THETAS))
    p.add_argument("--phi-steps", type=int, default=360)
    p.add_argument("--out", help="output CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("scan", help="seeded minimum-slack search over a state family")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--conjecture", type=int, choices=(1, 2, 3, 4))
    target.add_argument("--relation", choices=sorted(relations.RELATIONS))
    p.add_argument("--family", default="fock_superposition", choices=sorted(lab.FAMILIES))
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, help="number of equidistributed quadratures (conjecture 4)")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--out", help="output JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("williamson", help="symplectic eigenvalues, purity and physicality of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_williamson)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SchemaError, FileNotFoundError, IsADirectoryError, ValueError, TypeError) as exc:
        print(f"cvur {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
