"""``qsep`` command line.

Exit codes: 0 certified separable (or success), 1 witnessed not fully
separable (or failed verification), 2 inconclusive, 3 unreadable or invalid
input file, 4 bad command-line arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .bases import adjusted_from_density, spin_from_density
from .decompose import verify_decomposition
from .errors import ArgumentError, ParseError, QsepError, ValidationError
from .io import dump_certificate, dump_coefficients, dump_state, parse_certificate, parse_state
from .report import (
    CERTIFIED,
    EXIT_CODES,
    FAMILIES,
    INCONCLUSIVE,
    WITNESSED,
    FamilyDeclaration,
    analyze,
    describe_family,
    family_outcome,
    show,
    parse_subsets,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 3
EXIT_USAGE = 4

AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ArgumentError(f"expected comma-separated numbers, got {text!r}") from exc


def _vector(text: str) -> tuple[float, float, float]:
    t = text.strip().lower()
    sign = -1.0 if t.startswith("-") else 1.0
    axis = t.lstrip("+-")
    if axis in AXES:
        return tuple(sign * x + 0.0 for x in AXES[axis])
    v = _floats(text)
    if len(v) != 3:
        raise ArgumentError(f"Bloch vector must be an axis (x, -y, ...) or three numbers, got {text!r}")
    return tuple(v)


def _family_params(args) -> dict:
    name = args.name
    need = {
        "ghz": ("n",),
        "werner": ("n", "s"),
        "diagonal": ("n", "tplus", "tminus"),
        "sharpness": ("n", "c", "d"),
        "mu": ("n", "s", "uplus", "uminus"),
        "product": ("m",),
    }[name]
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise ArgumentError(f"family {name} needs {', '.join(missing)}")
    p: dict = {}
    for key in ("n", "s", "c", "d"):
        if key in need:
            p[key] = getattr(args, key)
    for key in ("tplus", "tminus", "uplus", "uminus"):
        if key in need:
            p[key] = _floats(getattr(args, key))
    if name in ("ghz", "werner", "product"):
        p["sign"] = args.sign
    if name in ("ghz", "werner") and args.j is not None:
        p["j"] = args.j
    if name == "product":
        p["vectors"] = [list(_vector(v)) for v in args.m.split(";")]
    return p


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-10, help="verification and Peres tolerance (default 1e-10)")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsep", description="Full-separability tests for n-qubit density matrices.")
    parser.add_argument("--version", action="version", version=f"qsep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the criteria battery on a state file")
    a.add_argument("state", help="state file, or - for stdin")
    _add_common(a)
    a.add_argument("--cuts", help='Peres qubit subsets, e.g. "1;2,3" (default: all proper subsets for n <= 6)')
    a.add_argument("--exhaustive", action="store_true", help="all proper subsets regardless of n")
    a.add_argument("--jobs", type=int, default=1, help="threads for the Peres scan")
    a.add_argument("--decompose", action="store_true", help="write the certificate when one verifies")
    a.add_argument("--cert", help="certificate output path for --decompose (default stdout)")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--ignore-family", action="store_true", help="analyze as an anonymous matrix")

    f = sub.add_parser("family", help="construct a family member")
    f.add_argument("name", choices=FAMILIES)
    _add_common(f)
    f.add_argument("--n", type=int)
    f.add_argument("--s", type=float)
    f.add_argument("--j", help="GHZ label with leading bit 0, e.g. 010")
    f.add_argument("--sign", choices=("+", "-"), default="+")
    f.add_argument("--c", type=float)
    f.add_argument("--d", type=float)
    f.add_argument("--tplus", help="comma-separated weights, one per label")
    f.add_argument("--tminus")
    f.add_argument("--uplus")
    f.add_argument("--uminus")
    f.add_argument("--m", help='Bloch vectors separated by ";", each an axis or "x,y,z"')
    f.add_argument("--decompose", action="store_true", help="run the family decision and certificate")
    f.add_argument("--cert", help="certificate output path for --decompose")

    v = sub.add_parser("verify", help="check a certificate against a state")
    v.add_argument("certificate")
    v.add_argument("state")
    _add_common(v)

    t = sub.add_parser("transform", help="write the adjusted or spin coefficient table")
    t.add_argument("state")
    t.add_argument("--basis", choices=("spin", "adjusted"), default="spin")
    t.add_argument("--out")
    return parser


def cmd_analyze(args) -> int:
    rho, family = parse_state(_read(args.state))
    if args.ignore_family:
        family = None
    subsets = parse_subsets(args.cuts, rho.n) if args.cuts else None
    if args.jobs < 1:
        raise ArgumentError("--jobs must be at least 1")
    report = analyze(rho, subsets=subsets, tol=args.tol, family=family, exhaustive=args.exhaustive, jobs=args.jobs)
    if args.format == "json":
        _write(args.out, json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n")
    else:
        _write(args.out, report.render())
    if args.decompose and report.overall == CERTIFIED:
        _write(args.cert, dump_certificate(report.certificate))
    return report.exit_code


def cmd_family(args) -> int:
    decl = FamilyDeclaration(args.name, _family_params(args))
    rho = decl.build()
    state = dump_state(rho, decl)
    if not args.decompose:
        _write(args.out, state)
        return EXIT_OK
    if args.out is None:
        raise ArgumentError("--decompose needs --out for the state file")
    _write(args.out, state)
    outcome = family_outcome(decl)
    lines = [describe_family(decl)] + list(outcome.lines)
    cert = outcome.certificate
    if cert is not None:
        check = verify_decomposition(cert, rho, args.tol)
        lines.append(f"certificate: {len(cert)} terms, max deviation {show(check.max_deviation)}")
        verdict = CERTIFIED if check.passed else INCONCLUSIVE
    elif not outcome.result.passed and outcome.kind in ("iff", "necessary"):
        verdict = WITNESSED
    else:
        verdict = INCONCLUSIVE
    if verdict == CERTIFIED:
        _write(args.cert, dump_certificate(cert))
    lines.append(f"overall: {verdict}")
    # A certificate on stdout pushes the diagnosis to stderr.
    stream = sys.stderr if verdict == CERTIFIED and args.cert is None else sys.stdout
    stream.write("\n".join(lines) + "\n")
    return EXIT_CODES[verdict]


def cmd_verify(args) -> int:
    dec = parse_certificate(_read(args.certificate))
    rho, _ = parse_state(_read(args.state))
    if dec.n != rho.n:
        raise ArgumentError(f"certificate has n={dec.n} but state has n={rho.n}")
    res = verify_decomposition(dec, rho, args.tol)
    lines = [f"terms: {len(dec)}", f"max deviation: {show(res.max_deviation)}", f"tolerance: {show(args.tol)}"]
    lines += [f"violation: {v}" for v in res.violations]
    lines.append("verdict: " + ("pass" if res.passed else "fail"))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_transform(args) -> int:
    rho, _ = parse_state(_read(args.state))
    table = spin_from_density(rho) if args.basis == "spin" else adjusted_from_density(rho)
    _write(args.out, dump_coefficients(table))
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "family": cmd_family, "verify": cmd_verify, "transform": cmd_transform}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, ValidationError) as exc:
        sys.stderr.write(f"qsep: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except (QsepError, ValueError) as exc:
        sys.stderr.write(f"qsep: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
