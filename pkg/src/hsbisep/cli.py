"""``hsbisep`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 validation
failure, 4 sufficient criterion not met, 5 unsupported input class.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as fileio
from .analysis import analyze
from .certificate import verify_certificate
from .construct import assemble_mds_certificate, bisep_certificate, fully_separable_certificate
from .errors import CriterionNotMet, NonUnitTrace, NotHermitian, NotMDS, NotPSD, OutOfRange, ThresholdExceeded
from .hs import REFERENCE_FAMILIES, hs_decompose, is_mds, random_state, reference_state
from .linalg import TOL, Cut, validate_density
from .triads import optimize_frame
from .wnoise import SweepRow, sweep, w_bisep_certificate, w_mixed

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_CRITERION = 4
EXIT_UNSUPPORTED = 5


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _err(msg: str) -> None:
    print(f"hsbisep: {msg}", file=sys.stderr)


def _load_state(path: str, tol: float) -> np.ndarray:
    try:
        m = fileio.read_state(path)
    except fileio.ParseError as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    try:
        return validate_density(m, tol)
    except (NotHermitian, NonUnitTrace, NotPSD) as exc:
        raise CLIError(EXIT_INVALID, f"invalid state: {exc}") from None


def _floats(text: str, n: int | None, kind: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise CLIError(EXIT_PARSE, f"bad numbers in {kind!r}: {text!r}") from None
    if n is not None and len(vals) != n:
        raise CLIError(EXIT_PARSE, f"{kind} takes {n} values, got {len(vals)}")
    return vals


GEN_FAMILIES = {"canonical": "canonical", "rotated": "rotated", "two-triad": "two_triad", "three-triad": "three_triad"}


def generate(kind: str, seed: int, tol: float) -> np.ndarray:
    """State for a ``gen`` kind string such as ``mds``, ``canonical:1,0,0`` or ``w-noise:0.15``."""
    name, _, args = kind.partition(":")
    if name in ("generic", "mds"):
        if args:
            raise CLIError(EXIT_PARSE, f"{name} takes no parameters")
        return random_state(seed, name, tol)
    if name in GEN_FAMILIES:
        family = GEN_FAMILIES[name]
        vals = _floats(args, len(REFERENCE_FAMILIES[family]), name)
        try:
            return reference_state(family, vals, tol)
        except NotPSD as exc:
            raise CLIError(EXIT_INVALID, f"invalid state: {exc}") from None
    if name == "w-noise":
        (p,) = _floats(args, 1, name)
        try:
            return w_mixed(p, tol).rho
        except OutOfRange as exc:
            raise CLIError(EXIT_PARSE, str(exc)) from None
    choices = "generic, mds, " + ", ".join(f"{k}:..." for k in GEN_FAMILIES) + ", w-noise:p"
    raise CLIError(EXIT_PARSE, f"unknown kind {kind!r}; expected one of {choices}")


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    rho = generate(args.kind, args.seed, args.tol)
    fileio.write_state(rho, args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    rho = _load_state(args.state, args.tol)
    d = hs_decompose(rho, args.tol)
    lines = d.describe(args.threshold)
    if not lines:
        print("no nonidentity coefficients")
    else:
        print("\n".join(lines))
    return EXIT_OK


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return f"{x:.10g}"


def cmd_analyze(args) -> int:
    rho = _load_state(args.state, args.tol)
    report = analyze(rho, args.cut, args.tol)
    if args.format == "json":
        print(fileio.dumps(report.as_dict()))
        return EXIT_OK
    rows = [
        ("MDS", report.is_mds),
        ("triad norms", ", ".join(_fmt(n) for n in report.per_triad_norms)),
        ("triad norm sum", report.norm_sum),
        ("triad criterion met", report.criterion_met),
        ("best-frame norm sum", report.best_frame_norm_sum),
        ("l1 total", report.l1_total),
        ("full separability cost", report.full_sep_cost),
        ("fully separable certified", report.full_sep_met),
        ("biseparability cost", report.bisep_cost),
        (f"biseparable certified ({report.cut})", report.bisep_certified),
    ]
    rows += [(f"PPT min eig {c}", v) for c, v in report.ppt_min_eigs.items()]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v if isinstance(v, str) else _fmt(v)}")
    for v in report.verdicts:
        print(f"verdict: {v}")
    return EXIT_OK


def _certify_state(args):
    rho = _load_state(args.state, args.tol)
    d = hs_decompose(rho, args.tol)
    if args.method == "full":
        return fully_separable_certificate(d, target=rho, tol=args.tol)
    if args.method == "general":
        return bisep_certificate(d, args.cut, target=rho, tol=args.tol)
    if not is_mds(d, args.tol):
        raise NotMDS("input is not an MDS state (one- or two-body coefficients present); try --method general")
    rotations = None
    if args.frame == "optimize":
        rotations = optimize_frame(d, args.tol).rotations
    return assemble_mds_certificate(d, args.cut, target=rho, rotations=rotations, tol=args.tol)


def cmd_certify(args) -> int:
    try:
        if args.family == "w-noise":
            if args.p is None:
                raise CLIError(EXIT_PARSE, "--family w-noise needs --p")
            if args.state is not None:
                raise CLIError(EXIT_PARSE, "give either a state file or --family, not both")
            try:
                cert = w_bisep_certificate(args.p, args.cut, args.tol)
            except OutOfRange as exc:
                raise CLIError(EXIT_PARSE, str(exc)) from None
        else:
            if args.state is None:
                raise CLIError(EXIT_PARSE, "a state file (or --family w-noise) is required")
            cert = _certify_state(args)
    except ThresholdExceeded as exc:
        raise CLIError(EXIT_CRITERION, f"criterion not met: {exc}") from None
    except CriterionNotMet as exc:
        raise CLIError(EXIT_CRITERION, f"criterion not met: norm_sum = {exc.norm_sum:.17g} > 1 ({exc})") from None
    except NotMDS as exc:
        raise CLIError(EXIT_UNSUPPORTED, str(exc)) from None
    fileio.write_certificate(cert, args.out)
    if args.out not in (None, "-"):
        print(f"wrote {len(cert)}-term certificate to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = fileio.read_certificate(args.certificate)
    except fileio.ParseError as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    try:
        rho = fileio.read_state(args.state)
    except fileio.ParseError as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    report = verify_certificate(cert, rho, args.tol)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sweep(args) -> int:
    try:
        rows = sweep(args.pmin, args.pmax, args.steps, args.tol)
    except OutOfRange as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    data = [r.as_tuple() for r in rows]
    if args.format == "csv":
        sys.stdout.write(fileio.rows_to_csv(SweepRow.COLUMNS, data))
    elif args.format == "json":
        print(fileio.dumps([dict(zip(SweepRow.COLUMNS, r)) for r in data]))
    else:
        sys.stdout.write(fileio.rows_to_table(SweepRow.COLUMNS, data))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(EXIT_PARSE, message)


def _cut(text: str) -> Cut:
    try:
        return Cut.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=TOL, help="numerical tolerance (default 1e-10)")

    parser = _Parser(prog="hsbisep", description="Pauli-basis separability analysis of three-qubit states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="write a state file")
    p.add_argument("kind", help="generic | mds | canonical:R1,R2,R3 | rotated:.. | two-triad:.. | three-triad:.. | w-noise:p")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", parents=[common], help="list Pauli coefficients")
    p.add_argument("state", help="state file, or - for stdin")
    p.add_argument("--threshold", type=float, default=1e-12)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("analyze", parents=[common], help="evaluate every criterion")
    p.add_argument("state")
    p.add_argument("--cut", type=_cut, default=Cut.A_BC)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", parents=[common], help="write a separability certificate")
    p.add_argument("state", nargs="?")
    p.add_argument("--cut", type=_cut, default=Cut.A_BC)
    p.add_argument("--out", default="-")
    p.add_argument("--family", choices=("w-noise",))
    p.add_argument("--p", type=float)
    p.add_argument("--method", choices=("mds", "general", "full"), default="mds")
    p.add_argument("--frame", choices=("identity", "optimize"), default="identity")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="check a certificate against a state")
    p.add_argument("certificate")
    p.add_argument("state")
    p.add_argument("--tol", type=float, default=None, help="default: the tolerance stored in the certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="tabulate the noisy W family")
    p.add_argument("pmin", type=float)
    p.add_argument("pmax", type=float)
    p.add_argument("steps", type=int, nargs="?", default=31)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CLIError as exc:
        _err(str(exc))
        return exc.code
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
