"""Command-line interface: ``qubitmech {amplitude,table,verify} FILE ...``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 capacity error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import astuple, dataclass, fields

from ._numeric import make_cld
from .core import TRANSITIONS, ComplexAmplitude, PathwayQuery, amplitude_from_scaled
from .engine import amplitude_extended, amplitude_general
from .errors import CapacityExceeded, SequenceFileError
from .seqfile import load_sequence_file
from .verify import all_passed, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3

CSV_HEADER = (
    "order", "transition", "re", "im", "magnitude", "phase",
    "log_magnitude", "cum_re", "cum_im", "parity_mismatch",
)


@dataclass(frozen=True)
class AmplitudeRecord:
    order: int
    transition: str
    re: float
    im: float
    magnitude: float
    phase: float
    log_magnitude: float
    cum_re: float
    cum_im: float
    parity_mismatch: bool

    @classmethod
    def build(cls, q: PathwayQuery, amp: ComplexAmplitude, cumulative: complex, degrees: bool = False):
        phase = math.degrees(amp.phase) if degrees else amp.phase
        return cls(
            q.order, q.label, amp.real, amp.imag, math.hypot(amp.real, amp.imag), phase,
            amp.log_magnitude, cumulative.real, cumulative.imag, not q.parity_ok,
        )

    def as_json(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        if not math.isfinite(out["log_magnitude"]):
            out["log_magnitude"] = None
        return out

    def csv_row(self) -> list[str]:
        row = []
        for value in astuple(self):
            if isinstance(value, bool):
                row.append("true" if value else "false")
            elif isinstance(value, float):
                row.append(_fmt(value))
            else:
                row.append(str(value))
        return row


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _records(seq, transition: str, orders, degrees: bool) -> list[AmplitudeRecord]:
    a, b = int(transition[1]), int(transition[0])
    wanted = set(orders)
    running = make_cld(0, 0)
    out = []
    for n in range(max(wanted) + 1):
        q = PathwayQuery(a, b, n)
        running = running + amplitude_extended(seq, q)
        if n in wanted:
            cumulative = amplitude_from_scaled(running, 0, 0).value
            out.append(AmplitudeRecord.build(q, amplitude_general(seq, q), cumulative, degrees))
    return out


def _render(records: list[AmplitudeRecord], fmt: str, single: bool) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(r.csv_row())
        return buf.getvalue()
    if single:
        return json.dumps(records[0].as_json()) + "\n"
    return "[\n" + ",\n".join(json.dumps(r.as_json()) for r in records) + "\n]\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--degrees", action="store_true", help="phases in the file (and phase output) are in degrees")

    parser = argparse.ArgumentParser(prog="qubitmech", description="Pathway amplitudes of piecewise-constant qubit controls.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitude", parents=[common], help="one pathway amplitude U_ba^N")
    p.add_argument("file", help="sequence file, or - for stdin")
    p.add_argument("transition", choices=TRANSITIONS, help='"ba": final state first')
    p.add_argument("order", type=_nonneg_int)

    p = sub.add_parser("table", parents=[common], help="amplitudes and partial sums for orders 0..n-max")
    p.add_argument("file")
    p.add_argument("transition", choices=TRANSITIONS)
    p.add_argument("--n-max", type=_nonneg_int, default=20)

    p = sub.add_parser("verify", parents=[common], help="check the solver against the brute-force oracles")
    p.add_argument("file")
    p.add_argument("--n-max", type=_nonneg_int, default=12)
    p.add_argument("--tol-analytic", type=float, default=1e-11)
    p.add_argument("--tol-quadrature", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quad-points", type=int, default=16)
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "table" and args.n_max > 200:
        parser.error("--n-max must be at most 200")
    if args.command == "verify" and not 2 <= args.quad_points <= 64:
        parser.error("--quad-points must be in [2, 64]")
    try:
        sf = load_sequence_file(args.file, degrees=args.degrees)
        if args.command == "amplitude":
            records = _records(sf.sequence, args.transition, [args.order], args.degrees)
            text = _render(records, args.format, single=True)
            code = EXIT_OK
        elif args.command == "table":
            records = _records(sf.sequence, args.transition, range(args.n_max + 1), args.degrees)
            text = _render(records, args.format, single=False)
            code = EXIT_OK
        else:
            report = run_verification(
                sf.sequence,
                n_max=args.n_max,
                tol_analytic=args.tol_analytic,
                tol_quadrature=args.tol_quadrature,
                seed=args.seed,
                quad_points=args.quad_points,
                expected=sf.expected,
            )
            text = json.dumps(report, indent=2) + "\n"
            code = EXIT_OK if all_passed(report) else EXIT_VERIFY_FAILED
    except SequenceFileError as exc:
        print(f"qubitmech: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityExceeded as exc:
        print(f"qubitmech: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    stdout.write(text)
    stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
