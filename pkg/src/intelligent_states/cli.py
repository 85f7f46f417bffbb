"""Command line front end: ``state``, ``scan`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 construction or usage
error. Construction errors print their class name on stderr.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import nonlinearity as nl
from .errors import IntelligentStateError, InvalidParam
from .fock import deformed_quadrature_stats, state_to_dict
from .nonclassicality import REPORT_FIELDS, full_report, photon_number_stats, quadrature_report
from .states import IntelligentStateRequest, TruncationPolicy, build
from .verify import run_checks

SCAN_COLUMNS = ("param_name", "param_value") + REPORT_FIELDS + ("status",)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2


class Swept(str, enum.Enum):
    Z_REAL = "z"
    LAMBDA = "lambda"
    ETA = "eta"


@dataclass
class ScanSpec:
    swept: Swept
    start: float
    stop: float
    steps: int
    f_name: str
    eta: float | None = None
    q: float | None = None
    lam: float = 1.0
    z: complex = 0j
    case: str = "auto"
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if not self.start < self.stop:
            raise InvalidParam("sweep needs start < stop")
        if self.steps < 2:
            raise InvalidParam("sweep needs at least 2 steps")
        if self.swept is Swept.ETA and self.f_name != "trapped-ion":
            raise InvalidParam("an eta sweep needs --f trapped-ion")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def parse_z(text: str) -> complex:
    """``RE`` or ``RE,IM``."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"bad z {text!r}; expected RE[,IM]")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad z {text!r}; expected RE[,IM]") from None
    return complex(re, im)


def parse_sweep(text: str) -> tuple[Swept, float, float, int]:
    """``param=start:stop:steps``."""
    try:
        name, rng = text.split("=", 1)
        start, stop, steps = rng.split(":")
        return Swept(name.strip()), float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad sweep {text!r}; expected z|lambda|eta=START:STOP:STEPS"
        ) from None


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_f(args, eta=None):
    return nl.from_name(args.f, eta=args.eta if eta is None else eta, q=args.q)


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(epsilon_tail=args.tail_eps, n_max=args.n_max)


def _summary(state, f) -> str:
    mean_n, var_n = photon_number_stats(state)
    quad = quadrature_report(state)
    dX, dP, comm = deformed_quadrature_stats(state, f)
    q = "undefined" if mean_n < 1e-14 else f"{(var_n - mean_n) / mean_n:.6g}"
    return (
        f"N={state.n_top} tail_mass={state.tail_mass:.3g} mean_n={mean_n:.6g} "
        f"mandel_q={q} q1={quad.q1:.6g} q2={quad.q2:.6g} dX={dX:.6g} dP={dP:.6g} "
        f"intelligence_residual={dX * dP - 0.5 * abs(comm):.3g}"
    )


def cmd_state(args) -> int:
    f = _resolve_f(args)
    request = IntelligentStateRequest(f, args.lam, args.z, _policy(args), args.case)
    state = build(request)
    dump = json.dumps(state_to_dict(state, f.name, args.lam, args.z))
    summary = _summary(state, f)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump + "\n")
        print(summary)
    else:
        print(dump)
        print(summary, file=sys.stderr)
    return EXIT_OK


def scan_rows(spec: ScanSpec) -> list[dict]:
    """One row per grid point, in grid order; failures become status rows."""
    rows = []
    f_fixed = None
    if spec.swept is not Swept.ETA:
        f_fixed = nl.from_name(spec.f_name, eta=spec.eta, q=spec.q)
    for value in spec.values():
        value = float(value)
        row = dict.fromkeys(SCAN_COLUMNS, "")
        row["param_name"] = spec.swept.value
        row["param_value"] = value
        lam, z = spec.lam, spec.z
        try:
            if spec.swept is Swept.ETA:
                f = nl.trapped_ion(value)
            else:
                f = f_fixed
            if spec.swept is Swept.LAMBDA:
                lam = value
            elif spec.swept is Swept.Z_REAL:
                z = complex(value, 0.0)
            request = IntelligentStateRequest(f, lam, z, spec.truncation, spec.case)
            report = full_report(build(request), f, lam, z)
        except IntelligentStateError as exc:
            row["status"] = type(exc).__name__
        else:
            row.update(report.as_dict())
            row["status"] = "ok"
        rows.append(row)
    return rows


def render_rows(rows: list[dict], format: str) -> str:
    if format == "json":
        clean = [{k: (None if v == "" else v) for k, v in row.items()} for row in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        writer.writerow(
            [fmt(row[c]) if isinstance(row[c], float) else row[c] for c in SCAN_COLUMNS]
        )
    return buf.getvalue()


def cmd_scan(args) -> int:
    if args.sweep is None:
        raise InvalidParam("scan needs --sweep")
    swept, start, stop, steps = args.sweep
    spec = ScanSpec(
        swept, start, stop, steps, args.f, eta=args.eta, q=args.q, lam=args.lam,
        z=args.z, case=args.case, truncation=_policy(args), output_path=args.out,
        format=args.format,
    )
    rows = scan_rows(spec)
    text = render_rows(rows, spec.format)
    if spec.output_path:
        with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    ok = sum(row["status"] == "ok" for row in rows)
    print(f"{ok}/{len(rows)} rows ok", file=sys.stderr)
    return EXIT_OK if ok else EXIT_ERROR


def cmd_verify(args) -> int:
    results = run_checks(quick=args.quick, inject_fault=args.inject_fault)
    for result in results:
        print(result.line())
    failed = [r.name for r in results if not r.passed]
    print("all checks passed" if not failed else f"FAILED: {', '.join(failed)}")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", default="identity",
                        help="identity|trapped-ion|harmonious|hydrogen|penson-solomon|"
                             "dual:<name>|spectrum:<file>")
    common.add_argument("--eta", type=float, default=None, help="Lamb-Dicke parameter")
    common.add_argument("--q", type=float, default=None, help="Penson-Solomon q")
    common.add_argument("--lambda", dest="lam", type=float, default=1.0)
    common.add_argument("--z", type=parse_z, default=0j, metavar="RE[,IM]")
    common.add_argument("--case", choices=("auto", "i", "iii", "iv"), default="auto")
    common.add_argument("--tail-eps", type=float, default=1e-12)
    common.add_argument("--n-max", type=int, default=512)
    common.add_argument("--out", default=None)

    parser = argparse.ArgumentParser(
        prog="intelligent-states",
        description="f-deformed intelligent states: build, scan, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", parents=[common], help="build and dump one state")
    p_state.set_defaults(func=cmd_state)

    p_scan = sub.add_parser("scan", parents=[common], help="parameter sweep table")
    p_scan.add_argument("--sweep", type=parse_sweep, metavar="PARAM=START:STOP:STEPS")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.set_defaults(func=cmd_scan)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--quick", action="store_true", help="reduced grid")
    p_verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IntelligentStateError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
