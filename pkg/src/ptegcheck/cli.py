"""Command-line front end.

Exit status: 0 when the net is consistent / the trajectory is valid / no
∞-weight path exists, 1 for the negative outcome, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import serialization as ser
from .maxplus import MaxPlusError
from .precedence import ClosureDidNotConverge, NotInNonegsetError, phi_trace
from .periodic import detect_inf_weight_N
from .pteg import (
    PTEG,
    InconsistentNetError,
    NetError,
    Trajectory,
    check,
    normalize_marking,
    validate_trajectory,
    witness_prefix,
)
from .ultimate import detect_inf_weight_U

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.start = time.perf_counter()

    def timings(self) -> dict:
        if not self.enabled:
            return {}
        return {"total_ms": round((time.perf_counter() - self.start) * 1000, 3)}


def _read(path: str):
    return ser.loads(Path(path).read_text(encoding="utf-8"))


def _labels(net) -> Optional[list]:
    if isinstance(net, PTEG):
        return list(normalize_marking(net).transitions)
    return None


def _emit(args, doc: dict, text: str) -> None:
    sys.stdout.write(ser.dumps(doc) if args.json else text.rstrip("\n") + "\n")


def _fmt(v) -> str:
    return str(ser.scalar_to_json(v))


def _fmt_traj(traj: Trajectory) -> str:
    lines = [] if traj.t0 is None else [f"  t0 = {_fmt(traj.t0)}"]
    for k, row in enumerate(traj.x, start=1):
        lines.append(f"  x({k}) = (" + ", ".join(_fmt(v) for v in row) + ")")
    return "\n".join(lines)


def _fmt_circuit(c, labels) -> str:
    if c is None:
        return ""
    names = [labels[i] if labels else str(i + 1) for i in c.nodes]
    return " -> ".join(names + names[:1]) + f" (weight {_fmt(c.weight)})"


def _summary_periodic(v, labels) -> str:
    if v.kind.value == "positive_circuit":
        return (f"positive circuit at shift bound {v.shift_bound}: "
                + _fmt_circuit(v.circuit, labels))
    if v.kind.value == "divergence":
        entries = ", ".join(f"({i + 1},{j + 1})" for i, j in v.diverging_entries)
        return f"Pi(n^2+1) exceeds Pi(n^2) at {entries}"
    return f"no infinite-weight path ({v.evaluations} Pi evaluations)"


def _summary_ultimate(v, labels) -> str:
    kind = v.kind.value
    if kind == "neg_part_diverges":
        return "negative part: " + _summary_periodic(v.neg, labels)
    if kind == "pos_part_diverges":
        return "positive part: " + _summary_periodic(v.pos, labels)
    if kind == "transient_positive_circuit":
        return "transient block has a positive circuit: " + _fmt_circuit(v.circuit, labels)
    extra = "" if v.fixpoint_h is None else f" (fixpoint at h = {v.fixpoint_h})"
    return "no infinite-weight path" + extra


def _summary(v, labels) -> str:
    if hasattr(v, "fixpoint_h"):
        return _summary_ultimate(v, labels)
    return _summary_periodic(v, labels)


def cmd_check(args) -> int:
    timer = _Timer(args.timings)
    net = ser.net_from_json(_read(args.file))
    rep = check(net, args.semantics)
    witness = None
    if rep.consistent and args.length:
        witness = witness_prefix(net, args.semantics, args.length, args.t0)
    labels = _labels(net)
    doc = ser.consistency_report_to_json(rep, labels, witness, timer.timings())
    text = (f"{doc['verdict']} ({args.semantics} initial conditions)\n"
            + _summary(rep.certificate, labels) + "\n")
    if witness is not None:
        text += "witness prefix:\n" + _fmt_traj(witness)
    _emit(args, doc, text)
    return EXIT_OK if rep.consistent else EXIT_NEGATIVE


def cmd_witness(args) -> int:
    timer = _Timer(args.timings)
    net = ser.net_from_json(_read(args.file))
    try:
        traj = witness_prefix(net, args.semantics, args.length, args.t0)
    except InconsistentNetError:
        rep = check(net, args.semantics)
        doc = ser.report("witness", "inconsistent",
                         ser.verdict_to_json(rep.certificate, _labels(net)),
                         semantics=args.semantics, timings=timer.timings())
        _emit(args, doc, "inconsistent: no witness\n" + _summary(rep.certificate, _labels(net)))
        return EXIT_NEGATIVE
    doc = ser.report("witness", "consistent", None, traj, args.semantics, timer.timings())
    _emit(args, doc, _fmt_traj(traj))
    return EXIT_OK


def cmd_validate(args) -> int:
    timer = _Timer(args.timings)
    net = ser.net_from_json(_read(args.file))
    if not isinstance(net, PTEG):
        raise ser.DocumentError("validation needs a net with explicit places")
    traj = ser.trajectory_from_json(_read(args.trajectory))
    if args.t0 is not None:
        traj = Trajectory(traj.x, args.t0)
    elif traj.t0 is None and args.semantics == "strict":
        traj = Trajectory(traj.x, 0)
    violations = validate_trajectory(net, args.semantics, traj)
    cert = {"violations": [ser.violation_to_json(v) for v in violations]}
    doc = ser.report("validate", "invalid" if violations else "valid", cert, traj,
                     args.semantics, timer.timings())
    lines = ["valid" if not violations else f"invalid ({len(violations)} violations)"]
    for v in violations:
        place = "" if v.place is None else f" place {v.place + 1}"
        lines.append(f"  {v.constraint}{place}: {net.transitions[v.transition]}({v.k}), "
                     f"slack {_fmt(v.slack)}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_NEGATIVE if violations else EXIT_OK


def cmd_analyze(args) -> int:
    timer = _Timer(args.timings)
    if args.lcr is None and args.ultimate is None:
        raise ser.DocumentError("analyze needs --lcr, --ultimate or both")
    pos = ser.lcr_from_json(_read(args.lcr)) if args.lcr else None
    early = not args.no_early_exit
    if args.ultimate:
        spec = ser.ultimate_from_json(_read(args.ultimate), pos)
        v = detect_inf_weight_U(spec, early)
    else:
        v = detect_inf_weight_N(pos, early)
    ok = v.no_inf_path
    doc = ser.report("analyze", "no_inf_path" if ok else "inf_path",
                     ser.verdict_to_json(v), timings=timer.timings())
    _emit(args, doc, _summary(v, None))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_phi(args) -> int:
    timer = _Timer(args.timings)
    A = ser.matrix_from_json(_read(args.matrix))
    try:
        trace = phi_trace(A, max_iters=args.max_iters)
    except NotInNonegsetError as exc:
        doc = ser.report("phi", "inf_path", {"error": str(exc)}, timings=timer.timings())
        _emit(args, doc, f"not closable: {exc}")
        return EXIT_NEGATIVE
    except ClosureDidNotConverge as exc:
        doc = ser.report("phi", "not_converged", {"error": str(exc)}, timings=timer.timings())
        _emit(args, doc, str(exc))
        return EXIT_NEGATIVE
    cert = {"steps": len(trace), "trace": [ser.matrix_to_json(M) for M in trace],
            "closure": ser.matrix_to_json(trace[-1])}
    doc = ser.report("phi", "closed", cert, timings=timer.timings())
    text = [f"closure reached after {len(trace)} step(s)"]
    text += ["  " + " ".join(f"{_fmt(v):>6}" for v in row) for row in trace[-1].rows]
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


def _rational(text: str):
    try:
        return ser.scalar_from_json(text)
    except ser.DocumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptegcheck",
        description="Consistency analysis of P-time event graphs in max-plus algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.add_argument("--timings", action="store_true",
                       help="record wall-clock time in the report")

    sem = dict(choices=["loose", "strict"], required=True)

    p = sub.add_parser("check", help="decide consistency of a net")
    p.add_argument("--file", required=True)
    p.add_argument("--semantics", **sem)
    p.add_argument("--t0", type=_rational, default=0)
    p.add_argument("--length", type=_positive_int, default=None,
                   help="also attach a witness prefix of this many firings")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("witness", help="earliest schedule for the first K firings")
    p.add_argument("--file", required=True)
    p.add_argument("--semantics", **sem)
    p.add_argument("--length", type=_positive_int, required=True)
    p.add_argument("--t0", type=_rational, default=0)
    common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("validate", help="check a firing schedule against a net")
    p.add_argument("--file", required=True)
    p.add_argument("--trajectory", required=True)
    p.add_argument("--semantics", **sem)
    p.add_argument("--t0", type=_rational, default=None)
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="infinite-weight path test for periodic graphs")
    p.add_argument("--lcr", help="static graph (L, C, R); positive part with --ultimate")
    p.add_argument("--ultimate", help="negative part and transient matrix")
    p.add_argument("--no-early-exit", action="store_true",
                   help="iterate Pi all the way to n^2+1")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("phi", help="iterate the reverse-arc closure of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--max-iters", type=_positive_int, default=None)
    common(p)
    p.set_defaults(func=cmd_phi)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ser.DocumentError, NetError, MaxPlusError, ValueError) as exc:
        print(f"ptegcheck: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
