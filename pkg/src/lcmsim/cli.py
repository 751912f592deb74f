"""Command line front end.

Exit codes: 0 HOLDS (or all passed), 1 FAILS, 2 UNDECIDED-AT-HORIZON,
3 operational error (bad input, unknown id, unfair schedule).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import problems
from .engine import EngineError, epochs, moves_count
from .equiv import SUITE_IDS, equiv_suite
from .registry import RegistryError, load_scenario
from .sched import ScheduleError
from .traceio import TraceFormatError, read_trace, trace_lines

log = logging.getLogger("lcmsim")

EXIT_ERROR = 3


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects key=value, got {item!r}")
        out[key] = value
    return out


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    trace = sc.run()
    log.debug("scenario %s: %d events", sc.name, len(trace.events))
    text = "\n".join(trace_lines(trace, sc.raw)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        summary = {"trace": args.out, "events": len(trace.events), "epochs": len(epochs(trace)),
                   "moves": {r: moves_count(trace, r) for r in "AB"}}
        print(json.dumps(summary, sort_keys=True))
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    trace, _ = read_trace(args.trace)
    pid = args.predicate.upper().rstrip("*")
    if pid not in problems.PREDICATES:
        raise RegistryError(f"unknown predicate {args.predicate!r}")
    params = _params(args.param)
    if pid == "MCV":
        report = problems.check_mcv(trace, Fraction(params.get("eps", "1/1000")))
    elif pid == "CGE":
        report = problems.check_cge(trace, int(params.get("steps", 5)))
    else:
        report = problems.PREDICATES[pid](trace)
    print(json.dumps(report.to_json(), sort_keys=True))
    return problems.EXIT_CODES[report.verdict]


def cmd_equiv(args) -> int:
    algs = SUITE_IDS if args.algorithm in (None, "suite") else tuple(args.algorithm.split(","))
    summary = equiv_suite(args.simulator, algs, args.seeds, atomicity=args.atomicity)
    text = json.dumps(summary.to_json(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if summary.ok else 1


def cmd_plot(args) -> int:
    from .plot import plot_trace
    trace, _ = read_trace(args.trace)
    out = args.out or str(args.trace) + ".svg"
    plot_trace(trace, out, squares=args.squares)
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcmsim", description="Two-robot LCM simulation and verification.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a scenario and write its trace")
    r.add_argument("--scenario", required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="evaluate a predicate on a trace")
    c.add_argument("--trace", required=True)
    c.add_argument("--predicate", required=True,
                   help="DMSD, RDV1, AM, RDAM, SM, MCv, SRO or CGE")
    c.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="predicate parameter, e.g. eps=1/1000 or steps=5")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("equiv", help="refinement suite for a simulator")
    e.add_argument("--simulator", required=True, choices=("sim.collapse", "sim.handshake", "sim.a"))
    e.add_argument("--algorithm", default="suite", help="comma-separated ids, or 'suite'")
    e.add_argument("--seeds", type=int, default=50)
    e.add_argument("--atomicity", default="NONE", choices=("NONE", "LC", "CM"),
                   help="ASYNCH class for sim.a")
    e.add_argument("--out")
    e.set_defaults(func=cmd_equiv)

    pl = sub.add_parser("plot", help="draw trajectories as SVG")
    pl.add_argument("--trace", required=True)
    pl.add_argument("--out")
    pl.add_argument("--squares", action="store_true", help="draw the square of every stop")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (RegistryError, TraceFormatError, ScheduleError, EngineError, ValueError,
            KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
