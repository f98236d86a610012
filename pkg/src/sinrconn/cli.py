"""Command-line front end.

Exit codes: 0 success, 2 verification failed, 3 precondition violated,
4 file or schema problem.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import io
from .aggregation import latency_lower_bound, mlas, verify_aggregation
from .bidirectional import bidi_connect, symmetric_lb_instance
from .errors import InfeasibleError, PreconditionError, SchemaError
from .geometry import euclidean_mst, orient
from .instances import Instance, gadget_gt, gen_grid, gen_uniform
from .netdesign import (
    biconnect_structure,
    k_edge_structure,
    verify_bi_connectivity,
    verify_k_edge_strong,
    verify_strong_connectivity,
)
from .oblivious import PowerFunction, linear_power_schedule, oblivious_lb_instance, uniform_power_schedule
from .scheduler import SELECTION_RULES, Schedule, connect, strong_connect
from .sinr import SinrParams
from .verify import directed_links, verify_schedule

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_PRECONDITION = 3
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PRECONDITION, f"{self.prog}: error: {message}\n")


def _params(text: str | None, fallback: SinrParams | None = None) -> SinrParams:
    if text is None:
        return fallback or SinrParams()
    # the instance's own params are the fallback; an explicit flag wins
    return SinrParams.parse(text)


def _power_fn(text: str, alpha: float) -> PowerFunction:
    if text.startswith("exponent:"):
        return PowerFunction("exponent", alpha, float(text.split(":", 1)[1]))
    return PowerFunction(text, alpha)


def _emit_json(doc: dict, out: str | None) -> None:
    if out:
        io.write_json(doc, out)
    else:
        import json

        print(json.dumps(doc, indent=1))


def _load(args) -> tuple[Instance, SinrParams]:
    inst = io.load_instance(args.instance)
    return inst, _params(args.params, inst.params)


def _concat(schedules: list[Schedule], source: str) -> Schedule:
    return Schedule([slot for s in schedules for slot in s.slots], source)


def _save_schedule(schedule: Schedule, params: SinrParams, args) -> None:
    if args.out:
        io.save_schedule(schedule, args.out)
    if getattr(args, "stats", None):
        io.write_slot_stats(schedule, params, args.stats)


def cmd_gen(args) -> int:
    params = _params(args.params)
    kind = args.kind
    if kind == "uniform":
        inst = gen_uniform(args.n, args.seed, args.side, params)
    elif kind == "grid":
        inst = gen_grid(args.n, args.spacing, params)
    elif kind == "gadget-g":
        g = gadget_gt(args.t, params, copies=args.copies)
        pts = g.to_points()
        meta = {"generator": "gadget-g", "t": args.t, "coords": [str(c) for c in g.coords]}
        if args.copies is not None:
            meta["copies"] = args.copies
        inst = Instance(pts, params, meta)
    elif kind == "bidi-lb":
        inst = Instance(symmetric_lb_instance(args.n), params, {"generator": "bidi-lb", "n": args.n})
    else:
        p = _power_fn(args.power_fn, params.alpha)
        pts = oblivious_lb_instance(args.n, p)
        inst = Instance(pts, params, {"generator": "oblivious-lb", "n": args.n, "power_fn": args.power_fn})
    _emit_json(io.instance_to_dict(inst), args.out)
    return EXIT_OK


def cmd_mst(args) -> int:
    inst, _ = _load(args)
    tree = euclidean_mst(inst.points)
    _emit_json({"edges": [list(e) for e in tree.edges], "weight": tree.weight()}, args.out)
    return EXIT_OK


def cmd_schedule(args) -> int:
    inst, params = _load(args)
    pts = inst.points
    if args.kind == "bidi":
        schedule = bidi_connect(pts, params, args.gamma, rule=args.rule)
    elif args.kind == "strong":
        toward, away = strong_connect(pts, params, args.root, args.gamma)
        schedule = _concat([toward, away], f"strong-{args.root}")
    else:
        links = orient(euclidean_mst(pts), args.root, "toward")
        if args.kind == "connect":
            schedule = connect(links, params, args.gamma, source=f"mst-toward-{args.root}", rule=args.rule)
        elif args.kind == "uniform-power":
            schedule = uniform_power_schedule(links, params)
        else:
            schedule = linear_power_schedule(links, params)
    _save_schedule(schedule, params, args)
    report = verify_schedule(schedule, params)
    print(f"{args.kind}: {len(schedule)} slots, {len(directed_links(schedule))} links, "
          f"min SINR margin {report.min_margin:.6g}")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_mlas(args) -> int:
    inst, params = _load(args)
    schedule = mlas(inst.points, params, args.gamma)
    if args.out:
        io.save_aggregation(schedule, args.out)
    report = verify_aggregation(schedule, params)
    print(f"mlas: latency {schedule.latency} (lower bound {latency_lower_bound(inst.n)}), sink {schedule.sink}, "
          f"max shrink {report.max_shrink:.4f}, verified {report.passed}")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_design(args) -> int:
    inst, params = _load(args)
    n = inst.n
    if args.kind == "biconnect":
        schedule = biconnect_structure(inst.points, params, args.gamma)
        graph_ok = verify_bi_connectivity(directed_links(schedule), n)
        label = "biconnected"
    else:
        if args.k is None:
            raise PreconditionError("kedge needs --k")
        _, schedules = k_edge_structure(inst.points, params, args.k, args.gamma)
        schedule = _concat(schedules, f"kedge-{args.k}")
        graph_ok = verify_k_edge_strong(directed_links(schedule), args.k, n)
        label = f"{args.k}-edge strongly connected"
    _save_schedule(schedule, params, args)
    report = verify_schedule(schedule, params)
    print(f"{args.kind}: {len(schedule)} slots, {len(directed_links(schedule))} links, "
          f"SINR verified {report.passed}, {label} {graph_ok}")
    return EXIT_OK if report.passed and graph_ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    inst, params = _load(args)
    n = inst.n
    if args.kind == "aggregation":
        schedule = io.load_aggregation(args.schedule, inst.points)
        report = verify_aggregation(schedule, params)
        for problem in report.problems:
            print(problem)
        print(f"aggregation: feasible {report.feasible}, arborescence {report.arborescence}, "
              f"ordering {report.ordering}, max shrink {report.max_shrink:.4f}")
        return EXIT_OK if report.passed else EXIT_VERIFY
    schedule = io.load_schedule(args.schedule, inst.points)
    report = verify_schedule(schedule, params)
    for problem in report.problems:
        print(problem)
    ok = report.passed
    links = directed_links(schedule)
    line = f"schedule: {len(schedule)} slots, SINR verified {report.passed}"
    if args.kind == "kconn":
        if args.k is None:
            raise PreconditionError("kconn needs --k")
        graph_ok = verify_k_edge_strong(links, args.k, n)
        line += f", {args.k}-edge strongly connected {graph_ok}"
        ok = ok and graph_ok
    elif args.kind == "biconn":
        graph_ok = verify_bi_connectivity(links, n)
        line += f", biconnected {graph_ok}"
        ok = ok and graph_ok
    elif args.strong:
        graph_ok = verify_strong_connectivity(links, n)
        line += f", strongly connected {graph_ok}"
        ok = ok and graph_ok
    print(line)
    return EXIT_OK if ok else EXIT_VERIFY


def _run_cell(kind: str, scheduler: str, n: int, seed: int, params: SinrParams) -> tuple[int, int]:
    inst = gen_uniform(n, seed, params=params) if kind == "uniform" else gen_grid(n, params=params)
    pts = inst.points
    if scheduler == "mlas":
        s = mlas(pts, params)
        return s.latency, len(s.tree)
    if scheduler == "strong":
        toward, away = strong_connect(pts, params)
        return len(toward) + len(away), 2 * (n - 1)
    if scheduler == "bidi":
        return len(bidi_connect(pts, params)), 2 * (n - 1)
    return len(connect(orient(euclidean_mst(pts), 0, "toward"), params)), n - 1


def cmd_report(args) -> int:
    params = _params(args.params)
    ns = [int(x) for x in args.ns.split(",") if x.strip()]
    rows = []
    for n in ns:
        for i in range(args.seeds):
            seed = args.seed + i
            slots, links = _run_cell(args.gen, args.scheduler, n, seed, params)
            rows.append([n, seed, links, slots, math.log2(n), slots / math.log2(n)])
    header = ["n", "seed", "links", "slots", "log2_n", "slots_per_log2_n"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    finally:
        if args.out:
            fh.close()
    if args.out:
        for n in ns:
            med = float(np.median([r[3] for r in rows if r[0] == n]))
            print(f"n={n}: median {med:g} slots over {args.seeds} seeds")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="alpha,beta,noise (default 3,1,0 or the instance's own)")
    common.add_argument("--out", help="output path (stdout if omitted where sensible)")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="sinrconn", description="SINR connectivity scheduling toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=["uniform", "grid", "gadget-g", "bidi-lb", "oblivious-lb"])
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--copies", type=int)
    p.add_argument("--power-fn", default="mean", help="uniform, linear, mean or exponent:TAU")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mst", parents=[common], help="minimum spanning tree of an instance")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_mst)

    p = sub.add_parser("schedule", parents=[common], help="schedule the MST links")
    p.add_argument("kind", choices=["connect", "strong", "bidi", "uniform-power", "linear-power"])
    p.add_argument("--instance", required=True)
    p.add_argument("--stats", help="per-slot CSV statistics")
    p.add_argument("--gamma", type=float)
    p.add_argument("--rule", choices=SELECTION_RULES, default="admitted")
    p.add_argument("--root", type=int, default=0)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("mlas", parents=[common], help="aggregation schedule")
    p.add_argument("--instance", required=True)
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=cmd_mlas)

    p = sub.add_parser("design", parents=[common], help="biconnected or k-edge connected structure")
    p.add_argument("kind", choices=["biconnect", "kedge"])
    p.add_argument("--instance", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--stats")
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", parents=[common], help="verify a saved schedule")
    p.add_argument("kind", choices=["schedule", "aggregation", "kconn", "biconn"])
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--strong", action="store_true", help="also require strong connectivity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="slot count sweep over n and seeds, as CSV")
    p.add_argument("--gen", choices=["uniform", "grid"], default="uniform")
    p.add_argument("--ns", default="64,256,1024")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--scheduler", choices=["connect", "strong", "bidi", "mlas"], default="connect")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InfeasibleError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
