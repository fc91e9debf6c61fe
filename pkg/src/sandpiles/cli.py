"""Command-line interface.

    sandpiles evolve --n 20 --model psspm --policy right
    sandpiles explore --n 5 --model sspm --format dot
    sandpiles fixed-forms --n 10
    sandpiles verify --n-max 16
    sandpiles construct --n 20 --target 1,1,2,3,4,3,3,2,1
    sandpiles conjecture --k-max 8 --csv conjecture.csv
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from math import isqrt
from pathlib import Path

from .characterization import enumerate_fixed_point_forms
from .core import (
    Configuration,
    Greedy,
    Model,
    apply_moves,
    collapsible,
    format_config,
    parse_form,
    pspm_step,
    psspm_step_policy,
)
from .explorer import DEFAULT_BUDGET, BudgetExceeded, conjecture_scan, explore, verify_main_theorem
from .export import export_graph, export_trace, rows_to_csv
from .procedures import NotAFixedPointForm, construct_path

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_BUDGET = 3
EXIT_BAD_INPUT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sequential_step(c: Configuration, model: Model, policy: Greedy) -> Configuration:
    # single-move models fire the last (right) or first (left) legal move
    events = collapsible(c, model)
    ev = events[-1] if policy is Greedy.RIGHT else events[0]
    return apply_moves(c, [ev])


def cmd_evolve(args) -> int:
    model, policy = Model(args.model), Greedy(args.policy)
    c = Configuration.single(args.n)
    history = [c]
    while collapsible(c, model) and (args.steps is None or len(history) <= args.steps):
        if model is Model.PSPM:
            c = pspm_step(c)
        elif model is Model.PSSPM:
            c = psspm_step_policy(c, policy)
        else:
            c = _sequential_step(c, model, policy)
        history.append(c)
    if args.format == "json":
        text = "".join(
            json.dumps({"index": i, "heights": list(h.heights), "offset": h.offset}) + "\n"
            for i, h in enumerate(history)
        )
    else:
        text = "".join(f"{i:>4} {format_config(h)}\n" for i, h in enumerate(history))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_explore(args) -> int:
    g = explore(args.n, Model(args.model), forms=args.forms, budget=args.budget, workers=args.workers)
    _emit(export_graph(g, args.format), args.out)
    logging.info("%d nodes, %d edges, %d fixed", g.node_count, g.edge_count, len(g.fixed))
    return EXIT_OK


def cmd_fixed_forms(args) -> int:
    forms = enumerate_fixed_point_forms(args.n)
    sys.stdout.write(json.dumps([list(f) for f in forms]) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = 0
    for n in range(1, args.n_max + 1):
        r = verify_main_theorem(n, budget=args.budget, workers=args.workers)
        status = "ok" if r.ok else "FAIL"
        failed += not r.ok
        print(
            f"n={n:<3} forms={len(r.closed_forms)} (floor sqrt={isqrt(n)}) "
            f"fixed sspm={r.sspm_fixed} psspm={r.psspm_fixed} {status}"
        )
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_construct(args) -> int:
    trace = construct_path(args.n, parse_form(args.target))
    sys.stdout.write(export_trace(trace, args.format))
    return EXIT_OK


def cmd_conjecture(args) -> int:
    rows = conjecture_scan(args.k_max)
    header = ["k", "n", "d_n", "predicted_11k_plus_4", "ratio", "plateau_free"]
    table = [[r.k, r.n, r.d_n, r.predicted, f"{r.ratio:.6f}", int(r.plateau_free)] for r in rows]
    text = rows_to_csv(header, table)
    if args.csv:
        Path(args.csv).write_text(text)
    sys.stdout.write(text)
    print(f"# conjectured limit 11/8 = {11 / 8:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    models = [m.value for m in Model]
    p = _Parser(prog="sandpiles", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("evolve", help="run one evolution from (n)")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--model", choices=models, required=True)
    s.add_argument("--policy", choices=["right", "left"], default="right")
    s.add_argument("--steps", type=int)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_evolve)

    s = sub.add_parser("explore", help="exhaustive BFS of the configuration space")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--model", choices=models, required=True)
    s.add_argument("--forms", action="store_true", help="quotient by translation")
    s.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    s.add_argument("--workers", type=_positive, default=1)
    s.add_argument("--out")
    s.add_argument("--format", choices=["dot", "json", "csv", "text"], default="text")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("fixed-forms", help="closed-form list of fixed-point forms")
    s.add_argument("--n", type=_positive, required=True)
    s.set_defaults(func=cmd_fixed_forms)

    s = sub.add_parser("verify", help="compare SSPM and PSSPM fixed-point forms for n = 1..n-max")
    s.add_argument("--n-max", type=_positive, required=True)
    s.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    s.add_argument("--workers", type=_positive, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("construct", help="three-phase PSSPM path from (n) to a fixed-point form")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("conjecture", help="right-greedy furthest fixed points for n = (8k+4)^2")
    s.add_argument("--k-max", type=_positive, required=True)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_conjecture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotAFixedPointForm, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
