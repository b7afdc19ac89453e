"""Command-line entry point: ``combchoice <command> --input FILE ...``.

Exit codes: 0 when the check passes or the object is found, 1 when it fails
or nothing is found, 2 on input errors.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import formats as F
from .axioms import CHECKS
from .core import ChoiceKitError, InputError, NotPathIndependent, ScaleError
from .demand import Infeasible, check_demand_warp, check_law_of_demand, quasilinear_rationalize
from .lattice import hasse, mc_rationalization, min_mc_size
from .matching import NOTIONS, check_stability, run_da
from .rules import responsive_rationalize
from .search import KINDS, search_counterexample

OK, FAIL, BAD_INPUT = 0, 1, 2


@contextmanager
def _out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _witness_text(w: dict) -> str:
    parts = []
    for k, v in w.items():
        if isinstance(v, frozenset):
            v = "{" + ",".join(sorted(map(str, v))) + "}"
        parts.append(f"{k}={v}")
    return " ".join(parts)


def cmd_axioms(args) -> int:
    C = F.load_instance(args.input)
    names = args.which.split(",") if args.which else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise InputError(f"unknown axioms {unknown}; choose from {', '.join(CHECKS)}")
    status = OK
    with _out(args.output) as out:
        for name in names:
            report = CHECKS[name](C)
            print(f"{name}: {report.describe().split(': ', 1)[1]}", file=out)
            if not report.holds:
                status = FAIL
    return status


def cmd_lattice(args) -> int:
    C = F.load_instance(args.input)
    try:
        H = hasse(C)
    except NotPathIndependent as e:
        print(f"NotPathIndependent: {e} [{_witness_text(e.witness or {})}]", file=sys.stderr)
        return FAIL
    rat = mc_rationalization(C)
    with _out(args.output) as out:
        print(f"nodes: {len(H.nodes)}", file=out)
        print(f"edges: {len(H.edges)}", file=out)
        print(f"orders: {len(rat.orders)}", file=out)
        for o in rat.orders:
            print(f"  {o}", file=out)
    if args.dot:
        with _out(args.dot) as fh:
            fh.write(H.to_dot())
    return OK


def cmd_rationalize(args) -> int:
    C = F.load_instance(args.input)
    with _out(args.output) as out:
        if args.mode == "responsive":
            found = responsive_rationalize(C)
            if found is None:
                print("NONE", file=out)
                return FAIL
            q, order = found
            print(f"q: {q}", file=out)
            print(f"order: {order}", file=out)
            return OK
        try:
            if args.mode == "mc":
                orders = mc_rationalization(C).orders
            else:
                found = min_mc_size(C, budget=args.budget)
                if found is None:
                    print("NONE [budget exhausted]", file=out)
                    return FAIL
                orders = found[1]
        except NotPathIndependent as e:
            print(f"NONE [{_witness_text(e.witness or {})}]", file=out)
            return FAIL
        print(f"size: {len(orders)}", file=out)
        for o in orders:
            print(f"  {o}", file=out)
    return OK


def cmd_demand(args) -> int:
    obs = F.load_demand(args.input)
    with _out(args.output) as out:
        if args.mode in ("lod", "warp"):
            report = (check_law_of_demand if args.mode == "lod" else check_demand_warp)(obs)
            print(report.describe(), file=out)
            return OK if report.holds else FAIL
        v = quasilinear_rationalize(obs)
        if isinstance(v, Infeasible):
            cycle = " -> ".join("{" + ",".join(sorted(b)) + "}" for b in v.cycle)
            print(f"NONE [cycle={cycle} weight={F.fraction_text(v.weight)}]", file=out)
            return FAIL
        out.write(F.dumps({"valuation": F.valuation_to_doc(v)}))
    return OK


def cmd_da(args) -> int:
    problem = F.load_problem(args.input)
    outcome = run_da(problem, args.variant)
    with _out(args.output) as out:
        if args.trace:
            for line in outcome.trace_lines():
                print(line, file=out)
        if not outcome.feasible:
            for agent, objs in outcome.result.offenders:
                print(f"INFEASIBLE {agent}: held by {','.join(objs)}", file=out)
            return FAIL
        for agent, obj in outcome.matching.assignment:
            print(f"{agent}: {obj if obj is not None else '-'}", file=out)
    if args.save_matching:
        with _out(args.save_matching) as fh:
            fh.write(F.dumps(F.matching_to_doc(outcome.matching)))
    return OK


def cmd_stability(args) -> int:
    problem = F.load_problem(args.input)
    mu = F.matching_from_doc(F.read_json(args.matching or args.input), problem)
    report = check_stability(problem, mu)
    notions = NOTIONS if args.notion == "all" else (args.notion,)
    status = OK
    with _out(args.output) as out:
        for notion in notions:
            ok = report.holds(notion)
            line = f"{notion}: {'PASS' if ok else 'FAIL'}"
            if not ok:
                line += f" [{_witness_text(report.witnesses[notion])}]"
                status = FAIL
            print(line, file=out)
    return status


def cmd_search(args) -> int:
    result = search_counterexample(args.kind, seed=args.seed, max_size=args.max_size)
    with _out(args.output) as out:
        if result is None:
            print("NONE", file=out)
            return FAIL
        if args.kind == "warsprio_not_subs":
            doc = F.instance_to_doc(result.instance)
        else:
            doc = F.problem_to_doc(result.instance)
            mu = result.details.get("matching")
            if mu is None and args.kind == "ck_unstable_ire":
                mu = result.details["ck"].matching
            if mu is not None:
                doc.update(F.matching_to_doc(mu))
        out.write(F.dumps(doc))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="combchoice", description="Combinatorial choice toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, needs_input=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_input:
            sp.add_argument("--input", required=True, help="input JSON file")
        sp.add_argument("--output", default="-", help="report destination (default stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(func=fn)
        return sp

    sp = add("axioms", cmd_axioms, "check behavioral axioms")
    sp.add_argument("--which", help=f"comma-separated subset of {','.join(CHECKS)}")

    sp = add("lattice", cmd_lattice, "maximal option sets, Hasse diagram, MC orders")
    sp.add_argument("--dot", help="write the Hasse diagram as DOT to this path")

    sp = add("rationalize", cmd_rationalize, "MC or responsive rationalization")
    sp.add_argument("--mode", choices=("mc", "mc-min", "responsive"), default="mc")
    sp.add_argument("--budget", type=int, default=1_000_000, help="subset budget for mc-min")

    sp = add("demand", cmd_demand, "law of demand, WARP, quasilinear rationalization")
    sp.add_argument("--mode", choices=("lod", "warp", "rationalize"), default="rationalize")

    sp = add("da", cmd_da, "run deferred acceptance")
    sp.add_argument("--variant", choices=("ck", "ak"), default="ck")
    sp.add_argument("--trace", action="store_true", help="print held sets round by round")
    sp.add_argument("--save-matching", help="write the resulting matching as JSON")

    sp = add("stability", cmd_stability, "check a matching's stability")
    sp.add_argument("--matching", help="matching JSON (default: the 'assignment' in --input)")
    sp.add_argument("--notion", choices=NOTIONS + ("all",), default="all")

    sp = add("search", cmd_search, "search for a counterexample instance", needs_input=False)
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--max-size", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ScaleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except ChoiceKitError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
