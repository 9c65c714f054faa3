"""Command-line surface for generating, solving, verifying, and benchmarking.

Exit codes: 0 success/pass, 1 verification failure, 2 input error,
3 capability/budget error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import oracle, serialize
from .eight_agents import improved_few_agents
from .errors import CapabilityError, ConstructionError, InputError
from .fairness import check_g3pa_properties, verify_alpha_efkx
from .generate import gen_random
from .orientations import (counterexample_family, exists_efkx_orientation,
                           hardness_reduce)
from .solver import approximate_efkx, k_round_robin_ece

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CAPABILITY = 3


@dataclass
class RunConfig:
    """Everything a run needs; seed + config fully determine the artifacts."""

    command: str
    k: int | None = None
    alpha: Fraction | None = None
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 0
    n: int = 4
    m: int = 8
    max_value: int = 100
    count: int = 100
    budget: int = oracle.DEFAULT_BUDGET
    trace: bool = False


def _parse_alpha(text: str) -> Fraction:
    try:
        alpha = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse alpha {text!r}") from exc
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def _emit(payload, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _encode(v) -> str:
    return "inf" if v == math.inf else str(Fraction(v))


def _load_instance(path: str):
    return serialize.instance_from_dict(serialize.load_json(path))


def _cmd_gen(args) -> int:
    if args.mode == "random":
        obj = serialize.instance_to_dict(
            gen_random(args.n, args.m, args.max_value, args.seed))
    elif args.mode == "counterexample":
        obj = serialize.graph_to_dict(counterexample_family(args.k))
    else:  # reduce
        base = serialize.graph_from_dict(serialize.load_json(args.input))
        obj = serialize.graph_to_dict(hardness_reduce(base, args.k))
    _emit(obj, args.output)
    return EXIT_PASS


def _trace_lines(trace) -> list[dict]:
    return [
        {"iteration": ev.iteration, "step": ev.step,
         "agents": list(ev.agents), "goods": sorted(ev.goods)}
        for ev in trace.events
    ]


def _cmd_solve(args) -> int:
    inst = _load_instance(args.input)
    if args.k >= 2:
        alloc, trace = approximate_efkx(inst, args.k)
    elif inst.n <= 8:
        alloc, trace = improved_few_agents(inst)
    else:
        print("warning: k=1 with more than 8 agents; "
              "falling back to round-robin + cycle elimination",
              file=sys.stderr)
        alloc, trace = k_round_robin_ece(inst, args.k)
    payload = serialize.allocation_to_dict(alloc)
    if args.trace:
        payload["trace"] = _trace_lines(trace)
    _emit(payload, args.output)
    return EXIT_PASS


def _cmd_rr(args) -> int:
    inst = _load_instance(args.input)
    alloc, _ = k_round_robin_ece(inst, args.k)
    _emit(serialize.allocation_to_dict(alloc), args.output)
    return EXIT_PASS


def _cmd_verify(args) -> int:
    inst = _load_instance(args.input)
    alloc = serialize.allocation_from_dict(serialize.load_json(args.allocation))
    alpha = _parse_alpha(args.alpha)
    report = verify_alpha_efkx(inst, alloc, alpha, args.k)
    payload = {
        "alpha": str(alpha),
        "k": args.k,
        "pass": report.overall,
        "thresholds": [[None if t is None else _encode(t) for t in row]
                       for row in report.thresholds],
    }
    if report.witness is not None:
        i, j, removal = report.witness
        payload["witness"] = {"envier": i, "envied": j, "removal": sorted(removal)}
    _emit(payload, args.output)
    return EXIT_PASS if report.overall else EXIT_FAIL


def _cmd_props(args) -> int:
    inst = _load_instance(args.input)
    alloc = serialize.allocation_from_dict(serialize.load_json(args.allocation))
    report = check_g3pa_properties(inst, alloc, args.k)
    payload = {"k": args.k, "pass": report.overall,
               "properties": report.property_verdicts}
    _emit(payload, args.output)
    return EXIT_PASS if report.overall else EXIT_FAIL


def _cmd_orient(args) -> int:
    ginst = serialize.graph_from_dict(serialize.load_json(args.input))
    alpha = _parse_alpha(args.alpha)
    orientation = exists_efkx_orientation(ginst, args.k, alpha)
    if orientation is None:
        _emit({"exists": False, "orientation": "none"}, args.output)
    else:
        _emit({"exists": True,
               "orientation": serialize.orientation_to_dict(orientation)},
              args.output)
    return EXIT_PASS


def _cmd_oracle(args) -> int:
    inst = _load_instance(args.input)
    if args.best_alpha:
        best = oracle.best_alpha_efkx(inst, args.k, budget=args.budget)
        _emit({"k": args.k, "best_alpha": _encode(best)}, args.output)
    else:
        exists = oracle.exists_exact_efkx(inst, args.k, budget=args.budget)
        _emit({"k": args.k, "exists_exact": exists}, args.output)
    return EXIT_PASS


def _solve_one(task):
    """Run one bench instance; module-level so it pickles for worker pools."""
    n, m, k, seed = task
    inst = gen_random(n, m, 100, seed)
    if k >= 2:
        alloc, _ = approximate_efkx(inst, k)
    elif inst.n <= 8:
        alloc, _ = improved_few_agents(inst)
    else:
        alloc, _ = k_round_robin_ece(inst, k)
    guarantee = Fraction(k + 1, k + 2) if k >= 2 else (
        Fraction(2, 3) if inst.n <= 8 else Fraction(1, 2))
    return verify_alpha_efkx(inst, alloc, guarantee, k).overall


def _cmd_bench(args) -> int:
    import random as _random
    rng = _random.Random(args.seed)
    tasks = []
    for idx in range(args.count):
        n = rng.randint(2, args.n)
        m = rng.randint(n, args.m)
        tasks.append((n, m, args.k, rng.randrange(2**31)))
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_solve_one, tasks))
    else:
        results = [_solve_one(t) for t in tasks]
    passed = sum(results)
    payload = {"k": args.k, "count": args.count, "passed": passed,
               "pass_rate": f"{passed}/{args.count}"}
    _emit(payload, args.output)
    return EXIT_PASS if passed == args.count else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efkx",
        description="Approximate envy-free-up-to-k allocation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance or graph")
    p.add_argument("mode", choices=["random", "counterexample", "reduce"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--max-value", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--input", help="base graph JSON (reduce mode)")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("rr", help="k-round-robin + envy cycle elimination")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_rr)

    p = sub.add_parser("verify", help="verify an allocation file")
    p.add_argument("input")
    p.add_argument("allocation")
    p.add_argument("--alpha", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("props", help="structural property report")
    p.add_argument("input")
    p.add_argument("allocation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_props)

    p = sub.add_parser("orient", help="search for an EFkX orientation")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", default="1")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_orient)

    p = sub.add_parser("oracle", help="brute-force optimum for small instances")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--best-alpha", action="store_true")
    group.add_argument("--exists", action="store_true")
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="corpus sweep with a pass-rate table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n", type=int, default=8, help="max agents")
    p.add_argument("--m", type=int, default=20, help="max goods")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapabilityError, ConstructionError) as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


if __name__ == "__main__":
    sys.exit(main())
