"""Command-line entry point.

Exit codes: 0 success, 1 invalid input or a failed consistency check,
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .brute import BudgetExceeded, cross_validate, min_target_bruteforce
from .conditions import FastChecker
from .decomposition import DecompositionError, parse_td
from .dp import solve
from .hardness import CnfError, format_labels, generate, parse_dimacs
from .instance import (
    InstanceError,
    format_vertex_set,
    parse_instance,
    parse_vertex_set,
    serialize_instance,
)
from .kernel import kernelize
from .randgen import Lcg, random_instance
from .simulate import StateBudgetExceeded, run


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    return parse_instance(_read(path))


def _seed_set(inst, text: str) -> frozenset[int]:
    X = parse_vertex_set(text)
    bad = [u for u in X if not 1 <= u <= inst.n]
    if bad:
        raise InputError(f"seed vertex {min(bad)} is not a vertex of the instance")
    return X


def cmd_simulate(args, out) -> int:
    inst = _load(args.instance)
    res = run(inst, _seed_set(inst, args.seed), record_trace=args.trace, max_states=args.max_states)
    print(f"reached-all: {'yes' if res.reached_all else 'no'}", file=out)
    print(f"t0: {'-' if res.t0 is None else res.t0}", file=out)
    print(f"cycle-start: {res.cycle_start}", file=out)
    print(f"cycle-length: {res.cycle_length}", file=out)
    print(f"states: {res.n_states}", file=out)
    if args.trace:
        for state in res.trace:
            print(format_vertex_set(state), file=out)
    return 0


def cmd_check(args, out) -> int:
    inst = _load(args.instance)
    X = _seed_set(inst, args.seed)
    answers = {}
    if args.method in ("sim", "both"):
        answers["sim"] = run(inst, X, max_states=args.max_states).reached_all
    if args.method in ("conditions", "both"):
        answers["conditions"] = FastChecker(inst)(X)
    if len(set(answers.values())) > 1:
        detail = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in answers.items())
        print(f"target-set: MISMATCH {detail}", file=out)
        print("error: simulation and conditions disagree", file=sys.stderr)
        return 1
    print(f"target-set: {'yes' if next(iter(answers.values())) else 'no'}", file=out)
    return 0


def cmd_conditions(args, out) -> int:
    inst = _load(args.instance)
    fc = FastChecker(inst)
    vmap = fc.kernelization.vertex_map
    print(f"forced {format_vertex_set(fc.kernelization.forced)}".rstrip(), file=out)
    for line in fc.conditions.describe(rename=vmap):
        print(line, file=out)
    return 0


def cmd_reduce(args, out) -> int:
    inst = _load(args.instance)
    kz = kernelize(inst)
    print(f"forced {format_vertex_set(kz.forced)}".rstrip(), file=out)
    print(f"rounds {len(kz.rounds)}", file=out)
    print(f"kernel-vertices {kz.kernel.n}", file=out)
    print(f"kernel-edges {kz.kernel.graph.m}", file=out)
    if args.emit_kernel:
        notes = [f"map {k} {kz.vertex_map[k]}" for k in range(1, kz.kernel.n + 1)]
        Path(args.emit_kernel).write_text(serialize_instance(kz.kernel, notes), encoding="utf-8")
    return 0


def cmd_solve(args, out) -> int:
    inst = _load(args.instance)
    if args.method == "brute":
        if args.td:
            raise InputError("--td only applies to --method tw")
        res = min_target_bruteforce(inst, budget=args.budget, threads=args.threads)
        size, witness = res.min_size, res.witness
    else:
        td = parse_td(_read(args.td), inst) if args.td else None
        res = solve(inst, td)
        size, witness = res.min_size, res.witness
    print(f"minimum {size}", file=out)
    print(f"witness {format_vertex_set(witness)}", file=out)
    if args.emit_witness:
        Path(args.emit_witness).write_text(format_vertex_set(witness) + "\n", encoding="utf-8")
    return 0


def cmd_generate(args, out) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    gen = generate(cnf, args.distance)
    Path(args.out).write_text(serialize_instance(gen.instance), encoding="utf-8")
    if args.labels:
        Path(args.labels).write_text(format_labels(gen), encoding="utf-8")
    print(f"order {gen.instance.n}", file=out)
    print(f"edges {gen.instance.graph.m}", file=out)
    print(f"k {gen.k}", file=out)
    return 0


def cmd_cross_validate(args, out) -> int:
    if args.random:
        if args.instance:
            raise InputError("--instance and --random are mutually exclusive")
        if args.n is None or args.trials is None or args.seed is None:
            raise InputError("--random needs --n, --trials and --seed")
        rng = Lcg(args.seed)
        subsets = 0
        for trial in range(args.trials):
            inst = random_instance(args.n, rng, model=args.model)
            rep = cross_validate(inst)
            if not rep.consistent:
                print(f"trial {trial}: {rep.describe()}", file=out)
                return 1
            subsets += rep.subsets_checked
        print(f"consistent {args.trials} instances {subsets} subsets", file=out)
        return 0
    if not args.instance:
        raise InputError("give --instance or --random")
    rep = cross_validate(_load(args.instance))
    print(rep.describe(), file=out)
    return 0 if rep.consistent else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ntss",
        description="Exact tools for non-monotone target sets with thresholds in {0,1,deg}.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the activation process from a seed set")
    s.add_argument("--instance", required=True, help="instance file (.ntss)")
    s.add_argument("--seed", required=True, help="seed set, e.g. 1,3,5 (empty string for none)")
    s.add_argument("--trace", action="store_true", help="print every state, one per line")
    s.add_argument("--max-states", type=int, default=None, help="abort after N distinct states")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("check", help="decide whether a seed set is a target set")
    s.add_argument("--instance", required=True)
    s.add_argument("--seed", required=True, help="seed set, e.g. 1,3,5")
    s.add_argument("--method", choices=("sim", "conditions", "both"), default="both")
    s.add_argument("--max-states", type=int, default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("conditions", help="print forced vertices and kernel conditions")
    s.add_argument("--instance", required=True)
    s.set_defaults(func=cmd_conditions)

    s = sub.add_parser("reduce", help="kernelize an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--emit-kernel", metavar="FILE", help="write the kernel instance here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="compute a minimum target set")
    s.add_argument("--instance", required=True)
    s.add_argument("--method", choices=("brute", "tw"), default="tw")
    s.add_argument("--td", metavar="FILE", help="PACE .td decomposition of the instance graph")
    s.add_argument("--emit-witness", metavar="FILE", help="also write the witness set here")
    s.add_argument("--budget", type=int, default=20, help="largest n for --method brute")
    s.add_argument("--threads", type=int, default=1, help="worker processes for --method brute")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("generate", help="build a hard instance from a restricted CNF")
    s.add_argument("--cnf", required=True, help="DIMACS CNF file")
    s.add_argument("--distance", type=int, required=True, help="minimum degree-3 distance d")
    s.add_argument("--out", required=True, help="instance file to write")
    s.add_argument("--labels", metavar="FILE", help="write '<role> <name> <vertex-id>' lines")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("cross-validate", help="compare simulation and conditions on all subsets")
    s.add_argument("--instance")
    s.add_argument("--random", action="store_true", help="use LCG-generated instances")
    s.add_argument("--n", type=int, help="order of random instances")
    s.add_argument("--trials", type=int, help="number of random instances")
    s.add_argument("--seed", type=int, help="LCG seed")
    s.add_argument(
        "--model", choices=("uniform", "structured"), default="uniform", help="threshold model"
    )
    s.set_defaults(func=cmd_cross_validate)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (
        InputError,
        InstanceError,
        DecompositionError,
        CnfError,
        BudgetExceeded,
        StateBudgetExceeded,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
