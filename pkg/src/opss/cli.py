"""Command line interface: ``opss gen|sample|solve|run|experiment|check-nc``.

Exit status is 0 on success, 2 on invalid input and 3 when an exhaustive
computation exceeds its cap.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import adversarial
from .algorithms import ALGORITHMS, generate_log, read_log, run_algorithm, write_log
from .coverage import read_graph, write_graph
from .distributions import check_conditional_lemma, check_negative_correlation, parse_distribution
from .errors import CapacityError, ValidationError
from .harness import ExperimentConfig, required_samples_uniform_k, run_experiment
from .solvers import SOLVERS, get_solver

EXIT_VALIDATION = 2
EXIT_CAPACITY = 3


def _fmt(nodes) -> str:
    return " ".join(map(str, sorted(nodes)))


def cmd_gen(args) -> None:
    rng = np.random.default_rng(args.seed)
    fam = args.family
    if fam == "half-hardness":
        _need(args, "n", "k", "r")
        hidden = args.hidden if args.hidden is not None else int(rng.integers(0, args.k - 1))
        inst = adversarial.gen_half_hardness(args.n, args.k, args.r, hidden)
    elif fam == "infeasible":
        _need(args, "n", "k", "r", "p")
        hidden = args.hidden if args.hidden is not None else int(rng.integers(0, args.p))
        inst = adversarial.gen_infeasible_family(args.n, args.k, args.r, args.p, hidden, args.m)
        regime = adversarial.intended_infeasible_regime(args.n, args.k)
        print(
            f"note: the hardness argument wants r >> k log^2 n = {regime:.1f} and p = r / log^2 n; "
            f"running with r={args.r}, p={args.p}",
            file=sys.stderr,
        )
    elif fam == "assumption2":
        _need(args, "n", "m", "k")
        hidden = args.hidden if args.hidden is not None else int(rng.integers(0, args.n // 2))
        inst = adversarial.gen_assumption2_family(args.n, args.m, hidden, args.k)
    else:
        _need(args, "n", "k", "r")
        inst = adversarial.gen_assumption3_instance(args.n, args.k, args.r, rng)
    write_graph(inst.graph, args.out)
    meta = inst.metadata_line()
    with open(args.out + ".meta", "w", encoding="ascii") as fh:
        fh.write(meta + "\n")
    print(meta)


def _need(args, *names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValidationError(f"--family {args.family} requires {' '.join(missing)}")


def cmd_sample(args) -> None:
    g = read_graph(args.graph)
    spec = parse_distribution(args.dist)
    log = generate_log(g, spec, args.t, np.random.default_rng(args.seed), k=args.k, seed=args.seed)
    write_log(log, args.out)
    print(log.header())


def cmd_solve(args) -> None:
    g = read_graph(args.graph)
    result = get_solver(args.algo)(g, args.k)
    print(f"chosen: {_fmt(result.chosen)}")
    print(f"value: {result.value}")


def cmd_run(args) -> None:
    log = read_log(args.samples)
    k = args.k if args.k is not None else log.k
    if args.algo == "uniform-k":
        if args.eps is None:
            raise ValidationError("--algo uniform-k requires --eps")
        bound = required_samples_uniform_k(log.n_left, log.n_right, k, args.eps, args.delta)
        print(
            f"warning: the uniform-k guarantee asks for t >= {bound} samples (delta={args.delta}); "
            f"this log has {log.t}",
            file=sys.stderr,
        )
    out = run_algorithm(args.algo, log, k, get_solver(args.solver), np.random.default_rng(args.seed), eps=args.eps)
    print(f"t1: {_fmt(out.t1)}")
    print(f"t2: {_fmt(out.t2)}")
    print(f"returned: {_fmt(out.returned)}")
    print(f"coin: {out.coin or '-'}")
    print(f"surrogate_value_t2: {out.surrogate_value_of_t2}")


def cmd_experiment(args) -> None:
    cfg = ExperimentConfig.from_file(args.config)
    result = run_experiment(cfg)
    result.write(args.csv, args.json)
    print(json.dumps(result.summary(), indent=2, sort_keys=True))


def cmd_check_nc(args) -> None:
    spec = parse_distribution(args.dist)
    for label, check in (("negative-correlation", check_negative_correlation), ("conditional-lemma", check_conditional_lemma)):
        rep = check(spec, exact=args.exact, max_n=args.max_n)
        witness = "-" if rep.witness is None else f"I={{{_fmt(rep.witness[0])}}} J={{{_fmt(rep.witness[1])}}}"
        print(
            f"{label}: holds={str(rep.holds_everywhere).lower()} worst_violation={rep.worst_violation} "
            f"pairs_tested={rep.pairs_tested} witness={witness}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a hard instance family member")
    p.add_argument("--family", required=True, choices=adversarial.FAMILIES)
    for name in ("n", "k", "r", "p", "m", "hidden"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sample", help="draw a structured sample log from a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("solve", help="solve maximum coverage on a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algo", choices=sorted(SOLVERS), default="greedy")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("run", help="run an OPSS algorithm on a sample log")
    p.add_argument("--samples", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="general")
    p.add_argument("--eps", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--solver", choices=("greedy", "lazy", "exact"), default="greedy")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check-nc", help="exhaustively check negative correlation of a distribution")
    p.add_argument("--dist", required=True)
    p.add_argument("--exact", action="store_true", help="use rational arithmetic")
    p.add_argument("--max-n", type=int, default=10)
    p.set_defaults(func=cmd_check_nc)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
