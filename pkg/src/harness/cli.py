"""Command line interface: run, compare, repair, inspect"""
import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

import rng
from assembly import ProblemSpec, is_feasible, load_spec, make_solution
from eda import AlgoConfig, RunAborted, run
from fitness import FitnessError, get_evaluator
from helpers import read_json, write_json
from repair import Repairer
from workspace import config, fpath, maybe_mkdir
from .compare import compare
from .core import HarnessError, UsageError
from .export import export_history, export_run
from .pool import EvaluationPool

log = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Reports bad flags with an exception instead of exiting"""

    def error(self, message):
        raise UsageError("%s\n%s" % (message, self.format_usage().strip()))


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected integers separated by commas, got %r" % text)


def _add_problem_flags(p):
    p.add_argument("--spec", required=True, help="problem file (JSON)")
    p.add_argument(
        "--eq22-literal-sum",
        action="store_true",
        help="active free joints need a component code sum above 1 instead of two components",
    )
    p.add_argument("--signed-accel", action="store_true", help="sum signed chassis accelerations")
    p.add_argument("--count-joints", action="store_true", help="count active joints in the fitness")


def _add_search_flags(p):
    p.add_argument("--truncation", type=float, help="truncation selection rate")
    p.add_argument("--confidence", type=float, help="chi-square confidence level")
    p.add_argument("--gibbs-multiplier", type=int, help="Gibbs updates per variable")
    p.add_argument("--stagnation", type=int, help="stop after this many iterations without improvement")
    p.add_argument("--no-elitism", action="store_true", help="don't carry the best solution over")
    p.add_argument("--no-repair", action="store_true", help="penalize infeasible candidates instead")
    p.add_argument("--no-cache", action="store_true", help="evaluate repeated solutions again")
    p.add_argument("--jobs", type=int, help="fitness worker processes")
    p.add_argument("--trace-cp", action="store_true", help="log the CP search tree (debug level)")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug output")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = ArgumentParser(prog="optimize", description="Assembly configuration optimizer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="one optimization run")
    _add_problem_flags(p)
    p.add_argument("--algo", default="bmda-gs", help="bmda-gs, bmda or ga")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--iters", type=int, help="iteration budget")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--out", default=None, help="output folder")
    _add_search_flags(p)

    p = sub.add_parser("compare", parents=[common], help="repeated runs of several algorithms")
    _add_problem_flags(p)
    p.add_argument("--algos", default="bmda-gs,bmda,ga", help="comma separated algorithms")
    p.add_argument("--runs", type=int, default=30, help="runs per algorithm")
    p.add_argument("--pop", type=_int_list, help="population size, shared by all algorithms")
    p.add_argument("--iters", type=_int_list, help="iteration budget, shared by all algorithms")
    p.add_argument("--seed", type=int, help="base seed, run k uses seed + k")
    p.add_argument("--target", type=float, help="fitness target, defaults to the known optimum")
    p.add_argument("--out", default=None, help="output folder")
    _add_search_flags(p)

    p = sub.add_parser("repair", parents=[common], help="repair solutions")
    _add_problem_flags(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--solution", help="JSON file with a values list")
    src.add_argument("--random", type=int, help="repair this many uniformly random solutions")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--trace-cp", action="store_true", help="log the CP search tree (debug level)")
    p.add_argument("--out", default=None, help="write results to this JSON file")

    p = sub.add_parser("inspect", parents=[common], help="print problem statistics")
    _add_problem_flags(p)
    return parser


def load_problem(args):
    """Spec and evaluator with the command line readings applied"""
    overrides = {}
    if args.eq22_literal_sum:
        overrides["degree_rule"] = "literal-sum"
    spec = load_spec(args.spec, **overrides)
    params = dict(spec.fitness_params)
    if args.signed_accel:
        params["signed_acceleration"] = True
    if args.count_joints:
        params["count_term"] = "joints"
    return spec, params


def _shared(values: Optional[List[int]], name: str) -> Optional[int]:
    if not values:
        return None
    if len(set(values)) > 1:
        raise UsageError("All algorithms must share the same %s, got %s" % (name, values))
    return values[0]


def _settings(args) -> dict:
    return dict(
        truncation_rate=args.truncation,
        confidence_level=args.confidence,
        gibbs_sweep_multiplier=args.gibbs_multiplier,
        stagnation_window=args.stagnation,
        elitism=False if args.no_elitism else None,
        repair=False if args.no_repair else None,
        cache_fitness=False if args.no_cache else None,
        jobs=args.jobs,
        trace_cp=True if args.trace_cp else None,
    )


def load_evaluator(spec: ProblemSpec, params: dict):
    """Evaluator of the problem file, a bad fitness section is a usage error"""
    try:
        return get_evaluator(spec, params)
    except FitnessError as e:
        raise UsageError("Problem %s: %s" % (spec.name, e)) from e


def cmd_run(args) -> int:
    spec, params = load_problem(args)
    evaluator = load_evaluator(spec, params)
    cfg = AlgoConfig.from_defaults(
        algorithm=args.algo,
        population_size=args.pop,
        iteration_budget=args.iters,
        seed=args.seed,
        **_settings(args)
    )
    out = args.out or fpath(config.OUTPUT_DIR, "%s-%s-%d" % (spec.name, cfg.algorithm, cfg.seed))
    with EvaluationPool(cfg.jobs) as pool:
        try:
            history = run(spec, cfg, evaluator, pool)
        except RunAborted as e:
            if e.history is not None and e.history.records:
                maybe_mkdir(out)
                export_history(e.history, out)
            raise
    export_run(history, out, spec)
    print("best fitness %.10g after %d evaluations, written to %s" % (
        history.best_fitness, history.evaluations, out
    ))
    return 0


def cmd_compare(args) -> int:
    spec, params = load_problem(args)
    evaluator = load_evaluator(spec, params)
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    settings = _settings(args)
    settings["population_size"] = _shared(args.pop, "population size")
    settings["iteration_budget"] = _shared(args.iters, "iteration budget")
    base_seed = args.seed if args.seed is not None else config.BASE_SEED
    # fail on bad settings before the first run
    for algo in algorithms:
        AlgoConfig.from_defaults(algorithm=algo, seed=base_seed, **settings)
    jobs = settings.get("jobs") or config.JOBS
    with EvaluationPool(jobs) as pool:
        report = compare(
            spec, evaluator, algorithms, args.runs, base_seed, pool, args.target, **settings
        )
    out = args.out or fpath(config.OUTPUT_DIR, "%s-compare" % spec.name)
    report.write(out)
    for algo, med in report.median_evals_to_target().items():
        print("%s: median evaluations to target %s" % (algo, med))
    print("%d runs, %d evaluations, written to %s" % (
        len(algorithms) * args.runs, report.total_evaluations, out
    ))
    return 0


def _read_solution(spec: ProblemSpec, fname: str):
    try:
        doc = read_json(fname)
    except (OSError, ValueError) as e:
        raise HarnessError("Can't read solution file %s: %s" % (fname, e))
    values = doc.get("values") if isinstance(doc, dict) else doc
    if not isinstance(values, list):
        raise HarnessError("Solution file must hold a values list")
    return make_solution(spec, values)


def cmd_repair(args) -> int:
    spec, _ = load_problem(args)
    repairer = Repairer(spec, trace=args.trace_cp)
    if args.solution is not None:
        cases = [_read_solution(spec, args.solution)]
    else:
        if args.random < 1:
            raise UsageError("--random needs a positive count")
        gen = rng.generator(args.seed, "repair-cli")
        raw = gen.integers(0, spec.domain_sizes, size=(args.random, spec.n_variables))
        cases = [make_solution(spec, row) for row in raw]
    results = []
    for idx, s in enumerate(cases):
        outcome = repairer(s, rng.derive_seed(args.seed, "repair-cli", idx))
        results.append(
            {
                "input": s.to_list(),
                "repaired": outcome.repaired.to_list(),
                "stage": outcome.stage_used.value if outcome.stage_used is not None else None,
                "joints_retyped": list(outcome.joints_retyped),
                "cp_nodes": outcome.cp_nodes_explored,
                "feasible": not is_feasible(spec, outcome.repaired),
            }
        )
    if args.out:
        write_json(args.out, results)
    else:
        for res in results:
            print(json.dumps(res))
    ok = sum(1 for r in results if r["feasible"])
    log.info("%d of %d repaired solutions are feasible", ok, len(results))
    return 0


def cmd_inspect(args) -> int:
    spec, _ = load_problem(args)
    n_comp = spec.n_variables - spec.n_joints
    print("problem: %s (%s)" % (spec.name, spec.digest[:16]))
    print("variables: %d (%d joints, %d components)" % (spec.n_variables, spec.n_joints, n_comp))
    print("joint types: %d, component types: %d" % (spec.n_joint_types, spec.n_component_types))
    for e in spec.envos:
        print("envo %s: %s" % (e.name, sorted(e.joints)))
    print("free joints: %s" % spec.free_joints)
    print("type rules: %s" % [list(r) for r in spec.type_rules])
    print("constrained: %s, degree rule: %s" % (spec.constrained, spec.degree_rule))
    print("fitness: %s" % spec.fitness_id)
    print("search space: %.4g" % float(np.prod(spec.domain_sizes.astype(float))))
    print("%5s  %-9s  %-9s  %s" % ("index", "label", "kind", "domain"))
    for v in spec.variables:
        dom = spec.domain(v.flat_index)
        print("%5d  %-9s  %-9s  0..%d" % (v.flat_index, v.label, v.kind.value, dom[-1]))
    return 0


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "repair": cmd_repair,
    "inspect": cmd_inspect,
}


def parse_args(argv=None):
    return build_parser().parse_args(sys.argv[1:] if argv is None else argv)


def dispatch(args) -> int:
    return COMMANDS[args.command](args)
