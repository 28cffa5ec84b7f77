"""Command-line front end.

Subcommands: eval, optimize, complete, turnout, reduce, count. Rationals are
printed exactly as ``a/b`` (or ``a``). In text mode, theories are printed one
statement per line and annotations are ``#`` comments, so the output of
``optimize`` and ``complete`` is itself a valid theory file. ``--machine``
switches to one ``key=value`` pair per line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import evaluation, reductions, strategy
from .errors import CampaignError
from .formula import Theory, VarUniverse, parse_theory, to_string
from .voters import Kind, dumps_voters, format_rational, loads_voters, parse_rational, universe_of
from .worlds import SolverConfig, count_models

GADGETS = ("sat-optimistic", "unsat-pessimistic", "wsat", "count", "cnf-turnout")


class CliError(Exception):
    pass


class Output:
    def __init__(self, machine):
        self.machine = machine
        self.lines = []

    def pair(self, key, value):
        self.lines.append(f"{key}={value}" if self.machine else f"# {key} {value}")

    def text(self, line):
        self.lines.append(line)

    def theory(self, theory, key="statement"):
        for s in theory.statements:
            line = to_string(s, theory.universe)
            self.lines.append(f"{key}={line}" if self.machine else line)


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _config(args):
    return SolverConfig(n_max=args.nmax, p_max=args.pmax, workers=args.workers, chunk_bits=args.chunk_bits)


def _load_voters(args):
    if not args.voters:
        raise CliError("--voters is required")
    return loads_voters(_read(args.voters))


def _load_theory_and_voters(args):
    voters, declared = _load_voters(args)
    if not args.theory:
        raise CliError("--theory is required")
    text = _read(args.theory)
    if declared is not None:
        theory = parse_theory(text, declared)
    else:
        theory = parse_theory(text)
        theory = theory.over(universe_of(voters, theory.universe))
    return theory, voters


def _load_formula(args):
    """A formula file is either DIMACS CNF or a theory file read as one conjunction."""
    if not args.formula:
        raise CliError("--formula is required")
    text = _read(args.formula)
    if reductions.looks_like_dimacs(text):
        cnf = reductions.parse_dimacs(text)
        return cnf.to_formula(), cnf.universe, cnf
    theory = parse_theory(text)
    return theory.formula(), theory.universe, None


def _kind_of(voters, requested):
    if requested:
        return Kind(requested)
    kinds = {v.kind for v in voters}
    if len(kinds) != 1:
        raise CliError("voters have mixed kinds; pass --kind")
    return kinds.pop()


def cmd_eval(args, out):
    theory, voters = _load_theory_and_voters(args)
    if args.voter_id:
        voters = [v for v in voters if v.id == args.voter_id]
        if not voters:
            raise CliError(f"no voter with id {args.voter_id!r}")
    config = _config(args)
    for v in voters:
        result = evaluation.utility(theory, v, config)
        value = format_rational(result.value)
        if out.machine:
            out.text(f"{v.id}.kind={v.kind.value}")
            out.text(f"{v.id}.value={value}")
            if result.witness is not None:
                out.text(f"{v.id}.witness={result.witness}")
        else:
            witness = f" {result.witness}" if result.witness is not None else ""
            out.text(f"{v.id} {v.kind.value} {value}{witness}")


def cmd_optimize(args, out):
    voters, declared = _load_voters(args)
    kind = _kind_of(voters, args.kind)
    result = strategy.optimal_complete_theory(voters, kind, declared)
    out.theory(result.theory)
    out.pair("total", format_rational(result.total))


def cmd_complete(args, out):
    theory, voters = _load_theory_and_voters(args)
    kind = _kind_of(voters, args.kind)
    result = strategy.optimal_completion(theory, voters, kind, _config(args))
    out.theory(result.theory)
    out.pair("total", format_rational(result.total))


def cmd_turnout(args, out):
    voters, declared = _load_voters(args)
    if args.h is None:
        raise CliError("--h is required")
    inst = strategy.TurnoutInstance(tuple(voters), args.h, declared)
    result = strategy.turnout(inst, _config(args))
    out.text(f"decision={'YES' if result.decision else 'NO'}" if out.machine
             else ("YES" if result.decision else "NO"))
    for vid, best in result.best_utilities.items():
        out.pair(f"best.{vid}", format_rational(best))
    if result.theory is not None:
        out.pair("satisfied", ",".join(result.satisfied) or "-")
        out.theory(result.theory)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def cmd_reduce(args, out):
    phi, universe, cnf = _load_formula(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    config = _config(args)
    written = []
    if args.gadget in ("sat-optimistic", "unsat-pessimistic"):
        build = (reductions.sat_to_optimistic_threshold if args.gadget == "sat-optimistic"
                 else reductions.unsat_to_pessimistic_threshold)
        inst = build(phi, universe)
        written.append(_write(outdir / "theory.txt", str(inst.theory) + "\n"))
        written.append(_write(outdir / "voters.json", dumps_voters(inst.voters, inst.theory.universe)))
        out.pair("threshold", format_rational(inst.threshold))
        out.pair("recipe", inst.recipe)
    elif args.gadget == "wsat":
        weights = _parse_weights(args.weights, universe)
        inst = reductions.wsat_to_evaluation(
            reductions.WsatInstance(phi, universe, weights, args.direction), config)
        written.append(_write(outdir / "theory.txt", str(inst.theory) + "\n"))
        written.append(_write(outdir / "voters.json", dumps_voters(inst.voters, inst.theory.universe)))
        out.pair("recipe", inst.recipe)
    elif args.gadget == "count":
        gadget = reductions.build_count_gadget(phi, universe)
        written.append(_write(outdir / "psi.txt", str(gadget.psi) + "\n"))
        written.append(_write(outdir / "psi_prime.txt", str(gadget.psi_prime) + "\n"))
        written.append(_write(outdir / "voters.json", dumps_voters([gadget.voter], gadget.psi.universe)))
        out.pair("recipe", "S = 0 if ut(psi') = 0, else 1 / (ut(psi) / ut(psi') - 1)")
    elif args.gadget == "cnf-turnout":
        if cnf is None:
            cnf = reductions.Cnf.from_formula(phi, universe)
        inst = reductions.cnfsat_to_pessimistic_turnout(cnf)
        written.append(_write(outdir / "voters.json", dumps_voters(inst.voters, inst.universe)))
        out.pair("h", inst.h)
        out.pair("recipe", "the CNF formula is satisfiable iff the turnout answer is YES")
    else:
        raise CliError(f"unknown gadget {args.gadget!r}")
    for path in written:
        out.pair("wrote", path.name)


def _parse_weights(text, universe: VarUniverse):
    if not text:
        raise CliError("--weights is required for the wsat gadget")
    weights = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise CliError(f"bad weight {item!r}; expected name=value")
        weights[name.strip()] = parse_rational(value)
    missing = [n for n in universe.names if n not in weights]
    extra = [n for n in weights if n not in universe.names]
    if missing or extra:
        raise CliError(f"weights must cover exactly the formula's variables (missing {missing}, unknown {extra})")
    return tuple(weights[n] for n in universe.names)


def cmd_count(args, out):
    phi, universe, _ = _load_formula(args)
    config = _config(args)
    if args.via == "enumerate":
        count = count_models(Theory(universe, (phi,)), config).total
    else:
        count = reductions.count_via_expected_utility(phi, universe, config)
    out.text(f"count={count}" if out.machine else str(count))


COMMANDS = {
    "eval": cmd_eval,
    "optimize": cmd_optimize,
    "complete": cmd_complete,
    "turnout": cmd_turnout,
    "reduce": cmd_reduce,
    "count": cmd_count,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", help="theory file, one formula per line")
    common.add_argument("--voters", help="voter file (JSON)")
    common.add_argument("--formula", help="formula file (theory syntax or DIMACS CNF)")
    common.add_argument("--kind", choices=[k.value for k in Kind])
    common.add_argument("--h", type=int, help="number of voters that must turn out")
    common.add_argument("--nmax", type=int, default=24, help="maximum number of variables")
    common.add_argument("--pmax", type=int, default=20, help="maximum number of pessimists in mixed turnout")
    common.add_argument("--workers", type=int, default=1, help="worker threads for world enumeration")
    common.add_argument("--chunk-bits", type=int, default=16, help="log2 of the worlds per enumeration chunk")
    common.add_argument("--machine", action="store_true", help="print key=value lines")

    parser = argparse.ArgumentParser(prog="campaignlogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", parents=[common], help="voter utilities for a theory")
    p.add_argument("--voter-id")
    sub.add_parser("optimize", parents=[common], help="optimal complete theory")
    sub.add_parser("complete", parents=[common], help="optimal completion of a theory")
    sub.add_parser("turnout", parents=[common], help="decide a turnout problem")
    p = sub.add_parser("reduce", parents=[common], help="emit a reduction gadget instance")
    p.add_argument("gadget", choices=GADGETS)
    p.add_argument("--out", default=".", help="directory for the emitted files")
    p.add_argument("--weights", help="wsat weights, e.g. x1=2,x2=1/2")
    p.add_argument("--direction", choices=("max", "min"), default="max")
    p = sub.add_parser("count", parents=[common], help="model count of a formula")
    p.add_argument("--via", choices=("enumerate", "utility"), default="enumerate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.machine)
    try:
        COMMANDS[args.command](args, out)
    except (CampaignError, CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write("".join(line + "\n" for line in out.lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
