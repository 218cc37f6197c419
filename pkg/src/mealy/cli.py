"""Command line interface.

Every command reads one document (``-`` for stdin), works on it, and
prints either text or JSON (``--format``).  Exit codes: 0 for success
including an Unknown verdict, 1 for usage and parse errors, 2 when the
input does not satisfy a command's precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    BudgetExceeded,
    DocumentError,
    EmptyResult,
    InvalidAutomaton,
    NoExitCycle,
    NoSuchTriple,
    NotACycle,
    NotInvertible,
    PreconditionViolated,
    UnknownSymbol,
)
from .machines import (
    DEFAULT_POWER_CAP,
    MealyMachine,
    _underlying,
    dual,
    inverse,
    is_bireversible,
    is_invertible,
    is_reversible,
    power,
    validate,
)
from .cycles import (
    classify_exits,
    has_cycle_with_exit,
    on_cycle_states,
    prune,
    prune_machine,
)
from .enrichment import BRANCHES, enrich
from .finiteness import (
    DEFAULT_ORBIT_CAP,
    decide,
    orbit_size,
    random_invertible_enrichment,
    sample_no_exit,
)
from .documents import export_dot, parse, print_document

CLOSURE_BUDGET_ENV = "MEALY_CLOSURE_BUDGET"
MAX_LEVEL_ENV = "MEALY_MAX_LEVEL"

_PRECONDITION_ERRORS = (
    BudgetExceeded,
    EmptyResult,
    InvalidAutomaton,
    NoExitCycle,
    NoSuchTriple,
    NotACycle,
    NotInvertible,
    PreconditionViolated,
    UnknownSymbol,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"),
                        default="text", help="output format")
    parser = _Parser(prog="mealy",
                     description="Analyze Mealy automata and the "
                                 "(semi)groups they generate.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    def command(name, help_, document=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if document:
            p.add_argument("document",
                           help="input document path, or - for stdin")
        return p

    command("check", "validate a document and report its properties")
    command("dual", "exchange the roles of states and letters")
    command("inverse", "invert an invertible machine")
    p = command("power", "the machine acting on blocks of letters")
    p.add_argument("exponent", type=int, help="block length, at least 1")
    p.add_argument("--cap", type=int, default=DEFAULT_POWER_CAP,
                   help="largest allowed stateset (default %(default)s)")
    command("prune", "drop states unreachable from every cycle")
    command("cycles", "locate a cycle with an exit and classify its exits")
    p = command("enrich", "choose outputs that force an infinite group")
    p.add_argument("--branch", choices=BRANCHES, default="auto",
                   help="construction to use (default auto)")
    p = command("finiteness", "decide finiteness of the generated "
                              "(semi)group where possible")
    p.add_argument("--budget", type=int, default=None,
                   help=f"closure element budget (default "
                        f"${CLOSURE_BUDGET_ENV} or 100000)")
    p.add_argument("--max-level", type=int, default=None,
                   help=f"deepest power for the splitting scan (default "
                        f"${MAX_LEVEL_ENV} or 19)")
    p = command("orbit", "orbit size of a letter word under a state word")
    p.add_argument("--element", required=True,
                   help="state word, e.g. 'x y' or 'xy'")
    p.add_argument("--word", required=True,
                   help="letter word, e.g. '0 1 1' or '011'")
    p.add_argument("--cap", type=int, default=DEFAULT_ORBIT_CAP,
                   help="give up past this many words (default %(default)s)")
    command("dot", "export the transition graph in DOT format")
    p = command("sample", "generate a random automaton whose cycles have "
                          "no exit", document=False)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--letters", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--enrich-random", action="store_true",
                   help="also equip it with random output permutations")
    return parser


def _read_document(args):
    if args.document == "-":
        return parse(sys.stdin.read())
    with open(args.document, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def _require_machine(obj, command):
    if not isinstance(obj, MealyMachine):
        raise PreconditionViolated(
            f"{command} needs a mealy document, got an automaton")
    return obj


def _env_int(name):
    raw = os.environ.get(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{name} must be an integer, got {raw!r}") from None


def _yesno(flag):
    return "yes" if flag else "no"


def _cmd_check(args, out):
    obj = _read_document(args)
    diagnostics = validate(obj)
    is_machine = isinstance(obj, MealyMachine)
    payload = {
        "kind": "mealy" if is_machine else "automaton",
        "valid": not diagnostics,
        "diagnostics": [str(d) for d in diagnostics],
        "states": _underlying(obj).n_states,
        "letters": _underlying(obj).n_letters,
        "reversible": is_reversible(obj),
    }
    if is_machine:
        payload["invertible"] = is_invertible(obj)
        payload["bireversible"] = is_bireversible(obj)
    if args.format == "json":
        _emit_json(payload, out)
    else:
        lines = [f"kind: {payload['kind']}",
                 f"states: {payload['states']}",
                 f"letters: {payload['letters']}",
                 f"valid: {_yesno(payload['valid'])}"]
        lines += [f"diagnostic: {d}" for d in payload["diagnostics"]]
        lines.append(f"reversible: {_yesno(payload['reversible'])}")
        if is_machine:
            lines.append(f"invertible: {_yesno(payload['invertible'])}")
            lines.append(
                f"bireversible: {_yesno(payload['bireversible'])}")
        out.write("\n".join(lines) + "\n")
    return 0 if not diagnostics else 2


def _emit_json(payload, out):
    out.write(json.dumps(payload, indent=2) + "\n")


def _emit_document(args, out, document, extra=None, comments=()):
    if args.format == "json":
        payload = {"document": document}
        if extra:
            payload.update(extra)
        _emit_json(payload, out)
    else:
        out.write(document)
        for comment in comments:
            out.write(f"# {comment}\n")
    return 0


def _cmd_dual(args, out):
    m = _require_machine(_read_document(args), "dual")
    return _emit_document(args, out, print_document(dual(m)))


def _cmd_inverse(args, out):
    m = _require_machine(_read_document(args), "inverse")
    return _emit_document(args, out, print_document(inverse(m)))


def _cmd_power(args, out):
    m = _require_machine(_read_document(args), "power")
    if args.exponent < 1:
        raise _UsageError("exponent must be at least 1")
    return _emit_document(
        args, out, print_document(power(m, args.exponent, cap=args.cap)))


def _cmd_prune(args, out):
    obj = _read_document(args)
    if isinstance(obj, MealyMachine):
        result, removed = prune_machine(obj)
    else:
        result, removed = prune(obj)
    comments = []
    if removed:
        comments.append("removed: " + " ".join(removed))
    return _emit_document(args, out, print_document(result),
                          extra={"removed": list(removed)},
                          comments=comments)


def _cmd_cycles(args, out):
    obj = _read_document(args)
    a = _underlying(obj)
    cyclic = sorted(on_cycle_states(a))
    witness = has_cycle_with_exit(a)
    payload = {"on_cycle_states": [a.states[x] for x in cyclic]}
    if witness is None:
        payload["witness"] = None
    else:
        cycle, exit_ = witness
        report = classify_exits(a, cycle)
        payload["witness"] = {
            "cycle": {"states": list(a.state_names(cycle.states)),
                      "letters": list(a.letter_names(cycle.letters))},
            "exit": {"source": a.states[exit_.source],
                     "letter": a.alphabet[exit_.letter],
                     "target": a.states[exit_.target],
                     "kind": exit_.kind},
            "classification": report.classification,
            "exits": [{"source": a.states[e.source],
                       "letter": a.alphabet[e.letter],
                       "target": a.states[e.target],
                       "kind": e.kind} for e in report.exits],
        }
    if args.format == "json":
        _emit_json(payload, out)
        return 0
    lines = ["on-cycle states: " + " ".join(payload["on_cycle_states"])]
    if witness is None:
        lines.append("cycle with exit: none")
    else:
        w = payload["witness"]
        lines.append("cycle: " + " ".join(w["cycle"]["states"])
                     + " / " + " ".join(w["cycle"]["letters"]))
        lines.append("classification: " + w["classification"])
        for e in w["exits"]:
            lines.append(f"exit: {e['source']} {e['letter']} -> "
                         f"{e['target']} ({e['kind']})")
    out.write("\n".join(lines) + "\n")
    return 0


def _cmd_enrich(args, out):
    obj = _read_document(args)
    result = enrich(_underlying(obj), branch=args.branch)
    document = print_document(result.machine)
    extra = {"certificate": str(result.certificate),
             "removed": list(result.removed),
             "details": result.details}
    comments = [f"certificate: {result.certificate}"]
    if result.removed:
        extra["full_document"] = print_document(result.full_machine)
        comments.append("removed: " + " ".join(result.removed))
    return _emit_document(args, out, document, extra=extra,
                          comments=comments)


def _cmd_finiteness(args, out):
    m = _require_machine(_read_document(args), "finiteness")
    budget = args.budget
    if budget is None:
        budget = _env_int(CLOSURE_BUDGET_ENV)
    max_level = args.max_level
    if max_level is None:
        max_level = _env_int(MAX_LEVEL_ENV)
    verdict = decide(m, budget=budget, max_level=max_level)
    if args.format == "json":
        _emit_json(verdict.to_dict(), out)
        return 0
    lines = [f"verdict: {verdict.kind}"]
    if verdict.certificate is not None:
        lines.append(f"certificate: {verdict.certificate}")
    if verdict.order is not None:
        lines.append(f"order: {verdict.order}")
    side = verdict.evidence.get("side")
    if side is not None:
        lines.append(f"side: {side}")
    out.write("\n".join(lines) + "\n")
    return 0


def _cmd_orbit(args, out):
    m = _require_machine(_read_document(args), "orbit")
    size = orbit_size(m, args.element, args.word, cap=args.cap)
    if args.format == "json":
        _emit_json({"orbit": size, "cap": args.cap}, out)
    elif size is None:
        out.write(f"orbit: unknown (cap {args.cap} exceeded)\n")
    else:
        out.write(f"orbit: {size}\n")
    return 0


def _cmd_dot(args, out):
    obj = _read_document(args)
    text = export_dot(obj)
    if args.format == "json":
        _emit_json({"dot": text}, out)
    else:
        out.write(text)
    return 0


def _cmd_sample(args, out):
    a = sample_no_exit(args.states, args.letters, args.seed)
    if args.enrich_random:
        return _emit_document(
            args, out,
            print_document(random_invertible_enrichment(a, args.seed)))
    return _emit_document(args, out, print_document(a))


_COMMANDS = {
    "check": _cmd_check,
    "dual": _cmd_dual,
    "inverse": _cmd_inverse,
    "power": _cmd_power,
    "prune": _cmd_prune,
    "cycles": _cmd_cycles,
    "enrich": _cmd_enrich,
    "finiteness": _cmd_finiteness,
    "orbit": _cmd_orbit,
    "dot": _cmd_dot,
    "sample": _cmd_sample,
}


def run(argv=None, out=None) -> int:
    """Parse arguments, run one command, return the exit code."""
    if out is None:
        out = sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except SystemExit as status:  # --help
        return 0 if not status.code else 1
    try:
        return _COMMANDS[args.command](args, out)
    except _UsageError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except DocumentError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except _PRECONDITION_ERRORS as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
