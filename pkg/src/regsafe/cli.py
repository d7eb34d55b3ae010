"""Command-line front end over the library.

One subcommand per pipeline stage; verdict-producing commands exit 0 on the
positive verdict, 1 on the negative one and 2 on unknown.  Usage problems
exit 64; unparsable input files exit 65.  With --format json every result is
emitted as one JSON record per line instead of plain text.
"""

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .errors import ParseError, RegsafeError
from .words import Alphabet, parse_word, print_word
from . import ltl
from .ara import format_automaton, ltl_to_ara, parse_automaton, run_exists
from .ipcant import (bound_log2, bound_params, format_machine,
                     machine_counts, parse_machine)
from .pipeline import (Inclusion, Nonemptiness, ara_to_ipcant,
                       bounded_nonemptiness, encode_tm_run, inclusion_check,
                       oracle_run_exists, parse_tm, tm_alphabet, tm_to_formula)
from . import randgen


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class Invocation:
    """One parsed CLI job: the subcommand, its input paths, the exploration
    bounds and the output format."""

    subcommand: str
    paths: tuple
    cap: int
    vcap: int
    fmt: str

    def __post_init__(self):
        if self.cap < 1 or self.vcap < 1:
            raise _UsageError("cap and vcap must be positive")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r") as fh:
        return fh.read()


def _emit(inv, text_lines, record):
    if inv.fmt == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


_POSITIVE = {"YES", "NONEMPTY", "INCLUDED", "AGREE"}
_NEGATIVE = {"NO", "EMPTY", "NOT_INCLUDED", "MISMATCH"}

# largest bound, in bits, that `bound` will evaluate exactly
_BOUND_PRINT_BITS = 1_000_000


def _verdict_exit(verdict):
    if verdict in _POSITIVE:
        return 0
    if verdict in _NEGATIVE:
        return 1
    return 2


def _cmd_parse(inv, ns):
    ab, f = ltl.parse_formula_file(_read(ns.formula))
    canonical = ltl.print_formula(f)
    _emit(inv, [canonical],
          {"command": "parse", "alphabet": list(ab.letters), "formula": canonical})
    return 0


def _cmd_ltl2ara(inv, ns):
    ab, f = ltl.parse_formula_file(_read(ns.formula))
    aut = ltl_to_ara(f, ab)
    text = format_automaton(aut)
    _emit(inv, [text.rstrip("\n")], {"command": "ltl2ara", "artifact": text})
    return 0


def _cmd_ara2cm(inv, ns):
    aut = parse_automaton(_read(ns.automaton))
    machine = ara_to_ipcant(aut).materialize()
    text = format_machine(machine)
    _emit(inv, [text.rstrip("\n")], {"command": "ara2cm", "artifact": text})
    return 0


def _cmd_run(inv, ns):
    aut = parse_automaton(_read(ns.automaton))
    w = parse_word(ns.word, aut.alphabet)
    verdict = "YES" if run_exists(aut, w) else "NO"
    _emit(inv, [verdict], {"command": "run", "verdict": verdict})
    return _verdict_exit(verdict)


def _machine_from(ns):
    if getattr(ns, "machine", None):
        return parse_machine(_read(ns.machine))
    if getattr(ns, "automaton", None):
        return ara_to_ipcant(parse_automaton(_read(ns.automaton)))
    raise _UsageError("need --machine or --automaton")


def _cmd_sat(inv, ns):
    machine = _machine_from(ns)
    outcome = bounded_nonemptiness(machine, cap=inv.cap, vcap=inv.vcap)
    verdict = outcome.name
    _emit(inv, [verdict], {"command": "sat", "verdict": verdict})
    return _verdict_exit(verdict)


def _include_verdict(inv, command, a1, a2):
    result = inclusion_check(a1, a2, cap=inv.cap, vcap=inv.vcap)
    verdict = result.verdict.name
    _emit(inv, [verdict],
          {"command": command, "verdict": verdict,
           "explored": result.explored, "converged": result.converged,
           "checkpoints": result.checkpoints})
    return _verdict_exit(verdict)


def _cmd_include(inv, ns):
    a1 = parse_automaton(_read(ns.lhs))
    a2 = parse_automaton(_read(ns.rhs))
    return _include_verdict(inv, "include", a1, a2)


def _cmd_refine(inv, ns):
    ab1, f1 = ltl.parse_formula_file(_read(ns.lhs))
    ab2, f2 = ltl.parse_formula_file(_read(ns.rhs))
    return _include_verdict(inv, "refine", ltl_to_ara(f1, ab1), ltl_to_ara(f2, ab2))


def _cmd_bound(inv, ns):
    machine = _machine_from(ns)
    q_count, basis_size, counter_count = machine_counts(machine)
    bits = bound_log2(q_count, basis_size, counter_count)
    if bits > _BOUND_PRINT_BITS:
        _emit(inv, ["m is about 2^%.3e, too large to materialize" % bits],
              {"command": "bound", "m_log2": bits, "materialized": False})
        return 0
    params = bound_params(q_count, basis_size, counter_count)
    # the bound is doubly exponential; lift the int-to-str guard to fit it
    digits = params.m.bit_length() // 3 + 20
    if digits > sys.get_int_max_str_digits():
        sys.set_int_max_str_digits(digits)
    lines = ["alpha: " + " ".join(str(a) for a in params.alphas),
             "U: " + " ".join(str(u) for u in params.us),
             "m=%d" % params.m]
    _emit(inv, lines,
          {"command": "bound", "alpha": list(params.alphas),
           "U": list(params.us), "m": params.m})
    return 0


def _cmd_tmgen(inv, ns):
    machine = parse_tm(_read(ns.tm))
    f = tm_to_formula(machine)
    artifact = ltl.print_formula_file(tm_alphabet(machine), f)
    lines = [artifact.rstrip("\n")]
    record = {"command": "tmgen", "artifact": artifact}
    if ns.steps is not None:
        word = print_word(encode_tm_run(machine, ns.steps))
        lines.append("word: " + word)
        record["word"] = word
    _emit(inv, lines, record)
    return 0


def _cmd_oracle(inv, ns):
    rng = random.Random(ns.seed)
    alphabet = Alphabet(("a", "b"))
    for trial in range(ns.trials):
        aut = randgen.random_automaton(rng, alphabet, max_states=ns.max_states)
        w = randgen.random_word(rng, alphabet, max_len=ns.max_len)
        fast = run_exists(aut, w)
        slow = oracle_run_exists(aut, w, max_len=ns.max_len, max_states=ns.max_states)
        if fast != slow:
            print("automaton:\n%s" % format_automaton(aut), file=sys.stderr)
            print("word: %s" % print_word(w), file=sys.stderr)
            verdict = "MISMATCH"
            _emit(inv, ["%s trial=%d seed=%d" % (verdict, trial, ns.seed)],
                  {"command": "oracle", "verdict": verdict,
                   "trial": trial, "seed": ns.seed})
            return 1
    verdict = "AGREE"
    _emit(inv, ["%s trials=%d seed=%d" % (verdict, ns.trials, ns.seed)],
          {"command": "oracle", "verdict": verdict,
           "trials": ns.trials, "seed": ns.seed})
    return 0


def _build_parser():
    top = _ArgumentParser(prog="regsafe",
                          description="decision pipeline for safety register formulas")
    shared = _ArgumentParser(add_help=False)
    shared.add_argument("--cap", type=int, default=10000,
                        help="exploration step bound (default 10000)")
    shared.add_argument("--vcap", type=int, default=64,
                        help="counter value bound (default 64)")
    shared.add_argument("--format", choices=("text", "json"), default="text",
                        help="output style (default text)")
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", parents=[shared], help="echo a formula file canonically")
    p.add_argument("--formula", required=True)
    p.set_defaults(handler=_cmd_parse, inputs=("formula",))

    p = sub.add_parser("ltl2ara", parents=[shared], help="translate a formula file to an automaton file")
    p.add_argument("--formula", required=True)
    p.set_defaults(handler=_cmd_ltl2ara, inputs=("formula",))

    p = sub.add_parser("ara2cm", parents=[shared], help="compile an automaton file to a counter machine file")
    p.add_argument("--automaton", required=True)
    p.set_defaults(handler=_cmd_ara2cm, inputs=("automaton",))

    p = sub.add_parser("run", parents=[shared], help="does the automaton have a partial run on the word")
    p.add_argument("--automaton", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(handler=_cmd_run, inputs=("automaton",))

    p = sub.add_parser("sat", parents=[shared], help="bounded nonemptiness of a counter machine")
    p.add_argument("--machine")
    p.add_argument("--automaton")
    p.set_defaults(handler=_cmd_sat, inputs=("machine", "automaton"))

    p = sub.add_parser("include", parents=[shared], help="language inclusion of two automaton files")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(handler=_cmd_include, inputs=("lhs", "rhs"))

    p = sub.add_parser("refine", parents=[shared], help="implication of two formula files via inclusion")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(handler=_cmd_refine, inputs=("lhs", "rhs"))

    p = sub.add_parser("bound", parents=[shared], help="print the theoretical exploration bound parameters")
    p.add_argument("--machine")
    p.add_argument("--automaton")
    p.set_defaults(handler=_cmd_bound, inputs=("machine", "automaton"))

    p = sub.add_parser("tmgen", parents=[shared], help="emit the run-encoding formula of a machine file")
    p.add_argument("--tm", required=True)
    p.add_argument("--steps", type=int, default=None,
                   help="also emit the encoded run over this many transitions")
    p.set_defaults(handler=_cmd_tmgen, inputs=("tm",))

    p = sub.add_parser("oracle", parents=[shared], help="seeded cross-check of the two run-existence procedures")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-states", type=int, default=4)
    p.set_defaults(handler=_cmd_oracle, inputs=())

    return top


def run_cli(argv) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        paths = tuple(getattr(ns, name) for name in ns.inputs
                      if getattr(ns, name, None))
        inv = Invocation(ns.subcommand, paths, ns.cap, ns.vcap, ns.format)
        return ns.handler(inv, ns)
    except _UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 64
    except SystemExit as e:
        return 0 if e.code in (0, None) else int(e.code)
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 65
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 64
    except RegsafeError as e:
        print("error: %s" % e, file=sys.stderr)
        return 64


def main():
    sys.exit(run_cli(sys.argv[1:]))
