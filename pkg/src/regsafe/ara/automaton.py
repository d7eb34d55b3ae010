"""One-way alternating automata over data words with one freeze register.

A configuration is a pair (state, class); a configuration set steps by
choosing, for every configuration, a satisfying pair of the transition formula
for the current letter and the register flag (up when the configuration's
class is the current position's class).  Plainly referenced states keep their
class, down-marked states are re-frozen to the current class.  Safety
acceptance: a data omega-word is accepted iff an infinite sequence of steps
from the initial configuration exists; over a finite word we ask for a partial
run covering every position.
"""

from itertools import product

from ..errors import ParseError, ValidationError
from ..words import Alphabet, DataWord, NAME_RE
from . import posbool as pb

FLAGS = ("up", "nup")


class AlternatingAutomaton:
    """States, one initial state, and a transition table
    (state, letter, flag) -> positive boolean formula; missing entries mean
    false (the thread cannot continue)."""

    def __init__(self, alphabet: Alphabet, states, initial, delta):
        self.alphabet = alphabet
        self.states = tuple(states)
        self.initial = initial
        self.delta = dict(delta)
        self._models = {}
        if len(set(self.states)) != len(self.states):
            raise ValidationError("duplicate state name")
        if initial not in self.states:
            raise ValidationError("initial state %r not declared" % (initial,))
        for (q, a, flag), phi in self.delta.items():
            if q not in self.states:
                raise ValidationError("transition from unknown state %r" % (q,))
            if a not in alphabet:
                raise ValidationError("transition on unknown letter %r" % (a,))
            if flag not in FLAGS:
                raise ValidationError("bad register flag %r" % (flag,))
            for ref in _refs(phi):
                if ref not in self.states:
                    raise ValidationError("transition references unknown state %r" % (ref,))

    def delta_at(self, q, a, flag) -> pb.PosBool:
        return self.delta.get((q, a, flag), pb.Bot())

    def models_at(self, q, a, flag):
        """Minimal satisfying pairs of delta_at, cached."""
        key = (q, a, flag)
        if key not in self._models:
            self._models[key] = pb.minimal_models(self.delta_at(q, a, flag))
        return self._models[key]


def _refs(phi):
    if isinstance(phi, (pb.Ref, pb.DownRef)):
        yield phi.state
    elif isinstance(phi, (pb.And, pb.Or)):
        yield from _refs(phi.lhs)
        yield from _refs(phi.rhs)


def initial_configs(aut, w):
    return frozenset([(aut.initial, w.classes[0])])


def step(aut: AlternatingAutomaton, w: DataWord, i, configs):
    """All successor configuration sets of `configs` at position i, built from
    minimal satisfying pairs.  Empty set of successors means every choice is
    blocked; the empty configuration set steps to itself."""
    letter = w.letters[i]
    here = w.classes[i]
    per_config = []
    for (q, cls) in sorted(configs):
        flag = "up" if cls == here else "nup"
        models = aut.models_at(q, letter, flag)
        if not models:
            return set()
        per_config.append((cls, models))
    out = set()
    for choice in product(*(models for (_, models) in per_config)):
        nxt = set()
        for (cls, _), (plain, fresh) in zip(per_config, choice):
            nxt.update((q2, cls) for q2 in plain)
            nxt.update((q2, here) for q2 in fresh)
        out.add(frozenset(nxt))
    return out


def run_exists(aut: AlternatingAutomaton, w: DataWord) -> bool:
    """Is there a partial run over the whole of w from the initial
    configuration?

    Frontiers are pruned to inclusion-minimal configuration sets: a smaller
    set has a continuation whenever a larger one does.
    """
    if len(w) == 0:
        raise ValidationError("word must be non-empty")
    frontier = [initial_configs(aut, w)]
    for i in range(len(w)):
        nxt = set()
        for configs in frontier:
            nxt |= step(aut, w, i, configs)
        if not nxt:
            return False
        frontier = _minimal_sets(nxt)
    return True


def _minimal_sets(sets):
    ordered = sorted(sets, key=len)
    kept = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def _disjoint(a1, a2):
    """Rename states apart; returns (states1, states2, rename1, rename2)."""
    r1 = {q: q for q in a1.states}
    used = set(a1.states)
    r2 = {}
    for q in a2.states:
        name = q
        while name in used:
            name += "_2"
        r2[q] = name
        used.add(name)
    return r1, r2, used


def _rename_phi(phi, ren):
    if isinstance(phi, pb.Ref):
        return pb.Ref(ren[phi.state])
    if isinstance(phi, pb.DownRef):
        return pb.DownRef(ren[phi.state])
    if isinstance(phi, pb.And):
        return pb.And(_rename_phi(phi.lhs, ren), _rename_phi(phi.rhs, ren))
    if isinstance(phi, pb.Or):
        return pb.Or(_rename_phi(phi.lhs, ren), _rename_phi(phi.rhs, ren))
    return phi


def _combine(a1: AlternatingAutomaton, a2: AlternatingAutomaton, junction):
    if a1.alphabet != a2.alphabet:
        raise ValidationError("automata must share an alphabet")
    r1, r2, used = _disjoint(a1, a2)
    init = "init"
    while init in used:
        init += "0"
    delta = {}
    for (q, a, flag), phi in a1.delta.items():
        delta[(r1[q], a, flag)] = _rename_phi(phi, r1)
    for (q, a, flag), phi in a2.delta.items():
        delta[(r2[q], a, flag)] = _rename_phi(phi, r2)
    for a in a1.alphabet:
        for flag in FLAGS:
            lhs = delta.get((r1[a1.initial], a, flag), pb.Bot())
            rhs = delta.get((r2[a2.initial], a, flag), pb.Bot())
            delta[(init, a, flag)] = junction(lhs, rhs)
    states = (init,) + tuple(r1[q] for q in a1.states) + tuple(r2[q] for q in a2.states)
    aut = AlternatingAutomaton(a1.alphabet, states, init, delta)
    return aut, tuple(r2[q] for q in a2.states)


def intersect(a1, a2) -> AlternatingAutomaton:
    return _combine(a1, a2, pb.And)[0]


def union(a1, a2) -> AlternatingAutomaton:
    return _combine(a1, a2, pb.Or)[0]


def inclusion_product(a1, a2):
    """Combine a1 with the dual of a2 conjunctively.  Returns the combined
    automaton together with the names of the dual component's states; a word
    witnesses non-inclusion exactly when the combined automaton has a run that
    at some point drops every thread in those states and still continues
    forever."""
    aut, co_states = _combine(a1, dualize(a2), pb.And)
    return aut, co_states


def dualize(aut: AlternatingAutomaton) -> AlternatingAutomaton:
    """Swap and/or and true/false in every entry.  Entries absent from the
    table are false, so the dual table must list their duals explicitly."""
    delta = {}
    for q in aut.states:
        for a in aut.alphabet:
            for flag in FLAGS:
                delta[(q, a, flag)] = pb.dual(aut.delta_at(q, a, flag))
    return AlternatingAutomaton(aut.alphabet, aut.states, aut.initial, delta)


def parse_automaton(text) -> AlternatingAutomaton:
    alphabet = None
    states = None
    initial = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("alphabet:"):
            alphabet = Alphabet(tuple(line[len("alphabet:"):].split()))
        elif line.startswith("states:"):
            states = tuple(line[len("states:"):].split())
        elif line.startswith("initial:"):
            parts = line[len("initial:"):].split()
            if len(parts) != 1:
                raise ParseError("line %d: expected one initial state" % lineno)
            initial = parts[0]
        else:
            entries.append((lineno, line))
    if alphabet is None or states is None or initial is None:
        raise ParseError("automaton file needs alphabet:, states: and initial: lines")
    for q in states:
        if not NAME_RE.match(q):
            raise ParseError("bad state name %r" % (q,))
    delta = {}
    for lineno, line in entries:
        if "->" not in line:
            raise ParseError("line %d: expected 'state, letter, flag -> formula'" % lineno)
        head, _, body = line.partition("->")
        parts = [p.strip() for p in head.split(",")]
        if len(parts) != 3:
            raise ParseError("line %d: expected 'state, letter, flag' before '->'" % lineno)
        q, a, flag = parts
        if q not in states:
            raise ParseError("line %d: unknown state %r" % (lineno, q))
        if a not in alphabet:
            raise ParseError("line %d: unknown letter %r" % (lineno, a))
        if flag not in ("up", "nup", "*"):
            raise ParseError("line %d: flag must be up, nup or *" % lineno)
        phi = pb.parse_posbool(body.strip(), set(states))
        for fl in (FLAGS if flag == "*" else (flag,)):
            if (q, a, fl) in delta:
                raise ParseError("line %d: duplicate entry for %s, %s, %s" % (lineno, q, a, fl))
            delta[(q, a, fl)] = phi
    return AlternatingAutomaton(alphabet, states, initial, delta)


def format_automaton(aut: AlternatingAutomaton) -> str:
    lines = [
        "alphabet: " + " ".join(aut.alphabet.letters),
        "states: " + " ".join(aut.states),
        "initial: " + aut.initial,
    ]
    bot = pb.Bot()
    for q in aut.states:
        for a in aut.alphabet.letters:
            up = aut.delta_at(q, a, "up")
            nup = aut.delta_at(q, a, "nup")
            if up == nup:
                if up != bot:
                    lines.append("%s, %s, * -> %s" % (q, a, pb.format_posbool(up)))
            else:
                if up != bot:
                    lines.append("%s, %s, up -> %s" % (q, a, pb.format_posbool(up)))
                if nup != bot:
                    lines.append("%s, %s, nup -> %s" % (q, a, pb.format_posbool(nup)))
    return "\n".join(lines) + "\n"
