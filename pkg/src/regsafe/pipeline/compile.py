"""Compile a safety alternating register automaton into a counter machine
over the counting abstraction.

Basis: one element per state for classes away from the register ("^b"), one
per state for the in-flight generation ("^bb"), one per state marking threads
that just refroze to the current class ("^bbd"), plus one anchor per family
("^b" / "^bb" alone).  Counters: for every state set R a counter tracking
classes whose thread set is exactly R, and for every pair (kept, refrozen) an
in-flight counter.  A machine configuration holds the current class's states
in control and one token per other class in the counter matching its set.

Per letter the machine runs one cycle:
  read   -- letter a: one transfer moves every class token to an in-flight
            pair counter, choosing, per token, minimal models for each of its
            threads (away classes read the letter with the register mismatch
            flag); a class with a model-less thread blocks the transfer.
  models -- branch on a choice of minimal models for the current class's own
            threads (register match flag); their kept and refrozen states
            both stay with the current class.
  merge  -- for each state q in a fixed order, either certify that no class
            refroze a thread onto q (all marked counters zero) or certify a
            witness (decrement then re-increment one) and add q to the
            accumulated current set.
  shift  -- deposit the old current class as an ordinary class token, then
            one transfer drops the in-flight marks (pair counters map to the
            counter of their kept set).
  pick   -- choose the next current class: take a token from any counter
            (its set becomes the control set) or start on a fresh class.

When co_states is given, an extra branch between shift and pick certifies
that no class anywhere holds a co-state and visits a checkpoint control
state; reachability of a checkpoint with an infinite continuation decides
language inclusion.

Exploration uses config_successors, which never fabricates tokens (the
error-free relation); witness certify/release pairs collapse there to a
single successor, so branching stays polynomial in the live counters rather
than in the counter family.  materialize() spells the same cycle out as an
explicit instruction list for small automata.
"""

from itertools import product

from ..ara.automaton import AlternatingAutomaton, FLAGS
from ..errors import ValidationError
from ..ipcant import (
    CounterMachine, CounterStructure, Dec, Inc, Transfer, Transition, EPS,
    compositions, ifz_cap,
)

ANCHOR_AWAY = "^b"
ANCHOR_FLIGHT = "^bb"


def _away_name(q):
    return q + "^b"


def _kept_name(q):
    return q + "^bb"


def _mark_name(q):
    return q + "^bbd"


class CompiledMachine:
    """Counter machine compiled from an automaton; transitions are generated
    on demand.  Counters are indexed by bitmask: away counters first (one per
    state set), then in-flight pair counters (kept mask, refrozen mask)."""

    def __init__(self, aut: AlternatingAutomaton, co_states=None):
        self.aut = aut
        self.alphabet = aut.alphabet
        self.states_order = tuple(aut.states)
        self.n = len(self.states_order)
        self._sidx = {q: i for i, q in enumerate(self.states_order)}
        self.co_states = tuple(co_states) if co_states else ()
        self.co_mask = 0
        for q in self.co_states:
            if q not in self._sidx:
                raise ValidationError("co-state %r is not a state" % (q,))
            self.co_mask |= 1 << self._sidx[q]
        self._structure = None
        self.initial_control = ("read", 1 << self._sidx[aut.initial])
        self._mm = {}
        self._im3 = {}
        self._fam4 = {}

    # counter indexing
    def away_index(self, mask):
        return mask

    def flight_index(self, kept, marked):
        return (1 << self.n) + (kept << self.n | marked)

    @property
    def structure(self):
        """Built on first use: the counter list is exponential in the state
        count and the on-demand transition relation never needs it."""
        if self._structure is None:
            self._structure = self._build_structure()
        return self._structure

    def bound_counts(self):
        """(control state, basis, counter) counts without enumerating
        anything; the control count matches materialize() where that exists."""
        n = self.n
        letters = len(self.alphabet.letters)
        states = (1 << n) * (letters + n + 2) + n * (1 << (3 * n - 1)) + 2
        if self.co_states:
            states += 2
        return (states, 3 * n + 2, (1 << n) + (1 << (2 * n)))

    def _build_structure(self):
        n = self.n
        names = self.states_order
        basis = [ANCHOR_AWAY] + [_away_name(q) for q in names]
        basis += [ANCHOR_FLIGHT] + [_kept_name(q) for q in names] + [_mark_name(q) for q in names]
        counters = []
        for mask in range(1 << n):
            counters.append(frozenset([ANCHOR_AWAY] +
                                      [_away_name(names[i]) for i in range(n) if mask >> i & 1]))
        for kept in range(1 << n):
            for marked in range(1 << n):
                c = [ANCHOR_FLIGHT]
                c += [_kept_name(names[i]) for i in range(n) if kept >> i & 1]
                c += [_mark_name(names[i]) for i in range(n) if marked >> i & 1]
                counters.append(frozenset(c))
        return CounterStructure(basis, counters)

    # minimal models as (kept mask, refrozen mask) pairs
    def _models(self, qi, letter, flag):
        key = (qi, letter, flag)
        if key not in self._mm:
            out = []
            for plain, fresh in self.aut.models_at(self.states_order[qi], letter, flag):
                pm = fm = 0
                for q in plain:
                    pm |= 1 << self._sidx[q]
                for q in fresh:
                    fm |= 1 << self._sidx[q]
                out.append((pm, fm))
            self._mm[key] = tuple(out)
        return self._mm[key]

    def read_images(self, letter, mask):
        """Counter indices a class token with thread set `mask` may move to
        when the letter is read away from the register; None when blocked."""
        key = (letter, mask)
        if key not in self._im3:
            per_state = []
            blocked = False
            for i in range(self.n):
                if mask >> i & 1:
                    models = self._models(i, letter, "nup")
                    if not models:
                        blocked = True
                        break
                    per_state.append(models)
            if blocked:
                self._im3[key] = None
            else:
                pairs = {(0, 0)}
                for models in per_state:
                    pairs = {(k | pm, m | fm)
                             for k, m in pairs for pm, fm in models}
                self._im3[key] = tuple(self.flight_index(k, m) for k, m in sorted(pairs))
        return self._im3[key]

    def here_sets(self, letter, mask):
        """Distinct new current-class state sets reachable by the current
        class's own threads on the letter (register match)."""
        key = (letter, mask)
        if key not in self._fam4:
            per_state = []
            blocked = False
            for i in range(self.n):
                if mask >> i & 1:
                    models = self._models(i, letter, "up")
                    if not models:
                        blocked = True
                        break
                    per_state.append(models)
            if blocked:
                self._fam4[key] = ()
            else:
                outs = {0}
                for models in per_state:
                    outs = {s | pm | fm for s in outs for pm, fm in models}
                self._fam4[key] = tuple(sorted(outs))
        return self._fam4[key]

    def _decode(self, ci):
        """(kind, payload): ("away", mask) or ("flight", kept, marked)."""
        if ci < (1 << self.n):
            return ("away", ci)
        rest = ci - (1 << self.n)
        return ("flight", rest >> self.n, rest & ((1 << self.n) - 1))

    def is_checkpoint(self, control):
        return control[0] == "checkpoint"

    def is_resting(self, control):
        """True at the top of the per-letter cycle: the previous position has
        been fully processed."""
        return control[0] == "read"

    def config_successors(self, control, sv):
        """Yield (label, control', sparse valuation') under the error-free
        relation.  sv maps counter index to a positive count."""
        kind = control[0]
        if kind == "read":
            mask = control[1]
            for li, letter in enumerate(self.alphabet):
                yield from self._fire_read(letter, mask, sv)
        elif kind == "models":
            mask, letter = control[1], control[2]
            for s in self.here_sets(letter, mask):
                yield (EPS, ("merge", s, 0), sv)
        elif kind == "merge":
            s, k = control[1], control[2]
            if k == self.n:
                target = self.away_index(s)
                sv2 = dict(sv)
                sv2[target] = sv2.get(target, 0) + 1
                yield (EPS, ("shift",), sv2)
                return
            hit = False
            for ci in sv:
                ckind = self._decode(ci)
                if ckind[0] == "flight" and ckind[2] >> k & 1:
                    hit = True
                    break
            if hit:
                yield (EPS, ("merge", s | 1 << k, k + 1), sv)
            else:
                yield (EPS, ("merge", s, k + 1), sv)
        elif kind == "shift":
            sv2 = {}
            for ci, cnt in sv.items():
                ckind = self._decode(ci)
                ti = ci if ckind[0] == "away" else self.away_index(ckind[1])
                sv2[ti] = sv2.get(ti, 0) + cnt
            yield (EPS, ("next",) if self.co_states else ("pick",), sv2)
        elif kind == "next":
            yield (EPS, ("pick",), sv)
            if not any(self._decode(ci)[0] == "away" and self._decode(ci)[1] & self.co_mask
                       for ci in sv):
                yield (EPS, ("checkpoint",), sv)
        elif kind == "checkpoint":
            yield (EPS, ("pick",), sv)
        elif kind == "pick":
            yield (EPS, ("read", 0), sv)  # fresh class becomes current
            for ci in sorted(sv):
                ckind = self._decode(ci)
                if ckind[0] != "away":
                    continue
                sv2 = dict(sv)
                if sv2[ci] == 1:
                    del sv2[ci]
                else:
                    sv2[ci] -= 1
                yield (EPS, ("read", ckind[1]), sv2)
        else:
            raise ValidationError("unknown control state %r" % (control,))

    def _fire_read(self, letter, mask, sv):
        moving = []
        for ci in sorted(sv):
            ckind = self._decode(ci)
            if ckind[0] == "away":
                images = self.read_images(letter, ckind[1])
                if images is None:
                    return  # some class has a model-less thread: letter blocked
            else:
                images = (ci,)  # in-flight counters are empty here in honest
                # runs; map them identically for robustness
            moving.append((sv[ci], images))
        target = ("models", mask, letter)
        for split in product(*(compositions(n, len(images)) for n, images in moving)):
            sv2 = {}
            for (n, images), parts in zip(moving, split):
                for ci, part in zip(images, parts):
                    if part:
                        sv2[ci] = sv2.get(ci, 0) + part
            yield (letter, target, sv2)

    # explicit machine for small automata
    def materialize(self) -> CounterMachine:
        if self.n > 3:
            raise ValidationError("explicit compilation is for small automata")
        n = self.n
        full = range(1 << n)
        counters = self.structure.counters
        transitions = []

        def name(control):
            kind = control[0]
            if kind == "read":
                return "read_%d" % control[1]
            if kind == "models":
                return "models_%d_%d" % (control[1], self.alphabet.index(control[2]))
            if kind == "merge":
                return "merge_%d_%d" % (control[1], control[2])
            if kind == "hold":
                return "hold_%d_%d_%d" % (control[1], control[2], control[3])
            return kind

        def read_transfer(letter):
            entries = []
            for mask in full:
                images = self.read_images(letter, mask)
                dsts = () if images is None else tuple(counters[i] for i in images)
                entries.append((counters[self.away_index(mask)], dsts))
            return Transfer(tuple(entries))

        shift_entries = []
        for kept in full:
            for marked in full:
                src = counters[self.flight_index(kept, marked)]
                shift_entries.append((src, (counters[self.away_index(kept)],)))
        shift_transfer = Transfer(tuple(shift_entries))
        nop = Transfer(())

        states = set()

        def add(src, label, instr, dst, elide=False):
            states.add(name(src))
            states.add(name(dst))
            transitions.append(Transition(name(src), label, instr, name(dst),
                                          elide_zero_dec=elide))

        for mask in full:
            for letter in self.alphabet:
                add(("read", mask), letter, read_transfer(letter), ("models", mask, letter))
                for s in self.here_sets(letter, mask):
                    add(("models", mask, letter), EPS, nop, ("merge", s, 0))
        for s in full:
            for k in range(n):
                add(("merge", s, k), EPS, ifz_cap({_mark_name(self.states_order[k])}, counters),
                    ("merge", s, k + 1))
                for kept in full:
                    for marked in full:
                        if not marked >> k & 1:
                            continue
                        ci = self.flight_index(kept, marked)
                        add(("merge", s, k), EPS, Dec(counters[ci]), ("hold", s, k, ci),
                            elide=True)
                        add(("hold", s, k, ci), EPS, Inc(counters[ci]),
                            ("merge", s | 1 << k, k + 1))
            add(("merge", s, n), EPS, Inc(counters[self.away_index(s)]), ("shift",))
        after_shift = ("next",) if self.co_states else ("pick",)
        add(("shift",), EPS, shift_transfer, after_shift)
        if self.co_states:
            add(("next",), EPS, nop, ("pick",))
            add(("next",), EPS,
                ifz_cap({_away_name(q) for q in self.co_states}, counters), ("checkpoint",))
            add(("checkpoint",), EPS, nop, ("pick",))
        for mask in full:
            add(("pick",), EPS, Dec(counters[self.away_index(mask)]), ("read", mask),
                elide=True)
        add(("pick",), EPS, nop, ("read", 0))

        order = sorted(states)
        initial = name(self.initial_control)
        return CounterMachine(self.alphabet, order, initial, self.structure, transitions,
                              check_transfers="off")


def ara_to_ipcant(aut: AlternatingAutomaton, co_states=None) -> CompiledMachine:
    return CompiledMachine(aut, co_states=co_states)
