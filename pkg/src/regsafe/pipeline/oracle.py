"""Brute-force reference procedures used to cross-check the optimized ones.

oracle_run_exists answers the same question as ara.run_exists but enumerates
every satisfying pair of every transition formula, not only the minimal ones,
and never prunes a frontier to minimal sets.  It exploits that threads of an
alternating run never interact: a configuration set can cover the rest of the
word exactly when each of its configurations can on its own, so the search
memoizes single configurations per position.  _frontier_run_exists is the
unoptimized definition itself (sets of configuration sets, full choice
products); it is exponentially heavier and only meant for very small inputs,
as a third route to the same answer.  pattern_occurs decides the three-letter
freeze pattern directly on a word, independent of any automaton.
"""

from itertools import combinations, product

from ..errors import ValidationError
from ..words import DataWord
from ..ara import posbool as pb
from ..ara.automaton import AlternatingAutomaton, initial_configs


def _all_pairs(phi, states):
    """Every (plain, fresh) pair of state sets satisfying phi."""
    subsets = [frozenset(c) for r in range(len(states) + 1)
               for c in combinations(states, r)]
    out = []
    for plain in subsets:
        for fresh in subsets:
            if pb.eval_posbool(phi, (plain, fresh)):
                out.append((plain, fresh))
    return out


def _pair_table(aut):
    pairs = {}
    for q in aut.states:
        for a in aut.alphabet.letters:
            for flag in ("up", "nup"):
                pairs[(q, a, flag)] = _all_pairs(aut.delta_at(q, a, flag), aut.states)
    return pairs


def oracle_run_exists(aut: AlternatingAutomaton, w: DataWord,
                      max_len=6, max_states=4) -> bool:
    """Partial-run existence over w by exhaustive search over all satisfying
    pairs.  Guarded: refuses words longer than max_len or automata with more
    than max_states states."""
    if len(w) == 0:
        raise ValidationError("word must be non-empty")
    if len(w) > max_len:
        raise ValidationError("oracle guard: word length %d > %d" % (len(w), max_len))
    if len(aut.states) > max_states:
        raise ValidationError("oracle guard: %d states > %d" % (len(aut.states), max_states))
    pairs = _pair_table(aut)
    n = len(w)
    memo = {}

    def thread(i, q, cls):
        # can the single thread (q, cls) survive positions i..n-1?
        if i == n:
            return True
        key = (i, q, cls)
        if key in memo:
            return memo[key]
        letter = w.letters[i]
        here = w.classes[i]
        flag = "up" if cls == here else "nup"
        ok = False
        for plain, fresh in pairs[(q, letter, flag)]:
            if (all(thread(i + 1, q2, cls) for q2 in plain)
                    and all(thread(i + 1, q2, here) for q2 in fresh)):
                ok = True
                break
        memo[key] = ok
        return ok

    return thread(0, aut.initial, w.classes[0])


def _frontier_run_exists(aut: AlternatingAutomaton, w: DataWord,
                         max_len=3, max_states=2) -> bool:
    """The definition, executed literally: keep the family of all reachable
    configuration sets, stepping each by every combination of satisfying
    pairs.  Exponential in several directions; guards are tight."""
    if len(w) == 0:
        raise ValidationError("word must be non-empty")
    if len(w) > max_len:
        raise ValidationError("frontier guard: word length %d > %d" % (len(w), max_len))
    if len(aut.states) > max_states:
        raise ValidationError("frontier guard: %d states > %d" % (len(aut.states), max_states))
    pairs = _pair_table(aut)
    frontiers = {initial_configs(aut, w)}
    for i in range(len(w)):
        letter = w.letters[i]
        here = w.classes[i]
        nxt = set()
        for configs in frontiers:
            per_config = []
            blocked = False
            for (q, cls) in sorted(configs):
                flag = "up" if cls == here else "nup"
                options = pairs[(q, letter, flag)]
                if not options:
                    blocked = True
                    break
                per_config.append((cls, options))
            if blocked:
                continue
            for choice in product(*(opts for (_, opts) in per_config)):
                succ = set()
                for (cls, _), (plain, fresh) in zip(per_config, choice):
                    succ.update((q2, cls) for q2 in plain)
                    succ.update((q2, here) for q2 in fresh)
                nxt.add(frozenset(succ))
        if not nxt:
            return False
        frontiers = nxt
    return True


def pattern_occurs(w: DataWord, first, middle, last) -> bool:
    """Is there i < j < k with w[i] = first, w[j] = middle, w[k] = last and
    positions i and k in the same class?"""
    n = len(w)
    for i in range(n):
        if w.letters[i] != first:
            continue
        for j in range(i + 1, n):
            if w.letters[j] != middle:
                continue
            for k in range(j + 1, n):
                if w.letters[k] == last and w.classes[k] == w.classes[i]:
                    return True
    return False
