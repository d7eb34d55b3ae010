"""Exploration of counter machine configuration graphs.

Configurations pair a control state with a sparse valuation (counter index to
positive count).  Compiled machines supply their own successor relation and
are explored error-free; machines built from instruction lists are explored
under the lazy relation by default (decrementing a zero counter may leave the
valuation unchanged) unless the transition opts out.

bounded_nonemptiness searches for an infinite run: any configuration cycle
is one (control cycles must consume letters, so a lasso reads infinitely many
letters), and so is any path reaching the step bound.  Exhausting the graph
without hitting a value or node cap is a definite emptiness answer.

inclusion_check saturates the compiled product of one automaton with the
dual of another, keeping only valuation-minimal configurations per control
state: smaller configurations carry fewer obligations and simulate larger
ones, so pruning preserves both witnesses and their absence.  Non-inclusion
is witnessed by a checkpoint configuration (dual threads all discharged)
that still has an infinite continuation.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import product

from ..ara.automaton import AlternatingAutomaton, inclusion_product
from ..errors import ValidationError
from ..ipcant import Dec, Inc, EPS, compositions
from .compile import CompiledMachine, ara_to_ipcant

NODE_BUDGET = 200000
BRANCH_BUDGET = 100000


class Nonemptiness(Enum):
    NONEMPTY = "nonempty"
    EMPTY = "empty"
    UNKNOWN = "unknown"


class Inclusion(Enum):
    INCLUDED = "included"
    NOT_INCLUDED = "not_included"
    UNKNOWN = "unknown"


@dataclass
class SaturationResult:
    """Outcome of the inclusion saturation: the verdict, the kept minimal
    configurations (control state paired with a sparse valuation), and how the
    exploration went."""

    verdict: Inclusion
    s_last: tuple
    explored: int
    converged: bool
    checkpoints: int


def initial_config(machine):
    if isinstance(machine, CompiledMachine):
        return (machine.initial_control, {})
    return (machine.initial, {})


def _is_lazy_default(machine):
    return not isinstance(machine, CompiledMachine)


def successors(machine, control, sv, lazy, vcap):
    """All one-instruction successors as (label, control', sv'), plus a flag
    saying whether anything was cut off by the value cap or branch budget."""
    if isinstance(machine, CompiledMachine):
        out = []
        truncated = False
        for label, dst, sv2 in machine.config_successors(control, sv):
            if sv2 and max(sv2.values()) > vcap:
                truncated = True
                continue
            out.append((label, dst, sv2))
        return out, truncated
    structure = machine.structure
    out = []
    truncated = False
    for t in machine.outgoing(control):
        instr = t.instr
        if isinstance(instr, Inc):
            ci = structure.index[instr.counter]
            n = sv.get(ci, 0) + 1
            if n > vcap:
                truncated = True
                continue
            sv2 = dict(sv)
            sv2[ci] = n
            out.append((t.label, t.dst, sv2))
        elif isinstance(instr, Dec):
            ci = structure.index[instr.counter]
            if sv.get(ci, 0) > 0:
                sv2 = dict(sv)
                if sv2[ci] == 1:
                    del sv2[ci]
                else:
                    sv2[ci] -= 1
                out.append((t.label, t.dst, sv2))
            elif lazy and not t.elide_zero_dec:
                out.append((t.label, t.dst, dict(sv)))
        else:  # transfer-like
            fired, cut = _fire_transfer_sparse(structure, sv, instr, vcap)
            truncated = truncated or cut
            for sv2 in fired:
                out.append((t.label, t.dst, sv2))
    return out, truncated


def _fire_transfer_sparse(structure, sv, instr, vcap):
    moving = []
    branches = 1
    for ci in sorted(sv):
        dsts = instr.image(structure.counters[ci])
        if not dsts:
            return [], False  # counter with empty image must be zero
        idxs = tuple(structure.index[d] for d in dsts)
        n = sv[ci]
        branches *= _ncompositions(n, len(idxs))
        moving.append((n, idxs))
    if branches > BRANCH_BUDGET:
        return [], True
    results = []
    seen = set()
    truncated = False
    for split in product(*(compositions(n, len(idxs)) for n, idxs in moving)):
        sv2 = {}
        for (n, idxs), parts in zip(moving, split):
            for ci, part in zip(idxs, parts):
                if part:
                    sv2[ci] = sv2.get(ci, 0) + part
        if sv2 and max(sv2.values()) > vcap:
            truncated = True
            continue
        key = tuple(sorted(sv2.items()))
        if key not in seen:
            seen.add(key)
            results.append(sv2)
    return results, truncated


def _ncompositions(n, k):
    num = 1
    den = 1
    for i in range(1, n + 1):
        num *= k - 1 + i
        den *= i
    return num // den


def _freeze(control, sv):
    return (control, tuple(sorted(sv.items())))


def bounded_nonemptiness(machine, cap=10000, vcap=64, start=None, lazy=None) -> Nonemptiness:
    """Search for an infinite run: a configuration lasso or a simple path of
    length cap counts as one.  A fully exhausted graph without cutoffs is a
    definite emptiness verdict."""
    if lazy is None:
        lazy = _is_lazy_default(machine)
    if start is None:
        start = initial_config(machine)
    control0, sv0 = start
    truncated = False
    longest = {}  # frozen config -> longest path length (in steps) from it
    onstack = set()
    visited = 1

    def expand(control, sv):
        nonlocal truncated
        succ, cut = successors(machine, control, sv, lazy, vcap)
        truncated |= cut
        return iter(succ)

    key0 = _freeze(control0, sv0)
    stack = [[key0, expand(control0, sv0), 0]]
    onstack.add(key0)
    while stack:
        frame = stack[-1]
        advanced = False
        for label, control2, sv2 in frame[1]:
            k2 = _freeze(control2, sv2)
            if k2 in onstack:
                return Nonemptiness.NONEMPTY  # lasso: a cycle repeats forever
            if k2 in longest:
                frame[2] = max(frame[2], longest[k2] + 1)
                if frame[2] >= cap:
                    return Nonemptiness.NONEMPTY
                continue
            visited += 1
            if visited > NODE_BUDGET:
                return Nonemptiness.UNKNOWN
            stack.append([k2, expand(control2, sv2), 0])
            onstack.add(k2)
            advanced = True
            break
        if not advanced:
            stack.pop()
            onstack.discard(frame[0])
            longest[frame[0]] = frame[2]
            if frame[2] >= cap:
                return Nonemptiness.NONEMPTY
            if stack:
                parent = stack[-1]
                parent[2] = max(parent[2], frame[2] + 1)
                if parent[2] >= cap:
                    return Nonemptiness.NONEMPTY
    return Nonemptiness.UNKNOWN if truncated else Nonemptiness.EMPTY


def _eps_closure(machine, frontier, lazy, vcap):
    """All configurations reachable by letter-free instructions, including the
    inputs.  Returns (set of frozen configs, truncated flag)."""
    seen = dict(frontier)
    todo = list(frontier.items())
    truncated = False
    while todo:
        key, (control, sv) = todo.pop()
        succ, cut = successors(machine, control, sv, lazy, vcap)
        truncated |= cut
        for label, control2, sv2 in succ:
            if label is not EPS:
                continue
            k2 = _freeze(control2, sv2)
            if k2 not in seen:
                seen[k2] = (control2, sv2)
                todo.append((k2, (control2, sv2)))
                if len(seen) > NODE_BUDGET:
                    return seen, True
    return seen, truncated


def prefix_reachable(machine, letters, lazy=None, vcap=64) -> bool:
    """Can the machine consume the letter sequence?  For compiled machines
    this matches the existence of a partial automaton run on some data word
    with those letters."""
    if lazy is None:
        lazy = _is_lazy_default(machine)
    control0, sv0 = initial_config(machine)
    frontier = {_freeze(control0, sv0): (control0, sv0)}
    frontier, _ = _eps_closure(machine, frontier, lazy, vcap)
    for letter in letters:
        nxt = {}
        for control, sv in frontier.values():
            succ, _ = successors(machine, control, sv, lazy, vcap)
            for label, control2, sv2 in succ:
                if label == letter:
                    nxt[_freeze(control2, sv2)] = (control2, sv2)
        if not nxt:
            return False
        frontier, _ = _eps_closure(machine, nxt, lazy, vcap)
    resting = getattr(machine, "is_resting", None)
    if resting is None:
        return bool(frontier)
    return any(resting(control) for control, sv in frontier.values())


def _dominated(chain, sv):
    for kept in chain:
        if all(sv.get(ci, 0) >= n for ci, n in kept.items()):
            return True
    return False


def _prune(chain, sv):
    return [kept for kept in chain
            if not all(kept.get(ci, 0) >= n for ci, n in sv.items())]


def inclusion_check(a1: AlternatingAutomaton, a2: AlternatingAutomaton,
                    cap=10000, vcap=64) -> SaturationResult:
    """Decide whether every data word accepted by a1 is accepted by a2, by
    saturating the compiled product of a1 with the dual of a2."""
    aut, co_states = inclusion_product(a1, a2)
    machine = ara_to_ipcant(aut, co_states=co_states)
    control0, sv0 = initial_config(machine)
    chains = {control0: [sv0]}
    queue = deque([(control0, sv0)])
    explored = 0
    truncated = False
    converged = True
    while queue:
        if explored >= cap:
            converged = False
            break
        control, sv = queue.popleft()
        if sv not in chains.get(control, ()):
            continue  # pruned by a smaller configuration meanwhile
        explored += 1
        succ, cut = successors(machine, control, sv, lazy=False, vcap=vcap)
        truncated |= cut
        for label, control2, sv2 in succ:
            chain = chains.setdefault(control2, [])
            if _dominated(chain, sv2):
                continue
            chains[control2] = _prune(chain, sv2) + [sv2]
            queue.append((control2, sv2))
    s_last = tuple((control, dict(sv)) for control, chain in chains.items()
                   for sv in chain)
    checkpoints = [sv for control, chain in chains.items()
                   if machine.is_checkpoint(control) for sv in chain]
    unknown = truncated or not converged
    for sv in checkpoints:
        r = bounded_nonemptiness(machine, cap=cap, vcap=vcap,
                                 start=(("checkpoint",), sv), lazy=False)
        if r is Nonemptiness.NONEMPTY:
            return SaturationResult(Inclusion.NOT_INCLUDED, s_last, explored,
                                    converged, len(checkpoints))
        if r is Nonemptiness.UNKNOWN:
            unknown = True
    if unknown:
        return SaturationResult(Inclusion.UNKNOWN, s_last, explored, converged,
                                len(checkpoints))
    return SaturationResult(Inclusion.INCLUDED, s_last, explored, converged,
                            len(checkpoints))
