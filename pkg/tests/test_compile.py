import pytest

from regsafe.errors import ValidationError
from regsafe.words import Alphabet
from regsafe.ara import ltl_to_ara
from regsafe.ara import posbool as pb
from regsafe.ara.automaton import AlternatingAutomaton
from regsafe.ipcant import (EPS, Transfer, Valuation, check_distributive,
                            fire, format_machine, parse_machine)
from regsafe.ltl import parse_formula
from regsafe.pipeline import ara_to_ipcant

AB = Alphabet(("a", "b"))


def _one_state(alphabet):
    return ltl_to_ara(parse_formula("G a", alphabet), alphabet)


def _two_state():
    # p forks a frozen observer r; r survives a's, b closes both threads
    return AlternatingAutomaton(AB, ("p", "r"), "p", {
        ("p", "a", "up"): pb.And(pb.Ref("p"), pb.DownRef("r")),
        ("p", "a", "nup"): pb.Ref("p"),
        ("p", "b", "up"): pb.Top(),
        ("r", "a", "nup"): pb.Ref("r"),
        ("r", "b", "nup"): pb.Top(),
    })


def test_structure_sizes_one_state(abc):
    cm = ara_to_ipcant(_one_state(abc))
    q = cm.states_order[0]
    assert cm.structure.basis == ("^b", q + "^b", "^bb", q + "^bb", q + "^bbd")
    assert len(cm.structure.counters) == 6
    assert cm.structure.counters[0] == frozenset(["^b"])
    assert cm.structure.counters[1] == frozenset(["^b", q + "^b"])
    for c in cm.structure.counters[2:]:
        assert "^bb" in c


def test_structure_sizes_general(fig1):
    cm = ara_to_ipcant(fig1)
    assert len(cm.structure.basis) == 3 * 3 + 2
    assert len(cm.structure.counters) == 2 ** 3 + 4 ** 3


def test_counter_indexing():
    cm = ara_to_ipcant(_two_state())
    assert cm.structure.counters[cm.away_index(3)] == frozenset(
        ["^b", "p^b", "r^b"])
    ci = cm.flight_index(1, 2)
    assert cm.structure.counters[ci] == frozenset(["^bb", "p^bb", "r^bbd"])


def test_co_state_must_exist():
    with pytest.raises(ValidationError):
        ara_to_ipcant(_two_state(), co_states=("nope",))


def test_read_images_and_here_sets():
    cm = ara_to_ipcant(_two_state())
    p_mask, r_mask = 1, 2
    assert cm.read_images("a", p_mask) == (cm.flight_index(p_mask, 0),)
    assert cm.read_images("b", r_mask) == (cm.flight_index(0, 0),)
    assert cm.read_images("b", p_mask) is None
    assert cm.read_images("a", 0) == (cm.flight_index(0, 0),)
    assert cm.here_sets("a", p_mask) == (p_mask | r_mask,)
    assert cm.here_sets("b", p_mask) == (0,)
    assert cm.here_sets("a", p_mask | r_mask) == ()
    assert cm.here_sets("b", 0) == (0,)


def test_resting_and_checkpoint_predicates():
    cm = ara_to_ipcant(_two_state(), co_states=("r",))
    assert cm.is_resting(("read", 0))
    assert not cm.is_resting(("pick",))
    assert cm.is_checkpoint(("checkpoint",))
    assert not cm.is_checkpoint(("read", 0)) and not cm.is_checkpoint(("next",))
    assert cm.initial_control == ("read", 1)


def test_materialize_state_counts(abc):
    assert len(ara_to_ipcant(_one_state(abc)).materialize().states) == 18
    assert len(ara_to_ipcant(_two_state()).materialize().states) == 90


def test_materialize_initial_and_labels(abc):
    m = ara_to_ipcant(_one_state(abc)).materialize()
    assert m.initial == "read_1"
    for t in m.transitions:
        if t.label != EPS:
            assert t.src.startswith("read_")
            assert t.label in ("a", "b", "c")


def test_materialize_round_trip(abc):
    m = ara_to_ipcant(_one_state(abc)).materialize()
    text = format_machine(m)
    again = parse_machine(text)
    assert format_machine(again) == text
    assert again.states == m.states and again.initial == m.initial


def test_materialize_transfers_distributive():
    m = ara_to_ipcant(_one_state(AB)).materialize()
    counters = m.structure.counters
    checked = 0
    for t in m.transitions:
        if isinstance(t.instr, Transfer):
            assert check_distributive(t.instr.as_map(counters), counters)
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("co", [None, ("r",)])
def test_bound_counts_match_materialized(abc, co):
    for cm in (ara_to_ipcant(_one_state(abc)),
               ara_to_ipcant(_two_state(), co_states=co)):
        q_count, basis_size, counter_count = cm.bound_counts()
        assert q_count == len(cm.materialize().states)
        assert basis_size == len(cm.structure.basis)
        assert counter_count == len(cm.structure.counters)


def test_materialize_rejects_large_automata():
    big = AlternatingAutomaton(AB, ("q0", "q1", "q2", "q3"), "q0", {})
    with pytest.raises(ValidationError):
        ara_to_ipcant(big).materialize()


def _lazy_resting(cm, depth):
    """Resting configurations after exactly `depth` letters, under the
    on-demand transition relation."""
    out = set()
    seen = set()
    stack = [((), cm.initial_control, ())]
    while stack:
        letters, control, sv = stack.pop()
        key = (letters, control, sv)
        if key in seen:
            continue
        seen.add(key)
        if cm.is_resting(control) and len(letters) == depth:
            out.add(("".join(letters), "read_%d" % control[1], sv))
            continue
        for label, c2, sv2 in cm.config_successors(control, dict(sv)):
            l2 = letters if label == EPS else letters + (label,)
            if len(l2) > depth:
                continue
            stack.append((l2, c2, tuple(sorted(sv2.items()))))
    return out


def _explicit_resting(machine, depth):
    """The same relation read off the materialized machine."""
    by_src = {}
    for t in machine.transitions:
        by_src.setdefault(t.src, []).append(t)
    v0 = Valuation(machine.structure, (0,) * len(machine.structure.counters))
    out = set()
    seen = set()
    stack = [((), machine.initial, v0)]
    while stack:
        letters, state, v = stack.pop()
        key = (letters, state, v.values)
        if key in seen:
            continue
        seen.add(key)
        if state.startswith("read_") and len(letters) == depth:
            sv = tuple((i, n) for i, n in enumerate(v.values) if n)
            out.add(("".join(letters), state, sv))
            continue
        for t in by_src.get(state, ()):
            l2 = letters if t.label == EPS else letters + (t.label,)
            if len(l2) > depth:
                continue
            for v2 in fire(v, t.instr):
                stack.append((l2, t.dst, v2))
    return out


@pytest.mark.parametrize("co", [None, ("r",)])
def test_config_successors_match_materialized(co):
    cm = ara_to_ipcant(_two_state(), co_states=co)
    machine = cm.materialize()
    for depth in (1, 2):
        assert _lazy_resting(cm, depth) == _explicit_resting(machine, depth)


def test_config_successors_match_materialized_one_state(abc):
    cm = ara_to_ipcant(_one_state(abc))
    machine = cm.materialize()
    for depth in (1, 2, 3):
        assert _lazy_resting(cm, depth) == _explicit_resting(machine, depth)
