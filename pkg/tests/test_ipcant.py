import math
import random

import pytest

from regsafe.errors import ParseError, ValidationError
from regsafe.words import Alphabet
from regsafe.ipcant import (CounterMachine, CounterStructure, Dec, EPS, Inc,
                            Transfer, Transition, Valuation, bound_ceiling,
                            bound_params, check_distributive, compute_bound,
                            fire, fire_lazy, format_machine, ifz_cap,
                            parse_machine, sqsse, transfer_witnesses)
from regsafe import randgen


def _vals(results):
    return {tuple(v.values) for v in results}


@pytest.fixture()
def xy():
    return CounterStructure(("x", "y"), (frozenset("x"), frozenset("y")))


def test_structure_validation():
    with pytest.raises(ValidationError):
        CounterStructure(("x", "x"), ())
    with pytest.raises(ValidationError):
        CounterStructure(("x",), (frozenset(),))
    with pytest.raises(ValidationError):
        CounterStructure(("x",), (frozenset("y"),))
    with pytest.raises(ValidationError):
        CounterStructure(("x",), (frozenset("x"), frozenset("x")))


def test_valuation_validation(xy):
    with pytest.raises(ValidationError):
        Valuation(xy, (1,))
    with pytest.raises(ValidationError):
        Valuation(xy, (1, -1))
    v = xy.valuation({"x": 2})
    assert v["x"] == 2 and v[frozenset("y")] == 0
    assert v.total() == 2


def test_fire_inc_dec(xy):
    v = xy.valuation({"x": 1})
    assert _vals(fire(v, Inc(frozenset("y")))) == {(1, 1)}
    assert _vals(fire(v, Dec(frozenset("x")))) == {(0, 0)}
    assert fire(v, Dec(frozenset("y"))) == set()


def test_fire_transfer_splitting(xy):
    """Two tokens on x split over {x, y}: every distribution is a result."""
    f = Transfer(((frozenset("x"), (frozenset("x"), frozenset("y"))),
                  (frozenset("y"), (frozenset("y"),))))
    v = xy.valuation({"x": 2, "y": 1})
    assert _vals(fire(v, f)) == {(2, 1), (1, 2), (0, 3)}


def test_fire_transfer_unfirable_on_empty_image(xy):
    f = Transfer(((frozenset("x"), ()),))
    assert fire(xy.valuation({"x": 1}), f) == set()
    assert _vals(fire(xy.valuation({"y": 2}), f)) == {(0, 2)}


def test_ifz_cap_semantics():
    st = CounterStructure(("x", "y"), (frozenset("x"), frozenset("y"),
                                       frozenset(("x", "y"))))
    instr = ifz_cap(("x",), st.counters)
    ok = st.valuation({"y": 3})
    assert fire(ok, instr) == {ok}
    assert fire(st.valuation({"x": 1}), instr) == set()
    assert fire(st.valuation({("x", "y"): 1}), instr) == set()


def test_transfer_witness_sums(xy):
    f = Transfer(((frozenset("x"), (frozenset("x"), frozenset("y"))),))
    v = xy.valuation({"x": 2, "y": 1})
    for witness, result in transfer_witnesses(v, f):
        for c, n in v.items():
            assert sum(k for (src, _), k in witness.items() if src == c) == n
        for c, n in result.items():
            assert sum(k for (_, dst), k in witness.items() if dst == c) == n


def test_fire_transfer_preserves_tokens():
    rng = random.Random(12)
    for _ in range(300):
        st = randgen.random_structure(rng)
        f = randgen.random_distributive_transfer(rng, st)
        v = randgen.random_valuation(rng, st)
        for v2 in fire(v, f):
            assert v2.total() == v.total()


def test_fire_lazy(xy):
    v = xy.valuation({})
    assert fire_lazy(v, Dec(frozenset("x"))) == {v}
    v2 = xy.valuation({"x": 2})
    assert _vals(fire_lazy(v2, Dec(frozenset("x")))) == {(1, 0)}
    f = Transfer(((frozenset("x"), (frozenset("y"),)),))
    assert fire_lazy(v2, f) == fire(v2, f)


def test_sqsse_examples():
    st = CounterStructure(("x", "y"), (frozenset("x"), frozenset(("x", "y"))))
    small = st.valuation({"x": 1})
    big = st.valuation({("x", "y"): 1})
    assert sqsse(small, big)
    assert not sqsse(big, small)
    assert sqsse(small, small)
    v = st.valuation({"x": 1, ("x", "y"): 2})
    assert sqsse(st.valuation({"x": 1, ("x", "y"): 1}), v)


def test_sqsse_pointwise_and_structure_mismatch(xy):
    rng = random.Random(13)
    for _ in range(100):
        st = randgen.random_structure(rng)
        v = randgen.random_valuation(rng, st)
        assert sqsse(randgen.sub_valuation(rng, v), v)
    other = CounterStructure(("x",), (frozenset("x"),))
    with pytest.raises(ValidationError):
        sqsse(other.valuation({}), xy.valuation({}))


def test_check_distributive_fy_and_singletons():
    for k in range(1, 5):
        basis = tuple("x%d" % i for i in range(k))
        pool = []
        from itertools import combinations
        for r in range(1, k + 1):
            pool += [frozenset(c) for c in combinations(basis, r)]
        for r in range(k + 1):
            for y in combinations(basis, r):
                f = ifz_cap(y, pool).as_map(pool)
                assert check_distributive(f, pool)


def test_check_distributive_witness_false():
    x, y, xy_ = frozenset("x"), frozenset("y"), frozenset(("x", "y"))
    counters = (x, y, xy_)
    f = {x: (x,), y: (y,), xy_: ()}
    assert not check_distributive(f, counters)


def test_check_distributive_requires_total():
    x, y = frozenset("x"), frozenset("y")
    with pytest.raises(ValidationError):
        check_distributive({x: (x,)}, (x, y))


def test_bound_recurrence():
    p = bound_params(1, 1, 1)
    assert (p.alphas, p.us, p.m) == ((1, 2), (1, 3), 12)
    p = bound_params(2, 1, 1)
    assert (p.alphas, p.us, p.m) == ((2, 4), (1, 6), 48)
    assert bound_params(3, 0, 0).m == 6
    assert all(a > 0 for a in p.alphas) and all(u > 0 for u in p.us)
    assert list(p.alphas) == sorted(p.alphas)
    assert list(p.us) == sorted(p.us)


def test_bound_ceiling():
    assert bound_ceiling(1, 1) == 6561
    rng = random.Random(14)
    for _ in range(50):
        q = rng.randint(1, 4)
        x = rng.randint(0, 3)
        c = rng.randint(0, 2 ** x - 1) if x else 0
        m = bound_params(q, x, c).m
        exponent = 2 ** (2 * x * x + x) * math.log2(3 * q)
        assert math.log2(m) < exponent


def test_compute_bound_from_machine():
    text = open("tests/data/tiny.cm").read()
    machine = parse_machine(text)
    assert compute_bound(machine).m == 12


def test_machine_file_round_trip():
    text = ("alphabet: a\n"
            "basis: x y\n"
            "counters: {x} {x,y}\n"
            "states: p q\n"
            "initial: p\n"
            "p -a, inc {x}-> q\n"
            "q -eps, transf {x}->[{x},{x,y}]; {x,y}->[{x,y}]-> p\n"
            "q -a, dec {x,y}-> q\n")
    m = parse_machine(text)
    assert format_machine(parse_machine(format_machine(m))) == format_machine(m)


def test_machine_rejects_eps_cycle():
    st = CounterStructure(("x",), (frozenset("x"),))
    trans = [Transition("p", EPS, Inc(frozenset("x")), "q"),
             Transition("q", EPS, Inc(frozenset("x")), "p")]
    with pytest.raises(ValidationError):
        CounterMachine(Alphabet(("a",)), ("p", "q"), "p", st, trans)


def test_machine_rejects_nondistributive_transfer():
    x, y, xy_ = frozenset("x"), frozenset("y"), frozenset(("x", "y"))
    st = CounterStructure(("x", "y"), (x, y, xy_))
    bad = Transfer(((x, (x,)), (y, (y,)), (xy_, ())))
    good = Transfer(((x, (x,)), (y, (y,)), (xy_, (xy_,))))
    trans = [Transition("p", "a", bad, "p")]
    with pytest.raises(ValidationError):
        CounterMachine(Alphabet(("a",)), ("p",), "p", st, trans)
    CounterMachine(Alphabet(("a",)), ("p",), "p", st,
                   [Transition("p", "a", good, "p")])
