import random

import pytest

from regsafe.errors import ParseError, ValidationError
from regsafe import ltl
from regsafe.ltl import (And, Atom, Bot, Freeze, Next, NotUp, Or, PrefixVerdict,
                         Release, Top, Up, evaluate_prefix, is_sentence,
                         monitor_prefix, parse_formula, print_formula,
                         subformulas)
from regsafe.words import Alphabet, parse_word
from regsafe import randgen


AB = Alphabet(("a", "b"))


def test_parse_precedence():
    """Unary binds tightest, then &, then |, then R (right-associative)."""
    f = parse_formula("a & b | X a R b R true", AB)
    assert f == Release(Or(And(Atom("a"), Atom("b")), Next(Atom("a"))),
                        Release(Atom("b"), Top()))


def test_parse_g_sugar():
    assert parse_formula("G a", AB) == Release(Bot(), Atom("a"))
    assert print_formula(Release(Bot(), Atom("a"))) == "G a"


def test_parse_freeze_and_tests():
    f = parse_formula("down X (up & a | nup)", AB)
    assert f == Freeze(Next(Or(And(Up(), Atom("a")), NotUp())))


def test_until_rejected():
    with pytest.raises(ParseError):
        parse_formula("a U b", AB)


def test_parse_errors():
    for bad in ("", "a &", "(a", "a b", "down", "zzz"):
        with pytest.raises(ParseError):
            parse_formula(bad, AB)


def test_print_parse_round_trip_random():
    rng = random.Random(3)
    for _ in range(300):
        f = randgen.random_sentence(rng, AB, depth=4)
        assert parse_formula(print_formula(f), AB) == f


def test_formula_file_round_trip(example_formula):
    ab, f = example_formula
    text = ltl.print_formula_file(ab, f)
    ab2, f2 = ltl.parse_formula_file(text)
    assert (ab2, f2) == (ab, f)


def test_is_sentence():
    assert is_sentence(parse_formula("G (a | down X up)", AB))
    assert not is_sentence(Up())
    assert not is_sentence(Next(NotUp()))
    assert is_sentence(Freeze(Next(Up())))


def test_evaluate_prefix_requires_sentence():
    w = parse_word("a@0", AB)
    with pytest.raises(ValidationError):
        evaluate_prefix(Up(), w)


def test_evaluate_prefix_atoms():
    w = parse_word("a@0 b@1", AB)
    assert evaluate_prefix(Atom("a"), w) is PrefixVerdict.UNDETERMINED
    assert evaluate_prefix(Atom("b"), w) is PrefixVerdict.FALSIFIED
    assert evaluate_prefix(Next(Atom("b")), w) is PrefixVerdict.UNDETERMINED
    assert evaluate_prefix(Next(Atom("a")), w) is PrefixVerdict.FALSIFIED


def test_evaluate_prefix_register():
    """down at the first position, up tested later."""
    f = Freeze(Next(Up()))
    assert evaluate_prefix(f, parse_word("a@0 a@0", AB)) is PrefixVerdict.UNDETERMINED
    assert evaluate_prefix(f, parse_word("a@0 a@1", AB)) is PrefixVerdict.FALSIFIED
    # too short to falsify
    assert evaluate_prefix(f, parse_word("a@0", AB)) is PrefixVerdict.UNDETERMINED


def test_example_formula_on_pattern_words(example_formula, abc):
    _, f = example_formula
    assert evaluate_prefix(f, parse_word("a@0 c@1 b@0", abc)) is PrefixVerdict.FALSIFIED
    assert evaluate_prefix(f, parse_word("a@0 c@1 b@1", abc)) is PrefixVerdict.UNDETERMINED
    assert evaluate_prefix(f, parse_word("a@0 b@0 c@1", abc)) is PrefixVerdict.UNDETERMINED


def test_monitor_matches_examples(example_formula, abc):
    _, f = example_formula
    assert monitor_prefix(f, parse_word("a@0 c@1 b@0", abc)) is PrefixVerdict.FALSIFIED
    assert monitor_prefix(f, parse_word("a@0 c@1 b@1", abc)) is PrefixVerdict.UNDETERMINED


def test_monitor_sound_random():
    """The syntactic monitor never falsifies a prefix the automaton route
    keeps; seeded sweep."""
    rng = random.Random(9)
    for _ in range(150):
        f = randgen.random_sentence(rng, AB, depth=3)
        w = randgen.random_word(rng, AB, max_len=4)
        if monitor_prefix(f, w) is PrefixVerdict.FALSIFIED:
            assert evaluate_prefix(f, w) is PrefixVerdict.FALSIFIED


def test_prefix_antitonicity_random():
    """Once falsified, every extension stays falsified (checked backward:
    an undetermined longer prefix forces undetermined shorter ones)."""
    rng = random.Random(10)
    for _ in range(100):
        f = randgen.random_sentence(rng, AB, depth=3)
        w = randgen.random_word(rng, AB, max_len=4)
        verdicts = [evaluate_prefix(f, w.prefix(i)) for i in range(1, len(w) + 1)]
        falsified = False
        for v in verdicts:
            if falsified:
                assert v is PrefixVerdict.FALSIFIED
            falsified = falsified or v is PrefixVerdict.FALSIFIED


def test_subformulas():
    f = parse_formula("G (a | down X up)", AB)
    subs = set(subformulas(f))
    assert f in subs
    assert Atom("a") in subs
    assert Up() in subs
