"""Safety temporal formulas over data words, with a single freeze register.

The fragment is negation-normal: letters, boolean connectives, next (X),
release (R), the register binder (down), and the register tests (up / nup).
G phi is accepted as sugar for false R phi.  Until is deliberately absent:
release keeps every formula safety, so a violation is always witnessed by a
finite prefix.

Grammar (precedence: unary > & > | > R, R associates right):

    phi := "true" | "false" | IDENT | "up" | "nup"
         | "down" phi | "X" phi | "G" phi | "(" phi ")"
         | phi "&" phi | phi "|" phi | phi "R" phi

Formula files start with a header line ``alphabet: a b c`` followed by the
formula text (which may span lines).
"""

from dataclasses import dataclass
import enum
import re

from .errors import ParseError, ValidationError
from .words import Alphabet, DataWord


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Atom(Formula):
    letter: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Next(Formula):
    body: Formula


@dataclass(frozen=True)
class Release(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Freeze(Formula):
    """Binds the register to the class of the current position."""

    body: Formula


@dataclass(frozen=True)
class Up(Formula):
    """Current position is in the register's class."""


@dataclass(frozen=True)
class NotUp(Formula):
    """Current position is not in the register's class."""


KEYWORDS = {"true", "false", "up", "nup", "down", "X", "G", "R", "U"}

_TOKEN_RE = re.compile(r"\s*([A-Za-z0-9_^-]+|[&|()])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, alphabet):
        self.tokens = tokens
        self.alphabet = alphabet
        self.i = 0
        for a in alphabet:
            if a in KEYWORDS:
                raise ParseError("alphabet letter %r collides with a keyword" % a)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self):
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of formula")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        f = self.release()
        if self.i < len(self.tokens):
            tok, pos = self.tokens[self.i]
            raise ParseError("trailing input %r" % tok, pos)
        return f

    def release(self):
        lhs = self.disj()
        if self.peek() == "R":
            self.next()
            rhs = self.release()
            return Release(lhs, rhs)
        return lhs

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok, pos = self.next()
        if tok == "(":
            f = self.release()
            closing, cpos = self.next()
            if closing != ")":
                raise ParseError("expected ')'", cpos)
            return f
        if tok == "true":
            return Top()
        if tok == "false":
            return Bot()
        if tok == "up":
            return Up()
        if tok == "nup":
            return NotUp()
        if tok == "down":
            return Freeze(self.unary())
        if tok == "X":
            return Next(self.unary())
        if tok == "G":
            return Release(Bot(), self.unary())
        if tok == "U":
            raise ParseError("until is not part of the safety fragment", pos)
        if tok in ("&", "|", ")", "R"):
            raise ParseError("unexpected %r" % tok, pos)
        if tok not in self.alphabet:
            raise ParseError("letter %r not declared in alphabet" % tok, pos)
        return Atom(tok)


def parse_formula(text, alphabet: Alphabet) -> Formula:
    return _Parser(_tokenize(text), alphabet).parse()


def parse_formula_file(text):
    """Parse ``alphabet: ...`` header plus formula body; returns (Alphabet, Formula)."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines) or not lines[idx].strip().startswith("alphabet:"):
        raise ParseError("formula file must start with an 'alphabet:' line")
    letters = lines[idx].strip()[len("alphabet:"):].split()
    if not letters:
        raise ParseError("empty alphabet declaration")
    ab = Alphabet(tuple(letters))
    body = "\n".join(lines[idx + 1:])
    if not body.strip():
        raise ParseError("formula file has no formula")
    return ab, parse_formula(body, ab)


# precedence levels for printing: R=0, |=1, &=2, unary=3, atomic=4
def _format(f, level):
    if isinstance(f, Atom):
        return f.letter
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Up):
        return "up"
    if isinstance(f, NotUp):
        return "nup"
    if isinstance(f, Freeze):
        return _wrap("down " + _format(f.body, 3), 3, level)
    if isinstance(f, Next):
        return _wrap("X " + _format(f.body, 3), 3, level)
    if isinstance(f, Release):
        if isinstance(f.lhs, Bot):
            return _wrap("G " + _format(f.rhs, 3), 3, level)
        return _wrap(_format(f.lhs, 1) + " R " + _format(f.rhs, 0), 0, level)
    if isinstance(f, And):
        return _wrap(_format(f.lhs, 2) + " & " + _format(f.rhs, 3), 2, level)
    if isinstance(f, Or):
        return _wrap(_format(f.lhs, 1) + " | " + _format(f.rhs, 2), 1, level)
    raise TypeError("not a formula: %r" % (f,))


def _wrap(text, prec, level):
    return "(" + text + ")" if prec < level else text


def print_formula(f: Formula) -> str:
    return _format(f, 0)


def print_formula_file(alphabet: Alphabet, f: Formula) -> str:
    return "alphabet: %s\n%s\n" % (" ".join(alphabet.letters), print_formula(f))


def is_sentence(f: Formula) -> bool:
    """True iff every register test (up/nup) sits under a down binder."""

    def rec(g, bound):
        if isinstance(g, (Up, NotUp)):
            return bound
        if isinstance(g, (Atom, Top, Bot)):
            return True
        if isinstance(g, Freeze):
            return rec(g.body, True)
        if isinstance(g, Next):
            return rec(g.body, bound)
        if isinstance(g, (And, Or, Release)):
            return rec(g.lhs, bound) and rec(g.rhs, bound)
        raise TypeError("not a formula: %r" % (g,))

    return rec(f, False)


class PrefixVerdict(enum.Enum):
    FALSIFIED = "FALSIFIED"
    UNDETERMINED = "UNDETERMINED"


def evaluate_prefix(f: Formula, w: DataWord) -> PrefixVerdict:
    """Three-valued prefix verdict: FALSIFIED iff no data omega-word extending
    w satisfies f.

    Decided by translating f to its alternating automaton and asking whether a
    partial run over w exists.
    """
    if not is_sentence(f):
        raise ValidationError("formula has a free register test")
    if len(w) == 0:
        raise ValidationError("prefix must be non-empty")
    from .ara.translate import ltl_to_ara
    from .ara.automaton import run_exists

    aut = ltl_to_ara(f, _word_alphabet(w))
    return PrefixVerdict.UNDETERMINED if run_exists(aut, w) else PrefixVerdict.FALSIFIED


def _word_alphabet(w):
    # letters in first-occurrence order; enough for evaluating on w itself
    seen = []
    for a in w.letters:
        if a not in seen:
            seen.append(a)
    return Alphabet(tuple(seen))


_F, _U, _T = 0, 1, 2


def monitor_prefix(f: Formula, w: DataWord) -> PrefixVerdict:
    """Purely syntactic three-valued monitor, sound but not necessarily
    complete: FALSIFIED here implies evaluate_prefix FALSIFIED.

    X at the last position is unknown; R is unrolled one step per position.
    """
    if not is_sentence(f):
        raise ValidationError("formula has a free register test")
    if len(w) == 0:
        raise ValidationError("prefix must be non-empty")
    n = len(w)
    memo = {}

    def val(g, i, reg):
        key = (g, i, reg)
        if key in memo:
            return memo[key]
        if isinstance(g, Atom):
            r = _T if w.letters[i] == g.letter else _F
        elif isinstance(g, Top):
            r = _T
        elif isinstance(g, Bot):
            r = _F
        elif isinstance(g, Up):
            r = _T if w.classes[i] == reg else _F
        elif isinstance(g, NotUp):
            r = _F if w.classes[i] == reg else _T
        elif isinstance(g, And):
            r = min(val(g.lhs, i, reg), val(g.rhs, i, reg))
        elif isinstance(g, Or):
            r = max(val(g.lhs, i, reg), val(g.rhs, i, reg))
        elif isinstance(g, Next):
            r = val(g.body, i + 1, reg) if i + 1 < n else _U
        elif isinstance(g, Freeze):
            r = val(g.body, i, w.classes[i])
        elif isinstance(g, Release):
            later = val(g, i + 1, reg) if i + 1 < n else _U
            r = min(val(g.rhs, i, reg), max(val(g.lhs, i, reg), later))
        else:
            raise TypeError("not a formula: %r" % (g,))
        memo[key] = r
        return r

    return PrefixVerdict.FALSIFIED if val(f, 0, None) == _F else PrefixVerdict.UNDETERMINED


def subformulas(f: Formula):
    """All subformulas, each yielded once, outer-first."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        if isinstance(g, (And, Or, Release)):
            stack.append(g.rhs)
            stack.append(g.lhs)
        elif isinstance(g, (Next, Freeze)):
            stack.append(g.body)
