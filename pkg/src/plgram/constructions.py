"""The five example grammars and the k-copy constructions.

``plig_copy_from_regex`` turns a regular expression into a PLIG for
``{w^k : w in L(r)}``: every copy walks the same DFA path, read off a shared
stack. ``pltg_copy_from_cfg`` does the same for a context-free base language,
with the shared tree being a derivation tree of the CFG.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Optional

from plgram.grammar import Grammar, GrammarSyntaxError, Production, Slot, parse_grammar, require_valid
from plgram.terms import NIL, Term, Var

# -- builtin example grammars ----------------------------------------------------

EXAMPLE1 = """\
formalism: plig
start: A
A[?x] -> 'a' A[?x s]
A[?x] -> B[?y] C[?x] D[?y]
B[?x s] -> 'b' B[?x]
B[s] -> 'b'
C[?x s] -> 'c' C[?x]
C[s] -> 'c'
D[?x s] -> 'd' D[?x]
D[s] -> 'd'
"""

# sigma0 at the root of the derivation is written as the empty tree
EXAMPLE4 = """\
formalism: pltg
start: S1
S1[] -> A[?x] S2[sigma(?x,?x)]
S2[sigma(?x,?y)] -> B[?x] S3[?y]
S3[?x] -> C[?x]
A[sigma2(?x)] -> 'a' A[?x]
A[sigma1] -> 'a'
B[sigma2(?x)] -> 'b' B[?x]
B[sigma1] -> 'b'
C[sigma2(?x)] -> 'c' C[?x]
C[sigma1] -> 'c'
"""


def example1() -> Grammar:
    return parse_grammar(EXAMPLE1)


def example2(k: int = 2) -> Grammar:
    _check_k(k)
    lines = ['formalism: plig', 'start: S',
             'S[] -> ' + ' '.join(['A[?x]'] * k),
             'A[] ->',
             "A[?x s1] -> 'a' A[?x]",
             "A[?x s2] -> 'b' A[?x]"]
    return parse_grammar('\n'.join(lines))


def counting_letters(k: int) -> list[str]:
    if k <= 26:
        return list(string.ascii_lowercase[:k])
    return ['a%d' % (i + 1) for i in range(k)]


def example3(k: int = 3) -> Grammar:
    _check_k(k)
    letters = counting_letters(k)
    lines = ['formalism: plig', 'start: S',
             'S[] -> ' + ' '.join('A%d[?x]' % (i + 1) for i in range(k))]
    for i, a in enumerate(letters, 1):
        lines.append("A%d[?x s] -> '%s' A%d[?x]" % (i, a, i))
        lines.append('A%d[] ->' % i)
    return parse_grammar('\n'.join(lines))


def example4() -> Grammar:
    return parse_grammar(EXAMPLE4)


def example5(k: int = 2) -> Grammar:
    _check_k(k)
    lines = ['formalism: pltg', 'start: S',
             'S[] -> ' + ' '.join(['A[?x]'] * k),
             'A[] ->',
             "A[sigma1(?x)] -> '(' A[?x] ')'",
             'A[sigma2(?x,?y)] -> A[?x] A[?y]']
    return parse_grammar('\n'.join(lines))


BUILTINS = {
    'example1': lambda k: example1(),
    'example2': example2,
    'example3': lambda k: example3(k),
    'example4': lambda k: example4(),
    'example5': example5,
}

DEFAULT_K = {'example1': None, 'example2': 2, 'example3': 3, 'example4': None, 'example5': 2}


def builtin_grammar(name: str, k: Optional[int] = None) -> Grammar:
    try:
        make = BUILTINS[name]
    except KeyError:
        raise KeyError('unknown builtin grammar %r (have %s)' % (name, ', '.join(BUILTINS))) from None
    return make(k if k is not None else (DEFAULT_K[name] or 1))


def builtin_grammars(k: Optional[int] = None) -> dict:
    """All five example grammars; ``k`` overrides the copy/count parameter."""
    return {name: builtin_grammar(name, k) for name in BUILTINS}


def _check_k(k):
    if k < 1:
        raise ValueError('k must be at least 1')


# -- regular expressions ---------------------------------------------------

@dataclass(frozen=True)
class Regex:
    """Regex syntax tree: ``op`` is one of lit, cat, alt, star, eps."""
    op: str
    args: tuple = ()
    symbol: Optional[str] = None

    @property
    def alphabet(self) -> frozenset:
        if self.op == 'lit':
            return frozenset(self.symbol)
        return frozenset().union(*(a.alphabet for a in self.args))


def parse_regex(text: str) -> Regex:
    """Parse ``| * ( )`` over single-character literals; ``()`` is the empty word.

    >>> parse_regex('a|b*').op
    'alt'
    """
    pos = 0

    def peek():
        return text[pos] if pos < len(text) else None

    def alt():
        nonlocal pos
        parts = [cat()]
        while peek() == '|':
            pos += 1
            parts.append(cat())
        return parts[0] if len(parts) == 1 else Regex('alt', tuple(parts))

    def cat():
        parts = []
        while peek() is not None and peek() not in '|)':
            parts.append(star())
        if not parts:
            return Regex('eps')
        return parts[0] if len(parts) == 1 else Regex('cat', tuple(parts))

    def star():
        nonlocal pos
        r = atom()
        while peek() == '*':
            pos += 1
            r = Regex('star', (r,))
        return r

    def atom():
        nonlocal pos
        c = peek()
        if c == '(':
            pos += 1
            r = alt()
            if peek() != ')':
                raise ValueError('unbalanced parenthesis in regex %r' % text)
            pos += 1
            return r
        if c == '*':
            raise ValueError('dangling * in regex %r' % text)
        if c.isspace():
            raise ValueError('whitespace in regex %r' % text)
        pos += 1
        return Regex('lit', symbol=c)

    r = alt()
    if pos != len(text):
        raise ValueError('unexpected %r in regex %r' % (text[pos], text))
    return r


class _NFA:
    def __init__(self):
        self.eps: list = []
        self.moves: list = []

    def state(self):
        self.eps.append(set())
        self.moves.append({})
        return len(self.eps) - 1

    def build(self, r: Regex):
        """Thompson construction; returns (start, accept)."""
        s, f = self.state(), self.state()
        if r.op == 'eps':
            self.eps[s].add(f)
        elif r.op == 'lit':
            self.moves[s].setdefault(r.symbol, set()).add(f)
        elif r.op == 'cat':
            cur = s
            for a in r.args:
                a0, a1 = self.build(a)
                self.eps[cur].add(a0)
                cur = a1
            self.eps[cur].add(f)
        elif r.op == 'alt':
            for a in r.args:
                a0, a1 = self.build(a)
                self.eps[s].add(a0)
                self.eps[a1].add(f)
        elif r.op == 'star':
            a0, a1 = self.build(r.args[0])
            self.eps[s] |= {a0, f}
            self.eps[a1] |= {a0, f}
        else:
            raise ValueError('unknown regex node %r' % r.op)
        return s, f

    def closure(self, states):
        todo, out = list(states), set(states)
        while todo:
            for t in self.eps[todo.pop()]:
                if t not in out:
                    out.add(t)
                    todo.append(t)
        return frozenset(out)


@dataclass
class DFA:
    start: int
    finals: frozenset
    transitions: dict = field(default_factory=dict)   # (state, symbol) -> state
    n_states: int = 0

    def accepts(self, word) -> bool:
        q = self.start
        for a in word:
            q = self.transitions.get((q, a))
            if q is None:
                return False
        return q in self.finals


def regex_to_dfa(r: Regex) -> DFA:
    """Subset construction; the dead state is left implicit."""
    nfa = _NFA()
    s, f = nfa.build(r)
    alphabet = sorted(r.alphabet)
    first = nfa.closure({s})
    ids = {first: 0}
    todo = [first]
    trans = {}
    while todo:
        cur = todo.pop(0)
        for a in alphabet:
            nxt = nfa.closure({t for q in cur for t in nfa.moves[q].get(a, ())})
            if not nxt:
                continue
            if nxt not in ids:
                ids[nxt] = len(ids)
                todo.append(nxt)
            trans[(ids[cur], a)] = ids[nxt]
    finals = frozenset(i for states, i in ids.items() if f in states)
    return DFA(0, finals, trans, len(ids))


def _stack_symbol(a: str) -> str:
    if re.fullmatch(r'[A-Za-z0-9_]+', a):
        return 's_' + a
    return 's_u%04x' % ord(a)


def plig_copy_from_regex(r, k: int) -> Grammar:
    """PLIG for ``{w^k : w in L(r)}``; the shared stack spells ``w`` first letter on top."""
    _check_k(k)
    if isinstance(r, str):
        r = parse_regex(r)
    dfa = regex_to_dfa(r)
    x = Var('x')
    prods = [Production('S', NIL, tuple(Slot('Q0', x) for _ in range(k)))]
    for (q, a), q2 in sorted(dfa.transitions.items()):
        prods.append(Production('Q%d' % q, Term(_stack_symbol(a), (x,)), (a, Slot('Q%d' % q2, x))))
    for q in sorted(dfa.finals):
        prods.append(Production('Q%d' % q, NIL, ()))
    return require_valid(Grammar('plig', 'S', tuple(prods)))


# -- context-free base languages ------------------------------------------

@dataclass(frozen=True)
class SimpleCFG:
    """``rules`` holds ``(lhs, rhs)`` with rhs items ``('t', a)`` or ``('n', X)``."""
    start: str
    rules: tuple

    @property
    def nonterminals(self) -> frozenset:
        return frozenset([self.start] + [l for l, _ in self.rules])

    @property
    def terminals(self) -> frozenset:
        return frozenset(s for _, rhs in self.rules for kind, s in rhs if kind == 't')

    def check(self):
        declared = self.nonterminals
        for lhs, rhs in self.rules:
            for kind, s in rhs:
                if kind == 'n' and s not in declared:
                    raise ValueError('undeclared nonterminal %r in rule for %s' % (s, lhs))


_CFG_ITEM = re.compile(r"\s*(?:'([^']+)'|([A-Za-z_][A-Za-z0-9_]*))")


def parse_cfg(text: str) -> SimpleCFG:
    """``start: X`` followed by lines ``X -> 'a' Y 'b' Z`` (empty rhs allowed)."""
    start = None
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].rstrip() if "'#'" not in line else line.rstrip()
        if not line.strip():
            continue
        if start is None:
            m = re.fullmatch(r'\s*start\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*', line)
            if not m:
                raise GrammarSyntaxError('expected "start: <Nonterminal>"', lineno, 1)
            start = m.group(1)
            continue
        lhs, arrow, rest = line.partition('->')
        if not arrow or not re.fullmatch(r'\s*[A-Za-z_][A-Za-z0-9_]*\s*', lhs):
            raise GrammarSyntaxError('expected "X -> ..."', lineno, 1)
        rhs, pos = [], 0
        while rest[pos:].strip():
            m = _CFG_ITEM.match(rest, pos)
            if not m:
                raise GrammarSyntaxError('bad rule item', lineno, len(lhs) + 2 + pos)
            rhs.append(('t', m.group(1)) if m.group(1) else ('n', m.group(2)))
            pos = m.end()
        rules.append((lhs.strip(), tuple(rhs)))
    if start is None:
        raise GrammarSyntaxError('missing "start:" line', 1, 1)
    cfg = SimpleCFG(start, tuple(rules))
    cfg.check()
    return cfg


DYCK_CFG = """\
start: D
D -> '(' D ')' D
D ->
"""


def pltg_copy_from_cfg(c: SimpleCFG, k: int) -> Grammar:
    """PLTG for ``{w^k : w in L(c)}``; rule ``i`` becomes constructor ``r<i>``."""
    _check_k(k)
    if isinstance(c, str):
        c = parse_cfg(c)
    c.check()
    x = Var('x')
    nt = lambda name: 'A_' + name
    prods = [Production('S', NIL, tuple(Slot(nt(c.start), x) for _ in range(k)))]
    for i, (lhs, rhs) in enumerate(c.rules):
        vars_, items = [], []
        for kind, s in rhs:
            if kind == 't':
                items.append(s)
            else:
                v = Var('x%d' % (len(vars_) + 1))
                vars_.append(v)
                items.append(Slot(nt(s), v))
        prods.append(Production(nt(lhs), Term('r%d' % i, vars_), tuple(items)))
    return require_valid(Grammar('pltg', 'S', tuple(prods)))
