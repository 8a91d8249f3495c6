"""Grammars over term-annotated nonterminals: loading, checking, classifying.

Grammar source format (``#`` starts a comment)::

    formalism: pltg
    start: S1
    features: sigma left right
    S1[] -> A[?x] S2[sigma(?x,?x)]
    A[sigma1] -> 'a'

PLIG patterns are written bottom-to-top: ``A[?x s1]`` pushes ``s1`` onto the
stack ``?x``; ``[]`` is the empty stack/``nil`` in both formalisms. An empty
right-hand side (nothing after ``->``) is the empty string.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Optional, Union

from plgram.terms import NIL, NIL_NAME, Pattern, Term, Var, constructors, depth, var_paths, variables

FORMALISMS = ('plig', 'pltg')


class GrammarError(ValueError):
    pass


class GrammarSyntaxError(GrammarError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = '' if line is None else 'line %d, column %d: ' % (line, column or 0)
        super().__init__(where + message)


class ArityError(GrammarError):
    def __init__(self, constructor, expected, found, line=None):
        self.constructor = constructor
        msg = 'constructor %r used with %d children, previously %d' % (constructor, found, expected)
        if line is not None:
            msg = 'line %d: %s' % (line, msg)
        super().__init__(msg)


class InvalidGrammar(GrammarError):
    def __init__(self, report):
        self.report = report
        super().__init__('grammar violates constraints:\n' + report.format())


@dataclass(frozen=True)
class Slot:
    """A right-hand-side nonterminal together with its tree pattern."""
    nonterminal: str
    pattern: Pattern

    def __str__(self):
        return '%s[%s]' % (self.nonterminal, self.pattern)


RhsItem = Union[str, Slot]


@dataclass(frozen=True)
class Production:
    lhs: str
    pattern: Pattern
    rhs: tuple = ()

    @property
    def slots(self) -> list[Slot]:
        return [item for item in self.rhs if isinstance(item, Slot)]

    def __str__(self):
        return format_production(self, 'pltg')


@dataclass(frozen=True)
class Grammar:
    formalism: str
    start: str
    productions: tuple = ()
    features: Mapping[str, tuple] = field(default_factory=dict)

    @cached_property
    def nonterminals(self) -> frozenset:
        names = {self.start}
        for p in self.productions:
            names.add(p.lhs)
            names.update(s.nonterminal for s in p.slots)
        return frozenset(names)

    @cached_property
    def terminals(self) -> frozenset:
        return frozenset(x for p in self.productions for x in p.rhs if isinstance(x, str))

    @cached_property
    def arities(self) -> dict:
        return check_arities(self.productions)

    @cached_property
    def max_depth(self) -> int:
        """The constant D: deepest pattern anywhere in the grammar."""
        pats = [p.pattern for p in self.productions]
        pats += [s.pattern for p in self.productions for s in p.slots]
        return max((depth(p) for p in pats), default=1)

    @cached_property
    def max_slots(self) -> int:
        return max((len(p.slots) for p in self.productions), default=0)

    @cached_property
    def max_rhs(self) -> int:
        return max((len(p.rhs) for p in self.productions), default=0)

    @cached_property
    def by_lhs(self) -> dict:
        out: dict = {}
        for i, p in enumerate(self.productions):
            out.setdefault(p.lhs, []).append((i, p))
        return out

    def default_bound(self, length: int) -> int:
        return (self.max_rhs + self.max_depth + 1) * (length + 1)


def check_arities(productions) -> dict:
    arities: dict = {NIL_NAME: 0}
    for p in productions:
        pats = [p.pattern] + [s.pattern for s in p.slots]
        for pat in pats:
            for ctor, n in constructors(pat):
                prev = arities.setdefault(ctor, n)
                if prev != n:
                    raise ArityError(ctor, prev, n)
    return arities


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<arrow>->)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_']*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<terminal>'[^']+')
  | (?P<punct>[\[\](),])
""", re.VERBOSE)


def _tokenize(text, lineno):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GrammarSyntaxError('unexpected character %r' % text[pos], lineno, pos + 1)
        kind = m.lastgroup
        if kind == 'comment':
            break
        if kind != 'ws':
            value = m.group()
            if kind == 'punct':
                kind = value
            out.append((kind, value, pos + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens, lineno):
        self.tokens, self.i, self.lineno = tokens, 0, lineno

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind=None):
        if self.i >= len(self.tokens):
            raise GrammarSyntaxError('unexpected end of line', self.lineno, 0)
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise GrammarSyntaxError('expected %s, found %r' % (kind, tok[1]), self.lineno, tok[2])
        self.i += 1
        return tok

    def error(self, msg):
        col = self.tokens[self.i][2] if self.i < len(self.tokens) else 0
        return GrammarSyntaxError(msg, self.lineno, col)


def _parse_pltg_term(cur):
    kind, value, col = cur.take()
    if kind == 'var':
        return Var(value[1:])
    if kind != 'name':
        raise GrammarSyntaxError('expected a term, found %r' % value, cur.lineno, col)
    if cur.peek() != '(':
        return Term(value)
    cur.take('(')
    children = [_parse_pltg_term(cur)]
    while cur.peek() == ',':
        cur.take(',')
        children.append(_parse_pltg_term(cur))
    cur.take(')')
    return Term(value, children)


def _parse_bracket(cur, formalism):
    cur.take('[')
    if cur.peek() == ']':
        cur.take(']')
        return NIL
    if formalism == 'pltg':
        pat = _parse_pltg_term(cur)
    else:
        pat = NIL
        if cur.peek() == 'var':
            pat = Var(cur.take()[1][1:])
        while cur.peek() == 'name':
            _, sym, col = cur.take()
            if sym == NIL_NAME:
                raise GrammarSyntaxError('nil is not a stack symbol', cur.lineno, col)
            pat = Term(sym, (pat,))
        if cur.peek() != ']':
            raise cur.error('malformed stack pattern')
    cur.take(']')
    return pat


def _parse_production(tokens, lineno, formalism):
    cur = _Cursor(tokens, lineno)
    lhs = cur.take('name')[1]
    pattern = _parse_bracket(cur, formalism)
    cur.take('arrow')
    rhs = []
    while cur.peek() is not None:
        kind = cur.peek()
        if kind == 'terminal':
            rhs.append(cur.take()[1][1:-1])
        elif kind == 'name':
            name = cur.take()[1]
            if cur.peek() != '[':
                raise cur.error('nonterminal %r needs a [pattern]' % name)
            rhs.append(Slot(name, _parse_bracket(cur, formalism)))
        else:
            raise cur.error('unexpected %r' % cur.tokens[cur.i][1])
    return Production(lhs, pattern, tuple(rhs))


_HEADER = re.compile(r'^\s*(formalism|start|features)\s*:(.*)$')


def parse_grammar(text: str) -> Grammar:
    """Parse grammar source. Constraint checking is left to :func:`validate_grammar`."""
    formalism = start = None
    features: dict = {}
    productions: list = []
    seen_lines = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _HEADER.match(line)
        if m:
            head, words = m.group(1), m.group(2).split('#', 1)[0].split()
            if head == 'formalism':
                if seen_lines != 0 or len(words) != 1 or words[0] not in FORMALISMS:
                    raise GrammarSyntaxError('first line must be "formalism: plig|pltg"', lineno, 1)
                formalism = words[0]
            elif head == 'start':
                if seen_lines != 1 or len(words) != 1:
                    raise GrammarSyntaxError('second line must be "start: <Nonterminal>"', lineno, 1)
                start = words[0]
            else:
                if start is None or not words:
                    raise GrammarSyntaxError('features line needs a constructor after the header', lineno, 1)
                features[words[0]] = tuple(words[1:])
            seen_lines += 1
            continue
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        if formalism is None:
            raise GrammarSyntaxError('missing "formalism:" header', lineno, 1)
        if start is None:
            raise GrammarSyntaxError('missing "start:" header', lineno, 1)
        seen_lines += 1
        prod = _parse_production(tokens, lineno, formalism)
        try:
            check_arities(productions + [prod])
        except ArityError as e:
            raise ArityError(e.constructor, *_arity_pair(productions, prod, e.constructor), line=lineno) from None
        productions.append(prod)
    if formalism is None or start is None:
        raise GrammarSyntaxError('missing "formalism:"/"start:" header', max(1, len(text.splitlines())), 1)
    return Grammar(formalism, start, tuple(productions), features)


def _arity_pair(productions, prod, ctor):
    seen = [n for p in productions for pat in [p.pattern] + [s.pattern for s in p.slots]
            for c, n in constructors(pat) if c == ctor]
    new = [n for pat in [prod.pattern] + [s.pattern for s in prod.slots]
           for c, n in constructors(pat) if c == ctor]
    expected = seen[0] if seen else new[0]
    found = next((n for n in new if n != expected), expected)
    return expected, found


# -- serialization ---------------------------------------------------------

def format_pattern(p: Pattern, formalism: str) -> str:
    if p == NIL:
        return ''
    if formalism == 'pltg':
        return str(p)
    syms = []
    while isinstance(p, Term) and p.ctor != NIL_NAME:
        syms.append(p.ctor)
        p = p.children[0]
    if isinstance(p, Var):
        syms.append(str(p))
    return ' '.join(reversed(syms))


def format_production(p: Production, formalism: str) -> str:
    parts = ['%s[%s] ->' % (p.lhs, format_pattern(p.pattern, formalism))]
    for item in p.rhs:
        if isinstance(item, Slot):
            parts.append('%s[%s]' % (item.nonterminal, format_pattern(item.pattern, formalism)))
        else:
            parts.append("'%s'" % item)
    return ' '.join(parts)


def serialize_grammar(g: Grammar) -> str:
    lines = ['formalism: %s' % g.formalism, 'start: %s' % g.start]
    for ctor, names in g.features.items():
        lines.append(' '.join(['features:', ctor] + list(names)))
    lines += [format_production(p, g.formalism) for p in g.productions]
    return '\n'.join(lines) + '\n'


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    production: int
    rule: str
    variables: tuple = ()
    paths: tuple = ()
    slots: tuple = ()
    message: str = ''

    def to_dict(self) -> dict:
        return {'production': self.production, 'rule': self.rule,
                'variables': list(self.variables), 'paths': [list(p) for p in self.paths],
                'slots': list(self.slots), 'message': self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    def __bool__(self):
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def format(self) -> str:
        out = []
        for v in self.violations:
            out.append('production %d: %s %s' % (v.production, v.rule, v.message))
        return '\n'.join(out)


_RULE_ORDER = {'ARITY': 0, 'PLIG': 1, 'P1': 2, 'P3': 3, 'P4': 4}


def _is_stack_pattern(p) -> bool:
    while isinstance(p, Term):
        if p.ctor == NIL_NAME:
            return not p.children
        if len(p.children) != 1:
            return False
        p = p.children[0]
    return True


def _production_violations(idx, prod, formalism):
    out = []
    slots = prod.slots
    if formalism == 'plig':
        if not _is_stack_pattern(prod.pattern):
            out.append(Violation(idx, 'PLIG', message='mother pattern %s is not a stack' % prod.pattern))
        for k, s in enumerate(slots):
            if not _is_stack_pattern(s.pattern):
                out.append(Violation(idx, 'PLIG', slots=(k,),
                                     message='daughter %d pattern %s is not a stack' % (k, s.pattern)))
    lhs_paths: dict = {}
    for name, path in var_paths(prod.pattern):
        lhs_paths.setdefault(name, []).append(path)
    rhs_count: dict = {}
    slot_vars = [set(variables(s.pattern)) for s in slots]
    for s in slots:
        for name in variables(s.pattern):
            rhs_count[name] = rhs_count.get(name, 0) + 1
    for name, paths in lhs_paths.items():
        if len(paths) > 1:
            out.append(Violation(idx, 'P1', (name,), tuple(paths),
                                 message='?%s occurs %d times in the mother' % (name, len(paths))))
        n = rhs_count.get(name, 0)
        if n > 1:
            where = tuple(k for k, vs in enumerate(slot_vars) if name in vs)
            out.append(Violation(idx, 'P1', (name,), (paths[0],), where,
                                 message='mother variable ?%s passed to %d daughter positions' % (name, n)))
        if n == 0:
            out.append(Violation(idx, 'P4', (name,), (paths[0],),
                                 message='mother variable ?%s does not occur in any daughter' % name))
    for comp in sharing_components(prod):
        routed = sorted({v for k in comp for v in slot_vars[k] if v in lhs_paths},
                        key=lambda v: lhs_paths[v][0])
        if len(routed) < 2:
            continue
        paths = [lhs_paths[v][0] for v in routed]
        parents = {p[:-1] for p in paths}
        if len(parents) != 1 or any(not p for p in paths):
            out.append(Violation(
                idx, 'P3', tuple(routed), tuple(paths), tuple(comp),
                message='mother subtrees %s reach sharing daughters %s but are not siblings'
                % (', '.join('?' + v for v in routed), ', '.join(str(k) for k in comp))))
    return out


def sharing_components(prod: Production) -> list[tuple[int, ...]]:
    """Connected components of daughter slots linked by common variables."""
    slot_vars = [set(variables(s.pattern)) for s in prod.slots]
    parent = list(range(len(slot_vars)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(slot_vars)):
        for b in range(a + 1, len(slot_vars)):
            if slot_vars[a] & slot_vars[b]:
                parent[find(a)] = find(b)
    groups: dict = {}
    for k in range(len(slot_vars)):
        groups.setdefault(find(k), []).append(k)
    return sorted(tuple(g) for g in groups.values())


def validate_grammar(g: Grammar) -> ValidationReport:
    """Check every production against the partial-linearity constraints.

    Rule ids: ``P1`` mother linearity, ``P3`` sibling condition, ``P4``
    groundedness, ``PLIG`` stack shape (plig grammars only), ``ARITY``.
    """
    out = []
    try:
        check_arities(g.productions)
    except ArityError as e:
        out.append(Violation(-1, 'ARITY', message=str(e)))
    for idx, prod in enumerate(g.productions):
        out.extend(_production_violations(idx, prod, g.formalism))
    out.sort(key=lambda v: (v.production, _RULE_ORDER[v.rule], v.slots, v.variables))
    return ValidationReport(tuple(out))


def require_valid(g: Grammar) -> Grammar:
    report = validate_grammar(g)
    if not report.ok:
        raise InvalidGrammar(report)
    return g


def classify_grammar(g: Grammar) -> str:
    """Tightest of ``cfg``, ``lig``, ``plig``, ``pltg`` containing ``g``."""
    require_valid(g)
    pats = [p.pattern for p in g.productions] + [s.pattern for p in g.productions for s in p.slots]
    if all(p == NIL for p in pats):
        return 'cfg'
    if not all(_is_stack_pattern(p) for p in pats):
        return 'pltg'
    for p in g.productions:
        seen: set = set()
        for s in p.slots:
            vs = set(variables(s.pattern))
            if vs & seen:
                return 'plig'
            seen |= vs
    return 'lig'


def plig_to_pltg(g: Grammar) -> Grammar:
    """Re-tag a PLIG as a PLTG; stack symbols already are unary constructors."""
    if g.formalism != 'plig':
        raise GrammarError('expected a plig grammar, got %s' % g.formalism)
    require_valid(g)
    return replace(g, formalism='pltg', features=dict(g.features))
