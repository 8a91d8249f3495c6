"""First-order terms used both as trees and as stacks.

A stack ``s1 s2 s3`` (``s3`` on top) is the unary spine ``s3(s2(s1(nil)))``,
so one term type covers both formalisms. Patterns are terms that may contain
:class:`Var` leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

NIL_NAME = 'nil'


class Term:
    """An immutable term node ``ctor(children...)``.

    Children are usually terms or variables. The chart recognizer also hangs
    its own reference objects off terms, which is why children are not
    type-checked here.
    """

    __slots__ = ('ctor', 'children', '_hash')

    def __init__(self, ctor: str, children=()):
        self.ctor = ctor
        self.children = tuple(children)
        self._hash = hash((ctor, self.children))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return self.ctor == other.ctor and self.children == other.children

    def __ne__(self, other):
        return not self == other

    @property
    def arity(self) -> int:
        return len(self.children)

    def __repr__(self):
        return 'Term(%r, %r)' % (self.ctor, self.children)

    def __str__(self):
        if not self.children:
            return self.ctor
        return '%s(%s)' % (self.ctor, ','.join(str(c) for c in self.children))


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return '?' + self.name


Pattern = Union[Term, Var]

NIL = Term(NIL_NAME)


def term(ctor: str, *children) -> Term:
    """Shorthand constructor; bare strings become nullary terms.

    >>> str(term('sigma', 'sigma1', term('sigma2', 'sigma1')))
    'sigma(sigma1,sigma2(sigma1))'
    """
    return Term(ctor, [Term(c) if isinstance(c, str) else c for c in children])


def stack(*symbols: str, tail: Optional[Pattern] = None) -> Pattern:
    """Build a stack bottom-to-top on top of ``tail`` (default ``nil``)."""
    t = NIL if tail is None else tail
    for sym in symbols:
        t = Term(sym, (t,))
    return t


def variables(p) -> Iterator[str]:
    """Variable names of a pattern in left-to-right order, with repeats."""
    if isinstance(p, Var):
        yield p.name
    elif isinstance(p, Term):
        for c in p.children:
            yield from variables(c)


def var_paths(p, path=()) -> Iterator[tuple[str, tuple[int, ...]]]:
    """Pairs ``(name, path)`` for every variable occurrence."""
    if isinstance(p, Var):
        yield p.name, path
    elif isinstance(p, Term):
        for i, c in enumerate(p.children):
            yield from var_paths(c, path + (i,))


def is_ground(p) -> bool:
    return next(variables(p), None) is None


def depth(p) -> int:
    """Depth counting constructor nodes; variables count as 0."""
    if not isinstance(p, Term):
        return 0
    return 1 + max((depth(c) for c in p.children), default=0)


def size(t) -> int:
    """Number of constructor nodes."""
    if not isinstance(t, Term):
        return 0
    return 1 + sum(size(c) for c in t.children)


def constructors(p) -> Iterator[tuple[str, int]]:
    if isinstance(p, Term):
        yield p.ctor, len(p.children)
        for c in p.children:
            yield from constructors(c)


def subterm(t: Term, path: tuple[int, ...]):
    for i in path:
        t = t.children[i]
    return t


class UnboundVariable(LookupError):
    pass


def match_pattern(p: Pattern, t: Term,
                  bindings: Optional[Mapping[str, Term]] = None) -> Optional[dict]:
    """Match pattern ``p`` against ground ``t``, extending ``bindings``.

    Returns the extended map, or None when there is no match. Repeated
    variables must bind structurally equal trees.

    >>> x = Var('x')
    >>> match_pattern(Term('s', (x, x)), term('s', 's1', 's1'))
    {'x': Term('s1', ())}
    >>> match_pattern(Term('s', (x, x)), term('s', 's1', 's2')) is None
    True
    """
    out = dict(bindings or {})
    if _match_into(p, t, out):
        return out
    return None


def _match_into(p, t, out) -> bool:
    if isinstance(p, Var):
        bound = out.get(p.name)
        if bound is None:
            out[p.name] = t
            return True
        return bound == t
    if not isinstance(t, Term) or p.ctor != t.ctor or len(p.children) != len(t.children):
        return False
    return all(_match_into(pc, tc, out) for pc, tc in zip(p.children, t.children))


def instantiate(p: Pattern, bindings: Mapping) -> Term:
    """Replace every variable of ``p`` by its binding."""
    if isinstance(p, Var):
        try:
            return bindings[p.name]
        except KeyError:
            raise UnboundVariable(p.name) from None
    if not p.children:
        return p
    return Term(p.ctor, [instantiate(c, bindings) for c in p.children])


def render_avm(t: Term, features: Optional[Mapping[str, tuple]] = None) -> str:
    """Render a ground tree as an attribute-value matrix.

    Interior nodes are unlabelled; the i-th child hangs off feature ``f<i>``
    unless ``features`` names the constructor's features. Nullary
    constructors print as atoms and ``nil`` as the empty matrix.

    >>> render_avm(term('sigma', 'sigma1', 'sigma2'), {'sigma': ('f', 'g')})
    '[f: sigma1, g: sigma2]'
    >>> render_avm(stack('b', 'a'))
    '[f1: [f1: []]]'
    """
    if t.ctor == NIL_NAME and not t.children:
        return '[]'
    if not t.children:
        return t.ctor
    names = (features or {}).get(t.ctor)
    if names is None or len(names) != len(t.children):
        names = ['f%d' % (i + 1) for i in range(len(t.children))]
    parts = ['%s: %s' % (n, render_avm(c, features)) for n, c in zip(names, t.children)]
    return '[' + ', '.join(parts) + ']'
