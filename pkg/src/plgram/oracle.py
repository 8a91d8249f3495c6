"""Exhaustive bounded recognition over fully materialized trees.

This is deliberately naive: every item carries its complete ground tree, and
items are keyed by the substring they derive rather than by position (a
derivation of ``u`` does not depend on where ``u`` sits in the input). It is
the reference the chart recognizer is checked against, so it shares no code
with it beyond term matching.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable, Optional, Union

from plgram.derivation import Derivation
from plgram.grammar import Grammar, Slot, require_valid
from plgram.terms import NIL, Term, instantiate, match_pattern, size, variables

Bound = Union[None, int, Callable[[int], int]]


@dataclass(frozen=True)
class ConcreteItem:
    nonterminal: str
    tree: Term
    yield_: tuple


@dataclass(frozen=True)
class OracleVerdict:
    accepted: bool
    bound: int

    def __bool__(self):
        return self.accepted

    def __str__(self):
        return 'accept' if self.accepted else 'reject (within bound %d)' % self.bound


class NotAccepted(ValueError):
    pass


def _resolve_bound(g: Grammar, bound: Bound, length: int) -> int:
    if bound is None:
        return g.default_bound(length)
    if callable(bound):
        return bound(length)
    if bound < 1:
        raise ValueError('bound must be at least 1')
    return bound


def closure(g: Grammar, admit: Callable[[tuple], bool], bound: int) -> set:
    """All items whose yield passes ``admit`` and whose tree has at most ``bound`` nodes.

    ``admit`` must be closed under taking contiguous pieces (every piece of an
    admitted yield is admitted); partial yields are pruned with it.
    """
    known: dict = {a: [] for a in g.nonterminals}
    index: dict = {}
    seen: set = set()
    round_of: dict = {a: [] for a in g.nonterminals}

    def add(a, tree, yld, rnd, fresh):
        key = ConcreteItem(a, tree, yld)
        if key in seen:
            return
        seen.add(key)
        index.setdefault((a, tree), []).append(len(known[a]))
        known[a].append((tree, yld))
        round_of[a].append(rnd)
        fresh.append(key)

    fresh: list = []
    for prod in g.productions:
        if not prod.slots:
            yld = tuple(prod.rhs)
            if admit(yld) and size(prod.pattern) <= bound:
                add(prod.lhs, prod.pattern, yld, 0, fresh)
    rnd = 0
    with_slots = [p for p in g.productions if p.slots]
    while fresh:
        rnd += 1
        # items of the previous round are the delta; positions below old_len are older
        limit = {a: len(v) for a, v in known.items()}
        old_len = {a: _first_round(round_of[a], rnd - 1) for a in known}
        fresh = []
        for prod in with_slots:
            nslots = len(prod.slots)
            for first_delta in range(nslots):
                _combine(prod, 0, 0, {}, (), first_delta, known, index, limit, old_len,
                         admit, bound, lambda t, y, p=prod: add(p.lhs, t, y, rnd, fresh))
    return seen


def _first_round(rounds, r):
    for i, x in enumerate(rounds):
        if x >= r:
            return i
    return len(rounds)


def _combine(prod, k, slot_no, bindings, yld, first_delta, known, index, limit, old_len,
             admit, bound, emit):
    if k == len(prod.rhs):
        tree = instantiate(prod.pattern, bindings)
        if size(tree) <= bound:
            emit(tree, yld)
        return
    item = prod.rhs[k]
    if not isinstance(item, Slot):
        y2 = yld + (item,)
        if admit(y2):
            _combine(prod, k + 1, slot_no, bindings, y2, first_delta, known, index, limit,
                     old_len, admit, bound, emit)
        return
    a = item.nonterminal
    if slot_no < first_delta:
        lo, hi = 0, old_len[a]
    elif slot_no == first_delta:
        lo, hi = old_len[a], limit[a]
    else:
        lo, hi = 0, limit[a]
    if lo >= hi:
        return
    entries = known[a]
    if all(v in bindings for v in variables(item.pattern)):
        target = instantiate(item.pattern, bindings)
        positions = [i for i in index.get((a, target), ()) if lo <= i < hi]
        for i in positions:
            y2 = yld + entries[i][1]
            if admit(y2):
                _combine(prod, k + 1, slot_no + 1, bindings, y2, first_delta, known, index,
                         limit, old_len, admit, bound, emit)
        return
    for i in range(lo, hi):
        tree, piece = entries[i]
        y2 = yld + piece
        if not admit(y2):
            continue
        b2 = match_pattern(item.pattern, tree, bindings)
        if b2 is not None:
            _combine(prod, k + 1, slot_no + 1, b2, y2, first_delta, known, index, limit,
                     old_len, admit, bound, emit)


def _substrings(word: tuple) -> set:
    return {word[i:j] for i in range(len(word) + 1) for j in range(i, len(word) + 1)}


def oracle_items(g: Grammar, word, bound: Bound = None) -> set:
    """The bounded item closure for ``word`` (yields restricted to its substrings)."""
    require_valid(g)
    word = tuple(word)
    subs = _substrings(word)
    return closure(g, subs.__contains__, _resolve_bound(g, bound, len(word)))


def oracle_recognize(g: Grammar, word, bound: Bound = None) -> OracleVerdict:
    """Accept iff ``start[nil]`` derives ``word`` using trees of at most ``bound`` nodes.

    The default bound is ``(k_rhs + D + 1) * (len(word) + 1)``.
    """
    word = tuple(word)
    b = _resolve_bound(g, bound, len(word))
    items = oracle_items(g, word, b)
    return OracleVerdict(ConcreteItem(g.start, NIL, word) in items, b)


def enumerate_language(g: Grammar, max_len: int, bound: Bound = None) -> list:
    """Every string of length at most ``max_len`` the oracle accepts.

    Ordered by length, then lexicographically. Each length ``n`` is computed
    with the bound the oracle would use for an input of length ``n``.
    """
    require_valid(g)
    if max_len < 0:
        raise ValueError('max_len must be non-negative')
    found: set = set()
    if isinstance(bound, int) and bound is not None:
        items = closure(g, lambda y: len(y) <= max_len, bound)
        found = {it.yield_ for it in items if it.nonterminal == g.start and it.tree == NIL}
    else:
        for n in range(max_len + 1):
            b = _resolve_bound(g, bound, n)
            items = closure(g, lambda y, n=n: len(y) <= n, b)
            found |= {it.yield_ for it in items
                      if it.nonterminal == g.start and it.tree == NIL and len(it.yield_) == n}
    return sorted(found, key=lambda y: (len(y), y))


def enumerate_derivations(g: Grammar, word, limit: int = 10, bound: Bound = None) -> list:
    """Up to ``limit`` distinct derivation trees of ``word`` within the bound.

    Derivations that revisit the same (nonterminal, tree, span) on one
    root-to-leaf path are skipped, which keeps the search finite.
    """
    word = tuple(word)
    b = _resolve_bound(g, bound, len(word))
    items = oracle_items(g, word, b)
    if ConcreteItem(g.start, NIL, word) not in items:
        raise NotAccepted('%r is not accepted within bound %d' % (' '.join(word), b))
    trees: dict = {}
    for it in items:
        trees.setdefault((it.nonterminal, it.yield_), []).append(it.tree)
    for v in trees.values():
        v.sort(key=str)
    search = _DerivationSearch(g, word, trees)
    return list(islice(search.derive(g.start, NIL, 0, len(word), frozenset()), limit))


class _DerivationSearch:
    def __init__(self, g, word, trees):
        self.g, self.word, self.trees = g, word, trees

    def derive(self, a, tree, i, j, path):
        key = (a, tree, i, j)
        if key in path:
            return
        path = path | {key}
        for idx, prod in self.g.by_lhs.get(a, ()):
            b0 = match_pattern(prod.pattern, tree)
            if b0 is None:
                continue
            for children, _ in self.fill(prod.rhs, 0, i, j, b0, path):
                yield Derivation(a, tree, (i, j), idx, children)

    def fill(self, rhs, k, pos, end, bindings, path):
        if k == len(rhs):
            if pos == end:
                yield (), bindings
            return
        item = rhs[k]
        if not isinstance(item, Slot):
            if pos < end and self.word[pos] == item:
                for rest, b in self.fill(rhs, k + 1, pos + 1, end, bindings, path):
                    yield (item,) + rest, b
            return
        for q in range(pos, end + 1):
            for tree in self.trees.get((item.nonterminal, self.word[pos:q]), ()):
                b2 = match_pattern(item.pattern, tree, bindings)
                if b2 is None:
                    continue
                for child in self.derive(item.nonterminal, tree, pos, q, path):
                    for rest, b in self.fill(rhs, k + 1, q, end, b2, path):
                        yield (child,) + rest, b
