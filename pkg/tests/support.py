"""Direct string checkers and shared helpers for the test-suite."""
from __future__ import annotations

import itertools
import re

from plgram.chart import SubtreeRef, TerminatorRef
from plgram.terms import Term

FIXTURES = __import__('pathlib').Path(__file__).parent / 'fixtures'


def all_strings(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(sorted(alphabet), repeat=n)


def is_dyck(w) -> bool:
    depth = 0
    for c in w:
        depth += 1 if c == '(' else -1
        if depth < 0:
            return False
    return depth == 0


def is_copy(w, k, base) -> bool:
    """``w == u * k`` for some ``u`` with ``base(u)``."""
    w = tuple(w)
    if len(w) % k:
        return False
    n = len(w) // k
    u = w[:n]
    return w == u * k and base(u)


def dyck_copy(k):
    return lambda w: is_copy(w, k, is_dyck)


def in_example1(w) -> bool:
    m = re.fullmatch(r'(a+)(b+)(c+)(d+)', ''.join(w))
    return bool(m) and len(m[1]) == len(m[3]) and len(m[2]) == len(m[4])


def in_example4(w) -> bool:
    m = re.fullmatch(r'(a+)(b+)(c+)', ''.join(w))
    return bool(m) and len(m[1]) == len(m[2]) == len(m[3])


def counting(k, letters):
    def check(w):
        s = ''.join(w)
        n = len(s) // k if k else 0
        return len(s) == n * k and s == ''.join(a * n for a in letters)
    return check


def dyck_copy_bound(k: int = 2):
    """Tree-size bound that keeps the Dyck-copy oracle complete (see README).

    A Dyck word of length 2p has a derivation tree of at most 3p - 1 nodes,
    so inputs of length n = 2pk need trees of at most 3n/(2k) - 1 nodes.
    """
    return lambda n: 3 * n // (2 * k) + 1


example5_bound = dyck_copy_bound(2)


def substitutions(value):
    """Every way of replacing one TerminatorRef inside ``value`` by a hole.

    Yields ``(ref, rebuild)`` where ``rebuild(v)`` puts ``v`` in the ref's place.
    """
    if isinstance(value, TerminatorRef):
        yield value, lambda v: v
    elif isinstance(value, SubtreeRef):
        for ref, rebuild in substitutions(value.node):
            yield ref, rebuild
    elif isinstance(value, Term):
        for k, child in enumerate(value.children):
            for ref, rebuild in substitutions(child):
                def put(v, k=k, rebuild=rebuild, node=value):
                    kids = list(node.children)
                    kids[k] = rebuild(v)
                    return Term(node.ctor, kids)
                yield ref, put
