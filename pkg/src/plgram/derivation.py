"""Derivation trees and their independent re-validation against a grammar."""
from __future__ import annotations

from dataclasses import dataclass

from plgram.grammar import Grammar, Slot
from plgram.terms import Term, instantiate, match_pattern


@dataclass(frozen=True)
class Derivation:
    """One node of a derivation: ``nonterminal[tree]`` over ``span`` via ``production``.

    ``children`` follows the production's right-hand side: terminal strings
    and sub-derivations in order.
    """
    nonterminal: str
    tree: Term
    span: tuple
    production: int
    children: tuple = ()

    def yield_(self) -> tuple:
        out: list = []
        for c in self.children:
            if isinstance(c, Derivation):
                out.extend(c.yield_())
            else:
                out.append(c)
        return tuple(out)

    def nodes(self):
        yield self
        for c in self.children:
            if isinstance(c, Derivation):
                yield from c.nodes()

    def pretty(self, indent=0) -> str:
        pad = '  ' * indent
        lines = ['%s%s[%s] %s' % (pad, self.nonterminal, self.tree, list(self.span))]
        for c in self.children:
            if isinstance(c, Derivation):
                lines.append(c.pretty(indent + 1))
            else:
                lines.append("%s  '%s'" % (pad, c))
        return '\n'.join(lines)


def check_derivation(g: Grammar, d: Derivation, word=None) -> list[str]:
    """Problems found when re-checking ``d`` node by node; empty when sound."""
    problems: list = []
    if word is not None and d.yield_() != tuple(word):
        problems.append('yield %r differs from input' % (d.yield_(),))
    for node in d.nodes():
        problems.extend(_check_node(g, node))
    return problems


def _check_node(g, node):
    where = '%s%s' % (node.nonterminal, list(node.span))
    if not 0 <= node.production < len(g.productions):
        return ['%s: no production %d' % (where, node.production)]
    prod = g.productions[node.production]
    if prod.lhs != node.nonterminal:
        return ['%s: production %d rewrites %s' % (where, node.production, prod.lhs)]
    if len(prod.rhs) != len(node.children):
        return ['%s: wrong number of children' % where]
    bindings = match_pattern(prod.pattern, node.tree)
    if bindings is None:
        return ['%s: tree %s does not match %s' % (where, node.tree, prod.pattern)]
    pos = node.span[0]
    for item, child in zip(prod.rhs, node.children):
        if isinstance(item, Slot):
            if not isinstance(child, Derivation) or child.nonterminal != item.nonterminal:
                return ['%s: daughter mismatch' % where]
            if child.span[0] != pos:
                return ['%s: daughter spans are not contiguous' % where]
            pos = child.span[1]
            bindings = match_pattern(item.pattern, child.tree, bindings)
            if bindings is None:
                return ['%s: daughter %s[%s] does not fit %s' % (where, child.nonterminal, child.tree, item.pattern)]
        else:
            if child != item:
                return ['%s: expected terminal %r' % (where, item)]
            pos += 1
    if pos != node.span[1]:
        return ['%s: children do not cover the span' % where]
    if instantiate(prod.pattern, bindings) != node.tree:
        return ['%s: mother tree is not determined by its daughters' % where]
    return []
