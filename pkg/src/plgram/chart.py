"""Polynomial chart recognition with structure sharing.

Chart items never hold whole trees. An item for ``A`` over ``(i, j)`` keeps
the mother pattern of the production that built it, with every variable
position replaced by a reference:

* :class:`TerminatorRef` ``(B, p, q)`` stands for *any* tree of *any* item in
  cell ``(B, p, q)``. Because a mother subtree is passed to one daughter only,
  and mother subtrees reaching sharing daughters are siblings, the subtrees
  behind distinct references of one item vary independently; this is what
  lets one entry stand for all its substitution instances.
* :class:`SubtreeRef` wraps a bounded piece of some item's top when a
  daughter pattern reaches below that item's root.

Patterns that look deeper than a stored top unfold a reference one cell at a
time. Equality of subtrees shared only among daughters is decided by the
compatibility table: ``compatible({v1, ..., vr})`` holds iff the sets
denoted by the values have a common tree. It is computed on demand, from
the tops of the referenced entries and then their children, and memoized.

Cells are filled on demand starting from ``(start, 0, n)`` rather than for
every span; cells over one span are closed together under a fixpoint so that
empty and unit daughters over the same span are handled.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Optional

from plgram.derivation import Derivation
from plgram.grammar import Grammar, Slot, require_valid
from plgram.oracle import NotAccepted
from plgram.terms import NIL, Term, Var, instantiate, match_pattern, size, variables

_INF = float('inf')


@dataclass(frozen=True, slots=True)
class TerminatorRef:
    nonterminal: str
    start: int
    end: int

    @property
    def cell(self):
        return (self.nonterminal, self.start, self.end)

    def __str__(self):
        return '@%s[%d,%d]' % (self.nonterminal, self.start, self.end)


@dataclass(frozen=True, slots=True)
class SubtreeRef:
    node: Term

    def __str__(self):
        return '&' + str(self.node)


@dataclass(frozen=True)
class Item:
    id: int
    nonterminal: str
    span: tuple
    top: object

    def __str__(self):
        return '%s[%s] %s' % (self.nonterminal, self.top, list(self.span))


@dataclass(frozen=True)
class Edge:
    """One way an item was built: production, daughters and variable values.

    A daughter is an item id, or a cell key ``(B, p, q)`` when the daughter
    pattern is a bare variable and any entry of the cell serves.
    """
    production: int
    children: tuple
    values: tuple     # ((var, (value, ...)), ...)

    def value_map(self) -> dict:
        return dict(self.values)


@dataclass(frozen=True)
class CompatEntry:
    id: int
    values: tuple
    spans: tuple


def top_depth(v) -> int:
    if isinstance(v, Term):
        return 1 + max((top_depth(c) for c in v.children), default=0)
    return 0


def refs_in(v):
    if isinstance(v, TerminatorRef):
        yield v
    elif isinstance(v, SubtreeRef):
        yield from refs_in(v.node)
    elif isinstance(v, Term):
        for c in v.children:
            yield from refs_in(c)


class _Denotation:
    """Membership and bounded expansion over reference-carrying values."""

    def _cell_tops(self, key):
        raise NotImplementedError

    def member(self, t: Term, v) -> bool:
        """Is ground ``t`` one of the trees ``v`` stands for?"""
        memo = self.__dict__.setdefault('_member_memo', {})
        res, _ = self._member(t, v, memo, set())
        return res

    def _member(self, t, v, memo, active):
        if isinstance(v, SubtreeRef):
            v = v.node
        if isinstance(v, Term):
            if t.ctor != v.ctor or len(t.children) != len(v.children):
                return False, False
            cyc = False
            for tc, vc in zip(t.children, v.children):
                res, c = self._member(tc, vc, memo, active)
                cyc = cyc or c
                if not res:
                    return False, cyc
            return True, cyc
        key = (t, v)
        hit = memo.get(key)
        if hit is not None:
            return hit, False
        if key in active:
            return False, True
        active.add(key)
        cyc = False
        res = False
        for top in self._cell_tops(v.cell):
            res, c = self._member(t, top, memo, active)
            cyc = cyc or c
            if res:
                break
        active.discard(key)
        if res or not cyc:
            memo[key] = res
        return res, cyc and not res

    def trees(self, v, budget: int) -> list:
        """Every ground tree of at most ``budget`` nodes that ``v`` stands for."""
        memo = self.__dict__.setdefault('_trees_memo', {})
        return sorted(self._trees(v, budget, memo, set())[0], key=lambda t: (size(t), str(t)))

    def _trees(self, v, budget, memo, active):
        if budget <= 0:
            return set(), False
        if isinstance(v, SubtreeRef):
            v = v.node
        if isinstance(v, Term):
            if not v.children:
                return {v}, False
            combos = [((), 1)]
            cyc = False
            for c in v.children:
                child, cc = self._trees(c, budget - 1, memo, active)
                cyc = cyc or cc
                combos = [(ts + (t,), n + size(t)) for ts, n in combos for t in child
                          if n + size(t) <= budget]
                if not combos:
                    break
            return {Term(v.ctor, ts) for ts, _ in combos}, cyc
        key = (v, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit, False
        if key in active:
            return set(), True
        active.add(key)
        out, cyc = set(), False
        for top in self._cell_tops(v.cell):
            ts, c = self._trees(top, budget, memo, active)
            out |= ts
            cyc = cyc or c
        active.discard(key)
        if not cyc:
            memo[key] = out
        return out, cyc


class Chart(_Denotation):
    """A single recognition run over one input."""

    def __init__(self, grammar: Grammar, word):
        require_valid(grammar)
        self.g = grammar
        self.word = tuple(word)
        self.n = len(self.word)
        self.cells: dict = {}
        self.cell_index: dict = {}
        self.done: set = set()
        self.active: dict = {}
        self.items: list = []
        self.edges: dict = {}
        self._edge_keys: dict = {}
        self.compat_memo: dict = {}
        self._volatile: dict = {}
        self._on_stack: dict = {}
        self.pushes = 0
        self._added: dict = {}
        self._touched = False
        self.diagnostic = None
        self._minlen = _min_lengths(grammar)
        self._suffix = {}
        for idx, prod in enumerate(grammar.productions):
            suf = [0] * (len(prod.rhs) + 1)
            for k in range(len(prod.rhs) - 1, -1, -1):
                x = prod.rhs[k]
                suf[k] = suf[k + 1] + (self._minlen[x.nonterminal] if isinstance(x, Slot) else 1)
            self._suffix[idx] = suf
        self.accepted = self._run()

    # -- driver ------------------------------------------------------------

    def _run(self) -> bool:
        unknown = [a for a in self.word if a not in self.g.terminals]
        if unknown:
            self.diagnostic = 'terminal %r is not in the grammar alphabet' % unknown[0]
            return False
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20000 + 60 * self.n))
        try:
            self._demand(self.g.start, 0, self.n)
            return any(self.compatible((e.top, NIL)) for e in self._cell(self.g.start, 0, self.n))
        finally:
            sys.setrecursionlimit(old)

    def _cell(self, a, i, j):
        return self.cells.get((a, i, j), ())

    def _cell_tops(self, key):
        return [e.top for e in self.cells.get(key, ())]

    def goal_items(self) -> list:
        return [e for e in self._cell(self.g.start, 0, self.n) if self.compatible((e.top, NIL))]

    def _demand(self, a, i, j):
        key = (a, i, j)
        if key in self.done:
            return
        group = self.active.get((i, j))
        if group is not None:
            if a not in group:
                group.add(a)
                self.cells.setdefault(key, [])
                self.cell_index.setdefault(key, {})
            return
        self.cells.setdefault(key, [])
        self.cell_index.setdefault(key, {})
        if self._minlen[a] > j - i:
            self.done.add(key)
            return
        group = {a}
        self.active[(i, j)] = group
        outer_touched = self._touched
        while True:
            self._volatile.clear()
            before = self._added.get((i, j), 0)
            size_before = len(group)
            self._touched = False
            for b in sorted(group):
                for idx, prod in self.g.by_lhs.get(b, ()):
                    self._apply(idx, prod, i, j)
            grew = self._added.get((i, j), 0) != before or len(group) != size_before
            # a pass that never read this span's own cells cannot gain from repeating
            if not grew or not self._touched:
                break
        del self.active[(i, j)]
        for b in group:
            self.done.add((b, i, j))
        self._touched = outer_touched

    # -- combining daughters ----------------------------------------------

    def _apply(self, idx, prod, i, j):
        rhs = prod.rhs
        suffix = self._suffix[idx]
        lhs_vars = set(variables(prod.pattern))
        word = self.word
        minlen = self._minlen

        def step(k, pos, vals, children):
            if k == len(rhs):
                if pos == j:
                    self._finish(idx, prod, i, j, vals, children)
                return
            item = rhs[k]
            if not isinstance(item, Slot):
                if pos < j and word[pos] == item:
                    step(k + 1, pos + 1, vals, children)
                return
            b = item.nonterminal
            lo = pos + minlen[b]
            hi = j - suffix[k + 1]
            if k + 1 == len(rhs):
                lo = max(lo, j)
            for q in range(lo, hi + 1):
                self._demand(b, pos, q)
                cell = self.cells[(b, pos, q)]
                if (pos, q) == (i, j):
                    self._touched = True
                if not cell:
                    continue
                pat = item.pattern
                if isinstance(pat, Var):
                    v2 = self._bind(vals, pat.name, TerminatorRef(b, pos, q), lhs_vars)
                    if v2 is not None:
                        step(k + 1, q, v2, children + ((b, pos, q),))
                    continue
                for entry in list(cell):
                    for v2 in self._match(pat, entry.top, vals, frozenset()):
                        if self._shared_ok(v2, pat, lhs_vars):
                            step(k + 1, q, v2, children + (entry.id,))

        step(0, i, {}, ())

    def _bind(self, vals, name, value, lhs_vars):
        v2 = dict(vals)
        v2[name] = vals.get(name, ()) + (value,)
        if name not in lhs_vars and len(v2[name]) > 1 and not self.compatible(v2[name]):
            return None
        return v2

    def _shared_ok(self, vals, pat, lhs_vars):
        for name in set(variables(pat)):
            if name not in lhs_vars and len(vals[name]) > 1 and not self.compatible(vals[name]):
                return False
        return True

    def _match(self, pat, value, vals, visiting):
        """Match a daughter pattern against a stored value, unfolding references."""
        if isinstance(pat, Var):
            v2 = dict(vals)
            v2[pat.name] = vals.get(pat.name, ()) + (value,)
            yield v2
            return
        if isinstance(value, SubtreeRef):
            value = value.node
        if isinstance(value, TerminatorRef):
            if value in visiting:
                return
            key = value.cell
            if key not in self.done:
                self._touched = True
            for e in list(self.cells.get(key, ())):
                yield from self._match(pat, e.top, vals, visiting | {value})
            return
        if value.ctor != pat.ctor or len(value.children) != len(pat.children):
            return
        yield from self._match_children(pat.children, value.children, 0, vals)

    def _match_children(self, pats, values, k, vals):
        if k == len(pats):
            yield vals
            return
        for v2 in self._match(pats[k], values[k], vals, frozenset()):
            yield from self._match_children(pats, values, k + 1, v2)

    def _finish(self, idx, prod, i, j, vals, children):
        self.pushes += 1
        refs = {}
        for name in variables(prod.pattern):
            v = vals[name][0]
            refs[name] = SubtreeRef(v) if isinstance(v, Term) else v
        top = instantiate(prod.pattern, refs)
        if isinstance(top, SubtreeRef):
            top = top.node
        key = (prod.lhs, i, j)
        index = self.cell_index[key]
        item = index.get(top)
        if item is None:
            item = Item(len(self.items), prod.lhs, (i, j), top)
            self.items.append(item)
            index[top] = item
            self.cells[key].append(item)
            self.edges[item.id] = []
            self._edge_keys[item.id] = set()
            self._added[(i, j)] = self._added.get((i, j), 0) + 1
        frozen = tuple(sorted((k, tuple(v)) for k, v in vals.items()))
        edge = Edge(idx, children, frozen)
        if edge not in self._edge_keys[item.id]:
            self._edge_keys[item.id].add(edge)
            self.edges[item.id].append(edge)

    # -- compatibility -----------------------------------------------------

    def compatible(self, values) -> bool:
        """Do the given values denote sets with a tree in common?"""
        key = frozenset(values)
        if len(key) < 2:
            return True
        return self._compat(key)[0]

    def _compat(self, key):
        """Returns (result, lowest stack depth assumed false, touched open cell)."""
        if len(key) < 2:
            return True, _INF, False
        hit = self.compat_memo.get(key)
        if hit is not None:
            return hit, _INF, False
        hit = self._volatile.get(key)
        if hit is not None:
            return hit, _INF, True
        depth = self._on_stack.get(key)
        if depth is not None:
            return False, depth, False
        depth = len(self._on_stack)
        self._on_stack[key] = depth
        try:
            res, low, open_ = self._compat_step(key)
        finally:
            del self._on_stack[key]
        if low >= depth:
            low = _INF
        if res or (low == _INF and not open_):
            self.compat_memo[key] = res
        elif low == _INF:
            self._volatile[key] = res
        return res, low, open_

    def _compat_step(self, key):
        if any(isinstance(t, SubtreeRef) for t in key):
            return self._compat(frozenset(t.node if isinstance(t, SubtreeRef) else t for t in key))
        refs = [t for t in key if isinstance(t, TerminatorRef)]
        if refs:
            r = min(refs, key=lambda t: (t.start, t.end, t.nonterminal))
            rest = key - {r}
            open_ = r.cell not in self.done
            if open_:
                self._touched = True
            low = _INF
            for e in list(self.cells.get(r.cell, ())):
                res, l2, o2 = self._compat(rest | {e.top})
                open_ = open_ or o2
                if res:
                    return True, _INF, open_
                low = min(low, l2)
            return False, low, open_
        shapes = {(t.ctor, len(t.children)) for t in key}
        if len(shapes) > 1:
            return False, _INF, False
        (_, arity), = shapes
        low, open_ = _INF, False
        for k in range(arity):
            res, l2, o2 = self._compat(frozenset(t.children[k] for t in key))
            open_ = open_ or o2
            if not res:
                return False, l2, open_
        return True, _INF, open_

    # -- reporting ---------------------------------------------------------

    def compat_entries(self) -> list:
        out = []
        for key, ok in self.compat_memo.items():
            if ok and len(key) >= 2:
                spans = tuple(sorted({(r.nonterminal, r.start, r.end) for v in key for r in refs_in(v)}))
                out.append(CompatEntry(len(out), tuple(sorted(key, key=str)), spans))
        return out

    def stats(self) -> dict:
        per_cell = {}
        for (a, i, j), items in self.cells.items():
            if items:
                per_cell['%s[%d,%d]' % (a, i, j)] = len(items)
        n_compat = sum(1 for key, ok in self.compat_memo.items() if ok and len(key) >= 2)
        return {
            'accepted': self.accepted,
            'cells': max(1, len({(i, j) for (_, i, j) in self.done})),
            'items': len(self.items),
            'items_per_cell': per_cell,
            'compat_entries': n_compat,
            'compat_lookups': len(self.compat_memo),
            'edges': sum(len(v) for v in self.edges.values()),
            'agenda_pushes': self.pushes,
            'max_top_depth': max((top_depth(e.top) for e in self.items), default=0),
        }


def _min_lengths(g: Grammar) -> dict:
    """Shortest yield per nonterminal, ignoring trees (a lower bound)."""
    best = {a: _INF for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            n = sum(best[x.nonterminal] if isinstance(x, Slot) else 1 for x in p.rhs)
            if n < best[p.lhs]:
                best[p.lhs] = n
                changed = True
    return best


def recognize(g: Grammar, word) -> bool:
    """Accept iff ``start[nil]`` derives ``word``; unknown terminals reject."""
    return Chart(g, word).accepted


def chart_stats(g: Grammar, word) -> dict:
    return Chart(g, word).stats()


# -- forests -----------------------------------------------------------------

def value_to_json(v):
    if isinstance(v, TerminatorRef):
        return {'ref': [v.nonterminal, v.start, v.end]}
    if isinstance(v, SubtreeRef):
        return {'sub': value_to_json(v.node)}
    return {'ctor': v.ctor, 'args': [value_to_json(c) for c in v.children]}


def value_from_json(d):
    if 'ref' in d:
        a, i, j = d['ref']
        return TerminatorRef(a, i, j)
    if 'sub' in d:
        return SubtreeRef(value_from_json(d['sub']))
    return Term(d['ctor'], [value_from_json(c) for c in d['args']])


class Forest(_Denotation):
    """Packed derivations of one input: items, their edges and the cells they point into.

    JSON layout (stable field names)::

        {"input": [...], "start": "S",
         "nodes": [{"id", "nonterminal", "span", "top"}],
         "cells": [{"nonterminal", "span", "items"}],
         "edges": [{"node", "production", "children", "compat"}],
         "compat": [{"id", "values", "spans"}],
         "roots": [...]}

    A child is ``{"item": id}`` or ``{"cell": [B, p, q]}``; ``compat`` lists
    the entries witnessing that shared daughter subtrees can be equal.
    """

    def __init__(self, grammar, word, items, cells, edges, roots, compat=()):
        self.g = grammar
        self.word = tuple(word)
        self.items = items
        self.cells = cells
        self.edges = edges
        self.roots = list(roots)
        self.compat = list(compat)

    def _cell_tops(self, key):
        return [self.items[i].top for i in self.cells.get(key, ())]

    @classmethod
    def from_chart(cls, chart: Chart) -> 'Forest':
        roots = chart.goal_items()
        if not roots:
            raise NotAccepted('input is not accepted')
        items, cells, edges = {}, {}, {}
        todo = [e.id for e in roots]
        seen_cells = set()

        def visit_cell(key):
            if key in seen_cells:
                return
            seen_cells.add(key)
            cells[key] = [e.id for e in chart.cells.get(key, ())]
            todo.extend(cells[key])

        while todo:
            iid = todo.pop()
            if iid in items:
                continue
            item = chart.items[iid]
            items[iid] = item
            edges[iid] = chart.edges[iid]
            for r in refs_in(item.top):
                visit_cell(r.cell)
            for e in chart.edges[iid]:
                for c in e.children:
                    if isinstance(c, int):
                        todo.append(c)
                    else:
                        visit_cell(c)
                for _, vs in e.values:
                    for v in vs:
                        for r in refs_in(v):
                            visit_cell(r.cell)
        compat = []
        for iid in sorted(edges):
            for e in edges[iid]:
                lhs_vars = set(variables(chart.g.productions[e.production].pattern))
                for name, vs in e.values:
                    if name not in lhs_vars and len(set(vs)) > 1:
                        compat.append(tuple(sorted(set(vs), key=str)))
        compat = sorted(set(compat), key=str)
        return cls(chart.g, chart.word, items, cells, edges, [e.id for e in roots], compat)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        compat_ids = {vs: k for k, vs in enumerate(self.compat)}
        nodes = [{'id': i, 'nonterminal': it.nonterminal, 'span': list(it.span),
                  'top': value_to_json(it.top), 'text': str(it.top)}
                 for i, it in sorted(self.items.items())]
        cells = [{'nonterminal': a, 'span': [i, j], 'items': ids}
                 for (a, i, j), ids in sorted(self.cells.items())]
        edges = []
        for iid in sorted(self.edges):
            lhs_vars = None
            for e in self.edges[iid]:
                lhs_vars = set(variables(self.g.productions[e.production].pattern))
                used = [compat_ids[tuple(sorted(set(vs), key=str))] for name, vs in e.values
                        if name not in lhs_vars and len(set(vs)) > 1]
                edges.append({
                    'node': iid, 'production': e.production,
                    'children': [{'item': c} if isinstance(c, int) else {'cell': list(c)}
                                 for c in e.children],
                    'values': [[name, [value_to_json(v) for v in vs]] for name, vs in e.values],
                    'compat': used})
        compat = [{'id': k, 'values': [value_to_json(v) for v in vs],
                   'spans': sorted({list(r.cell).__repr__() for v in vs for r in refs_in(v)})}
                  for k, vs in enumerate(self.compat)]
        return {'input': list(self.word), 'start': self.g.start, 'nodes': nodes, 'cells': cells,
                'edges': edges, 'compat': compat, 'roots': self.roots}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, grammar: Grammar, doc) -> 'Forest':
        if isinstance(doc, str):
            doc = json.loads(doc)
        items = {n['id']: Item(n['id'], n['nonterminal'], tuple(n['span']), value_from_json(n['top']))
                 for n in doc['nodes']}
        cells = {(c['nonterminal'], *c['span']): list(c['items']) for c in doc['cells']}
        edges = {i: [] for i in items}
        for e in doc['edges']:
            children = tuple(c['item'] if 'item' in c else tuple(c['cell']) for c in e['children'])
            values = tuple((name, tuple(value_from_json(v) for v in vs)) for name, vs in e['values'])
            edges[e['node']].append(Edge(e['production'], children, values))
        compat = [tuple(value_from_json(v) for v in c['values']) for c in doc['compat']]
        return cls(grammar, doc['input'], items, cells, edges, doc['roots'], compat)

    # -- reading derivations ------------------------------------------------

    def derivations(self, limit: int = 10, budget: Optional[int] = None) -> list:
        """Up to ``limit`` complete derivations whose trees have at most ``budget`` nodes."""
        if budget is None:
            budget = self.g.default_bound(len(self.word))
        out, seen = [], set()
        for r in self.roots:
            for d in self._derive(self.items[r], NIL, budget, frozenset()):
                if d not in seen:
                    seen.add(d)
                    out.append(d)
                    if len(out) >= limit:
                        return out
        return out

    def _derive(self, item, t, budget, path):
        key = (item.nonterminal, t, item.span)
        if key in path or size(t) > budget or not self.member(t, item.top):
            return
        path = path | {key}
        for e in self.edges[item.id]:
            prod = self.g.productions[e.production]
            b = match_pattern(prod.pattern, t)
            if b is None:
                continue
            vals = e.value_map()
            if not all(self.member(b[v], vals[v][0]) for v in b):
                continue
            free = [v for v in vals if v not in b]
            choices = []
            for v in free:
                first, rest = vals[v][0], vals[v][1:]
                choices.append([tr for tr in self.trees(first, budget)
                                if all(self.member(tr, o) for o in rest)])
            for assignment in _product(choices):
                full = dict(b)
                full.update(zip(free, assignment))
                yield from self._fill(item, prod, e, full, 0, 0, (), budget, path)

    def _fill(self, item, prod, e, bindings, k, slot_no, done, budget, path):
        if k == len(prod.rhs):
            yield Derivation(item.nonterminal, instantiate(prod.pattern, bindings), item.span,
                             e.production, done)
            return
        x = prod.rhs[k]
        if not isinstance(x, Slot):
            yield from self._fill(item, prod, e, bindings, k + 1, slot_no, done + (x,), budget, path)
            return
        req = instantiate(x.pattern, bindings)
        child = e.children[slot_no]
        if isinstance(child, int):
            candidates = [self.items[child]]
        else:
            candidates = [self.items[i] for i in self.cells.get(child, ())]
        for c in candidates:
            for d in self._derive(c, req, budget, path):
                yield from self._fill(item, prod, e, bindings, k + 1, slot_no + 1, done + (d,),
                                      budget, path)


def _product(choices):
    if not choices:
        yield ()
        return
    for first in choices[0]:
        for rest in _product(choices[1:]):
            yield (first,) + rest


def build_forest(g: Grammar, word) -> Forest:
    """Packed forest of ``word``; raises :class:`NotAccepted` on rejection."""
    chart = Chart(g, word)
    if not chart.accepted:
        raise NotAccepted(chart.diagnostic or 'input is not accepted')
    return Forest.from_chart(chart)
