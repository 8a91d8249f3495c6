import json

import pytest

from plgram.chart import (Chart, Forest, NotAccepted, SubtreeRef, TerminatorRef, build_forest,
                          chart_stats, recognize, top_depth)
from plgram.constructions import builtin_grammar, builtin_grammars, example2, example5
from plgram.derivation import check_derivation
from plgram.grammar import InvalidGrammar, parse_grammar
from plgram.oracle import enumerate_derivations, oracle_items, oracle_recognize
from plgram.terms import NIL
from support import FIXTURES, all_strings, example5_bound, substitutions


def test_lambda_and_unknown_terminals():
    assert recognize(builtin_grammar('example2'), '')
    assert recognize(builtin_grammar('example5'), '')
    assert not recognize(builtin_grammar('example4'), '')
    c = Chart(builtin_grammar('example4'), 'abz')
    assert not c.accepted and 'z' in c.diagnostic


def test_invalid_grammar_is_refused():
    g = parse_grammar((FIXTURES / 'binary_tree.pltg').read_text())
    with pytest.raises(InvalidGrammar):
        Chart(g, 'a')


@pytest.mark.parametrize('name, good, bad', [
    ('example1', 'aabbbccddd', 'aabbbcccddd'),
    ('example2', 'abbaabba', 'abbaabab'),
    ('example3', 'aaabbbccc', 'aaabbccc'),
    ('example4', 'aaaabbbbcccc', 'aaaabbbbccc'),
    ('example5', '(()())(()())', '(()())(())()'),
])
def test_verdicts_on_longer_inputs(name, good, bad):
    g = builtin_grammar(name)
    assert recognize(g, good)
    assert not recognize(g, bad)


def test_stats_examples():
    s = chart_stats(builtin_grammar('example4'), 'abc')
    assert s['accepted'] and s['items'] >= 6
    assert chart_stats(builtin_grammar('example1'), '')['cells'] == 1
    assert chart_stats(example2(2), 'abab')['compat_entries'] >= 1


def test_stats_are_deterministic():
    g = builtin_grammar('example5')
    assert chart_stats(g, '(())()(())()') == chart_stats(g, '(())()(())()')


@pytest.mark.parametrize('name', ['example1', 'example2', 'example3', 'example4', 'example5'])
def test_tops_never_exceed_pattern_depth(name):
    g = builtin_grammar(name)
    w = {'example1': 'aabbbccddd', 'example2': 'abbabb', 'example3': 'aabbcc',
         'example4': 'aaabbbccc', 'example5': '(()())(()())'}[name]
    c = Chart(g, w)
    assert c.accepted
    assert max(top_depth(e.top) for e in c.items) <= g.max_depth


def _oracle_for(name, g, w):
    bound = example5_bound(len(w)) if name == 'example5' else None
    items = oracle_items(g, w, bound)
    return items, (bound or g.default_bound(len(w)))


@pytest.mark.parametrize('name, w', [('example1', 'aabccd'), ('example2', 'abab'),
                                     ('example3', 'aabbcc'), ('example4', 'aabbcc'),
                                     ('example5', '()()')])
def test_item_denotations_are_oracle_items(name, w):
    g = builtin_grammar(name)
    c = Chart(g, w)
    items, bound = _oracle_for(name, g, w)
    known = {(it.nonterminal, it.tree, it.yield_) for it in items}
    for e in c.items:
        i, j = e.span
        for t in c.trees(e.top, bound):
            assert (e.nonterminal, t, tuple(w[i:j])) in known


def test_substitution_swaps_example2():
    # a residue pointer into a cell can be redirected to any other entry there
    g = example2(2)
    w = 'abbabb'
    c = Chart(g, w)
    items, bound = _oracle_for('example2', g, w)
    known = {(it.nonterminal, it.tree, it.yield_) for it in items}
    swaps = 0
    for e in c.items:
        for ref, rebuild in substitutions(e.top):
            for other in c.cells[ref.cell]:
                swaps += 1
                for t in c.trees(rebuild(other.top), bound):
                    assert (e.nonterminal, t, tuple(w[e.span[0]:e.span[1]])) in known
    assert swaps > 0


def test_forest_json_roundtrip_and_derivations():
    g = builtin_grammar('example4')
    f = build_forest(g, 'aabbcc')
    doc = json.loads(f.dumps())
    assert {'input', 'start', 'nodes', 'cells', 'edges', 'compat', 'roots'} <= set(doc)
    assert {'id', 'nonterminal', 'span', 'top'} <= set(doc['nodes'][0])
    assert {'node', 'production', 'children', 'compat'} <= set(doc['edges'][0])
    f2 = Forest.from_json(g, doc)
    assert f2.to_json() == doc
    (d,) = f2.derivations()
    assert check_derivation(g, d, 'aabbcc') == []
    assert [d] == enumerate_derivations(g, 'aabbcc')


@pytest.mark.parametrize('name, w', [('example1', 'aabbccdd'), ('example2', 'abaaba'),
                                     ('example3', 'abc'), ('example5', '(())(())'),
                                     ('example2', '')])
def test_forest_derivations_match_oracle(name, w):
    g = builtin_grammar(name)
    budget = example5_bound(len(w)) if name == 'example5' else g.default_bound(len(w))
    ds = build_forest(g, w).derivations(limit=1000, budget=budget)
    assert ds and all(check_derivation(g, d, w) == [] for d in ds)
    assert set(ds) == set(enumerate_derivations(g, w, limit=1000, bound=budget))


def test_forest_of_rejected_input():
    with pytest.raises(NotAccepted):
        build_forest(builtin_grammar('example4'), 'aabbc')


def test_compat_records_in_forest():
    f = build_forest(example2(2), 'abab')
    doc = f.to_json()
    assert doc['compat'], 'the two A daughters share a stack'
    assert any(e['compat'] for e in doc['edges'])


def test_refs_render():
    assert str(TerminatorRef('A', 1, 3)) == '@A[1,3]'
    assert str(SubtreeRef(NIL)) == '&nil'


def test_unit_cycles_over_one_span_terminate():
    # A[f(x)] -> A[x] rewrites within one span; the language is a* c a*
    g = parse_grammar("formalism: pltg\nstart: S\nS[] -> A[?x] 'c' A[?x]\nA[f(?x)] -> A[?x]\n"
                      "A[f(?x)] -> 'a' A[?x]\nA[] ->\n")
    for w in all_strings('ac', 5):
        expected = w.count('c') == 1
        assert recognize(g, w) == expected
        assert bool(oracle_recognize(g, w)) == expected


def test_copy_count_changes_language():
    assert recognize(example5(3), '()()()')
    assert not recognize(example5(3), '()()')
