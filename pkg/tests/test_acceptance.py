"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
import json
import math
import random
import time
from contextlib import contextmanager

from plgram.chart import Chart, Forest, recognize
from plgram.constructions import (DYCK_CFG, builtin_grammar, builtin_grammars, example2, example3,
                                  example5, parse_cfg, plig_copy_from_regex, pltg_copy_from_cfg)
from plgram.derivation import check_derivation
from plgram.grammar import parse_grammar, serialize_grammar, validate_grammar
from plgram.oracle import enumerate_language, oracle_items, oracle_recognize
from support import (FIXTURES, all_strings, dyck_copy, dyck_copy_bound, in_example1, in_example4,
                     is_copy, substitutions)

RESULTS = {}


@contextmanager
def criterion(number, title):
    t0 = time.perf_counter()
    notes = []
    try:
        yield notes
    except BaseException:
        RESULTS[number] = 'criterion %d FAIL  %s (%.1f s)' % (number, title, time.perf_counter() - t0)
        raise
    extra = ('; ' + '; '.join(notes)) if notes else ''
    RESULTS[number] = 'criterion %d PASS  %s (%.1f s%s)' % (number, title, time.perf_counter() - t0, extra)


# grammar, alphabet, exhaustive length, oracle bound (None = default)
SWEEP = [
    ('example1', builtin_grammar('example1'), 'abcd', 8, None),
    ('example2', example2(2), 'ab', 10, None),
    ('example3', example3(3), 'abc', 10, None),
    ('example4', builtin_grammar('example4'), 'abc', 10, None),
    ('example5', example5(2), '()', 10, dyck_copy_bound(2)),
]


def test_1_constraint_fixtures():
    with criterion(1, 'validator fixtures') as notes:
        t0 = time.perf_counter()
        for name, g in builtin_grammars().items():
            assert validate_grammar(g).ok, name
        verdicts = {}
        for name in ['turing_move', 'binary_tree', 'local_tree']:
            g = parse_grammar((FIXTURES / (name + '.pltg')).read_text())
            got = [v.to_dict() for v in validate_grammar(g).violations]
            expected = json.loads((FIXTURES / (name + '.violations.json')).read_text())
            assert got == expected, name
            verdicts[name] = [v['rule'] for v in got]
        assert verdicts == {'turing_move': ['P3'], 'binary_tree': ['P3'], 'local_tree': []}
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0
        notes.append('%.3f s' % elapsed)


def test_2_oracle_equivalence_exhaustive():
    with criterion(2, 'chart = oracle on every string up to the stated length') as notes:
        rng = random.Random(2)
        t0 = time.perf_counter()
        for name, g, alphabet, max_len, bound in SWEEP:
            chart_yes = {w for w in all_strings(alphabet, max_len) if recognize(g, w)}
            if bound is None:
                # one batch closure per length is the oracle for every string of that length
                oracle_yes = set(enumerate_language(g, max_len))
                rejected = [w for w in all_strings(alphabet, max_len) if w not in oracle_yes]
                spot = sorted(oracle_yes) + rng.sample(rejected, min(300, len(rejected)))
                for w in spot:
                    assert bool(oracle_recognize(g, w)) == (w in oracle_yes), (name, w)
            else:
                oracle_yes = {w for w in all_strings(alphabet, max_len)
                              if oracle_recognize(g, w, bound=bound)}
            assert chart_yes == oracle_yes, (name, sorted(chart_yes ^ oracle_yes)[:5])
            total = sum(len(alphabet) ** n for n in range(max_len + 1))
            notes.append('%s %d strings, %d accepted' % (name, total, len(chart_yes)))
        assert time.perf_counter() - t0 < 600


def _sorted(strings):
    return sorted((tuple(s) for s in strings), key=lambda w: (len(w), w))


def test_3_language_identities():
    with criterion(3, 'enumerate_language closed forms'):
        assert enumerate_language(builtin_grammar('example1'), 8) == _sorted(
            ['abcd', 'aabccd', 'abbcdd', 'aaabcccd', 'aabbccdd', 'abbbcddd'])
        two = enumerate_language(example2(2), 6)
        assert two == _sorted({w + w for w in all_strings('ab', 3)}) and len(two) == 15
        assert enumerate_language(example3(3), 6) == _sorted(['', 'abc', 'aabbcc'])
        assert enumerate_language(builtin_grammar('example4'), 9) == _sorted(
            ['abc', 'aabbcc', 'aaabbbccc'])
        five = enumerate_language(example5(2), 8, bound=dyck_copy_bound(2))
        assert five == [w for w in all_strings('()', 8) if dyck_copy(2)(w)]
        assert [w for w in all_strings('abcd', 8) if in_example1(w)] == enumerate_language(
            builtin_grammar('example1'), 8)
        assert [w for w in all_strings('abc', 9) if in_example4(w)] == enumerate_language(
            builtin_grammar('example4'), 9)


def test_4_copy_constructions():
    with criterion(4, 'k-copy constructions vs direct checkers') as notes:
        regex = plig_copy_from_regex('(a|b)*', 2)
        cfg = pltg_copy_from_cfg(parse_cfg(DYCK_CFG), 2)
        assert validate_grammar(regex).ok and validate_grammar(cfg).ok
        any_word = lambda u: True
        bad = [w for w in all_strings('ab', 8) if recognize(regex, w) != is_copy(w, 2, any_word)]
        bad += [w for w in all_strings('()', 8) if recognize(cfg, w) != dyck_copy(2)(w)]
        assert bad == []
        assert set(enumerate_language(regex, 8)) == {w for w in all_strings('ab', 8)
                                                     if is_copy(w, 2, any_word)}
        notes.append('%d + %d strings' % (2 ** 9 - 1, 2 ** 9 - 1))


def _power_law(g, make, sizes):
    counts, seconds = [], []
    for n in sizes:
        t0 = time.perf_counter()
        c = Chart(g, make(n))
        seconds.append(time.perf_counter() - t0)
        assert c.accepted
        s = c.stats()
        counts.append(s['items'] + s['compat_entries'])
    ratios = [math.log2(b / a) for a, b in zip(counts, counts[1:])]
    return counts, ratios, seconds


def test_5_polynomial_scaling():
    with criterion(5, 'items + compat entries grow polynomially') as notes:
        sizes = [4, 8, 16, 32, 64]
        for name, g, make in [('example4', builtin_grammar('example4'), lambda n: 'a' * n + 'b' * n + 'c' * n),
                              ('example2', example2(2), lambda n: 'ab' * n + 'ab' * n)]:
            counts, ratios, seconds = _power_law(g, make, sizes)
            assert all(r <= 6 for r in ratios), (name, ratios)
            tail = ratios[-3:]
            assert max(tail) - min(tail) <= 1.0, (name, ratios)
            assert seconds[-1] < 60, (name, seconds)
            notes.append('%s counts %s log2 ratios %s, n=64 in %.1f s'
                         % (name, counts, [round(r, 2) for r in ratios], seconds[-1]))


def _pool():
    """All accepted inputs of length <= 8 for builtins and a few extra copy counts."""
    configs = [('example1', builtin_grammar('example1'), 'abcd', None),
               ('example2', example2(2), 'ab', None), ('example2:1', example2(1), 'ab', None),
               ('example2:3', example2(3), 'ab', None), ('example3', example3(3), 'abc', None),
               ('example3:1', example3(1), 'a', None), ('example3:2', example3(2), 'ab', None),
               ('example4', builtin_grammar('example4'), 'abc', None),
               ('example5', example5(2), '()', dyck_copy_bound(2))]
    pool = []
    for label, g, alphabet, bound in configs:
        if bound is None:
            accepted = enumerate_language(g, 8)
        else:
            accepted = [w for w in all_strings(alphabet, 8) if dyck_copy(2)(w)]
            assert all(oracle_recognize(g, w, bound=bound) for w in accepted)
        pool.append([(label, g, w, bound) for w in accepted])
    return pool


def _sample(pool, n, seed):
    """Round-robin over the grammars, random order within each."""
    rng = random.Random(seed)
    queues = [rng.sample(group, len(group)) for group in pool]
    out = []
    while len(out) < n and any(queues):
        for q in queues:
            if q and len(out) < n:
                out.append(q.pop())
    return out


def test_6_substitution_property():
    with criterion(6, 'redirecting any terminator pointer stays oracle-derivable') as notes:
        pool = _pool()
        sample = _sample(pool, 100, 6)
        assert len(sample) == 100
        checked = swaps = 0
        for label, g, w, bound in sample:
            b = bound(len(w)) if bound else g.default_bound(len(w))
            known = {(it.nonterminal, it.tree, it.yield_) for it in oracle_items(g, w, b)}
            chart = Chart(g, w)
            assert chart.accepted, (label, w)
            for item in chart.items:
                i, j = item.span
                piece = tuple(w[i:j])
                for t in chart.trees(item.top, b):
                    assert (item.nonterminal, t, piece) in known, (label, w, str(item), str(t))
                    checked += 1
                for ref, rebuild in substitutions(item.top):
                    for other in chart.cells[ref.cell]:
                        swaps += 1
                        for t in chart.trees(rebuild(other.top), b):
                            assert (item.nonterminal, t, piece) in known, (label, w, str(item), str(t))
                            checked += 1
        assert swaps > 0
        notes.append('pool %d, 100 inputs, %d swaps, %d expansions checked'
                     % (sum(map(len, pool)), swaps, checked))


def test_7_round_trips():
    with criterion(7, 'grammar text and forest JSON round-trips') as notes:
        grammars = list(builtin_grammars().values())
        grammars += [builtin_grammar('example2', 3), builtin_grammar('example3', 5),
                     builtin_grammar('example5', 3), plig_copy_from_regex('(a|b)*c', 2),
                     pltg_copy_from_cfg(DYCK_CFG, 2)]
        grammars += [parse_grammar(p.read_text()) for p in sorted(FIXTURES.glob('*.pltg'))]
        for g in grammars:
            text = serialize_grammar(g)
            h = parse_grammar(text)
            assert h == g and serialize_grammar(h) == text
        derivations = 0
        for label, g, w, bound in _sample(_pool(), 60, 7):
            b = bound(len(w)) if bound else g.default_bound(len(w))
            f = Forest.from_chart(Chart(g, w))
            f2 = Forest.from_json(g, json.loads(json.dumps(f.to_json())))
            assert f2.to_json() == f.to_json()
            ds = f2.derivations(limit=50, budget=b)
            assert ds, (label, w)
            for d in ds:
                assert check_derivation(g, d, w) == [], (label, w)
            derivations += len(ds)
        notes.append('%d grammars, 60 forests, %d derivations re-checked' % (len(grammars), derivations))


if __name__ == '__main__':
    import sys
    sys.setrecursionlimit(20000)
    for name, fn in sorted(globals().items()):
        if name.startswith('test_') and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
    for key in sorted(RESULTS):
        print(RESULTS[key])
