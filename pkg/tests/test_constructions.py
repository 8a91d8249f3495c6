import pytest

from plgram.chart import recognize
from plgram.constructions import (DYCK_CFG, builtin_grammar, builtin_grammars, counting_letters,
                                  example2, example3, parse_cfg, parse_regex,
                                  plig_copy_from_regex, pltg_copy_from_cfg, regex_to_dfa)
from plgram.grammar import GrammarSyntaxError, classify_grammar, validate_grammar
from plgram.oracle import enumerate_language, oracle_recognize
from support import all_strings, counting, dyck_copy, is_copy


def test_builtin_production_counts():
    counts = {n: len(g.productions) for n, g in builtin_grammars().items()}
    assert counts['example1'] == 8
    assert counts['example4'] == 9


def test_unknown_builtin_and_bad_k():
    with pytest.raises(KeyError):
        builtin_grammar('example9')
    with pytest.raises(ValueError):
        example2(0)


def test_example3_k1_is_a_star():
    g = example3(1)
    assert enumerate_language(g, 4) == [tuple('a' * n) for n in range(5)]


@pytest.mark.parametrize('k', [2, 3, 4])
def test_example3_balanced_and_unbalanced(k):
    g = example3(k)
    letters = counting_letters(k)
    for n in range(5):
        assert recognize(g, ''.join(a * n for a in letters))
    for n in range(1, 4):
        for drop in range(k):
            w = ''.join(a * (n - (i == drop)) for i, a in enumerate(letters))
            assert not recognize(g, w)


def test_builtin_k_examples():
    assert recognize(builtin_grammar('example5', 2), '')


def test_regex_parsing_and_dfa():
    assert parse_regex('ab*').op == 'cat'
    assert parse_regex('()').op == 'eps'
    dfa = regex_to_dfa(parse_regex('(a|b)*c'))
    assert dfa.accepts('abac') and not dfa.accepts('abca')
    for bad in ['(a', 'a)', '*a', 'a b']:
        with pytest.raises(ValueError):
            parse_regex(bad)


def test_regex_copy_ab_star():
    g = plig_copy_from_regex(parse_regex('ab*'), 2)
    assert validate_grammar(g).ok
    # w = a is in ab*, so aa belongs to the copy language too
    expected = [w for w in all_strings('ab', 8)
                if is_copy(w, 2, lambda u: bool(u) and u[0] == 'a' and set(u[1:]) <= {'b'})]
    assert expected == [tuple(s) for s in ('aa', 'abab', 'abbabb', 'abbbabbb')]
    assert enumerate_language(g, 8) == expected


def test_regex_copy_singleton():
    g = plig_copy_from_regex('a', 3)
    assert enumerate_language(g, 6) == [tuple('aaa')]


def test_regex_copy_matches_example2_language():
    g = plig_copy_from_regex('(a|b)*', 2)
    assert classify_grammar(g) == 'plig'
    assert enumerate_language(g, 6) == enumerate_language(example2(2), 6)


def test_regex_copy_with_punctuation_symbols():
    g = plig_copy_from_regex('(+|-)*', 2)
    assert recognize(g, '+-+-') and not recognize(g, '+--+')


def test_cfg_parsing():
    c = parse_cfg(DYCK_CFG)
    assert c.start == 'D' and len(c.rules) == 2
    with pytest.raises(GrammarSyntaxError):
        parse_cfg('X -> a')
    with pytest.raises(ValueError):
        parse_cfg('start: X\nX -> Y')


def test_cfg_copy_dyck_examples():
    g = pltg_copy_from_cfg(parse_cfg(DYCK_CFG), 2)
    assert classify_grammar(g) == 'pltg'
    assert recognize(g, '()()') and recognize(g, '(())(())')
    assert not recognize(g, '(()(')


def test_cfg_copy_k1_is_the_cfg():
    g = pltg_copy_from_cfg(parse_cfg("start: X\nX -> 'a'\n"), 1)
    assert enumerate_language(g, 3) == [('a',)]


def test_cfg_copy_agrees_with_oracle_on_short_strings():
    g = pltg_copy_from_cfg(parse_cfg("start: X\nX -> 'a' X 'b'\nX -> 'c'\n"), 2)
    for w in all_strings('abc', 6):
        expected = is_copy(w, 2, lambda u: len(u) % 2 == 1 and u == ('a',) * (len(u) // 2)
                           + ('c',) + ('b',) * (len(u) // 2))
        assert recognize(g, w) == expected == bool(oracle_recognize(g, w))


@pytest.mark.parametrize('k', [1, 3])
def test_dyck_copies_other_k(k):
    g = pltg_copy_from_cfg(DYCK_CFG, k)
    check = dyck_copy(k)
    for w in all_strings('()', 6):
        assert recognize(g, w) == check(w)


def test_counting_checker_sanity():
    assert counting(3, 'abc')(tuple('aabbcc'))
    assert not counting(3, 'abc')(tuple('abcc'))
