# Copy languages: the same string k times, checked by one shared stack or tree.
from plgram import (builtin_grammar, enumerate_language, example2, parse_cfg, DYCK_CFG,
                    plig_copy_from_regex, pltg_copy_from_cfg, recognize, serialize_grammar)

g = example2(2)                    # S[] -> A[?x] A[?x], both copies read the same stack
print(serialize_grammar(g))

for w in enumerate_language(g, 6):
    print(repr(''.join(w)))         # lambda, aa, bb, abab, ... 15 strings in all

print(recognize(g, 'abbabb'), recognize(g, 'abbab'))   # True False

# three copies of anything in ab*
r = plig_copy_from_regex('ab*', 3)
print([''.join(w) for w in enumerate_language(r, 9)])  # aaa, ababab, abbabbabb

# stacks cannot copy a Dyck word; trees can (the shared tree is its derivation)
d = pltg_copy_from_cfg(parse_cfg(DYCK_CFG), 2)
for w in ['()()', '(())(())', '(()())(()())', '(())()']:
    print(w, recognize(d, w))

e5 = builtin_grammar('example5')   # the same language written by hand
print(all(recognize(e5, w) == recognize(d, w) for w in ['', '()()', '()(())', '(()())(()())']))
