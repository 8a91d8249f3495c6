# Inside the chart: items keep bounded tops with pointers instead of whole trees.
import json

from plgram import Chart, builtin_grammar, build_forest, example2, oracle_recognize

g = builtin_grammar('example4')    # a^n b^n c^n, with the count held in a shared tree
c = Chart(g, 'aabbcc')
for item in c.items:
    print(item)                     # e.g. S2[sigma(@B[2,4],@S3[4,6])] [2, 6]; @ points into a cell

print(c.stats()['items'], c.stats()['compat_entries'])

# the same verdicts as the brute-force oracle, which stores every tree in full
for w in ['abc', 'aabbcc', 'aabbc', 'abcabc']:
    print(w, Chart(g, w).accepted, bool(oracle_recognize(g, w)))

# a packed forest, and the derivation read back from its JSON
f = build_forest(g, 'aabbcc')
doc = json.loads(f.dumps())
print(len(doc['nodes']), 'nodes', len(doc['edges']), 'edges')
print(f.derivations()[0].pretty())

# counts grow like a polynomial: doubling n roughly quadruples the items here
h = example2(2)
for n in [4, 8, 16, 32]:
    s = Chart(h, 'ab' * n * 2).stats()
    print(n, s['items'], s['compat_entries'])
