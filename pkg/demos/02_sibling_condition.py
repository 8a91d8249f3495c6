# Which productions count as partially linear, and why the others do not.
from pathlib import Path

from plgram import classify_grammar, parse_grammar, validate_grammar

fixtures = Path(__file__).resolve().parent.parent / 'tests' / 'fixtures'

for name in ['local_tree', 'binary_tree', 'turing_move']:
    g = parse_grammar((fixtures / (name + '.pltg')).read_text())
    report = validate_grammar(g)
    print(name, 'ok' if report.ok else 'rejected')
    for v in report.violations:
        print('   ', v.rule, v.variables, 'at', v.paths, 'daughters', v.slots)

# local_tree: ?x1 ?x2 ?x3 go to B and D, which share ?x5; they hang under one node, fine.
# binary_tree: ?x ?y ?xp ?yp sit under two different nodes and reach four daughters sharing ?z.
# turing_move: one daughter gets ?x and ?y from different depths; a daughter shares with itself.

# small hand-made cases
for text in ["A[f(?x,?y)] -> A[g(?x,?z)] A[g(?y,?z)]",   # siblings: allowed
             "A[f(?x)] -> A[?x] A[?x]",                  # mother subtree copied: P1
             "A[f(?x,?y)] -> A[?x]"]:                    # ?y dropped: P4
    g = parse_grammar('formalism: pltg\nstart: A\n' + text + '\nA[] ->\n')
    print(text, '->', [v.rule for v in validate_grammar(g).violations] or classify_grammar(g))
