import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get('test_acceptance')
    results = getattr(mod, 'RESULTS', None)
    if not results:
        return
    terminalreporter.section('acceptance criteria')
    for key in sorted(results):
        terminalreporter.write_line(results[key])
