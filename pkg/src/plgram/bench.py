"""Timing harness: chart recognition cost against input length."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from math import ceil
from typing import Optional

from plgram.chart import Chart
from plgram.grammar import Grammar
from plgram.oracle import enumerate_language

COLUMNS = ('grammar', 'length', 'accept', 'time_ms', 'items', 'compat_entries')


@dataclass(frozen=True)
class BenchRow:
    grammar: str
    length: int
    accept: bool
    time_ms: float
    items: int
    compat_entries: int


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def sorted(self) -> 'BenchReport':
        return BenchReport(sorted(self.rows, key=lambda r: (r.grammar, r.length, not r.accept)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator='\n')
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([r.grammar, r.length, 'true' if r.accept else 'false',
                        '%.3f' % r.time_ms, r.items, r.compat_entries])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> 'BenchReport':
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError('unexpected CSV header %r' % (reader.fieldnames,))
        rows = [BenchRow(d['grammar'], int(d['length']), d['accept'] == 'true',
                         float(d['time_ms']), int(d['items']), int(d['compat_entries']))
                for d in reader]
        return cls(rows)


def _letters(g):
    return sorted(g.terminals)


def builtin_sample(name: str, g: Grammar, length: int, k: Optional[int] = None) -> tuple:
    """Shortest member of a builtin language with at least ``length`` symbols."""
    if name == 'example1':
        total = max(2, ceil(length / 2))
        n = (total + 1) // 2
        m = total - n
        return tuple('a' * n + 'b' * m + 'c' * n + 'd' * m)
    if name == 'example4':
        n = max(1, ceil(length / 3))
        return tuple('a' * n + 'b' * n + 'c' * n)
    copies = _copies(g)
    if name == 'example3':
        n = ceil(length / copies)
        return tuple(''.join(a * n for a in _letters(g)))
    if name == 'example2':
        w = ('ab' * length)[:ceil(length / copies)]
        return tuple(w * copies)
    if name == 'example5':
        half = ceil(length / (2 * copies))
        return tuple('()' * half * copies)
    raise KeyError(name)


def _copies(g: Grammar) -> int:
    return max(len(p.rhs) for p in g.productions if p.lhs == g.start)


def enumerated_sample(g: Grammar, length: int, slack: int = 8) -> Optional[tuple]:
    """Shortest enumerated string of at least ``length`` symbols, or None."""
    for w in enumerate_language(g, length + slack, bound=None):
        if len(w) >= length:
            return w
    return None


def corrupt(word: tuple, alphabet) -> Optional[tuple]:
    """Replace the last symbol by the first other symbol of the alphabet."""
    if not word:
        return None
    others = [a for a in sorted(alphabet) if a != word[-1]]
    if not others:
        return None
    return word[:-1] + (others[0],)


def time_run(g: Grammar, word, reps: int = 3) -> BenchRow:
    times, chart = [], None
    for _ in range(max(1, reps)):
        t0 = time.perf_counter()
        chart = Chart(g, word)
        times.append((time.perf_counter() - t0) * 1000.0)
    s = chart.stats()
    return BenchRow('', len(word), chart.accepted, statistics.median(times), s['items'],
                    s['compat_entries'])


def run_bench(label: str, g: Grammar, lengths, reps: int = 3, builtin: Optional[str] = None,
              rejects: bool = True) -> BenchReport:
    rows = []
    for length in lengths:
        if builtin is not None:
            word = builtin_sample(builtin, g, length)
        else:
            word = enumerated_sample(g, length)
            if word is None:
                continue
        inputs = [word]
        bad = corrupt(word, g.terminals) if rejects else None
        if bad is not None:
            inputs.append(bad)
        for w in inputs:
            r = time_run(g, w, reps)
            rows.append(BenchRow(label, r.length, r.accept, r.time_ms, r.items, r.compat_entries))
    return BenchReport(rows).sorted()
