"""Command-line interface.

Grammar arguments are file paths or ``builtin:NAME`` / ``builtin:NAME:K``.
Exit codes: 0 accept/valid/success, 1 reject/invalid, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from plgram.bench import run_bench
from plgram.chart import Chart, Forest
from plgram.constructions import (BUILTINS, DYCK_CFG, builtin_grammar, parse_cfg, parse_regex,
                                  plig_copy_from_regex, pltg_copy_from_cfg)
from plgram.grammar import (ArityError, GrammarError, InvalidGrammar, classify_grammar,
                            parse_grammar, serialize_grammar, validate_grammar)
from plgram.oracle import enumerate_language, oracle_recognize

OK, NO, USAGE = 0, 1, 2


class CliError(Exception):
    """Usage or I/O problem; reported on stderr with exit code 2."""


def load_grammar(spec: str):
    """Returns (label, grammar, builtin name or None)."""
    if spec.startswith('builtin:'):
        parts = spec.split(':')
        name = parts[1]
        if name not in BUILTINS or len(parts) > 3:
            raise CliError('unknown builtin %r (have %s)' % (spec, ', '.join(BUILTINS)))
        k = None
        if len(parts) == 3:
            try:
                k = int(parts[2])
            except ValueError:
                raise CliError('bad copy count in %r' % spec) from None
        try:
            return spec, builtin_grammar(name, k), name
        except ValueError as e:
            raise CliError(str(e)) from None
    try:
        with open(spec, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise CliError('cannot read %s: %s' % (spec, e.strerror)) from None
    return spec, parse_grammar(text), None


def split_input(text: str, chars: bool) -> tuple:
    if chars:
        return tuple(ch for ch in text if not ch.isspace())
    return tuple(text.split())


def join_word(word) -> str:
    if all(len(a) == 1 for a in word):
        return ''.join(word)
    return ' '.join(word)


def _write(path: str, text: str):
    try:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
    except OSError as e:
        raise CliError('cannot write %s: %s' % (path, e.strerror)) from None


def cmd_validate(args, out, err):
    try:
        _, g, _ = load_grammar(args.grammar)
    except ArityError as e:
        print('invalid: %s' % e, file=out)
        return NO
    report = validate_grammar(g)
    if args.json:
        print(json.dumps([v.to_dict() for v in report.violations], indent=1), file=out)
    else:
        print(report.format() if not report.ok else 'valid', file=out)
    return OK if report.ok else NO


def cmd_classify(args, out, err):
    _, g, _ = load_grammar(args.grammar)
    print(classify_grammar(g), file=out)
    return OK


def cmd_recognize(args, out, err):
    _, g, _ = load_grammar(args.grammar)
    chart = Chart(g, split_input(args.input, args.chars))
    print('accept' if chart.accepted else 'reject', file=out)
    if chart.diagnostic:
        print(chart.diagnostic, file=err)
    if args.stats:
        print(json.dumps(chart.stats(), indent=1, sort_keys=True), file=out)
    return OK if chart.accepted else NO


def cmd_parse(args, out, err):
    _, g, _ = load_grammar(args.grammar)
    chart = Chart(g, split_input(args.input, args.chars))
    if not chart.accepted:
        print('reject', file=out)
        if chart.diagnostic:
            print(chart.diagnostic, file=err)
        return NO
    forest = Forest.from_chart(chart)
    _write(args.forest, forest.dumps() + '\n')
    print('accept: %d nodes, %d edges written to %s'
          % (len(forest.items), sum(len(e) for e in forest.edges.values()), args.forest), file=out)
    if args.show:
        for d in forest.derivations(limit=args.show):
            print(d.pretty(), file=out)
    return OK


def cmd_generate(args, out, err):
    _, g, _ = load_grammar(args.grammar)
    for w in enumerate_language(g, args.max_len, bound=args.bound):
        print(join_word(w), file=out)
    return OK


def cmd_oracle(args, out, err):
    _, g, _ = load_grammar(args.grammar)
    verdict = oracle_recognize(g, split_input(args.input, args.chars), bound=args.bound)
    print(verdict, file=out)
    return OK if verdict.accepted else NO


def cmd_copy_grammar(args, out, err):
    if args.k < 1:
        raise CliError('-k must be at least 1')
    if args.regex is not None:
        try:
            g = plig_copy_from_regex(parse_regex(args.regex), args.k)
        except ValueError as e:
            raise CliError('bad regex: %s' % e) from None
    else:
        if args.cfg == 'builtin:dyck':
            text = DYCK_CFG
        else:
            try:
                with open(args.cfg, encoding='utf-8') as fh:
                    text = fh.read()
            except OSError as e:
                raise CliError('cannot read %s: %s' % (args.cfg, e.strerror)) from None
        try:
            g = pltg_copy_from_cfg(parse_cfg(text), args.k)
        except ValueError as e:
            raise CliError('bad grammar %s: %s' % (args.cfg, e)) from None
    _write(args.output, serialize_grammar(g))
    print('wrote %s (%d productions)' % (args.output, len(g.productions)), file=out)
    return OK


def cmd_bench(args, out, err):
    label, g, name = load_grammar(args.grammar)
    try:
        lengths = [int(x) for x in args.lengths.split(',') if x.strip()]
    except ValueError:
        raise CliError('--lengths wants comma-separated integers') from None
    if not lengths or min(lengths) < 0:
        raise CliError('--lengths wants non-negative integers')
    report = run_bench(label, g, lengths, reps=args.reps, builtin=name)
    text = report.to_csv()
    if args.csv == '-':
        out.write(text)
    else:
        _write(args.csv, text)
        print('wrote %d rows to %s' % (len(report.rows), args.csv), file=out)
    return OK


def cmd_builtin(args, out, err):
    if args.name not in BUILTINS:
        raise CliError('unknown builtin %r (have %s)' % (args.name, ', '.join(BUILTINS)))
    try:
        g = builtin_grammar(args.name, args.k)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(args.output, serialize_grammar(g))
    print('wrote %s' % args.output, file=out)
    return OK


def _bound(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('bound must be at least 1')
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='plgram', description='Partially linear indexed and tree grammars.')
    sub = p.add_subparsers(dest='command', metavar='command')
    sub.required = True

    s = sub.add_parser('validate', help='check the partial-linearity constraints')
    s.add_argument('grammar')
    s.add_argument('--json', action='store_true', help='print violation records as JSON')
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser('classify', help='print cfg, lig, plig or pltg')
    s.add_argument('grammar')
    s.set_defaults(func=cmd_classify)

    for name, func, help_ in (('recognize', cmd_recognize, 'chart recognition'),
                              ('parse', cmd_parse, 'chart recognition with a packed forest')):
        s = sub.add_parser(name, help=help_)
        s.add_argument('grammar')
        s.add_argument('input', help='whitespace-separated terminals')
        s.add_argument('--chars', action='store_true', help='one terminal per character')
        if name == 'recognize':
            s.add_argument('--stats', action='store_true', help='print chart counters')
        else:
            s.add_argument('--forest', required=True, metavar='OUT', help='JSON output path')
            s.add_argument('--show', type=int, default=0, metavar='N', help='print N derivations')
        s.set_defaults(func=func)

    s = sub.add_parser('generate', help='list the language up to a length')
    s.add_argument('grammar')
    s.add_argument('--max-len', type=int, required=True)
    s.add_argument('--bound', type=_bound, default=None, help='tree size bound for every length')
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser('oracle', help='brute-force bounded recognition')
    s.add_argument('grammar')
    s.add_argument('input')
    s.add_argument('--chars', action='store_true')
    s.add_argument('--bound', type=_bound, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser('copy-grammar', help='build a k-copy grammar')
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument('--regex', help="regular expression, e.g. '(a|b)*'")
    src.add_argument('--cfg', help='context-free grammar file, or builtin:dyck')
    s.add_argument('-k', type=int, required=True)
    s.add_argument('-o', '--output', required=True)
    s.set_defaults(func=cmd_copy_grammar)

    s = sub.add_parser('bench', help='time the chart recognizer')
    s.add_argument('grammar')
    s.add_argument('--lengths', required=True, help='comma-separated input lengths')
    s.add_argument('--csv', required=True, metavar='OUT', help="CSV path, or '-' for stdout")
    s.add_argument('--reps', type=int, default=3)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser('builtin', help='write one of the built-in grammars')
    s.add_argument('name')
    s.add_argument('-k', type=int, default=None)
    s.add_argument('-o', '--output', required=True)
    s.set_defaults(func=cmd_builtin)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args, out, err)
    except CliError as e:
        print('plgram: %s' % e, file=err)
        return USAGE
    except InvalidGrammar as e:
        print('plgram: grammar is not partially linear:\n%s' % e.report.format(), file=err)
        return NO
    except GrammarError as e:
        print('plgram: %s' % e, file=err)
        return USAGE
    except KeyboardInterrupt:
        return USAGE


if __name__ == '__main__':
    sys.exit(main())
