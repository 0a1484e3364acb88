'''
Command-line interface.

    nfold eigensystem --n 2 --count 5
    nfold charpoly --n 3 --format text
    nfold epsilon --terms 20
    nfold differentiate --n 1 --count 25 --signal ramp --cutoff 25
    nfold verify
    nfold plotdata --n 2 --count 5 --output efs2.csv
    nfold rootsums --n 8
    nfold --config alt-data.yml

Reals are written as decimal strings. Exit codes: 0 success, 1 failed
verification or other error, 2 numerical failure, 3 invalid configuration.
Errors are reported on stderr as JSON.
'''

from argparse import ArgumentParser, Namespace
from collections.abc import Callable, Sequence
from contextlib import contextmanager
import io
import json
import logging
import sys
from typing import Any, TextIO

import pandas as pd
from rich.console import Console
from rich.logging import RichHandler

from nfold.char_equation import build_char_equation, emit_equation
from nfold.config import COMMANDS, RunConfig, run_config
from nfold.cutoff import (
    DataFunction, add_noise, choose_N_discrepancy, cutoff_solve, discrepancy, reconstruction_error,
    synthetic_problem,
)
from nfold.data_tables import SampleTable
from nfold.eigen_solver import SingularRecord, check_asymptotics, singular_values
from nfold.eigenfunctions import singular_system
from nfold.epsilon_series import check_epsilon_bounds, compute_a_coefficients
from nfold.errors import NfoldError
from nfold.numerics import PrecisionContext
from nfold.rich_tables import (
    asymptotic_table, check_table, coefficients_table, epsilon_table, gamma_table, records_table,
    tuple_table,
)
from nfold.unity import subset_sums
from nfold.utils import console, decimal_string
from nfold.verify import default_suite, run_suite

logger = logging.getLogger(__name__)

OUTPUT_WIDTH = 200


def setup_logging(verbose: int = 0, quiet: bool = False) -> None:
    '''
    Send the package's log records to the stderr console through rich.
    '''
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    package = logging.getLogger('nfold')
    package.handlers = [RichHandler(console=console, show_path=False, markup=False)]
    package.setLevel(level)
    package.propagate = False


@contextmanager
def _output(config: RunConfig):
    if config.output is None:
        yield sys.stdout
    else:
        with config.output.open('w', newline='') as f:
            yield f


def _write_text(config: RunConfig, text: str) -> None:
    with _output(config) as out:
        out.write(text if text.endswith('\n') else text + '\n')


def _write_json(config: RunConfig, data: Any) -> None:
    _write_text(config, json.dumps(data, indent=2))


def _write_csv(config: RunConfig, df: pd.DataFrame) -> None:
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, lineterminator='\n')
    _write_text(config, buffer.getvalue())


def _write_rich(config: RunConfig, *renderables: Any) -> None:
    with _output(config) as out:
        target = Console(file=out, width=OUTPUT_WIDTH)
        for r in renderables:
            target.print(r)


def _context(config: RunConfig) -> PrecisionContext:
    return PrecisionContext(config.precision_bits)


def record_json(record: SingularRecord, digits: int) -> dict[str, Any]:
    return {
        'i': record.i,
        'z': decimal_string(record.z, digits),
        'lambda': decimal_string(record.lam, digits),
        'sigma': decimal_string(record.sigma, digits),
        'zeta': decimal_string(record.zeta, digits),
        'epsilon': decimal_string(record.epsilon, digits),
    }


def parse_records(text: str, ctx: PrecisionContext) -> list[SingularRecord]:
    '''
    Read back the records of `eigensystem` JSON output.
    '''
    try:
        data = json.loads(text)
        n = data['n']
        return [SingularRecord(n, r['i'], ctx.mpf(r['z']), ctx.mpf(r['lambda']), ctx.mpf(r['sigma']),
                               ctx.mpf(r['zeta']), ctx.mpf(r['epsilon']))
                for r in data['records']]
    except (KeyError, TypeError, json.JSONDecodeError) as ex:
        raise ValueError(f'Invalid eigensystem document: {ex}') from ex


def cmd_eigensystem(config: RunConfig) -> int:
    '''
    Singular values and coefficient vectors of J^n.
    '''
    ctx = _context(config)
    digits = config.output_digits
    records = singular_values(config.n, config.count, ctx)
    triples = singular_system(config.n, config.count, ctx, config.convention, records)
    report = check_asymptotics(records)
    match config.format:
        case 'json':
            _write_json(config, {
                'n': config.n,
                'precision_bits': ctx.bits,
                'convention': config.convention,
                'records': [record_json(t.record, digits)
                            | {'gamma': [decimal_string(g, digits) for g in t.u.gamma]}
                            for t in triples],
                'asymptotics': {
                    'passed': report.passed,
                    'decay_exponent': None if report.decay_exponent is None
                    else decimal_string(report.decay_exponent, 6),
                },
            })
        case 'csv':
            df = records_table(records, digits).to_dataframe()
            gammas = pd.DataFrame([[decimal_string(g, digits) for g in t.u.gamma] for t in triples],
                                  columns=[f'gamma_{k + 1}' for k in range(2 * config.n)])
            _write_csv(config, pd.concat([df, gammas], axis=1))
        case 'text':
            _write_rich(config, records_table(records, min(digits, 30)),
                        gamma_table([t.u for t in triples]), asymptotic_table(report))
    return 0


def cmd_charpoly(config: RunConfig) -> int:
    '''
    The characteristic equation F_n.
    '''
    ctx = _context(config)
    F = build_char_equation(config.n, ctx)
    digits = config.output_digits
    match config.format:
        case 'json':
            _write_text(config, emit_equation(F, 'json', digits))
        case 'text':
            _write_text(config, emit_equation(F, 'text', digits))
        case 'csv':
            _write_csv(config, tuple_table(((t.coeff, t.alpha, t.beta) for t in F.terms),
                                           labels=['coeff', 'alpha', 'beta'],
                                           formats=[str(digits)] * 3).to_dataframe())
    return 0


def cmd_epsilon(config: RunConfig) -> int:
    '''
    Exact coefficients of the ε-series for n = 2.
    '''
    series = compute_a_coefficients(config.terms, config.strategy)
    match config.format:
        case 'json':
            _write_json(config, {
                'K': series.K,
                'strategy': config.strategy,
                'coefficients': [str(a) for a in series.coefficients],
            })
        case 'csv':
            _write_csv(config, coefficients_table(series).to_dataframe())
        case 'text':
            ctx = _context(config)
            report = check_epsilon_bounds(singular_values(2, config.count, ctx), ctx)
            _write_rich(config, coefficients_table(series), epsilon_table(report))
    return 0


def _problem(config: RunConfig, ctx: PrecisionContext,
             system: Sequence[Any]) -> tuple[DataFunction|None, DataFunction]:
    if config.input is not None:
        table = SampleTable.from_csv(config.input, config.column)
        return None, DataFunction.from_table(table, ctx)
    return synthetic_problem(config.signal, config.n, ctx, system)


def cmd_differentiate(config: RunConfig) -> int:
    '''
    Spectral cut-off reconstruction of x from J^n x = y^δ.
    '''
    ctx = _context(config)
    digits = config.output_digits
    system = singular_system(config.n, config.count, ctx, config.convention)
    truth, y = _problem(config, ctx, system)
    delta = ctx.mpf(config.delta)
    y_delta = add_noise(y, delta, config.seed)
    if config.cutoff == 'auto':
        N = choose_N_discrepancy(y_delta, delta, ctx.mpf(config.tau), config.n, system, ctx)
    else:
        N = config.cutoff
    solution = cutoff_solve(y_delta, config.n, N, system, ctx)
    residual = discrepancy(solution, y_delta, ctx)
    error = None if truth is None else reconstruction_error(solution, truth, ctx)
    report = {
        'n': config.n,
        'N': N,
        'cutoff': 'discrepancy' if config.cutoff == 'auto' else 'fixed',
        'delta': decimal_string(delta, digits),
        'tau': config.tau,
        'seed': config.seed,
        'discrepancy': decimal_string(residual, digits),
        'l2_error_if_truth_known': None if error is None else decimal_string(error, digits),
    }
    match config.format:
        case 'json':
            _write_json(config, report)
        case 'csv':
            grid = [ctx.mpf(k) / (config.points - 1) for k in range(config.points)]
            _write_csv(config, pd.DataFrame({
                't': [decimal_string(t, digits) for t in grid],
                'x': [decimal_string(solution(t), digits) for t in grid],
            }))
        case 'text':
            _write_rich(config, tuple_table(((k, v if v is not None else '--') for k, v in report.items()),
                                            labels=['field', 'value'], formats=['', ''],
                                            title='Spectral cut-off'))
    return 0


def cmd_verify(config: RunConfig) -> int:
    '''
    Run the verification suite; exit status 1 if any check fails.
    '''
    ctx = _context(config)
    report = run_suite(default_suite(config.inject_failure), ctx)
    match config.format:
        case 'json':
            _write_json(config, {
                'passed': report.passed,
                'precision_bits': ctx.bits,
                'checks': [{'name': r.name, 'description': r.description, 'passed': r.passed,
                            'seconds': round(r.seconds, 3), 'detail': r.detail}
                           for r in report.results],
            })
        case 'csv':
            _write_csv(config, check_table(report.results).to_dataframe())
        case 'text':
            _write_rich(config, check_table(report.results))
    return 0 if report.passed else 1


def cmd_plotdata(config: RunConfig) -> int:
    '''
    u_1..u_N on a uniform grid, header `t,u_1,...,u_N`.
    '''
    ctx = _context(config)
    digits = min(config.output_digits, 20)
    triples = singular_system(config.n, config.count, ctx, config.convention)
    grid = [ctx.mpf(k) / (config.points - 1) for k in range(config.points)]
    columns = {'t': [decimal_string(t, digits) for t in grid]}
    for t in triples:
        columns[f'u_{t.record.i}'] = [decimal_string(t.u(x), digits) for x in grid]
    df = pd.DataFrame(columns)
    match config.format:
        case 'json':
            _write_json(config, {'n': config.n, 'columns': columns})
        case _:
            _write_csv(config, df)
    return 0


def cmd_rootsums(config: RunConfig) -> int:
    '''
    The distinct subset sums of the unity roots, with multiplicities.
    '''
    ctx = _context(config)
    digits = min(config.output_digits, 20)
    table = tuple_table(subset_sums(config.n, ctx), labels=['alpha', 'beta', 'count'],
                        formats=[str(digits), str(digits), ''])
    match config.format:
        case 'json':
            _write_json(config, {'n': config.n,
                                 'sums': [{'alpha': a, 'beta': b, 'count': int(c)}
                                          for a, b, c in table.to_dataframe().itertuples(index=False)]})
        case 'csv':
            _write_csv(config, table.to_dataframe())
        case 'text':
            _write_rich(config, table)
    return 0


COMMAND_HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    'eigensystem': cmd_eigensystem,
    'charpoly': cmd_charpoly,
    'epsilon': cmd_epsilon,
    'differentiate': cmd_differentiate,
    'verify': cmd_verify,
    'plotdata': cmd_plotdata,
    'rootsums': cmd_rootsums,
}


def _add_run_options(parser: ArgumentParser) -> None:
    parser.add_argument('--n', type=int, help='order of the integration operator')
    parser.add_argument('--count', type=int, help='number of singular values / triples')
    parser.add_argument('--precision', dest='precision_bits', type=int, help='working precision in bits')
    parser.add_argument('--output', '-o', help='output file (default: stdout)')
    parser.add_argument('--format', choices=['json', 'csv', 'text'])
    parser.add_argument('--digits', type=int, help='significant digits of written reals')
    parser.add_argument('--convention', choices=['unit-l2-norm', 'last-coefficient-one'])
    parser.add_argument('--terms', type=int, help='number of epsilon-series coefficients')
    parser.add_argument('--strategy', choices=['online', 'recompute'])
    parser.add_argument('--seed', type=int)
    parser.add_argument('--delta', help='noise level')
    parser.add_argument('--tau', help='discrepancy factor, > 1')
    parser.add_argument('--cutoff', help="cut-off index, or 'auto' for the discrepancy principle")
    parser.add_argument('--signal', choices=['ramp', 'sine', 'modes'])
    parser.add_argument('--input', help='CSV of samples t,y to reconstruct from')
    parser.add_argument('--column', help='value column of the input CSV')
    parser.add_argument('--points', type=int, help='grid size of written functions')
    parser.add_argument('--inject-failure', dest='inject_failure', action='store_true', default=None,
                        help='add a failing check to the verification suite')


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='nfold',
                            description='Singular systems of n-fold integration and spectral cut-off.')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='store_true')
    parser.add_argument('--config', help='YAML run file')
    parser.add_argument('--run', dest='run_id', help='run id within the run file')
    commands = parser.add_subparsers(dest='command')
    for name in COMMANDS:
        sub = commands.add_parser(name, help=(COMMAND_HANDLERS[name].__doc__ or '').strip().splitlines()[0])
        _add_run_options(sub)
    return parser


FLAGS = ('n', 'count', 'precision_bits', 'output', 'format', 'digits', 'convention', 'terms',
         'strategy', 'seed', 'delta', 'tau', 'cutoff', 'signal', 'input', 'column', 'points',
         'inject_failure')


def _flags(args: Namespace) -> dict[str, Any]:
    return {k: getattr(args, k, None) for k in FLAGS}


def report_error(ex: Exception, exit_code: int, stream: TextIO|None = None) -> int:
    '''
    Write an error as one line of JSON.
    '''
    stream = stream or sys.stderr
    stream.write(json.dumps({'error': type(ex).__name__, 'message': str(ex), 'exit_code': exit_code}) + '\n')
    return exit_code


def main(argv: Sequence[str]|None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    if args.command is None and args.config is None:
        parser.print_usage(sys.stderr)
        return 3
    try:
        config = run_config(args.command, config=args.config, run_id=args.run_id, **_flags(args))
        logger.info('%s: n=%d, %d bits', config.command, config.n, config.precision_bits)
        return COMMAND_HANDLERS[config.command](config)
    except NfoldError as ex:
        return report_error(ex, ex.exit_code)
    except ValueError as ex:
        return report_error(ex, 3)
    except OSError as ex:
        return report_error(ex, 1)


if __name__ == '__main__':
    sys.exit(main())
