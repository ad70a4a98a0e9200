# This file is part of topokinetic

"""
Command line interface.

    topokinetic simulate config.yaml --out run/
    topokinetic solve kinetic.yaml --out run/
    topokinetic verify lemma --kernel smoothcutoff --p 0.4
    topokinetic compare compare.yaml --out run/ --threads 4

Every command reads one YAML config, overridden by `--set key=value`
flags, and writes CSV files plus a `manifest.yaml` in the output
directory. A manifest can be passed back in place of the config to
replay the run. Exit codes are 0 on success, 1 when a check fails and
2 on usage or config errors.
"""

import os
import sys
import time
import logging
import argparse

import numpy
import yaml

from topokinetic.core import __version__
from topokinetic.core import progress
from topokinetic.core.utils import setup_logging, parse_overrides, merge, mkdir, LOGGER_NAME
from topokinetic.core.manifest import RunManifest, is_manifest
from topokinetic.kernel import RankKernel, DomainError, NonSmoothKernel, DegenerateKernel
from topokinetic.simulation import SimConfig, ConfigError, run, write_trajectory, \
    write_events, master_seed
from topokinetic.kinetic import KineticConfig, KineticState, EmptyDensity, solve, \
    write_solution, build_partial_mass_table, change_of_variable_check
from topokinetic.rank import rank_law_check
from topokinetic.bernstein import lorentz_expansion_check, lemma_expansion_check, \
    sn_expansion_check, residual_ladder, write_reports, functions, CASES
from topokinetic.compare import GridMismatch, CompareConfig, convergence_study

__all__ = ['main', 'load_config', 'resolve_seed', 'SUITES']

_log = logging.getLogger(__name__)

SUITES = ('bernstein', 'rank', 'lemma', 'sn', 'changevar')

# Exceptions mapped to exit code 2
_config_errors = (ConfigError, DomainError, NonSmoothKernel, DegenerateKernel,
                  GridMismatch, EmptyDensity)


class CheckFailed(Exception):
    """Raised by a command when its output fails the stated criteria."""
    pass


def load_config(path, command):
    """
    Read the YAML config at `path` for `command`.

    If `path` is a run manifest, return its config and seed. Return
    the tuple (config, seed), where seed is None if not recorded.
    """
    if path is None:
        return {}, None
    try:
        with open(path, encoding='utf-8') as fh:
            db = yaml.safe_load(fh)
    except (IOError, OSError) as exc:
        raise ConfigError('cannot read config %s: %s' % (path, exc))
    except yaml.YAMLError as exc:
        raise ConfigError('cannot parse config %s: %s' % (path, exc))
    if db is None:
        db = {}
    if not isinstance(db, dict):
        raise ConfigError('config %s is not a mapping' % path)
    if is_manifest(db):
        if db['command'] != command:
            raise ConfigError('manifest %s was written by %s, not %s' %
                              (path, db['command'], command))
        return dict(db['config']), db['seed']
    return db, db.get('seed')


def resolve_seed(flag=None, config_seed=None):
    """
    Master seed: the `--seed` flag, then the config, then the
    TOPOKINETIC_SEED environment variable, then fresh entropy.
    """
    for seed in (flag, config_seed, os.environ.get('TOPOKINETIC_SEED')):
        if seed is not None and seed != '':
            try:
                return int(seed)
            except ValueError:
                raise ConfigError('invalid seed %s' % seed)
    return master_seed(None)


def _prepare(args, command):
    db, seed = load_config(args.config, command)
    try:
        db = merge(db, parse_overrides(args.set))
    except ValueError as exc:
        raise ConfigError(str(exc))
    seed = resolve_seed(args.seed, seed)
    return db, seed


def _output_dir(args):
    out = args.out if args.out is not None else '.'
    mkdir(out)
    return out


def _write_manifest(out, command, config, seed, outputs, start, params=None):
    path = os.path.join(out, 'manifest.yaml')
    manifest = RunManifest(command, config, seed, outputs, time.time() - start, params=params)
    manifest.write(path)
    _log.info('wrote %s', path)
    return path


def cmd_simulate(args):
    """Run the particle dynamics and write trajectory and diagnostics."""
    start = time.time()
    db, seed = _prepare(args, 'simulate')
    db['seed'] = seed
    config = SimConfig.from_dict(db)
    _log.info('simulate %s seed=%d', config, seed)
    out = _output_dir(args)
    result = run(config)
    outputs = []
    path = os.path.join(out, 'trajectory.csv')
    write_trajectory(path, result.snapshots)
    outputs.append(path)
    path = os.path.join(out, 'diagnostics.csv')
    result.diagnostics.write(path)
    outputs.append(path)
    if config.event_log:
        path = os.path.join(out, 'events.csv')
        write_events(path, result.events)
        outputs.append(path)
    _write_manifest(out, 'simulate', config.to_dict(), seed, outputs, start)
    return 0


def cmd_solve(args):
    """Solve the kinetic equation and write the kinetic observables."""
    start = time.time()
    db, seed = _prepare(args, 'solve')
    db.pop('seed', None)
    config = KineticConfig.from_dict(db)
    initial = config.initial_state()
    out = _output_dir(args)
    solution = solve(initial, config.rank_kernel, config.dt, config.t_end,
                     interval=config.interval, splitting=config.splitting,
                     dump_f=config.dump_f)
    outputs = write_solution(out, solution)
    _write_manifest(out, 'solve', config.to_dict(), seed, outputs, start)

    # Mass is conserved to round-off at every step
    steps = max(1, int(numpy.ceil(config.t_end / config.dt)))
    drift = float(numpy.max(numpy.abs(solution.mass - solution.mass[0])))
    if drift > 1e-12 * steps:
        raise CheckFailed('mass drifts by %.3g over %d steps' % (drift, steps))
    return 0


def _kernel(args, db, default):
    # --kernel selects the family, kernel.* entries of the config give its parameters
    kernel_db = db.get('kernel', default)
    if args.kernel is not None:
        params = dict(kernel_db) if isinstance(kernel_db, dict) else {}
        params['family'] = args.kernel
        kernel_db = params
    try:
        return RankKernel.from_dict(kernel_db)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _sizes(args, db, default):
    if args.sizes is not None:
        return [int(n) for n in args.sizes.split(',')]
    return [int(n) for n in db.get('sizes', default)]


def _points(args, db, default):
    if args.points is not None:
        return [float(x) for x in args.points.split(',')]
    return [float(x) for x in db.get('points', default)]


def verify_bernstein(args, db, seed):
    """Lorentz expansion of Bernstein polynomials at a few points."""
    if args.f is not None or args.kernel is None:
        f = args.f if args.f is not None else db.get('f', 'xsq')
        if f not in functions:
            raise ConfigError('unknown function %s, available ones are %s' % (f, sorted(functions)))
    else:
        f = _kernel(args, db, 'constant')
    sizes = _sizes(args, db, [100, 400, 1600])
    reports, passed = [], True
    for x in _points(args, db, [0.2, 0.35, 0.5, 0.65, 0.8]):
        group = [lorentz_expansion_check(f, x, n) for n in sizes]
        reports += group
        passed = passed and residual_ladder(group).passed
    return reports, passed


def verify_lemma(args, db, seed):
    """Rank expansions of the kernel average in the three cases."""
    K = _kernel(args, db, 'smoothcutoff')
    p = args.p if args.p is not None else float(db.get('p', 0.4))
    sizes = _sizes(args, db, [200, 800, 3200])
    cases = [args.case] if args.case is not None else sorted(CASES)
    reports, passed = [], True
    for case in cases:
        group = [lemma_expansion_check(K, p, N, case) for N in sizes]
        reports += group
        passed = passed and residual_ladder(group).passed
    # The two ball cases differ by -K'(p)/N in their corrections
    if 'insideball' in cases and 'outsideball' in cases:
        for N in sizes:
            inside = lemma_expansion_check(K, p, N, 'insideball')
            outside = lemma_expansion_check(K, p, N, 'outsideball')
            gap = outside.corrected - inside.corrected + K.compute(p, 1) / N
            if abs(gap) > 1e-12:
                _log.error('corrections differ by %g from -K\'(p)/N at N=%d', gap, N)
                passed = False
    return reports, passed


def verify_sn(args, db, seed):
    """Trapezoidal expansion of the normalizer of the discrete kernel."""
    K = _kernel(args, db, 'constant')
    sizes = _sizes(args, db, [100, 400, 1600])
    reports = [sn_expansion_check(K, N) for N in sizes]
    return reports, residual_ladder(reports).passed


def verify_rank(args, db, seed):
    """Chi-square test of the sampled rank law against the binomial law."""
    N = args.N if args.N is not None else int(db.get('N', 50))
    trials = args.trials if args.trials is not None else int(db.get('trials', 100000))
    s = float(db.get('s', 0.2))
    rng = numpy.random.default_rng(seed)
    report = rank_law_check(N, rng, trials=trials, s=s, L=float(db.get('L', 1.0)))
    columns = ['rank', 'observed', 'expected']
    data = [numpy.arange(1, N), report.counts, report.expected]
    rows = (columns, data, ['%d', '%d', '%.17g'])
    passed = report.passed(float(db.get('significance', 0.001)))
    return rows, passed


def verify_changevar(args, db, seed):
    """
    Discrete change of variable on random densities, for H = 1, K
    and K', at every cell and several radii.
    """
    K = _kernel(args, db, 'smoothcutoff')
    rng = numpy.random.default_rng(seed)
    L = float(db.get('L', 1.0))
    densities = int(db.get('densities', 10))
    nradii = int(db.get('radii', 8))
    H = {'one': (lambda p: 1.0, lambda p: p),
         'K': (lambda p: K.compute(p, 0), lambda p: K.compute(p, 'antiderivative'))}
    if K.smooth:
        H['dK'] = (lambda p: K.compute(p, 1), lambda p: K.compute(p, 0))
    rows, passed = [], True
    for Nx in _sizes(args, db, [32, 256]):
        for k in range(densities):
            state = KineticState(L, Nx, [0.0], f=rng.random((Nx, 1)) + 0.05).normalize()
            table = build_partial_mass_table(state, K)
            radii = rng.uniform(0.0, 0.6 * L, nradii)
            for name in sorted(H):
                func, primitive = H[name]
                worst = 0.0
                for m in range(Nx):
                    for r in radii:
                        lhs, rhs = change_of_variable_check(state, func, m, r, kernel=K,
                                                            primitive=primitive, table=table)
                        worst = max(worst, abs(lhs - rhs))
                rows.append((Nx, k, name, Nx, nradii, worst))
                if worst > 1e-10:
                    passed = False
    columns = ['Nx', 'density', 'H', 'cells', 'radii', 'max_residual']
    data = list(zip(*rows))
    return (columns, data, ['%d', '%d', '%s', '%d', '%d', '%.17g']), passed


_suites = {'bernstein': verify_bernstein,
           'lemma': verify_lemma,
           'sn': verify_sn,
           'rank': verify_rank,
           'changevar': verify_changevar}


def cmd_verify(args):
    """Run a verification suite and write its CSV report."""
    from topokinetic.core.utils import write_table
    start = time.time()
    db, seed = _prepare(args, 'verify')
    result, passed = _suites[args.suite](args, db, seed)
    if args.out is None:
        path = '-'
    else:
        mkdir(args.out)
        path = os.path.join(args.out, args.suite + '.csv')
    if isinstance(result, tuple):
        columns, data, fmt = result
        write_table(path, columns, data, fmt=fmt)
    else:
        write_reports(path, result)
    if args.out is not None:
        params = {'suite': args.suite}
        for key in ('kernel', 'p', 'f', 'case', 'sizes', 'points', 'N', 'trials'):
            if getattr(args, key) is not None:
                params[key] = getattr(args, key)
        _write_manifest(args.out, 'verify', db, seed, [path], start, params=params)
    if not passed:
        raise CheckFailed('suite %s failed' % args.suite)
    return 0


def cmd_compare(args):
    """Compare particle marginals with the kinetic solution along an N ladder."""
    start = time.time()
    db, seed = _prepare(args, 'compare')
    db['seed'] = seed
    config = CompareConfig.from_dict(db)
    out = _output_dir(args)
    report = convergence_study(config, workers=args.threads, seed=seed)
    path = os.path.join(out, 'convergence.csv')
    report.write(path)
    for line in report.report().split('\n'):
        _log.info(line)
    _write_manifest(out, 'compare', config.to_dict(), seed, [path], start)
    failures = report.failures()
    for failure in failures:
        _log.error(failure)
    if len(failures) > 0:
        raise CheckFailed('distances or chaos metric do not decrease along the N ladder')
    return 0


def _parser():
    parser = argparse.ArgumentParser(prog='topokinetic',
                                     description='Choose the Leader dynamics and its kinetic limit')
    parser.add_argument('--version', action='version', version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', dest='verbose', action='store_true', help='verbose output')
    common.add_argument('-d', '--debug', dest='debug', action='store_true', help='debug output')
    common.add_argument(      '--seed', dest='seed', type=int, default=None, help='master seed')
    common.add_argument(      '--set', dest='set', action='append', default=[],
                        metavar='KEY=VALUE', help='override config entry (dotted keys allowed)')
    common.add_argument(      '--threads', dest='threads', type=int, default=1, help='maximum number of workers')
    common.add_argument('-o', '--out', dest='out', default=None, help='output directory')
    subparsers = parser.add_subparsers(dest='command')

    parser_simulate = subparsers.add_parser('simulate', parents=[common], help='run the particle dynamics')
    parser_simulate.add_argument(dest='config', help='YAML config or manifest')
    parser_simulate.set_defaults(func=cmd_simulate)

    parser_solve = subparsers.add_parser('solve', parents=[common], help='solve the kinetic equation')
    parser_solve.add_argument(dest='config', help='YAML config or manifest')
    parser_solve.set_defaults(func=cmd_solve)

    parser_verify = subparsers.add_parser('verify', parents=[common], help='run a verification suite')
    parser_verify.add_argument(dest='suite', choices=SUITES, help='suite name')
    parser_verify.add_argument('-c', '--config', dest='config', default=None, help='YAML config or manifest')
    parser_verify.add_argument('-k', '--kernel', dest='kernel', default=None, help='kernel family')
    parser_verify.add_argument(      '--p', dest='p', type=float, default=None, help='partial mass')
    parser_verify.add_argument(      '--f', dest='f', default=None, help='smooth test function')
    parser_verify.add_argument(      '--case', dest='case', default=None, help='case of the rank expansion')
    parser_verify.add_argument(      '--sizes', dest='sizes', default=None, help='comma separated sizes')
    parser_verify.add_argument(      '--points', dest='points', default=None, help='comma separated points')
    parser_verify.add_argument('-N', dest='N', type=int, default=None, help='number of particles')
    parser_verify.add_argument(      '--trials', dest='trials', type=int, default=None, help='number of trials')
    parser_verify.set_defaults(func=cmd_verify)

    parser_compare = subparsers.add_parser('compare', parents=[common], help='particle to kinetic convergence')
    parser_compare.add_argument(dest='config', help='YAML config or manifest')
    parser_compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    """Entry point; return the exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, 'func', None) is None:
        parser.print_usage(sys.stderr)
        return 2

    level = 10 if args.debug else 20 if args.verbose else 40
    # Repeated calls only update the level of the installed handler
    installed = len(logging.getLogger(LOGGER_NAME).handlers) > 0
    setup_logging(LOGGER_NAME, level=level, update=installed)
    progress.active = args.verbose or args.debug

    try:
        return args.func(args)
    except _config_errors as exc:
        _log.error('%s', exc)
        return 2
    except CheckFailed as exc:
        _log.error('%s', exc)
        return 1
    except Exception as exc:
        _log.exception('unexpected error: %s', exc)
        return 1
