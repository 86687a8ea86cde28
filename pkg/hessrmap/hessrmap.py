# -*- coding: utf-8 -*-

"""
hessrmap - Hessian charts, the r-map, and a finite-difference oracle

Command runners: each takes a parsed RunSpec, runs the identities registered
for its command over the spec's points and returns a Report.

"""

import sys
import time
import logging
from pathlib import Path

from .runconfig import rcParams
from .dispatcher import Dispatcher, CheckContext
from .errors import InputError
from .identities import load_identities
from .report import Report
from .runspec import RunSpec, load_json
from . import LOG_FMT, TRACE_LOG_FMT, DATE_FMT

__all__ = ['cmd_analyze', 'cmd_rmap', 'cmd_verify', 'cmd_roundtrip', 'hessrmap', 'RUNNERS']
LOG = logging.getLogger('hessrmap.main')


def _configure_applog(log_format, logdir=None):
    logdir = logdir or rcParams['logging.logdir']
    if not logdir:
        return None
    logdir = Path(logdir)
    if not logdir.exists():
        try:
            logdir.mkdir(parents=True, mode=0o750)
        except (FileNotFoundError, OSError):
            LOG.warning("Log directory could not be created, log "
                        "files will be output to current directory (%s).",
                        str(Path().resolve()))
            logdir = Path()

    from logging.handlers import WatchedFileHandler

    applog_hdlr = WatchedFileHandler(str(logdir.joinpath('application.log')),
                                     encoding='utf-8')
    applog_hdlr.setFormatter(logging.Formatter(log_format, datefmt=DATE_FMT))
    logging.getLogger('hessrmap').addHandler(applog_hdlr)
    LOG.debug("Application log configured, log path: %s", str(logdir))
    return applog_hdlr


def _get_dispatcher(command, spec: RunSpec, points=(), bundle_points=()):
    """Loads identities and returns a Dispatcher for ``command``"""
    load_identities()
    context = CheckContext(spec.chart, spec.oracle, command,
                           tolerances=rcParams['tolerances'], spec=spec, perturb=spec.perturb,
                           max_invariant_dimension=rcParams.get('chart.max_invariant_dimension', 8))
    workers = rcParams['dispatch.workers'] or 1
    return Dispatcher(context, points, bundle_points, workers=workers)


def _run(command, spec: RunSpec, points=(), bundle_points=(), dispatcher=None) -> Report:
    t_start = time.perf_counter()
    dispatcher = dispatcher or _get_dispatcher(command, spec, points, bundle_points)
    dispatcher.start()
    dispatcher.join()
    meta = spec.summary()
    meta['special_real'] = spec.chart.is_special_real()
    report = Report(command, dispatcher.records, meta=meta)
    LOG.info("%s finished in %.3f s: %s", command, time.perf_counter() - t_start,
             report.summary)
    return report


def cmd_analyze(spec: RunSpec, dispatcher=None) -> Report:
    return _run('analyze', spec, points=spec.points, dispatcher=dispatcher)


def cmd_rmap(spec: RunSpec, dispatcher=None) -> Report:
    return _run('rmap', spec, bundle_points=spec.bundle_points, dispatcher=dispatcher)


def cmd_verify(spec: RunSpec, dispatcher=None) -> Report:
    return _run('verify', spec, points=spec.points, bundle_points=spec.bundle_points,
                dispatcher=dispatcher)


def cmd_roundtrip(spec: RunSpec, dispatcher=None) -> Report:
    report = _run('roundtrip', spec, bundle_points=spec.bundle_points, dispatcher=dispatcher)
    deviations = [r.residual for r in report.records
                  if r.name == 'bundle.roundtrip' and r.residual is not None]
    report.meta['max_deviation'] = max(deviations) if deviations else None
    report.meta['perturb'] = spec.perturb
    return report


RUNNERS = {'analyze': cmd_analyze, 'rmap': cmd_rmap, 'verify': cmd_verify,
           'roundtrip': cmd_roundtrip}


def _oracle_overrides(args) -> dict:
    overrides = {'tol_abs': args.tol_abs, 'tol_rel': args.tol_rel,
                 'base_step': args.fd_step, 'scheme': args.scheme}
    return {k: v for k, v in overrides.items() if v is not None}


def hessrmap(args, spec=None):
    """
    Main execution method, expects args passed from a Namespace created
    by an argparse class.

    Parameters
    ----------
    args : Namespace
        Namespace containing parsed commandline arguments.
    spec : RunSpec, Optional
        Injected run specification; otherwise read from ``args.input``.

    Returns
    -------
    int
        0 if every non-skipped check passed, 1 otherwise

    """
    _configure_applog(TRACE_LOG_FMT if args.trace else LOG_FMT, args.logdir)

    if spec is None:
        points = load_json(args.points, 'points') if args.points else None
        spec = RunSpec.load(args.input, seed=args.seed, points=points,
                            oracle_overrides=_oracle_overrides(args), perturb=args.perturb,
                            output=args.output)
    if spec.commands and args.command not in spec.commands:
        raise InputError("Run specification does not request '%s' (requests %s)"
                         % (args.command, ", ".join(spec.commands)), 'spec.commands')
    report = RUNNERS[args.command](spec)

    output = args.output or spec.output
    if output:
        report.write(output)
    else:
        sys.stdout.write(report.dumps())
    if args.csv:
        report.write_csv(args.csv)
    LOG.info("Exit code %d (%s)", report.exit_code, report.summary)
    return report.exit_code
