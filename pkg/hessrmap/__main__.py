#! /usr/bin/python3
# -*- encoding: utf-8 -*-

import argparse
import logging
import sys
from pathlib import Path

from . import __description__, __version__, LOG_LVLMAP
from .errors import InputError

LOG = logging.getLogger('hessrmap')


def parse_args(argv=None):
    """Parse arguments from commandline and load configuration file."""
    args = sys.argv[1:] if argv is None else argv

    parser = argparse.ArgumentParser(prog="hessrmap", description=__description__,
                                     allow_abbrev=True)
    # Global Parser Arguments
    parser.add_argument('-V', '--version', action='version',
                        version=__version__)

    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="Enable verbose logging.")
    parser.add_argument('--debug', action='store_true',
                        help="Enable DEBUG level logging.")
    parser.add_argument('--trace', action='store_true',
                        help="Enable detailed trace info in log messages.")
    parser.add_argument('-l', '--logdir', action='store',
                        help="Also write application.log to this directory.")
    parser.add_argument('-c', '--config', action='store',
                        help="Specify path to custom JSON configuration.")

    # Runtime options
    parser.add_argument('command', choices=['analyze', 'rmap', 'verify', 'roundtrip'],
                        help="Check suite to run.")
    parser.add_argument('-i', '--input', action='store', required=True,
                        help="Run specification (JSON).")
    parser.add_argument('-o', '--output', action='store',
                        help="Report path; the report goes to stdout otherwise.")
    parser.add_argument('--csv', action='store',
                        help="Also write a CSV summary of the records.")
    parser.add_argument('--seed', action='store', type=int,
                        help="Seed for random charts and point sampling.")
    parser.add_argument('--points', action='store',
                        help="JSON file of points replacing those of the specification.")
    parser.add_argument('--tol-abs', action='store', type=float, dest='tol_abs')
    parser.add_argument('--tol-rel', action='store', type=float, dest='tol_rel')
    parser.add_argument('--fd-step', action='store', type=float, dest='fd_step',
                        help="Base finite-difference step.")
    parser.add_argument('--scheme', action='store', choices=['central_2nd', 'richardson_4th'])
    parser.add_argument('--perturb', action='store', type=float,
                        help="Inject u-dependence of this size into the bundle metric "
                             "(roundtrip fault injection).")

    return parser.parse_args(args)


def initialize(args):
    """Initialize global application params from the parsed arguments"""
    if args.debug:
        log_level = logging.DEBUG
        args.verbose = 5
    else:
        log_level = LOG_LVLMAP.get(args.verbose, logging.INFO)
    LOG.setLevel(log_level)

    # Set overrides from arguments
    from .runconfig import rcParams

    if args.config:
        # This must come first as it will re-initialize the configuration class
        LOG.info("Reloading rcParams with config file: %s", args.config)
        try:
            with Path(args.config).open('r') as fd:
                rcParams.load_config(fd)
        except (IOError, OSError) as e:
            raise InputError("Unable to read configuration %s: %s" % (args.config, e))
    if args.logdir:
        rcParams['logging.logdir'] = args.logdir
        LOG.info("Updated logging directory: %s", args.logdir)

    return args


def main(argv=None) -> int:
    """Run the command line and return its exit code: 0 pass, 1 check failure, 2 bad input."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    from .hessrmap import hessrmap

    try:
        return hessrmap(initialize(args))
    except InputError as e:
        LOG.error("Invalid input: %s", e)
        sys.stderr.write("hessrmap: error: %s\n" % e)
        return 2
    except (IOError, OSError) as e:
        LOG.error("Unable to write output: %s", e)
        sys.stderr.write("hessrmap: error: %s\n" % e)
        return 2


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
