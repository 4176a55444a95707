import logging
import sys

from assembly import SpecError
from eda import ConfigError, RunAborted
from errors import BaseError
from fitness import FitnessError
from harness import HarnessError, dispatch, parse_args
from workspace import config

log = logging.getLogger("optimize")

# exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EVALUATION = 2


def setup_logging(verbose=False, quiet=False):
    level = config.LOG_LEVEL
    if verbose:
        level = "DEBUG"
    elif quiet:
        level = "WARNING"
    logging.basicConfig(level=level, format=config.LOG_FORMAT, force=True)


def main(argv=None) -> int:
    """
    argv: command line arguments without the program name,
          sys.argv is used if None
    Returns the exit code.
    """
    try:
        args = parse_args(argv)
        setup_logging(args.verbose, args.quiet)
        return dispatch(args)
    # the evaluator failed during a run
    except (RunAborted, FitnessError) as e:
        print("%s: %s" % (e.NAME, e), file=sys.stderr)
        return EXIT_EVALUATION
    # bad flags, problem files or settings
    except (HarnessError, SpecError, ConfigError) as e:
        print("%s: %s" % (e.NAME, e), file=sys.stderr)
        return EXIT_USAGE
    # any other expected error
    except BaseError as e:
        print("%s: %s" % (e.NAME, e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
