"""
Single entry point: ``python -m mustshe <subcommand> [flags]``.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""
import logging
import os
import sys

import django

logger = logging.getLogger(__name__)

# subcommand -> app providing the management command
SUBCOMMANDS = {
    'validate': 'corpus',
    'stats': 'corpus',
    'eval': 'evaluation',
    'mine': 'builder',
    'balance': 'builder',
    'swap': 'builder',
}

USAGE = """usage: mustshe <subcommand> [flags]

subcommands:
  validate   check every record invariant of a corpus TSV
  stats      count records per category, gender form and speaker
  eval       score a hypothesis file against correct and wrong references
  mine       extract candidate segments from parallel text with rule patterns
  balance    sample a balanced selection of candidates per category and form
  swap       generate wrong references by swapping gender-marked words

Run `mustshe <subcommand> --help` for the flags of a subcommand.
"""


def _exit_code(code):
    if code is None:
        return 0
    if isinstance(code, int):
        return code
    return 1


def run(args=None):
    """Dispatch ``args`` to a toolkit subcommand and return its exit code"""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mustshe.settings')
    django.setup()

    from django.core.exceptions import ValidationError
    from django.core.management import load_command_class

    from .commands import EXIT_IO, EXIT_USAGE, EXIT_VALIDATION

    args = list(sys.argv[1:] if args is None else args)
    if not args:
        sys.stderr.write(USAGE)
        return EXIT_USAGE
    if args[0] in ('-h', '--help', 'help'):
        sys.stdout.write(USAGE)
        return 0

    name, rest = args[0], args[1:]
    if name not in SUBCOMMANDS:
        sys.stderr.write(f"mustshe: unknown subcommand {name!r}\n\n{USAGE}")
        return EXIT_USAGE

    command = load_command_class(SUBCOMMANDS[name], name)
    try:
        command.run_from_argv(['mustshe', name, *rest])
    except SystemExit as e:
        return _exit_code(e.code)
    except ValidationError as e:
        sys.stderr.write(f"mustshe {name}: {'; '.join(e.messages)}\n")
        return EXIT_VALIDATION
    except OSError as e:
        sys.stderr.write(f"mustshe {name}: {e}\n")
        return EXIT_IO
    return 0


def main():
    sys.exit(run())
