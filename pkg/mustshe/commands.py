"""
Shared plumbing for the toolkit's management commands.

Commands buffer their whole result and either return it (Django writes it
to stdout) or write it atomically to ``--output``. Failures are raised as
``CommandError`` carrying the process exit code.
"""
import logging
import os
import tempfile
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from corpus.exceptions import CorpusFormatError
from corpus.tsv import get_column_mapping, guess_language_pair, parse_corpus, read_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def atomic_write(path, text):
    """Write ``text`` next to ``path`` and rename it into place"""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path('.')
    handle = tempfile.NamedTemporaryFile(
        mode='w', encoding='utf-8', newline='', dir=directory, prefix=f".{path.name}.", delete=False,
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise


class ToolkitCommand(BaseCommand):
    requires_system_checks = []

    def add_output_argument(self, parser):
        parser.add_argument('--output', metavar='PATH', help='Write the result to PATH instead of standard output')

    def add_corpus_arguments(self, parser):
        parser.add_argument('--corpus', required=True, metavar='PATH', help='Corpus TSV file')
        parser.add_argument('--lang', default='', metavar='L',
                            help='Language pair, e.g. en-it (guessed from the file name when omitted)')
        parser.add_argument('--mapping', default='canonical', metavar='NAME|PATH',
                            help='Column mapping name from settings, or a JSON mapping file')

    def fail(self, message, returncode=EXIT_VALIDATION):
        raise CommandError(message, returncode=returncode)

    def read_input(self, path, what='input'):
        try:
            return read_text(path)
        except FileNotFoundError:
            self.fail(f"{what} file not found: {path}", EXIT_IO)
        except UnicodeDecodeError as e:
            self.fail(f"{what} file {path} is not valid UTF-8: {e}", EXIT_IO)
        except OSError as e:
            self.fail(f"cannot read {what} file {path}: {e.strerror or e}", EXIT_IO)

    def load_corpus(self, path, language_pair='', mapping=None):
        """Return the parsed corpus and the raw text it was read from"""
        text = self.read_input(path, 'corpus')
        try:
            column_mapping = get_column_mapping(mapping)
        except OSError as e:
            self.fail(f"cannot read column mapping {mapping}: {e.strerror or e}", EXIT_IO)
        except CorpusFormatError as e:
            self.fail('; '.join(e.messages), EXIT_USAGE)
        try:
            corpus = parse_corpus(
                text,
                language_pair or guess_language_pair(path),
                mapping=column_mapping,
                name=Path(path).name,
            )
        except CorpusFormatError as e:
            self.fail(f"{path}: {'; '.join(e.messages)}", EXIT_VALIDATION)
        return corpus, text

    def emit(self, text, output=None):
        """Return ``text`` for standard output, or write it to ``output``"""
        if not output:
            return text
        try:
            atomic_write(output, text)
        except OSError as e:
            self.fail(f"cannot write {output}: {e.strerror or e}", EXIT_IO)
        logger.info("Wrote %s", output)
        return ''

    def emit_and_fail(self, text, output, message, returncode=EXIT_VALIDATION):
        """Emit a complete result that still ends the command with ``returncode``"""
        text = self.emit(text, output)
        if text:
            self.stdout.write(text, ending='')
        self.fail(message, returncode)
