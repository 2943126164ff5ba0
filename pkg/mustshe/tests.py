import tempfile
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO
from pathlib import Path

from django.test import SimpleTestCase

from corpus.tsv import CANONICAL_HEADER

from .cli import run
from .commands import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, atomic_write

ROWS = [
    ['r1', 'talk1', 'I was born in Mumbai.', 'Sono nata a Mumbai.', 'Sono nato a Mumbai.', 'F', 'F', '1',
     'nata:nato'],
    ['r2', 'talk2', 'He was a doctor.', 'Era un dottore.', 'Era una dottoressa.', 'F', 'M', '2',
     'un:una;dottore:dottoressa'],
]


class CommandLineTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.directory = Path(self.tmp.name)
        self.corpus = self.directory / 'small.en-it.tsv'
        self.corpus.write_text(
            '\t'.join(CANONICAL_HEADER) + '\n' + ''.join('\t'.join(row) + '\n' for row in ROWS), encoding='utf-8',
        )
        self.hyp = self.directory / 'hyp.txt'
        self.hyp.write_text('Sono nata a Mumbai.\nEra una dottoressa.\n', encoding='utf-8')

    def run_cli(self, *args):
        stdout, stderr = StringIO(), StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = run(list(args))
        return code, stdout.getvalue(), stderr.getvalue()

    def test_success(self):
        code, stdout, _ = self.run_cli('validate', '--corpus', str(self.corpus))
        self.assertEqual(code, EXIT_OK)
        self.assertIn('2 records, 0 errors, 0 warnings', stdout)

    def test_validation_failure(self):
        broken = self.corpus.read_text(encoding='utf-8').replace('Era una dottoressa.', 'Era una dottoressa brava.')
        self.corpus.write_text(broken, encoding='utf-8')
        code, stdout, stderr = self.run_cli('validate', '--corpus', str(self.corpus))
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('ERROR r2 [RefLengthMismatch]', stdout)
        self.assertIn('1 validation errors', stderr)

    def test_usage_errors(self):
        self.assertEqual(self.run_cli()[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('frobnicate')[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('validate', '--corpus', str(self.corpus), '--bogus')[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('validate')[0], EXIT_USAGE)
        code = self.run_cli('eval', '--corpus', str(self.corpus), '--hyp', str(self.hyp), '--format', 'html')[0]
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(self.run_cli('validate', '--corpus', str(self.corpus), '--mapping', 'nope')[0], EXIT_USAGE)

    def test_help(self):
        code, stdout, _ = self.run_cli('--help')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('subcommands:', stdout)
        code, stdout, _ = self.run_cli('stats', '--help')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('--common-with', stdout)

    def test_io_errors(self):
        code, _, stderr = self.run_cli('stats', '--corpus', str(self.directory / 'missing.tsv'))
        self.assertEqual(code, EXIT_IO)
        self.assertIn('corpus file not found', stderr)
        code = self.run_cli('eval', '--corpus', str(self.corpus), '--hyp', str(self.directory / 'missing.txt'))[0]
        self.assertEqual(code, EXIT_IO)
        code = self.run_cli('stats', '--corpus', str(self.corpus), '--output', str(self.directory / 'no' / 'x.md'))[0]
        self.assertEqual(code, EXIT_IO)
        self.assertFalse((self.directory / 'no').exists())

    def test_misaligned_hypotheses(self):
        self.hyp.write_text('Sono nata a Mumbai.\n', encoding='utf-8')
        code, _, stderr = self.run_cli('eval', '--corpus', str(self.corpus), '--hyp', str(self.hyp))
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('hypothesis file has 1 lines but the corpus has 2 records', stderr)

    def test_deterministic_output(self):
        for fmt in ('md', 'tsv', 'json'):
            first = self.directory / f"first.{fmt}"
            second = self.directory / f"second.{fmt}"
            for path in (first, second):
                code = self.run_cli('eval', '--corpus', str(self.corpus), '--hyp', str(self.hyp),
                                    '--format', fmt, '--output', str(path))[0]
                self.assertEqual(code, EXIT_OK)
            self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_atomic_write_replaces_file(self):
        path = self.directory / 'out.txt'
        path.write_text('old', encoding='utf-8')
        atomic_write(path, 'new\n')
        self.assertEqual(path.read_text(encoding='utf-8'), 'new\n')
        self.assertEqual([p.name for p in self.directory.iterdir() if p.name.startswith('.')], [])
