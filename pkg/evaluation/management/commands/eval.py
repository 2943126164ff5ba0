from pathlib import Path

from django.db import DatabaseError

from mustshe.commands import EXIT_IO, EXIT_VALIDATION, ToolkitCommand

from corpus.validation import has_errors, records_with_errors, validate
from evaluation.evaluator import AlignmentError, evaluate, load_hypotheses
from evaluation.models import EvaluationRun
from evaluation.report import render_report


class Command(ToolkitCommand):
    help = ('Score a hypothesis file (one translation per line, aligned with the corpus records) '
            'against the correct and the wrong references.')

    def add_arguments(self, parser):
        self.add_corpus_arguments(parser)
        parser.add_argument('--hyp', required=True, metavar='PATH', help='System output, one line per record')
        parser.add_argument('--format', choices=['md', 'tsv', 'json'], default='md', help='Report format')
        parser.add_argument('--force', action='store_true',
                            help='Evaluate a corpus with validation errors, excluding the offending records')
        parser.add_argument('--save', action='store_true', help='Store the report as an evaluation run')
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        corpus, corpus_text = self.load_corpus(options['corpus'], options['lang'], options['mapping'])
        hyp_text = self.read_input(options['hyp'], 'hypothesis')
        hyps = load_hypotheses(hyp_text)

        issues = validate(corpus)
        excluded = set()
        if has_errors(issues):
            for issue in issues:
                if issue.is_error:
                    self.stderr.write(str(issue))
            n_errors = sum(1 for issue in issues if issue.is_error)
            if not options['force']:
                self.fail(f"corpus has {n_errors} validation errors; fix them or pass --force", EXIT_VALIDATION)
            excluded = records_with_errors(issues)

        try:
            report = evaluate(
                corpus, hyps, exclude=excluded,
                corpus_name=Path(options['corpus']).name,
                hypotheses_name=Path(options['hyp']).name,
            )
        except AlignmentError as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)
        if report.n_excluded:
            self.stderr.write(f"Excluded {report.n_excluded} records with validation errors")

        if options['save']:
            try:
                run = EvaluationRun.record(report, corpus_text, hyp_text)
            except DatabaseError as e:
                self.fail(f"cannot save the evaluation run ({e}); run `manage.py migrate` first", EXIT_IO)
            self.stderr.write(f"Saved evaluation run {run.pk}")

        return self.emit(render_report(report, options['format']), options['output'])
