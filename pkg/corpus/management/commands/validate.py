from mustshe.commands import ToolkitCommand

from corpus.validation import has_errors, validate


def render_issues(corpus, issues, fmt='text'):
    if fmt == 'tsv':
        lines = ['record_id\tseverity\tkind\tmessage']
        lines += [
            f"{issue.record_id}\t{issue.severity.value}\t{issue.kind.value}\t{issue.message}" for issue in issues
        ]
        return '\n'.join(lines) + '\n'

    n_errors = sum(1 for issue in issues if issue.is_error)
    lines = [str(issue) for issue in issues]
    lines.append(
        f"{corpus.name or 'corpus'}: {len(corpus)} records, {n_errors} errors, {len(issues) - n_errors} warnings"
    )
    return '\n'.join(lines) + '\n'


class Command(ToolkitCommand):
    help = 'Check every record invariant of a corpus TSV; exits with status 1 when any Error is found.'

    def add_arguments(self, parser):
        self.add_corpus_arguments(parser)
        parser.add_argument('--format', choices=['text', 'tsv'], default='text', help='Issue list format')
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        corpus, _ = self.load_corpus(options['corpus'], options['lang'], options['mapping'])
        issues = validate(corpus)
        text = render_issues(corpus, issues, options['format'])
        if has_errors(issues):
            n_errors = sum(1 for issue in issues if issue.is_error)
            self.emit_and_fail(text, options['output'], f"{n_errors} validation errors in {options['corpus']}")
        return self.emit(text, options['output'])
