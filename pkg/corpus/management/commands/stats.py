from mustshe.commands import EXIT_VALIDATION, ToolkitCommand

from corpus.exceptions import DuplicateKeyError
from corpus.stats import common_subset, render_stats, stats


class Command(ToolkitCommand):
    help = 'Count records per category and gender form, speakers and gender-marked words.'

    def add_arguments(self, parser):
        self.add_corpus_arguments(parser)
        parser.add_argument('--format', choices=['md', 'tsv', 'json'], default='md', help='Output format')
        parser.add_argument('--common-with', metavar='PATH',
                            help='Second corpus (same mapping); reports the size of the common (talk, source) subset')
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        corpus, _ = self.load_corpus(options['corpus'], options['lang'], options['mapping'])
        common = None
        if options['common_with']:
            other, _ = self.load_corpus(options['common_with'], '', options['mapping'])
            try:
                common = len(common_subset(corpus, other))
            except DuplicateKeyError as e:
                self.fail('; '.join(e.messages), EXIT_VALIDATION)
        text = render_stats(stats(corpus), options['format'], corpus.language_pair, common)
        return self.emit(text, options['output'])
