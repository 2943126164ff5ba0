from django.conf import settings

from mustshe.commands import EXIT_USAGE, EXIT_VALIDATION, ToolkitCommand

from builder.io import parse_candidates, serialize_candidates
from builder.sampling import balance_sample, cell_label, parse_quota
from corpus.exceptions import CorpusFormatError


class Command(ToolkitCommand):
    help = 'Sample a balanced selection of mined candidates per category and gender form.'

    def add_arguments(self, parser):
        parser.add_argument('--candidates', required=True, metavar='PATH', help='Candidates TSV written by mine')
        parser.add_argument('--quota', metavar='N|1F=N,1M=N,2F=N,2M=N',
                            help='Candidates per cell (default: MUSTSHE_DEFAULT_QUOTA)')
        parser.add_argument('--seed', type=int, help='Random seed (default: MUSTSHE_DEFAULT_SEED)')
        parser.add_argument('--by-speaker', action='store_true',
                            help="Split each cell's quota evenly between female and male speakers")
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        try:
            quota = parse_quota(options['quota'] if options['quota'] is not None else settings.MUSTSHE_DEFAULT_QUOTA)
        except ValueError as e:
            self.fail(str(e), EXIT_USAGE)
        seed = options['seed'] if options['seed'] is not None else settings.MUSTSHE_DEFAULT_SEED

        text = self.read_input(options['candidates'], 'candidates')
        try:
            candidates = parse_candidates(text)
        except CorpusFormatError as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)

        selection = balance_sample(candidates, quota, seed, by_speaker=options['by_speaker'])
        for cell, missing in selection.shortfall.items():
            self.stderr.write(f"Cell {cell_label(cell)}: {missing} short of quota {quota[cell]}")
        return self.emit(serialize_candidates(selection.selected), options['output'])
