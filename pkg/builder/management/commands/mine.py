from mustshe.commands import EXIT_USAGE, EXIT_VALIDATION, ToolkitCommand

from builder.io import (
    load_wordlists, parse_pairs, parse_rules, parse_speakers, resources_dir, serialize_candidates, version_of,
)
from builder.mining import mine
from builder.rules import PatternError, compile_patterns
from corpus.exceptions import CorpusFormatError


class Command(ToolkitCommand):
    help = 'Extract candidate segments from parallel text (TSV with SRC, TGT and optional TALK columns).'

    def add_arguments(self, parser):
        parser.add_argument('--pairs', required=True, metavar='PATH', help='Parallel text TSV')
        parser.add_argument('--lang', required=True, metavar='L', help='Language pair of the rules to use, e.g. en-it')
        parser.add_argument('--rules', metavar='PATH', help='Rules TSV (default: the shipped rule set)')
        parser.add_argument('--wordlists', metavar='DIR', help='Word list directory (default: the shipped lists)')
        parser.add_argument('--speakers', metavar='PATH', help='TSV with TALK and SPEAKER columns')
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        language_pair = options['lang'].lower()
        rules_path = options['rules'] or resources_dir() / 'rules.tsv'
        rules_text = self.read_input(rules_path, 'rules')
        pairs_text = self.read_input(options['pairs'], 'parallel text')
        speakers_text = self.read_input(options['speakers'], 'speaker') if options['speakers'] else None

        try:
            rules = [rule for rule in parse_rules(rules_text) if rule.language_pair == language_pair]
            pairs = parse_pairs(pairs_text)
            speakers = parse_speakers(speakers_text) if speakers_text is not None else {}
        except CorpusFormatError as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)
        if not rules:
            self.fail(f"no mining rules for language pair {language_pair!r} in {rules_path}", EXIT_USAGE)

        try:
            patterns = compile_patterns(rules, load_wordlists(options['wordlists'], language_pair))
        except PatternError as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)

        candidates = mine(pairs, patterns, speakers)
        version = version_of(rules_text)
        self.stderr.write(
            f"{len(candidates)} candidates from {len(pairs)} pairs with {len(patterns)} rules"
            + (f" (rule set {version})" if version else '')
        )
        return self.emit(serialize_candidates(candidates), options['output'])
