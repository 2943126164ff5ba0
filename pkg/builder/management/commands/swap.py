from mustshe.commands import EXIT_IO, EXIT_VALIDATION, ToolkitCommand, atomic_write

from builder.io import load_lexicon, parse_candidates, target_language
from builder.mining import infer_speaker
from builder.swapping import LexiconError, SwapError, TermNotFoundError, swap_terms
from corpus.exceptions import CorpusFormatError
from corpus.records import Category, Corpus, TripletRecord
from corpus.tsv import serialize_corpus
from corpus.validation import validate_record
from metrics.tokenizer import normalize

REVIEW_HEADER = ('ID', 'RULE-ID', 'REASON', 'SRC', 'TGT', 'TERMS')


def build_record(candidate, language, lexicon):
    """
    Turn a candidate into a corpus record; raises ``ValueError`` with the
    reason when the candidate needs human review
    """
    speaker = infer_speaker(candidate.category, candidate.form, candidate.speaker)
    if speaker is None:
        raise ValueError(f"{Category(candidate.category).label} candidate without a known speaker")
    terms = candidate.terms
    if not terms:
        raise ValueError('no gender-marked tokens in the matched spans')
    try:
        wrong_reference, pairs = swap_terms(candidate.target, terms, language, lexicon)
    except (SwapError, TermNotFoundError) as e:
        raise ValueError('; '.join(e.messages))

    record = TripletRecord(
        id=candidate.candidate_id,
        talk=candidate.talk,
        source=candidate.source,
        ref_correct=normalize(candidate.target),
        ref_wrong=wrong_reference,
        speaker=speaker,
        form=candidate.form,
        category=candidate.category,
        terms=tuple(pairs),
    )
    errors = [issue for issue in validate_record(record) if issue.is_error]
    if errors:
        raise ValueError('; '.join(f"{issue.kind.value}: {issue.message}" for issue in errors))
    return record


class Command(ToolkitCommand):
    help = ('Generate wrong references for candidates by swapping their gender-marked words; '
            'writes a canonical corpus TSV.')

    def add_arguments(self, parser):
        parser.add_argument('--candidates', required=True, metavar='PATH', help='Candidates TSV')
        parser.add_argument('--lang', required=True, metavar='L', help='Target language or pair, e.g. it or en-it')
        parser.add_argument('--lexicon', metavar='DIR', help='Lexicon directory (default: the shipped lexicon)')
        parser.add_argument('--review', metavar='PATH',
                            help='Write candidates needing human review here instead of failing')
        self.add_output_argument(parser)

    def handle(self, *args, **options):
        language = target_language(options['lang'])
        text = self.read_input(options['candidates'], 'candidates')
        try:
            lexicon = load_lexicon(options['lexicon'])
        except OSError as e:
            self.fail(f"cannot read the lexicon: {e}", EXIT_IO)
        except (LexiconError, CorpusFormatError) as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)
        if language not in lexicon.languages:
            self.fail(f"the lexicon has no entries for language {language!r}", EXIT_VALIDATION)
        try:
            candidates = parse_candidates(text)
        except CorpusFormatError as e:
            self.fail('; '.join(e.messages), EXIT_VALIDATION)

        records, review = [], []
        for candidate in candidates:
            try:
                records.append(build_record(candidate, language, lexicon))
            except ValueError as e:
                review.append((candidate, str(e)))

        if review and not options['review']:
            for candidate, reason in review:
                self.stderr.write(f"{candidate.candidate_id}: {reason}")
            self.fail(f"{len(review)} candidates need human review; pass --review PATH to set them aside")
        if options['review']:
            lines = ['\t'.join(REVIEW_HEADER)]
            for candidate, reason in review:
                lines.append('\t'.join([
                    candidate.candidate_id, candidate.rule_id, reason.replace('\t', ' '),
                    candidate.source, candidate.target, ';'.join(candidate.terms),
                ]))
            try:
                atomic_write(options['review'], '\n'.join(lines) + '\n')
            except OSError as e:
                self.fail(f"cannot write {options['review']}: {e.strerror or e}", EXIT_IO)
            self.stderr.write(f"{len(records)} records, {len(review)} set aside for review")

        corpus = Corpus(language_pair=options['lang'].lower(), records=tuple(records))
        return self.emit(serialize_corpus(corpus), options['output'])
