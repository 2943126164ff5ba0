import json
import random
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .exceptions import CorpusFormatError, DuplicateKeyError
from .records import (
    HEADER_RECORD_ID, Category, Corpus, GenderForm, GenderTermPair, IssueKind, IssueSeverity, Selector,
    SpeakerGender, TripletRecord,
)
from .stats import common_subset, render_stats, stats, stats_as_dict
from .tsv import (
    BOM, CANONICAL_HEADER, decode_category, decode_form, decode_speaker, decode_terms, get_column_mapping,
    guess_language_pair, parse_corpus, serialize_corpus,
)
from .validation import has_errors, records_with_errors, validate

HEADER = '\t'.join(CANONICAL_HEADER)

ROWS = [
    ['r1', 'talk1', 'I was born and raised in Mumbai.', 'Sono nata e cresciuta a Mumbai.',
     'Sono nato e cresciuto a Mumbai.', 'F', 'F', '1', 'nata:nato;cresciuta:cresciuto'],
    ['r2', 'talk1', 'I am a teacher.', 'Sono un insegnante.', 'Sono una insegnante.', 'M', 'M', '1', 'un:una'],
    ['r3', 'talk2', 'She is very happy.', 'Lei è molto felice e contenta.', 'Lei è molto felice e contento.',
     'M', 'F', '2', 'contenta:contento'],
    ['r4', 'talk3', 'He was a doctor.', 'Era un dottore.', 'Era una dottoressa.', 'F', 'M', '2',
     'un:una;dottore:dottoressa'],
]


def make_tsv(rows, header=HEADER):
    return header + '\n' + ''.join('\t'.join(row) + '\n' for row in rows)


def make_record(record_id, ref_correct, ref_wrong, terms, source='A source sentence.', talk='t1',
                speaker=SpeakerGender.FEMALE, form=GenderForm.FEMININE, category=Category.CAT1):
    return TripletRecord(
        id=record_id, talk=talk, source=source, ref_correct=ref_correct, ref_wrong=ref_wrong,
        speaker=speaker, form=form, category=category, terms=decode_terms(terms),
    )


def fixture_corpus():
    return parse_corpus(make_tsv(ROWS), 'en-it', name='fixture.tsv')


class ParseCorpusTest(SimpleTestCase):
    def test_parse_canonical(self):
        corpus = fixture_corpus()
        self.assertEqual(len(corpus), 4)
        self.assertEqual(corpus.ids, ['r1', 'r2', 'r3', 'r4'])
        first = corpus.records[0]
        self.assertEqual(first.category, Category.CAT1)
        self.assertEqual(first.form, GenderForm.FEMININE)
        self.assertEqual(first.speaker, SpeakerGender.FEMALE)
        self.assertEqual(first.terms, (GenderTermPair('nata', 'nato'), GenderTermPair('cresciuta', 'cresciuto')))
        self.assertEqual(corpus.extra_columns, ())

    def test_round_trip(self):
        text = make_tsv(ROWS)
        self.assertEqual(serialize_corpus(parse_corpus(text, 'en-it')), text)

    def test_byte_order_mark_and_crlf(self):
        text = BOM + make_tsv(ROWS).replace('\n', '\r\n')
        self.assertEqual(parse_corpus(text, 'en-it').ids, ['r1', 'r2', 'r3', 'r4'])

    def test_quote_characters_are_literal(self):
        rows = [list(row) for row in ROWS]
        rows[1][2] = '"I am a teacher," she said.'
        rows[1][3] = '"Sono un insegnante.'
        rows[1][4] = '"Sono una insegnante.'
        text = make_tsv(rows)
        corpus = parse_corpus(text, 'en-it')
        self.assertEqual(corpus.records[1].source, '"I am a teacher," she said.')
        self.assertEqual(corpus.records[1].ref_correct, '"Sono un insegnante.')
        self.assertEqual(serialize_corpus(corpus), text)

    def test_empty_input(self):
        with self.assertRaises(CorpusFormatError):
            parse_corpus('', 'en-it')

    def test_header_only(self):
        with self.assertRaises(CorpusFormatError):
            parse_corpus(HEADER + '\n', 'en-it')

    def test_missing_column_names_line_one(self):
        header = HEADER.replace('\tTERMS', '')
        with self.assertRaises(CorpusFormatError) as ctx:
            parse_corpus(header + '\n', 'en-it')
        self.assertEqual(ctx.exception.line, 1)

    def test_wrong_field_count_names_line(self):
        rows = [ROWS[0], ROWS[1][:-1]]
        with self.assertRaises(CorpusFormatError) as ctx:
            parse_corpus(make_tsv(rows), 'en-it')
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn('line 3', ctx.exception.messages[0])

    def test_bad_category(self):
        row = list(ROWS[0])
        row[7] = '3'
        with self.assertRaises(CorpusFormatError) as ctx:
            parse_corpus(make_tsv([row]), 'en-it')
        self.assertEqual(ctx.exception.line, 2)

    def test_unknown_columns_are_kept_aside(self):
        header = HEADER + '\tNOTES'
        rows = [row + ['free text'] for row in ROWS]
        corpus = parse_corpus(make_tsv(rows, header), 'en-it')
        self.assertEqual(corpus.extra_columns, ('NOTES',))
        issues = validate(corpus)
        self.assertEqual([issue.kind for issue in issues], [IssueKind.UNKNOWN_COLUMN])
        self.assertEqual(issues[0].record_id, HEADER_RECORD_ID)
        self.assertFalse(has_errors(issues))

    def test_official_mapping(self):
        header = 'ID\tLANG\tTALK\tSRC\tREF\tWRONG-REF\tSPEAKER\tGENDER\tCATEGORY\tTEXT-CATEGORY\tGENDERTERMS'
        row = ['it-0001', 'en-it', '1159', 'I was born in Mumbai.', 'Sono nata a Mumbai.', 'Sono nato a Mumbai.',
               'Jane', 'She', '1F', 'A', 'nata nato']
        corpus = parse_corpus(make_tsv([row], header), 'en-it', mapping=get_column_mapping('mustshe-v1'))
        record = corpus.records[0]
        self.assertEqual(record.category, Category.CAT1)
        self.assertEqual(record.form, GenderForm.FEMININE)
        self.assertEqual(record.speaker, SpeakerGender.FEMALE)
        self.assertEqual(record.terms, (GenderTermPair('nata', 'nato'),))
        self.assertEqual(corpus.extra_columns, ('LANG', 'SPEAKER', 'TEXT-CATEGORY'))

    def test_unknown_mapping(self):
        with self.assertRaises(CorpusFormatError):
            get_column_mapping('no-such-mapping')

    def test_decoders(self):
        self.assertEqual(decode_speaker('He'), SpeakerGender.MALE)
        self.assertEqual(decode_category('2M'), Category.CAT2)
        self.assertEqual(decode_form('2m'), GenderForm.MASCULINE)
        self.assertEqual(decode_terms('a:b; c:d;'), (GenderTermPair('a', 'b'), GenderTermPair('c', 'd')))
        with self.assertRaises(ValueError):
            decode_terms('a:b:c')
        with self.assertRaises(ValueError):
            decode_speaker('x')

    def test_guess_language_pair(self):
        self.assertEqual(guess_language_pair('data/MONOLINGUAL.en-fr.v1.2.tsv'), 'en-fr')
        self.assertEqual(guess_language_pair('corpus.tsv'), '')


class ValidateTest(SimpleTestCase):
    def kinds(self, *records):
        return sorted((issue.kind, issue.severity) for issue in validate(Corpus('en-it', tuple(records))))

    def test_fixture_is_clean(self):
        self.assertEqual(validate(fixture_corpus()), [])

    def test_term_not_in_reference(self):
        record = make_record('x', 'Sono nata .', 'Sono nato .', 'nata:nato;brava:bravo')
        self.assertEqual(self.kinds(record), [(IssueKind.TERM_NOT_IN_REF, IssueSeverity.ERROR)] * 2)

    def test_reference_length_mismatch(self):
        record = make_record('x', 'Sono nata a Roma .', 'Sono nato Roma .', 'nata:nato')
        self.assertEqual(self.kinds(record), [(IssueKind.REF_LENGTH_MISMATCH, IssueSeverity.ERROR)])

    def test_difference_outside_terms(self):
        record = make_record('x', 'Sono nata a Roma .', 'Sono nato a Milano .', 'nata:nato')
        self.assertEqual(self.kinds(record), [(IssueKind.DIFF_OUTSIDE_TERMS, IssueSeverity.ERROR)])

    def test_identical_references(self):
        record = make_record('x', 'Sono nata .', 'Sono nata .', 'nata:nato')
        kinds = {kind for kind, _ in self.kinds(record)}
        self.assertIn(IssueKind.DIFF_OUTSIDE_TERMS, kinds)

    def test_identical_pair(self):
        record = make_record('x', 'Sono nata .', 'Sono nata .', 'nata:nata')
        self.assertEqual(self.kinds(record), [(IssueKind.IDENTICAL_PAIR, IssueSeverity.ERROR)])

    def test_duplicate_id(self):
        record = make_record('x', 'Sono nata .', 'Sono nato .', 'nata:nato')
        self.assertEqual(self.kinds(record, record), [(IssueKind.DUPLICATE_ID, IssueSeverity.ERROR)])

    def test_bad_fields(self):
        empty_source = make_record('x', 'Sono nata .', 'Sono nato .', 'nata:nato', source=' ')
        self.assertEqual(self.kinds(empty_source), [(IssueKind.BAD_FIELD, IssueSeverity.ERROR)])
        reserved_in_text = make_record('y', 'Sono nata : a Roma .', 'Sono nato : a Roma .', 'nata:nato')
        self.assertEqual(self.kinds(reserved_in_text), [(IssueKind.BAD_FIELD, IssueSeverity.WARNING)] * 2)
        multi_token_term = TripletRecord(
            id='z', talk='t', source='s', ref_correct='Sono nata .', ref_wrong='Sono nato .',
            speaker=SpeakerGender.FEMALE, form=GenderForm.FEMININE, category=Category.CAT1,
            terms=(GenderTermPair('nata .', 'nato .'),),
        )
        self.assertIn((IssueKind.BAD_FIELD, IssueSeverity.ERROR), self.kinds(multi_token_term))

    def test_ambiguous_term(self):
        record = make_record('x', 'Lui è nato e lei è nata .', 'Lui è nata e lei è nato .', 'nata:nato;nato:nata')
        self.assertEqual(self.kinds(record), [(IssueKind.AMBIGUOUS_TERM, IssueSeverity.WARNING)] * 2)

    def test_case_insensitive_terms(self):
        record = make_record('x', 'Nata a Roma .', 'Nato a Roma .', 'nata:nato')
        self.assertEqual(self.kinds(record), [])

    def test_records_with_errors(self):
        good = make_record('good', 'Sono nata .', 'Sono nato .', 'nata:nato')
        bad = make_record('bad', 'Sono nata .', 'Sono nato a Roma .', 'nata:nato')
        issues = validate(Corpus('en-it', (good, bad)))
        self.assertEqual(records_with_errors(issues), {'bad'})


class StatsTest(SimpleTestCase):
    def test_fixture_counts(self):
        result = stats(fixture_corpus())
        for category in Category:
            for form in GenderForm:
                self.assertEqual(result.count(category, form), 1)
        self.assertEqual(result.total_records, 4)
        self.assertEqual(result.total_term_tokens, 6)
        self.assertEqual(result.speaker_counts, {SpeakerGender.FEMALE: 2, SpeakerGender.MALE: 2})
        self.assertEqual(result.speaker_form_agreement, {Category.CAT1: 2, Category.CAT2: 0})

    def test_filter(self):
        corpus = fixture_corpus()
        self.assertEqual(corpus.filter(Selector(form=GenderForm.FEMININE)).ids, ['r1', 'r3'])
        self.assertEqual(corpus.filter(Selector(category=Category.CAT2, form=GenderForm.MASCULINE)).ids, ['r4'])
        self.assertEqual(corpus.filter(~Selector(speaker=SpeakerGender.MALE)).ids, ['r1', 'r4'])
        self.assertEqual(len(corpus.filter(lambda record: False)), 0)

    def test_partition(self):
        rng = random.Random(17)
        for _ in range(50):
            records = []
            for index in range(rng.randint(0, 30)):
                form = rng.choice(list(GenderForm))
                records.append(make_record(
                    f"r{index}", 'Sono nata .', 'Sono nato .', ';'.join(['nata:nato'] * rng.randint(1, 3)),
                    speaker=rng.choice(list(SpeakerGender)), form=form, category=rng.choice(list(Category)),
                ))
            corpus = Corpus('en-it', tuple(records))
            whole = stats(corpus)
            for selector in (Selector(form=GenderForm.FEMININE), Selector(category=Category.CAT1)):
                parts = stats(corpus.filter(selector)) + stats(corpus.filter(~selector))
                self.assertEqual(parts.total_records, whole.total_records)
                self.assertEqual(parts.total_term_tokens, whole.total_term_tokens)
                for category in Category:
                    for form in GenderForm:
                        self.assertEqual(parts.count(category, form), whole.count(category, form))

    def test_render_markdown(self):
        text = render_stats(stats(fixture_corpus()), 'md', 'en-it')
        self.assertIn('| | Fem | Masc | Tot. |', text)
        self.assertIn('| Cat. 1 | 1 | 1 | 2 |', text)
        self.assertIn('| Tot. | 2 | 2 | 4 |', text)
        self.assertIn('Total: 4 records (6 gender-marked words)', text)

    def test_render_json_and_tsv(self):
        result = stats(fixture_corpus())
        data = json.loads(render_stats(result, 'json', common=3))
        self.assertEqual(data, stats_as_dict(result, 3))
        self.assertEqual(data['counts'], {'1F': 1, '1M': 1, '2F': 1, '2M': 1})
        self.assertIn('counts_2M\t1', render_stats(result, 'tsv'))
        with self.assertRaises(ValueError):
            render_stats(result, 'xml')


class CommonSubsetTest(SimpleTestCase):
    def test_reflexive(self):
        corpus = fixture_corpus()
        pairs = common_subset(corpus, corpus)
        self.assertEqual([(a.id, b.id) for a, b in pairs], [(r, r) for r in corpus.ids])

    def test_normalized_keys(self):
        a = fixture_corpus()
        rows = [list(row) for row in ROWS[1:3]]
        rows[0][0], rows[1][0] = 'fr-1', 'fr-2'
        rows[0][2] = '  I am   a teacher. '
        b = parse_corpus(make_tsv(rows), 'en-fr')
        self.assertEqual([(x.id, y.id) for x, y in common_subset(a, b)], [('r2', 'fr-1'), ('r3', 'fr-2')])
        self.assertEqual([(x.id, y.id) for x, y in common_subset(b, a)], [('fr-1', 'r2'), ('fr-2', 'r3')])

    def test_mirror(self):
        a = fixture_corpus()
        rows = [list(row) for row in (ROWS[3], ROWS[0], ROWS[2])]
        for index, row in enumerate(rows):
            row[0] = f"fr-{index}"
        rows[2][2] = 'Someone else entirely.'
        b = parse_corpus(make_tsv(rows), 'en-fr')
        forward = {(x.id, y.id) for x, y in common_subset(a, b)}
        backward = {(y.id, x.id) for x, y in common_subset(b, a)}
        self.assertEqual(forward, {('r1', 'fr-1'), ('r4', 'fr-0')})
        self.assertEqual(forward, backward)

    def test_duplicate_key(self):
        rows = [ROWS[0], list(ROWS[0])]
        rows[1][0] = 'r1-copy'
        duplicated = parse_corpus(make_tsv(rows), 'en-it')
        with self.assertRaises(DuplicateKeyError):
            common_subset(duplicated, fixture_corpus())
        with self.assertRaises(DuplicateKeyError):
            common_subset(fixture_corpus(), duplicated)


class CorpusCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / 'fixture.en-it.tsv'
        self.path.write_text(make_tsv(ROWS), encoding='utf-8')

    def run_command(self, *args):
        stdout, stderr = StringIO(), StringIO()
        call_command(*args, stdout=stdout, stderr=stderr)
        return stdout.getvalue()

    def test_validate_clean_corpus(self):
        output = self.run_command('validate', '--corpus', str(self.path))
        self.assertEqual(output.strip(), 'fixture.en-it.tsv: 4 records, 0 errors, 0 warnings')

    def test_validate_reports_errors(self):
        rows = [list(row) for row in ROWS]
        rows[1][4] = 'Sono una brava insegnante.'
        self.path.write_text(make_tsv(rows), encoding='utf-8')
        stdout = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('validate', '--corpus', str(self.path), '--format', 'tsv', stdout=stdout, stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)
        lines = stdout.getvalue().splitlines()
        self.assertEqual(lines[0], 'record_id\tseverity\tkind\tmessage')
        self.assertTrue(lines[1].startswith('r2\terror\tRefLengthMismatch\t'))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('validate', '--corpus', str(self.path) + '.missing')
        self.assertEqual(ctx.exception.returncode, 3)

    def test_malformed_file(self):
        self.path.write_text(HEADER + '\nr1\tonly two\n', encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            call_command('stats', '--corpus', str(self.path))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_stats_json(self):
        data = json.loads(self.run_command('stats', '--corpus', str(self.path), '--format', 'json'))
        self.assertEqual(data['total_records'], 4)
        self.assertEqual(data['speakers'], {'F': 2, 'M': 2})

    def test_stats_common_with_and_output(self):
        output = Path(self.tmp.name) / 'stats.md'
        printed = self.run_command('stats', '--corpus', str(self.path), '--common-with', str(self.path),
                                   '--output', str(output))
        self.assertEqual(printed, '')
        text = output.read_text(encoding='utf-8')
        self.assertTrue(text.startswith('## en-it\n'))
        self.assertIn('Common subset: 4', text)
        self.assertEqual(sorted(p.name for p in Path(self.tmp.name).iterdir()), ['fixture.en-it.tsv', 'stats.md'])
