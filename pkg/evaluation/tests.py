import json
import random
import tempfile
from collections import Counter
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.exceptions import ValidationError as SerializerValidationError
from rest_framework.test import APITestCase

from corpus.records import Category, Corpus, GenderForm, GenderTermPair, SpeakerGender, TripletRecord
from corpus.tsv import CANONICAL_HEADER, parse_corpus
from metrics.tokenizer import tokenize

from .evaluator import (
    AlignmentError, EmptyViewError, accuracy_counts, accuracy_triplet, bleu_triplet, evaluate, load_hypotheses,
)
from .models import EvaluationRun, sha256_of
from .report import CATEGORIES, SPLITS, parse_structured, render_report, render_structured

ROWS = [
    ['r1', 'talk1', 'I was born and raised in Mumbai.', 'Sono nata e cresciuta a Mumbai.',
     'Sono nato e cresciuto a Mumbai.', 'F', 'F', '1', 'nata:nato;cresciuta:cresciuto'],
    ['r2', 'talk1', 'I am a teacher.', 'Sono un insegnante.', 'Sono una insegnante.', 'M', 'M', '1', 'un:una'],
    ['r3', 'talk2', 'She is very happy.', 'Lei è molto felice e contenta.', 'Lei è molto felice e contento.',
     'M', 'F', '2', 'contenta:contento'],
    ['r4', 'talk3', 'He was a doctor.', 'Era un dottore.', 'Era una dottoressa.', 'F', 'M', '2',
     'un:una;dottore:dottoressa'],
]
CORPUS_TSV = '\t'.join(CANONICAL_HEADER) + '\n' + ''.join('\t'.join(row) + '\n' for row in ROWS)

WORDS = ('la', 'casa', 'di', 'sera', 'molto', 'bene', 'poi', 'qui', 'tutto', 'anche', 'per', 'ora')
STEMS = ('stanc', 'brav', 'nat', 'arrivat', 'pront', 'sicur', 'vecchi', 'alt')


def fixture_corpus():
    return parse_corpus(CORPUS_TSV, 'en-it', name='fixture.tsv')


def random_fixture(rng, size=None):
    """Random corpus and hypotheses; every record carries at least one term pair"""
    records, hyps = [], []
    for index in range(size or rng.randint(1, 25)):
        correct, wrong, terms = [], [], []
        for _ in range(rng.randint(2, 12)):
            if rng.random() < 0.25:
                stem = rng.choice(STEMS)
                feminine = rng.random() < 0.5
                correct_form, wrong_form = (stem + 'a', stem + 'o') if feminine else (stem + 'o', stem + 'a')
                correct.append(correct_form)
                wrong.append(wrong_form)
                terms.append(GenderTermPair(correct_form, wrong_form))
            else:
                word = rng.choice(WORDS)
                correct.append(word)
                wrong.append(word)
        if not terms:
            stem = rng.choice(STEMS)
            correct.append(stem + 'a')
            wrong.append(stem + 'o')
            terms.append(GenderTermPair(stem + 'a', stem + 'o'))
        records.append(TripletRecord(
            id=f"r{index}", talk=f"t{index % 4}", source='source', ref_correct=' '.join(correct),
            ref_wrong=' '.join(wrong), speaker=rng.choice(list(SpeakerGender)), form=rng.choice(list(GenderForm)),
            category=rng.choice(list(Category)), terms=tuple(terms),
        ))
        hyp = [rng.choice(correct + wrong + list(WORDS)) for _ in range(rng.randint(0, 14))]
        hyps.append(' '.join(hyp))
    return Corpus('en-it', tuple(records)), hyps


class EvaluateTest(SimpleTestCase):
    def setUp(self):
        self.corpus = fixture_corpus()
        self.correct_hyps = [record.ref_correct for record in self.corpus]
        self.wrong_hyps = [record.ref_wrong for record in self.corpus]

    def test_correct_references_as_hypotheses(self):
        report = evaluate(self.corpus, self.correct_hyps)
        self.assertEqual(report.n_records, 4)
        for cell in report.cells:
            expected = 4 if (cell.split, cell.category) == ('All', 'Overall') else (
                2 if cell.split == 'All' or cell.category == 'Overall' else 1)
            self.assertEqual(cell.n_records, expected)
            self.assertEqual(cell.bleu.correct, 100.0)
            self.assertEqual(cell.accuracy.correct, 1.0)
            self.assertEqual(cell.accuracy.wrong, 0.0)
            self.assertEqual(cell.accuracy.diff, 1.0)
            self.assertGreater(cell.bleu.diff, 0.0)

    def test_wrong_references_as_hypotheses(self):
        report = evaluate(self.corpus, self.wrong_hyps)
        for cell in report.cells:
            self.assertEqual(cell.bleu.wrong, 100.0)
            self.assertEqual(cell.accuracy.correct, 0.0)
            self.assertEqual(cell.accuracy.wrong, 1.0)
            self.assertEqual(cell.accuracy.diff, -1.0)
            self.assertLess(cell.bleu.diff, 0.0)

    def test_single_record_by_hand(self):
        view = self.corpus.with_records(self.corpus.records[:1])
        hyps = ['Sono nato e cresciuta a Mumbai.']
        bleu = bleu_triplet(view, hyps)
        self.assertAlmostEqual(bleu.correct, 100 * (6 / 7 * 4 / 6 * 3 / 5 * 2 / 4) ** 0.25, places=9)
        self.assertEqual(bleu.wrong, 0.0)
        accuracy = accuracy_triplet(view, hyps)
        self.assertEqual((accuracy.correct, accuracy.wrong, accuracy.diff), (0.5, 0.5, 0.0))

        cell = evaluate(view, hyps).cell('All', 'Overall')
        self.assertIsNone(cell.bleu_correct_degenerate)
        self.assertEqual(cell.bleu_wrong_degenerate, 'no matching n-grams of order 4')
        self.assertEqual((cell.n_terms, cell.matched_correct, cell.matched_wrong), (2, 1, 1))

    def test_case_insensitive_term_match(self):
        view = self.corpus.with_records(self.corpus.records[1:2])
        self.assertEqual(accuracy_triplet(view, ['UN insegnante']).correct, 1.0)

    def test_alignment_error(self):
        with self.assertRaises(AlignmentError) as ctx:
            evaluate(self.corpus, self.correct_hyps[:3])
        self.assertEqual(ctx.exception.messages, ['hypothesis file has 3 lines but the corpus has 4 records'])
        with self.assertRaises(AlignmentError):
            bleu_triplet(self.corpus, self.correct_hyps + ['extra'])

    def test_empty_views(self):
        empty = self.corpus.with_records(())
        with self.assertRaises(EmptyViewError):
            bleu_triplet(empty, [])
        with self.assertRaises(EmptyViewError):
            accuracy_triplet(empty, [])
        no_terms = self.corpus.with_records([TripletRecord(
            id='x', talk='t', source='s', ref_correct='a b c d', ref_wrong='a b c e',
            speaker=SpeakerGender.FEMALE, form=GenderForm.FEMININE, category=Category.CAT1,
        )])
        with self.assertRaises(EmptyViewError):
            accuracy_triplet(no_terms, ['a b c d'])

    def test_absent_cells(self):
        view = self.corpus.filter(lambda record: record.form == GenderForm.FEMININE)
        report = evaluate(view, [record.ref_correct for record in view])
        for category in CATEGORIES:
            cell = report.cell('Masculine', category)
            self.assertTrue(cell.is_absent)
            self.assertIsNone(cell.bleu)
            self.assertIsNone(cell.accuracy)

    def test_exclude(self):
        report = evaluate(self.corpus, self.correct_hyps, exclude={'r2', 'r4'})
        self.assertEqual((report.n_records, report.n_excluded), (2, 2))
        self.assertTrue(report.cell('Masculine', 'Overall').is_absent)

    def test_antisymmetry(self):
        rng = random.Random(5)
        for _ in range(100):
            corpus, hyps = random_fixture(rng)
            report = evaluate(corpus, hyps)
            mirrored = evaluate(corpus.swapped(), hyps)
            for cell, mirror in zip(report.cells, mirrored.cells):
                self.assertEqual(mirror.bleu, cell.bleu.swapped() if cell.bleu else None)
                self.assertEqual(mirror.accuracy, cell.accuracy.swapped() if cell.accuracy else None)

    def test_partition(self):
        rng = random.Random(11)
        for _ in range(100):
            corpus, hyps = random_fixture(rng)
            report = evaluate(corpus, hyps)
            for split in SPLITS:
                whole = report.cell(split, 'Overall')
                parts = [report.cell(split, 'Cat1'), report.cell(split, 'Cat2')]
                for field in ('n_records', 'n_terms', 'matched_correct', 'matched_wrong'):
                    self.assertEqual(getattr(whole, field), sum(getattr(part, field) for part in parts))
            for category in CATEGORIES:
                whole = report.cell('All', category)
                parts = [report.cell('Feminine', category), report.cell('Masculine', category)]
                for field in ('n_records', 'n_terms', 'matched_correct', 'matched_wrong'):
                    self.assertEqual(getattr(whole, field), sum(getattr(part, field) for part in parts))

    def test_bounds(self):
        rng = random.Random(23)
        for _ in range(100):
            corpus, hyps = random_fixture(rng)
            for cell in evaluate(corpus, hyps).cells:
                if cell.is_absent:
                    continue
                self.assertTrue(0.0 <= cell.bleu.correct <= 100.0)
                self.assertTrue(0.0 <= cell.accuracy.correct <= 1.0)
                self.assertTrue(-1.0 <= cell.accuracy.diff <= 1.0)

    def test_fixing_terms_never_lowers_accuracy(self):
        rng = random.Random(3)
        for _ in range(50):
            corpus, _ = random_fixture(rng, size=10)
            hyps = [record.ref_wrong for record in corpus]
            previous = accuracy_triplet(corpus, hyps).correct
            for index in rng.sample(range(10), 10):
                hyps[index] = corpus.records[index].ref_correct
                current = accuracy_triplet(corpus, hyps).correct
                self.assertGreaterEqual(current, previous)
                previous = current
            self.assertEqual(previous, 1.0)

    def test_adding_one_term_token(self):
        view = Corpus('en-it', self.corpus.records[:1])

        def counts(hyp):
            correct, wrong = accuracy_counts(view, [hyp])
            return correct.matched, wrong.matched

        self.assertEqual(counts('Sono a Mumbai.'), (0, 0))
        self.assertEqual(counts('Sono a Mumbai. nata'), (1, 0))
        # Clipped: "nata" is annotated once.
        self.assertEqual(counts('Sono a Mumbai. nata nata'), (1, 0))
        self.assertEqual(counts('Sono a Mumbai. nata nato'), (1, 1))
        self.assertEqual(counts('Sono nato a Mumbai. nato'), (0, 1))

    def test_adding_one_token_moves_each_side_by_at_most_one(self):
        rng = random.Random(31)
        for _ in range(300):
            corpus, hyps = random_fixture(rng, size=5)
            index = rng.randrange(5)
            record = corpus.records[index]
            pair = rng.choice(record.terms)
            token = rng.choice((pair.correct_form, pair.wrong_form))
            annotated_correct = Counter(term.correct_form for term in record.terms)
            annotated_wrong = Counter(term.wrong_form for term in record.terms)
            produced = Counter(tokenize(hyps[index]))

            correct_before, wrong_before = accuracy_counts(corpus, hyps)
            hyps[index] = f"{hyps[index]} {token}"
            correct_after, wrong_after = accuracy_counts(corpus, hyps)

            self.assertEqual(correct_after.matched - correct_before.matched,
                             int(produced[token] < annotated_correct[token]))
            self.assertEqual(wrong_after.matched - wrong_before.matched,
                             int(produced[token] < annotated_wrong[token]))
            if token not in annotated_wrong:
                self.assertEqual(wrong_after.matched, wrong_before.matched)
            self.assertEqual(correct_after.total, correct_before.total)

    def test_load_hypotheses(self):
        self.assertEqual(load_hypotheses('a\nb\n'), ('a', 'b'))
        self.assertEqual(load_hypotheses('a\r\n\nb'), ('a', '', 'b'))
        self.assertEqual(load_hypotheses(''), ())


class RenderReportTest(SimpleTestCase):
    def setUp(self):
        corpus = fixture_corpus()
        self.report = evaluate(corpus, [record.ref_correct for record in corpus], hypotheses_name='sys.txt')

    def test_markdown(self):
        text = render_report(self.report, 'md')
        lines = text.splitlines()
        self.assertEqual(lines[:4], ['# Evaluation of sys.txt on fixture.tsv', '', 'Language pair: en-it',
                                     'Records: 4'])
        self.assertIn('## BLEU', lines)
        self.assertIn('## Accuracy (%)', lines)
        self.assertEqual(lines.count('### Category 1'), 2)
        self.assertIn('| All | 100.0 | 0.0 | 100.0 |', lines)
        self.assertEqual(render_report(self.report, 'markdown'), text)

    def test_markdown_absent_cells(self):
        corpus = fixture_corpus().filter(lambda record: record.form == GenderForm.MASCULINE)
        report = evaluate(corpus, [record.ref_correct for record in corpus])
        self.assertIn('| Feminine | – | – | – |', render_report(report).splitlines())

    def test_tsv(self):
        lines = render_report(self.report, 'tsv').splitlines()
        self.assertEqual(lines[0], 'split\tmetric\tcorrect\twrong\tdiff\tn_records\tn_terms')
        self.assertEqual(len(lines), 1 + len(SPLITS) * len(CATEGORIES) * 2)
        self.assertEqual(lines[2], 'All/Overall\taccuracy\t1.0000\t0.0000\t1.0000\t4\t6')

    def test_deterministic(self):
        corpus = fixture_corpus()
        again = evaluate(corpus, [record.ref_correct for record in corpus], hypotheses_name='sys.txt')
        for fmt in ('md', 'tsv', 'json'):
            self.assertEqual(render_report(self.report, fmt), render_report(again, fmt))

    def test_structured_round_trip(self):
        rng = random.Random(7)
        for report in [self.report] + [evaluate(*random_fixture(rng)) for _ in range(20)]:
            parsed = parse_structured(render_structured(report))
            self.assertEqual(parsed, report)

    def test_structured_document(self):
        data = json.loads(render_report(self.report, 'json'))
        self.assertEqual(data['n_records'], 4)
        self.assertEqual(len(data['cells']), 9)
        self.assertEqual(data['cells'][0]['split'], 'All')
        self.assertEqual(data['cells'][0]['bleu']['correct'], 100.0)

    def test_structured_rejects_incomplete_documents(self):
        data = json.loads(render_structured(self.report))
        data['cells'] = data['cells'][:8]
        with self.assertRaises(SerializerValidationError):
            parse_structured(json.dumps(data))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render_report(self.report, 'html')


class EvaluationRunModelTest(TestCase):
    def setUp(self):
        corpus = fixture_corpus()
        self.hyps_text = '\n'.join(record.ref_correct for record in corpus) + '\n'
        self.report = evaluate(corpus, load_hypotheses(self.hyps_text), hypotheses_name='sys.txt')

    def test_record(self):
        run = EvaluationRun.record(self.report, CORPUS_TSV, self.hyps_text)
        self.assertEqual(run.corpus_name, 'fixture.tsv')
        self.assertEqual(run.corpus_sha256, sha256_of(CORPUS_TSV))
        self.assertEqual(run.hypotheses_sha256, sha256_of(self.hyps_text))
        self.assertEqual(run.n_records, 4)
        self.assertEqual(run.accuracy_diff, 1.0)
        self.assertEqual(str(run), f"Run {run.pk}: sys.txt on fixture.tsv")

        stored = EvaluationRun.objects.get(pk=run.pk)
        self.assertEqual(parse_structured(json.dumps(stored.report)), self.report)


class EvaluationRunAPITest(APITestCase):
    def setUp(self):
        corpus = fixture_corpus()
        hyps = [record.ref_correct for record in corpus]
        self.run = EvaluationRun.record(evaluate(corpus, hyps, hypotheses_name='a.txt'), CORPUS_TSV, '')
        french = Corpus('en-fr', corpus.records, name='fr.tsv')
        self.other = EvaluationRun.record(evaluate(french, hyps, hypotheses_name='b.txt'), CORPUS_TSV, '')

    def test_list_runs(self):
        response = self.client.get(reverse('evaluation:run_list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([run['id'] for run in response.data['runs']], [self.other.id, self.run.id])

    def test_filter_by_language_pair(self):
        response = self.client.get(reverse('evaluation:run_list'), {'language_pair': 'en-it'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([run['id'] for run in response.data['runs']], [self.run.id])

    def test_run_detail(self):
        response = self.client.get(reverse('evaluation:run_detail', kwargs={'run_id': self.run.id}))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['hypotheses_name'], 'a.txt')
        self.assertEqual(len(response.data['report']['cells']), 9)

    def test_run_not_found(self):
        response = self.client.get(reverse('evaluation:run_detail', kwargs={'run_id': 9999}))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(response.data['error'], 'Evaluation run not found')


class EvalCommandTest(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.directory = Path(self.tmp.name)
        self.corpus_path = self.directory / 'fixture.en-it.tsv'
        self.corpus_path.write_text(CORPUS_TSV, encoding='utf-8')
        self.hyp_path = self.directory / 'sys.txt'
        self.hyp_path.write_text(''.join(row[3] + '\n' for row in ROWS), encoding='utf-8')

    def run_eval(self, *args):
        stdout, stderr = StringIO(), StringIO()
        call_command('eval', '--corpus', str(self.corpus_path), '--hyp', str(self.hyp_path), *args,
                     stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def test_markdown_report(self):
        output, _ = self.run_eval()
        self.assertTrue(output.startswith('# Evaluation of sys.txt on fixture.en-it.tsv\n'))
        self.assertIn('Language pair: en-it', output)

    def test_misaligned_hypotheses(self):
        self.hyp_path.write_text('one line\n', encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.run_eval()
        self.assertEqual(ctx.exception.returncode, 1)

    def test_invalid_corpus_needs_force(self):
        broken = CORPUS_TSV.replace('Sono una insegnante.', 'Sono una brava insegnante.')
        self.corpus_path.write_text(broken, encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.run_eval()
        self.assertEqual(ctx.exception.returncode, 1)

        output, stderr = self.run_eval('--force', '--format', 'json')
        data = json.loads(output)
        self.assertEqual((data['n_records'], data['n_excluded']), (3, 1))
        self.assertIn('RefLengthMismatch', stderr)

    def test_save_and_output(self):
        report_path = self.directory / 'report.tsv'
        output, stderr = self.run_eval('--save', '--format', 'tsv', '--output', str(report_path))
        self.assertEqual(output, '')
        self.assertTrue(report_path.read_text(encoding='utf-8').startswith('split\tmetric\t'))
        run = EvaluationRun.objects.get()
        self.assertIn(f"Saved evaluation run {run.pk}", stderr)
        self.assertEqual(run.hypotheses_name, 'sys.txt')
