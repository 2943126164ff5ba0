"""
Dual-reference evaluation.

The same hypotheses are scored twice, once against the correct references
and once against the wrong ones (identical except for the gender-marked
words). Every metric is reported as correct, wrong and their difference,
for the whole corpus and for each category and gender form.
"""
import logging

from django.core.exceptions import ValidationError

from corpus.records import Category, GenderForm, Selector
from corpus.tsv import BOM
from metrics.accuracy import AccuracyScore, term_accuracy
from metrics.bleu import BleuStatistics
from metrics.tokenizer import tokenize

from .report import CATEGORIES, SPLITS, EvalReport, MetricTriplet, ReportCell

logger = logging.getLogger(__name__)

SPLIT_FORMS = {
    'All': None,
    'Feminine': GenderForm.FEMININE,
    'Masculine': GenderForm.MASCULINE,
}
CATEGORY_VALUES = {
    'Overall': None,
    'Cat1': Category.CAT1,
    'Cat2': Category.CAT2,
}


class AlignmentError(ValidationError):
    """
    Raised when the hypotheses do not line up with the corpus records
    """

    def __init__(self, n_hypotheses, n_records):
        self.n_hypotheses = n_hypotheses
        self.n_records = n_records
        super().__init__(
            f"hypothesis file has {n_hypotheses} lines but the corpus has {n_records} records",
            code='alignment',
        )


class EmptyViewError(ValidationError):
    def __init__(self, description='view'):
        super().__init__(f"cannot score an empty {description}", code='empty_view')


def load_hypotheses(text):
    """One hypothesis per LF-terminated line; a single trailing newline is tolerated"""
    if text.startswith(BOM):
        text = text[len(BOM):]
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    return tuple(line.rstrip('\r') for line in lines)


def _check_slice(corpus_view, hyps):
    if len(hyps) != len(corpus_view.records):
        raise AlignmentError(len(hyps), len(corpus_view.records))
    if not corpus_view.records:
        raise EmptyViewError()


def bleu_statistics(corpus_view, hyps):
    """BLEU sufficient statistics against both reference sets"""
    correct, wrong = BleuStatistics(), BleuStatistics()
    for record, hyp in zip(corpus_view.records, hyps):
        hyp_tokens = tokenize(hyp)
        correct.add(hyp_tokens, tokenize(record.ref_correct))
        wrong.add(hyp_tokens, tokenize(record.ref_wrong))
    return correct, wrong


def bleu_triplet(corpus_view, hyps):
    _check_slice(corpus_view, hyps)
    correct, wrong = bleu_statistics(corpus_view, hyps)
    return MetricTriplet.from_pair(correct.score().score, wrong.score().score)


def accuracy_counts(corpus_view, hyps):
    """Pooled term-accuracy counts against the correct and the wrong forms"""
    correct, wrong = AccuracyScore(), AccuracyScore()
    for record, hyp in zip(corpus_view.records, hyps):
        hyp_tokens = tokenize(hyp)
        correct += term_accuracy(hyp_tokens, record.correct_forms)
        wrong += term_accuracy(hyp_tokens, record.wrong_forms)
    return correct, wrong


def accuracy_triplet(corpus_view, hyps):
    """
    Micro-averaged term accuracy: matched words are pooled over the view
    before dividing, values are fractions in [0, 1]
    """
    _check_slice(corpus_view, hyps)
    correct, wrong = accuracy_counts(corpus_view, hyps)
    if correct.total == 0:
        raise EmptyViewError('set of gender terms')
    return MetricTriplet.from_pair(correct.value, wrong.value)


def _score_cell(split, category, corpus_view, hyps):
    if not corpus_view.records:
        return ReportCell(split=split, category=category)

    correct_stats, wrong_stats = bleu_statistics(corpus_view, hyps)
    bleu_correct, bleu_wrong = correct_stats.score(), wrong_stats.score()
    accuracy_correct, accuracy_wrong = accuracy_counts(corpus_view, hyps)
    accuracy = None
    if accuracy_correct.total:
        accuracy = MetricTriplet.from_pair(accuracy_correct.value, accuracy_wrong.value)

    return ReportCell(
        split=split,
        category=category,
        n_records=len(corpus_view.records),
        n_terms=accuracy_correct.total,
        matched_correct=accuracy_correct.matched,
        matched_wrong=accuracy_wrong.matched,
        bleu=MetricTriplet.from_pair(bleu_correct.score, bleu_wrong.score),
        accuracy=accuracy,
        bleu_correct_degenerate=bleu_correct.degenerate,
        bleu_wrong_degenerate=bleu_wrong.degenerate,
    )


def evaluate(corpus, hyps, exclude=(), corpus_name='', hypotheses_name=''):
    """
    Fill every {All, Feminine, Masculine} x {Overall, Cat1, Cat2} cell.

    Hypotheses are aligned with the records by position. Records whose id
    is in ``exclude`` are dropped together with their hypothesis; cells
    whose view is empty are left absent.
    """
    hyps = tuple(hyps)
    if len(hyps) != len(corpus.records):
        raise AlignmentError(len(hyps), len(corpus.records))

    exclude = set(exclude)
    pairs = [(record, hyp) for record, hyp in zip(corpus.records, hyps) if record.id not in exclude]
    n_excluded = len(corpus.records) - len(pairs)
    if n_excluded:
        logger.warning("Excluding %d records from evaluation", n_excluded)

    cells = []
    for split in SPLITS:
        for category in CATEGORIES:
            selector = Selector(category=CATEGORY_VALUES[category], form=SPLIT_FORMS[split])
            selected = [(record, hyp) for record, hyp in pairs if selector(record)]
            view = corpus.with_records(record for record, _ in selected)
            cell = _score_cell(split, category, view, [hyp for _, hyp in selected])
            logger.debug("Cell %s/%s: %d records", split, category, cell.n_records)
            cells.append(cell)

    report = EvalReport(
        corpus=corpus_name or corpus.name,
        hypotheses=hypotheses_name,
        language_pair=corpus.language_pair,
        n_records=len(pairs),
        n_excluded=n_excluded,
        cells=tuple(cells),
    )
    logger.info("Evaluated %d records (%d excluded)", len(pairs), n_excluded)
    return report
