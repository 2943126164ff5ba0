"""
Evaluation report types and their renderings.
"""
import io
from dataclasses import dataclass
from typing import Optional, Tuple

from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

SPLITS = ('All', 'Feminine', 'Masculine')
CATEGORIES = ('Overall', 'Cat1', 'Cat2')
CATEGORY_TITLES = {
    'Overall': 'Overall',
    'Cat1': 'Category 1',
    'Cat2': 'Category 2',
}
REPORT_FORMATS = ('markdown', 'md', 'tsv', 'structured', 'json')
ABSENT = '–'


@dataclass(frozen=True)
class MetricTriplet:
    correct: float
    wrong: float
    diff: float

    @classmethod
    def from_pair(cls, correct, wrong):
        return cls(correct=correct, wrong=wrong, diff=correct - wrong)

    def swapped(self):
        return MetricTriplet.from_pair(self.wrong, self.correct)


@dataclass(frozen=True)
class ReportCell:
    split: str
    category: str
    n_records: int = 0
    n_terms: int = 0
    matched_correct: int = 0
    matched_wrong: int = 0
    bleu: Optional[MetricTriplet] = None
    accuracy: Optional[MetricTriplet] = None
    bleu_correct_degenerate: Optional[str] = None
    bleu_wrong_degenerate: Optional[str] = None

    @property
    def is_absent(self):
        return self.n_records == 0


@dataclass(frozen=True)
class EvalReport:
    corpus: str
    hypotheses: str
    language_pair: str
    n_records: int
    cells: Tuple[ReportCell, ...]
    n_excluded: int = 0

    def cell(self, split='All', category='Overall'):
        for cell in self.cells:
            if cell.split == split and cell.category == category:
                return cell
        raise KeyError((split, category))


def render_report(report, fmt='markdown'):
    if fmt in ('markdown', 'md'):
        return _render_markdown(report)
    if fmt == 'tsv':
        return _render_tsv(report)
    if fmt in ('structured', 'json'):
        return render_structured(report)
    raise ValueError(f"unknown report format {fmt!r}")


def _format_bleu(value):
    return f"{value:.1f}"


def _format_accuracy(value):
    return f"{100 * value:.1f}"


def _markdown_table(report, category, metric, formatter):
    lines = [
        f"### {CATEGORY_TITLES[category]}",
        '',
        '| | Correct | Wrong | Diff |',
        '|---|---:|---:|---:|',
    ]
    for split in SPLITS:
        triplet = getattr(report.cell(split, category), metric)
        if triplet is None:
            values = [ABSENT] * 3
        else:
            values = [formatter(triplet.correct), formatter(triplet.wrong), formatter(triplet.diff)]
        lines.append(f"| {split} | {' | '.join(values)} |")
    return lines


def _render_markdown(report):
    lines = [f"# Evaluation of {report.hypotheses or 'hypotheses'} on {report.corpus or 'corpus'}", '']
    if report.language_pair:
        lines.append(f"Language pair: {report.language_pair}")
    lines.append(f"Records: {report.n_records}")
    if report.n_excluded:
        lines.append(f"Excluded records: {report.n_excluded}")
    for title, metric, formatter in (('BLEU', 'bleu', _format_bleu), ('Accuracy (%)', 'accuracy', _format_accuracy)):
        lines += ['', f"## {title}"]
        for category in CATEGORIES:
            lines.append('')
            lines += _markdown_table(report, category, metric, formatter)
    return '\n'.join(lines) + '\n'


def _render_tsv(report):
    lines = ['\t'.join(('split', 'metric', 'correct', 'wrong', 'diff', 'n_records', 'n_terms'))]
    for cell in report.cells:
        for metric in ('bleu', 'accuracy'):
            triplet = getattr(cell, metric)
            values = ['', '', ''] if triplet is None else [
                f"{triplet.correct:.4f}", f"{triplet.wrong:.4f}", f"{triplet.diff:.4f}",
            ]
            lines.append('\t'.join(
                [f"{cell.split}/{cell.category}", metric, *values, str(cell.n_records), str(cell.n_terms)]
            ))
    return '\n'.join(lines) + '\n'


def render_structured(report):
    from .serializers import EvalReportSerializer

    data = EvalReportSerializer(report).data
    rendered = JSONRenderer().render(data, renderer_context={'indent': 2})
    return rendered.decode('utf-8') + '\n'


def _triplet(data):
    if data is None:
        return None
    return MetricTriplet(correct=data['correct'], wrong=data['wrong'], diff=data['diff'])


def report_from_data(data):
    """Build an ``EvalReport`` from serializer-validated data"""
    cells = tuple(
        ReportCell(
            split=cell['split'],
            category=cell['category'],
            n_records=cell['n_records'],
            n_terms=cell['n_terms'],
            matched_correct=cell['matched_correct'],
            matched_wrong=cell['matched_wrong'],
            bleu=_triplet(cell.get('bleu')),
            accuracy=_triplet(cell.get('accuracy')),
            bleu_correct_degenerate=cell.get('bleu_correct_degenerate'),
            bleu_wrong_degenerate=cell.get('bleu_wrong_degenerate'),
        )
        for cell in data['cells']
    )
    return EvalReport(
        corpus=data['corpus'],
        hypotheses=data['hypotheses'],
        language_pair=data['language_pair'],
        n_records=data['n_records'],
        n_excluded=data['n_excluded'],
        cells=cells,
    )


def parse_structured(text):
    """
    Read a structured rendering back; raises
    ``rest_framework.exceptions.ValidationError`` on malformed documents
    """
    from .serializers import EvalReportSerializer

    data = JSONParser().parse(io.BytesIO(text.encode('utf-8')))
    serializer = EvalReportSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return report_from_data(serializer.validated_data)
