"""
Annotated corpus data model.

A corpus is an ordered, immutable collection of triplet records: the source
segment, its correct reference and a "wrong" reference that differs only in
the gender-marked words listed in ``terms``.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

from django.db import models


class Category(models.TextChoices):
    """Where the information needed to disambiguate gender lives"""
    CAT1 = '1', 'Category 1'  # the speaker's own gender (audio)
    CAT2 = '2', 'Category 2'  # the utterance content


class GenderForm(models.TextChoices):
    FEMININE = 'F', 'Feminine'
    MASCULINE = 'M', 'Masculine'


class SpeakerGender(models.TextChoices):
    FEMALE = 'F', 'Female'
    MALE = 'M', 'Male'


class IssueSeverity(models.TextChoices):
    ERROR = 'error', 'Error'
    WARNING = 'warning', 'Warning'


class IssueKind(models.TextChoices):
    TERM_NOT_IN_REF = 'TermNotInRef', 'Term not in reference'
    REF_LENGTH_MISMATCH = 'RefLengthMismatch', 'Reference length mismatch'
    DIFF_OUTSIDE_TERMS = 'DiffOutsideTerms', 'Difference outside annotated terms'
    IDENTICAL_PAIR = 'IdenticalPair', 'Identical term pair'
    DUPLICATE_ID = 'DuplicateId', 'Duplicate id'
    BAD_FIELD = 'BadField', 'Bad field'
    AMBIGUOUS_TERM = 'AmbiguousTerm', 'Ambiguous term'
    UNKNOWN_COLUMN = 'UnknownColumn', 'Unknown column'


HEADER_RECORD_ID = '<header>'


@dataclass(frozen=True)
class GenderTermPair:
    correct_form: str
    wrong_form: str

    def __str__(self):
        return f"{self.correct_form}:{self.wrong_form}"


@dataclass(frozen=True)
class TripletRecord:
    id: str
    talk: str
    source: str
    ref_correct: str
    ref_wrong: str
    speaker: SpeakerGender
    form: GenderForm
    category: Category
    terms: tuple = ()

    @property
    def correct_forms(self):
        return [term.correct_form for term in self.terms]

    @property
    def wrong_forms(self):
        return [term.wrong_form for term in self.terms]

    def swapped(self):
        """Return the record with correct and wrong sides exchanged"""
        return TripletRecord(
            id=self.id,
            talk=self.talk,
            source=self.source,
            ref_correct=self.ref_wrong,
            ref_wrong=self.ref_correct,
            speaker=self.speaker,
            form=self.form,
            category=self.category,
            terms=tuple(GenderTermPair(t.wrong_form, t.correct_form) for t in self.terms),
        )


@dataclass(frozen=True)
class Corpus:
    """
    Ordered records of one language pair.

    Filtered views are corpora too; only a parsed corpus is required to be
    non-empty.
    """
    language_pair: str
    records: tuple = ()
    extra_columns: tuple = ()
    name: str = ''

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __bool__(self):
        return bool(self.records)

    @property
    def ids(self):
        return [record.id for record in self.records]

    def filter(self, selector):
        return filter_corpus(self, selector)

    def with_records(self, records):
        return Corpus(
            language_pair=self.language_pair,
            records=tuple(records),
            extra_columns=self.extra_columns,
            name=self.name,
        )

    def swapped(self):
        return self.with_records(record.swapped() for record in self.records)


@dataclass(frozen=True)
class Selector:
    """
    Predicate over record metadata; unset fields match anything
    """
    category: Optional[Category] = None
    form: Optional[GenderForm] = None
    speaker: Optional[SpeakerGender] = None

    def __call__(self, record):
        if self.category is not None and record.category != self.category:
            return False
        if self.form is not None and record.form != self.form:
            return False
        if self.speaker is not None and record.speaker != self.speaker:
            return False
        return True

    def __invert__(self):
        return lambda record: not self(record)

    def describe(self):
        parts = []
        if self.category is not None:
            parts.append(Category(self.category).label)
        if self.form is not None:
            parts.append(GenderForm(self.form).label)
        if self.speaker is not None:
            parts.append(f"{SpeakerGender(self.speaker).label} speaker")
        return ' / '.join(parts) or 'All'


def filter_corpus(corpus, selector: Callable):
    """Order-preserving view over the records matching ``selector``"""
    return corpus.with_records(record for record in corpus.records if selector(record))


@dataclass(frozen=True)
class ValidationIssue:
    record_id: str
    severity: IssueSeverity
    kind: IssueKind
    message: str

    @property
    def is_error(self):
        return self.severity == IssueSeverity.ERROR

    def __str__(self):
        return f"{self.severity.label.upper()} {self.record_id} [{self.kind.value}] {self.message}"


@dataclass(frozen=True)
class CorpusStats:
    counts: dict = field(default_factory=dict)
    speaker_counts: dict = field(default_factory=dict)
    total_records: int = 0
    total_term_tokens: int = 0
    speaker_form_agreement: dict = field(default_factory=dict)

    def __add__(self, other):
        if not isinstance(other, CorpusStats):
            return NotImplemented
        return CorpusStats(
            counts={key: self.counts.get(key, 0) + other.counts.get(key, 0)
                    for key in self.counts.keys() | other.counts.keys()},
            speaker_counts={key: self.speaker_counts.get(key, 0) + other.speaker_counts.get(key, 0)
                            for key in self.speaker_counts.keys() | other.speaker_counts.keys()},
            total_records=self.total_records + other.total_records,
            total_term_tokens=self.total_term_tokens + other.total_term_tokens,
            speaker_form_agreement={
                key: self.speaker_form_agreement.get(key, 0) + other.speaker_form_agreement.get(key, 0)
                for key in self.speaker_form_agreement.keys() | other.speaker_form_agreement.keys()
            },
        )

    def count(self, category, form):
        return self.counts.get((Category(category), GenderForm(form)), 0)

    def category_total(self, category):
        return sum(self.count(category, form) for form in GenderForm)

    def form_total(self, form):
        return sum(self.count(category, form) for category in Category)
