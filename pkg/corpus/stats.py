import json
import logging
import unicodedata

from .exceptions import DuplicateKeyError
from .records import Category, CorpusStats, GenderForm, SpeakerGender

logger = logging.getLogger(__name__)

STATS_FORMATS = ('md', 'markdown', 'tsv', 'json')

# Speaker gender that coincides with each form.
MATCHING_SPEAKER = {
    GenderForm.FEMININE: SpeakerGender.FEMALE,
    GenderForm.MASCULINE: SpeakerGender.MALE,
}


def stats(corpus):
    """
    Exact counts per (category, form), per speaker gender and in total
    """
    counts = {(category, form): 0 for category in Category for form in GenderForm}
    speaker_counts = {speaker: 0 for speaker in SpeakerGender}
    agreement = {category: 0 for category in Category}
    total_terms = 0
    for record in corpus.records:
        counts[(Category(record.category), GenderForm(record.form))] += 1
        speaker_counts[SpeakerGender(record.speaker)] += 1
        if MATCHING_SPEAKER[GenderForm(record.form)] == record.speaker:
            agreement[Category(record.category)] += 1
        total_terms += len(record.terms)
    return CorpusStats(
        counts=counts,
        speaker_counts=speaker_counts,
        total_records=len(corpus.records),
        total_term_tokens=total_terms,
        speaker_form_agreement=agreement,
    )


def subset_key(record):
    """(talk, source) with NFC normalization and collapsed whitespace"""
    source = ' '.join(unicodedata.normalize('NFC', record.source).split())
    return record.talk.strip(), source


def _index(corpus):
    index = {}
    for record in corpus.records:
        key = subset_key(record)
        if key in index:
            raise DuplicateKeyError(key)
        index[key] = record
    return index


def common_subset(a, b):
    """
    Pairs of records of ``a`` and ``b`` sharing a (talk, source) key, in
    the order of ``a``
    """
    _index(a)
    other = _index(b)
    pairs = []
    for record in a.records:
        match = other.get(subset_key(record))
        if match is not None:
            pairs.append((record, match))
    logger.info("Common subset of %s and %s: %d pairs", a.language_pair, b.language_pair, len(pairs))
    return pairs


def stats_as_dict(corpus_stats, common=None):
    data = {
        'total_records': corpus_stats.total_records,
        'total_term_tokens': corpus_stats.total_term_tokens,
        'counts': {
            f"{category.value}{form.value}": corpus_stats.count(category, form)
            for category in Category for form in GenderForm
        },
        'speakers': {speaker.value: corpus_stats.speaker_counts.get(speaker, 0) for speaker in SpeakerGender},
        'speaker_form_agreement': {
            category.value: corpus_stats.speaker_form_agreement.get(category, 0) for category in Category
        },
    }
    if common is not None:
        data['common_subset'] = common
    return data


def render_stats(corpus_stats, fmt='md', language_pair='', common=None):
    if fmt in ('md', 'markdown'):
        return _render_markdown(corpus_stats, language_pair, common)
    if fmt == 'tsv':
        return _render_tsv(corpus_stats, common)
    if fmt == 'json':
        return json.dumps(stats_as_dict(corpus_stats, common), indent=2) + '\n'
    raise ValueError(f"unknown stats format {fmt!r}")


def _render_markdown(corpus_stats, language_pair, common):
    title = language_pair or 'corpus'
    lines = [
        f"## {title}",
        '',
        '| | Fem | Masc | Tot. |',
        '|---|---:|---:|---:|',
    ]
    for category in Category:
        lines.append(
            f"| Cat. {category.value} | {corpus_stats.count(category, GenderForm.FEMININE)} "
            f"| {corpus_stats.count(category, GenderForm.MASCULINE)} | {corpus_stats.category_total(category)} |"
        )
    lines.append(
        f"| Tot. | {corpus_stats.form_total(GenderForm.FEMININE)} "
        f"| {corpus_stats.form_total(GenderForm.MASCULINE)} | {corpus_stats.total_records} |"
    )
    lines += [
        '',
        f"Total: {corpus_stats.total_records} records ({corpus_stats.total_term_tokens} gender-marked words)",
        f"Speakers: Female {corpus_stats.speaker_counts.get(SpeakerGender.FEMALE, 0)} "
        f"/ Male {corpus_stats.speaker_counts.get(SpeakerGender.MALE, 0)}",
    ]
    for category in Category:
        total = corpus_stats.category_total(category)
        agreeing = corpus_stats.speaker_form_agreement.get(category, 0)
        lines.append(f"Speaker gender = form, {category.label}: {agreeing}/{total}")
    if common is not None:
        lines.append(f"Common subset: {common}")
    return '\n'.join(lines) + '\n'


def _render_tsv(corpus_stats, common):
    lines = ['measure\tvalue']
    for key, value in stats_as_dict(corpus_stats, common).items():
        if isinstance(value, dict):
            lines.extend(f"{key}_{sub_key}\t{sub_value}" for sub_key, sub_value in value.items())
        else:
            lines.append(f"{key}\t{value}")
    return '\n'.join(lines) + '\n'
