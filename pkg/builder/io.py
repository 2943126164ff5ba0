"""
Readers and writers for the builder's resource and exchange files.

All files are UTF-8 TSV with a header row; lines starting with ``#`` are
comments. A ``# version: ...`` comment in a rules file names the rule set.
"""
import csv
import logging
from pathlib import Path

from django.conf import settings

from corpus.exceptions import CorpusFormatError
from corpus.records import Category, GenderForm, SpeakerGender
from corpus.tsv import (
    CANONICAL_HEADER, TERM_DELIMITER, TSV_DIALECT, decode_category, decode_form, decode_speaker, read_text,
)

from .mining import Candidate, SentencePair
from .rules import MiningRule, WordLists
from .swapping import SuffixRule, SwapLexicon

logger = logging.getLogger(__name__)

RULES_HEADER = ('RULE-ID', 'LANG-PAIR', 'CATEGORY', 'FORM', 'SRC-PATTERN', 'TGT-PATTERN')
EXCEPTIONS_HEADER = ('LANG', 'MASC', 'FEM')
SUFFIX_HEADER = ('LANG', 'MASC-SUFFIX', 'FEM-SUFFIX', 'PRIORITY')
CANDIDATES_HEADER = CANONICAL_HEADER + ('RULE-ID', 'SPAN')


def resources_dir():
    return Path(settings.MUSTSHE_RESOURCES_DIR)


def target_language(language):
    """``en-it`` -> ``it``; a bare language code is returned unchanged"""
    return language.split('-')[-1].lower()


def _rows(text, required, what):
    """Yield (line number, row dict) for the non-comment rows of a TSV text"""
    numbered = [(n, line) for n, line in enumerate(text.split('\n'), start=1)
                if line.strip() and not line.lstrip().startswith('#')]
    if not numbered:
        raise CorpusFormatError(f"{what} has no header row")
    reader = csv.DictReader((line.rstrip('\r') for _, line in numbered), **TSV_DIALECT)
    missing = [column for column in required if column not in (reader.fieldnames or [])]
    if missing:
        raise CorpusFormatError(f"{what} header is missing {', '.join(missing)}", line=numbered[0][0])
    for (line_number, _), row in zip(numbered[1:], reader):
        if None in row or any(row[column] is None for column in required):
            raise CorpusFormatError(f"{what}: wrong number of fields", line=line_number)
        yield line_number, row


def version_of(text):
    for line in text.split('\n'):
        stripped = line.strip()
        if stripped.startswith('#') and stripped[1:].strip().lower().startswith('version:'):
            return stripped[1:].strip()[len('version:'):].strip()
    return ''


def parse_rules(text):
    rules = []
    for line_number, row in _rows(text, RULES_HEADER, 'rules file'):
        try:
            rules.append(MiningRule(
                rule_id=row['RULE-ID'].strip(),
                language_pair=row['LANG-PAIR'].strip().lower(),
                category=decode_category(row['CATEGORY']),
                form=decode_form(row['FORM']),
                source_pattern=row['SRC-PATTERN'],
                target_pattern=row['TGT-PATTERN'],
            ))
        except ValueError as e:
            raise CorpusFormatError(str(e), line=line_number)
    return rules


def load_rules(path=None, language_pair=None):
    """Return (version, rules), keeping only ``language_pair`` when given"""
    text = read_text(path or resources_dir() / 'rules.tsv')
    rules = parse_rules(text)
    if language_pair:
        rules = [rule for rule in rules if rule.language_pair == language_pair.lower()]
    version = version_of(text)
    logger.info("Loaded %d mining rules (version %s)", len(rules), version or 'unversioned')
    return version, rules


def read_wordlist(path):
    path = Path(path)
    if not path.exists():
        return ()
    entries = []
    for line in read_text(path).split('\n'):
        line = line.strip()
        if line and not line.startswith('#'):
            entries.append(line)
    return tuple(entries)


def load_wordlists(directory=None, language_pair='en-it'):
    """
    ``occupations.txt`` (source nouns) at the top of ``directory`` and
    ``<lang>/adjectives_f.txt``, ``<lang>/adjectives_m.txt`` for the target
    """
    directory = Path(directory or resources_dir() / 'wordlists')
    language = target_language(language_pair)
    return WordLists(
        occupations=read_wordlist(directory / 'occupations.txt'),
        adjectives_f=read_wordlist(directory / language / 'adjectives_f.txt'),
        adjectives_m=read_wordlist(directory / language / 'adjectives_m.txt'),
    )


def load_lexicon(directory=None):
    directory = Path(directory or resources_dir() / 'lexicon')
    exceptions = [
        (row['LANG'].strip().lower(), row['MASC'].strip(), row['FEM'].strip())
        for _, row in _rows(read_text(directory / 'exceptions.tsv'), EXCEPTIONS_HEADER, 'exceptions file')
    ]
    suffix_rules = []
    for line_number, row in _rows(read_text(directory / 'suffix_rules.tsv'), SUFFIX_HEADER, 'suffix rules file'):
        try:
            priority = int(row['PRIORITY'])
        except ValueError:
            raise CorpusFormatError(f"priority {row['PRIORITY']!r} is not an integer", line=line_number)
        suffix_rules.append((
            row['LANG'].strip().lower(),
            SuffixRule(row['MASC-SUFFIX'].strip(), row['FEM-SUFFIX'].strip(), priority),
        ))
    return SwapLexicon.build(exceptions, suffix_rules)


def parse_pairs(text):
    """Parallel text as TSV with SRC and TGT columns and an optional TALK column"""
    pairs = []
    for _, row in _rows(text, ('SRC', 'TGT'), 'parallel text'):
        pairs.append(SentencePair(source=row['SRC'], target=row['TGT'], talk=(row.get('TALK') or '').strip()))
    return pairs


def parse_speakers(text):
    """Side table TALK -> speaker gender"""
    speakers = {}
    for line_number, row in _rows(text, ('TALK', 'SPEAKER'), 'speaker table'):
        try:
            speakers[row['TALK'].strip()] = decode_speaker(row['SPEAKER'])
        except ValueError as e:
            raise CorpusFormatError(str(e), line=line_number)
    return speakers


def _encode_spans(spans):
    return ','.join(f"{start}-{end}" for start, end in spans)


def _decode_spans(value):
    spans = []
    for item in value.split(','):
        start, sep, end = item.strip().partition('-')
        if not sep or not start.isdigit() or not end.isdigit():
            raise ValueError(f"bad span {item!r}: expected start-end")
        spans.append((int(start), int(end)))
    return tuple(spans)


def serialize_candidates(candidates):
    lines = ['\t'.join(CANDIDATES_HEADER)]
    for candidate in candidates:
        lines.append('\t'.join([
            candidate.candidate_id,
            candidate.talk,
            candidate.source,
            candidate.target,
            '',
            SpeakerGender(candidate.speaker).value if candidate.speaker else '',
            GenderForm(candidate.form).value,
            Category(candidate.category).value,
            TERM_DELIMITER.join(candidate.terms),
            candidate.rule_id,
            _encode_spans(candidate.matched_spans),
        ]))
    return '\n'.join(lines) + '\n'


def parse_candidates(text):
    """
    Read a candidates TSV in file order; the row position becomes the
    candidate's ``pair_index`` and the ID column is kept as its identifier
    """
    candidates = []
    for index, (line_number, row) in enumerate(_rows(text, CANDIDATES_HEADER, 'candidates file')):
        try:
            speaker = row['SPEAKER'].strip()
            candidate = Candidate(
                source=row['SRC'],
                target=row['REF-C'],
                rule_id=row['RULE-ID'].strip(),
                category=decode_category(row['CATEGORY']),
                form=decode_form(row['FORM']),
                matched_spans=_decode_spans(row['SPAN']),
                speaker=decode_speaker(speaker) if speaker else None,
                pair_index=index,
                talk=row['TALK'].strip(),
                identifier=row['ID'].strip(),
            )
        except ValueError as e:
            raise CorpusFormatError(str(e), line=line_number)
        for start, end in candidate.matched_spans:
            if not 0 <= start < end <= len(candidate.target):
                raise CorpusFormatError(f"span {start}-{end} is outside the target", line=line_number)
        candidates.append(candidate)
    return candidates
