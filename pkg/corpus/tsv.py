"""
Reading and writing the corpus TSV format.

Canonical header:

    ID  TALK  SRC  REF-C  REF-W  SPEAKER  FORM  CATEGORY  TERMS

SPEAKER and FORM are F/M, CATEGORY is 1/2 and TERMS is a ``;``-separated list
of ``correct:wrong`` pairs. Other layouts (such as the official release) are
read through a named column mapping from ``settings.MUSTSHE_COLUMN_MAPPINGS``
or a JSON file with the same structure.
"""
import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from .exceptions import CorpusFormatError
from .records import Category, Corpus, GenderForm, GenderTermPair, SpeakerGender, TripletRecord

logger = logging.getLogger(__name__)

BOM = '\ufeff'
TERM_DELIMITER = ';'
CANONICAL_FIELDS = (
    'id', 'talk', 'source', 'ref_correct', 'ref_wrong', 'speaker', 'form', 'category', 'terms',
)
CANONICAL_HEADER = ('ID', 'TALK', 'SRC', 'REF-C', 'REF-W', 'SPEAKER', 'FORM', 'CATEGORY', 'TERMS')
# Tab-delimited; quote characters are literal.
TSV_DIALECT = {'delimiter': '\t', 'quoting': csv.QUOTE_NONE, 'strict': True}


@dataclass(frozen=True)
class ColumnMapping:
    name: str
    columns: dict
    term_separator: str = ':'

    @classmethod
    def from_dict(cls, name, data):
        columns = dict(data.get('columns', {}))
        missing = [field_name for field_name in CANONICAL_FIELDS if not columns.get(field_name)]
        if missing:
            raise CorpusFormatError(f"column mapping {name!r} does not name a column for: {', '.join(missing)}")
        separator = data.get('term_separator', ':')
        if not separator:
            raise CorpusFormatError(f"column mapping {name!r} has an empty term separator")
        return cls(name=name, columns=columns, term_separator=separator)

    @property
    def required_headers(self):
        seen = []
        for field_name in CANONICAL_FIELDS:
            header = self.columns[field_name]
            if header not in seen:
                seen.append(header)
        return seen


def get_column_mapping(name_or_path=None):
    """
    Resolve a mapping by settings name, or load it from a JSON file path
    """
    name_or_path = name_or_path or 'canonical'
    mappings = getattr(settings, 'MUSTSHE_COLUMN_MAPPINGS', {})
    if name_or_path in mappings:
        return ColumnMapping.from_dict(name_or_path, mappings[name_or_path])
    path = Path(name_or_path)
    if path.suffix == '.json' or path.exists():
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise CorpusFormatError(f"column mapping file {path} is not valid JSON: {e}")
        return ColumnMapping.from_dict(path.name, data)
    known = ', '.join(sorted(mappings))
    raise CorpusFormatError(f"unknown column mapping {name_or_path!r} (known: {known})")


CANONICAL_MAPPING = ColumnMapping(
    name='canonical',
    columns=dict(zip(CANONICAL_FIELDS, CANONICAL_HEADER)),
    term_separator=':',
)


def _speaker_aliases():
    aliases = {}
    for value, spellings in getattr(settings, 'MUSTSHE_SPEAKER_ALIASES', {}).items():
        for spelling in spellings:
            aliases[spelling.lower()] = SpeakerGender(value)
    for value in SpeakerGender.values:
        aliases.setdefault(value.lower(), SpeakerGender(value))
    return aliases


def decode_speaker(value, aliases=None):
    aliases = aliases if aliases is not None else _speaker_aliases()
    try:
        return aliases[value.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown speaker gender {value!r}")


def decode_category(value):
    value = value.strip()
    if value in Category.values:
        return Category(value)
    # Combined codes such as "1F".
    if len(value) == 2 and value[0] in Category.values and value[1].upper() in GenderForm.values:
        return Category(value[0])
    raise ValueError(f"unknown category {value!r}")


def decode_form(value):
    value = value.strip().upper()
    if value in GenderForm.values:
        return GenderForm(value)
    if len(value) == 2 and value[0] in Category.values and value[1] in GenderForm.values:
        return GenderForm(value[1])
    raise ValueError(f"unknown gender form {value!r}")


def decode_terms(value, separator=':'):
    terms = []
    for item in value.split(TERM_DELIMITER):
        item = item.strip()
        if not item:
            continue
        parts = item.split() if separator.isspace() else item.split(separator)
        if len(parts) != 2:
            raise ValueError(f"term {item!r} is not a correct{separator}wrong pair")
        correct_form, wrong_form = (part.strip() for part in parts)
        if not correct_form or not wrong_form:
            raise ValueError(f"term {item!r} has an empty side")
        terms.append(GenderTermPair(correct_form, wrong_form))
    return tuple(terms)


def encode_terms(terms):
    return TERM_DELIMITER.join(str(term) for term in terms)


def _split_lines(text):
    if text.startswith(BOM):
        text = text[len(BOM):]
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    return lines


def _read_rows(lines):
    """Yield (line number, fields) for each line, the header being line 1"""
    reader = csv.reader((line.rstrip('\r') for line in lines), **TSV_DIALECT)
    try:
        for fields in reader:
            yield reader.line_num, fields
    except csv.Error as e:
        raise CorpusFormatError(f"unreadable row: {e}", line=reader.line_num)


def parse_corpus(tsv_text, language_pair, mapping=None, name=''):
    """
    Parse corpus TSV text into an immutable ``Corpus``.

    Raises ``CorpusFormatError`` for an empty input, a header missing a
    mapped column, a row with the wrong number of fields or an undecodable
    value; the error names the line number (the header is line 1).
    """
    mapping = mapping or CANONICAL_MAPPING
    lines = _split_lines(tsv_text)
    if not lines or not lines[0].strip():
        raise CorpusFormatError('empty corpus file: a header row is required')

    rows = _read_rows(lines)
    _, header = next(rows)
    positions = {}
    for index, column in enumerate(header):
        positions.setdefault(column, index)
    for column in mapping.required_headers:
        if column not in positions:
            raise CorpusFormatError(f"header is missing column {column!r}", line=1)
    used = set(mapping.required_headers)
    extra_columns = tuple(column for column in header if column not in used)
    if extra_columns:
        logger.warning("Ignoring unknown columns: %s", ', '.join(extra_columns))

    aliases = _speaker_aliases()
    index_of = {field_name: positions[mapping.columns[field_name]] for field_name in CANONICAL_FIELDS}
    records = []
    for line_number, fields in rows:
        if not fields:
            raise CorpusFormatError('empty row', line=line_number)
        if len(fields) != len(header):
            raise CorpusFormatError(
                f"expected {len(header)} fields, found {len(fields)}", line=line_number
            )
        raw = {field_name: fields[index] for field_name, index in index_of.items()}
        try:
            record = TripletRecord(
                id=raw['id'].strip(),
                talk=raw['talk'].strip(),
                source=raw['source'],
                ref_correct=raw['ref_correct'],
                ref_wrong=raw['ref_wrong'],
                speaker=decode_speaker(raw['speaker'], aliases),
                form=decode_form(raw['form']),
                category=decode_category(raw['category']),
                terms=decode_terms(raw['terms'], mapping.term_separator),
            )
        except ValueError as e:
            raise CorpusFormatError(str(e), line=line_number)
        records.append(record)

    if not records:
        raise CorpusFormatError('corpus has a header but no records')
    logger.info("Parsed %d records (%s) with mapping %s", len(records), language_pair, mapping.name)
    return Corpus(language_pair=language_pair, records=tuple(records), extra_columns=extra_columns, name=name)


def serialize_corpus(corpus):
    """Write ``corpus`` in the canonical TSV layout"""
    lines = ['\t'.join(CANONICAL_HEADER)]
    for record in corpus.records:
        lines.append('\t'.join([
            record.id,
            record.talk,
            record.source,
            record.ref_correct,
            record.ref_wrong,
            SpeakerGender(record.speaker).value,
            GenderForm(record.form).value,
            Category(record.category).value,
            encode_terms(record.terms),
        ]))
    return '\n'.join(lines) + '\n'


def read_text(path):
    """Read a UTF-8 file, dropping a leading byte-order mark"""
    text = Path(path).read_text(encoding='utf-8')
    if text.startswith(BOM):
        text = text[len(BOM):]
    return text


def load_corpus(path, language_pair='', mapping=None):
    if not isinstance(mapping, ColumnMapping):
        mapping = get_column_mapping(mapping)
    path = Path(path)
    language_pair = language_pair or guess_language_pair(path)
    return parse_corpus(read_text(path), language_pair, mapping=mapping, name=path.name)


def guess_language_pair(path):
    """Pick "en-it" out of names like must-she.en-it.tsv; empty if absent"""
    for part in Path(path).name.split('.'):
        pieces = part.split('-')
        if len(pieces) == 2 and all(len(piece) == 2 and piece.isalpha() for piece in pieces):
            return part.lower()
    return ''
