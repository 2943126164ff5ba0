"""
Corpus validation.

Issues are returned, not raised: an Error marks a broken record invariant,
a Warning marks something legal but suspicious.
"""
import logging
from collections import Counter

from metrics.tokenizer import fold, tokenize

from .records import HEADER_RECORD_ID, IssueKind, IssueSeverity, ValidationIssue

logger = logging.getLogger(__name__)

LINE_BREAKS = ('\t', '\n', '\r')
RESERVED = (';', ':')


def _error(record_id, kind, message):
    return ValidationIssue(record_id, IssueSeverity.ERROR, kind, message)


def _warning(record_id, kind, message):
    return ValidationIssue(record_id, IssueSeverity.WARNING, kind, message)


def _check_fields(record):
    issues = []
    for name in ('id', 'talk', 'source', 'ref_correct', 'ref_wrong'):
        value = getattr(record, name)
        if any(char in value for char in LINE_BREAKS):
            issues.append(_error(record.id, IssueKind.BAD_FIELD, f"{name} contains a tab or line break"))
    for name in ('id', 'talk'):
        value = getattr(record, name)
        if any(char in value for char in RESERVED):
            issues.append(_error(record.id, IssueKind.BAD_FIELD, f"{name} contains ';' or ':'"))
    if not record.id:
        issues.append(_error(record.id, IssueKind.BAD_FIELD, 'empty id'))
    for name in ('source', 'ref_correct', 'ref_wrong'):
        value = getattr(record, name)
        if not value.strip():
            issues.append(_error(record.id, IssueKind.BAD_FIELD, f"{name} is empty"))
        elif any(char in value for char in RESERVED):
            issues.append(_warning(record.id, IssueKind.BAD_FIELD, f"{name} contains ';' or ':'"))
    if not record.terms:
        issues.append(_error(record.id, IssueKind.BAD_FIELD, 'no gender terms annotated'))
    for term in record.terms:
        for form in (term.correct_form, term.wrong_form):
            if any(char in form for char in RESERVED + LINE_BREAKS):
                issues.append(_error(record.id, IssueKind.BAD_FIELD, f"term form {form!r} contains a delimiter"))
            elif len(tokenize(form)) != 1:
                issues.append(_error(record.id, IssueKind.BAD_FIELD, f"term form {form!r} is not a single token"))
    return issues


def _check_terms(record, correct_tokens, wrong_tokens):
    issues = []
    correct_counts = Counter(fold(token) for token in correct_tokens)
    wrong_counts = Counter(fold(token) for token in wrong_tokens)
    pairs = Counter((fold(t.correct_form), fold(t.wrong_form)) for t in record.terms)

    for (correct_form, wrong_form), multiplicity in pairs.items():
        if correct_form == wrong_form:
            issues.append(_error(
                record.id, IssueKind.IDENTICAL_PAIR,
                f"term pair {correct_form}:{wrong_form} swaps to an identical form",
            ))
        elif (correct_counts[wrong_form] and wrong_counts[correct_form]
              and correct_counts[correct_form] and wrong_counts[wrong_form]):
            issues.append(_warning(
                record.id, IssueKind.AMBIGUOUS_TERM,
                f"both {correct_form} and {wrong_form} occur in both references",
            ))

    needed_correct = Counter(fold(t.correct_form) for t in record.terms)
    needed_wrong = Counter(fold(t.wrong_form) for t in record.terms)
    for form, needed in needed_correct.items():
        if correct_counts[form] < needed:
            issues.append(_error(
                record.id, IssueKind.TERM_NOT_IN_REF,
                f"{form!r} annotated {needed}x but found {correct_counts[form]}x in the correct reference",
            ))
    for form, needed in needed_wrong.items():
        if wrong_counts[form] < needed:
            issues.append(_error(
                record.id, IssueKind.TERM_NOT_IN_REF,
                f"{form!r} annotated {needed}x but found {wrong_counts[form]}x in the wrong reference",
            ))
    return issues


def _check_alignment(record, correct_tokens, wrong_tokens):
    if len(correct_tokens) != len(wrong_tokens):
        return [_error(
            record.id, IssueKind.REF_LENGTH_MISMATCH,
            f"correct reference has {len(correct_tokens)} tokens, wrong reference {len(wrong_tokens)}",
        )]

    swappable = [t for t in record.terms if fold(t.correct_form) != fold(t.wrong_form)]
    if correct_tokens == wrong_tokens and swappable:
        return [_error(
            record.id, IssueKind.DIFF_OUTSIDE_TERMS, "wrong reference is identical to the correct reference",
        )]

    differences = Counter(
        (fold(c), fold(w)) for c, w in zip(correct_tokens, wrong_tokens) if c != w
    )
    pairs = Counter((fold(t.correct_form), fold(t.wrong_form)) for t in record.terms)
    # Identical pairs are reported separately and can never show up as a difference.
    pairs = Counter({pair: n for pair, n in pairs.items() if pair[0] != pair[1]})
    correct_counts = Counter(fold(token) for token in correct_tokens)
    wrong_counts = Counter(fold(token) for token in wrong_tokens)
    needed_correct = Counter(fold(t.correct_form) for t in record.terms)
    needed_wrong = Counter(fold(t.wrong_form) for t in record.terms)

    issues = []
    for (c, w), n in sorted((differences - pairs).items()):
        issues.append(_error(
            record.id, IssueKind.DIFF_OUTSIDE_TERMS,
            f"references differ at {c!r}/{w!r} ({n}x) which is not an annotated term pair",
        ))
    for (c, w), n in sorted((pairs - differences).items()):
        if correct_counts[c] < needed_correct[c] or wrong_counts[w] < needed_wrong[w]:
            continue  # already reported as TermNotInRef
        issues.append(_error(
            record.id, IssueKind.DIFF_OUTSIDE_TERMS,
            f"term pair {c}:{w} ({n}x) is not reflected by a difference between the references",
        ))
    return issues


def validate_record(record):
    issues = _check_fields(record)
    correct_tokens = tokenize(record.ref_correct)
    wrong_tokens = tokenize(record.ref_wrong)
    issues.extend(_check_terms(record, correct_tokens, wrong_tokens))
    issues.extend(_check_alignment(record, correct_tokens, wrong_tokens))
    return issues


def validate(corpus):
    """
    Check every record invariant; returns a list of ``ValidationIssue``
    """
    issues = []
    for column in corpus.extra_columns:
        issues.append(_warning(HEADER_RECORD_ID, IssueKind.UNKNOWN_COLUMN, f"column {column!r} is ignored"))
    if not corpus.records:
        issues.append(_error(HEADER_RECORD_ID, IssueKind.BAD_FIELD, 'corpus has no records'))

    seen = set()
    for record in corpus.records:
        if record.id in seen:
            issues.append(_error(record.id, IssueKind.DUPLICATE_ID, f"id {record.id!r} is used more than once"))
        seen.add(record.id)
        issues.extend(validate_record(record))

    n_errors = sum(1 for issue in issues if issue.is_error)
    logger.info("Validated %d records: %d errors, %d warnings", len(corpus.records), n_errors, len(issues) - n_errors)
    return issues


def has_errors(issues):
    return any(issue.is_error for issue in issues)


def records_with_errors(issues):
    return {issue.record_id for issue in issues if issue.is_error and issue.record_id != HEADER_RECORD_ID}
