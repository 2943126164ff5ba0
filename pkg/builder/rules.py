"""
Mining rules: paired source/target regular expressions labelled with the
category and gender form they detect.

Patterns may reference word lists through placeholders: ``{OCC}`` (source
occupation nouns), ``{ADJ_F}`` and ``{ADJ_M}`` (target adjectives). Each
placeholder expands to an alternation of the escaped entries bounded by
word boundaries. Backreferences are not part of the supported dialect.
"""
import logging
import re
from dataclasses import dataclass
from typing import Tuple

from django.core.exceptions import ValidationError

from corpus.records import Category, GenderForm

logger = logging.getLogger(__name__)

PLACEHOLDER = re.compile(r'\{([A-Za-z_]+)\}')
BACKREFERENCE = re.compile(r'\\[1-9]|\(\?P=|\\g<')
PATTERN_FLAGS = re.IGNORECASE


class PatternError(ValidationError):
    """
    Raised when one or more rules cannot be compiled; ``failures`` lists
    (rule id, reason) for every failing rule
    """

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__([f"rule {rule_id}: {reason}" for rule_id, reason in self.failures], code='pattern')


@dataclass(frozen=True)
class MiningRule:
    rule_id: str
    language_pair: str
    category: Category
    form: GenderForm
    source_pattern: str
    target_pattern: str


@dataclass(frozen=True)
class WordLists:
    occupations: Tuple[str, ...] = ()
    adjectives_f: Tuple[str, ...] = ()
    adjectives_m: Tuple[str, ...] = ()

    def entries(self, placeholder):
        return {
            'OCC': self.occupations,
            'ADJ_F': self.adjectives_f,
            'ADJ_M': self.adjectives_m,
        }.get(placeholder)


@dataclass(frozen=True)
class CompiledRule:
    rule: MiningRule
    source: re.Pattern
    target: re.Pattern

    @property
    def rule_id(self):
        return self.rule.rule_id


def expand_placeholders(pattern, lists):
    """
    Replace every ``{NAME}`` placeholder; raises ``ValueError`` naming an
    unknown placeholder or an empty word list
    """
    def replace(match):
        name = match.group(1)
        entries = lists.entries(name)
        if entries is None:
            raise ValueError(f"unknown placeholder {{{name}}}")
        words = sorted({entry.strip() for entry in entries if entry.strip()}, key=lambda w: (-len(w), w))
        if not words:
            raise ValueError(f"placeholder {{{name}}} expands to an empty word list")
        return r'\b(?:' + '|'.join(re.escape(word) for word in words) + r')\b'

    return PLACEHOLDER.sub(replace, pattern)


def compile_rule(rule, lists):
    compiled = []
    for side, pattern in (('source', rule.source_pattern), ('target', rule.target_pattern)):
        if BACKREFERENCE.search(pattern):
            raise ValueError(f"{side} pattern uses a backreference")
        expanded = expand_placeholders(pattern, lists)
        try:
            compiled.append(re.compile(expanded, PATTERN_FLAGS))
        except re.error as e:
            raise ValueError(f"{side} pattern does not compile: {e}")
    source, target = compiled
    if target.groups < 1:
        raise ValueError('target pattern has no capturing group for the gender-marked span')
    return CompiledRule(rule=rule, source=source, target=target)


def compile_patterns(rules, lists):
    """
    Compile ``rules`` against ``lists``, ordered by rule id.

    Every rule is attempted; a single ``PatternError`` reports all failures.
    """
    rules = list(rules)
    if not rules:
        raise PatternError([('-', 'no mining rules given')])

    compiled, failures, seen = [], [], set()
    for rule in rules:
        if rule.rule_id in seen:
            failures.append((rule.rule_id, 'duplicate rule id'))
            continue
        seen.add(rule.rule_id)
        try:
            compiled.append(compile_rule(rule, lists))
        except ValueError as e:
            failures.append((rule.rule_id, str(e)))
    if failures:
        raise PatternError(failures)

    logger.info("Compiled %d mining rules", len(compiled))
    return tuple(sorted(compiled, key=lambda item: item.rule_id))
