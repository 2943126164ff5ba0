"""
Morphological gender swapping for building wrong references.

An exception lexicon is consulted first; otherwise the highest-priority
suffix rule matching the end of the token is applied in the direction it
matches. Tokens neither source covers raise ``NoRuleError`` and must go to
human review, as do tokens whose suffix swap is an exception entry (the
exception would not swap back to them).
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError

from corpus.records import GenderTermPair
from metrics.tokenizer import fold, normalize, tokenize_with_spans

logger = logging.getLogger(__name__)


class LexiconError(ValidationError):
    def __init__(self, message):
        super().__init__(message, code='lexicon')


class NoRuleError(ValidationError):
    """
    Raised when no exception entry and no suffix rule covers ``token``
    """

    def __init__(self, token, language):
        self.token = token
        self.language = language
        super().__init__(f"no swap rule for {token!r} ({language})", code='no_rule')


class TermNotFoundError(ValidationError):
    def __init__(self, terms):
        self.terms = list(terms)
        super().__init__(
            [f"term {term!r} not found in the reference" for term in self.terms], code='term_not_found',
        )


class SwapError(ValidationError):
    """
    Aggregates every ``NoRuleError`` raised while swapping one reference
    """

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__([failure.messages[0] for failure in self.failures], code='swap')

    @property
    def tokens(self):
        return [failure.token for failure in self.failures]


@dataclass(frozen=True)
class SuffixRule:
    masculine: str
    feminine: str
    priority: int


@dataclass
class SwapLexicon:
    """
    Per-language exception pairs (kept in both directions) and suffix
    rules (highest priority first)
    """
    exceptions: dict = field(default_factory=dict)
    suffix_rules: dict = field(default_factory=dict)

    @classmethod
    def build(cls, exception_pairs=(), suffix_rules=()):
        """
        ``exception_pairs``: (language, masculine, feminine) triples;
        ``suffix_rules``: (language, SuffixRule) pairs
        """
        exceptions = defaultdict(dict)
        for language, masculine, feminine in exception_pairs:
            masculine, feminine = normalize(masculine).lower(), normalize(feminine).lower()
            if masculine == feminine:
                raise LexiconError(f"{language}: exception {masculine!r} swaps to itself")
            table = exceptions[language]
            for token, partner in ((masculine, feminine), (feminine, masculine)):
                if table.get(token, partner) != partner:
                    raise LexiconError(
                        f"{language}: {token!r} is paired with both {table[token]!r} and {partner!r}"
                    )
                table[token] = partner

        rules = defaultdict(list)
        for language, rule in suffix_rules:
            rule = SuffixRule(normalize(rule.masculine).lower(), normalize(rule.feminine).lower(), int(rule.priority))
            if not rule.masculine or not rule.feminine or rule.masculine == rule.feminine:
                raise LexiconError(f"{language}: suffix pair {rule.masculine!r}/{rule.feminine!r} is not swappable")
            for other in rules[language]:
                if other.priority == rule.priority:
                    raise LexiconError(f"{language}: suffix priority {rule.priority} is used twice")
                if (other.masculine, other.feminine) == (rule.masculine, rule.feminine):
                    raise LexiconError(f"{language}: suffix pair {rule.masculine}/{rule.feminine} is listed twice")
            rules[language].append(rule)
        for language in rules:
            rules[language].sort(key=lambda r: (-r.priority, -max(len(r.masculine), len(r.feminine))))

        return cls(exceptions=dict(exceptions), suffix_rules=dict(rules))

    @property
    def languages(self):
        return sorted(set(self.exceptions) | set(self.suffix_rules))


def match_case(model, word):
    """Give ``word`` the case pattern of ``model``"""
    if len(model) > 1 and model.isupper():
        return word.upper()
    if model[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def swap_token(token, language, lexicon):
    """Return the opposite-gender form of a single token"""
    key = token.lower()
    partner = lexicon.exceptions.get(language, {}).get(key)
    if partner is not None:
        return match_case(token, partner)

    for rule in lexicon.suffix_rules.get(language, ()):
        directions = sorted(
            ((rule.masculine, rule.feminine), (rule.feminine, rule.masculine)), key=lambda d: -len(d[0]),
        )
        # Longer suffix first: "es" must win over "s" for the same rule.
        for suffix, replacement in directions:
            if key.endswith(suffix) and len(key) > len(suffix):
                swapped = key[:len(key) - len(suffix)] + replacement
                # An exception entry swaps back to its own partner, never to ``token``.
                if swapped in lexicon.exceptions.get(language, {}):
                    logger.debug("Suffix swap of %r lands on exception %r", token, swapped)
                    raise NoRuleError(token, language)
                if token.isupper() and len(token) > 1:
                    replacement = replacement.upper()
                return token[:len(token) - len(suffix)] + replacement
    raise NoRuleError(token, language)


def swap_terms(reference, term_tokens, language, lexicon):
    """
    Swap the listed gender-marked tokens of ``reference``.

    Each listed token replaces its leftmost unused occurrence (compared
    case-insensitively); all other characters are kept. Returns the wrong
    reference and the correct:wrong pairs in the order the terms were given.
    """
    text = normalize(reference)
    tokens = tokenize_with_spans(text)
    used = set()
    replacements, pairs, missing, failures = [], [], [], []
    for term in term_tokens:
        position = next(
            (i for i, token in enumerate(tokens) if i not in used and fold(token.text) == fold(normalize(term))),
            None,
        )
        if position is None:
            missing.append(term)
            continue
        used.add(position)
        token = tokens[position]
        try:
            swapped = swap_token(token.text, language, lexicon)
        except NoRuleError as e:
            failures.append(e)
            continue
        replacements.append((token.start, token.end, swapped))
        pairs.append(GenderTermPair(token.text, swapped))

    if missing:
        raise TermNotFoundError(missing)
    if failures:
        raise SwapError(failures)

    for start, end, swapped in sorted(replacements, reverse=True):
        text = text[:start] + swapped + text[end:]
    logger.debug("Swapped %d terms", len(pairs))
    return text, pairs
