from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .tokenizer import fold


@dataclass(frozen=True)
class AccuracyScore:
    matched: int = 0
    total: int = 0

    @property
    def value(self) -> Optional[float]:
        """matched / total, or None when there is nothing to match"""
        if self.total == 0:
            return None
        return self.matched / self.total

    def __add__(self, other):
        if not isinstance(other, AccuracyScore):
            return NotImplemented
        return AccuracyScore(self.matched + other.matched, self.total + other.total)


def term_accuracy(hypothesis, terms):
    """
    Clipped, case-insensitive match of gender terms in a tokenized hypothesis.

    Each distinct term counts at most as often as it is annotated, so
    over-generated words are not rewarded.
    """
    wanted = Counter(fold(term) for term in terms)
    produced = Counter(fold(token) for token in hypothesis)
    matched = sum(min(count, produced[term]) for term, count in wanted.items())
    return AccuracyScore(matched=matched, total=sum(wanted.values()))
