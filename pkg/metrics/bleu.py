"""
Corpus-level BLEU-4 over pre-tokenized segments.

Single reference per segment, case-sensitive, no smoothing. Sufficient
statistics (clipped matches and hypothesis n-gram totals per order, plus
the summed lengths) are accumulated over segments and combined once, so
the score does not depend on segment order.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

logger = logging.getLogger(__name__)

MAX_ORDER = 4


def ngram_counts(tokens, n):
    """Multiset of the contiguous n-token windows of ``tokens``"""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    tokens = tuple(tokens)
    return Counter(tokens[i:i + n] for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class BleuScore:
    score: float
    precisions: Tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    matches: Tuple[int, ...] = ()
    totals: Tuple[int, ...] = ()
    degenerate: Optional[str] = None

    @property
    def is_degenerate(self):
        return self.degenerate is not None

    def __str__(self):
        precisions = '/'.join(f"{100 * p:.1f}" for p in self.precisions)
        return (f"BLEU = {self.score:.2f} {precisions} (BP = {self.brevity_penalty:.3f} "
                f"hyp_len = {self.hyp_length} ref_len = {self.ref_length})")


class BleuStatistics:
    """
    Running sufficient statistics for corpus BLEU
    """

    def __init__(self, max_order=MAX_ORDER):
        self.max_order = max_order
        self.matches = [0] * max_order
        self.totals = [0] * max_order
        self.hyp_length = 0
        self.ref_length = 0

    def add(self, hypothesis, reference):
        self.hyp_length += len(hypothesis)
        self.ref_length += len(reference)
        for n in range(1, self.max_order + 1):
            hyp_ngrams = ngram_counts(hypothesis, n)
            ref_ngrams = ngram_counts(reference, n)
            # Counter intersection keeps min(hyp count, ref count): the clipped matches.
            self.matches[n - 1] += sum((hyp_ngrams & ref_ngrams).values())
            self.totals[n - 1] += sum(hyp_ngrams.values())
        return self

    def __iadd__(self, other):
        for i in range(self.max_order):
            self.matches[i] += other.matches[i]
            self.totals[i] += other.totals[i]
        self.hyp_length += other.hyp_length
        self.ref_length += other.ref_length
        return self

    def score(self):
        c, r = self.hyp_length, self.ref_length
        precisions = tuple(
            m / t if t > 0 else 0.0 for m, t in zip(self.matches, self.totals)
        )

        degenerate = None
        if c == 0:
            degenerate = 'empty hypotheses'
        else:
            short_orders = [str(n + 1) for n, t in enumerate(self.totals) if t == 0]
            unmatched_orders = [str(n + 1) for n, m in enumerate(self.matches) if m == 0]
            if short_orders:
                degenerate = f"no hypothesis n-grams of order {','.join(short_orders)}"
            elif unmatched_orders:
                degenerate = f"no matching n-grams of order {','.join(unmatched_orders)}"

        if c > r:
            brevity_penalty = 1.0
        elif c > 0:
            brevity_penalty = math.exp(1 - r / c)
        else:
            brevity_penalty = 0.0

        if degenerate is None and min(precisions) > 0:
            log_mean = sum(math.log(p) for p in precisions) / self.max_order
            score = 100.0 * brevity_penalty * math.exp(log_mean)
        else:
            score = 0.0
        if degenerate:
            logger.warning("Degenerate BLEU input (%s); score reported as 0", degenerate)

        return BleuScore(
            score=score,
            precisions=precisions,
            brevity_penalty=brevity_penalty,
            hyp_length=c,
            ref_length=r,
            matches=tuple(self.matches),
            totals=tuple(self.totals),
            degenerate=degenerate,
        )


def corpus_bleu(hypotheses, references):
    """
    Corpus BLEU-4 of tokenized ``hypotheses`` against one tokenized
    reference per segment
    """
    hypotheses = list(hypotheses)
    references = list(references)
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses but {len(references)} references"
        )
    if not hypotheses:
        raise ValueError('corpus_bleu needs at least one segment')

    statistics = BleuStatistics()
    for hypothesis, reference in zip(hypotheses, references):
        statistics.add(hypothesis, reference)
    return statistics.score()
