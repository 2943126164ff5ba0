import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from corpus.records import Category, GenderForm, SpeakerGender
from corpus.stats import MATCHING_SPEAKER
from metrics.tokenizer import PUNCTUATION, normalize, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SentencePair:
    source: str
    target: str
    talk: str = ''


@dataclass(frozen=True)
class Candidate:
    """
    A sentence pair matched by one mining rule; ``matched_spans`` are
    character offsets of the gender-marked words in ``target``
    """
    source: str
    target: str
    rule_id: str
    category: Category
    form: GenderForm
    matched_spans: Tuple[Tuple[int, int], ...]
    speaker: Optional[SpeakerGender] = None
    pair_index: int = 0
    talk: str = ''
    identifier: str = ''

    @property
    def candidate_id(self):
        return self.identifier or f"{self.talk or 'seg'}-{self.pair_index}-{self.rule_id}"

    @property
    def terms(self):
        """Gender-marked tokens covered by the spans, left to right"""
        tokens = []
        for start, end in self.matched_spans:
            tokens.extend(token for token in tokenize(self.target[start:end]) if token not in PUNCTUATION)
        return tuple(tokens)

    @property
    def cell(self):
        return Category(self.category), GenderForm(self.form)

    @property
    def sort_key(self):
        return self.talk, self.source, self.target, self.rule_id


def _spans(pattern, target):
    """Non-empty, non-overlapping capture-group spans, leftmost first"""
    spans = []
    for match in pattern.finditer(target):
        for group in range(1, pattern.groups + 1):
            start, end = match.span(group)
            if start < 0 or not tokenize(target[start:end]):
                continue
            spans.append((start, end))
    kept = []
    for start, end in sorted(set(spans)):
        if kept and start < kept[-1][1]:
            continue
        kept.append((start, end))
    return tuple(kept)


def infer_speaker(category, form, speaker):
    """
    Category 1 speakers talk about themselves, so the form gives their
    gender when the side table does not
    """
    if speaker is None and category == Category.CAT1:
        return MATCHING_SPEAKER[GenderForm(form)]
    return speaker


def mine(pairs, patterns, speakers=None):
    """
    One ``Candidate`` per (pair, rule) whose source and target patterns
    both match; ordered by pair index, then rule id
    """
    pairs = list(pairs)
    patterns = sorted(patterns, key=lambda compiled: compiled.rule_id)
    speakers = speakers or {}
    candidates = []
    for index, pair in enumerate(pairs):
        source, target = normalize(pair.source), normalize(pair.target)
        for compiled in patterns:
            if not compiled.source.search(source):
                continue
            spans = _spans(compiled.target, target)
            if not spans:
                continue
            rule = compiled.rule
            logger.debug("Pair %d matched rule %s at %s", index, rule.rule_id, spans)
            candidates.append(Candidate(
                source=source,
                target=target,
                rule_id=rule.rule_id,
                category=Category(rule.category),
                form=GenderForm(rule.form),
                matched_spans=spans,
                speaker=infer_speaker(rule.category, rule.form, speakers.get(pair.talk)),
                pair_index=index,
                talk=pair.talk,
            ))
    logger.info("Mined %d candidates from %d sentence pairs", len(candidates), len(pairs))
    return candidates
