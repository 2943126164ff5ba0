"""
Balanced selection of mined candidates per (category, form) cell.
"""
import logging
import random
from dataclasses import dataclass, field

from corpus.records import Category, GenderForm, SpeakerGender

logger = logging.getLogger(__name__)

CELLS = tuple((category, form) for category in Category for form in GenderForm)


def cell_label(cell):
    category, form = cell
    return f"{Category(category).value}{GenderForm(form).value}"


def parse_quota(spec):
    """
    ``"40"`` gives every cell 40; ``"1F=40,1M=40,2F=30,2M=30"`` sets cells
    one by one (unlisted cells get 0)
    """
    spec = str(spec).strip()
    if spec.isdigit():
        return {cell: int(spec) for cell in CELLS}
    labels = {cell_label(cell): cell for cell in CELLS}
    quota = {cell: 0 for cell in CELLS}
    for item in spec.split(','):
        label, _, value = item.partition('=')
        label = label.strip().upper()
        if label not in labels or not value.strip().isdigit():
            raise ValueError(f"bad quota item {item!r}: expected CELL=N with CELL in {', '.join(labels)}")
        quota[labels[label]] = int(value)
    return quota


@dataclass(frozen=True)
class Selection:
    selected: tuple = ()
    shortfall: dict = field(default_factory=dict)


def _sample_cell(pool, k, rng, by_speaker):
    if not by_speaker:
        return rng.sample(pool, min(k, len(pool)))

    groups = {speaker: [c for c in pool if c.speaker == speaker] for speaker in SpeakerGender}
    shares = {SpeakerGender.FEMALE: k // 2, SpeakerGender.MALE: k - k // 2}
    chosen = []
    for speaker in SpeakerGender:
        group = groups[speaker]
        chosen.extend(rng.sample(group, min(shares[speaker], len(group))))
    # Fill what one speaker group could not provide from everything left.
    remaining = k - len(chosen)
    if remaining > 0:
        taken = {id(c) for c in chosen}
        leftover = [c for c in pool if id(c) not in taken]
        chosen.extend(rng.sample(leftover, min(remaining, len(leftover))))
    return chosen


def balance_sample(candidates, quota, seed, by_speaker=False):
    """
    Pick ``min(quota, available)`` candidates per cell by seeded sampling
    without replacement.

    Each cell's pool is sorted on the candidates' content before sampling,
    so the result depends on the seed and the candidate set only. The
    selection keeps the input order.
    """
    if isinstance(quota, int):
        quota = {cell: quota for cell in CELLS}
    if any(value < 0 for value in quota.values()):
        raise ValueError('quota values must be >= 0')

    candidates = list(candidates)
    order = {id(candidate): index for index, candidate in enumerate(candidates)}
    rng = random.Random(seed)
    chosen, shortfall = [], {}
    for cell in CELLS:
        k = quota.get(cell, 0)
        pool = sorted((c for c in candidates if c.cell == cell), key=lambda c: (c.sort_key, c.pair_index))
        picked = _sample_cell(pool, k, rng, by_speaker)
        if len(picked) < k:
            shortfall[cell] = k - len(picked)
            logger.warning("Cell %s: %d of %d candidates available", cell_label(cell), len(picked), k)
        chosen.extend(picked)

    selected = tuple(sorted(chosen, key=lambda c: order[id(c)]))
    logger.info("Selected %d candidates (seed %s)", len(selected), seed)
    return Selection(selected=selected, shortfall=shortfall)
