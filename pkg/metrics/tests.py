import itertools
import math
import random
import unittest
from collections import Counter

from django.test import SimpleTestCase

from .accuracy import AccuracyScore, term_accuracy
from .bleu import BleuStatistics, corpus_bleu, ngram_counts
from .tokenizer import fold, tokenize, tokenize_with_spans

try:
    from sacrebleu.metrics import BLEU
except ImportError:  # optional cross-check
    BLEU = None


def naive_bleu(hypotheses, references, max_order=4):
    """
    Brute-force corpus BLEU: enumerate every window by index and clip by
    counting occurrences in the reference by hand.
    """
    matches = [0] * max_order
    totals = [0] * max_order
    c = r = 0
    for hyp, ref in zip(hypotheses, references):
        c += len(hyp)
        r += len(ref)
        for n in range(1, max_order + 1):
            hyp_windows = [tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1)]
            ref_windows = [tuple(ref[i:i + n]) for i in range(len(ref) - n + 1)]
            totals[n - 1] += len(hyp_windows)
            seen = []
            for window in hyp_windows:
                if window in seen:
                    continue
                seen.append(window)
                in_hyp = sum(1 for other in hyp_windows if other == window)
                in_ref = sum(1 for other in ref_windows if other == window)
                matches[n - 1] += min(in_hyp, in_ref)
    precisions = [m / t if t else 0.0 for m, t in zip(matches, totals)]
    if c > r:
        bp = 1.0
    elif c == 0:
        bp = 0.0
    else:
        bp = math.exp(1 - r / c)
    if c == 0 or min(precisions) == 0:
        return 0.0, precisions, bp
    return 100 * bp * math.exp(sum(math.log(p) for p in precisions) / max_order), precisions, bp


def random_corpus(rng, vocabulary='abcde'):
    size = rng.randint(1, 10)
    hyps, refs = [], []
    for _ in range(size):
        ref = [rng.choice(vocabulary) for _ in range(rng.randint(0, 12))]
        hyp = [rng.choice(vocabulary) for _ in range(rng.randint(0, 12))]
        hyps.append(tuple(hyp))
        refs.append(tuple(ref))
    return hyps, refs


class TokenizeTest(SimpleTestCase):
    def test_sentence_with_final_period(self):
        self.assertEqual(
            tokenize('Sono nata e cresciuta a Mumbai.'),
            ('Sono', 'nata', 'e', 'cresciuta', 'a', 'Mumbai', '.'),
        )

    def test_elision_keeps_apostrophe(self):
        self.assertEqual(tokenize("l'une d'eux"), ("l'", 'une', "d'", 'eux'))
        self.assertEqual(tokenize('l’une'), ('l’', 'une'))

    def test_empty_and_blank(self):
        self.assertEqual(tokenize(''), ())
        self.assertEqual(tokenize('  \t \n'), ())

    def test_hyphen_stays_inside(self):
        self.assertEqual(tokenize('Jean-Pierre est là-bas'), ('Jean-Pierre', 'est', 'là-bas'))

    def test_punctuation_detached(self):
        self.assertEqual(
            tokenize('«Oui», dit-elle… (enfin)!'),
            ('«', 'Oui', '»', ',', 'dit-elle', '…', '(', 'enfin', ')', '!'),
        )

    def test_nfc_normalization(self):
        decomposed = 'ne\u0301e'
        self.assertEqual(tokenize(decomposed), ('n\u00e9e',))

    def test_spans_point_into_normalized_text(self):
        text = "Je suis née et j'ai grandi."
        for token in tokenize_with_spans(text):
            self.assertEqual(text[token.start:token.end], token.text)

    def test_idempotent_on_joined_output(self):
        rng = random.Random(7)
        alphabet = "ab c'.,-«»é\t"
        for _ in range(300):
            text = ''.join(rng.choice(alphabet) for _ in range(rng.randint(0, 30)))
            tokens = tokenize(text)
            self.assertTrue(all(token and not any(ch.isspace() for ch in token) for token in tokens))
            self.assertEqual(tokenize(' '.join(tokens)), tokens)

    def test_fold_is_case_insensitive(self):
        self.assertEqual(fold('Nata'), fold('NATA'))


class NgramCountsTest(SimpleTestCase):
    def test_bigrams(self):
        self.assertEqual(ngram_counts(['a', 'b', 'a', 'b'], 2), Counter({('a', 'b'): 2, ('b', 'a'): 1}))

    def test_short_sequence(self):
        self.assertEqual(ngram_counts(['a'], 2), Counter())

    def test_unigrams(self):
        self.assertEqual(ngram_counts(['a', 'b', 'c'], 1), Counter({('a',): 1, ('b',): 1, ('c',): 1}))

    def test_order_must_be_positive(self):
        with self.assertRaises(ValueError):
            ngram_counts(['a'], 0)


class CorpusBleuTest(SimpleTestCase):
    def test_identity(self):
        segments = [tuple('the cat sat on the mat'.split()), tuple('a b c d e'.split())]
        score = corpus_bleu(segments, segments)
        self.assertEqual(score.score, 100.0)
        self.assertEqual(score.precisions, (1.0, 1.0, 1.0, 1.0))
        self.assertEqual(score.brevity_penalty, 1.0)
        self.assertFalse(score.is_degenerate)

    def test_brevity_penalty_hand_computed(self):
        score = corpus_bleu([('a', 'b', 'c', 'd')], [('a', 'b', 'c', 'd', 'e')])
        self.assertEqual(score.precisions, (1.0, 1.0, 1.0, 1.0))
        self.assertAlmostEqual(score.brevity_penalty, math.exp(1 - 5 / 4), places=12)
        self.assertAlmostEqual(score.score, 77.88, delta=0.01)

    def test_clipped_unigrams(self):
        score = corpus_bleu([('the',) * 7], [('the', 'cat', 'is', 'on', 'the', 'mat')])
        self.assertEqual(score.matches[0], 2)
        self.assertEqual(score.precisions[0], 2 / 7)
        self.assertEqual(score.score, 0.0)
        self.assertTrue(score.is_degenerate)

    def test_empty_hypotheses_are_degenerate(self):
        score = corpus_bleu([()], [('a', 'b')])
        self.assertEqual(score.score, 0.0)
        self.assertEqual(score.brevity_penalty, 0.0)
        self.assertEqual(score.degenerate, 'empty hypotheses')

    def test_too_short_for_fourgrams(self):
        score = corpus_bleu([('a', 'b', 'c')], [('a', 'b', 'c')])
        self.assertEqual(score.score, 0.0)
        self.assertIn('4', score.degenerate)

    def test_length_mismatch(self):
        with self.assertRaises(ValueError):
            corpus_bleu([('a',)], [])

    def test_needs_a_segment(self):
        with self.assertRaises(ValueError):
            corpus_bleu([], [])

    def test_matches_naive_oracle(self):
        rng = random.Random(2024)
        for _ in range(200):
            hyps, refs = random_corpus(rng)
            expected_score, expected_precisions, expected_bp = naive_bleu(hyps, refs)
            score = corpus_bleu(hyps, refs)
            self.assertAlmostEqual(score.score, expected_score, delta=1e-9)
            self.assertAlmostEqual(score.brevity_penalty, expected_bp, delta=1e-9)
            for got, expected in zip(score.precisions, expected_precisions):
                self.assertAlmostEqual(got, expected, delta=1e-9)

    def test_bounds_and_clipping(self):
        rng = random.Random(99)
        for _ in range(100):
            hyps, refs = random_corpus(rng)
            score = corpus_bleu(hyps, refs)
            self.assertTrue(0.0 <= score.score <= 100.0)
            self.assertTrue(0.0 <= score.brevity_penalty <= 1.0)
            for p in score.precisions:
                self.assertTrue(0.0 <= p <= 1.0)
            for hyp, ref in zip(hyps, refs):
                single = BleuStatistics().add(hyp, ref)
                for n in range(4):
                    ref_total = max(len(ref) - n, 0)
                    self.assertLessEqual(single.matches[n], min(single.totals[n], ref_total))

    def test_permutation_invariance(self):
        rng = random.Random(5)
        for _ in range(50):
            hyps, refs = random_corpus(rng, vocabulary='ab')
            pairs = list(zip(hyps, refs))
            rng.shuffle(pairs)
            shuffled_hyps, shuffled_refs = zip(*pairs)
            self.assertEqual(corpus_bleu(hyps, refs), corpus_bleu(shuffled_hyps, shuffled_refs))

    def test_statistics_are_additive(self):
        hyps = [tuple('a b c d'.split()), tuple('b c d e f'.split())]
        refs = [tuple('a b c d e'.split()), tuple('b c d e'.split())]
        left = BleuStatistics().add(hyps[0], refs[0])
        left += BleuStatistics().add(hyps[1], refs[1])
        self.assertEqual(left.score(), corpus_bleu(hyps, refs))

    @unittest.skipUnless(BLEU is not None, 'sacrebleu is not installed')
    def test_agrees_with_sacrebleu(self):
        rng = random.Random(11)
        words = 'il la un una nata nato sono ero e a'.split()
        metric = BLEU(tokenize='none', smooth_method='none', force=True)
        for _ in range(25):
            refs = [tuple(rng.choice(words) for _ in range(rng.randint(6, 12))) for _ in range(5)]
            hyps = [ref[:-1] if rng.random() < 0.5 else ref + ('e',) for ref in refs]
            ours = corpus_bleu(hyps, refs)
            theirs = metric.corpus_score([' '.join(h) for h in hyps], [[' '.join(r) for r in refs]])
            self.assertAlmostEqual(ours.score, theirs.score, places=6)


class TermAccuracyTest(SimpleTestCase):
    def test_all_terms_found(self):
        score = term_accuracy(tokenize('Sono nata e cresciuta a Mumbai .'), ['nata', 'cresciuta'])
        self.assertEqual(score, AccuracyScore(2, 2))
        self.assertEqual(score.value, 1.0)

    def test_over_generation_not_rewarded(self):
        self.assertEqual(term_accuracy(['una', 'una', 'una'], ['una']), AccuracyScore(1, 1))

    def test_repeated_term(self):
        self.assertEqual(term_accuracy(['buona', 'cena'], ['buona', 'buona']), AccuracyScore(1, 2))

    def test_case_insensitive(self):
        self.assertEqual(term_accuracy(['Nata'], ['nata']).matched, 1)

    def test_no_terms(self):
        score = term_accuracy(['a'], [])
        self.assertIsNone(score.value)
        self.assertEqual(score + AccuracyScore(1, 2), AccuracyScore(1, 2))

    def test_matches_brute_force_intersection(self):
        rng = random.Random(3)
        bag = ['una', 'Una', 'uno', 'nata', 'nato', 'cena']
        for _ in range(300):
            hyp = [rng.choice(bag) for _ in range(rng.randint(0, 8))]
            terms = [rng.choice(bag) for _ in range(rng.randint(0, 5))]
            remaining = [token.lower() for token in hyp]
            expected = 0
            for term in terms:
                if term.lower() in remaining:
                    remaining.remove(term.lower())
                    expected += 1
            score = term_accuracy(hyp, terms)
            self.assertEqual(score.matched, expected)
            self.assertEqual(score.total, len(terms))
            self.assertLessEqual(score.matched, score.total)

    def test_sum_over_permutations_is_stable(self):
        parts = [AccuracyScore(1, 2), AccuracyScore(0, 1), AccuracyScore(3, 3)]
        totals = {sum(order, AccuracyScore()) for order in itertools.permutations(parts)}
        self.assertEqual(totals, {AccuracyScore(4, 6)})
