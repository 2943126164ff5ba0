import random
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from corpus.exceptions import CorpusFormatError
from corpus.records import Category, GenderForm, SpeakerGender, TripletRecord
from corpus.tsv import parse_corpus
from corpus.validation import validate, validate_record

from .io import (
    load_lexicon, load_rules, load_wordlists, parse_candidates, parse_pairs, parse_speakers, serialize_candidates,
    target_language,
)
from .mining import Candidate, SentencePair, mine
from .rules import MiningRule, PatternError, WordLists, compile_patterns
from .sampling import CELLS, balance_sample, parse_quota
from .swapping import (
    LexiconError, NoRuleError, SuffixRule, SwapError, SwapLexicon, TermNotFoundError, swap_terms, swap_token,
)

LISTS = WordLists(
    occupations=('teacher', 'police officer'),
    adjectives_f=('stanca', 'pronta'),
    adjectives_m=('stanco', 'pronto'),
)


def rule(rule_id, category, form, source, target, language_pair='en-it'):
    return MiningRule(rule_id, language_pair, Category(category), GenderForm(form), source, target)


PLANTED_RULES = (
    rule('t-1F', '1', 'F', r'\bI was born\b', r'\bsono (nata)\b'),
    rule('t-1M', '1', 'M', r'\bI was born\b', r'\bsono (nato)\b'),
    rule('t-2F', '2', 'F', r'\bshe is\b', r'\blei è ({ADJ_F})\b'),
    rule('t-2M', '2', 'M', r'\bhe is\b', r'\blui è ({ADJ_M})\b'),
)
PLANTED = {
    't-1F': ('I was born in {city}.', 'Sono nata a {city}.'),
    't-1M': ('I was born in {city}.', 'Sono nato a {city}.'),
    't-2F': ('Today she is tired in {city}.', 'Oggi lei è stanca a {city}.'),
    't-2M': ('Today he is ready in {city}.', 'Oggi lui è pronto a {city}.'),
}
NOISE_SOURCE = ('we', 'went', 'to', 'the', 'market', 'today', 'they', 'saw', 'a', 'film')
NOISE_TARGET = ('siamo', 'andati', 'al', 'mercato', 'oggi', 'hanno', 'visto', 'un', 'film')
CITIES = ('Roma', 'Milano', 'Torino', 'Napoli', 'Bari')


class CompilePatternsTest(SimpleTestCase):
    def test_placeholders_expand_to_word_alternations(self):
        compiled = compile_patterns([rule('occ', '1', 'F', r'\bI am an? {OCC}\b', r'\bsono (una)\b')], LISTS)
        source = compiled[0].source
        self.assertTrue(source.search('I am a police officer'))
        self.assertTrue(source.search('i am a TEACHER.'))
        self.assertIsNone(source.search('I am a police'))
        self.assertIsNone(source.search('I am a teachers'))

    def test_pattern_without_placeholders(self):
        compiled = compile_patterns([rule('plain', '1', 'F', r'\bI was born\b', r'\bsono (nata)\b')], WordLists())
        self.assertEqual(compiled[0].target.groups, 1)

    def test_ordered_by_rule_id(self):
        compiled = compile_patterns(reversed(PLANTED_RULES), LISTS)
        self.assertEqual([item.rule_id for item in compiled], ['t-1F', 't-1M', 't-2F', 't-2M'])

    def test_every_failure_is_reported(self):
        rules = [
            rule('empty-list', '2', 'F', r'\bshe\b', r'\bè ({ADJ_F})\b'),
            rule('unknown', '2', 'F', r'\b{NOUN}\b', r'\bè (una)\b'),
            rule('backref', '2', 'F', r'(\w+) \1', r'\bè (una)\b'),
            rule('no-group', '2', 'F', r'\bshe\b', r'\bè una\b'),
            rule('broken', '2', 'F', r'(she', r'\bè (una)\b'),
        ]
        with self.assertRaises(PatternError) as ctx:
            compile_patterns(rules, WordLists(occupations=('teacher',)))
        self.assertEqual([rule_id for rule_id, _ in ctx.exception.failures],
                         ['empty-list', 'unknown', 'backref', 'no-group', 'broken'])
        self.assertTrue(ctx.exception.messages[0].startswith('rule empty-list: '))

    def test_duplicate_rule_id(self):
        with self.assertRaises(PatternError):
            compile_patterns([PLANTED_RULES[0], PLANTED_RULES[0]], LISTS)

    def test_no_rules(self):
        with self.assertRaises(PatternError):
            compile_patterns([], LISTS)

    def test_shipped_rules_compile(self):
        for language_pair in ('en-it', 'en-fr'):
            version, rules = load_rules(language_pair=language_pair)
            self.assertEqual(version, '2026.1')
            self.assertEqual(len(rules), 10)
            compiled = compile_patterns(rules, load_wordlists(language_pair=language_pair))
            self.assertEqual(len(compiled), 10)


class MineTest(SimpleTestCase):
    def setUp(self):
        self.patterns = compile_patterns(PLANTED_RULES, LISTS)

    def test_first_person_match(self):
        candidates = mine([SentencePair('I was born in Rome.', 'Sono nata a Roma.', talk='42')], self.patterns)
        self.assertEqual(len(candidates), 1)
        candidate = candidates[0]
        self.assertEqual(candidate.rule_id, 't-1F')
        self.assertEqual(candidate.matched_spans, ((5, 9),))
        self.assertEqual(candidate.terms, ('nata',))
        self.assertEqual(candidate.speaker, SpeakerGender.FEMALE)
        self.assertEqual(candidate.candidate_id, '42-0-t-1F')

    def test_third_person_match(self):
        pair = SentencePair('Yesterday she is tired.', 'Ieri lei è stanca.', talk='7')
        candidates = mine([pair], self.patterns)
        self.assertEqual([(c.rule_id, c.terms) for c in candidates], [('t-2F', ('stanca',))])
        self.assertIsNone(candidates[0].speaker)
        with_speakers = mine([pair], self.patterns, speakers={'7': SpeakerGender.MALE})
        self.assertEqual(with_speakers[0].speaker, SpeakerGender.MALE)

    def test_source_match_alone_is_not_enough(self):
        self.assertEqual(mine([SentencePair('I was born in Rome.', 'Vengo da Roma.')], self.patterns), [])
        self.assertEqual(mine([SentencePair('We met.', 'Sono nata a Roma.')], self.patterns), [])

    def test_shipped_rules(self):
        _, rules = load_rules(language_pair='en-it')
        patterns = compile_patterns(rules, load_wordlists(language_pair='en-it'))
        candidates = mine([
            SentencePair('I was born in Rome.', 'Sono nata a Roma.'),
            SentencePair('She was very tired.', 'Era molto stanca.'),
        ], patterns)
        by_rule = {candidate.rule_id: candidate for candidate in candidates}
        self.assertEqual(by_rule['it-1F-born'].terms, ('nata',))
        self.assertEqual(by_rule['it-2F-adj'].terms, ('stanca',))

    def test_recall_and_soundness(self):
        rng = random.Random(2024)
        size = 5000
        positions = rng.sample(range(size), 50 * len(PLANTED))
        planted = {}
        for offset, rule_id in enumerate(sorted(PLANTED)):
            for index in positions[offset * 50:(offset + 1) * 50]:
                planted[index] = rule_id

        pairs = []
        for index in range(size):
            city = rng.choice(CITIES)
            if index in planted:
                source, target = PLANTED[planted[index]]
                pairs.append(SentencePair(source.format(city=city), target.format(city=city), talk=str(index % 9)))
            else:
                pairs.append(SentencePair(
                    ' '.join(rng.choice(NOISE_SOURCE) for _ in range(rng.randint(3, 10))),
                    ' '.join(rng.choice(NOISE_TARGET) for _ in range(rng.randint(3, 10))),
                ))

        candidates = mine(pairs, self.patterns)
        self.assertEqual({(c.pair_index, c.rule_id) for c in candidates}, set(planted.items()))
        self.assertEqual(len(candidates), len(planted))

        by_id = {compiled.rule_id: compiled for compiled in self.patterns}
        for candidate in candidates:
            compiled = by_id[candidate.rule_id]
            self.assertTrue(compiled.source.search(candidate.source))
            self.assertTrue(compiled.target.search(candidate.target))
            for start, end in candidate.matched_spans:
                self.assertIn(candidate.target[start:end].lower(), ('nata', 'nato', 'stanca', 'pronto'))

    def test_deterministic_order(self):
        pairs = [SentencePair('I was born and she is tired.', 'Sono nata e lei è stanca.')] * 3
        first = mine(pairs, self.patterns)
        self.assertEqual([(c.pair_index, c.rule_id) for c in first],
                         [(0, 't-1F'), (0, 't-2F'), (1, 't-1F'), (1, 't-2F'), (2, 't-1F'), (2, 't-2F')])
        self.assertEqual(mine(pairs, tuple(reversed(self.patterns))), first)


def make_candidates(per_cell, speakers=None):
    candidates = []
    for category, form in CELLS:
        for index in range(per_cell):
            speaker = speakers[index % len(speakers)] if speakers else None
            candidates.append(Candidate(
                source=f"source {category}{form} {index}",
                target=f"target {index}",
                rule_id=f"r-{category}{form}",
                category=category,
                form=form,
                matched_spans=((0, 6),),
                speaker=speaker,
                pair_index=len(candidates),
                talk=f"talk{index % 5}",
            ))
    return candidates


class BalanceSampleTest(SimpleTestCase):
    def test_exact_quota(self):
        selection = balance_sample(make_candidates(100), 40, seed=13)
        for cell in CELLS:
            self.assertEqual(sum(1 for c in selection.selected if c.cell == cell), 40)
        self.assertEqual(selection.shortfall, {})
        indices = [c.pair_index for c in selection.selected]
        self.assertEqual(indices, sorted(indices))

    def test_deterministic(self):
        candidates = make_candidates(60)
        first = balance_sample(candidates, 20, seed=7).selected
        self.assertEqual(balance_sample(candidates, 20, seed=7).selected, first)
        shuffled = list(candidates)
        random.Random(1).shuffle(shuffled)
        self.assertEqual({c.candidate_id for c in balance_sample(shuffled, 20, seed=7).selected},
                         {c.candidate_id for c in first})
        self.assertNotEqual(balance_sample(candidates, 20, seed=8).selected, first)

    def test_shortfall(self):
        candidates = [c for c in make_candidates(30) if c.cell != (Category.CAT2, GenderForm.MASCULINE)]
        selection = balance_sample(candidates, parse_quota('1F=10,1M=40,2M=5'), seed=1)
        self.assertEqual(selection.shortfall, {
            (Category.CAT1, GenderForm.MASCULINE): 10,
            (Category.CAT2, GenderForm.MASCULINE): 5,
        })
        self.assertEqual(len(selection.selected), 10 + 30)

    def test_by_speaker(self):
        candidates = make_candidates(60, speakers=[SpeakerGender.FEMALE, SpeakerGender.MALE])
        selection = balance_sample(candidates, 21, seed=3, by_speaker=True)
        for cell in CELLS:
            picked = [c for c in selection.selected if c.cell == cell]
            self.assertEqual(len(picked), 21)
            self.assertEqual(sum(1 for c in picked if c.speaker == SpeakerGender.FEMALE), 10)

    def test_by_speaker_fills_from_the_other_group(self):
        speakers = [SpeakerGender.FEMALE] * 9 + [SpeakerGender.MALE]
        selection = balance_sample(make_candidates(50, speakers=speakers), 20, seed=3, by_speaker=True)
        picked = [c for c in selection.selected if c.cell == CELLS[0]]
        self.assertEqual(len(picked), 20)
        self.assertEqual(sum(1 for c in picked if c.speaker == SpeakerGender.MALE), 5)

    def test_parse_quota(self):
        self.assertEqual(set(parse_quota('40').values()), {40})
        quota = parse_quota('1f=4, 2M=2')
        self.assertEqual(quota[(Category.CAT1, GenderForm.FEMININE)], 4)
        self.assertEqual(quota[(Category.CAT1, GenderForm.MASCULINE)], 0)
        for bad in ('3F=2', '1F=x', 'many', '1F'):
            with self.assertRaises(ValueError):
                parse_quota(bad)


class SwapTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lexicon = load_lexicon()

    def test_swap_token(self):
        self.assertEqual(swap_token('nata', 'it', self.lexicon), 'nato')
        self.assertEqual(swap_token('nato', 'it', self.lexicon), 'nata')
        self.assertEqual(swap_token('Attore', 'it', self.lexicon), 'Attrice')
        self.assertEqual(swap_token('NATA', 'it', self.lexicon), 'NATO')
        self.assertEqual(swap_token('Un', 'it', self.lexicon), 'Una')
        self.assertEqual(swap_token('un', 'fr', self.lexicon), 'une')
        self.assertEqual(swap_token('née', 'fr', self.lexicon), 'né')
        self.assertEqual(swap_token('amies', 'fr', self.lexicon), 'amis')
        self.assertEqual(swap_token('amis', 'fr', self.lexicon), 'amies')
        with self.assertRaises(NoRuleError):
            swap_token('xyzq', 'it', self.lexicon)
        with self.assertRaises(NoRuleError):
            swap_token('nata', 'de', self.lexicon)

    def test_exceptions_are_involutions(self):
        for language, table in self.lexicon.exceptions.items():
            for token in table:
                self.assertEqual(swap_token(swap_token(token, language, self.lexicon), language, self.lexicon), token)

    def test_suffix_rules_are_involutions(self):
        rng = random.Random(99)
        consonants = {'it': 'bdglmnpsvz', 'fr': 'bdgmpz'}
        for language, letters in consonants.items():
            suffixes = [suffix for rule in self.lexicon.suffix_rules[language]
                        for suffix in (rule.masculine, rule.feminine)]
            for _ in range(1000):
                token = ''.join(rng.choice(letters) for _ in range(rng.randint(3, 6))) + rng.choice(suffixes)
                swapped = swap_token(token, language, self.lexicon)
                self.assertNotEqual(swapped, token)
                self.assertEqual(swap_token(swapped, language, self.lexicon), token)

    def test_suffix_swap_onto_exception_needs_review(self):
        for language, token in (('it', 'uno'), ('it', 'lo'), ('it', 'dello'), ('it', 'nello'), ('it', 'allo'),
                                ('fr', 'bel'), ('fr', 'nouvel'), ('it', 'Uno')):
            with self.assertRaises(NoRuleError):
                swap_token(token, language, self.lexicon)
        with self.assertRaises(SwapError) as ctx:
            swap_terms('Sono uno studente.', ['uno'], 'it', self.lexicon)
        self.assertEqual(ctx.exception.tokens, ['uno'])

    def test_exception_preimages_are_involutions_or_rejected(self):
        checked = 0
        for language, table in self.lexicon.exceptions.items():
            for entry in table:
                for rule in self.lexicon.suffix_rules.get(language, ()):
                    for suffix, replacement in ((rule.masculine, rule.feminine), (rule.feminine, rule.masculine)):
                        if not entry.endswith(replacement) or len(entry) <= len(replacement):
                            continue
                        token = entry[:len(entry) - len(replacement)] + suffix
                        if token in table:
                            continue
                        checked += 1
                        try:
                            swapped = swap_token(token, language, self.lexicon)
                        except NoRuleError:
                            continue
                        self.assertEqual(swap_token(swapped, language, self.lexicon), token, (language, token))
        self.assertGreater(checked, 20)

    def test_swap_terms(self):
        text, pairs = swap_terms('Sono nata e cresciuta a Mumbai.', ['nata', 'cresciuta'], 'it', self.lexicon)
        self.assertEqual(text, 'Sono nato e cresciuto a Mumbai.')
        self.assertEqual([str(pair) for pair in pairs], ['nata:nato', 'cresciuta:cresciuto'])

        text, _ = swap_terms("Je suis née et j'ai grandi à Mumbai.", ['née'], 'fr', self.lexicon)
        self.assertEqual(text, "Je suis né et j'ai grandi à Mumbai.")

    def test_swap_terms_uses_leftmost_unused_occurrence(self):
        text, _ = swap_terms('La ragazza e la donna.', ['la'], 'it', self.lexicon)
        self.assertEqual(text, 'Il ragazza e la donna.')
        text, _ = swap_terms('La ragazza e la donna.', ['la', 'LA'], 'it', self.lexicon)
        self.assertEqual(text, 'Il ragazza e il donna.')

    def test_swap_terms_errors(self):
        with self.assertRaises(TermNotFoundError) as ctx:
            swap_terms('Sono nata a Roma.', ['nata', 'brava'], 'it', self.lexicon)
        self.assertEqual(ctx.exception.terms, ['brava'])
        with self.assertRaises(SwapError) as ctx:
            swap_terms('Sono nata a xyzq.', ['nata', 'xyzq'], 'it', self.lexicon)
        self.assertEqual(ctx.exception.tokens, ['xyzq'])

    def test_swapped_record_validates(self):
        reference = 'Lei è molto stanca, ma è una brava dottoressa.'
        wrong, pairs = swap_terms(reference, ['stanca', 'una', 'brava', 'dottoressa'], 'it', self.lexicon)
        self.assertEqual(wrong, 'Lei è molto stanco, ma è un bravo dottore.')
        record = TripletRecord(
            id='x', talk='t', source='She is very tired, but she is a good doctor.', ref_correct=reference,
            ref_wrong=wrong, speaker=SpeakerGender.MALE, form=GenderForm.FEMININE, category=Category.CAT2,
            terms=tuple(pairs),
        )
        self.assertEqual(validate_record(record), [])

    def test_lexicon_validation(self):
        with self.assertRaises(LexiconError):
            SwapLexicon.build(exception_pairs=[('it', 're', 're')])
        with self.assertRaises(LexiconError):
            SwapLexicon.build(exception_pairs=[('it', 'un', 'una'), ('it', 'uno', 'una')])
        with self.assertRaises(LexiconError):
            SwapLexicon.build(suffix_rules=[('it', SuffixRule('o', 'a', 1)), ('it', SuffixRule('i', 'e', 1))])
        lexicon = SwapLexicon.build(
            suffix_rules=[('it', SuffixRule('o', 'a', 1)), ('it', SuffixRule('tore', 'trice', 9))],
        )
        self.assertEqual([r.masculine for r in lexicon.suffix_rules['it']], ['tore', 'o'])
        self.assertEqual(lexicon.languages, ['it'])


class BuilderFilesTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.directory = Path(self.tmp.name)

    def test_candidates_round_trip(self):
        patterns = compile_patterns(PLANTED_RULES, LISTS)
        mined = mine([
            SentencePair('I was born in Rome.', 'Sono nata a Roma.', talk='1'),
            SentencePair('Today she is tired.', 'Oggi lei è stanca.', talk='2'),
        ], patterns)
        text = serialize_candidates(mined)
        parsed = parse_candidates(text)
        self.assertEqual([c.candidate_id for c in parsed], [c.candidate_id for c in mined])
        self.assertEqual([c.matched_spans for c in parsed], [c.matched_spans for c in mined])
        self.assertEqual([c.terms for c in parsed], [('nata',), ('stanca',)])
        self.assertEqual([c.speaker for c in parsed], [SpeakerGender.FEMALE, None])
        self.assertEqual(serialize_candidates(parsed), text)

    def test_candidate_span_outside_target(self):
        text = serialize_candidates([Candidate('I was born.', 'Sono nata.', 'r', Category.CAT1,
                                               GenderForm.FEMININE, ((5, 9),))])
        with self.assertRaises(CorpusFormatError) as ctx:
            parse_candidates(text.replace('\t5-9', '\t5-90'))
        self.assertEqual(ctx.exception.line, 2)

    def test_pairs_and_speakers(self):
        pairs = parse_pairs('# comment\nSRC\tTGT\nHello.\tCiao.\n')
        self.assertEqual(pairs, [SentencePair('Hello.', 'Ciao.')])
        self.assertEqual(parse_speakers('TALK\tSPEAKER\n12\tshe\n'), {'12': SpeakerGender.FEMALE})
        with self.assertRaises(CorpusFormatError) as ctx:
            parse_speakers('TALK\tSPEAKER\n12\tnobody\n')
        self.assertEqual(ctx.exception.line, 2)
        with self.assertRaises(CorpusFormatError):
            parse_pairs('SOURCE\tTARGET\nHello.\tCiao.\n')

    def test_load_lexicon_rejects_bad_priority(self):
        (self.directory / 'exceptions.tsv').write_text('LANG\tMASC\tFEM\nit\til\tla\n', encoding='utf-8')
        (self.directory / 'suffix_rules.tsv').write_text(
            'LANG\tMASC-SUFFIX\tFEM-SUFFIX\tPRIORITY\nit\to\ta\thigh\n', encoding='utf-8')
        with self.assertRaises(CorpusFormatError) as ctx:
            load_lexicon(self.directory)
        self.assertEqual(ctx.exception.line, 2)

    def test_target_language(self):
        self.assertEqual(target_language('en-IT'), 'it')
        self.assertEqual(target_language('fr'), 'fr')


class BuilderCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.directory = Path(self.tmp.name)
        self.pairs = self.directory / 'pairs.tsv'
        self.pairs.write_text(
            'TALK\tSRC\tTGT\n'
            '1\tI was born in Rome.\tSono nata a Roma.\n'
            '1\tWe went to the market.\tSiamo andati al mercato.\n'
            '2\tShe was very tired.\tEra molto stanca.\n'
            '3\tHe is a teacher.\tÈ un insegnante.\n',
            encoding='utf-8',
        )
        self.speakers = self.directory / 'speakers.tsv'
        self.speakers.write_text('TALK\tSPEAKER\n2\tM\n3\tF\n', encoding='utf-8')

    def call(self, *args):
        stdout, stderr = StringIO(), StringIO()
        call_command(*args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def test_mine_balance_swap(self):
        mined = self.directory / 'mined.tsv'
        _, stderr = self.call('mine', '--pairs', str(self.pairs), '--lang', 'en-it',
                              '--speakers', str(self.speakers), '--output', str(mined))
        self.assertIn('rule set 2026.1', stderr)
        rule_ids = {c.rule_id for c in parse_candidates(mined.read_text(encoding='utf-8'))}
        self.assertTrue({'it-1F-born', 'it-2F-adj', 'it-2M-occ'} <= rule_ids)

        balanced = self.directory / 'balanced.tsv'
        _, stderr = self.call('balance', '--candidates', str(mined), '--quota', '1', '--seed', '5',
                              '--output', str(balanced))
        self.assertIn('Cell 1M: 1 short of quota 1', stderr)

        corpus_text, _ = self.call('swap', '--candidates', str(balanced), '--lang', 'en-it')
        corpus = parse_corpus(corpus_text, 'en-it')
        self.assertEqual(len(corpus), 3)
        self.assertFalse([issue for issue in validate(corpus) if issue.is_error])
        by_category = {(record.category, record.form): record for record in corpus}
        self.assertEqual(by_category[(Category.CAT1, GenderForm.FEMININE)].ref_wrong, 'Sono nato a Roma.')
        self.assertEqual(by_category[(Category.CAT2, GenderForm.MASCULINE)].ref_wrong, 'È una insegnante.')

    def test_swap_sends_unknown_speakers_to_review(self):
        candidate = Candidate('She was tired.', 'Era stanca.', 'it-2F-adj', Category.CAT2, GenderForm.FEMININE,
                              ((4, 10),), talk='9')
        candidates = self.directory / 'candidates.tsv'
        candidates.write_text(serialize_candidates([candidate]), encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.call('swap', '--candidates', str(candidates), '--lang', 'it')
        self.assertEqual(ctx.exception.returncode, 1)

        review = self.directory / 'review.tsv'
        corpus_text, _ = self.call('swap', '--candidates', str(candidates), '--lang', 'it', '--review', str(review))
        self.assertEqual(corpus_text.count('\n'), 1)
        lines = review.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[0], 'ID\tRULE-ID\tREASON\tSRC\tTGT\tTERMS')
        self.assertTrue(lines[1].startswith('9-0-it-2F-adj\tit-2F-adj\tCategory 2 candidate without a known speaker'))

    def test_mine_without_rules_for_language(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('mine', '--pairs', str(self.pairs), '--lang', 'en-de')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_balance_bad_quota(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('balance', '--candidates', str(self.pairs), '--quota', '5F=1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_mine_bad_rules_file(self):
        rules = self.directory / 'rules.tsv'
        rules.write_text(
            'RULE-ID\tLANG-PAIR\tCATEGORY\tFORM\tSRC-PATTERN\tTGT-PATTERN\n'
            'x\ten-it\t1\tF\t(\\w+) \\1\t\\bsono (nata)\\b\n',
            encoding='utf-8',
        )
        with self.assertRaises(CommandError) as ctx:
            self.call('mine', '--pairs', str(self.pairs), '--lang', 'en-it', '--rules', str(rules))
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('rule x: source pattern uses a backreference', str(ctx.exception))
