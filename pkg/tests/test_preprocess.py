"""Segmentation, tokenization, compound splitting and dictionary annotation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from negdetect.errors import ResourceFormatError
from negdetect.preprocess import (
    CompoundLexicon,
    ConceptDictionary,
    DEFAULT_CATEGORY,
    SegmenterConfig,
    annotate_concepts,
    attach_compound_parts,
    mark_stopwords,
    parse_abbreviations,
    parse_compound_lexicon,
    parse_concepts,
    parse_segmenter_config,
    parse_stopwords,
    segment_sentences,
    split_compound,
    tokenize,
)
from negdetect.textmodel import Sentence, Span


class TestSegmentation:
    CONFIG = SegmenterConfig(abbreviations=frozenset({"v.a.", "z.n."}))

    def test_splits_on_sentence_punctuation(self):
        text = "Kein Fieber. Husten seit gestern! Befund unklar?"
        sentences = segment_sentences(text, self.CONFIG)
        assert [s.span.slice(text) for s in sentences] == [
            "Kein Fieber.",
            "Husten seit gestern!",
            "Befund unklar?",
        ]

    def test_abbreviation_does_not_end_sentence(self):
        text = "V.a. Pneumonie links. Kein Erguss."
        sentences = segment_sentences(text, self.CONFIG)
        assert [s.span.slice(text) for s in sentences] == [
            "V.a. Pneumonie links.",
            "Kein Erguss.",
        ]

    def test_blank_line_is_a_boundary(self):
        text = "Kein Fieber\n\nHusten besteht"
        sentences = segment_sentences(text, self.CONFIG)
        assert [s.span.slice(text) for s in sentences] == ["Kein Fieber", "Husten besteht"]

    def test_spans_are_trimmed(self):
        text = "  Kein Fieber.   "
        (sentence,) = segment_sentences(text, self.CONFIG)
        assert sentence.span.slice(text) == "Kein Fieber."

    def test_empty_text_yields_nothing(self):
        assert segment_sentences("   ", self.CONFIG) == []


class TestTokenize:
    CONFIG = SegmenterConfig(abbreviations=frozenset({"v.a."}))

    def test_punctuation_is_split_off(self):
        tokens = tokenize("Kein Fieber, kein Husten.", self.CONFIG)
        assert [t.text for t in tokens] == ["Kein", "Fieber", ",", "kein", "Husten", "."]

    def test_decimal_comma_is_kept(self):
        tokens = tokenize("Temperatur 38,5 Grad", self.CONFIG)
        assert [t.text for t in tokens] == ["Temperatur", "38,5", "Grad"]

    def test_abbreviation_chunk_stays_whole(self):
        tokens = tokenize("V.a. Pneumonie", self.CONFIG)
        assert [t.text for t in tokens] == ["V.a.", "Pneumonie"]

    def test_spans_index_the_original_text(self):
        text = "Kein (neuer) Erguss."
        for token in tokenize(text, self.CONFIG):
            assert token.span.slice(text) == token.text

    def test_base_offset_shifts_spans(self):
        tokens = tokenize("Kein Fieber", self.CONFIG, base=10)
        assert tokens[0].span == Span(10, 14)
        assert tokens[1].span == Span(15, 21)

    def test_slash_splits(self):
        tokens = tokenize("Husten/Schnupfen", self.CONFIG)
        assert [t.text for t in tokens] == ["Husten", "/", "Schnupfen"]


class TestSegmenterConfigParsing:
    def test_round_trip(self):
        config = parse_segmenter_config(
            "sentence_split = [.!?]+(?=\\s|$)\ntoken_split = [,;]\n", ["z.B."]
        )
        assert config.sentence_split_patterns == ("[.!?]+(?=\\s|$)",)
        assert config.token_split_patterns == ("[,;]",)
        assert config.abbreviations == frozenset({"z.b."})

    def test_unknown_key_names_the_line(self):
        with pytest.raises(ResourceFormatError, match="unknown segmenter key 'word_split' at line 2"):
            parse_segmenter_config("sentence_split = [.]\nword_split = x\n")

    def test_missing_equals_sign(self):
        with pytest.raises(ResourceFormatError, match="line 1"):
            parse_segmenter_config("sentence_split [.]\n")

    def test_empty_pattern(self):
        with pytest.raises(ResourceFormatError, match="empty pattern at line 1"):
            parse_segmenter_config("token_split =   \n")

    def test_invalid_regex(self):
        with pytest.raises(ResourceFormatError, match="invalid"):
            parse_segmenter_config("token_split = [unclosed\n")

    def test_invalid_regex_in_direct_construction(self):
        with pytest.raises(ResourceFormatError):
            SegmenterConfig(token_split_patterns=("[bad",))

    def test_comments_and_blanks_ignored(self):
        config = parse_segmenter_config("# comment\n\nsentence_split = [.]\n")
        assert config.sentence_split_patterns == ("[.]",)

    def test_parse_abbreviations_lowercases(self):
        assert parse_abbreviations("V.a.\n# c\nZ.n.\n") == frozenset({"v.a.", "z.n."})


class TestStopwords:
    def test_mark_stopwords(self):
        stopwords = parse_stopwords("der\ndie\ndas\n")
        tokens = tokenize("Der Befund", SegmenterConfig())
        marked = mark_stopwords(tokens, stopwords)
        assert [t.is_stopword for t in marked] == [True, False]
        assert "DER" in stopwords


LEXICON = CompoundLexicon(
    entries=frozenset(
        {"harn", "weg", "harnweg", "infektion", "niere", "funktion", "lunge", "embolie"}
    )
)


def oracle_decompositions(word: str, lexicon: CompoundLexicon) -> list[list[str]]:
    """Every way to cover the lowercased word with entries plus optional
    linking morphemes (folded into the preceding part, never word-final)."""
    lower = word.lower()
    results: list[list[tuple[int, int]]] = []

    def walk(pos: int, parts: list[tuple[int, int]]) -> None:
        if pos == len(lower):
            results.append(parts)
            return
        for end in range(pos + 1, len(lower) + 1):
            if lower[pos:end] not in lexicon.entries:
                continue
            walk(end, parts + [(pos, end)])
            for morpheme in lexicon.linking_morphemes:
                stretched = end + len(morpheme)
                if stretched < len(lower) and lower[end:stretched] == morpheme:
                    walk(stretched, parts + [(pos, stretched)])

    walk(0, [])
    return [[word[s:e] for s, e in bounds] for bounds in results if len(bounds) >= 2]


def oracle_best_split(word: str, lexicon: CompoundLexicon) -> list[str]:
    candidates = oracle_decompositions(word, lexicon)
    if not candidates:
        return [word]
    best = candidates[0]
    for candidate in candidates[1:]:
        if len(candidate) < len(best):
            best = candidate
            continue
        if len(candidate) > len(best):
            continue
        # Same part count: prefer the longer part, comparing from the right.
        for mine, other in zip(reversed(candidate), reversed(best)):
            if len(mine) != len(other):
                if len(mine) > len(other):
                    best = candidate
                break
    return best


class TestCompoundSplitting:
    def test_linking_morpheme_folds_left(self):
        assert split_compound("Harnwegsinfektion", LEXICON) == ["Harnwegs", "infektion"]

    def test_plain_two_part_compound(self):
        assert split_compound("Nierenfunktion", LEXICON) == ["Nieren", "funktion"]

    def test_longest_last_part_preferred(self):
        # "harn+wegs+infektion" (3 parts) loses to "harnwegs+infektion" (2 parts).
        assert len(split_compound("Harnwegsinfektion", LEXICON)) == 2

    def test_unknown_word_is_returned_whole(self):
        assert split_compound("Appendizitis", LEXICON) == ["Appendizitis"]

    def test_single_entry_is_not_a_compound(self):
        assert split_compound("Infektion", LEXICON) == ["Infektion"]

    def test_morpheme_never_trailing(self):
        # "lungen" = lunge + n would leave the morpheme word-final.
        assert split_compound("Lungen", LEXICON) == ["Lungen"]

    @pytest.mark.parametrize(
        "word",
        [
            "Harnwegsinfektion",
            "Nierenfunktion",
            "Lungenembolie",
            "Harnweginfektion",
            "Funktionsniere",
            "Infektionen",
            "Wegharn",
            "Harnwegsinfektionsfunktion",
        ],
    )
    def test_matches_exhaustive_oracle(self, word):
        assert split_compound(word, LEXICON) == oracle_best_split(word, LEXICON)

    @given(
        st.lists(
            st.sampled_from(["harn", "weg", "infektion", "niere", "funktion", "s", "en", "n"]),
            min_size=1,
            max_size=4,
        )
    )
    def test_random_concatenations_match_oracle(self, pieces):
        word = "".join(pieces)
        assert split_compound(word, LEXICON) == oracle_best_split(word, LEXICON)

    @given(st.text(alphabet="harnwegsinfektiou", min_size=1, max_size=14))
    def test_parts_reassemble_to_the_word(self, word):
        parts = split_compound(word, LEXICON)
        assert "".join(parts) == word
        assert len(parts) == 1 or len(parts) >= 2

    def test_attach_compound_parts(self):
        tokens = tokenize("Harnwegsinfektion ausgeschlossen", SegmenterConfig())
        attached = attach_compound_parts(tokens, LEXICON)
        assert attached[0].compound_parts == ("Harnwegs", "infektion")
        assert attached[1].compound_parts == ("ausgeschlossen",)

    def test_lexicon_rejects_short_entries(self):
        with pytest.raises(ResourceFormatError, match="line 2"):
            parse_compound_lexicon("harn\nab\n")

    def test_lexicon_parses_and_lowercases(self):
        lexicon = parse_compound_lexicon("Harn\nWeg\n")
        assert lexicon.entries == frozenset({"harn", "weg"})


class TestConceptDictionary:
    def test_parse_with_default_category(self):
        dictionary = parse_concepts("Fieber\nakute Pneumonie\tdiagnose\n")
        assert dictionary.entries["fieber"] == DEFAULT_CATEGORY
        assert dictionary.entries["akute pneumonie"] == "diagnose"
        assert dictionary.max_phrase_tokens == 2

    def test_empty_phrase_rejected(self):
        with pytest.raises(ValueError, match="empty concept phrase"):
            ConceptDictionary.from_entries([("   ", "x")])

    def test_from_entries_normalizes_whitespace(self):
        dictionary = ConceptDictionary.from_entries([("  Akute   Pneumonie ", "x")])
        assert "akute pneumonie" in dictionary.entries


def _prepared_sentence(text: str, lexicon: CompoundLexicon = LEXICON) -> Sentence:
    tokens = attach_compound_parts(tokenize(text, SegmenterConfig()), lexicon)
    return Sentence(span=Span(0, len(text)), tokens=tuple(tokens))


class TestAnnotateConcepts:
    DICTIONARY = ConceptDictionary.from_entries(
        [
            ("Fieber", "befund"),
            ("akutes Fieber", "befund"),
            ("Infektion", "diagnose"),
            ("Husten", "befund"),
        ]
    )

    def test_single_match(self):
        text = "Kein Fieber heute"
        (hit,) = annotate_concepts(_prepared_sentence(text), self.DICTIONARY, LEXICON, text)
        assert hit.matched_text == "Fieber"
        assert hit.span == Span(5, 11)
        assert hit.category == "befund"
        assert hit.dictionary_entry == "fieber"

    def test_longest_phrase_wins(self):
        text = "Patient hat akutes Fieber"
        (hit,) = annotate_concepts(_prepared_sentence(text), self.DICTIONARY, LEXICON, text)
        assert hit.dictionary_entry == "akutes fieber"
        assert hit.matched_text == "akutes Fieber"

    def test_scan_resumes_after_match(self):
        text = "Fieber Fieber"
        hits = annotate_concepts(_prepared_sentence(text), self.DICTIONARY, LEXICON, text)
        assert [h.span for h in hits] == [Span(0, 6), Span(7, 13)]

    def test_compound_fallback_covers_full_token(self):
        text = "Harnwegsinfektion ausgeschlossen"
        (hit,) = annotate_concepts(_prepared_sentence(text), self.DICTIONARY, LEXICON, text)
        assert hit.dictionary_entry == "infektion"
        assert hit.matched_text == "Harnwegsinfektion"
        assert hit.span == Span(0, 17)

    def test_first_matching_compound_part_wins(self):
        dictionary = ConceptDictionary.from_entries([("Harnwegs", "a"), ("Infektion", "b")])
        text = "Harnwegsinfektion besteht"
        (hit,) = annotate_concepts(_prepared_sentence(text), dictionary, LEXICON, text)
        assert hit.dictionary_entry == "harnwegs"
        assert hit.category == "a"

    def test_case_insensitive(self):
        text = "FIEBER und INFEKTION"
        hits = annotate_concepts(_prepared_sentence(text), self.DICTIONARY, LEXICON, text)
        assert [h.dictionary_entry for h in hits] == ["fieber", "infektion"]

    @given(
        st.lists(
            st.sampled_from(["fieber", "akutes", "infektion", "husten", "und", "kein"]),
            min_size=1,
            max_size=8,
        )
    )
    def test_matches_independent_greedy_scan(self, words):
        text = " ".join(words)
        sentence = _prepared_sentence(text)
        hits = annotate_concepts(sentence, self.DICTIONARY, LEXICON, text)

        # Independent greedy longest-match over the word list.
        expected: list[str] = []
        i = 0
        while i < len(words):
            for n in (2, 1):
                phrase = " ".join(words[i : i + n])
                if phrase in self.DICTIONARY.entries:
                    expected.append(phrase)
                    i += n
                    break
            else:
                i += 1
        assert [h.dictionary_entry for h in hits] == expected
        # Annotations never overlap and appear left to right.
        for left, right in zip(hits, hits[1:]):
            assert left.span.end <= right.span.begin
