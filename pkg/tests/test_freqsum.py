import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from litreview import freqsum, textcore
from litreview.freqsum import (
    FreqConfig,
    FrequencyTable,
    select_top_sentences,
    score_sentences,
    summarize_freq,
    word_frequencies,
)


class TestWordFrequencies:
    def test_hand_count_with_stopwords_removed(self):
        toks = textcore.tokenize("Apples are red. Apples are sweet.")
        table = word_frequencies(toks)
        assert table.counts == {"apples": 2, "red": 1, "sweet": 1}
        assert table.max_count == 2

    def test_all_stopwords_gives_empty_table(self):
        table = word_frequencies(textcore.tokenize("the of and"))
        assert table.counts == {}
        assert table.max_count == 0

    def test_singleton(self):
        table = word_frequencies(textcore.tokenize("x"))
        assert table.counts == {"x": 1}
        assert table.max_count == 1

    def test_no_punct_in_table(self):
        table = word_frequencies(textcore.tokenize("hello! world?"))
        assert set(table.counts) == {"hello", "world"}


class TestScoreSentences:
    def test_hand_weights(self):
        text = "Apples are red. Apples are sweet. Bananas exist."
        sents = textcore.split_sentences(text)
        table = word_frequencies([t for s in sents for t in s.tokens])
        weights = [s.weight for s in score_sentences(sents, table)]
        assert weights == pytest.approx([1.5, 1.5, 1.0])

    def test_single_sentence_weight_one(self):
        sents = textcore.split_sentences("x.")
        table = word_frequencies([t for s in sents for t in s.tokens])
        assert score_sentences(sents, table)[0].weight == pytest.approx(1.0)

    def test_stopword_only_sentence_weighs_zero(self):
        text = "Machines compute. And so on and on."
        sents = textcore.split_sentences(text)
        table = word_frequencies([t for s in sents for t in s.tokens])
        assert score_sentences(sents, table)[1].weight == 0.0

    def test_empty_table_means_all_zero(self):
        sents = textcore.split_sentences("Alpha beta. Gamma delta.")
        scores = score_sentences(sents, FrequencyTable(counts={}, max_count=0))
        assert all(s.weight == 0.0 for s in scores)


class TestSelectTopSentences:
    def _scores(self, weights):
        return [
            freqsum.SentenceScore(sentence_index=i, weight=w)
            for i, w in enumerate(weights)
        ]

    def test_ceil_rounding(self):
        scores = self._scores([1.0] * 25)
        assert len(select_top_sentences(scores, 0.10)) == 3  # ceil(2.5)

    def test_tie_broken_by_earlier_index(self):
        assert select_top_sentences(self._scores([1.5, 1.5, 1.0]), 0.10) == [0]

    def test_single_sentence_always_selected(self):
        assert select_top_sentences(self._scores([0.0]), 0.10) == [0]

    def test_empty_scores(self):
        assert select_top_sentences([], 0.5) == []

    def test_result_in_document_order(self):
        scores = self._scores([0.1, 0.9, 0.5, 0.8])
        assert select_top_sentences(scores, 0.5) == [1, 3]

    def test_bad_ratio_rejected(self):
        with pytest.raises(ValueError):
            select_top_sentences(self._scores([1.0]), 0.0)
        with pytest.raises(ValueError):
            select_top_sentences(self._scores([1.0]), 1.5)


class TestSummarizeFreq:
    def test_composed_example(self):
        text = "Apples are red. Apples are sweet. Bananas exist."
        assert summarize_freq(text).summary == "Apples are red."

    def test_single_sentence_verbatim(self):
        text = "Just one sentence here."
        result = summarize_freq(text)
        assert result.summary == text
        assert not result.degenerate

    def test_ratio_one_returns_whole_document_in_order(self):
        text = "First point. Second point. Third point."
        result = summarize_freq(text, FreqConfig(ratio=1.0))
        assert result.summary == text

    def test_degenerate_on_empty(self):
        result = summarize_freq("   ")
        assert result.degenerate
        assert result.summary == ""

    def test_backend_id(self):
        assert summarize_freq("One. Two.").backend_id == "freq"


def random_document(rng: random.Random) -> str:
    vocab = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]
    n_sents = rng.randint(1, 30)
    sentences = []
    for _ in range(n_sents):
        words = rng.choices(vocab, k=rng.randint(1, 12))
        words[0] = words[0].capitalize()
        sentences.append(" ".join(words) + ".")
    return " ".join(sentences)


class TestPipelineProperties:
    @given(st.integers(min_value=0, max_value=10_000))
    def test_extractive_order_preserving_and_cardinality(self, seed):
        rng = random.Random(seed)
        text = random_document(rng)
        sents = [s.text(text) for s in textcore.split_sentences(text)]
        summary = summarize_freq(text).summary
        picked = [s for s in sents if s in summary]
        # extractiveness: the summary is exactly selected sentences in order
        assert summary == " ".join(picked)
        k = max(1, math.ceil(0.10 * len(sents)))
        assert summary.count(".") >= 1
        selected = select_top_sentences(
            score_sentences(
                textcore.split_sentences(text),
                word_frequencies(textcore.tokenize(text)),
            ),
            0.10,
        )
        assert len(selected) == k

    @given(st.integers(min_value=0, max_value=10_000), st.integers(2, 9))
    def test_selection_invariant_under_count_scaling(self, seed, factor):
        rng = random.Random(seed)
        text = random_document(rng)
        sents = textcore.split_sentences(text)
        table = word_frequencies(textcore.tokenize(text))
        scaled = FrequencyTable(
            counts={w: c * factor for w, c in table.counts.items()},
            max_count=table.max_count * factor,
        )
        base = select_top_sentences(score_sentences(sents, table), 0.10)
        after = select_top_sentences(score_sentences(sents, scaled), 0.10)
        assert base == after

    @given(st.integers(min_value=0, max_value=10_000))
    def test_determinism(self, seed):
        text = random_document(random.Random(seed))
        assert summarize_freq(text).summary == summarize_freq(text).summary
