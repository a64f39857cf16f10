"""Frequency-based extractive summarizer.

Word frequencies over the non-stopword, non-punctuation tokens give each
sentence a weight (sum of counts normalized by the maximum count); the top
10 percent of sentences, in document order, form the summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import textcore
from .models import SummaryResult
from .textcore import SentenceSpan, Token, TokenizerConfig

BACKEND_ID = "freq"


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, int]
    max_count: int

    def weight(self, word: str) -> float:
        if self.max_count == 0:
            return 0.0
        return self.counts.get(word, 0) / self.max_count


@dataclass(frozen=True)
class SentenceScore:
    sentence_index: int
    weight: float


@dataclass(frozen=True)
class FreqConfig:
    ratio: float = 0.10
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __post_init__(self) -> None:
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError(f"ratio must be in (0, 1], got {self.ratio}")


def word_frequencies(tokens: list[Token] | tuple[Token, ...]) -> FrequencyTable:
    """Occurrence counts over word tokens, stopwords and punctuation removed."""
    counts: dict[str, int] = {}
    for tok in tokens:
        if tok.is_stopword or tok.is_punct:
            continue
        counts[tok.text] = counts.get(tok.text, 0) + 1
    return FrequencyTable(counts=counts, max_count=max(counts.values(), default=0))


def score_sentences(
    sentences: list[SentenceSpan], table: FrequencyTable
) -> list[SentenceScore]:
    """Weight per sentence: sum of normalized counts of its scored tokens."""
    scores = []
    for sent in sentences:
        weight = sum(
            table.weight(t.text)
            for t in sent.tokens
            if not t.is_stopword and not t.is_punct
        )
        scores.append(SentenceScore(sentence_index=sent.index, weight=weight))
    return scores


def select_top_sentences(scores: list[SentenceScore], ratio: float) -> list[int]:
    """Indices of the k = max(1, ceil(ratio * N)) highest-weight sentences.

    Ties go to the earlier sentence; the result is in document order.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    if not scores:
        return []
    k = max(1, math.ceil(ratio * len(scores)))
    ranked = sorted(scores, key=lambda s: (-s.weight, s.sentence_index))
    return sorted(s.sentence_index for s in ranked[:k])


def summarize_freq(text: str, config: FreqConfig | None = None) -> SummaryResult:
    """Full pipeline: split, tokenize, count, weight, select, join."""
    config = config or FreqConfig()
    text = textcore.normalize_text(text)
    sentences = textcore.split_sentences(text, config.tokenizer)
    if not sentences:
        return SummaryResult(
            summary="",
            backend_id=BACKEND_ID,
            degenerate=True,
            diagnostics={"reason": "no sentences in input"},
        )
    all_tokens = [t for sent in sentences for t in sent.tokens]
    table = word_frequencies(all_tokens)
    scores = score_sentences(sentences, table)
    selected = select_top_sentences(scores, config.ratio)
    summary = " ".join(sentences[i].text(text) for i in selected)
    return SummaryResult(
        summary=summary,
        backend_id=BACKEND_ID,
        degenerate=False,
        diagnostics={
            "sentences": len(sentences),
            "selected": len(selected),
            "vocabulary": len(table.counts),
        },
    )
