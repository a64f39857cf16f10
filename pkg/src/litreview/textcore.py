"""Deterministic tokenization, sentence segmentation, and n-gram extraction.

Shared by the frequency summarizer and the ROUGE metrics. Everything here is
a pure function over immutable inputs: same text and config always produce
the same output, with no model downloads and no global state beyond the
bundled word lists.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

# Maximal alphanumeric runs, allowing internal hyphens/apostrophes so that
# "state-of-the-art" and "don't" stay single tokens. Underscore is excluded
# from the alphanumeric class on purpose.
DEFAULT_TOKEN_PATTERN = r"[^\W_]+(?:['’-][^\W_]+)*"

_DATA_PACKAGE = "litreview.data"


def normalize_text(text: str) -> str:
    """NFC-normalize text at an ingestion boundary.

    Tokenization itself never rewrites its input (span fidelity), so pipeline
    entry points call this once when text enters the system.
    """
    return unicodedata.normalize("NFC", text)


@lru_cache(maxsize=None)
def load_wordlist(list_id: str) -> frozenset[str]:
    """Load a bundled word list: one entry per line, '#' comments, UTF-8."""
    filename = f"{list_id}.txt"
    try:
        raw = resources.files(_DATA_PACKAGE).joinpath(filename).read_text("utf-8")
    except FileNotFoundError:
        raise ValueError(f"unknown word list: {list_id!r}") from None
    entries = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


def stopwords(list_id: str = "stopwords_en") -> frozenset[str]:
    return load_wordlist(list_id)


@lru_cache(maxsize=None)
def _abbreviations(list_id: str = "abbreviations_en") -> tuple[str, ...]:
    # Longest first so "et al." wins over "al.".
    entries = sorted(load_wordlist(list_id), key=len, reverse=True)
    return tuple(e.lower() for e in entries)


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    stopword_list_id: str = "stopwords_en"
    token_pattern: str = DEFAULT_TOKEN_PATTERN


DEFAULT_CONFIG = TokenizerConfig()


@dataclass(frozen=True)
class Token:
    """One token: normalized text plus the span of its surface form.

    ``span`` is a (start, end) offset pair into the source string, so
    ``text[span[0]:span[1]]`` recovers the pre-normalization surface exactly.
    """

    text: str
    is_stopword: bool
    is_punct: bool
    span: tuple[int, int]


@dataclass(frozen=True)
class SentenceSpan:
    """One sentence: its ordinal, span in the document, and its tokens."""

    index: int
    span: tuple[int, int]
    tokens: tuple[Token, ...] = field(default_factory=tuple)

    def text(self, document: str) -> str:
        return document[self.span[0] : self.span[1]]


def tokenize(text: str, config: TokenizerConfig = DEFAULT_CONFIG) -> list[Token]:
    """Split text into word and punctuation tokens, ordered by offset.

    Word tokens match ``config.token_pattern``; every other non-whitespace
    character becomes a single-character punctuation token.
    """
    word_re = re.compile(config.token_pattern)
    stop = load_wordlist(config.stopword_list_id)
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = word_re.match(text, pos)
        if m:
            surface = m.group(0)
            norm = surface.lower() if config.lowercase else surface
            tokens.append(
                Token(
                    text=norm,
                    is_stopword=norm in stop,
                    is_punct=False,
                    span=(m.start(), m.end()),
                )
            )
            pos = m.end()
        else:
            tokens.append(
                Token(text=ch, is_stopword=False, is_punct=True, span=(pos, pos + 1))
            )
            pos += 1
    return tokens


_TERMINATORS = frozenset(".!?")


def _ends_with_abbreviation(text: str, dot_index: int) -> bool:
    """True when the '.' at dot_index closes a known abbreviation."""
    prefix = text[: dot_index + 1].lower()
    for abbr in _abbreviations():
        if not prefix.endswith(abbr):
            continue
        # Word-boundary guard: "experimental." must not match "al.".
        head = prefix[: -len(abbr)]
        if not head or not (head[-1].isalnum() or head[-1] == "."):
            return True
    return False


def _is_boundary(text: str, i: int) -> bool:
    """Is the terminator at position i a sentence boundary?

    Boundary rule: '.', '!' or '?' followed by whitespace and then an
    uppercase letter or digit (or end of text), unless a bundled
    abbreviation ends here.
    """
    if text[i] == "." and _ends_with_abbreviation(text, i):
        return False
    j = i + 1
    if j >= len(text):
        return True
    if not text[j].isspace():
        return False
    while j < len(text) and text[j].isspace():
        j += 1
    if j >= len(text):
        return True
    return text[j].isupper() or text[j].isdigit()


def split_sentences(
    text: str, config: TokenizerConfig = DEFAULT_CONFIG
) -> list[SentenceSpan]:
    """Rule-based sentence segmentation returning spans into ``text``.

    Spans are non-overlapping, ordered, and separated only by whitespace, so
    re-joining spans plus the gaps reconstructs the document exactly.
    """
    spans: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] in _TERMINATORS and _is_boundary(text, i):
            end = i + 1
            if text[start:end].strip():
                spans.append((start, end))
            start = end
            i = end
        else:
            i += 1
    if text[start:].strip():
        spans.append((start, n))

    sentences: list[SentenceSpan] = []
    for index, (s, e) in enumerate(spans):
        # Trim surrounding whitespace into the inter-sentence gap.
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        toks = tuple(
            Token(t.text, t.is_stopword, t.is_punct, (t.span[0] + s, t.span[1] + s))
            for t in tokenize(text[s:e], config)
        )
        sentences.append(SentenceSpan(index=index, span=(s, e), tokens=toks))
    return sentences


def ngrams(
    tokens: list[Token] | tuple[Token, ...],
    n: int,
    skip_stopwords: bool = False,
    skip_punct: bool = False,
) -> Counter:
    """Multiset of n-grams (tuples of token texts) over a sliding window."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    kept = [
        t.text
        for t in tokens
        if not (skip_stopwords and t.is_stopword) and not (skip_punct and t.is_punct)
    ]
    return Counter(tuple(kept[i : i + n]) for i in range(len(kept) - n + 1))
