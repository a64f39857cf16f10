"""Post-process per-paper summaries into one attributed review segment.

Merging is concatenative: attribution normalization, the 80-word cap, and
ordering. No cross-entry rewriting happens here; coherence in the LLM arm
comes from prompt context instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import textcore
from .models import PaperMetadata, SummaryResult


class EntrySkippedError(Exception):
    """A degenerate summary cannot become a review entry."""

    def __init__(self, paper: str):
        super().__init__(f"no usable summary for {paper!r}")
        self.paper = paper


@dataclass(frozen=True)
class ReviewEntry:
    metadata: PaperMetadata
    summary: str
    order: int


@dataclass(frozen=True)
class LiteratureReview:
    entries: tuple[ReviewEntry, ...]
    rendered: str


def _word_count(text: str) -> int:
    return len(text.split())


def enforce_word_cap(text: str, cap: int) -> str:
    """Truncate to at most ``cap`` whitespace-delimited words.

    Cuts at the last sentence boundary that fits; when even the first
    sentence is over the cap, hard-truncates to cap words and appends an
    ellipsis. Idempotent.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    if _word_count(text) <= cap:
        return text
    sentences = textcore.split_sentences(text)
    kept: list[str] = []
    used = 0
    for sent in sentences:
        words = _word_count(sent.text(text))
        if used + words > cap:
            break
        kept.append(sent.text(text))
        used += words
    if kept:
        return " ".join(kept)
    return " ".join(text.split()[:cap]) + "…"


def _mentions_surname(summary: str, surname: str) -> bool:
    if not surname:
        return False
    return re.search(rf"\b{re.escape(surname)}\b", summary, re.IGNORECASE) is not None


def make_entry(
    result: SummaryResult, metadata: PaperMetadata, order: int, word_cap: int
) -> ReviewEntry:
    """Build one attributed entry from a backend result.

    Summaries that do not already name the first author get the attribution
    frame prepended; every entry is then capped to ``word_cap`` words.
    """
    if result.degenerate or not result.summary.strip():
        raise EntrySkippedError(metadata.title or "untitled paper")
    summary = result.summary.strip()
    surname = metadata.surname()
    if not _mentions_surname(summary, surname):
        body = summary[0].lower() + summary[1:] if summary else summary
        summary = f'{surname} et al., in "{metadata.title}", {body}'
    return ReviewEntry(
        metadata=metadata, summary=enforce_word_cap(summary, word_cap), order=order
    )


def merge_review(entries: list[ReviewEntry]) -> LiteratureReview:
    """Merge entries, ordered by their order field, one paragraph each."""
    if not entries:
        raise ValueError("entries must be non-empty")
    ordered = sorted(entries, key=lambda e: e.order)
    orders = [e.order for e in ordered]
    if len(set(orders)) != len(orders):
        raise ValueError("entry order values must be unique")
    rendered = "\n\n".join(e.summary for e in ordered)
    return LiteratureReview(entries=tuple(ordered), rendered=rendered)


def render_markdown(review: LiteratureReview, heading: bool = False) -> str:
    """Stable markdown rendering; the heading is off by default."""
    parts = []
    if heading:
        parts.append("## Literature Review\n")
    parts.append(review.rendered)
    return "\n".join(parts).rstrip("\n") + "\n"
