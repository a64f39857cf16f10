"""Shared dataclasses passed between the pipeline stages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

DEFAULT_WORD_CAP = 80


@dataclass(frozen=True)
class PaperMetadata:
    """Title and first-author attribution for one paper.

    ``source`` records how the metadata was obtained: a DOI lookup, the
    first-page heuristic, or user input.
    """

    title: str
    first_author: str
    doi: str = ""
    source: str = "heuristic"  # doi_lookup | heuristic | user_supplied

    def surname(self) -> str:
        """Surname used for attribution checks.

        DOI lookups return "Family, Given"; the part before the comma is the
        surname. Plain "Given Family" strings fall back to the last word.
        """
        name = self.first_author.strip()
        if not name:
            return ""
        if "," in name:
            return name.split(",", 1)[0].strip()
        return name.split()[-1]


@dataclass(frozen=True)
class SummaryRequest:
    """Backend-agnostic unit of work: text in, capped summary out."""

    text: str
    metadata: PaperMetadata
    word_cap: int = DEFAULT_WORD_CAP
    prior_entries: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("request text must be non-empty")
        if self.word_cap < 1:
            raise ValueError(f"word_cap must be >= 1, got {self.word_cap}")


@dataclass
class SummaryResult:
    summary: str
    backend_id: str
    degenerate: bool = False
    diagnostics: dict[str, Any] = field(default_factory=dict)
