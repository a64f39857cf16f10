"""Turn an input paper into sections and metadata.

Covers document loading (plain text or PDF), heading detection for the
Abstract/Introduction/Conclusion sections, and DOI resolution to title and
first author via a content-negotiation metadata endpoint.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from . import pdftext
from .models import PaperMetadata
from .textcore import normalize_text

USER_AGENT = "litreview/0.1 (literature-review generator; mailto:maintainers@localhost)"
DOI_PATTERN = re.compile(r"^10\.\d{4,9}/\S+$")

SECTION_ABSTRACT = "abstract"
SECTION_INTRODUCTION = "introduction"
SECTION_CONCLUSION = "conclusion"
SECTION_BACK_MATTER = "back_matter"

_KEYWORDS = {
    SECTION_ABSTRACT: ("abstract",),
    SECTION_INTRODUCTION: ("introduction",),
    SECTION_CONCLUSION: (
        "conclusion and future works",
        "conclusion and future work",
        "concluding remarks",
        "conclusions",
        "conclusion",
    ),
    SECTION_BACK_MATTER: (
        "references",
        "bibliography",
        "acknowledgments",
        "acknowledgment",
        "acknowledgements",
        "acknowledgement",
    ),
}

# Optional "1." / "IV." / "V " style numbering before the keyword.
_NUMBERING = r"(?:(?:\d{1,2}|[ivxlcdm]{1,6})\s*[.):-]?\s+)?"
_HEADING_RES = {
    kind: re.compile(
        r"^\s*" + _NUMBERING + r"(?:" + "|".join(re.escape(k) for k in kws) + r")\s*[.:]?\s*$",
        re.IGNORECASE,
    )
    for kind, kws in _KEYWORDS.items()
}

MAX_HEADING_LEN = 80


class DocumentLoadError(OSError):
    """The input file could not be read or contains nothing usable."""


class DoiError(Exception):
    """Base class for DOI resolution failures; callers may fall back."""


class DoiValidationError(DoiError):
    """The DOI string does not look like a DOI; no network call was made."""


class DoiNotFoundError(DoiError):
    """The registry does not know this DOI (HTTP 404)."""


class DoiTransportError(DoiError):
    """Network failure or retries exhausted."""


@dataclass(frozen=True)
class SourceDocument:
    origin: str
    full_text: str
    doi: str | None = None


@dataclass(frozen=True)
class PaperSections:
    abstract: str | None
    introduction: str | None
    conclusion: str | None
    heading_spans: tuple[tuple[str, tuple[int, int]], ...]


@dataclass(frozen=True)
class DoiClientConfig:
    base_url: str = "https://doi.org"
    timeout: float = 10.0
    retries: int = 2
    user_agent: str = USER_AGENT

    def __post_init__(self) -> None:
        if self.retries < 0:
            raise ValueError("retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")


_CONTROL_CHARS = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")


def _clean_text(text: str) -> str:
    return _CONTROL_CHARS.sub("", normalize_text(text))


def load_document(
    origin: str | Path | bytes, kind: str = "text", doi: str | None = None
) -> SourceDocument:
    """Load a paper as text. ``kind`` is "text" or "pdf".

    PDF text is page-ordered with page breaks as newlines. Control characters
    other than newline/tab are stripped. Empty input raises DocumentLoadError.
    """
    if isinstance(origin, bytes):
        data = origin
        name = "<bytes>"
    else:
        path = Path(origin)
        name = str(path)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise DocumentLoadError(f"cannot read {path}: {exc}") from exc
    if not data:
        raise DocumentLoadError(f"{name}: empty input")

    if kind == "pdf":
        try:
            pages = pdftext.extract_page_texts(data)
        except pdftext.PdfNoTextError as exc:
            raise DocumentLoadError(f"{name}: {exc}") from exc
        except pdftext.PdfError as exc:
            raise DocumentLoadError(f"{name}: unreadable PDF: {exc}") from exc
        full_text = _clean_text("\n".join(pages))
    elif kind == "text":
        full_text = _clean_text(data.decode("utf-8", errors="replace"))
    else:
        raise ValueError(f"unknown document kind {kind!r}")

    if not full_text.strip():
        raise DocumentLoadError(f"{name}: no text content")
    return SourceDocument(origin=name, full_text=full_text, doi=doi)


def _heading_kind(line: str) -> str | None:
    if len(line) > MAX_HEADING_LEN:
        return None
    for kind, pattern in _HEADING_RES.items():
        if pattern.match(line):
            return kind
    return None


def detect_headings(full_text: str) -> list[tuple[str, tuple[int, int]]]:
    """Section-heading lines, in document order, as (text, span) pairs.

    A heading is a whole line of at most 80 characters that consists of an
    optional number and one of the known section keywords.
    """
    headings: list[tuple[str, tuple[int, int]]] = []
    offset = 0
    for line in full_text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped and _heading_kind(stripped) is not None:
            start = offset + line.index(stripped[0])
            headings.append((stripped, (start, start + len(stripped))))
        offset += len(line)
    return headings


def extract_section(
    full_text: str,
    headings: list[tuple[str, tuple[int, int]]],
    which: str,
) -> str | None:
    """Text strictly between the requested heading and the next heading/EOF."""
    if which not in (SECTION_ABSTRACT, SECTION_INTRODUCTION, SECTION_CONCLUSION):
        raise ValueError(f"unknown section {which!r}")
    for i, (text, span) in enumerate(headings):
        if _heading_kind(text) == which:
            start = span[1]
            end = headings[i + 1][1][0] if i + 1 < len(headings) else len(full_text)
            section = full_text[start:end].strip()
            return section or None
    if which == SECTION_ABSTRACT:
        return _abstract_fallback(full_text, headings)
    return None


def _abstract_fallback(
    full_text: str, headings: list[tuple[str, tuple[int, int]]]
) -> str | None:
    """IEEE-style inline abstract: a line starting with 'Abstract' plus prose."""
    m = re.search(r"^[ \t]*abstract\b[\s:.—-]*", full_text, re.IGNORECASE | re.MULTILINE)
    if not m:
        return None
    start = m.end()
    end = len(full_text)
    for _, span in headings:
        if span[0] > start:
            end = span[0]
            break
    section = full_text[start:end].strip()
    return section or None


def extract_sections(doc: SourceDocument) -> PaperSections:
    headings = detect_headings(doc.full_text)
    return PaperSections(
        abstract=extract_section(doc.full_text, headings, SECTION_ABSTRACT),
        introduction=extract_section(doc.full_text, headings, SECTION_INTRODUCTION),
        conclusion=extract_section(doc.full_text, headings, SECTION_CONCLUSION),
        heading_spans=tuple(headings),
    )


def extract_aic(doc: SourceDocument) -> str:
    """Abstract, introduction and conclusion joined by blank lines, in that
    fixed order; a document without any detected section degrades to its
    full text."""
    sections = extract_sections(doc)
    parts = [
        s
        for s in (sections.abstract, sections.introduction, sections.conclusion)
        if s
    ]
    if not parts:
        return doc.full_text
    return "\n\n".join(parts)


_doi_cache: dict[str, PaperMetadata] = {}
_doi_cache_lock = threading.Lock()


def fetch_doi_metadata(
    doi: str,
    config: DoiClientConfig | None = None,
    session: requests.Session | None = None,
    sleeper=time.sleep,
) -> PaperMetadata:
    """Resolve a DOI to title and first author via citation JSON.

    Results are cached per process. Retries 5xx/timeouts with exponential
    backoff up to config.retries; 404 raises DoiNotFoundError. A malformed
    DOI never reaches the network.
    """
    doi = doi.strip()
    if not DOI_PATTERN.match(doi):
        raise DoiValidationError(f"not a DOI: {doi!r}")
    with _doi_cache_lock:
        cached = _doi_cache.get(doi)
    if cached is not None:
        return cached

    config = config or DoiClientConfig()
    own_session = session is None
    sess = session or requests.Session()
    url = config.base_url.rstrip("/") + "/" + doi
    headers = {
        "Accept": "application/vnd.citationstyles.csl+json, application/citeproc+json",
        "User-Agent": config.user_agent,
    }
    try:
        last_error: Exception | None = None
        for attempt in range(config.retries + 1):
            try:
                resp = sess.get(url, headers=headers, timeout=config.timeout)
            except requests.RequestException as exc:
                last_error = exc
                if attempt < config.retries:
                    sleeper(0.5 * 2**attempt)
                continue
            if resp.status_code == 404:
                raise DoiNotFoundError(f"DOI not found: {doi}")
            if resp.status_code >= 500:
                last_error = DoiTransportError(
                    f"DOI lookup failed with HTTP {resp.status_code}"
                )
                if attempt < config.retries:
                    sleeper(0.5 * 2**attempt)
                continue
            if resp.status_code != 200:
                raise DoiTransportError(
                    f"DOI lookup failed with HTTP {resp.status_code}"
                )
            metadata = _parse_citation_json(resp, doi)
            with _doi_cache_lock:
                _doi_cache.setdefault(doi, metadata)
            return metadata
        raise DoiTransportError(f"DOI lookup failed after retries: {last_error}")
    finally:
        if own_session:
            sess.close()


def _parse_citation_json(resp: requests.Response, doi: str) -> PaperMetadata:
    try:
        payload = resp.json()
    except ValueError as exc:
        raise DoiTransportError(f"DOI response is not JSON: {exc}") from None
    title = str(payload.get("title") or "").strip()
    authors = payload.get("author") or []
    first_author = ""
    if authors and isinstance(authors, list):
        a0 = authors[0]
        family = str(a0.get("family") or "").strip()
        given = str(a0.get("given") or "").strip()
        if family and given:
            first_author = f"{family}, {given}"
        else:
            first_author = family or given or str(a0.get("name") or "").strip()
    if not title or not first_author:
        raise DoiTransportError(f"DOI metadata for {doi} lacks title or author")
    return PaperMetadata(
        title=title, first_author=first_author, doi=doi, source="doi_lookup"
    )


def clear_doi_cache() -> None:
    with _doi_cache_lock:
        _doi_cache.clear()


def heuristic_metadata(doc: SourceDocument) -> PaperMetadata:
    """Fallback metadata from page one: first non-empty line is the title,
    the second's first comma-separated token is the author."""
    lines = [ln.strip() for ln in doc.full_text.splitlines() if ln.strip()]
    title = lines[0] if lines else Path(doc.origin).stem or "Untitled"
    author = ""
    if len(lines) > 1:
        author = lines[1].split(",")[0].strip()
    return PaperMetadata(
        title=title,
        first_author=author or "Unknown",
        doi=doc.doi or "",
        source="heuristic",
    )
