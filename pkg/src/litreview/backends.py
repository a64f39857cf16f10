"""Summarization backends behind one contract.

Three implementations of ``summarize(request) -> SummaryResult``:

* ``freq`` — the deterministic frequency-based extractive summarizer;
* ``llm`` — an OpenAI-compatible chat-completion client conditioned on
  exemplars retrieved from a local knowledge base (the RAG arm);
* ``external`` — a plain JSON-over-HTTP protocol for an externally hosted
  summarizer (stand-in for a fine-tuned seq2seq service).
"""

from __future__ import annotations

import json
import os
import random
import threading
import time
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple, Protocol

import requests

from . import freqsum
from .dataset import DatasetSplit, TldrRecord
from .models import SummaryRequest, SummaryResult
from .textcore import normalize_text, stopwords, tokenize

BACKEND_IDS = ("freq", "llm", "external")

PRIOR_ENTRY_LIMIT = 5
EXEMPLAR_INPUT_CHAR_CAP = 2000


class BackendError(Exception):
    """Base class; carries the backend id for error reporting."""

    def __init__(self, backend_id: str, message: str):
        super().__init__(f"[{backend_id}] {message}")
        self.backend_id = backend_id


class BackendConfigError(BackendError):
    """Bad or missing configuration (e.g. API key); raised before any I/O."""


class BackendRequestError(BackendError):
    """The remote service rejected the request (non-retryable HTTP status)."""


class BackendProtocolError(BackendError):
    """The remote service answered with a payload we cannot interpret."""


class BackendTransportError(BackendError):
    """Network failure, timeout, or retries exhausted."""


class SummarizerBackend(Protocol):
    backend_id: str

    def summarize(self, request: SummaryRequest) -> SummaryResult: ...


# --------------------------------------------------------------------------
# Frequency backend


class FrequencyBackend:
    backend_id = "freq"

    def __init__(self, config: freqsum.FreqConfig | None = None):
        self.config = config or freqsum.FreqConfig()

    def summarize(self, request: SummaryRequest) -> SummaryResult:
        return freqsum.summarize_freq(request.text, self.config)


# --------------------------------------------------------------------------
# Knowledge base and exemplar retrieval (the RAG part of the LLM backend)


def _content_word_set(text: str) -> frozenset[str]:
    toks = tokenize(normalize_text(text))
    stop = stopwords()
    return frozenset(t.text for t in toks if not t.is_punct and t.text not in stop)


@dataclass(frozen=True)
class KnowledgeBase:
    records: DatasetSplit
    index: dict[str, frozenset[str]]

    @staticmethod
    def build(split: DatasetSplit) -> "KnowledgeBase":
        index = {
            rec.paper_id: _content_word_set(" ".join(rec.source))
            for rec in split.records
        }
        return KnowledgeBase(records=split, index=index)


def retrieve_exemplars(
    kb: KnowledgeBase, query_text: str, k: int
) -> list[tuple[TldrRecord, float]]:
    """Top-k records by Jaccard similarity of content-word sets.

    Ties break by ascending paper_id; the result is in descending
    similarity order.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return []
    query = _content_word_set(query_text)
    scored: list[tuple[float, str, TldrRecord]] = []
    for rec in kb.records.records:
        words = kb.index[rec.paper_id]
        union = len(query | words)
        sim = len(query & words) / union if union else 0.0
        scored.append((sim, rec.paper_id, rec))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [(rec, sim) for sim, _, rec in scored[:k]]


# --------------------------------------------------------------------------
# LLM backend


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-3.5-turbo-0125"
    api_key_env: str = "OPENAI_API_KEY"
    temperature: float = 0.0
    max_retries: int = 2
    request_timeout: float = 60.0
    exemplar_count: int = 3
    input_token_budget: int = 24_000
    max_inflight: int = 2

    def __post_init__(self) -> None:
        if not self.endpoint_url.startswith(("http://", "https://")):
            raise ValueError(f"endpoint_url is not a URL: {self.endpoint_url!r}")
        if self.exemplar_count < 0:
            raise ValueError("exemplar_count must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


class PromptPayload(NamedTuple):
    system_text: str
    user_text: str


def instruction_text() -> str:
    """The generation instruction, byte-identical to the committed file."""
    raw = resources.files("litreview.data").joinpath("llm_system_prompt.txt")
    return raw.read_text("utf-8").rstrip("\n")


def _truncate_at_whitespace(text: str, budget: int) -> str:
    if len(text) <= budget:
        return text
    cut = text[:budget]
    space = max(cut.rfind(" "), cut.rfind("\n"), cut.rfind("\t"))
    if space > 0:
        cut = cut[:space]
    return cut.rstrip()


def build_llm_prompt(
    request: SummaryRequest,
    exemplars: list[tuple[TldrRecord, float]],
    input_char_budget: int = 24_000,
) -> PromptPayload:
    """Assemble the chat prompt: instruction + exemplars, then the paper.

    With no exemplars the system text is exactly the committed instruction.
    The paper text is truncated to the character budget at a whitespace
    boundary; the most recent prior entries ride along for coherence.
    """
    system_text = instruction_text()
    if exemplars:
        lines = ["Knowledge examples:"]
        for i, (rec, _sim) in enumerate(exemplars, 1):
            source = _truncate_at_whitespace(
                " ".join(rec.source), EXEMPLAR_INPUT_CHAR_CAP
            )
            lines.append(f"Example {i} input: {source}")
            lines.append(f"Example {i} output: {rec.targets[0]}")
        system_text = system_text + "\n\n" + "\n".join(lines)

    meta = request.metadata
    user_lines = [f"Title: {meta.title}", f"First author: {meta.first_author}"]
    if meta.doi:
        user_lines.append(f"DOI: {meta.doi}")
    user_lines.append("")
    user_lines.append(_truncate_at_whitespace(request.text, input_char_budget))
    if request.prior_entries:
        recent = request.prior_entries[-PRIOR_ENTRY_LIMIT:]
        user_lines.append("")
        user_lines.append("Previously generated entries:")
        user_lines.extend(f"- {entry}" for entry in recent)
    return PromptPayload(system_text=system_text, user_text="\n".join(user_lines))


class CompletionResponse(NamedTuple):
    text: str
    retries: int


def call_llm(
    payload: PromptPayload,
    config: LlmConfig,
    session: requests.Session | None = None,
    sleeper=time.sleep,
    rng: random.Random | None = None,
) -> CompletionResponse:
    """One chat-completion request per paper, with backoff on 429/5xx.

    Raises BackendConfigError before any network call when the configured
    API key variable is set but absent from the environment.
    """
    api_key = None
    if config.api_key_env:
        api_key = os.environ.get(config.api_key_env)
        if not api_key:
            raise BackendConfigError(
                "llm", f"environment variable {config.api_key_env} is not set"
            )
    headers = {"Content-Type": "application/json"}
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {
        "model": config.model_name,
        "messages": [
            {"role": "system", "content": payload.system_text},
            {"role": "user", "content": payload.user_text},
        ],
        "temperature": config.temperature,
    }
    rng = rng or random.Random()
    own_session = session is None
    sess = session or requests.Session()
    last_error: Exception | None = None
    try:
        for attempt in range(config.max_retries + 1):
            if attempt:
                sleeper(0.5 * 2 ** (attempt - 1) + rng.uniform(0, 0.1))
            try:
                resp = sess.post(
                    config.endpoint_url,
                    json=body,
                    headers=headers,
                    timeout=config.request_timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = BackendTransportError(
                    "llm", f"HTTP {resp.status_code} from completion endpoint"
                )
                continue
            if resp.status_code != 200:
                excerpt = resp.text[:200]
                raise BackendRequestError(
                    "llm", f"HTTP {resp.status_code}: {excerpt}"
                )
            try:
                data = resp.json()
                text = data["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise BackendProtocolError(
                    "llm", f"malformed completion payload: {exc}"
                ) from None
            return CompletionResponse(text=str(text), retries=attempt)
        raise BackendTransportError(
            "llm", f"retries exhausted ({config.max_retries}): {last_error}"
        )
    finally:
        if own_session:
            sess.close()


_HEADLINE_PREFIX = "literature review of"


def parse_llm_response(raw: str, request: SummaryRequest) -> SummaryResult:
    """Normalize a raw completion into a SummaryResult.

    Strips a leading "Literature Review of ..." headline if the model
    disobeyed the instruction; an empty completion is flagged degenerate.
    """
    text = raw.strip()
    lines = text.split("\n")
    if lines and lines[0].strip().lower().startswith(_HEADLINE_PREFIX):
        text = "\n".join(lines[1:]).strip()
    degenerate = not text
    return SummaryResult(
        summary=text,
        backend_id="llm",
        degenerate=degenerate,
        diagnostics={"word_count": len(text.split())},
    )


class LlmBackend:
    backend_id = "llm"

    def __init__(
        self,
        config: LlmConfig | None = None,
        knowledge_base: KnowledgeBase | None = None,
        session: requests.Session | None = None,
        sleeper=time.sleep,
    ):
        self.config = config or LlmConfig()
        self.knowledge_base = knowledge_base
        self.session = session
        self.sleeper = sleeper
        self._inflight = threading.BoundedSemaphore(max(1, self.config.max_inflight))

    def summarize(self, request: SummaryRequest) -> SummaryResult:
        exemplars: list[tuple[TldrRecord, float]] = []
        if self.knowledge_base is not None and self.config.exemplar_count > 0:
            exemplars = retrieve_exemplars(
                self.knowledge_base, request.text, self.config.exemplar_count
            )
        payload = build_llm_prompt(
            request, exemplars, input_char_budget=self.config.input_token_budget
        )
        with self._inflight:
            completion = call_llm(
                payload, self.config, session=self.session, sleeper=self.sleeper
            )
        result = parse_llm_response(completion.text, request)
        result.diagnostics.update(
            retries=completion.retries,
            exemplar_ids=[rec.paper_id for rec, _ in exemplars],
            prompt_chars=len(payload.system_text) + len(payload.user_text),
        )
        return result


# --------------------------------------------------------------------------
# External HTTP backend


def call_external_backend(
    request: SummaryRequest,
    endpoint: str,
    timeout: float = 30.0,
    retries: int = 1,
    session: requests.Session | None = None,
    sleeper=time.sleep,
) -> SummaryResult:
    """POST {"text", "word_cap"} and read back {"summary"}."""
    own_session = session is None
    sess = session or requests.Session()
    last_error: Exception | None = None
    try:
        for attempt in range(retries + 1):
            if attempt:
                sleeper(0.5 * 2 ** (attempt - 1))
            try:
                resp = sess.post(
                    endpoint,
                    json={"text": request.text, "word_cap": request.word_cap},
                    timeout=timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if resp.status_code >= 500:
                last_error = BackendTransportError(
                    "external", f"HTTP {resp.status_code}"
                )
                continue
            if resp.status_code != 200:
                raise BackendRequestError(
                    "external", f"HTTP {resp.status_code}: {resp.text[:200]}"
                )
            try:
                data = resp.json()
                summary = data["summary"]
            except (ValueError, KeyError, TypeError) as exc:
                raise BackendProtocolError(
                    "external", f"malformed response: {exc}"
                ) from None
            summary = str(summary).strip()
            return SummaryResult(
                summary=summary,
                backend_id="external",
                degenerate=not summary,
                diagnostics={"retries": attempt},
            )
        raise BackendTransportError(
            "external", f"retries exhausted ({retries}): {last_error}"
        )
    finally:
        if own_session:
            sess.close()


@dataclass(frozen=True)
class ExternalConfig:
    endpoint_url: str = "http://localhost:8090/summarize"
    timeout: float = 30.0
    retries: int = 1


class ExternalBackend:
    backend_id = "external"

    def __init__(
        self,
        config: ExternalConfig | None = None,
        session: requests.Session | None = None,
        sleeper=time.sleep,
    ):
        self.config = config or ExternalConfig()
        self.session = session
        self.sleeper = sleeper

    def summarize(self, request: SummaryRequest) -> SummaryResult:
        return call_external_backend(
            request,
            self.config.endpoint_url,
            timeout=self.config.timeout,
            retries=self.config.retries,
            session=self.session,
            sleeper=self.sleeper,
        )
