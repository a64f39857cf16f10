"""HTTP service backing the upload-and-review UI.

Two endpoints plus a health check: POST /api/reviews accepts a multipart
file set and starts an asynchronous job; GET /api/reviews/{id} returns a
snapshot with per-paper progress and, once done, the rendered review.
Papers within a job run sequentially in upload order; distinct jobs run
concurrently.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, Form, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import assemble, backends, docextract
from .app import AppConfig, BACKEND_SOURCE_POLICY, make_backend, pick_source_text
from .models import SummaryRequest

MAX_UPLOAD_BYTES = 20 * 1024 * 1024

STATE_PENDING = "pending"
STATE_RUNNING = "running"
STATE_DONE = "done"
STATE_FAILED = "failed"


@dataclass
class PaperStatus:
    name: str
    status: str = "pending"  # pending | done | failed
    error: str | None = None


@dataclass
class JobState:
    job_id: str
    total: int
    processed: int = 0
    state: str = STATE_PENDING
    review: str | None = None
    error: str | None = None
    per_paper: list[PaperStatus] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "total": self.total,
            "processed": self.processed,
            "state": self.state,
            "review": self.review,
            "error": self.error,
            "per_paper": [
                {"name": p.name, "status": p.status, "error": p.error}
                for p in self.per_paper
            ],
        }


class JobStore:
    """In-memory job registry with atomic snapshot reads."""

    def __init__(self) -> None:
        self._jobs: dict[str, JobState] = {}
        self._lock = threading.Lock()

    def create(self, names: list[str]) -> JobState:
        job_id = uuid.uuid4().hex[:12]
        job = JobState(
            job_id=job_id,
            total=len(names),
            per_paper=[PaperStatus(name=n) for n in names],
        )
        with self._lock:
            self._jobs[job_id] = job
        return job

    def snapshot(self, job_id: str) -> dict | None:
        with self._lock:
            job = self._jobs.get(job_id)
            return job.as_dict() if job else None

    def mark_running(self, job_id: str) -> None:
        with self._lock:
            self._jobs[job_id].state = STATE_RUNNING

    def paper_finished(self, job_id: str, index: int, error: str | None) -> None:
        with self._lock:
            job = self._jobs[job_id]
            paper = job.per_paper[index]
            paper.status = "failed" if error else "done"
            paper.error = error
            job.processed += 1

    def finish(self, job_id: str, review: str | None, error: str | None) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if error:
                job.state = STATE_FAILED
                job.error = error
            else:
                job.state = STATE_DONE
                job.review = review


def _process_job(
    store: JobStore,
    job_id: str,
    uploads: list[tuple[str, bytes]],
    config: AppConfig,
    persist_dir: str | None,
    prior_context: list[str] | None = None,
) -> None:
    store.mark_running(job_id)
    try:
        backend = make_backend(config)
    except Exception as exc:
        store.finish(job_id, None, f"backend unavailable: {exc}")
        return
    policy = config.source_policy or BACKEND_SOURCE_POLICY[config.backend]

    entries: list[assemble.ReviewEntry] = []
    prior: list[str] = list(prior_context or [])
    for index, (name, data) in enumerate(uploads):
        try:
            kind = "pdf" if data.startswith(b"%PDF") or name.lower().endswith(".pdf") else "text"
            doc = docextract.load_document(data, kind=kind)
            doc = docextract.SourceDocument(origin=name, full_text=doc.full_text)
            sections = docextract.extract_sections(doc)
            metadata = docextract.heuristic_metadata(doc)
            request = SummaryRequest(
                text=pick_source_text(doc, sections, policy),
                metadata=metadata,
                word_cap=config.word_cap,
                prior_entries=tuple(prior),
            )
            result = backend.summarize(request)
            entry = assemble.make_entry(result, metadata, index, config.word_cap)
        except Exception as exc:
            store.paper_finished(job_id, index, str(exc))
            continue
        entries.append(entry)
        prior.append(entry.summary)
        store.paper_finished(job_id, index, None)

    if not entries:
        store.finish(job_id, None, "no paper produced a usable summary")
        return
    review = assemble.merge_review(entries)
    rendered = assemble.render_markdown(review, heading=config.heading)
    if persist_dir:
        try:
            target = Path(persist_dir)
            target.mkdir(parents=True, exist_ok=True)
            (target / f"{job_id}.md").write_text(rendered, encoding="utf-8")
        except OSError:
            pass  # persistence is a convenience, never a failure
    store.finish(job_id, rendered, None)


def create_app(
    config: AppConfig | None = None,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
    static_dir: str | None = None,
) -> FastAPI:
    """Build the FastAPI application around one shared job store."""
    base_config = config or AppConfig()
    app = FastAPI(title="litreview")
    store = JobStore()
    app.state.store = store

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.post("/api/reviews", status_code=202)
    async def create_review(
        files: list[UploadFile] = File(default=[]),
        backend: str = Form(default=None),
        word_cap: int = Form(default=None),
        prior_entries: str = Form(default=""),
    ):
        if not files:
            return JSONResponse({"detail": "no files uploaded"}, status_code=400)
        backend_id = backend or base_config.backend
        if backend_id not in backends.BACKEND_IDS:
            return JSONResponse(
                {"detail": f"unknown backend {backend_id!r}"}, status_code=422
            )
        # Follow-up jobs may carry the previous review's entries so new
        # summaries stay coherent with what was already generated.
        prior_context: list[str] = []
        if prior_entries:
            try:
                parsed = json.loads(prior_entries)
            except ValueError:
                return JSONResponse(
                    {"detail": "prior_entries must be a JSON array of strings"},
                    status_code=422,
                )
            if not isinstance(parsed, list) or not all(
                isinstance(e, str) for e in parsed
            ):
                return JSONResponse(
                    {"detail": "prior_entries must be a JSON array of strings"},
                    status_code=422,
                )
            prior_context = parsed
        uploads: list[tuple[str, bytes]] = []
        total = 0
        for f in files:
            data = await f.read()
            total += len(data)
            if total > max_upload_bytes:
                return JSONResponse(
                    {"detail": "upload exceeds size limit"}, status_code=413
                )
            uploads.append((f.filename or f"file-{len(uploads) + 1}", data))

        job_config = AppConfig(
            backend=backend_id,
            ratio=base_config.ratio,
            source_policy=base_config.source_policy,
            word_cap=word_cap or base_config.word_cap,
            heading=base_config.heading,
            kb_path=base_config.kb_path,
            llm=base_config.llm,
            external=base_config.external,
        )
        job = store.create([name for name, _ in uploads])
        worker = threading.Thread(
            target=_process_job,
            args=(
                store,
                job.job_id,
                uploads,
                job_config,
                base_config.persist_dir,
                prior_context,
            ),
            daemon=True,
        )
        worker.start()
        return {"job_id": job.job_id}

    @app.get("/api/reviews/{job_id}")
    def get_review(job_id: str):
        snapshot = store.snapshot(job_id)
        if snapshot is None:
            return JSONResponse({"detail": "unknown job id"}, status_code=404)
        return snapshot

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
