"""Command-line interface and evaluation harness.

Subcommands:

* ``generate`` — papers in, one attributed literature-review segment out;
* ``eval``     — score a backend against a SciTLDR-style split;
* ``rouge``    — score one candidate file against reference files;
* ``serve``    — run the HTTP service for the web UI.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import assemble, backends, dataset, docextract, rouge
from .freqsum import FreqConfig
from .models import DEFAULT_WORD_CAP, PaperMetadata, SummaryRequest

EXIT_OK = 0
EXIT_ALL_FAILED = 1
EXIT_PARTIAL = 2

SOURCE_POLICIES = ("conclusion", "aic", "full")
REF_POLICIES = ("max", "first")

# Default text fed to each backend when no explicit --source-policy is given:
# the freq arm reads conclusions, the external (seq2seq) arm reads AIC, and
# the LLM arm reads the whole text (truncated to its budget at prompt time).
BACKEND_SOURCE_POLICY = {"freq": "conclusion", "llm": "full", "external": "aic"}


@dataclass
class AppConfig:
    backend: str = "freq"
    ratio: float = 0.10
    dataset_path: str | None = None
    split: str = "test"
    source_policy: str | None = None
    ref_policy: str = "max"
    word_cap: int = DEFAULT_WORD_CAP
    out: str | None = None
    manifest: str | None = None
    port: int = 8000
    persist_dir: str | None = None
    heading: bool = False
    fallback_to_freq: bool = False
    kb_path: str | None = None
    llm: backends.LlmConfig = field(default_factory=backends.LlmConfig)
    external: backends.ExternalConfig = field(default_factory=backends.ExternalConfig)
    doi: docextract.DoiClientConfig = field(default_factory=docextract.DoiClientConfig)

    def freq_config(self) -> FreqConfig:
        return FreqConfig(ratio=self.ratio)

    def fingerprint(self) -> str:
        """Hash of every setting that can change a score."""
        basis = {
            "backend": self.backend,
            "ratio": self.ratio,
            "source_policy": self.source_policy,
            "ref_policy": self.ref_policy,
            "word_cap": self.word_cap,
            "tokenizer": "stopwords_en/default-pattern/v1",
        }
        digest = hashlib.sha256(
            json.dumps(basis, sort_keys=True).encode("utf-8")
        ).hexdigest()
        return digest[:16]


@dataclass(frozen=True)
class EvalReport:
    backend_id: str
    split: str
    n_examples: int
    n_failures: int
    report: rouge.RougeReport
    config_fingerprint: str

    def as_dict(self) -> dict:
        return {
            "backend_id": self.backend_id,
            "split": self.split,
            "n_examples": self.n_examples,
            "n_failures": self.n_failures,
            "config_fingerprint": self.config_fingerprint,
            "scores": self.report.as_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def make_backend(config: AppConfig) -> backends.SummarizerBackend:
    """Instantiate the selected backend, failing fast on bad configuration."""
    if config.backend == "freq":
        return backends.FrequencyBackend(config.freq_config())
    if config.backend == "llm":
        import os

        if config.llm.api_key_env and not os.environ.get(config.llm.api_key_env):
            raise backends.BackendConfigError(
                "llm",
                f"environment variable {config.llm.api_key_env} is not set",
            )
        kb = None
        if config.kb_path:
            split = dataset.load_jsonl_split(config.kb_path, "kb")
            kb = backends.KnowledgeBase.build(split)
        return backends.LlmBackend(config.llm, knowledge_base=kb)
    if config.backend == "external":
        return backends.ExternalBackend(config.external)
    raise ValueError(f"unknown backend {config.backend!r}")


def _document_kind(path: Path) -> str:
    if path.suffix.lower() == ".pdf":
        return "pdf"
    try:
        with path.open("rb") as fh:
            if fh.read(5) == b"%PDF-":
                return "pdf"
    except OSError:
        pass
    return "text"


def pick_source_text(
    doc: docextract.SourceDocument, sections: docextract.PaperSections, policy: str
) -> str:
    """Per-policy text selection with graceful degradation.

    conclusion -> aic -> full: a missing conclusion falls back to AIC, and a
    headingless document always degrades to its full text.
    """
    if policy == "conclusion" and sections.conclusion:
        return sections.conclusion
    if policy in ("conclusion", "aic"):
        return docextract.extract_aic(doc)
    return doc.full_text


def _load_manifest(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise ValueError(f"{path}: manifest must map filename to DOI")
    return data


def _resolve_metadata(
    doc: docextract.SourceDocument,
    path: Path,
    manifest: dict[str, str],
    config: AppConfig,
    log,
) -> PaperMetadata:
    doi = manifest.get(path.name) or manifest.get(str(path))
    if doi:
        try:
            meta = docextract.fetch_doi_metadata(doi, config.doi)
            return meta
        except docextract.DoiError as exc:
            log(f"note: DOI lookup failed for {path.name}: {exc}; using heuristic")
            doc = docextract.SourceDocument(doc.origin, doc.full_text, doi)
    return docextract.heuristic_metadata(doc)


def cmd_generate(
    inputs: list[str], config: AppConfig, log=lambda msg: print(msg, file=sys.stderr)
) -> int:
    """Generate a review from paper files; returns the process exit code."""
    if not inputs:
        log("error: at least one input file is required")
        return EXIT_ALL_FAILED
    backend = make_backend(config)
    manifest = _load_manifest(config.manifest)
    policy = config.source_policy or BACKEND_SOURCE_POLICY[config.backend]

    entries: list[assemble.ReviewEntry] = []
    prior: list[str] = []
    skipped: list[str] = []
    for order, raw_path in enumerate(inputs):
        path = Path(raw_path)
        try:
            doc = docextract.load_document(path, kind=_document_kind(path))
            sections = docextract.extract_sections(doc)
            metadata = _resolve_metadata(doc, path, manifest, config, log)
            text = pick_source_text(doc, sections, policy)
            request = SummaryRequest(
                text=text,
                metadata=metadata,
                word_cap=config.word_cap,
                prior_entries=tuple(prior),
            )
            try:
                result = backend.summarize(request)
            except backends.BackendError:
                if not config.fallback_to_freq or config.backend == "freq":
                    raise
                log(f"note: {config.backend} backend failed for {path.name}; "
                    "falling back to freq")
                result = backends.FrequencyBackend(config.freq_config()).summarize(
                    request
                )
            entry = assemble.make_entry(result, metadata, order, config.word_cap)
        except (
            docextract.DocumentLoadError,
            backends.BackendError,
            assemble.EntrySkippedError,
            ValueError,
        ) as exc:
            skipped.append(path.name)
            log(f"skipped {path.name}: {exc}")
            continue
        entries.append(entry)
        prior.append(entry.summary)

    if not entries:
        log("error: no paper produced a usable summary")
        return EXIT_ALL_FAILED
    review = assemble.merge_review(entries)
    rendered = assemble.render_markdown(review, heading=config.heading)
    if config.out:
        Path(config.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    if skipped:
        log(f"{len(skipped)} of {len(inputs)} papers skipped: {', '.join(skipped)}")
        return EXIT_PARTIAL
    return EXIT_OK


def evaluate_backend(
    split: dataset.DatasetSplit,
    backend: backends.SummarizerBackend,
    config: AppConfig,
) -> EvalReport:
    """Score a backend over a split.

    Candidates are scored as the system would emit them: summaries pass
    through the word cap before ROUGE. Per-record backend failures are
    counted and excluded from the aggregate.
    """
    reports: list[rouge.RougeReport] = []
    failures = 0
    placeholder = PaperMetadata(title="eval", first_author="eval")
    for record in split.records:
        text = dataset.aic_source_text(record)
        try:
            request = SummaryRequest(
                text=text, metadata=placeholder, word_cap=config.word_cap
            )
            result = backend.summarize(request)
            if result.degenerate:
                raise ValueError("degenerate summary")
            candidate = assemble.enforce_word_cap(result.summary, config.word_cap)
        except (backends.BackendError, ValueError):
            failures += 1
            continue
        refs = list(record.targets)
        if config.ref_policy == "first":
            reports.append(rouge.first_reference(candidate, refs))
        else:
            reports.append(rouge.best_against_references(candidate, refs))
    if not reports:
        raise ValueError("no record was successfully scored")
    return EvalReport(
        backend_id=backend.backend_id,
        split=split.name,
        n_examples=len(reports),
        n_failures=failures,
        report=rouge.aggregate_corpus(reports),
        config_fingerprint=config.fingerprint(),
    )


def _print_score_table(report: rouge.RougeReport, out=sys.stdout) -> None:
    header = f"{'metric':<12} {'precision':>10} {'recall':>10} {'f1':>10}"
    print(header, file=out)
    print("-" * len(header), file=out)
    for name in rouge.METRICS:
        score = report.metric(name)
        print(
            f"{name:<12} {score.precision:>10.4f} {score.recall:>10.4f} "
            f"{score.f1:>10.4f}",
            file=out,
        )


def cmd_eval(config: AppConfig, log=lambda msg: print(msg, file=sys.stderr)) -> int:
    if not config.dataset_path:
        log("error: --dataset is required for eval")
        return EXIT_ALL_FAILED
    try:
        split = dataset.load_jsonl_split(config.dataset_path, config.split)
    except dataset.DatasetSchemaError as exc:
        log(f"error: {exc}")
        return EXIT_ALL_FAILED
    backend = make_backend(config)
    report = evaluate_backend(split, backend, config)
    _print_score_table(report.report)
    if report.n_failures:
        log(
            f"{report.n_failures} of {report.n_failures + report.n_examples} "
            "records failed and were excluded"
        )
    print(report.to_json())
    return EXIT_OK


def cmd_rouge(candidate_file: str, reference_files: list[str]) -> int:
    if not reference_files:
        raise ValueError("at least one reference file is required")
    candidate = Path(candidate_file).read_text(encoding="utf-8")
    references = [Path(p).read_text(encoding="utf-8") for p in reference_files]
    report = rouge.best_against_references(candidate, references)
    _print_score_table(report)
    print(json.dumps(report.as_dict(), sort_keys=True, indent=2))
    return EXIT_OK


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config file must hold a JSON object")
    return data


def build_config(args: argparse.Namespace) -> AppConfig:
    """Config file first, then flags override."""
    config = AppConfig()
    file_values = _load_config_file(getattr(args, "config", None))
    llm_values = file_values.pop("llm", {})
    external_values = file_values.pop("external", {})
    known = {f for f in AppConfig.__dataclass_fields__}
    unknown = set(file_values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    config = replace(config, **file_values)
    if llm_values:
        config = replace(config, llm=backends.LlmConfig(**llm_values))
    if external_values:
        config = replace(config, external=backends.ExternalConfig(**external_values))

    overrides = {}
    for key in (
        "backend",
        "ratio",
        "split",
        "source_policy",
        "ref_policy",
        "word_cap",
        "out",
        "manifest",
        "port",
        "persist_dir",
        "heading",
        "kb_path",
    ):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "dataset", None) is not None:
        overrides["dataset_path"] = args.dataset
    if getattr(args, "fallback_freq", None):
        overrides["fallback_to_freq"] = True
    return replace(config, **overrides)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file (flags override it)")
    parser.add_argument(
        "--backend", choices=backends.BACKEND_IDS, help="summarization backend"
    )
    parser.add_argument("--word-cap", dest="word_cap", type=int)
    parser.add_argument("--ratio", type=float, help="freq backend selection ratio")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="litreview",
        description="Generate and evaluate literature-review segments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a review from paper files")
    p_gen.add_argument("inputs", nargs="+", help="paper files (.pdf or text)")
    p_gen.add_argument("--manifest", help="JSON file mapping filename to DOI")
    p_gen.add_argument("--out", help="output path (default: stdout)")
    p_gen.add_argument(
        "--source-policy", dest="source_policy", choices=SOURCE_POLICIES
    )
    p_gen.add_argument("--heading", action="store_true", default=None)
    p_gen.add_argument(
        "--fallback-freq",
        dest="fallback_freq",
        action="store_true",
        default=None,
        help="fall back to the freq backend when the selected backend fails",
    )
    p_gen.add_argument("--kb-path", dest="kb_path", help="knowledge base JSONL (llm)")
    _add_common_flags(p_gen)

    p_eval = sub.add_parser("eval", help="evaluate a backend on a dataset split")
    p_eval.add_argument("--dataset", required=False, help="JSONL split path")
    p_eval.add_argument("--split", help="split name for the report")
    p_eval.add_argument(
        "--source-policy", dest="source_policy", choices=SOURCE_POLICIES
    )
    p_eval.add_argument("--ref-policy", dest="ref_policy", choices=REF_POLICIES)
    p_eval.add_argument("--kb-path", dest="kb_path", help="knowledge base JSONL (llm)")
    _add_common_flags(p_eval)

    p_rouge = sub.add_parser("rouge", help="score a candidate file against references")
    p_rouge.add_argument("candidate", help="candidate text file")
    p_rouge.add_argument("references", nargs="+", help="reference text files")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--persist-dir", dest="persist_dir")
    p_serve.add_argument(
        "--static-dir",
        dest="static_dir",
        help="directory of built web-UI assets to serve at /",
    )
    _add_common_flags(p_serve)

    args = parser.parse_args(argv)

    if args.command == "rouge":
        return cmd_rouge(args.candidate, args.references)

    try:
        config = build_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALL_FAILED

    if args.command == "generate":
        try:
            return cmd_generate(args.inputs, config)
        except backends.BackendConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ALL_FAILED
    if args.command == "eval":
        try:
            return cmd_eval(config)
        except (backends.BackendError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ALL_FAILED
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(
            create_app(config, static_dir=getattr(args, "static_dir", None)),
            host="127.0.0.1",
            port=config.port,
        )
        return EXIT_OK
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
