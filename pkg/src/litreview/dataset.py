"""Loader for SciTLDR-style JSONL splits.

Each line is one record with a "source" list of sentences and one or more
"target" reference summaries. Loaded splits are immutable and shareable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


class DatasetSchemaError(ValueError):
    """A record violates the dataset schema; message names the line."""


@dataclass(frozen=True)
class TldrRecord:
    paper_id: str
    source: tuple[str, ...]
    targets: tuple[str, ...]
    extra_fields: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.source:
            raise DatasetSchemaError("source must be non-empty")
        if not self.targets:
            raise DatasetSchemaError("at least one target is required")
        if any(not t for t in self.targets):
            raise DatasetSchemaError("targets must be non-empty strings")


@dataclass(frozen=True)
class DatasetSplit:
    name: str
    records: tuple[TldrRecord, ...]

    def __len__(self) -> int:
        return len(self.records)


def _parse_record(obj: dict[str, Any], line_no: int) -> TldrRecord:
    if "source" not in obj:
        raise DatasetSchemaError(f"line {line_no}: missing required key 'source'")
    if "target" not in obj:
        raise DatasetSchemaError(f"line {line_no}: missing required key 'target'")

    source = obj["source"]
    if not isinstance(source, list) or not all(isinstance(s, str) for s in source):
        raise DatasetSchemaError(f"line {line_no}: 'source' must be a list of strings")

    target = obj["target"]
    if isinstance(target, str):
        targets = [target]
    elif isinstance(target, list) and all(isinstance(t, str) for t in target):
        targets = target
    else:
        raise DatasetSchemaError(
            f"line {line_no}: 'target' must be a string or list of strings"
        )

    paper_id = obj.get("paper_id") or f"line-{line_no}"
    extra = {k: v for k, v in obj.items() if k not in ("source", "target", "paper_id")}
    try:
        return TldrRecord(
            paper_id=str(paper_id),
            source=tuple(source),
            targets=tuple(targets),
            extra_fields=extra,
        )
    except DatasetSchemaError as exc:
        raise DatasetSchemaError(f"line {line_no}: {exc}") from None


def load_jsonl_split(path: str | Path, split_name: str) -> DatasetSplit:
    """Load one JSONL split, one TldrRecord per line, order-preserving.

    Raises OSError for a missing file and DatasetSchemaError (with the line
    number) for malformed lines, duplicate ids, or an empty file.
    """
    path = Path(path)
    records: list[TldrRecord] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetSchemaError(f"line {line_no}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise DatasetSchemaError(f"line {line_no}: record must be a JSON object")
            record = _parse_record(obj, line_no)
            if record.paper_id in seen_ids:
                raise DatasetSchemaError(
                    f"line {line_no}: duplicate paper_id {record.paper_id!r}"
                )
            seen_ids.add(record.paper_id)
            records.append(record)
    if not records:
        raise DatasetSchemaError(f"{path}: empty dataset file")
    return DatasetSplit(name=split_name, records=tuple(records))


def aic_source_text(record: TldrRecord) -> str:
    """The text a backend summarizes: source sentences joined by spaces."""
    return " ".join(record.source)


def dump_jsonl_split(split: DatasetSplit, path: str | Path) -> None:
    """Serialize a split back to JSONL (round-trips with load_jsonl_split)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in split.records:
            obj: dict[str, Any] = {
                "paper_id": rec.paper_id,
                "source": list(rec.source),
                "target": list(rec.targets),
            }
            obj.update(rec.extra_fields)
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
