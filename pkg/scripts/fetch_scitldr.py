#!/usr/bin/env python3
"""Fetch SciTLDR splits into data/scitldr/.

The dataset ships as JSONL files in the allenai/scitldr repository. This
fetches one configuration/split pair and stores it under a stable local
name, e.g.:

    python scripts/fetch_scitldr.py --config AIC --split test

Set SCITLDR_BASE_URL (or pass --base-url) to fetch through a mirror.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import requests

DEFAULT_BASE_URL = (
    "https://raw.githubusercontent.com/allenai/scitldr/master/SciTLDR-Data"
)
CONFIG_DIRS = {"A": "SciTLDR-A", "AIC": "SciTLDR-AIC", "FullText": "SciTLDR-FullText"}
SPLIT_FILES = {"train": "train.jsonl", "validation": "dev.jsonl", "test": "test.jsonl"}


def fetch(config: str, split: str, base_url: str, out_dir: Path) -> Path:
    url = f"{base_url.rstrip('/')}/{CONFIG_DIRS[config]}/{SPLIT_FILES[split]}"
    print(f"fetching {url}")
    resp = requests.get(url, timeout=120)
    resp.raise_for_status()
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{split}-{config.lower()}.jsonl"
    out_path.write_bytes(resp.content)
    print(f"wrote {out_path} ({len(resp.content)} bytes)")
    return out_path


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", choices=sorted(CONFIG_DIRS), default="AIC")
    parser.add_argument("--split", choices=sorted(SPLIT_FILES), default="test")
    parser.add_argument(
        "--base-url", default=os.environ.get("SCITLDR_BASE_URL", DEFAULT_BASE_URL)
    )
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "data" / "scitldr",
    )
    args = parser.parse_args()
    fetch(args.config, args.split, args.base_url, args.out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
