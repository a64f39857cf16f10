#!/usr/bin/env python3
"""Reproduce the frequency-baseline ROUGE row on the SciTLDR test split.

Runs the freq backend (ratio 0.10, AIC sources, max-reference policy,
80-word cap) over data/scitldr/test-aic.jsonl and prints the corpus scores
next to the published baseline row they are expected to track
(ROUGE-1 0.257, ROUGE-2 0.055, ROUGE-L 0.144, ROUGE-Lsum 0.146).

    python scripts/eval_freq_baseline.py [--dataset PATH]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from litreview import dataset
from litreview.app import AppConfig, evaluate_backend, make_backend

PUBLISHED_BASELINE = {
    "rouge1": 0.257,
    "rouge2": 0.055,
    "rougeL": 0.144,
    "rougeLsum": 0.146,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--dataset",
        default=Path(__file__).resolve().parent.parent
        / "data"
        / "scitldr"
        / "test-aic.jsonl",
    )
    parser.add_argument("--ratio", type=float, default=0.10)
    parser.add_argument("--word-cap", type=int, default=80)
    args = parser.parse_args()

    split = dataset.load_jsonl_split(args.dataset, "test")
    config = AppConfig(
        backend="freq",
        ratio=args.ratio,
        word_cap=args.word_cap,
        source_policy="aic",
        ref_policy="max",
    )
    start = time.monotonic()
    result = evaluate_backend(split, make_backend(config), config)
    elapsed = time.monotonic() - start

    print(f"records: {result.n_examples}  failures: {result.n_failures}  "
          f"time: {elapsed:.1f}s  fingerprint: {result.config_fingerprint}")
    print(f"{'metric':<10} {'F1':>8} {'published':>10} {'delta':>8}")
    for name, published in PUBLISHED_BASELINE.items():
        f1 = result.report.metric(name).f1
        print(f"{name:<10} {f1:>8.4f} {published:>10.3f} {f1 - published:>+8.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
