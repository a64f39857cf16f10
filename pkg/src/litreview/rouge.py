"""From-scratch ROUGE-N, ROUGE-L and ROUGE-Lsum with multi-reference support.

Scores are precision/recall/F1 triples over lowercased word tokens with
punctuation dropped (no stemming). ROUGE-N uses clipped n-gram counts;
ROUGE-L uses whole-text LCS; ROUGE-Lsum uses the summary-level union-LCS:
per reference sentence, the union of LCS matches against all candidate
sentences, with token budgets on both sides consumed at most once.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from collections import Counter

from . import textcore

METRICS = ("rouge1", "rouge2", "rougeL", "rougeLsum")


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_counts(overlap: float, candidate_total: int, reference_total: int) -> "RougeScore":
        p = overlap / candidate_total if candidate_total > 0 else 0.0
        r = overlap / reference_total if reference_total > 0 else 0.0
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return RougeScore(precision=p, recall=r, f1=f)

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


ZERO_SCORE = RougeScore(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RougeReport:
    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore
    rougeLsum: RougeScore

    def metric(self, name: str) -> RougeScore:
        if name not in METRICS:
            raise ValueError(f"unknown metric {name!r}")
        return getattr(self, name)

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {name: self.metric(name).as_dict() for name in METRICS}


def _words(text: str) -> list[str]:
    toks = textcore.tokenize(textcore.normalize_text(text))
    return [t.text for t in toks if not t.is_punct]


def _ngram_counts(words: list[str], n: int) -> Counter:
    return Counter(tuple(words[i : i + n]) for i in range(len(words) - n + 1))


def _clipped_overlap(candidate: Counter, reference: Counter) -> int:
    return sum(min(count, reference[gram]) for gram, count in candidate.items())


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """N-gram overlap with clipped counts."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand_grams = _ngram_counts(_words(candidate), n)
    ref_grams = _ngram_counts(_words(reference), n)
    overlap = _clipped_overlap(cand_grams, ref_grams)
    return RougeScore.from_counts(
        overlap, sum(cand_grams.values()), sum(ref_grams.values())
    )


def lcs_length(a: list[str], b: list[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """Whole-text LCS: precision over candidate tokens, recall over reference."""
    cand = _words(candidate)
    ref = _words(reference)
    return RougeScore.from_counts(lcs_length(cand, ref), len(cand), len(ref))


def _sentence_tokens(text: str) -> list[list[str]]:
    """Sentence-split a text for Lsum; newlines always act as boundaries."""
    text = textcore.normalize_text(text)
    out: list[list[str]] = []
    for chunk in text.split("\n"):
        for sent in textcore.split_sentences(chunk):
            words = [t.text for t in sent.tokens if not t.is_punct]
            if words:
                out.append(words)
    return out


def _lcs_hit_positions(ref: list[str], cand: list[str]) -> set[int]:
    """Reference-token positions on one LCS backtrace of ref vs cand."""
    m, n = len(ref), len(cand)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if ref[i - 1] == cand[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    hits: set[int] = set()
    i, j = m, n
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1] and table[i][j] == table[i - 1][j - 1] + 1:
            hits.add(i - 1)
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return hits


def rouge_lsum(candidate: str, reference: str) -> RougeScore:
    """Summary-level LCS over sentence pairs with once-consumable tokens.

    Reference sentences are processed in order; each one takes the union of
    its LCS matches against every candidate sentence, and matched tokens
    draw down shared unigram budgets so no token position is counted twice.
    """
    cand_sents = _sentence_tokens(candidate)
    ref_sents = _sentence_tokens(reference)
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if cand_total == 0 or ref_total == 0:
        return ZERO_SCORE

    cand_budget = Counter(w for s in cand_sents for w in s)
    ref_budget = Counter(w for s in ref_sents for w in s)
    hits = 0
    for ref_sent in ref_sents:
        union: set[int] = set()
        for cand_sent in cand_sents:
            union |= _lcs_hit_positions(ref_sent, cand_sent)
        for pos in sorted(union):
            word = ref_sent[pos]
            if cand_budget[word] > 0 and ref_budget[word] > 0:
                hits += 1
                cand_budget[word] -= 1
                ref_budget[word] -= 1
    return RougeScore.from_counts(hits, cand_total, ref_total)


def score_report(candidate: str, reference: str) -> RougeReport:
    """All four metrics for one candidate/reference pair."""
    return RougeReport(
        rouge1=rouge_n(candidate, reference, 1),
        rouge2=rouge_n(candidate, reference, 2),
        rougeL=rouge_l(candidate, reference),
        rougeLsum=rouge_lsum(candidate, reference),
    )


def best_against_references(candidate: str, references: list[str]) -> RougeReport:
    """Per metric, the triple from the reference maximizing F1.

    Different metrics may pick different references. Ties keep the earliest
    reference, so the result is deterministic.
    """
    if not references:
        raise ValueError("references must be non-empty")
    reports = [score_report(candidate, ref) for ref in references]
    best: dict[str, RougeScore] = {}
    for name in METRICS:
        best[name] = max((r.metric(name) for r in reports), key=lambda s: s.f1)
    return RougeReport(**best)


def first_reference(candidate: str, references: list[str]) -> RougeReport:
    """Score against the first reference only (the 'first' multi-ref policy)."""
    if not references:
        raise ValueError("references must be non-empty")
    return score_report(candidate, references[0])


def aggregate_corpus(reports: list[RougeReport]) -> RougeReport:
    """Arithmetic mean of every score component across reports."""
    if not reports:
        raise ValueError("reports must be non-empty")
    means: dict[str, RougeScore] = {}
    for name in METRICS:
        means[name] = RougeScore(
            precision=statistics.fmean(r.metric(name).precision for r in reports),
            recall=statistics.fmean(r.metric(name).recall for r in reports),
            f1=statistics.fmean(r.metric(name).f1 for r in reports),
        )
    return RougeReport(**means)
