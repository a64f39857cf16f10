import json

import pytest
from stubserver import ScriptedResponse, StubServer

from litreview import dataset, docextract, rouge
from litreview.app import (
    AppConfig,
    EXIT_ALL_FAILED,
    EXIT_OK,
    EXIT_PARTIAL,
    build_config,
    cmd_generate,
    evaluate_backend,
    main,
    make_backend,
)
from litreview.models import SummaryResult

PAPERS = "tests/fixtures/papers"


def drain(capsys):
    captured = capsys.readouterr()
    return captured.out, captured.err


class TestCmdGenerate:
    def test_two_fixtures_match_golden_review(self, tmp_path, repo_root):
        out = tmp_path / "review.md"
        config = AppConfig(out=str(out))
        code = cmd_generate(
            [
                str(repo_root / PAPERS / "paper_a.txt"),
                str(repo_root / PAPERS / "paper_b.txt"),
            ],
            config,
            log=lambda _: None,
        )
        assert code == EXIT_OK
        golden = (repo_root / "tests/fixtures/golden/review_freq.md").read_text("utf-8")
        assert out.read_text("utf-8") == golden

    def test_partial_failure_exits_2_with_one_entry(self, tmp_path, repo_root):
        empty = tmp_path / "empty.txt"
        empty.write_bytes(b"")
        out = tmp_path / "review.md"
        messages = []
        code = cmd_generate(
            [str(repo_root / PAPERS / "paper_a.txt"), str(empty)],
            AppConfig(out=str(out)),
            log=messages.append,
        )
        assert code == EXIT_PARTIAL
        assert "Ramos" in out.read_text("utf-8")
        assert any("empty.txt" in m for m in messages)

    def test_all_inputs_failing_exits_1(self, tmp_path):
        empty = tmp_path / "e.txt"
        empty.write_bytes(b"")
        code = cmd_generate([str(empty)], AppConfig(), log=lambda _: None)
        assert code == EXIT_ALL_FAILED

    def test_llm_without_key_fails_before_reading_inputs(self, monkeypatch, tmp_path):
        monkeypatch.delenv("LITREVIEW_NO_KEY", raising=False)
        config = AppConfig(backend="llm")
        config.llm = type(config.llm)(api_key_env="LITREVIEW_NO_KEY")
        trap = tmp_path / "never_read.txt"  # intentionally never created
        from litreview.backends import BackendConfigError

        with pytest.raises(BackendConfigError):
            cmd_generate([str(trap)], config, log=lambda _: None)

    def test_manifest_drives_doi_lookup(self, tmp_path, repo_root):
        docextract.clear_doi_cache()
        csl = {
            "title": "Adaptive Caching for Edge Networks",
            "author": [{"family": "Ramos", "given": "Lucia"}],
        }
        with StubServer([ScriptedResponse.json(csl)]) as stub:
            manifest = tmp_path / "manifest.json"
            manifest.write_text(json.dumps({"paper_a.txt": "10.5555/edge-caching"}))
            out = tmp_path / "review.md"
            config = AppConfig(out=str(out), manifest=str(manifest))
            config.doi = docextract.DoiClientConfig(base_url=stub.base_url)
            code = cmd_generate(
                [str(repo_root / PAPERS / "paper_a.txt")], config, log=lambda _: None
            )
            assert code == EXIT_OK
            assert len(stub.requests) == 1
        assert "Ramos" in out.read_text("utf-8")

    def test_unknown_backend_is_config_error(self):
        with pytest.raises(ValueError):
            make_backend(AppConfig(backend="nope"))


class FirstTargetOracle:
    """Cheating test-only backend: answers with the record's first target."""

    backend_id = "oracle"

    def __init__(self, split: dataset.DatasetSplit):
        self._by_text = {
            dataset.aic_source_text(rec): rec.targets[0] for rec in split.records
        }

    def summarize(self, request):
        return SummaryResult(
            summary=self._by_text[request.text], backend_id=self.backend_id
        )


class TestEvaluateBackend:
    @pytest.fixture
    def sample_split(self, repo_root):
        return dataset.load_jsonl_split(
            repo_root / "data/samples/scitldr_sample.jsonl", "sample"
        )

    def test_freq_eval_matches_golden_json(self, sample_split, repo_root):
        config = AppConfig(backend="freq")
        report = evaluate_backend(sample_split, make_backend(config), config)
        golden = (repo_root / "tests/fixtures/golden/sample_eval_freq.json").read_text(
            "utf-8"
        )
        assert report.to_json() + "\n" == golden

    def test_freq_eval_bit_reproducible(self, sample_split):
        config = AppConfig(backend="freq")
        a = evaluate_backend(sample_split, make_backend(config), config)
        b = evaluate_backend(sample_split, make_backend(config), config)
        assert a.to_json() == b.to_json()
        assert a.config_fingerprint == b.config_fingerprint

    def test_cheating_oracle_scores_one(self, sample_split):
        config = AppConfig()
        report = evaluate_backend(sample_split, FirstTargetOracle(sample_split), config)
        for name in rouge.METRICS:
            assert report.report.metric(name).f1 == pytest.approx(1.0)

    def test_first_reference_policy_differs_from_max(self, sample_split):
        config_max = AppConfig(ref_policy="max")
        config_first = AppConfig(ref_policy="first")
        r_max = evaluate_backend(sample_split, make_backend(config_max), config_max)
        r_first = evaluate_backend(
            sample_split, make_backend(config_first), config_first
        )
        assert r_max.report.rouge1.f1 >= r_first.report.rouge1.f1

    def test_schema_error_surfaces_line_numbers(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"source": [], "target": "t"}\n')
        code = main(["eval", "--dataset", str(bad), "--backend", "freq"])
        assert code == EXIT_ALL_FAILED
        assert "line 1" in capsys.readouterr().err


class TestCmdRouge:
    def test_identical_files_score_one(self, tmp_path, capsys):
        f = tmp_path / "same.txt"
        f.write_text("the very same text.")
        assert main(["rouge", str(f), str(f)]) == EXIT_OK
        out = capsys.readouterr().out
        payload = json.loads(out[out.index("{") :])
        assert payload["rouge1"]["f1"] == 1.0
        assert payload["rougeLsum"]["f1"] == 1.0

    def test_cat_sat_hand_values(self, tmp_path, capsys):
        cand = tmp_path / "cand.txt"
        ref = tmp_path / "ref.txt"
        cand.write_text("the cat sat")
        ref.write_text("the cat ran")
        assert main(["rouge", str(cand), str(ref)]) == EXIT_OK
        out = capsys.readouterr().out
        payload = json.loads(out[out.index("{") :])
        assert payload["rouge1"]["f1"] == pytest.approx(2 / 3)
        assert payload["rouge2"]["f1"] == pytest.approx(0.5)

    def test_empty_candidate_scores_zero(self, tmp_path, capsys):
        cand = tmp_path / "cand.txt"
        ref = tmp_path / "ref.txt"
        cand.write_text("")
        ref.write_text("reference words")
        assert main(["rouge", str(cand), str(ref)]) == EXIT_OK
        out = capsys.readouterr().out
        payload = json.loads(out[out.index("{") :])
        assert payload["rouge1"]["f1"] == 0.0


class TestCliWiring:
    def test_generate_through_main(self, tmp_path, repo_root, capsys):
        out = tmp_path / "r.md"
        code = main(
            [
                "generate",
                str(repo_root / PAPERS / "paper_a.txt"),
                str(repo_root / PAPERS / "paper_b.txt"),
                "--backend",
                "freq",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        golden = (repo_root / "tests/fixtures/golden/review_freq.md").read_text("utf-8")
        assert out.read_text("utf-8") == golden

    def test_eval_through_main_prints_table_and_json(self, repo_root, capsys):
        code = main(
            [
                "eval",
                "--dataset",
                str(repo_root / "data/samples/scitldr_sample.jsonl"),
                "--backend",
                "freq",
                "--split",
                "sample",
            ]
        )
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "rouge1" in out and "precision" in out
        payload = json.loads(out[out.index("{") :])
        assert payload["backend_id"] == "freq"
        assert payload["n_examples"] == 3

    def test_config_file_overridden_by_flags(self, tmp_path):
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({"backend": "freq", "word_cap": 40, "ratio": 0.2}))
        import argparse

        ns = argparse.Namespace(
            config=str(cfg),
            backend=None,
            word_cap=60,
            ratio=None,
            split=None,
            source_policy=None,
            ref_policy=None,
            out=None,
            manifest=None,
            port=None,
            persist_dir=None,
            heading=None,
            kb_path=None,
            dataset=None,
            fallback_freq=None,
        )
        config = build_config(ns)
        assert config.word_cap == 60  # flag wins
        assert config.ratio == 0.2  # file value survives
        assert config.backend == "freq"

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({"no_such_key": 1}))
        import argparse

        ns = argparse.Namespace(config=str(cfg))
        with pytest.raises(ValueError, match="no_such_key"):
            build_config(ns)
