"""Tests for the experiment runner: configs, reports, exit codes, determinism."""

import json

import pytest

from oscimax.cli import (
    DEFAULTS,
    EXIT_CHECK_FAILURE,
    EXIT_PASS,
    EXIT_USAGE,
    RUNNERS,
    list_experiments,
    main,
)


class TestCatalog:
    def test_contains_all_experiments(self):
        text = list_experiments()
        assert len(RUNNERS) == 8
        for name in RUNNERS:
            assert name in text

    def test_defaults_roundtrip_through_config(self, tmp_path):
        """Every default config serializes to JSON and loads back unchanged."""
        for name, defaults in DEFAULTS.items():
            path = tmp_path / f"{name}.json"
            path.write_text(json.dumps(defaults))
            assert json.loads(path.read_text()) == defaults


class TestExitCodes:
    def test_partition_check_passes(self, tmp_path):
        code = main(
            ["partition-check", "--samples", "200", "--out", str(tmp_path / "o")]
        )
        assert code == EXIT_PASS

    def test_precondition_violation_is_usage_error(self, tmp_path):
        code = main(
            ["rate-combo", "--beta", "0.1", "--out", str(tmp_path / "o")]
        )
        assert code == EXIT_USAGE

    def test_unknown_config_key_is_usage_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"bogus_key": 1}))
        code = main(
            ["rate-riesz", "--config", str(cfg), "--out", str(tmp_path / "o")]
        )
        assert code == EXIT_USAGE

    def test_inapplicable_flag_is_usage_error(self, tmp_path):
        code = main(
            ["partition-check", "--alpha", "0.5", "--out", str(tmp_path / "o")]
        )
        assert code == EXIT_USAGE

    def test_failed_check_returns_one(self, tmp_path):
        # an intentionally impossible ratio bound forces a check failure
        code = main(
            [
                "atom-uniformity",
                "--n-modes",
                "512",
                "--atom-count",
                "6",
                "--max-ratio",
                "0.5",
                "--out",
                str(tmp_path / "o"),
            ]
        )
        assert code == EXIT_CHECK_FAILURE


class TestReports:
    def test_report_files_written(self, tmp_path):
        out = tmp_path / "rpt"
        code = main(["rate-riesz", "--out", str(out)])
        assert code == EXIT_PASS
        assert (out / "rate-riesz.csv").exists()
        assert (out / "summary.json").exists()
        assert (out / "summary.txt").exists()
        body = json.loads((out / "summary.json").read_text())
        assert body["experiment"] == "rate-riesz"
        assert body["pass"] is True
        # full resolved config embedded
        for key in DEFAULTS["rate-riesz"]:
            assert key in body["config"]

    def test_csv_header(self, tmp_path):
        out = tmp_path / "rpt"
        main(["rate-riesz", "--out", str(out)])
        first = (out / "rate-riesz.csv").read_text().splitlines()[0]
        assert first == "t,error"

    def test_flag_overrides_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mode": 5}))
        out = tmp_path / "rpt"
        main(["rate-riesz", "--config", str(cfg), "--mode", "9", "--out", str(out)])
        body = json.loads((out / "summary.json").read_text())
        assert body["config"]["mode"] == 9


class TestDeterminism:
    @pytest.mark.parametrize("experiment", ["partition-check", "rate-combo", "rate-riesz"])
    def test_byte_identical_bodies(self, tmp_path, experiment):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        args = [experiment, "--out"]
        if experiment == "partition-check":
            args = [experiment, "--samples", "300", "--out"]
        assert main(args + [str(out_a)]) == EXIT_PASS
        assert main(args + [str(out_b)]) == EXIT_PASS
        assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()
        csv_name = f"{experiment}.csv"
        assert (out_a / csv_name).read_bytes() == (out_b / csv_name).read_bytes()
        # summary.txt bodies match once the timestamp header line is dropped
        body_a = (out_a / "summary.txt").read_text().splitlines()[1:]
        body_b = (out_b / "summary.txt").read_text().splitlines()[1:]
        assert body_a == body_b
