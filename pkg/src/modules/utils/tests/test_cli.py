"""Tests for command-line parsing"""

import pytest

from modules.utils.cli import config_overrides, parse_args


class TestParseArgs:

    def test_slq_flags(self):
        args = parse_args(["slq", "--workers", "8", "--precision", "f32", "--k", "25", "--seed", "1,2",
                           "--out", "runs/a", "--config", "run.conf", "--debug"])
        assert args.command == "slq"
        assert args.workers == 8
        assert args.precision == "f32"
        assert args.k == 25
        assert args.seed == "1,2"
        assert args.out == "runs/a"
        assert args.config == "run.conf"
        assert args.debug

    def test_probe_has_index_not_k(self):
        args = parse_args(["probe", "--index", "3"])
        assert args.index == 3
        assert not hasattr(args, "k")

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            parse_args([])

    def test_precision_choices(self):
        with pytest.raises(SystemExit):
            parse_args(["slq", "--precision", "f16"])

    def test_positive_workers(self):
        with pytest.raises(SystemExit):
            parse_args(["slq", "--workers", "0"])


class TestConfigOverrides:

    def test_slq_mapping(self):
        overrides = config_overrides(parse_args(["slq", "--workers", "4", "--k", "12", "--seed", "5"]))
        assert overrides["runtime.workers"] == 4
        assert overrides["lanczos.k"] == 12
        assert overrides["probe.seeds"] == "5"
        assert overrides["runtime.precision"] is None
        assert overrides["column.index"] is None

    def test_probe_seeds_go_to_column_section(self):
        overrides = config_overrides(parse_args(["probe", "--seed", "0,1", "--index", "2"]))
        assert overrides["column.seeds"] == "0,1"
        assert overrides["column.index"] == 2
        assert "probe.seeds" not in overrides
        assert overrides["lanczos.k"] is None
