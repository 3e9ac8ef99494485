"""Config loader tests: strict schema, aggregated errors, defaults."""
from __future__ import annotations

import json

import pytest

from freshopt import (
    ConfigNotFound,
    ConfigParseError,
    ConfigValidationError,
    Uniform,
    load_config,
    parse_config,
)
from freshopt.cli import default_config_path


def _baseline_raw():
    return json.loads(default_config_path().read_text(encoding="utf-8"))


class TestLoadConfig:
    def test_shipped_scenario(self):
        config = load_config(default_config_path())
        assert config.demand == Uniform(0.0, 100.0)
        assert config.market.p == 50.0
        assert config.market.g == 10.0
        assert config.market.w0 == 25.0
        assert config.market.c == 15.0
        assert config.market.beta == 0.1
        assert config.market.theta == 0.8
        assert config.contract.c0 == 5.0
        assert config.contract.ce == 35.0
        assert config.overconfidence == 1.0
        assert config.oracle.samples == 1_000_000
        assert config.oracle.seed == 42
        assert config.oracle.grid_step == 0.05
        assert config.sweep.mode == "fixed-exercise-price"
        assert config.sweep.ce == 35.0
        assert config.sweep.k_grid[0] == 0.8
        assert config.sweep.k_grid[-1] == 1.5

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigNotFound):
            load_config(tmp_path / "nope.json")

    def test_parse_error_carries_position(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "schema": 1,\n  oops\n}\n', encoding="utf-8")
        with pytest.raises(ConfigParseError) as err:
            load_config(bad)
        assert err.value.line == 3
        assert err.value.column == 3

    def test_round_trip_through_file(self, tmp_path):
        raw = _baseline_raw()
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        assert load_config(path) == load_config(default_config_path())


class TestValidation:
    def test_beta_of_one_rejected(self):
        raw = _baseline_raw()
        raw["market"]["beta"] = 1.0
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("market.beta" in p for p in err.value.problems)

    def test_unknown_key_named(self):
        raw = _baseline_raw()
        raw["contract"]["cee"] = 12.0
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("contract.cee: unknown key" in p for p in err.value.problems)

    def test_unknown_top_level_key(self):
        raw = _baseline_raw()
        raw["markett"] = {}
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any(p.startswith("markett") for p in err.value.problems)

    def test_all_failures_reported_together(self):
        raw = _baseline_raw()
        raw["market"]["beta"] = 2.0
        raw["market"]["theta"] = 0.0
        raw["contract"]["c0"] = -5.0
        raw["demand"]["params"]["hi"] = -1.0
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        joined = "\n".join(err.value.problems)
        assert "market.beta" in joined
        assert "market.theta" in joined
        assert "contract.c0" in joined
        assert "demand" in joined
        assert len(err.value.problems) >= 4

    def test_schema_version_required(self):
        raw = _baseline_raw()
        raw["schema"] = 2
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any(p.startswith("schema") for p in err.value.problems)

    def test_missing_sections(self):
        with pytest.raises(ConfigValidationError) as err:
            parse_config({"schema": 1})
        joined = "\n".join(err.value.problems)
        assert "demand" in joined and "market" in joined

    def test_demand_family_checked(self):
        raw = _baseline_raw()
        raw["demand"] = {"family": "weibull", "params": {"shape": 2.0}}
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("demand.family" in p for p in err.value.problems)

    def test_demand_param_names_checked(self):
        raw = _baseline_raw()
        raw["demand"] = {"family": "exponential", "params": {"lambda": 0.01}}
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        joined = "\n".join(err.value.problems)
        assert "demand.params.lambda: unknown key" in joined
        assert "demand.params.rate: required" in joined

    def test_overconfidence_positive(self):
        raw = _baseline_raw()
        raw["overconfidence"] = -0.5
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("overconfidence" in p for p in err.value.problems)

    def test_numbers_not_strings(self):
        raw = _baseline_raw()
        raw["market"]["p"] = "50"
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("market.p: expected a number" in p for p in err.value.problems)


class TestDefaultsAndOptional:
    def test_minimal_config(self):
        config = parse_config({
            "schema": 1,
            "demand": {"family": "exponential", "params": {"rate": 0.02}},
            "market": {"p": 50.0, "g": 10.0, "w0": 25.0, "c": 15.0,
                       "beta": 0.1, "theta": 0.8},
        })
        assert config.contract is None
        assert config.sweep is None
        assert config.overconfidence == 1.0
        assert config.oracle.samples == 1_000_000

    def test_k_grid_as_list(self):
        raw = _baseline_raw()
        raw["sweep"]["k_grid"] = [0.9, 1.0, 1.25]
        config = parse_config(raw)
        assert config.sweep.k_grid == (0.9, 1.0, 1.25)

    def test_k_grid_list_must_increase(self):
        raw = _baseline_raw()
        raw["sweep"]["k_grid"] = [1.0, 0.9]
        with pytest.raises(ConfigValidationError):
            parse_config(raw)

    def test_sweep_mode_requires_value(self):
        raw = _baseline_raw()
        raw["sweep"] = {"mode": "fixed-premium"}
        with pytest.raises(ConfigValidationError) as err:
            parse_config(raw)
        assert any("sweep.c0" in p for p in err.value.problems)
