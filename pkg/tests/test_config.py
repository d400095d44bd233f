"""Configuration parsing, domain validation and input assembly."""

import json

import pytest

from h2stack.config import (build_model_inputs, default_config_path, load_config,
                            parse_config)
from h2stack.errors import ConfigError


def minimal_config(tmp_path, horizon=4, **overrides):
    series = tmp_path / "cf.csv"
    series.write_text("hour,value\n" + "\n".join(f"{t},1.0" for t in range(horizon)) + "\n")
    data = {
        "horizon": horizon,
        "ppa": {"sources": [
            {"id": "onshore", "price_eur_per_kwh": 0.0729, "series": "cf.csv"}]},
        "demand": {"constant_kg_per_h": 5.0},
        "electrolyzer": {"p_nom_kw": 1000.0, "sec_nominal_kwh_per_kg": 52.5,
                         "partload_gain_per_10pct": 0.01, "j_points": 3},
        "economics": {"capex_eur_per_kw": 1252.345},
    }
    data.update(overrides)
    return data


class TestParseConfig:
    def test_minimal_config_fills_defaults(self, tmp_path):
        config = parse_config(minimal_config(tmp_path), base_dir=tmp_path)
        assert config.threshold_percent == 20.0
        assert config.scenario.rate_floor_uv_per_h == 7.5
        assert config.scenario.shift_fraction == 0.4125
        assert config.storage.enabled is True
        assert config.grid.sale_price_eur_per_kwh == 0.0
        assert config.solver_backend == "simplex"
        assert config.sweep.thresholds_percent == tuple(range(5, 60, 5))

    def test_inline_scenario_object(self, tmp_path):
        data = minimal_config(tmp_path)
        data["degradation"] = {
            "scenario": {"rate_floor_uv_per_h": 4.0, "rate_nominal_uv_per_h": 9.0,
                         "inflection_load": 0.6},
            "alpha": 0.25,
        }
        config = parse_config(data, base_dir=tmp_path)
        assert config.scenario.rate_nominal_uv_per_h == 9.0
        assert config.scenario.inflection_load == 0.6
        assert config.scenario.shift_fraction == 0.25

    def test_build_model_inputs(self, tmp_path):
        config = parse_config(minimal_config(tmp_path), base_dir=tmp_path)
        inputs = build_model_inputs(config)
        assert inputs.horizon == 4
        assert inputs.ppa[0].capacity_factors.values.tolist() == [1.0] * 4
        assert inputs.demand.values.tolist() == [5.0] * 4

    def test_demand_series_file(self, tmp_path):
        demand_csv = tmp_path / "demand.csv"
        demand_csv.write_text("hour,kg_per_h\n0,4.0\n1,6.0\n2,5.0\n3,7.0\n")
        data = minimal_config(tmp_path)
        data["demand"] = {"series": "demand.csv"}
        config = parse_config(data, base_dir=tmp_path)
        inputs = build_model_inputs(config)
        assert inputs.demand.values.tolist() == [4.0, 6.0, 5.0, 7.0]


class TestFieldPathDiagnostics:
    def check(self, tmp_path, mutate, expected_path):
        data = minimal_config(tmp_path)
        mutate(data)
        with pytest.raises(ConfigError) as err:
            parse_config(data, base_dir=tmp_path)
        assert err.value.field == expected_path

    def test_missing_sources(self, tmp_path):
        self.check(tmp_path, lambda d: d["ppa"].pop("sources"), "ppa.sources")

    def test_negative_price(self, tmp_path):
        def mutate(d):
            d["ppa"]["sources"][0]["price_eur_per_kwh"] = -0.1
        self.check(tmp_path, mutate, "ppa.sources[0].price_eur_per_kwh")

    def test_missing_series_file(self, tmp_path):
        def mutate(d):
            d["ppa"]["sources"][0]["series"] = "nope.csv"
        self.check(tmp_path, mutate, "ppa.sources[0].series")

    def test_duplicate_source_id(self, tmp_path):
        def mutate(d):
            d["ppa"]["sources"].append(dict(d["ppa"]["sources"][0]))
        self.check(tmp_path, mutate, "ppa.sources[1].id")

    def test_bad_alpha_domain(self, tmp_path):
        def mutate(d):
            d["degradation"] = {"alpha": 1.5}
        self.check(tmp_path, mutate, "degradation.alpha")

    def test_unknown_preset(self, tmp_path):
        def mutate(d):
            d["degradation"] = {"scenario": "warp_speed"}
        self.check(tmp_path, mutate, "degradation.scenario")

    def test_demand_needs_exactly_one_form(self, tmp_path):
        def mutate(d):
            d["demand"] = {}
        self.check(tmp_path, mutate, "demand")

    def test_wrong_type(self, tmp_path):
        def mutate(d):
            d["horizon"] = "yearly"
        self.check(tmp_path, mutate, "horizon")

    def test_unknown_backend(self, tmp_path):
        def mutate(d):
            d["solver"] = {"backend": "cvxpy"}
        self.check(tmp_path, mutate, "solver.backend")

    def test_bad_sweep_scenario(self, tmp_path):
        def mutate(d):
            d["sweep"] = {"scenarios": ["base_const", "mystery"]}
        self.check(tmp_path, mutate, "sweep.scenarios[1]")


class TestLoadConfig:
    def test_file_round_trip(self, tmp_path):
        data = minimal_config(tmp_path)
        path = tmp_path / "run.json"
        path.write_text(json.dumps(data))
        config = load_config(path)
        assert config.horizon == 4
        assert config.base_dir == tmp_path

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)


class TestShippedDefault:
    def test_default_config_parses_and_loads(self):
        config = load_config(default_config_path())
        assert config.horizon == 8760
        assert config.economics.capex_eur_per_kw == 1252.345
        assert [s.source_id for s in config.sources] == ["onshore", "offshore", "solar"]
        inputs = build_model_inputs(config)
        assert inputs.annual_demand_kg() == pytest.approx(28_032_000.0)
        assert inputs.annualization == 1.0
