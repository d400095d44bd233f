"""Run configuration: JSON schema, domain validation, input assembly.

Every parameter is checked against its documented domain before any
computation starts; violations raise :class:`ConfigError` carrying the
dotted field path. Series paths resolve relative to the config file, so the
shipped default configuration finds its bundled synthetic data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .degradation import SCENARIO_PRESETS, DegradationScenario
from .dispatch import GridTerms, PpaTerms, StorageTerms
from .economics import EconomicTerms
from .electrolyzer import ElectrolyzerSpec
from .errors import ConfigError, H2StackError
from .lifecycle import ModelInputs
from .sweep import SweepConfig
from .timeseries import constant_demand, load_capacity_factors, load_demand_series

_REQUIRED = object()


def _get(mapping: dict, path: str, key: str, kind, default=_REQUIRED):
    field_path = f"{path}.{key}" if path else key
    if key not in mapping:
        if default is _REQUIRED:
            raise ConfigError(field_path, "missing required entry")
        return default
    value = mapping[key]
    if value is None and default is not _REQUIRED:
        return default
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(field_path, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _num(mapping: dict, path: str, key: str, default=_REQUIRED, *,
         lo: float | None = None, hi: float | None = None,
         strict_lo: bool = False) -> float:
    value = _get(mapping, path, key, float, default)
    if value is None:
        return None
    field_path = f"{path}.{key}" if path else key
    if lo is not None and (value <= lo if strict_lo else value < lo):
        op = ">" if strict_lo else ">="
        raise ConfigError(field_path, f"must be {op} {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigError(field_path, f"must be <= {hi}, got {value}")
    return value


@dataclass(frozen=True)
class SourceConfig:
    source_id: str
    price_eur_per_kwh: float
    series_path: Path


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters; ``base_dir`` anchors relative series paths."""

    horizon: int
    dt_hours: float
    hours_per_year: float
    output_dir: Path
    sources: tuple[SourceConfig, ...]
    storage: StorageTerms
    grid: GridTerms
    demand_constant_kg_per_h: float | None
    demand_series_path: Path | None
    spec: ElectrolyzerSpec
    scenario: DegradationScenario
    alpha: float
    threshold_percent: float
    max_years: int
    economics: EconomicTerms
    sweep: SweepConfig
    solver_backend: str
    solver_tol: float
    literal_lower_bound: bool
    literal_lcoh_norm: bool
    operating_hours_only: bool
    allow_surplus_arbitrage: bool
    base_dir: Path = field(default_factory=Path)


def default_config_path() -> Path:
    """Path of the shipped default configuration (synthetic weather year)."""
    return Path(resources.files("h2stack").joinpath("data/default_config.json"))


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return parse_config(data, base_dir=path.parent)


def parse_config(data: dict, base_dir: str | Path = ".") -> RunConfig:
    base_dir = Path(base_dir)
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")

    horizon = _get(data, "", "horizon", int, 8760)
    if horizon < 1:
        raise ConfigError("horizon", f"must be >= 1, got {horizon}")
    dt_hours = _num(data, "", "dt_hours", 1.0, lo=0.0, strict_lo=True)
    hours_per_year = _num(data, "", "hours_per_year", 8760.0, lo=0.0, strict_lo=True)
    output_dir = Path(_get(data, "", "output_dir", str, "out"))

    ppa = _get(data, "", "ppa", dict)
    raw_sources = _get(ppa, "ppa", "sources", list)
    if not raw_sources:
        raise ConfigError("ppa.sources", "at least one source is required")
    sources = []
    seen = set()
    for i, raw in enumerate(raw_sources):
        spath = f"ppa.sources[{i}]"
        if not isinstance(raw, dict):
            raise ConfigError(spath, "expected an object")
        sid = _get(raw, spath, "id", str)
        if sid in seen:
            raise ConfigError(f"{spath}.id", f"duplicate source id {sid!r}")
        seen.add(sid)
        price = _num(raw, spath, "price_eur_per_kwh", lo=0.0)
        series = base_dir / _get(raw, spath, "series", str)
        if not series.exists():
            raise ConfigError(f"{spath}.series", f"file not found: {series}")
        sources.append(SourceConfig(sid, price, series))

    st = _get(data, "", "storage", dict, {})
    storage = StorageTerms(
        capacity_fee_eur_per_kg_a=_num(st, "storage", "capacity_fee_eur_per_kg_a",
                                       12.75, lo=0.0),
        usage_fee_eur_per_kg=_num(st, "storage", "usage_fee_eur_per_kg", 0.36, lo=0.0),
        max_in_kg_per_h=_num(st, "storage", "max_in_kg_per_h", None, lo=0.0),
        max_out_kg_per_h=_num(st, "storage", "max_out_kg_per_h", None, lo=0.0),
        enabled=_get(st, "storage", "enabled", bool, True),
    )

    gr = _get(data, "", "grid", dict, {})
    grid = GridTerms(
        sale_price_eur_per_kwh=_num(gr, "grid", "sale_price_eur_per_kwh", 0.0, lo=0.0),
        purchase_price_eur_per_kwh=_num(gr, "grid", "purchase_price_eur_per_kwh",
                                        0.1976, lo=0.0),
        purchase_enabled=_get(gr, "grid", "purchase_enabled", bool, False),
    )

    dm = _get(data, "", "demand", dict)
    demand_constant = _num(dm, "demand", "constant_kg_per_h", None, lo=0.0)
    demand_series = _get(dm, "demand", "series", str, None)
    if (demand_constant is None) == (demand_series is None):
        raise ConfigError("demand", "exactly one of constant_kg_per_h / series required")
    demand_series_path = None
    if demand_series is not None:
        demand_series_path = base_dir / demand_series
        if not demand_series_path.exists():
            raise ConfigError("demand.series", f"file not found: {demand_series_path}")

    el = _get(data, "", "electrolyzer", dict)
    try:
        spec = ElectrolyzerSpec(
            p_nom_kw=_num(el, "electrolyzer", "p_nom_kw", lo=0.0, strict_lo=True),
            sec_nominal=_num(el, "electrolyzer", "sec_nominal_kwh_per_kg",
                             lo=0.0, strict_lo=True),
            partload_gain=_num(el, "electrolyzer", "partload_gain_per_10pct",
                               0.01, lo=0.0),
            n_points=_get(el, "electrolyzer", "j_points", int, 37),
        )
    except H2StackError as exc:
        raise ConfigError("electrolyzer", str(exc)) from None

    dg = _get(data, "", "degradation", dict, {})
    alpha = _num(dg, "degradation", "alpha", 0.4125, lo=0.0, hi=1.0)
    raw_scenario = dg.get("scenario", "base_const")
    scenario = _parse_scenario(raw_scenario, alpha)
    threshold = _num(dg, "degradation", "threshold_percent", 20.0,
                     lo=0.0, strict_lo=True)
    max_years = _get(dg, "degradation", "max_years", int, 40)
    if max_years < 1:
        raise ConfigError("degradation.max_years", f"must be >= 1, got {max_years}")

    ec = _get(data, "", "economics", dict)
    try:
        economics = EconomicTerms(
            capex_eur_per_kw=_num(ec, "economics", "capex_eur_per_kw", lo=0.0),
            share_peripherals=_num(ec, "economics", "share_peripherals", 0.75,
                                   lo=0.0, hi=1.0),
            share_stacks=_num(ec, "economics", "share_stacks", 0.25, lo=0.0, hi=1.0),
            opex_fix_eur_per_kw_a=_num(ec, "economics", "opex_fix_eur_per_kw_a",
                                       23.45, lo=0.0),
            depreciation_peripherals_a=_get(ec, "economics",
                                            "depreciation_peripherals_a", int, 20),
            interest_rate=_num(ec, "economics", "interest_rate", 0.07,
                               lo=0.0, strict_lo=True),
            water_price_eur_per_m3=_num(ec, "economics", "water_price_eur_per_m3",
                                        3.725, lo=0.0),
            water_kg_per_kg_h2=_num(ec, "economics", "water_kg_per_kg_h2", 14.0, lo=0.0),
        )
    except H2StackError as exc:
        raise ConfigError("economics", str(exc)) from None

    sw = _get(data, "", "sweep", dict, {})
    try:
        sweep_cfg = SweepConfig(
            thresholds_percent=tuple(float(x) for x in _get(
                sw, "sweep", "thresholds_percent", list,
                list(SweepConfig.thresholds_percent))),
            capex_grid=tuple(float(x) for x in _get(
                sw, "sweep", "capex_grid", list, list(SweepConfig.capex_grid))),
            alpha_grid=tuple(float(x) for x in _get(
                sw, "sweep", "alpha_grid", list, list(SweepConfig.alpha_grid))),
            scenarios=tuple(str(x) for x in _get(
                sw, "sweep", "scenarios", list, ["base_const"])),
            parallel=_get(sw, "sweep", "parallel", int, 1),
            max_years=_get(sw, "sweep", "max_years", int, 40),
        )
    except (H2StackError, TypeError, ValueError) as exc:
        raise ConfigError("sweep", str(exc)) from None
    for i, name in enumerate(sweep_cfg.scenarios):
        if name not in SCENARIO_PRESETS:
            raise ConfigError(f"sweep.scenarios[{i}]",
                              f"unknown preset {name!r}; available: "
                              f"{sorted(SCENARIO_PRESETS)}")

    so = _get(data, "", "solver", dict, {})
    backend = _get(so, "solver", "backend", str, "simplex")
    if backend not in ("simplex", "highs"):
        raise ConfigError("solver.backend", f"must be 'simplex' or 'highs', got {backend!r}")
    tol = _num(so, "solver", "tol", 1e-7, lo=0.0, strict_lo=True)

    fl = _get(data, "", "flags", dict, {})
    flags = {
        key: _get(fl, "flags", key, bool, False)
        for key in ("literal_lower_bound", "literal_lcoh_norm",
                    "operating_hours_only_degradation", "allow_surplus_arbitrage")
    }

    return RunConfig(
        horizon=horizon, dt_hours=dt_hours, hours_per_year=hours_per_year,
        output_dir=output_dir, sources=tuple(sources), storage=storage, grid=grid,
        demand_constant_kg_per_h=demand_constant,
        demand_series_path=demand_series_path,
        spec=spec, scenario=scenario, alpha=alpha, threshold_percent=threshold,
        max_years=max_years, economics=economics, sweep=sweep_cfg,
        solver_backend=backend, solver_tol=tol,
        literal_lower_bound=flags["literal_lower_bound"],
        literal_lcoh_norm=flags["literal_lcoh_norm"],
        operating_hours_only=flags["operating_hours_only_degradation"],
        allow_surplus_arbitrage=flags["allow_surplus_arbitrage"],
        base_dir=base_dir,
    )


def _parse_scenario(raw, alpha: float) -> DegradationScenario:
    import dataclasses

    if isinstance(raw, str):
        if raw not in SCENARIO_PRESETS:
            raise ConfigError("degradation.scenario",
                              f"unknown preset {raw!r}; available: "
                              f"{sorted(SCENARIO_PRESETS)}")
        return dataclasses.replace(SCENARIO_PRESETS[raw], shift_fraction=alpha)
    if isinstance(raw, dict):
        path = "degradation.scenario"
        try:
            return DegradationScenario(
                rate_floor_uv_per_h=_num(raw, path, "rate_floor_uv_per_h", lo=0.0),
                rate_nominal_uv_per_h=_num(raw, path, "rate_nominal_uv_per_h", lo=0.0),
                inflection_load=_num(raw, path, "inflection_load", 1.0,
                                     lo=0.0, hi=1.0, strict_lo=True),
                shift_fraction=alpha,
                name=_get(raw, path, "name", str, "custom"),
            )
        except H2StackError as exc:
            raise ConfigError(path, str(exc)) from None
    raise ConfigError("degradation.scenario", "expected a preset name or an object")


def build_model_inputs(config: RunConfig) -> ModelInputs:
    """Load the referenced series and assemble immutable model inputs."""
    ppa = tuple(
        PpaTerms(
            source_id=src.source_id,
            price_eur_per_kwh=src.price_eur_per_kwh,
            capacity_factors=load_capacity_factors(src.series_path, src.source_id,
                                                   config.horizon),
        )
        for src in config.sources
    )
    if config.demand_series_path is not None:
        demand = load_demand_series(config.demand_series_path, config.horizon)
    else:
        demand = constant_demand(config.demand_constant_kg_per_h, config.horizon)
    return ModelInputs(
        ppa=ppa, storage=config.storage, grid=config.grid, demand=demand,
        spec=config.spec, economics=config.economics, horizon=config.horizon,
        dt_hours=config.dt_hours, hours_per_year=config.hours_per_year,
        solver_backend=config.solver_backend, solver_tol=config.solver_tol,
        literal_lower_bound=config.literal_lower_bound,
        literal_lcoh_norm=config.literal_lcoh_norm,
        operating_hours_only=config.operating_hours_only,
        allow_surplus_arbitrage=config.allow_surplus_arbitrage,
    )
