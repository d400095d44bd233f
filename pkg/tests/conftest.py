"""Shared fixtures: desk-scale model inputs with full-year degradation."""

from __future__ import annotations

import numpy as np
import pytest

from h2stack import (CapacityFactorSeries, EconomicTerms, ElectrolyzerSpec,
                     GridTerms, ModelInputs, PpaTerms, StorageTerms,
                     constant_demand)


def make_inputs(horizon: int = 24, n_points: int = 3, demand_kg_per_h: float = 10.0,
                factors: np.ndarray | None = None, storage_enabled: bool = False,
                p_nom_kw: float = 1000.0, capex: float = 1252.345,
                price: float = 0.0729, **overrides) -> ModelInputs:
    """One-source constant-availability system, annualized to 8760 h/a."""
    if factors is None:
        factors = np.ones(horizon)
    defaults = dict(
        ppa=(PpaTerms("onshore", price, CapacityFactorSeries("onshore", factors)),),
        storage=StorageTerms(enabled=storage_enabled,
                             capacity_fee_eur_per_kg_a=0.0 if storage_enabled else 12.75,
                             usage_fee_eur_per_kg=0.36),
        grid=GridTerms(),
        demand=constant_demand(demand_kg_per_h, horizon),
        spec=ElectrolyzerSpec(p_nom_kw=p_nom_kw, sec_nominal=52.5,
                              partload_gain=0.01, n_points=n_points),
        economics=EconomicTerms(capex_eur_per_kw=capex),
        horizon=horizon,
    )
    defaults.update(overrides)
    return ModelInputs(**defaults)


@pytest.fixture
def tiny_inputs() -> ModelInputs:
    return make_inputs()
