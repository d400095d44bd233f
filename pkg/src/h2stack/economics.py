"""Annuity-based electrolyzer cost accounting and LCOH aggregation.

Peripherals amortize over their fixed depreciation period; the stack share
amortizes over the realized replacement period, which is what couples the
economics to the degradation threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyLifetime, OutOfRange


@dataclass(frozen=True)
class EconomicTerms:
    """Cost parameters of the electrolyzer system."""

    capex_eur_per_kw: float
    share_peripherals: float = 0.75
    share_stacks: float = 0.25
    opex_fix_eur_per_kw_a: float = 23.45
    depreciation_peripherals_a: int = 20
    interest_rate: float = 0.07
    water_price_eur_per_m3: float = 3.725
    water_kg_per_kg_h2: float = 14.0

    def __post_init__(self):
        if abs(self.share_peripherals + self.share_stacks - 1.0) > 1e-12:
            raise OutOfRange("peripheral and stack cost shares must sum to 1")
        if self.interest_rate <= 0.0:
            raise OutOfRange(f"interest rate must be > 0, got {self.interest_rate}")
        if self.depreciation_peripherals_a < 1:
            raise OutOfRange("peripheral depreciation time must be >= 1 year")
        if self.capex_eur_per_kw < 0.0:
            raise OutOfRange("CAPEX cannot be negative")


def annuity_factor(rate: float, years: float) -> float:
    """Capital-recovery factor r(1+r)^t / ((1+r)^t - 1); 1/t in the r->0 limit."""
    if years < 1:
        raise OutOfRange(f"annuity horizon must be >= 1 year, got {years}")
    if rate < 0.0:
        raise OutOfRange(f"interest rate must be >= 0, got {rate}")
    if rate == 0.0:
        return 1.0 / years
    growth = (1.0 + rate) ** years
    return rate * growth / (growth - 1.0)


def peripheral_cost_year(terms: EconomicTerms, p_nom_kw: float,
                         annual_h2_kg: float) -> float:
    """Yearly peripheral cost in EUR: amortized CAPEX share, fixed OPEX and
    water (density 1000 kg/m3 converts specific water mass to volume)."""
    capex_part = (p_nom_kw * terms.capex_eur_per_kw * terms.share_peripherals
                  * annuity_factor(terms.interest_rate, terms.depreciation_peripherals_a))
    opex_part = p_nom_kw * terms.opex_fix_eur_per_kw_a
    water_part = terms.water_price_eur_per_m3 * (terms.water_kg_per_kg_h2 / 1000.0) \
        * annual_h2_kg
    return capex_part + opex_part + water_part


def stack_cost_year(terms: EconomicTerms, p_nom_kw: float, lifetime_years: int) -> float:
    """Yearly stack cost in EUR: stack CAPEX share amortized over the realized
    replacement period."""
    return (p_nom_kw * terms.capex_eur_per_kw * terms.share_stacks
            * annuity_factor(terms.interest_rate, lifetime_years))


@dataclass(frozen=True)
class YearCosts:
    """One operating year's cost components in EUR (surplus revenue positive)."""

    c_ppa: float
    c_storage: float
    r_surplus: float
    c_peri: float
    c_stacks: float

    @property
    def net_total(self) -> float:
        return self.c_ppa + self.c_storage - self.r_surplus + self.c_peri + self.c_stacks


@dataclass(frozen=True)
class LcohBreakdown:
    """Levelized cost of hydrogen over a stack life, with component shares.

    ``shares`` sum to 1 with the surplus revenue entering negatively.
    """

    lcoh_eur_per_kg: float
    years: tuple[YearCosts, ...] = field(repr=False)
    annual_demand_kg: float = 0.0
    shares: dict = field(default_factory=dict, repr=False)

    @property
    def lifetime_years(self) -> int:
        return len(self.years)


def lcoh(year_costs: list[YearCosts], annual_demand_kg: float,
         eol_years: int, literal_annual_norm: bool = False) -> LcohBreakdown:
    """Average levelized cost over years 1..eol_years in EUR/kg.

    Total lifetime cost over total lifetime hydrogen by default;
    ``literal_annual_norm`` instead normalizes the cost sum by a single
    year's demand (a comparison mode that grows with the lifetime).
    """
    if eol_years < 1 or not year_costs:
        raise EmptyLifetime("LCOH needs at least one operating year")
    if len(year_costs) != eol_years:
        raise OutOfRange(f"expected {eol_years} year records, got {len(year_costs)}")
    if annual_demand_kg <= 0.0:
        raise OutOfRange("annual demand mass must be positive")

    totals = {
        "ppa": sum(y.c_ppa for y in year_costs),
        "storage": sum(y.c_storage for y in year_costs),
        "surplus": -sum(y.r_surplus for y in year_costs),
        "peri": sum(y.c_peri for y in year_costs),
        "stacks": sum(y.c_stacks for y in year_costs),
    }
    total_cost = sum(totals.values())
    divisor = annual_demand_kg if literal_annual_norm else eol_years * annual_demand_kg
    value = total_cost / divisor
    shares = {k: (v / total_cost if total_cost != 0.0 else 0.0)
              for k, v in totals.items()}
    return LcohBreakdown(lcoh_eur_per_kg=value, years=tuple(year_costs),
                         annual_demand_kg=annual_demand_kg, shares=shares)


def lcoh_component_values(breakdown: LcohBreakdown) -> dict:
    """Per-component EUR/kg contributions; they sum to the LCOH exactly."""
    return {k: share * breakdown.lcoh_eur_per_kg
            for k, share in breakdown.shares.items()}


def write_lcoh_csv(breakdown: LcohBreakdown, path) -> None:
    """Year-by-year cost components plus the summary row (EUR, 6 sig digits)."""
    import csv
    from pathlib import Path

    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "c_ppa", "c_storage", "r_surplus", "c_peri", "c_stacks"])
        for k, y in enumerate(breakdown.years, start=1):
            writer.writerow([k] + [f"{v:.6g}" for v in
                                   (y.c_ppa, y.c_storage, y.r_surplus, y.c_peri, y.c_stacks)])
        writer.writerow(["lcoh_av", f"{breakdown.lcoh_eur_per_kg:.6g}", "", "", "", ""])
