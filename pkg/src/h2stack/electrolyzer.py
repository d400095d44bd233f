"""Beginning-of-life efficiency curve and its piecewise-linear relaxation.

The specific energy consumption (SEC, kWh per kg H2) falls affinely toward
partial load; hydrogen output over power is therefore concave and can be
enclosed from above by the chords between grid points, which is what the
dispatch LP consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonConcave, OutOfRange

_SLOPE_TIE_REL = 1e-12


@dataclass(frozen=True)
class ElectrolyzerSpec:
    """Nameplate data of the single-stack electrolyzer.

    ``partload_gain`` is the fractional SEC decrease per 10% load reduction
    (e.g. 0.01 for 1%/10%); ``n_points`` is the linearization grid size.
    """

    p_nom_kw: float
    sec_nominal: float          # kWh/kg at full load
    partload_gain: float = 0.01
    n_points: int = 37

    def __post_init__(self):
        if self.p_nom_kw <= 0:
            raise OutOfRange(f"p_nom_kw must be > 0, got {self.p_nom_kw}")
        if self.sec_nominal <= 0:
            raise OutOfRange(f"sec_nominal must be > 0, got {self.sec_nominal}")
        if not 0.0 <= self.partload_gain < 0.1:
            raise OutOfRange(f"partload_gain must lie in [0, 0.1), got {self.partload_gain}")
        if self.n_points < 2:
            raise OutOfRange(f"n_points must be >= 2, got {self.n_points}")

    @property
    def load_points(self) -> np.ndarray:
        """Grid fractions j/(J-1) including 0 and 1."""
        return np.linspace(0.0, 1.0, self.n_points)


def bol_energy_demand(spec: ElectrolyzerSpec, load: float) -> float:
    """SEC in kWh/kg at load fraction ``load``, beginning of life.

    Affine rule: full-load SEC reduced by ``partload_gain`` per 10% of load
    reduction; well-defined down to load 0 (which only shapes the first
    chord, since output there is zero anyway).
    """
    if not 0.0 <= load <= 1.0:
        raise OutOfRange(f"load fraction must lie in [0, 1], got {load}")
    return spec.sec_nominal * (1.0 - spec.partload_gain * 10.0 * (1.0 - load))


def bol_sec_curve(spec: ElectrolyzerSpec) -> np.ndarray:
    """SEC at every grid point of the spec's linearization grid."""
    return np.array([bol_energy_demand(spec, pi) for pi in spec.load_points])


@dataclass(frozen=True)
class PiecewiseEnvelope:
    """Concave upper envelope of hydrogen output over electrolyzer power.

    ``slopes``/``intercepts`` describe segments m_dot <= a*P + b (kg/kWh and
    kg/h); duplicate chords from flat SEC stretches are merged, so the stored
    slopes are strictly decreasing. ``sec_points`` keeps the generating SEC
    values on ``load_points``.
    """

    p_nom_kw: float
    slopes: np.ndarray = field(repr=False)
    intercepts: np.ndarray = field(repr=False)
    sec_points: np.ndarray = field(repr=False)
    load_points: np.ndarray = field(repr=False)

    @property
    def sec_at_nominal(self) -> float:
        """SEC at full load (kWh/kg); feeds the dispatch search-space cut."""
        return float(self.sec_points[-1])

    def mass_flow_at(self, power_kw: float) -> float:
        """Envelope value min_j(a_j * P + b_j) in kg/h."""
        return float(np.min(self.slopes * power_kw + self.intercepts))


def build_envelope(spec: ElectrolyzerSpec, sec_points: np.ndarray) -> PiecewiseEnvelope:
    """Chord the output curve m_dot_j = pi_j * P_nom / sec_j over the grid.

    Raises NonConcave when chord slopes increase, i.e. the SEC curve is
    incompatible with a convex LP relaxation.
    """
    sec_points = np.asarray(sec_points, dtype=float)
    if sec_points.shape[0] != spec.n_points:
        raise OutOfRange(
            f"expected {spec.n_points} SEC values, got {sec_points.shape[0]}"
        )
    if np.any(sec_points <= 0.0):
        raise OutOfRange("SEC values must be positive")

    fractions = spec.load_points
    powers = fractions * spec.p_nom_kw
    flows = powers / sec_points          # kg/h; exactly 0 at the origin

    raw_slopes = np.diff(flows) / np.diff(powers)
    raw_intercepts = flows[:-1] - raw_slopes * powers[:-1]

    slopes: list[float] = []
    intercepts: list[float] = []
    for a, b in zip(raw_slopes, raw_intercepts):
        if slopes:
            tie = _SLOPE_TIE_REL * max(1.0, abs(slopes[-1]))
            if a > slopes[-1] + tie:
                raise NonConcave(
                    "chord slopes increase toward full load; the SEC curve "
                    "does not admit a concave output envelope"
                )
            if a >= slopes[-1] - tie:
                continue  # same chord extended: merge
        slopes.append(float(a))
        intercepts.append(float(b))

    return PiecewiseEnvelope(
        p_nom_kw=spec.p_nom_kw,
        slopes=np.array(slopes),
        intercepts=np.array(intercepts),
        sec_points=sec_points,
        load_points=fractions,
    )


def lower_bound_constraint(spec: ElectrolyzerSpec) -> tuple[float, float]:
    """Coefficients (on P, on m_dot) of the search-space cut
    P - m_dot * sec_nominal <= 0, i.e. output at least the full-load rate."""
    return 1.0, -spec.sec_nominal
