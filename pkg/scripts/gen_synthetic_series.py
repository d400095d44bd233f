"""Regenerate the bundled synthetic capacity-factor year.

The shipped series are deterministic closed-form profiles (diurnal/seasonal
solar, mixed-period wind) standing in for real weather data; replace them
with site-specific exports for quantitative studies. Run from the repo root:

    python scripts/gen_synthetic_series.py
"""

from pathlib import Path

import numpy as np

HOURS = 8760
OUT = Path(__file__).resolve().parents[1] / "src" / "h2stack" / "data"


def solar(hours: np.ndarray) -> np.ndarray:
    day = hours / 24.0
    hod = hours % 24
    seasonal = 0.55 - 0.45 * np.cos(2.0 * np.pi * (day - 172.0) / 365.0)
    diurnal = np.clip(np.cos((hod - 12.0) / 12.0 * np.pi), 0.0, None) ** 1.5
    return np.clip(diurnal * seasonal, 0.0, 1.0)


def wind(hours: np.ndarray, mean: float, spread: float, periods) -> np.ndarray:
    value = np.full(hours.shape, mean)
    for amplitude, period, phase in periods:
        value += spread * amplitude * np.sin(2.0 * np.pi * hours / period + phase)
    return np.clip(value, 0.0, 1.0)


def write(name: str, values: np.ndarray) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    lines = ["hour,value"]
    lines += [f"{t},{values[t]:.6f}" for t in range(len(values))]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} (mean {values.mean():.3f})")


def main() -> None:
    hours = np.arange(HOURS, dtype=float)
    write("cf_onshore.csv", wind(
        hours, 0.38, 0.30,
        [(1.0, 197.3, 0.0), (0.55, 47.9, 1.3), (0.35, 11.7, 2.1),
         (0.45, 8760.0, 3.9)]))
    write("cf_offshore.csv", wind(
        hours, 0.52, 0.28,
        [(1.0, 231.1, 0.7), (0.5, 53.3, 2.6), (0.3, 13.1, 0.4),
         (0.5, 8760.0, 4.2)]))
    write("cf_solar.csv", solar(hours))


if __name__ == "__main__":
    main()
