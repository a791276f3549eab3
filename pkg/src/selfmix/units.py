"""Unit conversions between SI quantities and the dB domain.

All internal computation uses SI units (Hz, V, A, s, m); dB/dBm values only
appear at module boundaries that are inherently logarithmic (mixer output
power, link budgets, CLI columns).

Power/amplitude conventions:

* tone amplitudes are one-sided peak voltages, so a tone of amplitude ``a``
  into impedance ``z`` carries ``a**2 / (2 * z)`` watts;
* dB values that would be ``-inf`` are floored at ``DB_FLOOR`` so tables and
  comparisons stay finite.
"""

from __future__ import annotations

import math

SPEED_OF_LIGHT = 299_792_458.0
"""Free-space speed of light in m/s (exact SI value)."""

DB_FLOOR = -200.0
"""Reported floor for quantities whose exact value would be -inf dB."""


def dbm_to_watts(p_dbm: float) -> float:
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def watts_to_dbm(p_watts: float, floor: float = DB_FLOOR) -> float:
    if p_watts <= 0.0:
        return floor
    return max(floor, 10.0 * math.log10(p_watts / 1e-3))


def dbm_to_amplitude(p_dbm: float, impedance: float = 50.0) -> float:
    """Peak voltage of a sine tone carrying ``p_dbm`` into ``impedance``."""
    return math.sqrt(2.0 * impedance * dbm_to_watts(p_dbm))


def amplitude_to_dbm(amplitude: float, impedance: float = 50.0,
                     floor: float = DB_FLOOR) -> float:
    return watts_to_dbm(amplitude * amplitude / (2.0 * impedance), floor)


def db_to_amplitude_ratio(gain_db: float) -> float:
    """Power gain in dB -> multiplicative amplitude factor."""
    return 10.0 ** (gain_db / 20.0)


def amplitude_ratio_to_db(ratio: float, floor: float = DB_FLOOR) -> float:
    if ratio <= 0.0:
        return floor
    return max(floor, 20.0 * math.log10(ratio))


def power_ratio_to_db(ratio: float, floor: float = DB_FLOOR) -> float:
    if ratio <= 0.0:
        return floor
    return max(floor, 10.0 * math.log10(ratio))
