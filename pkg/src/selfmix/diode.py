"""Schottky diode model and square-law mixing simulations.

The diode is a Shockley junction with a series resistance:

    i = I_s * (exp(v_j / (n * V_T)) - 1),      v_j = v_terminal - i * R_s

With ``R_s > 0`` the second derivative of the terminal I-V curve has an
interior maximum, which is the classical "best bias point" of a square-law
detector; with ``R_s = 0`` the curve is purely exponential and the second
derivative grows monotonically.

Mixing is simulated with a memoryless voltage drive: the amplified receive
tones plus the bias voltage form a source that drives the diode through the
chain's source impedance, the loop current is solved sample by sample, and
the IF component is read from its DFT. Amplifier and filters are collapsed
into a flat gain and an ideal IF load; there is no junction capacitance and
hence no frequency dependence unless configured. This keeps every
qualitative behaviour of the real chain at desk scale: the square-law slope,
a whole-chain bias optimum well below the static one, near-cancellation of
the conversion loss by the amplifier gain at moderate drive, and bias
insensitivity once the diode rectifies hard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import (
    EmptyToneList,
    NoConvergence,
    NoInteriorMaximum,
    NyquistViolation,
)
from .signals import SampledWaveform, ToneSpec, dft_spectrum, plan_sampling, synthesize_waveform
from .tables import Table
from .units import DB_FLOOR, db_to_amplitude_ratio, dbm_to_amplitude, watts_to_dbm

EXP_CLAMP = 60.0
"""Exponent arguments of the Shockley law are clamped at this value to avoid
overflow; the clamp only engages for junction voltages far outside any
operating point (about 1.9 V for typical parameters)."""

DERIVATIVE_STEP = 1e-5
"""Central finite-difference step (volts) for the I-V derivatives."""

NEWTON_MAX_ITER = 100
NEWTON_RELATIVE_RESIDUAL = 1e-12


@dataclass(frozen=True)
class DiodeModel:
    """Shockley diode with ohmic series resistance.

    ``thermal_voltage`` defaults to kT/q at 300 K.
    """

    saturation_current: float
    ideality: float = 1.2
    series_resistance: float = 0.0
    thermal_voltage: float = 0.02585

    def __post_init__(self) -> None:
        if self.saturation_current <= 0.0:
            raise ValueError("saturation_current must be positive")
        if not (1.0 <= self.ideality <= 3.0):
            raise ValueError("ideality must lie in [1, 3]")
        if self.series_resistance < 0.0:
            raise ValueError("series_resistance must be >= 0")
        if self.thermal_voltage <= 0.0:
            raise ValueError("thermal_voltage must be positive")

    @property
    def emission_voltage(self) -> float:
        """n * V_T, the exponential slope voltage."""
        return self.ideality * self.thermal_voltage


def default_diode() -> DiodeModel:
    """Stand-in mm-wave mixer diode.

    Vendor SPICE parameters for this class of device are not public, so the
    values are fitted to put the static bias optimum at 0.73 V / 2.5 mA;
    treat them as a calibrated placeholder, not a datasheet.
    """
    return DiodeModel(saturation_current=2.5e-13, ideality=1.2,
                      series_resistance=6.2)


@dataclass(frozen=True)
class BiasPoint:
    terminal_voltage: float
    bias_current: float

    @classmethod
    def at_voltage(cls, model: DiodeModel, voltage: float) -> "BiasPoint":
        return cls(terminal_voltage=voltage,
                   bias_current=float(terminal_current(model, voltage)))


@dataclass(frozen=True)
class MixingChain:
    """Receive chain collapsed to flat LNA gain + biased diode + IF load.

    The bias voltage and the amplified receive waveform drive the diode
    through ``source_impedance_ohms``, so the conduction loop sees
    ``source_impedance_ohms + series_resistance``. Including the source in
    the loop is what limits the current once the diode rectifies hard, and
    it is what makes the bias voltage uncritical at strong drive.
    """

    lna_gain_db: float
    diode: DiodeModel
    bias: BiasPoint
    if_load_ohms: float = 50.0
    source_impedance_ohms: float = 50.0

    def __post_init__(self) -> None:
        if self.if_load_ohms <= 0.0 or self.source_impedance_ohms <= 0.0:
            raise ValueError("if_load_ohms and source_impedance_ohms must be positive")
        expected = float(terminal_current(self.loop_model(),
                                          self.bias.terminal_voltage))
        scale = max(abs(expected), self.diode.saturation_current)
        if abs(self.bias.bias_current - expected) > 1e-6 * scale:
            raise ValueError(
                "bias point is inconsistent with the chain's conduction "
                "loop; build the chain with MixingChain.at_bias_voltage or "
                "BiasPoint.at_voltage(chain.loop_model(), v)")

    def loop_model(self) -> DiodeModel:
        """Diode model whose series resistance includes the source."""
        return replace(self.diode, series_resistance=(
            self.diode.series_resistance + self.source_impedance_ohms))

    def at_bias_voltage(self, voltage: float) -> "MixingChain":
        return replace(self, bias=BiasPoint.at_voltage(self.loop_model(), voltage))


def default_chain(lna_gain_db: float = 25.0,
                  bias_voltage: float = 0.65,
                  diode: DiodeModel | None = None) -> MixingChain:
    """Reference receive chain: 25 dB flat LNA, default diode, 50 ohm
    source and IF load, biased at the whole-chain optimum (about 0.65 V for
    the default device; the *static* diode-only optimum sits higher, near
    0.73 V)."""
    diode = diode if diode is not None else default_diode()
    chain = MixingChain(lna_gain_db=lna_gain_db, diode=diode,
                        bias=BiasPoint(0.0, 0.0))
    return chain.at_bias_voltage(bias_voltage)


@dataclass(frozen=True)
class ConversionResult:
    if_frequency: float
    if_power_dbm: float
    dc_current: float


@dataclass(frozen=True)
class SweepCellError:
    """Marker stored in a sweep grid when one cell failed; other cells are
    unaffected."""

    message: str


@dataclass(frozen=True)
class IvDerivatives:
    di_dv: np.ndarray | float
    d2i_dv2: np.ndarray | float


def junction_current(model: DiodeModel, v_junction):
    """Shockley current for a given junction voltage (array-capable)."""
    exponent = np.minimum(np.asarray(v_junction, dtype=float) / model.emission_voltage,
                          EXP_CLAMP)
    i = model.saturation_current * np.expm1(exponent)
    if np.isscalar(v_junction) or np.ndim(v_junction) == 0:
        return float(i)
    return i


def terminal_current(model: DiodeModel, v_terminal):
    """Current through the series combination of R_s and the junction.

    Solves ``i = junction_current(v - i * R_s)`` with a bracketed Newton
    iteration on the junction voltage (array-capable). For ``R_s = 0`` this
    reduces exactly to :func:`junction_current`. Raises
    :class:`NoConvergence` if the relative residual has not reached 1e-12
    after 100 iterations.
    """
    if model.series_resistance == 0.0:
        return junction_current(model, v_terminal)
    scalar = np.isscalar(v_terminal) or np.ndim(v_terminal) == 0
    v = np.atleast_1d(np.asarray(v_terminal, dtype=float))
    if not np.all(np.isfinite(v)):
        raise ValueError("terminal voltage must be finite")

    r = model.series_resistance
    nvt = model.emission_voltage
    i_s = model.saturation_current

    def residual(vj):
        # solve h(vj) = vj + R*i(vj) - v = 0; h is strictly increasing
        return vj + r * i_s * np.expm1(np.minimum(vj / nvt, EXP_CLAMP)) - v

    # the junction voltage always lies between 0 and the terminal voltage
    lo = np.minimum(v, 0.0)
    hi = np.maximum(v, 0.0)
    # start on the un-clamped side of the exponential so Newton steps are
    # meaningful; the bracket keeps the iteration safe regardless
    start_cap = nvt * (EXP_CLAMP - 1.0)
    vj = np.clip(np.where(v >= 0.0, np.minimum(v, start_cap), 0.0), lo, hi)
    converged = np.zeros(v.shape, dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        h = residual(vj)
        lo = np.where(h < 0.0, vj, lo)
        hi = np.where(h > 0.0, vj, hi)
        exponent = np.minimum(vj / nvt, EXP_CLAMP)
        slope = 1.0 + (r * i_s / nvt) * np.exp(exponent)
        step = h / slope
        proposal = vj - step
        # inside the clamp region the local slope misrepresents the curve,
        # so fall back to bisection there as well
        outside = (proposal <= lo) | (proposal >= hi) | (vj / nvt >= EXP_CLAMP)
        vj_next = np.where(outside, 0.5 * (lo + hi), proposal)

        i_now = i_s * np.expm1(np.minimum(vj_next / nvt, EXP_CLAMP))
        res_current = i_now - i_s * np.expm1(
            np.minimum((v - i_now * r) / nvt, EXP_CLAMP))
        tol = NEWTON_RELATIVE_RESIDUAL * np.maximum(np.abs(i_now), i_s)
        converged = np.abs(res_current) <= tol
        vj = vj_next
        if converged.all():
            break
    if not converged.all():
        raise NoConvergence(
            "terminal current solve did not reach the 1e-12 relative "
            "residual within 100 iterations")
    i = i_s * np.expm1(np.minimum(vj / nvt, EXP_CLAMP))
    if scalar:
        return float(i[0])
    return i


def iv_derivatives(model: DiodeModel, v_terminal,
                   step: float = DERIVATIVE_STEP) -> IvDerivatives:
    """First and second derivative of the terminal I-V curve.

    Central finite differences with step ``step`` (default 1e-5 V) on
    :func:`terminal_current`; results are reproducible bit for bit.
    """
    v = np.asarray(v_terminal, dtype=float)
    i_plus = terminal_current(model, v + step)
    i_minus = terminal_current(model, v - step)
    i_zero = terminal_current(model, v)
    di_dv = (np.asarray(i_plus) - np.asarray(i_minus)) / (2.0 * step)
    d2i_dv2 = (np.asarray(i_plus) - 2.0 * np.asarray(i_zero)
               + np.asarray(i_minus)) / (step * step)
    if np.isscalar(v_terminal) or np.ndim(v_terminal) == 0:
        return IvDerivatives(di_dv=float(di_dv), d2i_dv2=float(d2i_dv2))
    return IvDerivatives(di_dv=di_dv, d2i_dv2=d2i_dv2)


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
    return 0.5 * (a + b)


def optimal_bias_static(model: DiodeModel, v_range: tuple[float, float],
                        grid_step: float = 1e-3) -> BiasPoint:
    """Bias point maximising the I-V second derivative (static analysis).

    Scans ``v_range`` on a ``grid_step`` grid, then refines the bracket
    around the best grid point by golden-section search. Raises
    :class:`NoInteriorMaximum` when the model has no series resistance (the
    second derivative is then monotone) or when the maximum sits on the edge
    of the range.
    """
    if model.series_resistance <= 0.0:
        raise NoInteriorMaximum(
            "a purely exponential diode (R_s = 0) has a monotone second "
            "derivative; no interior bias optimum exists")
    lo, hi = v_range
    if not hi > lo:
        raise ValueError("v_range must satisfy hi > lo")
    count = max(int(round((hi - lo) / grid_step)) + 1, 5)
    grid = np.linspace(lo, hi, count)
    d2 = np.asarray(iv_derivatives(model, grid).d2i_dv2)
    k = int(np.argmax(d2))
    if k == 0 or k == grid.size - 1:
        raise NoInteriorMaximum(
            "second-derivative maximum lies on the edge of the search range")

    def objective(v: float) -> float:
        return float(iv_derivatives(model, v).d2i_dv2)

    v_opt = _golden_section_max(objective, float(grid[k - 1]),
                                float(grid[k + 1]), tol=1e-7)
    return BiasPoint.at_voltage(model, v_opt)


def simulate_mixing(chain: MixingChain, tones: Sequence[ToneSpec],
                    if_frequency: float) -> ConversionResult:
    """Time-domain mixing of a tone set through the biased diode.

    The LNA power gain scales the tone amplitudes; the bias voltage and the
    amplified waveform are superimposed and drive the diode through the
    chain's source impedance; the loop current is solved per sample and the
    component at ``if_frequency`` is extracted from its DFT.
    ``if_power_dbm`` is the one-sided IF current tone dissipated in
    ``if_load_ohms`` (floored at -200 dBm); ``dc_current`` is the DC bin of
    the current.
    """
    tones = list(tones)
    if not tones:
        raise EmptyToneList("need at least one tone")
    if if_frequency <= 0.0:
        raise ValueError("if_frequency must be positive")
    freqs = [t.frequency for t in tones]
    diffs = {abs(a - b) for a in freqs for b in freqs if a != b}
    if not any(math.isclose(if_frequency, d, rel_tol=1e-9) for d in diffs):
        raise ValueError(
            f"{if_frequency} Hz is not a difference frequency of the tone set")

    gain = db_to_amplitude_ratio(chain.lna_gain_db)
    amplified = [ToneSpec(t.frequency, gain * t.amplitude, t.phase) for t in tones]
    # generous oversampling: the exponential diode produces products of all
    # orders, and only very high orders may alias onto the IF bin this way
    rate, duration = plan_sampling(freqs + [if_frequency], oversample=24.0)
    if all(t.amplitude == 0.0 for t in amplified):
        return ConversionResult(if_frequency=if_frequency,
                                if_power_dbm=DB_FLOOR,
                                dc_current=chain.bias.bias_current)
    rf = synthesize_waveform(amplified, rate, duration)
    v = chain.bias.terminal_voltage + rf.samples
    i = terminal_current(chain.loop_model(), v)
    spectrum = dft_spectrum(SampledWaveform(sample_rate=rate, samples=i))
    i_if = abs(spectrum.amplitude_at(if_frequency))
    if_power_w = i_if * i_if * chain.if_load_ohms / 2.0
    return ConversionResult(
        if_frequency=if_frequency,
        if_power_dbm=watts_to_dbm(if_power_w),
        dc_current=float(spectrum.complex_amplitudes[0].real),
    )


def _check_grid(values: Sequence[float], name: str) -> list[float]:
    values = [float(x) for x in values]
    if not values:
        raise ValueError(f"{name} must be non-empty")
    if len(values) > 1:
        steps = np.diff(values)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError(f"{name} must be monotone")
    return values


@dataclass(frozen=True)
class BiasPowerSweep:
    """IF power over a (bias voltage, input power) grid."""

    bias_voltages: tuple[float, ...]
    input_powers_dbm: tuple[float, ...]
    tone_frequencies: tuple[float, float]
    weaker_tone_offset_db: float
    cells: tuple[tuple[ConversionResult | SweepCellError, ...], ...]

    def to_table(self) -> Table:
        table = Table(columns=["bias_v", "input_power_dbm", "if_power_dbm",
                               "dc_current_a"])
        for bias, row in zip(self.bias_voltages, self.cells):
            for power, cell in zip(self.input_powers_dbm, row):
                if isinstance(cell, SweepCellError):
                    table.append([bias, power, "error", "error"])
                else:
                    table.append([bias, power, cell.if_power_dbm,
                                  cell.dc_current])
        return table


@dataclass(frozen=True)
class BiasFrequencySweep:
    """Sweep of IF power over (bias voltage, two-tone centre frequency)."""

    bias_voltages: tuple[float, ...]
    center_frequencies: tuple[float, ...]
    tone_spacing: float
    tone_powers_dbm: tuple[float, float]
    cells: tuple[tuple[ConversionResult | SweepCellError, ...], ...]

    def to_table(self) -> Table:
        table = Table(columns=["bias_v", "center_freq_hz", "if_power_dbm",
                               "dc_current_a"])
        for bias, row in zip(self.bias_voltages, self.cells):
            for freq, cell in zip(self.center_frequencies, row):
                if isinstance(cell, SweepCellError):
                    table.append([bias, freq, "error", "error"])
                else:
                    table.append([bias, freq, cell.if_power_dbm,
                                  cell.dc_current])
        return table


def _run_cell(chain: MixingChain, tones: Sequence[ToneSpec],
              if_frequency: float) -> ConversionResult | SweepCellError:
    try:
        return simulate_mixing(chain, tones, if_frequency)
    except (NoConvergence, NyquistViolation) as exc:
        return SweepCellError(message=str(exc))


def bias_power_sweep(chain_template: MixingChain,
                     bias_grid: Sequence[float],
                     power_grid_dbm: Sequence[float],
                     tone_pair: tuple[float, float],
                     weaker_tone_offset_db: float = -5.0) -> BiasPowerSweep:
    """Independent :func:`simulate_mixing` runs over a bias x power grid.

    The second tone is driven ``weaker_tone_offset_db`` relative to the
    first (default -5 dB). Cells are evaluated in deterministic row-major
    (bias-major) order; a failing cell is recorded as
    :class:`SweepCellError` without poisoning the rest.
    """
    bias_values = _check_grid(bias_grid, "bias_grid")
    power_values = _check_grid(power_grid_dbm, "power_grid_dbm")
    f1, f2 = tone_pair
    if_frequency = abs(f2 - f1)
    rows = []
    for bias in bias_values:
        chain = chain_template.at_bias_voltage(bias)
        row = []
        for p_dbm in power_values:
            tones = [
                ToneSpec(f1, dbm_to_amplitude(p_dbm, chain.source_impedance_ohms)),
                ToneSpec(f2, dbm_to_amplitude(p_dbm + weaker_tone_offset_db,
                                              chain.source_impedance_ohms)),
            ]
            row.append(_run_cell(chain, tones, if_frequency))
        rows.append(tuple(row))
    return BiasPowerSweep(
        bias_voltages=tuple(bias_values),
        input_powers_dbm=tuple(power_values),
        tone_frequencies=(float(f1), float(f2)),
        weaker_tone_offset_db=float(weaker_tone_offset_db),
        cells=tuple(rows),
    )


def bias_frequency_sweep(chain_template: MixingChain,
                         bias_grid: Sequence[float],
                         center_frequencies: Sequence[float],
                         spacing: float,
                         powers_dbm: tuple[float, float]) -> BiasFrequencySweep:
    """Sweep over bias and two-tone centre frequency at fixed tone powers.

    Each centre ``f`` becomes the tone pair ``(f, f + spacing)``. The chain
    model is frequency-flat, so columns only differ if the caller varies the
    chain; the sweep exists to mirror the frequency-axis presentation of
    measured data.
    """
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    bias_values = _check_grid(bias_grid, "bias_grid")
    centers = _check_grid(center_frequencies, "center_frequencies")
    p1_dbm, p2_dbm = powers_dbm
    rows = []
    for bias in bias_values:
        chain = chain_template.at_bias_voltage(bias)
        a1 = dbm_to_amplitude(p1_dbm, chain.source_impedance_ohms)
        a2 = dbm_to_amplitude(p2_dbm, chain.source_impedance_ohms)
        row = []
        for f in centers:
            tones = [ToneSpec(f, a1), ToneSpec(f + spacing, a2)]
            row.append(_run_cell(chain, tones, spacing))
        rows.append(tuple(row))
    return BiasFrequencySweep(
        bias_voltages=tuple(bias_values),
        center_frequencies=tuple(centers),
        tone_spacing=float(spacing),
        tone_powers_dbm=(float(p1_dbm), float(p2_dbm)),
        cells=tuple(rows),
    )
