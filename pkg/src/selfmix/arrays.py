"""Array geometry, plane-wave phases and the IF / RF array factors.

The central result implemented here: when every array element square-law
mixes a two-tone signal and the IF outputs are combined in phase, the
per-element IF phase is governed by the tone *difference* frequency only,

    phase_k(IF) = 2*pi * (r_k . u) * (f1 - f2) / c0,

whereas a conventional RF combiner sees ``2*pi * (r_k . u) * f_rf / c0``.
The IF array factor therefore varies slowly with angle even for element
spacings of many RF wavelengths, while the equivalent RF array factor shows
grating lobes. In the limit of vanishing tone spacing the IF factor
approaches 1 at every angle and an N-element array contributes a full
factor-N power gain over the whole angular range.

A per-element RF phase offset (e.g. a 180-degree feed rotation of one
antenna row) enters both tones identically and cancels in the self-mixed
IF signal; the same offset applied to an RF-combined array nulls the
broadside response. :func:`simulate_array_timedomain` demonstrates both
effects with brute-force waveform synthesis rather than phasor algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateEqualFrequencies, EmptyInput, NonPositiveInput
from .signals import (
    FilterSpec,
    SampledWaveform,
    ToneSpec,
    apply_filter,
    dft_spectrum,
    plan_sampling,
    square_law_mix,
    synthesize_waveform,
)
from .units import DB_FLOOR, SPEED_OF_LIGHT, amplitude_ratio_to_db

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Direction:
    """Arrival direction: ``theta`` polar from the +z broadside normal,
    ``phi`` azimuth from +x, both in radians."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi",
                           (self.phi + math.pi) % _TWO_PI - math.pi)

    def in_plane_unit(self) -> np.ndarray:
        """Projection of the arrival unit vector onto the array plane."""
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi)])


def cut_direction(theta_signed: float, phi_cut: float) -> Direction:
    """Direction for a signed-theta pattern cut: negative theta maps to the
    opposite azimuth half-plane."""
    if theta_signed >= 0.0:
        return Direction(theta=theta_signed, phi=phi_cut)
    return Direction(theta=-theta_signed, phi=phi_cut + math.pi)


@dataclass(frozen=True)
class ArrayGeometry:
    """Element positions in the z = 0 plane, metres, plus optional static RF
    feed phase offsets (applied at both tones, e.g. a rotated antenna row).
    """

    element_positions: np.ndarray
    rf_phase_offsets: np.ndarray | None = None

    def __post_init__(self) -> None:
        pos = np.asarray(self.element_positions, dtype=float)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 2) if pos.size == 2 else pos
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("element_positions must have shape (N, 2)")
        if pos.shape[0] < 1:
            raise ValueError("need at least one element")
        if not np.all(np.isfinite(pos)):
            raise ValueError("element positions must be finite")
        # no two elements may coincide
        for i in range(pos.shape[0]):
            for j in range(i + 1, pos.shape[0]):
                if np.allclose(pos[i], pos[j], rtol=0.0, atol=0.0):
                    raise ValueError(f"elements {i} and {j} coincide")
        offsets = self.rf_phase_offsets
        if offsets is None:
            offsets = np.zeros(pos.shape[0])
        offsets = np.asarray(offsets, dtype=float)
        if offsets.shape != (pos.shape[0],):
            raise ValueError("rf_phase_offsets must have one entry per element")
        pos = pos.copy()
        offsets = offsets.copy()
        pos.flags.writeable = False
        offsets.flags.writeable = False
        object.__setattr__(self, "element_positions", pos)
        object.__setattr__(self, "rf_phase_offsets", offsets)

    @property
    def element_count(self) -> int:
        return self.element_positions.shape[0]

    @classmethod
    def linear(cls, count: int, spacing: float) -> "ArrayGeometry":
        """Uniform linear array along x with the given element spacing."""
        x = np.arange(count) * spacing
        return cls(np.column_stack([x, np.zeros(count)]))

    @classmethod
    def planar_grid(cls, nx: int, ny: int, dx: float, dy: float) -> "ArrayGeometry":
        """Rectangular nx-by-ny grid (x-major ordering)."""
        pts = [(ix * dx, iy * dy) for iy in range(ny) for ix in range(nx)]
        return cls(np.asarray(pts))

    def with_rf_phase_offsets(self, offsets: Sequence[float]) -> "ArrayGeometry":
        return replace(self, rf_phase_offsets=np.asarray(offsets, dtype=float))


def load_geometry(source: str | Path) -> ArrayGeometry:
    """Read a geometry table: one element per line, whitespace- or
    comma-separated columns ``x_m  y_m  [rf_phase_offset_deg]``; ``#`` starts
    a comment."""
    path = Path(source)
    return parse_geometry(path.read_text(encoding="utf-8"))


def parse_geometry(text: str) -> ArrayGeometry:
    positions = []
    offsets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) not in (2, 3):
            raise ValueError(
                f"geometry line {lineno}: expected 'x_m y_m "
                f"[rf_phase_offset_deg]', got {raw!r}")
        x, y = float(parts[0]), float(parts[1])
        off_deg = float(parts[2]) if len(parts) == 3 else 0.0
        positions.append((x, y))
        offsets.append(math.radians(off_deg))
    if not positions:
        raise EmptyInput("geometry table contains no elements")
    return ArrayGeometry(np.asarray(positions), np.asarray(offsets))


@dataclass(frozen=True)
class TwoToneIllumination:
    """Plane-wave two-tone illumination of the array."""

    f1: float
    f2: float
    amplitudes: tuple[float, float]
    direction: Direction

    def __post_init__(self) -> None:
        if self.f1 <= 0.0 or self.f2 <= 0.0:
            raise ValueError("tone frequencies must be positive")
        if self.f1 == self.f2:
            raise DegenerateEqualFrequencies(
                "two-tone illumination needs distinct frequencies")
        a1, a2 = self.amplitudes
        if a1 < 0.0 or a2 < 0.0:
            raise ValueError("amplitudes must be >= 0")
        object.__setattr__(self, "amplitudes", (float(a1), float(a2)))

    @property
    def if_frequency(self) -> float:
        return abs(self.f1 - self.f2)


@dataclass(frozen=True)
class ElementIfSignal:
    if_frequency: float
    amplitude: float
    phase: float


@dataclass(frozen=True)
class CombineResult:
    power_gain_db: float
    output_phasor: complex


@dataclass(frozen=True)
class ArrayIfResult:
    """IF output of the combined array relative to one isotropic element."""

    if_power_rel_db: float
    if_phase: float


def _relative_positions(g: ArrayGeometry) -> np.ndarray:
    return g.element_positions - g.element_positions[0]


def element_phases(g: ArrayGeometry, d: Direction, frequency: float) -> np.ndarray:
    """Plane-wave phase of every element relative to element 0 at the given
    frequency: ``2*pi * (r_k . u) * f / c0``."""
    u = d.in_plane_unit()
    return _TWO_PI * (_relative_positions(g) @ u) * frequency / SPEED_OF_LIGHT


def path_phase(g: ArrayGeometry, k: int, d: Direction, frequency: float) -> float:
    """Phase advance of element ``k`` relative to element 0.

    Reduces to ``2*pi * d_k * (f/c0) * sin(theta)`` for a linear array
    scanned in its own plane.
    """
    if not 0 <= k < g.element_count:
        raise IndexError(f"element index {k} out of range 0..{g.element_count - 1}")
    return float(element_phases(g, d, frequency)[k])


def element_if_signal(g: ArrayGeometry, k: int,
                      ill: TwoToneIllumination) -> ElementIfSignal:
    """Self-mixed IF tone produced at element ``k``.

    The IF phase is the difference of the two RF path phases, so it depends
    only on the tone spacing ``f1 - f2``, not on the absolute RF. The
    amplitude uses the conventional ``a1*a2/2`` prefactor; absolute scale
    cancels in every normalized array quantity (see
    :func:`selfmix.signals.analytic_two_tone_products` for the unnormalized
    expansion).
    """
    if not 0 <= k < g.element_count:
        raise IndexError(f"element index {k} out of range 0..{g.element_count - 1}")
    a1, a2 = ill.amplitudes
    phase = path_phase(g, k, ill.direction, ill.f1) - path_phase(
        g, k, ill.direction, ill.f2)
    phase = (phase + math.pi) % _TWO_PI - math.pi
    return ElementIfSignal(if_frequency=ill.if_frequency,
                           amplitude=0.5 * a1 * a2,
                           phase=phase)


def if_array_factor(g: ArrayGeometry, f1: float, f2: float,
                    d: Direction) -> float:
    """Normalized IF array factor ``|sum_k exp(j*dphi_k)| / N`` with
    ``dphi_k`` the self-mixed per-element phase (difference-frequency
    phase). Static RF feed offsets cancel in self-mixing and do not enter.
    """
    phases = element_phases(g, d, f1) - element_phases(g, d, f2)
    return float(np.abs(np.exp(1j * phases).mean()))


def rf_array_factor(g: ArrayGeometry, f_rf: float, d: Direction) -> float:
    """Normalized RF array factor of the same layout combined at RF; static
    feed offsets do enter here."""
    phases = element_phases(g, d, f_rf) + g.rf_phase_offsets
    return float(np.abs(np.exp(1j * phases).mean()))


def if_array_factor_cut(g: ArrayGeometry, f1: float, f2: float,
                        theta_signed: np.ndarray | Sequence[float],
                        phi_cut: float) -> np.ndarray:
    """Vectorized IF array factor along a signed-theta cut."""
    return _factor_cut(g, f1 - f2, np.asarray(theta_signed, dtype=float),
                       phi_cut, offsets=None)


def rf_array_factor_cut(g: ArrayGeometry, f_rf: float,
                        theta_signed: np.ndarray | Sequence[float],
                        phi_cut: float) -> np.ndarray:
    """Vectorized RF array factor along a signed-theta cut."""
    return _factor_cut(g, f_rf, np.asarray(theta_signed, dtype=float),
                       phi_cut, offsets=g.rf_phase_offsets)


def _factor_cut(g: ArrayGeometry, frequency: float, theta: np.ndarray,
                phi_cut: float, offsets: np.ndarray | None) -> np.ndarray:
    # signed theta at fixed phi is equivalent to |theta| at phi or phi+pi
    u = np.column_stack([np.sin(theta) * math.cos(phi_cut),
                         np.sin(theta) * math.sin(phi_cut)])
    phases = _TWO_PI * (u @ _relative_positions(g).T) * frequency / SPEED_OF_LIGHT
    if offsets is not None:
        phases = phases + offsets[np.newaxis, :]
    return np.abs(np.exp(1j * phases).mean(axis=1))


def effective_spacing(d_element: float, delta_f: float, f_ref: float) -> float:
    """Electrical element spacing governing the IF array factor:
    ``d * delta_f / c0`` (dimensionless).

    ``f_ref`` is the RF used for comparison reporting (``d * f_ref / c0`` is
    the conventional electrical spacing); it must be positive but does not
    enter this value. ``delta_f = 0`` is allowed and gives 0.
    """
    if d_element <= 0.0:
        raise NonPositiveInput("d_element must be positive")
    if f_ref <= 0.0:
        raise NonPositiveInput("f_ref must be positive")
    if delta_f < 0.0:
        raise NonPositiveInput("delta_f must be >= 0")
    return d_element * delta_f / SPEED_OF_LIGHT


def combine_elements(amplitudes: Sequence[float], phases: Sequence[float],
                     combiner_loss_db: float = 0.0) -> CombineResult:
    """Ideal matched N-to-1 combiner with scalar loss.

    Output amplitude is ``sum(phasors) / sqrt(N)``; the reported power gain
    is referred to the first element's power, so N equal co-phased inputs
    give ``10*log10(N) - loss``. Full cancellation reports the -200 dB
    floor.
    """
    amplitudes = np.asarray(amplitudes, dtype=float)
    phases = np.asarray(phases, dtype=float)
    if amplitudes.size == 0:
        raise EmptyInput("combiner needs at least one input")
    if amplitudes.shape != phases.shape:
        raise ValueError("amplitudes and phases must have the same length")
    if combiner_loss_db < 0.0:
        raise ValueError("combiner_loss_db must be >= 0")
    if amplitudes[0] == 0.0:
        raise ValueError("reference element amplitude must be non-zero")
    n = amplitudes.size
    total = np.sum(amplitudes * np.exp(1j * phases))
    output = complex(total / math.sqrt(n))
    ratio = abs(total) / (math.sqrt(n) * abs(amplitudes[0]))
    if ratio <= 0.0:
        return CombineResult(power_gain_db=DB_FLOOR, output_phasor=output)
    gain_db = max(DB_FLOOR, 20.0 * math.log10(ratio) - combiner_loss_db)
    return CombineResult(power_gain_db=gain_db, output_phasor=output)


def simulate_array_timedomain(g: ArrayGeometry, ill: TwoToneIllumination,
                              element_gains: np.ndarray | Sequence | None = None
                              ) -> ArrayIfResult:
    """Brute-force array oracle: per element, synthesize the delayed and
    feed-shifted two-tone waveform, square it, band-pass around the IF,
    coherently sum with ``1/sqrt(N)`` combiner normalization and read the IF
    tone from the DFT.

    ``element_gains`` may be one amplitude gain per element or an (N, 2)
    array with separate gains at the two tones. The result is the IF power
    in dB relative to a single isotropic element under the same
    illumination, so broadside with unit gains gives ``10*log10(N)``.
    """
    n = g.element_count
    a1, a2 = ill.amplitudes
    if a1 <= 0.0 or a2 <= 0.0:
        raise ValueError("illumination amplitudes must be positive")
    if element_gains is None:
        gains = np.ones((n, 2))
    else:
        gains = np.asarray(element_gains, dtype=float)
        if gains.shape == (n,):
            gains = np.column_stack([gains, gains])
        if gains.shape != (n, 2):
            raise ValueError(f"element_gains must have shape ({n},) or ({n}, 2)")
    if np.any(gains < 0.0):
        raise ValueError("element gains must be >= 0")

    if_freq = ill.if_frequency
    rate, duration = plan_sampling([ill.f1, ill.f2, if_freq])
    band = FilterSpec.band_pass(0.5 * if_freq, 1.5 * if_freq)

    phases1 = element_phases(g, ill.direction, ill.f1) + g.rf_phase_offsets
    phases2 = element_phases(g, ill.direction, ill.f2) + g.rf_phase_offsets

    def element_if_tone(k: int | None) -> complex:
        if k is None:  # single-element isotropic reference at the origin
            tones = [ToneSpec(ill.f1, a1), ToneSpec(ill.f2, a2)]
        else:
            g1 = gains[k, 0] * a1
            g2 = gains[k, 1] * a2
            if g1 == 0.0 or g2 == 0.0:
                return 0.0 + 0.0j
            tones = [ToneSpec(ill.f1, g1, phases1[k]),
                     ToneSpec(ill.f2, g2, phases2[k])]
        w = synthesize_waveform(tones, rate, duration)
        mixed = apply_filter(square_law_mix(w), band)
        return dft_spectrum(mixed).amplitude_at(if_freq)

    total = sum(element_if_tone(k) for k in range(n)) / math.sqrt(n)
    reference = element_if_tone(None)
    ratio = abs(total) / abs(reference)
    if ratio <= 0.0:
        return ArrayIfResult(if_power_rel_db=DB_FLOOR, if_phase=0.0)
    phase = math.atan2((total / reference).imag, (total / reference).real)
    return ArrayIfResult(if_power_rel_db=amplitude_ratio_to_db(ratio),
                         if_phase=phase)
