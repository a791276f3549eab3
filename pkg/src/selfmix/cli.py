"""Command-line front end.

One subcommand per capability, each driven by an optional flat key-value
config file (``key = value`` per line, ``#`` comments) plus ``--out`` /
``--format`` flags. All physical config keys carry unit suffixes (``_hz``,
``_m``, ``_dbm``, ``_v``, ...); unknown keys are rejected. Outputs are
deterministic: identical configs yield byte-identical files.

Exit status: 0 on success, 2 for configuration errors, 3 for computation
errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from . import arrays, diode, linkbudget, patterns, signals, validation
from .errors import ConfigError, SelfmixError
from .tables import Table
from .units import SPEED_OF_LIGHT

_EPILOG = ("exit status: 0 success, 2 configuration error (bad key/value, "
           "unreadable file), 3 computation error (solver or model failure)")


def _parse_config_text(text: str, source: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', "
                              f"got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{source}:{lineno}: empty key or value")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


class Schema:
    """Typed key set for one subcommand's config."""

    def __init__(self, **keys: tuple[Callable, object]):
        self.keys = keys  # name -> (parser, default)

    def resolve(self, raw: dict[str, str]) -> dict:
        unknown = set(raw) - set(self.keys)
        if unknown:
            raise ConfigError(
                "unknown config key(s): " + ", ".join(sorted(unknown))
                + "; allowed: " + ", ".join(sorted(self.keys)))
        out = {}
        for name, (parse, default) in self.keys.items():
            if name in raw:
                try:
                    out[name] = parse(raw[name])
                except ValueError as exc:
                    raise ConfigError(f"config key {name}: {exc}") from exc
            else:
                out[name] = default
        return out


def _load_config(path: str | None, schema: Schema) -> dict:
    if path is None:
        return schema.resolve({})
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    return schema.resolve(_parse_config_text(p.read_text(encoding="utf-8"),
                                             str(path)))


def _write_output(table: Table, out: str | None, fmt: str,
                  quiet: bool) -> None:
    if out is None:
        raise ConfigError("--out is required for this subcommand")
    table.write(out, fmt)
    if not quiet:
        print(f"wrote {len(table.rows)} rows to {out}")


def _theta_grid_deg(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0.0 or stop <= start:
        raise ConfigError("need theta_stop_deg > theta_start_deg and "
                          "theta_step_deg > 0")
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def _geometry_from_config(cfg: dict) -> arrays.ArrayGeometry:
    if cfg["geometry_file"]:
        return arrays.load_geometry(cfg["geometry_file"])
    return arrays.ArrayGeometry.planar_grid(cfg["nx"], cfg["ny"],
                                            cfg["dx_m"], cfg["dy_m"])


_GEOMETRY_KEYS = dict(
    geometry_file=(str, ""),
    nx=(int, 4),
    ny=(int, 2),
    dx_m=(float, 0.032),
    dy_m=(float, 0.036),
)

_CUT_KEYS = dict(
    phi_cut_deg=(float, 90.0),
    theta_start_deg=(float, -90.0),
    theta_stop_deg=(float, 90.0),
    theta_step_deg=(float, 0.25),
)

_DIODE_KEYS = dict(
    saturation_current_a=(float, 2.5e-13),
    ideality=(float, 1.2),
    series_resistance_ohm=(float, 6.2),
    thermal_voltage_v=(float, 0.02585),
)

_CHAIN_KEYS = dict(
    lna_gain_db=(float, 25.0),
    bias_v=(float, 0.65),
    if_load_ohm=(float, 50.0),
    source_impedance_ohm=(float, 50.0),
)


def _diode_from_config(cfg: dict) -> diode.DiodeModel:
    return diode.DiodeModel(saturation_current=cfg["saturation_current_a"],
                            ideality=cfg["ideality"],
                            series_resistance=cfg["series_resistance_ohm"],
                            thermal_voltage=cfg["thermal_voltage_v"])


def _chain_from_config(cfg: dict) -> diode.MixingChain:
    chain = diode.MixingChain(
        lna_gain_db=cfg["lna_gain_db"], diode=_diode_from_config(cfg),
        bias=diode.BiasPoint(0.0, 0.0), if_load_ohms=cfg["if_load_ohm"],
        source_impedance_ohms=cfg["source_impedance_ohm"])
    return chain.at_bias_voltage(cfg["bias_v"])


# --------------------------------------------------------------------------
# subcommands


SPECTRUM_SCHEMA = Schema(
    carrier_freq_hz=(float, 37.5e9),
    carrier_amp_v=(float, 1.0),
    band_low_hz=(float, 38.0e9),
    band_high_hz=(float, 38.5e9),
    band_tone_count=(int, 4),
    band_amp_v=(float, 0.25),
    frequency_grid_hz=(float, 1e8),
)


def cmd_spectrum(cfg: dict) -> Table:
    """Carrier-plus-band self-mixing demo: original and squared spectra."""
    grid = cfg["frequency_grid_hz"]
    if grid <= 0:
        raise ConfigError("frequency_grid_hz must be positive")

    def snap(f: float) -> float:
        return round(f / grid) * grid

    count = cfg["band_tone_count"]
    if count < 1:
        raise ConfigError("band_tone_count must be >= 1")
    band = (np.linspace(cfg["band_low_hz"], cfg["band_high_hz"], count)
            if count > 1 else np.array([cfg["band_low_hz"]]))
    tones = [signals.ToneSpec(snap(cfg["carrier_freq_hz"]), cfg["carrier_amp_v"])]
    tones += [signals.ToneSpec(snap(f), cfg["band_amp_v"]) for f in band]
    rate, duration = signals.plan_sampling([t.frequency for t in tones])
    w = signals.synthesize_waveform(tones, rate, duration)
    original = signals.dft_spectrum(w)
    mixed = signals.dft_spectrum(signals.square_law_mix(w))
    table = Table(columns=["frequency_hz", "original_amplitude_v",
                           "mixed_amplitude_v"])
    orig = original.magnitudes
    for k, f in enumerate(mixed.bin_frequencies):
        amp_in = float(orig[k]) if k < orig.size else 0.0
        table.append([float(f), amp_in, float(mixed.magnitudes[k])])
    return table


DIODE_IV_SCHEMA = Schema(
    **_DIODE_KEYS,
    v_start_v=(float, 0.0),
    v_stop_v=(float, 0.9),
    v_step_v=(float, 0.002),
)


def cmd_diode_iv(cfg: dict, quiet: bool) -> Table:
    model = _diode_from_config(cfg)
    if cfg["v_step_v"] <= 0 or cfg["v_stop_v"] <= cfg["v_start_v"]:
        raise ConfigError("need v_stop_v > v_start_v and v_step_v > 0")
    count = int(round((cfg["v_stop_v"] - cfg["v_start_v"]) / cfg["v_step_v"])) + 1
    grid = cfg["v_start_v"] + cfg["v_step_v"] * np.arange(count)
    current = np.asarray(diode.terminal_current(model, grid))
    deriv = diode.iv_derivatives(model, grid)
    table = Table(columns=["voltage_v", "current_a", "di_dv_s",
                           "d2i_dv2_s_per_v"])
    for v, i, g1, g2 in zip(grid, current, np.asarray(deriv.di_dv),
                            np.asarray(deriv.d2i_dv2)):
        table.append([float(v), float(i), float(g1), float(g2)])
    if not quiet:
        try:
            opt = diode.optimal_bias_static(
                model, (float(grid[0]), float(grid[-1])))
            print(f"static optimum: {opt.terminal_voltage:.4f} V, "
                  f"{opt.bias_current * 1e3:.3f} mA")
        except SelfmixError as exc:
            print(f"static optimum: none ({exc})")
    return table


BIAS_SWEEP_SCHEMA = Schema(
    **_DIODE_KEYS, **_CHAIN_KEYS,
    bias_start_v=(float, 0.0),
    bias_stop_v=(float, 0.8),
    bias_step_v=(float, 0.05),
    power_start_dbm=(float, -60.0),
    power_stop_dbm=(float, -10.0),
    power_step_dbm=(float, 5.0),
    f1_hz=(float, 37.5e9),
    f2_hz=(float, 38.5e9),
    weaker_tone_offset_db=(float, -5.0),
)


def cmd_bias_sweep(cfg: dict) -> Table:
    chain = _chain_from_config(cfg)
    bias = _grid(cfg["bias_start_v"], cfg["bias_stop_v"], cfg["bias_step_v"],
                 "bias")
    power = _grid(cfg["power_start_dbm"], cfg["power_stop_dbm"],
                  cfg["power_step_dbm"], "power")
    sweep = diode.bias_power_sweep(chain, bias, power,
                                   (cfg["f1_hz"], cfg["f2_hz"]),
                                   cfg["weaker_tone_offset_db"])
    return sweep.to_table()


FREQ_SWEEP_SCHEMA = Schema(
    **_DIODE_KEYS, **_CHAIN_KEYS,
    bias_start_v=(float, 0.0),
    bias_stop_v=(float, 0.8),
    bias_step_v=(float, 0.05),
    center_start_hz=(float, 34e9),
    center_stop_hz=(float, 38e9),
    center_step_hz=(float, 1e9),
    spacing_hz=(float, 1e9),
    power1_dbm=(float, -40.0),
    power2_dbm=(float, -45.0),
)


def cmd_freq_sweep(cfg: dict) -> Table:
    chain = _chain_from_config(cfg)
    bias = _grid(cfg["bias_start_v"], cfg["bias_stop_v"], cfg["bias_step_v"],
                 "bias")
    centers = _grid(cfg["center_start_hz"], cfg["center_stop_hz"],
                    cfg["center_step_hz"], "center frequency")
    sweep = diode.bias_frequency_sweep(
        chain, bias, centers, cfg["spacing_hz"],
        (cfg["power1_dbm"], cfg["power2_dbm"]))
    return sweep.to_table()


def _grid(start: float, stop: float, step: float, name: str) -> list[float]:
    if step <= 0.0 or stop < start:
        raise ConfigError(f"need {name} stop >= start and step > 0")
    count = int(round((stop - start) / step)) + 1
    return [start + step * k for k in range(count)]


ARRAY_FACTOR_SCHEMA = Schema(
    **_GEOMETRY_KEYS, **_CUT_KEYS,
    f1_hz=(float, 37.5e9),
    f2_hz=(float, 38.5e9),
    rf_freq_hz=(float, 38.5e9),
)


def cmd_array_factor(cfg: dict, quiet: bool) -> Table:
    geometry = _geometry_from_config(cfg)
    theta_deg = _theta_grid_deg(cfg["theta_start_deg"], cfg["theta_stop_deg"],
                                cfg["theta_step_deg"])
    theta = np.radians(theta_deg)
    phi = math.radians(cfg["phi_cut_deg"])
    if not quiet and not cfg["geometry_file"]:
        delta_f = abs(cfg["f1_hz"] - cfg["f2_hz"])
        for pitch, count, axis in ((cfg["dx_m"], cfg["nx"], "x"),
                                   (cfg["dy_m"], cfg["ny"], "y")):
            if count > 1:
                e_if = arrays.effective_spacing(pitch, delta_f,
                                                cfg["rf_freq_hz"])
                e_rf = pitch * cfg["rf_freq_hz"] / SPEED_OF_LIGHT
                print(f"{axis}-pitch {pitch * 1e3:.1f} mm: effective IF "
                      f"spacing {e_if:.4f} wavelengths vs {e_rf:.3f} at RF")
    af_if = arrays.if_array_factor_cut(geometry, cfg["f1_hz"], cfg["f2_hz"],
                                       theta, phi)
    af_rf = arrays.rf_array_factor_cut(geometry, cfg["rf_freq_hz"], theta, phi)
    table = Table(columns=["theta_deg", "phi_deg", "af_if", "af_rf",
                           "af_if_db", "af_rf_db"])
    for td, a_if, a_rf in zip(theta_deg, af_if, af_rf):
        table.append([float(td), cfg["phi_cut_deg"], float(a_if), float(a_rf),
                      _db20(a_if), _db20(a_rf)])
    return table


def _db20(x: float) -> float:
    from .units import amplitude_ratio_to_db
    return amplitude_ratio_to_db(float(x))


PATTERN_SCHEMA = Schema(
    **_GEOMETRY_KEYS, **_CUT_KEYS,
    f1_hz=(float, 37.5e9),
    f2_hz=(float, 38.5e9),
    rf_freq_hz=(float, 38.5e9),
    element_kind=(str, "cos_q"),
    cos_exponent=(float, 1.0),
    beam_tilt_deg=(float, 30.0),
    beam_width_deg=(float, 20.0),
    pattern_file_1=(str, ""),
    pattern_file_2=(str, ""),
)


def cmd_pattern(cfg: dict) -> Table:
    geometry = _geometry_from_config(cfg)
    theta_deg = _theta_grid_deg(cfg["theta_start_deg"], cfg["theta_stop_deg"],
                                cfg["theta_step_deg"])
    theta = np.radians(theta_deg)
    phi = math.radians(cfg["phi_cut_deg"])
    if cfg["pattern_file_1"] or cfg["pattern_file_2"]:
        if not (cfg["pattern_file_1"] and cfg["pattern_file_2"]):
            raise ConfigError("supply both pattern_file_1 and pattern_file_2 "
                              "or neither")
        c1 = patterns.read_pattern_csv(cfg["pattern_file_1"], cfg["f1_hz"], phi)
        c2 = patterns.read_pattern_csv(cfg["pattern_file_2"], cfg["f2_hz"], phi)
    else:
        element = _element_pattern(cfg)
        c1 = patterns.sample_pattern(element(cfg["f1_hz"]), theta, phi)
        c2 = patterns.sample_pattern(element(cfg["f2_hz"]), theta, phi)
    sm = patterns.self_mix_pattern(c1, c2).normalized()
    af_if = arrays.if_array_factor_cut(geometry, cfg["f1_hz"], cfg["f2_hz"],
                                       sm.theta_samples, phi)
    af_rf = arrays.rf_array_factor_cut(geometry, cfg["rf_freq_hz"],
                                       sm.theta_samples, phi)
    table = Table(columns=["theta_deg", "gain_db", "af_if", "af_rf",
                           "total_if_db", "total_rf_db"])
    for t, g, a_if, a_rf in zip(sm.theta_samples, sm.gains, af_if, af_rf):
        table.append([math.degrees(float(t)), _db20(g), float(a_if),
                      float(a_rf), _db20(g * a_if), _db20(g * a_rf)])
    return table


def _element_pattern(cfg: dict) -> Callable[[float], patterns.AnalyticPattern]:
    kind = cfg["element_kind"]
    if kind == "isotropic":
        return patterns.AnalyticPattern.isotropic
    if kind == "cos_q":
        return lambda f: patterns.AnalyticPattern.cos_q(cfg["cos_exponent"], f)
    if kind == "two_beam":
        return lambda f: patterns.AnalyticPattern.two_beam(
            math.radians(cfg["beam_tilt_deg"]),
            math.radians(cfg["beam_width_deg"]), f)
    raise ConfigError(f"unknown element_kind {kind!r} "
                      "(isotropic, cos_q, two_beam)")


LINK_BUDGET_SCHEMA = Schema(
    tx_power1_dbm=(float, 0.0),
    tx_power2_dbm=(float, 5.0),
    f1_hz=(float, 34e9),
    f2_hz=(float, 36.5e9),
    tx_gain_db=(float, 25.0),
    distance_m=(float, 1.5),
    rx_directivity_db=(float, 0.0),
    eta1_db=(float, math.nan),  # nan -> use the built-in default table
    eta2_db=(float, math.nan),
    lna_gain_db=(float, 25.0),
    conversion_gain_db=(float, math.nan),  # nan -> calibrate via simulation
    combiner_gain_db=(float, 0.0),
    if_amp_gain_db=(float, 0.0),
    cable_loss_db=(float, 0.0),
)


def cmd_link_budget(cfg: dict, quiet: bool) -> Table:
    etas = []
    for key, freq_key in (("eta1_db", "f1_hz"), ("eta2_db", "f2_hz")):
        eta = cfg[key]
        if math.isnan(eta):
            eta = linkbudget.default_total_efficiency_db(cfg[freq_key])
        etas.append(eta)
    rx = []
    for ptx, f, eta in ((cfg["tx_power1_dbm"], cfg["f1_hz"], etas[0]),
                        (cfg["tx_power2_dbm"], cfg["f2_hz"], etas[1])):
        params = linkbudget.LinkBudgetParams(
            tx_power_dbm=ptx, tx_gain_db=cfg["tx_gain_db"],
            distance_m=cfg["distance_m"], frequency_hz=f,
            rx_directivity_db=cfg["rx_directivity_db"],
            total_efficiency_db=eta)
        rx.append(linkbudget.friis_rx_power(params))
    conversion = cfg["conversion_gain_db"]
    if math.isnan(conversion):
        conversion = linkbudget.calibrate_conversion_gain(
            diode.default_chain(lna_gain_db=cfg["lna_gain_db"]))
        if not quiet:
            print(f"calibrated conversion constant: {conversion:.3f} dB")
    chain = linkbudget.ChainSpec(
        lna_gain_db=cfg["lna_gain_db"], conversion_gain_db=conversion,
        combiner_gain_db=cfg["combiner_gain_db"],
        if_amp_gain_db=cfg["if_amp_gain_db"],
        cable_loss_db=cfg["cable_loss_db"])
    if_out = linkbudget.chain_output_power((rx[0], rx[1]), chain)
    table = Table(columns=["frequency_hz", "tx_power_dbm", "eta_tot_db",
                           "rx_power_dbm", "if_output_dbm"])
    table.append([cfg["f1_hz"], cfg["tx_power1_dbm"], etas[0], rx[0], if_out])
    table.append([cfg["f2_hz"], cfg["tx_power2_dbm"], etas[1], rx[1], if_out])
    return table


def cmd_validate(out: str | None, fmt: str, quiet: bool) -> int:
    results = validation.run_all()
    for r in results:
        if not quiet or r.status == "FAIL":
            print(f"{r.status:4s} {r.name}")
            print(f"     {r.detail}")
    failures = [r for r in results if not r.note and not r.passed]
    if out is not None:
        table = Table(columns=["status", "name", "detail"])
        for r in results:
            table.append([r.status, r.name, r.detail])
        table.write(out, fmt)
    if not quiet:
        notes = sum(1 for r in results if r.note)
        print(f"{len(results) - len(failures) - notes} passed, "
              f"{len(failures)} failed, {notes} known deviations noted")
    return 3 if failures else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfmix",
        description="Self-mixing receive-array simulations: spectra, diode "
                    "bias, array factors, patterns and link budgets.",
        epilog=_EPILOG)
    sub = parser.add_subparsers(dest="command", required=True)

    subcommands = [
        ("spectrum", "two-tone / carrier-plus-band self-mixed spectrum demo"),
        ("diode-iv", "diode I-V curve with first and second derivatives"),
        ("bias-sweep", "IF power over (bias voltage, input power) grid"),
        ("freq-sweep", "IF power over (bias voltage, centre frequency) grid"),
        ("array-factor", "IF and RF array factor cuts for a layout"),
        ("pattern", "element pattern products and total receive patterns"),
        ("link-budget", "Friis receive powers and chain IF output"),
        ("validate", "run the oracle-equivalence and anchor self-checks"),
    ]
    for name, help_text in subcommands:
        p = sub.add_parser(name, help=help_text, epilog=_EPILOG)
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--quiet", action="store_true",
                       help="suppress informational prints")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            if args.config is not None:
                raise ConfigError("validate takes no config file")
            return cmd_validate(args.out, args.format, args.quiet)
        if args.command == "spectrum":
            table = cmd_spectrum(_load_config(args.config, SPECTRUM_SCHEMA))
        elif args.command == "diode-iv":
            table = cmd_diode_iv(_load_config(args.config, DIODE_IV_SCHEMA),
                                 args.quiet)
        elif args.command == "bias-sweep":
            table = cmd_bias_sweep(_load_config(args.config, BIAS_SWEEP_SCHEMA))
        elif args.command == "freq-sweep":
            table = cmd_freq_sweep(_load_config(args.config, FREQ_SWEEP_SCHEMA))
        elif args.command == "array-factor":
            table = cmd_array_factor(_load_config(args.config,
                                                  ARRAY_FACTOR_SCHEMA),
                                     args.quiet)
        elif args.command == "pattern":
            table = cmd_pattern(_load_config(args.config, PATTERN_SCHEMA))
        elif args.command == "link-budget":
            table = cmd_link_budget(_load_config(args.config,
                                                 LINK_BUDGET_SCHEMA),
                                    args.quiet)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command}")
        _write_output(table, args.out, args.format, args.quiet)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SelfmixError, ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:  # console script wrapper
    sys.exit(main())
