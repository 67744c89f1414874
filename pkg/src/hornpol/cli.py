"""Command-line front end: ``hornpol <subcommand> [options]``.

Every subcommand can read defaults from the section of the same name in a
JSON document passed with ``--config``; explicit flags override it.  Exit
status is 0 on success, 2 on configuration, domain or parse errors and 3 when
a result is numerically undefined.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from .errors import ConfigError, DomainError, GridFormatError, HornpolError, NumericalError
from .farfield import Pattern, load_grid, pol_content, synthetic_grid
from .fresnel import DielectricSlab, phase_offsets, slab_reflection
from .herald import DetectorModel, PairSource, estimate_efficiency, simulate, trigger_rotated
from .phase import DEFAULT_BINS
from .pipeline import PipelineConfig, _build, analyze_traces, run_pipeline, tile_bands
from .synth import (
    DetectorTrace,
    InterferometerConfig,
    ModeAmplitude,
    ModeAmplitudeTable,
    Orientation,
    frequency_grid,
    mode_table_from_polarization,
    synthesize_trace,
)
from .waveguide import ModeId, RectangularGuide, enumerate_modes, propagation_constant

GHZ = 1e9


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{float(v):.9g}"
    return str(v)


def _write_csv(path: str | None, header: Sequence[str], rows) -> None:
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(path, f"cannot read config: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(path, "top level must be an object")
    return data


def _section(args, name: str) -> dict[str, Any]:
    sec = _load_config(args.config).get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(name, "section must be an object")
    return dict(sec)


def _pick(flag, section: dict, key: str, default=None):
    """Flag value if given, else the config entry, else ``default``."""
    if flag is not None:
        return flag
    return section.get(key, default)


def _guide(args, sec) -> RectangularGuide:
    a = _pick(args.a_um, sec, "a_um", 800.0)
    b = _pick(args.b_um, sec, "b_um", 400.0)
    return RectangularGuide(a * 1e-6, b * 1e-6)


def _slab(args, sec) -> DielectricSlab:
    return DielectricSlab(
        _pick(args.n_index, sec, "n_index", 3.416),
        _pick(args.t_mm, sec, "t_mm", 3.415) * 1e-3,
        _pick(args.alpha_deg, sec, "alpha_deg", 45.0),
    )


# ---------------------------------------------------------------- modes
def cmd_modes(args) -> int:
    sec = _section(args, "modes")
    guide = _guide(args, sec)
    sweep = _pick(args.sweep, sec, "sweep_ghz")
    freq = _pick(args.freq_ghz, sec, "freq_ghz")
    if sweep is not None:
        freqs = frequency_grid(sweep[0] * GHZ, sweep[1] * GHZ, sweep[2] * GHZ)
        if freqs[-1] < sweep[1] * GHZ - 1e-3 * sweep[2] * GHZ:
            freqs = np.append(freqs, sweep[1] * GHZ)
    elif freq is not None:
        freqs = np.array([freq * GHZ])
    else:
        raise ConfigError("modes", "give --freq-ghz or --sweep")
    max_cutoff = _pick(args.max_cutoff_ghz, sec, "max_cutoff_ghz")
    limit = (max_cutoff * GHZ) if max_cutoff is not None else float(freqs.max())
    modes = enumerate_modes(guide, limit * (1 + 1e-12))
    header = ["mode", "family", "m", "n", "f_c_GHz", "beta_rad_per_m", "evanescent"]
    rows = []
    for f in freqs:
        for md in modes:
            d = propagation_constant(guide, md, float(f))
            row = [str(md), md.family.value, md.m, md.n, d.f_c / GHZ, d.beta, d.evanescent]
            rows.append(([f / GHZ] if sweep is not None else []) + row)
    _write_csv(args.output, (["f_GHz"] if sweep is not None else []) + header, rows)
    return 0


# ---------------------------------------------------------------- fresnel
def cmd_fresnel(args) -> int:
    sec = _section(args, "fresnel")
    slab = _slab(args, sec)
    freqs = frequency_grid(_pick(args.start_ghz, sec, "start_ghz", 215.0) * GHZ,
                           _pick(args.stop_ghz, sec, "stop_ghz", 580.0) * GHZ,
                           _pick(args.step_ghz, sec, "step_ghz", 0.025) * GHZ)
    refl = slab_reflection(slab, freqs)
    dphi = phase_offsets(refl).delta_phi
    rows = zip(freqs / GHZ, refl.r_par.real, refl.r_par.imag, refl.r_perp.real, refl.r_perp.imag, dphi)
    _write_csv(args.output, ["f_GHz", "re_r_par", "im_r_par", "re_r_perp", "im_r_perp", "delta_phi_rad"], rows)
    return 0


# ---------------------------------------------------------------- synth
def _table_from_section(sec: dict) -> ModeAmplitudeTable:
    spec = sec.get("table", {"crosspol_fraction": 0.05})
    if isinstance(spec, list):
        entries = []
        for i, row in enumerate(spec):
            path = f"synth.table[{i}]"
            if not isinstance(row, dict):
                raise ConfigError(path, "expected an object")
            try:
                entries.append(ModeAmplitude(
                    float(row["amp_E"]), float(row["amp_H"]),
                    float(row.get("phase_par", 0.0)), float(row.get("phase_perp", 0.0)),
                    tuple(float(c) for c in row.get("corr", (1.0, 1.0, 1.0, 1.0))),
                    ModeId.parse(row["mode"]) if "mode" in row else None))
            except KeyError as exc:
                raise ConfigError(f"{path}.{exc.args[0]}", "missing field") from exc
            except (TypeError, ValueError) as exc:
                raise ConfigError(path, str(exc)) from exc
        try:
            return ModeAmplitudeTable(tuple(entries))
        except DomainError as exc:
            raise ConfigError("synth.table", str(exc)) from exc
    if not isinstance(spec, dict):
        raise ConfigError("synth.table", "expected a list of modes or a polarization object")
    try:
        return mode_table_from_polarization(
            float(spec.get("crosspol_fraction", 0.05)), bool(spec.get("multimode", False)),
            float(spec.get("higher_order_fraction", 0.5)), float(spec.get("phase_par", 0.0)))
    except DomainError as exc:
        raise ConfigError("synth.table", str(exc)) from exc


def cmd_synth(args) -> int:
    sec = _section(args, "synth")
    table = _table_from_section(sec)
    if args.crosspol is not None:
        table = mode_table_from_polarization(args.crosspol, args.multimode, 0.5)
    interf = _build(InterferometerConfig, sec.get("interferometer", {}), "synth.interferometer")
    if args.delta_l is not None:
        interf = InterferometerConfig(args.delta_l, interf.coupling, interf.asymmetry,
                                      interf.rolloff_tau, interf.rolloff_A0)
    slab = _slab(args, sec)
    guide = _guide(args, sec) if _pick(args.gate, sec, "gate", True) else None
    grid = frequency_grid(_pick(args.start_ghz, sec, "start_ghz", 215.0) * GHZ,
                          _pick(args.stop_ghz, sec, "stop_ghz", 580.0) * GHZ,
                          _pick(args.step_ghz, sec, "step_ghz", 0.025) * GHZ)
    orient = Orientation(_pick(args.orientation, sec, "orientation", "E"))
    tr = synthesize_trace(table, interf, slab, grid, orient, guide)
    _write_csv(args.output, ["f_GHz", "I_dc_A", "orientation"],
               ((f / GHZ, i, orient.value) for f, i in zip(tr.frequencies, tr.currents)))
    return 0


def read_trace(path: str) -> DetectorTrace:
    """Parse a trace CSV written by ``synth``."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["f_GHz", "I_dc_A", "orientation"]:
                raise GridFormatError(f"{path}: expected header f_GHz,I_dc_A,orientation", 1)
            f, cur, orient = [], [], None
            for lineno, row in enumerate(reader, start=2):
                if len(row) != 3:
                    raise GridFormatError(f"{path}: expected 3 columns", lineno)
                try:
                    f.append(float(row[0]) * GHZ)
                    cur.append(float(row[1]))
                except ValueError as exc:
                    raise GridFormatError(f"{path}: {exc}", lineno) from exc
                orient = row[2]
    except OSError as exc:
        raise ConfigError(path, f"cannot read trace: {exc.strerror}") from exc
    if not f:
        raise GridFormatError(f"{path}: no samples")
    return DetectorTrace(np.array(f), np.array(cur), Orientation(orient))


# ---------------------------------------------------------------- analyze
def cmd_analyze(args) -> int:
    sec = _section(args, "analyze")
    paths = [_pick(args.e_trace, sec, "e_trace"), _pick(args.h_trace, sec, "h_trace")]
    if None in paths:
        raise ConfigError("analyze", "both --e-trace and --h-trace are required")
    tE, tH = (read_trace(pth) for pth in paths)
    guide = _guide(args, sec)
    f = tE.frequencies
    width = _pick(args.band_width_ghz, sec, "band_width_ghz")
    if width is not None:
        bands = tile_bands(f[0], f[-1], guide, width * GHZ, width * GHZ)
    else:
        bands = tile_bands(f[0], f[-1], guide)
    if not bands:
        raise ConfigError("analyze.band_width_ghz", "no complete band fits inside the trace")
    bins = int(_pick(args.bins, sec, "bins", DEFAULT_BINS))
    results = analyze_traces(tE, tH, bands, guide, bins, taper=bool(_pick(args.taper, sec, "taper", False)))
    _write_csv(args.output, ["center_GHz", "pos", "neg", "ratio", "beta_deg", "beta_mirror_deg"],
               ((r.center / GHZ, r.pos, r.neg, r.ratio, r.beta, r.beta_mirror) for r in results))
    hist_dir = _pick(args.histograms, sec, "histograms")
    if hist_dir:
        _write_histograms(hist_dir, results)
    return 0


def _write_histograms(directory: str, results) -> None:
    os.makedirs(directory, exist_ok=True)
    for r in results:
        edges = r.histogram.bin_edges
        _write_csv(os.path.join(directory, f"hist_{r.center / GHZ:.3f}GHz.csv"),
                   ["bin_lo", "bin_hi", "count"], zip(edges[:-1], edges[1:], r.histogram.counts))


# ---------------------------------------------------------------- pipeline
def cmd_pipeline(args) -> int:
    sec = _section(args, "pipeline")
    data = json.loads(json.dumps(sec))
    sweep = data.setdefault("sweep", {})
    if args.start_ghz is not None:
        sweep["start"] = args.start_ghz * GHZ
    if args.stop_ghz is not None:
        sweep["stop"] = args.stop_ghz * GHZ
    if args.step_ghz is not None:
        sweep["step"] = args.step_ghz * GHZ
    table = data.setdefault("table", {})
    if args.crosspol is not None:
        table["crosspol_fraction"] = args.crosspol
    if args.higher_order_fraction is not None:
        table["higher_order_fraction"] = args.higher_order_fraction
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = PipelineConfig.from_dict(data)
    if args.dump_config:
        with open(args.dump_config, "w", encoding="utf-8") as fh:
            json.dump({"pipeline": cfg.to_dict()}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    res = run_pipeline(cfg)
    _write_csv(args.output,
               ["center_GHz", "width_GHz", "n_modes", "pos", "neg", "ratio", "beta_deg", "beta_mirror_deg",
                "neg_mass"],
               ((r.center / GHZ, r.width / GHZ, r.n_modes, r.pos, r.neg, r.ratio, r.beta, r.beta_mirror,
                 r.neg_mass) for r in res.bands))
    if args.histograms:
        _write_histograms(args.histograms, res.bands)
    return 0


# ---------------------------------------------------------------- farfield
def cmd_farfield(args) -> int:
    sec = _section(args, "farfield")
    path = _pick(args.input, sec, "input")
    if path is not None:
        grid = load_grid(path)
        freq = grid.frequency
    else:
        freq_ghz = _pick(args.freq_ghz, sec, "freq_ghz")
        grid = synthetic_grid(
            _pick(args.beam_width_deg, sec, "beam_width_deg", 15.0),
            _pick(args.crosspol, sec, "crosspol", 0.05),
            _pick(args.phase_offset_rad, sec, "phase_offset_rad", 0.0),
            Pattern(_pick(args.pattern, sec, "pattern", "fundamental")),
        )
        freq = None if freq_ghz is None else freq_ghz * GHZ
    pc = pol_content(grid, solid_angle=bool(_pick(args.solid_angle, sec, "solid_angle", False)))
    _write_csv(args.output, ["f_GHz", "e_cpol", "e_crpol", "mean_phase_diff_rad", "beta_deg"],
               [(math.nan if freq is None else freq / GHZ, pc.e_cpol, pc.e_crpol, pc.mean_phase_diff, pc.beta_deg)])
    return 0


# ---------------------------------------------------------------- herald
def cmd_herald(args) -> int:
    sec = _section(args, "herald")
    pairs = int(_pick(args.pairs, sec, "pairs", 100_000))
    rate = float(_pick(args.pair_rate, sec, "pair_rate", 1e3))
    source = PairSource(_pick(args.fp_ghz, sec, "fp_ghz", 300.0) * GHZ,
                        _pick(args.fs_ghz, sec, "fs_ghz", 250.0) * GHZ, rate)
    det = DetectorModel(_pick(args.eta_det, sec, "eta_det", 0.5), _pick(args.bg_det_hz, sec, "bg_det_hz", 0.0))
    trig = DetectorModel(_pick(args.eta_trig, sec, "eta_trig", 0.5), _pick(args.bg_trig_hz, sec, "bg_trig_hz", 0.0))
    seed = int(_pick(args.seed, sec, "seed", 0))
    window = _pick(args.window_ns, sec, "window_ns", 1.0) * 1e-9
    duration = pairs / rate if rate > 0 else 1.0
    res = simulate(source, det, trig, duration, window, seed, n_pairs=pairs)
    eta, err = estimate_efficiency(res)
    out = {
        "n_coinc": res.n_coinc,
        "n2": res.n_2,
        "eta_hat": eta,
        "std_err": err,
        "seed": seed,
        "accidental_expected": res.accidental_expected,
        "pileup": res.pileup,
        "f_i_GHz": source.f_i / GHZ,
        "trigger_rotated": trigger_rotated(source, _guide(args, sec)),
    }
    text = json.dumps(out, indent=2) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hornpol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, guide=False, slab=False):
        sp.add_argument("--config", help="JSON document with per-subcommand sections")
        sp.add_argument("-o", "--output", help="output path (default: stdout)")
        if guide:
            sp.add_argument("--a-um", type=float, help="broad wall width in um (default 800)")
            sp.add_argument("--b-um", type=float, help="narrow wall height in um (default 400)")
        if slab:
            sp.add_argument("--n-index", type=float, help="slab refractive index (default 3.416)")
            sp.add_argument("--t-mm", type=float, help="slab thickness in mm (default 3.415)")
            sp.add_argument("--alpha-deg", type=float, help="incidence angle in degrees (default 45)")

    def band(sp):
        sp.add_argument("--start-ghz", type=float)
        sp.add_argument("--stop-ghz", type=float)
        sp.add_argument("--step-ghz", type=float)

    sp = sub.add_parser("modes", help="mode catalog with cutoffs and propagation constants")
    common(sp, guide=True)
    sp.add_argument("--freq-ghz", type=float)
    sp.add_argument("--sweep", type=float, nargs=3, metavar=("START", "STOP", "STEP"), help="GHz")
    sp.add_argument("--max-cutoff-ghz", type=float, help="also list evanescent modes up to this cutoff")
    sp.set_defaults(func=cmd_modes)

    sp = sub.add_parser("fresnel", help="slab reflection coefficients over a sweep")
    common(sp, slab=True)
    band(sp)
    sp.set_defaults(func=cmd_fresnel)

    sp = sub.add_parser("synth", help="synthesize one detector-current trace")
    common(sp, guide=True, slab=True)
    band(sp)
    sp.add_argument("--orientation", choices=[o.value for o in Orientation])
    sp.add_argument("--crosspol", type=float, help="cross-polar power fraction (overrides the config table)")
    sp.add_argument("--multimode", action="store_true", help="with --crosspol, use the five-mode table")
    sp.add_argument("--delta-l", type=float, help="delay length in m")
    sp.add_argument("--gate", action=argparse.BooleanOptionalAction, default=None,
                    help="switch modes on only above cutoff (default on)")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("analyze", help="correlator histograms from an E and an H trace")
    common(sp, guide=True)
    sp.add_argument("--e-trace")
    sp.add_argument("--h-trace")
    sp.add_argument("--band-width-ghz", type=float, help="fixed band width (default: 10/20 GHz by cutoff)")
    sp.add_argument("--bins", type=int)
    sp.add_argument("--taper", action=argparse.BooleanOptionalAction, default=None)
    sp.add_argument("--histograms", help="directory for per-band histogram CSVs")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("pipeline", help="full sweep: synth both orientations and analyze")
    common(sp)
    band(sp)
    sp.add_argument("--crosspol", type=float)
    sp.add_argument("--higher-order-fraction", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--dump-config", help="write the resolved configuration as JSON")
    sp.add_argument("--histograms", help="directory for per-band histogram CSVs")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("farfield", help="co/cross-polar content of a far-field grid")
    common(sp)
    sp.add_argument("--input", help="grid CSV; omit for a synthetic grid")
    sp.add_argument("--synthetic", action="store_true", help="use a synthetic grid (default without --input)")
    sp.add_argument("--beam-width-deg", type=float)
    sp.add_argument("--crosspol", type=float)
    sp.add_argument("--phase-offset-rad", type=float)
    sp.add_argument("--pattern", choices=[p.value for p in Pattern])
    sp.add_argument("--freq-ghz", type=float)
    sp.add_argument("--solid-angle", action=argparse.BooleanOptionalAction, default=None)
    sp.set_defaults(func=cmd_farfield)

    sp = sub.add_parser("herald", help="heralded efficiency Monte Carlo")
    common(sp, guide=True)
    sp.add_argument("--pairs", type=int)
    sp.add_argument("--pair-rate", type=float, help="pairs per second (default 1000)")
    sp.add_argument("--eta-det", type=float)
    sp.add_argument("--eta-trig", type=float)
    sp.add_argument("--bg-det-hz", type=float)
    sp.add_argument("--bg-trig-hz", type=float)
    sp.add_argument("--window-ns", type=float)
    sp.add_argument("--fp-ghz", type=float)
    sp.add_argument("--fs-ghz", type=float)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_herald)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"hornpol: numerical error: {exc}", file=sys.stderr)
        return 3
    except (HornpolError, ValueError, KeyError) as exc:
        print(f"hornpol: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
