"""Scenario execution, parameter sweeps and the built-in figure sweeps."""

from __future__ import annotations

import csv
import io
import logging
import math
from pathlib import Path

from . import __version__, oracles
from .beamsplitter import apply_bs_general, coherent_transform
from .config import ScenarioConfig, SweepSpec, validate_sweep_spec
from .fock import (
    TwoModeState,
    coherent_amplitudes,
    fidelity,
    fock_amplitudes,
    fock_pair,
    product_state,
)
from .sampler import sample_counts
from .statistics import summarize, undefined_as_zero

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "mean_c", "mean_d", "var_c", "q_c", "g2_c", "g2_cross",
    "q_c_oracle", "g2_c_oracle",
)

# The alpha grid for the Fock+coherent figures is a choice (0.05 steps on [0, 3]).
FIGURE_SPECS = {
    2: {
        "base": {"input_kind": "fock_fock", "theta": "pi/4"},
        "series": {"variable": "n", "values": [0, 1, 2, 5, 10]},
        "sweep": {"variable": "m", "start": 0, "stop": 30, "step": 1},
    },
    4: {
        "base": {"input_kind": "fock_coherent", "theta": "pi/4"},
        "series": {"variable": "n", "values": [0, 1, 2, 5, 10]},
        "sweep": {"variable": "alpha_modulus", "start": 0, "stop": 3, "step": 0.05},
    },
}
# g2 figures share the sweeps of their Q counterparts; every CSV has both columns.
FIGURE_SPECS[3] = FIGURE_SPECS[2]
FIGURE_SPECS[5] = FIGURE_SPECS[4]


def build_input_state(config: ScenarioConfig) -> TwoModeState:
    c1, c2 = config.resolved_cutoffs()
    kind = config.input_kind
    if kind == "fock_fock":
        return fock_pair(config.n, config.m, c1, c2)
    if kind == "fock_coherent":
        return product_state(fock_amplitudes(config.n, c1), coherent_amplitudes(config.alpha, c2))
    return product_state(
        coherent_amplitudes(config.alpha, c1), coherent_amplitudes(config.beta, c2)
    )


def oracle_values(config: ScenarioConfig) -> dict:
    """Closed-form statistics for the configured input, keyed like the stats block."""
    bs = config.bs
    kind = config.input_kind
    out: dict = {}
    if kind == "coherent_coherent":
        summary = oracles.coherent_stats(oracles.CoherentCoherentParams(config.alpha, config.beta, bs))
        for name, mode in (("first", summary.first), ("second", summary.second)):
            out[name] = {
                "mean": mode.mean, "variance": mode.variance,
                "mandel_q": mode.mandel_q, "g2": mode.g2,
            }
        out["g2_cross"] = summary.g2_cross
        gc, gd = coherent_transform(config.alpha, config.beta, bs)
        out["output_amplitudes"] = [[gc.real, gc.imag], [gd.real, gd.imag]]
        return out
    if kind == "fock_fock":
        p = oracles.FockFockParams(config.n, config.m, bs)
        funcs = (oracles.fock_mean, oracles.fock_variance, oracles.fock_q, oracles.fock_g2)
    else:
        p = oracles.HybridParams(config.n, config.alpha, bs)
        funcs = (oracles.hybrid_mean, oracles.hybrid_variance, oracles.hybrid_q, oracles.hybrid_g2)
    for name, mode in (("first", 0), ("second", 1)):
        out[name] = {key: f(p, mode) for key, f in zip(("mean", "variance", "mandel_q", "g2"), funcs)}
    if kind == "fock_coherent":
        out["paper_verbatim"] = {
            "mandel_q_first": oracles.hybrid_q_paper_verbatim(p),
            "g2_first": oracles.hybrid_g2_paper_verbatim(p),
        }
    return out


def _delta(a, b):
    if a is None or b is None:
        return None if a is None and b is None else math.inf
    return abs(a - b)


def coherent_reference_state(config: ScenarioConfig) -> TwoModeState:
    """Product coherent state with the transformed amplitudes, on the config's grid."""
    c1, c2 = config.resolved_cutoffs()
    gc, gd = coherent_transform(config.alpha, config.beta, config.bs)
    return product_state(coherent_amplitudes(gc, c1), coherent_amplitudes(gd, c2))


def evolve(config: ScenarioConfig) -> TwoModeState:
    return apply_bs_general(build_input_state(config), config.bs)


def run_scenario(config: ScenarioConfig) -> dict:
    """Construct, evolve and analyse one scenario; returns a JSON-ready document."""
    out_state = evolve(config)
    summary = summarize(out_state)
    doc: dict = {
        "tool": "fockmix",
        "version": __version__,
        "config": config.to_dict(),
        "cutoffs": list(out_state.cutoffs),
        "norm_deficit": out_state.norm_deficit,
    }
    if "state" in config.outputs:
        amps = out_state.amplitudes
        doc["state"] = [
            [int(k), int(l), float(amps[k, l].real), float(amps[k, l].imag)]
            for k, l in zip(*amps.nonzero())
        ]
    if "stats" in config.outputs or "oracle" in config.outputs:
        doc["stats"] = summary.to_dict()
    if "oracle" in config.outputs:
        oracle = oracle_values(config)
        deltas = {}
        for name, mode in (("first", summary.first), ("second", summary.second)):
            deltas[name] = {
                key: _delta(getattr(mode, key), oracle[name][key])
                for key in ("mean", "variance", "mandel_q", "g2")
            }
        if config.input_kind == "coherent_coherent":
            deltas["g2_cross"] = _delta(summary.g2_cross, oracle["g2_cross"])
            oracle["fidelity"] = fidelity(out_state, coherent_reference_state(config))
        oracle["deltas"] = deltas
        finite = [v for mode in ("first", "second") for v in deltas[mode].values() if v is not None]
        oracle["max_delta"] = max(finite) if finite else None
        doc["oracle"] = oracle
    if "sample" in config.outputs:
        doc["sample"] = sample_counts(out_state, config.shots, config.seed).to_dict()
    return doc


def sweep_rows(spec: SweepSpec, undefined_zero: bool = False) -> tuple[list[str], list[list]]:
    """Header and raw rows (numbers or ``None``) of a sweep, in sweep order."""
    hybrid = spec.base.get("input_kind") == "fock_coherent"
    header = [spec.series_variable or "series", spec.sweep_variable, *CSV_COLUMNS]
    if hybrid:
        header.append("q_c_paper_verbatim")
    header.append("norm_deficit")

    rows = []
    for series_value, sweep_value, config in spec.points():
        out_state = evolve(config)
        summary = summarize(out_state)
        oracle = oracle_values(config)
        row = [
            series_value, sweep_value,
            summary.first.mean, summary.second.mean, summary.first.variance,
            summary.first.mandel_q, summary.first.g2, summary.g2_cross,
            oracle["first"]["mandel_q"], oracle["first"]["g2"],
        ]
        if hybrid:
            row.append(oracle["paper_verbatim"]["mandel_q_first"])
        row.append(out_state.norm_deficit)
        if undefined_zero:
            row = row[:2] + [undefined_as_zero(v) for v in row[2:]]
        rows.append(row)
    return header, rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


def format_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def run_sweep(spec: SweepSpec, out_path, undefined_zero: bool = False) -> Path:
    """Evaluate every sweep point and write the CSV to ``out_path``."""
    header, rows = sweep_rows(spec, undefined_zero)
    path = Path(out_path)
    path.write_bytes(format_csv(header, rows).encode("ascii"))
    log.info("wrote %d rows to %s", len(rows), path)
    return path


def figure_spec(which: int) -> SweepSpec:
    if which not in FIGURE_SPECS:
        raise ValueError(f"no built-in figure {which}; choose from {sorted(FIGURE_SPECS)}")
    return validate_sweep_spec(FIGURE_SPECS[which])


def run_figures(which, out_dir, undefined_zero: bool = False) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        run_sweep(figure_spec(w), out_dir / f"fig{w}.csv", undefined_zero) for w in which
    ]
