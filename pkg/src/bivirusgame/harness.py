"""Batch layer: config files, scenario runs, sweeps, and data export.

Configs are flat ``key = value`` text files (diff-friendly, trivially
parseable).  Recognized keys:

* model parameters: ``beta1 beta2 delta1 delta2 r1 r2 c1 c2 c_d q``
* integration: ``h t_max record_every conv_eps conv_window`` (optional)
* initial states: ``x0 = y1,y2,z_s,z1,z2`` (repeatable)
* output: ``out`` (directory), ``format`` (comma list of csv/json/svg)
* sweeps: ``axis = name,min,max,steps`` (one or two), ``targets``
  (comma list of equilibrium kinds to classify; empty for existence only)

Full-line comments start with ``#``.  Trajectory CSVs use the header
``t,y1,y2,z_s,z1,z2`` with 17 significant digits so doubles round-trip
losslessly; identical configs produce byte-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import _svg
from .equilibria import (Equilibrium, EquilibriumLine, coexistence_lines,
                         distance_to_line, distance_to_point,
                         enumerate_isolated, LINE_KINDS, POINT_KINDS)
from .errors import ConfigError, IntegrationError
from .integrate import SimConfig, Trajectory, integrate
from .model import (GAMMA_SLACK, ModelParams, State, in_gamma,
                    validate_params, vector_field_norm)
from .stability import StabilityReport, classify_line, classify_point

MODEL_KEYS = ("beta1", "beta2", "delta1", "delta2", "r1", "r2",
              "c1", "c2", "c_d", "q")
SIM_KEYS = ("h", "t_max", "record_every", "conv_eps", "conv_window")
FORMATS = ("csv", "json", "svg")

#: A terminal state within this max-norm distance of a candidate claims a match.
MATCH_TOL = 1e-2


@dataclass(frozen=True)
class ScenarioConfig:
    """One batch run: parameters, integration settings, initial states."""

    params: ModelParams
    sim: SimConfig
    initial_states: tuple[State, ...]
    outputs: Optional[str] = None
    formats: tuple[str, ...] = ("csv",)

    def __post_init__(self):
        if not self.initial_states:
            raise ValueError("at least one initial state is required")
        for x in self.initial_states:
            if not in_gamma(x, GAMMA_SLACK):
                from .errors import StateSpaceError

                raise StateSpaceError(
                    f"initial state {x} outside the invariant region")
        for f in self.formats:
            if f not in FORMATS:
                raise ValueError(f"unknown output format {f!r}")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.name not in MODEL_KEYS:
            raise ValueError(f"unknown sweep parameter {self.name!r}")
        if self.steps < 2:
            raise ValueError("a sweep axis needs at least 2 steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class SweepConfig:
    """Grid sweep over 1-2 model parameters with per-cell classification."""

    base: ScenarioConfig
    axes: tuple[SweepAxis, ...]
    classification_targets: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("sweeps support one or two axes")
        for t in self.classification_targets:
            if t not in POINT_KINDS + LINE_KINDS:
                raise ValueError(f"unknown classification target {t!r}")


def _parse_float(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"value for {key!r} is not a number: {raw!r}",
                          line_no, key) from None


def loads_config(text: str, strict: bool = False) -> Union[ScenarioConfig, SweepConfig]:
    """Parse a config from text; see the module docstring for the schema."""
    scalars: dict[str, float] = {}
    strings: dict[str, str] = {}
    states: list[State] = []
    axes: list[SweepAxis] = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line_no)
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key == "x0":
            parts = [s.strip() for s in raw.split(",")]
            if len(parts) != 5:
                raise ConfigError(f"x0 needs 5 comma-separated values, got {len(parts)}",
                                  line_no, key)
            states.append(State(*(_parse_float(s, key, line_no) for s in parts)))
        elif key == "axis":
            parts = [s.strip() for s in raw.split(",")]
            if len(parts) != 4:
                raise ConfigError("axis needs 'name,min,max,steps'", line_no, key)
            try:
                axes.append(SweepAxis(parts[0],
                                      _parse_float(parts[1], key, line_no),
                                      _parse_float(parts[2], key, line_no),
                                      int(parts[3])))
            except ValueError as exc:
                raise ConfigError(str(exc), line_no, key) from None
        elif key in ("out", "format", "targets"):
            strings[key] = raw
        elif key in MODEL_KEYS or key in SIM_KEYS:
            if key in scalars:
                raise ConfigError(f"duplicate key {key!r}", line_no, key)
            scalars[key] = _parse_float(raw, key, line_no)
        else:
            raise ConfigError(f"unknown key {key!r}", line_no, key)

    missing = [k for k in MODEL_KEYS if k not in scalars]
    if missing:
        raise ConfigError(f"missing required key {missing[0]!r}", key=missing[0])
    if not states:
        raise ConfigError("missing required key 'x0' (at least one initial state)",
                          key="x0")

    params = ModelParams(**{k: scalars[k] for k in MODEL_KEYS})
    report = validate_params(params, strict=strict)
    report.raise_if_errors()
    for check in report.warnings:
        warnings.warn(f"parameter check {check.name!r} failed: {check.detail}",
                      stacklevel=2)

    sim_kwargs = {k: scalars[k] for k in SIM_KEYS if k in scalars}
    if "record_every" in sim_kwargs:
        sim_kwargs["record_every"] = int(sim_kwargs["record_every"])
    sim = SimConfig(**sim_kwargs)

    formats = tuple(s.strip() for s in strings.get("format", "csv").split(",")
                    if s.strip())
    scenario = ScenarioConfig(params=params, sim=sim,
                              initial_states=tuple(states),
                              outputs=strings.get("out"), formats=formats)
    if axes:
        targets = tuple(s.strip() for s in strings.get("targets", "").split(",")
                        if s.strip())
        return SweepConfig(base=scenario, axes=tuple(axes),
                           classification_targets=targets)
    if "targets" in strings:
        raise ConfigError("'targets' is only meaningful together with 'axis'",
                          key="targets")
    return scenario


def load_config(path: Union[str, Path],
                strict: bool = False) -> Union[ScenarioConfig, SweepConfig]:
    return loads_config(Path(path).read_text(), strict=strict)


def write_config(cfg: Union[ScenarioConfig, SweepConfig]) -> str:
    """Canonical text form of a config; parses back to an equal config."""
    sweep = isinstance(cfg, SweepConfig)
    base = cfg.base if sweep else cfg
    lines = []
    for k in MODEL_KEYS:
        lines.append(f"{k} = {getattr(base.params, k)!r}")
    sim = base.sim
    lines.append(f"h = {sim.h!r}")
    lines.append(f"t_max = {sim.t_max!r}")
    lines.append(f"record_every = {sim.record_every}")
    lines.append(f"conv_eps = {sim.conv_eps!r}")
    lines.append(f"conv_window = {sim.conv_window!r}")
    for x in base.initial_states:
        lines.append(f"x0 = {x.y1!r},{x.y2!r},{x.z_s!r},{x.z1!r},{x.z2!r}")
    if base.outputs is not None:
        lines.append(f"out = {base.outputs}")
    lines.append(f"format = {','.join(base.formats)}")
    if sweep:
        for ax in cfg.axes:
            lines.append(f"axis = {ax.name},{ax.lo!r},{ax.hi!r},{ax.steps}")
        if cfg.classification_targets:
            lines.append(f"targets = {','.join(cfg.classification_targets)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: Union[ScenarioConfig, SweepConfig]) -> str:
    return hashlib.sha256(write_config(cfg).encode()).hexdigest()


@dataclass
class TrajectoryResult:
    """Outcome of integrating one initial state."""

    index: int
    initial: State
    trajectory: Optional[Trajectory]
    error: Optional[str]
    terminal: Optional[State]
    converged: bool
    matched_kind: Optional[str]
    matched_distance: float
    residual: Optional[float]
    report: Optional[StabilityReport]


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    equilibria: list[Equilibrium]
    lines: list[EquilibriumLine]
    trajectories: list[TrajectoryResult]
    files: dict[str, str]


def match_equilibrium(x: State, eqs: list[Equilibrium],
                      lines: list[EquilibriumLine]):
    """Nearest enumerated candidate to a state, by max-norm distance.

    Returns (kind, distance, candidate); the candidate only counts as a
    match when the distance is within :data:`MATCH_TOL`, which callers
    decide.  Lines measure distance to their whole constraint set.
    """
    best = (None, np.inf, None)
    for eq in eqs:
        if not eq.exists:
            continue
        d = distance_to_point(eq, x)
        if d < best[1]:
            best = (eq.kind, d, eq)
    for line in lines:
        if not line.exists:
            continue
        d = distance_to_line(line, x)
        if d < best[1]:
            best = (line.kind, d, line)
    return best


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Integrate every initial state and match terminals to equilibria.

    Integration failures are recorded per trajectory without aborting the
    siblings.  Each converged terminal is matched to the nearest
    enumerated fixed point or line and carries that candidate's stability
    classification; terminals farther than :data:`MATCH_TOL` from every
    candidate are reported unmatched with nearest-candidate diagnostics.
    Requested output files are written into ``cfg.outputs``.
    """
    eqs = enumerate_isolated(cfg.params)
    lines = coexistence_lines(cfg.params)
    results: list[TrajectoryResult] = []
    for idx, x0 in enumerate(cfg.initial_states):
        try:
            traj = integrate(cfg.params, x0, cfg.sim)
        except IntegrationError as exc:
            results.append(TrajectoryResult(
                idx, x0, None, str(exc), None, False, None, np.inf, None, None))
            continue
        terminal = traj.final_state
        kind, dist, candidate = match_equilibrium(terminal, eqs, lines)
        matched = kind is not None and dist <= MATCH_TOL
        report = None
        if matched:
            if isinstance(candidate, Equilibrium):
                report = classify_point(cfg.params, candidate)
            else:
                report = classify_line(cfg.params, candidate)
        results.append(TrajectoryResult(
            idx, x0, traj, None, terminal, traj.converged_at is not None,
            kind if matched else None, dist,
            vector_field_norm(cfg.params, terminal), report))

    result = ScenarioResult(cfg, eqs, lines, results, {})
    if cfg.outputs is not None:
        _write_scenario_outputs(result)
    return result


def _fmt17(v: float) -> str:
    return f"{v:.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    rows = ["t,y1,y2,z_s,z1,z2"]
    for t, row in zip(traj.times, traj.states):
        rows.append(",".join([_fmt17(t)] + [_fmt17(v) for v in row]))
    return "\n".join(rows) + "\n"


def _state_dict(x: State) -> dict:
    return {"y1": x.y1, "y2": x.y2, "z_s": x.z_s, "z1": x.z1, "z2": x.z2}


def _meta(cfg) -> dict:
    from . import __version__

    base = cfg.base if isinstance(cfg, SweepConfig) else cfg
    return {
        "version": __version__,
        "config_hash": config_hash(cfg),
        "params": {k: getattr(base.params, k) for k in MODEL_KEYS},
        "sim": {"h": base.sim.h, "t_max": base.sim.t_max,
                "record_every": base.sim.record_every,
                "conv_eps": base.sim.conv_eps,
                "conv_window": base.sim.conv_window},
    }


def scenario_json(result: ScenarioResult) -> str:
    """JSON mirror of the CSV trajectory content plus a meta block."""
    doc = {
        "meta": _meta(result.config),
        "equilibria": [
            {"kind": e.kind, "exists": e.exists,
             "point": _state_dict(e.point) if e.point is not None else None,
             "conditions": [{"label": c.label, "holds": c.holds,
                             "margin": c.margin}
                            for c in e.existence_conditions]}
            for e in result.equilibria],
        "lines": [
            {"kind": ln.kind, "exists": ln.exists,
             "param_range": list(ln.param_range) if ln.param_range else None,
             "r0_equal": ln.r0_equal}
            for ln in result.lines],
        "trajectories": [
            {"index": tr.index,
             "initial": _state_dict(tr.initial),
             "error": tr.error,
             "converged": tr.converged,
             "matched": tr.matched_kind,
             "distance": None if tr.error else tr.matched_distance,
             "residual": tr.residual,
             "terminal": _state_dict(tr.terminal) if tr.terminal else None,
             "times": [] if tr.trajectory is None else
                      [float(t) for t in tr.trajectory.times],
             "states": [] if tr.trajectory is None else
                       [[float(v) for v in row] for row in tr.trajectory.states]}
            for tr in result.trajectories],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _write_scenario_outputs(result: ScenarioResult) -> None:
    outdir = Path(result.config.outputs)
    outdir.mkdir(parents=True, exist_ok=True)
    files = result.files
    if "csv" in result.config.formats:
        for tr in result.trajectories:
            if tr.trajectory is None:
                continue
            path = outdir / f"traj_{tr.index:02d}.csv"
            path.write_text(trajectory_csv(tr.trajectory))
            files[path.name] = str(path)
    if "json" in result.config.formats:
        path = outdir / "result.json"
        path.write_text(scenario_json(result))
        files[path.name] = str(path)
    if "svg" in result.config.formats:
        for name, text in export_phase_plot(result).items():
            path = outdir / name
            path.write_text(text)
            files[path.name] = str(path)


def export_phase_plot(result: ScenarioResult, projection=("y1", "y2")) -> dict[str, str]:
    """Project trajectories onto the infection simplex for plotting.

    Returns {"phase.csv": ..., "phase.svg": ...} document texts (the SVG
    only when requested in the config formats).  The projection loses no
    information only while z1 = z2 = 1; otherwise a warning is emitted
    and the projection proceeds anyway.
    """
    if projection != ("y1", "y2"):
        raise ValueError("only the (y1, y2) projection is supported")
    lossy = any(
        tr.trajectory is not None and
        (np.abs(tr.trajectory.states[:, 3] - 1.0).max() > 1e-9
         or np.abs(tr.trajectory.states[:, 4] - 1.0).max() > 1e-9)
        for tr in result.trajectories)
    if lossy:
        warnings.warn("projection onto (y1, y2) loses information because "
                      "z1 or z2 leaves 1 along a trajectory", stacklevel=2)

    rows = ["role,label,t,y1,y2"]
    polylines = []
    initials = []
    marks = []
    segments = []
    for tr in result.trajectories:
        if tr.trajectory is None:
            continue
        pts = tr.trajectory.states[:, :2]
        polylines.append(pts)
        for t, (a, b) in zip(tr.trajectory.times, pts):
            rows.append(f"trajectory,traj_{tr.index:02d},{_fmt17(t)},"
                        f"{_fmt17(a)},{_fmt17(b)}")
        initials.append((tr.initial.y1, tr.initial.y2))
        rows.append(f"initial,traj_{tr.index:02d},,"
                    f"{_fmt17(tr.initial.y1)},{_fmt17(tr.initial.y2)}")
    for eq in result.equilibria:
        if not eq.exists:
            continue
        marks.append((eq.point.y1, eq.point.y2, eq.kind))
        rows.append(f"equilibrium,{eq.kind},,"
                    f"{_fmt17(eq.point.y1)},{_fmt17(eq.point.y2)}")
    for line in result.lines:
        if not line.exists:
            continue
        lo, hi = line.param_range
        if line.kind == "LS":
            span = hi - lo
            a = line.point_at(lo + 1e-9 * span)
            b = line.point_at(hi - 1e-9 * span)
        else:
            a = line.point_at(lo)
            b = line.point_at(hi)
        segments.append(((a.y1, a.y2), (b.y1, b.y2), line.kind))
        rows.append(f"segment,{line.kind},,{_fmt17(a.y1)},{_fmt17(a.y2)}")
        rows.append(f"segment,{line.kind},,{_fmt17(b.y1)},{_fmt17(b.y2)}")

    out = {"phase.csv": "\n".join(rows) + "\n"}
    if "svg" in result.config.formats:
        out["phase.svg"] = _svg.render_phase_svg(polylines, initials, marks,
                                                 segments)
    return out


def sweep_rows(cfg: SweepConfig) -> list[dict]:
    """Evaluate the sweep grid; one dict per cell in row-major axis order."""
    rows = []
    axis_values = [ax.values() for ax in cfg.axes]
    grids = np.meshgrid(*axis_values, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    for cell in flat:
        row: dict = {ax.name: float(v) for ax, v in zip(cfg.axes, cell)}
        row["error"] = ""
        try:
            params = cfg.base.params.replace(
                **{ax.name: float(v) for ax, v in zip(cfg.axes, cell)})
            validate_params(params).raise_if_errors()
            eqs = {e.kind: e for e in enumerate_isolated(params)}
            lns = {ln.kind: ln for ln in coexistence_lines(params)}
            for kind in POINT_KINDS:
                row[f"exists_{kind}"] = int(eqs[kind].exists)
            for kind in LINE_KINDS:
                row[f"exists_{kind}"] = int(lns[kind].exists)
            for kind in cfg.classification_targets:
                cand = eqs.get(kind) or lns.get(kind)
                if not cand.exists:
                    row[f"{kind}_closed"] = "absent"
                    row[f"{kind}_numeric"] = "absent"
                    continue
                if kind in POINT_KINDS:
                    report = classify_point(params, cand)
                else:
                    report = classify_line(params, cand)
                row[f"{kind}_closed"] = report.closed_form_verdict
                row[f"{kind}_numeric"] = report.numeric_verdict
        except Exception as exc:  # per-cell failures must not stop the sweep
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def sweep_csv(cfg: SweepConfig) -> str:
    rows = sweep_rows(cfg)
    cols = [ax.name for ax in cfg.axes]
    cols += [f"exists_{k}" for k in POINT_KINDS + LINE_KINDS]
    for kind in cfg.classification_targets:
        cols += [f"{kind}_closed", f"{kind}_numeric"]
    cols.append("error")
    out = [",".join(cols)]
    for row in rows:
        cells = []
        for c in cols:
            v = row.get(c, "")
            cells.append(_fmt17(v) if isinstance(v, float) else str(v))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def run_sweep(cfg: SweepConfig) -> dict[str, str]:
    """Run the sweep and write ``sweep.csv`` (and JSON mirror if requested)."""
    text = sweep_csv(cfg)
    files = {}
    outdir = Path(cfg.base.outputs) if cfg.base.outputs else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "sweep.csv"
        path.write_text(text)
        files["sweep.csv"] = str(path)
        if "json" in cfg.base.formats:
            doc = {"meta": _meta(cfg), "rows": sweep_rows(cfg)}
            jpath = outdir / "sweep.json"
            jpath.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
            files["sweep.json"] = str(jpath)
    files["__csv__"] = text
    return files
