"""Scenario configs, the four-subcase case study, metrics, and CSV output.

Config files are JSON with a versioned schema; see the README for the full
field list. All powers are per-unit on the model's MVA base, times in
seconds.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .controllers import (
    ConstantDroop,
    Controller,
    DroopSchedule,
    GovernorSpec,
    NoControl,
    Vdic,
)
from .errors import ConfigError, ValidationError
from .model import FfrSpec, GeneratorSpec, ImbalanceEvent, SimConfig, SystemModel
from .simulate import Trace, simulate

SUBCASES = ("no_control", "added_inertia", "constant_droop", "vdic")

SCHEMA_VERSION = 1

#: settledness threshold on |RoCoF| at the end of a run, p.u./s
SETTLED_ROCOF = 1e-6


def default_config_path() -> Path:
    """Path of the bundled default scenario (single-machine 1000 MVA system,
    39.2 s inertia, -0.3 p.u. imbalance at t = 10 s, four HVDC FFRs)."""
    return Path(str(resources.files("droopinertia") / "data" / "default_scenario.json"))


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run one subcase (or, with all optional blocks
    present, the whole four-subcase case study)."""

    model: SystemModel
    event: ImbalanceEvent
    sim: SimConfig
    subcase: str
    governor: GovernorSpec = GovernorSpec(enabled=False)
    k_total: float | None = None
    vdic_schedule: DroopSchedule | None = None
    added_inertia: float | None = None

    def __post_init__(self):
        if self.subcase not in SUBCASES:
            raise ValidationError(
                f"subcase must be one of {SUBCASES}, got {self.subcase!r}"
            )
        if self.sim.duration <= self.event.onset_time:
            raise ValidationError(
                "sim.duration_s must exceed event.onset_time_s "
                f"({self.sim.duration} <= {self.event.onset_time})"
            )
        if self.subcase == "constant_droop" and self.k_total is None:
            raise ValidationError(
                "subcase 'constant_droop' requires the constant_droop.k_total_pu block"
            )
        if self.subcase == "vdic" and self.vdic_schedule is None:
            raise ValidationError("subcase 'vdic' requires the vdic_schedule block")
        if self.subcase == "added_inertia" and self.added_inertia is None:
            raise ValidationError(
                "subcase 'added_inertia' requires the added_inertia.delta_tj_s block"
            )


@dataclass(frozen=True)
class SummaryMetrics:
    """Scalar summary of one trace.

    initial_rocof is the mean RoCoF over the first 100 ms after onset;
    steady_state_omega the mean deviation over the final 10% of the run;
    settled flags |RoCoF| < 1e-6 p.u./s at the last sample.
    """

    initial_rocof: float
    nadir: float
    nadir_time: float
    steady_state_omega: float
    settled: bool


# --------------------------------------------------------------------------
# config ingestion
# --------------------------------------------------------------------------

def _get(section: dict, key: str, ctx: str):
    if key not in section:
        raise ConfigError(f"missing field {ctx}.{key}")
    return section[key]


def _section(doc: dict, key: str) -> dict:
    block = _get(doc, key, "config")
    if not isinstance(block, dict):
        raise ConfigError(f"config.{key} must be an object")
    return block


def load_config(path: str | Path) -> ScenarioConfig:
    """Parse and fully validate a scenario config file.

    Raises ConfigError with the file name plus the offending field (or JSON
    position for parse errors). All nested invariants are checked here, at
    load time, not when the simulation starts.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported schema_version {version!r}")

    try:
        model_sec = _section(doc, "model")
        generators = [
            GeneratorSpec(
                nominal_power=_get(g, "nominal_power_mva", f"model.generators[{i}]"),
                inertia_constant=_get(g, "inertia_constant_s", f"model.generators[{i}]"),
            )
            for i, g in enumerate(_get(model_sec, "generators", "model"))
        ]
        ffrs = [
            FfrSpec(
                id=str(_get(f, "id", f"model.ffrs[{i}]")),
                droop_upper_bound=_get(f, "droop_upper_bound", f"model.ffrs[{i}]"),
                droop_optimal=_get(f, "droop_optimal", f"model.ffrs[{i}]"),
                regulation_margin=f.get("regulation_margin", 0.0),
            )
            for i, f in enumerate(model_sec.get("ffrs", []))
        ]
        model = SystemModel(
            system_base=_get(model_sec, "system_base_mva", "model"),
            generators=generators,
            ffrs=ffrs,
        )

        event_sec = _section(doc, "event")
        event = ImbalanceEvent(
            delta_pf=_get(event_sec, "delta_pf_pu", "event"),
            onset_time=event_sec.get("onset_time_s", 0.0),
        )

        sim_sec = _section(doc, "sim")
        sim = SimConfig(
            time_step=sim_sec.get("time_step_s", 1e-3),
            duration=sim_sec.get("duration_s", 20.0),
            integrator=sim_sec.get("integrator", "rk4"),
        )

        gov_sec = doc.get("governor")
        if gov_sec is None:
            governor = GovernorSpec(enabled=False)
        else:
            governor = GovernorSpec(
                enabled=bool(gov_sec.get("enabled", False)),
                droop_gain=gov_sec.get("droop_gain_pu", 25.0),
                time_constant=gov_sec.get("time_constant_s", 8.0),
            )

        k_total = None
        if "constant_droop" in doc:
            k_total = float(_get(doc["constant_droop"], "k_total_pu", "constant_droop"))

        schedule = None
        if "vdic_schedule" in doc:
            sched_sec = doc["vdic_schedule"]
            schedule = DroopSchedule(
                target_inertia=_get(sched_sec, "target_inertia_s", "vdic_schedule"),
                upper_bound=_get(sched_sec, "upper_bound_pu", "vdic_schedule"),
                lower_bound=_get(sched_sec, "lower_bound_pu", "vdic_schedule"),
            )

        added = None
        if "added_inertia" in doc:
            added = float(_get(doc["added_inertia"], "delta_tj_s", "added_inertia"))

        return ScenarioConfig(
            model=model,
            event=event,
            sim=sim,
            subcase=str(_get(doc, "subcase", "config")),
            governor=governor,
            k_total=k_total,
            vdic_schedule=schedule,
            added_inertia=added,
        )
    except ConfigError:
        raise
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------

def _controller_for(config: ScenarioConfig) -> tuple[Controller, SystemModel]:
    if config.subcase == "no_control":
        return NoControl(), config.model
    if config.subcase == "added_inertia":
        return NoControl(), config.model.with_added_inertia(config.added_inertia)
    if config.subcase == "constant_droop":
        return ConstantDroop(config.k_total), config.model
    return Vdic(config.vdic_schedule), config.model


def run_subcase(config: ScenarioConfig) -> tuple[Trace, SummaryMetrics]:
    """Simulate one subcase and summarize its trace."""
    controller, model = _controller_for(config)
    trace = simulate(model, config.event, controller, config.sim,
                     governor=config.governor)
    return trace, summarize(trace)


def summarize(trace: Trace) -> SummaryMetrics:
    """Compute SummaryMetrics from a trace.

    Works from the sampled series only (t, omega, rocof), so metrics
    recomputed from an emitted CSV reproduce the originals exactly.
    """
    t = trace.sample_times
    dt = trace.time_step
    tol = 1e-9 * dt
    i_on = int(np.searchsorted(t, trace.onset_time - tol, side="left"))
    if i_on >= t.size - 1:
        raise ValidationError("trace has no post-onset samples to summarize")

    i_win = min(t.size - 1, i_on + max(1, round(0.1 / dt)))
    initial = (trace.omega[i_win] - trace.omega[i_on]) / (t[i_win] - t[i_on])

    post = trace.omega[i_on:]
    k = int(np.argmin(post))
    i_tail = int(np.searchsorted(t, 0.9 * t[-1] - tol, side="left"))

    return SummaryMetrics(
        initial_rocof=float(initial),
        nadir=float(post[k]),
        nadir_time=float(t[i_on + k]),
        steady_state_omega=float(np.mean(trace.omega[i_tail:])),
        settled=bool(abs(trace.rocof[-1]) < SETTLED_ROCOF),
    )


@dataclass(frozen=True)
class CaseStudyResult:
    traces: dict[str, Trace]
    metrics: dict[str, SummaryMetrics]
    report: dict


def run_case_study(config: ScenarioConfig) -> CaseStudyResult:
    """Run all four subcases off one shared model/event/sim/governor.

    The config must carry both the constant_droop and vdic_schedule blocks;
    an added_inertia block, if present, must agree with the schedule's
    target inertia (the added-inertia subcase uses that target).
    """
    if config.k_total is None:
        raise ValidationError(
            "case study requires the constant_droop.k_total_pu block"
        )
    if config.vdic_schedule is None:
        raise ValidationError("case study requires the vdic_schedule block")
    delta_tj = config.vdic_schedule.target_inertia
    if config.added_inertia is not None and config.added_inertia != delta_tj:
        raise ValidationError(
            "inconsistent shared parameters: added_inertia.delta_tj_s "
            f"({config.added_inertia}) differs from vdic_schedule.target_inertia_s "
            f"({delta_tj})"
        )

    traces: dict[str, Trace] = {}
    metrics: dict[str, SummaryMetrics] = {}
    for sub in SUBCASES:
        sub_cfg = replace(config, subcase=sub, added_inertia=delta_tj)
        traces[sub], metrics[sub] = run_subcase(sub_cfg)

    return CaseStudyResult(traces, metrics, _ordering_report(config, traces, metrics))


def _ordering_report(config: ScenarioConfig, traces: dict[str, Trace],
                     metrics: dict[str, SummaryMetrics]) -> dict:
    """Quantify the qualitative case-study claims: early RoCoF ordering,
    early agreement of the no-control and constant-droop runs, and the
    steady-state benefit of the droop floor."""
    rocof = {s: metrics[s].initial_rocof for s in SUBCASES}
    mag = {s: abs(v) for s, v in rocof.items()}
    rel_iv_ii = abs(rocof["vdic"] - rocof["added_inertia"]) / abs(rocof["added_inertia"])

    t = traces["no_control"].sample_times
    dt = traces["no_control"].time_step
    i_on = int(np.searchsorted(t, traces["no_control"].onset_time - 1e-9 * dt))
    i_win = min(t.size - 1, i_on + max(1, round(0.1 / dt)))
    early_gap = float(
        np.max(
            np.abs(
                traces["no_control"].omega[i_on : i_win + 1]
                - traces["constant_droop"].omega[i_on : i_win + 1]
            )
        )
    )

    ss = {s: abs(metrics[s].steady_state_omega) for s in SUBCASES}
    return {
        "initial_rocof": rocof,
        "initial_rocof_ordering": {
            "added_inertia_lowest": bool(
                mag["added_inertia"] <= min(mag["vdic"], mag["constant_droop"], mag["no_control"])
            ),
            "vdic_below_constant_droop": bool(mag["vdic"] < mag["constant_droop"]),
            "constant_droop_below_no_control": bool(mag["constant_droop"] < mag["no_control"]),
            "vdic_vs_added_inertia_rel_diff": float(rel_iv_ii),
            "vdic_matches_added_inertia_within_2pct": bool(rel_iv_ii < 0.02),
        },
        "early_window": {
            "window_s": 0.1,
            "max_abs_gap_no_control_vs_constant_droop": early_gap,
        },
        "steady_state_abs_omega": ss,
        "vdic_steady_state_tighter_than_added_inertia": bool(ss["vdic"] < ss["added_inertia"]),
        "nadir": {s: metrics[s].nadir for s in SUBCASES},
        "nadir_time": {s: metrics[s].nadir_time for s in SUBCASES},
        "settled": {s: metrics[s].settled for s in SUBCASES},
    }


# --------------------------------------------------------------------------
# CSV emission / ingestion
# --------------------------------------------------------------------------

TRACE_COLUMNS = ("t", "omega", "rocof", "ffr_power", "droop_active")


def emit_trace_csv(trace: Trace, path: str | Path) -> None:
    """Write a trace as CSV: header then one full-precision row per sample.

    Floats are written with repr (shortest round-trip form), so parsing the
    file back yields bit-identical values and identical recomputed metrics.
    """
    path = Path(path)
    header = ",".join(TRACE_COLUMNS) + "".join(f",p_{i}" for i in trace.ffr_ids)
    cols = [trace.sample_times, trace.omega, trace.rocof, trace.ffr_power,
            trace.droop_active, *trace.per_ffr_power]
    try:
        with open(path, "w", newline="") as f:
            f.write(header + "\n")
            for j in range(trace.sample_times.size):
                f.write(",".join(repr(float(c[j])) for c in cols) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trace CSV to {path}: {exc}") from exc


def read_trace_csv(path: str | Path) -> Trace:
    """Parse a CSV produced by emit_trace_csv back into a Trace.

    The onset is recovered as the first sample with nonzero rocof (exact:
    the emitted rocof is identically 0.0 before onset and steps to
    delta_pf / t_j at it). A trace that never sees the onset gets
    onset_time = +inf, which downstream estimators reject.
    """
    path = Path(path)
    try:
        with open(path, newline="") as f:
            header = f.readline().strip().split(",")
            data = np.loadtxt(f, delimiter=",", ndmin=2)
    except OSError as exc:
        raise ValidationError(f"cannot read trace CSV {path}: {exc}") from exc
    if tuple(header[: len(TRACE_COLUMNS)]) != TRACE_COLUMNS:
        raise ValidationError(
            f"{path}: unexpected trace header {header[:len(TRACE_COLUMNS)]}"
        )
    if data.shape[0] < 2 or data.shape[1] != len(header):
        raise ValidationError(f"{path}: malformed trace body {data.shape}")
    ffr_ids = tuple(h[2:] for h in header[len(TRACE_COLUMNS):])
    t = data[:, 0]
    rocof = data[:, 2]
    nonzero = np.nonzero(rocof)[0]
    onset = float(t[nonzero[0]]) if nonzero.size else math.inf
    return Trace(
        sample_times=t,
        omega=data[:, 1],
        rocof=rocof,
        ffr_power=data[:, 3],
        droop_active=data[:, 4],
        per_ffr_power=data[:, len(TRACE_COLUMNS):].T,
        ffr_ids=ffr_ids,
        onset_time=onset,
    )


def emit_case_study_csv(result: CaseStudyResult, path: str | Path) -> None:
    """Merged four-subcase CSV keyed by time: omega and rocof per subcase."""
    grids = [result.traces[s].sample_times for s in SUBCASES]
    for other in grids[1:]:
        if other.shape != grids[0].shape or not np.array_equal(other, grids[0]):
            raise ValidationError("case-study traces are not on a common time grid")
    header = "t" + "".join(f",omega_{s}" for s in SUBCASES) + "".join(
        f",rocof_{s}" for s in SUBCASES
    )
    cols = [grids[0]] + [result.traces[s].omega for s in SUBCASES] + [
        result.traces[s].rocof for s in SUBCASES
    ]
    path = Path(path)
    try:
        with open(path, "w", newline="") as f:
            f.write(header + "\n")
            for j in range(grids[0].size):
                f.write(",".join(repr(float(c[j])) for c in cols) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write case-study CSV to {path}: {exc}") from exc


def metrics_dict(metrics: SummaryMetrics) -> dict:
    return asdict(metrics)
