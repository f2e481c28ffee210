"""
experiments.py - Seeded, config-driven experiment runner

Each experiment draws replica i from RngStream(seed, i). Replicas are
computed in contiguous chunks, optionally in worker processes, and gathered
back in replica order, so every aggregate artifact depends on the seed alone
and never on `threads`.

Usage:
    config = ExperimentConfig.from_mapping({"experiment": "sample", "dimension": 5, "radius": 3})
    result = run(config)            # writes CSV/JSON artifacts and manifest.json under config.out
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from .artifacts import atomic_write_text, build_manifest, write_csv, write_json
from .config import DEFAULT_SETTINGS, Settings
from .counterexample import CounterexampleSampler
from .errors import ConfigError
from .forest import dump_forest
from .forest_analysis import (
    linear_envelope_check,
    log_envelope_check,
    log_envelope_grid,
    ray_decompose,
    recurrence_diagnostic,
    resistance_growth_profile,
    tail_sum,
)
from .graph import Graph, read_edge_list
from .lattice import Boundary, LatticeBoxSpec, build_lattice_box
from .resample import ResampleCounts, ResampleSampler, analyse_resample_counts
from .resistance import kirchhoff_edge_probabilities, wired_effective_resistance
from .rng import RngStream
from .stats import mean_ci
from .walk.heat_kernel import z_values
from .walk.kac import MarkovChain, cycle_chain, kac_check, two_state_chain
from .walk.two_sided import cut_time_statistics
from .wilson import two_sided_wsf, wilson_ust, wsf_wired_box

log = logging.getLogger(__name__)

EXPERIMENTS = ("sample", "resistance", "resample-test", "cuttime", "njl", "growth", "recurrence", "counterexample", "kac")
TRUNKS = ("none", "lattice", "box")
Z_TRUNCATION = 10**4

_INT_FIELDS = {"dimension", "radius", "horizon", "replicas", "seed", "threads", "ball", "edges", "samples"}
_OPTIONAL_INT_FIELDS = {"n_max", "budget_vertices"}
_INT_TUPLE_FIELDS = {"radii", "n_values", "m_values", "event"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dimension: int = 5
    radius: int = 3
    radii: tuple[int, ...] = ()
    horizon: int = DEFAULT_SETTINGS.horizon
    replicas: int = 100
    seed: int = 0
    threads: int = 1
    ball: int = 1
    n_values: tuple[int, ...] = (1, 2, 4, 8)
    m_values: tuple[int, ...] = (2, 4, 8, 16)
    n_max: int | None = None
    graph_path: str | None = None
    trunk: str = "none"
    edges: int = 5
    chain: str = "cycle:3"
    event: tuple[int, ...] = (0,)
    samples: int = 10**6
    out: str = "results"
    budget_vertices: int | None = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> ExperimentConfig:
        """Build from a flat mapping (config file merged with flags); keys may use '-' or '_'."""
        known = {f.name for f in fields(cls)}
        values: dict[str, Any] = {}
        for raw_key, value in data.items():
            key = raw_key.replace("-", "_")
            if key not in known:
                raise ConfigError(raw_key, "unknown configuration key")
            if value is None:
                continue
            values[key] = _coerce(key, value)
        if "experiment" not in values:
            raise ConfigError("experiment", "missing; choose one of " + ", ".join(EXPERIMENTS))
        config = cls(**values)
        config.check()
        return config

    def check(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"{self.experiment!r} is not one of {', '.join(EXPERIMENTS)}")
        for name in ("dimension", "radius", "horizon", "replicas", "threads", "edges", "samples"):
            if getattr(self, name) < 1:
                raise ConfigError(name, f"must be >= 1, got {getattr(self, name)}")
        if self.ball < 0 or self.ball > self.radius:
            raise ConfigError("ball", f"must lie in 0..radius ({self.radius}), got {self.ball}")
        if any(r < 1 for r in self.radii):
            raise ConfigError("radii", "every radius must be >= 1")
        if any(n < 0 for n in self.n_values):
            raise ConfigError("n_values", "values must be >= 0")
        if any(m < 1 for m in self.m_values):
            raise ConfigError("m_values", "values must be >= 1")
        if self.trunk not in TRUNKS:
            raise ConfigError("trunk", f"{self.trunk!r} is not one of {', '.join(TRUNKS)}")
        if self.trunk != "none" and self.dimension < 5:
            raise ConfigError("dimension", f"a two-sided trunk needs d >= 5, got {self.dimension}")
        if self.experiment == "cuttime" and self.dimension < 7:
            raise ConfigError("dimension", f"cuttime needs d >= 7 for finite Z_2, got {self.dimension}")
        if self.experiment == "resample-test" and self.replicas < 2:
            raise ConfigError("replicas", "resample-test needs at least 2 replicas")
        if self.budget_vertices is not None and self.budget_vertices < 1:
            raise ConfigError("budget_vertices", "must be >= 1")
        if self.n_max is not None and self.n_max < 1:
            raise ConfigError("n_max", "must be >= 1")
        if self.experiment == "kac":
            parse_chain(self.chain)
            if not self.event:
                raise ConfigError("event", "must name at least one state")

    def settings(self, base: Settings = DEFAULT_SETTINGS) -> Settings:
        if self.budget_vertices is None:
            return base
        return base.replace(vertex_budget=self.budget_vertices)

    def box(self, radius: int | None = None) -> LatticeBoxSpec:
        return LatticeBoxSpec(self.dimension, self.radius if radius is None else radius, Boundary.WIRED)

    def as_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


def _coerce(key: str, value: Any) -> Any:
    try:
        if key in _INT_FIELDS or key in _OPTIONAL_INT_FIELDS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(value)
            return int(value)
        if key in _INT_TUPLE_FIELDS:
            if isinstance(value, str):
                value = [v for v in value.replace(",", " ").split() if v]
            elif isinstance(value, (int, float)):
                value = [value]
            return tuple(int(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"expected an integer value, got {value!r}") from exc
    return str(value)


def parse_chain(text: str) -> MarkovChain:
    """'cycle:N' or 'two-state:p'."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "cycle":
            return cycle_chain(int(arg or 3))
        if kind == "two-state":
            return two_state_chain(float(arg or 0.5))
    except ValueError as exc:
        raise ConfigError("chain", f"bad parameter in {text!r}") from exc
    raise ConfigError("chain", f"{text!r} is not 'cycle:N' or 'two-state:p'")


# replica tasks -------------------------------------------------------------


@dataclass(frozen=True)
class ReplicaTask:
    """prepare(config, settings) builds per-worker state; replica(state, stream) computes one replica."""

    prepare: Callable[[ExperimentConfig, Settings], Any]
    replica: Callable[[Any, RngStream], Any]


@dataclass
class _BoxContext:
    config: ExperimentConfig
    settings: Settings
    spec: LatticeBoxSpec | None
    graph: Graph
    extra: dict = field(default_factory=dict)


def _prepare_box(config: ExperimentConfig, settings: Settings) -> _BoxContext:
    spec = config.box()
    return _BoxContext(config, settings, spec, build_lattice_box(spec, settings=settings))


def _prepare_sample(config: ExperimentConfig, settings: Settings) -> _BoxContext:
    if config.graph_path is not None:
        return _BoxContext(config, settings, None, read_edge_list(config.graph_path))
    return _prepare_box(config, settings)


def _sample_replica(ctx: _BoxContext, stream: RngStream) -> tuple[dict, str]:
    config = ctx.config
    trunk_length, clipped = 0, False
    if ctx.spec is None:
        root = ctx.graph.wired_vertex if ctx.graph.wired_vertex is not None else 0
        forest = wilson_ust(ctx.graph, root, stream, settings=ctx.settings)
        origin = root
    elif config.trunk == "none":
        forest = wsf_wired_box(ctx.spec, stream, graph=ctx.graph, settings=ctx.settings)
        origin = ctx.spec.origin
    else:
        sample = two_sided_wsf(ctx.spec, stream, horizon=config.horizon, trunk_source=config.trunk, graph=ctx.graph, settings=ctx.settings)
        forest, origin = sample.forest, sample.origin
        trunk_length, clipped = sample.trunk.length, sample.clipped
    labels = forest.components.labels
    row = {
        "replica": stream.stream_id,
        "components": forest.components.component_count,
        "edges": len(forest.edge_ids),
        "origin_tree_size": int(np.count_nonzero(labels == labels[origin])),
        "origin_ray_length": len(forest.path_to_root(origin)) - 1,
        "trunk_length": trunk_length,
        "clipped": int(clipped),
    }
    return row, dump_forest(forest)


def _prepare_kirchhoff(config: ExperimentConfig, settings: Settings) -> _BoxContext:
    ctx = _prepare_box(config, settings)
    ctx.extra["edges"] = kirchhoff_edges(ctx.spec, ctx.graph, config.edges)
    return ctx


def kirchhoff_edges(spec: LatticeBoxSpec, graph: Graph, count: int) -> list[int]:
    """The `count` box-interior edges closest to the origin (edges to the wired vertex leave the forest when it is dropped)."""
    interior = np.flatnonzero(graph.without_vertex_edges(spec.wired_vertex))
    coords = spec.coordinates()
    ends = graph.edges[interior]
    dist = np.abs(coords[ends[:, 0]]).sum(axis=1) + np.abs(coords[ends[:, 1]]).sum(axis=1)
    order = np.lexsort((interior, dist))
    return interior[order[:count]].tolist()


def _kirchhoff_replica(ctx: _BoxContext, stream: RngStream) -> np.ndarray:
    forest = wsf_wired_box(ctx.spec, stream, graph=ctx.graph, settings=ctx.settings)
    return forest.edge_mask[ctx.extra["edges"]]


def _prepare_resample(config: ExperimentConfig, settings: Settings) -> ResampleSampler:
    return ResampleSampler(config.box(), config.ball, settings=settings)


def _resample_replica(sampler: ResampleSampler, stream: RngStream) -> ResampleCounts:
    return sampler.replica(stream)


def _prepare_config(config: ExperimentConfig, settings: Settings) -> tuple[ExperimentConfig, Settings]:
    return config, settings


def _cuttime_replica(state: tuple[ExperimentConfig, Settings], stream: RngStream) -> dict:
    config, _ = state
    stats = cut_time_statistics(config.dimension, config.n_values, config.horizon, stream)
    return {n: (stats.T[n].value, stats.T[n].censored, stats.L[n].value, stats.L[n].censored) for n in config.n_values}


def njl_grid(config: ExperimentConfig) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """(core (n, m) grid, every grid point the two envelope checks read)."""
    core = sorted((n, m) for n in config.n_values for m in config.m_values)
    return core, sorted(set(core) | set(log_envelope_grid(core)))


def _njl_replica(ctx: _BoxContext, stream: RngStream) -> tuple[dict, int]:
    forest = wsf_wired_box(ctx.spec, stream, graph=ctx.graph, settings=ctx.settings)
    decomposition = ray_decompose(forest, ctx.spec.origin, settings=ctx.settings)
    _, full = njl_grid(ctx.config)
    return {nm: tail_sum(decomposition, *nm) for nm in full}, decomposition.truncation


def _growth_replica(ctx: _BoxContext, stream: RngStream) -> list[tuple[int, float, float]]:
    forest = wsf_wired_box(ctx.spec, stream, graph=ctx.graph, settings=ctx.settings)
    rows = resistance_growth_profile(ctx.graph, forest, ctx.spec.origin, ctx.config.n_max, settings=ctx.settings)
    return [(row.n, row.resistance, row.lower_bound) for row in rows]


def _recurrence_replica(state: tuple[ExperimentConfig, Settings], stream: RngStream) -> list[tuple[int, float, int, float]]:
    config, settings = state
    rows = recurrence_diagnostic(config.dimension, config.radii or (config.radius,), stream, settings=settings)
    return [(row.radius, row.resistance, row.ray_length, row.cut_partial_sums[-1] if row.cut_partial_sums else 0.0) for row in rows]


def _prepare_counterexample(config: ExperimentConfig, settings: Settings) -> CounterexampleSampler:
    return CounterexampleSampler(config.radius, dimension=config.dimension, settings=settings)


def _counterexample_replica(sampler: CounterexampleSampler, stream: RngStream) -> tuple[float, int]:
    return sampler.replica(stream)


REPLICA_TASKS: dict[str, ReplicaTask] = {
    "sample": ReplicaTask(_prepare_sample, _sample_replica),
    "kirchhoff": ReplicaTask(_prepare_kirchhoff, _kirchhoff_replica),
    "resample-test": ReplicaTask(_prepare_resample, _resample_replica),
    "cuttime": ReplicaTask(_prepare_config, _cuttime_replica),
    "njl": ReplicaTask(_prepare_box, _njl_replica),
    "growth": ReplicaTask(_prepare_box, _growth_replica),
    "recurrence": ReplicaTask(_prepare_config, _recurrence_replica),
    "counterexample": ReplicaTask(_prepare_counterexample, _counterexample_replica),
}


def _run_chunk(task_name: str, config: ExperimentConfig, settings: Settings, start: int, stop: int) -> list:
    task = REPLICA_TASKS[task_name]
    state = task.prepare(config, settings)
    out = []
    for i in range(start, stop):
        out.append(task.replica(state, RngStream(config.seed, i)))
        log.debug("%s replica %d done", task_name, i)
    return out


def map_replicas(task_name: str, config: ExperimentConfig, settings: Settings) -> list:
    """Results of replicas 0..replicas-1 in replica order, using up to `threads` worker processes."""
    n = config.replicas
    workers = min(config.threads, n)
    if workers <= 1:
        return _run_chunk(task_name, config, settings, 0, n)
    bounds = np.linspace(0, n, min(n, 4 * workers) + 1).astype(int).tolist()
    chunks = [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
    results: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, task_name, config, settings, a, b) for a, b in chunks]
        for future in futures:
            results.extend(future.result())
    return results


# experiments ---------------------------------------------------------------


@dataclass
class ExperimentOutcome:
    artifacts: list[str]
    summary: dict = field(default_factory=dict)
    censoring_rate: float | None = None
    clipping_rate: float | None = None


def _warn_censoring(what: str, rate: float, settings: Settings) -> None:
    if rate > settings.censoring_warn_rate:
        log.warning("%s: censoring rate %.2f%% exceeds %.2f%%", what, 100 * rate, 100 * settings.censoring_warn_rate)


def run_sample(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    results = map_replicas("sample", config, settings)
    rows = [row for row, _ in results]
    atomic_write_text(out / "forests.txt", "".join(f"# forest {i}\n{text}" for i, (_, text) in enumerate(results)))
    header = ["replica", "components", "edges", "origin_tree_size", "origin_ray_length", "trunk_length", "clipped"]
    write_csv(out / "sample.csv", header, ([row[h] for h in header] for row in rows))
    clipping = float(np.mean([row["clipped"] for row in rows])) if config.trunk == "lattice" else None
    if clipping is not None and clipping > settings.censoring_warn_rate:
        log.warning("sample: %.1f%% of trunks were clipped to the box", 100 * clipping)
    summary = {
        "mean_components": float(np.mean([row["components"] for row in rows])),
        "mean_origin_tree_size": float(np.mean([row["origin_tree_size"] for row in rows])),
    }
    return ExperimentOutcome(["forests.txt", "sample.csv"], summary, clipping_rate=clipping)


def run_resistance(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    radii = config.radii or tuple(range(1, config.radius + 1))
    x = (0,) * config.dimension
    y = (1,) + (0,) * (config.dimension - 1)
    sequence = wired_effective_resistance(config.dimension, radii, x, y, settings=settings)
    write_csv(out / "resistance.csv", ["radius", "resistance"], sequence)

    spec = config.box()
    graph = build_lattice_box(spec, settings=settings)
    edges = kirchhoff_edges(spec, graph, config.edges)
    predicted = kirchhoff_edge_probabilities(graph, edges, settings=settings)
    hits = np.sum(map_replicas("kirchhoff", config, settings), axis=0)
    n = config.replicas
    freq = hits / n
    se = np.sqrt(np.maximum(predicted * (1 - predicted), 1e-300) / n)
    z = (freq - predicted) / se
    rows = [(e, *graph.edges[e].tolist(), float(p), float(f), float(s), float(zz)) for e, p, f, s, zz in zip(edges, predicted, freq, se, z)]
    write_csv(out / "kirchhoff.csv", ["edge", "u", "v", "resistance", "frequency", "std_error", "z"], rows)
    summary = {"max_abs_z": float(np.abs(z).max(initial=0.0)), "within_3_sigma": bool(np.all(np.abs(z) <= 3.0))}
    write_json(out / "kirchhoff.json", summary)
    return ExperimentOutcome(["resistance.csv", "kirchhoff.csv", "kirchhoff.json"], summary)


def run_resample_test(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    sampler = ResampleSampler(config.box(), config.ball, settings=settings)
    counts = ResampleCounts()
    for part in map_replicas("resample-test", config, settings):
        counts = counts.merge(part)
    report = analyse_resample_counts(counts, sampler.ball_graph.edge_count, config.seed, settings=settings)
    write_json(out / "resample.json", report.as_dict())
    log.info("resample test: TV %.5f (null quantile %.5f), passed: %s", report.tv.tv, report.tv.null_quantile, report.passed)
    return ExperimentOutcome(["resample.json"], {"passed": report.passed, "tv": report.tv.tv})


def cut_time_row(results: list[dict], n: int, z1: float, z2: float, settings: Settings) -> tuple[tuple, dict]:
    """
    CSV row and bound check for one n. Censored samples stay in the means at
    their censored value, a lower bound; the bound check for a quantity is
    skipped (None) when its censoring rate exceeds censoring_warn_rate.
    """
    T = [r[n][0] for r in results]
    L = [r[n][2] for r in results]
    cens_T = sum(r[n][1] for r in results) / len(results)
    cens_L = sum(r[n][3] for r in results) / len(results)
    mT, hT = mean_ci(T)
    mL, hL = mean_ci(L)
    bound_T = z1 * n + z2
    bound_L = bound_T + 1
    check: dict[str, bool | None] = {"T_within_bound": None, "L_within_bound": None}
    for key, mean, half, bound, cens in (("T", mT, hT, bound_T, cens_T), ("L", mL, hL, bound_L, cens_L)):
        if cens > settings.censoring_warn_rate:
            log.warning("cuttime n=%d: %s censored in %.1f%% of replicas; bound check skipped", n, key, 100 * cens)
        else:
            check[f"{key}_within_bound"] = bool(mean - half <= bound)
    return (n, mT, hT, bound_T, cens_T, mL, hL, bound_L, cens_L), check


def run_cuttime(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    results = map_replicas("cuttime", config, settings)
    z = z_values(config.dimension, Z_TRUNCATION)
    z1, z2 = z.upper(1), z.upper(2)
    rows, checks, censored_total = [], {}, 0
    for n in config.n_values:
        row, checks[str(n)] = cut_time_row(results, n, z1, z2, settings)
        rows.append(row)
        censored_total += sum(r[n][1] or r[n][3] for r in results)
    header = ["n", "mean_T", "half_width_T", "bound_T", "censored_T", "mean_L", "half_width_L", "bound_L", "censored_L"]
    write_csv(out / "cuttime.csv", header, rows)
    rate = censored_total / (len(results) * len(config.n_values))
    _warn_censoring("cuttime", rate, settings)
    summary = {"Z1_upper": z1, "Z2_upper": z2, "Z_truncation": Z_TRUNCATION, "checks": checks, "censoring_rate": rate}
    write_json(out / "cuttime.json", summary)
    return ExperimentOutcome(["cuttime.csv", "cuttime.json"], summary, censoring_rate=rate)


def run_njl(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    results = map_replicas("njl", config, settings)
    core, full = njl_grid(config)
    means = {nm: float(np.mean([r[0][nm] for r in results])) for nm in full}
    reach = max(2 * n + m for n, m in core)
    rate = float(np.mean([truncation < reach for _, truncation in results]))
    _warn_censoring("njl (ray shorter than the grid)", rate, settings)
    write_csv(out / "njl.csv", ["n", "m", "mean_tail_sum"], ((n, m, means[(n, m)]) for n, m in core))
    linear = linear_envelope_check({nm: means[nm] for nm in core})
    logarithmic = log_envelope_check(means, core)
    summary = {"linear": linear.as_dict(), "log": logarithmic.as_dict(), "ray_censoring_rate": rate}
    write_json(out / "njl.json", summary)
    return ExperimentOutcome(["njl.csv", "njl.json"], summary, censoring_rate=rate)


def run_growth(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    results = map_replicas("growth", config, settings)
    rows, violations = [], 0
    for i, profile in enumerate(results):
        for n, R, lower in profile:
            rows.append((i, n, R, lower))
            if R < lower - 1e-9 or R > n + 1e-9:
                violations += 1
                log.warning("growth replica %d, n=%d: R=%.6f outside [%.6f, %d]", i, n, R, lower, n)
    write_csv(out / "growth.csv", ["replica", "n", "resistance", "lower_bound"], rows)
    summary = {"violations": violations, "rows": len(rows)}
    write_json(out / "growth.json", summary)
    return ExperimentOutcome(["growth.csv", "growth.json"], summary)


def run_recurrence(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    results = map_replicas("recurrence", config, settings)
    rows = [(i, *row) for i, profile in enumerate(results) for row in profile]
    write_csv(out / "recurrence.csv", ["replica", "radius", "resistance", "ray_length", "cut_sum"], rows)
    by_radius: dict[int, list[float]] = {}
    for _, radius, R, _, _ in rows:
        by_radius.setdefault(radius, []).append(R)
    summary = {"mean_resistance": {str(r): float(np.mean(v)) for r, v in sorted(by_radius.items())}}
    write_json(out / "recurrence.json", summary)
    return ExperimentOutcome(["recurrence.csv", "recurrence.json"], summary)


def run_counterexample(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    sampler = CounterexampleSampler(config.radius, dimension=config.dimension, settings=settings)
    results = map_replicas("counterexample", config, settings)
    write_csv(out / "counterexample.csv", ["replica", "R_H", "tree_size"], ((i, R, s) for i, (R, s) in enumerate(results)))
    report = sampler.report(results)
    write_json(out / "counterexample.json", report.as_dict())
    return ExperimentOutcome(["counterexample.csv", "counterexample.json"], report.as_dict())


def run_kac(config: ExperimentConfig, settings: Settings, out: Path) -> ExperimentOutcome:
    chain = parse_chain(config.chain)
    if any(not 0 <= s < chain.size for s in config.event):
        raise ConfigError("event", f"states must lie in 0..{chain.size - 1}")
    report = kac_check(chain, config.event, config.samples, RngStream(config.seed, 0))
    summary = {**report.as_dict(), "chain": config.chain, "event": list(config.event), "consistent": report.consistent(1e-12)}
    write_json(out / "kac.json", summary)
    return ExperimentOutcome(["kac.json"], summary)


RUNNERS: dict[str, Callable[[ExperimentConfig, Settings, Path], ExperimentOutcome]] = {
    "sample": run_sample,
    "resistance": run_resistance,
    "resample-test": run_resample_test,
    "cuttime": run_cuttime,
    "njl": run_njl,
    "growth": run_growth,
    "recurrence": run_recurrence,
    "counterexample": run_counterexample,
    "kac": run_kac,
}


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    out_dir: Path
    artifacts: tuple[str, ...]
    manifest: dict


def run(config: ExperimentConfig, *, base_settings: Settings = DEFAULT_SETTINGS) -> RunResult:
    """Run one experiment, write its artifacts and manifest.json atomically into config.out."""
    settings = config.settings(base_settings)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s (seed %d, %d replicas, %d threads) into %s", config.experiment, config.seed, config.replicas, config.threads, out)
    started = time.perf_counter()
    outcome = RUNNERS[config.experiment](config, settings, out)
    wall = time.perf_counter() - started
    manifest = build_manifest(
        config.experiment,
        config.as_dict(),
        config.seed,
        wall,
        outcome.artifacts,
        censoring_rate=outcome.censoring_rate,
        clipping_rate=outcome.clipping_rate,
        extra={"summary": outcome.summary},
    )
    write_json(out / "manifest.json", manifest)
    log.info("%s finished in %.2fs: %s", config.experiment, wall, ", ".join(outcome.artifacts))
    return RunResult(0, out, tuple(outcome.artifacts), manifest)
