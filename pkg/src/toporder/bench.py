"""Experiment harness: wires ingestion, predictions, and the ordering
structures into reproducible CSV results.

Wall time is measured around the insert loop only; parsing, splitting, and
prediction training are excluded.  All randomness flows from explicit seeds
so identical specs produce identical rows apart from wall_time_s.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace
from statistics import mean, pstdev
from typing import Sequence

from .baselines import FdfsOrder, dfs1
from .graph import Digraph, EdgeEvent, InsertOutcome, prediction_error
from .ideal import IdealOrder
from .ingest import dagify, parse_snap, split_events
from .ldfs import LdfsOrder
from .predictions import PredictionSet, add_noise, synthetic_dag_stream, train_predictions

ALGORITHMS = ("ldfs", "dfs1", "dfs2", "ideal")

CSV_HEADER = (
    "dataset,algo,train_frac,noise_c,trial,cost_vertices,cost_edges,cost_total,"
    "wall_time_s,cycles_detected,distinct_edges,eta_true,eta_hat_final,doublings"
)


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class SnapSource:
    path: str
    dagify_seed: int = 0
    name: str = ""


@dataclass(frozen=True)
class SynthSource:
    n: int
    p: float
    seed: int = 0


@dataclass
class ExperimentSpec:
    source: SnapSource | SynthSource
    algo: str
    train_frac: float = 0.05
    test_frac: float = 0.5
    noise_c: float = 0.0
    trials: int = 1
    rng_seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algo {self.algo!r}, expected one of {ALGORITHMS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass
class ResultRow:
    dataset: str
    algo: str
    train_frac: float
    noise_c: float
    trial: int
    cost_vertices: int
    cost_edges: int
    cost_total: int
    wall_time_s: float
    cycles_detected: int
    distinct_edges: int
    eta_true: int
    eta_hat_final: int
    doublings: int


@dataclass
class NoiseSummary:
    dataset: str
    algo: str
    train_frac: float
    noise_c: float
    regenerations: int
    mean_cost_total: float
    sd_cost_total: float


@dataclass
class _Stream:
    """A prepared experiment input, reusable across trials."""

    name: str
    n: int
    train_events: list[EdgeEvent]
    test_events: list[EdgeEvent]
    distinct_edges: int
    g_final: Digraph
    base_preds: PredictionSet = field(init=False)

    def __post_init__(self):
        self.base_preds = train_predictions(self.train_events, self.n)


def _derive_seed(seed: int, salt: int) -> int:
    return (seed * 1_000_003 + salt) & 0x7FFFFFFF


def prepare_stream(spec: ExperimentSpec) -> _Stream:
    if isinstance(spec.source, SynthSource):
        src = spec.source
        events = synthetic_dag_stream(src.n, src.p, src.seed)
        n = src.n
        name = f"synth-n{src.n}-p{src.p}"
    else:
        events, relabeling = parse_snap(spec.source.path)
        n = max(1, len(relabeling))
        dataset = dagify(events, n, spec.source.dagify_seed)
        events = dataset.events
        name = spec.source.name or spec.source.path
    train_events, test_events = split_events(events, spec.train_frac, spec.test_frac)
    distinct = {(ev.source, ev.target) for ev in test_events}
    g_final = Digraph(n)
    g_final.add_edges(distinct)
    return _Stream(name, n, train_events, test_events, max(1, len(distinct)), g_final)


def _make_structure(spec: ExperimentSpec, stream: _Stream, preds: PredictionSet, trial: int):
    if spec.algo == "ldfs":
        return LdfsOrder(stream.n, preds.alpha, stream.distinct_edges)
    if spec.algo == "dfs1":
        return dfs1(stream.n, stream.distinct_edges)
    if spec.algo == "dfs2":
        return FdfsOrder(stream.n, seed=_derive_seed(spec.rng_seed, trial))
    delta = preds.delta if preds.delta is not None else [0] * stream.n
    return IdealOrder(stream.n, preds.alpha, delta, stream.distinct_edges)


def _eta_for(spec: ExperimentSpec, stream: _Stream, preds: PredictionSet) -> int:
    # Report the error of the predictions as the algorithm consumes them:
    # ancestor-only for the DFS family, both components for ideal, zero for
    # the prediction-free permutation baseline.
    if spec.algo == "dfs2":
        return 0
    if spec.algo == "dfs1":
        return prediction_error(PredictionSet([0] * stream.n), stream.g_final)
    if spec.algo == "ideal":
        return prediction_error(preds, stream.g_final)
    return prediction_error(PredictionSet(list(preds.alpha)), stream.g_final)


def run_experiment(spec: ExperimentSpec, stream: _Stream | None = None) -> list[ResultRow]:
    """Run spec.trials independent trials and return one row per trial.

    The input stream is DAG-ified, so a cycle verdict from any structure is
    a correctness failure: the offending row is recorded (and written if an
    output path is set) and BenchmarkError is raised.
    """
    if stream is None:
        stream = prepare_stream(spec)
    rows: list[ResultRow] = []
    failure = False
    for trial in range(spec.trials):
        preds = stream.base_preds
        if spec.noise_c > 0:
            preds = add_noise(
                preds, spec.noise_c, _derive_seed(spec.rng_seed, trial), stream.g_final
            )
        structure = _make_structure(spec, stream, preds, trial)
        cycles = 0
        start = time.perf_counter()
        for ev in stream.test_events:
            if structure.insert(ev.source, ev.target) is InsertOutcome.CYCLE_DETECTED:
                cycles += 1
                break
        wall = time.perf_counter() - start
        eta_hat_final = doublings = 0
        if spec.algo == "ideal":
            stats = structure.stats()
            eta_hat_final, doublings = stats.eta_hat, stats.doublings
        costs = structure.costs
        rows.append(
            ResultRow(
                dataset=stream.name,
                algo=spec.algo,
                train_frac=spec.train_frac,
                noise_c=spec.noise_c,
                trial=trial,
                cost_vertices=costs.vertices_processed,
                cost_edges=costs.edges_processed,
                cost_total=costs.total(),
                wall_time_s=wall,
                cycles_detected=cycles,
                distinct_edges=stream.distinct_edges,
                eta_true=_eta_for(spec, stream, preds),
                eta_hat_final=eta_hat_final,
                doublings=doublings,
            )
        )
        if cycles:
            failure = True
            break
    if spec.output_path:
        emit_csv(rows, spec.output_path)
    if failure:
        raise BenchmarkError(
            f"cycle reported on a DAG-ified stream ({stream.name}, algo={spec.algo})"
        )
    return rows


def run_noise_sweep(
    spec: ExperimentSpec, c_values: Sequence[float], regenerations: int
) -> tuple[list[ResultRow], list[NoiseSummary]]:
    """Rerun the spec at each noise level, regenerating the noise each trial."""
    stream = prepare_stream(spec)
    rows: list[ResultRow] = []
    summaries: list[NoiseSummary] = []
    for c in c_values:
        cell = replace(spec, noise_c=c, trials=regenerations, output_path=None)
        cell_rows = run_experiment(cell, stream)
        rows.extend(cell_rows)
        totals = [row.cost_total for row in cell_rows]
        summaries.append(
            NoiseSummary(
                dataset=stream.name,
                algo=spec.algo,
                train_frac=spec.train_frac,
                noise_c=c,
                regenerations=regenerations,
                mean_cost_total=mean(totals),
                sd_cost_total=pstdev(totals),
            )
        )
    if spec.output_path:
        emit_csv(rows, spec.output_path)
    return rows, summaries


def run_training_sweep(spec: ExperimentSpec, fractions: Sequence[float]) -> list[ResultRow]:
    """Vary the training fraction against a fixed test window."""
    rows: list[ResultRow] = []
    for frac in fractions:
        cell = replace(spec, train_frac=frac, output_path=None)
        rows.extend(run_experiment(cell))
    if spec.output_path:
        emit_csv(rows, spec.output_path)
    return rows


def run_density_sweep(
    n: int,
    p_values: Sequence[float],
    train_frac: float,
    test_frac: float,
    algos: Sequence[str],
    seeds: Sequence[int],
    rng_seed: int = 0,
    output_path: str | None = None,
) -> list[ResultRow]:
    """Synthetic-density study: one cell per (p, seed, algo)."""
    rows: list[ResultRow] = []
    for p in p_values:
        for seed in seeds:
            source = SynthSource(n=n, p=p, seed=seed)
            for algo in algos:
                trials = 5 if algo == "dfs2" else 1
                cell = ExperimentSpec(
                    source=source,
                    algo=algo,
                    train_frac=train_frac,
                    test_frac=test_frac,
                    trials=trials,
                    rng_seed=_derive_seed(rng_seed, seed),
                )
                rows.extend(run_experiment(cell))
    if output_path:
        emit_csv(rows, output_path)
    return rows


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def emit_csv(rows: Sequence[ResultRow], path: str) -> None:
    """Write the fixed 14-column schema with LF endings; floats get six
    significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fields = (
                row.dataset,
                row.algo,
                row.train_frac,
                row.noise_c,
                row.trial,
                row.cost_vertices,
                row.cost_edges,
                row.cost_total,
                row.wall_time_s,
                row.cycles_detected,
                row.distinct_edges,
                row.eta_true,
                row.eta_hat_final,
                row.doublings,
            )
            fh.write(",".join(_format_value(f) for f in fields) + "\n")


def read_csv(path: str) -> list[ResultRow]:
    rows: list[ResultRow] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for record in csv.DictReader(fh):
            rows.append(
                ResultRow(
                    dataset=record["dataset"],
                    algo=record["algo"],
                    train_frac=float(record["train_frac"]),
                    noise_c=float(record["noise_c"]),
                    trial=int(record["trial"]),
                    cost_vertices=int(record["cost_vertices"]),
                    cost_edges=int(record["cost_edges"]),
                    cost_total=int(record["cost_total"]),
                    wall_time_s=float(record["wall_time_s"]),
                    cycles_detected=int(record["cycles_detected"]),
                    distinct_edges=int(record["distinct_edges"]),
                    eta_true=int(record["eta_true"]),
                    eta_hat_final=int(record["eta_hat_final"]),
                    doublings=int(record["doublings"]),
                )
            )
    return rows


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two sequences of equal length >= 2")

    def ranks(values: Sequence[float]) -> list[float]:
        order = sorted(range(len(values)), key=lambda i: values[i])
        out = [0.0] * len(values)
        i = 0
        while i < len(order):
            k = i
            while k + 1 < len(order) and values[order[k + 1]] == values[order[i]]:
                k += 1
            avg = (i + k) / 2 + 1
            for idx in order[i : k + 1]:
                out[idx] = avg
            i = k + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx, my = mean(rx), mean(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    sx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    sy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if sx == 0 or sy == 0:
        return 0.0
    return cov / (sx * sy)
