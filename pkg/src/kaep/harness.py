"""The dynamic optimisation loop and multi-run experiments.

One run: random initial population, then every generation re-evaluates the
detectors; a detected change closes the current environment (its rank-0
front is scored), and the population for the new environment comes either
from a copy of the last one (first change, learning strategies) or from the
configured responder. Generations without a change are ordinary NSGA-II
steps. Each generation costs the detector re-evaluations plus ``N``
evaluations, whichever branch it takes.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .benchmarks import PROBLEMS, get_problem
from .core import Population, make_rng
from .dynamics import TimeController, archive_detectors, detect_change, detector_count
from .metrics import ChangeRecord, RunSummary, score_front, summarize
from .nsga2 import VariationParams, fast_nondominated_sort, generation_step, sort_and_annotate
from .prediction import KernelSpec, ResponseStrategy, Strategy, respond

log = logging.getLogger(__name__)

CSV_HEADER = ["run_id", "change_index", "t", "igd", "hv", "gd", "sp", "fallbacks"]
METRICS = ("migd", "mhv", "mgd", "msp")
ABLATION_SET = (Strategy.KAEP, Strategy.CP, Strategy.KAE, Strategy.AE_LINEAR, Strategy.AE_CENTROID)


class ConfigError(ValueError):
    pass


class RunFailure(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    problem: str = "DF1"
    strategy: str = "KAEP"
    N: int = 100
    n: int = 10
    n_t: int = 10
    tau_t: int = 10
    warmup: int = 100
    changes: int = 20
    kernel_degree: int = 2
    ridge: float | str = "auto"
    refset: int = 1000
    runs: int = 20
    seed: int = 0
    workers: int = 1
    out: str | None = None

    def validate(self) -> "ExperimentConfig":
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}")
        try:
            Strategy.parse(self.strategy)
        except ValueError as err:
            raise ConfigError(str(err)) from None
        for name in ("N", "n", "n_t", "tau_t", "changes", "kernel_degree", "runs", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.N % 2:
            raise ConfigError("N must be even")
        if self.warmup < 0 or self.seed < 0:
            raise ConfigError("warmup and seed must be nonnegative")
        if self.refset < 2:
            raise ConfigError("refset must be >= 2")
        if self.ridge != "auto":
            try:
                if float(self.ridge) < 0:
                    raise ConfigError("ridge must be nonnegative or 'auto'")
            except (TypeError, ValueError):
                raise ConfigError(f"bad ridge value {self.ridge!r}") from None
        return self

    @property
    def total_generations(self) -> int:
        return self.warmup + self.changes * self.tau_t

    def echo(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for volatile in ("out", "workers"):
            d.pop(volatile)
        d["strategy"] = Strategy.parse(self.strategy).value
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
        return cls(**data)


@dataclass
class RunResult:
    run_id: int
    seed: int
    summary: RunSummary
    change_generations: list[int]
    evaluations: int
    evaluations_per_env: list[int]
    fallbacks: int
    missed_detections: int = 0
    spurious_detections: int = 0
    wall_time: float = 0.0

    @property
    def records(self) -> list[ChangeRecord]:
        return self.summary.per_change


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list[RunResult]
    aggregate: dict[str, float]
    failures: list[str] = field(default_factory=list)

    @property
    def incomplete(self) -> bool:
        return bool(self.failures)


class _CountingProblem:
    """Delegates to a problem and counts evaluated rows."""

    def __init__(self, problem):
        self._p = problem
        self.bounds = problem.bounds
        self.count = 0

    def evaluate(self, X, t):
        self.count += 1 if np.ndim(X) == 1 else np.shape(X)[0]
        return self._p.evaluate(X, t)


def _strategy(cfg: ExperimentConfig) -> ResponseStrategy:
    lam = None if cfg.ridge == "auto" else float(cfg.ridge)
    return ResponseStrategy(Strategy.parse(cfg.strategy), KernelSpec(cfg.kernel_degree), lam)


def _score(pop: Population, problem, cfg: ExperimentConfig, index: int, fallbacks: int) -> ChangeRecord:
    front = pop.F[fast_nondominated_sort(pop.copy())[0]]
    return score_front(front, problem.sample_pof(pop.t, cfg.refset), index, pop.t, fallbacks)


def run_dmoea(config: ExperimentConfig, seed: int, run_id: int = 0) -> RunResult:
    cfg = config.validate()
    base = get_problem(cfg.problem, cfg.n)
    problem = _CountingProblem(base)
    clock = TimeController(cfg.n_t, cfg.tau_t, cfg.warmup)
    strategy = _strategy(cfg)
    params = VariationParams()
    rng = make_rng(seed)
    bounds = base.bounds
    N = cfg.N
    n_det = detector_count(N)
    started = time.perf_counter()

    X0 = bounds.sample(N, rng)
    pop = Population(X0, problem.evaluate(X0, clock.time_at(0)), clock.time_at(0))
    sort_and_annotate(pop)
    detectors = archive_detectors(pop, n_det, rng)

    records: list[ChangeRecord] = []
    change_gens: list[int] = []
    env_evals: list[int] = []
    env_start = problem.count
    older: Population | None = None
    latest: Population | None = None
    fallbacks_env = 0
    fallbacks_total = 0
    missed = spurious = 0

    for tau in range(1, cfg.total_generations + 1):
        t_now = clock.time_at(tau)
        changed = detect_change(detectors, problem, t_now)
        if changed:
            if t_now == pop.t:
                spurious += 1
            records.append(_score(pop, base, cfg, len(records), fallbacks_env))
            env_evals.append(problem.count - env_start)
            env_start = problem.count
            change_gens.append(tau)
            older, latest = latest, pop
            fallbacks_env = 0
            if strategy.variant.needs_history and older is None:
                X_new = latest.X.copy()
            else:
                try:
                    resp = respond(strategy, older, latest, N, bounds, rng)
                except (np.linalg.LinAlgError, FloatingPointError) as err:
                    raise RunFailure(f"response failed at generation {tau}: {err}") from err
                X_new = resp.X
                fallbacks_env = resp.fallbacks
                fallbacks_total += resp.fallbacks
            pop = Population(X_new, problem.evaluate(X_new, t_now), t_now)
            sort_and_annotate(pop)
        else:
            if t_now != pop.t:
                # undetected change: keep optimising on stale cached objectives
                missed += 1
                pop.t = t_now
            pop = generation_step(pop, problem, t_now, params, rng)
        detectors = archive_detectors(pop, n_det, rng)

    if missed or spurious:
        log.warning("run %d: %d missed and %d spurious change detections", run_id, missed, spurious)
    summary = summarize(records, seed, cfg.echo())
    return RunResult(
        run_id=run_id,
        seed=seed,
        summary=summary,
        change_generations=change_gens,
        evaluations=problem.count,
        evaluations_per_env=env_evals,
        fallbacks=fallbacks_total,
        missed_detections=missed,
        spurious_detections=spurious,
        wall_time=time.perf_counter() - started,
    )


def _run_one(args):
    cfg, seed, run_id = args
    try:
        return run_dmoea(cfg, seed, run_id)
    except (RunFailure, np.linalg.LinAlgError, FloatingPointError) as err:
        return f"run {run_id} (seed {seed}): {err}"


def aggregate(runs: list[RunResult]) -> dict[str, float]:
    out: dict[str, float] = {}
    for name in METRICS:
        vals = np.array([getattr(r.summary, name) for r in runs], dtype=float)
        out[f"{name}_mean"] = float(vals.mean()) if vals.size else math.nan
        out[f"{name}_std"] = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    cfg = config.validate()
    jobs = [(cfg, cfg.seed + i, i) for i in range(cfg.runs)]
    if cfg.workers > 1 and cfg.runs > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(j) for j in jobs]
    runs = sorted((o for o in outcomes if isinstance(o, RunResult)), key=lambda r: r.run_id)
    failures = [o for o in outcomes if isinstance(o, str)]
    for msg in failures:
        log.warning("%s", msg)
    if not runs:
        raise RunFailure("; ".join(failures) or "no runs completed")
    return ExperimentResult(cfg, runs, aggregate(runs), failures)


# ---------------------------------------------------------------------------
# serialization

def _num(x: float) -> str:
    return format(float(x), ".17g")


def changes_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for run in result.runs:
        for r in run.records:
            w.writerow([run.run_id, r.change_index, _num(r.t), _num(r.igd), _num(r.hv),
                        _num(r.gd), _num(r.sp), r.strategy_fallbacks])
    return buf.getvalue()


def summary_dict(result: ExperimentResult) -> dict[str, Any]:
    per_run = []
    for run in result.runs:
        s = run.summary
        per_run.append({
            "run_id": run.run_id,
            "seed": run.seed,
            "migd": s.migd,
            "mhv": s.mhv,
            "mgd": s.mgd,
            "msp": s.msp,
            "evaluations": run.evaluations,
            "change_generations": run.change_generations,
            "fallbacks": run.fallbacks,
            "missed_detections": run.missed_detections,
            "spurious_detections": run.spurious_detections,
        })
    return {
        "config": result.config.echo(),
        "per_run": per_run,
        "aggregate": dict(result.aggregate),
        "failures": list(result.failures),
    }


def write_results(result: ExperimentResult, path) -> tuple[Path, Path]:
    """Write ``changes.csv`` and ``summary.json`` into directory ``path``."""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "changes.csv"
        json_path = out / "summary.json"
        csv_path.write_text(changes_csv(result), encoding="utf-8")
        json_path.write_text(json.dumps(summary_dict(result), indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    except OSError as err:
        raise OSError(f"cannot write results under {out}: {err}") from err
    return csv_path, json_path


COMPARE_HEADER = ["strategy", "runs", "completed"] + [
    f"{m}_{s}" for m in METRICS for s in ("mean", "std")
] + ["evaluations"]


def compare(config: ExperimentConfig, strategies) -> dict[str, ExperimentResult]:
    results = {}
    for s in strategies:
        cfg = dataclasses.replace(config, strategy=Strategy.parse(str(s)).value)
        results[cfg.strategy] = run_experiment(cfg)
    return results


def compare_csv(results: dict[str, ExperimentResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_HEADER)
    for name, res in results.items():
        agg = res.aggregate
        evals = sorted({r.evaluations for r in res.runs})
        w.writerow([name, res.config.runs, len(res.runs)]
                   + [_num(agg[f"{m}_{s}"]) for m in METRICS for s in ("mean", "std")]
                   + [";".join(str(e) for e in evals)])
    return buf.getvalue()


def budget_parity(results: dict[str, ExperimentResult]) -> bool:
    """True iff every run of every strategy used the same evaluation count."""
    counts = {r.evaluations for res in results.values() for r in res.runs}
    per_env = {tuple(r.evaluations_per_env) for res in results.values() for r in res.runs}
    return len(counts) == 1 and len(per_env) == 1


def write_comparison(results: dict[str, ExperimentResult], path, table_name: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    for name, res in results.items():
        write_results(res, out / name)
    table = out / table_name
    table.write_text(compare_csv(results), encoding="utf-8")
    return table
