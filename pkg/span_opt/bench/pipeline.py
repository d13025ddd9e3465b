"""
Experiment runner.

Builds the problem once, warms the start point up with a few SVRG epochs,
then runs every method from that same start point and writes one trace CSV
per method plus ``summary.csv``. Methods run one after another unless
``parallel`` is set, in which case each gets its own process and clock.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..baselines import BaselineConfig, run_baseline, run_svrg
from ..config import Config
from ..core import TraceRecord, run_span
from ..datasets import (
    load_libsvm,
    normalize_rows,
    subsample_features,
    subsample_rows,
    synth_logistic,
    synth_quadratic,
    to_binary_dataset,
)
from ..errors import ConfigError, NoMatchingExamples, ParseError
from ..objectives import Dataset, ObjectiveConfig, problem_dim, problem_size
from ..utils.helpers import measure_performance
from ..utils.logger import setup_logger
from .schemas import ExperimentConfig, ExperimentResult, MethodResult, MethodSpec

logger = setup_logger(__name__)

SUMMARY_FILE = "summary.csv"
CONFIG_SNAPSHOT_FILE = "experiment.json"
SUMMARY_COLUMNS = [
    "name", "method", "status", "iterations", "final_loss", "final_grad_norm", "total_seconds", "error",
]


def build_problem(cfg: ExperimentConfig) -> Tuple[ObjectiveConfig, Optional[Dataset], np.ndarray]:
    """Objective, dataset (None for quadratics) and the raw initializer"""
    spec = cfg.dataset
    if spec.kind == "synthetic_quadratic":
        problem = synth_quadratic(spec.spectrum, seed=spec.seed, reg_a=cfg.reg_a)
        return problem.objective, None, problem.x0

    if spec.kind == "synthetic_logistic":
        data = synth_logistic(spec.n_samples, spec.dim, spec.decay, spec.seed)
    else:
        try:
            examples, _ = load_libsvm(spec.path)
            data = to_binary_dataset(examples, spec.positive_label, spec.negative_label, dense=spec.dense)
        except (OSError, ParseError, NoMatchingExamples) as exc:
            raise ConfigError(f"cannot load dataset {spec.path}: {exc}") from exc

    if spec.max_samples and spec.max_samples < data.n_samples:
        data = subsample_rows(data, spec.max_samples, spec.seed)
    if spec.n_features and spec.n_features < data.dim:
        data, _ = subsample_features(data, spec.n_features, spec.seed)
    if spec.normalize:
        data, _ = normalize_rows(data)

    logger.info(f"📊 Dataset: {data.to_dict()}")
    return ObjectiveConfig(cfg.loss_kind, cfg.reg_a), data, np.zeros(data.dim)


def preiterate(cfg: ExperimentConfig, objective: ObjectiveConfig, data: Optional[Dataset], x_init: np.ndarray) -> np.ndarray:
    """Shared start point: ``preiterate_svrg_epochs`` SVRG epochs from x_init"""
    if cfg.preiterate_svrg_epochs == 0:
        return x_init
    warmup = BaselineConfig(
        method="svrg",
        T=cfg.preiterate_svrg_epochs,
        eta=cfg.preiterate_eta,
        b=min(cfg.preiterate_b, problem_size(objective, data)),
        seed=cfg.seed,
    )
    x0, trace = run_svrg(warmup, objective, data, x_init)
    if trace:
        logger.info(f"🔥 SVRG pre-iteration: {len(trace)} epochs, loss {trace[-1].loss:.6e}")
    return x0


def trace_frame(trace: List[TraceRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.to_dict() for record in trace], columns=Config.TRACE_COLUMNS)


def write_trace(trace: List[TraceRecord], path: str) -> str:
    trace_frame(trace).to_csv(path, index=False, na_rep="")
    return path


def run_method(spec: MethodSpec, objective: ObjectiveConfig, data: Optional[Dataset], x0: np.ndarray):
    if spec.method == "span":
        return run_span(spec.config, objective, data, x0)
    return run_baseline(spec.config, objective, data, x0)


def execute_method(
    spec: MethodSpec,
    objective: ObjectiveConfig,
    data: Optional[Dataset],
    x0: np.ndarray,
    x0_bytes: bytes,
    trace_path: str,
) -> MethodResult:
    """Run one method and write its trace; failures are recorded, never raised"""
    result = MethodResult(name=spec.name, method=spec.method)
    try:
        if x0.tobytes() != x0_bytes:
            raise RuntimeError("start point differs from the one shared by the other methods")
        _, trace = run_method(spec, objective, data, x0.copy())
        result.trace_path = write_trace(trace, trace_path)
        result.iterations = len(trace)
        if trace:
            result.final_loss = trace[-1].loss
            result.final_grad_norm = trace[-1].grad_norm
            result.total_seconds = trace[-1].wall_clock_s
        else:
            result.total_seconds = 0.0
        result.status = "success"
    except Exception as exc:
        logger.error(f"❌ {spec.name} ({spec.method}) failed: {type(exc).__name__}: {exc}")
        result.status = "error"
        result.error = f"{type(exc).__name__}: {exc}"
    return result


class ExperimentRunner:
    """Runs the methods of one experiment from a shared start point"""

    def __init__(self, cfg: ExperimentConfig, parallel: bool = False):
        self.cfg = cfg
        self.parallel = parallel
        self.objective: Optional[ObjectiveConfig] = None
        self.data: Optional[Dataset] = None
        self.x0: Optional[np.ndarray] = None
        self.start_time = None

    def _prepare_output(self) -> None:
        try:
            os.makedirs(self.cfg.output_dir, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {self.cfg.output_dir}: {exc}") from exc
        if not os.access(self.cfg.output_dir, os.W_OK):
            raise ConfigError(f"output directory {self.cfg.output_dir} is not writable")

    def _check_methods(self) -> None:
        d = problem_dim(self.objective, self.data)
        n = problem_size(self.objective, self.data)
        for spec in self.cfg.methods:
            try:
                spec.config.validate(d, n)
            except ValueError as exc:
                raise ConfigError(f"{spec.name}: {exc}") from exc

    def prepare(self) -> np.ndarray:
        """Validate, build the problem and compute the shared start point"""
        self.cfg.validate()
        self._prepare_output()
        self.objective, self.data, x_init = build_problem(self.cfg)
        self._check_methods()
        self.x0 = preiterate(self.cfg, self.objective, self.data, x_init)
        with open(os.path.join(self.cfg.output_dir, CONFIG_SNAPSHOT_FILE), "w", encoding="utf-8") as handle:
            json.dump(self.cfg.to_dict(), handle, indent=2, default=str)
        return self.x0

    def _trace_path(self, spec: MethodSpec) -> str:
        return os.path.join(self.cfg.output_dir, f"{spec.name}.csv")

    def _run_sequential(self, x0_bytes: bytes) -> List[MethodResult]:
        results = []
        for spec in self.cfg.methods:
            logger.info(f"▶️ Running {spec.name} ({spec.method})")
            results.append(
                execute_method(spec, self.objective, self.data, self.x0, x0_bytes, self._trace_path(spec))
            )
        return results

    def _run_parallel(self, x0_bytes: bytes) -> List[MethodResult]:
        logger.info(f"▶️ Running {len(self.cfg.methods)} methods in separate processes")
        with ProcessPoolExecutor(max_workers=len(self.cfg.methods)) as pool:
            futures = [
                pool.submit(execute_method, spec, self.objective, self.data, self.x0, x0_bytes, self._trace_path(spec))
                for spec in self.cfg.methods
            ]
            return [future.result() for future in futures]

    def run(self) -> ExperimentResult:
        self.start_time = time.time()
        logger.info("\n" + "=" * 60)
        logger.info(f"🚀 EXPERIMENT: {self.cfg.name}")
        logger.info("=" * 60)
        logger.info(f"⏰ Start time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

        self.prepare()
        x0_bytes = self.x0.tobytes()
        results = self._run_parallel(x0_bytes) if self.parallel else self._run_sequential(x0_bytes)

        summary_path = os.path.join(self.cfg.output_dir, SUMMARY_FILE)
        pd.DataFrame([r.to_dict() for r in results], columns=SUMMARY_COLUMNS).to_csv(
            summary_path, index=False, na_rep=""
        )
        experiment = ExperimentResult(self.cfg.name, self.cfg.output_dir, results, summary_path)
        self._print_summary(experiment)
        return experiment

    def _print_summary(self, experiment: ExperimentResult) -> None:
        total_time = time.time() - self.start_time if self.start_time else 0.0
        logger.info("\n" + "=" * 60)
        logger.info("📋 EXPERIMENT SUMMARY")
        logger.info("=" * 60)
        logger.info(f"{'Method':<16} {'Status':<10} {'Iters':<6} {'Loss':<14} {'Grad':<10} {'Seconds':<8}")
        logger.info("-" * 60)
        for r in experiment.results:
            status = "✅ OK" if r.ok else "❌ ERROR"
            loss = f"{r.final_loss:.6e}" if r.final_loss is not None else "-"
            grad = f"{r.final_grad_norm:.2e}" if r.final_grad_norm is not None else "-"
            seconds = f"{r.total_seconds:.3f}" if r.total_seconds is not None else "-"
            logger.info(f"{r.name:<16} {status:<10} {r.iterations:<6} {loss:<14} {grad:<10} {seconds:<8}")
        logger.info("-" * 60)
        logger.info(f"⏱️ Total execution time: {total_time:.1f}s")
        logger.info(f"📁 Results in {experiment.output_dir}")
        logger.info("=" * 60)


@measure_performance
def run_experiment(cfg: ExperimentConfig, parallel: bool = False) -> ExperimentResult:
    """Run every method of ``cfg`` and write the trace CSVs and summary"""
    return ExperimentRunner(cfg, parallel=parallel).run()
