"""Identification experiments: baselines and random-walk solver over an iteration ladder.

For the adaptive filters a ladder point t means t sample updates. For the
random-walk solver it means t walks per unknown (under the default
`ladder` walks policy), which is its unit of work in the multiplication
accounting.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, List

from baselines.base import Algorithm
from baselines.filters import init, mult_count_per_step, regressor_frames, step
from corrmath.matrices import norm2
from harness.config import AlgorithmSpec, CorrelationKind, ExperimentConfig
from harness.report import ExperimentReport, ReportRow
from mcsolve.convergence import Verdict, precheck_convergence, require_convergent
from mcsolve.walks import solve
from sigmodel.correlation import empirical_correlations, exact_correlations
from sigmodel.models import SampleSet
from sigmodel.process import simulate
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.3.0"


class IdentificationRunner:
    """Builds the problem once, then runs each configured algorithm against it."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.plant = config.plant
        self.h = self.plant.taps
        self.ladder = config.iteration_ladder

        source = config.correlation_source
        n_samples = source.n_samples if source.kind is CorrelationKind.EMPIRICAL else max(self.ladder)
        if max(self.ladder) > n_samples:
            raise ValidationError(
                f"iteration ladder reaches {max(self.ladder)} but only {n_samples} samples are configured"
            )
        self.samples: SampleSet = simulate(self.plant, config.input_model, n_samples, config.seed)

        if source.kind is CorrelationKind.EMPIRICAL:
            self.R, self.b = empirical_correlations(self.samples, self.plant.n)
        else:
            self.R, self.b = exact_correlations(self.plant, config.input_model)

    def run(self, workers: int = 1) -> ExperimentReport:
        config = self.config
        precheck = precheck_convergence(self.R)
        forced = False
        if any(a.algorithm is Algorithm.MCMC for a in config.algorithms):
            require_convergent(self.R, force=config.mcmc.force)
            forced = precheck.verdict is Verdict.DIVERGENT

        tasks: List[Callable[[], List[ReportRow]]] = [self._task(spec) for spec in config.algorithms]
        if workers > 1 and len(tasks) > 1:
            results: Dict[int, List[ReportRow]] = {}
            with ThreadPoolExecutor(max_workers=workers) as executor:
                futures = {executor.submit(task): k for k, task in enumerate(tasks)}
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
            ordered = [results[k] for k in range(len(tasks))]
        else:
            ordered = [task() for task in tasks]

        # merge key (algorithm, iterations); algorithms rank in config order
        rank = {spec.algorithm.value: k for k, spec in enumerate(config.algorithms)}
        rows = sorted((row for chunk in ordered for row in chunk),
                      key=lambda row: (rank[row.algorithm], row.iterations))
        metadata = {
            "config": config.to_dict(),
            "precheck": precheck.to_dict(),
            "forced_divergent": forced,
            "tool_version": TOOL_VERSION,
        }
        logger.info("identification finished: %d rows", len(rows))
        return ExperimentReport(rows=rows, metadata=metadata)

    def _task(self, spec: AlgorithmSpec) -> Callable[[], List[ReportRow]]:
        if spec.algorithm is Algorithm.MCMC:
            return lambda: self._run_mcmc(spec)
        return lambda: self._run_baseline(spec)

    def _run_baseline(self, spec: AlgorithmSpec) -> List[ReportRow]:
        name = spec.algorithm.value
        state = init(spec.algorithm, self.plant.n, spec.params, signal_power=self.R.r0)
        checkpoints = set(self.ladder)
        rows = []
        start = time.perf_counter()
        for t, frame in enumerate(regressor_frames(self.samples, self.plant.n), start=1):
            state = step(state, frame)
            if t in checkpoints:
                rows.append(ReportRow(
                    algorithm=name,
                    iterations=t,
                    error_norm=norm2(self.h - state.w),
                    multiplications=state.mult_count,
                    wall_ms=(time.perf_counter() - start) * 1e3,
                ))
            if t >= self.ladder[-1]:
                break
        logger.debug("%s: final error %.3e", name, rows[-1].error_norm)
        return rows

    def _run_mcmc(self, spec: AlgorithmSpec) -> List[ReportRow]:
        mc = self.config.mcmc
        per_walk = mult_count_per_step(Algorithm.MCMC, self.plant.n)
        rows = []
        for t in self.ladder:
            walks = mc.walks_at(t)
            start = time.perf_counter()
            w, _ = solve(self.R, self.b, mc.probability_scheme, walks=walks, seed=self.config.seed,
                         force=mc.force, max_steps=mc.max_steps)
            rows.append(ReportRow(
                algorithm=spec.algorithm.value,
                iterations=t,
                error_norm=norm2(self.h - w),
                multiplications=per_walk * walks,
                wall_ms=(time.perf_counter() - start) * 1e3,
            ))
        return rows


def run_identification(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    return IdentificationRunner(config).run(workers=workers)
