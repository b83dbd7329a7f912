#!/usr/bin/env python3
"""Experiment runner for the acceptance suites.

Runs the check suites plus a single-run performance measurement and saves
per-suite reports and an overall summary for review.

Experiments:
- subcritical: alpha_R=0.8, alpha_B=0.5 at q=g
- supercritical_qg: alpha_R=2, alpha_B=0.75 at q=g
- supercritical_qgg: alpha_R=1.5, alpha_B=1, q=2000
- figure1: simulated A_B*/q against the r=2 closed form
- timing: eta*T_q against the timing integral
- oracle: chain vs exact joint law on n=8
- binomial_law: suprathreshold counts against Bin(n_W, pi_S), both colors
- stochastic_bounds: suprathreshold counts given few black marks against binomial bounds
- couplings: seed monotonicity and stopped dominance
- closed_form: r=2 closed forms against the numeric route
- performance: one supercritical chain run at n=10^6

Usage:
    python experiments/run_experiments.py [--scale S] [--seed N] [--experiments NAME ...]
    poetry run python experiments/run_experiments.py

Example:
    python experiments/run_experiments.py --scale 0.1 --experiments subcritical closed_form
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.application.theorem_checks import (  # noqa: E402
    CheckResult,
    Suite,
    SuiteReport,
    theorem_checks,
)
from src.domain.chain.simulator import run_chain  # noqa: E402
from src.domain.models.params import ModelParams, Regime, RegimeSpec  # noqa: E402
from src.infrastructure.export import (  # noqa: E402
    build_id,
    provenance,
    write_json,
    write_rows,
)
from src.infrastructure.rng import RngStream  # noqa: E402

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

PERFORMANCE_LIMIT_SECONDS = 60.0


@dataclass
class ExperimentConfig:
    """Configuration for a single experiment.

    Attributes:
        name: Experiment name (e.g., "subcritical", "performance")
        suite: Check suite to run, None for the performance measurement
        description: Human-readable description
    """

    name: str
    suite: Optional[Suite]
    description: str = ""


@dataclass
class ExperimentResult:
    """Result from a single experiment.

    Attributes:
        config_name: Experiment name
        checks: Individual check outcomes
        total_time_seconds: Wall-clock time
        error: Error message if the experiment crashed
    """

    config_name: str
    checks: List[CheckResult] = field(default_factory=list)
    total_time_seconds: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)

    def to_summary_dict(self) -> Dict[str, Any]:
        """Convert to summary dictionary for JSON serialization."""
        return {
            "config_name": self.config_name,
            "num_checks": len(self.checks),
            "num_passed": sum(check.passed for check in self.checks),
            "total_time_seconds": round(self.total_time_seconds, 2),
            "status": "pass" if self.passed else ("error" if self.error else "fail"),
            "error": self.error,
        }


EXPERIMENT_CONFIGS = [
    ExperimentConfig(
        "subcritical",
        Suite.SUBCRITICAL,
        "q=g, alpha_R=0.8, alpha_B=0.5: A_S*/g within 10% of alpha_S + z_S",
    ),
    ExperimentConfig(
        "supercritical_qg",
        Suite.SUPERCRITICAL_QG,
        "q=g, alpha_R=2, alpha_B=0.75: A_R*/n >= 0.99, A_B*/g within 15% of 0.9527",
    ),
    ExperimentConfig(
        "supercritical_qgg",
        Suite.SUPERCRITICAL_QGG,
        "q=2000, alpha_R=1.5, alpha_B=1: A_R*/n >= 0.99, A_B*/n <= 0.05",
    ),
    ExperimentConfig(
        "figure1",
        Suite.FIGURE1,
        "alpha_R grid in (1.2, 4), alpha_B in {0.5, 0.75}: within CI + 15%",
    ),
    ExperimentConfig(
        "timing",
        Suite.TIMING,
        "q=g, alpha_R=2, alpha_B=0.75, kappa=1: eta*T_q within 15%",
    ),
    ExperimentConfig(
        "oracle",
        Suite.ORACLE,
        "n=8: TV(chain, exact) < 0.02 in every run mode",
    ),
    ExperimentConfig(
        "binomial_law",
        Suite.BINOMIAL_LAW,
        "n=500: chi-square of |S_R[k]| and |S_B[k]| against Bin(n_W, pi_S), k in 5, 50, 200",
    ),
    ExperimentConfig(
        "stochastic_bounds",
        Suite.STOCHASTIC_BOUNDS,
        "n=500: DKW test of |S_S[k]| given N_B[k] <= h against the binomial bounds",
    ),
    ExperimentConfig(
        "couplings",
        Suite.COUPLINGS,
        "coupled pairs: seed monotonicity and stopped dominance on every pair",
    ),
    ExperimentConfig(
        "closed_form",
        Suite.CLOSED_FORM,
        "r=2 closed forms vs quadrature/ODE on a 20-point lattice",
    ),
    ExperimentConfig(
        "performance",
        None,
        f"one supercritical chain run at n=10^6, p=10^-5 under {PERFORMANCE_LIMIT_SECONDS:.0f}s",
    ),
]


def measure_performance(seed: int) -> CheckResult:
    """Time one chain run of the supercritical q=g instance at n=10^6."""
    n, p = 1_000_000, 1e-5
    regime = RegimeSpec.for_instance(Regime.Q_EQUALS_G, 2.0, 0.75, n, p, 2)
    a_r, a_b = regime.seed_counts()
    params = ModelParams(n=n, p=p, r=2, a_r=a_r, a_b=a_b, seed=seed)
    start = time.perf_counter()
    result = run_chain(params, RngStream(seed, 0), regime=regime)
    elapsed = time.perf_counter() - start
    logger.info(f"  A_R*={result.a_r_star}, A_B*={result.a_b_star}, {elapsed:.1f}s")
    return CheckResult(
        "chain run at n=10^6",
        elapsed < PERFORMANCE_LIMIT_SECONDS,
        elapsed,
        PERFORMANCE_LIMIT_SECONDS,
        0.0,
        "seconds, <",
    )


class ExperimentRunner:
    """Runs the acceptance experiments and saves their reports."""

    def __init__(
        self,
        output_dir: Optional[str] = None,
        scale: float = 1.0,
        seed: int = 0,
        workers: Optional[int] = None,
    ):
        """Initialize the experiment runner.

        Args:
            output_dir: Directory to save results (auto-generated if None)
            scale: Replication multiplier in (0, 1]
            seed: Master seed
            workers: Process count (default from CB_THREADS)
        """
        self.scale = scale
        self.seed = seed
        self.workers = workers

        # Create output directory with timestamp
        timestamp = datetime.now().strftime("%Y_%m_%d_%H_%M")
        if output_dir is None:
            output_dir = str(project_root / "experiments" / f"results_{timestamp}")

        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

        self.results: List[ExperimentResult] = []

        logger.info("Experiment runner initialized")
        logger.info(f"  Scale: {scale}")
        logger.info(f"  Seed: {seed}")
        logger.info(f"  Output: {self.output_dir}")

    def run_single_experiment(self, config: ExperimentConfig) -> ExperimentResult:
        """Run one experiment; a crash is recorded, not raised."""
        logger.info(f"\n{'='*60}")
        logger.info(f"Running experiment: {config.name}")
        logger.info(f"Description: {config.description}")
        logger.info(f"{'='*60}")

        start_time = time.time()
        try:
            if config.suite is None:
                checks = [measure_performance(self.seed)]
            else:
                report = theorem_checks(config.suite, self.scale, self.seed, self.workers)
                checks = report.checks
            result = ExperimentResult(config.name, checks, time.time() - start_time)
        except Exception as e:
            logger.exception(f"Experiment {config.name} failed")
            result = ExperimentResult(
                config.name, total_time_seconds=time.time() - start_time, error=str(e)
            )

        logger.info(f"\nExperiment {config.name} completed:")
        logger.info(f"  Status: {result.to_summary_dict()['status']}")
        logger.info(f"  Time: {result.total_time_seconds:.1f}s")
        return result

    def run_all_experiments(
        self, configs: Optional[List[ExperimentConfig]] = None
    ) -> List[ExperimentResult]:
        """Run the given experiments (default: all) and save every report."""
        if configs is None:
            configs = EXPERIMENT_CONFIGS

        logger.info(f"\n{'#'*60}")
        logger.info(f"Starting experiment suite with {len(configs)} experiments")
        logger.info(f"{'#'*60}\n")

        self.results = []
        for i, config in enumerate(configs, 1):
            logger.info(f"\n[Experiment {i}/{len(configs)}]")
            result = self.run_single_experiment(config)
            self.results.append(result)
            self._save_experiment_result(result, config)

        self._save_summary(configs)

        logger.info(f"\n{'#'*60}")
        logger.info("All experiments completed!")
        logger.info(f"Results saved to: {self.output_dir}")
        logger.info(f"{'#'*60}")
        return self.results

    def _save_experiment_result(self, result: ExperimentResult, config: ExperimentConfig) -> None:
        write_rows(
            self.output_dir / f"{config.name}.csv",
            SuiteReport.CSV_HEADER,
            (
                (config.name, c.name, c.passed, c.measured, c.target, c.tolerance, c.note)
                for c in result.checks
            ),
            provenance(self.seed, {"experiment": config.name, "scale": self.scale}),
        )

    def _save_summary(self, configs: List[ExperimentConfig]) -> None:
        """Markdown table for reading and summary.json for scripts."""
        summary_path = self.output_dir / "summary_all_experiments.md"
        with open(summary_path, "w") as f:
            f.write("# Acceptance Summary\n\n")
            f.write(f"**Build:** {build_id()}\n")
            f.write(f"**Seed:** {self.seed}\n")
            f.write(f"**Scale:** {self.scale}\n")
            f.write(f"**Run date:** {datetime.now().isoformat()}\n\n")

            f.write("## Results\n\n")
            f.write("| Experiment | Checks passed | Time (s) | Status |\n")
            f.write("|------------|---------------|----------|--------|\n")
            for result in self.results:
                summary = result.to_summary_dict()
                f.write(
                    f"| {summary['config_name']} "
                    f"| {summary['num_passed']}/{summary['num_checks']} "
                    f"| {summary['total_time_seconds']:.1f} "
                    f"| {summary['status']} |\n"
                )

            f.write("\n## Checks\n\n")
            for result in self.results:
                for check in result.checks:
                    mark = "pass" if check.passed else "FAIL"
                    f.write(
                        f"- {result.config_name} / {check.name}: measured "
                        f"{check.measured:.6g}, target {check.target:.6g} "
                        f"({check.note}, tol {check.tolerance:g}) [{mark}]\n"
                    )

            f.write("\n## Experiment Details\n\n")
            for config in configs:
                f.write(f"- **{config.name}**: {config.description}\n")

        write_json(
            {
                "experiment_params": {
                    "build": build_id(),
                    "seed": self.seed,
                    "scale": self.scale,
                    "run_date": datetime.now().isoformat(),
                },
                "results": [r.to_summary_dict() for r in self.results],
            },
            self.output_dir / "summary.json",
        )
        logger.info(f"Saved summary to {summary_path}")


def main():
    """Main entry point for experiment runner."""
    parser = argparse.ArgumentParser(description="Run the acceptance experiments")
    parser.add_argument(
        "--scale",
        type=float,
        default=1.0,
        help="Replication multiplier in (0, 1] (default: 1)",
    )
    parser.add_argument("--seed", type=int, default=0, help="Master seed (default: 0)")
    parser.add_argument("--workers", type=int, help="Process count (default: CB_THREADS)")
    parser.add_argument(
        "--output-dir",
        type=str,
        help="Output directory for results (auto-generated if not specified)",
    )
    parser.add_argument(
        "--experiments",
        type=str,
        nargs="+",
        help="Specific experiments to run (default: all)",
    )
    args = parser.parse_args()

    if not 0 < args.scale <= 1:
        logger.error(f"--scale must lie in (0, 1], got {args.scale}")
        sys.exit(2)

    configs = EXPERIMENT_CONFIGS
    if args.experiments:
        names = set(args.experiments)
        configs = [c for c in EXPERIMENT_CONFIGS if c.name in names]
        if not configs:
            logger.error(
                f"No valid experiments found. Available: {[c.name for c in EXPERIMENT_CONFIGS]}"
            )
            sys.exit(2)

    runner = ExperimentRunner(args.output_dir, args.scale, args.seed, args.workers)
    results = runner.run_all_experiments(configs)

    print("\n" + "=" * 60)
    print("EXPERIMENT SUMMARY")
    print("=" * 60)
    print(f"\nResults saved to: {runner.output_dir}\n")
    for result in results:
        summary = result.to_summary_dict()
        print(
            f"{summary['status'].upper():5} {summary['config_name']:18} | "
            f"{summary['num_passed']}/{summary['num_checks']} checks | "
            f"{summary['total_time_seconds']:.1f}s"
        )
    print("=" * 60)

    sys.exit(0 if all(r.passed for r in results) else 1)


if __name__ == "__main__":
    main()
