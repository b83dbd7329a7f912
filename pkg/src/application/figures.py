"""Data behind the two black-limit figures for r = 2, q = g.

fig1 covers alpha_R > 1 > alpha_B, fig2 covers alpha_R > alpha_B > 1. Each
row pairs the closed-form limit of A_B*/g with an optional chain-simulator
estimate.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.application.experiment_service import (
    ExperimentPlan,
    Simulator,
    Statistic,
    run_plan,
)
from src.domain.models.errors import DomainError
from src.domain.models.params import ModelParams, Regime, RegimeSpec
from src.domain.theory.closed_form import black_limit_r2
from src.infrastructure.export import write_rows

logger = logging.getLogger(__name__)

FIGURE_HEADER = ("alpha_R", "alpha_B", "theory_limit", "sim_mean", "sim_ci_lo", "sim_ci_hi")


class Figure(Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"

    def admits(self, alpha_r: float, alpha_b: float) -> bool:
        if self is Figure.FIG1:
            return alpha_r > 1.0 > alpha_b > 0.0
        return alpha_r > alpha_b > 1.0


@dataclass(frozen=True)
class FigureRow:
    alpha_r: float
    alpha_b: float
    theory_limit: float
    sim_mean: Optional[float] = None
    sim_ci_lo: Optional[float] = None
    sim_ci_hi: Optional[float] = None

    def as_row(self):
        return (
            self.alpha_r,
            self.alpha_b,
            self.theory_limit,
            self.sim_mean,
            self.sim_ci_lo,
            self.sim_ci_hi,
        )


def figure_data(
    which: Figure,
    alpha_r_values: Sequence[float],
    alpha_b_values: Sequence[float],
    n: int,
    p: float,
    replications: int = 0,
    seed: int = 0,
    workers: Optional[int] = None,
) -> List[FigureRow]:
    """Theory limit (and simulated mean when replications > 0) on a grid.

    Rows follow alpha_R-major order of the grid.

    Raises:
        DomainError: If a grid point lies outside the figure's region
    """
    grid = [(a_r, a_b) for a_r in alpha_r_values for a_b in alpha_b_values]
    for alpha_r, alpha_b in grid:
        if not which.admits(alpha_r, alpha_b):
            raise DomainError(
                f"{which.value} needs "
                + ("alpha_R > 1 > alpha_B" if which is Figure.FIG1 else "alpha_R > alpha_B > 1")
                + f", got alpha_R={alpha_r}, alpha_B={alpha_b}"
            )

    simulated = {}
    if replications > 0:
        regime = RegimeSpec.for_instance(
            Regime.Q_EQUALS_G, grid[0][0], grid[0][1], n, p, 2
        )
        plan = ExperimentPlan(
            base=ModelParams(n=n, p=p, r=2, a_r=1, a_b=1, seed=seed),
            regime=regime,
            sweep=(("alpha_R", tuple(alpha_r_values)), ("alpha_B", tuple(alpha_b_values))),
            replications=replications,
            simulator=Simulator.CHAIN,
            outputs=(Statistic.AB_OVER_Q,),
        )
        result = run_plan(plan, workers)
        for point, (alpha_r, alpha_b) in zip(result.points, grid):
            simulated[(alpha_r, alpha_b)] = point.stats[Statistic.AB_OVER_Q]

    rows = []
    for alpha_r, alpha_b in grid:
        summary = simulated.get((alpha_r, alpha_b))
        rows.append(
            FigureRow(
                alpha_r=alpha_r,
                alpha_b=alpha_b,
                theory_limit=black_limit_r2(alpha_r, alpha_b),
                sim_mean=summary.mean if summary else None,
                sim_ci_lo=summary.ci_lo if summary else None,
                sim_ci_hi=summary.ci_hi if summary else None,
            )
        )
    logger.info(f"{which.value}: {len(rows)} grid points, {replications} replications each")
    return rows


def write_figure_csv(
    rows: Sequence[FigureRow], path: Path, provenance: Optional[Dict[str, Any]] = None
) -> Path:
    return write_rows(path, FIGURE_HEADER, (row.as_row() for row in rows), provenance)
