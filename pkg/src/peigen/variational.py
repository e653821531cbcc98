"""Hybrid classical loop: per-stage bounded scalar minimization of the
post-selected average energy over tau (coarse grid + golden-section
refinement), and the variational run driver built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cooling import (
    CoolingTrace,
    ExactW,
    OperatorMode,
    RunConfig,
    Variational,
    _expectation_run,
    cooling_step,
)
from .errors import ConfigError
from .models import SumHamiltonian
from .operators import QuantumState, expectation

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    """Bounded 1-D search domain and budget for one stage.

    Defaults keep the per-stage trial count near the ~10 evaluations the
    whole-run trial budget allows: a 7-point coarse grid plus golden-section
    refinement until x_tol or the 12-evaluation cap."""

    tau_lo: float = 0.01
    tau_hi: float = 1.0
    x_tol: float = 1e-3
    max_evals: int = 12
    coarse_grid: int = 7

    def __post_init__(self) -> None:
        if not 0 < self.tau_lo < self.tau_hi:
            raise ConfigError(
                f"need 0 < tau_lo < tau_hi, got [{self.tau_lo}, {self.tau_hi}]"
            )
        if not self.x_tol > 0:
            raise ConfigError(f"x_tol must be > 0, got {self.x_tol}")
        if self.max_evals < 3:
            raise ConfigError(f"max_evals must be >= 3, got {self.max_evals}")
        if self.coarse_grid < 2:
            raise ConfigError(f"coarse_grid must be >= 2, got {self.coarse_grid}")


def resolve_optimizer(opt: object | None) -> OptimizerConfig:
    if opt is None:
        return OptimizerConfig()
    if isinstance(opt, OptimizerConfig):
        return opt
    raise ConfigError(f"optimizer must be an OptimizerConfig, got {type(opt).__name__}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    tau: float
    energy: float
    p0: float


@dataclass(frozen=True)
class MinimizeResult:
    tau_star: float
    energy_star: float
    p0_star: float
    trials: tuple[TrialRecord, ...]
    budget_exhausted: bool


def stage_objective(
    state: QuantumState,
    h: SumHamiltonian,
    tau: float,
    operator_mode: OperatorMode = ExactW(),
) -> tuple[float, float]:
    """Post-selected average energy of the 0-branch at this tau, and its p0.

    A numerically certain failure (p0 < 1e-14) is reported as (+inf, 0.0) so
    a minimizer simply avoids it."""
    step = cooling_step(state, h, tau, operator_mode)
    if step.state0 is None:
        return math.inf, 0.0
    return expectation(step.state0, h.total), step.p0


def minimize_stage(
    state: QuantumState,
    h: SumHamiltonian,
    opt: OptimizerConfig,
    *,
    operator_mode: OperatorMode = ExactW(),
) -> MinimizeResult:
    """Coarse grid, then golden-section refinement of the bracketing interval.

    Every objective evaluation is logged as a trial, in order. The returned
    tau_star is the best evaluated point; exact ties go to the smaller tau.
    If max_evals runs out before the interval shrinks to x_tol, the
    best-so-far is returned with budget_exhausted set."""
    trials: list[TrialRecord] = []

    def ev(tau: float) -> float:
        energy, p0 = stage_objective(state, h, tau, operator_mode)
        trials.append(TrialRecord(len(trials), float(tau), energy, p0))
        return energy

    xs = np.linspace(opt.tau_lo, opt.tau_hi, opt.coarse_grid)
    for x in xs:
        if len(trials) >= opt.max_evals:
            break
        ev(float(x))
    n_grid = len(trials)
    i_best = min(range(n_grid), key=lambda i: (trials[i].energy, trials[i].tau))
    a = float(xs[max(i_best - 1, 0)])
    b = float(xs[min(i_best + 1, n_grid - 1)])

    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1 = ev(x1) if len(trials) < opt.max_evals else None
    f2 = ev(x2) if len(trials) < opt.max_evals else None
    while (
        f1 is not None
        and f2 is not None
        and (b - a) > opt.x_tol
        and len(trials) < opt.max_evals
    ):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = ev(x1) if len(trials) < opt.max_evals else None
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = ev(x2) if len(trials) < opt.max_evals else None

    best = min(trials, key=lambda t: (t.energy, t.tau))
    return MinimizeResult(
        tau_star=best.tau,
        energy_star=best.energy,
        p0_star=best.p0,
        trials=tuple(trials),
        budget_exhausted=(b - a) > opt.x_tol,
    )


def variational_run(
    initial: QuantumState,
    h: SumHamiltonian,
    config: RunConfig,
    *,
    sector_info: Optional[str] = None,
) -> CoolingTrace:
    """Optimize tau anew at every stage, advancing along the 0-branch.

    Stop rule and trace layout match fixed_step_run; each stage additionally
    carries its full trial log and the optimized schedule is recoverable
    from `trace.schedule`."""
    if not isinstance(config.mode, Variational):
        raise ConfigError("variational_run requires a Variational mode")
    return _expectation_run(initial, h, config, sector_info)


def run(
    initial: QuantumState,
    h: SumHamiltonian,
    config: RunConfig,
    *,
    sector_info: Optional[str] = None,
) -> CoolingTrace:
    """Dispatch on the configured mode (fixed-step or variational)."""
    from .cooling import fixed_step_run

    if isinstance(config.mode, Variational):
        return variational_run(initial, h, config, sector_info=sector_info)
    return fixed_step_run(initial, h, config, sector_info=sector_info)
