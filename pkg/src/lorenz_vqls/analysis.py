"""Error quantification: solver-vs-solver relative error series, step-size
error estimation by step halving, and condition-number sweeps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .linalg import condition_number, hermitian_dilation
from .lorenz import (
    LorenzParams,
    State3,
    Trajectory,
    VqlsConfig,
    build_nonlinear_system,
    step_explicit,
    step_solve,
)


@dataclass(frozen=True)
class ErrorSeries:
    values: np.ndarray
    h: float
    description: str


@dataclass(frozen=True)
class RichardsonEstimate:
    e_x: float
    e_y: float
    e_z: float
    h: float

    @property
    def total(self) -> float:
        return abs(self.e_x) + abs(self.e_y) + abs(self.e_z)


def relative_error(wc: State3, wq: State3) -> float:
    """Summed absolute coordinate difference over 1 + the first state's size.

    Not symmetric: the denominator uses `wc` (the reference trajectory).
    """
    num = abs(wc.x - wq.x) + abs(wc.y - wq.y) + abs(wc.z - wq.z)
    den = 1.0 + abs(wc.x) + abs(wc.y) + abs(wc.z)
    return num / den


def compare_trajectories(classical: Trajectory, quantum: Trajectory) -> ErrorSeries:
    """Pointwise relative error at every index n >= 1."""
    if len(classical) != len(quantum):
        raise LengthMismatch(
            f"trajectory lengths differ: {len(classical)} vs {len(quantum)}"
        )
    if classical.h != quantum.h:
        raise ValueError("trajectories use different step sizes")
    if not np.array_equal(classical.states[0], quantum.states[0]):
        raise ValueError("trajectories start from different states")
    values = np.array(
        [
            relative_error(classical.state_at(n), quantum.state_at(n))
            for n in range(1, len(classical))
        ]
    )
    return ErrorSeries(
        values=values,
        h=classical.h,
        description=f"{classical.solver} vs {quantum.solver}",
    )


def _step(state, params, h, solver, vqls_config, theta_init):
    if solver == "explicit":
        return step_explicit(state, params, h), None
    return step_solve(
        state, params, h, solver=solver, vqls_config=vqls_config, theta_init=theta_init
    )


def _estimate(common: State3, fine2: State3, coarse: State3, h: float):
    # Gradients over the shared 2h span.  A single step from the common point
    # would reproduce the instantaneous derivative exactly and make the
    # estimate identically zero; pairing two h-steps against one 2h-step
    # exposes the leading O(h) truncation term instead.
    s0 = common.as_array()
    grad_fine = (fine2.as_array() - s0) / (2 * h)
    grad_coarse = (coarse.as_array() - s0) / (2 * h)
    e = grad_coarse - grad_fine
    return RichardsonEstimate(float(e[0]), float(e[1]), float(e[2]), h)


def richardson(
    state: State3,
    params: LorenzParams,
    h: float,
    solver: str = "direct",
    vqls_config: VqlsConfig | None = None,
) -> RichardsonEstimate:
    """Leading step-size error at one point: two h-steps vs one 2h-step."""
    fine1, _ = _step(state, params, h, solver, vqls_config, None)
    fine2, _ = _step(fine1, params, h, solver, vqls_config, None)
    coarse, _ = _step(state, params, 2 * h, solver, vqls_config, None)
    return _estimate(state, fine2, coarse, h)


def richardson_series(
    start: State3,
    params: LorenzParams,
    h: float,
    steps: int,
    solver: str = "direct",
    vqls_config: VqlsConfig | None = None,
    warm_start: bool = True,
) -> list[RichardsonEstimate]:
    """Per-point estimates along a base trajectory advanced by the fine path."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    estimates = []
    current = start
    theta = None
    for _ in range(steps):
        init = theta if warm_start else None
        fine1, out1 = _step(current, params, h, solver, vqls_config, init)
        theta1 = out1.theta_opt if out1 is not None else init
        fine2, _ = _step(fine1, params, h, solver, vqls_config, theta1)
        coarse, _ = _step(current, params, 2 * h, solver, vqls_config, init)
        estimates.append(_estimate(current, fine2, coarse, h))
        current = fine1
        if out1 is not None:
            theta = out1.theta_opt
    return estimates


def default_h_grid(h_max: float = 0.1, count: int = 100) -> np.ndarray:
    """Uniform grid of `count` points over (0, h_max]."""
    return h_max * np.arange(1, count + 1) / count


def condition_sweep(
    params: LorenzParams, h_values, max_workers: int | None = None
) -> list[tuple[float, float, float]]:
    """(h, condition numbers of the per-step system and of its dilation)."""
    h_list = [float(h) for h in h_values]
    if not h_list:
        raise ValueError("h_values must be nonempty")

    def one(h):
        a = build_nonlinear_system(params, h)
        return h, condition_number(a), condition_number(hermitian_dilation(a))

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(one, h_list))
    return [one(h) for h in h_list]
