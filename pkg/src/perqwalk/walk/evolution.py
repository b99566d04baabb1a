"""
Time evolution: exact channel iteration, the fixed-configuration unitary path
and Monte Carlo trajectories, plus position marginals.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from perqwalk.config.settings import get_settings
from perqwalk.errors import GuardError
from perqwalk.utils.tracing import trace_block, traced
from perqwalk.walk.channel import (
    EdgeConfiguration,
    PercolationChannel,
    StepUnitary,
    step_unitary,
    substream,
)
from perqwalk.walk.coin import CoinOperator
from perqwalk.walk.lattice import LatticeSpec, slot_table
from perqwalk.walk.states import DensityOperator, PositionDistribution, StateVector


logger = logging.getLogger("perqwalk.evolution")


def check_dense_guard(spec: LatticeSpec) -> None:
    limit = get_settings().dense_guard
    if spec.dim > limit:
        raise GuardError("dense", limit, spec.dim)


# ---- Marginals --------------------------------------------------------------


def marginal_from_diagonal(spec: LatticeSpec, diag: NDArray) -> PositionDistribution:
    probs = np.real(diag).reshape(spec.M, spec.N, 4).sum(axis=-1)
    return PositionDistribution(spec, probs)


def position_marginal(rho: DensityOperator) -> PositionDistribution:
    """P(s, t) = sum_c <s,t,c| rho |s,t,c>."""
    return marginal_from_diagonal(rho.spec, np.diagonal(rho.matrix))


# ---- Exact channel iteration ------------------------------------------------


def _check_same_lattice(ch: PercolationChannel, spec: LatticeSpec) -> None:
    if spec != ch.spec:
        raise ValueError(f"state lives on {spec}, channel on {ch.spec}")


@traced("evolve_exact")
def evolve_exact(ch: PercolationChannel, rho0: DensityOperator, steps: int) -> DensityOperator:
    """Phi^steps(rho0), O(steps * d^2)."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _check_same_lattice(ch, rho0.spec)
    check_dense_guard(ch.spec)
    rho = rho0.matrix.copy()
    for _ in range(steps):
        rho = ch.apply(rho)
    return DensityOperator(ch.spec, rho)


@dataclass(frozen=True)
class ConvergenceResult:
    """
    - state: rho after `steps` channel applications
    - steps: number of applications performed
    - converged: block-to-block change fell below the tolerance
    - last_change: entrywise L1 norm of the final block difference
    """
    state: DensityOperator
    steps: int
    converged: bool
    last_change: float


@traced("evolve_until_converged")
def evolve_until_converged(
    ch: PercolationChannel,
    rho0: DensityOperator,
    *,
    period: int = 4,
    tol: float = 1e-10,
    max_steps: int = 100_000,
) -> ConvergenceResult:
    """
    Iterate in blocks of `period` steps (the attractor phases here are 4th
    roots of unity) until ||rho_{k+period} - rho_k||_1 < tol or the cap.
    """
    _check_same_lattice(ch, rho0.spec)
    check_dense_guard(ch.spec)
    rho = rho0.matrix.copy()
    steps = 0
    change = float("inf")
    while steps < max_steps:
        prev = rho
        for _ in range(period):
            rho = ch.apply(rho)
        steps += period
        change = float(np.abs(rho - prev).sum())
        if change < tol:
            logger.debug("converged after %d steps (change %.3e)", steps, change)
            return ConvergenceResult(DensityOperator(ch.spec, rho), steps, True, change)
    logger.warning("no convergence within %d steps (last change %.3e)", max_steps, change)
    return ConvergenceResult(DensityOperator(ch.spec, rho), steps, False, change)


# ---- Fixed configuration ----------------------------------------------------


def evolve_unitary(
    spec: LatticeSpec,
    coin: CoinOperator,
    config: EdgeConfiguration,
    psi0: StateVector,
    steps: int,
) -> StateVector:
    """U_config^steps psi0 via permutation + 4x4 block multiply, O(steps * d)."""
    if psi0.spec != spec:
        raise ValueError(f"state lives on {psi0.spec}, not on {spec}")
    unitary: StepUnitary = step_unitary(spec, coin, config)
    psi = psi0.amplitudes.copy()
    for _ in range(steps):
        psi = unitary.apply(psi)
    return StateVector(spec, psi)


# ---- Monte Carlo trajectories -----------------------------------------------


def _run_block(
    ch: PercolationChannel,
    psi0: NDArray[np.complex128],
    steps: int,
    block: int,
    size: int,
    master_seed: int,
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Sum and sum of squares of the per-trajectory marginals of one block."""
    table = slot_table(ch.spec)
    n_sites, d = ch.spec.n_sites, ch.spec.dim
    hop = ~table.wall
    edge = np.where(hop, table.edge, 0)
    coin_t = ch.coin.matrix.T
    states = np.broadcast_to(psi0, (size, d)).copy()
    for k in range(steps):
        rng = substream(master_seed, block, k)
        present = rng.random((size, table.n_edges)) < ch.p
        image = np.where(present[:, edge] & hop, table.step, table.reflect)
        coined = (states.reshape(size, n_sites, 4) @ coin_t).reshape(size, d)
        states = np.empty_like(coined)
        np.put_along_axis(states, image, coined, axis=1)
    marg = (np.abs(states) ** 2).reshape(size, n_sites, 4).sum(axis=-1)
    return marg.sum(axis=0), (marg ** 2).sum(axis=0)


def evolve_mc(
    ch: PercolationChannel,
    psi0: StateVector,
    steps: int,
    trials: int,
    master_seed: int,
    *,
    block_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> PositionDistribution:
    """
    Trajectory average of the position marginal, with per-cell standard
    errors. Trajectories run in fixed-size blocks; block b draws the edge
    configuration of step k from substream (master_seed, b, k), so output is
    bit-identical for any worker count.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _check_same_lattice(ch, psi0.spec)
    settings = get_settings()
    block_size = block_size or settings.mc_block
    threads = threads or settings.threads
    sizes = [min(block_size, trials - start) for start in range(0, trials, block_size)]

    with trace_block("evolve_mc", extra={"trials": trials, "blocks": len(sizes), "threads": threads}):
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda job: _run_block(ch, psi0.amplitudes, steps, job[0], job[1], master_seed),
                enumerate(sizes),
            ))

    total = np.zeros(ch.spec.n_sites)
    total_sq = np.zeros(ch.spec.n_sites)
    for part_sum, part_sq in parts:
        total += part_sum
        total_sq += part_sq
    mean = total / trials
    if trials > 1:
        var = np.clip((total_sq - trials * mean ** 2) / (trials - 1), 0.0, None)
    else:
        var = np.zeros_like(mean)
    stderr = np.sqrt(var / trials)
    shape = (ch.spec.M, ch.spec.N)
    return PositionDistribution(ch.spec, mean.reshape(shape), stderr.reshape(shape))
