"""
Percolation configurations, configuration-dependent step unitaries and the
percolation channel

    Phi(rho) = sum_K pi_K(p) U_K rho U_K^dag,   U_K = S_K (I (x) C).

S_K moves each directed basis state |m, c> as a function of one edge
indicator only (hop to |m (+) c, c> if the edge is present, reflect to
|m, ~c> otherwise; walls always reflect). Independence of the edges makes the
channel computable exactly from pairs of slots, never from the 2^|E| sum.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import List

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from perqwalk.walk.coin import CoinOperator
from perqwalk.walk.lattice import Edge, LatticeSpec, SlotTable, edge_index, slot_table


logger = logging.getLogger("perqwalk.channel")

EXHAUSTIVE_EDGE_LIMIT = 16


# ---- Configurations ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgeConfiguration:
    """
    Subset K of the lattice edges, one bit per edge in edges(spec) order.
    Walls are not edges and can never be members.
    """
    spec: LatticeSpec
    present: NDArray[np.bool_]

    def __post_init__(self) -> None:
        bits = np.asarray(self.present, dtype=bool).reshape(-1)
        n_edges = slot_table(self.spec).n_edges
        if bits.shape[0] != n_edges:
            raise ValueError(f"configuration has {bits.shape[0]} bits, lattice {self.spec} has {n_edges} edges")
        bits.setflags(write=False)
        object.__setattr__(self, "present", bits)

    def __len__(self) -> int:
        return int(self.present.sum())

    def __contains__(self, edge: Edge) -> bool:
        return bool(self.present[edge_index(self.spec)[edge]])

    @classmethod
    def full(cls, spec: LatticeSpec) -> "EdgeConfiguration":
        return cls(spec, np.ones(slot_table(spec).n_edges, dtype=bool))

    @classmethod
    def empty(cls, spec: LatticeSpec) -> "EdgeConfiguration":
        return cls(spec, np.zeros(slot_table(spec).n_edges, dtype=bool))

    @classmethod
    def from_mask(cls, spec: LatticeSpec, mask: int) -> "EdgeConfiguration":
        """Bit k of `mask` is edge k."""
        n_edges = slot_table(spec).n_edges
        bits = (mask >> np.arange(n_edges)) & 1
        return cls(spec, bits.astype(bool))

    def without(self, edge_id: int) -> "EdgeConfiguration":
        bits = self.present.copy()
        bits[edge_id] = False
        return EdgeConfiguration(self.spec, bits)


@dataclass(frozen=True)
class PercolationModel:
    """Each edge present independently with probability p, resampled every step."""
    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"percolation probability must lie in [0, 1], got {self.p}")

    def weight(self, config: EdgeConfiguration) -> float:
        """pi_K(p)."""
        k = len(config)
        return float(self.p ** k * (1.0 - self.p) ** (config.present.size - k))


def sample_config(model: PercolationModel, spec: LatticeSpec, rng: np.random.Generator) -> EdgeConfiguration:
    n_edges = slot_table(spec).n_edges
    return EdgeConfiguration(spec, rng.random(n_edges) < model.p)


def generator_configs(spec: LatticeSpec) -> List[EdgeConfiguration]:
    """{full} + {full minus one edge, for every edge} + {empty}."""
    full = EdgeConfiguration.full(spec)
    return [full] + [full.without(e) for e in range(full.present.size)] + [EdgeConfiguration.empty(spec)]


def random_configs(spec: LatticeSpec, rng: np.random.Generator, n: int, p: float = 0.5) -> List[EdgeConfiguration]:
    model = PercolationModel(p)
    return [sample_config(model, spec, rng) for _ in range(n)]


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """
    Counter-based generator for one work unit. The same (seed, key) always
    yields the same stream regardless of which thread consumes it.
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


# ---- Step unitaries ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StepUnitary:
    """
    U_K = S_K (I (x) C) stored as a permutation plus the 4x4 coin.

    - spec: lattice
    - image: image[x] is where S_K sends basis state x
    - coin: the coin matrix (identity for a bare shift)
    """
    spec: LatticeSpec
    image: NDArray[np.int64]
    coin: NDArray[np.complex128]

    def apply(self, psi: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """U_K psi for a vector or a (d, k) block of column vectors."""
        flat = psi.ndim == 1
        block = psi.reshape(self.spec.n_sites, 4, -1)
        coined = np.einsum("ij,mjk->mik", self.coin, block).reshape(self.spec.dim, -1)
        out = np.empty_like(coined)
        out[self.image] = coined
        return out.reshape(-1) if flat else out

    def apply_right(self, x: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """X U_K for a (k, d) block."""
        shifted = x[:, self.image]
        d = self.spec.dim
        return (shifted.reshape(-1, self.spec.n_sites, 4) @ self.coin).reshape(-1, d)

    def conjugate(self, rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """U_K rho U_K^dag."""
        left = self.apply(rho)
        return self.apply(left.conj().T).conj().T

    def to_dense(self) -> NDArray[np.complex128]:
        d = self.spec.dim
        shift = np.zeros((d, d), dtype=np.complex128)
        shift[self.image, np.arange(d)] = 1.0
        return shift @ np.kron(np.eye(self.spec.n_sites), self.coin)


def _config_image(table: SlotTable, config: EdgeConfiguration) -> NDArray[np.int64]:
    present = np.zeros(table.edge.shape, dtype=bool)
    hop = ~table.wall
    present[hop] = config.present[table.edge[hop]]
    return np.where(present, table.step, table.reflect)


def shift_map(spec: LatticeSpec, config: EdgeConfiguration) -> StepUnitary:
    """S_K alone (identity coin)."""
    return StepUnitary(spec, _config_image(slot_table(spec), config), np.eye(4, dtype=np.complex128))


def step_unitary(spec: LatticeSpec, coin: CoinOperator, config: EdgeConfiguration) -> StepUnitary:
    return StepUnitary(spec, _config_image(slot_table(spec), config), coin.matrix)


def coin_conjugate(coin: NDArray[np.complex128], rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """(I (x) C) rho (I (x) C)^dag without forming I (x) C."""
    d = rho.shape[0]
    n_sites = d // 4
    left = (coin @ rho.reshape(n_sites, 4, d)).reshape(d, d)
    return (left.reshape(d, n_sites, 4) @ coin.conj().T).reshape(d, d)


# ---- Averaged step B --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AveragedStep:
    """
    B = sum_K pi_K U_K = E[S_K] (I (x) C), with E[S_K] sending |m, c> to
    p |m (+) c, c> + (1 - p) |m, ~c> (p = 0 at walls).
    """
    spec: LatticeSpec
    mean_shift: sp.csr_matrix
    coin: NDArray[np.complex128]

    def to_sparse(self) -> sp.csr_matrix:
        return (self.mean_shift @ sp.kron(sp.identity(self.spec.n_sites), sp.csr_matrix(self.coin))).tocsr()

    def to_dense(self) -> NDArray[np.complex128]:
        return self.to_sparse().toarray()

    def apply(self, psi: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return self.to_sparse() @ psi

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.to_dense()))))


def _build_mean_shift(spec: LatticeSpec, p: float) -> sp.csr_matrix:
    table = slot_table(spec)
    d = spec.dim
    cols = np.arange(d)
    hop = ~table.wall
    p_slot = np.where(hop, p, 0.0)
    rows = np.concatenate([table.step[hop], table.reflect])
    data = np.concatenate([p_slot[hop], 1.0 - p_slot])
    return sp.csr_matrix((data, (rows, np.concatenate([cols[hop], cols]))), shape=(d, d))


# ---- The channel ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PercolationChannel:
    """
    Phi for a lattice, coin and percolation probability. Immutable; the
    slot-pair tables are built once on first use.
    """
    spec: LatticeSpec
    coin: CoinOperator
    model: PercolationModel

    @property
    def p(self) -> float:
        return self.model.p

    @property
    def dim(self) -> int:
        return self.spec.dim

    @cached_property
    def _table(self) -> SlotTable:
        return slot_table(self.spec)

    @cached_property
    def _mean_shift(self) -> sp.csr_matrix:
        return _build_mean_shift(self.spec, self.p)

    @cached_property
    def _edge_slots(self) -> NDArray[np.int64]:
        """(|E|, 2): the two directed slots controlled by each edge."""
        hop = np.flatnonzero(~self._table.wall)
        order = np.argsort(self._table.edge[hop], kind="stable")
        return hop[order].reshape(-1, 2)

    def unitary(self, config: EdgeConfiguration) -> StepUnitary:
        return step_unitary(self.spec, self.coin, config)

    def apply(self, rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """
        Exact Phi(rho) from slot pairs.

        After sigma = (I (x) C) rho (I (x) C)^dag, the element sigma[x, y] is
        carried to (step x, step y), (step x, reflect y), (reflect x, step y)
        and (reflect x, reflect y) with weights p_x p_y, p_x (1 - p_y), ...
        when x and y hang on different edges. Those product weights are
        E[S] sigma E[S]^dag. Pairs on one shared edge move together (p to
        step/step, 1 - p to reflect/reflect); that is corrected on the four
        slot pairs of every edge.
        """
        sigma = coin_conjugate(self.coin.matrix, rho)
        ms = self._mean_shift
        out = np.asarray(ms @ (ms @ sigma.conj().T).conj().T)

        p = self.p
        corr = p * (1.0 - p)
        if corr == 0.0 or self._edge_slots.size == 0:
            return out
        step, reflect = self._table.step, self._table.reflect
        pairs = self._edge_slots
        for i, j in product(range(2), repeat=2):
            u, v = pairs[:, i], pairs[:, j]
            w = corr * sigma[u, v]
            np.add.at(out, (step[u], step[v]), w)
            np.add.at(out, (reflect[u], reflect[v]), w)
            np.add.at(out, (step[u], reflect[v]), -w)
            np.add.at(out, (reflect[u], step[v]), -w)
        return out

    def averaged_step(self) -> AveragedStep:
        return AveragedStep(self.spec, self._mean_shift, self.coin.matrix)


def _check_rho(ch: PercolationChannel, rho: NDArray[np.complex128], symmetrize: bool) -> NDArray[np.complex128]:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"rho has shape {rho.shape}, channel on {ch.spec} needs {(ch.dim, ch.dim)}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > 1e-12:
        logger.warning("non-Hermitian input to the channel (residual %.3e)%s", herm,
                       ", symmetrizing" if symmetrize else "")
        if symmetrize:
            rho = 0.5 * (rho + rho.conj().T)
    return rho


def apply_channel(
    ch: PercolationChannel,
    rho: NDArray[np.complex128],
    *,
    symmetrize: bool = False,
) -> NDArray[np.complex128]:
    """Phi(rho), exact, O(d^2) per call."""
    return ch.apply(_check_rho(ch, rho, symmetrize))


def apply_channel_exhaustive(ch: PercolationChannel, rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """
    sum_K pi_K U_K rho U_K^dag over all 2^|E| configurations. Reference
    implementation for small lattices only.
    """
    rho = _check_rho(ch, rho, symmetrize=False)
    n_edges = slot_table(ch.spec).n_edges
    if n_edges > EXHAUSTIVE_EDGE_LIMIT:
        raise ValueError(f"exhaustive sum over 2^{n_edges} configurations refused (limit 2^{EXHAUSTIVE_EDGE_LIMIT})")
    sigma = coin_conjugate(ch.coin.matrix, rho)
    out = np.zeros_like(sigma)
    for mask in range(1 << n_edges):
        config = EdgeConfiguration.from_mask(ch.spec, mask)
        weight = ch.model.weight(config)
        if weight == 0.0:
            continue
        image = _config_image(ch._table, config)
        out[np.ix_(image, image)] += weight * sigma
    return out


def averaged_step(ch: PercolationChannel) -> AveragedStep:
    return ch.averaged_step()
