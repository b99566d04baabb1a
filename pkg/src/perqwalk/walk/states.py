"""Value types for walk states: pure vectors, density operators, position marginals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from perqwalk.walk.lattice import Direction, LatticeSpec, Site, basis_index, transpose_spec


NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
PROB_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Pure walker state in basis_index order.

    - spec: lattice the amplitudes live on
    - amplitudes: length 4*M*N complex vector
    """
    spec: LatticeSpec
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.spec.dim:
            raise ValueError(f"state has {amps.shape[0]} amplitudes, lattice {self.spec} needs {self.spec.dim}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.spec, np.outer(self.amplitudes, self.amplitudes.conj()))

    def marginal(self) -> "PositionDistribution":
        probs = (np.abs(self.amplitudes) ** 2).reshape(self.spec.M, self.spec.N, 4).sum(axis=-1)
        return PositionDistribution(self.spec, probs)

    @classmethod
    def product(cls, spec: LatticeSpec, site: Site, coin_vec: NDArray[np.complex128]) -> "StateVector":
        """|site> (x) coin_vec."""
        amps = np.zeros(spec.dim, dtype=np.complex128)
        start = basis_index(site, Direction.L, spec)
        amps[start:start + 4] = np.asarray(coin_vec, dtype=np.complex128)
        return cls(spec, amps)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Mixed walker state, dense d x d.

    Shape is checked on construction; the physical invariants (Hermitian,
    unit trace, PSD) are checked by `check()` because long iterations drift
    by rounding.
    """
    spec: LatticeSpec
    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        d = self.spec.dim
        if mat.shape != (d, d):
            raise ValueError(f"density operator has shape {mat.shape}, lattice {self.spec} needs {(d, d)}")
        object.__setattr__(self, "matrix", mat)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def check(
        self,
        *,
        hermitian_tol: float = HERMITIAN_TOL,
        trace_tol: float = NORM_TOL,
        psd_tol: Optional[float] = None,
    ) -> None:
        """Raise ValueError naming the first violated invariant."""
        herm = self.hermiticity_residual
        if herm > hermitian_tol:
            raise ValueError(f"density operator not Hermitian: residual {herm:.3e}")
        if abs(self.trace - 1.0) > trace_tol:
            raise ValueError(f"density operator trace {self.trace:.15g} != 1")
        if psd_tol is not None:
            lo = self.min_eigenvalue()
            if lo < -psd_tol:
                raise ValueError(f"density operator not PSD: min eigenvalue {lo:.3e}")

    @classmethod
    def maximally_mixed(cls, spec: LatticeSpec) -> "DensityOperator":
        return cls(spec, np.eye(spec.dim, dtype=np.complex128) / spec.dim)

    @classmethod
    def random(cls, spec: LatticeSpec, rng: np.random.Generator, rank: Optional[int] = None) -> "DensityOperator":
        """G G^dag / Tr for a complex Ginibre G of shape (d, rank)."""
        rank = rank or spec.dim
        g = rng.normal(size=(spec.dim, rank)) + 1j * rng.normal(size=(spec.dim, rank))
        rho = g @ g.conj().T
        return cls(spec, rho / np.trace(rho).real)


@dataclass(frozen=True, eq=False)
class PositionDistribution:
    """
    P(s, t) as an M x N array, optionally with per-cell standard errors
    (Monte Carlo runs).
    """
    spec: LatticeSpec
    probs: NDArray[np.float64]
    stderr: Optional[NDArray[np.float64]] = None

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (self.spec.M, self.spec.N):
            raise ValueError(f"distribution has shape {probs.shape}, expected {(self.spec.M, self.spec.N)}")
        object.__setattr__(self, "probs", probs)
        if self.stderr is not None:
            object.__setattr__(self, "stderr", np.asarray(self.stderr, dtype=np.float64).reshape(probs.shape))

    @property
    def total(self) -> float:
        return float(self.probs.sum())

    def is_valid(self, tol: float = PROB_TOL) -> bool:
        return bool(self.probs.min() >= -1e-12 and abs(self.total - 1.0) <= tol)

    def __getitem__(self, site: Tuple[int, int]) -> float:
        return float(self.probs[site[0], site[1]])

    def l1_distance(self, other: "PositionDistribution") -> float:
        self._check_compatible(other)
        return float(np.abs(self.probs - other.probs).sum())

    def total_variation(self, other: "PositionDistribution") -> float:
        return 0.5 * self.l1_distance(other)

    def transpose(self) -> "PositionDistribution":
        """The same distribution seen on the transposed lattice."""
        stderr = None if self.stderr is None else self.stderr.T
        return PositionDistribution(transpose_spec(self.spec), self.probs.T, stderr)

    def rows(self) -> List[Tuple[int, int, float, Optional[float]]]:
        """(s, t, P, stderr) in basis_index site order."""
        out: List[Tuple[int, int, float, Optional[float]]] = []
        for s in range(self.spec.M):
            for t in range(self.spec.N):
                err = None if self.stderr is None else float(self.stderr[s, t])
                out.append((s, t, float(self.probs[s, t]), err))
        return out

    def _check_compatible(self, other: "PositionDistribution") -> None:
        if self.probs.shape != other.probs.shape:
            raise ValueError(f"cannot compare distributions on {self.spec} and {other.spec}")
