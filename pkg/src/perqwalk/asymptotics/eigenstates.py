"""Common eigenstates and the configuration sets used to verify them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
from numpy.typing import NDArray

from perqwalk.walk.channel import EdgeConfiguration, PercolationChannel, generator_configs, random_configs
from perqwalk.walk.lattice import LatticeSpec


EIGENSTATE_TOL = 1e-10
VERIFY_SEED = 20240601
N_RANDOM_CONFIGS = 50


@dataclass(frozen=True, eq=False)
class CommonEigenstate:
    """
    A normalized vector with U_K phi = alpha phi for every configuration K.

    - vector: amplitudes in basis_index order
    - alpha: the shared eigenvalue (an eigenvalue of R*C)
    - label: family / degeneracy label, e.g. "hadamard2d.row(t=2)" or "numeric[1,0]"
    """
    vector: NDArray[np.complex128]
    alpha: complex
    label: str = ""

    def to_json(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "alpha": [float(np.real(self.alpha)), float(np.imag(self.alpha))],
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.vector],
        }


def state_matrix(states: Sequence[CommonEigenstate], dim: int) -> NDArray[np.complex128]:
    """States as the columns of a (dim, n) matrix."""
    if not states:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.stack([s.vector for s in states], axis=1)


def verification_configs(
    spec: LatticeSpec,
    n_random: int = N_RANDOM_CONFIGS,
    seed: int = VERIFY_SEED,
) -> List[EdgeConfiguration]:
    """Generator set plus `n_random` p = 1/2 configurations from a fixed seed."""
    rng = np.random.default_rng(seed)
    return generator_configs(spec) + random_configs(spec, rng, n_random)


def eigenstate_residual(
    ch: PercolationChannel,
    vectors: NDArray[np.complex128],
    alphas: NDArray[np.complex128],
    configs: Sequence[EdgeConfiguration],
) -> NDArray[np.float64]:
    """Per column: max over configs of ||U_K phi - alpha phi||."""
    vectors = vectors.reshape(ch.dim, -1)
    alphas = np.asarray(alphas, dtype=np.complex128).reshape(-1)
    worst = np.zeros(vectors.shape[1])
    for config in configs:
        diff = ch.unitary(config).apply(vectors) - vectors * alphas[None, :]
        worst = np.maximum(worst, np.linalg.norm(diff, axis=0))
    return worst


def verify_states(
    ch: PercolationChannel,
    states: Sequence[CommonEigenstate],
    configs: Sequence[EdgeConfiguration],
) -> NDArray[np.float64]:
    if not states:
        return np.zeros(0)
    return eigenstate_residual(
        ch,
        state_matrix(states, ch.dim),
        np.array([s.alpha for s in states]),
        configs,
    )
