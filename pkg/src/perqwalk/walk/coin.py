"""
Coin operators on the 4-dim coin space (basis L, D, U, R), the reflection
operator, and the local R*C eigenproblem that fixes which coin states and
eigenvalues a common eigenstate may carry.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from perqwalk.errors import ConfigError, NonUnitaryCoinError
from perqwalk.utils.linalg import cluster_phases, fix_phase, max_abs


logger = logging.getLogger("perqwalk.coin")

UNITARY_TOL = 1e-12
DEGENERACY_TOL = 1e-9

# sigma_x (x) sigma_x: |c> -> |~c>
REFLECTION: NDArray[np.complex128] = np.fliplr(np.eye(4)).astype(np.complex128)
REFLECTION.setflags(write=False)


# ---- Types ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """
    A 4x4 unitary coin in the (L, D, U, R) basis.

    - kind: registry name ("hadamard2d", "grover", "fourier") or "custom"
    - matrix: the coin itself
    """
    kind: str
    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.shape != (4, 4):
            raise ConfigError(f"coin must be 4x4, got shape {mat.shape}")
        residual = max_abs(mat.conj().T @ mat - np.eye(4))
        if residual > UNITARY_TOL:
            raise NonUnitaryCoinError(residual, UNITARY_TOL)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def rc(self) -> NDArray[np.complex128]:
        """The local map R*C (one step on a lattice with every edge broken)."""
        return REFLECTION @ self.matrix


@dataclass(frozen=True, eq=False)
class LocalEigenpair:
    """
    - alpha: unit-modulus eigenvalue of R*C
    - vector: normalized coin-space eigenvector, first nonzero entry real > 0
    """
    alpha: complex
    vector: NDArray[np.complex128]

    @property
    def phase(self) -> float:
        return float(np.mod(np.angle(self.alpha), 2 * np.pi))


# ---- Registry ---------------------------------------------------------------


def _hadamard2d() -> NDArray[np.complex128]:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return np.kron(h, h).astype(np.complex128)


def _grover() -> NDArray[np.complex128]:
    return (np.full((4, 4), 0.5) - np.eye(4)).astype(np.complex128)


def _fourier() -> NDArray[np.complex128]:
    kl = np.outer(np.arange(4), np.arange(4))
    return 0.5 * (-1j) ** kl


_COIN_BUILDERS: Dict[str, Callable[[], NDArray[np.complex128]]] = {
    "hadamard2d": _hadamard2d,
    "grover": _grover,
    "fourier": _fourier,
}

COIN_KINDS: List[str] = sorted(_COIN_BUILDERS) + ["custom"]


def make_coin(kind: str, matrix: Optional[NDArray] = None) -> CoinOperator:
    """
    Build a coin by registry name, or a custom coin from `matrix`.

    Raises ValueError for unknown kinds (listing the known ones) and
    NonUnitaryCoinError for a custom matrix that is not unitary.
    """
    if kind == "custom":
        if matrix is None:
            raise ConfigError("custom coin needs a matrix")
        return CoinOperator("custom", np.asarray(matrix, dtype=np.complex128))
    builder = _COIN_BUILDERS.get(kind)
    if builder is None:
        raise ConfigError(
            f"Unknown coin '{kind}'. Known coins: {', '.join(COIN_KINDS)}"
        )
    return CoinOperator(kind, builder())


def random_coin(rng: np.random.Generator) -> CoinOperator:
    """Haar-random coin: QR of a complex Ginibre matrix with R's phases folded into Q."""
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))[None, :]
    return CoinOperator("custom", q)


def load_coin_file(path: Union[str, Path]) -> CoinOperator:
    """Read a custom coin: JSON 4x4 array of [re, im] pairs in (L, D, U, R) order."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        arr = np.asarray(raw, dtype=float)
    except (OSError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot read coin file {path}: {exc}") from exc
    if arr.shape != (4, 4, 2):
        raise ConfigError(
            f"coin file {path} must hold a 4x4 array of [re, im] pairs, got shape {arr.shape}"
        )
    return make_coin("custom", arr[..., 0] + 1j * arr[..., 1])


# ---- Local eigenproblem -----------------------------------------------------


def rc_spectrum(coin: CoinOperator) -> List[LocalEigenpair]:
    """
    The four eigenpairs of R*C sorted by phase in [0, 2pi).

    Eigenvalues closer than DEGENERACY_TOL in phase are one eigenspace and
    come back with an orthonormal basis of it.
    """
    rc = coin.rc
    values = np.linalg.eigvals(rc)
    out: List[LocalEigenpair] = []
    for group in cluster_phases(values, DEGENERACY_TOL):
        alpha = complex(np.mean(values[group]))
        alpha /= abs(alpha)
        space = scipy.linalg.null_space(rc - alpha * np.eye(4), rcond=1e-8)
        if space.shape[1] != len(group):
            # Fall back on the numerically most-null directions.
            _, _, vh = np.linalg.svd(rc - alpha * np.eye(4))
            space = vh[-len(group):].conj().T
        for k in range(space.shape[1]):
            out.append(LocalEigenpair(alpha=alpha, vector=fix_phase(space[:, k])))
    logger.debug("rc spectrum of %s: %s", coin.kind, [np.round(p.alpha, 12) for p in out])
    return out


def distinct_alphas(coin: CoinOperator) -> List[complex]:
    """The distinct eigenvalues of R*C, in phase order."""
    seen: List[complex] = []
    for pair in rc_spectrum(coin):
        if not seen or abs(pair.alpha - seen[-1]) > DEGENERACY_TOL:
            seen.append(pair.alpha)
    return seen


# ---- Named coin states ------------------------------------------------------


def _normalized(vec: List[complex]) -> NDArray[np.complex128]:
    arr = np.asarray(vec, dtype=np.complex128)
    return arr / np.linalg.norm(arr)


def ring_state(a: complex, b: complex) -> NDArray[np.complex128]:
    """(a, b, a, -b), normalized. The coin family discussed for the Fourier walk."""
    return _normalized([a, b, a, -b])


COIN_STATES: Dict[str, NDArray[np.complex128]] = {
    "uniform": _normalized([1, 1, 1, 1]),
    # Grover state with no overlap on the localized eigenstates of the perfect lattice.
    "spread": _normalized([1, -1, -1, 1]),
    "ring": ring_state(1, 1j),
}


def coin_state(name: str) -> NDArray[np.complex128]:
    try:
        return COIN_STATES[name].copy()
    except KeyError as exc:
        raise ConfigError(
            f"Unknown coin state '@{name}'. "
            f"Known states: {', '.join('@' + k for k in sorted(COIN_STATES))}"
        ) from exc
