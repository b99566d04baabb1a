from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from perqwalk.asymptotics.eigenstates import CommonEigenstate
from perqwalk.errors import WrongCoinError
from perqwalk.utils.linalg import cluster_phases, fix_phase, mgs
from perqwalk.walk.coin import CoinOperator
from perqwalk.walk.lattice import LatticeSpec


Params = Tuple[int, ...]


@dataclass(frozen=True)
class FamilyConfig:
    """
    Static description of one closed-form family.

    - coin_kind: coin the family belongs to ("hadamard2d", ...)
    - label: family name used in state labels, e.g. "row"
    - alpha: R*C eigenvalue shared by every member
    - coin_vector: local coin state (normalization irrelevant)
    """
    coin_kind: str
    label: str
    alpha: complex
    coin_vector: Tuple[complex, complex, complex, complex]


class AnalyticEigenstateFamily(ABC):
    """
    Base class for closed-form common eigenstates of one coin.

    Subclasses decide on which lattices the family exists (`available`),
    which parameters label its members (`parameters`) and the unnormalized
    amplitudes of a member (`amplitudes`). Normalization, labelling and the
    phase convention live here.
    """

    def __init__(self, config: FamilyConfig) -> None:
        self._config = config
        self._coin_vector = np.asarray(config.coin_vector, dtype=np.complex128)

    # ---- Identity -----------------------------------------------------------

    @property
    def coin_kind(self) -> str:
        return self._config.coin_kind

    @property
    def label(self) -> str:
        return self._config.label

    @property
    def alpha(self) -> complex:
        return self._config.alpha

    @property
    def coin_vector(self) -> NDArray[np.complex128]:
        return self._coin_vector

    # ---- Family interface ---------------------------------------------------

    @abstractmethod
    def available(self, spec: LatticeSpec) -> bool:
        raise NotImplementedError

    def parameters(self, spec: LatticeSpec) -> List[Params]:
        return [()]

    @abstractmethod
    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        raise NotImplementedError

    def member_label(self, params: Params) -> str:
        inner = ",".join(str(p) for p in params)
        return f"{self.coin_kind}.{self.label}" + (f"({inner})" if params else "")

    def states(self, spec: LatticeSpec) -> List[CommonEigenstate]:
        if not self.available(spec):
            return []
        out: List[CommonEigenstate] = []
        for params in self.parameters(spec):
            amps = self.amplitudes(spec, params)
            norm = np.linalg.norm(amps)
            if norm == 0.0:
                continue
            out.append(CommonEigenstate(fix_phase(amps / norm), self.alpha, self.member_label(params)))
        return out


# ---- Helpers shared by the coin modules -------------------------------------


def alternation_ok(periodic: bool, extent: int, period: int = 2) -> bool:
    """A phase of the given period closes around a periodic axis, or the axis is open."""
    return not periodic or extent % period == 0


def product_amplitudes(profile: NDArray[np.complex128], coin_vector: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """sum f(s, t) |s, t> (x) v for an (M, N) position profile f."""
    return np.kron(np.asarray(profile, dtype=np.complex128).reshape(-1), coin_vector)


def require_coin(coin: Optional[CoinOperator], expected: str) -> None:
    if coin is not None and coin.kind != expected:
        raise WrongCoinError(expected, coin.kind)


def build_states(spec: LatticeSpec, families: Sequence[AnalyticEigenstateFamily]) -> List[CommonEigenstate]:
    """
    Members of every available family, orthonormalized within each alpha
    and rank-filtered (families overlap on some tori). Surviving states keep
    the label of the member they came from.
    """
    members: List[CommonEigenstate] = [st for fam in families for st in fam.states(spec)]
    if not members:
        return []
    out: List[CommonEigenstate] = []
    alphas = np.array([m.alpha for m in members], dtype=np.complex128)
    for group in cluster_phases(alphas, 1e-9):
        group = sorted(group)
        cols = np.stack([members[k].vector for k in group], axis=1)
        basis, kept = mgs(cols)
        for col, k in zip(basis.T, kept):
            src = members[group[k]]
            out.append(CommonEigenstate(fix_phase(col), src.alpha, src.label))
    return out
