"""
Closed-form common eigenstates of the 2D Hadamard walk (coin H (x) H).

R*C has eigenvalues {i, -i, 1, 1}:
  alt_plus_i, alt_minus_i   (-1)^s over the whole lattice (x) v1 / v2, alpha = +i / -i;
                            needs an open s axis or even M
  row(t)                    uniform along row t (x) v3, alpha = 1; always
  column(s)                 (-1)^t along column s (x) v4, alpha = 1; needs an
                            open t axis or even N
"""
from __future__ import annotations

from typing import List, Optional

import numpy as np
from numpy.typing import NDArray

from perqwalk.asymptotics.analytic.base_family import (
    AnalyticEigenstateFamily,
    FamilyConfig,
    Params,
    alternation_ok,
    build_states,
    product_amplitudes,
    require_coin,
)
from perqwalk.asymptotics.eigenstates import CommonEigenstate
from perqwalk.walk.coin import CoinOperator
from perqwalk.walk.lattice import LatticeSpec


_R2 = np.sqrt(2.0)

V1 = (0.5, -0.5j, -0.5j, -0.5)
V2 = (0.5, 0.5j, 0.5j, -0.5)
V3 = (1 / _R2, 0.0, 0.0, 1 / _R2)
V4 = (0.0, 1 / _R2, -1 / _R2, 0.0)


class HadamardAlternatingFamily(AnalyticEigenstateFamily):
    """One state each, sign alternating along s."""

    def available(self, spec: LatticeSpec) -> bool:
        return alternation_ok(spec.periodic_s, spec.M)

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        signs = (-1.0) ** np.arange(spec.M)
        profile = np.repeat(signs[:, None], spec.N, axis=1)
        return product_amplitudes(profile, self.coin_vector)


class HadamardRowFamily(AnalyticEigenstateFamily):
    """Flat along row t."""

    def available(self, spec: LatticeSpec) -> bool:
        return True

    def parameters(self, spec: LatticeSpec) -> List[Params]:
        return [(t,) for t in range(spec.N)]

    def member_label(self, params: Params) -> str:
        return f"{self.coin_kind}.{self.label}(t={params[0]})"

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        profile = np.zeros((spec.M, spec.N))
        profile[:, params[0]] = 1.0
        return product_amplitudes(profile, self.coin_vector)


class HadamardColumnFamily(AnalyticEigenstateFamily):
    """Sign alternating along column s."""

    def available(self, spec: LatticeSpec) -> bool:
        return alternation_ok(spec.periodic_t, spec.N)

    def parameters(self, spec: LatticeSpec) -> List[Params]:
        return [(s,) for s in range(spec.M)]

    def member_label(self, params: Params) -> str:
        return f"{self.coin_kind}.{self.label}(s={params[0]})"

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        profile = np.zeros((spec.M, spec.N))
        profile[params[0], :] = (-1.0) ** np.arange(spec.N)
        return product_amplitudes(profile, self.coin_vector)


HADAMARD_FAMILIES: List[AnalyticEigenstateFamily] = [
    HadamardAlternatingFamily(FamilyConfig("hadamard2d", "alt_plus_i", 1j, V1)),
    HadamardAlternatingFamily(FamilyConfig("hadamard2d", "alt_minus_i", -1j, V2)),
    HadamardRowFamily(FamilyConfig("hadamard2d", "row", 1.0 + 0j, V3)),
    HadamardColumnFamily(FamilyConfig("hadamard2d", "column", 1.0 + 0j, V4)),
]


def hadamard_states(spec: LatticeSpec, coin: Optional[CoinOperator] = None) -> List[CommonEigenstate]:
    require_coin(coin, "hadamard2d")
    return build_states(spec, HADAMARD_FAMILIES)
