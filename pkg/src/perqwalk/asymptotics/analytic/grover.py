"""
Closed-form common eigenstates of the Grover walk.

R*G has eigenvalues {-1, 1, 1, 1}. Besides the flat alpha = -1 state, the
alpha = 1 space holds plaquette states of finite support (these are what
trap the walker) and two sign-alternating stripe families. On tori the
families are linearly dependent and are rank-filtered.
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
from perqwalk.walk.lattice import Direction, LatticeSpec, Site, basis_index


V1 = (0.5, -0.5, -0.5, 0.5)
V2 = (1.0, 1.0, 0.0, 0.0)
V3 = (0.0, -1.0, 1.0, 0.0)
V4 = (-1.0, 0.0, 0.0, 1.0)


class GroverFlatFamily(AnalyticEigenstateFamily):
    """Uniform over the lattice, alpha = -1."""

    def available(self, spec: LatticeSpec) -> bool:
        return True

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        return product_amplitudes(np.ones((spec.M, spec.N)), self.coin_vector)


class GroverPlaquetteFamily(AnalyticEigenstateFamily):
    """
    Plaquette (s, t): supported on the plaquette (s, t), (s, t+1), (s+1, t),
    (s+1, t+1) with coin states v2, v2+v3, v2+v4, v2+v3+v4. Corners that
    fall off an open boundary are dropped (normalization happens later).
    """

    def available(self, spec: LatticeSpec) -> bool:
        return True

    def parameters(self, spec: LatticeSpec) -> List[Params]:
        return [(s, t) for s in range(spec.M) for t in range(spec.N)]

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        s, t = params
        v2 = np.asarray(V2, dtype=np.complex128)
        v3 = np.asarray(V3, dtype=np.complex128)
        v4 = np.asarray(V4, dtype=np.complex128)
        corners = (
            (0, 0, v2),
            (0, 1, v2 + v3),
            (1, 0, v2 + v4),
            (1, 1, v2 + v3 + v4),
        )
        amps = np.zeros(spec.dim, dtype=np.complex128)
        for ds, dt, vec in corners:
            s2, t2 = s + ds, t + dt
            if s2 >= spec.M:
                if not spec.periodic_s:
                    continue
                s2 %= spec.M
            if t2 >= spec.N:
                if not spec.periodic_t:
                    continue
                t2 %= spec.N
            start = basis_index(Site(s2, t2), Direction.L, spec)
            amps[start:start + 4] += vec
        return amps


class GroverColumnFamily(AnalyticEigenstateFamily):
    """(-1)^t along column s (x) v3."""

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


class GroverRowFamily(AnalyticEigenstateFamily):
    """(-1)^s along row t (x) v4."""

    def available(self, spec: LatticeSpec) -> bool:
        return alternation_ok(spec.periodic_s, spec.M)

    def parameters(self, spec: LatticeSpec) -> List[Params]:
        return [(t,) for t in range(spec.N)]

    def member_label(self, params: Params) -> str:
        return f"{self.coin_kind}.{self.label}(t={params[0]})"

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        profile = np.zeros((spec.M, spec.N))
        profile[:, params[0]] = (-1.0) ** np.arange(spec.M)
        return product_amplitudes(profile, self.coin_vector)


GROVER_FAMILIES: List[AnalyticEigenstateFamily] = [
    GroverFlatFamily(FamilyConfig("grover", "flat", -1.0 + 0j, V1)),
    GroverPlaquetteFamily(FamilyConfig("grover", "plaquette", 1.0 + 0j, V2)),
    GroverColumnFamily(FamilyConfig("grover", "column", 1.0 + 0j, V3)),
    GroverRowFamily(FamilyConfig("grover", "row", 1.0 + 0j, V4)),
]


def grover_states(spec: LatticeSpec, coin: Optional[CoinOperator] = None) -> List[CommonEigenstate]:
    require_coin(coin, "grover")
    return build_states(spec, GROVER_FAMILIES)
