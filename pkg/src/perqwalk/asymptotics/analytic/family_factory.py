from __future__ import annotations

from typing import Callable, Dict, List, Optional

from perqwalk.asymptotics.analytic.base_family import AnalyticEigenstateFamily
from perqwalk.asymptotics.analytic.fourier import FOURIER_FAMILIES, fourier_states
from perqwalk.asymptotics.analytic.grover import GROVER_FAMILIES, grover_states
from perqwalk.asymptotics.analytic.hadamard import HADAMARD_FAMILIES, hadamard_states
from perqwalk.asymptotics.eigenstates import CommonEigenstate
from perqwalk.walk.coin import CoinOperator
from perqwalk.walk.lattice import LatticeSpec


StatesBuilder = Callable[[LatticeSpec, Optional[CoinOperator]], List[CommonEigenstate]]

# Map from coin kind to its closed-form state builder
_COIN_TO_BUILDER: Dict[str, StatesBuilder] = {
    "hadamard2d": hadamard_states,
    "grover": grover_states,
    "fourier": fourier_states,
}

_COIN_TO_FAMILIES: Dict[str, List[AnalyticEigenstateFamily]] = {
    "hadamard2d": HADAMARD_FAMILIES,
    "grover": GROVER_FAMILIES,
    "fourier": FOURIER_FAMILIES,
}


def has_analytic_families(coin_kind: str) -> bool:
    return coin_kind in _COIN_TO_BUILDER


def families_for(coin_kind: str) -> List[AnalyticEigenstateFamily]:
    try:
        return list(_COIN_TO_FAMILIES[coin_kind])
    except KeyError as exc:
        raise ValueError(
            f"No analytic families for coin '{coin_kind}'. "
            f"Known coins: {', '.join(sorted(_COIN_TO_FAMILIES))}"
        ) from exc


def analytic_states(spec: LatticeSpec, coin: CoinOperator) -> List[CommonEigenstate]:
    """
    Closed-form common eigenstates for `coin` on `spec`, orthonormal and
    rank-filtered.
    """
    builder = _COIN_TO_BUILDER.get(coin.kind)
    if builder is None:
        raise ValueError(
            f"No analytic families for coin '{coin.kind}'. "
            f"Known coins: {', '.join(sorted(_COIN_TO_BUILDER))}"
        )
    return builder(spec, coin)
