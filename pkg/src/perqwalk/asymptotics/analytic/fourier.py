"""
Closed-form common eigenstates of the Fourier walk.

R*F has the four eigenvalues alpha_n = exp(i pi (3 + 4n) / 8). The
eigenvector in the (L, D, U, R) basis is

    v_n ~ (alpha^2 (1 + alpha), alpha - 1, alpha^2 (1 - alpha), 1 + alpha)

and the common eigenstate is the plane wave sum y^s x^t |s, t> (x) v_n with
y = v_L / v_R = alpha^2 and x = v_D / v_U = -alpha^-2. Both are primitive
8th roots of unity, so a periodic axis carries the state only when its
extent is a multiple of 8. The numeric finder agrees: the 8x8 torus has
exactly these 4 common eigenstates. |x| = |y| = 1 makes every state flat in
position.
"""
from __future__ import annotations

from typing import List, Optional, Tuple

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


STRIPE_PERIOD = 8


def fourier_alpha(n: int) -> complex:
    return complex(np.exp(1j * np.pi * (3 + 4 * n) / 8))


def fourier_coin_vector(alpha: complex) -> Tuple[complex, complex, complex, complex]:
    a2 = alpha * alpha
    vec = np.array([a2 * (1 + alpha), alpha - 1, a2 * (1 - alpha), 1 + alpha])
    vec = vec / np.linalg.norm(vec)
    return tuple(complex(z) for z in vec)  # type: ignore[return-value]


def plane_wave_ratios(alpha: complex) -> Tuple[complex, complex]:
    """(x, y): per-step phase along t and along s."""
    return -1.0 / (alpha * alpha), alpha * alpha


class FourierPlaneWaveFamily(AnalyticEigenstateFamily):

    def available(self, spec: LatticeSpec) -> bool:
        return (
            alternation_ok(spec.periodic_s, spec.M, STRIPE_PERIOD)
            and alternation_ok(spec.periodic_t, spec.N, STRIPE_PERIOD)
        )

    def amplitudes(self, spec: LatticeSpec, params: Params) -> NDArray[np.complex128]:
        x, y = plane_wave_ratios(self.alpha)
        profile = np.outer(y ** np.arange(spec.M), x ** np.arange(spec.N))
        return product_amplitudes(profile, self.coin_vector)


FOURIER_FAMILIES: List[AnalyticEigenstateFamily] = [
    FourierPlaneWaveFamily(
        FamilyConfig("fourier", f"wave{n}", fourier_alpha(n), fourier_coin_vector(fourier_alpha(n)))
    )
    for n in range(4)
]


def fourier_states(spec: LatticeSpec, coin: Optional[CoinOperator] = None) -> List[CommonEigenstate]:
    require_coin(coin, "fourier")
    return build_states(spec, FOURIER_FAMILIES)
