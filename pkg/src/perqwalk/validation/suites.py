"""
Property suites behind `perqwalk validate`.

Each suite runs a fixed matrix of small instances and returns one
CheckResult per (invariant, instance). Nothing here raises on a failing
check; `run_suites` collects the results and the CLI turns failures into
ValidationFailure.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Sequence

import numpy as np
import scipy.linalg

from perqwalk.asymptotics.analytic import analytic_states
from perqwalk.asymptotics.attractors import (
    asymptotic_state,
    attractor_basis_for,
    find_common_eigenstates_numeric,
)
from perqwalk.asymptotics.eigenstates import state_matrix, verification_configs, verify_states
from perqwalk.errors import ConfigError
from perqwalk.utils.tracing import trace_block
from perqwalk.walk.channel import PercolationChannel, PercolationModel, apply_channel_exhaustive
from perqwalk.walk.coin import CoinOperator, make_coin, random_coin
from perqwalk.walk.evolution import marginal_from_diagonal, position_marginal
from perqwalk.walk.lattice import LatticeSpec
from perqwalk.walk.states import DensityOperator


logger = logging.getLogger("perqwalk.validation")

NAMED_COINS = ("hadamard2d", "grover", "fourier")
SUITE_SEED = 7


@dataclass
class CheckResult:
    """
    Outcome of one invariant on one instance.

    - value: the measured quantity (residual, drift, distance)
    - tol: the bound it is compared against (value <= tol passes)
    """
    suite: str
    invariant: str
    instance: str
    value: float
    tol: float
    passed: bool
    notes: str = ""


@dataclass
class SuiteReport:
    suites: List[str]
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _check(suite: str, invariant: str, instance: str, value: float, tol: float, notes: str = "") -> CheckResult:
    value = float(value)
    passed = bool(np.isfinite(value) and value <= tol)
    if not passed:
        logger.warning("FAIL %s/%s on %s: %.3e > %.1e", suite, invariant, instance, value, tol)
    return CheckResult(suite, invariant, instance, value, tol, passed, notes)


def _channel(lattice: str, coin: CoinOperator, p: float) -> PercolationChannel:
    return PercolationChannel(LatticeSpec.parse(lattice), coin, PercolationModel(p))


def _instance(ch: PercolationChannel, extra: str = "") -> str:
    label = f"{ch.spec} {ch.coin.kind} p={ch.p:g}"
    return f"{label} {extra}".strip()


class PropertySuite(ABC):
    name: str = ""

    @abstractmethod
    def run(self) -> List[CheckResult]:
        raise NotImplementedError


class CptpSuite(PropertySuite):
    """Trace, hermiticity and positivity of rho along 1000 channel steps."""

    name = "cptp"
    lattices = ("3x3:open,open", "3x3:periodic,periodic", "3x4:open,periodic")
    steps = 1000

    def run(self) -> List[CheckResult]:
        rng = np.random.default_rng(SUITE_SEED)
        coins = [make_coin(k) for k in NAMED_COINS] + [random_coin(rng)]
        out: List[CheckResult] = []
        for lattice in self.lattices:
            for coin in coins:
                ch = _channel(lattice, coin, 0.5)
                rho0 = DensityOperator.random(ch.spec, rng)
                rho = rho0.matrix
                drift = 0.0
                for _ in range(self.steps):
                    rho = ch.apply(rho)
                    drift = max(drift, abs(np.trace(rho) - 1.0))
                final = DensityOperator(ch.spec, rho)
                name = _instance(ch)
                out.append(_check(self.name, "trace", name, drift, 1e-12))
                out.append(_check(self.name, "hermitian", name, final.hermiticity_residual, 1e-10))
                out.append(_check(self.name, "positive", name, max(0.0, -final.min_eigenvalue()), 1e-10))
        return out


class OracleSuite(PropertySuite):
    """Pairwise channel against the full 2^|E| configuration sum."""

    name = "oracle"
    lattices = ("3x3:open,open",)
    n_states = 5

    def run(self) -> List[CheckResult]:
        rng = np.random.default_rng(SUITE_SEED)
        out: List[CheckResult] = []
        for lattice in self.lattices:
            for kind in NAMED_COINS:
                for p in (0.3, 0.5):
                    ch = _channel(lattice, make_coin(kind), p)
                    worst = 0.0
                    for _ in range(self.n_states):
                        rho = DensityOperator.random(ch.spec, rng).matrix
                        worst = max(worst, float(np.max(np.abs(ch.apply(rho) - apply_channel_exhaustive(ch, rho)))))
                    out.append(_check(self.name, "pairwise=exhaustive", _instance(ch), worst, 1e-12))
        return out


class EigenstateSuite(PropertySuite):
    """
    Closed-form states are common eigenstates and span the numeric ones on
    every boundary variant.
    """

    name = "eigenstates"
    sizes = ((3, 3), (3, 4), (4, 4))
    boundaries = ("open,open", "periodic,periodic", "open,periodic", "periodic,open")

    def run(self) -> List[CheckResult]:
        out: List[CheckResult] = []
        for (m, n) in self.sizes:
            for bounds in self.boundaries:
                for kind in NAMED_COINS:
                    ch = _channel(f"{m}x{n}:{bounds}", make_coin(kind), 0.5)
                    out.extend(self._check_instance(ch))
        return out

    def _check_instance(self, ch: PercolationChannel) -> List[CheckResult]:
        name = _instance(ch)
        analytic = analytic_states(ch.spec, ch.coin)
        residual = verify_states(ch, analytic, verification_configs(ch.spec))
        checks = [
            _check(self.name, "U_K phi = alpha phi", name, residual.max() if residual.size else 0.0, 1e-10),
        ]
        numeric = find_common_eigenstates_numeric(ch)
        checks += [
            _check(self.name, "count", name, abs(len(analytic) - len(numeric)), 0,
                   notes=f"analytic {len(analytic)}, numeric {len(numeric)}"),
        ]
        if analytic and numeric and len(analytic) == len(numeric):
            angles = scipy.linalg.subspace_angles(
                state_matrix(analytic, ch.dim), state_matrix(numeric, ch.dim)
            )
            checks.append(_check(self.name, "span", name, float(np.max(angles)), 1e-8))
        return checks


class StationaritySuite(PropertySuite):
    """One more channel step leaves the asymptotic marginal unchanged."""

    name = "stationarity"
    lattices = ("3x3:open,open", "3x3:periodic,periodic", "4x3:periodic,periodic")

    def run(self) -> List[CheckResult]:
        rng = np.random.default_rng(SUITE_SEED)
        out: List[CheckResult] = []
        for lattice in self.lattices:
            for kind in NAMED_COINS:
                ch = _channel(lattice, make_coin(kind), 0.5)
                basis = attractor_basis_for(ch)
                rho0 = DensityOperator.random(ch.spec, rng)
                rho_as = asymptotic_state(basis, rho0).density()
                before = position_marginal(rho_as)
                after = marginal_from_diagonal(ch.spec, np.diagonal(ch.apply(rho_as.matrix)))
                out.append(_check(self.name, "marginal fixed", _instance(ch), before.l1_distance(after), 1e-8))
        return out


class PIndependenceSuite(PropertySuite):
    """Asymptotic marginals built from B at different p coincide."""

    name = "pindep"
    lattices = ("3x3:open,open", "3x3:periodic,periodic")
    probabilities: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9)

    def run(self) -> List[CheckResult]:
        rng = np.random.default_rng(SUITE_SEED)
        out: List[CheckResult] = []
        for lattice in self.lattices:
            for kind in NAMED_COINS:
                spec = LatticeSpec.parse(lattice)
                rho0 = DensityOperator.random(spec, rng)
                marginals: Dict[float, np.ndarray] = {}
                for p in self.probabilities:
                    ch = PercolationChannel(spec, make_coin(kind), PercolationModel(p))
                    basis = attractor_basis_for(ch, analytic=False)
                    marginals[p] = asymptotic_state(basis, rho0).marginal().probs
                worst = max(
                    float(np.abs(marginals[a] - marginals[b]).sum())
                    for a, b in combinations(self.probabilities, 2)
                )
                out.append(_check(self.name, "p-independent", f"{spec} {kind}", worst, 1e-10))
        return out


SUITES: Dict[str, PropertySuite] = {
    suite.name: suite
    for suite in (CptpSuite(), OracleSuite(), EigenstateSuite(), StationaritySuite(), PIndependenceSuite())
}
SUITE_NAMES: List[str] = list(SUITES) + ["all"]


def resolve_suites(name: str) -> List[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise ConfigError(f"Unknown suite '{name}'. Known suites: {', '.join(SUITE_NAMES)}")
    return [name]


def run_suites(name: str) -> SuiteReport:
    names = resolve_suites(name)
    report = SuiteReport(suites=names)
    for suite_name in names:
        with trace_block(f"suite:{suite_name}"):
            checks = SUITES[suite_name].run()
        logger.info(
            "suite %s: %d/%d checks passed",
            suite_name, sum(c.passed for c in checks), len(checks),
        )
        report.checks.extend(checks)
    return report
