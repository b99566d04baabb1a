from itertools import combinations

import numpy as np
import pytest

from conftest import channel
from perqwalk.asymptotics.analytic import analytic_states
from perqwalk.asymptotics.attractors import (
    AsymptoticDecomposition,
    asymptotic_fastpath,
    asymptotic_marginal,
    asymptotic_state,
    attractor_basis_for,
    closed_form_dimension,
    complete_basis,
    dimension_report,
    find_common_eigenstates_numeric,
    general_attractor_basis,
    lambda_multiset,
    p_attractor_basis,
    p_attractor_residual,
)
from perqwalk.asymptotics.eigenstates import CommonEigenstate
from perqwalk.config.settings import Settings, override_settings
from perqwalk.errors import AttractorCompletenessError, CertificationError, GuardError, NotOrthonormalError
from perqwalk.walk.channel import EdgeConfiguration, PercolationChannel, PercolationModel, random_configs
from perqwalk.walk.coin import random_coin
from perqwalk.walk.evolution import evolve_until_converged, marginal_from_diagonal, position_marginal
from perqwalk.walk.lattice import LatticeSpec
from perqwalk.walk.states import DensityOperator, StateVector

COINS = ["hadamard2d", "grover", "fourier"]

DIMENSION_TABLE = [
    ("4x4:open,open", "hadamard2d", 101),
    ("4x3:periodic,periodic", "hadamard2d", 26),
    ("3x4:periodic,periodic", "hadamard2d", 50),
    ("3x3:periodic,periodic", "hadamard2d", 10),
    ("3x3:open,open", "grover", 257),
    ("3x3:periodic,periodic", "grover", 101),
    ("4x4:periodic,periodic", "grover", 325),
    ("3x3:open,open", "fourier", 17),
    ("3x3:periodic,periodic", "fourier", 1),
]


@pytest.mark.parametrize("lattice, coin, expected", DIMENSION_TABLE)
def test_dimension_table(lattice, coin, expected):
    spec = LatticeSpec.parse(lattice)
    report = dimension_report(spec, coin)
    assert closed_form_dimension(spec, coin) == expected
    assert report.numeric_count == expected
    assert report.analytic_count == expected
    assert report.general_count == expected
    assert report.match
    assert sum(m for _, m in report.lambdas) == expected


def test_closed_form_has_no_mixed_grover_entry():
    assert closed_form_dimension(LatticeSpec.parse("3x4:open,periodic"), "grover") is None
    with pytest.raises(ValueError):
        closed_form_dimension(LatticeSpec.parse("3x3:open,open"), "custom")


def test_lambda_multiset_of_hadamard_3x3_torus():
    report = dimension_report(LatticeSpec.parse("3x3:periodic,periodic"), "hadamard2d")
    assert report.lambdas == [(1 + 0j, 10)]


def test_numeric_states_match_analytic_span():
    ch = channel("4x4:open,open", "hadamard2d")
    numeric = find_common_eigenstates_numeric(ch)
    analytic = analytic_states(ch.spec, ch.coin)
    assert len(numeric) == len(analytic) == 10
    a = np.stack([s.vector for s in analytic], axis=1)
    n = np.stack([s.vector for s in numeric], axis=1)
    # projectors agree
    assert np.allclose(a @ a.conj().T, n @ n.conj().T, atol=1e-8)
    assert all(s.label.startswith("numeric[") for s in numeric)


def test_numeric_finder_at_p_extremes_uses_the_configuration_set():
    at_one = find_common_eigenstates_numeric(channel("3x3:open,open", "grover", 1.0))
    assert len(at_one) == 16


def test_p_attractors_satisfy_the_attractor_equation(rng):
    ch = channel("3x4:open,open", "hadamard2d")
    pbasis = p_attractor_basis(analytic_states(ch.spec, ch.coin), ch)
    u, v = (ch.unitary(k) for k in random_configs(ch.spec, rng, 2))
    for pattr in pbasis[::7]:
        assert p_attractor_residual(pattr, u, v) <= 1e-10
    lambdas = np.array([p.lam for p in pbasis])
    assert np.allclose(np.abs(lambdas), 1.0)


def test_lambdas_come_in_conjugate_pairs():
    ch = channel("4x4:open,open", "hadamard2d")
    pbasis = p_attractor_basis(analytic_states(ch.spec, ch.coin), ch)
    counts = dict(lambda_multiset([p.lam for p in pbasis]))
    assert counts[1j] > 0
    for lam, count in counts.items():
        assert counts[complex(np.round(lam.conjugate(), 12))] == count

    by_pair = {(p.left, p.right): p for p in pbasis}
    plus_i = [p for p in pbasis if abs(p.lam - 1j) <= 1e-8]
    for p in plus_i:
        q = by_pair[(p.right, p.left)]
        assert abs(q.lam + 1j) <= 1e-8
        assert np.allclose(q.dense(), p.dense().conj().T, atol=1e-12)


def test_hadamard_row_state_keeps_its_stripe():
    ch = channel("4x4:open,open", "hadamard2d")
    basis = attractor_basis_for(ch)
    row = next(s for s in analytic_states(ch.spec, ch.coin) if s.label == "hadamard2d.row(t=1)")
    dist = asymptotic_marginal(basis, StateVector(ch.spec, row.vector))
    expected = np.zeros((4, 4))
    expected[:, 1] = 0.25
    assert np.max(np.abs(dist.probs - expected)) <= 1e-10


def test_general_solver_on_small_torus():
    ch = channel("3x3:periodic,periodic", "hadamard2d")
    basis = general_attractor_basis(ch)
    assert basis.dimension == 10
    assert basis.status == "general"
    basis.check_orthonormal()
    x = basis.operator(0)
    config = EdgeConfiguration.full(ch.spec)
    u = ch.unitary(config)
    assert np.max(np.abs(u.apply(x) - basis.attractors[0].lam * u.apply_right(x))) <= 1e-8


def test_general_solver_respects_guard():
    override_settings(Settings(threads=1, general_guard=10))
    with pytest.raises(GuardError, match="PERQWALK_GENERAL_GUARD"):
        general_attractor_basis(channel("3x3:open,open"))


def test_complete_basis_detects_missing_states():
    ch = channel("3x3:periodic,periodic", "grover")
    states = analytic_states(ch.spec, ch.coin)[:-1]
    with pytest.raises(AttractorCompletenessError):
        complete_basis(p_attractor_basis(states, ch), ch)


def test_complete_basis_status():
    small = attractor_basis_for(channel("3x3:open,open", "fourier"))
    assert small.status == "certified" and small.general_dimension == 17
    big = attractor_basis_for(channel("5x5:periodic,periodic", "grover"))
    assert big.status == "certified" and big.general_dimension is None
    assert big.dimension == (25 + 1) ** 2 + 1


def test_custom_coin_above_guard_is_minimal(rng):
    override_settings(Settings(threads=1, general_guard=10))
    ch = PercolationChannel(LatticeSpec.parse("3x3:open,open"), random_coin(rng), PercolationModel(0.5))
    basis = attractor_basis_for(ch)
    assert basis.status == "minimal"
    with pytest.raises(CertificationError):
        asymptotic_fastpath(basis.decomposition(), ch, DensityOperator.random(ch.spec, rng))


def test_check_orthonormal_rejects_overlapping_states():
    override_settings(Settings(threads=1, general_guard=10))
    ch = channel("3x3:open,open", "fourier")
    state = analytic_states(ch.spec, ch.coin)[0]
    twin = CommonEigenstate(state.vector, state.alpha, "twin")
    with pytest.raises(NotOrthonormalError):
        complete_basis(p_attractor_basis([state, twin], ch), ch)


@pytest.mark.parametrize("coin", COINS)
@pytest.mark.parametrize("lattice", ["3x3:open,open", "4x3:periodic,periodic"])
def test_asymptotics_match_converged_dynamics(lattice, coin, rng):
    ch = channel(lattice, coin)
    basis = attractor_basis_for(ch)
    rho0 = DensityOperator.random(ch.spec, rng)
    result = evolve_until_converged(ch, rho0)
    assert result.converged
    eq5 = asymptotic_state(basis, rho0, result.steps)
    assert eq5.marginal().l1_distance(position_marginal(result.state)) <= 1e-6
    for t in (0, 3):
        fast = asymptotic_fastpath(basis.decomposition(), ch, rho0, t)
        slow = asymptotic_state(basis, rho0, t)
        assert fast.marginal().l1_distance(slow.marginal()) <= 1e-10


@pytest.mark.parametrize("coin", COINS)
def test_asymptotic_state_is_stationary(coin, rng):
    ch = channel("4x3:periodic,periodic", coin)
    basis = attractor_basis_for(ch)
    rho_as = asymptotic_state(basis, DensityOperator.random(ch.spec, rng)).density()
    after = marginal_from_diagonal(ch.spec, np.diagonal(ch.apply(rho_as.matrix)))
    assert position_marginal(rho_as).l1_distance(after) <= 1e-8
    assert rho_as.trace == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("coin", COINS)
def test_asymptotics_do_not_depend_on_p(coin, rng):
    spec = LatticeSpec.parse("3x3:open,open")
    rho0 = DensityOperator.random(spec, rng)
    marginals = {}
    for p in (0.1, 0.5, 0.9):
        ch = channel(str(spec), coin, p)
        marginals[p] = asymptotic_marginal(attractor_basis_for(ch, analytic=False), rho0).probs
    for a, b in combinations(marginals, 2):
        assert np.abs(marginals[a] - marginals[b]).sum() <= 1e-10


def test_fastpath_needs_certification(rng):
    ch = channel("3x3:open,open", "hadamard2d")
    basis = attractor_basis_for(ch)
    uncertified = AsymptoticDecomposition(ch.spec, basis.state_matrix(), basis.decomposition().alphas)
    with pytest.raises(CertificationError):
        asymptotic_fastpath(uncertified, ch, DensityOperator.random(ch.spec, rng))


def test_basis_export():
    basis = attractor_basis_for(channel("3x3:periodic,periodic", "hadamard2d"))
    data = basis.to_json()
    assert data["schema"] == 1
    assert data["dimension"] == 10
    assert data["status"] == "certified"
    assert len(data["states"]) == 3
    assert data["attractors"][-1]["kind"] == "complement"
