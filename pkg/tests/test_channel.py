import numpy as np
import pytest

from conftest import channel
from perqwalk.walk.channel import (
    EdgeConfiguration,
    PercolationModel,
    apply_channel,
    apply_channel_exhaustive,
    generator_configs,
    random_configs,
    sample_config,
    shift_map,
    substream,
)
from perqwalk.walk.lattice import Edge, Site, slot_table
from perqwalk.walk.states import DensityOperator

COINS = ["hadamard2d", "grover", "fourier"]


def test_configuration_basics(carpet3):
    full = EdgeConfiguration.full(carpet3)
    empty = EdgeConfiguration.empty(carpet3)
    assert len(full) == 12 and len(empty) == 0
    assert Edge(Site(0, 0), "s") in full
    assert Edge(Site(0, 0), "s") not in full.without(0)
    assert len(EdgeConfiguration.from_mask(carpet3, 0b101)) == 2
    with pytest.raises(ValueError):
        EdgeConfiguration(carpet3, np.ones(5, dtype=bool))


def test_percolation_model():
    with pytest.raises(ValueError):
        PercolationModel(1.5)


def test_configuration_weights_sum_to_one(carpet3):
    model = PercolationModel(0.3)
    total = sum(model.weight(EdgeConfiguration.from_mask(carpet3, m)) for m in range(1 << 12))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_generator_configs(torus3):
    configs = generator_configs(torus3)
    n_edges = slot_table(torus3).n_edges
    assert len(configs) == n_edges + 2
    assert len(configs[0]) == n_edges and len(configs[-1]) == 0


@pytest.mark.parametrize("coin", COINS)
def test_step_unitary_matches_dense(coin, rng):
    ch = channel("3x4:open,periodic", coin)
    config = random_configs(ch.spec, rng, 1)[0]
    u = ch.unitary(config)
    dense = u.to_dense()
    assert np.allclose(dense.conj().T @ dense, np.eye(ch.dim), atol=1e-12)
    psi = rng.normal(size=ch.dim) + 1j * rng.normal(size=ch.dim)
    x = rng.normal(size=(ch.dim, ch.dim)) + 1j * rng.normal(size=(ch.dim, ch.dim))
    assert np.allclose(u.apply(psi), dense @ psi, atol=1e-12)
    assert np.allclose(u.apply_right(x), x @ dense, atol=1e-12)
    assert np.allclose(u.conjugate(x), dense @ x @ dense.conj().T, atol=1e-12)


def test_bare_shift_is_permutation(torus3):
    dense = shift_map(torus3, EdgeConfiguration.full(torus3)).to_dense()
    assert np.array_equal(np.abs(dense).sum(axis=0), np.ones(torus3.dim))


@pytest.mark.parametrize("coin", COINS)
@pytest.mark.parametrize("p", [0.3, 0.5])
def test_pairwise_channel_equals_exhaustive_sum(coin, p, rng):
    ch = channel("3x3:open,open", coin, p)
    for _ in range(2):
        rho = DensityOperator.random(ch.spec, rng).matrix
        assert np.max(np.abs(ch.apply(rho) - apply_channel_exhaustive(ch, rho))) <= 1e-12


def test_exhaustive_sum_refuses_large_lattices():
    ch = channel("4x4:periodic,periodic")
    with pytest.raises(ValueError):
        apply_channel_exhaustive(ch, np.eye(ch.dim))


@pytest.mark.parametrize("coin", COINS)
def test_channel_is_unital_and_trace_preserving(coin, rng):
    ch = channel("4x3:periodic,open", coin, 0.4)
    identity = np.eye(ch.dim, dtype=np.complex128)
    assert np.allclose(ch.apply(identity), identity, atol=1e-12)
    rho = DensityOperator.random(ch.spec, rng).matrix
    out = ch.apply(rho)
    assert np.trace(out) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(out - out.conj().T)) <= 1e-12


def test_channel_extremes_are_single_unitaries(rng):
    rho = DensityOperator.random(channel("3x3:open,open").spec, rng).matrix
    for p, config in ((1.0, EdgeConfiguration.full), (0.0, EdgeConfiguration.empty)):
        ch = channel("3x3:open,open", "grover", p)
        expected = ch.unitary(config(ch.spec)).conjugate(rho)
        assert np.allclose(ch.apply(rho), expected, atol=1e-12)


def test_apply_channel_symmetrizes_on_request(carpet3, rng):
    ch = channel("3x3:open,open")
    rho = rng.normal(size=(ch.dim, ch.dim)) + 0j
    sym = 0.5 * (rho + rho.T)
    assert np.allclose(apply_channel(ch, rho, symmetrize=True), ch.apply(sym), atol=1e-12)
    with pytest.raises(ValueError):
        apply_channel(ch, np.eye(3))


def test_averaged_step(torus3):
    ch = channel("3x3:periodic,periodic", "hadamard2d", 1.0)
    b = ch.averaged_step().to_dense()
    assert np.allclose(b, ch.unitary(EdgeConfiguration.full(torus3)).to_dense(), atol=1e-12)
    half = channel("3x3:periodic,periodic", "hadamard2d", 0.5).averaged_step()
    assert half.spectral_radius() <= 1.0 + 1e-12


def test_substreams_are_deterministic():
    a = substream(42, 3, 7).random(5)
    b = substream(42, 3, 7).random(5)
    c = substream(42, 3, 8).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_config_extremes(carpet3, rng):
    n_edges = slot_table(carpet3).n_edges
    assert len(sample_config(PercolationModel(1.0), carpet3, rng)) == n_edges
    assert len(sample_config(PercolationModel(0.0), carpet3, rng)) == 0


def test_sample_config_edge_frequency(torus3):
    rng = np.random.default_rng(7)
    model = PercolationModel(0.5)
    n = 100_000
    counts = np.zeros(slot_table(torus3).n_edges)
    for _ in range(n):
        counts += sample_config(model, torus3, rng).present
    assert np.all(np.abs(counts / n - 0.5) <= 0.01)
