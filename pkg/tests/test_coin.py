import json

import numpy as np
import pytest

from perqwalk.errors import ConfigError, NonUnitaryCoinError
from perqwalk.walk.coin import (
    COIN_KINDS,
    REFLECTION,
    coin_state,
    distinct_alphas,
    load_coin_file,
    make_coin,
    random_coin,
    rc_spectrum,
)


@pytest.mark.parametrize("kind", ["hadamard2d", "grover", "fourier"])
def test_named_coins_are_unitary(kind):
    c = make_coin(kind).matrix
    assert np.allclose(c.conj().T @ c, np.eye(4), atol=1e-12)


def test_unknown_coin_lists_known_kinds():
    with pytest.raises(ConfigError, match="hadamard2d"):
        make_coin("pauli")
    assert "custom" in COIN_KINDS


def test_non_unitary_custom_coin_rejected():
    with pytest.raises(NonUnitaryCoinError):
        make_coin("custom", np.ones((4, 4)))
    with pytest.raises(ConfigError):
        make_coin("custom", np.eye(3))


def test_reflection_swaps_opposite_directions():
    assert np.array_equal(REFLECTION @ np.arange(4), np.array([3, 2, 1, 0]))


def _sorted_alphas(kind):
    return np.array(distinct_alphas(make_coin(kind)))


def test_hadamard_rc_eigenvalues():
    alphas = _sorted_alphas("hadamard2d")
    assert np.allclose(alphas, [1, 1j, -1j], atol=1e-9)
    degeneracy = [sum(abs(p.alpha - a) < 1e-9 for p in rc_spectrum(make_coin("hadamard2d"))) for a in alphas]
    assert degeneracy == [2, 1, 1]


def test_grover_rc_eigenvalues():
    pairs = rc_spectrum(make_coin("grover"))
    assert np.allclose(_sorted_alphas("grover"), [1, -1], atol=1e-9)
    assert sum(abs(p.alpha - 1) < 1e-9 for p in pairs) == 3


def test_fourier_rc_eigenvalues_are_fourth_roots_of_minus_i():
    alphas = _sorted_alphas("fourier")
    assert len(alphas) == 4
    assert np.allclose(alphas ** 4, -1j, atol=1e-9)


@pytest.mark.parametrize("kind", ["hadamard2d", "grover", "fourier"])
def test_rc_eigenpairs(kind):
    coin = make_coin(kind)
    vectors = np.stack([p.vector for p in rc_spectrum(coin)], axis=1)
    for pair in rc_spectrum(coin):
        assert np.allclose(coin.rc @ pair.vector, pair.alpha * pair.vector, atol=1e-10)
    assert np.allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-10)


def test_random_coin_is_unitary(rng):
    coin = random_coin(rng)
    assert coin.kind == "custom"
    assert np.allclose(coin.matrix.conj().T @ coin.matrix, np.eye(4), atol=1e-12)


def test_load_coin_file(tmp_path):
    grover = make_coin("grover").matrix
    path = tmp_path / "coin.json"
    path.write_text(json.dumps([[[z.real, z.imag] for z in row] for row in grover]))
    coin = load_coin_file(path)
    assert coin.kind == "custom"
    assert np.array_equal(coin.matrix, grover)


def test_load_coin_file_rejects_bad_shape(tmp_path):
    path = tmp_path / "coin.json"
    path.write_text(json.dumps([[1, 0], [0, 1]]))
    with pytest.raises(ConfigError):
        load_coin_file(path)
    with pytest.raises(ConfigError):
        load_coin_file(tmp_path / "missing.json")


def test_coin_states():
    assert np.isclose(np.linalg.norm(coin_state("uniform")), 1.0)
    assert np.allclose(coin_state("spread"), [0.5, -0.5, -0.5, 0.5])
    with pytest.raises(ConfigError, match="@uniform"):
        coin_state("nope")
