import os
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from perqwalk.config.settings import override_settings  # noqa: E402
from perqwalk.walk.channel import PercolationChannel, PercolationModel  # noqa: E402
from perqwalk.walk.coin import make_coin  # noqa: E402
from perqwalk.walk.lattice import LatticeSpec  # noqa: E402

GOLDENS = ROOT / "tests" / "fixtures" / "goldens"


@pytest.fixture(autouse=True)
def fresh_settings():
    override_settings(None)
    yield
    override_settings(None)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def carpet3():
    return LatticeSpec.parse("3x3:open,open")


@pytest.fixture
def torus3():
    return LatticeSpec.parse("3x3:periodic,periodic")


@pytest.fixture
def goldens_dir():
    return GOLDENS


def channel(lattice: str, coin: str = "hadamard2d", p: float = 0.5) -> PercolationChannel:
    return PercolationChannel(LatticeSpec.parse(lattice), make_coin(coin), PercolationModel(p))


def cli_env(**extra: str) -> dict:
    env = os.environ.copy()
    existing = env.get("PYTHONPATH", "")
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [str(SRC), existing]))
    env.update(extra)
    return env
