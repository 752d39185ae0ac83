"""Shared fixtures; puts ``src/`` on the import path."""

import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from linfrep.core.config import SessionConfig  # noqa: E402
from linfrep.core.repcat import adjoint_rep  # noqa: E402
from linfrep.services import fixtures as fx  # noqa: E402
from linfrep.services.generator import InstanceGenerator  # noqa: E402

FIXTURE_DIR = ROOT / "fixtures"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def sl2():
    return fx.sl2()


@pytest.fixture
def string_lie2():
    return fx.string_lie2()


@pytest.fixture
def dgla():
    return fx.dgla()


@pytest.fixture
def abelian():
    return fx.abelian()


@pytest.fixture
def heisenberg():
    return fx.heisenberg()


@pytest.fixture
def sl2_central():
    return fx.sl2_central()


@pytest.fixture
def sl2_adjoint(sl2):
    return adjoint_rep(sl2)


@pytest.fixture
def sl2_fundamental():
    return fx.sl2_fundamental()


@pytest.fixture
def casimir():
    return fx.sl2(2), fx.sl2_casimir()


@pytest.fixture
def string_poisson():
    return fx.string_lie2(3), fx.string_poisson()


@pytest.fixture
def central_casimir():
    return fx.sl2_central(2), fx.central_casimir()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240501)


@pytest.fixture
def generator() -> InstanceGenerator:
    return InstanceGenerator(SessionConfig(seed=7))
