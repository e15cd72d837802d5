import pytest

from truncsmt.config import settings

from .helpers import SCENARIOS, curve


@pytest.fixture(autouse=True)
def restore_settings(monkeypatch):
    # the CLI writes --tol/--threads/--seed into the shared settings object
    for name in ("DEFAULT_TOL", "THREADS", "SEED", "QUAD_MAX_NODES"):
        monkeypatch.setattr(settings, name, getattr(settings, name))


@pytest.fixture
def scenario_path():
    return lambda name: SCENARIOS / name


@pytest.fixture
def line_curve():
    """f = (z : 1)."""
    return curve("z", "1")


@pytest.fixture
def exp_curve():
    """f = (1 : z : e^z)."""
    return curve("1", "z", "exp(z)")
