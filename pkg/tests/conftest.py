import numpy as np
import pytest

from deformation import INFINITE_TAU, DeformationFamily, FamilyId
from dynamics import ForceField, Scenario


@pytest.fixture(autouse=True)
def isolated_log_dir(tmp_path, monkeypatch):
    """Cada teste grava o histórico em um diretório temporário próprio."""
    log_dir = tmp_path / "logs"
    monkeypatch.setenv("NCDYN_LOG_DIR", str(log_dir))
    return log_dir


@pytest.fixture
def force():
    return ForceField([0.6, -0.8, 0.3])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_scenario():
    """Fábrica de cenários com valores padrão razoáveis (t0 = 0)."""

    def _make(family=None, mass=1.0, force=(0.6, -0.8, 0.3), x0=(0.5, -1.0, 2.0),
              v0=(1.0, 0.5, -0.25), t_end=10.0, step=1e-3, t_start=0.0):
        return Scenario.from_kinematics(mass, force, x0, v0, t_end, step, family=family, t_start=t_start)

    return _make


@pytest.fixture
def k2_limit():
    return DeformationFamily(FamilyId.K2, 0.1, INFINITE_TAU)
