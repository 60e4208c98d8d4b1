import sys
import os

import pytest

# Добавляем корневую директорию и src в PYTHONPATH
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(project_root, '..'))
sys.path.insert(0, os.path.join(project_root, '../src'))

from pcsim.core.models import SpaceConfig  # noqa: E402


@pytest.fixture
def wide_space():
    return SpaceConfig(20)


@pytest.fixture
def small_space():
    return SpaceConfig(5)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv("PCS_SIM_THREADS", "1")
