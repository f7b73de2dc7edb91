# tests/conftest.py

import sys
from pathlib import Path

import pytest

# プロジェクトルートのパスを取得
project_root = Path(__file__).resolve().parent.parent

# src パッケージを import できるようにプロジェクトルートをPYTHONPATHに追加
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.modules.pastel import catalog  # noqa: E402


@pytest.fixture(scope="session")
def graphs():
    """カタログのすべてのグラフ（名前 → PlaneGraph）"""
    return catalog.load_catalog()


@pytest.fixture(scope="session")
def examples_dir() -> Path:
    """カタログ外の例（O グラフ、交換則の例）のディレクトリ"""
    return project_root / "data" / "examples"
