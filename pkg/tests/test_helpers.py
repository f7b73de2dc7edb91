#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
汎用ユーティリティと設定の読み込みをテストするモジュール
"""

import pytest

from src.utils.environment import EnvironmentUtils as env
from src.utils.helpers import content_lines, count_table, edge_key, render_table, stable_hash, with_header


class TestHelpers:
    def test_edge_key(self):
        assert edge_key(["e2", "e0", "e1"]) == "{e0,e1,e2}", "辺IDはソートされます"
        assert edge_key([]) == "{}", "空の辺集合"

    def test_stable_hash(self):
        assert stable_hash("pastel") == stable_hash("pastel"), "ハッシュは実行ごとに同じです"
        assert len(stable_hash("pastel")) == 12, "ハッシュは12桁です"
        assert stable_hash("a") != stable_hash("b"), "異なる内容は異なるハッシュになります"

    def test_content_lines(self):
        text = "pastel-format 1\n\n# コメント\nvertex 0: +e0  # 末尾のコメント\nnote 記号 # も残ります\n"
        assert content_lines(text) == [(4, "vertex 0: +e0"), (5, "note 記号 # も残ります")], "空行とコメントが除かれません"

    def test_unsupported_version(self):
        with pytest.raises(ValueError):
            content_lines("pastel-format 9\nvertex 0:\n")

    def test_with_header(self):
        assert with_header(["a", "b"]) == "pastel-format 1\na\nb\n", "ヘッダーと末尾の改行が付きます"

    def test_tables(self):
        assert render_table([], ["x", "y"]) == "x  y", "行がなければ列名だけです"
        lines = count_table([3, 2]).splitlines()
        assert len(lines) == 3 and lines[0].split() == ["dim", "simplices"], "次元ごとの表が一致しません"
        assert lines[2].split() == ["1", "2"], "1次元の行が一致しません"


class TestEnvironment:
    def test_config_values(self):
        assert env.get_nerve_max_dim() == 5, "[NERVE] max_dim が読み込まれません"
        assert env.get_twocat_max_dim() == 3, "[TWOCAT] max_dim が読み込まれません"
        assert env.get_anodyne_max_states() == 200000, "[ANODYNE] max_states が読み込まれません"

    def test_missing_value_uses_default(self):
        assert env.get_config_value("NERVE", "no_such_key", default="x") == "x", "未設定のキーはデフォルト値です"
        assert env.get_config_value("NO_SECTION", "key", default=1) == 1, "未設定のセクションはデフォルト値です"

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("PASTEL_DOT", "/opt/graphviz/bin/dot")
        assert env.get_dot_binary() == "/opt/graphviz/bin/dot", "PASTEL_DOT が [RENDER] dot_binary より優先されます"
        monkeypatch.delenv("PASTEL_DOT")
        assert env.get_dot_binary() == "dot", "[RENDER] dot_binary が読み込まれません"

    def test_catalog_dir(self, monkeypatch):
        monkeypatch.delenv("PASTEL_CATALOG_DIR", raising=False)
        assert env.get_catalog_dir() == env.get_project_root() / "data" / "catalog", "カタログのディレクトリが一致しません"

    def test_resolve_missing_path(self):
        with pytest.raises(FileNotFoundError):
            env.resolve_path("data/no-such-directory")

    def test_environment_name(self, monkeypatch):
        monkeypatch.setenv("APP_ENV", "production")
        assert env.get_environment() == "production", "APP_ENV が読み込まれません"
