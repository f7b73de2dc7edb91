#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
コマンドラインのサブコマンドと終了コードをテストするモジュール
"""

import json

import pytest

from src.main import main


def run(capsys, *argv):
    """main を実行して (終了コード, 標準出力) を返す"""
    status = main(["--log-level", "WARNING", *argv])
    return status, capsys.readouterr().out


class TestGraphCommands:
    """グラフの検査と表示"""

    def test_catalog_list(self, capsys):
        status, out = run(capsys, "catalog", "list")
        assert status == 0, "catalog list が失敗しました"
        assert out.split() == ["B1", "B2", "B3", "J", "F", "H", "W"], "カタログの一覧が一致しません"

    def test_catalog_show(self, capsys):
        status, out = run(capsys, "catalog", "show", "H")
        assert status == 0 and out.startswith("pastel-format 1\ngraph H\n"), "catalog show の出力が一致しません"
        assert "diagram glob-tb: generators = {b,t}" in out, "diagram 文が出力されません"

    def test_check(self, capsys):
        status, out = run(capsys, "check", "B2")
        assert status == 0, "check B2 が失敗しました"
        assert out.splitlines() == [
            "graph B2: globular",
            "source 0",
            "target 1",
            "dom e0",
            "cod e2",
            "faces 2: e0/e1 e1/e2",
        ], "check の出力が一致しません"

    def test_nerve(self, capsys):
        status, out = run(capsys, "nerve", "B3", "--json")
        assert status == 0, "nerve B3 が失敗しました"
        assert json.loads(out)["dimension"] == 3, "N(B3) は3次元です"

    def test_render(self, capsys):
        status, out = run(capsys, "render", "B1", "--format", "tikz")
        assert status == 0 and "\\begin{tikzpicture}" in out, "TikZ が出力されません"


class TestDiagramCommands:
    """pasting diagram と単体的圏"""

    def test_pd_hc(self, capsys):
        status, out = run(capsys, "pd-hc", "H", "min-complete", "max")
        assert status == 0, "pd-hc が失敗しました"
        lines = out.splitlines()
        assert lines[1] == "new 4", "Σ_minᶜ hc Π_max の新しい要素は4個です"
        assert lines[2:] == ["  {b,t}", "  {a,b,t}", "  {b,m,t}", "  {a,b,m,t}"], "新しい要素の一覧が一致しません"

    def test_pd_check(self, capsys):
        status, out = run(capsys, "pd-check", "J", "min")
        assert status == 0, "pd-check が失敗しました"
        assert "complete false" in out and "wide-generated false" in out, "Σ_min(J) の性質が一致しません"

    def test_scat_hom(self, capsys):
        status, out = run(capsys, "scat", "J", "max", "--hom", "0", "2")
        assert status == 0, "scat --hom が失敗しました"
        assert json.loads(out)["dimension"] == 2, "C[J](0,2) は2次元です"


class TestCompositionCommands:
    """貼り合わせ・延長・証明書"""

    def test_paste_b2(self, capsys):
        status, out = run(capsys, "paste", "B2", "B2-T", "T")
        assert status == 0, "paste が失敗しました"
        assert out.splitlines()[0] == "composite 1_k", "B2-T の合成は 1_k です"

    def test_paste_canonical(self, capsys, examples_dir):
        status, out = run(capsys, "paste", str(examples_dir / "O.graph"), "canonical", str(examples_dir / "O.twocat"))
        assert status == 0, "O の paste が失敗しました"
        assert out.splitlines()[0] == "composite (wv·ψ)∘(w·φ·a)∘(ξ·ba)", "O の合成が一致しません"

    def test_extend(self, capsys):
        status, out = run(capsys, "extend", "J", "J-T", "T")
        assert status == 0, "extend が失敗しました"
        assert out.splitlines()[-1] == "composite 1_kl", "延長の値が貼り合わせと一致しません"

    def test_anodyne_round_trip(self, capsys, tmp_path):
        path = tmp_path / "b2.cert"
        status, _ = run(capsys, "anodyne", "B2", "min", "max", "-o", str(path))
        assert status == 0 and path.exists(), "証明書が出力されません"
        status, out = run(capsys, "anodyne", "B2", "min", "max", "--validate-only", str(path))
        assert (status, out) == (0, "valid: 1 steps\n"), "証明書の検証結果が一致しません"

        path.write_text(path.read_text(encoding="utf-8").replace("horn=1", "horn=0"), encoding="utf-8")
        status, out = run(capsys, "anodyne", "B2", "min", "max", "--validate-only", str(path))
        assert status == 1 and out.startswith("invalid: step 1 InnerIndexViolation"), "外側のホーンは検証に失敗します"


class TestExitCodes:
    """終了コード"""

    def test_unknown_graph(self, capsys):
        status, out = run(capsys, "check", "B9")
        assert status == 1 and out == "", "見つからないグラフは終了コード1です"

    def test_bad_arguments(self, capsys):
        assert main(["no-such-command"]) == 2, "不明なサブコマンドは終了コード2です"
        assert main(["pd-hc", "H"]) == 2, "引数の不足は終了コード2です"

    def test_catalog_show_without_name(self, capsys):
        status, _ = run(capsys, "catalog", "show")
        assert status == 1, "グラフ名のない catalog show は終了コード1です"

    @pytest.mark.parametrize("operator", ["0,x", "3,0"])
    def test_bad_operator(self, capsys, operator):
        status, _ = run(capsys, "act", "B2", "e0,e1,e2|e0/e1:1,e1/e2:2|2", operator)
        assert status == 1, f"不正な単体作用素 {operator} は終了コード1です"
