#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
汎用ユーティリティ関数を提供するモジュール

このモジュールは、テキスト形式のヘッダー処理、安定したハッシュ、
CLI の一覧表示など、プロジェクト全体で使用される汎用的な関数を提供します。
出力はすべて実行ごとに同じバイト列になるよう、並び順を固定しています。
"""

import hashlib
from typing import Iterable, List, Sequence, Tuple

import pandas as pd

from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FORMAT_HEADER = "pastel-format 1"


def edge_key(edges: Iterable[str]) -> str:
    """
    辺集合の正規形の文字列 "{e0,e1}" を返す

    Args:
        edges (Iterable[str]): 辺ID

    Returns:
        str: 辺IDをソートしてカンマで連結した文字列
    """
    return "{" + ",".join(sorted(edges)) + "}"


def stable_hash(text: str) -> str:
    """
    テキストの sha256 の先頭12桁を返す

    Args:
        text (str): ハッシュ対象のテキスト

    Returns:
        str: 16進数12桁
    """
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def content_lines(text: str) -> List[Tuple[int, str]]:
    """
    テキストから空行とコメント（# 以降）を除いた (行番号, 内容) を返す

    先頭の有効行が pastel-format ヘッダーの場合は取り除きます。
    それ以外のバージョンのヘッダーは ValueError になります。

    Args:
        text (str): ファイルの内容

    Returns:
        List[Tuple[int, str]]: 1始まりの行番号と内容
    """
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("note ") else raw.strip()
        if line:
            lines.append((line_no, line))
    if lines and lines[0][1].startswith("pastel-format"):
        if lines[0][1] != FORMAT_HEADER:
            raise ValueError(f"{lines[0][0]}行目: 対応していない形式です: '{lines[0][1]}'")
        lines = lines[1:]
    return lines


def with_header(lines: Sequence[str]) -> str:
    """ヘッダーを付けて改行で連結します（末尾に改行を1つ付けます）"""
    return "\n".join([FORMAT_HEADER, *lines]) + "\n"


def render_table(rows: Sequence[Sequence[object]], columns: Sequence[str]) -> str:
    """
    行のリストを pandas で固定幅の表に整形する

    Args:
        rows (Sequence[Sequence[object]]): 行
        columns (Sequence[str]): 列名

    Returns:
        str: 表の文字列（行がなければ列名だけ）
    """
    if not rows:
        return "  ".join(columns)
    df = pd.DataFrame([list(map(str, row)) for row in rows], columns=list(columns))
    return df.to_string(index=False, justify="left")


def count_table(counts: Sequence[int], label: str = "simplices") -> str:
    """次元ごとの個数を "dim  simplices" の表にします"""
    return render_table([(n, c) for n, c in enumerate(counts)], ["dim", label])
