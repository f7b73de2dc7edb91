#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
pastel パッケージで使用する例外クラスを定義するモジュール

すべての例外は PastelError を基底とし、CLI ではこの基底クラスを
捕捉して終了コード 1 を返します。各例外は原因となった頂点・閉路・面などを
属性として保持します。
"""

from typing import Any, Optional, Sequence


class PastelError(Exception):
    """pastel の処理で発生する例外の基底クラス"""

    def __init__(self, message: str, subject: Optional[Any] = None):
        super().__init__(message)
        self.subject = subject


class FormatError(PastelError):
    """テキスト形式の解析に失敗した場合の例外"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f"{line_no}行目: {message}"
        super().__init__(message, subject=line_no)
        self.line_no = line_no


class GraphFormatError(FormatError):
    """グラフ定義が不正な場合（重複ID、未定義の辺など）"""


class CatalogError(PastelError):
    """カタログに指定された名前が存在しない場合"""


# --- plane_graph ---

class EulerMismatch(PastelError):
    """V - E + F = 2 が成り立たない場合"""

    def __init__(self, vertices: int, edges: int, faces: int):
        super().__init__(
            f"オイラー数が一致しません: V={vertices}, E={edges}, F={faces} (V-E+F={vertices - edges + faces})",
            subject=(vertices, edges, faces),
        )
        self.vertices = vertices
        self.edges = edges
        self.faces = faces


class NotStGraph(PastelError):
    """湧き出し口・吸い込み口が一意でない、または連結でない場合"""

    def __init__(self, message: str, vertex: Optional[str] = None):
        super().__init__(message, subject=vertex)
        self.vertex = vertex


class ChiralityMismatch(NotStGraph):
    """
    入力で宣言された dom と、rotation と外部面から復元した dom が異なる場合

    宣言が復元した cod と一致するときは、rotation が反時計回りで与えられた鏡像です。
    """

    def __init__(self, declared: Sequence[str], dom: Sequence[str], cod: Sequence[str]):
        self.declared = tuple(declared)
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.mirrored = self.declared == self.cod
        reason = "rotation が反時計回りの鏡像です" if self.mirrored else "rotation か exterior の指定を確認してください"
        super().__init__(f"宣言された dom {'.'.join(declared)} が復元した dom {'.'.join(dom)} と異なります（{reason}）")


class HasDirectedCycle(PastelError):
    """有向閉路が存在する場合"""

    def __init__(self, cycle: Sequence[str]):
        super().__init__(f"有向閉路が存在します: {' -> '.join(cycle)}", subject=tuple(cycle))
        self.cycle = tuple(cycle)


class FaceNotGlobular(PastelError):
    """面の境界が p・q^op の形に分解できない場合"""

    def __init__(self, face_id: str, walk: Sequence[str]):
        super().__init__(
            f"面 {face_id} の境界 {' '.join(walk)} は dom・cod^op に分解できません",
            subject=face_id,
        )
        self.face_id = face_id
        self.walk = tuple(walk)


class NotComparable(PastelError):
    """2つの st-path の間に glob による証拠が存在しない場合"""


class NotAPartialOrder(PastelError):
    """パスの関係が半順序にならない場合（埋め込みの不具合を示す）"""


class NotGlobularSubgraph(PastelError):
    """指定された辺集合が globular な部分グラフでない場合"""

    def __init__(self, edges: Sequence[str], reason: str = ""):
        detail = f": {reason}" if reason else ""
        super().__init__(f"{{{','.join(sorted(edges))}}} は globular な部分グラフではありません{detail}", subject=frozenset(edges))
        self.edges = frozenset(edges)


# --- nerve_calc ---

class NotAdmissible(PastelError):
    """marked subgraph が admissible でない場合"""


# --- pasting ---

class NotSubgraphClosed(PastelError):
    """S が globular な部分グラフをとる操作で閉じていない場合"""


class NotWideGenerated(PastelError):
    """pasting diagram が wide な部分グラフで生成されていない場合"""


class NotIncluded(PastelError):
    """S ⊆ T が成り立たない場合"""


# --- scat ---

class NotComplete(PastelError):
    """pasting diagram が complete でない場合"""


class NotMinimalComplete(PastelError):
    """pasting diagram が minimal complete でない場合"""


class InvalidLabeling(PastelError):
    """ラベリングの整合条件が成り立たない場合"""


class BadInclusion(PastelError):
    """包含関係や部分構造の前提が成り立たない場合"""


# --- anodyne ---

class NotTwoConnected(PastelError):
    """グラフが 2-連結でない場合"""


class TooFewFaces(PastelError):
    """内部面が 2 つ未満の場合"""


class HypothesisViolated(PastelError):
    """証明書生成の前提条件が満たされない場合"""


class SearchExhausted(PastelError):
    """証明書探索が行き詰まった、または上限に達した場合"""

    def __init__(self, message: str, stuck: Optional[Sequence[Any]] = None):
        super().__init__(message, subject=stuck)
        self.stuck = tuple(stuck) if stuck is not None else ()


# --- compositor ---

class OracleFailure(PastelError):
    """フィラーオラクルが解を返せなかった場合"""


class Incompatible(PastelError):
    """持ち上げ問題の図式が可換でない場合"""


class TwoCategoryError(PastelError):
    """2-圏の表が不完全、または結合律・交換律が成り立たない場合"""


class RenderError(PastelError):
    """dot コマンドが見つからない、または出力形式が不正な場合"""
