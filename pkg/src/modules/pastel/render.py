#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
グラフを DOT / TikZ / SVG で出力するモジュール

SVG は DOT を Graphviz の dot コマンドで変換します。dot コマンドは
[RENDER] dot_binary（環境変数 PASTEL_DOT で上書き可）で指定します。
"""

import shutil
import subprocess
from typing import Dict, List, Tuple

import networkx as nx

from src.utils.environment import EnvironmentUtils as env
from src.utils.logging_config import get_logger
from src.modules.pastel.errors import RenderError
from src.modules.pastel.paths_poset import PathPoset
from src.modules.pastel.plane_graph import PlaneGraph

logger = get_logger(__name__)

FORMATS = ("dot", "tikz", "svg")


def _quote(text: str) -> str:
    return '"' + str(text).replace('"', '\\"') + '"'


def to_dot(g: PlaneGraph) -> str:
    """
    グラフを DOT で出力します。

    頂点は左から右へ並べ、dom の辺を太線、cod の辺を破線にします。
    内部面は境界の辺のラベルに含めず、コメントとして列挙します。
    """
    dom, cod = set(g.dom), set(g.cod)
    lines = [f"digraph {_quote(g.name or 'G')} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for face in g.interior_faces:
        lines.append(f"  // face {face.id}")
    for v in g.vertices:
        lines.append(f"  {_quote(v)};")
    for e, (u, v) in g.edges.items():
        style = []
        if e in dom:
            style.append("penwidth=2")
        if e in cod:
            style.append("style=dashed")
        attrs = ", ".join([f"label={_quote(e)}"] + style)
        lines.append(f"  {_quote(u)} -> {_quote(v)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(poset: PathPoset, name: str = "PG") -> str:
    """半順序集合のハッセ図を DOT で出力します（下から上へ）"""
    hasse = poset.hasse()
    order = {str(p): k for k, p in enumerate(poset.elements)}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for p in poset.elements:
        lines.append(f"  {_quote(str(p))};")
    for p, q in sorted(hasse.edges(), key=lambda pair: (order[pair[0]], order[pair[1]])):
        lines.append(f"  {_quote(p)} -> {_quote(q)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def layout(g: PlaneGraph) -> Dict[str, Tuple[int, int]]:
    """
    頂点の座標を決めます。

    x は source からの最長パスの長さ、y は同じ x の頂点の dom からの順番です。
    """
    depth: Dict[str, int] = {}
    for v in nx.topological_sort(g.digraph):
        preds = [depth[u] for u, _ in g.digraph.in_edges(v)]
        depth[v] = max(preds) + 1 if preds else 0
    on_dom = g.endpoints_of_path(g.dom)
    order = {v: (0 if v in on_dom else 1, k) for k, v in enumerate(g.vertices)}
    columns: Dict[int, List[str]] = {}
    for v in sorted(g.vertices, key=lambda v: order[v]):
        columns.setdefault(depth[v], []).append(v)
    return {v: (x, y) for x, column in columns.items() for y, v in enumerate(column)}


def to_tikz(g: PlaneGraph, scale: float = 1.5) -> str:
    """
    グラフを TikZ で出力します。

    平行な辺は rotation の順に bend の角度を変えて描きます。
    """
    position = layout(g)
    lines = ["\\begin{tikzpicture}[>=stealth]"]
    for v in g.vertices:
        x, y = position[v]
        lines.append(f"  \\node[fill,circle,inner sep=1.5pt,label=below:{{{v}}}] ({v}) at ({x * scale:g},{y * scale:g}) {{}};")
    parallel: Dict[Tuple[str, str], List[str]] = {}
    for e, ends in g.edges.items():
        parallel.setdefault(ends, []).append(e)
    for (u, v), edges in parallel.items():
        ordered = [d[0] for d in g.rotation[u] if d[1] == "+" and d[0] in edges]
        for k, e in enumerate(ordered):
            bend = (k - (len(ordered) - 1) / 2) * 30
            style = f"bend left={bend:g}" if bend >= 0 else f"bend right={-bend:g}"
            lines.append(f"  \\draw[->] ({u}) to[{style}] node[midway,fill=white,inner sep=1pt] {{\\scriptsize {e}}} ({v});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def to_svg(g: PlaneGraph) -> str:
    """
    DOT を dot コマンドで SVG に変換します。

    Raises:
        RenderError: dot コマンドが見つからない、または失敗した場合
    """
    binary = env.get_dot_binary()
    dot_path = shutil.which(binary)
    if dot_path is None:
        raise RenderError(f"'{binary}' コマンドが見つかりません。Graphviz をインストールしてください", subject=binary)
    try:
        result = subprocess.run([dot_path, "-Tsvg"], input=to_dot(g), capture_output=True, text=True, check=True)
    except subprocess.CalledProcessError as e:
        raise RenderError(f"dot の実行に失敗しました: {e.stderr.strip()}", subject=binary)
    logger.debug(f"{g.name}: SVG {len(result.stdout)} 文字")
    return result.stdout


def render(g: PlaneGraph, fmt: str) -> str:
    """
    Raises:
        RenderError: 未対応の形式、または SVG の変換に失敗した場合
    """
    if fmt == "dot":
        return to_dot(g)
    if fmt == "tikz":
        return to_tikz(g)
    if fmt == "svg":
        return to_svg(g)
    raise RenderError(f"未対応の形式です: {fmt}（{', '.join(FORMATS)}）", subject=fmt)
