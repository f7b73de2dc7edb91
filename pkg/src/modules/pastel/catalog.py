#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
同梱のグラフ・pasting diagram・ラベリング・2-圏を読み込むモジュール

カタログは [CATALOG] directory（環境変数 PASTEL_CATALOG_DIR で上書き可）
の <名前>.graph ファイルです。CLI の引数にはカタログ名とファイルパスの
どちらも指定できます。
"""

from pathlib import Path
from typing import Dict, List, Optional

from src.utils.environment import EnvironmentUtils as env
from src.utils.logging_config import get_logger
from src.modules.pastel.errors import CatalogError
from src.modules.pastel.compositor import FreeTwoCategory, TwoCategory
from src.modules.pastel.formats import GraphFile, LabelingSpec, build_diagram, parse_graph_file, parse_labeling, parse_twocat
from src.modules.pastel.pasting import PastingDiagram, complete, maximal, minimal
from src.modules.pastel.plane_graph import PlaneGraph, check_globular

logger = get_logger(__name__)

CATALOG_NAMES = ("B1", "B2", "B3", "J", "F", "H", "W")
BUILTIN_DIAGRAMS = ("min", "min-complete", "max")


def catalog_dir() -> Path:
    return env.get_catalog_dir()


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def catalog_names() -> List[str]:
    """カタログのグラフ名（固定の順序）"""
    return list(CATALOG_NAMES)


def graph_file(ref: str) -> GraphFile:
    """
    カタログ名またはファイルパスからグラフファイルを読み込みます。

    Raises:
        CatalogError: 名前にもパスにも該当しない場合
    """
    path = Path(ref)
    if ref in CATALOG_NAMES:
        path = catalog_dir() / f"{ref}.graph"
    elif not path.exists():
        raise CatalogError(f"グラフ '{ref}' はカタログにもファイルとしても見つかりません", subject=ref)
    parsed = parse_graph_file(_read(path), name=path.stem)
    logger.debug(f"{ref}: {path} を読み込みました")
    return parsed


def load_graph(ref: str) -> PlaneGraph:
    return graph_file(ref).graph


def load_catalog() -> Dict[str, PlaneGraph]:
    """
    カタログのすべてのグラフを読み込み、globular であることを確認します。

    Raises:
        CatalogError: ファイルが見つからない場合
    """
    graphs = {}
    for name in CATALOG_NAMES:
        path = catalog_dir() / f"{name}.graph"
        if not path.exists():
            raise CatalogError(f"カタログのファイル {path} がありません", subject=name)
        graphs[name] = parse_graph_file(_read(path), name=name).graph
        check_globular(graphs[name])
    return graphs


def notes_of(ref: str) -> List[str]:
    return graph_file(ref).notes


def resolve_diagram(parsed: GraphFile, ref: str) -> PastingDiagram:
    """
    グラフに対する diagram 名を解決します。

    min / min-complete / max は組み込みで、それ以外はグラフファイルの
    diagram 文、最後にファイルパスとして探します。

    Raises:
        CatalogError: 見つからない場合
    """
    g = parsed.graph
    if ref == "min":
        return minimal(g)
    if ref == "min-complete":
        return complete(minimal(g))
    if ref == "max":
        return maximal(g)
    if ref in parsed.diagrams:
        return build_diagram(g, parsed.diagrams[ref])
    path = Path(ref)
    if path.exists():
        other = parse_graph_file(_read(path))
        if other.graph != g:
            raise CatalogError(f"{ref} のグラフが {g.name} と一致しません", subject=ref)
        if not other.diagrams:
            raise CatalogError(f"{ref} に diagram 文がありません", subject=ref)
        return build_diagram(g, next(iter(other.diagrams.values())))
    raise CatalogError(f"diagram '{ref}' が見つかりません（{', '.join(BUILTIN_DIAGRAMS + tuple(parsed.diagrams))}）", subject=ref)


def _find_file(ref: str, suffix: str) -> Path:
    path = Path(ref)
    if path.exists():
        return path
    candidate = catalog_dir() / f"{ref}{suffix}"
    if candidate.exists():
        return candidate
    raise CatalogError(f"'{ref}' はカタログにもファイルとしても見つかりません", subject=ref)


def load_labeling(ref: str) -> LabelingSpec:
    """ラベリングファイル（パス、またはカタログの <名前>.labeling）"""
    return parse_labeling(_read(_find_file(ref, ".labeling")))


def load_twocat(ref: str, graph: Optional[PlaneGraph] = None) -> TwoCategory:
    """
    2-圏ファイル（パス、またはカタログの <名前>.twocat）を読み込みます。

    free はカタログに同名のファイルがない場合の自由 2-圏で、graph が必要です。
    """
    if ref == "free" and graph is not None and not (catalog_dir() / "free.twocat").exists():
        return FreeTwoCategory(graph)
    path = _find_file(ref, ".twocat")

    def resolve(name: str) -> PlaneGraph:
        local = path.parent / f"{name}.graph"
        return parse_graph_file(_read(local), name=name).graph if local.exists() else load_graph(name)

    return parse_twocat(_read(path), resolve)
