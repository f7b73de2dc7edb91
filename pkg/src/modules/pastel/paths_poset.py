#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
st-path の列挙と半順序 (PG, ≤) の構成を行うモジュール

p ≤ q は、p = a・dom γ・b かつ q = a・cod γ・b となる glob γ が存在すること
として定義されます。推移性は課すのではなく検証します。
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from src.utils.logging_config import get_logger
from src.modules.pastel.errors import NotAPartialOrder, NotComparable
from src.modules.pastel.plane_graph import Glob, PlaneGraph, glob_between

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class StPath:
    """
    有向パス（辺列と頂点列）

    空のパス StPath((), (x,)) は頂点 x での恒等射として使います。
    """

    edges: Tuple[str, ...]
    vertices: Tuple[str, ...] = field(default=())

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    @property
    def edge_set(self):
        return frozenset(self.edges)

    def then(self, other: "StPath") -> "StPath":
        """パスの連結 self・other"""
        if self.target != other.source:
            raise ValueError(f"{self} と {other} は連結できません")
        return StPath(self.edges + other.edges, self.vertices + other.vertices[1:])

    def __str__(self) -> str:
        return ".".join(self.edges) if self.edges else f"id[{self.source}]"

    @staticmethod
    def empty(vertex: str) -> "StPath":
        return StPath((), (vertex,))

    @staticmethod
    def of(g: PlaneGraph, edges: Sequence[str]) -> "StPath":
        return StPath(tuple(edges), g.endpoints_of_path(edges))


def find_subpath(path: Sequence[str], sub: Sequence[str]) -> int:
    """path の中で sub が連続して現れる最初の位置（なければ -1）"""
    n = len(sub)
    for k in range(len(path) - n + 1):
        if tuple(path[k:k + n]) == tuple(sub):
            return k
    return -1


def enumerate_paths(g: PlaneGraph, source: Optional[str] = None, target: Optional[str] = None) -> List[StPath]:
    """
    source から target へのすべての有向パスを辺IDの辞書式順で返します。

    Args:
        g (PlaneGraph): globular グラフ
        source (Optional[str]): 始点（省略時は g.source）
        target (Optional[str]): 終点（省略時は g.target）

    Returns:
        List[StPath]: パスの一覧
    """
    source = source or g.source
    target = target or g.target
    if source == target:
        return [StPath.empty(source)]
    paths = [
        StPath.of(g, [key for _, _, key in edge_path])
        for edge_path in nx.all_simple_edge_paths(g.digraph, source, target)
    ]
    return sorted(paths)


@dataclass
class PathPoset:
    """st-path の半順序集合"""

    graph: PlaneGraph
    elements: List[StPath]
    leq: List[List[bool]]
    witnesses: Dict[Tuple[int, int], Glob]

    @cached_property
    def index(self) -> Dict[StPath, int]:
        return {p: k for k, p in enumerate(self.elements)}

    def le(self, p: StPath, q: StPath) -> bool:
        return self.leq[self.index[p]][self.index[q]]

    def lt(self, p: StPath, q: StPath) -> bool:
        return p != q and self.le(p, q)

    @property
    def bottom(self) -> StPath:
        return self.elements[self._extreme(lambda i, j: self.leq[i][j])]

    @property
    def top(self) -> StPath:
        return self.elements[self._extreme(lambda i, j: self.leq[j][i])]

    def _extreme(self, below) -> int:
        n = len(self.elements)
        for i in range(n):
            if all(below(i, j) for j in range(n)):
                return i
        raise NotAPartialOrder(f"{self.graph.name}: 最小元または最大元が存在しません")

    def witness(self, p: StPath, q: StPath) -> Glob:
        if p == q:
            return glob_between(self.graph, p.edges, q.edges)
        key = (self.index[p], self.index[q])
        if key not in self.witnesses:
            raise NotComparable(f"{p} ≤ {q} ではありません")
        return self.witnesses[key]

    @cached_property
    def relation(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.elements)))
        graph.add_edges_from(self.witnesses)
        return graph

    def hasse(self) -> nx.DiGraph:
        """被覆関係（Hasse 図）をパスの文字列表現をノードとして返します"""
        reduced = nx.transitive_reduction(self.relation)
        return nx.relabel_nodes(reduced, {k: str(p) for k, p in enumerate(self.elements)})

    def chains(self, n: int) -> Iterator[Tuple[StPath, ...]]:
        """広義単調増加な鎖 p_0 ≤ … ≤ p_n をすべて列挙します（神経の n-単体）"""
        size = len(self.elements)

        def extend(prefix: List[int]) -> Iterator[Tuple[StPath, ...]]:
            if len(prefix) == n + 1:
                yield tuple(self.elements[k] for k in prefix)
                return
            last = prefix[-1]
            for k in range(size):
                if self.leq[last][k]:
                    yield from extend(prefix + [k])

        for start in range(size):
            yield from extend([start])

    def strict_chains(self, n: int) -> Iterator[Tuple[StPath, ...]]:
        for chain in self.chains(n):
            if all(a != b for a, b in zip(chain, chain[1:])):
                yield chain

    def maximal_chains(self) -> List[Tuple[StPath, ...]]:
        """bottom から top への極大鎖を辞書式順で返します"""
        cover = nx.transitive_reduction(self.relation)
        start, end = self.index[self.bottom], self.index[self.top]
        if start == end:
            return [(self.elements[start],)]
        chains = [tuple(self.elements[k] for k in path) for path in nx.all_simple_paths(cover, start, end)]
        return sorted(chains)

    def interval(self, p: StPath, q: StPath) -> List[StPath]:
        return [r for r in self.elements if self.le(p, r) and self.le(r, q)]

    @property
    def dimension(self) -> int:
        """最長の狭義の鎖の長さ"""
        if len(self.elements) == 1:
            return 0
        return nx.dag_longest_path_length(self.relation)


def build_poset(g: PlaneGraph, source: Optional[str] = None, target: Optional[str] = None) -> PathPoset:
    """
    パス全体に glob による順序を入れた半順序集合を構成します。

    すべての順序対に対して glob_between を呼び、反対称性と推移性を
    検証します。

    Raises:
        NotAPartialOrder: 反対称性または推移性が成り立たない場合
    """
    elements = enumerate_paths(g, source, target)
    n = len(elements)
    leq = [[i == j for j in range(n)] for i in range(n)]
    witnesses: Dict[Tuple[int, int], Glob] = {}
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            if i == j:
                continue
            try:
                witnesses[(i, j)] = glob_between(g, p.edges, q.edges)
                leq[i][j] = True
            except NotComparable:
                pass

    for (i, j) in witnesses:
        if leq[j][i]:
            raise NotAPartialOrder(f"{g.name}: {elements[i]} と {elements[j]} が互いに ≤ です")

    relation = nx.DiGraph()
    relation.add_nodes_from(range(n))
    relation.add_edges_from(witnesses)
    closure = nx.transitive_closure(relation, reflexive=False)
    missing = set(closure.edges()) - set(relation.edges())
    if missing:
        i, j = sorted(missing)[0]
        raise NotAPartialOrder(f"{g.name}: 推移性が成り立ちません ({elements[i]} ≤ {elements[j]} の証拠がありません)")

    logger.debug(f"{g.name}: {n} 個のパスと {len(witnesses)} 個の狭義の関係")
    return PathPoset(g, elements, leq, witnesses)


@lru_cache(maxsize=None)
def poset_of(g: PlaneGraph) -> PathPoset:
    """グラフごとにキャッシュした build_poset(g)"""
    return build_poset(g)
