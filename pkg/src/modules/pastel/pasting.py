#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
pasting diagram の代数を扱うモジュール

pasting diagram (G, S) は globular グラフ G と、すべてのパスを含み
globular 部分グラフをとる操作で閉じた集合 S の組です。パスは暗黙に
含まれるものとし、members にはパスでない要素（内部面を持つ部分グラフ）
だけを辺集合として保持します。
"""

from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.utils.logging_config import get_logger
from src.modules.pastel.errors import BadInclusion, NotGlobularSubgraph, NotIncluded, NotSubgraphClosed, NotWideGenerated
from src.modules.pastel.nerve_calc import nerve
from src.modules.pastel.paths_poset import poset_of
from src.modules.pastel.plane_graph import EdgeSet, PlaneGraph, join, subgraph_xy
from src.modules.pastel.simplicial import FiniteSSet

logger = get_logger(__name__)


class PastingDiagram:
    """
    pasting diagram (G, S)

    Args:
        graph (PlaneGraph): globular グラフ
        members (Iterable): S に属するパスでない globular 部分グラフの辺集合
        name (str): 名前
    """

    def __init__(self, graph: PlaneGraph, members: Iterable[Iterable[str]], name: str = ""):
        self.graph = graph
        self.name = name or graph.name
        normalized = set()
        for edges in members:
            edges = frozenset(edges)
            if not graph.is_globular_subgraph(edges):
                raise NotGlobularSubgraph(edges)
            if not graph.is_path(edges):
                normalized.add(edges)
        self.members: FrozenSet[EdgeSet] = frozenset(normalized)
        missing = [b for a in self.members for b in _globular_within(graph, a) if b not in self.members]
        if missing:
            raise NotSubgraphClosed(f"{self.name}: 部分グラフで閉じていません ({sorted(missing[0])})", subject=missing[0])

    def __repr__(self) -> str:
        return f"PastingDiagram({self.name}: {len(self.members)} members)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PastingDiagram):
            return NotImplemented
        return self.graph.edge_set == other.graph.edge_set and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.graph.edge_set, self.members))

    def contains(self, edges: Iterable[str]) -> bool:
        edges = frozenset(edges)
        if not edges <= self.graph.edge_set:
            return False
        return edges in self.members or self.graph.is_path(edges)

    def __contains__(self, edges: Iterable[str]) -> bool:
        return self.contains(edges)

    def __le__(self, other: "PastingDiagram") -> bool:
        return self.members <= other.members

    @cached_property
    def elements(self) -> List[EdgeSet]:
        """パスを含むすべての要素（辺数・辺ID順）"""
        found = [edges for edges in self.graph.globular_subgraphs if self.contains(edges)]
        return sorted(found, key=_edge_order)

    def endpoints(self, edges: EdgeSet) -> Tuple[str, str]:
        sub = self.graph.globular_subgraphs[edges]
        return sub.source, sub.target

    @cached_property
    def wide_elements(self) -> List[EdgeSet]:
        s, t = self.graph.source, self.graph.target
        return [a for a in self.elements if self.endpoints(a) == (s, t)]

    @cached_property
    def maximal_wide_elements(self) -> List[EdgeSet]:
        wide = self.wide_elements
        return [a for a in wide if not any(a < b for b in wide)]

    @cached_property
    def is_complete(self) -> bool:
        return complete(self).members == self.members

    @cached_property
    def is_subdivision_closed(self) -> bool:
        return subdivision_closure(self).members == self.members

    @cached_property
    def is_generated_by_wide(self) -> bool:
        return generate(self.graph, self.wide_elements).members == self.members

    def members_text(self) -> List[str]:
        return ["{" + ",".join(sorted(a)) + "}" for a in sorted(self.members, key=_edge_order)]


def _edge_order(edges: EdgeSet):
    return (len(edges), sorted(edges))


def _globular_within(graph: PlaneGraph, edges: EdgeSet) -> List[EdgeSet]:
    return [b for b in graph.globular_subgraphs if b <= edges and not graph.is_path(b)]


def generate(g: PlaneGraph, generators: Iterable[Iterable[str]], name: str = "") -> PastingDiagram:
    """
    生成元を含む最小の pasting diagram ⟨S⟩ を返します。

    Raises:
        NotGlobularSubgraph: 生成元が globular 部分グラフでない場合
    """
    members = set()
    for edges in generators:
        edges = frozenset(edges)
        if not g.is_globular_subgraph(edges):
            raise NotGlobularSubgraph(edges)
        members.update(_globular_within(g, edges))
    return PastingDiagram(g, members, name=name)


def minimal(g: PlaneGraph) -> PastingDiagram:
    """Σ_min：内部面とパスで生成される pasting diagram"""
    return generate(g, [face.edges for face in g.interior_faces], name=f"min({g.name})")


def maximal(g: PlaneGraph) -> PastingDiagram:
    """Π_max：G 自身で生成される pasting diagram"""
    return generate(g, [g.edge_set], name=f"max({g.name})")


def _joins(d: PastingDiagram, elements: Sequence[EdgeSet]) -> set:
    found = set()
    ends = {a: d.endpoints(a) for a in elements}
    for a in elements:
        for b in elements:
            if ends[a][1] == ends[b][0] and not (a & b):
                found.add(a | b)
    return found


def complete(d: PastingDiagram) -> PastingDiagram:
    """join で閉じた最小の pasting diagram Σ^c を素朴な不動点計算で求めます"""
    current = d
    while True:
        new = {u for u in _joins(current, current.elements) if u not in current}
        if not new:
            break
        current = generate(d.graph, set(current.members) | new, name=current.name)
    name = d.name if current.members == d.members else f"{d.name}^c"
    return PastingDiagram(d.graph, current.members, name=name)


def subdivision_closure(d: PastingDiagram) -> PastingDiagram:
    """
    subdivision で閉じた最小の pasting diagram を返します。

    K が H の subdivision であるとは H ⊆ K かつ dom K = dom H, cod K = cod H
    となることです。
    """
    g = d.graph
    current = d
    while True:
        new = set()
        for h in current.members:
            sub_h = g.globular_subgraphs[h]
            for k, sub_k in g.globular_subgraphs.items():
                if h < k and k not in current and sub_k.dom == sub_h.dom and sub_k.cod == sub_h.cod:
                    new.add(k)
        if not new:
            break
        current = generate(g, set(current.members) | new, name=current.name)
    return PastingDiagram(g, current.members, name=d.name if current.members == d.members else f"{d.name}^sd")


def restrict(d: PastingDiagram, edges: Iterable[str], name: Optional[str] = None) -> PastingDiagram:
    """H に含まれる要素だけを残した制限 Σ_H を返します"""
    edges = frozenset(edges)
    sub = d.graph.globular_subgraph(edges)
    if sub is None:
        raise NotGlobularSubgraph(edges)
    return PastingDiagram(sub, [a for a in d.members if a <= edges], name=name or f"{d.name}|{','.join(sorted(edges))}")


def restrict_xy(d: PastingDiagram, x: str, y: str) -> Optional[PastingDiagram]:
    """Σ_{x,y}。x から y へのパスがなければ None"""
    sub = subgraph_xy(d.graph, x, y)
    if sub is None:
        return None
    return restrict(d, sub.edge_set, name=f"{d.name}_{x},{y}")


def join_pd(d1: PastingDiagram, d2: PastingDiagram) -> PastingDiagram:
    """
    wide な部分グラフで生成された2つの pasting diagram の join を返します。

    結果が生成元の選び方によらないことを、wide な要素全体と極大な
    wide 要素だけの2通りで計算して確認します。

    Raises:
        NotWideGenerated: どちらかが wide な部分グラフで生成されていない場合
    """
    for d in (d1, d2):
        if not d.is_generated_by_wide:
            raise NotWideGenerated(f"{d.name} は wide な部分グラフで生成されていません")
    g = join(d1.graph, d2.graph)
    name = f"{d1.name}⋈{d2.name}"
    result = generate(g, [a | b for a in d1.wide_elements for b in d2.wide_elements], name=name)
    check = generate(g, [a | b for a in d1.maximal_wide_elements for b in d2.maximal_wide_elements])
    assert result.members == check.members, f"{name}: 生成元の選び方で join が変わります"
    return result


def hc(sigma: PastingDiagram, pi: PastingDiagram) -> PastingDiagram:
    """
    Σ hc Π = S ∪ ⋃_x T_{s,x} ⋈ T_{x,t} を返します（x は s, t 以外の頂点）。

    Π が complete なら、結果が complete であることと、(x, y) ≠ (s, t) で
    (Σ hc Π)_{x,y} = Π_{x,y} となることを確認します。

    Raises:
        NotIncluded: S ⊆ T でない場合
    """
    g = sigma.graph
    if g.edge_set != pi.graph.edge_set:
        raise BadInclusion(f"{sigma.name} と {pi.name} のグラフが異なります")
    if not sigma.members <= pi.members:
        extra = sorted(sigma.members - pi.members, key=_edge_order)[0]
        raise NotIncluded(f"{sigma.name} ⊄ {pi.name}: {{{','.join(sorted(extra))}}}")
    s, t = g.source, g.target
    generators = set(sigma.members)
    for x in g.vertices:
        if x in (s, t):
            continue
        left, right = restrict_xy(pi, s, x), restrict_xy(pi, x, t)
        generators.update(a | b for a in left.wide_elements for b in right.wide_elements)
    result = generate(g, generators, name=f"{sigma.name} hc {pi.name}")
    logger.debug(f"{result.name}: 新しい要素 {len(result.members - sigma.members)} 個")

    if pi.is_complete:
        assert result.is_complete, f"{result.name} が complete ではありません"
        for x in g.vertices:
            for y in g.vertices:
                if (x, y) == (s, t):
                    continue
                part = restrict_xy(result, x, y)
                if part is not None:
                    assert part.members == restrict_xy(pi, x, y).members, f"(Σ hc Π)_{{{x},{y}}} != Π_{{{x},{y}}}"
    return result


def hc_restriction_sides(sigma: PastingDiagram, pi: PastingDiagram, edges: Iterable[str]) -> Tuple[PastingDiagram, PastingDiagram]:
    """(Σ_H hc Π_H) と (Σ hc Π)_H の組を返します（前者は後者に含まれる）"""
    edges = frozenset(edges)
    inner = hc(restrict(sigma, edges), restrict(pi, edges))
    outer = restrict(hc(sigma, pi), edges)
    assert inner.members <= outer.members, "Σ_H hc Π_H ⊄ (Σ hc Π)_H"
    return inner, outer


def witness_criterion(d: PastingDiagram, chain) -> bool:
    """鎖の最小の証拠 γ_i がすべて S の1つの要素に含まれるかどうか"""
    if len(chain) == 1:
        return True
    poset = poset_of(d.graph)
    carrier = frozenset().union(*(poset.witness(p, q).carrier for p, q in zip(chain, chain[1:])))
    return any(carrier <= a for a in d.members)


def carrier_criterion(d: PastingDiagram, chain) -> bool:
    """P_σ = ∪ p_i が S に属するかどうか（complete な場合の判定法）"""
    return d.contains(frozenset(e for p in chain for e in p.edges))


def nerve_pd(d: PastingDiagram) -> FiniteSSet:
    """
    N(G, S) を N(G) の単体的部分集合として返します。

    一般には証拠による判定を使い、complete な場合は P_σ ∈ S による
    判定とも一致することを確認します。
    """
    ambient = nerve(d.graph)
    keys = {key for key in ambient.keyset if witness_criterion(d, key)}
    if d.is_complete:
        by_carrier = {key for key in ambient.keyset if carrier_criterion(d, key)}
        assert keys == by_carrier, f"{d.name}: 2つの判定法の結果が一致しません"
    return ambient.subset(keys, name=f"N({d.name})")
