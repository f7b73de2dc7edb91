#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
pasting diagram の代数と神経をテストするモジュール
"""

import networkx as nx
import pytest

from src.modules.pastel.errors import NotGlobularSubgraph, NotIncluded, NotSubgraphClosed, NotWideGenerated
from src.modules.pastel.nerve_calc import nerve
from src.modules.pastel.pasting import (
    PastingDiagram,
    complete,
    generate,
    hc,
    hc_restriction_sides,
    join_pd,
    maximal,
    minimal,
    nerve_pd,
    restrict,
    restrict_xy,
    subdivision_closure,
)


def edge_sets(*groups):
    return {frozenset(g.split(",")) for g in groups}


def joined(*parts):
    """wide な要素で生成された制限を順に join します（そうでなければ None）"""
    if any(part is None or not part.is_generated_by_wide for part in parts):
        return None
    result = parts[0]
    for part in parts[1:]:
        result = join_pd(result, part)
    return result


class TestGeneration:
    """生成・完備化・subdivision 閉包"""

    def test_minimal_of_h(self, graphs):
        d = minimal(graphs["H"])
        assert d.members == edge_sets("b,m", "m,t", "a,t,L"), "Σ_min(H) は3つの内部面だけを持ちます"
        assert d.contains({"a", "b"}), "パスは暗黙に含まれます"
        assert not d.contains({"b", "t"}), "{t,b} は Σ_min(H) に含まれません"

    def test_generate_rejects_non_globular(self, graphs):
        with pytest.raises(NotGlobularSubgraph):
            generate(graphs["H"], [{"a", "L"}])

    def test_members_closed_under_subgraphs(self, graphs):
        with pytest.raises(NotSubgraphClosed):
            PastingDiagram(graphs["B2"], [{"e0", "e1", "e2"}])

    def test_completion_of_h(self, graphs):
        d = complete(minimal(graphs["H"]))
        assert d.members == edge_sets("b,m", "m,t", "a,t,L", "a,b,m", "a,m,t"), "Σ_min(H)ᶜ の要素が一致しません"
        assert d.is_complete, "完備化の結果は complete です"
        assert not minimal(graphs["H"]).is_complete, "Σ_min(H) は complete ではありません"

    def test_completion_of_j_is_maximal(self, graphs):
        g = graphs["J"]
        assert complete(minimal(g)).members == maximal(g).members, "Σ_min(J)ᶜ = Π_max(J) が成り立ちません"

    def test_maximal_is_closed(self, graphs):
        for name, g in graphs.items():
            d = maximal(g)
            assert d.is_complete, f"{name}: Π_max は complete です"
            assert d.is_subdivision_closed, f"{name}: Π_max は subdivision で閉じています"
            assert d.is_generated_by_wide, f"{name}: Π_max は wide な要素で生成されます"

    def test_subdivision_closure_is_idempotent(self, graphs):
        for name, g in graphs.items():
            d = subdivision_closure(minimal(g))
            assert minimal(g) <= d, f"{name}: 閉包は元の diagram を含みます"
            assert subdivision_closure(d).members == d.members, f"{name}: 閉包を2回とっても変わりません"

    def test_members_text(self, graphs):
        assert minimal(graphs["B2"]).members_text() == ["{e0,e1}", "{e1,e2}"], "要素の表示が一致しません"


class TestRestriction:
    """制限と join"""

    def test_restrict_to_g12(self, graphs):
        # G_{1,2} は平行な3本の辺 b, m, t だけなので面は2つです。3つ目の面 a.t/L は G_{1,2} に含まれません
        part = restrict_xy(minimal(graphs["H"]), "1", "2")
        assert part.members == edge_sets("b,m", "m,t"), "Σ_min(H) の G_{1,2} への制限は2つの面を持ちます"
        assert len(part.graph.interior_faces) == 2, "G_{1,2} の内部面は2つです"
        assert restrict_xy(minimal(graphs["H"]), "1", "1") is None, "x = y の制限はありません"

    def test_restrict_rejects_non_globular(self, graphs):
        with pytest.raises(NotGlobularSubgraph):
            restrict(maximal(graphs["H"]), {"a", "L"})

    def test_join_of_b1(self, graphs):
        g = graphs["J"]
        left = restrict_xy(maximal(g), "0", "1")
        right = restrict_xy(maximal(g), "1", "2")
        assert join_pd(left, right).members == maximal(g).members, "Π_max(B1) ⋈ Π_max(B1) = Π_max(J) です"

    def test_join_requires_wide_generation(self, graphs):
        g = graphs["H"]
        not_wide = generate(g, [{"b", "m"}])
        with pytest.raises(NotWideGenerated):
            join_pd(not_wide, maximal(graphs["B1"]))


class TestHc:
    """hc 演算"""

    def test_hc_golden(self, graphs):
        # {a,t,m,b}, {a,t,b}, {t,b} の3個に加えて、G_{1,2} = {t,m,b} も G_{0,1}⋈G_{1,2} の
        # globular 部分グラフなので、部分グラフで閉じる条件から加わります
        g = graphs["H"]
        sigma = complete(minimal(g))
        result = hc(sigma, maximal(g))
        new = result.members - sigma.members
        assert len(new) == 4, "Σ_minᶜ hc Π_max で新しく加わる要素は4個です"
        assert edge_sets("a,t,m,b", "a,t,b", "t,b") <= new, "G_{0,1}⋈G_{1,2} とその部分グラフが加わります"
        assert frozenset({"t", "m", "b"}) in new, "G_{1,2} は部分グラフとして加わります"
        assert result <= maximal(g), "Π が complete なら S hc T ⊆ T です"

    def test_hc_without_interior_vertices(self, graphs):
        for name in ("B1", "B2", "B3"):
            g = graphs[name]
            assert hc(minimal(g), maximal(g)).members == minimal(g).members, f"{name}: 内部頂点がなければ Σ hc Π = Σ です"

    def test_hc_requires_inclusion(self, graphs):
        g = graphs["H"]
        with pytest.raises(NotIncluded):
            hc(maximal(g), minimal(g))

    def test_hc_restriction_is_strict(self, graphs):
        g = graphs["H"]
        inner, outer = hc_restriction_sides(complete(minimal(g)), maximal(g), {"t", "m", "b"})
        assert inner.members < outer.members, "H では Σ_H hc Π_H ⊊ (Σ hc Π)_H です"
        assert frozenset({"t", "b"}) in outer.members - inner.members, "差は glob {t,b} を含みます"


class TestNerves:
    """pasting diagram の神経"""

    def test_nerve_of_maximal_is_full(self, graphs):
        for name, g in graphs.items():
            assert nerve_pd(maximal(g)).keyset == nerve(g).keyset, f"{name}: N(Π_max) = N(G) です"

    def test_nerve_of_minimal_b2(self, graphs):
        space = nerve_pd(minimal(graphs["B2"]))
        assert space.counts() == (3, 2), "N(Σ_min(B2)) はホーン Λ2,1 です"

    def test_nerve_of_union(self, graphs):
        for name, g in graphs.items():
            faces = [face.edges for face in g.interior_faces]
            pieces = [generate(g, [edges]) for edges in faces]
            union = set().union(*(nerve_pd(d).keyset for d in pieces))
            assert nerve_pd(minimal(g)).keyset == union, f"{name}: N(Σ_min) は各面の神経の和集合です"

    def test_nerve_of_restriction(self, graphs):
        g = graphs["H"]
        d = hc(complete(minimal(g)), maximal(g))
        edges = {"a", "b", "m", "t"}
        sub = g.globular_subgraph(edges)
        expected = nerve_pd(d).keyset & nerve(sub).keyset
        assert nerve_pd(restrict(d, edges)).keyset == expected, "wide な制限の神経は共通部分です"

    def test_nerve_of_hc(self, graphs):
        for name in ("H", "J", "F", "W"):
            g = graphs[name]
            sigma, pi = complete(minimal(g)), maximal(g)
            expected = set(nerve_pd(sigma).keyset)
            for x in g.vertices:
                if x in (g.source, g.target):
                    continue
                joined = join_pd(restrict_xy(pi, g.source, x), restrict_xy(pi, x, g.target))
                expected |= nerve_pd(joined).keyset
            assert nerve_pd(hc(sigma, pi)).keyset == expected, f"{name}: N(Σ hc Π) の等式が成り立ちません"

    @pytest.mark.parametrize("name", ["B1", "B2", "B3", "F", "H", "J", "W"])
    def test_restriction_square_is_cartesian(self, graphs, name):
        g = graphs[name]
        for d in (minimal(g), complete(minimal(g)), maximal(g)):
            whole = nerve_pd(d).keyset
            for edges in maximal(g).wide_elements:
                expected = whole & nerve(g.globular_subgraph(edges)).keyset
                assert nerve_pd(restrict(d, edges)).keyset == expected, f"{name}: {d.name} の {sorted(edges)} への制限の神経が共通部分と一致しません"

    @pytest.mark.parametrize("name", ["B1", "B2", "B3", "F", "H", "J", "W"])
    def test_pushout_square_is_bicartesian(self, graphs, name):
        g = graphs[name]
        sigma = complete(minimal(g))
        left = nerve_pd(sigma).keyset
        for edges in maximal(g).wide_elements:
            tau = restrict(maximal(g), edges)
            right = nerve_pd(tau).keyset
            union = nerve_pd(PastingDiagram(g, sigma.members | tau.members)).keyset
            assert union == left | right, f"{name}: N(S ∪ T) が N(S) ∪ N(H, T) と一致しません ({sorted(edges)})"
            assert left & right == nerve_pd(restrict(sigma, edges)).keyset, f"{name}: N(S) ∩ N(H, T) が N(H, S_H) と一致しません ({sorted(edges)})"

    def test_join_intersection(self, graphs):
        checked = 0
        for name, g in graphs.items():
            s, t = g.source, g.target
            inner = [v for v in g.vertices if v not in (s, t)]
            for sigma in (maximal(g), complete(minimal(g))):
                for x in inner:
                    for y in inner:
                        if x == y:
                            continue
                        via_x = joined(restrict_xy(sigma, s, x), restrict_xy(sigma, x, t))
                        via_y = joined(restrict_xy(sigma, s, y), restrict_xy(sigma, y, t))
                        if via_x is None or via_y is None:
                            continue
                        both = nerve_pd(via_x).keyset & nerve_pd(via_y).keyset
                        if nx.has_path(g.digraph, x, y):
                            through = joined(restrict_xy(sigma, s, x), restrict_xy(sigma, x, y), restrict_xy(sigma, y, t))
                            if through is None:
                                continue
                            assert both == nerve_pd(through).keyset, f"{name}: x={x}, y={y} の交わりが Σ_sx⋈Σ_xy⋈Σ_yt の神経と一致しません"
                            checked += 1
                        elif not nx.has_path(g.digraph, y, x):
                            assert not both, f"{name}: パスのない {x}, {y} で交わりが空ではありません"
                            checked += 1
        assert checked > 0, "内部頂点の組が1つも検査されていません"
