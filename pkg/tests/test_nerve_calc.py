#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
globular グラフの神経と n-marked subgraph をテストするモジュール
"""

import pytest
from hypothesis import given, settings, strategies as st

from src.modules.pastel.errors import FormatError, NotAdmissible
from src.modules.pastel.nerve_calc import (
    ChainSimplex,
    MarkedSubgraph,
    act_operator,
    chain_simplex,
    chain_to_marked,
    is_admissible,
    join_iso,
    join_split,
    marked_subgraphs,
    marked_to_chain,
    nerve,
    sset_iso,
    sset_product,
)
from src.modules.pastel.paths_poset import StPath, poset_of
from src.modules.pastel.plane_graph import PlaneGraph, join, subgraph_xy
from src.modules.pastel.simplicial import degeneracy_operator, face_operator, monotone_maps, standard_simplex


def parallel_graph(n: int, source: str = "0", target: str = "1", prefix: str = "e") -> PlaneGraph:
    """n+1 本の平行な辺を持つ B_n"""
    edges = {f"{prefix}{k}": (source, target) for k in range(n + 1)}
    rotation = {
        source: [(f"{prefix}{k}", "+") for k in range(n + 1)],
        target: [(f"{prefix}{k}", "-") for k in reversed(range(n + 1))],
    }
    return PlaneGraph([source, target], edges, rotation, (f"{prefix}{n}", "+"), name=f"B{n}")


def generators(n: int):
    """[n] を行き先とする面・退化作用素の生成元"""
    ops = [face_operator(n, i) for i in range(n + 1)] if n > 0 else []
    ops += [degeneracy_operator(n, i) for i in range(n + 1)]
    return ops


class TestNerveGoldens:
    """N(B_n) と N(B_n ⋈ B_m)"""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_nerve_of_bn_is_simplex(self, n):
        assert sset_iso(nerve(parallel_graph(n)), standard_simplex(n)) is not None, f"N(B{n}) ≅ Δ{n} が成り立ちません"

    @pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 4) for m in range(1, 4)])
    def test_nerve_of_join_is_product(self, n, m):
        g = join(parallel_graph(n), parallel_graph(m, "1", "2", prefix="d"))
        expected = sset_product(standard_simplex(n), standard_simplex(m))
        assert sset_iso(nerve(g), expected) is not None, f"N(B{n}⋈B{m}) ≅ Δ{n}×Δ{m} が成り立ちません"

    def test_nerve_of_j(self, graphs):
        assert nerve(graphs["J"]).counts() == (4, 5, 2), "N(B1⋈B1) は4頂点・5辺・2つの2-単体です"

    def test_nerve_of_f(self, graphs):
        assert nerve(graphs["F"]).counts() == (5, 9, 7, 2), "N(F) の非退化単体の数が一致しません"

    def test_nerve_identities(self, graphs):
        for name, g in graphs.items():
            assert nerve(g).check_identities(max_dim=3) == [], f"{name}: 単体的恒等式が成り立ちません"


class TestMarkedSubgraphs:
    """鎖と n-marked subgraph の対応"""

    def test_chain_to_marked_b2(self, graphs):
        g = graphs["B2"]
        chain = ChainSimplex((StPath.of(g, ("e0",)), StPath.of(g, ("e2",))))
        m = chain_to_marked(g, chain)
        assert m.key == "e0,e2|e0/e2:1|1", "B2 の鎖 e0 ≤ e2 の marked subgraph が一致しません"
        assert marked_to_chain(g, m) == chain, "marked subgraph から鎖が復元されません"
        assert MarkedSubgraph.parse(m.key) == m, "キーから marked subgraph が復元されません"

    def test_chain_simplex_is_degenerate(self, graphs):
        g = graphs["B2"]
        space = nerve(g)
        e0, e2 = StPath.of(g, ("e0",)), StPath.of(g, ("e2",))
        expected = space.degeneracy(space.simplex((e0, e2)), 0)
        assert chain_simplex((e0, e0, e2)) == expected, "繰り返しのある鎖は s0 で退化した単体です"

    def test_not_admissible(self, graphs):
        g = graphs["B2"]
        m = MarkedSubgraph.make({"e0", "e1", "e2"}, {"e0/e1": 2, "e1/e2": 1}, 2)
        assert not is_admissible(g, m), "上の面のラベルが小さい marked subgraph は admissible ではありません"
        with pytest.raises(NotAdmissible):
            marked_to_chain(g, m)

    def test_not_wide(self, graphs):
        g = graphs["H"]
        m = MarkedSubgraph.make({"t", "m"}, {"m/t": 1}, 1)
        assert not is_admissible(g, m), "wide でない部分グラフは admissible ではありません"

    def test_parse_error(self):
        with pytest.raises(FormatError):
            MarkedSubgraph.parse("e0,e1|e0/e1")

    def test_bijection_counts(self, graphs):
        for name, g in graphs.items():
            poset = poset_of(g)
            for n in range(6):
                chains = list(poset.chains(n))
                marked = list(marked_subgraphs(g, n))
                assert len(chains) == len(marked), f"{name}: {n}-鎖と admissible な marked subgraph の数が一致しません"
                assert {chain_to_marked(g, ChainSimplex(c)) for c in chains} == set(marked), f"{name}: n={n} の対応が全単射ではありません"

    def test_round_trips(self, graphs):
        for name, g in graphs.items():
            for m in marked_subgraphs(g, 3):
                assert chain_to_marked(g, marked_to_chain(g, m)) == m, f"{name}: {m.key} の往復が恒等写像になりません"

    def test_join_iso_and_split(self, graphs):
        g = graphs["J"]
        g1, g2 = subgraph_xy(g, "0", "1"), subgraph_xy(g, "1", "2")
        for m in marked_subgraphs(g, 2):
            first, second = join_split(g1, g2, m)
            assert join_iso(first, second) == m, f"{m.key}: join と分割が逆になりません"


class TestOperatorAction:
    """単体作用素の作用"""

    def test_face_of_b2_simplex(self, graphs):
        g = graphs["B2"]
        m = MarkedSubgraph.parse("e0,e1,e2|e0/e1:1,e1/e2:2|2")
        assert act_operator(g, m, (0, 2)).key == "e0,e2|e0/e2:1|1", "d1 の作用で e1 が消えます"
        assert act_operator(g, m, (1, 2)).key == "e1,e2|e1/e2:1|1", "d0 の作用で下の面が消えます"
        assert act_operator(g, m, (0, 0, 1, 2)).key == "e0,e1,e2|e0/e1:2,e1/e2:3|3", "s0 の作用でラベルがずれます"

    def test_generators_agree_with_chains(self, graphs):
        for name, g in graphs.items():
            poset = poset_of(g)
            for n in range(4):
                for chain in poset.chains(n):
                    m = chain_to_marked(g, ChainSimplex(chain))
                    for alpha in generators(n):
                        expected = chain_to_marked(g, ChainSimplex(chain).act(alpha))
                        assert act_operator(g, m, alpha) == expected, f"{name}: {m.key} への {alpha} の作用が一致しません"

    @settings(deadline=None, max_examples=50)
    @given(st.data())
    def test_random_operators_agree_with_chains(self, graphs, data):
        name = data.draw(st.sampled_from(sorted(graphs)))
        g = graphs[name]
        n = data.draw(st.integers(min_value=0, max_value=4))
        chains = list(poset_of(g).chains(n))
        chain = ChainSimplex(data.draw(st.sampled_from(chains)))
        k = data.draw(st.integers(min_value=0, max_value=4))
        alpha = data.draw(st.sampled_from(list(monotone_maps(k, n))))
        m = chain_to_marked(g, chain)
        assert act_operator(g, m, alpha) == chain_to_marked(g, chain.act(alpha)), f"{name}: {m.key} への {alpha} の作用が一致しません"

    def test_non_monotone_operator(self, graphs):
        g = graphs["B2"]
        m = MarkedSubgraph.parse("e0,e1,e2|e0/e1:1,e1/e2:2|2")
        with pytest.raises(ValueError):
            act_operator(g, m, (2, 0))
