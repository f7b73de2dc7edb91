#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
有限単体的集合をテストするモジュール
"""

from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from src.modules.pastel.simplicial import (
    FiniteCategory,
    Simplex,
    boundary,
    compose,
    degeneracy_word,
    eta_from_word,
    find_isomorphism,
    horn,
    is_simplicial_map,
    monotone_maps,
    nerve_of_category,
    nerve_of_poset,
    product,
    simplicial_maps,
    standard_simplex,
    surjections,
)

surjective = st.integers(min_value=0, max_value=4).flatmap(
    lambda m: st.integers(min_value=0, max_value=m).flatmap(lambda n: st.sampled_from(list(surjections(m, n))))
)


class TestOperators:
    """単体作用素と Eilenberg–Zilber 正規形"""

    def test_degeneracy_word(self):
        assert degeneracy_word((0, 0, 1, 1)) == (2, 0), "退化の添字は降順に並びます"
        assert eta_from_word((2, 0), 1) == (0, 0, 1, 1), "退化の列から全射が復元されません"

    @settings(deadline=None)
    @given(surjective)
    def test_word_round_trip(self, eta):
        assert eta_from_word(degeneracy_word(eta), eta[-1]) == eta, "全射と退化の列の往復が一致しません"

    def test_compose(self):
        assert compose((0, 2), (0, 0, 1)) == (0, 0, 2), "α∘β は β の値で α を引きます"

    def test_apply_degeneracy_and_face(self):
        delta = standard_simplex(1)
        x = delta.simplex((0, 1))
        y = delta.degeneracy(x, 0)
        assert y == Simplex((0, 1), (0, 0, 1)), "s0 の正規形が一致しません"
        assert delta.face(y, 0) == x and delta.face(y, 1) == x, "d0 s0 = d1 s0 = id です"
        assert delta.face(y, 2) == Simplex((0,), (0, 0)), "d2 s0 は退化した 1-単体です"
        assert delta.simplex_text(y) == "01|s0", "退化した単体の表示が一致しません"
        assert delta.vertices_of(y) == ((0,), (0,), (1,)), "退化した単体の頂点は重複します"

    def test_apply_rejects_non_monotone(self):
        delta = standard_simplex(2)
        with pytest.raises(ValueError):
            delta.apply(delta.simplex((0, 1, 2)), (2, 1))


class TestConstructions:
    """標準単体・ホーン・直積・神経"""

    def test_counts(self):
        assert standard_simplex(2).counts() == (3, 3, 1), "Δ2 の単体の数が一致しません"
        assert horn(2, 1).counts() == (3, 2), "Λ2,1 は2本の辺を持ちます"
        assert boundary(2).counts() == (3, 3), "∂Δ2 は3本の辺を持ちます"
        assert product(standard_simplex(1), standard_simplex(1)).counts() == (4, 5, 2), "Δ1×Δ1 の単体の数が一致しません"

    def test_identities(self):
        for n in range(5):
            assert standard_simplex(n).check_identities() == [], f"Δ{n} で単体的恒等式が成り立ちません"
        square = product(standard_simplex(1), standard_simplex(2))
        assert square.check_identities() == [], "Δ1×Δ2 で単体的恒等式が成り立ちません"

    def test_product_is_nerve_of_product_order(self):
        points = [(a, b) for a in range(2) for b in range(3)]
        grid = nerve_of_poset("[1]×[2]", points, lambda p, q: p[0] <= q[0] and p[1] <= q[1])
        square = product(standard_simplex(1), standard_simplex(2))
        assert find_isomorphism(grid, square) is not None, "N([1]×[2]) ≅ Δ1×Δ2 が成り立ちません"
        assert find_isomorphism(standard_simplex(3), square) is None, "次元の異なる単体的集合は同型ではありません"

    def test_nerve_of_category(self):
        arrow = FiniteCategory.from_poset("[1]", [0, 1], lambda a, b: a <= b)
        assert arrow.check() == [], "[1] の合成表が不正です"
        space = nerve_of_category(arrow, max_dim=3)
        assert space.counts() == (2, 1), "N([1]) は2点と1本の辺です"
        assert find_isomorphism(space, standard_simplex(1)) is not None, "N([1]) ≅ Δ1 が成り立ちません"

    def test_subset_must_be_closed(self):
        delta = standard_simplex(1)
        with pytest.raises(ValueError):
            delta.subset({(0, 1)})

    def test_to_dict_order(self):
        data = standard_simplex(1).to_dict()
        assert list(data) == ["name", "dimension", "stored_dim", "simplices"], "辞書のキーの順序が一致しません"
        assert [s["id"] for s in data["simplices"]["0"]] == ["0", "1"], "0-単体の順序が一致しません"
        assert data["simplices"]["1"] == [{"id": "01", "faces": ["1", "0"]}], "1-単体の面が一致しません"


class TestMaps:
    """単体的写像の列挙"""

    @settings(deadline=None, max_examples=16)
    @given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
    def test_maps_between_simplices(self, n, m):
        source, target = standard_simplex(n), standard_simplex(m)
        maps = list(simplicial_maps(source, target))
        assert len(maps) == comb(n + m + 1, n + 1), f"Δ{n} → Δ{m} の写像は単調写像と同じ数です"
        assert len(maps) == len(list(monotone_maps(n, m))), "単調写像の列挙と一致しません"
        assert all(is_simplicial_map(source, target, f) for f in maps), "列挙された写像が単体的ではありません"

    def test_fixed_values(self):
        source, target = standard_simplex(1), standard_simplex(1)
        fixed = {(0,): target.simplex((1,))}
        maps = list(simplicial_maps(source, target, fixed=fixed))
        assert len(maps) == 1, "0 を 1 に送る Δ1 → Δ1 の写像は定値写像だけです"
