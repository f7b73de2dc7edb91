#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
単体的圏 C[Σ]、関手、ラベリングをテストするモジュール
"""

from itertools import product

import pytest

from src.modules.pastel.errors import BadInclusion, InvalidLabeling, NotComplete, NotMinimalComplete
from src.modules.pastel.nerve_calc import nerve
from src.modules.pastel.pasting import complete, hc, maximal, minimal, restrict_xy
from src.modules.pastel.plane_graph import join
from src.modules.pastel.scat import (
    LOZENGE_SOURCE,
    Labeling,
    atomic_decomposition,
    build_scat,
    compose_functors,
    cube_rep,
    epsilon_map,
    enumerate_functors,
    enumerate_labelings,
    functor_to_labeling,
    godement_square,
    identity_functor,
    inclusion_functor,
    labeling_to_functor,
    lozenge,
    lozenge_extension,
    minimal_complete_scat,
    over_functor,
    over_u,
    v_over_w,
    vertex_partition,
)
from src.modules.pastel.simplicial import compose, monotone_maps


@pytest.fixture(scope="module")
def scats(graphs):
    """カタログの各グラフの C[Π_max]"""
    return {name: build_scat(maximal(g)) for name, g in graphs.items()}


def inclusion(source, target):
    return {key: target.simplex(key) for key in source.keyset}


class TestBuildScat:
    """C[Σ] の構成と圏の公理"""

    def test_axioms(self, scats):
        for name, c in scats.items():
            assert c.check_associativity() == [], f"{name}: 結合律が成り立ちません"
            assert c.check_unitality() == [], f"{name}: 単位律が成り立ちません"
            assert c.check_simplicial() == [], f"{name}: 合成が単体的ではありません"

    def test_homs_of_j(self, scats):
        c = scats["J"]
        assert set(c.pairs()) == {("0", "0"), ("1", "1"), ("2", "2"), ("0", "1"), ("1", "2"), ("0", "2")}, "J の空でない写像空間が一致しません"
        assert c.hom("0", "2").counts() == (4, 5, 2), "C[J](0,2) = N(J) です"
        assert c.hom("2", "0").dimension < 0, "逆向きの写像空間は空です"

    def test_requires_complete(self, graphs):
        with pytest.raises(NotComplete):
            build_scat(minimal(graphs["H"]))

    def test_compose_rejects_mixed_dimensions(self, scats):
        c = scats["J"]
        a = c.hom("0", "1").simplex(next(iter(c.hom("0", "1").nondegenerate(0))))
        b = c.hom("1", "2").simplex(next(iter(c.hom("1", "2").nondegenerate(1))))
        with pytest.raises(ValueError):
            c.compose("0", "1", "2", a, b)


class TestFunctors:
    """関手の検査と合成"""

    def test_identity_and_inclusion(self, graphs, scats):
        g = graphs["H"]
        small = minimal_complete_scat(g)
        big = scats["H"]
        include = inclusion_functor(small, big)
        assert include.check() == [], "包含 C[Σ_minᶜ] → C[Π_max] は関手です"
        assert compose_functors(include, identity_functor(big)) == include, "恒等関手との合成は元の関手です"
        with pytest.raises(BadInclusion):
            inclusion_functor(big, small)

    def test_functors_from_b1_into_b2(self, graphs, scats):
        domain = minimal_complete_scat(graphs["B1"])
        functors = list(enumerate_functors(domain, scats["B2"]))
        assert len(functors) == 8, "C[B1] → C[B2] の関手は 1 + 1 + 6 個です"
        assert all(u.check() == [] for u in functors), "列挙された関手が関手の条件を満たしません"


class TestLabelings:
    """ラベリングと関手の対応"""

    @pytest.mark.parametrize("name,target", [("B1", "B2"), ("B2", "B2"), ("B1", "J"), ("J", "J")])
    def test_labelings_correspond_to_functors(self, graphs, scats, name, target):
        g = graphs[name]
        a = scats[target]
        domain = minimal_complete_scat(g)
        labelings = list(enumerate_labelings(g, a))
        functors = list(enumerate_functors(domain, a))
        assert len(labelings) == len(functors), f"{name} → C[{target}]: ラベリングと関手の数が一致しません"
        for labeling in labelings:
            u = labeling_to_functor(labeling, a, domain=domain)
            assert u.check() == [], f"{name}: ラベリングから作った写像が関手ではありません"
            assert functor_to_labeling(u) == labeling, f"{name}: ラベリングが復元されません"
            assert u in functors, f"{name}: 作った関手が列挙に含まれません"

    def test_counts_into_three_objects(self, graphs, scats):
        b1 = graphs["B1"]
        domains = {
            "B2": graphs["B2"],
            "B1⋈B1": join(b1, b1.renamed({"0": "1", "1": "2"}, {"e0": "d0", "e1": "d1"})),
        }
        target = scats["J"]
        assert len(target.objects) == 3, "C[J] の対象は3つです"
        for name, g in domains.items():
            labelings = list(enumerate_labelings(g, target))
            functors = list(enumerate_functors(minimal_complete_scat(g), target))
            assert labelings and len(labelings) == len(functors), f"{name} → C[J]: ラベリングと関手の数が一致しません"

    def test_labeling_count_b1_into_b2(self, graphs, scats):
        assert len(list(enumerate_labelings(graphs["B1"], scats["B2"]))) == 8, "B1 のラベリングは 1 + 1 + 6 個です"

    def test_invalid_labeling(self, graphs, scats):
        g, a = graphs["B1"], scats["B2"]
        valid = next(l for l in enumerate_labelings(g, a) if l.edges["e0"] != l.edges["e1"])
        swapped = Labeling(g, valid.objects, {"e0": valid.edges["e1"], "e1": valid.edges["e0"]}, valid.faces)
        assert swapped.problems(a), "辺を入れ替えると面のラベルの境界が合いません"
        with pytest.raises(InvalidLabeling):
            labeling_to_functor(swapped, a)


class TestCubeRepresentation:
    """原子分解、立方体表現、Godement の正方形"""

    def test_cube_rep_of_j(self, graphs):
        c = minimal_complete_scat(graphs["J"])
        space = c.hom("0", "2")
        for key in space.nondegenerate(2):
            sigma = space.simplex(key)
            rep = cube_rep(c, "0", "2", sigma)
            assert rep.epsilon == (1, 1), "J の 2-単体は2つの面の成分を持ちます"
            assert rep.vertex(0) == (0, 0) and rep.vertex(2) == (1, 1), "σ̂ は立方体の対角を結びます"
            assert len(atomic_decomposition(c, "0", "2", sigma)) == 2, "cut vertex 1 で2つに分かれます"

    def test_requires_minimal_complete(self, scats):
        c = scats["H"]
        space = c.hom("0", "2")
        with pytest.raises(NotMinimalComplete):
            cube_rep(c, "0", "2", space.simplex(next(iter(space.nondegenerate(0)))))

    def test_epsilon_is_functorial(self, graphs):
        c = minimal_complete_scat(graphs["J"])
        space = c.hom("0", "2")
        for key in space.nondegenerate(2):
            sigma = space.simplex(key)
            for k in range(3):
                for alpha in monotone_maps(k, 2):
                    for beta in monotone_maps(k, k):
                        moved = space.apply(sigma, alpha)
                        whole = epsilon_map(c, "0", "2", sigma, compose(alpha, beta))
                        parts = epsilon_map(c, "0", "2", sigma, alpha).after(epsilon_map(c, "0", "2", moved, beta))
                        width = len(cube_rep(c, "0", "2", space.apply(moved, beta)).factors)
                        for point in product((0, 1), repeat=width):
                            assert whole.evaluate(point) == parts.evaluate(point), f"ε({alpha}∘{beta}) が ε({alpha})∘ε({beta}) と一致しません"

    @pytest.mark.parametrize("name", ["B2", "J", "H"])
    def test_godement_square(self, graphs, name):
        g = graphs[name]
        c = minimal_complete_scat(g)
        for (x, y) in c.pairs():
            if x == y:
                continue
            space = c.hom(x, y)
            for n in range(min(space.dimension, 2) + 1):
                for key in space.nondegenerate(n):
                    sigma = space.simplex(key)
                    for k in range(3):
                        for alpha in monotone_maps(k, n):
                            assert godement_square(c, x, y, sigma, alpha), f"{name}: {key} と {alpha} で正方形が可換ではありません"


class TestLozengeAndOver:
    """◊ 構成と C[Σ]_{/u}"""

    def test_vertex_partition(self, graphs):
        v0, v1, v2 = vertex_partition(graphs["H"], "1", "2")
        assert (v0, v1, v2) == (frozenset({"0"}), frozenset({"1", "2"}), frozenset()), "H の頂点の分割が一致しません"

    def test_lozenge_extension(self, graphs, scats):
        g = graphs["H"]
        inner = build_scat(restrict_xy(maximal(g), "1", "2"))
        lifted = lozenge_extension(identity_functor(inner), scats["H"], vertex_partition(g, "1", "2"))
        assert lifted.objects["0"] == LOZENGE_SOURCE, "V₀ の頂点は ◊s に送られます"
        assert lifted.check() == [], "拡張 û は関手です"
        assert lozenge(inner).check_associativity() == [], "A◊ は結合律を満たします"

    def test_over_u(self, graphs):
        g = graphs["H"]
        d = complete(minimal(g))
        space = nerve(g)
        c = over_u(d, inclusion(build_scat(d).hom("0", "2"), space), space)
        assert c.check_associativity() == [], "C[Σ]_{/u} は結合律を満たします"
        assert over_functor(c).check() == [], "C[Σ] → C[Σ]_{/u} は関手です"

    def test_v_over_w(self, graphs):
        g = graphs["H"]
        sigma, pi = complete(minimal(g)), maximal(g)
        space = nerve(g)
        w = inclusion(build_scat(hc(sigma, pi)).hom("0", "2"), space)
        v = inclusion(build_scat(pi).hom("0", "2"), space)
        assert v_over_w(sigma, pi, v, w, space).check() == [], "v/w は関手です"
        with pytest.raises(NotComplete):
            v_over_w(sigma, minimal(g), v, w, space)
