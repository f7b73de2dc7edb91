#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
2-圏への貼り合わせ、延長、持ち上げの変換をテストするモジュール
"""

import pytest

from src.modules.pastel import catalog
from src.modules.pastel.compositor import (
    CategoryNerveOracle,
    ExhaustiveFillerOracle,
    FillerOracle,
    FreeTwoCategory,
    HcSquare,
    TabulatedTwoCategory,
    canonical_labeling,
    enumerate_2cat_labelings,
    exhaustive_composite_oracle,
    find_extension,
    lift_order,
    nerve_scat,
    paste_2cat,
    recursive_lift,
    solve_hc_square,
    terminal_scat,
    to_terminal,
    transform_hc_square,
)
from src.modules.pastel.errors import Incompatible, InvalidLabeling, OracleFailure, TwoCategoryError
from src.modules.pastel.formats import resolve_twocat_labeling
from src.modules.pastel.nerve_calc import nerve
from src.modules.pastel.paths_poset import StPath
from src.modules.pastel.pasting import complete, maximal, minimal
from src.modules.pastel.scat import build_scat, constant, inclusion_functor
from src.modules.pastel.simplicial import standard_simplex


@pytest.fixture(scope="module")
def twocat_t():
    return catalog.load_twocat("T")


def free_example(examples_dir, name):
    """data/examples のグラフとその自由 2-圏"""
    g = catalog.load_graph(str(examples_dir / f"{name}.graph"))
    return g, catalog.load_twocat(str(examples_dir / f"{name}.twocat"), g)


def labeling_of(graphs, name, k):
    spec = catalog.load_labeling(name)
    return resolve_twocat_labeling(spec, graphs[spec.graph], k)


class TestTwoCategories:
    """2-圏の表と自由 2-圏"""

    def test_t_is_valid(self, twocat_t):
        assert twocat_t.problems() == [], "T は 2-圏の公理を満たします"
        assert twocat_t.vertical("n", "n") == "1_k", "n は自己逆です"
        assert twocat_t.horizontal("n", "m") == "1_kl", "n * m = 1_kl です"

    def test_missing_vertical_table(self):
        with pytest.raises(TwoCategoryError):
            TabulatedTwoCategory("bad", ["P", "Q"], {"k": ("P", "Q")}, {"n": ("k", "k")})

    def test_ill_typed_two_cell(self):
        with pytest.raises(TwoCategoryError):
            TabulatedTwoCategory("bad", ["P", "Q"], {"k": ("P", "Q")}, {"n": ("k", "1_P")})

    def test_smallest_nontrivial(self):
        k = TabulatedTwoCategory("C2", ["P", "Q"], {"k": ("P", "Q")}, {"n": ("k", "k")}, vertical={("n", "n"): "1_k"})
        assert k.two_cells("k", "k") == ["1_k", "n"], "k ⇒ k の 2-セルは 1_k と n です"
        assert k.whisker("1_P", "n", "1_Q") == "n", "恒等 1-セルでの whisker は元の 2-セルです"

    def test_free_two_category(self, graphs):
        k = FreeTwoCategory(graphs["B2"], {"e0/e1": "α", "e1/e2": "β"})
        g = graphs["B2"]
        cell = (StPath.of(g, ("e0",)), StPath.of(g, ("e2",)))
        assert k.word(cell) == "(β)∘(α)", "自由 2-圏の正規形が一致しません"
        assert k.label(cell) == "e0⇒e2", "2-セルの表示が一致しません"


class TestPasting:
    """2-圏での貼り合わせ"""

    def test_o_word(self, examples_dir):
        g, k = free_example(examples_dir, "O")
        result = paste_2cat(canonical_labeling(k), k)
        assert k.word(result) == "(wv·ψ)∘(w·φ·a)∘(ξ·ba)", "O の合成の正規形が一致しません"

    def test_interchange(self, examples_dir):
        g, k = free_example(examples_dir, "interchange")
        labeling = canonical_labeling(k)
        assert len(exhaustive_composite_oracle(labeling, k)) == 1, "2本の極大鎖で合成が一致します"
        assert k.word(paste_2cat(labeling, k)) == "(g·φ)∘(ψ·u)", "交換則の例の正規形が一致しません"

    def test_b2_into_t(self, graphs, twocat_t):
        assert paste_2cat(labeling_of(graphs, "B2-T", twocat_t), twocat_t) == "1_k", "n;n = 1_k です"

    def test_j_into_t(self, graphs, twocat_t):
        assert paste_2cat(labeling_of(graphs, "J-T", twocat_t), twocat_t) == "1_kl", "nm;nm = 1_kl です"

    @pytest.mark.parametrize("name", ["B2", "J"])
    def test_every_labeling_has_one_composite(self, graphs, twocat_t, name):
        labelings = list(enumerate_2cat_labelings(graphs[name], twocat_t))
        assert labelings, f"{name} から T へのラベリングがありません"
        for labeling in labelings:
            assert len(exhaustive_composite_oracle(labeling, twocat_t)) == 1, f"{name}: 合成が極大鎖に依存します"

    def test_invalid_labeling(self, graphs, twocat_t):
        labeling = labeling_of(graphs, "B2-T", twocat_t)
        labeling.faces["e0/e1"] = "m"
        with pytest.raises(InvalidLabeling):
            paste_2cat(labeling, twocat_t)


class TestExtension:
    """合成空間の 0-単体"""

    @pytest.mark.parametrize("name", ["B2-T", "J-T"])
    def test_extension_recovers_composite(self, graphs, twocat_t, name):
        target = nerve_scat(twocat_t, max_dim=3)
        labeling = labeling_of(graphs, name, twocat_t)
        ext = find_extension(labeling.to_scat_labeling(target), target)
        assert ext.functor.check() == [], f"{name}: 延長が関手ではありません"
        expected = target.cell_simplex(paste_2cat(labeling, twocat_t))
        assert ext.composite() == expected, f"{name}: 延長の (dom, cod) の値が貼り合わせと一致しません"

    def test_oracles_agree(self, graphs, twocat_t):
        target = nerve_scat(twocat_t, max_dim=3)
        labeling = labeling_of(graphs, "B2-T", twocat_t).to_scat_labeling(target)
        by_spine = find_extension(labeling, target, oracle=CategoryNerveOracle())
        by_search = find_extension(labeling, target, oracle=ExhaustiveFillerOracle())
        assert by_spine.functor == by_search.functor, "オラクルによって延長が変わります"

    def test_tie_break_does_not_matter(self, graphs, twocat_t):
        target = nerve_scat(twocat_t, max_dim=3)
        labeling = labeling_of(graphs, "J-T", twocat_t).to_scat_labeling(target)
        forward = find_extension(labeling, target)
        backward = find_extension(labeling, target, tie_break=lambda pair: tuple(reversed(pair)))
        assert forward.functor == backward.functor, "処理順によって延長が変わります"

    def test_table_rows(self, graphs, twocat_t):
        target = nerve_scat(twocat_t, max_dim=3)
        ext = find_extension(labeling_of(graphs, "B2-T", twocat_t).to_scat_labeling(target), target)
        rows = ext.table()
        assert all(len(row) == 4 for row in rows), "表の行は (x, y, 単体, 値) です"
        assert len([r for r in rows if (r[0], r[1]) == ("0", "1")]) == 7, "C[Π_max(B2)](0,1) = Δ2 の非退化単体は7個です"

    def test_category_oracle_rejects_outer_horn(self, twocat_t):
        target = nerve_scat(twocat_t, max_dim=3)
        with pytest.raises(OracleFailure):
            CategoryNerveOracle().fill(target, "P", "Q", 2, 0, {})

    def test_lift_order(self, graphs):
        order = lift_order(graphs["H"])
        assert order[-1] == ("0", "2"), "G_{s,t} は最後に処理されます"
        assert set(order) == {("0", "1"), ("1", "2"), ("0", "2")}, "パスのある組がすべて並びます"

    def test_recursive_lift_of_inclusion(self, graphs):
        g = graphs["B2"]
        small, big = build_scat(complete(minimal(g))), build_scat(maximal(g))
        u = inclusion_functor(small, big)
        ell = recursive_lift(u, to_terminal(big), to_terminal(big), ExhaustiveFillerOracle())
        assert ell == inclusion_functor(big, big), "写像空間が半順序の神経なので持ち上げは恒等関手です"

    def test_recursive_lift_needs_inclusion(self, graphs):
        g = graphs["H"]
        big, small = build_scat(maximal(g)), build_scat(complete(minimal(g)))
        with pytest.raises(Incompatible):
            recursive_lift(to_terminal(big), to_terminal(big), to_terminal(small), ExhaustiveFillerOracle())

    def test_recursive_lift_rejects_bad_filler(self, graphs):
        class FirstVertexOracle(FillerOracle):
            """面を見ずに、最初の 0-単体を退化させた単体を返します"""

            def fill(self, target, x, y, n, horn, faces, accept=None):
                space = target.hom(x, y)
                return constant(sorted(space.nondegenerate(0), key=space.label)[0], n)

        g = graphs["B2"]
        small, big = build_scat(complete(minimal(g))), build_scat(maximal(g))
        with pytest.raises(OracleFailure):
            recursive_lift(inclusion_functor(small, big), to_terminal(big), to_terminal(big), FirstVertexOracle())


class TestHcSquare:
    """hc の持ち上げ問題の変換と解の移送"""

    @pytest.fixture
    def square(self, graphs):
        g = graphs["B2"]
        space = nerve(g)
        base = standard_simplex(0)
        (point,) = base.nondegenerate(0)
        sigma, pi = minimal(g), maximal(g)
        u = {key: space.simplex(key) for key in build_scat(sigma).hom("0", "1").keyset}
        p = {key: constant(point, space.dim_of(key)) for key in space.keyset}
        v = {key: constant(point, space.dim_of(key)) for key in build_scat(pi).hom("0", "1").keyset}
        return HcSquare(sigma, pi, space, base, u, p, v)

    def test_solve_b2(self, square):
        solution = solve_hc_square(square)
        expected = {key: square.space.simplex(key) for key in square.space.keyset}
        assert solution == expected, "Λ2,1 ⊆ Δ2 の持ち上げは包含です"

    def test_transformed_square_commutes(self, square):
        transformed = transform_hc_square(square)
        assert transformed.top.check() == [] and transformed.bottom.check() == [], "変換した図式の辺は関手です"

    def test_not_simplicial(self, square, graphs):
        g = graphs["B2"]
        edge = (StPath.of(g, ("e0",)), StPath.of(g, ("e1",)))
        square.u[edge] = square.space.simplex((StPath.of(g, ("e1",)), StPath.of(g, ("e2",))))
        with pytest.raises(Incompatible):
            transform_hc_square(square)


class TestTerminal:
    """終対象"""

    def test_to_terminal(self, graphs):
        c = build_scat(maximal(graphs["F"]))
        functor = to_terminal(c)
        assert functor.check() == [], "終対象への写像は関手です"
        assert functor.target.objects == terminal_scat().objects, "終対象の対象は1つです"
