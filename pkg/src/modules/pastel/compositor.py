#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
持ち上げの再帰的構成と 2-圏での貼り合わせを行うモジュール

recursive_lift は頂点の組 (x, z) を G_{x,z} の包含順に処理し、
N(Σ_{x,z} hc Π_{x,z}) 上では既知の値と合成で、残りは anodyne 証明書の
段ごとにフィラーオラクルへ問い合わせて ℓ_{x,z} を決めます。
2-圏のラベリングについては、極大鎖に沿って面を1つずつ貼り合わせた
合成 2-セルを求め、すべての極大鎖で結果が一致することを確かめます。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from typing import Callable, Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from src.utils.environment import EnvironmentUtils as env
from src.utils.logging_config import get_logger
from src.modules.pastel.anodyne import CertificateStep, build_certificate, certificate_between
from src.modules.pastel.errors import HypothesisViolated, Incompatible, InvalidLabeling, OracleFailure, TwoCategoryError
from src.modules.pastel.nerve_calc import ChainSimplex
from src.modules.pastel.paths_poset import PathPoset, StPath, build_poset, find_subpath, poset_of
from src.modules.pastel.pasting import PastingDiagram, hc, maximal, nerve_pd, restrict_xy
from src.modules.pastel.plane_graph import Face, PlaneGraph, subgraph_xy
from src.modules.pastel.scat import (
    DiagramSCat,
    Labeling,
    SCat,
    SFunctor,
    build_scat,
    compose_functors,
    constant,
    inclusion_functor,
    labeling_to_functor,
    over_functor,
    over_map,
    over_u,
    v_over_w,
)
from src.modules.pastel.simplicial import (
    FiniteCategory,
    FiniteSSet,
    Simplex,
    category_simplex,
    is_simplicial_map,
    map_simplex,
    nerve_of_category,
    standard_simplex,
)

logger = get_logger(__name__)

TERMINAL_OBJECT = "*"
Accept = Optional[Callable[[Simplex], bool]]


# --- 終対象 ---

def terminal_scat() -> SCat:
    point = standard_simplex(0)
    (key,) = point.nondegenerate(0)
    return SCat(
        "1",
        [TERMINAL_OBJECT],
        {(TERMINAL_OBJECT, TERMINAL_OBJECT): point},
        {TERMINAL_OBJECT: key},
        lambda x, y, z, sigma, tau: constant(key, sigma.dim),
    )


def to_terminal(c: SCat, terminal: Optional[SCat] = None) -> SFunctor:
    """c から終対象への一意な関手"""
    terminal = terminal or terminal_scat()
    key = terminal.identities[TERMINAL_OBJECT]
    homs = {}
    for pair in c.pairs():
        space = c.hom(*pair)
        homs[pair] = {k: constant(key, space.dim_of(k)) for k in space.keyset}
    return SFunctor(c, terminal, {x: TERMINAL_OBJECT for x in c.objects}, homs, name=f"!{c.name}")


# --- 圏の神経の単体 ---

def spine(cat: FiniteCategory, x: Simplex) -> Tuple[List[Hashable], List[Hashable]]:
    """N(cat) の単体の頂点（対象）と、恒等射を含む射の列"""
    start, arrows = x.key[0], x.key[1:]
    stops = [start] + [cat.morphisms[f][1] for f in arrows]
    sequence = []
    for j in range(1, len(x.eta)):
        if x.eta[j] == x.eta[j - 1]:
            sequence.append(cat.identities[stops[x.eta[j]]])
        else:
            sequence.append(arrows[x.eta[j] - 1])
    return [stops[e] for e in x.eta], sequence


# --- 2-圏 ---

class TwoCategory(ABC):
    """有限の strict 2-圏。写像圏は FiniteCategory で与えます"""

    name: str
    objects: Tuple[Hashable, ...]

    @abstractmethod
    def hom_category(self, x: Hashable, y: Hashable) -> Optional[FiniteCategory]:
        ...

    @abstractmethod
    def cell1_ends(self, f: Hashable) -> Tuple[Hashable, Hashable]:
        ...

    @abstractmethod
    def cell2_ends(self, alpha: Hashable) -> Tuple[Hashable, Hashable]:
        ...

    @abstractmethod
    def identity_1(self, x: Hashable) -> Hashable:
        ...

    @abstractmethod
    def compose_1(self, f: Hashable, g: Hashable) -> Hashable:
        """f の後に g"""

    @abstractmethod
    def horizontal(self, alpha: Hashable, beta: Hashable) -> Hashable:
        """α: f ⇒ g (x → y) と β: h ⇒ k (y → z) の水平合成 f;h ⇒ g;k"""

    def label(self, cell: Hashable) -> str:
        return str(cell)

    def word(self, alpha: Hashable) -> str:
        return self.label(alpha)

    def one_cells(self, x: Hashable, y: Hashable) -> List[Hashable]:
        cat = self.hom_category(x, y)
        return list(cat.objects) if cat is not None else []

    def two_cells(self, f: Hashable, g: Hashable) -> List[Hashable]:
        cat = self.hom_category(*self.cell1_ends(f))
        return sorted((a for a, ends in cat.morphisms.items() if ends == (f, g)), key=self.label)

    def identity_2(self, f: Hashable) -> Hashable:
        return self.hom_category(*self.cell1_ends(f)).identities[f]

    def vertical(self, alpha: Hashable, beta: Hashable) -> Hashable:
        """α の後に β"""
        (f, g), (h, _) = self.cell2_ends(alpha), self.cell2_ends(beta)
        if g != h:
            raise TwoCategoryError(f"{self.label(alpha)} と {self.label(beta)} は垂直に合成できません")
        return self.hom_category(*self.cell1_ends(f)).then(alpha, beta)

    def compose_path_1(self, x: Hashable, cells: Sequence[Hashable]) -> Hashable:
        result = self.identity_1(x)
        for f in cells:
            result = self.compose_1(result, f)
        return result

    def whisker(self, left: Hashable, alpha: Hashable, right: Hashable) -> Hashable:
        """left・α・right（left, right は 1-セル）"""
        return self.horizontal(self.horizontal(self.identity_2(left), alpha), self.identity_2(right))


def path_word(edges: Sequence[str]) -> str:
    """パスを右から左への合成として表記します（例: (a, b) → "ba"）"""
    parts = list(reversed(edges))
    return "".join(parts) if all(len(e) == 1 for e in parts) else ".".join(parts)


class FreeTwoCategory(TwoCategory):
    """
    globular グラフ G 上の自由 2-圏

    1-セルはパス、写像圏はパスの半順序集合（thin）で、2-セルは p ≤ q
    となる組 (p, q) です。names で面の表示名を与えられます。
    """

    def __init__(self, graph: PlaneGraph, names: Optional[Mapping[str, str]] = None):
        self.graph = graph
        self.name = f"F2({graph.name})"
        self.objects = tuple(graph.vertices)
        self.names = dict(names or {})
        self._posets: Dict[Tuple[str, str], PathPoset] = {}
        self._homs: Dict[Tuple[str, str], Optional[FiniteCategory]] = {}

    def poset(self, x: str, y: str) -> PathPoset:
        if (x, y) not in self._posets:
            self._posets[(x, y)] = build_poset(self.graph, x, y)
        return self._posets[(x, y)]

    def hom_category(self, x: str, y: str) -> Optional[FiniteCategory]:
        if (x, y) not in self._homs:
            poset = self.poset(x, y)
            cat = FiniteCategory.from_poset(f"{self.name}({x},{y})", poset.elements, poset.le) if poset.elements else None
            self._homs[(x, y)] = cat
        return self._homs[(x, y)]

    def cell1_ends(self, f: StPath) -> Tuple[str, str]:
        return f.source, f.target

    def cell2_ends(self, alpha: Tuple[StPath, StPath]) -> Tuple[StPath, StPath]:
        return alpha

    def identity_1(self, x: str) -> StPath:
        return StPath.empty(x)

    def compose_1(self, f: StPath, g: StPath) -> StPath:
        return f.then(g)

    def horizontal(self, alpha, beta):
        return alpha[0].then(beta[0]), alpha[1].then(beta[1])

    def label(self, cell) -> str:
        if isinstance(cell, StPath):
            return path_word(cell.edges) or f"1_{cell.source}"
        p, q = cell
        return f"{self.label(p)}⇒{self.label(q)}"

    def face_name(self, face: Face) -> str:
        return self.names.get(face.id, face.id)

    def steps(self, alpha: Tuple[StPath, StPath]) -> List[Tuple[Tuple[str, ...], Face, Tuple[str, ...]]]:
        """
        p から q へ、各段で結果が辞書式最小になる面を選んで置き換えていきます。

        Returns:
            List: (左側の辺列, 面, 右側の辺列) の列
        """
        p, q = alpha
        poset = self.poset(p.source, p.target)
        current, found = p, []
        while current != q:
            options = []
            for face in self.graph.interior_faces:
                k = find_subpath(current.edges, face.dom)
                if k < 0:
                    continue
                edges = current.edges[:k] + face.cod + current.edges[k + len(face.dom):]
                candidate = StPath.of(self.graph, edges)
                if candidate in poset.index and poset.le(candidate, q):
                    options.append((candidate, k, face))
            if not options:
                raise TwoCategoryError(f"{self.label(p)} から {self.label(q)} へ面を置き換えられません")
            candidate, k, face = min(options, key=lambda option: option[0].edges)
            found.append((current.edges[:k], face, current.edges[k + len(face.dom):]))
            current = candidate
        return found

    def word(self, alpha) -> str:
        """whisker した生成元の垂直合成として正規形を返します"""
        p, q = alpha
        if p == q:
            return f"1_{self.label(p)}"
        parts = []
        for left, face, right in self.steps(alpha):
            pieces = [path_word(right), self.face_name(face), path_word(left)]
            parts.append("·".join(piece for piece in pieces if piece))
        if len(parts) == 1:
            return parts[0]
        return "∘".join(f"({part})" for part in reversed(parts))


class TabulatedTwoCategory(TwoCategory):
    """
    表で与えられる有限 2-圏

    恒等 1-セル 1_x と恒等 2-セル 1_f は自動的に追加します。恒等セルとの
    合成は表に書く必要がありません。生成時に結合律・単位律・交換律を
    検査します。

    Args:
        name (str): 名前
        objects (Sequence[str]): 対象
        cells1 (Mapping): 1-セル → (始対象, 終対象)
        cells2 (Mapping): 2-セル → (始 1-セル, 終 1-セル)
        compose1 (Mapping): (f, g) → f;g
        vertical (Mapping): (α, β) → α の後に β
        horizontal (Mapping): (α, β) → α * β

    Raises:
        TwoCategoryError: 表が不完全、または公理が成り立たない場合
    """

    def __init__(
        self,
        name: str,
        objects: Sequence[str],
        cells1: Mapping[str, Tuple[str, str]],
        cells2: Mapping[str, Tuple[str, str]],
        compose1: Optional[Mapping[Tuple[str, str], str]] = None,
        vertical: Optional[Mapping[Tuple[str, str], str]] = None,
        horizontal: Optional[Mapping[Tuple[str, str], str]] = None,
    ):
        self.name = name
        self.objects = tuple(objects)
        self.cells1: Dict[str, Tuple[str, str]] = {self.identity_1(x): (x, x) for x in self.objects}
        self.cells1.update(cells1)
        self.cells2: Dict[str, Tuple[str, str]] = {self.identity_2(f): (f, f) for f in self.cells1}
        self.cells2.update(cells2)
        self.compose1_table = dict(compose1 or {})
        self.vertical_table = dict(vertical or {})
        self.horizontal_table = dict(horizontal or {})
        self._homs: Dict[Tuple[str, str], Optional[FiniteCategory]] = {}
        self.validate()

    def identity_1(self, x: str) -> str:
        return f"1_{x}"

    def identity_2(self, f: str) -> str:
        return f"1_{f}"

    def is_unit_1(self, f: str) -> bool:
        return f == self.identity_1(self.cells1[f][0])

    def is_unit_2(self, alpha: str) -> bool:
        f, g = self.cells2[alpha]
        return f == g and alpha == self.identity_2(f)

    def cell1_ends(self, f: str) -> Tuple[str, str]:
        if f not in self.cells1:
            raise TwoCategoryError(f"未定義の 1-セル {f}")
        return self.cells1[f]

    def cell2_ends(self, alpha: str) -> Tuple[str, str]:
        if alpha not in self.cells2:
            raise TwoCategoryError(f"未定義の 2-セル {alpha}")
        return self.cells2[alpha]

    def hom_category(self, x: str, y: str) -> Optional[FiniteCategory]:
        if (x, y) not in self._homs:
            cells = sorted(f for f, ends in self.cells1.items() if ends == (x, y))
            if not cells:
                self._homs[(x, y)] = None
            else:
                morphisms = {a: ends for a, ends in self.cells2.items() if ends[0] in cells}
                table = {pair: c for pair, c in self.vertical_table.items() if pair[0] in morphisms}
                identities = {f: self.identity_2(f) for f in cells}
                self._homs[(x, y)] = FiniteCategory(f"{self.name}({x},{y})", tuple(cells), morphisms, identities, table)
        return self._homs[(x, y)]

    def compose_1(self, f: str, g: str) -> str:
        if self.cell1_ends(f)[1] != self.cell1_ends(g)[0]:
            raise TwoCategoryError(f"1-セル {f} と {g} は合成できません")
        if self.is_unit_1(f):
            return g
        if self.is_unit_1(g):
            return f
        if (f, g) not in self.compose1_table:
            raise TwoCategoryError(f"1-セルの合成 {f};{g} が表にありません")
        return self.compose1_table[(f, g)]

    def vertical(self, alpha: str, beta: str) -> str:
        (f, g), (h, _) = self.cell2_ends(alpha), self.cell2_ends(beta)
        if g != h:
            raise TwoCategoryError(f"{alpha} と {beta} は垂直に合成できません")
        if self.is_unit_2(alpha):
            return beta
        if self.is_unit_2(beta):
            return alpha
        if (alpha, beta) not in self.vertical_table:
            raise TwoCategoryError(f"垂直合成 {alpha};{beta} が表にありません")
        return self.vertical_table[(alpha, beta)]

    def horizontal(self, alpha: str, beta: str) -> str:
        (f, g), (h, k) = self.cell2_ends(alpha), self.cell2_ends(beta)
        if self.cell1_ends(f)[1] != self.cell1_ends(h)[0]:
            raise TwoCategoryError(f"{alpha} と {beta} は水平に合成できません")
        if self.is_unit_2(alpha) and self.is_unit_2(beta):
            return self.identity_2(self.compose_1(f, h))
        if self.is_unit_2(alpha) and self.is_unit_1(f):
            return beta
        if self.is_unit_2(beta) and self.is_unit_1(h):
            return alpha
        if (alpha, beta) not in self.horizontal_table:
            raise TwoCategoryError(f"水平合成 {alpha}*{beta} が表にありません")
        return self.horizontal_table[(alpha, beta)]

    def _composable_2(self) -> Iterator[Tuple[str, str]]:
        for alpha, (f, _) in sorted(self.cells2.items()):
            for beta, (h, _) in sorted(self.cells2.items()):
                if self.cells1[f][1] == self.cells1[h][0]:
                    yield alpha, beta

    def problems(self) -> List[str]:
        """表の整合性と 2-圏の公理を検査します"""
        found = []
        for f, (x, y) in self.cells1.items():
            if x not in self.objects or y not in self.objects:
                found.append(f"1-セル {f} の端点 {x} -> {y} が対象にありません")
        for alpha, (f, g) in self.cells2.items():
            if f not in self.cells1 or g not in self.cells1 or self.cells1[f] != self.cells1[g]:
                found.append(f"2-セル {alpha}: {f} ⇒ {g} の型が不正です")
        if found:
            return found

        def attempt(check: Callable[[], Optional[str]]) -> None:
            try:
                problem = check()
            except TwoCategoryError as e:
                problem = str(e)
            if problem:
                found.append(problem)

        cells1 = sorted(self.cells1)
        for f in cells1:
            for g in cells1:
                if self.cells1[f][1] != self.cells1[g][0]:
                    continue
                attempt(lambda: None if self.cell1_ends(self.compose_1(f, g)) == (self.cells1[f][0], self.cells1[g][1])
                        else f"{f};{g} の型が一致しません")
                for h in cells1:
                    if self.cells1[g][1] == self.cells1[h][0]:
                        attempt(lambda: None if self.compose_1(self.compose_1(f, g), h) == self.compose_1(f, self.compose_1(g, h))
                                else f"({f};{g});{h} != {f};({g};{h})")

        for pair in sorted(set(self.cells1.values())):
            cat = self.hom_category(*pair)
            before = len(found)
            for alpha, (_, g) in cat.morphisms.items():
                for beta, (h, _) in cat.morphisms.items():
                    if g == h:
                        attempt(lambda: None if self.cell2_ends(self.vertical(alpha, beta)) == (cat.morphisms[alpha][0], cat.morphisms[beta][1])
                                else f"{alpha};{beta} の型が一致しません")
            if len(found) == before:
                found.extend(cat.check())

        composable = list(self._composable_2())
        for alpha, beta in composable:
            def typed(alpha=alpha, beta=beta):
                (f, g), (h, k) = self.cells2[alpha], self.cells2[beta]
                if self.cell2_ends(self.horizontal(alpha, beta)) != (self.compose_1(f, h), self.compose_1(g, k)):
                    return f"{alpha}*{beta} の型が一致しません"
                return None
            attempt(typed)
        if found:
            return found

        for alpha, beta in composable:
            for gamma, (h, _) in sorted(self.cells2.items()):
                if self.cells1[self.cells2[beta][0]][1] == self.cells1[h][0]:
                    attempt(lambda: None if self.horizontal(self.horizontal(alpha, beta), gamma) == self.horizontal(alpha, self.horizontal(beta, gamma))
                            else f"({alpha}*{beta})*{gamma} != {alpha}*({beta}*{gamma})")

        for alpha, beta in composable:
            for alpha2, beta2 in composable:
                if self.cells2[alpha][1] != self.cells2[alpha2][0] or self.cells2[beta][1] != self.cells2[beta2][0]:
                    continue
                attempt(lambda: None if self.horizontal(self.vertical(alpha, alpha2), self.vertical(beta, beta2))
                        == self.vertical(self.horizontal(alpha, beta), self.horizontal(alpha2, beta2))
                        else f"交換律が成り立ちません: {alpha}, {alpha2}, {beta}, {beta2}")
        return found

    def validate(self) -> None:
        found = self.problems()
        if found:
            raise TwoCategoryError(f"{self.name}: {found[0]}" + (f" ほか {len(found) - 1} 件" if len(found) > 1 else ""), subject=found)


# --- 写像空間を圏の神経とする単体的圏 ---

class NerveSCat(SCat):
    """
    2-圏 K の写像圏の神経を写像空間とする単体的圏

    写像空間は max_dim 次元で切り詰めます。
    """

    def __init__(self, twocat: TwoCategory, max_dim: int):
        self.twocat = twocat
        self.max_dim = max_dim
        self.categories: Dict[Tuple[Hashable, Hashable], FiniteCategory] = {}
        homs = {}
        for x in twocat.objects:
            for y in twocat.objects:
                cat = twocat.hom_category(x, y)
                if cat is not None:
                    self.categories[(x, y)] = cat
                    homs[(x, y)] = nerve_of_category(cat, max_dim, label=twocat.label)
        identities = {x: (twocat.identity_1(x),) for x in twocat.objects}
        super().__init__(f"N{twocat.name}", twocat.objects, homs, identities, self._compose)

    def _compose(self, x, y, z, sigma: Simplex, tau: Simplex) -> Simplex:
        first, arrows1 = spine(self.categories[(x, y)], sigma)
        second, arrows2 = spine(self.categories[(y, z)], tau)
        start = self.twocat.compose_1(first[0], second[0])
        arrows = [self.twocat.horizontal(a, b) for a, b in zip(arrows1, arrows2)]
        return category_simplex(self.categories[(x, z)], start, arrows)

    def cell_simplex(self, alpha: Hashable) -> Simplex:
        """2-セル α を 1-単体として表します（恒等 2-セルは退化した単体）"""
        f, _ = self.twocat.cell2_ends(alpha)
        cat = self.categories[self.twocat.cell1_ends(f)]
        return category_simplex(cat, f, [alpha])

    def arrow_of(self, x: Hashable, y: Hashable, simplex: Simplex) -> Hashable:
        """1-単体が表す 2-セル"""
        _, arrows = spine(self.categories[(x, y)], simplex)
        (arrow,) = arrows
        return arrow


def nerve_scat(twocat: TwoCategory, max_dim: Optional[int] = None) -> NerveSCat:
    max_dim = max_dim if max_dim is not None else env.get_twocat_max_dim()
    return NerveSCat(twocat, max_dim)


# --- フィラーオラクル ---

def _require_depth(space: FiniteSSet, n: int) -> None:
    if space.stored_dim is not None and n > space.stored_dim:
        raise OracleFailure(f"{space.name} は {space.stored_dim} 次元までしか保持していません（{n} 次元が必要）", subject=space.name)


class FillerOracle(ABC):
    """写像空間の内側ホーンの持ち上げ問題に答える手続き"""

    unique = False

    @abstractmethod
    def fill(
        self,
        target: SCat,
        x: Hashable,
        y: Hashable,
        n: int,
        horn: int,
        faces: Mapping[int, Simplex],
        accept: Accept = None,
    ) -> Simplex:
        """
        target(x, y) の n-単体で、j ≠ horn について d_j が faces[j] と一致し、
        accept を満たすものを返します。

        Raises:
            OracleFailure: フィラーが見つからない場合
        """


class ExhaustiveFillerOracle(FillerOracle):
    """写像空間の n-単体を決まった順序で総当たりします"""

    def fill(self, target, x, y, n, horn, faces, accept=None) -> Simplex:
        space = target.hom(x, y)
        _require_depth(space, n)
        for candidate in space.simplices(n):
            if all(space.face(candidate, j) == face for j, face in faces.items()):
                if accept is None or accept(candidate):
                    return candidate
        raise OracleFailure(f"{space.name} に Λ{n},{horn} のフィラーがありません", subject=(x, y, n, horn))


class CategoryNerveOracle(FillerOracle):
    """圏の神経の内側ホーンの一意なフィラーを背骨から構成します"""

    unique = True

    def fill(self, target, x, y, n, horn, faces, accept=None) -> Simplex:
        if not isinstance(target, NerveSCat):
            raise OracleFailure(f"{target.name} の写像空間は圏の神経ではありません", subject=target.name)
        if not 0 < horn < n:
            raise OracleFailure(f"Λ{n},{horn} は内側ホーンではありません", subject=(n, horn))
        space = target.hom(x, y)
        _require_depth(space, n)
        cat = target.categories[(x, y)]
        objects, head = spine(cat, faces[n])
        _, tail = spine(cat, faces[0])
        candidate = category_simplex(cat, objects[0], list(head) + [tail[-1]])
        if any(space.face(candidate, j) != face for j, face in faces.items()):
            raise OracleFailure(f"{space.name}: Λ{n},{horn} の面が合成と整合しません", subject=(x, y, n, horn))
        if accept is not None and not accept(candidate):
            raise OracleFailure(f"{space.name}: Λ{n},{horn} のフィラーが下の図式と一致しません", subject=(x, y, n, horn))
        return candidate


# --- 再帰的な持ち上げ ---

def lift_order(g: PlaneGraph, tie_break: Optional[Callable[[Tuple[str, str]], object]] = None) -> List[Tuple[str, str]]:
    """
    x ≠ z でパスのある組 (x, z) を G_{x,z} の包含順に並べます。

    包含関係で比較できない組は tie_break（省略時は組そのもの）の順です。
    """
    pairs = {}
    for x in g.vertices:
        for z in g.vertices:
            sub = subgraph_xy(g, x, z)
            if sub is not None:
                pairs[(x, z)] = sub.edge_set
    order = nx.DiGraph()
    order.add_nodes_from(pairs)
    for a, edges_a in pairs.items():
        for b, edges_b in pairs.items():
            if edges_a < edges_b:
                order.add_edge(a, b)
    return list(nx.lexicographical_topological_sort(order, key=tie_break or (lambda pair: pair)))


def _check_square(u: SFunctor, p: SFunctor, v: SFunctor) -> None:
    """
    Raises:
        Incompatible: p∘u = v∘(包含) が成り立たない場合
    """
    small = u.source
    for x in small.objects:
        if p.objects[u.objects[x]] != v.objects[x]:
            raise Incompatible(f"対象 {x} で p∘u と v が一致しません", subject=x)
    for (x, y) in small.pairs():
        space = small.hom(x, y)
        for key in space.keyset:
            simplex = space.simplex(key)
            if p.apply(u.objects[x], u.objects[y], u.apply(x, y, simplex)) != v.apply(x, y, simplex):
                raise Incompatible(f"({x},{y}) の {space.label(key)} で p∘u と v が一致しません", subject=(x, y, key))


def _split_chain(key: Tuple[StPath, ...], y: str) -> Optional[Tuple[Simplex, Simplex]]:
    firsts, seconds = [], []
    for path in key:
        if y not in path.vertices:
            return None
        k = path.vertices.index(y)
        firsts.append(StPath(path.edges[:k], path.vertices[:k + 1]))
        seconds.append(StPath(path.edges[k:], path.vertices[k:]))
    return ChainSimplex(tuple(firsts)).to_simplex(), ChainSimplex(tuple(seconds)).to_simplex()


def _certificate_steps(partial: PastingDiagram, pi: PastingDiagram, max_states: Optional[int]) -> List[CertificateStep]:
    try:
        return build_certificate(partial, pi, max_states=max_states).steps
    except HypothesisViolated as e:
        logger.debug(f"{partial.name}: {e}。探索だけで証明書を作ります")
        return certificate_between(nerve_pd(pi), nerve_pd(partial).keyset, max_states=max_states)


def recursive_lift(
    u: SFunctor,
    p: SFunctor,
    v: SFunctor,
    oracle: FillerOracle,
    tie_break: Optional[Callable[[Tuple[str, str]], object]] = None,
    check_dim: int = 1,
    max_states: Optional[int] = None,
) -> SFunctor:
    """
    u: C[Σ] → B, p: B → A, v: C[Π] → A に対し、ℓ∘(包含) = u, p∘ℓ = v
    となる ℓ: C[Π] → B を構成します。

    Args:
        u (SFunctor): C[Σ] からの関手
        p (SFunctor): B → A
        v (SFunctor): C[Π] からの関手
        oracle (FillerOracle): B の写像空間のフィラーを返す手続き
        tie_break (Callable): 包含で比較できない組の順序
        check_dim (int): 関手性を検査する次元
        max_states (Optional[int]): 証明書探索の状態数の上限

    Raises:
        Incompatible: 図式が可換でない場合
        OracleFailure: フィラーが見つからない、または返されたフィラーで ℓ が関手にならない場合
    """
    small, big = u.source, v.source
    if not isinstance(small, DiagramSCat) or not isinstance(big, DiagramSCat):
        raise Incompatible("u と v は pasting diagram の単体的圏からの関手である必要があります")
    sigma, pi = small.diagram, big.diagram
    if sigma.graph.edge_set != pi.graph.edge_set or not sigma.members <= pi.members:
        raise Incompatible(f"{sigma.name} ⊄ {pi.name}")
    _check_square(u, p, v)
    b, g = u.target, pi.graph
    lift: Dict[Tuple[str, str], Dict[Hashable, Simplex]] = {(x, x): dict(u.homs[(x, x)]) for x in g.vertices}

    for (x, z) in lift_order(g, tie_break):
        ux, uz = u.objects[x], u.objects[z]
        ambient, target = big.hom(x, z), b.hom(ux, uz)
        sub_sigma, sub_pi = restrict_xy(sigma, x, z), restrict_xy(pi, x, z)
        partial = hc(sub_sigma, sub_pi)
        inner = [y for y in sorted(sub_pi.graph.vertices) if y not in (x, z)]

        table: Dict[Hashable, Simplex] = {}
        for key in nerve_pd(partial).keyset:
            values = []
            if key in small.hom(x, z):
                values.append(("u", u.homs[(x, z)][key]))
            for y in inner:
                parts = _split_chain(key, y)
                if parts is None or parts[0].key not in big.hom(x, y) or parts[1].key not in big.hom(y, z):
                    continue
                uy = u.objects[y]
                first = map_simplex(b.hom(ux, uy), lift[(x, y)], parts[0])
                second = map_simplex(b.hom(uy, uz), lift[(y, z)], parts[1])
                values.append((y, b.compose(ux, uy, uz, first, second)))
            if not values:
                raise Incompatible(f"({x},{z}): {ambient.label(key)} の値が決まりません", subject=(x, z, key))
            if any(value != values[0][1] for _, value in values):
                raise Incompatible(f"({x},{z}): {ambient.label(key)} で {[where for where, _ in values]} の値が一致しません", subject=(x, z, key))
            table[key] = values[0][1]

        steps = _certificate_steps(partial, sub_pi, max_states)
        for step in steps:
            key, i, n = step.filler, step.horn, step.dim
            faces = ambient.face_table(key)
            known = {j: map_simplex(target, table, face) for j, face in enumerate(faces) if j != i}
            wanted = v.apply(x, z, ambient.simplex(key))
            value = oracle.fill(b, ux, uz, n, i, known, accept=lambda y, x=x, z=z, w=wanted: p.apply(ux, uz, y) == w)
            table[key] = value
            table[faces[i].key] = target.face(value, i)
        if set(table) != ambient.keyset:
            raise OracleFailure(f"({x},{z}): 値の決まらない単体があります", subject=(x, z))
        if not is_simplicial_map(ambient, target, table):
            raise OracleFailure(f"({x},{z}): ℓ が単体的写像ではありません", subject=(x, z))
        logger.debug(f"ℓ({x},{z}): N(Σ hc Π) {len(table) - 2 * len(steps)} 個 + 証明書 {len(steps)} 段")
        lift[(x, z)] = table

    ell = SFunctor(big, b, dict(u.objects), lift, name=f"ℓ[{pi.name}]")
    problems = ell.check(check_dim)
    if problems:
        raise OracleFailure(f"ℓ が関手ではありません: {problems[0]}", subject=problems)
    if compose_functors(ell, p) != v:
        raise OracleFailure("p∘ℓ != v")
    if ell.restricted(small) != u:
        raise Incompatible("ℓ の C[Σ] への制限が u と一致しません")
    return ell


# --- 2-圏のラベリングと貼り合わせ ---

@dataclass
class TwoCatLabeling:
    """
    globular グラフの 2-圏へのラベリング

    Args:
        graph (PlaneGraph): ラベル付けするグラフ
        objects (Dict): 頂点 → 対象
        edges (Dict): 辺 → 1-セル
        faces (Dict): 内部面ID → 2-セル
    """

    graph: PlaneGraph
    objects: Dict[str, Hashable]
    edges: Dict[str, Hashable]
    faces: Dict[str, Hashable] = field(default_factory=dict)

    def path_cell(self, k: TwoCategory, path: Sequence[str], start: str) -> Hashable:
        return k.compose_path_1(self.objects[start], [self.edges[e] for e in path])

    def problems(self, k: TwoCategory) -> List[str]:
        g = self.graph
        missing = set(g.vertices) - set(self.objects)
        if missing:
            return [f"頂点 {sorted(missing)} に対象がありません"]
        found = []
        for e, (a, b) in sorted(g.edges.items()):
            if self.edges.get(e) not in k.one_cells(self.objects[a], self.objects[b]):
                found.append(f"辺 {e} のラベルが {self.objects[a]} → {self.objects[b]} の 1-セルではありません")
        if found:
            return found
        for face in g.interior_faces:
            start = g.path_source(face.dom)
            source = self.path_cell(k, face.dom, start)
            target = self.path_cell(k, face.cod, start)
            if self.faces.get(face.id) not in k.two_cells(source, target):
                found.append(f"面 {face.id} のラベルが {k.label(source)} ⇒ {k.label(target)} の 2-セルではありません")
        return found

    def validate(self, k: TwoCategory) -> None:
        """
        Raises:
            InvalidLabeling: 条件に反する箇所がある場合
        """
        found = self.problems(k)
        if found:
            raise InvalidLabeling("; ".join(found), subject=found)

    def to_scat_labeling(self, nerve: NerveSCat) -> Labeling:
        """N(K) への単体的圏のラベリング（辺は 0-単体、面は 1-単体）"""
        edges = {e: Simplex((f,), (0,)) for e, f in self.edges.items()}
        faces = {face_id: nerve.cell_simplex(alpha) for face_id, alpha in self.faces.items()}
        return Labeling(self.graph, dict(self.objects), edges, faces)


def canonical_labeling(k: FreeTwoCategory) -> TwoCatLabeling:
    """G を自由 2-圏 F2(G) に自分自身としてラベル付けします"""
    g = k.graph
    edges = {e: StPath.of(g, (e,)) for e in g.edges}
    faces = {face.id: (StPath.of(g, face.dom), StPath.of(g, face.cod)) for face in g.interior_faces}
    return TwoCatLabeling(g, {v: v for v in g.vertices}, edges, faces)


def enumerate_2cat_labelings(g: PlaneGraph, k: TwoCategory) -> Iterator[TwoCatLabeling]:
    """g から k へのラベリングをすべて列挙します"""
    vertices, edge_ids, faces = list(g.vertices), sorted(g.edges), list(g.interior_faces)
    for values in cartesian(k.objects, repeat=len(vertices)):
        objects = dict(zip(vertices, values))
        choices = [k.one_cells(objects[g.edges[e][0]], objects[g.edges[e][1]]) for e in edge_ids]
        for cells in cartesian(*choices):
            partial = TwoCatLabeling(g, objects, dict(zip(edge_ids, cells)))
            face_choices = []
            for face in faces:
                start = g.path_source(face.dom)
                face_choices.append(k.two_cells(partial.path_cell(k, face.dom, start), partial.path_cell(k, face.cod, start)))
            for picked in cartesian(*face_choices):
                yield TwoCatLabeling(g, objects, dict(partial.edges), {face.id: a for face, a in zip(faces, picked)})


def _face_step(g: PlaneGraph, p: StPath, q: StPath) -> Tuple[Tuple[str, ...], Face, Tuple[str, ...]]:
    for face in g.interior_faces:
        k = find_subpath(p.edges, face.dom)
        if k >= 0 and p.edges[:k] + face.cod + p.edges[k + len(face.dom):] == q.edges:
            return p.edges[:k], face, p.edges[k + len(face.dom):]
    raise AssertionError(f"{p} < {q} が1つの面の置き換えになっていません")


def paste_along(labeling: TwoCatLabeling, k: TwoCategory, chain: Sequence[StPath]) -> Hashable:
    """極大鎖に沿って、面を1つずつ whisker して垂直に合成します"""
    g = labeling.graph
    s = g.source
    result = k.identity_2(labeling.path_cell(k, chain[0].edges, s))
    for p, q in zip(chain, chain[1:]):
        left, face, right = _face_step(g, p, q)
        left_cell = labeling.path_cell(k, left, s)
        right_cell = labeling.path_cell(k, right, g.path_target(face.dom))
        result = k.vertical(result, k.whisker(left_cell, labeling.faces[face.id], right_cell))
    return result


def exhaustive_composite_oracle(labeling: TwoCatLabeling, k: TwoCategory) -> Set[Hashable]:
    """すべての極大鎖に沿った合成の集合（1元集合になるはず）"""
    return {paste_along(labeling, k, chain) for chain in poset_of(labeling.graph).maximal_chains()}


def paste_2cat(labeling: TwoCatLabeling, k: TwoCategory) -> Hashable:
    """
    ラベリングの合成 2-セル Λ(dom G) ⇒ Λ(cod G) を辞書式最小の極大鎖に沿って求めます。

    Raises:
        InvalidLabeling: ラベリングの条件が成り立たない場合
    """
    labeling.validate(k)
    first = poset_of(labeling.graph).maximal_chains()[0]
    result = paste_along(labeling, k, first)
    results = exhaustive_composite_oracle(labeling, k)
    assert results == {result}, f"{labeling.graph.name}: 合成が順序に依存します ({len(results)} 通り)"
    logger.debug(f"{labeling.graph.name}: 合成 {k.word(result)}")
    return result


# --- 合成空間の 0-単体 ---

@dataclass
class Extension:
    """u_Λ: C[Σ_minᶜ] → target の C[Π_max] への延長"""

    functor: SFunctor
    base: SFunctor
    labeling: Labeling

    def composite(self) -> Simplex:
        """(dom G ≤ cod G) の像"""
        g = self.labeling.graph
        chain = ChainSimplex((StPath.of(g, g.dom), StPath.of(g, g.cod))).to_simplex()
        return self.functor.apply(g.source, g.target, chain)

    def table(self) -> List[Tuple[str, str, str, str]]:
        """(x, y, 単体, 値) の一覧（組・キーの順）"""
        rows = []
        source, target = self.functor.source, self.functor.target
        for (x, y) in source.pairs():
            space = source.hom(x, y)
            image = target.hom(self.functor.objects[x], self.functor.objects[y])
            for n in range(space.dimension + 1):
                for key in space.nondegenerate(n):
                    rows.append((x, y, space.label(key), image.simplex_text(self.functor.homs[(x, y)][key])))
        return rows


def find_extension(
    labeling: Labeling,
    target: SCat,
    oracle: Optional[FillerOracle] = None,
    tie_break: Optional[Callable[[Tuple[str, str]], object]] = None,
) -> Extension:
    """
    ラベリングから得られる u_Λ を C[Π_max] に延長します（A は終対象）。

    Raises:
        InvalidLabeling: ラベリングの条件が成り立たない場合
        OracleFailure: フィラーが見つからない場合
    """
    if oracle is None:
        oracle = CategoryNerveOracle() if isinstance(target, NerveSCat) else ExhaustiveFillerOracle()
    u = labeling_to_functor(labeling, target)
    big = build_scat(maximal(labeling.graph))
    ell = recursive_lift(u, to_terminal(target), to_terminal(big), oracle, tie_break=tie_break)
    assert ell.restricted(u.source) == u, "延長の制限が u_Λ と一致しません"
    logger.info(f"{labeling.graph.name}: {target.name} への延長を構成しました")
    return Extension(ell, u, labeling)


# --- hc の持ち上げ問題の変換 ---

@dataclass
class HcSquare:
    """
    持ち上げ問題 N(Σ hc Π) → X, N(Π) → Y, p: X → Y

    u, p, v は非退化単体のキー → 値の単体です。
    """

    sigma: PastingDiagram
    pi: PastingDiagram
    space: FiniteSSet
    base: FiniteSSet
    u: Dict[Hashable, Simplex]
    p: Dict[Hashable, Simplex]
    v: Dict[Hashable, Simplex]

    @cached_property
    def partial(self) -> PastingDiagram:
        return hc(self.sigma, self.pi)

    @property
    def pu(self) -> Dict[Hashable, Simplex]:
        return {key: map_simplex(self.base, self.p, value) for key, value in self.u.items()}

    def problems(self) -> List[str]:
        domain = nerve_pd(self.partial)
        found = []
        if not is_simplicial_map(domain, self.space, self.u):
            found.append(f"u: {domain.name} → {self.space.name} が単体的写像ではありません")
        if not is_simplicial_map(self.space, self.base, self.p):
            found.append(f"p: {self.space.name} → {self.base.name} が単体的写像ではありません")
        if not is_simplicial_map(nerve_pd(self.pi), self.base, self.v):
            found.append(f"v: N({self.pi.name}) → {self.base.name} が単体的写像ではありません")
        if found:
            return found
        pu = self.pu
        return [f"{domain.label(key)}: p∘u != v" for key in sorted(domain.keyset, key=domain.label) if pu[key] != self.v[key]]


@dataclass
class TransformedSquare:
    """C[Σ hc Π] → C[Σ hc Π]_{/u}, C[Π] → C[Σ hc Π]_{/pu} の可換図式"""

    square: HcSquare
    top: SFunctor
    left: SFunctor
    right: SFunctor
    bottom: SFunctor


def transform_hc_square(square: HcSquare) -> TransformedSquare:
    """
    単体的集合の持ち上げ問題を単体的圏の持ち上げ問題に変換します。

    Raises:
        Incompatible: 元の図式が可換でない場合
    """
    found = square.problems()
    if found:
        raise Incompatible("; ".join(found[:3]), subject=found)
    partial = square.partial
    c_u = over_u(partial, square.u, square.space)
    c_pu = over_u(partial, square.pu, square.base)
    top = over_functor(c_u)
    left = inclusion_functor(c_u.base, build_scat(square.pi))
    right = over_map(c_u, c_pu, square.p)
    bottom = v_over_w(square.sigma, square.pi, square.v, square.pu, square.base)
    assert compose_functors(top, right) == compose_functors(left, bottom), "変換した図式が可換ではありません"
    return TransformedSquare(square, top, left, right, bottom)


def transport_solution(transformed: TransformedSquare, ell: SFunctor) -> Dict[Hashable, Simplex]:
    """
    変換した図式の持ち上げ ℓ から ℓ_{s,t}: N(Π) → X を取り出します。

    Raises:
        Incompatible: ℓ_{s,t} が元の持ち上げ問題を解かない場合
    """
    square = transformed.square
    g = square.pi.graph
    table = ell.homs[(g.source, g.target)]
    for key, value in table.items():
        if map_simplex(square.base, square.p, value) != square.v[key]:
            raise Incompatible(f"p∘ℓ != v となる単体があります: {key}", subject=key)
    for key, value in square.u.items():
        if table.get(key) != value:
            raise Incompatible(f"ℓ の N(Σ hc Π) への制限が u と一致しません: {key}", subject=key)
    return dict(table)


def solve_hc_square(square: HcSquare, oracle: Optional[FillerOracle] = None) -> Dict[Hashable, Simplex]:
    """変換した図式を recursive_lift で解き、ℓ_{s,t} を返します"""
    transformed = transform_hc_square(square)
    ell = recursive_lift(transformed.top, transformed.right, transformed.bottom, oracle or ExhaustiveFillerOracle())
    return transport_solution(transformed, ell)
