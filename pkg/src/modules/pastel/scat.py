#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
単体的圏 C[Σ] とラベリングを扱うモジュール

complete な pasting diagram Σ から、頂点を対象とし写像空間を
N(Σ_{x,y}) とする単体的圏 C[Σ] を構成します。minimal complete な
Σ については単体の立方体表現 σ̂ を計算し、ラベリングと関手の
対応を両方向に与えます。
"""

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.utils.logging_config import get_logger
from src.modules.pastel.errors import BadInclusion, InvalidLabeling, NotComplete, NotMinimalComplete
from src.modules.pastel.nerve_calc import ChainSimplex, chain_to_marked, join_chains, nerve
from src.modules.pastel.paths_poset import StPath
from src.modules.pastel.pasting import PastingDiagram, complete, hc, maximal, minimal, nerve_pd, restrict_xy
from src.modules.pastel.plane_graph import PlaneGraph, cut_vertices, join_factors, subgraph_xy
from src.modules.pastel.simplicial import (
    FiniteSSet,
    Operator,
    Simplex,
    face_operator,
    find_isomorphism,
    is_simplicial_map,
    map_simplex,
    simplicial_maps,
    standard_simplex,
)

logger = get_logger(__name__)

Composer = Callable[[Hashable, Hashable, Hashable, Simplex, Simplex], Simplex]

LOZENGE_SOURCE = "◊s"
LOZENGE_TARGET = "◊t"


def constant(key: Hashable, n: int) -> Simplex:
    """0-単体 key を n 次元に退化させた単体"""
    return Simplex(key, (0,) * (n + 1))


def empty_sset(name: str) -> FiniteSSet:
    return FiniteSSet(name, {}, {})


class SCat:
    """
    有限の単体的圏

    Args:
        name (str): 名前
        objects (Sequence): 対象
        homs (Mapping): (x, y) → 写像空間。含まれない組は空集合
        identities (Mapping): 対象 → 恒等射（写像空間の 0-単体のキー）
        composer (Callable): (x, y, z, σ, τ) → 「σ の後に τ」の合成
    """

    def __init__(
        self,
        name: str,
        objects: Sequence[Hashable],
        homs: Mapping[Tuple[Hashable, Hashable], FiniteSSet],
        identities: Mapping[Hashable, Hashable],
        composer: Composer,
    ):
        self.name = name
        self.objects: Tuple[Hashable, ...] = tuple(objects)
        self.homs: Dict[Tuple[Hashable, Hashable], FiniteSSet] = dict(homs)
        self.identities: Dict[Hashable, Hashable] = dict(identities)
        self._composer = composer
        self._empty: Dict[Tuple[Hashable, Hashable], FiniteSSet] = {}

    def __repr__(self) -> str:
        return f"SCat({self.name}: {len(self.objects)} objects)"

    def hom(self, x: Hashable, y: Hashable) -> FiniteSSet:
        if (x, y) in self.homs:
            return self.homs[(x, y)]
        return self._empty.setdefault((x, y), empty_sset(f"{self.name}({x},{y})"))

    def pairs(self) -> List[Tuple[Hashable, Hashable]]:
        """写像空間が空でない対象の組"""
        return [(x, y) for x in self.objects for y in self.objects if self.hom(x, y).dimension >= 0]

    def identity(self, x: Hashable, n: int = 0) -> Simplex:
        return constant(self.identities[x], n)

    def compose(self, x: Hashable, y: Hashable, z: Hashable, sigma: Simplex, tau: Simplex) -> Simplex:
        if sigma.dim != tau.dim:
            raise ValueError(f"次元の異なる単体は合成できません: {sigma.dim} / {tau.dim}")
        if sigma not in self.hom(x, y) or tau not in self.hom(y, z):
            raise ValueError(f"{self.name}: ({x},{y},{z}) の写像空間に属さない単体です")
        return self._composer(x, y, z, sigma, tau)

    def compose_path(self, objects: Sequence[Hashable], simplices: Sequence[Simplex], n: int = 0) -> Simplex:
        """objects[0] → … → objects[-1] の単体列を順に合成します（空なら恒等射）"""
        if not simplices:
            return self.identity(objects[0], n)
        result = simplices[0]
        for k in range(1, len(simplices)):
            result = self.compose(objects[0], objects[k], objects[k + 1], result, simplices[k])
        return result

    def check_associativity(self, max_dim: int = 1) -> List[str]:
        """
        max_dim 次元までのすべての単体の組で結合律を検査します。

        Returns:
            List[str]: 違反の一覧（空なら成立）
        """
        violations = []
        pairs = set(self.pairs())
        for (x, y) in sorted(pairs, key=str):
            for z in self.objects:
                if (y, z) not in pairs:
                    continue
                for w in self.objects:
                    if (z, w) not in pairs:
                        continue
                    for n in range(max_dim + 1):
                        for a in self.hom(x, y).simplices(n):
                            for b in self.hom(y, z).simplices(n):
                                ab = self.compose(x, y, z, a, b)
                                for c in self.hom(z, w).simplices(n):
                                    left = self.compose(x, z, w, ab, c)
                                    right = self.compose(x, y, w, a, self.compose(y, z, w, b, c))
                                    if left != right:
                                        violations.append(f"({x},{y},{z},{w}) 次元 {n}: 結合律が成り立ちません")
        return violations

    def check_unitality(self, max_dim: int = 1) -> List[str]:
        violations = []
        for (x, y) in self.pairs():
            for n in range(max_dim + 1):
                for a in self.hom(x, y).simplices(n):
                    if self.compose(x, x, y, self.identity(x, n), a) != a:
                        violations.append(f"({x},{y}) 次元 {n}: 左単位律が成り立ちません")
                    if self.compose(x, y, y, a, self.identity(y, n)) != a:
                        violations.append(f"({x},{y}) 次元 {n}: 右単位律が成り立ちません")
        return violations

    def check_simplicial(self, max_dim: int = 1) -> List[str]:
        """合成が面作用素と可換であること（単体的写像であること）を検査します"""
        violations = []
        pairs = set(self.pairs())
        for (x, y) in sorted(pairs, key=str):
            for z in self.objects:
                if (y, z) not in pairs:
                    continue
                for n in range(1, max_dim + 1):
                    for a in self.hom(x, y).simplices(n):
                        for b in self.hom(y, z).simplices(n):
                            ab = self.compose(x, y, z, a, b)
                            for i in range(n + 1):
                                delta = face_operator(n, i)
                                da = self.hom(x, y).apply(a, delta)
                                db = self.hom(y, z).apply(b, delta)
                                if self.hom(x, z).apply(ab, delta) != self.compose(x, y, z, da, db):
                                    violations.append(f"({x},{y},{z}) d{i}: 合成が面作用素と可換ではありません")
        return violations


class DiagramSCat(SCat):
    """pasting diagram から作られた C[Σ]（元の diagram を保持します）"""

    def __init__(self, diagram: PastingDiagram, homs, identities, composer):
        super().__init__(f"C[{diagram.name}]", diagram.graph.vertices, homs, identities, composer)
        self.diagram = diagram

    @property
    def graph(self) -> PlaneGraph:
        return self.diagram.graph


def _identity_hom(name: str, x: Hashable) -> FiniteSSet:
    key = (StPath.empty(x),)
    return FiniteSSet(name, {key: ()}, {key: 0}, label=lambda chain: "<".join(str(p) for p in chain))


def build_scat(d: PastingDiagram) -> DiagramSCat:
    """
    complete な pasting diagram から C[Σ] を構成します。

    C[Σ](x, x) = Δ⁰、C[Σ](x, y) = N(Σ_{x,y}) とし、合成は鎖の各成分の
    連結（join の同型と包含の合成）で与えます。Σ = Π_max の場合は
    各写像空間が N(G_{x,y}) と同型であることを確認します。

    Raises:
        NotComplete: d が complete でない場合
    """
    if not d.is_complete:
        raise NotComplete(f"{d.name} は complete ではありません", subject=d.name)
    g = d.graph
    homs: Dict[Tuple[str, str], FiniteSSet] = {}
    identities: Dict[str, Hashable] = {}
    for x in g.vertices:
        homs[(x, x)] = _identity_hom(f"C[{d.name}]({x},{x})", x)
        identities[x] = (StPath.empty(x),)
        for y in g.vertices:
            part = restrict_xy(d, x, y)
            if part is not None:
                homs[(x, y)] = nerve_pd(part)

    def composer(x, y, z, sigma, tau):
        chain = join_chains(ChainSimplex.from_simplex(sigma), ChainSimplex.from_simplex(tau))
        result = chain.to_simplex()
        assert result.key in homs[(x, z)], f"合成 {chain} が C[{d.name}]({x},{z}) に含まれません"
        return result

    result = DiagramSCat(d, homs, identities, composer)
    if d.members == maximal(g).members:
        for (x, y), space in homs.items():
            if x != y:
                assert find_isomorphism(space, nerve(subgraph_xy(g, x, y))) is not None, f"C[{d.name}]({x},{y}) ≇ N(G_{{{x},{y}}})"
    logger.debug(f"{result!r}: 空でない写像空間 {len(homs)} 個")
    return result


# --- 関手 ---

@dataclass
class SFunctor:
    """
    単体的関手

    homs[(x, y)] は C(x, y) の非退化単体のキー → 値の単体です。
    """

    source: SCat
    target: SCat
    objects: Dict[Hashable, Hashable]
    homs: Dict[Tuple[Hashable, Hashable], Dict[Hashable, Simplex]]
    name: str = ""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SFunctor):
            return NotImplemented
        return self.objects == other.objects and self._nonempty() == other._nonempty()

    def _nonempty(self):
        return {pair: table for pair, table in self.homs.items() if table}

    def apply(self, x: Hashable, y: Hashable, sigma: Simplex) -> Simplex:
        space = self.target.hom(self.objects[x], self.objects[y])
        return map_simplex(space, self.homs[(x, y)], sigma)

    def check(self, max_dim: int = 1) -> List[str]:
        """
        写像空間ごとの単体性、恒等射と合成の保存を検査します。

        Returns:
            List[str]: 違反の一覧（空なら関手）
        """
        problems = []
        source, target = self.source, self.target
        for (x, y) in source.pairs():
            table = self.homs.get((x, y), {})
            if not is_simplicial_map(source.hom(x, y), target.hom(self.objects[x], self.objects[y]), table):
                problems.append(f"({x},{y}) の写像が単体的ではありません")
        if problems:
            return problems
        for x in source.objects:
            if self.apply(x, x, source.identity(x)) != target.identity(self.objects[x]):
                problems.append(f"{x} の恒等射が保存されません")
        pairs = set(source.pairs())
        for (x, y) in sorted(pairs, key=str):
            for z in source.objects:
                if (y, z) not in pairs:
                    continue
                fx, fy, fz = self.objects[x], self.objects[y], self.objects[z]
                for n in range(max_dim + 1):
                    for a in source.hom(x, y).simplices(n):
                        for b in source.hom(y, z).simplices(n):
                            left = self.apply(x, z, source.compose(x, y, z, a, b))
                            right = target.compose(fx, fy, fz, self.apply(x, y, a), self.apply(y, z, b))
                            if left != right:
                                problems.append(f"({x},{y},{z}) 次元 {n}: 合成が保存されません")
        return problems

    def restricted(self, source: SCat) -> "SFunctor":
        """写像空間が部分集合になっている source への制限"""
        homs = {}
        for (x, y) in source.pairs():
            table = self.homs.get((x, y), {})
            missing = source.hom(x, y).keyset - set(table)
            if missing:
                raise BadInclusion(f"({x},{y}) の単体 {len(missing)} 個が関手の定義域にありません")
            homs[(x, y)] = {key: table[key] for key in source.hom(x, y).keyset}
        objects = {x: self.objects[x] for x in source.objects}
        return SFunctor(source, self.target, objects, homs, name=f"{self.name}|{source.name}")


def identity_functor(c: SCat) -> SFunctor:
    homs = {pair: {key: c.hom(*pair).simplex(key) for key in c.hom(*pair).keyset} for pair in c.pairs()}
    return SFunctor(c, c, {x: x for x in c.objects}, homs, name=f"id[{c.name}]")


def compose_functors(first: SFunctor, second: SFunctor) -> SFunctor:
    """first の後に second を適用する関手"""
    homs = {}
    for (x, y), table in first.homs.items():
        fx, fy = first.objects[x], first.objects[y]
        homs[(x, y)] = {key: second.apply(fx, fy, value) for key, value in table.items()}
    objects = {x: second.objects[fx] for x, fx in first.objects.items()}
    return SFunctor(first.source, second.target, objects, homs, name=f"{second.name}∘{first.name}")


def inclusion_functor(small: DiagramSCat, big: DiagramSCat) -> SFunctor:
    """Σ ⊆ Π から誘導される C[Σ] → C[Π]"""
    if small.graph.edge_set != big.graph.edge_set or not small.diagram.members <= big.diagram.members:
        raise BadInclusion(f"{small.diagram.name} ⊄ {big.diagram.name}")
    homs = {pair: {key: big.hom(*pair).simplex(key) for key in small.hom(*pair).keyset} for pair in small.pairs()}
    return SFunctor(small, big, {x: x for x in small.objects}, homs, name=f"{small.name}→{big.name}")


def enumerate_functors(domain: SCat, target: SCat, max_dim: Optional[int] = None) -> Iterator[SFunctor]:
    """
    domain から target への単体的関手をすべて列挙します。

    対象の写し方ごとに、写像空間の単体的写像を組ごとに割り当て、
    割り当て済みの3つ組で合成の保存を確認して枝刈りします。
    """
    top = max_dim if max_dim is not None else max((domain.hom(*p).dimension for p in domain.pairs()), default=0)
    pairs = [p for p in domain.pairs() if p[0] != p[1]]
    pairs.sort(key=lambda p: (domain.hom(*p).dimension, str(p)))

    def compatible(objects, homs) -> bool:
        for (x, y) in homs:
            for z in domain.objects:
                if (y, z) not in homs or (x, z) not in homs:
                    continue
                for n in range(top + 1):
                    for a in domain.hom(x, y).simplices(n):
                        for b in domain.hom(y, z).simplices(n):
                            fa = map_simplex(target.hom(objects[x], objects[y]), homs[(x, y)], a)
                            fb = map_simplex(target.hom(objects[y], objects[z]), homs[(y, z)], b)
                            ab = domain.compose(x, y, z, a, b)
                            fab = map_simplex(target.hom(objects[x], objects[z]), homs[(x, z)], ab)
                            if fab != target.compose(objects[x], objects[y], objects[z], fa, fb):
                                return False
        return True

    def assign(k: int, objects, homs) -> Iterator[SFunctor]:
        if k == len(pairs):
            yield SFunctor(domain, target, dict(objects), {p: dict(t) for p, t in homs.items()}, name="F")
            return
        x, y = pairs[k]
        for table in simplicial_maps(domain.hom(x, y), target.hom(objects[x], objects[y])):
            homs[(x, y)] = table
            if compatible(objects, homs):
                yield from assign(k + 1, objects, homs)
            del homs[(x, y)]

    for values in cartesian(target.objects, repeat=len(domain.objects)):
        objects = dict(zip(domain.objects, values))
        homs = {(x, x): {domain.identities[x]: target.identity(objects[x])} for x in domain.objects}
        if any(target.hom(objects[x], objects[y]).dimension < 0 for (x, y) in pairs):
            continue
        yield from assign(0, objects, homs)


# --- ラベリング ---

@dataclass
class Labeling:
    """
    globular グラフの単体的圏へのラベリング Λ

    Args:
        graph (PlaneGraph): ラベル付けするグラフ
        objects (Dict): 頂点 → 対象
        edges (Dict): 辺 → 写像空間の 0-単体
        faces (Dict): 内部面ID → 写像空間の 1-単体
    """

    graph: PlaneGraph
    objects: Dict[str, Hashable]
    edges: Dict[str, Simplex]
    faces: Dict[str, Simplex] = field(default_factory=dict)

    def path_composite(self, target: SCat, path: Sequence[str]) -> Simplex:
        """パスの辺のラベルを順に合成した 0-単体"""
        vertices = self.graph.endpoints_of_path(path)
        return target.compose_path([self.objects[v] for v in vertices], [self.edges[e] for e in path])

    def problems(self, target: SCat) -> List[str]:
        """ラベリングの条件に反する箇所を列挙します"""
        g = self.graph
        found = []
        missing = set(g.vertices) - set(self.objects)
        if missing:
            return [f"頂点 {sorted(missing)} に対象がありません"]
        for e, (u, v) in g.edges.items():
            value = self.edges.get(e)
            if value is None or value.dim != 0 or value not in target.hom(self.objects[u], self.objects[v]):
                found.append(f"辺 {e} のラベルが Hom({self.objects[u]},{self.objects[v]}) の 0-単体ではありません")
        if found:
            return found
        for face in g.interior_faces:
            value = self.faces.get(face.id)
            x, y = self.objects[g.path_source(face.dom)], self.objects[g.path_target(face.dom)]
            if value is None or value.dim != 1 or value not in target.hom(x, y):
                found.append(f"面 {face.id} のラベルが Hom({x},{y}) の 1-単体ではありません")
                continue
            space = target.hom(x, y)
            if space.face(value, 1) != self.path_composite(target, face.dom):
                found.append(f"面 {face.id}: d1 Λφ が dom の合成と一致しません")
            if space.face(value, 0) != self.path_composite(target, face.cod):
                found.append(f"面 {face.id}: d0 Λφ が cod の合成と一致しません")
        return found

    def validate(self, target: SCat) -> None:
        """
        Raises:
            InvalidLabeling: 条件に反する箇所がある場合
        """
        found = self.problems(target)
        if found:
            raise InvalidLabeling("; ".join(found), subject=found)


def enumerate_labelings(g: PlaneGraph, target: SCat) -> Iterator[Labeling]:
    """g から target へのラベリングをすべて列挙します"""
    faces = list(g.interior_faces)
    edge_ids = sorted(g.edges)
    for values in cartesian(target.objects, repeat=len(g.vertices)):
        objects = dict(zip(g.vertices, values))
        choices = []
        for e in edge_ids:
            u, v = g.edges[e]
            space = target.hom(objects[u], objects[v])
            choices.append([space.simplex(key) for key in space.nondegenerate(0)])
        for edge_values in cartesian(*choices):
            partial = Labeling(g, objects, dict(zip(edge_ids, edge_values)))
            face_choices = []
            for face in faces:
                x, y = objects[g.path_source(face.dom)], objects[g.path_target(face.dom)]
                space = target.hom(x, y)
                d1 = partial.path_composite(target, face.dom)
                d0 = partial.path_composite(target, face.cod)
                face_choices.append([a for a in space.simplices(1) if space.face(a, 1) == d1 and space.face(a, 0) == d0])
            for face_values in cartesian(*face_choices):
                yield Labeling(g, objects, dict(partial.edges), {f.id: a for f, a in zip(faces, face_values)})


# --- 分解と立方体表現 ---

@dataclass(frozen=True)
class AtomicFactor:
    """原子的な非退化単体と、それを退化させる全射"""

    source: str
    target: str
    simplex: Simplex
    eta: Operator

    @property
    def degeneracy_word(self) -> Tuple[int, ...]:
        return Simplex(self.simplex.key, self.eta).degeneracy_word

    @property
    def value(self) -> Simplex:
        return Simplex(self.simplex.key, self.eta)


def _split_chain(chain: ChainSimplex, stops: Sequence[str]) -> List[ChainSimplex]:
    pieces: List[List[StPath]] = [[] for _ in range(len(stops) - 1)]
    for p in chain.chain:
        for k, (a, b) in enumerate(zip(stops, stops[1:])):
            i, j = p.vertices.index(a), p.vertices.index(b)
            pieces[k].append(StPath(p.edges[i:j], p.vertices[i:j + 1]))
    return [ChainSimplex(tuple(piece)) for piece in pieces]


def atomic_decomposition(c: DiagramSCat, x: str, y: str, sigma: Simplex) -> List[AtomicFactor]:
    """
    σ を cut vertex で分割し、原子的な単体の合成 (σ₁α₁)∘…∘(σ_aα_a) に分解します。

    P_σ が 2-連結または1辺のとき σ は原子的です。分解の合成が σ に
    戻ることを確認します。
    """
    if x == y:
        return []
    chain = ChainSimplex.from_simplex(sigma)
    g = c.graph
    carrier = g.subgraph(chain.carrier)
    stops = [x] + cut_vertices(carrier) + [y]
    factors = []
    for (a, b), piece in zip(zip(stops, stops[1:]), _split_chain(chain, stops)):
        value = piece.to_simplex()
        factors.append(AtomicFactor(a, b, c.hom(a, b).simplex(value.key), value.eta))
    composite = c.compose_path(stops, [f.value for f in factors], sigma.dim)
    assert composite == sigma, f"原子分解の合成が {sigma} に戻りません"
    return factors


@dataclass(frozen=True)
class CubeFactor:
    """P_σ の join 分解の1つの成分（辺または内部面）"""

    edges: frozenset
    source: str
    target: str
    face: Optional[str]
    label: Optional[int]
    atom: Simplex

    @property
    def epsilon(self) -> int:
        return 0 if self.face is None else 1


@dataclass(frozen=True)
class CubeRep:
    """
    単体 σ の立方体表現

    beta[i] は σ̂ の i 成分 [n] → [ε_i] です。
    """

    simplex: Simplex
    source: str
    target: str
    factors: Tuple[CubeFactor, ...]
    beta: Tuple[Operator, ...]

    @property
    def epsilon(self) -> Tuple[int, ...]:
        return tuple(f.epsilon for f in self.factors)

    def vertex(self, j: int) -> Tuple[int, ...]:
        """σ̂ による頂点 j の像（Δ^{ε(σ)} の頂点）"""
        return tuple(b[j] for b in self.beta)

    @property
    def stops(self) -> List[str]:
        return [self.source] + [f.target for f in self.factors]


def _require_minimal_complete(c: DiagramSCat) -> None:
    d = c.diagram
    if d.members != complete(minimal(d.graph)).members:
        raise NotMinimalComplete(f"{d.name} は minimal complete ではありません", subject=d.name)


def cube_rep(c: DiagramSCat, x: str, y: str, sigma: Simplex) -> CubeRep:
    """
    C[Σ_minᶜ] の n-単体 σ の立方体表現を求めます。

    P_σ = P₁⋈…⋈P_a を辺と内部面に分解し、面の成分には
    β_i(j) = 1 ⇔ j ≥ λ_σ(P_i) を与えます。合成 ∘ (σ₁, …, σ_a) ∘ σ̂ が
    σ に一致することを確認します。

    Raises:
        NotMinimalComplete: c が minimal complete な diagram のものでない場合
    """
    _require_minimal_complete(c)
    n = sigma.dim
    if x == y:
        return CubeRep(sigma, x, y, (), ())
    g = c.graph
    chain = ChainSimplex.from_simplex(sigma)
    labels = chain_to_marked(g, chain).label_map
    carrier = g.subgraph(chain.carrier)
    factors, beta = [], []
    for piece in join_factors(carrier):
        a, b = piece.source, piece.target
        if len(piece.edges) == 1:
            (e,) = piece.edges
            atom = Simplex((StPath.of(g, (e,)),), (0,))
            factors.append(CubeFactor(piece.edge_set, a, b, None, None, atom))
            beta.append((0,) * (n + 1))
            continue
        assert len(piece.interior_faces) == 1, f"{sorted(piece.edges)} は辺でも面でもありません"
        face = piece.interior_faces[0]
        label = labels[face.id]
        atom = Simplex((StPath.of(g, face.dom), StPath.of(g, face.cod)), (0, 1))
        factors.append(CubeFactor(piece.edge_set, a, b, face.id, label, atom))
        beta.append(tuple(1 if j >= label else 0 for j in range(n + 1)))
    rep = CubeRep(sigma, x, y, tuple(factors), tuple(beta))

    parts = [c.hom(f.source, f.target).apply(f.atom, b) for f, b in zip(rep.factors, rep.beta)]
    assert c.compose_path(rep.stops, parts, n) == sigma, f"立方体表現の合成が {sigma} に戻りません"
    return rep


@dataclass(frozen=True)
class EpsilonMap:
    """
    ε(α): Δ^{ε(σα)} → Δ^{ε(σ)}

    components[i] は ("copy", j)（Q_j の座標をそのまま使う）か
    ("const", v)（定数 v）です。
    """

    components: Tuple[Tuple[str, int], ...]

    def evaluate(self, point: Sequence[int]) -> Tuple[int, ...]:
        return tuple(point[v] if kind == "copy" else v for kind, v in self.components)

    def after(self, inner: "EpsilonMap") -> "EpsilonMap":
        """inner の後に self を適用した写像 self∘inner"""
        return EpsilonMap(tuple(inner.components[v] if kind == "copy" else (kind, v) for kind, v in self.components))


def epsilon_map(c: DiagramSCat, x: str, y: str, sigma: Simplex, alpha: Operator) -> EpsilonMap:
    """
    単体作用素 α に対する ε(α) を求めます。

    P_i が辺なら定数 0、面で α(0) < λ ≤ α(m) なら対応する Q_j の座標、
    λ ≤ α(0) なら d₀ による定数 1、λ > α(m) なら d₁ による定数 0 です。
    """
    rep = cube_rep(c, x, y, sigma)
    moved = cube_rep(c, x, y, c.hom(x, y).apply(sigma, alpha))
    position = {f.edges: j for j, f in enumerate(moved.factors)}
    components = []
    for f in rep.factors:
        if f.face is None:
            assert f.edges in position, f"辺 {sorted(f.edges)} が σα の分解にありません"
            components.append(("const", 0))
        elif f.label <= alpha[0]:
            components.append(("const", 1))
        elif f.label > alpha[-1]:
            components.append(("const", 0))
        else:
            assert f.edges in position, f"面 {f.face} が σα の分解にありません"
            components.append(("copy", position[f.edges]))
    return EpsilonMap(tuple(components))


def godement_square(c: DiagramSCat, x: str, y: str, sigma: Simplex, alpha: Operator) -> bool:
    """σ̂∘α = ε(α)∘(σα)^ を頂点ごとに比較します"""
    rep = cube_rep(c, x, y, sigma)
    moved = cube_rep(c, x, y, c.hom(x, y).apply(sigma, alpha))
    eps = epsilon_map(c, x, y, sigma, alpha)
    return all(rep.vertex(alpha[j]) == eps.evaluate(moved.vertex(j)) for j in range(len(alpha)))


# --- ラベリングと関手の対応 ---

def minimal_complete_scat(g: PlaneGraph) -> DiagramSCat:
    return build_scat(complete(minimal(g)))


def labeling_to_functor(labeling: Labeling, target: SCat, domain: Optional[DiagramSCat] = None) -> SFunctor:
    """
    ラベリングから関手 u: C[Σ_minᶜ(G)] → target を構成します。

    u(σ) = 合成 ∘ (Λσ₁, …, Λσ_a) ∘ σ̂ として各非退化単体の値を決めます。

    Raises:
        InvalidLabeling: ラベリングの条件が成り立たない場合
    """
    labeling.validate(target)
    domain = domain or minimal_complete_scat(labeling.graph)
    objects = dict(labeling.objects)
    homs: Dict[Tuple[str, str], Dict[Hashable, Simplex]] = {}
    for (x, y) in domain.pairs():
        space = domain.hom(x, y)
        table = {}
        for key in space.keyset:
            sigma = space.simplex(key)
            if x == y:
                table[key] = target.identity(objects[x], sigma.dim)
                continue
            rep = cube_rep(domain, x, y, sigma)
            parts = []
            for f, b in zip(rep.factors, rep.beta):
                atom = labeling.edges[next(iter(f.edges))] if f.face is None else labeling.faces[f.face]
                parts.append(target.hom(objects[f.source], objects[f.target]).apply(atom, b))
            table[key] = target.compose_path([objects[v] for v in rep.stops], parts, sigma.dim)
        homs[(x, y)] = table
    functor = SFunctor(domain, target, objects, homs, name=f"u[{labeling.graph.name}]")
    logger.debug(f"{functor.name}: {sum(len(t) for t in homs.values())} 個の単体に値を与えました")
    return functor


def functor_to_labeling(u: SFunctor) -> Labeling:
    """関手を辺の 0-単体と面の 1-単体に制限したラベリング"""
    g = u.source.graph
    edges = {}
    for e, (a, b) in g.edges.items():
        edges[e] = u.apply(a, b, Simplex((StPath.of(g, (e,)),), (0,)))
    faces = {}
    for face in g.interior_faces:
        a, b = g.path_source(face.dom), g.path_target(face.dom)
        faces[face.id] = u.apply(a, b, Simplex((StPath.of(g, face.dom), StPath.of(g, face.cod)), (0, 1)))
    return Labeling(g, dict(u.objects), edges, faces)


# --- ◊ と C[Σ]_{/u} ---

def lozenge(a: SCat) -> SCat:
    """始対象 ◊s と終対象 ◊t を自由に付け加えた単体的圏 A◊"""
    point = standard_simplex(0)
    (point_key,) = point.nondegenerate(0)
    inside = set(a.objects)
    objects = list(a.objects) + [LOZENGE_SOURCE, LOZENGE_TARGET]
    homs = dict(a.homs)
    identities = dict(a.identities)
    for x in objects:
        if x in inside:
            homs[(LOZENGE_SOURCE, x)] = point
            homs[(x, LOZENGE_TARGET)] = point
    for x in (LOZENGE_SOURCE, LOZENGE_TARGET):
        homs[(x, x)] = point
        identities[x] = point_key
    homs[(LOZENGE_SOURCE, LOZENGE_TARGET)] = point

    def composer(x, y, z, sigma, tau):
        if x in inside and y in inside and z in inside:
            return a.compose(x, y, z, sigma, tau)
        return constant(point_key, sigma.dim)

    return SCat(f"{a.name}◊", objects, homs, identities, composer)


def vertex_partition(g: PlaneGraph, x: str, y: str) -> Tuple[frozenset, frozenset, frozenset]:
    """
    V₁ を G_{x,y} の頂点とする分割 V = V₀ ∪ V₁ ∪ V₂ を返します。

    V₀ は V₁ の外から V₁ に到達できる頂点、V₂ は残りです。V_i から
    V_j (j < i) へのパスがないことを確認します。
    """
    sub = subgraph_xy(g, x, y)
    v1 = frozenset(sub.vertices) if sub is not None else frozenset({x})
    v0 = frozenset(v for v in g.vertices if v not in v1 and nx.descendants(g.digraph, v) & v1)
    v2 = frozenset(g.vertices) - v1 - v0
    parts = (v0, v1, v2)
    for i in range(3):
        for j in range(i):
            for u in parts[i]:
                reach = nx.descendants(g.digraph, u)
                assert not (reach & parts[j]), f"V{i} の {u} から V{j} へのパスがあります"
    return parts


def lozenge_extension(u: SFunctor, c: DiagramSCat, partition: Tuple[frozenset, frozenset, frozenset]) -> SFunctor:
    """
    u: B → A と分割 C = C₀ ∪ C₁ ∪ C₂（C₁ = ob B）から û: C → A◊ を作ります。

    Raises:
        BadInclusion: C₁ の間の写像空間が B と一致しない場合
    """
    v0, v1, v2 = partition
    if set(u.source.objects) != set(v1):
        raise BadInclusion(f"分割の V₁ {sorted(v1)} が {u.source.name} の対象と一致しません")
    target = lozenge(u.target)
    point_key = target.identities[LOZENGE_SOURCE]
    objects = {}
    for x in c.objects:
        objects[x] = LOZENGE_SOURCE if x in v0 else LOZENGE_TARGET if x in v2 else u.objects[x]
    homs = {}
    for (x, y) in c.pairs():
        space = c.hom(x, y)
        if x in v1 and y in v1:
            if space.keyset != u.source.hom(x, y).keyset:
                raise BadInclusion(f"C({x},{y}) と B({x},{y}) が一致しません")
            homs[(x, y)] = dict(u.homs[(x, y)])
        else:
            homs[(x, y)] = {key: constant(point_key, space.dim_of(key)) for key in space.keyset}
    return SFunctor(c, target, objects, homs, name=f"{u.name}^")


class OverSCat(SCat):
    """C[Σ]_{/u}：C[Σ] の (s, t) 写像空間を X に置き換えた単体的圏"""

    def __init__(self, base: DiagramSCat, u: Mapping[Hashable, Simplex], space: FiniteSSet, name: str):
        s, t = base.graph.source, base.graph.target
        homs = dict(base.homs)
        homs[(s, t)] = space

        def composer(x, y, z, sigma, tau):
            if (x, z) != (s, t):
                return base.compose(x, y, z, sigma, tau)
            if y == s:
                return tau
            if y == t:
                return sigma
            return map_simplex(space, u, base.compose(x, y, z, sigma, tau))

        super().__init__(name, base.objects, homs, base.identities, composer)
        self.base = base
        self.u = dict(u)
        self.space = space
        self.source_vertex, self.target_vertex = s, t


def over_u(d: PastingDiagram, u: Mapping[Hashable, Simplex], space: FiniteSSet) -> OverSCat:
    """
    u: N(Σ) → X に対する C[Σ]_{/u} を構成します。

    Raises:
        NotComplete: Σ が complete でない場合
        BadInclusion: u が N(Σ) からの単体的写像でない場合
    """
    base = build_scat(d)
    s, t = d.graph.source, d.graph.target
    if not is_simplicial_map(base.hom(s, t), space, u):
        raise BadInclusion(f"N({d.name}) → {space.name} の写像が単体的ではありません")
    return OverSCat(base, u, space, name=f"{base.name}/{space.name}")


def over_functor(c: OverSCat) -> SFunctor:
    """C[Σ] → C[Σ]_{/u}。(s, t) では u、それ以外では恒等写像"""
    st = (c.source_vertex, c.target_vertex)
    homs = {}
    for pair in c.base.pairs():
        keys = c.base.hom(*pair).keyset
        if pair == st:
            homs[pair] = {key: c.u[key] for key in keys}
        else:
            homs[pair] = {key: c.hom(*pair).simplex(key) for key in keys}
    return SFunctor(c.base, c, {x: x for x in c.base.objects}, homs, name=f"{c.base.name}→{c.name}")


def over_map(c_u: OverSCat, c_pu: OverSCat, p: Mapping[Hashable, Simplex]) -> SFunctor:
    """C_{/p}: C[Σ]_{/u} → C[Σ]_{/pu}。(s, t) 以外では恒等写像"""
    st = (c_u.source_vertex, c_u.target_vertex)
    homs = {}
    for pair in c_u.pairs():
        space = c_u.hom(*pair)
        if pair == st:
            homs[pair] = {key: p[key] for key in space.keyset}
        else:
            homs[pair] = {key: c_pu.hom(*pair).simplex(key) for key in space.keyset}
    return SFunctor(c_u, c_pu, {x: x for x in c_u.objects}, homs, name=f"C/{c_pu.space.name}")


def v_over_w(
    sigma: PastingDiagram,
    pi: PastingDiagram,
    v: Mapping[Hashable, Simplex],
    w: Mapping[Hashable, Simplex],
    space: FiniteSSet,
) -> SFunctor:
    """
    v/w: C[Π] → C[Σ hc Π]_{/w} を構成します。

    (s, t) 以外では Π_{x,y} = (Σ hc Π)_{x,y} による恒等写像、(s, t) では v です。

    Raises:
        NotComplete: Π が complete でない場合
        BadInclusion: S ⊆ T でない場合
    """
    if not pi.is_complete:
        raise NotComplete(f"{pi.name} は complete ではありません", subject=pi.name)
    if not sigma.members <= pi.members:
        raise BadInclusion(f"{sigma.name} ⊄ {pi.name}")
    source = build_scat(pi)
    target = over_u(hc(sigma, pi), w, space)
    st = (target.source_vertex, target.target_vertex)
    homs = {}
    for pair in source.pairs():
        keys = source.hom(*pair).keyset
        if pair == st:
            homs[pair] = {key: v[key] for key in keys}
        else:
            assert keys == target.hom(*pair).keyset, f"Π{pair} と (Σ hc Π){pair} の神経が一致しません"
            homs[pair] = {key: target.hom(*pair).simplex(key) for key in keys}
    return SFunctor(source, target, {x: x for x in source.objects}, homs, name="v/w")
