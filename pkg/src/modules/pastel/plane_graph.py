#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
平面グラフと globular グラフを扱うモジュール

平面への埋め込みは座標を持たず、各頂点での辺の巡回順序（時計回りの
rotation system）と、外部面上の dart ひとつで表現します。面は
rotation からの face tracing で求めます。

dart は (辺ID, '+') が始点側、(辺ID, '-') が終点側を表します。
テキスト表現は '+e0' / '-e0' です。
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.utils.logging_config import get_logger
from src.modules.pastel.errors import (
    EulerMismatch,
    FaceNotGlobular,
    GraphFormatError,
    ChiralityMismatch,
    HasDirectedCycle,
    NotComparable,
    NotStGraph,
    PastelError,
)

logger = get_logger(__name__)

Dart = Tuple[str, str]
EdgeSet = FrozenSet[str]

EXTERIOR_FACE_ID = "ext"


def flip(dart: Dart) -> Dart:
    """dart の反対側の端を返します"""
    return (dart[0], "-" if dart[1] == "+" else "+")


def dart_text(dart: Dart) -> str:
    return f"{dart[1]}{dart[0]}"


def parse_dart(text: str) -> Dart:
    """
    '+e0' 形式の文字列を dart に変換します。

    Raises:
        GraphFormatError: 形式が不正な場合
    """
    text = text.strip()
    if len(text) < 2 or text[0] not in "+-":
        raise GraphFormatError(f"dart の形式が不正です: '{text}'")
    return (text[1:], text[0])


@dataclass(frozen=True)
class Face:
    """
    face tracing で得られる面

    boundary は時計回りの dart 列です。内部面では boundary = dom・cod^op、
    外部面では逆の規約（∂ε = p・q^op のとき dom ε = q, cod ε = p）です。
    分解できない面では dom / cod は None になります。
    """

    id: str
    boundary: Tuple[Dart, ...]
    is_exterior: bool
    dom: Optional[Tuple[str, ...]]
    cod: Optional[Tuple[str, ...]]

    @property
    def is_globular(self) -> bool:
        return self.dom is not None

    @property
    def edges(self) -> EdgeSet:
        return frozenset(d[0] for d in self.boundary)


@dataclass(frozen=True)
class Glob:
    """2つのパスの比較の証拠となる glob"""

    carrier: EdgeSet
    dom: Tuple[str, ...]
    cod: Tuple[str, ...]
    degenerate: bool
    proper: bool


@dataclass(frozen=True)
class GlobularityReport:
    """check_globular の結果"""

    source: str
    target: str
    dom: Tuple[str, ...]
    cod: Tuple[str, ...]
    interior_faces: Tuple[str, ...]


def trace_walks(rotation: Mapping[str, Sequence[Dart]], vertex_order: Sequence[str]) -> List[Tuple[Dart, ...]]:
    """
    rotation system から面の境界ウォークをすべて求めます。

    dart h の次は、反対側の端 h' の rotation における巡回的な直前の dart です。
    ウォークは頂点順・rotation 順に最初に現れた dart から始まります。
    """
    position: Dict[Dart, Tuple[str, int]] = {}
    for v in vertex_order:
        for k, dart in enumerate(rotation[v]):
            position[dart] = (v, k)

    def successor(dart: Dart) -> Dart:
        v, k = position[flip(dart)]
        return rotation[v][k - 1]

    visited = set()
    walks: List[Tuple[Dart, ...]] = []
    for v in vertex_order:
        for start in rotation[v]:
            if start in visited:
                continue
            walk = []
            dart = start
            while dart not in visited:
                visited.add(dart)
                walk.append(dart)
                dart = successor(dart)
            walks.append(tuple(walk))
    return walks


def decompose_walk(walk: Sequence[Dart]) -> Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """
    巡回ウォークを '+' の連続部分 p と '-' の連続部分に分解します。

    Returns:
        Optional[Tuple]: (p, q)。q は '-' 部分の辺を逆順に並べたもの。
            分解できない場合は None
    """
    n = len(walk)
    changes = [k for k in range(n) if walk[k][1] != walk[k - 1][1]]
    if len(changes) != 2:
        return None
    start = next(k for k in changes if walk[k][1] == "+")
    rotated = [walk[(start + k) % n] for k in range(n)]
    plus = tuple(d[0] for d in rotated if d[1] == "+")
    minus = tuple(d[0] for d in rotated if d[1] == "-")
    return plus, tuple(reversed(minus))


def _cyclic_normal(seq: Sequence[Dart]) -> Tuple[Dart, ...]:
    if not seq:
        return ()
    k = min(range(len(seq)), key=lambda i: seq[i])
    return tuple(seq[k:]) + tuple(seq[:k])


class PlaneGraph:
    """
    rotation system と外部面の dart で与えられる平面グラフ

    生成後は変更しません。面や networkx のグラフは必要になった時点で
    計算してキャッシュします。
    """

    def __init__(
        self,
        vertices: Sequence[str],
        edges: Mapping[str, Tuple[str, str]],
        rotation: Mapping[str, Sequence[Dart]],
        exterior_dart: Dart,
        name: str = "",
        declared_dom: Optional[Sequence[str]] = None,
    ):
        self.name = name
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.edges: Dict[str, Tuple[str, str]] = dict(edges)
        self.rotation: Dict[str, Tuple[Dart, ...]] = {v: tuple(rotation.get(v, ())) for v in self.vertices}
        self.exterior_dart: Dart = exterior_dart
        # 入力で宣言された dom。鏡像の入力を見分けるためだけに使います
        self.declared_dom: Optional[Tuple[str, ...]] = tuple(declared_dom) if declared_dom is not None else None
        self._validate()

    def _validate(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphFormatError(f"頂点IDが重複しています: {self.vertices}")
        vertex_set = set(self.vertices)
        for e, (u, v) in self.edges.items():
            if u not in vertex_set or v not in vertex_set:
                raise GraphFormatError(f"辺 {e} の端点 {u} -> {v} が定義されていません")
        extra = set(self.rotation) - vertex_set
        if extra:
            raise GraphFormatError(f"未定義の頂点に rotation が指定されています: {sorted(extra)}")
        seen = set()
        for v, darts in self.rotation.items():
            for dart in darts:
                e, end = dart
                if e not in self.edges:
                    raise GraphFormatError(f"頂点 {v} の rotation に未定義の辺 {e} があります")
                expected = self.edges[e][0] if end == "+" else self.edges[e][1]
                if expected != v:
                    raise GraphFormatError(f"dart {dart_text(dart)} は頂点 {v} に接続していません")
                if dart in seen:
                    raise GraphFormatError(f"dart {dart_text(dart)} が rotation に複数回現れます")
                seen.add(dart)
        for e in self.edges:
            for end in "+-":
                if (e, end) not in seen:
                    raise GraphFormatError(f"dart {end}{e} が rotation に含まれていません")
        if self.edges and self.exterior_dart not in seen:
            raise GraphFormatError(f"外部面の dart {dart_text(self.exterior_dart)} がグラフに存在しません")

    def __repr__(self) -> str:
        return f"PlaneGraph({self.name or '?'}: V={len(self.vertices)}, E={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self.edges == other.edges
            and all(_cyclic_normal(self.rotation[v]) == _cyclic_normal(other.rotation[v]) for v in self.vertices)
            and self.exterior.edges == other.exterior.edges
            and self.exterior.boundary in _rotations_of(other.exterior.boundary)
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.edges.items()))

    # --- faces ---

    @cached_property
    def faces(self) -> Tuple[Face, ...]:
        walks = trace_walks(self.rotation, self.vertices)
        faces = []
        for k, walk in enumerate(walks):
            exterior = self.exterior_dart in walk
            split = decompose_walk(walk)
            if split is None:
                face_id = EXTERIOR_FACE_ID if exterior else f"f{k}"
                faces.append(Face(face_id, walk, exterior, None, None))
                continue
            p, q = split
            dom, cod = (q, p) if exterior else (p, q)
            face_id = EXTERIOR_FACE_ID if exterior else f"{'.'.join(dom)}/{'.'.join(cod)}"
            faces.append(Face(face_id, walk, exterior, dom, cod))
        logger.debug(f"{self.name or 'graph'}: face tracing で {len(faces)} 個の面を検出しました")
        return tuple(faces)

    @cached_property
    def face_by_id(self) -> Dict[str, Face]:
        return {f.id: f for f in self.faces}

    @cached_property
    def face_of_dart(self) -> Dict[Dart, str]:
        return {dart: f.id for f in self.faces for dart in f.boundary}

    @property
    def exterior(self) -> Face:
        return self.face_by_id[EXTERIOR_FACE_ID]

    @cached_property
    def interior_faces(self) -> Tuple[Face, ...]:
        return tuple(f for f in self.faces if not f.is_exterior)

    def face_below(self, edge: str) -> str:
        """辺の下側（その辺を dom に含む側）の面IDを返します"""
        return self.face_of_dart[(edge, "+")]

    def face_above(self, edge: str) -> str:
        """辺の上側（その辺を cod に含む側）の面IDを返します"""
        return self.face_of_dart[(edge, "-")]

    # --- directed structure ---

    @cached_property
    def digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for e, (u, v) in self.edges.items():
            graph.add_edge(u, v, key=e)
        return graph

    @cached_property
    def source(self) -> str:
        sources = [v for v in self.vertices if self.digraph.in_degree(v) == 0]
        if len(sources) != 1:
            raise NotStGraph(f"湧き出し口が一意ではありません: {sources}", vertex=sources[0] if sources else None)
        return sources[0]

    @cached_property
    def target(self) -> str:
        sinks = [v for v in self.vertices if self.digraph.out_degree(v) == 0]
        if len(sinks) != 1:
            raise NotStGraph(f"吸い込み口が一意ではありません: {sinks}", vertex=sinks[0] if sinks else None)
        return sinks[0]

    @property
    def dom(self) -> Tuple[str, ...]:
        ext = self.exterior
        if ext.dom is None:
            raise FaceNotGlobular(ext.id, [dart_text(d) for d in ext.boundary])
        return ext.dom

    @property
    def cod(self) -> Tuple[str, ...]:
        ext = self.exterior
        if ext.cod is None:
            raise FaceNotGlobular(ext.id, [dart_text(d) for d in ext.boundary])
        return ext.cod

    @cached_property
    def edge_set(self) -> EdgeSet:
        return frozenset(self.edges)

    def endpoints_of_path(self, path: Sequence[str]) -> Tuple[str, ...]:
        """辺列の頂点列を返します（連続していない場合は GraphFormatError）"""
        if not path:
            return ()
        vertices = [self.edges[path[0]][0]]
        for e in path:
            u, v = self.edges[e]
            if u != vertices[-1]:
                raise GraphFormatError(f"辺列 {'.'.join(path)} は有向パスではありません")
            vertices.append(v)
        return tuple(vertices)

    def path_source(self, path: Sequence[str]) -> str:
        return self.edges[path[0]][0]

    def path_target(self, path: Sequence[str]) -> str:
        return self.edges[path[-1]][1]

    # --- derived graphs ---

    def subgraph(self, edges: Iterable[str], name: Optional[str] = None) -> "PlaneGraph":
        """
        辺集合が誘導する部分グラフを、埋め込みを引き継いで返します。

        外部面は、削除された辺をまたいで元の面を併合し、元の外部面を
        含む併合クラスに属する面として決めます。

        Args:
            edges (Iterable[str]): 残す辺の集合
            name (Optional[str]): 部分グラフの名前

        Returns:
            PlaneGraph: 部分グラフ
        """
        keep = frozenset(edges)
        unknown = keep - self.edge_set
        if unknown:
            raise GraphFormatError(f"グラフに存在しない辺です: {sorted(unknown)}")
        if not keep:
            raise GraphFormatError("空の辺集合から部分グラフは作れません")

        find = self._merged_faces(keep)
        used = {v for e in keep for v in self.edges[e]}
        vertices = [v for v in self.vertices if v in used]
        rotation = {v: [d for d in self.rotation[v] if d[0] in keep] for v in vertices}
        exterior_class = find(EXTERIOR_FACE_ID)
        exterior_dart = None
        for walk in trace_walks(rotation, vertices):
            if find(self.face_of_dart[walk[0]]) == exterior_class:
                exterior_dart = walk[0]
                break
        if exterior_dart is None:
            raise GraphFormatError(f"部分グラフ {sorted(keep)} の外部面を特定できません")
        sub_edges = {e: self.edges[e] for e in self.edges if e in keep}
        return PlaneGraph(vertices, sub_edges, rotation, exterior_dart, name=name or f"{self.name}|{','.join(sorted(keep))}")

    def _merged_faces(self, keep: EdgeSet):
        """keep に含まれない辺をまたいで面を併合し、代表元を返す関数を返します"""
        parent = {f.id: f.id for f in self.faces}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e not in keep:
                a, b = find(self.face_below(e)), find(self.face_above(e))
                if a != b:
                    parent[a] = b
        return find

    def enclosed_faces(self, edges: Iterable[str]) -> FrozenSet[str]:
        """辺集合が囲む領域に含まれる G の内部面のID"""
        find = self._merged_faces(frozenset(edges))
        outside = find(EXTERIOR_FACE_ID)
        return frozenset(f.id for f in self.interior_faces if find(f.id) != outside)

    def renamed(self, vertex_map: Mapping[str, str] = None, edge_map: Mapping[str, str] = None, name: Optional[str] = None) -> "PlaneGraph":
        """頂点IDと辺IDを付け替えた同型なグラフを返します"""
        vmap = dict(vertex_map or {})
        emap = dict(edge_map or {})
        rv = lambda v: vmap.get(v, v)
        re_ = lambda e: emap.get(e, e)
        return PlaneGraph(
            [rv(v) for v in self.vertices],
            {re_(e): (rv(u), rv(v)) for e, (u, v) in self.edges.items()},
            {rv(v): [(re_(d[0]), d[1]) for d in darts] for v, darts in self.rotation.items()},
            (re_(self.exterior_dart[0]), self.exterior_dart[1]),
            name=name or self.name,
        )

    @cached_property
    def globular_subgraphs(self) -> Dict[EdgeSet, "PlaneGraph"]:
        """
        空でないすべての globular 部分グラフを返します。

        辺数の指数オーダーの全探索なので、十数辺程度までのグラフを想定しています。
        """
        result: Dict[EdgeSet, PlaneGraph] = {}
        ordered = sorted(self.edges)
        for size in range(1, len(ordered) + 1):
            for combo in combinations(ordered, size):
                sub = self.globular_subgraph(combo)
                if sub is not None:
                    result[frozenset(combo)] = sub
        logger.debug(f"{self.name}: globular 部分グラフ {len(result)} 個")
        return result

    def globular_subgraph(self, edges: Iterable[str]) -> Optional["PlaneGraph"]:
        """辺集合が globular な部分グラフならその部分グラフを、そうでなければ None を返します"""
        edges = frozenset(edges)
        cache = self.__dict__.setdefault("_globular_cache", {})
        if edges not in cache:
            cache[edges] = self._check_subgraph(edges)
        return cache[edges]

    def _check_subgraph(self, edges: EdgeSet) -> Optional["PlaneGraph"]:
        if not edges or not edges <= self.edge_set:
            return None
        sub_digraph = self.digraph.edge_subgraph([(*self.edges[e], e) for e in edges])
        if not nx.is_weakly_connected(sub_digraph):
            return None
        sub = self.subgraph(edges)
        try:
            check_globular(sub)
        except PastelError:
            return None
        return sub

    def is_globular_subgraph(self, edges: Iterable[str]) -> bool:
        return self.globular_subgraph(edges) is not None

    def is_path(self, edges: Iterable[str]) -> bool:
        """辺集合が有向パスかどうかを判定します"""
        edges = frozenset(edges)
        if not edges:
            return False
        outs = [self.edges[e][0] for e in edges]
        ins = [self.edges[e][1] for e in edges]
        if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
            return False
        starts = set(outs) - set(ins)
        if len(starts) != 1:
            return False
        current, steps = starts.pop(), 0
        by_source = {self.edges[e][0]: e for e in edges}
        while current in by_source:
            current = self.edges[by_source[current]][1]
            steps += 1
        return steps == len(edges)


def _rotations_of(seq: Sequence[Dart]) -> List[Tuple[Dart, ...]]:
    return [tuple(seq[k:]) + tuple(seq[:k]) for k in range(len(seq))]


def trace_faces(g: PlaneGraph) -> List[Face]:
    """rotation system から復元した面（外部面を含む）を返します"""
    return list(g.faces)


def check_globular(g: PlaneGraph) -> GlobularityReport:
    """
    平面グラフが globular であることを検査します。

    連結性、オイラーの公式、非巡回性、湧き出し口・吸い込み口の一意性、
    それらが外部面上にあること、すべての面の境界が p・q^op に分解できること
    の順に調べます。

    Args:
        g (PlaneGraph): 検査対象のグラフ

    Returns:
        GlobularityReport: source, target, dom, cod と内部面の一覧

    Raises:
        NotStGraph: 連結でない、source/target が一意でない、または出辺が時計回りに連続していない場合
        ChiralityMismatch: 宣言された dom と復元した dom が異なる場合（鏡像の入力など）
        EulerMismatch: V - E + F != 2 の場合
        HasDirectedCycle: 有向閉路がある場合
        FaceNotGlobular: 分解できない面がある場合
    """
    if not g.edges:
        raise NotStGraph(f"{g.name}: 辺のないグラフは globular ではありません")
    if not nx.is_weakly_connected(g.digraph):
        raise NotStGraph(f"{g.name}: グラフが連結ではありません")

    v, e, f = len(g.vertices), len(g.edges), len(g.faces)
    if v - e + f != 2:
        raise EulerMismatch(v, e, f)

    try:
        cycle = nx.find_cycle(g.digraph, orientation="original")
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        raise HasDirectedCycle([step[0] for step in cycle] + [cycle[0][0]])

    s, t = g.source, g.target
    exterior_vertices = {g.edges[d[0]][0 if d[1] == "+" else 1] for d in g.exterior.boundary}
    for vertex, role in ((s, "source"), (t, "target")):
        if vertex not in exterior_vertices:
            raise NotStGraph(f"{role} {vertex} が外部面の境界上にありません", vertex=vertex)

    for face in g.faces:
        if not face.is_globular:
            raise FaceNotGlobular(face.id, [dart_text(d) for d in face.boundary])

    dom, cod = g.dom, g.cod
    if g.path_source(dom) != s or g.path_target(dom) != t:
        raise FaceNotGlobular(EXTERIOR_FACE_ID, [dart_text(d) for d in g.exterior.boundary])

    for vertex in g.vertices:
        signs = [d[1] for d in g.rotation[vertex]]
        changes = sum(1 for k in range(len(signs)) if signs[k] != signs[k - 1])
        if changes > 2:
            raise NotStGraph(f"頂点 {vertex} で出辺が時計回りに連続していません: {signs}", vertex=vertex)

    if g.declared_dom is not None and g.declared_dom != dom:
        raise ChiralityMismatch(g.declared_dom, dom, cod)

    return GlobularityReport(s, t, dom, cod, tuple(face.id for face in g.interior_faces))


def subgraph_xy(g: PlaneGraph, x: str, y: str) -> Optional[PlaneGraph]:
    """
    x から y へのすべての有向パスの和集合 G_{x,y} を返します。

    Returns:
        Optional[PlaneGraph]: パスが存在しない場合、または x == y の場合は None
    """
    if x == y:
        return None
    after_x = nx.descendants(g.digraph, x) | {x}
    before_y = nx.ancestors(g.digraph, y) | {y}
    edges = [e for e, (u, v) in g.edges.items() if u in after_x and v in before_y]
    if not edges:
        return None
    return g.subgraph(edges, name=f"{g.name}_{x},{y}")


def xy_edges(g: PlaneGraph, x: str, y: str) -> EdgeSet:
    sub = subgraph_xy(g, x, y)
    return sub.edge_set if sub is not None else frozenset()


def join(g1: PlaneGraph, g2: PlaneGraph, name: Optional[str] = None) -> PlaneGraph:
    """
    g1 の target と g2 の source を貼り合わせた join G1 ⋈ G2 を返します。

    貼り合わせた頂点の rotation は、g2 の出辺の弧の後に g1 の入辺の弧を
    （時計回りに）並べたものです。貼り合わせ頂点のIDは g1 の target を使います。

    Raises:
        GraphFormatError: 辺IDまたは頂点IDが衝突する場合
    """
    shared = set(g1.edges) & set(g2.edges)
    if shared:
        raise GraphFormatError(f"join する2つのグラフの辺IDが重複しています: {sorted(shared)}")
    glue = g1.target
    g2 = g2.renamed({g2.source: glue})
    clash = (set(g1.vertices) & set(g2.vertices)) - {glue}
    if clash:
        raise GraphFormatError(f"join する2つのグラフの頂点IDが重複しています: {sorted(clash)}")

    in_arc = list(g1.rotation[glue])
    k = in_arc.index((g1.cod[-1], "-"))
    in_arc = in_arc[k:] + in_arc[:k]
    out_arc = list(g2.rotation[glue])
    k = out_arc.index((g2.dom[0], "+"))
    out_arc = out_arc[k:] + out_arc[:k]

    rotation = {**g1.rotation, **g2.rotation}
    rotation[glue] = tuple(out_arc + in_arc)
    vertices = list(g1.vertices) + [v for v in g2.vertices if v != glue]
    edges = {**g1.edges, **g2.edges}
    return PlaneGraph(vertices, edges, rotation, g1.exterior_dart, name=name or f"{g1.name}⋈{g2.name}")


def subdivided(g: PlaneGraph, edge: str, vertex: str) -> PlaneGraph:
    """辺 edge の途中に頂点 vertex を挿入したグラフを返します（辺は edge+'a', edge+'b'）"""
    if vertex in g.vertices:
        raise GraphFormatError(f"頂点 {vertex} は既に存在します")
    u, v = g.edges[edge]
    first, second = f"{edge}a", f"{edge}b"
    edges = {}
    for e, ends in g.edges.items():
        if e == edge:
            edges[first] = (u, vertex)
            edges[second] = (vertex, v)
        else:
            edges[e] = ends
    replace = {(edge, "+"): (first, "+"), (edge, "-"): (second, "-")}
    rotation = {w: [replace.get(d, d) for d in darts] for w, darts in g.rotation.items()}
    rotation[vertex] = [(second, "+"), (first, "-")]
    return PlaneGraph(list(g.vertices) + [vertex], edges, rotation, replace.get(g.exterior_dart, g.exterior_dart), name=f"{g.name}/{edge}")


def glob_between(g: PlaneGraph, p: Sequence[str], q: Sequence[str]) -> Glob:
    """
    p ≤ q を証拠づける最小の glob を求めます。

    共通の接頭辞・接尾辞を取り除いた残り p', q' について、p' ∪ q' が
    dom = p', cod = q' の globular 部分グラフであるときに限り証拠が存在します。

    Raises:
        NotComparable: 証拠が存在しない場合
    """
    p, q = tuple(p), tuple(q)
    if not p or not q or g.path_source(p) != g.path_source(q) or g.path_target(p) != g.path_target(q):
        raise NotComparable(f"端点の異なるパスは比較できません: {'.'.join(p)} / {'.'.join(q)}")
    if p == q:
        return Glob(frozenset(p), p, q, degenerate=True, proper=False)
    head = 0
    while p[head] == q[head]:
        head += 1
    tail = 0
    while p[len(p) - 1 - tail] == q[len(q) - 1 - tail]:
        tail += 1
    dom, cod = p[head:len(p) - tail], q[head:len(q) - tail]
    carrier = frozenset(dom) | frozenset(cod)
    sub = g.globular_subgraph(carrier)
    if sub is None or sub.dom != dom or sub.cod != cod:
        raise NotComparable(f"{'.'.join(p)} ≤ {'.'.join(q)} の証拠となる glob がありません")
    return Glob(carrier, dom, cod, degenerate=False, proper=is_two_connected(sub))


def cut_vertices(g: PlaneGraph) -> List[str]:
    """取り除くと s から t へ到達できなくなる内部頂点を dom(G) 上の順で返します"""
    s, t = g.source, g.target
    order = g.endpoints_of_path(g.dom)
    result = []
    for v in order[1:-1]:
        rest = g.digraph.copy()
        rest.remove_node(v)
        if not nx.has_path(rest, s, t):
            result.append(v)
    return result


def join_factors(g: PlaneGraph) -> List[PlaneGraph]:
    """cut vertex で分割した join 分解 G = G_1 ⋈ … ⋈ G_a を返します"""
    stops = [g.source] + cut_vertices(g) + [g.target]
    return [subgraph_xy(g, a, b) for a, b in zip(stops, stops[1:])]


def is_two_connected(g: PlaneGraph) -> bool:
    return len(g.edges) >= 2 and not cut_vertices(g)


def intersect_xy_joins(g: PlaneGraph, x: str, y: str) -> EdgeSet:
    """
    (G_{s,x} ⋈ G_{x,t}) ∩ (G_{s,y} ⋈ G_{y,t}) の辺集合を返します。

    x から y への有向パスが存在する場合、結果が G_{s,x} ⋈ G_{x,y} ⋈ G_{y,t}
    と一致することを確認します。
    """
    s, t = g.source, g.target

    def through(v: str) -> EdgeSet:
        return xy_edges(g, s, v) | xy_edges(g, v, t) if v not in (s, t) else g.edge_set

    result = through(x) & through(y)
    if x != y and nx.has_path(g.digraph, x, y):
        triple = xy_edges(g, s, x) | xy_edges(g, x, y) | xy_edges(g, y, t)
        assert result == triple, f"G_{{s,{x}}}⋈G_{{{x},{y}}}⋈G_{{{y},t}} と交わりが一致しません"
    return result


def is_glob(g: PlaneGraph, edges: Iterable[str]) -> bool:
    """すべての辺が自身の外部面に接する globular 部分グラフかどうか"""
    sub = g.globular_subgraph(edges)
    return sub is not None and sub.exterior.edges == sub.edge_set
