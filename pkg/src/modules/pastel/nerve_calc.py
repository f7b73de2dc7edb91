#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
globular グラフの神経と n-marked subgraph による計算を行うモジュール

神経 N(G) の n-単体は st-path の鎖 p_0 ≤ … ≤ p_n であり、これは
admissible な n-marked subgraph (P, λ) と一対一に対応します。
単体作用素の作用は鎖の添字付け替えでも、marked subgraph 上の
4段階の手続きでも計算でき、両者は一致します。
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from src.utils.logging_config import get_logger
from src.modules.pastel.errors import NotAdmissible, FormatError
from src.modules.pastel.paths_poset import PathPoset, StPath, find_subpath, poset_of
from src.modules.pastel.plane_graph import PlaneGraph
from src.modules.pastel.simplicial import (
    FiniteSSet,
    Operator,
    Simplex,
    find_isomorphism,
    is_monotone,
    nerve_of_poset,
    product,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class ChainSimplex:
    """st-path の鎖 p_0 ≤ … ≤ p_n"""

    chain: Tuple[StPath, ...]

    @property
    def dim(self) -> int:
        return len(self.chain) - 1

    @property
    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.chain, self.chain[1:]))

    @property
    def carrier(self) -> FrozenSet[str]:
        return frozenset(e for p in self.chain for e in p.edges)

    def act(self, alpha: Operator) -> "ChainSimplex":
        """鎖の添字の付け替え q_j = p_{α(j)}"""
        return ChainSimplex(tuple(self.chain[a] for a in alpha))

    def to_simplex(self) -> Simplex:
        distinct, eta = [], []
        for p in self.chain:
            if not distinct or distinct[-1] != p:
                distinct.append(p)
            eta.append(len(distinct) - 1)
        return Simplex(tuple(distinct), tuple(eta))

    @staticmethod
    def from_simplex(x: Simplex) -> "ChainSimplex":
        return ChainSimplex(tuple(x.key[e] for e in x.eta))

    def __str__(self) -> str:
        return " ≤ ".join(str(p) for p in self.chain)


@dataclass(frozen=True)
class MarkedSubgraph:
    """
    n-marked subgraph (P, λ)

    labels は (面ID, ラベル) を面ID順に並べたタプルです。
    """

    edges: FrozenSet[str]
    labels: Tuple[Tuple[str, int], ...]
    n: int

    @staticmethod
    def make(edges, labels: Dict[str, int], n: int) -> "MarkedSubgraph":
        return MarkedSubgraph(frozenset(edges), tuple(sorted(labels.items())), n)

    @property
    def label_map(self) -> Dict[str, int]:
        return dict(self.labels)

    @property
    def key(self) -> str:
        faces = ",".join(f"{face}:{label}" for face, label in self.labels)
        return f"{','.join(sorted(self.edges))}|{faces}|{self.n}"

    @staticmethod
    def parse(text: str) -> "MarkedSubgraph":
        """key の文字列表現から復元します"""
        try:
            edge_part, face_part, n_part = text.strip().split("|")
            labels = {}
            for item in filter(None, face_part.split(",")):
                face, label = item.rsplit(":", 1)
                labels[face] = int(label)
            return MarkedSubgraph.make(filter(None, edge_part.split(",")), labels, int(n_part))
        except ValueError as e:
            raise FormatError(f"marked subgraph の形式が不正です: '{text}' ({e})")

    def __str__(self) -> str:
        return self.key


def poset_nerve(poset: PathPoset, name: str) -> FiniteSSet:
    return nerve_of_poset(name, poset.elements, poset.le, label=str)


@lru_cache(maxsize=None)
def nerve(g: PlaneGraph) -> FiniteSSet:
    """N(G) = (PG, ≤) の神経"""
    result = poset_nerve(poset_of(g), f"N({g.name})")
    logger.debug(f"{result!r} を構成しました")
    return result


def chain_simplex(chain: Sequence[StPath]) -> Simplex:
    return ChainSimplex(tuple(chain)).to_simplex()


def chain_to_marked(g: PlaneGraph, chain: ChainSimplex) -> MarkedSubgraph:
    """
    鎖から marked subgraph を求めます。

    P = ∪ p_i とし、P の内部面 φ には cod φ ⊆ p_i となる最小の i を
    ラベルとして与えます。
    """
    carrier = chain.carrier
    sub = g.subgraph(carrier)
    labels = {}
    for face in sub.interior_faces:
        cod = set(face.cod)
        label = next((i for i, p in enumerate(chain.chain) if cod <= p.edge_set), None)
        assert label is not None and label > 0, f"面 {face.id} のラベルが決まりません ({chain})"
        labels[face.id] = label
    return MarkedSubgraph.make(carrier, labels, chain.dim)


def admissibility_problem(g: PlaneGraph, m: MarkedSubgraph) -> Optional[str]:
    """
    admissible でない理由を返します（admissible なら None）。
    """
    sub = g.globular_subgraph(m.edges)
    if sub is None:
        return "globular な部分グラフではありません"
    if sub.source != g.source or sub.target != g.target:
        return "wide ではありません"
    labels = m.label_map
    faces = {f.id: f for f in sub.interior_faces}
    if set(labels) != set(faces):
        return f"ラベル付けされた面 {sorted(labels)} が内部面 {sorted(faces)} と一致しません"
    for face_id, label in labels.items():
        if not 1 <= label <= m.n:
            return f"面 {face_id} のラベル {label} が 1..{m.n} の範囲外です"
    for a in faces.values():
        for b in faces.values():
            if set(a.cod) & set(b.dom) and not labels[a.id] < labels[b.id]:
                return f"cod {a.id} と dom {b.id} が辺を共有するのに λ({a.id}) < λ({b.id}) ではありません"
    return None


def is_admissible(g: PlaneGraph, m: MarkedSubgraph) -> bool:
    return admissibility_problem(g, m) is None


def marked_to_chain(g: PlaneGraph, m: MarkedSubgraph) -> ChainSimplex:
    """
    admissible な marked subgraph から鎖を復元します。

    dom P から始め、k = 1, …, n の順にラベル k の面について
    dom φ を cod φ に置き換えていきます。

    Raises:
        NotAdmissible: admissible でない、または置き換えが行き詰まった場合
    """
    problem = admissibility_problem(g, m)
    if problem:
        raise NotAdmissible(f"{m.key}: {problem}")
    sub = g.subgraph(m.edges)
    faces = {f.id: f for f in sub.interior_faces}
    labels = m.label_map
    path = list(sub.dom)
    chain = [StPath.of(g, path)]
    for k in range(1, m.n + 1):
        pending = sorted(face_id for face_id, label in labels.items() if label == k)
        while pending:
            for face_id in pending:
                face = faces[face_id]
                at = find_subpath(path, face.dom)
                if at >= 0:
                    path[at:at + len(face.dom)] = list(face.cod)
                    pending.remove(face_id)
                    break
            else:
                raise NotAdmissible(f"{m.key}: ラベル {k} の面 {pending} の dom が現在のパス上にありません")
        chain.append(StPath.of(g, path))
    if tuple(path) != sub.cod:
        raise NotAdmissible(f"{m.key}: 最後のパスが cod P に一致しません")
    return ChainSimplex(tuple(chain))


def act_operator(g: PlaneGraph, m: MarkedSubgraph, alpha: Operator) -> MarkedSubgraph:
    """
    単体作用素 α: [k] → [n] を marked subgraph に作用させます。

    1. λ(φ) ≤ α(0) の面の dom の辺を除く
    2. λ(φ) > α(k) の面の cod の辺を除く
    3. 残った面に λ̂(φ) = min{j : α(j) ≥ λ(φ)} を与える
    4. 上下の面が同じ λ̂ を持つ辺を除き、面を求め直す
    """
    if not is_monotone(alpha, m.n):
        raise ValueError(f"{alpha} は [{m.n}] への単調写像ではありません")
    k = len(alpha) - 1
    sub = g.subgraph(m.edges)
    faces = {f.id: f for f in sub.interior_faces}
    labels = m.label_map

    edges = set(m.edges)
    for face_id, label in labels.items():
        if label <= alpha[0]:
            edges -= set(faces[face_id].dom)
    for face_id, label in labels.items():
        if label > alpha[-1]:
            edges -= set(faces[face_id].cod)

    relabel = {
        face_id: min(j for j in range(1, k + 1) if alpha[j] >= label)
        for face_id, label in labels.items()
        if alpha[0] < label <= alpha[-1]
    }

    for e in sorted(edges):
        above, below = sub.face_above(e), sub.face_below(e)
        if above in relabel and below in relabel and relabel[above] == relabel[below]:
            edges.discard(e)

    result = g.subgraph(edges)
    new_labels = {}
    for face in result.interior_faces:
        seen = {relabel.get(sub.face_of_dart[d]) for d in face.boundary}
        assert len(seen) == 1 and None not in seen, f"面 {face.id} のラベルが一意に決まりません: {seen}"
        new_labels[face.id] = seen.pop()
    return MarkedSubgraph.make(edges, new_labels, k)


def marked_subgraphs(g: PlaneGraph, n: int) -> Iterator[MarkedSubgraph]:
    """admissible な n-marked wide subgraph をすべて列挙します"""
    for edges in sorted(g.globular_subgraphs, key=lambda es: (len(es), sorted(es))):
        sub = g.globular_subgraphs[edges]
        if sub.source != g.source or sub.target != g.target:
            continue
        face_ids = [f.id for f in sub.interior_faces]
        for choice in cartesian(range(1, n + 1), repeat=len(face_ids)):
            m = MarkedSubgraph.make(edges, dict(zip(face_ids, choice)), n)
            if is_admissible(g, m):
                yield m


def join_iso(m1: MarkedSubgraph, m2: MarkedSubgraph) -> MarkedSubgraph:
    """N(Σ₁) × N(Σ₂) → N(Σ₁ ⋈ Σ₂)：marked subgraph の join"""
    if m1.n != m2.n:
        raise ValueError(f"次元が異なる単体の join はできません: {m1.n} / {m2.n}")
    if m1.edges & m2.edges:
        raise ValueError("join する marked subgraph が辺を共有しています")
    return MarkedSubgraph.make(m1.edges | m2.edges, {**m1.label_map, **m2.label_map}, m1.n)


def join_split(g1: PlaneGraph, g2: PlaneGraph, m: MarkedSubgraph) -> Tuple[MarkedSubgraph, MarkedSubgraph]:
    """join_iso の逆写像（cut vertex での分割）"""
    first = m.edges & g1.edge_set
    second = m.edges & g2.edge_set
    assert first | second == m.edges, "辺が G₁ と G₂ に分割できません"
    sub1 = g1.subgraph(first)
    face1 = {f.id for f in sub1.interior_faces}
    labels = m.label_map
    return (
        MarkedSubgraph.make(first, {f: l for f, l in labels.items() if f in face1}, m.n),
        MarkedSubgraph.make(second, {f: l for f, l in labels.items() if f not in face1}, m.n),
    )


def join_chains(c1: ChainSimplex, c2: ChainSimplex) -> ChainSimplex:
    """鎖の各成分を連結した鎖 (p_i・q_i)"""
    if c1.dim != c2.dim:
        raise ValueError("次元が異なる鎖は連結できません")
    return ChainSimplex(tuple(p.then(q) for p, q in zip(c1.chain, c2.chain)))


def sset_product(a: FiniteSSet, b: FiniteSSet) -> FiniteSSet:
    return product(a, b)


def sset_iso(a: FiniteSSet, b: FiniteSSet) -> Optional[Dict]:
    return find_isomorphism(a, b)
