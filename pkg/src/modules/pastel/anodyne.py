#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
N(Σ) → N(Π) の内側 anodyne 性の証明書を作成・検証するモジュール

証明書は、内側ホーン Λⁿᵢ (0 < i < n) の押し出しを一段ずつ並べた
フィルトレーションです。2-連結なグラフでは G₀/G₁/G₂ への分割と
fillable な単体の順序 (n 昇順, c 降順) で明示的な段を作り、それ以外の
段は探索で補います。
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from src.utils.environment import EnvironmentUtils as env
from src.utils.logging_config import get_logger
from src.modules.pastel.errors import HypothesisViolated, NotTwoConnected, SearchExhausted, TooFewFaces
from src.modules.pastel.nerve_calc import ChainSimplex, chain_to_marked
from src.modules.pastel.paths_poset import find_subpath, poset_of
from src.modules.pastel.pasting import PastingDiagram, nerve_pd, restrict
from src.modules.pastel.plane_graph import EdgeSet, Face, Glob, PlaneGraph, is_two_connected
from src.modules.pastel.simplicial import FiniteSSet

logger = get_logger(__name__)

Move = Tuple[Hashable, int]


# --- G₀ / G₁ / G₂ ---

@dataclass(frozen=True)
class GraphSplit:
    """2-連結なグラフの分割 (φ, G₀, G₁, G₂)"""

    graph: PlaneGraph
    face: Face
    g0: EdgeSet
    g1: EdgeSet
    g2: EdgeSet

    @property
    def g1_faces(self) -> FrozenSet[str]:
        return self.graph.enclosed_faces(self.g1)


def split_graph(g: PlaneGraph) -> GraphSplit:
    """
    dom φ ⊆ dom G となる最初の内部面 φ で G を分割します。

    G₁ は dom φ か cod φ を部分パスに含む st-path の和、G₂ は dom φ と辺を
    共有しない st-path の和、G₀ = G₁ ∩ G₂ です。

    Raises:
        NotTwoConnected: g が 2-連結でない場合
        TooFewFaces: 内部面が 2 つ未満の場合
    """
    if not is_two_connected(g):
        raise NotTwoConnected(f"{g.name} は 2-連結ではありません", subject=g.name)
    if len(g.interior_faces) < 2:
        raise TooFewFaces(f"{g.name} の内部面は {len(g.interior_faces)} 個です", subject=g.name)
    dom_g = set(g.dom)
    face = next(f for f in g.interior_faces if set(f.dom) <= dom_g)
    paths = poset_of(g).elements
    g1 = frozenset(e for p in paths if find_subpath(p.edges, face.dom) >= 0 or find_subpath(p.edges, face.cod) >= 0 for e in p.edges)
    g2 = frozenset(e for p in paths if not set(p.edges) & set(face.dom) for e in p.edges)
    g0 = g1 & g2
    for name, part in (("G0", g0), ("G1", g1), ("G2", g2)):
        assert g.is_globular_subgraph(part), f"{g.name}: {name} = {sorted(part)} が globular ではありません"
        assert len(part) < len(g.edges), f"{g.name}: {name} の辺が減っていません"
    logger.debug(f"{g.name}: φ = {face.id}, G1 = {sorted(g1)}, G2 = {sorted(g2)}")
    return GraphSplit(g, face, g0, g1, g2)


# --- fillable な単体 ---

@dataclass(frozen=True)
class FillableInfo:
    """単体の最小の証拠 γ₁..γ_n と c(σ)"""

    simplex: Tuple
    witnesses: Tuple[Glob, ...]
    c: int
    fillable: bool

    @property
    def dim(self) -> int:
        return len(self.simplex) - 1


def classify_fillable(split: GraphSplit, chain: Sequence) -> FillableInfo:
    """
    c(σ) と fillable かどうかを求めます。

    c(σ) は γ_c ⊄ G₁ となる最小の c（なければ n+1）で、c = n+1 または
    γ_c の囲む領域が G₁ の内部と交わらないとき fillable です。
    """
    chain = tuple(chain)
    poset = poset_of(split.graph)
    witnesses = tuple(poset.witness(p, q) for p, q in zip(chain, chain[1:]))
    n = len(chain) - 1
    c = next((k + 1 for k, w in enumerate(witnesses) if not w.carrier <= split.g1), n + 1)
    if c == n + 1:
        fillable = True
    else:
        fillable = not (split.graph.enclosed_faces(witnesses[c - 1].carrier) & split.g1_faces)
    return FillableInfo(chain, witnesses, c, fillable)


def colim_keys(split: GraphSplit, pi: PastingDiagram) -> FrozenSet:
    """colim N(Π_•) = N(Π₁) ∪ N(Π₂) の単体のキー"""
    return nerve_pd(restrict(pi, split.g1)).keyset | nerve_pd(restrict(pi, split.g2)).keyset


def fillable_simplices(split: GraphSplit, ambient: FiniteSSet) -> List[FillableInfo]:
    """ambient の非退化な fillable 単体（次元・キー順）"""
    found = []
    for n in range(ambient.dimension + 1):
        for key in ambient.nondegenerate(n):
            info = classify_fillable(split, key)
            if info.fillable:
                found.append(info)
    return found


def fillable_violations(split: GraphSplit, pi: PastingDiagram, max_dim: int = 4) -> List[str]:
    """
    fillable な単体の面に関する性質を max_dim 次元まで検査します。

    (a) i ∉ {c−1, c} の d_iσ は fillable
    (b) d_{c−1}σ は fillable でなく、c(τ) ≥ c で d_{c−1}σ を面に持つ
        fillable な τ ≠ σ は存在しない
    (c) d_cσ が fillable でなければ c(τ) > c で d_cσ を面に持つ
        fillable な τ が存在する
    さらに colim に含まれない fillable σ は 2 ≤ c ≤ n を満たし、
    すべての単体は fillable であるか fillable な単体の内側の面です。
    """
    ambient = nerve_pd(pi)
    colim = colim_keys(split, pi)
    top = min(max_dim, ambient.dimension)
    info = {key: classify_fillable(split, key) for n in range(top + 1) for key in ambient.nondegenerate(n)}
    problems = []

    def faces(key) -> List[Hashable]:
        return [f.key for f in ambient.face_table(key)]

    by_face: Dict[Hashable, List[Hashable]] = {}
    for key in info:
        if len(key) > 1:
            for f in faces(key):
                by_face.setdefault(f, []).append(key)

    for key, x in info.items():
        if not x.fillable:
            continue
        n, c = x.dim, x.c
        if key not in colim and not 2 <= c <= n:
            problems.append(f"{key}: colim の外の fillable 単体で c = {c} です")
        if not 2 <= c <= n:
            continue
        for i, f in enumerate(faces(key)):
            if i not in (c - 1, c) and not info[f].fillable:
                problems.append(f"(a) d{i} が fillable ではありません: {key}")
        missing = faces(key)[c - 1]
        if info[missing].fillable:
            problems.append(f"(b) d{c - 1} が fillable です: {key}")
        for other in by_face.get(missing, []):
            if other != key and info[other].fillable and info[other].c >= c:
                problems.append(f"(b) d{c - 1} を面に持つ別の fillable 単体があります: {key} / {other}")
        next_face = faces(key)[c]
        if not info[next_face].fillable:
            if not any(info[t].fillable and info[t].c > c for t in by_face.get(next_face, []) if t in info):
                problems.append(f"(c) d{c} を面に持つ c > {c} の fillable 単体がありません: {key}")

    for key, x in info.items():
        if x.fillable or x.dim >= top:
            continue
        inner = any(
            info[t].fillable and 0 < faces(t).index(key) < info[t].dim
            for t in by_face.get(key, [])
            if t in info
        )
        if not inner:
            problems.append(f"{key} は fillable な単体の内側の面ではありません")
    return problems


# --- 証明書 ---

@dataclass(frozen=True)
class CertificateStep:
    """n 次元の filler と内側ホーンの添字"""

    dim: int
    horn: int
    filler: Hashable


@dataclass
class AnodyneCertificate:
    """base から ambient への内側ホーン押し出しの列"""

    base: FiniteSSet
    ambient: FiniteSSet
    steps: List[CertificateStep] = field(default_factory=list)
    graph: Optional[PlaneGraph] = None
    sigma: Optional[PastingDiagram] = None
    pi: Optional[PastingDiagram] = None

    def filler_text(self, step: CertificateStep) -> str:
        """filler を marked subgraph のキーで表します"""
        if self.graph is None:
            return self.ambient.label(step.filler)
        return chain_to_marked(self.graph, ChainSimplex(tuple(step.filler))).key


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failed_step: Optional[int] = None
    violation: Optional[str] = None
    reason: str = ""


def is_valid_move(ambient: FiniteSSet, current: Set[Hashable], key: Hashable, i: int) -> bool:
    """key を Λⁿᵢ の filler として current に加えられるかどうか"""
    if key in current or key not in ambient:
        return False
    n = ambient.dim_of(key)
    if not 0 < i < n:
        return False
    faces = ambient.face_table(key)
    missing = faces[i]
    if missing.is_degenerate or missing.key in current:
        return False
    return all(f.key in current for j, f in enumerate(faces) if j != i)


def _apply(ambient: FiniteSSet, current: FrozenSet, move: Move) -> FrozenSet:
    key, i = move
    return current | {key, ambient.face_table(key)[i].key}


def certificate_between(
    ambient: FiniteSSet,
    base: Iterable[Hashable],
    target: Optional[Iterable[Hashable]] = None,
    seeds: Sequence[Move] = (),
    max_states: Optional[int] = None,
) -> List[CertificateStep]:
    """
    base から target（省略時は ambient 全体）への証明書の段を探索します。

    まず seeds を有効な順に適用し、残りを深さ優先探索で埋めます。
    行き詰まった状態は記録して再訪しません。

    Raises:
        SearchExhausted: 探索が失敗した、または状態数の上限に達した場合
    """
    start = frozenset(base)
    goal = frozenset(target) if target is not None else ambient.keyset
    if not start <= goal:
        raise SearchExhausted("base が target に含まれていません", stuck=sorted(map(ambient.label, start - goal)))
    limit = max_states if max_states is not None else env.get_anodyne_max_states()

    greedy, current = [], start
    pending = list(seeds)
    progress = True
    while pending and progress:
        progress = False
        for move in list(pending):
            if move[0] in goal and is_valid_move(ambient, current, *move):
                greedy.append(move)
                current = _apply(ambient, current, move)
                pending.remove(move)
                progress = True

    candidates = sorted(goal, key=lambda k: (ambient.dim_of(k), ambient.label(k)))
    dead: Set[FrozenSet] = set()
    visited = [0]

    def search(state: FrozenSet) -> Optional[List[Move]]:
        if state == goal:
            return []
        if state in dead:
            return None
        visited[0] += 1
        if visited[0] > limit:
            raise SearchExhausted(f"状態数の上限 {limit} に達しました", stuck=sorted(map(ambient.label, goal - state)))
        for key in candidates:
            if key in state:
                continue
            for i in range(1, ambient.dim_of(key)):
                if not is_valid_move(ambient, state, key, i):
                    continue
                missing = ambient.face_table(key)[i].key
                if missing not in goal:
                    continue
                rest = search(_apply(ambient, state, (key, i)))
                if rest is not None:
                    return [(key, i)] + rest
        dead.add(state)
        return None

    tail = search(current)
    moves = greedy + tail if tail is not None else None
    if moves is None and greedy:
        logger.warning("seed を使った探索が失敗したため、seed なしで探索し直します")
        dead.clear()
        moves = search(start)
    if moves is None:
        raise SearchExhausted("内側ホーンの押し出しで target に到達できません", stuck=sorted(map(ambient.label, goal - start)))
    logger.debug(f"証明書の段 {len(moves)} 個（探索した状態 {visited[0]} 個）")
    return [CertificateStep(ambient.dim_of(key), i, key) for key, i in moves]


def check_hypotheses(sigma: PastingDiagram, pi: PastingDiagram) -> None:
    """
    Raises:
        HypothesisViolated: Σ ⊆ Π、complete、subdivision で閉じていること、
            内部面をすべて含むことのいずれかが成り立たない場合
    """
    if sigma.graph.edge_set != pi.graph.edge_set:
        raise HypothesisViolated(f"{sigma.name} と {pi.name} のグラフが異なります")
    if not sigma.members <= pi.members:
        raise HypothesisViolated(f"{sigma.name} ⊄ {pi.name}")
    faces = [f.edges for f in sigma.graph.interior_faces]
    for d in (sigma, pi):
        if not d.is_complete:
            raise HypothesisViolated(f"{d.name} は complete ではありません")
        if not d.is_subdivision_closed:
            raise HypothesisViolated(f"{d.name} は subdivision で閉じていません")
        missing = [sorted(f) for f in faces if f not in d]
        if missing:
            raise HypothesisViolated(f"{d.name} は内部面 {missing[0]} を含みません")


def _fillable_moves(split: GraphSplit, ambient: FiniteSSet, skip: FrozenSet) -> List[Move]:
    """Y_{n,c} の順（n 昇順, c 降順, キー順）に並べた (σ, c−1)"""
    moves = []
    for x in fillable_simplices(split, ambient):
        if x.simplex not in skip and 2 <= x.c <= x.dim:
            marked = chain_to_marked(split.graph, ChainSimplex(x.simplex)).key
            moves.append(((x.dim, -x.c, marked), (x.simplex, x.c - 1)))
    return [move for _, move in sorted(moves, key=lambda item: item[0])]


def _seed_moves(sigma: PastingDiagram, pi: PastingDiagram, ambient: FiniteSSet, depth: int = 0) -> List[Move]:
    g = sigma.graph
    if sigma.members == pi.members or not is_two_connected(g) or len(g.interior_faces) < 2:
        return []
    split = split_graph(g)
    seeds = []
    for part in (split.g1, split.g2):
        sub_sigma, sub_pi = restrict(sigma, part), restrict(pi, part)
        sub_ambient = nerve_pd(sub_pi)
        seeds.extend(_seed_moves(sub_sigma, sub_pi, sub_ambient, depth + 1))
    x0 = nerve_pd(sigma).keyset | colim_keys(split, pi)
    seeds.extend(_fillable_moves(split, ambient, x0))
    logger.debug(f"{'  ' * depth}{g.name}: seed {len(seeds)} 個")
    return seeds


def build_certificate(sigma: PastingDiagram, pi: PastingDiagram, max_states: Optional[int] = None) -> AnodyneCertificate:
    """
    N(Σ) → N(Π) の証明書を作ります。

    2-連結で内部面が2つ以上なら、G₁・G₂ への制限から再帰的に得た段と
    fillable な単体の段を seed とし、残りを探索で補います。

    Raises:
        HypothesisViolated: 前提条件が満たされない場合
        SearchExhausted: 証明書が見つからない場合
    """
    check_hypotheses(sigma, pi)
    base, ambient = nerve_pd(sigma), nerve_pd(pi)
    seeds = _seed_moves(sigma, pi, ambient)
    steps = certificate_between(ambient, base.keyset, seeds=seeds, max_states=max_states)
    logger.info(f"=== 証明書 {sigma.name} → {pi.name}: {len(steps)} 段 ===")
    return AnodyneCertificate(base, ambient, steps, graph=sigma.graph, sigma=sigma, pi=pi)


def validate_certificate(cert: AnodyneCertificate) -> ValidationReport:
    """
    証明書を先頭から再生して検証します。

    各段で 0 < i < n、filler が ambient の n-単体であること、filler と
    d_i filler が未追加であること、それ以外の面が追加済みであることを
    確かめ、最後に ambient 全体に到達したことを確認します。
    """
    ambient = cert.ambient
    current = set(cert.base.keyset)
    for k, step in enumerate(cert.steps, start=1):
        n, i, key = step.dim, step.horn, step.filler
        if not 0 < i < n:
            return ValidationReport(False, k, "InnerIndexViolation", f"ホーンの添字 {i} が 0 < i < {n} を満たしません")
        if key not in ambient or ambient.dim_of(key) != n:
            return ValidationReport(False, k, "ShapeViolation", f"filler が ambient の {n}-単体ではありません")
        faces = ambient.face_table(key)
        if key in current:
            return ValidationReport(False, k, "NoveltyViolation", "filler は既に追加されています")
        if faces[i].is_degenerate or faces[i].key in current:
            return ValidationReport(False, k, "NoveltyViolation", f"d{i} filler は既に追加されているか退化しています")
        absent = [j for j, f in enumerate(faces) if j != i and f.key not in current]
        if absent:
            return ValidationReport(False, k, "HornViolation", f"面 d{absent[0]} がまだ追加されていません")
        current.update({key, faces[i].key})
    if current != set(ambient.keyset):
        return ValidationReport(False, None, "CoverageViolation", f"{len(set(ambient.keyset) - current)} 個の単体が残っています")
    return ValidationReport(True)
