#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
有限単体的集合を扱うモジュール

単体は Eilenberg–Zilber 正規形 (非退化単体のキー, η) で表します。
η は全射な単調写像 [m] → [n] をタプルで表したもので、m 次元の単体
x・η を意味します。単体作用素 α: [k] → [m] も同様にタプルで表し、
apply(x, α) が x・α を返します。
"""

from dataclasses import dataclass
from itertools import combinations, product as cartesian
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from src.utils.logging_config import get_logger

logger = get_logger(__name__)

Operator = Tuple[int, ...]


@dataclass(frozen=True)
class Simplex:
    """非退化単体のキーと全射 η の組"""

    key: Hashable
    eta: Operator

    @property
    def dim(self) -> int:
        return len(self.eta) - 1

    @property
    def is_degenerate(self) -> bool:
        return len(set(self.eta)) < len(self.eta)

    @property
    def degeneracy_word(self) -> Tuple[int, ...]:
        return degeneracy_word(self.eta)


# --- 単体作用素 ---

def identity_operator(n: int) -> Operator:
    return tuple(range(n + 1))


def face_operator(n: int, i: int) -> Operator:
    """δ^i: [n-1] → [n]（i を飛ばす）"""
    return tuple(k for k in range(n + 1) if k != i)


def degeneracy_operator(n: int, i: int) -> Operator:
    """σ^i: [n+1] → [n]（i を2回通る）"""
    return tuple(range(i + 1)) + tuple(range(i, n + 1))


def compose(alpha: Operator, beta: Operator) -> Operator:
    """α∘β。x・(α∘β) = (x・α)・β となります"""
    return tuple(alpha[b] for b in beta)


def is_monotone(alpha: Sequence[int], target_dim: int) -> bool:
    return all(0 <= a <= target_dim for a in alpha) and all(a <= b for a, b in zip(alpha, alpha[1:]))


def monotone_maps(source_dim: int, target_dim: int) -> Iterator[Operator]:
    """単調写像 [source_dim] → [target_dim] をすべて列挙します"""
    def extend(prefix: List[int]) -> Iterator[Operator]:
        if len(prefix) == source_dim + 1:
            yield tuple(prefix)
            return
        start = prefix[-1] if prefix else 0
        for value in range(start, target_dim + 1):
            yield from extend(prefix + [value])

    yield from extend([])


def surjections(source_dim: int, target_dim: int) -> Iterator[Operator]:
    """全射な単調写像 [source_dim] → [target_dim]"""
    for jumps in combinations(range(1, source_dim + 1), target_dim):
        eta, value = [0], 0
        jump_set = set(jumps)
        for j in range(1, source_dim + 1):
            if j in jump_set:
                value += 1
            eta.append(value)
        yield tuple(eta)


def degeneracy_word(eta: Operator) -> Tuple[int, ...]:
    """全射 η を、添字が狭義単調減少する s_i の列に変換します"""
    return tuple(sorted((j for j in range(len(eta) - 1) if eta[j] == eta[j + 1]), reverse=True))


def eta_from_word(word: Sequence[int], base_dim: int) -> Operator:
    """degeneracy_word の逆変換"""
    eta = identity_operator(base_dim)
    for i in sorted(word):
        eta = compose(eta, degeneracy_operator(len(eta) - 1, i))
    return eta


def epi_mono(gamma: Operator) -> Tuple[Operator, Operator]:
    """γ = mono∘epi の分解。(mono, epi) を返します"""
    image = sorted(set(gamma))
    position = {v: k for k, v in enumerate(image)}
    return tuple(image), tuple(position[g] for g in gamma)


# --- 有限単体的集合 ---

class FiniteSSet:
    """
    非退化単体と面写像の表で与えられる有限単体的集合

    Args:
        name (str): 名前
        faces (Mapping): 非退化単体のキー → (d_0 x, …, d_n x)。0-単体は空タプル
        label (Callable): キーの文字列表現（出力と並び順に使用）
        stored_dim (Optional[int]): 切り詰めた次元。None なら切り詰めなし
    """

    def __init__(
        self,
        name: str,
        faces: Mapping[Hashable, Sequence[Simplex]],
        dims: Mapping[Hashable, int],
        label: Callable[[Hashable], str] = str,
        stored_dim: Optional[int] = None,
    ):
        self.name = name
        self.label = label
        self.stored_dim = stored_dim
        self._faces: Dict[Hashable, Tuple[Simplex, ...]] = {k: tuple(v) for k, v in faces.items()}
        self._dims: Dict[Hashable, int] = dict(dims)
        self._by_dim: Dict[int, List[Hashable]] = {}
        for key, n in self._dims.items():
            self._by_dim.setdefault(n, []).append(key)
        for n in self._by_dim:
            self._by_dim[n].sort(key=label)
        self._mono_cache: Dict[Tuple[Hashable, Operator], Simplex] = {}

    def __repr__(self) -> str:
        counts = ", ".join(str(self.count(n)) for n in range(self.dimension + 1))
        return f"FiniteSSet({self.name}: [{counts}])"

    # --- 基本情報 ---

    @property
    def dimension(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def nondegenerate(self, n: int) -> List[Hashable]:
        return list(self._by_dim.get(n, []))

    def count(self, n: int) -> int:
        return len(self._by_dim.get(n, []))

    def counts(self) -> Tuple[int, ...]:
        return tuple(self.count(n) for n in range(self.dimension + 1))

    @property
    def keyset(self) -> frozenset:
        return frozenset(self._dims)

    def dim_of(self, key: Hashable) -> int:
        return self._dims[key]

    def __contains__(self, item: Any) -> bool:
        if isinstance(item, Simplex):
            return item.key in self._dims
        return item in self._dims

    def simplex(self, key: Hashable) -> Simplex:
        return Simplex(key, identity_operator(self._dims[key]))

    def simplices(self, n: int) -> Iterator[Simplex]:
        """n 次元の単体（退化したものを含む）をすべて列挙します"""
        for k in range(min(n, self.dimension) + 1):
            for key in self._by_dim.get(k, []):
                for eta in surjections(n, k):
                    yield Simplex(key, eta)

    # --- 作用 ---

    def face_table(self, key: Hashable) -> Tuple[Simplex, ...]:
        return self._faces[key]

    def apply(self, x: Simplex, alpha: Operator) -> Simplex:
        """x・α を Eilenberg–Zilber 正規形で返します"""
        if len(alpha) == 0 or not is_monotone(alpha, x.dim):
            raise ValueError(f"{alpha} は [{x.dim}] への単調写像ではありません")
        gamma = compose(x.eta, alpha)
        mono, epi = epi_mono(gamma)
        y = self._restrict_mono(x.key, mono)
        return Simplex(y.key, compose(y.eta, epi))

    def _restrict_mono(self, key: Hashable, mono: Operator) -> Simplex:
        n = self._dims[key]
        if len(mono) == n + 1:
            return Simplex(key, identity_operator(n))
        cached = self._mono_cache.get((key, mono))
        if cached is not None:
            return cached
        missing = next(i for i in range(n + 1) if i not in mono)
        shifted = tuple(v - 1 if v > missing else v for v in mono)
        result = self.apply(self._faces[key][missing], shifted)
        self._mono_cache[(key, mono)] = result
        return result

    def face(self, x: Simplex, i: int) -> Simplex:
        return self.apply(x, face_operator(x.dim, i))

    def degeneracy(self, x: Simplex, i: int) -> Simplex:
        return self.apply(x, degeneracy_operator(x.dim, i))

    def vertices_of(self, x: Simplex) -> Tuple[Hashable, ...]:
        return tuple(self.apply(x, (j,)).key for j in range(x.dim + 1))

    # --- 部分集合 ---

    def closure(self, keys: Iterable[Hashable]) -> frozenset:
        """キー集合を面で閉じた集合"""
        result = set()
        stack = list(keys)
        while stack:
            key = stack.pop()
            if key in result:
                continue
            result.add(key)
            stack.extend(face.key for face in self._faces[key])
        return frozenset(result)

    def is_closed(self, keys: Iterable[Hashable]) -> bool:
        keys = set(keys)
        return all(face.key in keys for key in keys for face in self._faces[key])

    def subset(self, keys: Iterable[Hashable], name: Optional[str] = None) -> "FiniteSSet":
        """
        単体的部分集合

        Raises:
            ValueError: keys が面で閉じていない場合
        """
        keys = frozenset(keys)
        if not self.is_closed(keys):
            raise ValueError(f"{name or self.name}: 部分集合が面で閉じていません")
        return FiniteSSet(
            name or f"{self.name}'",
            {k: self._faces[k] for k in keys},
            {k: self._dims[k] for k in keys},
            label=self.label,
            stored_dim=self.stored_dim,
        )

    # --- 検証・出力 ---

    def check_identities(self, max_dim: Optional[int] = None) -> List[str]:
        """
        面作用素の単体的恒等式 d_i d_j = d_{j-1} d_i (i < j) を検査します。

        Returns:
            List[str]: 違反の一覧（空なら成立）
        """
        top = self.dimension if max_dim is None else min(max_dim, self.dimension)
        violations = []
        for n in range(2, top + 1):
            for key in self._by_dim.get(n, []):
                x = self.simplex(key)
                for j in range(n + 1):
                    for i in range(j):
                        left = self.face(self.face(x, j), i)
                        right = self.face(self.face(x, i), j - 1)
                        if left != right:
                            violations.append(f"{self.label(key)}: d{i}d{j} != d{j - 1}d{i}")
        return violations

    def simplex_text(self, x: Simplex) -> str:
        word = x.degeneracy_word
        suffix = "|" + "".join(f"s{i}" for i in word) if word else ""
        return f"{self.label(x.key)}{suffix}"

    def to_dict(self) -> Dict[str, Any]:
        """キー順の安定した辞書形式で出力します"""
        simplices = {}
        for n in range(self.dimension + 1):
            simplices[str(n)] = [
                {"id": self.label(key), "faces": [self.simplex_text(f) for f in self._faces[key]]}
                for key in self._by_dim.get(n, [])
            ]
        return {"name": self.name, "dimension": self.dimension, "stored_dim": self.stored_dim, "simplices": simplices}


# --- 構成 ---

def standard_simplex(n: int) -> FiniteSSet:
    """Δ^n。非退化単体は [n] の空でない部分集合です"""
    faces, dims = {}, {}
    for k in range(n + 1):
        for subset in combinations(range(n + 1), k + 1):
            dims[subset] = k
            faces[subset] = tuple(
                Simplex(subset[:i] + subset[i + 1:], identity_operator(k - 1)) for i in range(k + 1)
            ) if k > 0 else ()
    return FiniteSSet(f"Δ{n}", faces, dims, label=lambda s: "".join(str(v) for v in s))


def nerve_of_poset(
    name: str,
    elements: Sequence[Hashable],
    le: Callable[[Hashable, Hashable], bool],
    label: Callable[[Hashable], str] = str,
) -> FiniteSSet:
    """
    有限半順序集合の神経を返します。

    非退化単体のキーは狭義の鎖 (a_0 < … < a_n) のタプルです。
    """
    elements = list(elements)
    faces: Dict[Hashable, Tuple[Simplex, ...]] = {}
    dims: Dict[Hashable, int] = {}
    frontier = [(a,) for a in elements]
    n = 0
    while frontier:
        next_frontier = []
        for chain in frontier:
            dims[chain] = n
            faces[chain] = tuple(
                Simplex(chain[:i] + chain[i + 1:], identity_operator(n - 1)) for i in range(n + 1)
            ) if n > 0 else ()
            for b in elements:
                if b != chain[-1] and le(chain[-1], b):
                    next_frontier.append(chain + (b,))
        frontier = next_frontier
        n += 1
    chain_label = lambda chain: "<".join(label(a) for a in chain)
    return FiniteSSet(name, faces, dims, label=chain_label)


@dataclass
class FiniteCategory:
    """
    有限圏（射のIDと合成表）

    compose_table[(f, g)] は「f の後に g」の合成です。
    """

    name: str
    objects: Tuple[Hashable, ...]
    morphisms: Dict[Hashable, Tuple[Hashable, Hashable]]
    identities: Dict[Hashable, Hashable]
    compose_table: Dict[Tuple[Hashable, Hashable], Hashable]

    def is_identity(self, f: Hashable) -> bool:
        return self.identities.get(self.morphisms[f][0]) == f

    def then(self, f: Hashable, g: Hashable) -> Hashable:
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return self.compose_table[(f, g)]

    def out_of(self, x: Hashable) -> List[Hashable]:
        return sorted((f for f, (a, _) in self.morphisms.items() if a == x and not self.is_identity(f)), key=str)

    def check(self) -> List[str]:
        """結合律と合成表の型の整合性を検査します"""
        problems = []
        for (f, g), h in self.compose_table.items():
            if self.morphisms[f][1] != self.morphisms[g][0]:
                problems.append(f"{f};{g}: 合成不能な組に値があります")
            elif self.morphisms[h] != (self.morphisms[f][0], self.morphisms[g][1]):
                problems.append(f"{f};{g}={h}: 型が一致しません")
        arrows = [f for f in self.morphisms if not self.is_identity(f)]
        for f in arrows:
            for g in arrows:
                if self.morphisms[f][1] != self.morphisms[g][0]:
                    continue
                for h in arrows:
                    if self.morphisms[g][1] != self.morphisms[h][0]:
                        continue
                    if self.then(self.then(f, g), h) != self.then(f, self.then(g, h)):
                        problems.append(f"({f};{g});{h} != {f};({g};{h})")
        return problems

    @staticmethod
    def from_poset(name: str, elements: Sequence[Hashable], le: Callable[[Hashable, Hashable], bool]) -> "FiniteCategory":
        morphisms, identities, table = {}, {}, {}
        for a in elements:
            for b in elements:
                if le(a, b):
                    morphisms[(a, b)] = (a, b)
            identities[a] = (a, a)
        for (a, b) in morphisms:
            for (c, d) in morphisms:
                if b == c:
                    table[((a, b), (c, d))] = (a, d)
        return FiniteCategory(name, tuple(elements), morphisms, identities, table)


def category_simplex(cat: FiniteCategory, start: Hashable, arrows: Sequence[Hashable]) -> Simplex:
    """合成可能な射の列（恒等射を含んでよい）を正規形の単体に変換します"""
    kept, eta, count = [], [0], 0
    for f in arrows:
        if not cat.is_identity(f):
            kept.append(f)
            count += 1
        eta.append(count)
    return Simplex((start,) + tuple(kept), tuple(eta))


def nerve_of_category(cat: FiniteCategory, max_dim: int, label: Callable[[Hashable], str] = str) -> FiniteSSet:
    """
    有限圏の神経を max_dim 次元まで切り詰めて返します。

    非退化単体のキーは (x_0, f_1, …, f_n)（f_i は恒等射でない射）です。
    """
    faces: Dict[Hashable, Tuple[Simplex, ...]] = {}
    dims: Dict[Hashable, int] = {}
    frontier = [(x,) for x in cat.objects]
    for n in range(max_dim + 1):
        next_frontier = []
        for key in frontier:
            dims[key] = n
            start, arrows = key[0], key[1:]
            if n == 0:
                faces[key] = ()
            else:
                table = [category_simplex(cat, cat.morphisms[arrows[0]][1], arrows[1:])]
                for i in range(1, n):
                    merged = arrows[:i - 1] + (cat.then(arrows[i - 1], arrows[i]),) + arrows[i + 1:]
                    table.append(category_simplex(cat, start, merged))
                table.append(category_simplex(cat, start, arrows[:-1]))
                faces[key] = tuple(table)
            end = cat.morphisms[arrows[-1]][1] if arrows else start
            for f in cat.out_of(end):
                next_frontier.append(key + (f,))
        frontier = next_frontier

    def key_label(key):
        return label(key[0]) if len(key) == 1 else ";".join(label(f) for f in key[1:])

    return FiniteSSet(f"N({cat.name})", faces, dims, label=key_label, stored_dim=max_dim)


def _normalize_pair(x: Simplex, y: Simplex) -> Simplex:
    points = list(zip(x.eta, y.eta))
    kept = [j for j in range(len(points)) if j == 0 or points[j] != points[j - 1]]
    eta, run = [], -1
    for j in range(len(points)):
        if j in kept:
            run += 1
        eta.append(run)
    key = (Simplex(x.key, tuple(x.eta[j] for j in kept)), Simplex(y.key, tuple(y.eta[j] for j in kept)))
    return Simplex(key, tuple(eta))


def product(a: FiniteSSet, b: FiniteSSet, name: Optional[str] = None) -> FiniteSSet:
    """
    直積 a × b を返します。

    非退化単体は、共通の退化を持たない同次元の単体の組 (x, y) です。
    """
    top = a.dimension + b.dimension
    if a.stored_dim is not None or b.stored_dim is not None:
        bounds = [d for d in (a.stored_dim, b.stored_dim) if d is not None]
        top = min([top] + bounds)
    faces: Dict[Hashable, Tuple[Simplex, ...]] = {}
    dims: Dict[Hashable, int] = {}
    for m in range(top + 1):
        for x, y in cartesian(list(a.simplices(m)), list(b.simplices(m))):
            joint = any(x.eta[j] == x.eta[j + 1] and y.eta[j] == y.eta[j + 1] for j in range(m))
            if joint:
                continue
            key = (x, y)
            dims[key] = m
            faces[key] = tuple(_normalize_pair(a.face(x, i), b.face(y, i)) for i in range(m + 1)) if m > 0 else ()

    def pair_label(key):
        return f"({a.simplex_text(key[0])},{b.simplex_text(key[1])})"

    stored = None if a.stored_dim is None and b.stored_dim is None else top
    return FiniteSSet(name or f"{a.name}×{b.name}", faces, dims, label=pair_label, stored_dim=stored)


def horn(n: int, i: int) -> FiniteSSet:
    """Λ^n_i ⊂ Δ^n"""
    delta = standard_simplex(n)
    top = tuple(range(n + 1))
    missing = top[:i] + top[i + 1:]
    return delta.subset((k for k in delta.keyset if k not in (top, missing)), name=f"Λ{n},{i}")


def boundary(n: int) -> FiniteSSet:
    delta = standard_simplex(n)
    top = tuple(range(n + 1))
    return delta.subset((k for k in delta.keyset if k != top), name=f"∂Δ{n}")


# --- 写像 ---

def map_simplex(target: FiniteSSet, mapping: Mapping[Hashable, Simplex], x: Simplex) -> Simplex:
    """非退化単体上の値から写像を x に延長します"""
    return target.apply(mapping[x.key], x.eta)


def is_simplicial_map(source: FiniteSSet, target: FiniteSSet, mapping: Mapping[Hashable, Simplex]) -> bool:
    for key in source.keyset:
        value = mapping.get(key)
        if value is None or value.dim != source.dim_of(key):
            return False
        for i, face in enumerate(source.face_table(key)):
            if target.face(value, i) != map_simplex(target, mapping, face):
                return False
    return True


def simplicial_maps(
    source: FiniteSSet,
    target: FiniteSSet,
    fixed: Optional[Mapping[Hashable, Simplex]] = None,
) -> Iterator[Dict[Hashable, Simplex]]:
    """
    source から target への単体的写像をすべて列挙します。

    非退化単体を次元の低い順に割り当て、面の整合しない候補を枝刈りする
    バックトラックです。fixed で一部の値を固定できます。
    """
    fixed = dict(fixed or {})
    order = [key for n in range(source.dimension + 1) for key in source.nondegenerate(n)]
    by_faces: Dict[int, Dict[Tuple[Simplex, ...], List[Simplex]]] = {}
    for n in range(source.dimension + 1):
        table: Dict[Tuple[Simplex, ...], List[Simplex]] = {}
        for y in target.simplices(n):
            faces = tuple(target.face(y, i) for i in range(n + 1)) if n > 0 else ()
            table.setdefault(faces, []).append(y)
        by_faces[n] = table

    def assign(k: int, mapping: Dict[Hashable, Simplex]) -> Iterator[Dict[Hashable, Simplex]]:
        if k == len(order):
            yield dict(mapping)
            return
        key = order[k]
        n = source.dim_of(key)
        wanted = tuple(map_simplex(target, mapping, f) for f in source.face_table(key)) if n > 0 else ()
        candidates = by_faces[n].get(wanted, [])
        if key in fixed:
            candidates = [c for c in candidates if c == fixed[key]]
        for value in candidates:
            mapping[key] = value
            yield from assign(k + 1, mapping)
            del mapping[key]

    yield from assign(0, {})


def find_isomorphism(a: FiniteSSet, b: FiniteSSet) -> Optional[Dict[Hashable, Hashable]]:
    """
    a と b の同型写像（非退化単体のキーの対応）を探します。

    1-骨格の有向多重グラフの同型を networkx で列挙し、それを高次元へ
    面の一致を条件にバックトラックで延長します。

    Returns:
        Optional[Dict]: 見つからない場合は None
    """
    if a.counts() != b.counts():
        return None

    def skeleton(s: FiniteSSet) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(s.nondegenerate(0))
        for key in s.nondegenerate(1):
            d0, d1 = s.face_table(key)
            graph.add_edge(d1.key, d0.key, key=key)
        return graph

    index: Dict[int, Dict[Tuple[Simplex, ...], List[Hashable]]] = {}
    for n in range(1, b.dimension + 1):
        table: Dict[Tuple[Simplex, ...], List[Hashable]] = {}
        for key in b.nondegenerate(n):
            table.setdefault(b.face_table(key), []).append(key)
        index[n] = table
    order = [key for n in range(1, a.dimension + 1) for key in a.nondegenerate(n)]

    def extend(k: int, mapping: Dict[Hashable, Hashable], used: set) -> Optional[Dict[Hashable, Hashable]]:
        if k == len(order):
            return dict(mapping)
        key = order[k]
        wanted = tuple(Simplex(mapping[f.key], f.eta) for f in a.face_table(key))
        for candidate in index[a.dim_of(key)].get(wanted, []):
            if candidate in used:
                continue
            mapping[key] = candidate
            used.add(candidate)
            found = extend(k + 1, mapping, used)
            if found is not None:
                return found
            del mapping[key]
            used.discard(candidate)
        return None

    matcher = isomorphism.MultiDiGraphMatcher(skeleton(a), skeleton(b))
    for vertex_map in matcher.isomorphisms_iter():
        found = extend(0, dict(vertex_map), set(vertex_map.values()))
        if found is not None:
            logger.debug(f"{a.name} ≅ {b.name} の同型を見つけました")
            return found
    return None
