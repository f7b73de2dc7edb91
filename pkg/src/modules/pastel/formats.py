#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
pastel-format 1 のテキスト形式を読み書きするモジュール

1行1文の形式で、グラフ・pasting diagram・ラベリング・2-圏・証明書を
表します。空行と # 以降のコメントは無視します。

グラフ:
    graph <名前>
    note <説明>
    vertex <id>: <dart>,<dart>,...     （時計回り）
    edge <id>: <始点> -> <終点>
    exterior: <dart>
    dom: <辺>.<辺>...                  （省略可。復元した dom と照合します）
    diagram <名前>: generators = {e0,e1; e1,e2} [complete] [subdivision-closed]

ラベリング:
    labeling <名前>
    graph <グラフ>
    obj <頂点> = <対象>
    edge <辺> = <0-単体 / 1-セル>
    face <面ID> = <1-単体 / 2-セル>

2-圏:
    twocat <名前>
    object <id>
    cell1 <id>: <x> -> <y>
    compose1 <f> ; <g> = <h>
    cell2 <id>: <f> => <g>
    vertical <α> ; <β> = <γ>
    horizontal <α> * <β> = <γ>

    または twocat free <グラフ> と name <面ID> = <表示名>

証明書:
    certificate graph=<hash> sigma=<hash> pi=<hash>
    step <k>: dim=<n> horn=<i> filler=<marked subgraph のキー>
"""

import json
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from src.utils.helpers import content_lines, edge_key, stable_hash, with_header
from src.utils.logging_config import get_logger
from src.modules.pastel.anodyne import AnodyneCertificate, CertificateStep
from src.modules.pastel.compositor import FreeTwoCategory, TabulatedTwoCategory, TwoCategory, TwoCatLabeling
from src.modules.pastel.errors import FormatError, GraphFormatError, InvalidLabeling, PastelError
from src.modules.pastel.nerve_calc import ChainSimplex, MarkedSubgraph, chain_to_marked, marked_to_chain
from src.modules.pastel.pasting import PastingDiagram, complete, generate, nerve_pd, subdivision_closure
from src.modules.pastel.plane_graph import PlaneGraph, dart_text, parse_dart
from src.modules.pastel.scat import Labeling, SCat
from src.modules.pastel.simplicial import FiniteSSet, Simplex

logger = get_logger(__name__)

GraphResolver = Callable[[str], PlaneGraph]

_VERTEX = re.compile(r"^vertex\s+(\S+)\s*:\s*(.*)$")
_EDGE = re.compile(r"^edge\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_EXTERIOR = re.compile(r"^exterior\s*:\s*(\S+)$")
_DOM = re.compile(r"^dom\s*:\s*(\S+)$")
_DIAGRAM = re.compile(r"^diagram\s+(\S+)\s*:\s*generators\s*=\s*\{(.*)\}\s*(.*)$")
_ASSIGN = re.compile(r"^(obj|edge|face|name)\s+(\S+)\s*=\s*(.+)$")
_CELL1 = re.compile(r"^cell1\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_CELL2 = re.compile(r"^cell2\s+(\S+)\s*:\s*(\S+)\s*=>\s*(\S+)$")
_TABLE = re.compile(r"^(compose1|vertical|horizontal)\s+(\S+)\s*([;*])\s*(\S+)\s*=\s*(\S+)$")
_CERTIFICATE = re.compile(r"^certificate\s+graph=(\S+)\s+sigma=(\S+)\s+pi=(\S+)$")
_STEP = re.compile(r"^step\s+(\d+)\s*:\s*dim=(\d+)\s+horn=(\d+)\s+filler=(\S+)$")

GRAPH_STATEMENTS = ("graph", "note", "vertex", "edge", "exterior", "dom", "diagram")


def _lines(text: str) -> List[Tuple[int, str]]:
    try:
        return content_lines(text)
    except ValueError as e:
        raise FormatError(str(e))


# --- グラフ ---

@dataclass(frozen=True)
class DiagramSpec:
    """diagram 文の内容（生成元と、読み込み時に行う閉包）"""

    name: str
    generators: Tuple[Tuple[str, ...], ...]
    complete: bool = False
    subdivision_closed: bool = False


@dataclass
class GraphFile:
    graph: PlaneGraph
    notes: List[str] = field(default_factory=list)
    diagrams: Dict[str, DiagramSpec] = field(default_factory=dict)


def _parse_diagram(line_no: int, line: str) -> DiagramSpec:
    match = _DIAGRAM.match(line)
    if not match:
        raise FormatError(f"diagram 文の形式が不正です: '{line}'", line_no)
    name, body, flags = match.groups()
    generators = []
    for part in body.split(";"):
        edges = tuple(sorted(e.strip() for e in part.split(",") if e.strip()))
        if edges:
            generators.append(edges)
    flag_set = set(flags.split())
    unknown = flag_set - {"complete", "subdivision-closed"}
    if unknown:
        raise FormatError(f"不明なフラグ {sorted(unknown)}", line_no)
    return DiagramSpec(name, tuple(generators), "complete" in flag_set, "subdivision-closed" in flag_set)


def parse_graph_file(text: str, name: str = "") -> GraphFile:
    """
    グラフのテキストを解析します。

    Raises:
        GraphFormatError: 重複したID、未定義の頂点、不正な文がある場合
    """
    vertices: List[str] = []
    rotation: Dict[str, List] = {}
    edges: Dict[str, Tuple[str, str]] = {}
    exterior = None
    declared_dom = None
    notes: List[str] = []
    diagrams: Dict[str, DiagramSpec] = {}
    for line_no, line in _lines(text):
        keyword = line.split()[0].rstrip(":")
        if keyword == "graph":
            name = line.split(None, 1)[1].strip() if len(line.split()) > 1 else name
        elif keyword == "note":
            notes.append(line[4:].strip())
        elif keyword == "vertex":
            match = _VERTEX.match(line)
            if not match:
                raise GraphFormatError(f"vertex 文の形式が不正です: '{line}'", line_no)
            v, darts = match.groups()
            if v in rotation:
                raise GraphFormatError(f"頂点 {v} が重複しています", line_no)
            vertices.append(v)
            rotation[v] = [parse_dart(d) for d in darts.split(",") if d.strip()]
        elif keyword == "edge":
            match = _EDGE.match(line)
            if not match:
                raise GraphFormatError(f"edge 文の形式が不正です: '{line}'", line_no)
            e, u, v = match.groups()
            if e in edges:
                raise GraphFormatError(f"辺 {e} が重複しています", line_no)
            edges[e] = (u, v)
        elif keyword == "exterior":
            match = _EXTERIOR.match(line)
            if not match or exterior is not None:
                raise GraphFormatError(f"exterior 文が不正、または重複しています: '{line}'", line_no)
            exterior = parse_dart(match.group(1))
        elif keyword == "dom":
            match = _DOM.match(line)
            if not match or declared_dom is not None:
                raise GraphFormatError(f"dom 文が不正、または重複しています: '{line}'", line_no)
            declared_dom = tuple(match.group(1).split("."))
        elif keyword == "diagram":
            spec = _parse_diagram(line_no, line)
            if spec.name in diagrams:
                raise FormatError(f"diagram {spec.name} が重複しています", line_no)
            diagrams[spec.name] = spec
        else:
            raise GraphFormatError(f"不明な文です: '{line}'", line_no)
    if not vertices:
        raise GraphFormatError("頂点がありません")
    if exterior is None:
        if edges:
            raise GraphFormatError("exterior 文がありません")
        exterior = ("", "+")
    graph = PlaneGraph(vertices, edges, rotation, exterior, name=name, declared_dom=declared_dom)
    logger.debug(f"{graph!r} を読み込みました（diagram {len(diagrams)} 個）")
    return GraphFile(graph, notes, diagrams)


def parse_graph(text: str, name: str = "") -> PlaneGraph:
    return parse_graph_file(text, name).graph


def graph_lines(g: PlaneGraph) -> List[str]:
    lines = []
    for v in g.vertices:
        lines.append(f"vertex {v}: {','.join(dart_text(d) for d in g.rotation[v])}")
    for e, (u, v) in g.edges.items():
        lines.append(f"edge {e}: {u} -> {v}")
    if g.edges:
        lines.append(f"exterior: {dart_text(g.exterior_dart)}")
    return lines


def print_graph(g: PlaneGraph, notes: Sequence[str] = (), diagrams: Sequence[PastingDiagram] = ()) -> str:
    lines = [f"graph {g.name}"] if g.name else []
    lines += [f"note {note}" for note in notes]
    lines += graph_lines(g)
    if g.declared_dom is not None:
        lines.append(f"dom: {'.'.join(g.declared_dom)}")
    lines += [diagram_line(d) for d in diagrams]
    return with_header(lines)


def graph_hash(g: PlaneGraph) -> str:
    """名前と注記を除いたグラフの内容のハッシュ"""
    return stable_hash("\n".join(graph_lines(g)))


# --- pasting diagram ---

def build_diagram(g: PlaneGraph, spec: DiagramSpec) -> PastingDiagram:
    d = generate(g, spec.generators, name=spec.name)
    if spec.complete:
        d = complete(d)
    if spec.subdivision_closed:
        d = subdivision_closure(d)
        if spec.complete:
            d = complete(d)
    return PastingDiagram(g, d.members, name=spec.name)


def diagram_line(d: PastingDiagram) -> str:
    body = "; ".join(edge_key(a)[1:-1] for a in sorted(d.members, key=lambda a: (len(a), sorted(a))))
    return f"diagram {d.name}: generators = {{{body}}}"


def print_diagram(d: PastingDiagram) -> str:
    return with_header(graph_lines(d.graph) + [diagram_line(d)])


def parse_diagram(text: str, name: Optional[str] = None) -> PastingDiagram:
    """
    グラフと diagram 文を含むテキストから pasting diagram を読み込みます。

    Raises:
        FormatError: diagram 文がない、または name の diagram がない場合
    """
    parsed = parse_graph_file(text)
    if not parsed.diagrams:
        raise FormatError("diagram 文がありません")
    spec = parsed.diagrams[name] if name else next(iter(parsed.diagrams.values()))
    return build_diagram(parsed.graph, spec)


def diagram_hash(d: PastingDiagram) -> str:
    return stable_hash(";".join(d.members_text()))


# --- ラベリング ---

@dataclass
class LabelingSpec:
    """ラベリングファイルの内容（値は未解決の文字列）"""

    name: str = ""
    graph: str = ""
    objects: Dict[str, str] = field(default_factory=dict)
    edges: Dict[str, str] = field(default_factory=dict)
    faces: Dict[str, str] = field(default_factory=dict)


def parse_labeling(text: str) -> LabelingSpec:
    """
    Raises:
        FormatError: 不正な文、または同じ頂点・辺・面への重複した指定がある場合
    """
    spec = LabelingSpec()
    for line_no, line in _lines(text):
        keyword = line.split()[0]
        if keyword in ("labeling", "graph"):
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise FormatError(f"{keyword} 文に名前がありません", line_no)
            setattr(spec, "name" if keyword == "labeling" else "graph", parts[1].strip())
            continue
        match = _ASSIGN.match(line)
        if not match or match.group(1) == "name":
            raise FormatError(f"不明な文です: '{line}'", line_no)
        kind, key, value = match.groups()
        table = {"obj": spec.objects, "edge": spec.edges, "face": spec.faces}[kind]
        if key in table:
            raise FormatError(f"{kind} {key} が重複しています", line_no)
        table[key] = value.strip()
    return spec


def _find_simplex(space: FiniteSSet, n: int, text: str) -> Simplex:
    for x in space.simplices(n):
        if space.simplex_text(x) == text:
            return x
    raise InvalidLabeling(f"{space.name} に {n}-単体 '{text}' がありません", subject=text)


def _find_object(objects: Sequence[Hashable], text: str) -> Hashable:
    for x in objects:
        if str(x) == text:
            return x
    raise InvalidLabeling(f"対象 '{text}' がありません", subject=text)


def resolve_labeling(spec: LabelingSpec, g: PlaneGraph, target: SCat) -> Labeling:
    """
    ラベリングの値を target の対象と単体に解決します。

    Raises:
        InvalidLabeling: 値が見つからない場合
    """
    objects = {v: _find_object(target.objects, spec.objects[v]) for v in g.vertices if v in spec.objects}
    edges = {}
    for e, value in spec.edges.items():
        if e not in g.edges:
            raise InvalidLabeling(f"辺 {e} は {g.name} にありません", subject=e)
        u, v = g.edges[e]
        edges[e] = _find_simplex(target.hom(objects[u], objects[v]), 0, value)
    faces = {}
    for face in g.interior_faces:
        if face.id in spec.faces:
            x, y = objects[g.path_source(face.dom)], objects[g.path_target(face.dom)]
            faces[face.id] = _find_simplex(target.hom(x, y), 1, spec.faces[face.id])
    unknown = set(spec.faces) - set(faces)
    if unknown:
        raise InvalidLabeling(f"面 {sorted(unknown)} は {g.name} にありません", subject=sorted(unknown))
    return Labeling(g, objects, edges, faces)


def resolve_twocat_labeling(spec: LabelingSpec, g: PlaneGraph, k: TwoCategory) -> TwoCatLabeling:
    """
    ラベリングの値を 2-圏 k のセルに解決します。面の値は label と word の
    どちらで書いてもかまいません。

    Raises:
        InvalidLabeling: 値が見つからない場合
    """
    objects = {v: _find_object(k.objects, spec.objects[v]) for v in g.vertices if v in spec.objects}
    edges = {}
    for e, value in spec.edges.items():
        if e not in g.edges:
            raise InvalidLabeling(f"辺 {e} は {g.name} にありません", subject=e)
        u, v = g.edges[e]
        cells = [f for f in k.one_cells(objects[u], objects[v]) if k.label(f) == value]
        if not cells:
            raise InvalidLabeling(f"{objects[u]} → {objects[v]} に 1-セル '{value}' がありません", subject=value)
        edges[e] = cells[0]
    labeling = TwoCatLabeling(g, objects, edges)
    for face in g.interior_faces:
        if face.id not in spec.faces:
            continue
        value = spec.faces[face.id]
        start = g.path_source(face.dom)
        source, target = labeling.path_cell(k, face.dom, start), labeling.path_cell(k, face.cod, start)
        cells = [a for a in k.two_cells(source, target) if value in (k.label(a), k.word(a))]
        if not cells:
            raise InvalidLabeling(f"{k.label(source)} ⇒ {k.label(target)} に 2-セル '{value}' がありません", subject=value)
        labeling.faces[face.id] = cells[0]
    return labeling


def print_labeling(labeling: Labeling, target: SCat, name: str = "") -> str:
    g = labeling.graph
    lines = ([f"labeling {name}"] if name else []) + [f"graph {g.name}"]
    lines += [f"obj {v} = {labeling.objects[v]}" for v in g.vertices]
    for e, (u, v) in g.edges.items():
        space = target.hom(labeling.objects[u], labeling.objects[v])
        lines.append(f"edge {e} = {space.simplex_text(labeling.edges[e])}")
    for face in g.interior_faces:
        x, y = labeling.objects[g.path_source(face.dom)], labeling.objects[g.path_target(face.dom)]
        lines.append(f"face {face.id} = {target.hom(x, y).simplex_text(labeling.faces[face.id])}")
    return with_header(lines)


# --- 2-圏 ---

def parse_twocat(text: str, resolve_graph: Optional[GraphResolver] = None) -> TwoCategory:
    """
    2-圏のファイルを読み込みます。

    twocat free の場合、同じファイルにグラフの文があればそれを使い、
    なければ resolve_graph で名前から読み込みます。

    Raises:
        FormatError: 不正な文がある場合
        TwoCategoryError: 表が 2-圏の公理を満たさない場合
    """
    lines = _lines(text)
    if not lines or not lines[0][1].startswith("twocat"):
        raise FormatError("先頭が twocat 文ではありません", lines[0][0] if lines else None)
    header = lines[0][1].split()
    if len(header) >= 2 and header[1] == "free":
        names, graph_text = {}, []
        for line_no, line in lines[1:]:
            match = _ASSIGN.match(line)
            if match and match.group(1) == "name":
                names[match.group(2)] = match.group(3).strip()
            elif line.split()[0].rstrip(":") in GRAPH_STATEMENTS:
                graph_text.append(line)
            else:
                raise FormatError(f"不明な文です: '{line}'", line_no)
        ref = header[2] if len(header) > 2 else ""
        if graph_text:
            graph = parse_graph("\n".join(graph_text), name=ref)
        elif ref and resolve_graph is not None:
            graph = resolve_graph(ref)
        else:
            raise FormatError("twocat free のグラフが指定されていません", lines[0][0])
        unknown = set(names) - {f.id for f in graph.interior_faces}
        if unknown:
            raise FormatError(f"面 {sorted(unknown)} は {graph.name} にありません")
        return FreeTwoCategory(graph, names)

    if len(header) != 2:
        raise FormatError(f"twocat 文の形式が不正です: '{lines[0][1]}'", lines[0][0])
    objects: List[str] = []
    cells1: Dict[str, Tuple[str, str]] = {}
    cells2: Dict[str, Tuple[str, str]] = {}
    tables: Dict[str, Dict[Tuple[str, str], str]] = {"compose1": {}, "vertical": {}, "horizontal": {}}
    for line_no, line in lines[1:]:
        keyword = line.split()[0]
        if keyword == "object":
            parts = line.split()
            if len(parts) != 2 or parts[1] in objects:
                raise FormatError(f"object 文が不正、または重複しています: '{line}'", line_no)
            objects.append(parts[1])
        elif keyword == "cell1":
            match = _CELL1.match(line)
            if not match or match.group(1) in cells1:
                raise FormatError(f"cell1 文が不正、または重複しています: '{line}'", line_no)
            cells1[match.group(1)] = (match.group(2), match.group(3))
        elif keyword == "cell2":
            match = _CELL2.match(line)
            if not match or match.group(1) in cells2:
                raise FormatError(f"cell2 文が不正、または重複しています: '{line}'", line_no)
            cells2[match.group(1)] = (match.group(2), match.group(3))
        else:
            match = _TABLE.match(line)
            if not match:
                raise FormatError(f"不明な文です: '{line}'", line_no)
            kind, a, op, b, c = match.groups()
            if (op == "*") != (kind == "horizontal"):
                raise FormatError(f"{kind} の演算子が不正です: '{op}'", line_no)
            tables[kind][(a, b)] = c
    return TabulatedTwoCategory(header[1], objects, cells1, cells2, tables["compose1"], tables["vertical"], tables["horizontal"])


def print_twocat(k: TwoCategory) -> str:
    if isinstance(k, FreeTwoCategory):
        lines = [f"twocat free {k.graph.name}"] + graph_lines(k.graph)
        lines += [f"name {face_id} = {name}" for face_id, name in sorted(k.names.items())]
        return with_header(lines)
    if not isinstance(k, TabulatedTwoCategory):
        raise PastelError(f"{k.name} はテキストに出力できません")
    lines = [f"twocat {k.name}"]
    lines += [f"object {x}" for x in k.objects]
    lines += [f"cell1 {f}: {x} -> {y}" for f, (x, y) in k.cells1.items() if not k.is_unit_1(f)]
    lines += [f"compose1 {f} ; {g} = {h}" for (f, g), h in k.compose1_table.items()]
    lines += [f"cell2 {a}: {f} => {g}" for a, (f, g) in k.cells2.items() if not k.is_unit_2(a)]
    lines += [f"vertical {a} ; {b} = {c}" for (a, b), c in k.vertical_table.items()]
    lines += [f"horizontal {a} * {b} = {c}" for (a, b), c in k.horizontal_table.items()]
    return with_header(lines)


# --- 証明書 ---

def print_certificate(cert: AnodyneCertificate) -> str:
    """
    Raises:
        FormatError: グラフや diagram を持たない証明書の場合
    """
    if cert.graph is None or cert.sigma is None or cert.pi is None:
        raise FormatError("グラフと diagram を持つ証明書だけを出力できます")
    lines = [f"certificate graph={graph_hash(cert.graph)} sigma={diagram_hash(cert.sigma)} pi={diagram_hash(cert.pi)}"]
    for k, step in enumerate(cert.steps, start=1):
        lines.append(f"step {k}: dim={step.dim} horn={step.horn} filler={cert.filler_text(step)}")
    return with_header(lines)


def parse_certificate(text: str, sigma: PastingDiagram, pi: PastingDiagram) -> AnodyneCertificate:
    """
    証明書を読み込み、Σ と Π に対応付けます。

    Raises:
        FormatError: 形式が不正、またはハッシュが Σ・Π と一致しない場合
    """
    g = sigma.graph
    lines = _lines(text)
    if not lines:
        raise FormatError("証明書が空です")
    line_no, line = lines[0]
    match = _CERTIFICATE.match(line)
    if not match:
        raise FormatError(f"certificate 文の形式が不正です: '{line}'", line_no)
    expected = (graph_hash(g), diagram_hash(sigma), diagram_hash(pi))
    for label, found, wanted in zip(("graph", "sigma", "pi"), match.groups(), expected):
        if found != wanted:
            raise FormatError(f"{label} のハッシュが一致しません: {found} != {wanted}", line_no)
    steps = []
    for line_no, line in lines[1:]:
        match = _STEP.match(line)
        if not match:
            raise FormatError(f"step 文の形式が不正です: '{line}'", line_no)
        k, n, i, key = match.groups()
        if int(k) != len(steps) + 1:
            raise FormatError(f"step の番号が連続していません: {k}", line_no)
        try:
            chain = marked_to_chain(g, MarkedSubgraph.parse(key)).chain
        except PastelError as e:
            raise FormatError(f"filler を復元できません: {e}", line_no)
        steps.append(CertificateStep(int(n), int(i), chain))
    return AnodyneCertificate(nerve_pd(sigma), nerve_pd(pi), steps, graph=g, sigma=sigma, pi=pi)


# --- 単体的集合 ---

def dump_sset(space: FiniteSSet) -> str:
    """
    有限単体的集合を JSON で出力します。

    キーは name, dimension, stored_dim, simplices の順で、simplices は
    次元ごとに {"id", "faces"} のリストです。
    """
    return json.dumps(space.to_dict(), ensure_ascii=False, indent=2) + "\n"


def marked_text(g: PlaneGraph, key: Tuple) -> str:
    """N(G) の単体のキーを marked subgraph のキーで表します"""
    return chain_to_marked(g, ChainSimplex(tuple(key))).key
