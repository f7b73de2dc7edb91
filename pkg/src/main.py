#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
globular グラフと pasting diagram を扱うコマンドラインツールのメインスクリプト

サブコマンドの選択と引数の解釈に特化し、実際の計算は
src.modules.pastel の各モジュールに委譲します。結果は標準出力に、
ログは標準エラー出力とログファイルに出力します。
"""

import argparse
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

# プロジェクトのルートディレクトリをPYTHONPATHに追加
root_dir = Path(__file__).parent.parent
sys.path.append(str(root_dir))

from src.utils.environment import EnvironmentUtils as env
from src.utils.helpers import count_table, render_table
from src.utils.logging_config import get_logger, set_log_level
from src.modules.pastel import catalog
from src.modules.pastel.anodyne import build_certificate, validate_certificate
from src.modules.pastel.compositor import (
    FreeTwoCategory,
    NerveSCat,
    TwoCategory,
    TwoCatLabeling,
    canonical_labeling,
    exhaustive_composite_oracle,
    find_extension,
    nerve_scat,
    paste_2cat,
)
from src.modules.pastel.errors import InvalidLabeling, PastelError
from src.modules.pastel.formats import (
    build_diagram,
    dump_sset,
    marked_text,
    parse_certificate,
    print_certificate,
    print_graph,
    print_labeling,
    resolve_labeling,
    resolve_twocat_labeling,
)
from src.modules.pastel.nerve_calc import MarkedSubgraph, act_operator, nerve
from src.modules.pastel.pasting import hc, nerve_pd
from src.modules.pastel.paths_poset import poset_of
from src.modules.pastel.plane_graph import PlaneGraph, check_globular, dart_text
from src.modules.pastel.render import FORMATS, hasse_dot, render
from src.modules.pastel.scat import SCat, build_scat, labeling_to_functor

logger = get_logger(__name__)

SUBCOMMANDS = (
    "check", "faces", "paths", "nerve", "act", "pd-check", "pd-nerve", "pd-hc",
    "scat", "label", "anodyne", "paste", "extend", "render", "catalog",
)


def setup_environment(env_name: str, log_level: str) -> None:
    """
    実行環境のセットアップを行う
    - APP_ENV とログレベルの設定
    - config/secrets.env があれば読み込み（なくてもよい）
    """
    os.environ["APP_ENV"] = env_name
    set_log_level(log_level)
    if env.load_env():
        logger.debug("環境変数を読み込みました")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    コマンドライン引数を解析する

    Returns:
        argparse.Namespace: 解析された引数
    """
    parser = argparse.ArgumentParser(prog="pastel", description="globular グラフ・pasting diagram・合成の計算")
    parser.add_argument("--env", default="development", help="実行環境 (development または production)")
    parser.add_argument("--log-level", default=os.environ.get("LOG_LEVEL", "INFO"),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="ログレベル")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    p = sub.add_parser("check", help="globular グラフであることを検査する")
    p.add_argument("graph")

    p = sub.add_parser("faces", help="面の一覧")
    p.add_argument("graph")

    p = sub.add_parser("paths", help="st-path の半順序集合と Hasse 図 (DOT)")
    p.add_argument("graph")

    p = sub.add_parser("nerve", help="N(G) の単体の個数")
    p.add_argument("graph")
    p.add_argument("--dim", type=int, default=None, help="表示する最大次元")
    p.add_argument("--marked", action="store_true", help="単体を marked subgraph で列挙する")
    p.add_argument("--json", action="store_true", help="JSON で出力する")

    p = sub.add_parser("act", help="marked subgraph に単体作用素を作用させる")
    p.add_argument("graph")
    p.add_argument("simplex", help="marked subgraph のキー（例: e0,e1,e2|e0/e1:1,e1/e2:2|2）")
    p.add_argument("operator", help="α(0),…,α(k)（例: 0,2）")

    p = sub.add_parser("pd-check", help="pasting diagram の要素と性質")
    p.add_argument("graph")
    p.add_argument("diagram")

    p = sub.add_parser("pd-nerve", help="N(G, S) の単体の個数")
    p.add_argument("graph")
    p.add_argument("diagram")

    p = sub.add_parser("pd-hc", help="Σ hc Π と新しい要素")
    p.add_argument("graph")
    p.add_argument("sigma")
    p.add_argument("pi")

    p = sub.add_parser("scat", help="C[Σ] の写像空間")
    p.add_argument("graph")
    p.add_argument("diagram")
    p.add_argument("--hom", nargs=2, metavar=("X", "Y"), help="写像空間 C[Σ](X,Y) を JSON で出力する")

    p = sub.add_parser("label", help="ラベリングから関手を構成して検査する")
    p.add_argument("graph")
    p.add_argument("labeling")
    p.add_argument("target", help="2-圏ファイル、free、または <グラフ>:<diagram>")

    p = sub.add_parser("anodyne", help="N(Σ) → N(Π) の証明書を作る・検証する")
    p.add_argument("graph")
    p.add_argument("sigma")
    p.add_argument("pi")
    p.add_argument("--validate-only", metavar="CERT", help="証明書ファイルを検証する")
    p.add_argument("-o", "--output", help="出力ファイル")

    p = sub.add_parser("paste", help="2-圏でのラベリングの合成")
    p.add_argument("graph")
    p.add_argument("labeling", help="ラベリングファイル、または canonical（自由 2-圏のみ）")
    p.add_argument("twocat", help="2-圏ファイル、または free")

    p = sub.add_parser("extend", help="C[Π_max] への延長を求める")
    p.add_argument("graph")
    p.add_argument("labeling")
    p.add_argument("target", help="2-圏ファイル、free、または <グラフ>:<diagram>")

    p = sub.add_parser("render", help="グラフを描画する")
    p.add_argument("graph")
    p.add_argument("--format", default="dot", choices=FORMATS)
    p.add_argument("-o", "--output", help="出力ファイル")

    p = sub.add_parser("catalog", help="同梱のグラフ")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")

    return parser.parse_args(argv)


# --- 共通 ---

def _parse_operator(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.strip("[]() ").split(",") if part.strip())
    except ValueError:
        raise PastelError(f"単体作用素の形式が不正です: '{text}'（例: 0,2）", subject=text)


def _diagram(graph_ref: str, diagram_ref: str):
    return catalog.resolve_diagram(catalog.graph_file(graph_ref), diagram_ref)


def _target(ref: str, g: PlaneGraph) -> Tuple[Optional[TwoCategory], SCat]:
    """ラベリングの行き先。<グラフ>:<diagram> なら C[Σ]、それ以外は 2-圏の N(K)"""
    if ":" in ref and not Path(ref).exists():
        graph_ref, diagram_ref = ref.split(":", 1)
        return None, build_scat(_diagram(graph_ref, diagram_ref))
    k = catalog.load_twocat(ref, g)
    return k, nerve_scat(k)


def _scat_labeling(g: PlaneGraph, labeling_ref: str, k: Optional[TwoCategory], target: SCat):
    if k is None:
        labeling = resolve_labeling(catalog.load_labeling(labeling_ref), g, target)
        labeling.validate(target)
        return labeling
    return _twocat_labeling(g, labeling_ref, k).to_scat_labeling(target)


def _twocat_labeling(g: PlaneGraph, ref: str, k: TwoCategory) -> TwoCatLabeling:
    if ref == "canonical":
        if not isinstance(k, FreeTwoCategory) or k.graph != g:
            raise InvalidLabeling(f"canonical は {g.name} の自由 2-圏でのみ使えます", subject=ref)
        labeling = canonical_labeling(k)
    else:
        labeling = resolve_twocat_labeling(catalog.load_labeling(ref), g, k)
    labeling.validate(k)
    return labeling


def _write(text: str, output: Optional[str]) -> str:
    if not output:
        return text
    Path(output).write_text(text, encoding="utf-8")
    logger.info(f"{output} に出力しました")
    return ""


# --- サブコマンド ---

def cmd_check(args) -> str:
    g = catalog.load_graph(args.graph)
    report = check_globular(g)
    lines = [
        f"graph {g.name}: globular",
        f"source {report.source}",
        f"target {report.target}",
        f"dom {'.'.join(report.dom)}",
        f"cod {'.'.join(report.cod)}",
        f"faces {len(report.interior_faces)}: {' '.join(report.interior_faces)}",
    ]
    return "\n".join(lines) + "\n"


def cmd_faces(args) -> str:
    g = catalog.load_graph(args.graph)
    rows = [
        (f.id, ".".join(f.dom or ()) or "-", ".".join(f.cod or ()) or "-", " ".join(dart_text(d) for d in f.boundary))
        for f in g.faces
    ]
    return render_table(rows, ["face", "dom", "cod", "boundary"]) + "\n"


def cmd_paths(args) -> str:
    g = catalog.load_graph(args.graph)
    check_globular(g)
    poset = poset_of(g)
    lines = [f"paths {len(poset.elements)}"] + [f"  {p}" for p in poset.elements]
    return "\n".join(lines) + "\n" + hasse_dot(poset, name=f"P{g.name}")


def cmd_nerve(args) -> str:
    g = catalog.load_graph(args.graph)
    check_globular(g)
    space = nerve(g)
    if args.json:
        return dump_sset(space)
    max_dim = args.dim if args.dim is not None else env.get_nerve_max_dim()
    counts = space.counts()[: max_dim + 1]
    text = count_table(counts) + "\n"
    if args.marked:
        for n in range(len(counts)):
            text += f"dim {n}\n" + "".join(f"  {marked_text(g, key)}\n" for key in space.nondegenerate(n))
    return text


def cmd_act(args) -> str:
    g = catalog.load_graph(args.graph)
    check_globular(g)
    alpha = _parse_operator(args.operator)
    try:
        result = act_operator(g, MarkedSubgraph.parse(args.simplex), alpha)
    except ValueError as e:
        raise PastelError(str(e), subject=alpha)
    return result.key + "\n"


def cmd_pd_check(args) -> str:
    d = _diagram(args.graph, args.diagram)
    lines = [f"diagram {d.name}: {len(d.members)} members"]
    lines += [f"  {text}" for text in d.members_text()]
    lines.append(f"complete {str(d.is_complete).lower()}")
    lines.append(f"subdivision-closed {str(d.is_subdivision_closed).lower()}")
    lines.append(f"wide-generated {str(d.is_generated_by_wide).lower()}")
    return "\n".join(lines) + "\n"


def cmd_pd_nerve(args) -> str:
    d = _diagram(args.graph, args.diagram)
    return count_table(nerve_pd(d).counts()) + "\n"


def cmd_pd_hc(args) -> str:
    parsed = catalog.graph_file(args.graph)
    sigma = catalog.resolve_diagram(parsed, args.sigma)
    pi = catalog.resolve_diagram(parsed, args.pi)
    result = hc(sigma, pi)
    new = sorted(result.members - sigma.members, key=lambda a: (len(a), sorted(a)))
    lines = [f"diagram {result.name}: {len(result.members)} members", f"new {len(new)}"]
    lines += ["  {" + ",".join(sorted(a)) + "}" for a in new]
    return "\n".join(lines) + "\n"


def cmd_scat(args) -> str:
    c = build_scat(_diagram(args.graph, args.diagram))
    if args.hom:
        x, y = args.hom
        if x not in c.objects or y not in c.objects:
            raise PastelError(f"{c.name} に対象 {x} または {y} がありません", subject=(x, y))
        return dump_sset(c.hom(x, y))
    rows = [(x, y, " ".join(map(str, c.hom(x, y).counts()))) for x, y in c.pairs()]
    return render_table(rows, ["x", "y", "simplices"]) + "\n"


def cmd_label(args) -> str:
    g = catalog.load_graph(args.graph)
    k, target = _target(args.target, g)
    labeling = _scat_labeling(g, args.labeling, k, target)
    functor = labeling_to_functor(labeling, target)
    problems = functor.check()
    if problems:
        raise InvalidLabeling("; ".join(problems), subject=problems)
    logger.info(f"{g.name} → {target.name}: 関手を構成しました")
    return print_labeling(labeling, target, name=Path(args.labeling).stem)


def cmd_anodyne(args) -> int:
    parsed = catalog.graph_file(args.graph)
    sigma = catalog.resolve_diagram(parsed, args.sigma)
    pi = catalog.resolve_diagram(parsed, args.pi)
    if args.validate_only:
        cert = parse_certificate(Path(args.validate_only).read_text(encoding="utf-8"), sigma, pi)
        report = validate_certificate(cert)
        if report.valid:
            print(f"valid: {len(cert.steps)} steps")
            return 0
        print(f"invalid: step {report.failed_step} {report.violation}: {report.reason}")
        return 1
    cert = build_certificate(sigma, pi, max_states=env.get_anodyne_max_states())
    report = validate_certificate(cert)
    assert report.valid, f"構成した証明書が検証に失敗しました: {report.violation}"
    sys.stdout.write(_write(print_certificate(cert), args.output))
    return 0


def cmd_paste(args) -> str:
    g = catalog.load_graph(args.graph)
    k = catalog.load_twocat(args.twocat, g)
    labeling = _twocat_labeling(g, args.labeling, k)
    result = paste_2cat(labeling, k)
    chains = len(poset_of(g).maximal_chains())
    lines = [f"composite {k.word(result)}", f"cell {k.label(result)}", f"orders {chains}"]
    logger.info(f"{g.name}: {chains} 通りの順序で合成が一致しました ({len(exhaustive_composite_oracle(labeling, k))} 通りの値)")
    return "\n".join(lines) + "\n"


def cmd_extend(args) -> str:
    g = catalog.load_graph(args.graph)
    k, target = _target(args.target, g)
    labeling = _scat_labeling(g, args.labeling, k, target)
    extension = find_extension(labeling, target)
    table = render_table(extension.table(), ["x", "y", "simplex", "value"])
    composite = extension.composite()
    x, y = labeling.objects[g.source], labeling.objects[g.target]
    if k is not None and isinstance(target, NerveSCat):
        value = k.word(target.arrow_of(x, y, composite))
    else:
        value = target.hom(x, y).simplex_text(composite)
    return table + "\n" + f"composite {value}\n"


def cmd_render(args) -> str:
    g = catalog.load_graph(args.graph)
    check_globular(g)
    return _write(render(g, args.format), args.output)


def cmd_catalog(args) -> str:
    if args.action == "list":
        return "".join(f"{name}\n" for name in catalog.catalog_names())
    if not args.name:
        raise PastelError("catalog show にはグラフ名が必要です")
    parsed = catalog.graph_file(args.name)
    diagrams = [build_diagram(parsed.graph, spec) for spec in parsed.diagrams.values()]
    return print_graph(parsed.graph, parsed.notes, diagrams)


COMMANDS: Dict[str, Callable] = {
    "check": cmd_check,
    "faces": cmd_faces,
    "paths": cmd_paths,
    "nerve": cmd_nerve,
    "act": cmd_act,
    "pd-check": cmd_pd_check,
    "pd-nerve": cmd_pd_nerve,
    "pd-hc": cmd_pd_hc,
    "scat": cmd_scat,
    "label": cmd_label,
    "anodyne": cmd_anodyne,
    "paste": cmd_paste,
    "extend": cmd_extend,
    "render": cmd_render,
    "catalog": cmd_catalog,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    メイン処理

    Returns:
        int: 成功した場合は0、計算上のエラーは1、引数の誤りは2
    """
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    setup_environment(args.env, args.log_level)

    logger.info("=" * 70)
    logger.info(f"pastel {args.command} を開始します（実行環境: {env.get_environment()}）")
    logger.info("=" * 70)

    try:
        result = COMMANDS[args.command](args)
    except PastelError as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug("詳細", exc_info=True)
        return 1
    except Exception as e:
        logger.error(f"予期しないエラーが発生しました: {str(e)}", exc_info=True)
        return 1

    if isinstance(result, int):
        status = result
    else:
        sys.stdout.write(result)
        status = 0
    logger.info(f"pastel {args.command} を終了します（終了コード {status}）")
    return status


if __name__ == "__main__":
    sys.exit(main())
