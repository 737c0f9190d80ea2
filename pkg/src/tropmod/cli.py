"""``tropmod`` command line: classify, fan, tropicalize, survey.

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 internal consistency failure (two routes that must agree did not).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .boundary import enumerate_complex
from .errors import (
    BoundExceeded,
    ConsistencyError,
    NotGammaOpen,
    ParseError,
    TropmodError,
)
from .fan import _full_complex, build_trop_fan, check_balanced, embedding_report
from .graphs import (
    StabilityGraph,
    complete_graph,
    covers_neighbors,
    enumerate_stability_graphs,
    format_graph,
    is_complete_multipartite,
    multipartite_witness,
    neighbor_cover_check,
    parse_graph,
)
from .pluecker import gamma_open_check, parse_family, pluecker, trop_family
from .trees import set_key, stabilize_family
from .valuation import CoordinateFrame, injectivity_report, matrix_tsv

SCHEMA = "tropmod/1"
FULL_LEVEL_MAX_N = 7
SURVEY_MAX_N = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def graph_hash(G: StabilityGraph) -> str:
    return hashlib.sha256(format_graph(G).encode()).hexdigest()[:16]


def _header(command: str, G: Optional[StabilityGraph] = None) -> dict:
    head = {"schema": SCHEMA, "version": __version__, "command": command}
    if G is not None:
        head["graph"] = format_graph(G)
        head["graph_hash"] = graph_hash(G)
    return head


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _load_graph(args) -> StabilityGraph:
    if args.graph and args.graph_file:
        raise UsageError("give --graph or --graph-file, not both")
    if args.graph_file:
        spec = Path(args.graph_file).read_text()
    elif args.graph:
        spec = args.graph
    else:
        raise UsageError("a graph is required (--graph or --graph-file)")
    return parse_graph(spec)


def _check_level(G: StabilityGraph, level: str) -> None:
    if level == "full" and G.n > FULL_LEVEL_MAX_N:
        raise BoundExceeded(f"--level full supports n <= {FULL_LEVEL_MAX_N}")


# -- commands ------------------------------------------------------------------------------


def classify_report(G: StabilityGraph, level: str = "full") -> dict:
    _check_level(G, level)
    part = is_complete_multipartite(G)
    routes = {
        "complement_cliques": part is not None,
        "neighbor_cover": neighbor_cover_check(G),
        "no_one_edge_triple": multipartite_witness(G) is None,
    }
    inj = injectivity_report(G)
    emb = embedding_report(G, level=level) if G.n <= FULL_LEVEL_MAX_N else None
    verdicts = [part is not None, inj.injective] + ([emb.is_embedding] if emb else [])
    report = _header("classify", G)
    report.update({
        "multipartite": {
            "verdict": part is not None,
            "partition": part.as_lists() if part else None,
            "witness": list(multipartite_witness(G) or []) or None,
            "routes": routes,
        },
        "injectivity": inj.to_dict(),
        "embedding": emb.to_dict() if emb else None,
        "level": level,
        "consistent": len(set(routes.values())) == 1 and len(set(verdicts)) == 1,
    })
    return report


def classify_text(r: dict) -> str:
    mp = r["multipartite"]
    lines = [f"graph {r['graph']}"]
    if mp["verdict"]:
        lines.append("multipartite yes, parts " + " ".join("{" + ",".join(map(str, p)) + "}" for p in mp["partition"]))
    else:
        lines.append("multipartite no, witness " + ",".join(map(str, mp["witness"])))
    inj = r["injectivity"]
    coll = "; ".join(" ".join("{" + ",".join(map(str, d)) + "}" for d in grp) for grp in inj["collisions"])
    lines.append(f"injective {'yes' if inj['injective'] else 'no'}" + (f", collisions {coll}" if coll else ""))
    if r["embedding"] is not None:
        e = r["embedding"]
        lines.append(
            f"embedding {'yes' if e['isEmbedding'] else 'no'} (vertexInjective={e['vertexInjective']}, "
            f"dimPreserving={e['dimPreserving']}, faceCompatible={e['faceCompatible']})"
        )
    lines.append(f"consistent {'yes' if r['consistent'] else 'no'}")
    return "\n".join(lines) + "\n"


def fan_report(G: StabilityGraph) -> tuple[dict, object, object]:
    cx = enumerate_complex(G)
    fan = build_trop_fan(G)
    cert = check_balanced(fan)
    report = _header("fan", G)
    report.update({
        "frame": CoordinateFrame.of(G).labels(),
        "divisors": [list(set_key(d)) for d in cx.divisors],
        "f_vector": cx.f_vector,
        "maximal_cells": len(cx.maximal_cells()),
        "fan": fan.to_dict(),
        "balancing": cert.to_dict(),
    })
    consistent = cert.balanced
    if is_complete_multipartite(G) is not None:
        consistent &= len(fan.rays) == len(cx.divisors) and len(fan.weights) == len(cx.maximal_cells())
    report["consistent"] = consistent
    return report, fan, cx


def tropicalize_report(G: StabilityGraph, family_text: str) -> dict:
    Pf = parse_family(family_text, G.n)
    Pv = pluecker(Pf)
    if not gamma_open_check(Pv, G, fiber="generic"):
        raise NotGammaOpen("a required minor vanishes identically on the family")
    vec = trop_family(Pv, G)
    fan = build_trop_fan(G)
    cone = fan.locate(vec)

    # limit dual tree: locate the full-frame point in the full moduli fan
    K = complete_graph(G.n)
    full_fan = build_trop_fan(K, _full_complex(G.n))
    full_cone = full_fan.locate(trop_family(Pv, K))
    limits = full_fan.provenance.get(full_cone, []) if full_cone else []
    if full_cone is None or len(limits) > 1:
        raise ConsistencyError("family does not land in a unique cone of the full moduli fan")
    limit = limits[0] if limits else None
    stable = stabilize_family(limit, G) if limit is not None else None
    provenance = fan.provenance.get(cone, []) if cone else []

    report = _header("tropicalize", G)
    report.update({
        "frame": CoordinateFrame.of(G).labels(),
        "vector": list(vec),
        "special_fiber_gamma_open": gamma_open_check(Pv, G, fiber="special"),
        "cone": list(cone) if cone is not None else None,
        "cone_rays": [list(r) for r in fan.cone_rays(cone)] if cone else [],
        "provenance": [F.as_lists() for F in provenance],
        "merged": len(provenance) > 1,
        "limit_tree": limit.as_lists() if limit is not None else [],
        "stabilized_tree": stable.as_lists() if stable is not None else [],
    })
    in_support = cone is not None
    matches = not any(vec) or (stable is not None and stable in provenance)
    report["consistent"] = in_support and matches
    return report


def tropicalize_text(r: dict) -> str:
    fam = lambda F: "[" + " ".join("{" + ",".join(map(str, s)) + "}" for s in F) + "]"
    lines = [
        f"graph {r['graph']}",
        "frame " + " ".join(r["frame"]),
        "vector " + " ".join(map(str, r["vector"])),
        "cone " + (" ".join(map(str, r["cone"])) if r["cone"] is not None else "none"),
        "provenance " + " ".join(fam(F) for F in r["provenance"]) + (" (merged)" if r["merged"] else ""),
        "limit tree " + fam(r["limit_tree"]),
        "stabilized tree " + fam(r["stabilized_tree"]),
    ]
    return "\n".join(lines) + "\n"


def survey_report(n: int, level: str = "quick", sample: Optional[int] = None, seed: int = 0) -> tuple[dict, list]:
    """Cross-tabulate the three verdicts over all (or a seeded sample of) graphs on ``n`` markings."""
    if not 4 <= n <= SURVEY_MAX_N:
        raise BoundExceeded(f"survey supports 4 <= n <= {SURVEY_MAX_N}")
    graphs = list(enumerate_stability_graphs(n))
    sampled = sample is not None and sample < len(graphs)
    if sampled:
        graphs = sorted(random.Random(seed).sample(graphs, sample), key=lambda G: G.sorted_edges())
    table: dict[str, int] = {}
    disagreements = []
    rows = []
    for G in graphs:
        mp = is_complete_multipartite(G) is not None
        routes = {mp, covers_neighbors(G.vertices, G.edges), multipartite_witness(G) is None}
        inj = injectivity_report(G).injective
        emb = embedding_report(G, level=level).is_embedding
        key = f"multipartite={mp},injective={inj},embedding={emb}"
        table[key] = table.get(key, 0) + 1
        rows.append((format_graph(G), mp, inj, emb))
        if len(routes) != 1 or len({mp, inj, emb}) != 1:
            disagreements.append(format_graph(G))
    report = _header("survey")
    report.update({
        "n": n,
        "level": level,
        "graphs": len(graphs),
        "sampled": sampled,
        "seed": seed,
        "table": dict(sorted(table.items())),
        "disagreements": disagreements,
        "consistent": not disagreements,
    })
    return report, rows


def survey_text(r: dict) -> str:
    lines = [f"n={r['n']} graphs={r['graphs']} level={r['level']}"]
    lines += [f"{k}\t{v}" for k, v in r["table"].items()]
    lines.append(f"disagreements {len(r['disagreements'])}")
    lines += r["disagreements"]
    return "\n".join(lines) + "\n"


def survey_tsv(rows: list) -> str:
    lines = ["graph\tmultipartite\tinjective\tembedding"]
    lines += ["\t".join(map(str, row)) for row in rows]
    return "\n".join(lines) + "\n"


# -- entry point ----------------------------------------------------------------------------


FORMATS = {
    "classify": ("json", "text"),
    "fan": ("json", "text", "tsv", "dot"),
    "tropicalize": ("json", "text"),
    "survey": ("json", "text", "tsv"),
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropmod", description="Tropical moduli of graphically stable rational curves.")
    p.add_argument("--version", action="version", version=f"tropmod {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in FORMATS:
        s = sub.add_parser(name)
        if name != "survey":
            s.add_argument("--graph", help="graph spec, e.g. 'n=5;edges=2-3,2-4,2-5,3-4'")
            s.add_argument("--graph-file", help="file holding a graph spec")
        s.add_argument("--format", default="json", help="output format: " + "|".join(FORMATS[name]))
        s.add_argument("--level", choices=("quick", "full"), default="full" if name != "survey" else "quick")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", help="write output here instead of stdout")
        if name == "tropicalize":
            s.add_argument("--family", required=True, help="family file (one 'p<i> = (x : y)' per line)")
        if name == "survey":
            s.add_argument("--n", type=int, required=True)
            s.add_argument("--sample", type=int, help="survey a seeded random sample of this many graphs")
    return p


def run(argv: list[str]) -> tuple[int, str, Optional[str]]:
    """Parse ``argv`` and execute; returns exit code, output text and output path."""
    args = build_parser().parse_args(argv)
    if args.format not in FORMATS[args.command]:
        raise UsageError(f"{args.command} does not support --format {args.format}")
    if args.command == "survey":
        r, rows = survey_report(args.n, args.level, args.sample, args.seed)
        text = {"json": lambda: _dump(r), "text": lambda: survey_text(r), "tsv": lambda: survey_tsv(rows)}[args.format]()
        return (0 if r["consistent"] else 3), text, args.out
    G = _load_graph(args)
    if args.command == "classify":
        r = classify_report(G, args.level)
        text = _dump(r) if args.format == "json" else classify_text(r)
    elif args.command == "fan":
        _check_level(G, args.level)
        r, fan, cx = fan_report(G)
        text = {"json": lambda: _dump(r), "text": fan.to_text, "tsv": lambda: matrix_tsv(G),
                "dot": cx.to_dot}[args.format]()
    else:
        r = tropicalize_report(G, Path(args.family).read_text())
        text = _dump(r) if args.format == "json" else tropicalize_text(r)
    return (0 if r["consistent"] else 3), text, args.out


def _diagnostic(kind: str, exc: BaseException) -> str:
    return json.dumps({"schema": SCHEMA, "error": kind, "type": type(exc).__name__, "message": str(exc)})


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text, out = run(argv)
    except (UsageError, ParseError, OSError) as exc:
        print(_diagnostic("usage", exc), file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(_diagnostic("consistency", exc), file=sys.stderr)
        return 3
    except TropmodError as exc:
        print(_diagnostic("validation", exc), file=sys.stderr)
        return 2
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == 3:
        print(_diagnostic("consistency", ConsistencyError("verdicts disagree")), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
