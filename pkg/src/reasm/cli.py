"""Command-line front end over JSON graph and tree files.

Exit status 1 means an input failed validation or a bound check. Exit
status 2 means a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ParseError, ReasmError
from .generators import corpus_entry, expand_to_three_regular, gen_constant_density, gen_hfk
from .layering import decompose
from .ks_engine import run_ks, run_ks_lifted
from .oracle import optimal_alpha
from .plane_graph import PlaneGraph, graph_to_json, load_graph
from .reassembly import (
    alpha_measure,
    carving_from_json,
    carving_to_json,
    carving_to_trees,
    tree_from_json,
    tree_to_carving,
    tree_to_json,
)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _write(path: str | None, obj) -> None:
    text = _dumps(obj)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


@dataclass(frozen=True)
class VerifyReport:
    alpha: int
    k: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.alpha <= self.bound

    def line(self) -> str:
        verdict = "OK" if self.ok else "bound VIOLATED"
        return f"valid, alpha={self.alpha}, bound 2k={self.bound}: {verdict}"


def verify_bundle(graph_path: str | Path, tree_path: str | Path) -> VerifyReport:
    """Recompute alpha and the layer count from scratch; any stored alpha is ignored."""
    g = load_graph(graph_path, cubic=False)
    t = tree_from_json(_read_json(str(tree_path)))
    # raises InvalidTree with the validator's diagnostics
    alpha = alpha_measure(g, t).alpha
    k = decompose(g).k
    return VerifyReport(alpha, k, 2 * k)


def _snapshot_dot(round_no: int, kind: str, bags: list[list[int]], g: PlaneGraph) -> str:
    lines = [f'graph round_{round_no} {{', f'  label="round {round_no} ({kind})";']
    for i, bag in enumerate(bags):
        lines.append(f"  subgraph cluster_{i} {{")
        for v in bag:
            x, y = g.coords[v]
            lines.append(f'    {v} [pos="{x:g},{y:g}!"];')
        lines.append("  }")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_decompose(a) -> int:
    g = load_graph(a.input, cubic=False)
    _write(a.out, decompose(g).to_json(g))
    return 0


def _cmd_ks(a) -> int:
    g = load_graph(a.input)
    t, trace = (run_ks_lifted if a.lifted else run_ks)(g)
    alpha = alpha_measure(g, t).alpha
    _write(a.tree, tree_to_json(t, alpha))
    if a.trace:
        _write(a.trace, trace.to_json())
    if a.snapshots:
        out = Path(a.snapshots)
        out.mkdir(parents=True, exist_ok=True)
        for i, (r, kind, bags) in enumerate(trace.snapshots):
            (out / f"snapshot_{i:03d}.dot").write_text(_snapshot_dot(r, kind, bags, g))
    print(f"alpha={alpha}")
    return 0


def _cmd_verify(a) -> int:
    rep = verify_bundle(a.input, a.tree)
    print(rep.line())
    return 0 if rep.ok else 1


def _cmd_oracle(a) -> int:
    g = load_graph(a.input, cubic=False)
    res = optimal_alpha(g, max_n=a.max_n)
    if a.witness:
        _write(a.witness, tree_to_json(res.witness, res.alpha_opt))
    _write(None, {"alpha_opt": res.alpha_opt, "subsets": res.subset_count})
    return 0


def _cmd_gen(a, parser: argparse.ArgumentParser) -> int:
    fam = a.family
    if fam == "hfk":
        if a.k is None or a.f is None:
            parser.error("--family hfk needs --k and --f")
        g = gen_hfk(a.k, a.f)
    elif fam == "constant":
        if a.k is None or a.c is None:
            parser.error("--family constant needs --k and --c")
        g = gen_constant_density(a.k, a.c)
    elif fam.startswith("corpus:"):
        g = corpus_entry(fam.split(":", 1)[1]).graph
    else:
        parser.error(f"unknown family {fam!r}")
    _write(a.out, graph_to_json(g))
    return 0


def _cmd_convert(a) -> int:
    data = _read_json(a.input)
    if a.to == "carving":
        _write(a.out, carving_to_json(tree_to_carving(tree_from_json(data))))
    else:
        rt = carving_from_json(data)
        problems = rt.problems(len(rt.leaf))
        if problems:
            raise ParseError("; ".join(problems))
        _write(a.out, tree_to_json(next(carving_to_trees(rt))))
    return 0


def _cmd_expand(a) -> int:
    g = load_graph(a.input, cubic=False)
    _write(a.out, graph_to_json(expand_to_three_regular(g)))
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reasm", description="Reassembly trees for plane graphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("decompose", help="peel a plane graph into layers")
    s.add_argument("input")
    s.add_argument("--out")

    s = sub.add_parser("ks", help="build a reassembly tree by layered contraction")
    s.add_argument("input")
    s.add_argument("--tree", required=True)
    s.add_argument("--trace")
    s.add_argument("--snapshots")
    s.add_argument("--lifted", action="store_true", help="accept graphs with cut vertices")

    s = sub.add_parser("verify", help="re-check a tree and its alpha bound")
    s.add_argument("input")
    s.add_argument("tree")

    s = sub.add_parser("oracle", help="exact optimum on small graphs")
    s.add_argument("input")
    s.add_argument("--max-n", type=int, default=16)
    s.add_argument("--witness")

    s = sub.add_parser("gen", help="write a generated graph")
    s.add_argument("--family", required=True, help="hfk, constant or corpus:<name>")
    s.add_argument("--k", type=int)
    s.add_argument("--f", type=int)
    s.add_argument("--c", type=int)
    s.add_argument("--out", required=True)

    s = sub.add_parser("convert", help="switch between rooted trees and carvings")
    s.add_argument("--to", required=True, choices=["carving", "tree"])
    s.add_argument("input")
    s.add_argument("--out", required=True)

    s = sub.add_parser("expand", help="replace high-degree vertices by small cycles")
    s.add_argument("input")
    s.add_argument("--out", required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        a = parser.parse_args(argv)
        handlers = {
            "decompose": _cmd_decompose,
            "ks": _cmd_ks,
            "verify": _cmd_verify,
            "oracle": _cmd_oracle,
            "gen": lambda x: _cmd_gen(x, parser),
            "convert": _cmd_convert,
            "expand": _cmd_expand,
        }
        return handlers[a.cmd](a)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ReasmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
