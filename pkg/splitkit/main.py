"""
splitkit command line.

Each subcommand loads its inputs, runs one computation and writes a JSON
report (stdout unless --json names a file) and, where it makes sense, a DOT
graph (--dot). Exit status: 0 on success, 2 when the only problem is an
unresolved verdict, 1 on errors.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Optional, Sequence

import networkx as nx
from pydantic import ValidationError

from .bass_serre import local_tree, minimal_subtree
from .cayley import ball, estimate_ends, quotient_ball
from .config import settings
from .crossing import crosses, crosses_strongly, intersection_number, strong_intersection_number
from .dunwoody import assemble_graph_of_groups, build_tree, validate_poset
from .errors import SplitkitError
from .loaders import build_group, build_poset, build_splitting, build_subgroup
from .output import to_dot, to_json, write_text
from .presentation import format_word
from .schemas import RunConfig
from .splitting import HalfSpace, Variant, validate_splitting
from .surface_oracle import Slope, brute_force_crossing_count, slope_intersection, slope_splitting

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNRESOLVED = 2

# (payload, resolved, optional graph for --dot)
Result = tuple[dict[str, Any], bool, Optional[nx.Graph]]


# =============================================================================
# Commands
# =============================================================================

def _word(cfg: RunConfig, key: str = "word") -> str:
    return cfg.options.get(key, "1")


def _nf(cfg: RunConfig) -> Result:
    s = validate_splitting(cfg.inputs["splitting"][0])
    word = s.ambient.parse(_word(cfg))
    nf = s.normal_form(word)
    return {"splitting": s.name, "word": format_word(word), "normal_form": nf.to_dict()}, True, None


def _side(cfg: RunConfig) -> Result:
    s = validate_splitting(cfg.inputs["splitting"][0])
    word = s.ambient.parse(_word(cfg))
    hs = HalfSpace(s, s.ambient.parse(_word(cfg, "translator")), Variant(cfg.options.get("variant", "X")))
    return {"half_space": hs.label(), "word": format_word(word), "member": hs.contains(word)}, True, None


def _ball(cfg: RunConfig) -> Result:
    group = build_group(cfg.inputs["group"][0])
    if "subgroup" in cfg.options:
        cayley = quotient_ball(group, build_subgroup(group, cfg.options["subgroup"]), cfg.radius)
    else:
        cayley = ball(group, cfg.radius)
    graph = nx.relabel_nodes(cayley.graph, format_word)
    payload = {
        "group": group.name,
        "radius": cfg.radius,
        "vertices": graph.number_of_nodes(),
        "edges": graph.number_of_edges(),
    }
    return payload, True, graph


def _ends(cfg: RunConfig) -> Result:
    group = build_group(cfg.inputs["group"][0])
    sub = build_subgroup(group, cfg.options.get("subgroup", "trivial"))
    estimate = estimate_ends(group, sub, cfg.radius)
    return {"group": group.name, "subgroup": sub.describe(), **estimate.to_dict()}, estimate.certified_radius is not None, None


def _pair(cfg: RunConfig):
    return validate_splitting(cfg.inputs["s"][0]), validate_splitting(cfg.inputs["t"][0])


def _cross(cfg: RunConfig) -> Result:
    s, t = _pair(cfg)
    x_hs = HalfSpace(s, s.ambient.parse(_word(cfg, "translator")), Variant(cfg.options.get("x_variant", "X")))
    y_hs = HalfSpace(t, (), Variant(cfg.options.get("y_variant", "X")))
    test = crosses_strongly if cfg.options.get("strong") == "true" else crosses
    verdict = test(x_hs, y_hs, cfg.radius)
    return {"x": x_hs.label(), "y": y_hs.label(), "verdict": verdict.to_dict()}, verdict.certified, None


def _counting(count: Callable) -> Callable[[RunConfig], Result]:
    def run(cfg: RunConfig) -> Result:
        s, t = _pair(cfg)
        report = count(
            s,
            t,
            cfg.radius,
            probe_radius=cfg.probe_radius,
            x_variant=Variant(cfg.options.get("x_variant", "X")),
            y_variant=Variant(cfg.options.get("y_variant", "X")),
        )
        return {"s": s.name, "t": t.name, **report.to_dict()}, report.exact, None

    return run


def _tree(cfg: RunConfig) -> Result:
    s = validate_splitting(cfg.inputs["splitting"][0])
    local = local_tree(s, cfg.depth)
    payload = {
        "splitting": s.name,
        "depth": cfg.depth,
        "vertices": local.graph.number_of_nodes(),
        "edges": local.edge_count,
    }
    return payload, True, local.graph


def _psi(cfg: RunConfig) -> Result:
    actor = validate_splitting(cfg.inputs["actor"][0])
    target = validate_splitting(cfg.inputs["target"][0])
    quotient = minimal_subtree(target, actor.edge_subgroup(), cfg.depth)
    return {"actor": actor.name, "tree": target.name, **quotient.to_dict()}, quotient.stable, quotient.graph


def _dtree(cfg: RunConfig) -> Result:
    poset = validate_poset(build_poset(cfg.inputs["poset"][0]))
    tree = build_tree(poset)
    graph = nx.Graph()
    graph.add_nodes_from(tree.graph.nodes)
    for u, v, e in tree.graph.edges(data="element"):
        graph.add_edge(u, v, label=f"{e} / {tree.involution[e]}")
    payload = {
        "elements": len(poset.elements),
        "vertices": tree.graph.number_of_nodes(),
        "edges": tree.graph.number_of_edges(),
        "heads": {str(e): tree.head(e) for e in poset.elements},
    }
    return payload, True, graph


def _gog(cfg: RunConfig) -> Result:
    splittings = [validate_splitting(path) for path in cfg.inputs["splittings"]]
    gog = assemble_graph_of_groups(splittings, cfg.radius, cfg.translate_radius)
    return gog.to_dict(), bool(gog.stable), gog.graph


def _oracle(cfg: RunConfig) -> Result:
    a, b = Slope.parse(cfg.options["a"]), Slope.parse(cfg.options["b"])
    s, t = slope_splitting(a), slope_splitting(b)
    determinant = slope_intersection(a, b)
    brute = brute_force_crossing_count(s, t, cfg.radius)
    report = intersection_number(s, t, cfg.radius, probe_radius=cfg.probe_radius)
    payload = {
        "a": str(a),
        "b": str(b),
        "radius": cfg.radius,
        "determinant": determinant,
        "brute_force": brute,
        "library": report.count,
        "library_exact": report.exact,
        "agree": determinant == brute == report.count,
    }
    return payload, report.exact, None


COMMANDS: dict[str, Callable[[RunConfig], Result]] = {
    "nf": _nf,
    "side": _side,
    "ball": _ball,
    "ends": _ends,
    "cross": _cross,
    "inum": _counting(intersection_number),
    "sinum": _counting(strong_intersection_number),
    "tree": _tree,
    "psi": _psi,
    "dtree": _dtree,
    "gog": _gog,
    "oracle": _oracle,
}


def _apply_overrides(cfg: RunConfig) -> None:
    for field in ("threads", "budget_mb", "growth_window", "stable_window", "translate_radius"):
        value = getattr(cfg, field)
        if value is not None:
            setattr(settings, field, value)


def execute(cfg: RunConfig) -> int:
    """Run one command and write its artifacts; returns the exit status."""
    _apply_overrides(cfg)
    try:
        payload, resolved, graph = COMMANDS[cfg.command](cfg)
    except SplitkitError as exc:
        logger.error(f"{cfg.command} failed: {type(exc).__name__}: {exc}")
        write_text(to_json({"command": cfg.command, "error": type(exc).__name__, "message": str(exc)}), cfg.json_path)
        return EXIT_ERROR
    payload = {"command": cfg.command, "resolved": resolved, **payload}
    write_text(to_json(payload), cfg.json_path)
    if cfg.dot_path and graph is not None:
        write_text(to_dot(graph, cfg.command), cfg.dot_path)
    if not resolved:
        logger.warning(f"{cfg.command}: result unresolved at the given radius")
        return EXIT_UNRESOLVED
    return EXIT_OK


# =============================================================================
# Argument parsing
# =============================================================================

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--radius", type=int, default=6, help="ball radius")
    parser.add_argument("--depth", type=int, default=3, help="tree depth")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--budget-mb", type=int, help="memory budget for balls")
    parser.add_argument("--growth-window", type=int, help="radii a growing projection must span")
    parser.add_argument("--stable-window", type=int, help="radii a stable projection must span")
    parser.add_argument("--json", dest="json_path", help="write the JSON report here (default stdout)")
    parser.add_argument("--dot", dest="dot_path", help="write a DOT graph here")
    parser.add_argument("--log-level", help="logging level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitkit", description="Intersection theory of group splittings.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("nf", "side", "tree"):
        p = sub.add_parser(name)
        p.add_argument("--splitting", required=True)
        if name == "tree":
            p.add_argument("--out", dest="dot_out", help="alias for --dot")
        else:
            p.add_argument("--word", default="1")
        if name == "side":
            p.add_argument("--translator", default="1")
            p.add_argument("--variant", default="X", choices=[v.value for v in Variant])
        _add_common(p)

    for name in ("ball", "ends"):
        p = sub.add_parser(name)
        p.add_argument("--group", required=True)
        p.add_argument("--subgroup", default=None if name == "ball" else "trivial")
        if name == "ball":
            p.add_argument("--out", dest="dot_out", help="alias for --dot")
        _add_common(p)

    for name in ("cross", "inum", "sinum"):
        p = sub.add_parser(name)
        p.add_argument("--s", required=True, help="splitting file for X")
        p.add_argument("--t", required=True, help="splitting file for Y")
        p.add_argument("--x-variant", default="X", choices=[v.value for v in Variant])
        p.add_argument("--y-variant", default="X", choices=[v.value for v in Variant])
        p.add_argument("--probe-radius", type=int)
        if name == "cross":
            p.add_argument("--translator", default="1")
            p.add_argument("--strong", action="store_true")
        _add_common(p)

    p = sub.add_parser("psi")
    p.add_argument("--actor", required=True, help="splitting whose edge group acts")
    p.add_argument("--target", required=True, help="splitting whose tree is acted on")
    p.add_argument("--out", dest="dot_out", help="alias for --dot")
    _add_common(p)

    p = sub.add_parser("dtree")
    p.add_argument("--poset", required=True)
    p.add_argument("--out", dest="dot_out", help="alias for --dot")
    _add_common(p)

    p = sub.add_parser("gog")
    p.add_argument("--splittings", nargs="+", required=True)
    p.add_argument("--translate-radius", type=int)
    p.add_argument("--out", dest="dot_out", help="alias for --dot")
    _add_common(p)

    p = sub.add_parser("oracle")
    p.add_argument("kind", choices=["slopes"])
    p.add_argument("--a", required=True, help="slope p/q")
    p.add_argument("--b", required=True, help="slope p/q")
    p.add_argument("--probe-radius", type=int)
    _add_common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Collect parsed flags into a validated RunConfig."""
    values = vars(args)
    inputs: dict[str, list[str]] = {}
    for key in ("splitting", "group", "s", "t", "actor", "target", "poset"):
        if values.get(key):
            inputs[key] = [values[key]]
    if values.get("splittings"):
        inputs["splittings"] = list(values["splittings"])
    options: dict[str, str] = {}
    for key in ("word", "translator", "variant", "subgroup", "x_variant", "y_variant", "a", "b"):
        if values.get(key) is not None:
            options[key] = str(values[key])
    if values.get("strong"):
        options["strong"] = "true"
    return RunConfig(
        command=args.command,
        inputs=inputs,
        radius=args.radius,
        depth=args.depth,
        probe_radius=values.get("probe_radius"),
        translate_radius=values.get("translate_radius"),
        threads=args.threads,
        budget_mb=args.budget_mb,
        growth_window=args.growth_window,
        stable_window=args.stable_window,
        json_path=args.json_path,
        dot_path=args.dot_path or values.get("dot_out"),
        options=options,
    )


def configure_logging(level: Optional[str] = None) -> None:
    chosen = "DEBUG" if settings.debug else (level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, chosen, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        cfg = config_from_args(args)
    except ValidationError as exc:
        logger.error(f"Invalid arguments: {exc}")
        return EXIT_ERROR
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
