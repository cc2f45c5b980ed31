"""
Deterministic JSON and DOT writers.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

import networkx as nx

logger = logging.getLogger(__name__)


def to_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _quote(value: Any) -> str:
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def _attributes(data: dict) -> str:
    if not data:
        return ""
    items = ", ".join(f"{key}={_quote(data[key])}" for key in sorted(data))
    return f" [{items}]"


def to_dot(graph: nx.Graph, name: str = "G") -> str:
    """Render a networkx graph as DOT with nodes and edges in sorted order."""
    directed = graph.is_directed()
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {_quote(name)} {{"]
    for node in sorted(graph.nodes, key=str):
        lines.append(f"  {_quote(node)}{_attributes(dict(graph.nodes[node]))};")
    if graph.is_multigraph():
        edges = [(u, v, dict(d)) for u, v, _, d in graph.edges(keys=True, data=True)]
    else:
        edges = [(u, v, dict(d)) for u, v, d in graph.edges(data=True)]
    if not directed:
        edges = [(u, v, d) if str(u) <= str(v) else (v, u, d) for u, v, d in edges]
    for u, v, data in sorted(edges, key=lambda e: (str(e[0]), str(e[1]), _attributes(e[2]))):
        lines.append(f"  {_quote(u)} {arrow} {_quote(v)}{_attributes(data)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_text(text: str, path: Optional[Union[str, Path]]) -> None:
    """Write to `path`, or to stdout when path is None or "-"."""
    if path is None or str(path) == "-":
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
