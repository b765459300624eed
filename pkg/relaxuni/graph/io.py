# filename: io.py
# @Time    : 2025/11/14 10:40
# @Software: PyCharm
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from relaxuni.exceptions import FormatError
from relaxuni.graph.graph import Graph
from relaxuni.utils import read_json, write_json

__all__ = ["GraphDocument", "graph_from_json", "graph_to_json", "load_graph", "save_graph"]


class GraphDocument(BaseModel):
    """
    图的 JSON 表示 | JSON form of a graph: {"n": int, "edges": [[u, v], ...]}
    """

    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)
    weights: list[float] | None = None


def graph_to_json(g: Graph) -> dict[str, Any]:
    doc = GraphDocument(n=g.n, edges=list(g.edges), weights=list(g.weights) if g.weights is not None else None)
    return doc.model_dump(exclude_none=True)


def graph_from_json(payload: dict[str, Any]) -> Graph:
    try:
        doc = GraphDocument.model_validate(payload)
    except ValidationError as e:
        raise FormatError("invalid graph document", detail=str(e)) from e
    return Graph.from_edges(doc.n, doc.edges, doc.weights)


def save_graph(g: Graph, path: str | Path) -> Path:
    return write_json(path, graph_to_json(g))


def load_graph(path: str | Path) -> Graph:
    return graph_from_json(read_json(path))
