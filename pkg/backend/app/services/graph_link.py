"""Planar multigraph of a chain model, spanning trees and the Goeritz form.

Each 0-framed unknot U_i becomes a vertex v_i, an extra vertex v_{n+1}
collects the meridians, and every (-1)-framed circle becomes an edge. The
graph is the black graph of an alternating link whose double branched
cover is the model manifold, so three determinants must agree: the
linking matrix, the spanning-tree count and the Goeritz matrix.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx
from sympy import Matrix

from ..errors import InvalidInputError
from .kirby import ModelDiagram, linking_matrix

logger = logging.getLogger(__name__)


def graph_from_model(m: ModelDiagram) -> nx.MultiGraph:
    g = nx.MultiGraph()
    hub = m.n + 1
    g.add_nodes_from(range(1, hub + 1))
    for i, count in enumerate(m.p, start=1):
        g.add_edges_from([(i, i + 1)] * count)
    for i, count in enumerate(m.q, start=1):
        g.add_edges_from([(i, hub)] * count)
    # a lens summand L(k, 1) hangs off the hub as a k-edge bundle
    for s, k in enumerate(m.lens_summands, start=1):
        g.add_node(hub + s)
        g.add_edges_from([(hub, hub + s)] * k)
    return g


def edge_multiplicities(g: nx.MultiGraph) -> Dict[Tuple[int, int], int]:
    counts: Dict[Tuple[int, int], int] = {}
    for u, v in g.edges():
        key = (min(u, v), max(u, v))
        counts[key] = counts.get(key, 0) + 1
    return counts


def _laplacian(g: nx.MultiGraph, nodes: List) -> Matrix:
    index = {v: i for i, v in enumerate(nodes)}
    lap = Matrix.zeros(len(nodes), len(nodes))
    for u, v in g.edges():
        if u == v:
            continue
        a, b = index[u], index[v]
        lap[a, a] += 1
        lap[b, b] += 1
        lap[a, b] -= 1
        lap[b, a] -= 1
    return lap


def spanning_tree_count(g: nx.MultiGraph) -> int:
    """Number of spanning trees, by the matrix-tree theorem."""
    if g.number_of_nodes() == 0 or not nx.is_connected(g):
        return 0
    if g.number_of_nodes() == 1:
        return 1
    nodes = sorted(g.nodes())
    reduced = _laplacian(g, nodes)[1:, 1:]
    return int(reduced.det(method="bareiss"))


def goeritz_matrix(g: nx.MultiGraph, root: Optional[int] = None) -> List[List[int]]:
    """Negative of the Laplacian with the root row and column removed."""
    nodes = sorted(g.nodes())
    if root is None:
        root = nodes[-1]
    if root not in g:
        raise InvalidInputError(f"root vertex {root} is not in the graph")
    keep = [v for v in nodes if v != root]
    lap = _laplacian(g, nodes)
    index = {v: i for i, v in enumerate(nodes)}
    return [[-int(lap[index[u], index[v]]) for v in keep] for u in keep]


@dataclass(frozen=True)
class ConsistencyReport:
    linking_det: int
    tree_count: int
    goeritz_det: int

    @property
    def passed(self) -> bool:
        return self.linking_det == self.tree_count == self.goeritz_det


def consistency_check(m: ModelDiagram) -> ConsistencyReport:
    g = graph_from_model(m)
    goeritz = goeritz_matrix(g, m.n + 1)
    goeritz_det = abs(int(Matrix(goeritz).det(method="bareiss"))) if goeritz else 1
    report = ConsistencyReport(
        linking_det=abs(linking_matrix(m).determinant()),
        tree_count=spanning_tree_count(g),
        goeritz_det=goeritz_det,
    )
    if not report.passed:
        logger.error(f"Determinant mismatch for {m}: {report}")
    return report


def dot_graph(g: nx.MultiGraph, name: str = "model") -> str:
    lines = [f"graph {name} {{"]
    for v in sorted(g.nodes()):
        lines.append(f"  v{v};")
    for (u, v), count in sorted(edge_multiplicities(g).items()):
        for _ in range(count):
            lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
