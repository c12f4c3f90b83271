"""
Surface-code decoders: minimum-weight perfect matching for Pauli noise and
peeling for erasures. Both work on a DecodingGraph (surface graph or its dual)
and exchange defects and corrections as int masks.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pymatching

from core.contraction import DecodingGraph
from core.pauli import indices_of, mask_from_bits

logger = logging.getLogger(__name__)

BACKENDS = ("pymatching", "networkx")
BRUTE_FORCE_LIMIT = 14


class DecoderError(Exception):
    """Ошибка декодера"""
    pass


class ErasureInconsistencyError(DecoderError):
    """Дефект вне стёртой области"""
    pass


def _path_edges(graph: nx.MultiGraph, nodes: Sequence[int]) -> List[int]:
    """Edge ids along a node path, picking the lightest (then lowest id) parallel edge."""
    edges = []
    for a, b in zip(nodes, nodes[1:]):
        parallel = graph[a][b]
        edges.append(min(parallel, key=lambda key: (parallel[key].get("weight", 1.0), key)))
    return edges


@dataclass
class DefectGraph:
    """
    Complete graph on the defects of one instance with shortest-path distances.
    """
    defects: Tuple[int, ...]
    distances: np.ndarray
    paths: Dict[Tuple[int, int], List[int]]

    @classmethod
    def build(cls, graph: nx.MultiGraph, defects: Sequence[int]) -> "DefectGraph":
        """
        Args:
            graph: Decoding multigraph with ``weight`` edge attributes
            defects: Node ids carrying a defect
        """
        defects = tuple(defects)
        k = len(defects)
        distances = np.zeros((k, k))
        paths: Dict[Tuple[int, int], List[int]] = {}
        for i, source in enumerate(defects):
            lengths, node_paths = nx.single_source_dijkstra(graph, source, weight="weight")
            for j, target in enumerate(defects):
                if i == j:
                    continue
                if target not in lengths:
                    raise DecoderError(f"Defects {source} and {target} lie in disconnected components")
                distances[i, j] = lengths[target]
                if i < j:
                    paths[(i, j)] = _path_edges(graph, node_paths[target])
        return cls(defects, distances, paths)

    def __len__(self) -> int:
        return len(self.defects)

    def is_metric(self, tol: float = 1e-9) -> bool:
        d = self.distances
        if not np.allclose(d, d.T, atol=tol):
            return False
        k = len(self.defects)
        for mid in range(k):
            if np.any(d > d[:, [mid]] + d[[mid], :] + tol):
                return False
        return True

    def pairing_weight(self, pairs: Sequence[Tuple[int, int]]) -> float:
        return float(sum(self.distances[i, j] for i, j in pairs))

    def match(self) -> List[Tuple[int, int]]:
        """Exact minimum-weight perfect matching (blossom) on the complete graph."""
        if len(self.defects) % 2:
            raise DecoderError(f"Odd number of defects: {len(self.defects)}")
        complete = nx.Graph()
        k = len(self.defects)
        for i in range(k):
            for j in range(i + 1, k):
                complete.add_edge(i, j, weight=float(self.distances[i, j]))
        matching = nx.min_weight_matching(complete, weight="weight")
        pairs = sorted(tuple(sorted(pair)) for pair in matching)
        if len(pairs) * 2 != k:
            raise DecoderError("Matching is not perfect")
        return pairs

    def min_pairing_weight(self) -> float:
        """Brute-force minimum over all pairings; small instances only."""
        k = len(self.defects)
        if k % 2:
            raise DecoderError(f"Odd number of defects: {k}")
        if k > BRUTE_FORCE_LIMIT:
            raise DecoderError(f"Brute-force pairing limited to {BRUTE_FORCE_LIMIT} defects")
        memo: Dict[int, float] = {}

        def solve(left: int) -> float:
            if not left:
                return 0.0
            if left in memo:
                return memo[left]
            first = (left & -left).bit_length() - 1
            rest = left ^ (1 << first)
            best = float("inf")
            for other in indices_of(rest):
                best = min(best, self.distances[first, other] + solve(rest ^ (1 << other)))
            memo[left] = best
            return best

        return float(solve((1 << k) - 1))


class MatchingDecoder:
    """
    Minimum-weight perfect matching on one decoding graph.

    The pymatching backend is the fast path used in simulations; the networkx
    backend matches the complete DefectGraph with blossom and returns the XOR of
    shortest paths. Both are exact.
    """

    def __init__(self, graph: DecodingGraph, weights: Optional[Sequence[float]] = None, backend: str = "pymatching"):
        self.logger = logging.getLogger(__name__)
        if backend not in BACKENDS:
            raise DecoderError(f"Unknown matching backend: {backend!r}")
        self.graph = graph
        self.backend = backend
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        if self.weights is not None and len(self.weights) != len(graph.endpoints):
            raise DecoderError(f"Expected {len(graph.endpoints)} weights, got {len(self.weights)}")
        self.nx_graph = graph.to_networkx(self.weights)
        self._matching = self._build_pymatching() if backend == "pymatching" else None
        self.logger.debug(f"Matching decoder on {graph.kind} graph: {graph.num_nodes} nodes, backend {backend}")

    def _build_pymatching(self) -> pymatching.Matching:
        matching = pymatching.Matching()
        for e, (a, b) in enumerate(self.graph.endpoints):
            if a == b:
                continue
            weight = 1.0 if self.weights is None else float(self.weights[e])
            matching.add_edge(a, b, fault_ids={e}, weight=weight, merge_strategy="smallest-weight")
        return matching

    def decode(self, defects: int) -> int:
        """
        Args:
            defects: Node mask of defects

        Returns:
            Edge mask of the correction
        """
        count = defects.bit_count()
        if count % 2:
            raise DecoderError(f"Odd number of defects ({count}) on the {self.graph.kind} graph")
        if not count:
            return 0

        if self._matching is not None:
            syndrome = np.zeros(self._matching.num_detectors, dtype=np.uint8)
            nodes = indices_of(defects)
            if nodes[-1] >= len(syndrome):
                raise DecoderError(f"Defect {nodes[-1]} outside the matching graph")
            syndrome[nodes] = 1
            correction = mask_from_bits(self._matching.decode(syndrome))
        else:
            defect_graph = DefectGraph.build(self.nx_graph, indices_of(defects))
            correction = 0
            for i, j in defect_graph.match():
                for e in defect_graph.paths[(i, j)]:
                    correction ^= 1 << e

        if self.graph.boundary(correction) != defects:
            raise DecoderError("Matching correction does not reproduce the defects")
        return correction


def mwpm_decode(graph: DecodingGraph, defects: int, weights: Optional[Sequence[float]] = None,
                backend: str = "pymatching") -> int:
    return MatchingDecoder(graph, weights, backend).decode(defects)


def peel_decode(graph: DecodingGraph, erased: int, defects: int) -> int:
    """
    Peeling decoder on the erased subgraph.

    A BFS spanning forest of the erased edges is peeled leaf-first: a tree edge
    joins the correction when its pendant node carries a defect.

    Args:
        graph: Decoding graph
        erased: Edge mask of the erasure
        defects: Node mask of defects

    Returns:
        Correction edge mask, supported inside the erasure
    """
    forest = nx.MultiGraph()
    for e in indices_of(erased):
        a, b = graph.endpoints[e]
        forest.add_edge(a, b, key=e)

    remaining = defects
    correction = 0
    for component in sorted(nx.connected_components(forest), key=min):
        root = min(component)
        tree = list(nx.bfs_edges(forest, root, sort_neighbors=sorted))
        for parent, child in reversed(tree):
            if remaining >> child & 1:
                correction ^= 1 << min(forest[parent][child])
                remaining ^= (1 << child) ^ (1 << parent)
        if remaining >> root & 1:
            raise ErasureInconsistencyError(f"Odd defect parity in erased component rooted at {root}")

    if remaining:
        raise ErasureInconsistencyError(f"Defects outside the erasure: {indices_of(remaining)}")
    return correction
