"""
Contraction of the c-colored faces of a color-code lattice into a surface-code
graph, with the vertex/edge/face correspondences back to the lattice.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from core.colex import COLORS, Colex, validate
from core.pauli import PauliOp, StabilizerGroup, indices_of

logger = logging.getLogger(__name__)


class ContractionError(Exception):
    """Ошибка стягивания граней"""
    pass


def surface_qubit(edge: int, copy: int) -> int:
    """Doubled-system qubit of surface edge ``edge`` in copy 1 or 2."""
    if copy not in (1, 2):
        raise ContractionError(f"Copy must be 1 or 2, got {copy}")
    return 2 * edge + (copy - 1)


def lift_to_copy(mask: int, copy: int) -> int:
    """Single-copy edge mask -> doubled-system mask."""
    offset = copy - 1
    result = 0
    for e in indices_of(mask):
        result |= 1 << (2 * e + offset)
    return result


def restrict_to_copy(mask: int, copy: int) -> int:
    """Doubled-system mask -> single-copy edge mask."""
    offset = copy - 1
    result = 0
    for q in indices_of(mask):
        if q & 1 == offset:
            result |= 1 << (q >> 1)
    return result


@dataclass(frozen=True)
class DecodingGraph:
    """
    Graph on which one defect type is matched: the surface graph itself
    (nodes = vertices) or its dual (nodes = faces). Edge ids are surface edge
    ids in both cases; parallel edges stay distinct.
    """
    kind: str
    num_nodes: int
    endpoints: Tuple[Tuple[int, int], ...]

    @cached_property
    def endpoint_masks(self) -> List[int]:
        return [(1 << a) ^ (1 << b) for a, b in self.endpoints]

    def boundary(self, edge_mask: int) -> int:
        """Syndrome (node mask) of an edge set."""
        result = 0
        for e in indices_of(edge_mask):
            result ^= self.endpoint_masks[e]
        return result

    def to_networkx(self, weights: Optional[Sequence[float]] = None) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.num_nodes))
        for e, (a, b) in enumerate(self.endpoints):
            graph.add_edge(a, b, key=e, weight=1.0 if weights is None else float(weights[e]))
        return graph


@dataclass(frozen=True)
class SurfaceGraph:
    """
    Contracted lattice. Surface vertices are c-faces, surface edges are
    c-edges, surface faces are the remaining faces.
    """
    color: str
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    faces: Tuple[Tuple[int, ...], ...]
    tau_face: Dict[int, int]
    tau_edge: Dict[int, int]
    tau_vertex: Tuple[int, ...]
    tau_f2f: Dict[int, int]
    vertex_source: Tuple[int, ...]
    edge_source: Tuple[int, ...]
    face_source: Tuple[int, ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def num_doubled_qubits(self) -> int:
        return 2 * len(self.edges)

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @cached_property
    def stars(self) -> List[List[int]]:
        """Edges incident on each vertex (a self loop appears twice)."""
        table: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for e, (a, b) in enumerate(self.edges):
            table[a].append(e)
            table[b].append(e)
        return table

    @cached_property
    def edge_faces(self) -> List[Tuple[int, int]]:
        owners: List[List[int]] = [[] for _ in self.edges]
        for f, boundary in enumerate(self.faces):
            for e in boundary:
                owners[e].append(f)
        for e, owner in enumerate(owners):
            if len(owner) != 2:
                raise ContractionError(f"Surface edge {e} lies on {len(owner)} faces")
        return [(owner[0], owner[1]) for owner in owners]

    @cached_property
    def primal(self) -> DecodingGraph:
        return DecodingGraph("primal", self.num_vertices, self.edges)

    @cached_property
    def dual(self) -> DecodingGraph:
        return DecodingGraph("dual", self.num_faces, tuple(self.edge_faces))

    def decoding_graph(self, kind: str) -> DecodingGraph:
        if kind == "primal":
            return self.primal
        if kind == "dual":
            return self.dual
        raise ContractionError(f"Unknown decoding graph: {kind!r}")


def contract(colex: Colex, c: str) -> SurfaceGraph:
    """
    Contract every c-colored face of the lattice (with its boundary) to a point.

    Args:
        colex: Valid lattice
        c: Contracted color

    Returns:
        SurfaceGraph with all correspondences populated
    """
    if c not in COLORS:
        raise ContractionError(f"Unknown color: {c!r}")
    report = validate(colex)
    if not report:
        raise ContractionError(f"Cannot contract an invalid lattice: {report.message}")

    c_faces = colex.faces_of_color(c)
    tau_face = {f: index for index, f in enumerate(c_faces)}

    c_edges = colex.edges_of_color(c)
    tau_edge = {}
    endpoints = []
    for index, e in enumerate(c_edges):
        edge = colex.edges[e]
        a = tau_face[colex.face_of_color_at(edge.u, c)]
        b = tau_face[colex.face_of_color_at(edge.v, c)]
        tau_edge[e] = index
        endpoints.append((a, b))

    tau_vertex = []
    for v in range(colex.n):
        owned = [e for e in colex.vertex_edges[v] if colex.edges[e].color == c]
        if len(owned) != 1:
            raise ContractionError(f"Vertex {v} has {len(owned)} {c}-edges")
        tau_vertex.append(tau_edge[owned[0]])

    tau_f2f = {}
    surface_faces = []
    face_source = []
    for f, face in enumerate(colex.faces):
        if face.color == c:
            continue
        tau_f2f[f] = len(surface_faces)
        surface_faces.append(tuple(tau_edge[e] for e in colex.face_edges[f] if colex.edges[e].color == c))
        face_source.append(f)

    graph = SurfaceGraph(
        color=c,
        num_vertices=len(c_faces),
        edges=tuple(endpoints),
        faces=tuple(surface_faces),
        tau_face=tau_face,
        tau_edge=tau_edge,
        tau_vertex=tuple(tau_vertex),
        tau_f2f=tau_f2f,
        vertex_source=tuple(c_faces),
        edge_source=tuple(c_edges),
        face_source=tuple(face_source),
    )

    if graph.num_edges * 2 != colex.n:
        raise ContractionError(f"Expected {colex.n // 2} surface edges, got {graph.num_edges}")
    if graph.euler_characteristic() != colex.euler_characteristic():
        raise ContractionError("Contraction changed the Euler characteristic")
    logger.debug(
        f"Contracted {c}-faces: V={graph.num_vertices}, E={graph.num_edges}, F={graph.num_faces}"
    )
    return graph


@dataclass(frozen=True)
class SurfaceStabilizers:
    vertex_ops: Tuple[PauliOp, ...]
    face_ops: Tuple[PauliOp, ...]

    def all(self) -> List[PauliOp]:
        return list(self.vertex_ops) + list(self.face_ops)


def surface_stabilizers(graph: SurfaceGraph) -> SurfaceStabilizers:
    """A_v = X on the star of v, B_f = Z on the boundary of f."""
    n = graph.num_edges
    vertex_ops = []
    for star in graph.stars:
        mask = 0
        for e in star:
            mask ^= 1 << e
        vertex_ops.append(PauliOp(n, mask, 0))
    face_ops = []
    for boundary in graph.faces:
        mask = 0
        for e in boundary:
            mask ^= 1 << e
        face_ops.append(PauliOp(n, 0, mask))
    return SurfaceStabilizers(tuple(vertex_ops), tuple(face_ops))


def doubled_stabilizer_group(graph: SurfaceGraph) -> StabilizerGroup:
    """Stabilizer group of both copies on the 2|E| doubled qubits."""
    stabilizers = surface_stabilizers(graph)
    n = graph.num_doubled_qubits
    generators = []
    for copy in (1, 2):
        for op in stabilizers.all():
            generators.append(PauliOp(n, lift_to_copy(op.x, copy), lift_to_copy(op.z, copy)))
    return StabilizerGroup(generators, n)
