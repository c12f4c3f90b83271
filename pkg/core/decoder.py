"""
Color-code decoding through the two surface copies: Pauli-noise pipeline,
erasure pipeline and logical success classification.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import networkx as nx

from core.codemap import CodeMap
from core.contraction import DecodingGraph, SurfaceGraph, lift_to_copy, restrict_to_copy, surface_stabilizers
from core.noise import InducedModel
from core.pauli import PauliOp, StabilizerGroup, indices_of, parity
from core.surface_decoders import DecoderError, MatchingDecoder, peel_decode
from core.syndrome import ColorSyndrome, SurfaceSyndrome, SyndromeProjector, measure

logger = logging.getLogger(__name__)

# (copy, kind): "vertex" instances carry Z errors and match on the surface
# graph, "face" instances carry X errors and match on its dual.
INSTANCES = ((1, "vertex"), (1, "face"), (2, "vertex"), (2, "face"))


class DecodeOutcome(Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"


@dataclass(frozen=True)
class ErasurePattern:
    """
    Erased color qubits and the surface edges each decoding instance treats
    as erased. ``x_support[c]`` serves the face instance of copy c + 1,
    ``z_support[c]`` its vertex instance.
    """
    erased: int
    naive: bool
    x_support: Tuple[int, int]
    z_support: Tuple[int, int]

    def support(self, copy: int, kind: str) -> int:
        return self.x_support[copy - 1] if kind == "face" else self.z_support[copy - 1]

    def total(self) -> int:
        return sum(mask.bit_count() for mask in self.x_support + self.z_support)


def map_erasure(code_map: CodeMap, erased: int, naive: bool = False) -> ErasurePattern:
    """
    Surface erasures induced by erased color qubits.

    Improved map: each instance takes the matching Pauli type of pi(X_i) and
    pi(Z_i) on its copy. Naive map: the whole support of pi(Y_i) on a copy is
    erased for both instances of that copy.
    """
    x1 = x2 = z1 = z2 = 0
    for q in indices_of(erased):
        x_image, z_image = code_map.x_images[q], code_map.z_images[q]
        if naive:
            support = x_image.x | x_image.z | z_image.x | z_image.z
            first, second = restrict_to_copy(support, 1), restrict_to_copy(support, 2)
            x1 |= first
            z1 |= first
            x2 |= second
            z2 |= second
        else:
            x_part = x_image.x | z_image.x
            z_part = x_image.z | z_image.z
            x1 |= restrict_to_copy(x_part, 1)
            x2 |= restrict_to_copy(x_part, 2)
            z1 |= restrict_to_copy(z_part, 1)
            z2 |= restrict_to_copy(z_part, 2)
    return ErasurePattern(erased, naive, (x1, x2), (z1, z2))


def _fundamental_cycles(graph: DecodingGraph) -> List[int]:
    """Fundamental cycles of a BFS spanning forest, one per non-tree edge."""
    multigraph = graph.to_networkx()
    parent: Dict[int, Optional[Tuple[int, int]]] = {}
    tree = set()
    for component in sorted(nx.connected_components(multigraph), key=min):
        root = min(component)
        parent[root] = None
        for u, v in nx.bfs_edges(multigraph, root, sort_neighbors=sorted):
            e = min(multigraph[u][v])
            parent[v] = (u, e)
            tree.add(e)

    def to_root(node: int) -> int:
        path = 0
        while parent[node] is not None:
            node, e = parent[node]
            path ^= 1 << e
        return path

    cycles = []
    for e, (a, b) in enumerate(graph.endpoints):
        if e not in tree:
            cycles.append((1 << e) ^ to_root(a) ^ to_root(b))
    return cycles


def _independent_logicals(candidates: List[int], span: List[PauliOp], make_op, n: int) -> List[int]:
    accepted: List[int] = []
    group = StabilizerGroup(span, n)
    for cycle in candidates:
        if not group.contains(make_op(cycle)):
            accepted.append(cycle)
            if len(accepted) == 2:
                break
            group = StabilizerGroup(span + [make_op(c) for c in accepted], n)
    if len(accepted) != 2:
        raise DecoderError(f"Found {len(accepted)} independent non-contractible cycles, expected 2")
    return accepted


def find_logical_cycles(graph: SurfaceGraph) -> Tuple[List[int], List[int]]:
    """
    Two independent non-contractible cycles on the surface graph and two on
    its dual, as edge masks.

    Returns:
        (primal cycles = Z logicals, dual cycles = X logicals)
    """
    n = graph.num_edges
    stabilizers = surface_stabilizers(graph)
    primal = _independent_logicals(
        _fundamental_cycles(graph.primal), list(stabilizers.face_ops), lambda c: PauliOp(n, 0, c), n
    )
    dual = _independent_logicals(
        _fundamental_cycles(graph.dual), list(stabilizers.vertex_ops), lambda c: PauliOp(n, c, 0), n
    )
    logger.debug(f"Logical cycles: primal weights {[c.bit_count() for c in primal]}, dual weights {[c.bit_count() for c in dual]}")
    return primal, dual


class LogicalClassifier:
    """Decides whether E * E_hat is a stabilizer by commutation with mapped logicals."""

    def __init__(self, code_map: CodeMap):
        self.logger = logging.getLogger(__name__)
        self.code_map = code_map
        primal, dual = find_logical_cycles(code_map.graph)
        self.primal_cycles = primal
        self.dual_cycles = dual
        # Z logicals see the X part of the mapped residual, X logicals its Z part
        self._x_checks = [lift_to_copy(c, copy) for copy in (1, 2) for c in primal]
        self._z_checks = [lift_to_copy(c, copy) for copy in (1, 2) for c in dual]

    def classify(self, error: PauliOp, estimate: PauliOp) -> DecodeOutcome:
        residual = error * estimate
        syndrome = measure(self.code_map.colex, residual)
        if not syndrome.is_trivial():
            raise DecoderError(f"Residual {residual} has a nonzero syndrome")
        image = self.code_map.apply(residual)
        for mask in self._x_checks:
            if parity(image.x & mask):
                return DecodeOutcome.LOGICAL_FAILURE
        for mask in self._z_checks:
            if parity(image.z & mask):
                return DecodeOutcome.LOGICAL_FAILURE
        return DecodeOutcome.SUCCESS


class ColorCodeDecoder:
    """
    Decodes color-code syndromes by projecting them onto the surface copies,
    decoding the four instances independently and lifting the correction back.
    """

    def __init__(self, code_map: CodeMap, model: Optional[InducedModel] = None, backend: str = "pymatching"):
        self.logger = logging.getLogger(__name__)
        self.code_map = code_map
        self.graph = code_map.graph
        self.model = model
        self.projector = SyndromeProjector(code_map.colex, code_map.graph, code_map.labeling)
        self.matchers: Dict[Tuple[int, str], MatchingDecoder] = {}
        for copy, kind in INSTANCES:
            graph = self.graph.primal if kind == "vertex" else self.graph.dual
            weights = None
            if model is not None:
                weights = model.edge_weights(copy, "Z" if kind == "vertex" else "X")
            self.matchers[(copy, kind)] = MatchingDecoder(graph, weights, backend)
        self.logger.debug(f"Color decoder ready (weighted={model is not None}, backend={backend})")

    def _lift(self, x_corrections: Tuple[int, int], z_corrections: Tuple[int, int]) -> PauliOp:
        x = lift_to_copy(x_corrections[0], 1) | lift_to_copy(x_corrections[1], 2)
        z = lift_to_copy(z_corrections[0], 1) | lift_to_copy(z_corrections[1], 2)
        surface = PauliOp(self.code_map.num_surface_qubits, x, z)
        return self.code_map.apply_inverse(surface)

    def surface_correction(self, surface_syndrome: SurfaceSyndrome) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """Per-copy (X corrections, Z corrections) as edge masks."""
        x_corrections = tuple(self.matchers[(copy, "face")].decode(surface_syndrome.face[copy - 1]) for copy in (1, 2))
        z_corrections = tuple(self.matchers[(copy, "vertex")].decode(surface_syndrome.vertex[copy - 1]) for copy in (1, 2))
        return x_corrections, z_corrections

    def decode(self, syndrome: ColorSyndrome) -> PauliOp:
        if syndrome.is_trivial():
            return PauliOp.identity(self.code_map.n)
        surface_syndrome = self.projector.project(syndrome)
        x_corrections, z_corrections = self.surface_correction(surface_syndrome)
        return self._lift(x_corrections, z_corrections)

    def decode_erasure(self, erased: int, syndrome: ColorSyndrome, naive: bool = False) -> PauliOp:
        pattern = map_erasure(self.code_map, erased, naive)
        surface_syndrome = self.projector.project(syndrome)
        x_corrections = tuple(
            peel_decode(self.graph.dual, pattern.support(copy, "face"), surface_syndrome.face[copy - 1])
            for copy in (1, 2)
        )
        z_corrections = tuple(
            peel_decode(self.graph.primal, pattern.support(copy, "vertex"), surface_syndrome.vertex[copy - 1])
            for copy in (1, 2)
        )
        return self._lift(x_corrections, z_corrections)


def decode_color(code_map: CodeMap, syndrome: ColorSyndrome, model: Optional[InducedModel] = None,
                 backend: str = "pymatching") -> PauliOp:
    return ColorCodeDecoder(code_map, model, backend).decode(syndrome)


def decode_erasure(code_map: CodeMap, erased: int, syndrome: ColorSyndrome, naive: bool = False) -> PauliOp:
    return ColorCodeDecoder(code_map).decode_erasure(erased, syndrome, naive)


def classify(code_map: CodeMap, error: PauliOp, estimate: PauliOp) -> DecodeOutcome:
    return LogicalClassifier(code_map).classify(error, estimate)
