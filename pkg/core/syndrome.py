"""
Color-code syndromes and their linear-time projection onto the two surface copies
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from core.colex import Colex, FaceLabeling
from core.contraction import SurfaceGraph
from core.pauli import PauliOp, indices_of

logger = logging.getLogger(__name__)


class SyndromeError(Exception):
    """Ошибка проекции синдрома на копии поверхностного кода"""
    pass


@dataclass(frozen=True)
class ColorSyndrome:
    """
    One bit per face and stabilizer type.

    ``x`` holds s^X (outcomes of B_f^X, flipped by Z errors), ``z`` holds s^Z
    (outcomes of B_f^Z, flipped by X errors).
    """
    num_faces: int
    x: int = 0
    z: int = 0

    def __xor__(self, other: "ColorSyndrome") -> "ColorSyndrome":
        return ColorSyndrome(self.num_faces, self.x ^ other.x, self.z ^ other.z)

    def is_trivial(self) -> bool:
        return not (self.x or self.z)

    def defects(self, kind: str) -> List[int]:
        return indices_of(self.x if kind == "X" else self.z)


@dataclass(frozen=True)
class SurfaceSyndrome:
    """
    Defects on both copies. Index 0 of each pair is copy 1, index 1 copy 2.
    Vertex defects come from A_v (Z errors), face defects from B_f (X errors).
    """
    num_vertices: int
    num_faces: int
    vertex: Tuple[int, int] = (0, 0)
    face: Tuple[int, int] = (0, 0)

    def is_trivial(self) -> bool:
        return not any(self.vertex) and not any(self.face)

    def vertex_defects(self, copy: int) -> List[int]:
        return indices_of(self.vertex[copy - 1])

    def face_defects(self, copy: int) -> List[int]:
        return indices_of(self.face[copy - 1])

    def __xor__(self, other: "SurfaceSyndrome") -> "SurfaceSyndrome":
        return SurfaceSyndrome(
            self.num_vertices,
            self.num_faces,
            (self.vertex[0] ^ other.vertex[0], self.vertex[1] ^ other.vertex[1]),
            (self.face[0] ^ other.face[0], self.face[1] ^ other.face[1]),
        )


def measure(colex: Colex, error: PauliOp) -> ColorSyndrome:
    """Syndrome of E against every face stabilizer."""
    s_x = s_z = 0
    masks = colex.vertex_face_masks
    for q in indices_of(error.z):
        s_x ^= masks[q]
    for q in indices_of(error.x):
        s_z ^= masks[q]
    return ColorSyndrome(len(colex.faces), s_x, s_z)


def measure_surface(graph: SurfaceGraph, op: PauliOp) -> SurfaceSyndrome:
    """Direct measurement of the doubled surface stabilizers."""
    vertex = [0, 0]
    face = [0, 0]
    primal = graph.primal.endpoint_masks
    dual = graph.dual.endpoint_masks
    for q in indices_of(op.z):
        vertex[q & 1] ^= primal[q >> 1]
    for q in indices_of(op.x):
        face[q & 1] ^= dual[q >> 1]
    return SurfaceSyndrome(graph.num_vertices, graph.num_faces, tuple(vertex), tuple(face))


class SyndromeProjector:
    """
    Projects color syndromes onto the surface copies.

    Face defects copy straight across (copy 1 from s^Z, copy 2 from s^X).
    A vertex defect of copy 1 at tau(f) is s^X_f XOR the s^X bits of the
    c''-faces whose D_X edge lies on the boundary of f; copy 2 mirrors this
    with s^Z and D_Z. Each lattice face therefore contributes a fixed mask,
    precomputed here.
    """

    def __init__(self, colex: Colex, graph: SurfaceGraph, labeling: FaceLabeling):
        self.logger = logging.getLogger(__name__)
        if labeling.c != graph.color:
            raise SyndromeError(f"Labeling contracts {labeling.c!r} faces but the surface graph contracts {graph.color!r}")
        self.colex = colex
        self.graph = graph
        self.labeling = labeling

        num_faces = len(colex.faces)
        self._face_bit = [0] * num_faces
        self._vertex_from_x = [0] * num_faces
        self._vertex_from_z = [0] * num_faces

        for f, face in enumerate(colex.faces):
            if face.color == graph.color:
                self._vertex_from_x[f] ^= 1 << graph.tau_face[f]
                self._vertex_from_z[f] ^= 1 << graph.tau_face[f]
            else:
                self._face_bit[f] = 1 << graph.tau_f2f[f]

        for labeled in labeling.faces:
            owner_x = self._c_face_of_edge(labeled.d_x_edge)
            owner_z = self._c_face_of_edge(labeled.d_z_edge)
            self._vertex_from_x[labeled.face] ^= 1 << graph.tau_face[owner_x]
            self._vertex_from_z[labeled.face] ^= 1 << graph.tau_face[owner_z]

        self.logger.debug(f"Syndrome projector ready for {num_faces} faces")

    def _c_face_of_edge(self, edge: int) -> int:
        for f in self.colex.edge_faces[edge]:
            if self.colex.faces[f].color == self.graph.color:
                return f
        raise SyndromeError(f"Edge {edge} does not touch a {self.graph.color}-face")

    def project(self, syndrome: ColorSyndrome) -> SurfaceSyndrome:
        vertex1 = vertex2 = face1 = face2 = 0
        for f in indices_of(syndrome.x):
            vertex1 ^= self._vertex_from_x[f]
            face2 ^= self._face_bit[f]
        for f in indices_of(syndrome.z):
            vertex2 ^= self._vertex_from_z[f]
            face1 ^= self._face_bit[f]
        return SurfaceSyndrome(self.graph.num_vertices, self.graph.num_faces, (vertex1, vertex2), (face1, face2))


def project(syndrome: ColorSyndrome, labeling: FaceLabeling, colex: Colex, graph: SurfaceGraph) -> SurfaceSyndrome:
    """One-off projection; build a SyndromeProjector for repeated use."""
    return SyndromeProjector(colex, graph, labeling).project(syndrome)
