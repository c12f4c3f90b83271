"""
Color-code lattices (2-colexes) on the torus: construction, validation and
the canonical per-face qubit labeling used by the color-to-surface map.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from core.pauli import PauliOp, StabilizerGroup, mask_from_indices

logger = logging.getLogger(__name__)

COLORS = ("r", "g", "b")
FAMILIES = ("square-octagon", "hexagonal")


class LatticeError(Exception):
    """Ошибка построения или разметки решётки"""
    pass


def third_color(a: str, b: str) -> str:
    """Цвет, отличный от двух заданных"""
    rest = [c for c in COLORS if c not in (a, b)]
    if len(rest) != 1:
        raise LatticeError(f"Colors {a!r} and {b!r} do not determine a third color")
    return rest[0]


def next_color(c: str) -> str:
    return COLORS[(COLORS.index(c) + 1) % 3]


class Edge(NamedTuple):
    u: int
    v: int
    color: str


@dataclass(frozen=True)
class Face:
    color: str
    cycle: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class Colex:
    """
    Trivalent, 3-face-colorable lattice with one qubit per vertex.

    Faces are stored as explicit cyclic vertex lists; edges carry the color
    absent from the two faces they separate. Incidence tables are derived
    lazily and cached on the instance.
    """
    n: int
    edges: Tuple[Edge, ...]
    faces: Tuple[Face, ...]
    genus: int = 1
    family: str = "custom"
    size: int = 0

    @classmethod
    def from_faces(cls, n: int, faces: Sequence[Face], genus: int = 1,
                   family: str = "custom", size: int = 0) -> "Colex":
        """
        Derive edges and edge colors from face boundaries.

        Every consecutive vertex pair of a face cycle must belong to exactly
        two faces of different colors.
        """
        owners: Dict[Tuple[int, int], List[int]] = {}
        order: List[Tuple[int, int]] = []
        for index, face in enumerate(faces):
            cycle = face.cycle
            for k in range(len(cycle)):
                a, b = cycle[k], cycle[(k + 1) % len(cycle)]
                key = (min(a, b), max(a, b))
                if key not in owners:
                    owners[key] = []
                    order.append(key)
                owners[key].append(index)

        edges = []
        for key in order:
            owner = owners[key]
            if len(owner) != 2:
                raise LatticeError(f"Vertex pair {key} lies on {len(owner)} faces, expected 2")
            color = third_color(faces[owner[0]].color, faces[owner[1]].color)
            edges.append(Edge(key[0], key[1], color))
        return cls(n=n, edges=tuple(edges), faces=tuple(faces), genus=genus, family=family, size=size)

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {(min(e.u, e.v), max(e.u, e.v)): i for i, e in enumerate(self.edges)}

    def edge_between(self, a: int, b: int) -> int:
        try:
            return self.edge_index[(min(a, b), max(a, b))]
        except KeyError:
            raise LatticeError(f"No edge between vertices {a} and {b}") from None

    @cached_property
    def vertex_edges(self) -> List[List[int]]:
        table: List[List[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            table[e.u].append(i)
            table[e.v].append(i)
        return table

    @cached_property
    def vertex_faces(self) -> List[List[int]]:
        table: List[List[int]] = [[] for _ in range(self.n)]
        for f, face in enumerate(self.faces):
            for v in face.cycle:
                table[v].append(f)
        return table

    @cached_property
    def face_edges(self) -> List[List[int]]:
        """Boundary edge ids of every face, in cycle order."""
        table = []
        for face in self.faces:
            cycle = face.cycle
            table.append([self.edge_between(cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))])
        return table

    @cached_property
    def edge_faces(self) -> List[List[int]]:
        table: List[List[int]] = [[] for _ in self.edges]
        for f, boundary in enumerate(self.face_edges):
            for e in boundary:
                table[e].append(f)
        return table

    @cached_property
    def face_masks(self) -> List[int]:
        return [mask_from_indices(set(face.cycle)) for face in self.faces]

    @cached_property
    def vertex_face_masks(self) -> List[int]:
        """Per vertex: mask over faces containing it (syndrome of a single-qubit error)."""
        return [mask_from_indices(set(fs)) for fs in self.vertex_faces]

    def faces_of_color(self, color: str) -> List[int]:
        return [f for f, face in enumerate(self.faces) if face.color == color]

    def edges_of_color(self, color: str) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.color == color]

    def face_of_color_at(self, vertex: int, color: str) -> int:
        """Единственная грань заданного цвета, содержащая вершину"""
        for f in self.vertex_faces[vertex]:
            if self.faces[f].color == color:
                return f
        raise LatticeError(f"Vertex {vertex} has no {color}-face")

    def euler_characteristic(self) -> int:
        return self.n - len(self.edges) + len(self.faces)

    def face_operator(self, face: int, kind: str) -> PauliOp:
        """B_f^X or B_f^Z."""
        mask = self.face_masks[face]
        if kind == "X":
            return PauliOp(self.n, mask, 0)
        if kind == "Z":
            return PauliOp(self.n, 0, mask)
        raise LatticeError(f"Unknown stabilizer kind: {kind}")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: str = ""
    message: str = ""
    location: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _violation(kind: str, message: str, location: Optional[int] = None) -> ValidationReport:
    logger.debug(f"Lattice violation [{kind}]: {message}")
    return ValidationReport(False, kind, message, location)


def validate(colex: Colex) -> ValidationReport:
    """
    Check every lattice invariant and report the first violation.

    Returns:
        ValidationReport, truthy when the lattice is a valid 2-colex
    """
    n = colex.n
    if n <= 0:
        return _violation("vertex_range", "lattice has no vertices")

    seen = set()
    for i, e in enumerate(colex.edges):
        if not (0 <= e.u < n and 0 <= e.v < n):
            return _violation("vertex_range", f"edge {i} has an endpoint outside 0..{n - 1}", i)
        if e.u == e.v:
            return _violation("self_loop", f"edge {i} is a self loop at vertex {e.u}", i)
        key = (min(e.u, e.v), max(e.u, e.v))
        if key in seen:
            return _violation("parallel_edge", f"edge {i} duplicates vertex pair {key}", i)
        seen.add(key)
        if e.color not in COLORS:
            return _violation("edge_color", f"edge {i} has unknown color {e.color!r}", i)

    for f, face in enumerate(colex.faces):
        if face.color not in COLORS:
            return _violation("face_color", f"face {f} has unknown color {face.color!r}", f)
        if any(not 0 <= v < n for v in face.cycle):
            return _violation("vertex_range", f"face {f} has a vertex outside 0..{n - 1}", f)
        if len(face.cycle) < 2 or len(face.cycle) % 2 or len(set(face.cycle)) != len(face.cycle):
            return _violation("face_boundary", f"face {f} boundary is not an even simple cycle", f)

    incident: List[List[str]] = [[] for _ in range(n)]
    for e in colex.edges:
        incident[e.u].append(e.color)
        incident[e.v].append(e.color)
    for v, colors in enumerate(incident):
        if len(colors) != 3:
            return _violation("degree", f"vertex {v} has degree {len(colors)}, expected 3", v)
        if len(set(colors)) != 3:
            return _violation("vertex_colors", f"vertex {v} has duplicate edge color ({''.join(sorted(colors))})", v)

    owners: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for f, face in enumerate(colex.faces):
        cycle = face.cycle
        for k in range(len(cycle)):
            a, b = cycle[k], cycle[(k + 1) % len(cycle)]
            key = (min(a, b), max(a, b))
            if key not in seen:
                return _violation("face_boundary", f"face {f} steps between non-adjacent vertices {a} and {b}", f)
            owners[key].append(f)
    for i, e in enumerate(colex.edges):
        count = len(owners.get((min(e.u, e.v), max(e.u, e.v)), []))
        if count != 2:
            return _violation("edge_faces", f"edge {i} lies on {count} faces, expected 2", i)

    for i, e in enumerate(colex.edges):
        f1, f2 = owners[(min(e.u, e.v), max(e.u, e.v))]
        c1, c2 = colex.faces[f1].color, colex.faces[f2].color
        if c1 == c2:
            return _violation("face_coloring", f"adjacent faces {f1} and {f2} share color {c1!r} (not 3-colorable)", f1)
        if e.color != third_color(c1, c2):
            return _violation("edge_color", f"edge {i} color {e.color!r} differs from the color missing from faces {f1}, {f2}", i)

    for f, face in enumerate(colex.faces):
        cycle = face.cycle
        colors = [colex.edges[colex.edge_between(cycle[k], cycle[(k + 1) % len(cycle)])].color for k in range(len(cycle))]
        if any(colors[k] == colors[(k + 1) % len(colors)] for k in range(len(colors))) or face.color in colors:
            return _violation("face_boundary", f"face {f} boundary does not alternate the two other colors", f)

    expected = 2 - 2 * colex.genus
    chi = colex.euler_characteristic()
    if chi != expected:
        return _violation("euler", f"Euler characteristic {chi}, expected {expected} for genus {colex.genus}")

    return ValidationReport(True)


def build_square_octagon(L: int) -> Colex:
    """
    4.8.8 lattice on an L x L torus of unit cells.

    Unit cell (i, j) holds one square with vertices E, N, W, S; the octagon
    at the cell's upper-right corner is bounded by four squares. Squares are
    red, octagons green/blue in a checkerboard.

    Args:
        L: Even linear size

    Returns:
        Colex with 4L^2 vertices, 6L^2 edges, 2L^2 faces
    """
    if not isinstance(L, int) or L < 2 or L % 2:
        raise LatticeError(f"Square-octagon size must be an even integer >= 2, got {L!r}")

    east, north, west, south = range(4)

    def vid(i: int, j: int, k: int) -> int:
        return 4 * ((j % L) * L + (i % L)) + k

    faces = []
    for j in range(L):
        for i in range(L):
            faces.append(Face("r", (vid(i, j, east), vid(i, j, north), vid(i, j, west), vid(i, j, south))))
    for j in range(L):
        for i in range(L):
            color = "g" if (i + j) % 2 == 0 else "b"
            cycle = (
                vid(i, j, east), vid(i + 1, j, west), vid(i + 1, j, north), vid(i + 1, j + 1, south),
                vid(i + 1, j + 1, west), vid(i, j + 1, east), vid(i, j + 1, south), vid(i, j, north),
            )
            faces.append(Face(color, cycle))

    colex = Colex.from_faces(4 * L * L, faces, family="square-octagon", size=L)
    logger.info(f"Built square-octagon lattice L={L}: {colex.n} qubits, {len(colex.faces)} faces")
    return colex


def build_hexagonal(L: int) -> Colex:
    """Honeycomb torus with L x L hexagons; face colors need L divisible by 3."""
    if not isinstance(L, int) or L < 3 or L % 3:
        raise LatticeError(f"Hexagonal size must be a positive multiple of 3, got {L!r}")

    def up(a: int, b: int) -> int:
        return 2 * ((b % L) * L + (a % L))

    def down(a: int, b: int) -> int:
        return up(a, b) + 1

    faces = []
    for b in range(L):
        for a in range(L):
            cycle = (up(a, b), down(a - 1, b), up(a - 1, b), down(a - 1, b - 1), up(a, b - 1), down(a, b - 1))
            faces.append(Face(COLORS[(a - b) % 3], cycle))

    colex = Colex.from_faces(2 * L * L, faces, family="hexagonal", size=L)
    logger.info(f"Built hexagonal lattice L={L}: {colex.n} qubits, {len(colex.faces)} faces")
    return colex


def build_lattice(family: str, L: int) -> Colex:
    if family == "square-octagon":
        return build_square_octagon(L)
    if family == "hexagonal":
        return build_hexagonal(L)
    raise LatticeError(f"Unknown lattice family: {family!r} (expected one of {', '.join(FAMILIES)})")


def is_valid_size(family: str, L: int) -> bool:
    if not isinstance(L, int) or isinstance(L, bool):
        return False
    if family == "square-octagon":
        return L >= 2 and L % 2 == 0
    if family == "hexagonal":
        return L >= 3 and L % 3 == 0
    return False


def default_contract_color(colex: Colex) -> str:
    """Цвет самых маленьких граней (квадраты на 4.8.8)"""
    sizes = {}
    for color in COLORS:
        members = [colex.faces[f].size for f in colex.faces_of_color(color)]
        if members:
            sizes[color] = sum(members) / len(members)
    if not sizes:
        raise LatticeError("Lattice has no faces")
    return min(COLORS, key=lambda c: (sizes.get(c, float("inf")), COLORS.index(c)))


def color_code_stabilizers(colex: Colex) -> Tuple[List[PauliOp], List[PauliOp]]:
    """B_f^X and B_f^Z for every face, in face order."""
    x_type = [colex.face_operator(f, "X") for f in range(len(colex.faces))]
    z_type = [colex.face_operator(f, "Z") for f in range(len(colex.faces))]
    return x_type, z_type


def color_code_group(colex: Colex) -> StabilizerGroup:
    x_type, z_type = color_code_stabilizers(colex)
    return StabilizerGroup(x_type + z_type, colex.n)


@dataclass(frozen=True)
class LabeledFace:
    """
    One c''-face with its canonical vertex order v_1..v_{2l}.

    ``vertices[k]`` is v_{k+1}; (v_{2i-1}, v_{2i}) are c-edges.
    """
    face: int
    vertices: Tuple[int, ...]
    m: int
    d_x_edge: int
    d_z_edge: int

    @property
    def ell(self) -> int:
        return len(self.vertices) // 2

    def vertex(self, position: int) -> int:
        """v_position, 1-based."""
        return self.vertices[position - 1]

    def c_edge_pairs(self) -> List[Tuple[int, int]]:
        return [(self.vertices[2 * j], self.vertices[2 * j + 1]) for j in range(self.ell)]


MRule = Union[None, int, Mapping[int, int], Callable[[int, int], int]]


@dataclass(frozen=True)
class FaceLabeling:
    c: str
    c_prime: str
    c_double_prime: str
    faces: Tuple[LabeledFace, ...]
    num_vertices: int = 0

    @cached_property
    def position(self) -> Dict[int, Tuple[int, int]]:
        """vertex -> (index into faces, 1-based position in that face)"""
        table = {}
        for index, labeled in enumerate(self.faces):
            for k, v in enumerate(labeled.vertices):
                table[v] = (index, k + 1)
        return table

    @cached_property
    def by_face(self) -> Dict[int, LabeledFace]:
        return {labeled.face: labeled for labeled in self.faces}

    @property
    def d_x_edges(self) -> List[int]:
        return [labeled.d_x_edge for labeled in self.faces]

    @property
    def d_z_edges(self) -> List[int]:
        return [labeled.d_z_edge for labeled in self.faces]

    @property
    def m_star(self) -> int:
        return max(max(labeled.m, labeled.ell - labeled.m) for labeled in self.faces)


def _resolve_m(m_rule: MRule, face: int, ell: int) -> int:
    if m_rule is None:
        return max(1, ell // 2)
    if isinstance(m_rule, int):
        return m_rule
    if isinstance(m_rule, Mapping):
        return m_rule.get(face, max(1, ell // 2))
    return int(m_rule(face, ell))


def label_faces(colex: Colex, c: Optional[str] = None, m_rule: MRule = None,
                c_prime: Optional[str] = None) -> FaceLabeling:
    """
    Canonical labeling of every c''-face.

    Each face starts at its smallest vertex whose successor edge in the stored
    cycle is c-colored, so that odd-even pairs are c-edges.

    Args:
        colex: Valid lattice
        c: Contracted color (default: color of the smallest faces)
        m_rule: None, int, mapping face -> m, or callable (face, l) -> m
        c_prime: Second color (default: the color after c in r, g, b order)

    Returns:
        FaceLabeling
    """
    report = validate(colex)
    if not report:
        raise LatticeError(f"Cannot label an invalid lattice: {report.message}")

    if c is None:
        c = default_contract_color(colex)
    if c not in COLORS:
        raise LatticeError(f"Unknown color: {c!r}")
    if c_prime is None:
        c_prime = next_color(c)
    if c_prime == c or c_prime not in COLORS:
        raise LatticeError(f"Second color {c_prime!r} must differ from {c!r}")
    c_double_prime = third_color(c, c_prime)

    labeled_faces = []
    for f in colex.faces_of_color(c_double_prime):
        cycle = colex.faces[f].cycle
        size = len(cycle)
        starts = [k for k in range(size) if colex.edges[colex.edge_between(cycle[k], cycle[(k + 1) % size])].color == c]
        start = min(starts, key=lambda k: cycle[k])
        vertices = cycle[start:] + cycle[:start]
        ell = size // 2

        m = _resolve_m(m_rule, f, ell)
        if not 1 <= m <= ell:
            raise LatticeError(f"m={m} outside [1, {ell}] for face {f}")

        d_z = colex.edge_between(vertices[2 * ell - 1], vertices[0])
        d_x = colex.edge_between(vertices[2 * m - 1], vertices[(2 * m) % size])
        labeled_faces.append(LabeledFace(face=f, vertices=tuple(vertices), m=m, d_x_edge=d_x, d_z_edge=d_z))

    labeling = FaceLabeling(c, c_prime, c_double_prime, tuple(labeled_faces), colex.n)
    covered = Counter(v for labeled in labeled_faces for v in labeled.vertices)
    if len(covered) != colex.n or any(count != 1 for count in covered.values()):
        raise LatticeError(f"{c_double_prime}-faces do not partition the vertices")
    logger.debug(f"Labeled {len(labeled_faces)} {c_double_prime}-faces (c={c}, c'={c_prime})")
    return labeling
