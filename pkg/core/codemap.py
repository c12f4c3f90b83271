"""
Local bijective map from color-code Paulis to Paulis on two surface-code copies.

Local conventions inside one c''-face with 2l vertices:
    color qubit v_k            -> local index k - 1
    copy-1 qubit of edge e_j   -> local index 2(j - 1)
    copy-2 qubit of edge e_j   -> local index 2(j - 1) + 1
where e_j is the surface edge obtained from the c-edge (v_{2j-1}, v_{2j}).
The same interleaving is used globally: copy c of surface edge e is qubit
2e + c - 1.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core.colex import Colex, FaceLabeling, LabeledFace, color_code_stabilizers
from core.contraction import SurfaceGraph, doubled_stabilizer_group, lift_to_copy, surface_stabilizers
from core.pauli import PauliOp, commute, indices_of, rank_gf2, symplectic_matrix

logger = logging.getLogger(__name__)


class MapError(Exception):
    """Ошибка построения отображения цветового кода"""
    pass


def _c1(j: int) -> int:
    return 1 << (2 * (j - 1))


def _c2(j: int) -> int:
    return 1 << (2 * (j - 1) + 1)


def _span(bit, start: int, stop: int) -> int:
    """OR of bit(j) for start <= j <= stop (empty when start > stop)."""
    mask = 0
    for j in range(start, stop + 1):
        mask |= bit(j)
    return mask


def _check_face(ell: int, m: int) -> None:
    if ell < 1 or not 1 <= m <= ell:
        raise MapError(f"Invalid face parameters l={ell}, m={m}")


def face_images(ell: int, m: int) -> Tuple[List[PauliOp], List[PauliOp]]:
    """
    Closed-form images of Z_{v_k} and X_{v_k} for one face.

    Returns:
        (z_images, x_images), each indexed by local vertex index k - 1
    """
    _check_face(ell, m)
    size = 2 * ell
    z_images: List[PauliOp] = [PauliOp(size)] * size
    x_images: List[PauliOp] = [PauliOp(size)] * size
    for i in range(1, ell + 1):
        odd, even = 2 * i - 2, 2 * i - 1
        if i <= m:
            z_images[odd] = PauliOp(size, _c2(i), _span(_c1, i, m))
            z_images[even] = PauliOp(size, _c2(i), _span(_c1, i + 1, m))
            x_images[odd] = PauliOp(size, _c1(i), _span(_c2, 1, i - 1))
            x_images[even] = PauliOp(size, _c1(i), _span(_c2, 1, i))
        else:
            z_images[odd] = PauliOp(size, _c2(i), _span(_c1, m + 1, i - 1))
            z_images[even] = PauliOp(size, _c2(i), _span(_c1, m + 1, i))
            x_images[odd] = PauliOp(size, _c1(i), _span(_c2, i, ell))
            x_images[even] = PauliOp(size, _c1(i), _span(_c2, i + 1, ell))
    return z_images, x_images


def face_images_recursive(ell: int, m: int) -> Tuple[List[PauliOp], List[PauliOp]]:
    """Same images built hop by hop along the face boundary."""
    _check_face(ell, m)
    size = 2 * ell
    z: List[PauliOp] = [PauliOp(size)] * size
    x: List[PauliOp] = [PauliOp(size)] * size

    z[0] = PauliOp(size, _c2(1), _span(_c1, 1, m))
    for j in range(1, ell + 1):
        if j > 1:
            z[2 * j - 2] = z[2 * j - 3] * PauliOp(size, _c2(j - 1) | _c2(j), 0)
        z[2 * j - 1] = z[2 * j - 2] * PauliOp(size, 0, _c1(j))

    x[0] = PauliOp(size, _c1(1), 0)
    for j in range(1, m + 1):
        if j > 1:
            x[2 * j - 2] = x[2 * j - 3] * PauliOp(size, _c1(j - 1) | _c1(j), 0)
        x[2 * j - 1] = x[2 * j - 2] * PauliOp(size, 0, _c2(j))

    if m < ell:
        x[size - 1] = PauliOp(size, _c1(ell), 0)
        for j in range(ell, m, -1):
            if j < ell:
                x[2 * j - 1] = x[2 * j] * PauliOp(size, _c1(j) | _c1(j + 1), 0)
            x[2 * j - 2] = x[2 * j - 1] * PauliOp(size, 0, _c2(j))
    return z, x


def _run(start: int, stop: int) -> int:
    """Mask of local vertex indices for v_start..v_stop (1-based, inclusive)."""
    mask = 0
    for k in range(start, stop + 1):
        mask |= 1 << (k - 1)
    return mask


def face_inverse_images(ell: int, m: int) -> Tuple[List[PauliOp], List[PauliOp]]:
    """
    Preimages of single-qubit X and Z on the face's local surface qubits.

    Returns:
        (inverse_x, inverse_z), each indexed by local surface qubit
    """
    _check_face(ell, m)
    size = 2 * ell
    inv_x: List[PauliOp] = [PauliOp(size)] * size
    inv_z: List[PauliOp] = [PauliOp(size)] * size
    for i in range(1, ell + 1):
        first, second = 2 * (i - 1), 2 * (i - 1) + 1
        pair = _run(2 * i - 1, 2 * i)
        inv_z[first] = PauliOp(size, 0, pair)
        inv_z[second] = PauliOp(size, pair, 0)
        if i <= m:
            inv_x[first] = PauliOp(size, _run(1, 2 * i - 1), 0)
            inv_x[second] = PauliOp(size, 0, _run(2 * i, 2 * m))
        else:
            inv_x[first] = PauliOp(size, _run(2 * i, 2 * ell), 0)
            inv_x[second] = PauliOp(size, 0, _run(2 * m + 1, 2 * i - 1))
    return inv_x, inv_z


def _relabel(mask: int, table: Sequence[int]) -> int:
    result = 0
    for bit in indices_of(mask):
        result |= 1 << table[bit]
    return result


def local_label(local_qubit: int) -> int:
    """Local surface qubit -> 1-based label (odd: copy 1, even: copy 2)."""
    return local_qubit + 1


def format_local_image(op: PauliOp) -> str:
    """Render a local image in table form, e.g. ``X2Z1Z3``."""
    text = "".join(f"X{local_label(q)}" for q in indices_of(op.x))
    text += "".join(f"Z{local_label(q)}" for q in indices_of(op.z))
    return text or "I"


class CodeMap:
    """
    Images of every single-qubit generator of the color code on the doubled
    surface system, and preimages of every single-qubit surface Pauli.
    """

    def __init__(self, colex: Colex, graph: SurfaceGraph, labeling: FaceLabeling, recursive: bool = False):
        self.logger = logging.getLogger(__name__)
        if labeling.c != graph.color:
            raise MapError(f"Labeling contracts {labeling.c!r} but the surface graph contracts {graph.color!r}")
        if labeling.num_vertices and labeling.num_vertices != colex.n:
            raise MapError("Labeling and lattice disagree on the number of qubits")

        self.colex = colex
        self.graph = graph
        self.labeling = labeling
        self.n = colex.n
        self.num_surface_qubits = graph.num_doubled_qubits
        if self.num_surface_qubits != self.n:
            raise MapError(f"Doubled surface system has {self.num_surface_qubits} qubits, lattice has {self.n}")

        self.x_images: List[PauliOp] = [PauliOp(self.num_surface_qubits)] * self.n
        self.z_images: List[PauliOp] = [PauliOp(self.num_surface_qubits)] * self.n
        self.inv_x: List[PauliOp] = [PauliOp(self.n)] * self.num_surface_qubits
        self.inv_z: List[PauliOp] = [PauliOp(self.n)] * self.num_surface_qubits
        self._local_cache: Dict[Tuple[int, int], tuple] = {}

        builder = face_images_recursive if recursive else face_images
        for labeled in labeling.faces:
            self._add_face(labeled, builder)
        self.logger.debug(f"Built map for {len(labeling.faces)} faces, {self.n} qubits")

    def _local(self, ell: int, m: int, builder):
        key = (ell, m)
        if key not in self._local_cache:
            self._local_cache[key] = builder(ell, m) + face_inverse_images(ell, m)
        return self._local_cache[key]

    def surface_table(self, labeled: LabeledFace) -> List[int]:
        """Local surface qubit -> global doubled-system qubit for one face."""
        table = []
        for j in range(1, labeled.ell + 1):
            first, second = labeled.vertex(2 * j - 1), labeled.vertex(2 * j)
            edge = self.graph.tau_vertex[second]
            if self.graph.tau_vertex[first] != edge:
                raise MapError(f"Vertices {first} and {second} are not joined by a contracted edge")
            table.extend([2 * edge, 2 * edge + 1])
        return table

    def _add_face(self, labeled: LabeledFace, builder) -> None:
        z_local, x_local, inv_x_local, inv_z_local = self._local(labeled.ell, labeled.m, builder)
        surface = self.surface_table(labeled)
        color = list(labeled.vertices)
        for k, v in enumerate(labeled.vertices):
            self.z_images[v] = PauliOp(self.num_surface_qubits, _relabel(z_local[k].x, surface), _relabel(z_local[k].z, surface))
            self.x_images[v] = PauliOp(self.num_surface_qubits, _relabel(x_local[k].x, surface), _relabel(x_local[k].z, surface))
        for q, global_q in enumerate(surface):
            self.inv_x[global_q] = PauliOp(self.n, _relabel(inv_x_local[q].x, color), _relabel(inv_x_local[q].z, color))
            self.inv_z[global_q] = PauliOp(self.n, _relabel(inv_z_local[q].x, color), _relabel(inv_z_local[q].z, color))

    def apply(self, op: PauliOp) -> PauliOp:
        """pi(E): XOR of generator images over the support of E."""
        if op.n != self.n:
            raise MapError(f"Operator on {op.n} qubits, lattice has {self.n}")
        x = z = 0
        for q in indices_of(op.x):
            image = self.x_images[q]
            x ^= image.x
            z ^= image.z
        for q in indices_of(op.z):
            image = self.z_images[q]
            x ^= image.x
            z ^= image.z
        return PauliOp(self.num_surface_qubits, x, z)

    def apply_inverse(self, op: PauliOp) -> PauliOp:
        if op.n != self.num_surface_qubits:
            raise MapError(f"Operator on {op.n} qubits, doubled surface system has {self.num_surface_qubits}")
        x = z = 0
        for q in indices_of(op.x):
            image = self.inv_x[q]
            x ^= image.x
            z ^= image.z
        for q in indices_of(op.z):
            image = self.inv_z[q]
            x ^= image.x
            z ^= image.z
        return PauliOp(self.n, x, z)

    def image_table(self, face: int) -> List[Tuple[str, str]]:
        """
        Generator images of one c''-face with local labels.

        Args:
            face: Lattice face id of a c''-face

        Returns:
            Rows like ("Z_v1", "X2Z1Z3")
        """
        labeled = self.labeling.by_face.get(face)
        if labeled is None:
            raise MapError(f"Face {face} is not a labeled {self.labeling.c_double_prime}-face")
        z_local, x_local, _, _ = self._local(labeled.ell, labeled.m, face_images)
        rows = []
        for k in range(2 * labeled.ell):
            rows.append((f"X_v{k + 1}", format_local_image(x_local[k])))
            rows.append((f"Z_v{k + 1}", format_local_image(z_local[k])))
        return rows

    def stabilizer_images(self) -> Tuple[List[PauliOp], List[PauliOp]]:
        """Images of B_f^X and B_f^Z for every face."""
        x_type, z_type = color_code_stabilizers(self.colex)
        return [self.apply(op) for op in x_type], [self.apply(op) for op in z_type]

    def symplectic_images(self, kind: str) -> np.ndarray:
        """n x 2N matrix whose row q is the image of X_q (kind "X") or Z_q (kind "Z")."""
        if kind == "X":
            return symplectic_matrix(self.x_images, self.num_surface_qubits)
        if kind == "Z":
            return symplectic_matrix(self.z_images, self.num_surface_qubits)
        raise MapError(f"Unknown Pauli kind: {kind}")


def build_map(colex: Colex, graph: SurfaceGraph, labeling: FaceLabeling, recursive: bool = False) -> CodeMap:
    return CodeMap(colex, graph, labeling, recursive=recursive)


def apply(code_map: CodeMap, op: PauliOp) -> PauliOp:
    return code_map.apply(op)


def apply_inverse(code_map: CodeMap, op: PauliOp) -> PauliOp:
    return code_map.apply_inverse(op)


def check_invariants(code_map: CodeMap) -> List[str]:
    """
    Bijectivity, commutation, stabilizer and CSS preservation checks.

    Returns:
        List of violation messages (empty when the map is sound)
    """
    problems: List[str] = []
    n = code_map.n

    generators = [PauliOp.single(n, q, "X") for q in range(n)] + [PauliOp.single(n, q, "Z") for q in range(n)]
    images = [code_map.apply(g) for g in generators]
    rank = rank_gf2(images)
    if rank != 2 * n:
        problems.append(f"image rank {rank}, expected {2 * n}")

    source = symplectic_matrix(generators, n).astype(np.int64)
    target = symplectic_matrix(images, code_map.num_surface_qubits).astype(np.int64)
    source_form = (source[:, :n] @ source[:, n:].T + source[:, n:] @ source[:, :n].T) % 2
    half = code_map.num_surface_qubits
    target_form = (target[:, :half] @ target[:, half:].T + target[:, half:] @ target[:, :half].T) % 2
    mismatches = np.argwhere(source_form != target_form)
    if mismatches.size:
        a, b = (int(i) for i in mismatches[0])
        problems.append(f"commutation not preserved for generators {generators[a]} and {generators[b]}")

    group = doubled_stabilizer_group(code_map.graph)
    x_images, z_images = code_map.stabilizer_images()
    for kind, ops in (("X", x_images), ("Z", z_images)):
        for f, image in enumerate(ops):
            if group.anticommuting_generator(image) is not None or not group.contains(image):
                problems.append(f"B_{f}^{kind} image {image} is not a surface stabilizer")
                break

    all_edges = (1 << code_map.graph.num_edges) - 1
    copy1, copy2 = lift_to_copy(all_edges, 1), lift_to_copy(all_edges, 2)
    for q in range(n):
        x_image, z_image = code_map.x_images[q], code_map.z_images[q]
        if x_image.x & copy2 or x_image.z & copy1:
            problems.append(f"X_{q} image {x_image} breaks the CSS split")
            break
        if z_image.z & copy2 or z_image.x & copy1:
            problems.append(f"Z_{q} image {z_image} breaks the CSS split")
            break

    for message in problems:
        logger.warning(f"Map invariant violated: {message}")
    return problems
