"""
JSON files for lattices, surface graphs, syndromes and erasures
"""

import json
import logging
import os
from typing import Any, Dict

from core.colex import Colex, Edge, Face, validate
from core.contraction import SurfaceGraph
from core.pauli import indices_of, mask_from_indices
from core.syndrome import ColorSyndrome

logger = logging.getLogger(__name__)


class LatticeFileError(Exception):
    """Ошибка чтения файла решётки, синдрома или стирания"""
    pass


def _read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise LatticeFileError(f"Cannot open {path}: {e}") from e
    except ValueError as e:
        raise LatticeFileError(f"{path} is not valid JSON: {e}") from e


def _write_json(data: Any, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)


def colex_to_dict(colex: Colex) -> Dict[str, Any]:
    return {
        "vertices": colex.n,
        "edges": [[e.u, e.v, e.color] for e in colex.edges],
        "faces": [{"color": face.color, "cycle": list(face.cycle)} for face in colex.faces],
        "genus": colex.genus,
        "family": colex.family,
        "size": colex.size,
    }


def colex_from_dict(data: Dict[str, Any]) -> Colex:
    """
    Rebuild and validate a lattice.

    Raises:
        LatticeFileError: missing keys, wrong types or an invalid lattice
    """
    try:
        n = int(data["vertices"])
        edges = tuple(Edge(int(u), int(v), str(color)) for u, v, color in data["edges"])
        faces = tuple(Face(str(face["color"]), tuple(int(v) for v in face["cycle"])) for face in data["faces"])
        colex = Colex(
            n=n,
            edges=edges,
            faces=faces,
            genus=int(data.get("genus", 1)),
            family=str(data.get("family", "custom")),
            size=int(data.get("size", 0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise LatticeFileError(f"Malformed lattice data: {e!r}") from e

    report = validate(colex)
    if not report:
        raise LatticeFileError(f"Invalid lattice ({report.kind}): {report.message}")
    return colex


def save_colex(colex: Colex, path: str) -> None:
    _write_json(colex_to_dict(colex), path)
    logger.info(f"Saved lattice ({colex.n} qubits) to {path}")


def load_colex(path: str) -> Colex:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise LatticeFileError(f"{path}: expected a JSON object")
    colex = colex_from_dict(data)
    logger.info(f"Loaded lattice from {path}: {colex.n} qubits, {len(colex.faces)} faces")
    return colex


def save_surface_graph(graph: SurfaceGraph, path: str) -> None:
    """Surface graph plus the correspondence tables back to the lattice."""
    data = {
        "color": graph.color,
        "vertices": graph.num_vertices,
        "edges": [list(edge) for edge in graph.edges],
        "faces": [list(face) for face in graph.faces],
        "tau_face": {str(f): v for f, v in graph.tau_face.items()},
        "tau_edge": {str(e): s for e, s in graph.tau_edge.items()},
        "tau_vertex": list(graph.tau_vertex),
        "tau_f2f": {str(f): s for f, s in graph.tau_f2f.items()},
    }
    _write_json(data, path)
    logger.info(f"Saved surface graph ({graph.num_edges} edges) to {path}")


def _face_list(data: Dict[str, Any], key: str, num_faces: int) -> int:
    faces = data.get(key, [])
    if not isinstance(faces, list):
        raise LatticeFileError(f"Syndrome entry {key!r} must be a list of face ids")
    for f in faces:
        if not isinstance(f, int) or isinstance(f, bool) or not 0 <= f < num_faces:
            raise LatticeFileError(f"Face {f!r} in {key!r} out of range 0..{num_faces - 1}")
    return mask_from_indices(set(faces))


def load_syndrome(path: str, colex: Colex) -> ColorSyndrome:
    """
    Read ``{"x": [faces with s^X = 1], "z": [faces with s^Z = 1]}``.
    """
    data = _read_json(path)
    if not isinstance(data, dict) or not set(data) <= {"x", "z"}:
        raise LatticeFileError(f"{path}: expected an object with keys 'x' and 'z'")
    num_faces = len(colex.faces)
    return ColorSyndrome(num_faces, _face_list(data, "x", num_faces), _face_list(data, "z", num_faces))


def save_syndrome(syndrome: ColorSyndrome, path: str) -> None:
    _write_json({"x": indices_of(syndrome.x), "z": indices_of(syndrome.z)}, path)


def load_erasure(path: str, colex: Colex) -> int:
    """Erased color qubits as a mask, from a JSON list of vertex ids."""
    data = _read_json(path)
    if not isinstance(data, list):
        raise LatticeFileError(f"{path}: expected a JSON list of qubits")
    for q in data:
        if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < colex.n:
            raise LatticeFileError(f"Erased qubit {q!r} out of range 0..{colex.n - 1}")
    return mask_from_indices(set(data))


def save_erasure(erased: int, path: str) -> None:
    _write_json(indices_of(erased), path)
