"""
Local Clifford circuits that turn the color code into two surface-code copies,
and their verification by phase-free tableau conjugation.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence

from core.codemap import CodeMap
from core.colex import FaceLabeling
from core.contraction import SurfaceGraph
from core.pauli import PauliOp, indices_of, rank_gf2

logger = logging.getLogger(__name__)

GATE_ARITY = {"CX": 2, "H": 1, "SWAP": 2}


class CircuitError(Exception):
    """Ошибка построения или разбора схемы"""
    pass


class Gate(NamedTuple):
    name: str
    a: int
    b: Optional[int] = None

    def qubits(self) -> List[int]:
        return [self.a] if self.b is None else [self.a, self.b]

    def __str__(self) -> str:
        return f"{self.name} {self.a}" if self.b is None else f"{self.name} {self.a} {self.b}"


@dataclass
class CliffordCircuit:
    num_qubits: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: Gate) -> None:
        if gate.name not in GATE_ARITY:
            raise CircuitError(f"Unsupported gate: {gate.name}")
        if len(gate.qubits()) != GATE_ARITY[gate.name]:
            raise CircuitError(f"Gate {gate.name} takes {GATE_ARITY[gate.name]} qubits")
        for q in gate.qubits():
            if not 0 <= q < self.num_qubits:
                raise CircuitError(f"Qubit {q} out of range in {gate}")
        if gate.b is not None and gate.a == gate.b:
            raise CircuitError(f"Gate {gate} acts twice on qubit {gate.a}")

    def append(self, gate: Gate) -> "CliffordCircuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def cx(self, control: int, target: int) -> "CliffordCircuit":
        return self.append(Gate("CX", control, target))

    def h(self, qubit: int) -> "CliffordCircuit":
        return self.append(Gate("H", qubit))

    def swap(self, a: int, b: int) -> "CliffordCircuit":
        return self.append(Gate("SWAP", a, b))

    def extend(self, other: "CliffordCircuit") -> "CliffordCircuit":
        if other.num_qubits > self.num_qubits:
            raise CircuitError(f"Cannot append a {other.num_qubits}-qubit circuit to {self.num_qubits} qubits")
        for gate in other.gates:
            self.append(gate)
        return self

    def counts(self) -> Counter:
        return Counter(gate.name for gate in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self, comments: Iterable[str] = ()) -> str:
        lines = [f"# qubits {self.num_qubits}"]
        lines.extend(f"# {comment}" for comment in comments)
        lines.extend(str(gate) for gate in self.gates)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CliffordCircuit":
        circuit = None
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if circuit is None and len(parts) == 2 and parts[0] == "qubits":
                    circuit = cls(int(parts[1]))
                continue
            if circuit is None:
                raise CircuitError("Circuit text lacks a '# qubits N' header")
            parts = line.split()
            try:
                args = [int(tok) for tok in parts[1:]]
            except ValueError:
                raise CircuitError(f"Line {number}: non-integer qubit in {line!r}") from None
            if parts[0] not in GATE_ARITY or len(args) != GATE_ARITY[parts[0]]:
                raise CircuitError(f"Line {number}: malformed gate {line!r}")
            circuit.append(Gate(parts[0], *args))
        if circuit is None:
            raise CircuitError("Empty circuit text")
        return circuit


def _face_qubits(qubits: Optional[Sequence[int]], size: int) -> Sequence[int]:
    return range(size) if qubits is None else qubits


def emit_U(i: int, qubits: Sequence[int]) -> CliffordCircuit:
    """
    U_{2i}: CX from 2i onto 2i-1, then CX from 2i-1 onto 2i-2, ..., 1.

    Args:
        i: Ladder index, 1 <= i with 2i inside the face
        qubits: Global qubit of each face position (position k at qubits[k-1])
    """
    if i < 1 or 2 * i > len(qubits):
        raise CircuitError(f"U_{2 * i} out of range for a face of {len(qubits)} qubits")
    q = lambda k: qubits[k - 1]
    circuit = CliffordCircuit(max(qubits) + 1)
    circuit.cx(q(2 * i), q(2 * i - 1))
    for k in range(2 * i - 2, 0, -1):
        circuit.cx(q(2 * i - 1), q(k))
    return circuit


def emit_V(i: int, qubits: Sequence[int]) -> CliffordCircuit:
    """V_{2i+1}: CX from 2i+1 onto 2i+2, then CX from 2i+2 onto 2i+3, ..., 2l."""
    if i < 1 or 2 * i + 2 > len(qubits):
        raise CircuitError(f"V_{2 * i + 1} out of range for a face of {len(qubits)} qubits")
    q = lambda k: qubits[k - 1]
    circuit = CliffordCircuit(max(qubits) + 1)
    circuit.cx(q(2 * i + 1), q(2 * i + 2))
    for k in range(2 * i + 3, len(qubits) + 1):
        circuit.cx(q(2 * i + 2), q(k))
    return circuit


def emit_face_circuit(ell: int, m: int, qubits: Optional[Sequence[int]] = None,
                      num_qubits: Optional[int] = None) -> CliffordCircuit:
    """
    Full transformation of one face: U_{2m} .. U_2, then V_{2m+1} .. V_{2l-1},
    then SWAP of each pair beyond 2m, then H on every even position.

    Gate counts: m^2 + (l-m)^2 CX, l - m SWAP, l H.
    """
    if ell < 1 or not 1 <= m <= ell:
        raise CircuitError(f"Invalid face parameters l={ell}, m={m}")
    positions = _face_qubits(qubits, 2 * ell)
    if len(positions) != 2 * ell:
        raise CircuitError(f"Face with l={ell} needs {2 * ell} qubits, got {len(positions)}")
    size = num_qubits if num_qubits is not None else max(positions) + 1
    circuit = CliffordCircuit(size)
    for i in range(m, 0, -1):
        circuit.extend(emit_U(i, positions))
    for i in range(m, ell):
        circuit.extend(emit_V(i, positions))
    for j in range(m + 1, ell + 1):
        circuit.swap(positions[2 * j - 2], positions[2 * j - 1])
    for j in range(1, ell + 1):
        circuit.h(positions[2 * j - 1])
    return circuit


def emit_lattice_circuit(labeling: FaceLabeling, num_qubits: Optional[int] = None) -> CliffordCircuit:
    """Concatenation of the face circuits over the lattice's vertex ids."""
    size = num_qubits or labeling.num_vertices
    circuit = CliffordCircuit(size)
    for labeled in labeling.faces:
        circuit.extend(emit_face_circuit(labeled.ell, labeled.m, labeled.vertices, size))
    logger.debug(f"Lattice circuit: {dict(circuit.counts())}")
    return circuit


def output_permutation(labeling: FaceLabeling, graph: SurfaceGraph) -> List[int]:
    """
    Surface qubit held by each color qubit after the circuit: position 2j-1
    carries copy 1 of e_j, position 2j copy 2.
    """
    permutation = [0] * labeling.num_vertices
    for labeled in labeling.faces:
        for j in range(1, labeled.ell + 1):
            edge = graph.tau_vertex[labeled.vertex(2 * j)]
            permutation[labeled.vertex(2 * j - 1)] = 2 * edge
            permutation[labeled.vertex(2 * j)] = 2 * edge + 1
    return permutation


def _conjugate_gate(gate: Gate, x: int, z: int):
    if gate.name == "CX":
        c, t = gate.a, gate.b
        if x >> c & 1:
            x ^= 1 << t
        if z >> t & 1:
            z ^= 1 << c
    elif gate.name == "H":
        bit = 1 << gate.a
        xa, za = x & bit, z & bit
        x = (x & ~bit) | za
        z = (z & ~bit) | xa
    else:
        x, z = _swap_bits(x, gate.a, gate.b), _swap_bits(z, gate.a, gate.b)
    return x, z


def _swap_bits(value: int, a: int, b: int) -> int:
    if (value >> a & 1) != (value >> b & 1):
        value ^= (1 << a) | (1 << b)
    return value


def conjugate(circuit: CliffordCircuit, op: PauliOp) -> PauliOp:
    """Image of P under the circuit (gates applied in list order), phase-free."""
    if op.n != circuit.num_qubits:
        raise CircuitError(f"Operator on {op.n} qubits, circuit on {circuit.num_qubits}")
    x, z = op.x, op.z
    for gate in circuit.gates:
        x, z = _conjugate_gate(gate, x, z)
    return PauliOp(op.n, x, z)


def permute(op: PauliOp, permutation: Sequence[int]) -> PauliOp:
    x = z = 0
    for q in indices_of(op.x):
        x |= 1 << permutation[q]
    for q in indices_of(op.z):
        z |= 1 << permutation[q]
    return PauliOp(op.n, x, z)


class Tableau:
    """Images of every X_q and Z_q under a Clifford circuit."""

    def __init__(self, x_images: List[PauliOp], z_images: List[PauliOp]):
        self.x_images = x_images
        self.z_images = z_images
        self.n = len(x_images)

    @classmethod
    def identity(cls, n: int) -> "Tableau":
        return cls([PauliOp.single(n, q, "X") for q in range(n)], [PauliOp.single(n, q, "Z") for q in range(n)])

    @classmethod
    def from_circuit(cls, circuit: CliffordCircuit) -> "Tableau":
        n = circuit.num_qubits
        return cls(
            [conjugate(circuit, PauliOp.single(n, q, "X")) for q in range(n)],
            [conjugate(circuit, PauliOp.single(n, q, "Z")) for q in range(n)],
        )

    def apply(self, op: PauliOp) -> PauliOp:
        result = PauliOp.identity(self.n)
        for q in indices_of(op.x):
            result = result * self.x_images[q]
        for q in indices_of(op.z):
            result = result * self.z_images[q]
        return result

    def is_symplectic(self) -> bool:
        if rank_gf2(self.x_images + self.z_images) != 2 * self.n:
            return False
        for a in range(self.n):
            for b in range(self.n):
                expected = 1 if a == b else 0
                if self.x_images[a].commutes_with(self.z_images[b]) == bool(expected):
                    return False
                if b > a and not (self.x_images[a].commutes_with(self.x_images[b])
                                  and self.z_images[a].commutes_with(self.z_images[b])):
                    return False
        return True


@dataclass(frozen=True)
class CircuitCheck:
    ok: bool
    vertex: Optional[int] = None
    kind: str = ""
    expected: str = ""
    actual: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "circuit reproduces the map on every generator"
        return f"{self.kind}_{self.vertex}: expected {self.expected}, circuit gives {self.actual}"


def verify_circuit(code_map: CodeMap, circuit: Optional[CliffordCircuit] = None) -> CircuitCheck:
    """
    Compare the circuit's action with the map on every single-qubit generator.

    Args:
        code_map: Map built from the same labeling
        circuit: Circuit over the lattice's vertex ids (default: emitted from the labeling)

    Returns:
        CircuitCheck with the first mismatching generator, if any
    """
    if circuit is None:
        circuit = emit_lattice_circuit(code_map.labeling, code_map.n)
    if circuit.num_qubits != code_map.n:
        raise CircuitError(f"Circuit on {circuit.num_qubits} qubits, lattice has {code_map.n}")
    permutation = output_permutation(code_map.labeling, code_map.graph)
    tableau = Tableau.from_circuit(circuit)
    for v in range(code_map.n):
        for kind, images, expected in (("X", tableau.x_images, code_map.x_images), ("Z", tableau.z_images, code_map.z_images)):
            actual = permute(images[v], permutation)
            if actual.x != expected[v].x or actual.z != expected[v].z:
                logger.warning(f"Circuit mismatch at {kind}_{v}: expected {expected[v]}, got {actual}")
                return CircuitCheck(False, v, kind, str(expected[v]), str(actual))
    return CircuitCheck(True)
