"""
Symplectic GF(2) representation of Pauli operators and stabilizer groups
"""

import logging
import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_TEXT_PART = re.compile(r"([XZ])\{([0-9,\s]*)\}")


class PauliError(Exception):
    """Ошибка операций над операторами Паули"""
    pass


def mask_from_indices(indices: Iterable[int]) -> int:
    """Собрать битовую маску из списка индексов (повторы взаимно уничтожаются)"""
    mask = 0
    for index in indices:
        mask ^= 1 << index
    return mask


def indices_of(mask: int) -> List[int]:
    """Отсортированный список установленных битов маски"""
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return result


def parity(mask: int) -> int:
    return mask.bit_count() & 1


def mask_from_bits(bits: np.ndarray) -> int:
    """Convert a 0/1 numpy vector into an int mask (bit i = bits[i])."""
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bits_from_mask(mask: int, n: int) -> np.ndarray:
    """Convert an int mask into a length-n uint8 vector."""
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


@dataclass(frozen=True)
class PauliOp:
    """
    Phase-free Pauli operator on n qubits.

    Bit q of ``x`` (``z``) is set when the operator acts with X (Z) on qubit q;
    both bits set means Y.
    """
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise PauliError(f"Negative qubit count: {self.n}")
        if (self.x >> self.n) or (self.z >> self.n) or self.x < 0 or self.z < 0:
            raise PauliError(f"Support outside of {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOp":
        """Однокубитный оператор X, Y или Z"""
        if not 0 <= qubit < n:
            raise PauliError(f"Qubit {qubit} out of range 0..{n - 1}")
        bit = 1 << qubit
        if kind == "X":
            return cls(n, bit, 0)
        if kind == "Z":
            return cls(n, 0, bit)
        if kind == "Y":
            return cls(n, bit, bit)
        raise PauliError(f"Unknown Pauli kind: {kind}")

    @classmethod
    def from_support(cls, n: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> "PauliOp":
        return cls(n, mask_from_indices(x), mask_from_indices(z))

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise PauliError(f"Qubit count mismatch: {self.n} vs {other.n}")
        return PauliOp(self.n, self.x ^ other.x, self.z ^ other.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> List[int]:
        return indices_of(self.x | self.z)

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    def x_part(self) -> "PauliOp":
        return PauliOp(self.n, self.x, 0)

    def z_part(self) -> "PauliOp":
        return PauliOp(self.n, 0, self.z)

    def commutes_with(self, other: "PauliOp") -> bool:
        return commute(self, other) == 0

    def to_symplectic(self) -> np.ndarray:
        """Строка [x | z] длины 2n"""
        return np.concatenate([bits_from_mask(self.x, self.n), bits_from_mask(self.z, self.n)])

    def __str__(self) -> str:
        parts = []
        if self.x:
            parts.append("X{" + ",".join(str(i) for i in indices_of(self.x)) + "}")
        if self.z:
            parts.append("Z{" + ",".join(str(i) for i in indices_of(self.z)) + "}")
        return " ".join(parts) if parts else "I"


def parse_pauli(text: str, n: int) -> PauliOp:
    """
    Parse the debug text form, e.g. ``X{0,3} Z{3,7}`` or ``I``.

    Args:
        text: Debug text
        n: Number of qubits

    Returns:
        PauliOp
    """
    stripped = text.strip()
    if stripped in ("", "I"):
        return PauliOp.identity(n)
    if _TEXT_PART.sub("", stripped).strip():
        raise PauliError(f"Malformed Pauli text: {text!r}")
    x = z = 0
    for match in _TEXT_PART.finditer(stripped):
        indices = [int(tok) for tok in match.group(2).replace(" ", "").split(",") if tok]
        if any(index >= n for index in indices):
            raise PauliError(f"Qubit index out of range in {text!r}")
        if match.group(1) == "X":
            x |= mask_from_indices(set(indices))
        else:
            z |= mask_from_indices(set(indices))
    return PauliOp(n, x, z)


def commute(p: PauliOp, q: PauliOp) -> int:
    """0 if P and Q commute, 1 otherwise (symplectic inner product)."""
    if p.n != q.n:
        raise PauliError(f"Qubit count mismatch: {p.n} vs {q.n}")
    return parity((p.x & q.z) ^ (p.z & q.x))


def symplectic_matrix(ops: Sequence[PauliOp], n: Optional[int] = None) -> np.ndarray:
    """Матрица k x 2n со строками [x | z]"""
    if n is None:
        if not ops:
            raise PauliError("Cannot infer qubit count from an empty operator list")
        n = ops[0].n
    matrix = np.zeros((len(ops), 2 * n), dtype=np.uint8)
    for row, op in enumerate(ops):
        if op.n != n:
            raise PauliError(f"Qubit count mismatch: {op.n} vs {n}")
        matrix[row] = op.to_symplectic()
    return matrix


def gf2_rref(matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over GF(2).

    Returns:
        (reduced matrix restricted to its nonzero rows, pivot columns)
    """
    a = (np.asarray(matrix) & 1).astype(np.uint8, copy=True)
    if a.ndim != 2:
        raise PauliError("GF(2) elimination expects a 2D matrix")
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.nonzero(a[r:, c])[0]
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            a[[r, p], :] = a[[p, r], :]
        ones = np.nonzero(a[:, c])[0]
        ones = ones[ones != r]
        if ones.size:
            a[ones, :] ^= a[r, :]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def gf2_rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return len(gf2_rref(matrix)[1])


def rank_gf2(ops: Sequence[PauliOp]) -> int:
    """Rank of the 2n-column symplectic matrix of the operators."""
    if not ops:
        return 0
    return gf2_rank(symplectic_matrix(ops))


class StabilizerGroup:
    """
    Abelian group generated by phase-free Pauli operators.

    Membership is decided against the reduced row echelon form of the
    generator matrix, computed once at construction.
    """

    def __init__(self, generators: Sequence[PauliOp], n: Optional[int] = None, check: bool = True):
        self.logger = logging.getLogger(__name__)
        self.generators = list(generators)
        if n is None:
            if not self.generators:
                raise PauliError("Qubit count required for an empty generator list")
            n = self.generators[0].n
        self.n = n

        self._matrix = symplectic_matrix(self.generators, n) if self.generators else np.zeros((0, 2 * n), dtype=np.uint8)
        if check and self.generators:
            bad = self._anticommuting_pairs()
            if bad:
                i, j = bad
                raise PauliError(f"Generators {i} and {j} anticommute")
        self._reduced, self._pivots = gf2_rref(self._matrix) if self.generators else (self._matrix, [])
        self.logger.debug(f"Stabilizer group on {n} qubits: {len(self.generators)} generators, rank {self.rank}")

    def _anticommuting_pairs(self) -> Optional[Tuple[int, int]]:
        x = self._matrix[:, : self.n].astype(np.int64)
        z = self._matrix[:, self.n:].astype(np.int64)
        products = (x @ z.T + z @ x.T) % 2
        hits = np.argwhere(products)
        if hits.size:
            return int(hits[0][0]), int(hits[0][1])
        return None

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def k(self) -> int:
        """Число логических кубитов n - rank"""
        return self.n - self.rank

    def anticommuting_generator(self, op: PauliOp) -> Optional[int]:
        """Index of the first generator that anticommutes with op, or None."""
        for index, gen in enumerate(self.generators):
            if commute(gen, op):
                return index
        return None

    def contains(self, op: PauliOp) -> bool:
        if op.n != self.n:
            raise PauliError(f"Qubit count mismatch: {op.n} vs {self.n}")
        bad = self.anticommuting_generator(op)
        if bad is not None:
            raise PauliError(f"Operator anticommutes with generator {bad}; membership undefined")
        vector = op.to_symplectic()
        for row, column in enumerate(self._pivots):
            if vector[column]:
                vector ^= self._reduced[row]
        return not vector.any()


def in_group(op: PauliOp, group: StabilizerGroup) -> int:
    """1 iff op is a GF(2) combination of the group's generators."""
    return int(group.contains(op))
