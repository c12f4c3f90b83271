"""
Error channels on the color code and the error model they induce on the
two surface-code copies
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from core.codemap import CodeMap, face_images
from core.colex import Colex, FaceLabeling, LabeledFace
from core.contraction import SurfaceGraph
from core.pauli import PauliOp, mask_from_bits

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-9


class ChannelError(Exception):
    """Ошибка параметров канала ошибок"""
    pass


class ChannelKind(Enum):
    BITFLIP = "bitflip"
    PHASEFLIP = "phaseflip"
    ERASURE = "erasure"


@dataclass(frozen=True)
class Channel:
    kind: ChannelKind
    rate: float

    def __post_init__(self):
        if isinstance(self.kind, str):
            try:
                object.__setattr__(self, "kind", ChannelKind(self.kind))
            except ValueError:
                raise ChannelError(f"Unknown channel: {self.kind!r}") from None
        if not 0.0 <= self.rate <= 1.0:
            raise ChannelError(f"Rate {self.rate} outside [0, 1]")

    @classmethod
    def bitflip(cls, p: float) -> "Channel":
        return cls(ChannelKind.BITFLIP, p)

    @classmethod
    def phaseflip(cls, q: float) -> "Channel":
        return cls(ChannelKind.PHASEFLIP, q)

    @classmethod
    def erasure(cls, rate: float) -> "Channel":
        return cls(ChannelKind.ERASURE, rate)


@dataclass(frozen=True)
class ErasureEvent:
    """Erased positions and the Pauli left behind by the mixed-state replacement."""
    erased: int
    pauli: PauliOp


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for one trial, keyed by (seed, key...)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def sample(channel: Channel, colex: Colex, rng: np.random.Generator) -> Union[PauliOp, ErasureEvent]:
    """
    Draw one iid error on the lattice.

    Returns:
        PauliOp for bit/phase flips, ErasureEvent for the erasure channel
    """
    n = colex.n
    hits = rng.random(n) < channel.rate
    if channel.kind is ChannelKind.BITFLIP:
        return PauliOp(n, mask_from_bits(hits), 0)
    if channel.kind is ChannelKind.PHASEFLIP:
        return PauliOp(n, 0, mask_from_bits(hits))

    # 0: I, 1: X, 2: Z, 3: Y
    paulis = rng.integers(0, 4, size=n)
    x_bits = hits & ((paulis & 1) == 1)
    z_bits = hits & ((paulis & 2) == 2)
    return ErasureEvent(mask_from_bits(hits), PauliOp(n, mask_from_bits(x_bits), mask_from_bits(z_bits)))


def odd_parity_probability(k: int, p: float) -> float:
    """
    Probability that an odd number of k independent bits flip.

    Equals (1 - (1 - 2p)^k) / 2; computed as the explicit odd-binomial sum.
    """
    return sum(math.comb(k, i) * p ** i * (1 - p) ** (k - i) for i in range(1, k + 1, 2))


def face_parity_lengths(ell: int, m: int, kind: str) -> List[int]:
    """
    Number of face qubits whose flips reach the second-type marginal of e_j.

    For bit flips this is the Z marginal on copy 2; for phase flips the Z
    marginal on copy 1. Index j - 1.
    """
    lengths = []
    for j in range(1, ell + 1):
        if kind == "bitflip":
            lengths.append(2 * m - 2 * j + 1 if j <= m else 2 * j - 2 * m - 1)
        else:
            lengths.append(2 * j - 1 if j <= m else 2 * ell - 2 * j + 1)
    return lengths


@dataclass
class InducedModel:
    """
    Marginal error rates on the surface copies.

    ``p_tilde[c]`` is the X-error marginal per edge of copy c + 1,
    ``q_tilde[c]`` the Z-error marginal.
    """
    channel: Channel
    p_tilde: Tuple[np.ndarray, np.ndarray]
    q_tilde: Tuple[np.ndarray, np.ndarray]
    m_star: int

    def x_rate(self, copy: int, edge: int) -> float:
        return float(self.p_tilde[copy - 1][edge])

    def z_rate(self, copy: int, edge: int) -> float:
        return float(self.q_tilde[copy - 1][edge])

    def edge_weights(self, copy: int, kind: str) -> np.ndarray:
        """
        Matching weights -log(p/(1-p)) for X (kind "X") or Z errors on a copy.

        Rates at or above 1/2 and zero rates are clamped to a small positive floor.
        """
        rates = self.p_tilde[copy - 1] if kind == "X" else self.q_tilde[copy - 1]
        with np.errstate(divide="ignore"):
            clipped = np.clip(rates, 1e-12, 1 - 1e-12)
            weights = -np.log(clipped / (1 - clipped))
        return np.maximum(weights, WEIGHT_FLOOR)

    def bound(self) -> Tuple[float, float]:
        return marginal_bound(self)


def induced_marginals(colex: Colex, labeling: FaceLabeling, graph: SurfaceGraph, channel: Channel) -> InducedModel:
    """
    Closed-form marginals of the mapped error model.

    Bit flips: every copy-1 qubit carries X with 2p(1-p); copy-2 qubit of
    e_j carries Z with the odd-parity probability over the qubits listed by
    face_parity_lengths. Phase flips mirror this between the copies.
    """
    if channel.kind is ChannelKind.ERASURE:
        raise ChannelError("Induced marginals are defined for bit-flip and phase-flip channels only")
    if labeling.c != graph.color:
        raise ChannelError("Labeling and surface graph contract different colors")

    num_edges = graph.num_edges
    p_tilde = (np.zeros(num_edges), np.zeros(num_edges))
    q_tilde = (np.zeros(num_edges), np.zeros(num_edges))
    rate = channel.rate
    pair_rate = 2 * rate * (1 - rate)

    for labeled in labeling.faces:
        lengths = face_parity_lengths(labeled.ell, labeled.m, channel.kind.value)
        for j in range(1, labeled.ell + 1):
            edge = graph.tau_vertex[labeled.vertex(2 * j)]
            if channel.kind is ChannelKind.BITFLIP:
                p_tilde[0][edge] = pair_rate
                q_tilde[1][edge] = odd_parity_probability(lengths[j - 1], rate)
            else:
                p_tilde[1][edge] = pair_rate
                q_tilde[0][edge] = odd_parity_probability(lengths[j - 1], rate)

    model = InducedModel(channel, p_tilde, q_tilde, labeling.m_star)
    logger.debug(f"Induced model for {channel.kind.value}({rate}): m*={model.m_star}")
    return model


def marginal_bound(model: InducedModel) -> Tuple[float, float]:
    """
    Bounds on the second-type marginals: p below, odd parity over 2m* - 1 qubits above.
    """
    rate = model.channel.rate
    return rate, odd_parity_probability(2 * model.m_star - 1, rate)


@dataclass
class JointTable:
    """
    Exact distribution of the mapped error on one face, per copy.

    Patterns are keyed by (x_mask, z_mask) over the face's surface edges,
    bit j - 1 standing for e_j.
    """
    ell: int
    m: int
    channel: Channel
    copies: Tuple[Dict[Tuple[int, int], float], Dict[Tuple[int, int], float]]

    def probability(self, copy: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> float:
        """Probability of exactly this pattern on the copy (edges 1-based)."""
        key = (_edge_mask(x), _edge_mask(z))
        return self.copies[copy - 1].get(key, 0.0)

    def occurrence(self, copy: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> float:
        """Probability that all listed single-qubit errors are present."""
        want_x, want_z = _edge_mask(x), _edge_mask(z)
        return sum(
            prob for (px, pz), prob in self.copies[copy - 1].items()
            if px & want_x == want_x and pz & want_z == want_z
        )

    def marginal(self, copy: int, kind: str, j: int) -> float:
        if kind == "X":
            return self.occurrence(copy, x=(j,))
        return self.occurrence(copy, z=(j,))

    def total(self, copy: int) -> float:
        return sum(self.copies[copy - 1].values())

    def rows(self, copy: int) -> List[Tuple[str, float]]:
        """Patterns in table form with labels 2j-1 (copy 1) or 2j (copy 2)."""
        offset = 1 if copy == 1 else 0
        rows = []
        for (px, pz), prob in sorted(self.copies[copy - 1].items()):
            label = "".join(f"X{2 * j - offset}" for j in _edges_of(px))
            label += "".join(f"Z{2 * j - offset}" for j in _edges_of(pz))
            rows.append((label or "I", prob))
        return rows


def _edge_mask(edges: Iterable[int]) -> int:
    mask = 0
    for j in edges:
        mask |= 1 << (j - 1)
    return mask


def _edges_of(mask: int) -> List[int]:
    return [j + 1 for j in range(mask.bit_length()) if mask >> j & 1]


def _split_local(mask: int, ell: int) -> Tuple[int, int]:
    first = second = 0
    for j in range(ell):
        if mask >> (2 * j) & 1:
            first |= 1 << j
        if mask >> (2 * j + 1) & 1:
            second |= 1 << j
    return first, second


def joint_table(face: LabeledFace, channel: Channel, max_ell: int = 4) -> JointTable:
    """
    Enumerate every error pattern of one face and marginalize per copy.

    Args:
        face: Labeled c''-face
        channel: Bit-flip or phase-flip channel
        max_ell: Largest half face size enumerated exhaustively

    Returns:
        JointTable
    """
    if channel.kind is ChannelKind.ERASURE:
        raise ChannelError("Joint tables are defined for bit-flip and phase-flip channels only")
    ell, m = face.ell, face.m
    if ell > max_ell:
        raise ChannelError(f"Face with l={ell} is too large for exhaustive enumeration (max {max_ell})")

    z_local, x_local = face_images(ell, m)
    images = x_local if channel.kind is ChannelKind.BITFLIP else z_local
    size = 2 * ell
    rate = channel.rate
    copies: Tuple[Dict[Tuple[int, int], float], Dict[Tuple[int, int], float]] = ({}, {})

    for bits in itertools.product((0, 1), repeat=size):
        weight = sum(bits)
        prob = rate ** weight * (1 - rate) ** (size - weight)
        if prob == 0.0:
            continue
        x = z = 0
        for k, bit in enumerate(bits):
            if bit:
                x ^= images[k].x
                z ^= images[k].z
        x1, x2 = _split_local(x, ell)
        z1, z2 = _split_local(z, ell)
        copies[0][(x1, z1)] = copies[0].get((x1, z1), 0.0) + prob
        copies[1][(x2, z2)] = copies[1].get((x2, z2), 0.0) + prob

    return JointTable(ell, m, channel, copies)


def empirical_marginals(code_map: CodeMap, channel: Channel, trials: int, seed: int,
                        batch: int = 10000) -> Tuple[np.ndarray, np.ndarray]:
    """
    Monte Carlo frequencies of single-qubit errors in pi(E).

    Returns:
        (x_freq, z_freq) over the doubled surface qubits
    """
    if channel.kind is ChannelKind.ERASURE:
        raise ChannelError("Empirical marginals are defined for bit-flip and phase-flip channels only")
    kind = "X" if channel.kind is ChannelKind.BITFLIP else "Z"
    images = code_map.symplectic_images(kind).astype(np.int64)
    half = code_map.num_surface_qubits
    rng = trial_rng(seed)
    x_counts = np.zeros(half, dtype=np.int64)
    z_counts = np.zeros(half, dtype=np.int64)

    done = 0
    while done < trials:
        size = min(batch, trials - done)
        errors = (rng.random((size, code_map.n)) < channel.rate).astype(np.int64)
        mapped = (errors @ images) % 2
        x_counts += mapped[:, :half].sum(axis=0)
        z_counts += mapped[:, half:].sum(axis=0)
        done += size

    return x_counts / trials, z_counts / trials
