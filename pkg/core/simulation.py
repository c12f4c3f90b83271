"""
Seeded Monte Carlo harness for logical failure curves and threshold estimation.

Every trial draws from its own RNG stream keyed by (seed, size index, rate
index, trial index), so counts do not depend on how trials are split across
worker processes.
"""

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.cache_manager import ArtifactCache, get_artifact_cache
from core.codemap import CodeMap, build_map
from core.colex import FAMILIES, Colex, FaceLabeling, build_lattice, is_valid_size, label_faces
from core.contraction import SurfaceGraph, contract
from core.decoder import ColorCodeDecoder, DecodeOutcome, LogicalClassifier
from core.logger import log_decoder_inconsistency, log_simulation_point
from core.noise import Channel, ChannelKind, ErasureEvent, induced_marginals, sample, trial_rng
from core.surface_decoders import BACKENDS, DecoderError
from core.syndrome import measure

logger = logging.getLogger(__name__)

CSV_FIELDS = ["family", "L", "channel", "rate", "trials", "failures", "rate_logical", "ci_lo", "ci_hi", "seed"]
WILSON_Z = 1.96


class SimulationError(Exception):
    """Ошибка конфигурации или выполнения моделирования"""

    def __init__(self, message: str, replay: Optional[Dict[str, int]] = None):
        super().__init__(message)
        self.replay = replay

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.replay))


class ThresholdError(SimulationError):
    """Пересечение кривых не найдено"""
    pass


@dataclass(frozen=True)
class SimConfig:
    family: str
    sizes: Tuple[int, ...]
    channel: str
    rates: Tuple[float, ...]
    trials: int
    seed: int = 7
    weighted: bool = False
    naive_erasure_map: bool = False
    workers: int = 1
    contract_color: Optional[str] = None
    m: Optional[int] = None
    chunk_size: int = 1000
    backend: str = "pymatching"

    def validate(self) -> "SimConfig":
        if self.family not in FAMILIES:
            raise SimulationError(f"Unknown lattice family: {self.family!r}")
        if not self.sizes:
            raise SimulationError("No lattice sizes given")
        for size in self.sizes:
            if not is_valid_size(self.family, size):
                raise SimulationError(f"Size {size} is not valid for the {self.family} family")
        try:
            ChannelKind(self.channel)
        except ValueError:
            raise SimulationError(f"Unknown channel: {self.channel!r}") from None
        if not self.rates:
            raise SimulationError("No physical rates given")
        for rate in self.rates:
            if not 0.0 <= rate <= 1.0:
                raise SimulationError(f"Rate {rate} outside [0, 1]")
        if self.trials < 1:
            raise SimulationError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise SimulationError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise SimulationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.backend not in BACKENDS:
            raise SimulationError(f"Unknown matching backend: {self.backend!r}")
        return self

    @classmethod
    def from_settings(cls, config_manager, **overrides: Any) -> "SimConfig":
        """
        Build a config from the settings file, then apply non-None overrides.

        Args:
            config_manager: ConfigManager instance
            overrides: Field values from the command line

        Returns:
            Validated SimConfig
        """
        lattice = config_manager.get_section("lattice")
        decoder = config_manager.get_section("decoder")
        simulation = config_manager.get_section("simulation")
        m_rule = lattice.get("m_rule")
        values = {
            "family": lattice.get("family", "square-octagon"),
            "sizes": (lattice.get("size", 4),),
            "channel": "bitflip",
            "rates": (),
            "trials": simulation.get("trials", 20000),
            "seed": simulation.get("seed", 7),
            "weighted": decoder.get("weighted", False),
            "naive_erasure_map": decoder.get("naive_erasure_map", False),
            "workers": simulation.get("workers", 1),
            "contract_color": lattice.get("contract_color"),
            "m": m_rule if isinstance(m_rule, int) else None,
            "chunk_size": simulation.get("chunk_size", 1000),
            "backend": decoder.get("matching_backend", "pymatching"),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        values["sizes"] = tuple(values["sizes"])
        values["rates"] = tuple(values["rates"])
        return cls(**values).validate()


def wilson_interval(failures: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    p_hat = failures / trials
    denominator = 1 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class SimResult:
    family: str
    size: int
    channel: str
    rate: float
    trials: int
    failures: int
    seed: int
    wall_time: float = 0.0

    def __post_init__(self):
        if not 0 <= self.failures <= self.trials:
            raise SimulationError(f"failures={self.failures} outside [0, trials={self.trials}]")

    @property
    def rate_logical(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def interval(self) -> Tuple[float, float]:
        return wilson_interval(self.failures, self.trials)

    @property
    def ci_lo(self) -> float:
        return self.interval[0]

    @property
    def ci_hi(self) -> float:
        return self.interval[1]

    def to_row(self) -> Dict[str, Any]:
        lo, hi = self.interval
        return {
            "family": self.family,
            "L": self.size,
            "channel": self.channel,
            "rate": f"{self.rate:.6g}",
            "trials": self.trials,
            "failures": self.failures,
            "rate_logical": f"{self.rate_logical:.6g}",
            "ci_lo": f"{lo:.6g}",
            "ci_hi": f"{hi:.6g}",
            "seed": self.seed,
        }


@dataclass
class LatticeBundle:
    """Everything a trial needs that depends on the lattice only."""
    colex: Colex
    graph: SurfaceGraph
    labeling: FaceLabeling
    code_map: CodeMap
    classifier: LogicalClassifier


def build_bundle(family: str, size: int, color: Optional[str] = None, m: Optional[int] = None) -> LatticeBundle:
    colex = build_lattice(family, size)
    labeling = label_faces(colex, color, m)
    graph = contract(colex, labeling.c)
    code_map = build_map(colex, graph, labeling)
    return LatticeBundle(colex, graph, labeling, code_map, LogicalClassifier(code_map))


def get_bundle(config: SimConfig, size: int, cache: Optional[ArtifactCache] = None) -> LatticeBundle:
    cache = cache or get_artifact_cache()
    key = ArtifactCache.lattice_key(config.family, size, config.contract_color, config.m)
    return cache.get_artifact(
        "bundle", key, lambda: build_bundle(config.family, size, config.contract_color, config.m)
    )


def get_decoder(config: SimConfig, size: int, rate: float, cache: Optional[ArtifactCache] = None) -> ColorCodeDecoder:
    """Decoder for one lattice; weighted decoders also depend on the rate."""
    cache = cache or get_artifact_cache()
    bundle = get_bundle(config, size, cache)
    key = ArtifactCache.lattice_key(config.family, size, config.contract_color, config.m)
    weighted = config.weighted and config.channel != ChannelKind.ERASURE.value and 0.0 < rate < 0.5

    def builder() -> ColorCodeDecoder:
        model = None
        if weighted:
            model = induced_marginals(bundle.colex, bundle.labeling, bundle.graph, Channel(config.channel, rate))
        return ColorCodeDecoder(bundle.code_map, model, config.backend)

    extra = (config.backend, config.channel, f"w{rate!r}") if weighted else (config.backend,)
    return cache.get_artifact("decoder", key, builder, *extra)


def run_trial(bundle: LatticeBundle, decoder: ColorCodeDecoder, channel: Channel,
              rng: np.random.Generator, naive_erasure_map: bool = False) -> bool:
    """
    One sample-measure-decode-classify round.

    Returns:
        True on a logical failure
    """
    drawn = sample(channel, bundle.colex, rng)
    if isinstance(drawn, ErasureEvent):
        error = drawn.pauli
        syndrome = measure(bundle.colex, error)
        estimate = decoder.decode_erasure(drawn.erased, syndrome, naive_erasure_map)
    else:
        error = drawn
        estimate = decoder.decode(measure(bundle.colex, error))
    return bundle.classifier.classify(error, estimate) is DecodeOutcome.LOGICAL_FAILURE


def run_chunk(config: SimConfig, size_index: int, rate_index: int, start: int, stop: int) -> Tuple[int, float]:
    """
    Trials start..stop-1 of one (size, rate) point.

    Returns:
        (failures, elapsed seconds)
    """
    began = time.perf_counter()
    size, rate = config.sizes[size_index], config.rates[rate_index]
    bundle = get_bundle(config, size)
    decoder = get_decoder(config, size, rate)
    channel = Channel(config.channel, rate)
    failures = 0
    for t in range(start, stop):
        rng = trial_rng(config.seed, size_index, rate_index, t)
        try:
            failures += run_trial(bundle, decoder, channel, rng, config.naive_erasure_map)
        except DecoderError as e:
            replay = {"seed": config.seed, "size_index": size_index, "rate_index": rate_index, "trial": t}
            log_decoder_inconsistency(f"{config.family} L={size}", str(e), replay)
            raise SimulationError(f"Decoder failed at L={size}, rate={rate}: {e}", replay) from e
    return failures, time.perf_counter() - began


class MonteCarloRunner:
    """
    Runs every (size, rate) point of a SimConfig, inline or on a process pool.
    """

    def __init__(self, config: SimConfig):
        self.logger = logging.getLogger(__name__)
        self.config = config.validate()

    def chunks(self) -> List[Tuple[int, int]]:
        size = self.config.chunk_size
        return [(start, min(start + size, self.config.trials)) for start in range(0, self.config.trials, size)]

    def points(self) -> List[Tuple[int, int]]:
        return [(si, ri) for si in range(len(self.config.sizes)) for ri in range(len(self.config.rates))]

    def _result(self, size_index: int, rate_index: int, outcomes: Sequence[Tuple[int, float]]) -> SimResult:
        failures = sum(count for count, _ in outcomes)
        wall_time = sum(elapsed for _, elapsed in outcomes)
        result = SimResult(
            family=self.config.family,
            size=self.config.sizes[size_index],
            channel=self.config.channel,
            rate=self.config.rates[rate_index],
            trials=self.config.trials,
            failures=failures,
            seed=self.config.seed,
            wall_time=wall_time,
        )
        log_simulation_point(result.family, result.size, result.channel, result.rate,
                             result.trials, result.failures, result.wall_time)
        self.logger.info(f"L={result.size} rate={result.rate:.5f}: {result.failures}/{result.trials} failures")
        return result

    def _run_inline(self, chunks: Sequence[Tuple[int, int]]) -> List[SimResult]:
        """Sweep sizes in order, releasing each lattice's artifacts once its rates are done."""
        config = self.config
        cache = get_artifact_cache()
        cache.cleanup_expired()
        results = []
        for si, size in enumerate(config.sizes):
            for ri in range(len(config.rates)):
                results.append(self._result(si, ri, [run_chunk(config, si, ri, start, stop) for start, stop in chunks]))
            cache.invalidate_lattice(ArtifactCache.lattice_key(config.family, size, config.contract_color, config.m))
        stats = cache.get_stats()
        self.logger.info(
            f"Artifact cache: {stats['builds']} builds in {stats['build_seconds']:.2f}s, "
            f"{stats['hits']} hits, {stats['entries']} entries left"
        )
        return results

    def run(self) -> List[SimResult]:
        config = self.config
        chunks = self.chunks()
        self.logger.info(
            f"Simulating {config.family} sizes={list(config.sizes)} {config.channel} "
            f"rates={len(config.rates)} trials={config.trials} workers={config.workers}"
        )

        if config.workers == 1:
            return self._run_inline(chunks)

        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            futures = {
                (si, ri): [executor.submit(run_chunk, config, si, ri, start, stop) for start, stop in chunks]
                for si, ri in self.points()
            }
            return [self._result(si, ri, [future.result() for future in futures[(si, ri)]]) for si, ri in self.points()]


def run(config: SimConfig) -> List[SimResult]:
    return MonteCarloRunner(config).run()


@dataclass
class ThresholdEstimate:
    estimate: float
    uncertainty: float
    crossings: List[Tuple[int, int, float, float]] = field(default_factory=list)


Curve = Sequence[Tuple[float, float, float]]


def _pair_crossing(lower: Curve, upper: Curve) -> Optional[Tuple[float, float]]:
    """
    First rate where the larger lattice's curve rises above the smaller one's.

    Returns:
        (crossing rate, CI-propagated half-width) or None
    """
    small = {rate: (value, half) for rate, value, half in lower}
    rates = sorted(rate for rate, _, _ in upper if rate in small)
    large = {rate: (value, half) for rate, value, half in upper}
    previous = None
    for rate in rates:
        diff = large[rate][0] - small[rate][0]
        if diff == 0:
            continue
        if previous is not None and previous[1] < 0 < diff:
            r0, d0 = previous
            slope = (diff - d0) / (rate - r0)
            crossing = r0 - d0 / slope
            half = math.sqrt(
                ((large[r0][1] + large[rate][1]) / 2) ** 2 + ((small[r0][1] + small[rate][1]) / 2) ** 2
            )
            return crossing, min(half / abs(slope), rate - r0)
        previous = (rate, diff)
    return None


def estimate_crossing(curves: Mapping[int, Curve]) -> ThresholdEstimate:
    """
    Pairwise crossings of linearly interpolated curves.

    Args:
        curves: size -> [(rate, logical failure rate, CI half-width)]

    Returns:
        Mean crossing; uncertainty combines the spread of the pairwise
        crossings with the propagated confidence intervals.
    """
    sizes = sorted(curves)
    if len(sizes) < 2:
        raise ThresholdError("Threshold estimation needs at least two lattice sizes")
    crossings = []
    for i, a in enumerate(sizes):
        for b in sizes[i + 1:]:
            found = _pair_crossing(curves[a], curves[b])
            if found is not None:
                crossings.append((a, b, found[0], found[1]))
    if not crossings:
        raise ThresholdError("No crossing inside the scanned rate window")

    points = np.array([rate for _, _, rate, _ in crossings])
    deltas = np.array([delta for _, _, _, delta in crossings])
    spread = float(np.std(points))
    propagated = float(np.sqrt(np.mean(deltas ** 2)))
    estimate = ThresholdEstimate(float(np.mean(points)), math.hypot(spread, propagated), crossings)
    logger.info(f"Threshold estimate {estimate.estimate:.5f} +/- {estimate.uncertainty:.5f} from {len(crossings)} crossings")
    return estimate


def estimate_threshold(results: Iterable[SimResult]) -> ThresholdEstimate:
    curves: Dict[int, List[Tuple[float, float, float]]] = {}
    for result in results:
        lo, hi = result.interval
        curves.setdefault(result.size, []).append((result.rate, result.rate_logical, (hi - lo) / 2))
    return estimate_crossing(curves)


def parse_sizes(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise SimulationError(f"Malformed size list: {text!r}") from None


def parse_rates(text: str) -> Tuple[float, ...]:
    """
    Rate grid from ``start:stop:step`` (inclusive) or a comma list.
    """
    try:
        if ":" in text:
            start, stop, step = (float(tok) for tok in text.split(":"))
            if step <= 0 or stop < start:
                raise SimulationError(f"Malformed rate range: {text!r}")
            count = int(round((stop - start) / step))
            return tuple(round(start + k * step, 10) for k in range(count + 1))
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise SimulationError(f"Malformed rate list: {text!r}") from None


def write_csv(results: Iterable[SimResult], path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for result in results:
            writer.writerow(result.to_row())
    logger.info(f"Wrote results to {path}")


def read_csv(path: str) -> List[SimResult]:
    """Load results written by write_csv (wall time is not stored)."""
    results = []
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = set(CSV_FIELDS) - set(reader.fieldnames or [])
            if missing:
                raise SimulationError(f"{path}: missing columns {sorted(missing)}")
            for row in reader:
                results.append(SimResult(
                    family=row["family"],
                    size=int(row["L"]),
                    channel=row["channel"],
                    rate=float(row["rate"]),
                    trials=int(row["trials"]),
                    failures=int(row["failures"]),
                    seed=int(row["seed"]),
                ))
    except (OSError, ValueError, KeyError) as e:
        raise SimulationError(f"Cannot read results from {path}: {e}") from e
    return results


def write_gnuplot(results: Iterable[SimResult], path: str) -> None:
    """One block per lattice size, blocks separated by two blank lines."""
    by_size: Dict[int, List[SimResult]] = {}
    for result in results:
        by_size.setdefault(result.size, []).append(result)
    blocks = []
    for size in sorted(by_size):
        lines = [f"# L={size}", "# rate rate_logical ci_lo ci_hi"]
        for result in sorted(by_size[size], key=lambda r: r.rate):
            lo, hi = result.interval
            lines.append(f"{result.rate:.6g} {result.rate_logical:.6g} {lo:.6g} {hi:.6g}")
        blocks.append("\n".join(lines))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n\n\n".join(blocks) + "\n")
