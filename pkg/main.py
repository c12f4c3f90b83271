#!/usr/bin/env python3
"""
Colormap - command line interface
Color code to two surface codes: lattices, map checks, decoding, threshold simulation and circuits
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from core.cache_manager import get_artifact_cache
from core.circuits import CircuitError, CliffordCircuit, emit_lattice_circuit, output_permutation, verify_circuit
from core.codemap import MapError, build_map, check_invariants
from core.colex import COLORS, FAMILIES, LatticeError, build_lattice, label_faces
from core.config_manager import ConfigError, ConfigManager
from core.contraction import ContractionError, contract
from core.decoder import ColorCodeDecoder
from core.lattice_io import LatticeFileError, load_colex, load_erasure, load_syndrome, save_colex, save_surface_graph
from core.logger import cleanup_old_logs, get_activity_logger, log_check_result, log_decoder_inconsistency, log_threshold_estimate, setup_logging
from core.noise import Channel, ChannelError, induced_marginals
from core.pauli import PauliError
from core.simulation import (
    SimConfig, SimulationError, ThresholdError, estimate_threshold, parse_rates, parse_sizes, read_csv, run,
    write_csv, write_gnuplot,
)
from core.surface_decoders import BACKENDS, DecoderError
from core.syndrome import SyndromeError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Ошибки входных данных и конфигурации
USAGE_ERRORS = (
    LatticeError, LatticeFileError, ContractionError, MapError, ChannelError, CircuitError,
    PauliError, SyndromeError, ConfigError, SimulationError,
)


class ColormapApp:
    def __init__(self, config_manager: ConfigManager):
        self.logger = logging.getLogger(__name__)
        self.config_manager = config_manager
        self.activity = get_activity_logger()

    def _labeling(self, colex, args):
        lattice = self.config_manager.get_section("lattice")
        color = args.contract_color or lattice.get("contract_color")
        m = args.m if args.m is not None else lattice.get("m_rule")
        labeling = label_faces(colex, color, m)
        graph = contract(colex, labeling.c)
        return labeling, graph

    def _map(self, colex, args):
        labeling, graph = self._labeling(colex, args)
        return build_map(colex, graph, labeling)

    def cmd_lattice(self, args) -> int:
        colex = build_lattice(args.family, args.size)
        save_colex(colex, args.out)
        self.activity.info(f"LATTICE: {args.family} L={args.size} -> {args.out}")
        print(f"{args.family} L={args.size}: {colex.n} qubits, {len(colex.edges)} edges, {len(colex.faces)} faces")
        return EXIT_OK

    def cmd_map(self, args) -> int:
        colex = load_colex(args.lattice)
        labeling, graph = self._labeling(colex, args)
        save_surface_graph(graph, args.out)
        print(f"Contracted {labeling.c}-faces: V={graph.num_vertices}, E={graph.num_edges}, F={graph.num_faces}")
        return EXIT_OK

    def cmd_map_check(self, args) -> int:
        colex = load_colex(args.lattice)
        code_map = self._map(colex, args)
        labeled = code_map.labeling.faces[0]
        print(f"Face {labeled.face} (l={labeled.ell}, m={labeled.m}):")
        for generator, image in code_map.image_table(labeled.face):
            print(f"  {generator:<6} -> {image}")

        problems = check_invariants(code_map)
        target = f"{args.lattice} ({colex.family} L={colex.size})"
        log_check_result("map-check", target, not problems, problems[0] if problems else None)
        if problems:
            for message in problems:
                print(f"FAILED: {message}")
            return EXIT_FAILED
        print("All map invariants hold")
        return EXIT_OK

    def cmd_decode(self, args) -> int:
        colex = load_colex(args.lattice)
        code_map = self._map(colex, args)
        syndrome = load_syndrome(args.syndrome, colex)
        decoder_config = self.config_manager.get_section("decoder")
        backend = args.backend or decoder_config.get("matching_backend", "pymatching")
        naive = args.naive_erasure_map or decoder_config.get("naive_erasure_map", False)

        model = None
        if args.weighted:
            if args.rate is None:
                raise SimulationError("--weighted needs --rate")
            model = induced_marginals(colex, code_map.labeling, code_map.graph, Channel(args.channel, args.rate))

        decoder = ColorCodeDecoder(code_map, model, backend)
        try:
            if args.erasure:
                correction = decoder.decode_erasure(load_erasure(args.erasure, colex), syndrome, naive)
            else:
                correction = decoder.decode(syndrome)
        except DecoderError as e:
            log_decoder_inconsistency(args.lattice, str(e))
            self.logger.error(f"Decoding failed: {e}")
            print(f"Decoding failed: {e}")
            return EXIT_FAILED
        print(correction)
        return EXIT_OK

    def cmd_simulate(self, args) -> int:
        simulation = self.config_manager.get_section("simulation")
        config = SimConfig.from_settings(
            self.config_manager,
            family=args.family,
            sizes=parse_sizes(args.sizes) if args.sizes else None,
            channel=args.channel,
            rates=parse_rates(args.rates),
            trials=args.trials,
            seed=args.seed,
            workers=args.workers,
            weighted=args.weighted or None,
            naive_erasure_map=args.naive_erasure_map or None,
            contract_color=args.contract_color,
            m=args.m,
            chunk_size=args.chunk_size,
            backend=args.backend,
        )
        results = run(config)
        out = args.out or os.path.join(simulation.get("output_dir", "results"), f"{config.family}_{config.channel}.csv")
        write_csv(results, out)
        if args.gnuplot or simulation.get("write_gnuplot", False):
            gnuplot_path = args.gnuplot or os.path.splitext(out)[0] + ".dat"
            write_gnuplot(results, gnuplot_path)

        print("L     rate       failures/trials   rate_logical  95% CI")
        for result in results:
            lo, hi = result.interval
            print(f"{result.size:<5} {result.rate:<10.5f} {result.failures:>7}/{result.trials:<9} "
                  f"{result.rate_logical:<13.5f} [{lo:.5f}, {hi:.5f}]")
        return EXIT_OK

    def cmd_threshold(self, args) -> int:
        results = read_csv(args.input)
        channels = sorted({result.channel for result in results})
        try:
            estimate = estimate_threshold(results)
        except ThresholdError as e:
            log_threshold_estimate(",".join(channels), error=str(e))
            print(f"No threshold: {e}")
            return EXIT_FAILED
        log_threshold_estimate(",".join(channels), estimate.estimate, estimate.uncertainty)
        for size_a, size_b, rate, delta in estimate.crossings:
            print(f"L={size_a} x L={size_b}: {rate:.5f} +/- {delta:.5f}")
        print(f"Threshold: {estimate.estimate:.5f} +/- {estimate.uncertainty:.5f}")
        return EXIT_OK

    def cmd_emit_circuit(self, args) -> int:
        colex = load_colex(args.lattice)
        labeling, graph = self._labeling(colex, args)
        circuit = emit_lattice_circuit(labeling, colex.n)
        permutation = output_permutation(labeling, graph)
        text = circuit.to_text(comments=[f"out {q} {s}" for q, s in enumerate(permutation)])
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
        counts = circuit.counts()
        print(f"{counts['CX']} CX, {counts['SWAP']} SWAP, {counts['H']} H -> {args.out}")
        return EXIT_OK

    def cmd_verify_circuit(self, args) -> int:
        colex = load_colex(args.lattice)
        code_map = self._map(colex, args)
        circuit = None
        if args.circuit:
            try:
                with open(args.circuit, 'r', encoding='utf-8') as f:
                    circuit = CliffordCircuit.from_text(f.read())
            except OSError as e:
                raise LatticeFileError(f"Cannot open {args.circuit}: {e}") from e
        check = verify_circuit(code_map, circuit)
        log_check_result("verify-circuit", args.lattice, check.ok, None if check.ok else check.describe())
        print(check.describe())
        return EXIT_OK if check.ok else EXIT_FAILED


def _add_labeling_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--contract-color", choices=COLORS, help="Color of the contracted faces")
    parser.add_argument("--m", type=int, help="Split index m for every labeled face")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colormap", description="Color code to surface code toolkit")
    parser.add_argument("--config-dir", default="config", help="Directory with settings.json")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-dir", help="Directory for log files")
    parser.add_argument("--no-file-logging", action="store_true", help="Log to the console only")
    commands = parser.add_subparsers(dest="command", required=True)

    lattice = commands.add_parser("lattice", help="Build a lattice file")
    lattice.add_argument("--family", choices=FAMILIES, required=True)
    lattice.add_argument("--size", type=int, required=True)
    lattice.add_argument("--out", required=True)

    surface = commands.add_parser("map", help="Contract a lattice into a surface graph")
    surface.add_argument("--lattice", required=True)
    surface.add_argument("--out", required=True)
    _add_labeling_options(surface)

    check = commands.add_parser("map-check", help="Print generator images and check map invariants")
    check.add_argument("--lattice", required=True)
    _add_labeling_options(check)

    decode = commands.add_parser("decode", help="Decode a color-code syndrome")
    decode.add_argument("--lattice", required=True)
    decode.add_argument("--syndrome", required=True)
    decode.add_argument("--erasure")
    decode.add_argument("--naive-erasure-map", action="store_true")
    decode.add_argument("--weighted", action="store_true")
    decode.add_argument("--channel", choices=("bitflip", "phaseflip"), default="bitflip")
    decode.add_argument("--rate", type=float, help="Physical rate for weighted matching")
    decode.add_argument("--backend", choices=BACKENDS)
    _add_labeling_options(decode)

    simulate = commands.add_parser("simulate", help="Monte Carlo logical failure rates")
    simulate.add_argument("--family", choices=FAMILIES)
    simulate.add_argument("--sizes", help="Comma list, e.g. 4,6,8")
    simulate.add_argument("--channel", choices=("bitflip", "phaseflip", "erasure"), required=True)
    simulate.add_argument("--rates", required=True, help="start:stop:step or comma list")
    simulate.add_argument("--trials", type=int)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--chunk-size", type=int)
    simulate.add_argument("--weighted", action="store_true")
    simulate.add_argument("--naive-erasure-map", action="store_true")
    simulate.add_argument("--backend", choices=BACKENDS)
    simulate.add_argument("--out", help="CSV output path")
    simulate.add_argument("--gnuplot", help="gnuplot data output path")
    _add_labeling_options(simulate)

    threshold = commands.add_parser("threshold", help="Estimate the threshold from a results CSV")
    threshold.add_argument("--input", required=True)

    emit = commands.add_parser("emit-circuit", help="Write the Clifford transformation circuit")
    emit.add_argument("--lattice", required=True)
    emit.add_argument("--out", required=True)
    _add_labeling_options(emit)

    verify = commands.add_parser("verify-circuit", help="Check the circuit against the map")
    verify.add_argument("--lattice", required=True)
    verify.add_argument("--circuit", help="Circuit file (default: freshly emitted)")
    _add_labeling_options(verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    config_manager = ConfigManager(args.config_dir)
    logging_config = config_manager.get_section("logging")
    log_dir = args.log_dir or logging_config.get("log_dir", "logs")
    file_logging = logging_config.get("enable_file_logging", True) and not args.no_file_logging
    setup_logging(args.log_level or logging_config.get("log_level", "INFO"), log_dir, file_logging)
    if file_logging:
        cleanup_old_logs(log_dir, logging_config.get("log_retention_days", 30))

    cache = get_artifact_cache()
    cache.default_ttl = config_manager.get("cache", "artifact_ttl", cache.default_ttl)

    logger = logging.getLogger(__name__)
    app = ColormapApp(config_manager)
    handler = getattr(app, f"cmd_{args.command.replace('-', '_')}")
    try:
        return handler(args)
    except SimulationError as e:
        logger.error(f"{args.command}: {e}")
        # ThresholdError and trials with replay info are failed runs, not bad input
        if isinstance(e, ThresholdError) or e.replay:
            return EXIT_FAILED
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except DecoderError as e:
        logger.error(f"{args.command}: decoder inconsistency: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
