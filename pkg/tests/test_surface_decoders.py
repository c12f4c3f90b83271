"""
Unit тесты для декодеров поверхностного кода
"""

import unittest

import numpy as np

from core.colex import build_square_octagon
from core.contraction import contract
from core.pauli import indices_of, mask_from_bits
from core.surface_decoders import (
    BACKENDS, BRUTE_FORCE_LIMIT, DecoderError, DefectGraph, ErasureInconsistencyError, MatchingDecoder,
    mwpm_decode, peel_decode,
)


class TestMatchingDecoder(unittest.TestCase):
    """Тесты декодера минимального паросочетания."""

    @classmethod
    def setUpClass(cls):
        cls.graph = contract(build_square_octagon(4), "r")
        cls.rng = np.random.default_rng(17)

    def _random_defects(self, decoding_graph, rate=0.06):
        error = mask_from_bits(self.rng.random(len(decoding_graph.endpoints)) < rate)
        return decoding_graph.boundary(error)

    def test_minimum_weight(self):
        """Тест: вес коррекции равен минимуму по всем паросочетаниям."""
        for kind in ("primal", "dual"):
            decoding_graph = self.graph.decoding_graph(kind)
            nx_graph = decoding_graph.to_networkx()
            decoders = [MatchingDecoder(decoding_graph, backend=backend) for backend in BACKENDS]
            checked = 0
            while checked < 15:
                defects = self._random_defects(decoding_graph)
                count = defects.bit_count()
                if not count or count > BRUTE_FORCE_LIMIT:
                    continue
                best = DefectGraph.build(nx_graph, indices_of(defects)).min_pairing_weight()
                for decoder in decoders:
                    correction = decoder.decode(defects)
                    self.assertEqual(decoding_graph.boundary(correction), defects)
                    self.assertEqual(correction.bit_count(), best, decoder.backend)
                checked += 1

    def test_weighted_minimum(self):
        """Тест взвешенного паросочетания."""
        decoding_graph = self.graph.primal
        weights = self.rng.uniform(1.0, 3.0, size=len(decoding_graph.endpoints))
        nx_graph = decoding_graph.to_networkx(weights)
        for _ in range(10):
            defects = self._random_defects(decoding_graph, rate=0.1)
            if not defects or defects.bit_count() > BRUTE_FORCE_LIMIT:
                continue
            best = DefectGraph.build(nx_graph, indices_of(defects)).min_pairing_weight()
            for backend in BACKENDS:
                correction = mwpm_decode(decoding_graph, defects, weights, backend)
                total = sum(weights[e] for e in indices_of(correction))
                self.assertEqual(decoding_graph.boundary(correction), defects)
                # pymatching округляет веса до целых
                self.assertGreaterEqual(total, best - 1e-9)
                self.assertAlmostEqual(total, best, delta=1e-2)

    def test_trivial_syndrome(self):
        """Тест пустого синдрома."""
        self.assertEqual(mwpm_decode(self.graph.primal, 0), 0)

    def test_odd_defects(self):
        """Тест нечётного числа дефектов."""
        for backend in BACKENDS:
            with self.assertRaises(DecoderError):
                mwpm_decode(self.graph.primal, 0b1, backend=backend)

    def test_bad_arguments(self):
        """Тест некорректных параметров."""
        with self.assertRaises(DecoderError):
            MatchingDecoder(self.graph.primal, backend="union-find")
        with self.assertRaises(DecoderError):
            MatchingDecoder(self.graph.primal, weights=[1.0, 2.0])


class TestDefectGraph(unittest.TestCase):
    """Тесты графа дефектов."""

    def test_shortest_paths_are_metric(self):
        """Тест метрики кратчайших путей."""
        graph = contract(build_square_octagon(4), "r").primal.to_networkx()
        defect_graph = DefectGraph.build(graph, [0, 3, 5, 9])
        self.assertTrue(defect_graph.is_metric())
        self.assertEqual(len(defect_graph), 4)

    def test_non_metric(self):
        """Тест нарушения неравенства треугольника."""
        distances = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        self.assertFalse(DefectGraph((0, 1, 2), distances, {}).is_metric())

    def test_brute_force(self):
        """Тест перебора паросочетаний."""
        distances = np.array([
            [0.0, 1.0, 4.0, 3.0],
            [1.0, 0.0, 3.0, 4.0],
            [4.0, 3.0, 0.0, 1.0],
            [3.0, 4.0, 1.0, 0.0],
        ])
        defect_graph = DefectGraph((0, 1, 2, 3), distances, {})
        self.assertEqual(defect_graph.min_pairing_weight(), 2.0)
        self.assertEqual(defect_graph.match(), [(0, 1), (2, 3)])
        self.assertEqual(defect_graph.pairing_weight([(0, 2), (1, 3)]), 8.0)


class TestPeeling(unittest.TestCase):
    """Тесты декодера стираний."""

    @classmethod
    def setUpClass(cls):
        cls.graph = contract(build_square_octagon(4), "r")

    def test_random_erasures(self):
        """Тест коррекции внутри стирания."""
        rng = np.random.default_rng(23)
        for kind in ("primal", "dual"):
            decoding_graph = self.graph.decoding_graph(kind)
            num_edges = len(decoding_graph.endpoints)
            for _ in range(30):
                erased = mask_from_bits(rng.random(num_edges) < 0.3)
                error = erased & mask_from_bits(rng.random(num_edges) < 0.5)
                defects = decoding_graph.boundary(error)
                correction = peel_decode(decoding_graph, erased, defects)
                self.assertEqual(correction & ~erased, 0)
                self.assertEqual(decoding_graph.boundary(correction), defects)

    def test_empty_erasure(self):
        """Тест пустого стирания."""
        self.assertEqual(peel_decode(self.graph.primal, 0, 0), 0)

    def test_defect_outside_erasure(self):
        """Тест дефекта вне стёртой области."""
        a, b = self.graph.primal.endpoints[0]
        with self.assertRaises(ErasureInconsistencyError):
            peel_decode(self.graph.primal, 0, (1 << a) | (1 << b))

    def test_odd_component(self):
        """Тест нечётного числа дефектов в компоненте."""
        a, _ = self.graph.primal.endpoints[0]
        with self.assertRaises(ErasureInconsistencyError):
            peel_decode(self.graph.primal, 0b1, 1 << a)


if __name__ == '__main__':
    unittest.main()
