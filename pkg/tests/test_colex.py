"""
Unit тесты для построения и разметки решёток цветового кода
"""

import unittest
from dataclasses import replace

from core.colex import (
    LatticeError, build_hexagonal, build_lattice, build_square_octagon, color_code_group,
    default_contract_color, is_valid_size, label_faces, third_color, validate,
)


class TestSquareOctagon(unittest.TestCase):
    """Тесты решётки 4.8.8."""

    @classmethod
    def setUpClass(cls):
        cls.colex = build_square_octagon(2)

    def test_counts(self):
        """Тест числа вершин, рёбер и граней."""
        self.assertEqual(self.colex.n, 16)
        self.assertEqual(len(self.colex.edges), 24)
        self.assertEqual(len(self.colex.faces), 8)
        self.assertEqual(self.colex.euler_characteristic(), 0)

    def test_valid(self):
        """Тест проверки корректной решётки."""
        report = validate(self.colex)
        self.assertTrue(report)
        self.assertTrue(validate(build_square_octagon(4)))

    def test_face_colors(self):
        """Тест раскраски граней: квадраты красные."""
        sizes = {face.color: face.size for face in self.colex.faces}
        self.assertEqual(sizes["r"], 4)
        self.assertEqual(sizes["g"], 8)
        self.assertEqual(sizes["b"], 8)
        self.assertEqual(default_contract_color(self.colex), "r")

    def test_edge_color_is_missing_face_color(self):
        """Тест цвета ребра."""
        for e, edge in enumerate(self.colex.edges):
            f1, f2 = self.colex.edge_faces[e]
            self.assertEqual(edge.color, third_color(self.colex.faces[f1].color, self.colex.faces[f2].color))

    def test_invalid_size(self):
        """Тест недопустимого размера."""
        for size in (0, 3, 5):
            with self.assertRaises(LatticeError):
                build_square_octagon(size)
        self.assertFalse(is_valid_size("square-octagon", 3))
        self.assertTrue(is_valid_size("square-octagon", 6))

    def test_torus_encodes_four_qubits(self):
        """Тест числа логических кубитов на торе."""
        self.assertEqual(color_code_group(self.colex).k, 4)


class TestHexagonal(unittest.TestCase):
    """Тесты шестиугольной решётки."""

    def test_smallest_instance(self):
        """Тест наименьшей решётки."""
        colex = build_hexagonal(3)
        self.assertEqual(colex.n, 18)
        self.assertEqual(len(colex.edges), 27)
        self.assertEqual(len(colex.faces), 9)
        self.assertTrue(validate(colex))
        self.assertTrue(all(face.size == 6 for face in colex.faces))
        self.assertEqual(color_code_group(colex).k, 4)

    def test_size_must_be_multiple_of_three(self):
        """Тест размера, не кратного трём."""
        with self.assertRaises(LatticeError):
            build_hexagonal(4)

    def test_dispatch(self):
        """Тест выбора семейства."""
        self.assertEqual(build_lattice("hexagonal", 3).family, "hexagonal")
        with self.assertRaises(LatticeError):
            build_lattice("kagome", 3)


class TestValidate(unittest.TestCase):
    """Тесты обнаружения нарушений."""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.colex = build_square_octagon(2)

    def test_missing_edge(self):
        """Тест вершины степени 2."""
        broken = replace(self.colex, edges=self.colex.edges[1:])
        report = validate(broken)
        self.assertFalse(report)
        self.assertEqual(report.kind, "degree")

    def test_parallel_edge(self):
        """Тест кратного ребра."""
        broken = replace(self.colex, edges=self.colex.edges + (self.colex.edges[0],))
        report = validate(broken)
        self.assertFalse(report)
        self.assertEqual(report.kind, "parallel_edge")

    def test_wrong_genus(self):
        """Тест характеристики Эйлера."""
        report = validate(replace(self.colex, genus=2))
        self.assertFalse(report)
        self.assertEqual(report.kind, "euler")

    def test_recolored_edge(self):
        """Тест вершины с повторяющимся цветом рёбер."""
        edges = list(self.colex.edges)
        first = edges[0]
        other = next(e for e in self.colex.vertex_edges[first.u] if e != 0)
        edges[0] = first._replace(color=edges[other].color)
        report = validate(replace(self.colex, edges=tuple(edges)))
        self.assertFalse(report)
        self.assertEqual(report.kind, "vertex_colors")

    def test_recolored_face(self):
        """Тест нарушения 3-раскрашиваемости."""
        faces = list(self.colex.faces)
        faces[0] = replace(faces[0], color="g")
        report = validate(replace(self.colex, faces=tuple(faces)))
        self.assertFalse(report)
        self.assertIn(report.kind, ("face_coloring", "edge_color", "face_boundary"))


class TestLabeling(unittest.TestCase):
    """Тесты канонической разметки граней."""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.colex = build_square_octagon(4)
        self.labeling = label_faces(self.colex)

    def test_colors(self):
        """Тест выбора цветов c, c', c''."""
        self.assertEqual(self.labeling.c, "r")
        self.assertEqual(self.labeling.c_prime, "g")
        self.assertEqual(self.labeling.c_double_prime, "b")

    def test_faces_partition_vertices(self):
        """Тест разбиения вершин гранями c''."""
        seen = [v for labeled in self.labeling.faces for v in labeled.vertices]
        self.assertEqual(sorted(seen), list(range(self.colex.n)))

    def test_edge_colors_along_face(self):
        """Тест цветов рёбер в разметке."""
        colex = self.colex
        for labeled in self.labeling.faces:
            ell = labeled.ell
            for i in range(1, ell + 1):
                c_edge = colex.edge_between(labeled.vertex(2 * i - 1), labeled.vertex(2 * i))
                self.assertEqual(colex.edges[c_edge].color, "r")
            self.assertEqual(colex.edges[labeled.d_z_edge].color, "g")
            self.assertEqual(colex.edges[labeled.d_x_edge].color, "g")
            self.assertEqual(labeled.d_z_edge, colex.edge_between(labeled.vertex(2 * ell), labeled.vertex(1)))

    def test_default_m(self):
        """Тест m по умолчанию для восьмиугольника."""
        self.assertTrue(all(labeled.m == 2 for labeled in self.labeling.faces))
        self.assertEqual(self.labeling.m_star, 2)

    def test_m_rules(self):
        """Тест правил выбора m."""
        fixed = label_faces(self.colex, m_rule=1)
        self.assertTrue(all(labeled.m == 1 for labeled in fixed.faces))
        self.assertEqual(fixed.m_star, 3)
        per_face = label_faces(self.colex, m_rule=lambda face, ell: ell)
        self.assertTrue(all(labeled.m == 4 for labeled in per_face.faces))

    def test_m_out_of_range(self):
        """Тест m вне [1, l]."""
        with self.assertRaises(LatticeError):
            label_faces(self.colex, m_rule=5)
        with self.assertRaises(LatticeError):
            label_faces(self.colex, m_rule=0)

    def test_unknown_color(self):
        """Тест неизвестного цвета."""
        with self.assertRaises(LatticeError):
            label_faces(self.colex, "y")


if __name__ == '__main__':
    unittest.main()
