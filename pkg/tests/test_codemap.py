"""
Unit тесты для отображения цветового кода на две копии поверхностного кода
"""

import unittest

import numpy as np

from core.codemap import (
    MapError, build_map, check_invariants, face_images, face_images_recursive, face_inverse_images,
    format_local_image,
)
from core.colex import build_hexagonal, build_square_octagon, label_faces
from core.contraction import contract, lift_to_copy, surface_qubit, surface_stabilizers
from core.pauli import PauliOp, commute, mask_from_bits

TABLE_L4_M2 = {
    "X_v1": "X1", "X_v2": "X1Z2", "X_v3": "X3Z2", "X_v4": "X3Z2Z4",
    "X_v5": "X5Z6Z8", "X_v6": "X5Z8", "X_v7": "X7Z8", "X_v8": "X7",
    "Z_v1": "X2Z1Z3", "Z_v2": "X2Z3", "Z_v3": "X4Z3", "Z_v4": "X4",
    "Z_v5": "X6", "Z_v6": "X6Z5", "Z_v7": "X8Z5", "Z_v8": "X8Z5Z7",
}


def random_pauli(rng, n):
    x = mask_from_bits(rng.integers(0, 2, size=n))
    z = mask_from_bits(rng.integers(0, 2, size=n))
    return PauliOp(n, x, z)


def make_map(colex, c=None, m_rule=None, recursive=False):
    labeling = label_faces(colex, c, m_rule)
    graph = contract(colex, labeling.c)
    return build_map(colex, graph, labeling, recursive=recursive)


class TestFaceImages(unittest.TestCase):
    """Тесты локальных образов одной грани."""

    def test_octagon_table(self):
        """Тест таблицы образов для l=4, m=2."""
        colex = build_square_octagon(2)
        code_map = make_map(colex)
        face = code_map.labeling.faces[0].face
        self.assertEqual(dict(code_map.image_table(face)), TABLE_L4_M2)

    def test_recursive_matches_closed_form(self):
        """Тест совпадения рекурсивного и явного построения."""
        for ell in range(1, 9):
            for m in range(1, ell + 1):
                with self.subTest(ell=ell, m=m):
                    self.assertEqual(face_images(ell, m), face_images_recursive(ell, m))

    def test_local_commutation(self):
        """Тест сохранения коммутации внутри грани."""
        for ell, m in ((1, 1), (3, 1), (3, 2), (4, 2), (6, 3)):
            z_images, x_images = face_images(ell, m)
            for a in range(2 * ell):
                for b in range(2 * ell):
                    self.assertEqual(commute(x_images[a], z_images[b]), int(a == b))
                    self.assertEqual(commute(x_images[a], x_images[b]), 0)
                    self.assertEqual(commute(z_images[a], z_images[b]), 0)

    def test_inverse_images(self):
        """Тест локальных прообразов."""
        for ell, m in ((1, 1), (3, 2), (4, 2), (4, 4)):
            z_images, x_images = face_images(ell, m)
            inv_x, inv_z = face_inverse_images(ell, m)
            size = 2 * ell
            for q in range(size):
                preimage = inv_x[q]
                image = PauliOp(size)
                for k in range(size):
                    if preimage.x >> k & 1:
                        image = image * x_images[k]
                    if preimage.z >> k & 1:
                        image = image * z_images[k]
                self.assertEqual(image, PauliOp.single(size, q, "X"))

    def test_invalid_face(self):
        """Тест недопустимых параметров грани."""
        with self.assertRaises(MapError):
            face_images(4, 5)
        with self.assertRaises(MapError):
            face_images(0, 1)

    def test_format(self):
        """Тест текстового вида образа."""
        self.assertEqual(format_local_image(PauliOp(4)), "I")
        self.assertEqual(format_local_image(PauliOp(4, x=0b10, z=0b101)), "X2Z1Z3")


class TestCodeMap(unittest.TestCase):
    """Тесты глобального отображения."""

    @classmethod
    def setUpClass(cls):
        cls.small = make_map(build_square_octagon(2))
        cls.medium = make_map(build_square_octagon(4))
        cls.hexagonal = make_map(build_hexagonal(3))

    def test_invariants_hold(self):
        """Тест биективности, коммутации и CSS-разбиения."""
        for code_map in (self.small, self.medium, self.hexagonal):
            with self.subTest(family=code_map.colex.family, size=code_map.colex.size):
                self.assertEqual(check_invariants(code_map), [])

    def test_invariants_other_m(self):
        """Тест инвариантов при m=1 и m=l."""
        colex = build_square_octagon(2)
        for m_rule in (1, 4):
            self.assertEqual(check_invariants(make_map(colex, m_rule=m_rule)), [])

    def test_recursive_map(self):
        """Тест отображения из рекурсивных образов."""
        recursive = make_map(self.medium.colex, recursive=True)
        self.assertEqual(recursive.x_images, self.medium.x_images)
        self.assertEqual(recursive.z_images, self.medium.z_images)

    def test_inverse_round_trip(self):
        """Тест обратного отображения на случайных операторах."""
        rng = np.random.default_rng(11)
        for code_map in (self.medium, self.hexagonal):
            for _ in range(1000):
                op = random_pauli(rng, code_map.n)
                self.assertEqual(code_map.apply_inverse(code_map.apply(op)), op)
                surface_op = random_pauli(rng, code_map.num_surface_qubits)
                self.assertEqual(code_map.apply(code_map.apply_inverse(surface_op)), surface_op)

    def test_linearity(self):
        """Тест линейности отображения."""
        rng = np.random.default_rng(5)
        a = random_pauli(rng, self.small.n)
        b = random_pauli(rng, self.small.n)
        self.assertEqual(self.small.apply(a * b), self.small.apply(a) * self.small.apply(b))

    def test_symplectic_images(self):
        """Тест матрицы образов."""
        matrix = self.small.symplectic_images("X")
        self.assertEqual(matrix.shape, (16, 32))
        with self.assertRaises(MapError):
            self.small.symplectic_images("Y")

    def test_wrong_operator_size(self):
        """Тест оператора неверной длины."""
        with self.assertRaises(MapError):
            self.small.apply(PauliOp(5))
        with self.assertRaises(MapError):
            self.small.apply_inverse(PauliOp(5))

    def test_color_mismatch(self):
        """Тест несогласованных цветов разметки и графа."""
        colex = self.small.colex
        labeling = label_faces(colex, "r")
        with self.assertRaises(MapError):
            build_map(colex, contract(colex, "g"), labeling)

    def test_unlabeled_face(self):
        """Тест запроса таблицы для грани другого цвета."""
        red = self.small.colex.faces_of_color("r")[0]
        with self.assertRaises(MapError):
            self.small.image_table(red)


class TestStabilizerImages(unittest.TestCase):
    """Тесты образов стабилизаторов граней."""

    @classmethod
    def setUpClass(cls):
        cls.maps = (make_map(build_square_octagon(4)), make_map(build_hexagonal(3)))

    @staticmethod
    def _lift(code_map, op, copy):
        return PauliOp(code_map.num_surface_qubits, lift_to_copy(op.x, copy), lift_to_copy(op.z, copy))

    def test_uncontracted_faces(self):
        """Тест: B_f^Z и B_f^X граней c', c'' переходят в плакеты копий 1 и 2."""
        for code_map in self.maps:
            graph = code_map.graph
            plaquettes = surface_stabilizers(graph).face_ops
            x_images, z_images = code_map.stabilizer_images()
            for f, surface_face in graph.tau_f2f.items():
                with self.subTest(family=code_map.colex.family, face=f):
                    self.assertEqual(z_images[f], self._lift(code_map, plaquettes[surface_face], 1))
                    self.assertEqual(x_images[f], self._lift(code_map, plaquettes[surface_face], 2))

    def test_contracted_faces(self):
        """Тест: стягиваемые грани переходят в вершинные операторы и плакеты граней с зависимыми рёбрами."""
        for code_map in self.maps:
            graph = code_map.graph
            stabilizers = surface_stabilizers(graph)
            x_images, z_images = code_map.stabilizer_images()
            for f, surface_vertex in graph.tau_face.items():
                boundary = set(code_map.colex.face_edges[f])
                star = stabilizers.vertex_ops[surface_vertex]
                expected_x = self._lift(code_map, star, 1)
                expected_z = self._lift(code_map, star, 2)
                for labeled in code_map.labeling.faces:
                    plaquette = stabilizers.face_ops[graph.tau_f2f[labeled.face]]
                    if labeled.d_x_edge in boundary:
                        expected_x = expected_x * self._lift(code_map, plaquette, 2)
                    if labeled.d_z_edge in boundary:
                        expected_z = expected_z * self._lift(code_map, plaquette, 1)
                with self.subTest(family=code_map.colex.family, face=f):
                    self.assertEqual(x_images[f], expected_x)
                    self.assertEqual(z_images[f], expected_z)


class TestInverseExamples(unittest.TestCase):
    """Тесты прообразов отдельных кубитов поверхностного кода."""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.code_map = make_map(build_square_octagon(2))
        self.labeled = self.code_map.labeling.faces[0]
        self.n = self.code_map.n
        self.size = self.code_map.num_surface_qubits

    def _surface_edge(self, i):
        return self.code_map.graph.tau_vertex[self.labeled.vertex(2 * i)]

    def test_z_on_copy_one(self):
        """Тест: Z на ребре c-пары в копии 1 имеет прообраз Z_v1 Z_v2."""
        v = self.labeled.vertex
        for i in range(1, self.labeled.ell + 1):
            op = PauliOp.single(self.size, surface_qubit(self._surface_edge(i), 1), "Z")
            expected = PauliOp.from_support(self.n, z=[v(2 * i - 1), v(2 * i)])
            self.assertEqual(self.code_map.apply_inverse(op), expected)

    def test_z_on_copy_two(self):
        """Тест: Z на ребре c-пары в копии 2 имеет прообраз X_v1 X_v2."""
        v = self.labeled.vertex
        for i in range(1, self.labeled.ell + 1):
            op = PauliOp.single(self.size, surface_qubit(self._surface_edge(i), 2), "Z")
            expected = PauliOp.from_support(self.n, x=[v(2 * i - 1), v(2 * i)])
            self.assertEqual(self.code_map.apply_inverse(op), expected)

    def test_x_chain(self):
        """Тест прообраза X на копии 1 для первой пары: цепочка X_v1 ... X_v(2i-1)."""
        v = self.labeled.vertex
        for i in range(1, self.labeled.m + 1):
            op = PauliOp.single(self.size, surface_qubit(self._surface_edge(i), 1), "X")
            expected = PauliOp.from_support(self.n, x=[v(k) for k in range(1, 2 * i)])
            self.assertEqual(self.code_map.apply_inverse(op), expected)
            self.assertEqual(self.code_map.apply(expected), op)


if __name__ == '__main__':
    unittest.main()
