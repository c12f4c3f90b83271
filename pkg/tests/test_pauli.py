"""
Unit тесты для операторов Паули и стабилизаторных групп
"""

import unittest

import numpy as np

from core.pauli import (
    PauliError, PauliOp, StabilizerGroup, bits_from_mask, commute, gf2_rank, in_group, indices_of,
    mask_from_bits, mask_from_indices, parse_pauli, rank_gf2,
)


class TestMasks(unittest.TestCase):
    """Тесты битовых масок."""

    def test_indices_round_trip(self):
        """Тест преобразования индексов в маску и обратно."""
        self.assertEqual(indices_of(mask_from_indices([5, 0, 3])), [0, 3, 5])
        self.assertEqual(indices_of(0), [])

    def test_repeated_indices_cancel(self):
        """Тест взаимного уничтожения повторов."""
        self.assertEqual(mask_from_indices([2, 2, 4]), 1 << 4)

    def test_numpy_bits(self):
        """Тест упаковки numpy-векторов."""
        bits = np.array([1, 0, 0, 1, 0, 0, 0, 0, 1], dtype=np.uint8)
        mask = mask_from_bits(bits)
        self.assertEqual(mask, (1 << 0) | (1 << 3) | (1 << 8))
        np.testing.assert_array_equal(bits_from_mask(mask, 9), bits)


class TestPauliOp(unittest.TestCase):
    """Тесты для PauliOp."""

    def test_product_is_xor(self):
        """Тест умножения без фазы."""
        a = PauliOp.from_support(4, x=[0, 1], z=[2])
        b = PauliOp.from_support(4, x=[1], z=[2, 3])
        self.assertEqual(a * b, PauliOp.from_support(4, x=[0], z=[3]))

    def test_weight_and_support(self):
        """Тест веса и носителя."""
        op = PauliOp.from_support(6, x=[0, 3], z=[3, 5])
        self.assertEqual(op.weight, 3)
        self.assertEqual(op.support, [0, 3, 5])

    def test_single_y(self):
        """Тест однокубитного Y."""
        op = PauliOp.single(3, 1, "Y")
        self.assertEqual((op.x, op.z), (2, 2))

    def test_out_of_range_support(self):
        """Тест носителя вне числа кубитов."""
        with self.assertRaises(PauliError):
            PauliOp(3, 1 << 3, 0)
        with self.assertRaises(PauliError):
            PauliOp.single(3, 3, "X")

    def test_mismatched_product(self):
        """Тест умножения операторов разной длины."""
        with self.assertRaises(PauliError):
            PauliOp(3) * PauliOp(4)

    def test_commutation(self):
        """Тест симплектического произведения."""
        x0 = PauliOp.single(2, 0, "X")
        z0 = PauliOp.single(2, 0, "Z")
        xx = PauliOp.from_support(2, x=[0, 1])
        zz = PauliOp.from_support(2, z=[0, 1])
        self.assertEqual(commute(x0, z0), 1)
        self.assertEqual(commute(xx, zz), 0)
        self.assertTrue(xx.commutes_with(zz))

    def test_text_form(self):
        """Тест отладочного текстового вида."""
        op = PauliOp.from_support(8, x=[3, 0], z=[7, 3])
        self.assertEqual(str(op), "X{0,3} Z{3,7}")
        self.assertEqual(str(PauliOp(5)), "I")
        self.assertEqual(parse_pauli("X{0,3} Z{3,7}", 8), op)
        self.assertEqual(parse_pauli("I", 8), PauliOp(8))

    def test_parse_errors(self):
        """Тест разбора некорректного текста."""
        with self.assertRaises(PauliError):
            parse_pauli("X{0,1} Q{2}", 4)
        with self.assertRaises(PauliError):
            parse_pauli("Z{9}", 4)


class TestStabilizerGroup(unittest.TestCase):
    """Тесты для StabilizerGroup."""

    def setUp(self):
        """Настройка перед каждым тестом."""
        # Код повторения на трёх кубитах
        self.z01 = PauliOp.from_support(3, z=[0, 1])
        self.z12 = PauliOp.from_support(3, z=[1, 2])
        self.group = StabilizerGroup([self.z01, self.z12])

    def test_rank_and_logical_count(self):
        """Тест ранга и числа логических кубитов."""
        self.assertEqual(self.group.rank, 2)
        self.assertEqual(self.group.k, 1)

    def test_membership(self):
        """Тест принадлежности группе."""
        self.assertTrue(self.group.contains(PauliOp.from_support(3, z=[0, 2])))
        self.assertFalse(self.group.contains(PauliOp.from_support(3, z=[0])))
        self.assertEqual(in_group(self.z01 * self.z12, self.group), 1)

    def test_anticommuting_operator(self):
        """Тест оператора, антикоммутирующего с генератором."""
        x0 = PauliOp.single(3, 0, "X")
        self.assertEqual(self.group.anticommuting_generator(x0), 0)
        with self.assertRaises(PauliError):
            self.group.contains(x0)

    def test_non_abelian_generators(self):
        """Тест некоммутирующих генераторов."""
        with self.assertRaises(PauliError):
            StabilizerGroup([PauliOp.single(2, 0, "X"), PauliOp.single(2, 0, "Z")])

    def test_rank_counts_dependencies(self):
        """Тест ранга с зависимыми строками."""
        ops = [self.z01, self.z12, self.z01 * self.z12]
        self.assertEqual(rank_gf2(ops), 2)
        self.assertEqual(gf2_rank(np.eye(4, dtype=np.uint8)), 4)


if __name__ == '__main__':
    unittest.main()
