import itertools
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from services.algebra_service import (
    Bracket, BracketKind, PolynomialRing, RationalMatrix, UnivariatePolynomial, bareiss_determinant,
    complement, format_rational, k_subsets, leibniz_determinant, maximal_minors, minor, normalize_bracket,
    parse_bracket, permutation_sign, rank, to_rational,
)
from services.errors import DomainError


class RationalTests(SimpleTestCase):

    def test_to_rational_accepts_strings_and_ints(self):
        self.assertEqual(to_rational('-3/6'), Fraction(-1, 2))
        self.assertEqual(to_rational(7), Fraction(7))

    def test_to_rational_rejects_malformed_values(self):
        for value in ('1/0', 'abc', True, 1.5):
            with self.assertRaises(DomainError):
                to_rational(value)

    def test_format_rational(self):
        self.assertEqual(format_rational(Fraction(4, 2)), '2')
        self.assertEqual(format_rational(Fraction(-3, 9)), '-1/3')

    def test_subsets_are_lexicographic(self):
        self.assertEqual(k_subsets(4, 2), [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        self.assertEqual(complement((2, 4), 5), (1, 3, 5))

    def test_permutation_sign(self):
        self.assertEqual(permutation_sign((1, 2, 3)), 1)
        self.assertEqual(permutation_sign((2, 1, 3)), -1)
        self.assertEqual(permutation_sign((3, 1, 2)), 1)
        self.assertEqual(permutation_sign((1, 1, 2)), 0)


class BracketTests(SimpleTestCase):

    def test_text_form_parses_back(self):
        for bracket in (Bracket.angle(1, 3, 5), Bracket.square(2, 4)):
            self.assertEqual(parse_bracket(str(bracket)), bracket)

    def test_normalize_sorts_with_sign(self):
        bracket, sign = normalize_bracket(BracketKind.ANGLE, (3, 1, 2))
        self.assertEqual(bracket, Bracket.angle(1, 2, 3))
        self.assertEqual(sign, 1)
        bracket, sign = normalize_bracket(BracketKind.SQUARE, (2, 1))
        self.assertEqual(sign, -1)

    def test_normalize_is_idempotent(self):
        for kind in BracketKind:
            for indices in itertools.permutations((1, 3, 4, 6)):
                bracket, sign = normalize_bracket(kind, indices, n=6)
                self.assertEqual(sign, permutation_sign(indices))
                self.assertEqual(normalize_bracket(kind, bracket.indices, n=6), (bracket, 1))

    def test_repeated_index_vanishes(self):
        self.assertEqual(normalize_bracket(BracketKind.ANGLE, (2, 2)), (None, 0))

    def test_out_of_range_index_is_rejected(self):
        with self.assertRaises(DomainError):
            normalize_bracket(BracketKind.ANGLE, (1, 6), n=5)

    def test_malformed_text_is_rejected(self):
        for text in ('<1 2]', '1 2', '<2 1>', '<a b>'):
            with self.assertRaises(DomainError):
                parse_bracket(text)

    def test_weight(self):
        self.assertEqual(Bracket.angle(1, 4, 6).weight, 11)


class MatrixTests(SimpleTestCase):

    def setUp(self):
        self.matrix = RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 10]])

    def test_determinant(self):
        self.assertEqual(self.matrix.determinant(), -3)
        half = RationalMatrix.from_rows([['1/2', 0], [0, '2/3']])
        self.assertEqual(half.determinant(), Fraction(1, 3))

    def test_singular_determinant_and_rank(self):
        singular = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        self.assertEqual(singular.determinant(), 0)
        self.assertEqual(rank(singular), 2)
        self.assertEqual(rank(RationalMatrix.zeros(2, 3)), 0)

    def test_bareiss_agrees_with_cofactor_expansion(self):
        rng = np.random.default_rng(7)
        for size in range(1, 6):
            for _ in range(4):
                rows = [
                    [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(size)]
                    for _ in range(size)
                ]
                expected = leibniz_determinant(rows, Fraction(0), Fraction(1))
                self.assertEqual(bareiss_determinant(rows), expected)
                if size > 1:
                    repeated = rows[:-1] + [rows[0]]
                    self.assertEqual(bareiss_determinant(repeated), 0)

    def test_rank_of_transpose(self):
        rng = np.random.default_rng(11)

        def random_matrix(rows, cols):
            return RationalMatrix.from_rows([[int(v) for v in rng.integers(-5, 6, size=cols)] for _ in range(rows)])

        for rows, cols in ((2, 5), (4, 3), (5, 5), (3, 6)):
            for inner in (1, 2, 3):
                product = random_matrix(rows, inner) @ random_matrix(inner, cols)
                self.assertEqual(rank(product), rank(product.transpose()))
                self.assertLessEqual(rank(product), inner)

    def test_minor_positions_are_zero_based(self):
        self.assertEqual(minor(self.matrix, [0, 1], [0, 1]), -3)
        with self.assertRaises(DomainError):
            minor(self.matrix, [0, 3], [0, 1])

    def test_nullspace_is_annihilated(self):
        wide = RationalMatrix.from_rows([[1, 2, 3, 4], [0, 1, 1, 2]])
        kernel = wide.nullspace()
        self.assertEqual(kernel.rows, 2)
        self.assertEqual(wide @ kernel.transpose(), RationalMatrix.zeros(2, 2))

    def test_rref_pivots(self):
        reduced, pivots = RationalMatrix.from_rows([[0, 2, 4], [0, 1, 3]]).rref()
        self.assertEqual(pivots, (1, 2))
        self.assertEqual(reduced.row(0), (0, 1, 0))

    def test_maximal_minors_use_one_based_labels(self):
        plucker = maximal_minors(RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1]]))
        self.assertEqual(plucker, {(1, 2): 1, (1, 3): 1, (2, 3): -1})

    def test_ragged_rows_are_rejected(self):
        with self.assertRaises(DomainError):
            RationalMatrix.from_rows([[1, 2], [3]])


class PolynomialTests(SimpleTestCase):

    def setUp(self):
        self.ring = PolynomialRing(['x', 'y'])
        self.x = self.ring.variable('x')
        self.y = self.ring.variable('y')

    def test_arithmetic_cancels(self):
        p = (self.x + self.y) * (self.x - self.y)
        self.assertEqual(p, self.x ** 2 - self.y ** 2)
        self.assertTrue((p - p).is_zero())

    def test_evaluate_and_derivative(self):
        p = 3 * self.x ** 2 * self.y - self.y + 1
        self.assertEqual(p.evaluate({'x': 2, 'y': Fraction(1, 2)}), Fraction(11, 2))
        self.assertEqual(p.derivative('x'), 6 * self.x * self.y)
        self.assertEqual(p.degree(), 3)
        self.assertFalse(p.is_homogeneous())

    def test_missing_assignment_is_an_error(self):
        with self.assertRaises(DomainError):
            (self.x * self.y).evaluate({'x': 1})

    def test_substitute(self):
        target = PolynomialRing(['t'])
        t = target.variable('t')
        p = self.x * self.y - 1
        self.assertEqual(p.substitute({'x': t, 'y': t + 1}, target), t ** 2 + t - 1)

    def test_to_text(self):
        self.assertEqual((2 * self.x ** 2 - self.y).to_text(), '2*x^2 - y')
        self.assertEqual(self.ring.zero().to_text(), '0')


class UnivariateTests(SimpleTestCase):

    def test_valuation_and_lowest_coefficient(self):
        p = UnivariatePolynomial({3: 2, 5: -1})
        self.assertEqual(p.valuation(), 3)
        self.assertEqual(p.lowest_coefficient(), 2)
        with self.assertRaises(DomainError):
            UnivariatePolynomial().valuation()

    def test_from_roots(self):
        p = UnivariatePolynomial.from_roots([1, 2])
        self.assertEqual(p, UnivariatePolynomial({2: 1, 1: -3, 0: 2}))
        self.assertEqual(p.evaluate(Fraction(2)), 0)
