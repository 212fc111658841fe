from math import comb

from django.test import SimpleTestCase

from services.algebra_service import Bracket, BracketKind
from services.errors import DomainError
from services.poset_service import (
    GluedPoset, Relation, column_sort, hook_content_count, validate_parameters, young_compare,
)


class ParameterTests(SimpleTestCase):

    def test_invalid_parameters(self):
        for k, n, r in ((9, 3, 0), (0, 4, 0), (2, 4, 3), (3, 5, 0)):
            with self.assertRaises(DomainError):
                validate_parameters(k, n, r)

    def test_boundary_parameters_are_accepted(self):
        validate_parameters(2, 4, 0)
        validate_parameters(3, 6, 0)
        validate_parameters(4, 5, 3)


class YoungLatticeTests(SimpleTestCase):

    def test_young_compare(self):
        self.assertIs(young_compare((1, 2), (1, 3)), Relation.LESS)
        self.assertIs(young_compare((2, 4), (1, 3)), Relation.GREATER)
        self.assertIs(young_compare((1, 4), (2, 3)), Relation.INCOMPARABLE)
        self.assertIs(young_compare((2, 3), (2, 3)), Relation.EQUAL)

    def test_hook_content_counts(self):
        self.assertEqual(hook_content_count(2, 5), 5)
        self.assertEqual(hook_content_count(2, 6), 15)
        self.assertEqual(hook_content_count(3, 7), 140)

    def test_hook_content_matches_enumeration(self):
        for k, n in ((2, 4), (2, 7), (3, 6), (4, 8)):
            poset = GluedPoset(k, n, 0)
            enumerated = len(poset.same_side_incomparable(BracketKind.ANGLE))
            self.assertEqual(hook_content_count(k, n), enumerated)


class GluedPosetTests(SimpleTestCase):

    def setUp(self):
        self.poset = GluedPoset(2, 5, 0)

    def test_extremes(self):
        elements = self.poset.elements()
        self.assertEqual(len(elements), 20)
        self.assertEqual(elements[0], Bracket.square(4, 5))
        self.assertEqual(elements[-1], Bracket.angle(4, 5))
        self.assertEqual(self.poset.bottom, elements[0])
        self.assertEqual(self.poset.top, elements[-1])

    def test_compare(self):
        self.assertIs(self.poset.compare(Bracket.angle(1, 2), Bracket.angle(1, 3)), Relation.LESS)
        self.assertIs(self.poset.compare(Bracket.square(1, 2), Bracket.square(1, 3)), Relation.GREATER)
        self.assertIs(self.poset.compare(Bracket.angle(4, 5), Bracket.square(1, 2)), Relation.GREATER)
        self.assertIs(self.poset.compare(Bracket.square(1, 2), Bracket.angle(4, 5)), Relation.LESS)
        self.assertIs(
            self.poset.compare(Bracket.angle(1, 2), Bracket.square(1, 2)), Relation.INCOMPARABLE,
        )

    def test_foreign_elements_are_rejected(self):
        with self.assertRaises(DomainError):
            self.poset.compare(Bracket.angle(1, 6), Bracket.angle(1, 2))
        with self.assertRaises(DomainError):
            self.poset.compare(Bracket.angle(1, 2, 3), Bracket.angle(1, 2))

    def test_compare_is_a_partial_order(self):
        flipped = {
            Relation.LESS: Relation.GREATER,
            Relation.GREATER: Relation.LESS,
            Relation.EQUAL: Relation.EQUAL,
            Relation.INCOMPARABLE: Relation.INCOMPARABLE,
        }
        for k, n, r in ((2, 5, 0), (3, 6, 1)):
            poset = GluedPoset(k, n, r)
            elements = poset.elements()
            table = {(a, b): poset.compare(a, b) for a in elements for b in elements}
            for (a, b), relation in table.items():
                self.assertIs(table[b, a], flipped[relation])
                self.assertEqual(relation is Relation.EQUAL, a == b)
            below = {a: {b for b in elements if table[b, a] is Relation.LESS} for a in elements}
            for a in elements:
                for b in below[a]:
                    self.assertLessEqual(below[b], below[a])
            position = {b: i for i, b in enumerate(elements)}
            for (a, b), relation in table.items():
                if relation is Relation.LESS:
                    self.assertLess(position[a], position[b])

    def test_incomparable_counts(self):
        aa, ss, mixed = self.poset.incomparable_pairs()
        self.assertEqual((len(aa), len(ss), len(mixed)), (5, 5, 25))

    def test_mixed_counts_follow_binomial_square(self):
        for k, n, r in ((2, 6, 0), (2, 6, 1), (3, 6, 1), (3, 7, 1), (3, 7, 2)):
            self.assertEqual(len(GluedPoset(k, n, r).mixed_incomparable()), comb(n, k - r - 1) ** 2)
        self.assertEqual(GluedPoset(2, 4, 2).mixed_incomparable(), [])

    def test_covering_relations(self):
        relations = self.poset.covering_relations()
        self.assertEqual(len(relations), 6)
        self.assertIn((Bracket.square(1, 2), Bracket.angle(3, 4)), relations)
        self.assertEqual(self.poset.upper_covers(Bracket.square(1, 2)), [Bracket.angle(3, 4)])

    def test_covering_relations_keep_the_shared_prefix(self):
        relations = GluedPoset(3, 7, 1).covering_relations()
        self.assertEqual(len(relations), 6)
        for square, angle in relations:
            self.assertEqual(square.indices[0], 1)
            self.assertEqual(angle.indices[0], 1)
            self.assertIs(GluedPoset(3, 7, 1).compare(square, angle), Relation.LESS)

    def test_meet_join(self):
        join, meet = self.poset.meet_join(Bracket.angle(1, 2), Bracket.square(1, 2))
        self.assertEqual(join, Bracket.angle(3, 4))
        self.assertEqual(meet, Bracket.square(3, 4))
        self.assertTrue(self.poset.is_semistandard(join, meet))

    def test_meet_join_of_comparable_pair_fails(self):
        with self.assertRaises(DomainError):
            self.poset.meet_join(Bracket.angle(4, 5), Bracket.square(1, 2))

    def test_column_sort(self):
        self.assertEqual(column_sort((3, 4, 5), (1, 2), 0), ((1, 2, 5), (3, 4)))

    def test_dimension(self):
        self.assertEqual(self.poset.dimension(), 8)
        self.assertEqual(GluedPoset(3, 6, 1).dimension(), 14)


class BidegreeTests(SimpleTestCase):

    def test_bidegree_2_5_0(self):
        bidegree = GluedPoset(2, 5, 0).bidegree()
        self.assertEqual([c for _, _, c in bidegree.coefficients()], [5, 10, 12, 10, 5])
        self.assertTrue(bidegree.is_palindromic())

    def test_bidegree_2_6_0_sums_to_chain_count(self):
        poset = GluedPoset(2, 6, 0)
        bidegree = poset.bidegree()
        self.assertEqual([c for _, _, c in bidegree.coefficients()], [28, 70, 90, 70, 28])
        self.assertEqual(bidegree.coefficient_sum(), 286)
        self.assertEqual(poset.total_maximal_chains(), 286)

    def test_bidegree_total_degree_is_constant(self):
        for k, n, r in ((2, 6, 0), (3, 6, 1), (3, 7, 1)):
            self.assertEqual(len(GluedPoset(k, n, r).bidegree().total_degrees()), 1)

    def test_bidegree_3_7_1(self):
        bidegree = GluedPoset(3, 7, 1).bidegree()
        self.assertEqual(
            [c for _, _, c in bidegree.coefficients()], [25872, 77616, 105840, 77616, 25872],
        )
        prefactor, reduced = bidegree.factor_common()
        self.assertEqual(prefactor, 22)
        self.assertEqual(min(min(i, j) for i, j in reduced), 0)
