import itertools
from fractions import Fraction

from django.test import SimpleTestCase

from services.algebra_service import Bracket, BracketKind, MatrixEntry, SparsePolynomial
from services.errors import DomainError
from services.ideal_service import (
    GeneratorSuiteService, ParametrizationPhi, bracket_ring, generator_suite, leading_brackets,
    leading_exponent, leading_monomial, phi_image, plucker_relation, pq_matrices,
    pq_product_entries, same_span, straightening_generator, term_order_key, toric_binomial,
    toric_partner,
)
from services.poset_service import GluedPoset


def _reduce(polynomial, basis):
    """Reduce by leading terms until zero or irreducible; returns the remainder."""
    ring = polynomial.ring
    leads = [(leading_exponent(g), g) for g in basis]
    while not polynomial.is_zero():
        lead = leading_exponent(polynomial)
        for exponent, g in leads:
            if all(a >= b for a, b in zip(lead, exponent)):
                quotient = tuple(a - b for a, b in zip(lead, exponent))
                factor = polynomial.terms[lead] / g.terms[exponent]
                polynomial = polynomial - SparsePolynomial(ring, {quotient: factor}) * g
                break
        else:
            return polynomial
    return polynomial


def _s_polynomial(f, g):
    ef, eg = leading_exponent(f), leading_exponent(g)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    ring = f.ring
    mf = SparsePolynomial(ring, {tuple(a - b for a, b in zip(lcm, ef)): Fraction(1) / f.terms[ef]})
    mg = SparsePolynomial(ring, {tuple(a - b for a, b in zip(lcm, eg)): Fraction(1) / g.terms[eg]})
    return mf * f - mg * g


def _coprime(f, g):
    return not any(a and b for a, b in zip(leading_exponent(f), leading_exponent(g)))


class TermOrderTests(SimpleTestCase):

    def test_bracket_ring_follows_linear_extension(self):
        ring = bracket_ring(2, 4)
        self.assertEqual(ring.variables[0], Bracket.square(3, 4))
        self.assertEqual(ring.variables[-1], Bracket.angle(3, 4))
        self.assertEqual(len(ring), 12)

    def test_graded_revlex(self):
        # the monomial containing the lowest variable is smaller
        self.assertGreater(term_order_key((0, 1, 1)), term_order_key((1, 0, 1)))
        self.assertGreater(term_order_key((0, 0, 3)), term_order_key((1, 1, 0)))


class ParametrizationTests(SimpleTestCase):

    def test_shape(self):
        self.assertEqual(ParametrizationPhi(2, 5, 0).shape, (3, 5))
        self.assertEqual(ParametrizationPhi(3, 6, 1).shape, (4, 6))

    def test_angle_image(self):
        phi = ParametrizationPhi(2, 5, 0)
        ring = phi.ring
        x = {(i, j): ring.variable(MatrixEntry(i, j)) for i in range(1, 4) for j in range(1, 6)}
        self.assertEqual(phi.image(Bracket.angle(1, 2)), x[1, 1] * x[2, 2] - x[1, 2] * x[2, 1])

    def test_square_sign(self):
        phi = ParametrizationPhi(2, 4, 0)
        self.assertEqual(phi.leading_sign(Bracket.square(1, 2)), -1)
        self.assertEqual(phi.leading_sign(Bracket.square(1, 3)), 1)

    def test_square_image_and_leading_monomial(self):
        phi = ParametrizationPhi(2, 4, 0)
        ring = phi.ring
        x = {(i, j): ring.variable(MatrixEntry(i, j)) for i in range(1, 3) for j in range(1, 5)}
        square = Bracket.square(1, 2)
        self.assertEqual(phi_image(square, phi), x[1, 4] * x[2, 3] - x[1, 3] * x[2, 4])
        self.assertEqual(leading_monomial(square, phi), x[1, 3] * x[2, 4])

    def test_foreign_bracket(self):
        with self.assertRaises(DomainError):
            ParametrizationPhi(2, 4, 0).image(Bracket.angle(1, 5))


class PluckerTests(SimpleTestCase):

    def test_three_term_relation(self):
        relation = plucker_relation((1,), (2, 3, 4), BracketKind.ANGLE, 4)
        self.assertEqual(len(relation), 3)
        self.assertTrue(relation.is_homogeneous())

    def test_window_size_is_checked(self):
        with self.assertRaises(DomainError):
            plucker_relation((1,), (2, 3), BracketKind.ANGLE, 4)

    def test_relations_vanish_symbolically(self):
        phi = ParametrizationPhi(2, 4, 0)
        relations = [
            plucker_relation((1,), (2, 3, 4), BracketKind.ANGLE, 4),
            plucker_relation((1,), (2, 3, 4), BracketKind.SQUARE, 4),
        ]
        self.assertEqual(GeneratorSuiteService.symbolic_failures(relations, phi), [])


class GeneratorSuiteTests(SimpleTestCase):

    def test_counts(self):
        self.assertEqual(generator_suite(2, 5, 0).counts(), {'aa': 5, 'ss': 5, 'mixed': 25, 'total': 35})
        self.assertEqual(len(generator_suite(2, 6, 0)), 66)
        self.assertEqual(generator_suite(2, 4, 2).counts()['mixed'], 0)

    def test_generators_are_quadrics_with_expected_leading_terms(self):
        suite = generator_suite(2, 5, 0)
        for polynomial in suite.all():
            self.assertTrue(polynomial.is_homogeneous())
            self.assertEqual(polynomial.degree(), 2)
        self.assertEqual(GeneratorSuiteService.leading_term_mismatches(suite), [])

    def test_generators_vanish_symbolically(self):
        suite = generator_suite(2, 4, 0)
        phi = ParametrizationPhi(2, 4, 0)
        self.assertEqual(GeneratorSuiteService.symbolic_failures(suite.all(), phi), [])

    def test_verify_samples(self):
        for k, n, r in ((2, 5, 0), (2, 4, 1), (3, 6, 1)):
            generator_suite(k, n, r, verify=True, samples=3, seed=7)

    def test_mixed_generator_leading_term(self):
        poset = GluedPoset(2, 5, 0)
        generator = straightening_generator(Bracket.angle(1, 2), Bracket.square(1, 2), poset)
        self.assertEqual(leading_brackets(generator), (Bracket.square(1, 2), Bracket.angle(1, 2)))

    def test_comparable_pair_has_no_generator(self):
        poset = GluedPoset(2, 5, 0)
        with self.assertRaises(DomainError):
            straightening_generator(Bracket.angle(4, 5), Bracket.square(1, 2), poset)

    def test_groebner_basis_by_buchberger(self):
        for k, n, r in ((2, 4, 0), (2, 4, 1)):
            basis = generator_suite(k, n, r).all()
            for f, g in itertools.combinations(basis, 2):
                if _coprime(f, g):
                    continue
                remainder = _reduce(_s_polynomial(f, g), basis)
                self.assertTrue(remainder.is_zero(), f'({k},{n},{r}): S({f}, {g}) -> {remainder}')


class PQTests(SimpleTestCase):

    def test_shapes(self):
        P, Q = pq_matrices(4, 5, 1)
        self.assertEqual((P.shape, Q.shape), ((10, 10), (10, 10)))

    def test_entries_are_signed(self):
        P, _ = pq_matrices(2, 5, 0)
        self.assertEqual(P.entry((2,), (1,)), (-1, Bracket.angle(1, 2)))
        self.assertEqual(P.entry((2,), (2,)), (0, None))
        self.assertEqual(P.to_text_rows()[1][0], '-<1 2>')

    def test_products_span_the_mixed_generators(self):
        for k, n, r in ((2, 5, 0), (3, 6, 1)):
            forms = pq_product_entries(k, n, r)
            self.assertTrue(same_span(forms, generator_suite(k, n, r).mixed))


class ToricTests(SimpleTestCase):

    def test_mixed_partner(self):
        poset = GluedPoset(2, 5, 0)
        self.assertEqual(
            toric_partner(Bracket.angle(1, 2), Bracket.square(1, 2), poset),
            (Bracket.angle(3, 4), Bracket.square(3, 4), 1),
        )

    def test_same_side_partner(self):
        poset = GluedPoset(2, 4, 0)
        first, second, sign = toric_partner(Bracket.angle(1, 4), Bracket.angle(2, 3), poset)
        self.assertEqual((first, second, sign), (Bracket.angle(1, 3), Bracket.angle(2, 4), 1))
        binomial = toric_binomial(Bracket.angle(1, 4), Bracket.angle(2, 3), poset)
        self.assertEqual(len(binomial), 2)

    def test_initial_images_cancel(self):
        for k, n, r in ((2, 5, 0), (2, 6, 1), (3, 6, 1)):
            poset = GluedPoset(k, n, r)
            binomials = GeneratorSuiteService.toric_binomials(poset)
            self.assertEqual(len(binomials), len(generator_suite(k, n, r)))
            self.assertEqual(GeneratorSuiteService.toric_initial_failures(binomials, ParametrizationPhi(k, n, r)), [])
