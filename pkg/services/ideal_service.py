"""
Ideal Service: generators of the spinor-helicity ideal I(k,n,r).

Generators live in the bracket ring: one variable per <I> and per [J],
ordered by the canonical linear extension of the glued poset (bottom first).
The term order is graded reverse lexicographic on that variable order, so the
monomial containing the lowest variable is the smaller one.

phi sends <I> to the k x k minor of the symbolic (n-k+r) x n matrix x on
rows 1..k and columns I, and [J] to (-1)^{sum J} times the (n-k) x (n-k)
minor on rows r+1..n-k+r and columns [n] minus J.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
from django.conf import settings

from services.algebra_service import (
    Bracket, BracketKind, MatrixEntry, PolynomialRing, RationalMatrix,
    complement, k_subsets, leibniz_determinant, minor, normalize_bracket,
    permutation_sign, rank,
)
from services.errors import CheckFailure, DomainError
from services.poset_service import (
    GluedPoset, Relation, column_sort, hook_content_count, linear_extension_key, young_compare,
)

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════
# Bracket ring and term order
# ═══════════════════════════════════════════════════════

@lru_cache(maxsize=None)
def bracket_ring(k, n):
    brackets = [Bracket(BracketKind.SQUARE, J) for J in k_subsets(n, k)]
    brackets += [Bracket(BracketKind.ANGLE, I) for I in k_subsets(n, k)]
    return PolynomialRing(sorted(brackets, key=linear_extension_key))


def term_order_key(exponent):
    """Graded revlex: larger key = larger monomial (variable 0 is the smallest)."""
    return (sum(exponent), tuple(-e for e in exponent))


def leading_exponent(polynomial):
    if polynomial.is_zero():
        raise DomainError('The zero polynomial has no leading term')
    return max(polynomial.terms, key=term_order_key)


def leading_brackets(polynomial):
    """Leading monomial as a tuple of brackets (with multiplicity), lowest first."""
    exponent = leading_exponent(polynomial)
    ring = polynomial.ring
    return tuple(ring.variables[i] for i, p in enumerate(exponent) for _ in range(p))


def pair_monomial(ring, a, b, coefficient=1):
    powers = {a: 2} if a == b else {a: 1, b: 1}
    return ring.monomial(powers, coefficient)


def _signed_product(ring, kind_a, seq_a, kind_b, seq_b, n):
    """sign * bracket(seq_a) * bracket(seq_b) after normalization; zero if a repeat occurs."""
    a, sign_a = normalize_bracket(kind_a, seq_a, n)
    b, sign_b = normalize_bracket(kind_b, seq_b, n)
    if sign_a == 0 or sign_b == 0:
        return ring.zero()
    return pair_monomial(ring, a, b, sign_a * sign_b)


# ═══════════════════════════════════════════════════════
# The parametrization phi
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class ParametrizationPhi:
    k: int
    n: int
    r: int

    def __post_init__(self):
        GluedPoset(self.k, self.n, self.r)

    @property
    def shape(self):
        return (self.n - self.k + self.r, self.n)

    @property
    def ring(self):
        return _x_ring(*self.shape)

    def _rows_and_columns(self, b):
        if b.k != self.k or b.indices[-1] > self.n:
            raise DomainError(f'{b} does not belong to ({self.k},{self.n})')
        if b.is_angle:
            return list(range(1, self.k + 1)), list(b.indices), 1
        columns = complement(b.indices, self.n)
        rows = list(range(self.r + 1, self.r + len(columns) + 1))
        return rows, list(columns), (-1) ** b.weight

    def image(self, b):
        """Exact symbolic minor in the x-variables."""
        rows, columns, sign = self._rows_and_columns(b)
        ring = self.ring
        entries = [[ring.variable(MatrixEntry(i, j)) for j in columns] for i in rows]
        return leibniz_determinant(entries, ring.zero(), ring.constant(1)) * sign

    def leading_monomial(self, b):
        """Product of the diagonal entries of the minor's submatrix (coefficient 1)."""
        rows, columns, _ = self._rows_and_columns(b)
        return self.ring.monomial({MatrixEntry(i, j): 1 for i, j in zip(rows, columns)})

    def leading_sign(self, b):
        return self._rows_and_columns(b)[2]

    def evaluate(self, b, matrix):
        rows, columns, sign = self._rows_and_columns(b)
        return sign * minor(matrix, [i - 1 for i in rows], [j - 1 for j in columns])

    def evaluate_all(self, matrix):
        """{bracket: value} for every bracket of (k,n) at a numeric x matrix."""
        if (matrix.rows, matrix.cols) != self.shape:
            raise DomainError(f'Expected a {self.shape[0]}x{self.shape[1]} matrix')
        return {b: self.evaluate(b, matrix) for b in bracket_ring(self.k, self.n).variables}

    def random_matrix(self, rng):
        """Rational entries with numerators in [-50, 50] and denominators in [1, 10]."""
        rows, cols = self.shape
        numerators = rng.integers(-50, 51, size=(rows, cols))
        denominators = rng.integers(1, 11, size=(rows, cols))
        return RationalMatrix.from_rows([
            [f'{int(numerators[i, j])}/{int(denominators[i, j])}' for j in range(cols)]
            for i in range(rows)
        ])


@lru_cache(maxsize=None)
def _x_ring(rows, cols):
    return PolynomialRing([MatrixEntry(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)])


def phi_image(b, phi):
    return phi.image(b)


def leading_monomial(b, phi):
    return phi.leading_monomial(b)


# ═══════════════════════════════════════════════════════
# Plücker relations and straightening quadrics
# ═══════════════════════════════════════════════════════

def plucker_relation(prefix, window, kind, n):
    """Sum over s of (-1)^s <prefix, j_s><window minus j_s>; may be the zero polynomial."""
    prefix, window = tuple(prefix), tuple(window)
    k = len(prefix) + 1
    if len(window) != k + 1:
        raise DomainError(f'Window must have {k + 1} entries, got {len(window)}')
    ring = bracket_ring(k, n)
    total = ring.zero()
    for s, j in enumerate(window):
        rest = window[:s] + window[s + 1:]
        term = _signed_product(ring, kind, prefix + (j,), kind, rest, n)
        total = total + (term if s % 2 == 0 else -term)
    return total


def _shuffle_sum(ring, reference, head_size, build_term):
    """
    Alternating sum over ways to split the positions of `reference` into a
    head of size head_size and a tail, each kept in reference order.
    """
    total = ring.zero()
    positions = range(len(reference))
    for head in itertools.combinations(positions, head_size):
        tail = tuple(p for p in positions if p not in head)
        sign = permutation_sign(head + tail)
        term = build_term(tuple(reference[p] for p in head), tuple(reference[p] for p in tail))
        if not term.is_zero():
            total = total + term * sign
    return total


def straightening_generator(angle, square, poset):
    """
    Quadric with leading term <I>[J] for a mixed incomparable pair.

    The skew tableau has top row J' = [n] minus J in columns r+1..n-k+r and
    bottom row I in columns 1..k; l is its leftmost failing column. The
    positions i_1..i_{r+l}, j'_l..j'_{n-k} are shuffled between the two rows.
    """
    if poset.compare(angle, square) is not Relation.INCOMPARABLE or not angle.is_angle:
        raise DomainError(f'{angle} and {square} are not a mixed incomparable pair')
    k, n, r = poset.k, poset.n, poset.r
    ring = bracket_ring(k, n)
    I = angle.indices
    top = complement(square.indices, n)
    l = poset.leftmost_violation(angle, square) + 1
    reference = I[:r + l] + top[l - 1:]
    fixed_angle_tail = I[r + l:]
    fixed_top_head = top[:l - 1]

    def build(head, tail):
        angle_seq = head + fixed_angle_tail
        top_seq = fixed_top_head + tail
        bracket_a, sign_a = normalize_bracket(BracketKind.ANGLE, angle_seq, n)
        sign_t = permutation_sign(top_seq)
        if sign_a == 0 or sign_t == 0:
            return ring.zero()
        square_b = Bracket(BracketKind.SQUARE, complement(top_seq, n))
        coefficient = sign_a * sign_t * (-1) ** square_b.weight
        return pair_monomial(ring, bracket_a, square_b, coefficient)

    total = _shuffle_sum(ring, reference, r + l, build)
    return total * (-1) ** square.weight


def same_side_straightening(a, b, poset):
    """
    Plücker quadric with leading term a*b for an incomparable same-side pair.

    The first row p is the angle with the smaller index sum, or the square
    with the larger one; l is the first position with p_l > q_l.
    """
    if a.kind != b.kind or young_compare(a.indices, b.indices) is not Relation.INCOMPARABLE:
        raise DomainError(f'{a} and {b} are not a same-side incomparable pair')
    poset._check(a)
    poset._check(b)
    low, high = sorted((a, b), key=linear_extension_key)
    p, q = (low, high) if a.is_angle else (high, low)
    p, q = p.indices, q.indices
    l = next(i for i in range(len(p)) if p[i] > q[i]) + 1
    ring = bracket_ring(poset.k, poset.n)
    kind = a.kind
    reference = p[l - 1:] + q[:l]

    def build(head, tail):
        return _signed_product(ring, kind, p[:l - 1] + head, kind, tail + q[l:], poset.n)

    return _shuffle_sum(ring, reference, len(p) - l + 1, build)


# ═══════════════════════════════════════════════════════
# P and Q matrices
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class BracketMatrix:
    """Matrix of signed brackets; entries are (sign, Bracket) with (0, None) for zero."""

    kind: BracketKind
    row_labels: tuple
    col_labels: tuple
    entries: tuple

    @property
    def shape(self):
        return (len(self.row_labels), len(self.col_labels))

    def entry(self, row_label, col_label):
        return self.entries[self.row_labels.index(tuple(row_label))][self.col_labels.index(tuple(col_label))]

    def to_text_rows(self):
        rows = []
        for row in self.entries:
            cells = []
            for sign, bracket in row:
                cells.append('0' if sign == 0 else (f'-{bracket}' if sign < 0 else str(bracket)))
            rows.append(cells)
        return rows


def _labels(n, size):
    if size < 0:
        return ()
    return tuple(k_subsets(n, size))


def pq_matrices(k, n, r):
    """P_{I,L} = <I L>, Q_{J,L} = [J L] with I, J in C([n], k-r-1) and L in C([n], r+1)."""
    if not 0 <= r <= k <= n:
        raise DomainError(f'Need 0 <= r <= k <= n, got ({k},{n},{r})')
    rows = _labels(n, k - r - 1)
    cols = _labels(n, r + 1) if rows else ()

    def build(kind):
        entries = []
        for I in rows:
            row = []
            for L in cols:
                bracket, sign = normalize_bracket(kind, I + L, n)
                row.append((sign, bracket))
            entries.append(tuple(row))
        return BracketMatrix(kind, rows, cols, tuple(entries))

    return build(BracketKind.ANGLE), build(BracketKind.SQUARE)


def pq_product_entries(k, n, r):
    """The bilinear forms f_IJ = sum_L P_{I,L} Q_{J,L}, ordered by (I, J)."""
    P, Q = pq_matrices(k, n, r)
    ring = bracket_ring(k, n)
    forms = []
    for p_row in P.entries:
        for q_row in Q.entries:
            total = ring.zero()
            for (sign_p, angle), (sign_q, square) in zip(p_row, q_row):
                if sign_p and sign_q:
                    total = total + pair_monomial(ring, angle, square, sign_p * sign_q)
            forms.append(total)
    return forms


# ═══════════════════════════════════════════════════════
# Toric binomials
# ═══════════════════════════════════════════════════════

def toric_partner(a, b, poset):
    """
    The other monomial of the toric binomial for an incomparable pair, with
    the sign making both monomials share their phi-initial term.
    """
    n = poset.n
    if a.kind != b.kind:
        angle, square = (a, b) if a.is_angle else (b, a)
        join, meet = poset.meet_join(angle, square)
        return join, meet, (-1) ** (square.weight + meet.weight)
    if young_compare(a.indices, b.indices) is not Relation.INCOMPARABLE:
        raise DomainError(f'{a} and {b} are comparable')
    if a.is_angle:
        low, high = column_sort(a.indices, b.indices, 0)
        return Bracket(a.kind, low), Bracket(a.kind, high), 1
    low, high = column_sort(complement(a.indices, n), complement(b.indices, n), 0)
    return Bracket(a.kind, complement(low, n)), Bracket(a.kind, complement(high, n)), 1


def toric_binomial(a, b, poset):
    """a*b - sign * a'*b' with (a', b') the column-sorted partner pair."""
    poset._check(a)
    poset._check(b)
    ring = bracket_ring(poset.k, poset.n)
    first, second, sign = toric_partner(a, b, poset)
    return pair_monomial(ring, a, b) - pair_monomial(ring, first, second, sign)


def monomial_image(polynomial_term_brackets, phi):
    """x-monomial of a product of brackets under the diagonal initial map."""
    result = phi.ring.constant(1)
    for b in polynomial_term_brackets:
        result = result * phi.leading_monomial(b)
    return result


# ═══════════════════════════════════════════════════════
# Linear algebra on bilinear forms
# ═══════════════════════════════════════════════════════

def coefficient_matrix(polynomials):
    """Rows = polynomials, columns = the union of their monomials (sorted)."""
    monomials = sorted({e for p in polynomials for e in p.terms})
    position = {e: i for i, e in enumerate(monomials)}
    rows = []
    for p in polynomials:
        row = [0] * len(monomials)
        for e, c in p.terms.items():
            row[position[e]] = c
        rows.append(row)
    if not rows or not monomials:
        return RationalMatrix.zeros(len(rows), 0)
    return RationalMatrix.from_rows(rows)


def same_span(first, second):
    r1 = rank(coefficient_matrix(first))
    r2 = rank(coefficient_matrix(second))
    return r1 == r2 == rank(coefficient_matrix(list(first) + list(second)))


# ═══════════════════════════════════════════════════════
# Generator suites
# ═══════════════════════════════════════════════════════

@dataclass
class GeneratorSuite:
    k: int
    n: int
    r: int
    plucker_angle: list = field(default_factory=list)
    plucker_square: list = field(default_factory=list)
    mixed: list = field(default_factory=list)
    leading_terms: list = field(default_factory=list)

    def all(self):
        return self.plucker_angle + self.plucker_square + self.mixed

    def __len__(self):
        return len(self.plucker_angle) + len(self.plucker_square) + len(self.mixed)

    def counts(self):
        return {
            'aa': len(self.plucker_angle),
            'ss': len(self.plucker_square),
            'mixed': len(self.mixed),
            'total': len(self),
        }


class GeneratorSuiteService:

    @staticmethod
    def build(k, n, r):
        poset = GluedPoset(k, n, r)
        aa, ss, mixed_pairs = poset.incomparable_pairs()
        suite = GeneratorSuite(k, n, r)

        def ordered(pairs):
            return sorted(pairs, key=lambda pair: sorted(linear_extension_key(b) for b in pair))

        for a, b in ordered(aa):
            suite.plucker_angle.append(same_side_straightening(a, b, poset))
            suite.leading_terms.append(tuple(sorted((a, b), key=linear_extension_key)))
        for a, b in ordered(ss):
            suite.plucker_square.append(same_side_straightening(a, b, poset))
            suite.leading_terms.append(tuple(sorted((a, b), key=linear_extension_key)))
        for angle, square in ordered(mixed_pairs):
            suite.mixed.append(straightening_generator(angle, square, poset))
            suite.leading_terms.append((square, angle))

        expected_same = hook_content_count(k, n)
        expected_mixed = comb(n, k - r - 1) ** 2 if k - r - 1 >= 0 else 0
        if (len(suite.plucker_angle), len(suite.plucker_square), len(suite.mixed)) != (
            expected_same, expected_same, expected_mixed
        ):
            raise CheckFailure(
                f'generator counts ({k},{n},{r})',
                (expected_same, expected_same, expected_mixed),
                (len(suite.plucker_angle), len(suite.plucker_square), len(suite.mixed)),
            )
        logger.info(f'I({k},{n},{r}): built {len(suite)} generators')
        return suite

    @staticmethod
    def sample_matrices(phi, samples=None, seed=0):
        samples = samples or settings.SHV_VERIFY_SAMPLES
        rng = np.random.default_rng(seed)
        return [phi.random_matrix(rng) for _ in range(samples)]

    @staticmethod
    def kernel_failures(polynomials, phi, samples=None, seed=0):
        """Indices of polynomials that do not vanish at the sampled minors."""
        failures = set()
        for matrix in GeneratorSuiteService.sample_matrices(phi, samples, seed):
            values = phi.evaluate_all(matrix)
            for index, polynomial in enumerate(polynomials):
                if index not in failures and polynomial.evaluate(values) != 0:
                    failures.add(index)
        return sorted(failures)

    @staticmethod
    def symbolic_failures(polynomials, phi):
        """Indices of polynomials whose phi-image is not the zero polynomial."""
        ring = bracket_ring(phi.k, phi.n)
        images = {b: phi.image(b) for b in ring.variables}
        return [
            index for index, polynomial in enumerate(polynomials)
            if not polynomial.substitute(images, phi.ring).is_zero()
        ]

    @staticmethod
    def toric_binomials(poset):
        aa, ss, mixed = poset.incomparable_pairs()
        return [toric_binomial(a, b, poset) for a, b in aa + ss + mixed]

    @staticmethod
    def toric_initial_failures(binomials, phi):
        """Indices of binomials whose two monomials have different signed diagonal images."""
        ring = bracket_ring(phi.k, phi.n)
        failures = []
        for index, binomial in enumerate(binomials):
            total = phi.ring.zero()
            for exponent, coefficient in binomial.terms.items():
                brackets = [ring.variables[i] for i, p in enumerate(exponent) for _ in range(p)]
                sign = 1
                for b in brackets:
                    sign *= phi.leading_sign(b)
                total = total + monomial_image(brackets, phi) * (coefficient * sign)
            if not total.is_zero():
                failures.append(index)
        return failures

    @staticmethod
    def leading_term_mismatches(suite):
        mismatches = []
        for polynomial, expected in zip(suite.all(), suite.leading_terms):
            if leading_brackets(polynomial) != tuple(expected):
                mismatches.append((str(polynomial), expected))
        return mismatches


def generator_suite(k, n, r, verify=False, samples=None, seed=0):
    suite = GeneratorSuiteService.build(k, n, r)
    if verify:
        phi = ParametrizationPhi(k, n, r)
        failures = GeneratorSuiteService.kernel_failures(suite.all(), phi, samples, seed)
        if failures:
            raise CheckFailure(f'kernel membership ({k},{n},{r})', 0, f'{len(failures)} nonzero generators')
        pq_failures = GeneratorSuiteService.kernel_failures(pq_product_entries(k, n, r), phi, samples, seed)
        if pq_failures:
            raise CheckFailure(f'PQ^T membership ({k},{n},{r})', 0, f'{len(pq_failures)} nonzero entries')
        toric = GeneratorSuiteService.toric_binomials(GluedPoset(k, n, r))
        toric_failures = GeneratorSuiteService.toric_initial_failures(toric, phi)
        if toric_failures:
            raise CheckFailure(f'toric initial images ({k},{n},{r})', 0, f'{len(toric_failures)} nonzero binomials')
        mismatches = GeneratorSuiteService.leading_term_mismatches(suite)
        if mismatches:
            raise CheckFailure(f'leading terms ({k},{n},{r})', 'incomparable pairs', mismatches[0])
    return suite
