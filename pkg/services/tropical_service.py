"""
Tropical Service: min-plus shadows of the spinor-helicity and Mandelstam
varieties.

Two ways to produce tropical Mandelstam vectors:
- trop_mandelstam_sample: tropical minors (min over permutations) of an
  integer valuation matrix in the shape of phi.
- valuation_sample: exact t-adic valuations of brackets of a matrix whose
  entries are c * t^a.

For M(2,5,0) the service also carries the 15-form tropical basis, the 15
signed equations of the positive part, and the circuit enumeration of the
rank-5 matroid behind it.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np
from django.conf import settings
from scipy.optimize import linear_sum_assignment

from services.algebra_service import (
    MandelstamVariable, RationalMatrix, UnivariatePolynomial, complement,
    format_rational, k_subsets, leibniz_determinant, permutation_sign, rank, to_rational,
)
from services.errors import DomainError
from services.poset_service import validate_parameters

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 6


@dataclass(frozen=True)
class TropicalVector:
    """Min-plus coordinates indexed by k-subsets, defined up to a global shift."""

    k: int
    n: int
    values: dict

    def __post_init__(self):
        if set(self.values) != set(k_subsets(self.n, self.k)):
            raise DomainError(f'Tropical vector needs one entry per {self.k}-subset of [{self.n}]')
        object.__setattr__(self, 'values', {I: to_rational(v) for I, v in self.values.items()})

    def __getitem__(self, indices):
        return self.values[tuple(sorted(indices))]

    def __add__(self, other):
        """Coordinatewise sum (the tropical Hadamard product)."""
        if (self.k, self.n) != (other.k, other.n):
            raise DomainError('Tropical vectors of different shapes')
        return TropicalVector(self.k, self.n, {I: v + other.values[I] for I, v in self.values.items()})

    def normalized(self):
        """Shift so the minimum entry is 0."""
        low = min(self.values.values())
        return TropicalVector(self.k, self.n, {I: v - low for I, v in self.values.items()})

    def to_json(self):
        return {str(MandelstamVariable(I)): format_rational(v) for I, v in sorted(self.values.items())}

    @classmethod
    def unit(cls, k, n, indices, value=1):
        values = {I: Fraction(0) for I in k_subsets(n, k)}
        values[tuple(sorted(indices))] = Fraction(value)
        return cls(k, n, values)


# ═══════════════════════════════════════════════════════
# Tropical minors
# ═══════════════════════════════════════════════════════

def _entries(matrix, rows, cols):
    return [[to_rational(matrix[i][j] if isinstance(matrix, list) else matrix[i, j]) for j in cols] for i in rows]


def optimal_assignments(matrix, rows, cols):
    """(minimum, number of permutations attaining it) by enumeration."""
    block = _entries(matrix, rows, cols)
    best, count = None, 0
    for perm in itertools.permutations(range(len(block))):
        total = sum(block[i][j] for i, j in enumerate(perm))
        if best is None or total < best:
            best, count = total, 1
        elif total == best:
            count += 1
    return best, count


def trop_minor(matrix, rows, cols):
    """min over bijections rows -> cols of the summed valuations (0-based positions)."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise DomainError(f'Tropical minor needs as many rows as columns ({len(rows)} vs {len(cols)})')
    if not rows:
        return Fraction(0)
    if len(rows) <= BRUTE_FORCE_LIMIT:
        return optimal_assignments(matrix, rows, cols)[0]
    block = _entries(matrix, rows, cols)
    scale = lcm(*(v.denominator for row in block for v in row))
    cost = np.array([[int(v * scale) for v in row] for row in block], dtype=np.float64)
    row_index, col_index = linear_sum_assignment(cost)
    return sum((block[i][j] for i, j in zip(row_index, col_index)), Fraction(0))


def tropical_pluecker_pair(valuations, k, r):
    """Tropical angle and square vectors of a valuation matrix in phi's shape."""
    n = len(valuations[0])
    m = len(valuations)
    if m != n - k + r:
        raise DomainError(f'Valuation matrix for ({k},{n},{r}) needs {n - k + r} rows')
    angle = {I: trop_minor(valuations, range(k), [i - 1 for i in I]) for I in k_subsets(n, k)}
    square = {
        J: trop_minor(valuations, range(r, m), [j - 1 for j in complement(J, n)])
        for J in k_subsets(n, k)
    }
    return TropicalVector(k, n, angle), TropicalVector(k, n, square)


def random_valuations(k, n, r, rng, high=10):
    return [
        [Fraction(int(v)) for v in rng.integers(0, high, size=n)]
        for _ in range(n - k + r)
    ]


def trop_mandelstam_sample(k, n, r, seed=0):
    validate_parameters(k, n, r)
    rng = np.random.default_rng(seed)
    angle, square = tropical_pluecker_pair(random_valuations(k, n, r, rng), k, r)
    return angle + square


# ═══════════════════════════════════════════════════════
# Exact t-adic valuations
# ═══════════════════════════════════════════════════════

def t_matrix(coefficients, exponents):
    return [
        [UnivariatePolynomial.monomial(c, a) for c, a in zip(c_row, a_row)]
        for c_row, a_row in zip(coefficients, exponents)
    ]


def t_minor(entries, rows, cols):
    block = [[entries[i][j] for j in cols] for i in rows]
    return leibniz_determinant(block, UnivariatePolynomial(), UnivariatePolynomial.constant(1))


def valuation_pluecker_pair(entries, k, r):
    """Exact valuations of every bracket; DomainError if one vanishes identically."""
    n = len(entries[0])
    m = len(entries)
    angle, square = {}, {}
    for I in k_subsets(n, k):
        value = t_minor(entries, range(k), [i - 1 for i in I])
        if value.is_zero():
            raise DomainError(f'Bracket <{I}> vanishes identically')
        angle[I] = value.valuation()
    for J in k_subsets(n, k):
        value = t_minor(entries, range(r, m), [j - 1 for j in complement(J, n)])
        if value.is_zero():
            raise DomainError(f'Bracket [{J}] vanishes identically')
        square[J] = value.valuation()
    return TropicalVector(k, n, angle), TropicalVector(k, n, square)


def random_t_matrix(k, n, r, rng, high=10, constant=False):
    rows = n - k + r
    coefficients = []
    for _ in range(rows):
        row = []
        for _ in range(n):
            numerator = 0
            while numerator == 0:
                numerator = int(rng.integers(-50, 51))
            row.append(Fraction(numerator, int(rng.integers(1, 11))))
        coefficients.append(row)
    if constant:
        exponents = [[0] * n for _ in range(rows)]
    else:
        exponents = [[int(v) for v in rng.integers(0, high, size=n)] for _ in range(rows)]
    return coefficients, exponents


def valuation_sample(k, n, r, seed=0, constant=False):
    validate_parameters(k, n, r)
    rng = np.random.default_rng(seed)
    for attempt in range(settings.SHV_RESAMPLE_CAP):
        coefficients, exponents = random_t_matrix(k, n, r, rng, constant=constant)
        try:
            angle, square = valuation_pluecker_pair(t_matrix(coefficients, exponents), k, r)
        except DomainError as exc:
            logger.warning(f'valuation sample ({k},{n},{r}) seed {seed}: {exc}; resampling ({attempt})')
            continue
        return angle + square
    raise DomainError(f'Every valuation draw for ({k},{n},{r}) had a vanishing bracket')


def vandermonde_family_valuation(k, n, exponents):
    """
    Valuations of s for the positive family with nodes t^{a_i}: W-perp is
    the (n-k) x n Vandermonde matrix, V its first k rows.
    """
    if len(exponents) != n or len(set(exponents)) != n:
        raise DomainError('Need n distinct node exponents')
    entries = [
        [UnivariatePolynomial.monomial(1, a * p) for a in exponents]
        for p in range(n - k)
    ]
    angle = {I: t_minor(entries, range(k), [i - 1 for i in I]).valuation() for I in k_subsets(n, k)}
    square = {
        J: t_minor(entries, range(n - k), [j - 1 for j in complement(J, n)]).valuation()
        for J in k_subsets(n, k)
    }
    return TropicalVector(k, n, angle) + TropicalVector(k, n, square)


def positive_family_exponents(n, seed=0):
    rng = np.random.default_rng(seed)
    return sorted((int(v) for v in rng.choice(np.arange(1, 4 * n + 1), size=n, replace=False)), reverse=True)


# ═══════════════════════════════════════════════════════
# M(2,5,0): tropical basis and positive equations
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class LinearForm:
    """Signed support over the variables s_ij, n = 5."""

    terms: tuple

    @property
    def support(self):
        return tuple(sorted(pair for _, pair in self.terms))

    def to_text(self):
        text = ''
        for position, (coefficient, pair) in enumerate(self.terms):
            name = str(MandelstamVariable(pair))
            if coefficient < 0:
                text += f'-{name}'
            else:
                text += name if position == 0 else f'+{name}'
        return text


@dataclass(frozen=True)
class TropicalEquation:
    """min over lhs = min over rhs."""

    lhs: tuple
    rhs: tuple

    def to_text(self):
        def side(pairs):
            return ' ⊕ '.join(str(MandelstamVariable(p)) for p in pairs)
        return f'{side(self.lhs)} = {side(self.rhs)}'

    def holds(self, v):
        return min(v[p] for p in self.lhs) == min(v[p] for p in self.rhs)


@dataclass(frozen=True)
class OracleReport:
    passed: bool
    failing: str = ''

    def to_json(self):
        return {'passed': self.passed, 'failing': self.failing or None}


def tropical_basis_m250():
    """Five row sums, then one form per triple T: sum over pairs in T minus s_{[5] minus T}."""
    forms = []
    for i in range(1, 6):
        forms.append(LinearForm(tuple((1, tuple(sorted((i, j)))) for j in range(1, 6) if j != i)))
    for triple in itertools.combinations(range(1, 6), 3):
        terms = tuple((1, pair) for pair in itertools.combinations(triple, 2))
        forms.append(LinearForm(terms + ((-1, complement(triple, 5)),)))
    return forms


def positive_tropical_equations_m250():
    """Split each basis form by the sign of coefficient * (-1)^{i+j}."""
    equations = []
    for form in tropical_basis_m250():
        positive = tuple(p for c, p in form.terms if c * (-1) ** sum(p) > 0)
        negative = tuple(p for c, p in form.terms if c * (-1) ** sum(p) < 0)
        equations.append(TropicalEquation(positive, negative))
    return equations


def _require_m250(v):
    if (v.k, v.n) != (2, 5):
        raise DomainError('This check is defined for k = 2, n = 5 only')


def tropical_basis_check_m250(v):
    _require_m250(v)
    for form in tropical_basis_m250():
        entries = [v[p] for _, p in form.terms]
        if entries.count(min(entries)) < 2:
            return OracleReport(False, form.to_text())
    return OracleReport(True)


def positive_trop_check_m250(v):
    _require_m250(v)
    for equation in positive_tropical_equations_m250():
        if not equation.holds(v):
            return OracleReport(False, equation.to_text())
    return OracleReport(True)


def momentum_matrix_m250():
    """5 x 10 coefficient matrix of the row-sum forms; columns are the pairs in lex order."""
    pairs = k_subsets(5, 2)
    return RationalMatrix.from_rows([[int(i in pair) for pair in pairs] for i in range(1, 6)]), pairs


def circuits_m250():
    """Minimal supports of nonzero vectors in the row space of the momentum matrix."""
    matrix, pairs = momentum_matrix_m250()
    full_rank = rank(matrix)
    positions = range(len(pairs))
    cache = {}

    def has_vector(support):
        if support not in cache:
            outside = [j for j in positions if j not in support]
            cache[support] = rank(matrix.submatrix(range(matrix.rows), outside)) < full_rank if outside else True
        return cache[support]

    circuits = []
    for size in range(1, len(pairs) + 1):
        for support in itertools.combinations(positions, size):
            if has_vector(support) and not any(
                has_vector(support[:i] + support[i + 1:]) for i in range(size)
            ):
                circuits.append(tuple(pairs[j] for j in support))
    logger.info(f'R10: {len(circuits)} circuits')
    return circuits
