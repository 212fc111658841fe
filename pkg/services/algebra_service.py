"""
Algebra Service: exact arithmetic kernel.

Rationals are fractions.Fraction. Determinants and ranks of rational matrices
go through fraction-free (Bareiss) elimination after clearing row
denominators. Polynomials are sparse maps from exponent tuples to rational
coefficients over an interned variable table (PolynomialRing).

Index conventions:
- Bracket indices are 1-based labels in [n].
- Matrix rows/columns passed to minor() and RationalMatrix are 0-based.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from services.errors import DomainError

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════
# Rationals and index sets
# ═══════════════════════════════════════════════════════

def to_rational(value):
    """Coerce int / str ('p/q') / Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f'Not a rational value: {value!r}')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f'Malformed rational {value!r}') from exc
    raise DomainError(f'Not a rational value: {value!r}')


def format_rational(value):
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def k_subsets(n, k):
    """All strictly increasing k-tuples in [n], in lexicographic order."""
    return [tuple(c) for c in itertools.combinations(range(1, n + 1), k)]


def complement(indices, n):
    chosen = set(indices)
    return tuple(i for i in range(1, n + 1) if i not in chosen)


def permutation_sign(sequence):
    """Parity of the permutation sorting `sequence`; 0 if it has repeats."""
    values = list(sequence)
    if len(set(values)) != len(values):
        return 0
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(values)), 2) if values[a] > values[b]
    )
    return -1 if inversions % 2 else 1


# ═══════════════════════════════════════════════════════
# Brackets
# ═══════════════════════════════════════════════════════

class BracketKind(str, Enum):
    ANGLE = 'angle'
    SQUARE = 'square'


@dataclass(frozen=True)
class Bracket:
    """Normalized Plücker symbol: <i1 ... ik> (angle) or [j1 ... jk] (square)."""

    kind: BracketKind
    indices: tuple

    def __post_init__(self):
        object.__setattr__(self, 'kind', BracketKind(self.kind))
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        if any(i < 1 for i in self.indices):
            raise DomainError(f'Bracket indices must be positive: {self.indices}')
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise DomainError(f'Bracket indices must be strictly increasing: {self.indices}')

    @classmethod
    def angle(cls, *indices):
        return cls(BracketKind.ANGLE, indices)

    @classmethod
    def square(cls, *indices):
        return cls(BracketKind.SQUARE, indices)

    @property
    def is_angle(self):
        return self.kind is BracketKind.ANGLE

    @property
    def k(self):
        return len(self.indices)

    @property
    def weight(self):
        return sum(self.indices)

    def __str__(self):
        body = ' '.join(str(i) for i in self.indices)
        return f'<{body}>' if self.is_angle else f'[{body}]'

    def __repr__(self):
        return f'Bracket({self})'


def normalize_bracket(kind, raw_indices, n=None):
    """
    Sort a raw index tuple into a Bracket.

    Returns (bracket, sign) with sign the parity of the sorting permutation,
    or (None, 0) when an index repeats.
    """
    indices = tuple(int(i) for i in raw_indices)
    bad = [i for i in indices if i < 1 or (n is not None and i > n)]
    if bad:
        raise DomainError(f'Bracket index {bad[0]} out of range 1..{n}')
    sign = permutation_sign(indices)
    if sign == 0:
        return None, 0
    return Bracket(kind, tuple(sorted(indices))), sign


def parse_bracket(text):
    """Inverse of str(Bracket): '<1 2 3>' or '[1 2 3]'."""
    text = text.strip()
    if len(text) < 2 or (text[0], text[-1]) not in (('<', '>'), ('[', ']')):
        raise DomainError(f'Malformed bracket {text!r}')
    kind = BracketKind.ANGLE if text[0] == '<' else BracketKind.SQUARE
    try:
        indices = tuple(int(part) for part in text[1:-1].split())
    except ValueError as exc:
        raise DomainError(f'Malformed bracket {text!r}') from exc
    bracket, sign = normalize_bracket(kind, indices)
    if sign != 1:
        raise DomainError(f'Bracket {text!r} is not normalized')
    return bracket


@dataclass(frozen=True)
class MatrixEntry:
    """Symbolic matrix entry x[row,col] (1-based)."""

    row: int
    col: int

    def __str__(self):
        return f'x[{self.row},{self.col}]'


@dataclass(frozen=True)
class MandelstamVariable:
    """Mandelstam invariant s[i1,...,ik]."""

    indices: tuple

    def __str__(self):
        return 's[' + ','.join(str(i) for i in self.indices) + ']'


# ═══════════════════════════════════════════════════════
# Fraction-free elimination
# ═══════════════════════════════════════════════════════

def _integer_rows(rows):
    """Scale every row to integers; returns (int_rows, product of row scales)."""
    integer_rows = []
    scale = 1
    for row in rows:
        lcm = math.lcm(*(to_rational(v).denominator for v in row)) if row else 1
        integer_rows.append([int(to_rational(v) * lcm) for v in row])
        scale *= lcm
    return integer_rows, scale


def _bareiss_determinant(a):
    size = len(a)
    if size == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    previous = 1
    for p in range(size - 1):
        if a[p][p] == 0:
            swap = next((i for i in range(p + 1, size) if a[i][p] != 0), None)
            if swap is None:
                return 0
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, size):
            for j in range(p + 1, size):
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) // previous
        previous = a[p][p]
    return sign * a[-1][-1]


def _bareiss_rank(a):
    a = [row[:] for row in a]
    height = len(a)
    width = len(a[0]) if a else 0
    rank = 0
    previous = 1
    for col in range(width):
        if rank == height:
            break
        pivot = next((i for i in range(rank, height) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for i in range(rank + 1, height):
            for j in range(col + 1, width):
                a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) // previous
            a[i][col] = 0
        previous = a[rank][col]
        rank += 1
    return rank


def bareiss_determinant(rows):
    """Exact determinant of a square list-of-rows matrix of rationals."""
    if any(len(row) != len(rows) for row in rows):
        raise DomainError('Determinant needs a square matrix')
    integer_rows, scale = _integer_rows(rows)
    return Fraction(_bareiss_determinant(integer_rows), scale)


def leibniz_determinant(rows, zero, one):
    """Determinant over any commutative ring (polynomial entries, t-series)."""
    size = len(rows)
    total = zero
    for perm in itertools.permutations(range(size)):
        term = one
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if _is_zero(term):
                break
        else:
            total = total + term if permutation_sign(perm) > 0 else total - term
    return total


def _is_zero(value):
    is_zero = getattr(value, 'is_zero', None)
    if callable(is_zero):
        return is_zero()
    return value == 0


# ═══════════════════════════════════════════════════════
# Rational matrices
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError(
                f'Matrix {self.rows}x{self.cols} needs {self.rows * self.cols} entries, '
                f'got {len(self.entries)}'
            )
        object.__setattr__(self, 'entries', tuple(to_rational(v) for v in self.entries))

    @classmethod
    def from_rows(cls, rows):
        rows = [list(row) for row in rows]
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise DomainError('Ragged matrix rows')
        return cls(len(rows), width, tuple(v for row in rows for v in row))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, size):
        return cls(size, size, tuple(Fraction(int(i == j)) for i in range(size) for j in range(size)))

    def __getitem__(self, key):
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)])

    def submatrix(self, rows, cols):
        return RationalMatrix.from_rows([[self[i, j] for j in cols] for i in rows])

    def vstack(self, other):
        if self.rows and other.rows and self.cols != other.cols:
            raise DomainError('Cannot stack matrices of different widths')
        return RationalMatrix.from_rows(self.to_rows() + other.to_rows())

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DomainError(f'Shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}')
        columns = [other.column(j) for j in range(other.cols)]
        return RationalMatrix.from_rows([
            [sum((a * b for a, b in zip(self.row(i), col)), Fraction(0)) for col in columns]
            for i in range(self.rows)
        ])

    def scale_columns(self, factors):
        factors = [to_rational(f) for f in factors]
        return RationalMatrix.from_rows([
            [v * f for v, f in zip(self.row(i), factors)] for i in range(self.rows)
        ])

    def scale_row(self, i, factor):
        rows = self.to_rows()
        rows[i] = [v * to_rational(factor) for v in rows[i]]
        return RationalMatrix.from_rows(rows)

    def delete_column(self, j):
        return self.submatrix(range(self.rows), [c for c in range(self.cols) if c != j])

    def determinant(self):
        if self.rows != self.cols:
            raise DomainError('Determinant needs a square matrix')
        return bareiss_determinant(self.to_rows())

    def rref(self):
        """Reduced row echelon form; pivot = first nonzero entry scanning down each column."""
        a = self.to_rows()
        pivots = []
        lead = 0
        for col in range(self.cols):
            pivot = next((i for i in range(lead, self.rows) if a[i][col] != 0), None)
            if pivot is None:
                continue
            a[lead], a[pivot] = a[pivot], a[lead]
            inverse = 1 / a[lead][col]
            a[lead] = [v * inverse for v in a[lead]]
            for i in range(self.rows):
                if i != lead and a[i][col] != 0:
                    factor = a[i][col]
                    a[i] = [v - factor * w for v, w in zip(a[i], a[lead])]
            pivots.append(col)
            lead += 1
            if lead == self.rows:
                break
        return RationalMatrix.from_rows(a) if a else self, tuple(pivots)

    def row_space_basis(self):
        reduced, pivots = self.rref()
        return RationalMatrix(len(pivots), self.cols, tuple(
            v for i in range(len(pivots)) for v in reduced.row(i)
        ))

    def nullspace(self):
        """Basis (as rows) of {v : self @ v = 0}, one vector per free column."""
        reduced, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            vector = [Fraction(0)] * self.cols
            vector[f] = Fraction(1)
            for i, p in enumerate(pivots):
                vector[p] = -reduced[i, f]
            basis.append(vector)
        return RationalMatrix(len(basis), self.cols, tuple(v for row in basis for v in row))

    def to_numpy(self, dtype=complex):
        return np.array([[dtype(v) for v in self.row(i)] for i in range(self.rows)])


def minor(matrix, rows, cols):
    """Exact minor on 0-based row and column positions."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise DomainError(f'Minor needs as many rows as columns ({len(rows)} vs {len(cols)})')
    if len(rows) > min(matrix.rows, matrix.cols):
        raise DomainError('Minor larger than the matrix')
    if any(not 0 <= i < matrix.rows for i in rows) or any(not 0 <= j < matrix.cols for j in cols):
        raise DomainError('Minor position outside the matrix')
    return bareiss_determinant([[matrix[i, j] for j in cols] for i in rows])


def rank(matrix):
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    integer_rows, _ = _integer_rows(matrix.to_rows())
    return _bareiss_rank(integer_rows)


def maximal_minors(matrix):
    """Plücker vector {I: minor on columns I} for a full-width k x n matrix, I 1-based."""
    k = matrix.rows
    return {
        cols: minor(matrix, range(k), [c - 1 for c in cols])
        for cols in k_subsets(matrix.cols, k)
    }


# ═══════════════════════════════════════════════════════
# Sparse multivariate polynomials
# ═══════════════════════════════════════════════════════

class PolynomialRing:
    """Interned, ordered variable table. Exponent tuples index into it."""

    def __init__(self, variables):
        self.variables = tuple(variables)
        self._index = {v: i for i, v in enumerate(self.variables)}
        if len(self._index) != len(self.variables):
            raise DomainError('Duplicate variables in polynomial ring')

    def __len__(self):
        return len(self.variables)

    def __contains__(self, variable):
        return variable in self._index

    def __eq__(self, other):
        return self is other or (isinstance(other, PolynomialRing) and self.variables == other.variables)

    def __hash__(self):
        return hash(self.variables)

    def index(self, variable):
        try:
            return self._index[variable]
        except KeyError as exc:
            raise DomainError(f'Variable {variable} is not in this ring') from exc

    def exponent(self, powers):
        exponents = [0] * len(self.variables)
        for variable, power in powers.items():
            exponents[self.index(variable)] += power
        return tuple(exponents)

    def monomial(self, powers, coefficient=1):
        return SparsePolynomial(self, {self.exponent(powers): to_rational(coefficient)})

    def variable(self, variable):
        return self.monomial({variable: 1})

    def constant(self, value):
        return SparsePolynomial(self, {(0,) * len(self.variables): to_rational(value)})

    def zero(self):
        return SparsePolynomial(self, {})


class SparsePolynomial:
    __slots__ = ('ring', 'terms')

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {
            tuple(e): to_rational(c) for e, c in (terms or {}).items() if c != 0
        }

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SparsePolynomial):
            if other.ring != self.ring:
                raise DomainError('Polynomials from different rings')
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return SparsePolynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SparsePolynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return SparsePolynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, power):
        result = self.ring.constant(1)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(self.ring.variables[i] for i, p in enumerate(e) if p)
        return [v for v in self.ring.variables if v in used]

    def powers(self, exponent):
        """Exponent tuple -> {variable: power} for the nonzero entries."""
        return {self.ring.variables[i]: p for i, p in enumerate(exponent) if p}

    def coefficient(self, powers):
        return self.terms.get(self.ring.exponent(powers), Fraction(0))

    # -- evaluation -------------------------------------------------------

    def evaluate(self, assignment):
        """Value under variable -> value; values may be Fraction, complex or ring elements."""
        missing = [v for v in self.variables_used() if v not in assignment]
        if missing:
            raise DomainError(f'No value assigned to {missing[0]}')
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, p in enumerate(e):
                if p:
                    term = term * assignment[self.ring.variables[i]] ** p
            total = total + term
        return total

    def substitute(self, mapping, target_ring):
        """Compose with variable -> SparsePolynomial over target_ring."""
        missing = [v for v in self.variables_used() if v not in mapping]
        if missing:
            raise DomainError(f'No substitution for {missing[0]}')
        total = target_ring.zero()
        for e, c in self.terms.items():
            term = target_ring.constant(c)
            for i, p in enumerate(e):
                if p:
                    term = term * mapping[self.ring.variables[i]] ** p
            total = total + term
        return total

    def derivative(self, variable):
        i = self.ring.index(variable)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                lowered = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[lowered] = c * e[i]
        return SparsePolynomial(self.ring, terms)

    # -- text -------------------------------------------------------------

    def sorted_terms(self, key=None):
        """Terms in descending order of `key` (default: exponent tuple)."""
        return sorted(self.terms.items(), key=lambda item: (key or (lambda e: e))(item[0]), reverse=True)

    def to_text(self, key=None):
        if not self.terms:
            return '0'
        pieces = []
        for position, (e, c) in enumerate(self.sorted_terms(key)):
            factors = []
            for variable, power in self.powers(e).items():
                factors.append(f'{variable}^{power}' if power > 1 else str(variable))
            magnitude = abs(c)
            body = '*'.join(factors)
            if not body:
                body = format_rational(magnitude)
            elif magnitude != 1:
                body = f'{format_rational(magnitude)}*{body}'
            if position == 0:
                pieces.append(f'-{body}' if c < 0 else body)
            else:
                pieces.append(f' - {body}' if c < 0 else f' + {body}')
        return ''.join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f'SparsePolynomial({self.to_text()})'


# ═══════════════════════════════════════════════════════
# Univariate polynomials (deformation variable t, or z)
# ═══════════════════════════════════════════════════════

class UnivariatePolynomial:
    """Finite sum of c * t^a with integer a; Fraction coefficients."""

    __slots__ = ('coefficients',)

    def __init__(self, coefficients=None):
        self.coefficients = {
            int(a): to_rational(c) for a, c in (coefficients or {}).items() if c != 0
        }

    @classmethod
    def monomial(cls, coefficient, exponent=0):
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    @classmethod
    def from_roots(cls, roots):
        """Monic product of (t - root)."""
        result = cls.constant(1)
        for root in roots:
            result = result * cls({1: 1, 0: -to_rational(root)})
        return result

    def _coerce(self, other):
        if isinstance(other, UnivariatePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return UnivariatePolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged = dict(self.coefficients)
        for a, c in other.coefficients.items():
            merged[a] = merged.get(a, 0) + c
        return UnivariatePolynomial(merged)

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePolynomial({a: -c for a, c in self.coefficients.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        product = {}
        for a, c in self.coefficients.items():
            for b, d in other.coefficients.items():
                product[a + b] = product.get(a + b, 0) + c * d
        return UnivariatePolynomial(product)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def is_zero(self):
        return not self.coefficients

    def degree(self):
        return max(self.coefficients, default=-1)

    def valuation(self):
        """Lowest exponent with a nonzero coefficient."""
        if not self.coefficients:
            raise DomainError('The zero polynomial has no finite valuation')
        return min(self.coefficients)

    def lowest_coefficient(self):
        return self.coefficients[self.valuation()]

    def evaluate(self, value):
        return sum((c * value ** a for a, c in self.coefficients.items()), Fraction(0))

    def __repr__(self):
        body = ' + '.join(f'{format_rational(c)}*t^{a}' for a, c in sorted(self.coefficients.items()))
        return f'UnivariatePolynomial({body or "0"})'
