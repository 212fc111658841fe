"""
Poset Service: Young's lattice Y(k,n), its reversed copy, and the glued
poset P(k,n,r) whose incomparable pairs index the quadratic generators of
the spinor-helicity ideal.

Angles <I> live in Y(k,n) (componentwise order, <1..k> at the bottom).
Squares [J] live in the reversed copy ([n-k+1..n] is the global minimum).
The two copies are joined by the covering relations [1..r, i] < <1..r, j>.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb

from services.algebra_service import Bracket, BracketKind, complement, k_subsets
from services.errors import DomainError

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    LESS = 'less'
    GREATER = 'greater'
    EQUAL = 'equal'
    INCOMPARABLE = 'incomparable'


def _flip(relation):
    return {
        Relation.LESS: Relation.GREATER,
        Relation.GREATER: Relation.LESS,
    }.get(relation, relation)


def young_compare(a, b):
    """Componentwise comparison of two equal-length increasing tuples."""
    if a == b:
        return Relation.EQUAL
    if all(x <= y for x, y in zip(a, b)):
        return Relation.LESS
    if all(x >= y for x, y in zip(a, b)):
        return Relation.GREATER
    return Relation.INCOMPARABLE


def linear_extension_key(b):
    """
    Sort key of the canonical linear extension: every square below every
    angle; squares by decreasing index sum, angles by increasing sum.
    """
    if b.is_angle:
        return (1, b.weight, b.indices)
    return (0, -b.weight, tuple(-i for i in b.indices))


def validate_parameters(k, n, r):
    if not 1 <= k <= n:
        raise DomainError(f'Need 1 <= k <= n, got k={k}, n={n}')
    if not 0 <= r <= k:
        raise DomainError(f'Need 0 <= r <= k, got r={r}, k={k}')
    if 2 * k > r + n:
        raise DomainError(f'Need 2k <= r + n, got k={k}, n={n}, r={r}')


def hook_content_count(k, n):
    """Number of incomparable pairs in Y(k,n)."""
    if not 1 <= k <= n:
        raise DomainError(f'Need 1 <= k <= n, got k={k}, n={n}')
    total = comb(n, k)
    product = Fraction(1)
    for i in range(k - 1):
        product *= Fraction((n - i) ** 2, (k - i) ** 2)
    value = Fraction((total + 1) * total, 2) - Fraction((n + 1) * (n - k + 1), k + 1) * product
    if value.denominator != 1:
        raise DomainError(f'Hook-content value for ({k},{n}) is not integral: {value}')
    return value.numerator


@lru_cache(maxsize=None)
def _young_chain_count(n, indices):
    """Maximal chains from `indices` to the top of Y(k,n), stepping one index up at a time."""
    k = len(indices)
    if indices == tuple(range(n - k + 1, n + 1)):
        return 1
    total = 0
    for position, value in enumerate(indices):
        limit = indices[position + 1] if position + 1 < k else n + 1
        if value + 1 < limit:
            total += _young_chain_count(n, indices[:position] + (value + 1,) + indices[position + 1:])
    return total


def column_sort(top, bottom, offset):
    """
    Column-sort a two-row skew tableau.

    `bottom` occupies columns 1..len(bottom); `top` occupies columns
    offset+1..offset+len(top). In overlapping columns the smaller entry goes
    on top. Returns the new (top, bottom) rows.
    """
    top, bottom = list(top), list(bottom)
    for column in range(offset + 1, len(bottom) + 1):
        t = column - offset - 1
        if t >= len(top):
            break
        b = column - 1
        if top[t] > bottom[b]:
            top[t], bottom[b] = bottom[b], top[t]
    return tuple(top), tuple(bottom)


@dataclass(frozen=True)
class BidegreePolynomial:
    """Sum of c * s^i * t^j; s tracks the square side, t the angle side."""

    terms: dict = field(default_factory=dict)

    def coefficients(self):
        """Terms ordered by increasing s-exponent."""
        return [(i, j, c) for (i, j), c in sorted(self.terms.items())]

    def coefficient_sum(self):
        return sum(self.terms.values())

    def total_degrees(self):
        return {i + j for i, j in self.terms}

    def is_palindromic(self):
        return all(self.terms.get((j, i)) == c for (i, j), c in self.terms.items())

    def factor_common(self):
        """Split off the largest (st)^m dividing every term: returns (m, reduced terms)."""
        if not self.terms:
            return 0, {}
        m = min(min(i, j) for i, j in self.terms)
        return m, {(i - m, j - m): c for (i, j), c in self.terms.items()}

    def to_text(self):
        pieces = []
        for i, j, c in self.coefficients():
            pieces.append(f'{c}*s^{i}*t^{j}')
        return ' + '.join(pieces) or '0'


@dataclass(frozen=True)
class GluedPoset:
    k: int
    n: int
    r: int

    def __post_init__(self):
        validate_parameters(self.k, self.n, self.r)

    # ═══════════════════════════════════════════════════════
    # Elements
    # ═══════════════════════════════════════════════════════

    @property
    def size(self):
        return 2 * comb(self.n, self.k)

    def angles(self):
        return [Bracket(BracketKind.ANGLE, I) for I in k_subsets(self.n, self.k)]

    def squares(self):
        return [Bracket(BracketKind.SQUARE, J) for J in k_subsets(self.n, self.k)]

    def elements(self):
        """All elements in canonical linear-extension order (bottom first)."""
        return sorted(self.squares() + self.angles(), key=self.linear_extension_key)

    @property
    def top(self):
        return Bracket(BracketKind.ANGLE, tuple(range(self.n - self.k + 1, self.n + 1)))

    @property
    def bottom(self):
        return Bracket(BracketKind.SQUARE, tuple(range(self.n - self.k + 1, self.n + 1)))

    def linear_extension_key(self, b):
        self._check(b)
        return linear_extension_key(b)

    def _check(self, b):
        if b.k != self.k or b.indices[-1] > self.n:
            raise DomainError(f'{b} is not an element of P({self.k},{self.n},{self.r})')

    # ═══════════════════════════════════════════════════════
    # Order
    # ═══════════════════════════════════════════════════════

    def is_semistandard(self, angle, square):
        """<I> >= [J]: skew tableau with top row [n]\\J (shifted by r) over I is column-strict."""
        top = complement(square.indices, self.n)
        return all(top[l] <= angle.indices[self.r + l] for l in range(self.k - self.r))

    def leftmost_violation(self, angle, square):
        """0-based l of the first column where the skew tableau fails, or None."""
        top = complement(square.indices, self.n)
        for l in range(self.k - self.r):
            if top[l] > angle.indices[self.r + l]:
                return l
        return None

    def compare(self, a, b):
        self._check(a)
        self._check(b)
        if a.kind == b.kind:
            relation = young_compare(a.indices, b.indices)
            return relation if a.is_angle else _flip(relation)
        if a.is_angle:
            return Relation.GREATER if self.is_semistandard(a, b) else Relation.INCOMPARABLE
        return Relation.LESS if self.is_semistandard(b, a) else Relation.INCOMPARABLE

    def covering_relations(self):
        """Pairs ([1..r, i], <1..r, j>) for each split of {r+1..2k-r} into two (k-r)-sets."""
        head = tuple(range(1, self.r + 1))
        middle = range(self.r + 1, 2 * self.k - self.r + 1)
        relations = []
        for chosen in itertools.combinations(middle, self.k - self.r):
            rest = tuple(i for i in middle if i not in chosen)
            relations.append((
                Bracket(BracketKind.SQUARE, head + chosen),
                Bracket(BracketKind.ANGLE, head + rest),
            ))
        return relations

    def upper_covers(self, b):
        """Hasse-diagram successors of b in P(k,n,r)."""
        self._check(b)
        covers = []
        indices = b.indices
        step = 1 if b.is_angle else -1
        for position, value in enumerate(indices):
            moved = value + step
            if not 1 <= moved <= self.n or moved in indices:
                continue
            covers.append(Bracket(b.kind, tuple(sorted(indices[:position] + (moved,) + indices[position + 1:]))))
        if not b.is_angle:
            covers.extend(angle for square, angle in self.covering_relations() if square == b)
        return covers

    # ═══════════════════════════════════════════════════════
    # Incomparable pairs
    # ═══════════════════════════════════════════════════════

    def same_side_incomparable(self, kind):
        subsets = k_subsets(self.n, self.k)
        return [
            (Bracket(kind, a), Bracket(kind, b))
            for a, b in itertools.combinations(subsets, 2)
            if young_compare(a, b) is Relation.INCOMPARABLE
        ]

    def mixed_incomparable(self):
        subsets = k_subsets(self.n, self.k)
        tops = {J: complement(J, self.n) for J in subsets}
        width = self.k - self.r
        pairs = []
        for I in subsets:
            for J in subsets:
                top = tops[J]
                if any(top[l] > I[self.r + l] for l in range(width)):
                    pairs.append((Bracket(BracketKind.ANGLE, I), Bracket(BracketKind.SQUARE, J)))
        return pairs

    def incomparable_pairs(self):
        aa = self.same_side_incomparable(BracketKind.ANGLE)
        ss = self.same_side_incomparable(BracketKind.SQUARE)
        mixed = self.mixed_incomparable()
        logger.info(f'P({self.k},{self.n},{self.r}): {len(aa)}+{len(ss)}+{len(mixed)} incomparable pairs')
        return aa, ss, mixed

    # ═══════════════════════════════════════════════════════
    # Meet / join
    # ═══════════════════════════════════════════════════════

    def meet_join(self, angle, square):
        """
        Column-sort the skew tableau of a mixed incomparable pair.

        Returns (join angle, meet square): the sorted bottom row is the new
        angle; the complement of the sorted top row is the new square.
        """
        self._check(angle)
        self._check(square)
        if not angle.is_angle or square.is_angle:
            raise DomainError('meet_join expects an angle and a square bracket')
        if self.is_semistandard(angle, square):
            raise DomainError(f'{angle} and {square} are comparable')
        top, bottom = column_sort(complement(square.indices, self.n), angle.indices, self.r)
        return (
            Bracket(BracketKind.ANGLE, bottom),
            Bracket(BracketKind.SQUARE, complement(top, self.n)),
        )

    # ═══════════════════════════════════════════════════════
    # Chains and bidegree
    # ═══════════════════════════════════════════════════════

    def chain_count(self, b):
        """Maximal chains from b to the top of its own Young lattice copy."""
        self._check(b)
        return _young_chain_count(self.n, b.indices)

    def total_maximal_chains(self):
        """Maximal chains of the whole glued poset, by DP over its Hasse diagram."""
        memo = {}

        def count(element):
            if element == self.top:
                return 1
            if element not in memo:
                memo[element] = sum(count(c) for c in self.upper_covers(element))
            return memo[element]

        ordered = sorted(self.elements(), key=self.linear_extension_key, reverse=True)
        for element in ordered:
            count(element)
        return count(self.bottom)

    def bidegree(self):
        offset = comb(self.k + 1, 2)
        prefactor = comb(self.n, self.k) - self.k * (self.n - self.k) - 1
        terms = {}
        for square, angle in self.covering_relations():
            key = (
                prefactor + square.weight - offset,
                prefactor + angle.weight - offset,
            )
            terms[key] = terms.get(key, 0) + self.chain_count(square) * self.chain_count(angle)
        return BidegreePolynomial(terms)

    def dimension(self):
        return 2 * self.k * (self.n - self.k) - (self.k - self.r) ** 2
