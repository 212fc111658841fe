"""
Mandelstam Service: kinematic points on SH(k,n,r) and their Mandelstam
invariants s_I = <I>[I].

A KinematicPoint stores lambda and lambda_tilde (k x n, exact) together with
their Plücker vectors. Square coordinates are always the maximal minors of
lambda_tilde; constructors that prescribe a square convention rescale the
first row of lambda_tilde so this holds exactly.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np
from django.conf import settings

from services.algebra_service import (
    MandelstamVariable, PolynomialRing, RationalMatrix, complement, format_rational,
    k_subsets, maximal_minors, minor, rank, to_rational,
)
from services.errors import DomainError
from services.poset_service import validate_parameters

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════
# Kinematic points
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class KinematicPoint:
    lambda_: RationalMatrix
    lambda_tilde: RationalMatrix
    angle: dict = field(default_factory=dict, compare=False)
    square: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.lambda_.rows, self.lambda_.cols) != (self.lambda_tilde.rows, self.lambda_tilde.cols):
            raise DomainError('lambda and lambda_tilde must have the same shape')
        if self.lambda_.rows > self.lambda_.cols:
            raise DomainError('Kinematic matrices need k <= n')
        if rank(self.lambda_) != self.k or rank(self.lambda_tilde) != self.k:
            raise DomainError('lambda and lambda_tilde must both have full rank k')
        if not self.angle:
            object.__setattr__(self, 'angle', maximal_minors(self.lambda_))
        if not self.square:
            object.__setattr__(self, 'square', maximal_minors(self.lambda_tilde))

    @property
    def k(self):
        return self.lambda_.rows

    @property
    def n(self):
        return self.lambda_.cols

    @classmethod
    def from_matrices(cls, lambda_, lambda_tilde):
        return cls(lambda_, lambda_tilde)

    @classmethod
    def with_square_convention(cls, lambda_, lambda_tilde, target):
        """Rescale lambda_tilde so its maximal minors equal the projectively equal vector `target`."""
        minors = maximal_minors(lambda_tilde)
        pivot = next((J for J, v in target.items() if v != 0), None)
        if pivot is None or minors[pivot] == 0:
            raise DomainError('Square Plücker vector is zero or not proportional to lambda_tilde')
        scale = target[pivot] / minors[pivot]
        rescaled = lambda_tilde.scale_row(0, scale)
        point = cls(lambda_, rescaled)
        if point.square != dict(target):
            raise DomainError('Square Plücker vector is not proportional to lambda_tilde')
        return point

    @classmethod
    def from_parameter_matrix(cls, x, k, r):
        """
        lambda = rows 1..k of x; lambda_tilde spans the kernel of rows
        r+1..n-k+r, normalized so [J] = (-1)^{sum([n] minus J)} times the
        complementary minor of those rows.
        """
        n = x.cols
        validate_parameters(k, n, r)
        if x.rows != n - k + r:
            raise DomainError(f'Parameter matrix for ({k},{n},{r}) needs {n - k + r} rows')
        lambda_ = x.submatrix(range(k), range(n))
        w_perp = x.submatrix(range(r, n - k + r), range(n))
        kernel = w_perp.nullspace()
        if kernel.rows != k:
            raise DomainError('Rows r+1..n-k+r of the parameter matrix are not independent')
        target = {
            J: (-1) ** sum(complement(J, n)) * minor(w_perp, range(n - k), [j - 1 for j in complement(J, n)])
            for J in k_subsets(n, k)
        }
        return cls.with_square_convention(lambda_, kernel, target)

    def pairing_rank(self):
        return rank(self.lambda_ @ self.lambda_tilde.transpose())

    def lies_on(self, r):
        return self.pairing_rank() <= r

    def swapped(self):
        return KinematicPoint(self.lambda_tilde, self.lambda_, self.square, self.angle)

    def rescale_columns(self, factors):
        factors = [to_rational(f) for f in factors]
        if any(f == 0 for f in factors):
            raise DomainError('Torus factors must be nonzero')
        return KinematicPoint(
            self.lambda_.scale_columns(factors),
            self.lambda_tilde.scale_columns([1 / f for f in factors]),
        )

    def delete_column(self, j):
        """Drop particle j (1-based)."""
        return KinematicPoint(self.lambda_.delete_column(j - 1), self.lambda_tilde.delete_column(j - 1))

    def orthogonal_complement(self):
        """(V-perp, W-perp) as an (n-k) x n kinematic point."""
        return KinematicPoint(self.lambda_.nullspace(), self.lambda_tilde.nullspace())


# ═══════════════════════════════════════════════════════
# Mandelstam tensors
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class MandelstamTensor:
    k: int
    n: int
    values: dict

    def __post_init__(self):
        expected = set(k_subsets(self.n, self.k))
        keys = set(self.values)
        if keys != expected:
            missing = sorted(expected - keys)
            extra = sorted(keys - expected)
            raise DomainError(f'Mandelstam tensor keys mismatch (missing {missing[:3]}, extra {extra[:3]})')

    @property
    def numeric(self):
        return any(isinstance(v, (complex, float, np.floating, np.complexfloating)) for v in self.values.values())

    def __getitem__(self, indices):
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            return 0
        return self.values[tuple(sorted(indices))]

    def scaled(self, factor):
        return MandelstamTensor(self.k, self.n, {I: v * factor for I, v in self.values.items()})

    def items(self):
        return [(I, self.values[I]) for I in k_subsets(self.n, self.k)]

    def to_json(self):
        return {str(MandelstamVariable(I)): format_rational(v) for I, v in self.items()}

    def as_assignment(self):
        return {MandelstamVariable(I): v for I, v in self.values.items()}


def hadamard(point):
    return MandelstamTensor(point.k, point.n, {
        I: point.angle[I] * point.square[I] for I in k_subsets(point.n, point.k)
    })


def mandelstam_ring(k, n):
    return PolynomialRing([MandelstamVariable(I) for I in k_subsets(n, k)])


def momentum_forms(k, n, r):
    """Sum over J in C([n] minus I, r+1) of s_{I u J}, one form per I in C([n], k-r-1)."""
    if not 0 <= r <= k - 1:
        raise DomainError(f'Momentum forms need 0 <= r <= k-1, got r={r}, k={k}')
    ring = mandelstam_ring(k, n)
    forms = []
    for I in k_subsets(n, k - r - 1):
        rest = complement(I, n)
        form = ring.zero()
        for J in itertools.combinations(rest, r + 1):
            form = form + ring.variable(MandelstamVariable(tuple(sorted(I + J))))
        forms.append(form)
    return forms


def dims(k, n, r):
    """(dim SH, dim M, ambient N) with N = C(n,k) - 1 - C(n, k-r-1)."""
    validate_parameters(k, n, r)
    dim_sh = 2 * k * (n - k) - (k - r) ** 2
    dim_m = dim_sh - n + 1
    linear = comb(n, k - r - 1) if k - r - 1 >= 0 else 0
    return dim_sh, dim_m, comb(n, k) - 1 - linear


def marginal(s):
    """Symmetric n x n matrix with (i,j) = sum of s over the k-sets containing i and j."""
    if s.k < 2:
        raise DomainError('The two-way marginal needs k >= 2')
    rows = [[Fraction(0)] * s.n for _ in range(s.n)]
    for I, value in s.items():
        for i, j in itertools.combinations(I, 2):
            rows[i - 1][j - 1] += value
            rows[j - 1][i - 1] += value
    return RationalMatrix.from_rows(rows)


# ═══════════════════════════════════════════════════════
# Samplers
# ═══════════════════════════════════════════════════════

def _random_rational(rng):
    return Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 11)))


def psi_matrix(k, n, r, parameters):
    """
    Structured (n-k+r) x n matrix in three row groups:
    rows r+1..k start with an identity block; rows 1..r and rows k+1..n-k+r
    start with k-r zero columns followed by an identity block. The remaining
    2k(n-k) - (k-r)^2 entries are taken from `parameters`, group by group.
    """
    validate_parameters(k, n, r)
    parameters = iter(parameters)
    width = k - r
    rows = [None] * (n - k + r)

    def block_row(unit_column, lead):
        row = [Fraction(0)] * n
        row[unit_column] = Fraction(1)
        for j in range(lead, n):
            row[j] = to_rational(next(parameters))
        return row

    for a in range(width):
        rows[r + a] = block_row(a, width)
    for a in range(r):
        rows[a] = block_row(width + a, k)
    for a in range(n - 2 * k + r):
        rows[k + a] = block_row(width + a, n - k)
    try:
        next(parameters)
    except StopIteration:
        return RationalMatrix.from_rows(rows)
    raise DomainError('Too many chart parameters')


def psi_parameter_count(k, n, r):
    return 2 * k * (n - k) - (k - r) ** 2


def psi_sample(k, n, r, seed=0):
    rng = np.random.default_rng(seed)
    for attempt in range(settings.SHV_RESAMPLE_CAP):
        parameters = [_random_rational(rng) for _ in range(psi_parameter_count(k, n, r))]
        x = psi_matrix(k, n, r, parameters)
        try:
            point = KinematicPoint.from_parameter_matrix(x, k, r)
        except DomainError:
            logger.warning(f'psi sample ({k},{n},{r}) seed {seed}: degenerate draw {attempt}, resampling')
            continue
        if all(point.angle.values()) and all(point.square.values()):
            return point
        logger.warning(f'psi sample ({k},{n},{r}) seed {seed}: vanishing Plücker coordinate, resampling')
    raise DomainError(f'No nondegenerate psi sample for ({k},{n},{r}) after {settings.SHV_RESAMPLE_CAP} draws')


def vandermonde(nodes, rows):
    return RationalMatrix.from_rows([[to_rational(x) ** p for x in nodes] for p in range(rows)])


def positive_nodes(n, seed=0):
    rng = np.random.default_rng(seed)
    nodes = sorted(int(v) for v in rng.choice(np.arange(1, 4 * n + 1), size=n, replace=False))
    return [Fraction(v) for v in nodes]


def positive_sample(k, n, seed=0):
    """
    W-perp = row span of the (n-k) x n Vandermonde matrix at increasing
    positive nodes, V = span of its first k rows; squares normalized to
    [J] = (-1)^{sum J} times the complementary Vandermonde minor.
    """
    if not 1 <= k or 2 * k > n:
        raise DomainError(f'Positive samples need 2k <= n, got k={k}, n={n}')
    w_perp = vandermonde(positive_nodes(n, seed), n - k)
    lambda_ = w_perp.submatrix(range(k), range(n))
    target = {
        J: (-1) ** sum(J) * minor(w_perp, range(n - k), [j - 1 for j in complement(J, n)])
        for J in k_subsets(n, k)
    }
    return KinematicPoint.with_square_convention(lambda_, w_perp.nullspace(), target)


# ═══════════════════════════════════════════════════════
# Membership for k = 2
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class MembershipReport:
    member: bool
    violated: str = ''

    def to_json(self):
        return {'member': self.member, 'violated': self.violated or None}


def _linear_forms_k2(n, r):
    if r == 2:
        return []
    return momentum_forms(2, n, r)


def membership_k2(s, r, reduced=False):
    """
    s lies on M(2,n,r) iff every 5x5 minor of (s_ij) vanishes and the
    r-appropriate momentum forms vanish. With reduced=True (r = 0 only) the
    minors are limited to those using the last row or the last column.
    """
    if s.k != 2:
        raise DomainError('membership_k2 needs a k = 2 tensor')
    if r not in (0, 1, 2):
        raise DomainError(f'r must be 0, 1 or 2, got {r}')
    if reduced and r != 0:
        raise DomainError('The reduced minor test only applies to r = 0')
    assignment = s.as_assignment()
    for form in _linear_forms_k2(s.n, r):
        if form.evaluate(assignment) != 0:
            return MembershipReport(False, form.to_text())
    matrix = marginal(s)
    if s.n < 5 or (not reduced and rank(matrix) <= 4):
        return MembershipReport(True)
    last = s.n - 1
    for rows in itertools.combinations(range(s.n), 5):
        for cols in itertools.combinations(range(s.n), 5):
            if reduced and last not in rows and last not in cols:
                continue
            if minor(matrix, rows, cols) != 0:
                label_r = ','.join(str(i + 1) for i in rows)
                label_c = ','.join(str(j + 1) for j in cols)
                return MembershipReport(False, f'det(s[{label_r};{label_c}])')
    return MembershipReport(True)


# ═══════════════════════════════════════════════════════
# Positivity
# ═══════════════════════════════════════════════════════

def positive_sign(indices):
    return (-1) ** sum(indices)


def has_positive_signs(s):
    return all(v != 0 and (v > 0) == (positive_sign(I) > 0) for I, v in s.items())


def strictness_witness(s):
    """s13*s24 + s14*s23 - s12*s34 for a (2,4) tensor."""
    if (s.k, s.n) != (2, 4):
        raise DomainError('The strictness witness is defined for k = 2, n = 4')
    return s[1, 3] * s[2, 4] + s[1, 4] * s[2, 3] - s[1, 2] * s[3, 4]


def strictness_classify(s):
    value = strictness_witness(s)
    if value > 0:
        return 'positive'
    if value < 0:
        return 'negative'
    return 'on boundary'


def strictness_witness_point(seed=0):
    """A point of M+(2,4,2) (alternating signs) where the witness is negative."""
    rng = np.random.default_rng(seed)
    pairs = k_subsets(4, 2)
    for _ in range(settings.SHV_RESAMPLE_CAP):
        magnitudes = [Fraction(int(rng.integers(1, 11)), int(rng.integers(1, 4))) for _ in pairs]
        s = MandelstamTensor(2, 4, {I: positive_sign(I) * m for I, m in zip(pairs, magnitudes)})
        if strictness_witness(s) < 0:
            return s
    raise DomainError('No strictness witness found within the resample cap')


POSITIVE_POLYTOPE_VERTICES_M250 = (
    ((1, 2), (1, 3), (2, 4), (3, 4)),
    ((1, 3), (1, 4), (2, 3), (2, 4)),
    ((1, 2), (1, 5), (2, 4), (4, 5)),
    ((1, 4), (1, 5), (2, 4), (2, 5)),
    ((2, 3), (2, 4), (3, 5), (4, 5)),
    ((2, 4), (2, 5), (3, 4), (3, 5)),
)


def positive_polytope_vertices_m250():
    """The six vertices of the positive (2,5,0) polytope, as +-1 tensors."""
    vertices = []
    for support in POSITIVE_POLYTOPE_VERTICES_M250:
        values = {I: Fraction(0) for I in k_subsets(5, 2)}
        for I in support:
            values[I] = Fraction(positive_sign(I))
        vertices.append(MandelstamTensor(2, 5, values))
    return vertices


# ═══════════════════════════════════════════════════════
# Induced k = 2 data for (3, n, 1)
# ═══════════════════════════════════════════════════════

def intersection_pair(point):
    """Bases of V ∩ W-perp and V-perp ∩ W as row matrices."""
    pairing = point.lambda_ @ point.lambda_tilde.transpose()
    a = pairing.transpose().nullspace()
    b = pairing.nullspace()
    return a @ point.lambda_, b @ point.lambda_tilde


def induced_k2_tensor(point):
    """Hadamard tensor of (V ∩ W-perp, V-perp ∩ W) for a point on SH(3,n,1)."""
    v_part, w_part = intersection_pair(point)
    if v_part.rows != 2 or w_part.rows != 2:
        raise DomainError('Point is not generic on SH(3,n,1)')
    return hadamard(KinematicPoint(v_part, w_part))


def proportional(first, second):
    """Exact test that two rational matrices / vectors agree up to a nonzero scalar."""
    first, second = list(first), list(second)
    pivot = next((i for i, v in enumerate(second) if v != 0), None)
    if pivot is None:
        return all(v == 0 for v in first)
    scale = first[pivot] / second[pivot]
    return scale != 0 and all(a == scale * b for a, b in zip(first, second))
