"""
Scattering Service: scattering equations on the moduli spaces X(2,n) and
X(3,6), their numerical solutions, and the exact certificates behind them.

The scattering potential is L_s = sum_I s_I log p_I, where p_I are the
Plücker coordinates of a gauge-fixed configuration written as polynomials
in the unknowns. Both supported families go through LogPotential:
- k = 2: x1 = 0, x2 = 1, xn = infinity (its terms drop), unknowns x3..x(n-1).
- (3,6): the chart [[1,0,0,1,1,1],[0,1,0,1,x,y],[0,0,1,1,z,w]].
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
from django.conf import settings

from services.algebra_service import (
    PolynomialRing, RationalMatrix, UnivariatePolynomial, format_rational,
    k_subsets, leibniz_determinant, to_rational,
)
from services.errors import CheckFailure, ClassificationError, DomainError
from services.mandelstam_service import (
    KinematicPoint, MandelstamTensor, hadamard, intersection_pair, momentum_forms,
)
from services.serialization import encode_complex

logger = logging.getLogger(__name__)

VARIABLES_36 = ('w', 'x', 'y', 'z')
DISPLAY_36 = ('x', 'y', 'z', 'w')
COUNT_36 = 26


# ═══════════════════════════════════════════════════════
# Eulerian numbers
# ═══════════════════════════════════════════════════════

@lru_cache(maxsize=None)
def _eulerian(m, j):
    if m < 1 or j < 0 or j > m - 1:
        return 0
    if m == 1:
        return 1
    return (j + 1) * _eulerian(m - 1, j) + (m - j) * _eulerian(m - 1, j - 1)


def eulerian(m, j):
    if m < 1 or not 0 <= j <= m - 1:
        raise DomainError(f'Eulerian number A({m},{j}) needs m >= 1 and 0 <= j <= m-1')
    return _eulerian(m, j)


@dataclass(frozen=True)
class EulerianTable:
    size: int
    values: dict = field(default_factory=dict)

    @classmethod
    def build(cls, size):
        return cls(size, {(m, j): _eulerian(m, j) for m in range(1, size + 1) for j in range(m)})

    def __getitem__(self, key):
        return self.values[key]

    def row(self, m):
        return [self.values[m, j] for j in range(m)]

    def factorial_sums_hold(self):
        return all(sum(self.row(m)) == math.factorial(m) for m in range(1, self.size + 1))


def sector_sizes(n):
    """Expected solution counts per sector l = 2..n-2."""
    return {l: _eulerian(n - 3, l - 2) for l in range(2, n - 1)}


def d_recursion_holds(n):
    """D(n,l) = (l-1) D(n-1,l) + (n-l-1) D(n-1,l-1) with D(n,l) = A(n-3, l-2)."""
    def d(m, l):
        return _eulerian(m - 3, l - 2)
    return all(
        d(n, l) == (l - 1) * d(n - 1, l) + (n - l - 1) * d(n - 1, l - 1)
        for l in range(2, n - 1)
    )


# ═══════════════════════════════════════════════════════
# Exact residuals and the T(z) criterion
# ═══════════════════════════════════════════════════════

def _check_distinct(x):
    for i, j in itertools.combinations(range(len(x)), 2):
        if x[i] == x[j]:
            raise DomainError(f'Coincident points x{i + 1} = x{j + 1}')


def residuals_k2(s, x):
    """sum_j s_ij / (x_i - x_j) for i = 1..n, all points finite."""
    if s.k != 2 or len(x) != s.n:
        raise DomainError(f'residuals_k2 needs a k = 2 tensor and {s.n} points')
    x = [v if isinstance(v, complex) else to_rational(v) for v in x]
    _check_distinct(x)
    return [
        sum((s[i + 1, j + 1] / (x[i] - x[j]) for j in range(s.n) if j != i), Fraction(0))
        for i in range(s.n)
    ]


def t_numerator(s, x):
    """Numerator of T(z) = sum s_ij / ((z - x_i)(z - x_j)) over the common denominator prod (z - x_m)."""
    x = [to_rational(v) for v in x]
    _check_distinct(x)
    total = UnivariatePolynomial()
    for i, j in itertools.combinations(range(s.n), 2):
        others = [x[m] for m in range(s.n) if m not in (i, j)]
        total = total + UnivariatePolynomial.from_roots(others) * s[i + 1, j + 1]
    return total


def t_function_check(s, x):
    return t_numerator(s, x).is_zero()


# ═══════════════════════════════════════════════════════
# Log potentials
# ═══════════════════════════════════════════════════════

class CompiledPolynomial:
    """A SparsePolynomial evaluated on batches of complex points."""

    def __init__(self, polynomial):
        terms = list(polynomial.terms.items())
        self.coefficients = np.array([complex(c) for _, c in terms], dtype=np.complex128)
        self.exponents = np.array([e for e, _ in terms], dtype=np.int64).reshape(len(terms), len(polynomial.ring))
        self.max_degree = int(self.exponents.max()) if terms else 0

    def __call__(self, points):
        batch, width = points.shape
        if not len(self.coefficients):
            return np.zeros(batch, dtype=np.complex128)
        table = np.ones((batch, width, self.max_degree + 1), dtype=np.complex128)
        for d in range(1, self.max_degree + 1):
            table[:, :, d] = table[:, :, d - 1] * points
        monomials = np.prod(table[:, np.arange(width)[None, :], self.exponents], axis=2)
        return monomials @ self.coefficients


class LogPotential:
    """sum over terms (label, s, p) of s * log p; constant p are dropped."""

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = [(label, value, p) for label, value, p in terms if p.degree() > 0]
        self.variables = ring.variables

    # -- exact -------------------------------------------------------------

    def gradient(self, values):
        """Exact gradient in ring-variable order; DomainError on a vanishing divisor."""
        assignment = dict(zip(self.variables, values))
        denominators = []
        for label, _, p in self.terms:
            value = p.evaluate(assignment)
            if value == 0:
                raise DomainError(f'Boundary divisor {p.to_text()} vanishes at this point')
            denominators.append(value)
        return [
            sum(
                (s * p.derivative(v).evaluate(assignment) / d for (_, s, p), d in zip(self.terms, denominators)),
                Fraction(0),
            )
            for v in self.variables
        ]

    # -- numeric -----------------------------------------------------------

    @cached_property
    def _compiled(self):
        compiled = []
        for _, s, p in self.terms:
            first = [p.derivative(v) for v in self.variables]
            second = [[d.derivative(w) for w in self.variables] for d in first]
            compiled.append((
                CompiledPolynomial(p),
                [CompiledPolynomial(d) for d in first],
                [[CompiledPolynomial(d) for d in row] for row in second],
            ))
        return compiled

    def weights(self, scale):
        return [complex(s) / scale for _, s, _ in self.terms]

    def residual(self, points, weights):
        batch, width = points.shape
        total = np.zeros((batch, width), dtype=np.complex128)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            for weight, (p, first, _) in zip(weights, self._compiled):
                values = p(points)
                for a in range(width):
                    total[:, a] += weight * first[a](points) / values
        return total

    def system(self, points, weights):
        """Residuals (gradient) and Jacobian (Hessian) on a batch."""
        batch, width = points.shape
        gradient = np.zeros((batch, width), dtype=np.complex128)
        hessian = np.zeros((batch, width, width), dtype=np.complex128)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            for weight, (p, first, second) in zip(weights, self._compiled):
                values = p(points)
                slopes = [d(points) / values for d in first]
                for a in range(width):
                    gradient[:, a] += weight * slopes[a]
                    for b in range(width):
                        hessian[:, a, b] += weight * (second[a][b](points) / values - slopes[a] * slopes[b])
        return gradient, hessian


def _k2_ring(n):
    return PolynomialRing([f'x{i}' for i in range(3, n)])


def k2_potential(s):
    ring = _k2_ring(s.n)

    def node(i):
        if i == 1:
            return ring.constant(0)
        if i == 2:
            return ring.constant(1)
        return ring.variable(f'x{i}')

    terms = [
        (f'x{j}-x{i}', s[i, j], node(j) - node(i))
        for i, j in itertools.combinations(range(1, s.n), 2)
    ]
    return LogPotential(ring, terms)


@lru_cache(maxsize=None)
def chart_36():
    ring = PolynomialRing(VARIABLES_36)
    one, zero = ring.constant(1), ring.zero()
    x, y, z, w = (ring.variable(v) for v in DISPLAY_36)
    rows = [
        [one, zero, zero, one, one, one],
        [zero, one, zero, one, x, y],
        [zero, zero, one, one, z, w],
    ]
    minors = {
        I: leibniz_determinant([[row[i - 1] for i in I] for row in rows], zero, one)
        for I in k_subsets(6, 3)
    }
    return ring, minors


def potential_36(s):
    ring, minors = chart_36()
    return LogPotential(ring, [(str(I), s[I], p) for I, p in minors.items()])


def residuals_36(s, point):
    """(dw, dx, dy, dz) of L_s at (x, y, z, w), exactly."""
    if (s.k, s.n) != (3, 6):
        raise DomainError('residuals_36 needs a (3,6) Mandelstam tensor')
    values = dict(zip(DISPLAY_36, (to_rational(v) for v in point)))
    return potential_36(s).gradient([values[v] for v in VARIABLES_36])


def boundary_divisors_36():
    _, minors = chart_36()
    return [p for p in minors.values() if p.degree() > 0]


# ═══════════════════════════════════════════════════════
# Problems and solutions
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class ScatteringSolution:
    coordinates: dict
    residual_norm: float
    sector: Optional[int] = None
    multiplicity_flag: bool = False

    def to_json(self):
        return {
            'coordinates': {name: encode_complex(v) for name, v in self.coordinates.items()},
            'residual_norm': self.residual_norm,
            'sector': self.sector,
            'multiplicity_flag': self.multiplicity_flag,
        }


@dataclass(frozen=True)
class SolveResult:
    solutions: list
    expected: int
    starts: int
    partial: bool

    def to_json(self):
        return {
            'expected': self.expected,
            'found': len(self.solutions),
            'starts': self.starts,
            'partial': self.partial,
            'solutions': [solution.to_json() for solution in self.solutions],
        }


@dataclass(frozen=True)
class ScatteringProblem:
    k: int
    n: int
    mandelstam: MandelstamTensor
    gauge: str = ''

    def __post_init__(self):
        if not ((self.k == 2 and self.n >= 4) or (self.k, self.n) == (3, 6)):
            raise DomainError(f'Scattering equations are supported for k = 2 and (3,6), got ({self.k},{self.n})')
        if (self.mandelstam.k, self.mandelstam.n) != (self.k, self.n):
            raise DomainError('Mandelstam tensor shape does not match the problem')
        self._check_momentum()
        if not self.gauge:
            gauge = f'x1=0, x2=1, x{self.n}=inf' if self.k == 2 else 'columns 1-3 identity, column 4 all ones'
            object.__setattr__(self, 'gauge', gauge)

    def _check_momentum(self):
        assignment = self.mandelstam.as_assignment()
        size = max(abs(v) for _, v in self.mandelstam.items()) or 1
        for form in momentum_forms(self.k, self.n, self.k - 2):
            value = form.evaluate(assignment)
            if self.mandelstam.numeric:
                if abs(value) > 1e-12 * size * len(form):
                    raise DomainError(f'Momentum conservation fails: {form.to_text()} = {value}')
            elif value != 0:
                raise DomainError(f'Momentum conservation fails: {form.to_text()} = {format_rational(value)}')

    @classmethod
    def from_point(cls, point):
        return cls(point.k, point.n, hadamard(point))

    @cached_property
    def potential(self):
        if self.k == 2:
            return k2_potential(self.mandelstam)
        return potential_36(self.mandelstam)

    @property
    def display_order(self):
        return DISPLAY_36 if self.k == 3 else self.potential.variables

    @property
    def expected_count(self):
        return math.factorial(self.n - 3) if self.k == 2 else COUNT_36


# ═══════════════════════════════════════════════════════
# Multi-start damped Newton
# ═══════════════════════════════════════════════════════

def scaled_norm(points, gradient):
    """
    max_a |dL/dx_a| (1 + |x_a|). Each log term is affine in every chart
    coordinate, so this stays bounded away from zero along a run to infinity
    while the plain gradient decays like 1/|x|.
    """
    norms = np.max(np.abs(gradient) * (1 + np.abs(points)), axis=1)
    return np.nan_to_num(norms, nan=np.inf)


def _random_starts(rng, count, width, radius=3.0):
    modulus = radius * np.sqrt(rng.random((count, width)))
    angle = 2 * np.pi * rng.random((count, width))
    return modulus * np.exp(1j * angle)


def newton(potential, weights, starts, tol, max_iterations, max_halvings, escape=None):
    """
    Returns (converged points, their scaled residual norms). Iterates that
    leave the ball of radius `escape` are dropped as divergent.
    """
    escape = settings.SHV_NEWTON_ESCAPE_RADIUS if escape is None else escape
    points = starts.copy()
    active = np.ones(len(points), dtype=bool)
    converged = np.zeros(len(points), dtype=bool)
    for _ in range(max_iterations):
        index = np.flatnonzero(active)
        if not index.size:
            break
        gradient, hessian = potential.system(points[index], weights)
        norms = scaled_norm(points[index], gradient)
        finite = np.isfinite(norms) & np.all(np.isfinite(hessian), axis=(1, 2))
        bounded = np.max(np.abs(points[index]), axis=1) <= escape
        done = finite & bounded & (norms < tol)
        converged[index[done]] = True
        active[index[done | ~finite | ~bounded]] = False
        keep = finite & bounded & ~done
        index, gradient, hessian, norms = index[keep], gradient[keep], hessian[keep], norms[keep]
        if not index.size:
            break
        delta = -(np.linalg.pinv(hessian) @ gradient[..., None])[..., 0]
        current = points[index]
        step = np.ones(len(index))
        accepted = np.zeros(len(index), dtype=bool)
        for _ in range(max_halvings):
            pending = np.flatnonzero(~accepted)
            trial = current[pending] + step[pending, None] * delta[pending]
            better = scaled_norm(trial, potential.residual(trial, weights)) < norms[pending]
            current[pending[better]] = trial[better]
            accepted[pending[better]] = True
            step[pending[~better]] /= 2
            if accepted.all():
                break
        points[index] = current
        active[index[~accepted]] = False
    roots = points[converged]
    final = scaled_norm(roots, potential.residual(roots, weights)) if converged.any() else np.array([])
    return roots, final


def _distance(a, b):
    return float(np.max(np.abs(a - b)) / (1 + np.max(np.abs(b))))


def deduplicate(points, norms, radius):
    """Greedy clustering in canonical order; returns (points, norms, ambiguity flags)."""
    order = sorted(
        range(len(points)),
        key=lambda i: tuple(v for c in points[i] for v in (round(c.real, 8), round(c.imag, 8))),
    )
    kept, kept_norms = [], []
    for i in order:
        if all(_distance(points[i], p) >= radius for p in kept):
            kept.append(points[i])
            kept_norms.append(float(norms[i]))
    flags = [
        any(0 < _distance(p, q) < 1e3 * radius for q in kept if q is not p)
        for p in kept
    ]
    return kept, kept_norms, flags


def solve(problem, budget=None, seed=None, tol=None):
    """Multi-start Newton in rounds until the expected count is reached or the budget runs out."""
    seed = settings.SHV_SEED if seed is None else seed
    tol = settings.SHV_NEWTON_TOL if tol is None else tol
    expected = problem.expected_count
    budget = budget or settings.SHV_NEWTON_STARTS_FACTOR * expected
    potential = problem.potential
    width = len(potential.variables)
    scale = max(abs(v) for _, v in problem.mandelstam.items())
    weights = potential.weights(scale)
    rng = np.random.default_rng(seed)
    round_size = max(1, math.ceil(budget / 4))
    found = np.zeros((0, width), dtype=np.complex128)
    found_norms = np.zeros(0)
    used = 0
    points, norms, flags = [], [], []
    while used < budget:
        count = min(round_size, budget - used)
        starts = _random_starts(rng, count, width)
        roots, root_norms = newton(
            potential, weights, starts, tol,
            settings.SHV_NEWTON_MAX_ITERATIONS, settings.SHV_NEWTON_MAX_HALVINGS,
        )
        used += count
        found = np.vstack([found, roots])
        found_norms = np.concatenate([found_norms, root_norms])
        points, norms, flags = deduplicate(list(found), found_norms, settings.SHV_DEDUP_RADIUS)
        logger.info(f'solve ({problem.k},{problem.n}): {len(points)}/{expected} after {used} starts')
        if len(points) >= expected:
            break
    partial = len(points) < expected
    if partial:
        logger.warning(f'solve ({problem.k},{problem.n}): budget exhausted with {len(points)}/{expected} solutions')
    solutions = []
    for point, norm, flag in zip(points, norms, flags):
        coordinates = dict(zip(potential.variables, (complex(v) for v in point)))
        solutions.append(ScatteringSolution(
            {name: coordinates[name] for name in problem.display_order}, norm, multiplicity_flag=flag,
        ))
    return SolveResult(solutions, expected, used, partial)


# ═══════════════════════════════════════════════════════
# Sectors for k = 2
# ═══════════════════════════════════════════════════════

def _polynomial_values(coefficients, x):
    return sum((to_rational(c) * x ** p for p, c in enumerate(coefficients)), Fraction(0))


def sector_construct_k2(l, tau, tau_tilde, x):
    """
    Kinematic point of sector l: lambda columns tau(x_i), lambda_tilde
    columns tau_tilde(x_i) / prod_{j != i} (x_i - x_j). The nodes x are
    then an exact solution for its Mandelstam tensor.
    """
    x = [to_rational(v) for v in x]
    n = len(x)
    if not 2 <= l <= n - 2:
        raise DomainError(f'Sector l must lie in 2..{n - 2}, got {l}')
    if len(tau) != 2 or any(len(c) != l for c in tau):
        raise DomainError(f'tau needs two coefficient lists of length {l}')
    if len(tau_tilde) != 2 or any(len(c) != n - l for c in tau_tilde):
        raise DomainError(f'tau_tilde needs two coefficient lists of length {n - l}')
    _check_distinct(x)
    weights = [
        1 / math.prod((x[i] - x[j] for j in range(n) if j != i), start=Fraction(1))
        for i in range(n)
    ]
    lambda_ = RationalMatrix.from_rows([[_polynomial_values(c, v) for v in x] for c in tau])
    lambda_tilde = RationalMatrix.from_rows([
        [_polynomial_values(c, v) * weight for v, weight in zip(x, weights)] for c in tau_tilde
    ])
    return KinematicPoint(lambda_, lambda_tilde), tuple(x)


def random_sector_instance(n, l, seed=0):
    rng = np.random.default_rng(seed)
    for attempt in range(settings.SHV_RESAMPLE_CAP):
        tau = [[int(v) for v in rng.integers(-9, 10, size=l)] for _ in range(2)]
        tau_tilde = [[int(v) for v in rng.integers(-9, 10, size=n - l)] for _ in range(2)]
        x = [Fraction(int(v)) for v in rng.choice(np.arange(-20, 21), size=n, replace=False)]
        try:
            point, nodes = sector_construct_k2(l, tau, tau_tilde, x)
        except DomainError:
            logger.warning(f'sector instance n={n} l={l} seed {seed}: rank drop, resampling ({attempt})')
            continue
        if all(v != 0 for _, v in hadamard(point).items()):
            return point, nodes
    raise DomainError(f'No sector-{l} instance for n={n} within the resample cap')


def gauge_k2(x):
    """Move finite nodes to the chart x1 = 0, x2 = 1, xn = infinity (cross-ratios)."""
    x = [to_rational(v) for v in x]
    _check_distinct(x)
    a, b, c = x[0], x[1], x[-1]
    return {f'x{i + 1}': (x[i] - a) * (b - c) / ((x[i] - c) * (b - a)) for i in range(2, len(x) - 1)}


def homogeneous_nodes(solution, n):
    """Nodes as points (a : b) of P^1 for a gauge-fixed solution or a list of n finite values."""
    if isinstance(solution, ScatteringSolution):
        middle = [(complex(solution.coordinates[f'x{i}']), 1) for i in range(3, n)]
        return np.array([(0, 1), (1, 1)] + middle + [(1, 0)], dtype=np.complex128)
    if len(solution) != n:
        raise DomainError(f'Expected {n} nodes')
    return np.array([(complex(v), 1) for v in solution], dtype=np.complex128)


def _homogeneous_veronese(nodes, degree):
    a, b = nodes[:, 0:1], nodes[:, 1:2]
    return np.hstack([a ** (degree - p) * b ** p for p in range(degree + 1)])


def _parallel_to_curve(columns, nodes, degree, tol):
    """Whether the points columns_i lie on some tau(nodes_i) with tau of the given degree."""
    veronese = _homogeneous_veronese(nodes, degree)
    matrix = np.hstack([columns[1][:, None] * veronese, -columns[0][:, None] * veronese])
    # row scaling leaves the rank alone
    matrix = matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
    singular = np.linalg.svd(matrix, compute_uv=False)
    return singular[-1] <= tol * singular[0]


def _curve_degree(columns, nodes, tol):
    """
    Smallest d with 2(d + 1) <= n for which the columns follow a degree-d
    curve, or None. Above that range n points always fit, so nothing is learned.
    """
    for degree in range(1, len(nodes) // 2):
        if _parallel_to_curve(columns, nodes, degree, tol):
            return degree
    return None


def _random_unitary(rng):
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def sector_classify_k2(solution, point, tol=None, seed=None):
    """
    The l for which lambda follows a degree l-1 curve and lambda_tilde a
    degree n-l-1 curve. The two degrees add to n-2, so at least one of them
    is small enough to be detected; when both are, they must agree.
    """
    tol = settings.SHV_RANK_TOL if tol is None else tol
    seed = settings.SHV_SEED if seed is None else seed
    n = point.n
    if point.k != 2:
        raise DomainError('Sector classification needs k = 2')
    frame = _random_unitary(np.random.default_rng(seed))
    nodes = homogeneous_nodes(solution, n) @ frame.T
    nodes /= np.linalg.norm(nodes, axis=1, keepdims=True)
    lambda_ = point.lambda_.to_numpy()
    lambda_tilde = point.lambda_tilde.to_numpy()
    degree = _curve_degree(lambda_, nodes, tol)
    degree_tilde = _curve_degree(lambda_tilde, nodes, tol)
    passing = set()
    if degree is not None:
        passing.add(degree + 1)
    if degree_tilde is not None:
        passing.add(n - 1 - degree_tilde)
    if len(passing) != 1:
        raise ClassificationError(
            f'Curve degrees ({degree}, {degree_tilde}) give l in {sorted(passing)}, expected exactly one'
        )
    return passing.pop()


def classify_solutions(result, point, tol=None):
    classified = [
        ScatteringSolution(s.coordinates, s.residual_norm, sector_classify_k2(s, point, tol), s.multiplicity_flag)
        for s in result.solutions
    ]
    sizes = Counter(s.sector for s in classified)
    return SolveResult(classified, result.expected, result.starts, result.partial), dict(sorted(sizes.items()))


# ═══════════════════════════════════════════════════════
# Tautological solutions for (3,6)
# ═══════════════════════════════════════════════════════

def veronese_conic(matrix):
    """2 x n configuration -> 3 x n on the conic (u^2, uv, v^2)."""
    if matrix.rows != 2:
        raise DomainError('The conic embedding needs a 2-row configuration')
    u, v = matrix.row(0), matrix.row(1)
    return RationalMatrix.from_rows([
        [a * a for a in u],
        [a * b for a, b in zip(u, v)],
        [b * b for b in v],
    ])


def gauge_fix_36(matrix):
    """(x, y, z, w) of a 3 x 6 configuration in the chart with columns 1-3 = identity, column 4 = ones."""
    if (matrix.rows, matrix.cols) != (3, 6):
        raise DomainError('gauge_fix_36 needs a 3 x 6 configuration')
    reduced, pivots = matrix.rref()
    if pivots != (0, 1, 2):
        raise DomainError('Columns 1-3 of the configuration are dependent')
    fourth = reduced.column(3)
    if any(v == 0 for v in fourth):
        raise DomainError('Column 4 has a zero coordinate in this frame')
    fifth = [reduced[i, 4] / fourth[i] for i in range(3)]
    sixth = [reduced[i, 5] / fourth[i] for i in range(3)]
    if fifth[0] == 0 or sixth[0] == 0:
        raise DomainError('Columns 5 or 6 cannot be normalized')
    return fifth[1] / fifth[0], sixth[1] / sixth[0], fifth[2] / fifth[0], sixth[2] / sixth[0]


def tautological_solutions_36(point):
    """The four moduli points V, W, nu(V ∩ W⊥), nu(V⊥ ∩ W), each an exact solution."""
    if (point.k, point.n) != (3, 6) or not point.lies_on(1):
        raise DomainError('Tautological solutions need a point on SH(3,6,1)')
    v_part, w_part = intersection_pair(point)
    if v_part.rows != 2 or w_part.rows != 2:
        raise DomainError('Point is not generic on SH(3,6,1)')
    configurations = {
        'V': point.lambda_,
        'W': point.lambda_tilde,
        'nu(V∩W⊥)': veronese_conic(v_part),
        'nu(V⊥∩W)': veronese_conic(w_part),
    }
    s = hadamard(point)
    solutions = {}
    for label, configuration in configurations.items():
        solution = gauge_fix_36(configuration)
        residual = residuals_36(s, solution)
        if any(residual):
            raise CheckFailure(f'tautological {label}', 'zero residuals', [format_rational(v) for v in residual])
        solutions[label] = solution
    logger.info(f'tautological solutions: {len(set(solutions.values()))} distinct')
    return solutions
