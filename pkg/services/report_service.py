"""
Report Service: regenerates every published number and structural claim as
a named check, runs the checks on a thread pool and collects them into one
table ordered by check id.

Each registered check returns (expected, computed) and passes when the two
are equal. An exception marks the check failed with the message as its
computed value.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from multiprocessing.pool import ThreadPool

from django.conf import settings

from services.algebra_service import RationalMatrix, rank
from services.errors import DomainError
from services.ideal_service import (
    coefficient_matrix, generator_suite, pq_matrices, pq_product_entries, same_span,
)
from services.mandelstam_service import (
    KinematicPoint, hadamard, has_positive_signs, induced_k2_tensor, marginal,
    membership_k2, momentum_forms, positive_polytope_vertices_m250, positive_sample,
    proportional, psi_sample, strictness_witness, strictness_witness_point,
)
from services.poset_service import GluedPoset
from services.scattering_service import (
    ScatteringProblem, classify_solutions, d_recursion_holds, eulerian,
    random_sector_instance, residuals_36, residuals_k2, sector_sizes, solve,
    t_function_check, tautological_solutions_36,
)
from services.serialization import encode_value
from services.tropical_service import (
    circuits_m250, positive_family_exponents, positive_trop_check_m250,
    trop_mandelstam_sample, tropical_basis_check_m250, tropical_basis_m250,
    vandermonde_family_valuation,
)

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════
# The worked (3,6,1) instance
# ═══════════════════════════════════════════════════════

WORKED_X_36 = (
    (4, 0, 7, 4, 9, 1),
    (1, 3, 7, 2, 8, 9),
    (1, 7, 9, 8, 0, 5),
    (6, 6, 2, 2, 4, 2),
)

WORKED_S_36 = {
    (1, 2, 3): 12000, (1, 2, 4): 6720, (1, 2, 5): 8272, (1, 2, 6): -31584,
    (1, 3, 4): -37760, (1, 3, 5): 54784, (1, 3, 6): -35728, (1, 4, 5): -38080,
    (1, 4, 6): 92208, (1, 5, 6): -30832, (2, 3, 4): -37920, (2, 3, 5): 68288,
    (2, 3, 6): -108016, (2, 4, 5): -82896, (2, 4, 6): 82416, (2, 5, 6): 82720,
    (3, 4, 5): 46592, (3, 4, 6): 57664, (3, 5, 6): -19904, (4, 5, 6): -88944,
}

WORKED_SOLUTIONS_36 = {
    'V': (Fraction(8453, 5723), Fraction(6083, 9263), Fraction(3713, 1358), Fraction(3713, 2198)),
    'W': (Fraction(6, 11), Fraction(87, 172), Fraction(-1, 4), Fraction(-42, 43)),
    'nu(V∩W⊥)': (Fraction(5, 21), Fraction(5, 36), Fraction(19, 27), Fraction(38, 69)),
    'nu(V⊥∩W)': (
        Fraction(6588, 14911), Fraction(20988, 9139), Fraction(-8601, 125060), Fraction(17437, 138528),
    ),
}


def worked_point_36():
    return KinematicPoint.from_parameter_matrix(RationalMatrix.from_rows(WORKED_X_36), 3, 1)


# ═══════════════════════════════════════════════════════
# Check registry
# ═══════════════════════════════════════════════════════

CHECKS = {}


def check(check_id):
    def register(func):
        CHECKS[check_id] = func
        return func
    return register


def _bidegree_coefficients(k, n, r):
    return [c for _, _, c in GluedPoset(k, n, r).bidegree().coefficients()]


@check('sh_2_5_0_generators')
def _sh_2_5_0_generators():
    return 35, len(generator_suite(2, 5, 0))


@check('sh_2_6_0_generators')
def _sh_2_6_0_generators():
    return 66, len(generator_suite(2, 6, 0))


@check('sh_3_7_1_generators')
def _sh_3_7_1_generators():
    counts = generator_suite(3, 7, 1).counts()
    return (140, 140, 49), (counts['aa'], counts['ss'], counts['mixed'])


@check('mixed_counts_formula')
def _mixed_counts_formula():
    mismatches = []
    for k in range(1, 5):
        for n in range(k, 10):
            for r in range(0, k + 1):
                if 2 * k > r + n:
                    continue
                expected = comb(n, k - r - 1) ** 2 if k - r - 1 >= 0 else 0
                found = len(GluedPoset(k, n, r).mixed_incomparable())
                if found != expected:
                    mismatches.append((k, n, r))
    return [], mismatches


@check('sh_2_5_0_bidegree')
def _sh_2_5_0_bidegree():
    return [5, 10, 12, 10, 5], _bidegree_coefficients(2, 5, 0)


@check('sh_2_6_0_bidegree')
def _sh_2_6_0_bidegree():
    return [28, 70, 90, 70, 28], _bidegree_coefficients(2, 6, 0)


@check('p_2_6_0_chains')
def _p_2_6_0_chains():
    poset = GluedPoset(2, 6, 0)
    return (286, 286), (poset.bidegree().coefficient_sum(), poset.total_maximal_chains())


@check('sh_3_7_1_bidegree')
def _sh_3_7_1_bidegree():
    return [25872, 77616, 105840, 77616, 25872], _bidegree_coefficients(3, 7, 1)


@check('p_3_7_1_chains')
def _p_3_7_1_chains():
    return 312816, GluedPoset(3, 7, 1).total_maximal_chains()


@check('sh_3_7_1_prefactor')
def _sh_3_7_1_prefactor():
    return 22, GluedPoset(3, 7, 1).bidegree().factor_common()[0]


def _kernel_check(k, n, r):
    def run():
        generator_suite(k, n, r, verify=True, samples=settings.SHV_VERIFY_SAMPLES)
        return True, True
    return run


for _k, _n, _r in ((2, 4, 0), (2, 4, 1), (2, 4, 2), (2, 5, 0), (2, 6, 0), (3, 6, 1), (3, 7, 1)):
    check(f'ideal_kernel_{_k}_{_n}_{_r}')(_kernel_check(_k, _n, _r))


@check('pq_4_5_1_shape')
def _pq_4_5_1_shape():
    P, Q = pq_matrices(4, 5, 1)
    return ((10, 10), (10, 10)), (P.shape, Q.shape)


def _pq_rank_check(k, n, r):
    def run():
        forms = pq_product_entries(k, n, r)
        mixed = generator_suite(k, n, r).mixed
        return (comb(n, k - r - 1) ** 2, True), (rank(coefficient_matrix(forms)), same_span(forms, mixed))
    return run


for _k, _n, _r in ((2, 5, 0), (2, 6, 0), (3, 6, 1)):
    check(f'pq_rank_{_k}_{_n}_{_r}')(_pq_rank_check(_k, _n, _r))


@check('mandelstam_3_6_1_table')
def _mandelstam_3_6_1_table():
    s = hadamard(worked_point_36())
    return 20, sum(1 for I, v in WORKED_S_36.items() if s[I] == v)


@check('momentum_forms_samples')
def _momentum_forms_samples():
    failures = []
    for k in range(2, 5):
        for r in range(k):
            for n in range(2 * k - r, 9):
                s = hadamard(psi_sample(k, n, r, seed=settings.SHV_SEED))
                assignment = s.as_assignment()
                if any(form.evaluate(assignment) != 0 for form in momentum_forms(k, n, r)):
                    failures.append((k, n, r))
    return [], failures


@check('membership_k2_samples')
def _membership_k2_samples():
    failures = []
    for n in range(5, 8):
        for r in range(3):
            for seed in range(3):
                report = membership_k2(hadamard(psi_sample(2, n, r, seed=seed)), r)
                if not report.member:
                    failures.append((n, r, seed, report.violated))
    return [], failures


@check('marginal_3_6_1')
def _marginal_3_6_1():
    point = psi_sample(3, 6, 1, seed=settings.SHV_SEED)
    matrix = marginal(hadamard(point))
    induced = marginal(induced_k2_tensor(point))
    return (4, True), (rank(matrix), proportional(matrix.entries, induced.entries))


@check('positive_2_5_signs')
def _positive_2_5_signs():
    return True, has_positive_signs(hadamard(positive_sample(2, 5, seed=settings.SHV_SEED)))


@check('positive_2_5_vertices')
def _positive_2_5_vertices():
    return [True] * 6, [membership_k2(v, 0).member for v in positive_polytope_vertices_m250()]


@check('strictness_witness')
def _strictness_witness():
    return True, strictness_witness(strictness_witness_point(settings.SHV_SEED)) < 0


@check('trop_circuits')
def _trop_circuits():
    circuits = circuits_m250()
    supports = {form.support for form in tropical_basis_m250()}
    return (30, 15), (len(circuits), sum(1 for c in circuits if c in supports))


@check('trop_basis_samples')
def _trop_basis_samples():
    return 50, sum(
        1 for seed in range(50) if tropical_basis_check_m250(trop_mandelstam_sample(2, 5, 0, seed)).passed
    )


@check('trop_positive_samples')
def _trop_positive_samples():
    return 20, sum(
        1 for seed in range(20)
        if positive_trop_check_m250(vandermonde_family_valuation(2, 5, positive_family_exponents(5, seed))).passed
    )


@check('scatter_3_6_residuals')
def _scatter_3_6_residuals():
    s = hadamard(worked_point_36())
    return 4, sum(1 for solution in WORKED_SOLUTIONS_36.values() if not any(residuals_36(s, solution)))


@check('scatter_3_6_tautological')
def _scatter_3_6_tautological():
    return WORKED_SOLUTIONS_36, tautological_solutions_36(worked_point_36())


@check('scatter_sector_certificates')
def _scatter_sector_certificates():
    failures = []
    for n in range(5, 9):
        for l in range(2, n - 1):
            for seed in range(5):
                point, x = random_sector_instance(n, l, seed)
                s = hadamard(point)
                if any(residuals_k2(s, x)) or not t_function_check(s, x):
                    failures.append((n, l, seed))
    return [], failures


@check('scatter_k2_counts')
def _scatter_k2_counts():
    expected, computed = {}, {}
    for n in range(5, 8):
        expected[n] = [(factorial(n - 3), sector_sizes(n))]
        observed = []
        for seed in range(settings.SHV_REPORT_SEEDS):
            point = psi_sample(2, n, 0, seed=seed)
            result = solve(ScatteringProblem.from_point(point), seed=seed)
            _, sizes = classify_solutions(result, point)
            outcome = (len(result.solutions), sizes)
            if outcome not in observed:
                observed.append(outcome)
        computed[n] = observed
    return expected, computed


@check('scatter_3_6_count')
def _scatter_3_6_count():
    return 26, len(solve(ScatteringProblem.from_point(worked_point_36())).solutions)


@check('scatter_3_6_random_counts')
def _scatter_3_6_random_counts():
    counts = [
        len(solve(ScatteringProblem.from_point(psi_sample(3, 6, 1, seed=seed)), seed=seed).solutions)
        for seed in range(5)
    ]
    return [26] * 5, counts


@check('eulerian_factorial_sums')
def _eulerian_factorial_sums():
    return [True] * 6, [sum(eulerian(n - 3, j) for j in range(n - 3)) == factorial(n - 3) for n in range(5, 11)]


@check('eulerian_d_recursion')
def _eulerian_d_recursion():
    return [True] * 6, [d_recursion_holds(n) for n in range(5, 11)]


# ═══════════════════════════════════════════════════════
# Running
# ═══════════════════════════════════════════════════════

@dataclass(frozen=True)
class CheckResult:
    check_id: str
    expected: object
    computed: object
    passed: bool

    def to_json(self):
        return {
            'expected': encode_value(self.expected),
            'computed': encode_value(self.computed),
            'passed': self.passed,
        }


@dataclass
class PaperReport:
    results: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(result.passed for result in self.results.values())

    def failures(self):
        return [check_id for check_id, result in self.results.items() if not result.passed]

    def to_json(self):
        return {check_id: self.results[check_id].to_json() for check_id in sorted(self.results)}


def run_check(check_id):
    try:
        expected, computed = CHECKS[check_id]()
    except Exception as e:
        logger.error(f'Check {check_id} raised: {e}')
        return CheckResult(check_id, None, f'error: {e}', False)
    passed = expected == computed
    if passed:
        logger.info(f'Check {check_id} passed')
    else:
        logger.error(f'Check {check_id}: expected {expected}, computed {computed}')
    return CheckResult(check_id, expected, computed, passed)


def select_checks(only=None):
    if not only:
        return sorted(CHECKS)
    unknown = [pattern for pattern in only if not any(c.startswith(pattern) for c in CHECKS)]
    if unknown:
        raise DomainError(f'No check matches {unknown[0]!r}')
    return sorted(c for c in CHECKS if any(c.startswith(pattern) for pattern in only))


def paper_report(only=None, threads=None):
    """Run every registered check (or those whose id starts with a prefix in `only`)."""
    check_ids = select_checks(only)
    with ThreadPool(threads or settings.SHV_THREADS) as pool:
        results = pool.map(run_check, check_ids)
    report = PaperReport({result.check_id: result for result in results})
    logger.info(f'Report: {len(check_ids) - len(report.failures())}/{len(check_ids)} checks passed')
    return report
