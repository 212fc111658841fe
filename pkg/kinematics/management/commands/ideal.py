"""
Management command for the generators of the spinor-helicity ideal I(k,n,r).
Run: shv ideal --k 2 --n 5 --r 0
     shv ideal --k 3 --n 7 --r 1 --family mixed --verify --samples 20
     shv ideal --k 4 --n 5 --r 1 --family pq
"""

from services.ideal_service import (
    GeneratorSuiteService, generator_suite, pq_product_entries, term_order_key,
)
from services.poset_service import GluedPoset

from ._base import ShvCommand

FAMILIES = ['plucker', 'mixed', 'pq', 'toric', 'all']


def as_text(polynomials):
    return [polynomial.to_text(term_order_key) for polynomial in polynomials]


class Command(ShvCommand):
    help = 'Plücker and mixed quadrics, PQ^T forms and toric binomials of I(k,n,r)'

    def add_command_arguments(self, parser):
        self.add_knr_arguments(parser)
        parser.add_argument('--family', choices=FAMILIES, default='all', help='Which polynomials to list. Default: all.')
        parser.add_argument(
            '--verify',
            action='store_true',
            help='Check every generator vanishes on sampled points of SH(k,n,r) (exit 3 on failure).',
        )
        parser.add_argument('--samples', type=int, default=None, help='Sample count for --verify.')

    def run(self, config, options):
        k, n, r = config.k, config.n, config.r
        family = options['family']
        payload = {'k': k, 'n': n, 'r': r}

        # PQ^T is defined for every 0 <= r <= k <= n, the poset families only inside its range
        if family != 'pq' or options['verify']:
            config.validate_knr()

        if family in ('plucker', 'mixed', 'all') or options['verify']:
            suite = generator_suite(k, n, r, verify=options['verify'], samples=options['samples'], seed=config.seed)
            payload['counts'] = suite.counts()
            if options['verify']:
                payload['verified'] = True
            if family in ('plucker', 'all'):
                payload['plucker'] = as_text(suite.plucker_angle + suite.plucker_square)
            if family in ('mixed', 'all'):
                payload['mixed'] = as_text(suite.mixed)

        if family in ('pq', 'all'):
            payload['pq'] = as_text(pq_product_entries(k, n, r))
        if family in ('toric', 'all'):
            payload['toric'] = as_text(GeneratorSuiteService.toric_binomials(GluedPoset(k, n, r)))

        return payload
