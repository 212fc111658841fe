"""
Management command for tropical Mandelstam vectors.
Run: shv trop --k 2 --n 5 --r 0 --samples 10
     shv trop --k 2 --n 5 --check-m250 vector.json
     shv trop --k 3 --n 6 --r 1 --valuation
     shv trop --k 2 --n 5 --positive 20
     shv trop --k 2 --n 5 --circuits
"""

from services.errors import DomainError
from services.serialization import load_tropical_vector
from services.tropical_service import (
    circuits_m250, positive_family_exponents, positive_trop_check_m250,
    positive_tropical_equations_m250, trop_mandelstam_sample, tropical_basis_check_m250,
    valuation_sample, vandermonde_family_valuation,
)

from ._base import ShvCommand


class Command(ShvCommand):
    help = 'Tropical Mandelstam samples, the M(2,5,0) tropical basis and positive equations, and R10 circuits'

    def add_command_arguments(self, parser):
        self.add_knr_arguments(parser)
        parser.add_argument('--samples', type=int, default=1, help='Number of samples (seeds seed..seed+N-1).')
        parser.add_argument(
            '--check-m250',
            default=None,
            metavar='FILE',
            help='Run the basis and positive checks on a (2,5) tropical vector file (exit 3 on failure).',
        )
        parser.add_argument('--valuation', action='store_true', help='Use exact t-adic valuations instead of tropical minors.')
        parser.add_argument('--positive', type=int, default=0, metavar='N', help='N valuations of positive families (k=2, n=5).')
        parser.add_argument('--circuits', action='store_true', help='List the circuits of R10 (k=2, n=5).')

    def run(self, config, options):
        config.validate_knr()
        k, n, r = config.k, config.n, config.r
        m250 = (k, n, r) == (2, 5, 0)
        payload = {'k': k, 'n': n, 'r': r}

        if options['circuits'] or options['positive'] or options['check_m250']:
            if (k, n) != (2, 5):
                raise DomainError('--circuits, --positive and --check-m250 are defined for k = 2, n = 5')

        if options['check_m250']:
            v = load_tropical_vector(options['check_m250'])
            payload['check_m250'] = {
                'vector': v.to_json(),
                'basis_check': tropical_basis_check_m250(v).to_json(),
                'positive_check': positive_trop_check_m250(v).to_json(),
            }
            return payload

        if options['circuits']:
            circuits = circuits_m250()
            payload['circuits'] = {
                'count': len(circuits),
                'sizes': sorted({len(c) for c in circuits}),
                'supports': [[f's[{i},{j}]' for i, j in c] for c in circuits],
            }
            return payload

        if options['positive']:
            samples = []
            for offset in range(options['positive']):
                exponents = positive_family_exponents(5, config.seed + offset)
                v = vandermonde_family_valuation(2, 5, exponents)
                samples.append({
                    'exponents': exponents,
                    'vector': v.to_json(),
                    'positive_check': positive_trop_check_m250(v).to_json(),
                })
            payload['equations'] = [e.to_text() for e in positive_tropical_equations_m250()]
            payload['samples'] = samples
            return payload

        samples = []
        for offset in range(options['samples']):
            seed = config.seed + offset
            if options['valuation']:
                v = valuation_sample(k, n, r, seed)
            else:
                v = trop_mandelstam_sample(k, n, r, seed)
            entry = {'seed': seed, 'vector': v.to_json()}
            if m250:
                entry['basis_check'] = tropical_basis_check_m250(v).to_json()
            samples.append(entry)
        payload['samples'] = samples
        return payload

    def failure(self, payload):
        report = payload.get('check_m250')
        if report is None:
            return None
        failed = [name for name in ('basis_check', 'positive_check') if not report[name]['passed']]
        if failed:
            return f'Tropical vector failed {" and ".join(failed)}'
        return None
