"""
Management command for Mandelstam invariants of SH(k,n,r) points.
Run: shv mandelstam --k 3 --n 6 --r 1 --sample 2
     shv mandelstam --k 2 --n 5 --positive
     shv mandelstam --k 2 --n 6 --r 0 --check kinematics.json
     shv mandelstam --k 3 --n 7 --r 1 --emit dims
"""

import logging

from services.errors import DomainError
from services.mandelstam_service import (
    KinematicPoint, dims, hadamard, has_positive_signs, membership_k2, momentum_forms,
    positive_sample, psi_sample,
)
from services.serialization import encode_tensor, load_kinematics

from ._base import ShvCommand

logger = logging.getLogger(__name__)

EMITS = ['tensor', 'dims', 'forms']


class Command(ShvCommand):
    help = 'Sample Mandelstam tensors, list momentum forms and dimensions, or test membership in M(k,n,r)'

    def add_command_arguments(self, parser):
        self.add_knr_arguments(parser)
        parser.add_argument('--emit', choices=EMITS, default='tensor', help='What to output. Default: tensor.')
        parser.add_argument('--sample', type=int, default=1, help='Number of sampled tensors (seeds seed..seed+N-1).')
        parser.add_argument('--positive', action='store_true', help='Sample from the positive Vandermonde family.')
        parser.add_argument('--check', default=None, metavar='FILE', help='Kinematics file to test for membership.')

    def run(self, config, options):
        config.validate_knr()
        k, n, r = config.k, config.n, config.r
        payload = {'k': k, 'n': n, 'r': r}

        if options['emit'] == 'dims':
            dim_sh, dim_m, ambient = dims(k, n, r)
            payload['dims'] = {'SH': dim_sh, 'M': dim_m, 'ambient': ambient}
            return payload
        if options['emit'] == 'forms':
            payload['forms'] = [form.to_text() for form in momentum_forms(k, n, r)] if r < k else []
            return payload

        if options['check']:
            payload['membership'] = self.check_membership(load_kinematics(options['check']), k, n, r)
            return payload

        tensors = []
        for offset in range(options['sample']):
            seed = config.seed + offset
            if options['positive']:
                s = hadamard(positive_sample(k, n, seed))
                tensors.append({'seed': seed, 'positive_signs': has_positive_signs(s), 's': encode_tensor(s)})
            else:
                tensors.append({'seed': seed, 's': encode_tensor(hadamard(psi_sample(k, n, r, seed)))})
        payload['samples'] = tensors
        return payload

    @staticmethod
    def check_membership(kinematics, k, n, r):
        if isinstance(kinematics, KinematicPoint):
            if (kinematics.k, kinematics.n) != (k, n):
                raise DomainError(f'Kinematics file has shape ({kinematics.k},{kinematics.n}), expected ({k},{n})')
            s = hadamard(kinematics)
            result = {'on_SH': kinematics.lies_on(r), 'pairing_rank': kinematics.pairing_rank()}
        else:
            s = kinematics
            result = {}
        if (s.k, s.n) != (k, n):
            raise DomainError(f'Tensor has shape ({s.k},{s.n}), expected ({k},{n})')
        if k == 2:
            report = membership_k2(s, r)
            result.update(report.to_json())
            return result
        assignment = s.as_assignment()
        violated = next((f.to_text() for f in momentum_forms(k, n, r) if f.evaluate(assignment) != 0), None) if r < k else None
        logger.info(f'membership ({k},{n},{r}): only the linear forms are tested for k > 2')
        result.update({'linear_forms_hold': violated is None, 'violated': violated})
        return result
