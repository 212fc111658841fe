"""
Management command for scattering equations on X(2,n) and X(3,6).
Run: shv scatter --k 2 --n 6 --solve --classify
     shv scatter --k 3 --n 6 --kinematics worked.json --tautological
     shv scatter --k 3 --n 6 --seed 4 --solve --budget 8000 --tol 1e-11
"""

from services.errors import DomainError
from services.mandelstam_service import KinematicPoint, hadamard, psi_sample
from services.scattering_service import (
    ScatteringProblem, classify_solutions, sector_sizes, solve, tautological_solutions_36,
)
from services.serialization import encode_tensor, load_kinematics

from ._base import ShvCommand


class Command(ShvCommand):
    help = 'Solve the scattering equations for k = 2 or (3,6), classify k = 2 sectors, list tautological solutions'

    def add_command_arguments(self, parser):
        self.add_knr_arguments(parser, r=False)
        parser.add_argument('--kinematics', default=None, metavar='FILE', help='Kinematics file (matrix pair or tensor map).')
        parser.add_argument('--solve', action='store_true', help='Run multi-start Newton.')
        parser.add_argument('--budget', type=int, default=None, help='Total Newton starts.')
        parser.add_argument('--tol', type=float, default=None, help='Residual tolerance.')
        parser.add_argument('--classify', action='store_true', help='Assign each k = 2 solution its sector l.')
        parser.add_argument('--tautological', action='store_true', help='The four exact (3,6) solutions.')

    def run(self, config, options):
        k, n = config.k, config.n
        r = 0 if k == 2 else 1
        if options['kinematics']:
            kinematics = load_kinematics(options['kinematics'])
        else:
            kinematics = psi_sample(k, n, r, config.seed)
        point = kinematics if isinstance(kinematics, KinematicPoint) else None
        s = hadamard(point) if point is not None else kinematics
        if (s.k, s.n) != (k, n):
            raise DomainError(f'Kinematics have shape ({s.k},{s.n}), expected ({k},{n})')
        if point is not None and not point.lies_on(r):
            raise DomainError(f'Kinematics do not lie on SH({k},{n},{r})')
        if (options['classify'] or options['tautological']) and point is None:
            raise DomainError('--classify and --tautological need a matrix pair, not a bare tensor')

        problem = ScatteringProblem(k, n, s)
        payload = {'k': k, 'n': n, 'gauge': problem.gauge, 'mandelstam': encode_tensor(s)}

        if options['tautological']:
            if (k, n) != (3, 6):
                raise DomainError('Tautological solutions are defined for (3,6)')
            payload['tautological'] = {
                label: dict(zip(('x', 'y', 'z', 'w'), solution))
                for label, solution in tautological_solutions_36(point).items()
            }

        if options['solve']:
            result = solve(problem, budget=options['budget'], seed=config.seed, tol=config.tolerances['newton'])
            if options['classify']:
                if k != 2:
                    raise DomainError('Sector classification is defined for k = 2')
                result, sizes = classify_solutions(result, point)
                payload['sectors'] = {'observed': sizes, 'expected': sector_sizes(n)}
            payload['solve'] = result.to_json()
            if result.partial:
                self.stderr.write(self.style.WARNING(
                    f'Budget exhausted: {len(result.solutions)}/{result.expected} solutions found'
                ))
        elif options['classify']:
            raise DomainError('--classify needs --solve')

        return payload
