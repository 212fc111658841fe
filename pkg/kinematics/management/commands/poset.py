"""
Management command for the glued poset P(k,n,r).
Run: shv poset --k 2 --n 6 --r 0 --emit bidegree
     shv poset --k 3 --n 7 --r 1
     shv poset --k 2 --n 5 --emit pairs --format text
"""

from services.poset_service import GluedPoset, hook_content_count

from ._base import ShvCommand

EMITS = ['elements', 'pairs', 'covers', 'bidegree']


def pair_texts(pairs):
    return [[str(a), str(b)] for a, b in pairs]


class Command(ShvCommand):
    help = 'Elements, incomparable pairs, covering relations, bidegree and maximal chains of P(k,n,r)'

    def add_command_arguments(self, parser):
        self.add_knr_arguments(parser)
        parser.add_argument(
            '--emit',
            choices=EMITS,
            default=None,
            help='Output only this part. Default: the full object.',
        )

    def run(self, config, options):
        config.validate_knr()
        poset = GluedPoset(config.k, config.n, config.r)
        emit = options['emit']
        payload = {'k': config.k, 'n': config.n, 'r': config.r}

        if emit in (None, 'elements'):
            payload['elements'] = [str(b) for b in poset.elements()]
        if emit in (None, 'pairs'):
            aa, ss, mixed = poset.incomparable_pairs()
            payload['incomparable'] = {'aa': pair_texts(aa), 'ss': pair_texts(ss), 'mixed': pair_texts(mixed)}
        if emit in (None, 'covers'):
            payload['covers'] = pair_texts(poset.covering_relations())
        if emit in (None, 'bidegree'):
            bidegree = poset.bidegree()
            # big integers as strings
            payload['bidegree'] = [{'s': i, 't': j, 'c': str(c)} for i, j, c in bidegree.coefficients()]
            payload['total_chains'] = str(poset.total_maximal_chains())
        if emit is None:
            prefactor, _ = bidegree.factor_common()
            incomparable = payload['incomparable']
            payload['summary'] = {
                'size': poset.size,
                'dimension': poset.dimension(),
                'incomparable': {kind: len(pairs) for kind, pairs in incomparable.items()},
                'hook_content': hook_content_count(config.k, config.n),
                'prefactor': prefactor,
                'palindromic': bidegree.is_palindromic(),
            }

        return payload
